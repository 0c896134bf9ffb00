//! Brute-force verification of the toolkit's standing claims at desk
//! scale: exhaustive where the space of instances is small, seeded random
//! sampling where it is not. Every case is deterministic for a fixed seed
//! and reports instance and failure counts rather than stopping early, so
//! a regression shows its blast radius.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use coarse_core::error::Result as CoreResult;
use coarse_core::hyper::{exp_relates, hausdorff_distance, ExtDist, FamilySelector, Hyperspace};
use coarse_core::maps::{bornotopic, classify_map, is_bornologous, Map};
use coarse_core::relation::{Entourage, Ground, GroundSet, PointSet};
use coarse_core::size::{classify, oracle_classify, SizeReport};
use coarse_core::space::CoarseSpace;

use crate::builders;

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub id: &'static str,
    pub instances: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn new(id: &'static str) -> Self {
        CaseResult {
            id,
            instances: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }
}

/// All partitions of `0..n`, as restricted growth strings.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=next {
            cur.push(v);
            rec(n, cur, next.max(v + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        rec(n, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// All subsets of a ground of at most 16 points.
pub fn all_subsets(g: &Ground) -> Vec<PointSet> {
    let n = g.size();
    assert!(n <= 16, "subset enumeration is desk-scale only");
    (0u32..1 << n)
        .map(|mask| {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            PointSet::from_indices(g, &members).unwrap()
        })
        .collect()
}

fn random_entourage(rng: &mut ChaCha8Rng, g: &Ground) -> Entourage {
    let n = g.size();
    let mut e = Entourage::empty(g);
    let pair_budget = rng.gen_range(0..=2 * n * n.max(1) / 3);
    for _ in 0..pair_budget {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        e.insert_pair(x, y).unwrap();
    }
    e
}

fn random_subset(rng: &mut ChaCha8Rng, g: &Ground) -> PointSet {
    let mut s = PointSet::empty(g);
    for i in 0..g.size() {
        if rng.gen_bool(0.5) {
            s.insert(i).unwrap();
        }
    }
    s
}

fn random_partition_space(rng: &mut ChaCha8Rng, n: usize) -> CoarseSpace {
    let g = GroundSet::bare(n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
    CoarseSpace::from_partition(&g, &labels).unwrap()
}

/// Closure and interior are complement-dual through inversion.
pub fn duality_case(seed: u64, max_ground: usize, instances: usize) -> CaseResult {
    let mut out = CaseResult::new(
        "closure-interior-duality:E[A]-equals-complement-of-inverse-interior-of-complement",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..instances {
        let n = rng.gen_range(1..=max_ground.max(1));
        let g = GroundSet::bare(n);
        let e = random_entourage(&mut rng, &g);
        let a = random_subset(&mut rng, &g);
        let lhs = e.closure(&a).unwrap();
        let rhs = e
            .invert()
            .interior(&a.complement())
            .unwrap()
            .complement();
        out.record(lhs == rhs, || format!("n={n}, A={a}"));
    }
    out
}

/// The eight saturation laws of galaxy and core at the maximum entourage.
pub fn gal_core_case(seed: u64, max_ground: usize, instances: usize) -> CaseResult {
    let mut out =
        CaseResult::new("galaxy-core-laws:saturation-idempotence-and-complement-duality");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..instances {
        let n = rng.gen_range(1..=max_ground.max(1));
        let c = random_partition_space(&mut rng, n);
        let a = random_subset(&mut rng, c.ground());
        let gal = c.gal(&a).unwrap();
        let core = c.core(&a).unwrap();
        let clauses = [
            a.is_subset(&gal).unwrap(),
            core.is_subset(&a).unwrap(),
            c.gal(&gal).unwrap() == gal,
            c.core(&core).unwrap() == core,
            c.gal(&core).unwrap() == core,
            c.core(&gal).unwrap() == gal,
            core.complement() == c.gal(&a.complement()).unwrap(),
            gal.complement() == c.core(&a.complement()).unwrap(),
        ];
        out.record(clauses.iter().all(|&ok| ok), || {
            format!("n={n}, A={a}, clauses={clauses:?}")
        });
    }
    out
}

fn quantifier_case(
    id: &'static str,
    check: impl Fn(&CoarseSpace, &PointSet, &[PointSet], &[PointSet]) -> (bool, bool),
) -> CaseResult {
    let mut out = CaseResult::new(id);
    for n in 1..=4usize {
        let g = GroundSet::bare(n);
        for labels in partitions(n) {
            let c = CoarseSpace::from_partition(&g, &labels).unwrap();
            let subsets = all_subsets(&g);
            let larges: Vec<PointSet> = subsets
                .iter()
                .filter(|s| classify(&c, s).unwrap().flags.large)
                .cloned()
                .collect();
            let meshies: Vec<PointSet> = subsets
                .iter()
                .filter(|s| classify(&c, s).unwrap().flags.meshy)
                .cloned()
                .collect();
            for a in &subsets {
                let (flag, quantified) = check(&c, a, &larges, &meshies);
                out.record(flag == quantified, || {
                    format!("partition {labels:?}, A={a}: flag {flag}, quantifier {quantified}")
                });
            }
        }
    }
    out
}

/// Thick subsets are exactly those meeting every large subset.
pub fn thick_quantifier_case() -> CaseResult {
    quantifier_case(
        "thick-meets-large:thick-iff-every-large-subset-meets-it",
        |c, a, larges, _| {
            let flag = classify(c, a).unwrap().flags.thick;
            let q = larges.iter().all(|l| !l.is_disjoint(a).unwrap());
            (flag, q)
        },
    )
}

/// Extralarge subsets cut every large subset largely.
pub fn extralarge_quantifier_case() -> CaseResult {
    quantifier_case(
        "extralarge-cuts-large:extralarge-iff-intersection-with-every-large-stays-large",
        |c, a, larges, _| {
            let flag = classify(c, a).unwrap().flags.extralarge;
            let q = larges
                .iter()
                .all(|l| classify(c, &l.intersection(a).unwrap()).unwrap().flags.large);
            (flag, q)
        },
    )
}

/// Small subsets leave every large subset large.
pub fn small_large_quantifier_case() -> CaseResult {
    quantifier_case(
        "small-versus-large:small-iff-difference-from-every-large-stays-large",
        |c, a, larges, _| {
            let flag = classify(c, a).unwrap().flags.small;
            let q = larges
                .iter()
                .all(|l| classify(c, &l.difference(a).unwrap()).unwrap().flags.large);
            (flag, q)
        },
    )
}

/// Small subsets keep every meshy subset meshy under union.
pub fn small_meshy_quantifier_case() -> CaseResult {
    quantifier_case(
        "small-absorbs-meshy:small-iff-union-with-every-meshy-stays-meshy",
        |c, a, _, meshies| {
            let flag = classify(c, a).unwrap().flags.small;
            let q = meshies
                .iter()
                .all(|b| classify(c, &b.union(a).unwrap()).unwrap().flags.meshy);
            (flag, q)
        },
    )
}

/// The class-reduction classifier against the definitional oracle, on
/// every space with up to three points (and the empty space). The
/// classifier under test is a parameter so that a deliberately broken one
/// can be fed in to prove this case has teeth.
pub fn oracle_agreement_case_with<F>(classify_fn: F) -> CaseResult
where
    F: Fn(&CoarseSpace, &PointSet) -> CoreResult<SizeReport>,
{
    let mut out =
        CaseResult::new("classifier-versus-definitional-oracle:full-report-agreement");
    for n in 0..=3usize {
        let g = GroundSet::bare(n);
        for labels in partitions(n) {
            let c = CoarseSpace::from_partition(&g, &labels).unwrap();
            for a in all_subsets(&g) {
                let fast = classify_fn(&c, &a).unwrap();
                let slow = oracle_classify(&c, &a).unwrap();
                out.record(fast == slow, || {
                    format!("partition {labels:?}, A={a}: fast {fast:?}, oracle {slow:?}")
                });
            }
        }
    }
    out
}

pub fn oracle_agreement_case() -> CaseResult {
    oracle_agreement_case_with(classify)
}

/// Map analysis over every total map between spaces of up to three points:
/// the bornotopy inverse exists exactly when the map is effectively proper
/// and coarsely surjective, existence agrees with brute-force enumeration
/// of all candidate inverses, the two asymorphism routes agree, and
/// effective properness implies properness.
pub fn map_inventory_case() -> CaseResult {
    let mut out = CaseResult::new(
        "bornotopy-inverse:exists-iff-effectively-proper-and-coarsely-surjective",
    );
    for nx in 1..=3usize {
        for ny in 1..=3usize {
            let gx = GroundSet::bare(nx);
            let gy = GroundSet::bare(ny);
            for px in partitions(nx) {
                let cx = CoarseSpace::from_partition(&gx, &px).unwrap();
                for py in partitions(ny) {
                    let cy = CoarseSpace::from_partition(&gy, &py).unwrap();
                    let mut table = vec![0usize; nx];
                    loop {
                        let f = Map::new(&gx, &gy, table.clone()).unwrap();
                        let report = classify_map(&f, &cx, &cy).unwrap();
                        let predicted =
                            report.effectively_proper && report.coarsely_surjective;
                        let constructed = report.bornotopy_inverse.is_some();
                        let brute = brute_force_inverse_exists(&f, &cx, &cy);
                        let asym_direct = report.bijective
                            && report.bornologous
                            && report.effectively_proper;
                        let asym_via_inverse = match f.inverse() {
                            Some(g) => {
                                report.bornologous && is_bornologous(&g, &cy, &cx).unwrap()
                            }
                            None => false,
                        };
                        let proper_chain = !report.effectively_proper || report.proper;
                        let ok = predicted == constructed
                            && predicted == brute
                            && asym_direct == asym_via_inverse
                            && asym_direct == report.asymorphism
                            && proper_chain;
                        out.record(ok, || {
                            format!(
                                "f={table:?} between {px:?} and {py:?}: predicted {predicted}, \
                                 constructed {constructed}, brute {brute}"
                            )
                        });
                        // Next table in lexicographic order.
                        let mut i = 0;
                        while i < nx {
                            table[i] += 1;
                            if table[i] < ny {
                                break;
                            }
                            table[i] = 0;
                            i += 1;
                        }
                        if i == nx {
                            break;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Does any map back have both bornotopy properties? Checked by trying
/// every candidate table, with no reference to the constructive route.
pub fn brute_force_inverse_exists(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> bool {
    let nx = cx.ground().size();
    let ny = cy.ground().size();
    let idx = Map::identity(cx.ground());
    let idy = Map::identity(cy.ground());
    let mut table = vec![0usize; ny];
    loop {
        let g = Map::new(cy.ground(), cx.ground(), table.clone()).unwrap();
        if is_bornologous(&g, cy, cx).unwrap()
            && bornotopic(&g.then(f).unwrap(), &idy, cy).unwrap()
            && bornotopic(&f.then(&g).unwrap(), &idx, cx).unwrap()
        {
            return true;
        }
        let mut i = 0;
        while i < ny {
            table[i] += 1;
            if table[i] < nx {
                break;
            }
            table[i] = 0;
            i += 1;
        }
        if i == ny {
            return false;
        }
    }
}

/// On metric grounds the exponential of the scale-r entourage relates two
/// subsets exactly when their Hausdorff distance is at most r, including
/// the empty-set conventions.
pub fn exp_hausdorff_case(seed: u64, instances: usize) -> CaseResult {
    let mut out =
        CaseResult::new("exponential-scale:pair-in-exp-Er-iff-hausdorff-distance-at-most-r");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..instances {
        let n = rng.gen_range(1..=8usize);
        let mut values: Vec<u64> = Vec::new();
        while values.len() < n {
            let v = rng.gen_range(0..=120u64);
            if !values.contains(&v) {
                values.push(v);
            }
        }
        values.sort_unstable();
        let mut metric = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                metric[i * n + j] = values[i].abs_diff(values[j]);
            }
        }
        let g = GroundSet::with_metric(n, metric, 0).unwrap();
        let r = rng.gen_range(0..=15u64);
        let mut er = Entourage::empty(&g);
        for x in 0..n {
            for y in 0..n {
                if g.dist(x, y).unwrap() <= r {
                    er.insert_pair(x, y).unwrap();
                }
            }
        }
        let a = random_subset(&mut rng, &g);
        let b = random_subset(&mut rng, &g);
        let related = exp_relates(&er, &a, &b).unwrap();
        let close = hausdorff_distance(&a, &b).unwrap() <= ExtDist::Finite(r);
        out.record(related == close, || {
            format!("values {values:?}, r={r}, A={a}, B={b}")
        });
    }
    out
}

/// Building a full-family hyperspace must not enlarge the exponential of
/// the maximum entourage, and its classes are the touched-class patterns.
pub fn hyper_closure_case() -> CaseResult {
    let mut out =
        CaseResult::new("hyperspace-closure:exponential-of-maximum-entourage-is-closed");
    for n in 0..=4usize {
        let g = GroundSet::bare(n);
        for labels in partitions(n) {
            let c = CoarseSpace::from_partition(&g, &labels).unwrap();
            // The builder itself asserts that closing adds nothing.
            let h = Hyperspace::build(&c, FamilySelector::All).unwrap();
            let k = c.components().len();
            let expected_classes = 1usize << k;
            out.record(h.space().components().len() == expected_classes, || {
                format!(
                    "partition {labels:?}: {} hyper classes, expected {expected_classes}",
                    h.space().components().len()
                )
            });
        }
    }
    out
}

/// The frozen excision-profile facts of the squares and their shifted
/// union: quadratic growth on the grid for the squares, nothing on the
/// grid for the union.
pub fn squares_profile_case() -> CaseResult {
    let mut out =
        CaseResult::new("squares-window:thin-profile-grows-quadratically-and-union-never-settles");
    let w = builders::squares_window(1600, None).unwrap();
    let all = PointSet::full(w.ground());
    let profile = w.thin_profile(&all).unwrap();
    for entry in &profile.entries {
        let expected = (entry.scale - 1) * (entry.scale - 1);
        out.record(
            entry.required_radius == expected && entry.grid_entry == Some(expected),
            || format!("squares at scale {}: {entry:?}", entry.scale),
        );
    }
    let u = builders::squares_shifted_union_window(1600, None).unwrap();
    let all_u = PointSet::full(u.ground());
    let profile_u = u.thin_profile(&all_u).unwrap();
    for entry in &profile_u.entries {
        out.record(entry.grid_entry.is_none(), || {
            format!("union at scale {}: {entry:?}", entry.scale)
        });
    }
    out
}

/// Inside a window the metric structure and the satellite of its induced
/// bornology coincide, while a scale witness survives past the grid.
pub fn window_structures_case() -> CaseResult {
    let mut out =
        CaseResult::new("window-structures:metric-equals-satellite-inside-a-window");
    let w = builders::integer_interval_window(60, Some(vec![1, 2, 3])).unwrap();
    let cmp = coarse_core::hyper::metric_vs_satellite(&w).unwrap();
    out.record(
        cmp.emax_equal && cmp.connected && cmp.pairs_agree && cmp.scale_witness.is_some(),
        || format!("{cmp:?}"),
    );
    out
}

/// The full inventory, deterministically seeded. `max_ground` bounds the
/// random cases; exhaustive cases keep their fixed desk-scale bounds.
pub fn run_all(seed: u64, max_ground: usize) -> Vec<CaseResult> {
    let max_ground = max_ground.clamp(1, 8);
    vec![
        duality_case(seed, max_ground, 1000),
        gal_core_case(seed ^ 0x9e37_79b9, max_ground, 500),
        thick_quantifier_case(),
        extralarge_quantifier_case(),
        small_large_quantifier_case(),
        small_meshy_quantifier_case(),
        oracle_agreement_case(),
        map_inventory_case(),
        exp_hausdorff_case(seed ^ 0x517c_c1b7, 500),
        hyper_closure_case(),
        squares_profile_case(),
        window_structures_case(),
    ]
}
