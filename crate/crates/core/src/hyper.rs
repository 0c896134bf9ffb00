//! Hyperspaces: coarse structures on families of subsets.
//!
//! The exponential of an entourage relates two subsets when each lies in
//! the other's closure. On a finite space the exponential of the maximum
//! entourage is already an equivalence on any family (two members are
//! related exactly when they touch the same classes), so the generated
//! hyperspace structure coincides with it; the builder closes the
//! generators anyway and asserts that nothing new appears.
//!
//! This module also hosts the cross-structure comparisons that live on
//! top of the exponential: Hausdorff distance against metric scales, the
//! complement map, and the metric-versus-satellite contrast on a window.

use crate::error::{CoarseError, Result};
use crate::maps::{classify_map, Map, MapReport};
use crate::relation::{same_ground, Entourage, Ground, GroundSet, PointSet};
use crate::space::CoarseSpace;
use crate::window::WindowSpace;

/// How to pick the member family of a hyperspace.
#[derive(Debug, Clone)]
pub enum FamilySelector {
    /// Every subset of the ground set. Needs at most 12 points.
    All,
    /// Every nonempty bounded subset.
    Flat,
    /// Every large subset. Needs at most 12 points to enumerate.
    Large,
    /// Every nonempty subset containing no whole class. Needs at most 12
    /// points to enumerate.
    MeshyNonempty,
    /// An explicit family; deduplicated and sorted.
    Explicit(Vec<PointSet>),
}

const FAMILY_LIMIT: usize = 4096;
const ENUM_POINT_LIMIT: usize = 12;

/// Extended distance: finite or past every bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtDist {
    Finite(u64),
    Infinite,
}

impl ExtDist {
    pub fn add(self, other: ExtDist) -> ExtDist {
        match (self, other) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a.saturating_add(b)),
            _ => ExtDist::Infinite,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }
}

impl std::fmt::Display for ExtDist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtDist::Finite(d) => write!(f, "{d}"),
            ExtDist::Infinite => write!(f, "inf"),
        }
    }
}

/// Hausdorff distance between two subsets of a metric ground set. Both
/// empty is zero; exactly one empty is infinite.
pub fn hausdorff_distance(a: &PointSet, b: &PointSet) -> Result<ExtDist> {
    if !same_ground(a.ground(), b.ground()) {
        return Err(CoarseError::GroundMismatch {
            left: a.ground().size(),
            right: b.ground().size(),
        });
    }
    let g = a.ground();
    if !g.has_metric() {
        return Err(CoarseError::NoMetric);
    }
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(ExtDist::Finite(0)),
        (true, false) | (false, true) => return Ok(ExtDist::Infinite),
        (false, false) => {}
    }
    let one_sided = |from: &PointSet, to: &PointSet| -> Result<u64> {
        let mut worst = 0u64;
        for x in from.iter() {
            let mut best = u64::MAX;
            for y in to.iter() {
                best = best.min(g.dist(x, y)?);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    };
    Ok(ExtDist::Finite(one_sided(a, b)?.max(one_sided(b, a)?)))
}

/// Whether the exponential of `e` relates `a` and `b`: each lies in the
/// other's closure under `e`.
pub fn exp_relates(e: &Entourage, a: &PointSet, b: &PointSet) -> Result<bool> {
    Ok(a.is_subset(&e.closure(b)?)? && b.is_subset(&e.closure(a)?)?)
}

/// A coarse structure on a family of subsets of a base space.
#[derive(Debug, Clone)]
pub struct Hyperspace {
    base: CoarseSpace,
    family: Vec<PointSet>,
    space: CoarseSpace,
}

fn enumerate_family(base: &CoarseSpace, selector: &FamilySelector) -> Result<Vec<PointSet>> {
    let g = base.ground();
    let n = g.size();
    let mut family: Vec<PointSet> = Vec::new();
    match selector {
        FamilySelector::All | FamilySelector::Large | FamilySelector::MeshyNonempty => {
            if n > ENUM_POINT_LIMIT {
                return Err(CoarseError::CapacityExceeded {
                    what: "subset enumeration for a hyperspace family (ground points)",
                    limit: ENUM_POINT_LIMIT,
                    actual: n,
                });
            }
            let class_masks: Vec<u64> = base
                .components()
                .iter()
                .map(|k| k.iter().fold(0u64, |m, i| m | 1 << i))
                .collect();
            for mask in 0u64..1 << n {
                let keep = match selector {
                    FamilySelector::All => true,
                    FamilySelector::Large => class_masks.iter().all(|&k| mask & k != 0),
                    FamilySelector::MeshyNonempty => {
                        mask != 0 && !class_masks.iter().any(|&k| k & mask == k)
                    }
                    FamilySelector::Explicit(_) | FamilySelector::Flat => unreachable!(),
                };
                if keep {
                    let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    family.push(PointSet::from_indices(g, &members)?);
                }
            }
        }
        FamilySelector::Flat => {
            for class in base.components() {
                let members: Vec<usize> = class.iter().collect();
                let k = members.len();
                for mask in 1u64..1 << k {
                    if family.len() >= FAMILY_LIMIT {
                        return Err(CoarseError::CapacityExceeded {
                            what: "hyperspace family members",
                            limit: FAMILY_LIMIT,
                            actual: family.len() + 1,
                        });
                    }
                    let picked: Vec<usize> = (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| members[i])
                        .collect();
                    family.push(PointSet::from_indices(g, &picked)?);
                }
            }
        }
        FamilySelector::Explicit(sets) => {
            for s in sets {
                if !same_ground(s.ground(), g) {
                    return Err(CoarseError::GroundMismatch {
                        left: s.ground().size(),
                        right: n,
                    });
                }
                family.push(s.clone());
            }
        }
    }
    family.sort_by(|a, b| a.cmp_members(b));
    family.dedup();
    if family.len() > FAMILY_LIMIT {
        return Err(CoarseError::CapacityExceeded {
            what: "hyperspace family members",
            limit: FAMILY_LIMIT,
            actual: family.len(),
        });
    }
    Ok(family)
}

fn exp_on_family(
    e: &Entourage,
    family: &[PointSet],
    hyper_ground: &Ground,
) -> Result<Entourage> {
    let closures: Vec<PointSet> = family
        .iter()
        .map(|m| e.closure(m))
        .collect::<Result<_>>()?;
    let mut out = Entourage::empty(hyper_ground);
    for i in 0..family.len() {
        for j in 0..family.len() {
            if family[i].is_subset(&closures[j])? && family[j].is_subset(&closures[i])? {
                out.insert_pair(i, j)?;
            }
        }
    }
    Ok(out)
}

impl Hyperspace {
    pub fn build(base: &CoarseSpace, selector: FamilySelector) -> Result<Hyperspace> {
        let family = enumerate_family(base, &selector)?;
        let labels: Vec<String> = family.iter().map(|m| m.to_string()).collect();
        let hyper_ground = GroundSet::with_labels(family.len(), labels)?;
        let mut gens: Vec<Entourage> = Vec::new();
        for g in base.generators() {
            gens.push(exp_on_family(g, &family, &hyper_ground)?);
        }
        let exp_emax = exp_on_family(base.emax(), &family, &hyper_ground)?;
        gens.push(exp_emax.clone());
        let space = CoarseSpace::generate(&hyper_ground, gens)?;
        // The exponential of the maximum entourage is already an
        // equivalence on the family, so closing it must add nothing.
        assert_eq!(space.emax(), &exp_emax);
        Ok(Hyperspace {
            base: base.clone(),
            family,
            space,
        })
    }

    pub fn base(&self) -> &CoarseSpace {
        &self.base
    }

    pub fn family(&self) -> &[PointSet] {
        &self.family
    }

    pub fn space(&self) -> &CoarseSpace {
        &self.space
    }

    pub fn ground(&self) -> &Ground {
        self.space.ground()
    }

    pub fn member_index(&self, s: &PointSet) -> Option<usize> {
        self.family
            .binary_search_by(|m| m.cmp_members(s))
            .ok()
    }

    /// The singleton embedding into this hyperspace, when every singleton
    /// is a member.
    pub fn iota_map(&self) -> Result<Map> {
        let g = self.base.ground();
        let mut table = Vec::with_capacity(g.size());
        for x in 0..g.size() {
            let singleton = PointSet::singleton(g, x)?;
            let idx = self.member_index(&singleton).ok_or_else(|| {
                CoarseError::FamilyMissingMember {
                    member: singleton.to_string(),
                }
            })?;
            table.push(idx);
        }
        Map::new(g, self.ground(), table)
    }

    /// Whether the singleton embedding preserves and reflects the coarse
    /// structure (it rarely hits every hyper class, so surjectivity is not
    /// part of this check).
    pub fn iota_is_embedding(&self) -> Result<bool> {
        let iota = self.iota_map()?;
        Ok(crate::maps::is_bornologous(&iota, &self.base, &self.space)?
            && crate::maps::is_effectively_proper(&iota, &self.base, &self.space)?)
    }

    /// The complement map into this hyperspace, when every complement of a
    /// singleton is a member, classified against the base space.
    pub fn c_map_report(&self) -> Result<MapReport> {
        let g = self.base.ground();
        let mut table = Vec::with_capacity(g.size());
        for x in 0..g.size() {
            let co = PointSet::singleton(g, x)?.complement();
            let idx = self
                .member_index(&co)
                .ok_or_else(|| CoarseError::FamilyMissingMember {
                    member: co.to_string(),
                })?;
            table.push(idx);
        }
        let c = Map::new(g, self.ground(), table)?;
        classify_map(&c, &self.base, &self.space)
    }

    /// For a family of nonempty bounded sets, hyper equivalence must be
    /// exactly "same base class". Errors when the family has an empty or
    /// unbounded member, for which the statement is not even well posed.
    pub fn bounded_members_track_base_classes(&self) -> Result<bool> {
        for m in &self.family {
            if m.is_empty() || !self.base.is_bounded(m)? {
                return Err(CoarseError::InvalidBornology {
                    reason: format!(
                        "member {m} is not a nonempty bounded set, so class tracking does not apply"
                    ),
                });
            }
        }
        let class_of = |m: &PointSet| -> usize {
            self.base.class_of(m.iter().next().unwrap()).unwrap()
        };
        for i in 0..self.family.len() {
            for j in 0..self.family.len() {
                let related = self.space.emax().contains_pair(i, j);
                let same_class = class_of(&self.family[i]) == class_of(&self.family[j]);
                if related != same_class {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A far-apart pair whose complements the scale-r exponential cannot tell
/// apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CMapWitness {
    pub x: usize,
    pub y: usize,
    pub distance: u64,
    pub radial_x: u64,
    pub radial_y: u64,
}

/// Searches a window for two points, both past the excision radius and
/// more than `min_separation` apart, whose complements are related by the
/// exponential of the scale-r entourage. Such a pair shows the complement
/// map collapsing distance at that scale. The subset inclusions are
/// checked directly; a closed form (both points have a second point within
/// r) is asserted against them.
pub fn c_map_window_check(
    w: &WindowSpace,
    r: u64,
    min_separation: u64,
    excision: u64,
) -> Result<Option<CMapWitness>> {
    if !w.scales().contains(&r) {
        return Err(CoarseError::ScaleNotOnGrid { scale: r });
    }
    let g = w.ground();
    let n = g.size();
    if n == 0 {
        return Ok(None);
    }
    let er = w.entourage_at(r);
    let mut closures: Vec<PointSet> = Vec::with_capacity(n);
    let mut non_isolated: Vec<bool> = Vec::with_capacity(n);
    for x in 0..n {
        let co = PointSet::singleton(g, x)?.complement();
        closures.push(er.closure(&co)?);
        non_isolated.push(w.ball(x, r)?.cardinality() > 1);
    }
    for x in 0..n {
        if w.radial(x)? <= excision {
            continue;
        }
        let co_x = PointSet::singleton(g, x)?.complement();
        for y in x + 1..n {
            if w.radial(y)? <= excision || g.dist(x, y)? <= min_separation {
                continue;
            }
            let co_y = PointSet::singleton(g, y)?.complement();
            let related = co_x.is_subset(&closures[y])? && co_y.is_subset(&closures[x])?;
            debug_assert_eq!(related, non_isolated[x] && non_isolated[y]);
            if related {
                return Ok(Some(CMapWitness {
                    x,
                    y,
                    distance: g.dist(x, y)?,
                    radial_x: w.radial(x)?,
                    radial_y: w.radial(y)?,
                }));
            }
        }
    }
    Ok(None)
}

/// A scale-level pair the excision grid cannot explain: a non-diagonal
/// scale-r pair with both endpoints past every grid radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleWitness {
    pub x: usize,
    pub y: usize,
    pub scale: u64,
    pub beyond_radius: u64,
}

/// Comparison of the metric structure on a window with the satellite
/// structure of its own induced bornology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricVsSatellite {
    /// Whether the two maximum entourages coincide on the window.
    pub emax_equal: bool,
    pub connected: bool,
    /// Point pairs sampled for agreement between the two structures.
    pub pairs_sampled: usize,
    pub pairs_agree: bool,
    pub scale_witness: Option<ScaleWitness>,
    pub caveats: Vec<String>,
}

/// Builds the metric structure generated by the window's scale entourages,
/// takes the satellite of its induced bornology, and compares the two.
/// Inside any window the full point set is itself bounded, so the two
/// structures tend to coincide there; the scale witness records why the
/// agreement does not persist at scale level, where the grid of excision
/// balls fails to explain the scale entourages.
pub fn metric_vs_satellite(w: &WindowSpace) -> Result<MetricVsSatellite> {
    let g = w.ground();
    let gens: Vec<Entourage> = w.scales().iter().map(|&r| w.entourage_at(r)).collect();
    let metric_space = CoarseSpace::generate(g, gens)?;
    let bornology = metric_space.induced_bornology();
    let satellite = CoarseSpace::satellite(g, &bornology)?;
    let emax_equal = metric_space.emax() == satellite.emax();
    let connected = metric_space.is_connected();

    let n = g.size();
    let mut pairs_sampled = 0usize;
    let mut pairs_agree = true;
    let stride = (n / 17).max(1);
    let mut x = 0;
    while x < n {
        let mut y = x;
        while y < n {
            pairs_sampled += 1;
            if metric_space.emax().contains_pair(x, y) != satellite.emax().contains_pair(x, y) {
                pairs_agree = false;
            }
            y += stride;
        }
        x += stride;
    }

    let grid_max = *w.exclusion_grid().last().unwrap();
    let mut scale_witness = None;
    'scan: for &r in w.scales() {
        for x in 0..n {
            if w.radial(x)? <= grid_max {
                continue;
            }
            for y in 0..n {
                if x != y && w.radial(y)? > grid_max && g.dist(x, y)? <= r {
                    scale_witness = Some(ScaleWitness {
                        x,
                        y,
                        scale: r,
                        beyond_radius: grid_max,
                    });
                    break 'scan;
                }
            }
        }
    }

    let mut caveats = vec![
        "the whole window is a bounded set, so the satellite of the induced bornology \
         cannot be distinguished from the metric structure at the space level here"
            .to_string(),
    ];
    if let Some(wit) = &scale_witness {
        caveats.push(format!(
            "at scale {} the pair ({}, {}) lies past every excision radius on the grid, \
             so no excision ball explains that scale entourage",
            wit.scale, wit.x, wit.y
        ));
    }
    if !connected {
        caveats.push("the window is disconnected at the largest scale; bounded sets do not exhaust it".to_string());
    }
    Ok(MetricVsSatellite {
        emax_equal,
        connected,
        pairs_sampled,
        pairs_agree,
        scale_witness,
        caveats,
    })
}
