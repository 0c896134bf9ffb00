//! Total maps between ground sets and their coarse behaviour.
//!
//! A map is stored as a lookup table. Against a pair of coarse spaces it
//! gets the usual battery of properties: bornologous, proper, effectively
//! proper, coarsely surjective, asymorphism, coarse equivalence, and
//! existence of a bornotopy inverse. On finite spaces every quantifier
//! over entourages collapses to the maximum entourage, so each check is a
//! single relation comparison; `classify_map` bundles them with witnesses.

use crate::error::{CoarseError, Result};
use crate::relation::{same_ground, Entourage, Ground, PointSet};
use crate::space::CoarseSpace;

/// A total function between two ground sets, as a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Map {
    source: Ground,
    target: Ground,
    table: Vec<usize>,
}

impl Map {
    pub fn new(source: &Ground, target: &Ground, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.size() {
            return Err(CoarseError::MapNotTotal {
                got: table.len(),
                expected: source.size(),
            });
        }
        for &v in &table {
            if v >= target.size() {
                return Err(CoarseError::MapValueOutOfRange {
                    value: v,
                    size: target.size(),
                });
            }
        }
        Ok(Map {
            source: source.clone(),
            target: target.clone(),
            table,
        })
    }

    pub fn identity(g: &Ground) -> Self {
        Map {
            source: g.clone(),
            target: g.clone(),
            table: (0..g.size()).collect(),
        }
    }

    pub fn constant(source: &Ground, target: &Ground, y: usize) -> Result<Self> {
        Map::new(source, target, vec![y; source.size()])
    }

    pub fn source(&self) -> &Ground {
        &self.source
    }

    pub fn target(&self) -> &Ground {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Composition in diagram order: `f.then(g)` sends `x` to `g(f(x))`.
    pub fn then(&self, g: &Map) -> Result<Map> {
        if !same_ground(&self.target, &g.source) {
            return Err(CoarseError::GroundMismatch {
                left: self.target.size(),
                right: g.source.size(),
            });
        }
        let table = self.table.iter().map(|&x| g.table[x]).collect();
        Map::new(&self.source, &g.target, table)
    }

    pub fn image(&self) -> PointSet {
        let mut out = PointSet::empty(&self.target);
        for &y in &self.table {
            out.insert(y).unwrap();
        }
        out
    }

    pub fn image_of(&self, a: &PointSet) -> Result<PointSet> {
        if !same_ground(a.ground(), &self.source) {
            return Err(CoarseError::GroundMismatch {
                left: a.ground().size(),
                right: self.source.size(),
            });
        }
        let mut out = PointSet::empty(&self.target);
        for x in a.iter() {
            out.insert(self.table[x]).unwrap();
        }
        Ok(out)
    }

    pub fn preimage_of(&self, b: &PointSet) -> Result<PointSet> {
        if !same_ground(b.ground(), &self.target) {
            return Err(CoarseError::GroundMismatch {
                left: b.ground().size(),
                right: self.target.size(),
            });
        }
        let mut out = PointSet::empty(&self.source);
        for (x, &y) in self.table.iter().enumerate() {
            if b.contains(y) {
                out.insert(x).unwrap();
            }
        }
        Ok(out)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.table {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        self.image().cardinality() == self.target.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Map> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0usize; self.target.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(Map {
            source: self.target.clone(),
            target: self.source.clone(),
            table,
        })
    }

    /// Pushforward of an entourage on the source.
    pub fn push(&self, e: &Entourage) -> Result<Entourage> {
        if !same_ground(e.ground(), &self.source) {
            return Err(CoarseError::GroundMismatch {
                left: e.ground().size(),
                right: self.source.size(),
            });
        }
        let mut out = Entourage::empty(&self.target);
        for (x, y) in e.iter_pairs() {
            out.insert_pair(self.table[x], self.table[y]).unwrap();
        }
        Ok(out)
    }

    /// Pullback of an entourage on the target.
    pub fn pull(&self, e: &Entourage) -> Result<Entourage> {
        if !same_ground(e.ground(), &self.target) {
            return Err(CoarseError::GroundMismatch {
                left: e.ground().size(),
                right: self.target.size(),
            });
        }
        let n = self.source.size();
        let mut out = Entourage::empty(&self.source);
        for x in 0..n {
            for y in 0..n {
                if e.contains_pair(self.table[x], self.table[y]) {
                    out.insert_pair(x, y).unwrap();
                }
            }
        }
        Ok(out)
    }
}

fn check_source(f: &Map, cx: &CoarseSpace) -> Result<()> {
    if same_ground(f.source(), cx.ground()) {
        Ok(())
    } else {
        Err(CoarseError::GroundMismatch {
            left: f.source().size(),
            right: cx.ground().size(),
        })
    }
}

fn check_target(f: &Map, cy: &CoarseSpace) -> Result<()> {
    if same_ground(f.target(), cy.ground()) {
        Ok(())
    } else {
        Err(CoarseError::GroundMismatch {
            left: f.target().size(),
            right: cy.ground().size(),
        })
    }
}

/// `f` is bornologous when pushing any entourage lands in the target
/// structure; it suffices to push the maximum entourage.
pub fn is_bornologous(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<bool> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    Ok(f.push(cx.emax())?.is_subset(cy.emax())?)
}

/// `f` is effectively proper when pulling any entourage lands in the
/// source structure; it suffices to pull the maximum entourage.
pub fn is_effectively_proper(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<bool> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    Ok(f.pull(cy.emax())?.is_subset(cx.emax())?)
}

/// `f` is proper when preimages of bounded sets are bounded; it suffices
/// to check preimages of target classes.
pub fn is_proper(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<bool> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    for class in cy.components() {
        if !cx.is_bounded(&f.preimage_of(class)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f` is coarsely surjective when some entourage closure of the image
/// covers the target, i.e. the image is large there.
pub fn is_coarsely_surjective(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<bool> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    crate::size::is_large(cy, &f.image())
}

/// Two parallel maps are bornotopic (close) when the graph of their
/// pointwise pairing is an entourage of the target.
pub fn bornotopic(f: &Map, g: &Map, cy: &CoarseSpace) -> Result<bool> {
    if !same_ground(f.source(), g.source()) {
        return Err(CoarseError::GroundMismatch {
            left: f.source().size(),
            right: g.source().size(),
        });
    }
    check_target(f, cy)?;
    check_target(g, cy)?;
    let mut pairing = Entourage::empty(f.target());
    for x in 0..f.source().size() {
        pairing.insert_pair(f.apply(x), g.apply(x)).unwrap();
    }
    cy.contains(&pairing)
}

/// An asymorphism is a bijective map that is bornologous with bornologous
/// inverse. Computed both directly (bornologous and effectively proper)
/// and through the inverse table; the two routes are asserted to agree.
pub fn is_asymorphism(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<bool> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    let direct = f.is_bijective()
        && is_bornologous(f, cx, cy)?
        && is_effectively_proper(f, cx, cy)?;
    let via_inverse = match f.inverse() {
        Some(g) => is_bornologous(f, cx, cy)? && is_bornologous(&g, cy, cx)?,
        None => false,
    };
    debug_assert_eq!(direct, via_inverse);
    Ok(direct)
}

pub fn is_coarse_equivalence(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<bool> {
    Ok(is_bornologous(f, cx, cy)?
        && is_effectively_proper(f, cx, cy)?
        && is_coarsely_surjective(f, cx, cy)?)
}

/// Builds a bornotopy inverse when one exists: a map `g` back from the
/// target that is bornologous, with `f.then(g)` close to the identity on
/// the source and `g.then(f)` close to the identity on the target. One
/// exists exactly when `f` is effectively proper and coarsely surjective;
/// the construction picks, for each target point, the least source point
/// mapping into its class. The returned map is re-checked against the
/// definition before being handed out.
pub fn bornotopy_inverse(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<Option<Map>> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    if !(is_effectively_proper(f, cx, cy)? && is_coarsely_surjective(f, cx, cy)?) {
        return Ok(None);
    }
    let mut table = Vec::with_capacity(f.target().size());
    for y in 0..f.target().size() {
        let x = (0..f.source().size())
            .find(|&x| cy.emax().contains_pair(f.apply(x), y))
            .expect("coarse surjectivity guarantees a preimage in every class");
        table.push(x);
    }
    let g = Map::new(f.target(), f.source(), table)?;
    debug_assert!(is_bornologous(&g, cy, cx)?);
    debug_assert!(bornotopic(&g.then(f)?, &Map::identity(f.target()), cy)?);
    debug_assert!(bornotopic(&f.then(&g)?, &Map::identity(f.source()), cx)?);
    Ok(Some(g))
}

/// Full per-map analysis with deterministic witnesses. Pair witnesses are
/// the first offending pair in row-major order; the missed class is the
/// least class (by least member) disjoint from the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapReport {
    pub bornologous: bool,
    pub proper: bool,
    pub effectively_proper: bool,
    pub coarsely_surjective: bool,
    pub bijective: bool,
    pub asymorphism: bool,
    pub coarse_equivalence: bool,
    pub bornotopy_inverse: Option<Map>,
    /// A source pair inside the structure whose image pair is outside.
    pub bornologous_violation: Option<(usize, usize)>,
    /// A source pair outside the structure whose image pair is inside.
    pub effectively_proper_violation: Option<(usize, usize)>,
    /// A target class the image never touches.
    pub surjectivity_missed_class: Option<PointSet>,
    /// A target class together with its unbounded preimage.
    pub proper_violation: Option<(PointSet, PointSet)>,
}

pub fn classify_map(f: &Map, cx: &CoarseSpace, cy: &CoarseSpace) -> Result<MapReport> {
    check_source(f, cx)?;
    check_target(f, cy)?;
    let bornologous = is_bornologous(f, cx, cy)?;
    let bornologous_violation = if bornologous {
        None
    } else {
        cx.emax()
            .iter_pairs()
            .find(|&(x, y)| !cy.emax().contains_pair(f.apply(x), f.apply(y)))
    };
    let effectively_proper = is_effectively_proper(f, cx, cy)?;
    let effectively_proper_violation = if effectively_proper {
        None
    } else {
        let n = cx.ground().size();
        let mut found = None;
        'scan: for x in 0..n {
            for y in 0..n {
                if cy.emax().contains_pair(f.apply(x), f.apply(y))
                    && !cx.emax().contains_pair(x, y)
                {
                    found = Some((x, y));
                    break 'scan;
                }
            }
        }
        found
    };
    let coarsely_surjective = is_coarsely_surjective(f, cx, cy)?;
    let surjectivity_missed_class = if coarsely_surjective {
        None
    } else {
        let image = f.image();
        let mut found = None;
        for class in cy.components() {
            if class.is_disjoint(&image)? {
                found = Some(class.clone());
                break;
            }
        }
        found
    };
    let proper = is_proper(f, cx, cy)?;
    let proper_violation = if proper {
        None
    } else {
        let mut found = None;
        for class in cy.components() {
            let pre = f.preimage_of(class)?;
            if !cx.is_bounded(&pre)? {
                found = Some((class.clone(), pre));
                break;
            }
        }
        found
    };
    Ok(MapReport {
        bornologous,
        proper,
        effectively_proper,
        coarsely_surjective,
        bijective: f.is_bijective(),
        asymorphism: is_asymorphism(f, cx, cy)?,
        coarse_equivalence: bornologous && effectively_proper && coarsely_surjective,
        bornotopy_inverse: bornotopy_inverse(f, cx, cy)?,
        bornologous_violation,
        effectively_proper_violation,
        surjectivity_missed_class,
        proper_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::GroundSet;

    #[test]
    fn identity_is_an_asymorphism() {
        let g = GroundSet::bare(4);
        let c = CoarseSpace::from_partition(&g, &[0, 0, 1, 1]).unwrap();
        let f = Map::identity(&g);
        assert!(is_asymorphism(&f, &c, &c).unwrap());
        assert!(is_coarse_equivalence(&f, &c, &c).unwrap());
        let r = classify_map(&f, &c, &c).unwrap();
        assert!(r.bornologous && r.proper && r.effectively_proper);
        assert!(r.bornotopy_inverse.is_some());
    }

    #[test]
    fn collapse_of_two_classes_is_not_effectively_proper() {
        let gx = GroundSet::bare(2);
        let cx = CoarseSpace::from_partition(&gx, &[0, 1]).unwrap();
        let gy = GroundSet::bare(1);
        let cy = CoarseSpace::from_partition(&gy, &[0]).unwrap();
        let f = Map::constant(&gx, &gy, 0).unwrap();
        assert!(is_bornologous(&f, &cx, &cy).unwrap());
        assert!(!is_effectively_proper(&f, &cx, &cy).unwrap());
        assert!(!is_proper(&f, &cx, &cy).unwrap());
        let r = classify_map(&f, &cx, &cy).unwrap();
        assert_eq!(r.effectively_proper_violation, Some((0, 1)));
        assert!(r.bornotopy_inverse.is_none());
        let (class, pre) = r.proper_violation.unwrap();
        assert_eq!(class.to_indices(), vec![0]);
        assert_eq!(pre.to_indices(), vec![0, 1]);
    }

    #[test]
    fn inclusion_misses_a_class() {
        let gx = GroundSet::bare(1);
        let cx = CoarseSpace::from_partition(&gx, &[0]).unwrap();
        let gy = GroundSet::bare(3);
        let cy = CoarseSpace::from_partition(&gy, &[0, 0, 1]).unwrap();
        let f = Map::new(&gx, &gy, vec![0]).unwrap();
        assert!(is_bornologous(&f, &cx, &cy).unwrap());
        assert!(is_effectively_proper(&f, &cx, &cy).unwrap());
        assert!(!is_coarsely_surjective(&f, &cx, &cy).unwrap());
        let r = classify_map(&f, &cx, &cy).unwrap();
        assert_eq!(r.surjectivity_missed_class.unwrap().to_indices(), vec![2]);
        assert!(r.bornotopy_inverse.is_none());
    }

    #[test]
    fn dense_inclusion_has_a_bornotopy_inverse() {
        let gx = GroundSet::bare(2);
        let cx = CoarseSpace::from_partition(&gx, &[0, 0]).unwrap();
        let gy = GroundSet::bare(3);
        let cy = CoarseSpace::from_partition(&gy, &[0, 0, 0]).unwrap();
        let f = Map::new(&gx, &gy, vec![0, 1]).unwrap();
        let g = bornotopy_inverse(&f, &cx, &cy).unwrap().unwrap();
        // Least preimage representative for every target point.
        assert_eq!(g.table(), &[0, 0, 0]);
        assert!(is_coarse_equivalence(&f, &cx, &cy).unwrap());
    }

    #[test]
    fn asymorphism_routes_agree_on_a_permutation() {
        let gx = GroundSet::bare(3);
        let cx = CoarseSpace::from_partition(&gx, &[0, 0, 1]).unwrap();
        let gy = GroundSet::bare(3);
        let cy = CoarseSpace::from_partition(&gy, &[0, 1, 1]).unwrap();
        // Sends class {0, 1} onto class {1, 2} and {2} onto {0}.
        let f = Map::new(&gx, &gy, vec![1, 2, 0]).unwrap();
        assert!(is_asymorphism(&f, &cx, &cy).unwrap());
        // A permutation that splits a class is not one.
        let h = Map::new(&gx, &gy, vec![0, 1, 2]).unwrap();
        assert!(!is_asymorphism(&h, &cx, &cy).unwrap());
        assert!(!is_bornologous(&h, &cx, &cy).unwrap());
    }

    #[test]
    fn constant_map_to_connected_target_is_an_equivalence_iff_source_connected() {
        let gy = GroundSet::bare(2);
        let cy = CoarseSpace::from_partition(&gy, &[0, 0]).unwrap();
        let g_conn = GroundSet::bare(3);
        let c_conn = CoarseSpace::from_partition(&g_conn, &[0, 0, 0]).unwrap();
        let f = Map::constant(&g_conn, &gy, 1).unwrap();
        assert!(is_coarse_equivalence(&f, &c_conn, &cy).unwrap());
        let c_split = CoarseSpace::from_partition(&g_conn, &[0, 0, 1]).unwrap();
        let h = Map::constant(&g_conn, &gy, 1).unwrap();
        assert!(!is_coarse_equivalence(&h, &c_split, &cy).unwrap());
    }

    #[test]
    fn push_and_pull_respect_grounds() {
        let gx = GroundSet::bare(2);
        let gz = GroundSet::bare(3);
        let f = Map::identity(&gx);
        let e = Entourage::diagonal(&gz);
        assert!(matches!(
            f.push(&e),
            Err(CoarseError::GroundMismatch { .. })
        ));
        assert!(matches!(
            f.pull(&e),
            Err(CoarseError::GroundMismatch { .. })
        ));
    }

    #[test]
    fn composition_is_in_diagram_order() {
        let g2 = GroundSet::bare(2);
        let g3 = GroundSet::bare(3);
        let f = Map::new(&g2, &g3, vec![2, 0]).unwrap();
        let g = Map::new(&g3, &g2, vec![1, 1, 0]).unwrap();
        let fg = f.then(&g).unwrap();
        assert_eq!(fg.table(), &[0, 1]);
    }

    #[test]
    fn rejects_partial_or_out_of_range_tables() {
        let g2 = GroundSet::bare(2);
        let g3 = GroundSet::bare(3);
        assert!(matches!(
            Map::new(&g2, &g3, vec![0]),
            Err(CoarseError::MapNotTotal { .. })
        ));
        assert!(matches!(
            Map::new(&g2, &g3, vec![0, 3]),
            Err(CoarseError::MapValueOutOfRange { .. })
        ));
    }
}
