//! Ground sets, point sets, and entourages (binary relations) over a fixed
//! finite ground set, with the relation algebra everything else builds on.
//!
//! Entourages are stored as dense bit matrices (one row of `u64` words per
//! point). Desk-scale inputs stay small, so density beats sparse cleverness:
//! closure, interior, composition and inclusion are word-parallel loops.

use std::fmt;
use std::sync::Arc;

use crate::error::{CoarseError, Result};

/// A finite ground set: `size` points indexed `0..size`, optionally carrying
/// human labels, an integer metric (row-major table), and a distinguished
/// origin point used by window-scale operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
    metric: Option<Vec<u64>>,
    origin: Option<usize>,
}

/// Shared handle to a ground set. Structures built over the same ground
/// share the handle; equality falls back to contents so that documents
/// parsed twice still interoperate.
pub type Ground = Arc<GroundSet>;

impl GroundSet {
    pub fn bare(size: usize) -> Ground {
        Arc::new(GroundSet {
            size,
            labels: None,
            metric: None,
            origin: None,
        })
    }

    pub fn with_labels(size: usize, labels: Vec<String>) -> Result<Ground> {
        if labels.len() != size {
            return Err(CoarseError::InvalidMetric {
                reason: format!("{} labels for {} points", labels.len(), size),
            });
        }
        Ok(Arc::new(GroundSet {
            size,
            labels: Some(labels),
            metric: None,
            origin: None,
        }))
    }

    /// A metric ground: `metric` is a row-major `size * size` table of
    /// non-negative integer distances. Symmetry, zero diagonal, and the
    /// triangle inequality are checked up front.
    pub fn with_metric(size: usize, metric: Vec<u64>, origin: usize) -> Result<Ground> {
        Self::with_labeled_metric_inner(size, None, metric, origin)
    }

    /// A metric ground whose points also carry labels.
    pub fn with_labeled_metric(
        size: usize,
        labels: Vec<String>,
        metric: Vec<u64>,
        origin: usize,
    ) -> Result<Ground> {
        if labels.len() != size {
            return Err(CoarseError::InvalidMetric {
                reason: format!("{} labels for {} points", labels.len(), size),
            });
        }
        Self::with_labeled_metric_inner(size, Some(labels), metric, origin)
    }

    fn with_labeled_metric_inner(
        size: usize,
        labels: Option<Vec<String>>,
        metric: Vec<u64>,
        origin: usize,
    ) -> Result<Ground> {
        if metric.len() != size * size {
            return Err(CoarseError::InvalidMetric {
                reason: format!("table has {} entries for {} points", metric.len(), size),
            });
        }
        if size > 0 && origin >= size {
            return Err(CoarseError::IndexOutOfRange {
                index: origin,
                size,
            });
        }
        let d = |x: usize, y: usize| metric[x * size + y];
        for x in 0..size {
            if d(x, x) != 0 {
                return Err(CoarseError::InvalidMetric {
                    reason: format!("d({x},{x}) = {} != 0", d(x, x)),
                });
            }
            for y in 0..x {
                if d(x, y) != d(y, x) {
                    return Err(CoarseError::InvalidMetric {
                        reason: format!("d({x},{y}) != d({y},{x})"),
                    });
                }
                if x != y && d(x, y) == 0 {
                    return Err(CoarseError::InvalidMetric {
                        reason: format!("d({x},{y}) = 0 for distinct points"),
                    });
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if d(x, z) > d(x, y).saturating_add(d(y, z)) {
                        return Err(CoarseError::InvalidMetric {
                            reason: format!("triangle inequality fails at ({x},{y},{z})"),
                        });
                    }
                }
            }
        }
        Ok(Arc::new(GroundSet {
            size,
            labels,
            metric: Some(metric),
            origin: Some(origin),
        }))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[index].as_str())
    }

    pub fn has_metric(&self) -> bool {
        self.metric.is_some()
    }

    pub fn dist(&self, x: usize, y: usize) -> Result<u64> {
        let m = self.metric.as_ref().ok_or(CoarseError::NoMetric)?;
        if x >= self.size || y >= self.size {
            return Err(CoarseError::IndexOutOfRange {
                index: x.max(y),
                size: self.size,
            });
        }
        Ok(m[x * self.size + y])
    }

    pub fn origin(&self) -> Result<usize> {
        self.origin.ok_or(CoarseError::NoOrigin)
    }
}

/// True when two handles denote the same ground, by pointer or by contents.
pub fn same_ground(a: &Ground, b: &Ground) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_same_ground(a: &Ground, b: &Ground) -> Result<()> {
    if same_ground(a, b) {
        Ok(())
    } else {
        Err(CoarseError::GroundMismatch {
            left: a.size(),
            right: b.size(),
        })
    }
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Mask selecting the valid bits of the final word of an `n`-bit row.
fn tail_mask(n: usize) -> u64 {
    match n % 64 {
        0 => !0u64,
        k => (1u64 << k) - 1,
    }
}

/// A subset of a ground set, stored as a bit vector. Trailing bits beyond
/// the ground size are kept zero so word-wise comparison is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ground: Ground,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(ground: &Ground) -> PointSet {
        PointSet {
            words: vec![0; words_for(ground.size())],
            ground: ground.clone(),
        }
    }

    pub fn full(ground: &Ground) -> PointSet {
        let n = ground.size();
        let mut words = vec![!0u64; words_for(n)];
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(n);
        }
        PointSet {
            words,
            ground: ground.clone(),
        }
    }

    pub fn from_indices(ground: &Ground, indices: &[usize]) -> Result<PointSet> {
        let mut set = PointSet::empty(ground);
        for &i in indices {
            set.insert(i)?;
        }
        Ok(set)
    }

    pub fn singleton(ground: &Ground, index: usize) -> Result<PointSet> {
        PointSet::from_indices(ground, &[index])
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn insert(&mut self, index: usize) -> Result<()> {
        if index >= self.ground.size() {
            return Err(CoarseError::IndexOutOfRange {
                index,
                size: self.ground.size(),
            });
        }
        self.words[index / 64] |= 1u64 << (index % 64);
        Ok(())
    }

    pub fn remove(&mut self, index: usize) {
        if index < self.ground.size() {
            self.words[index / 64] &= !(1u64 << (index % 64));
        }
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.ground.size() && self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        check_same_ground(&self.ground, &other.ground)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Ok(PointSet {
            ground: self.ground.clone(),
            words,
        })
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        check_same_ground(&self.ground, &other.ground)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(PointSet {
            ground: self.ground.clone(),
            words,
        })
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        check_same_ground(&self.ground, &other.ground)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        Ok(PointSet {
            ground: self.ground.clone(),
            words,
        })
    }

    pub fn complement(&self) -> PointSet {
        let n = self.ground.size();
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(n);
        }
        PointSet {
            ground: self.ground.clone(),
            words,
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        check_same_ground(&self.ground, &other.ground)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &PointSet) -> Result<bool> {
        check_same_ground(&self.ground, &other.ground)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0))
    }

    /// Lexicographic order on the sorted member lists; gives deterministic
    /// witness and family orderings.
    pub fn cmp_members(&self, other: &PointSet) -> std::cmp::Ordering {
        self.to_indices().cmp(&other.to_indices())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            match self.ground.label(i) {
                Some(l) => write!(f, "{l}")?,
                None => write!(f, "{i}")?,
            }
        }
        write!(f, "}}")
    }
}

/// A binary relation on a ground set, i.e. a candidate entourage. Stored as
/// a dense bit matrix: row `x` is the set `E[x] = {y | (x, y) in E}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entourage {
    ground: Ground,
    row_words: usize,
    words: Vec<u64>,
}

impl Entourage {
    pub fn empty(ground: &Ground) -> Entourage {
        let n = ground.size();
        let row_words = words_for(n);
        Entourage {
            ground: ground.clone(),
            row_words,
            words: vec![0; n * row_words],
        }
    }

    pub fn diagonal(ground: &Ground) -> Entourage {
        let mut e = Entourage::empty(ground);
        for x in 0..ground.size() {
            e.set(x, x);
        }
        e
    }

    pub fn full(ground: &Ground) -> Entourage {
        let n = ground.size();
        let row_words = words_for(n);
        let mut words = vec![!0u64; n * row_words];
        if row_words > 0 {
            let mask = tail_mask(n);
            for x in 0..n {
                words[x * row_words + row_words - 1] &= mask;
            }
        }
        Entourage {
            ground: ground.clone(),
            row_words,
            words,
        }
    }

    pub fn from_pairs(ground: &Ground, pairs: &[(usize, usize)]) -> Result<Entourage> {
        let mut e = Entourage::empty(ground);
        for &(x, y) in pairs {
            e.insert_pair(x, y)?;
        }
        Ok(e)
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    fn set(&mut self, x: usize, y: usize) {
        self.words[x * self.row_words + y / 64] |= 1u64 << (y % 64);
    }

    pub fn insert_pair(&mut self, x: usize, y: usize) -> Result<()> {
        let n = self.ground.size();
        if x >= n || y >= n {
            return Err(CoarseError::IndexOutOfRange {
                index: x.max(y),
                size: n,
            });
        }
        self.set(x, y);
        Ok(())
    }

    pub fn contains_pair(&self, x: usize, y: usize) -> bool {
        let n = self.ground.size();
        x < n && y < n && self.words[x * self.row_words + y / 64] >> (y % 64) & 1 == 1
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.words[x * self.row_words..(x + 1) * self.row_words]
    }

    /// The row `E[x]` as a point set.
    pub fn row_set(&self, x: usize) -> Result<PointSet> {
        if x >= self.ground.size() {
            return Err(CoarseError::IndexOutOfRange {
                index: x,
                size: self.ground.size(),
            });
        }
        Ok(PointSet {
            ground: self.ground.clone(),
            words: self.row(x).to_vec(),
        })
    }

    pub fn iter_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.ground.size();
        (0..n).flat_map(move |x| {
            self.row(x).iter().enumerate().flat_map(move |(wi, &w)| {
                let mut bits = w;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        None
                    } else {
                        let b = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        Some((x, wi * 64 + b))
                    }
                })
            })
        })
    }

    pub fn pair_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty_relation(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The E-closure `E[A]`: union of the rows `E[x]` over `x in A`.
    pub fn closure(&self, a: &PointSet) -> Result<PointSet> {
        check_same_ground(&self.ground, &a.ground)?;
        let mut out = PointSet::empty(&self.ground);
        for x in a.iter() {
            let row = self.row(x);
            for (w, r) in out.words.iter_mut().zip(row) {
                *w |= r;
            }
        }
        Ok(out)
    }

    /// The E-interior: the points whose whole row lies inside `A`.
    pub fn interior(&self, a: &PointSet) -> Result<PointSet> {
        check_same_ground(&self.ground, &a.ground)?;
        let mut out = PointSet::empty(&self.ground);
        for x in 0..self.ground.size() {
            let inside = self
                .row(x)
                .iter()
                .zip(&a.words)
                .all(|(r, aw)| r & !aw == 0);
            if inside {
                out.words[x / 64] |= 1u64 << (x % 64);
            }
        }
        Ok(out)
    }

    /// Relational composite `self . other`, applying `other` first:
    /// `(x, z)` belongs to the result iff there is `y` with `(x, y) in other`
    /// and `(y, z) in self`.
    pub fn compose(&self, other: &Entourage) -> Result<Entourage> {
        check_same_ground(&self.ground, &other.ground)?;
        let n = self.ground.size();
        let mut out = Entourage::empty(&self.ground);
        for x in 0..n {
            let mids = other.row(x);
            for (wi, &w) in mids.iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let y = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let src = self.row(y).to_vec();
                    let dst =
                        &mut out.words[x * out.row_words..(x + 1) * out.row_words];
                    for (d, s) in dst.iter_mut().zip(&src) {
                        *d |= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The transpose relation.
    pub fn invert(&self) -> Entourage {
        let mut out = Entourage::empty(&self.ground);
        for (x, y) in self.iter_pairs() {
            out.set(y, x);
        }
        out
    }

    pub fn union(&self, other: &Entourage) -> Result<Entourage> {
        check_same_ground(&self.ground, &other.ground)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Ok(Entourage {
            ground: self.ground.clone(),
            row_words: self.row_words,
            words,
        })
    }

    pub fn intersection(&self, other: &Entourage) -> Result<Entourage> {
        check_same_ground(&self.ground, &other.ground)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(Entourage {
            ground: self.ground.clone(),
            row_words: self.row_words,
            words,
        })
    }

    pub fn is_subset(&self, other: &Entourage) -> Result<bool> {
        check_same_ground(&self.ground, &other.ground)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// The restriction of the relation to `B x B`.
    pub fn restrict(&self, b: &PointSet) -> Result<Entourage> {
        check_same_ground(&self.ground, &b.ground)?;
        let n = self.ground.size();
        let mut out = Entourage::empty(&self.ground);
        for x in b.iter() {
            let dst_start = x * out.row_words;
            for wi in 0..self.row_words {
                out.words[dst_start + wi] = self.words[x * self.row_words + wi] & b.words[wi];
            }
        }
        let _ = n;
        Ok(out)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.ground.size()).all(|x| self.contains_pair(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter_pairs().all(|(x, y)| self.contains_pair(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        match self.compose(self) {
            Ok(sq) => sq.is_subset(self).unwrap_or(false),
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground3() -> Ground {
        GroundSet::bare(3)
    }

    fn chain3(g: &Ground) -> Entourage {
        let mut e = Entourage::diagonal(g);
        e.insert_pair(0, 1).unwrap();
        e.insert_pair(1, 2).unwrap();
        e
    }

    #[test]
    fn closure_of_origin_along_chain() {
        let g = ground3();
        let e = chain3(&g);
        let a = PointSet::singleton(&g, 0).unwrap();
        let c = e.closure(&a).unwrap();
        assert_eq!(c.to_indices(), vec![0, 1]);
    }

    #[test]
    fn interior_of_prefix_along_chain() {
        let g = ground3();
        let e = chain3(&g);
        let a = PointSet::from_indices(&g, &[0, 1]).unwrap();
        let i = e.interior(&a).unwrap();
        assert_eq!(i.to_indices(), vec![0]);
    }

    #[test]
    fn closure_interior_duality_hand_case() {
        let g = ground3();
        let e = chain3(&g);
        let a = PointSet::from_indices(&g, &[1]).unwrap();
        // E[A] = X \ intr_{E^{-1}}(X \ A)
        let lhs = e.closure(&a).unwrap();
        let rhs = e
            .invert()
            .interior(&a.complement())
            .unwrap()
            .complement();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_applies_right_argument_first() {
        let g = ground3();
        let step01 = Entourage::from_pairs(&g, &[(0, 1)]).unwrap();
        let step12 = Entourage::from_pairs(&g, &[(1, 2)]).unwrap();
        // Apply (0,1) first, then (1,2): reaches (0,2).
        let through = step12.compose(&step01).unwrap();
        assert!(through.contains_pair(0, 2));
        assert_eq!(through.pair_count(), 1);
        // The other order has no shared middle point.
        let stuck = step01.compose(&step12).unwrap();
        assert!(stuck.is_empty_relation());
    }

    #[test]
    fn diagonal_is_identity_for_composition() {
        let g = ground3();
        let e = chain3(&g);
        let d = Entourage::diagonal(&g);
        assert_eq!(e.compose(&d).unwrap(), e);
        assert_eq!(d.compose(&e).unwrap(), e);
    }

    #[test]
    fn invert_of_composite_swaps_and_inverts() {
        let g = ground3();
        let e = Entourage::from_pairs(&g, &[(0, 1), (2, 2)]).unwrap();
        let f = Entourage::from_pairs(&g, &[(1, 2), (0, 0)]).unwrap();
        let lhs = e.compose(&f).unwrap().invert();
        let rhs = f.invert().compose(&e.invert()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn restrict_keeps_only_internal_pairs() {
        let g = ground3();
        let e = chain3(&g);
        let b = PointSet::from_indices(&g, &[0, 1]).unwrap();
        let r = e.restrict(&b).unwrap();
        let pairs: Vec<_> = r.iter_pairs().collect();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn ground_mismatch_is_an_error() {
        let g3 = ground3();
        let g4 = GroundSet::bare(4);
        let e = Entourage::diagonal(&g3);
        let a = PointSet::empty(&g4);
        assert!(matches!(
            e.closure(&a),
            Err(CoarseError::GroundMismatch { .. })
        ));
    }

    #[test]
    fn empty_ground_behaves() {
        let g = GroundSet::bare(0);
        assert_eq!(Entourage::full(&g), Entourage::diagonal(&g));
        assert!(Entourage::diagonal(&g).is_empty_relation());
        let a = PointSet::empty(&g);
        assert_eq!(Entourage::full(&g).closure(&a).unwrap(), a);
        assert!(PointSet::full(&g).is_empty());
    }

    #[test]
    fn metric_validation_rejects_asymmetry() {
        let table = vec![0, 1, 2, 0];
        assert!(GroundSet::with_metric(2, table, 0).is_err());
    }

    #[test]
    fn pointset_display_uses_labels() {
        let g = GroundSet::with_labels(2, vec!["a".into(), "b".into()]).unwrap();
        let s = PointSet::full(&g);
        assert_eq!(s.to_string(), "{a, b}");
    }
}
