//! Coarse structures on finite ground sets.
//!
//! A structure generated by finitely many relations on a finite ground set
//! is determined by its maximum entourage `emax`: closing the generators
//! under diagonal, inversion, union, and composition yields the smallest
//! equivalence relation containing them, and the structure is exactly the
//! down-set of that relation. Membership, components, boundedness, galaxy
//! and core all reduce to `emax` and its classes.

use crate::error::{CoarseError, Result};
use crate::relation::{same_ground, Entourage, Ground, PointSet};

/// A finitely generated coarse structure, held as its generators plus the
/// computed maximum entourage and class partition.
#[derive(Debug, Clone)]
pub struct CoarseSpace {
    ground: Ground,
    generators: Vec<Entourage>,
    emax: Entourage,
    classes: Vec<PointSet>,
    class_of: Vec<usize>,
}

/// Union-find over point indices; the working core of `generate`.
struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

impl CoarseSpace {
    /// Generate the coarse structure spanned by `generators`: `emax` is the
    /// least fixpoint of `R -> R ∪ Δ ∪ R⁻¹ ∪ R∘R ∪ (⋃ generators)`, i.e.
    /// the equivalence closure of the generators together with the diagonal.
    pub fn generate(ground: &Ground, generators: Vec<Entourage>) -> Result<CoarseSpace> {
        for g in &generators {
            if !same_ground(ground, g.ground()) {
                return Err(CoarseError::GroundMismatch {
                    left: ground.size(),
                    right: g.ground().size(),
                });
            }
        }
        let n = ground.size();
        let mut dsu = Dsu::new(n);
        for g in &generators {
            for (x, y) in g.iter_pairs() {
                dsu.union(x, y);
            }
        }
        // Classes ordered by least member; ids follow that order.
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<PointSet> = Vec::new();
        for x in 0..n {
            let root = dsu.find(x);
            if class_of[root] == usize::MAX {
                class_of[root] = classes.len();
                classes.push(PointSet::empty(ground));
            }
            let id = class_of[root];
            class_of[x] = id;
            classes[id].insert(x)?;
        }
        for x in 0..n {
            class_of[x] = class_of[dsu.find(x)];
        }
        let mut emax = Entourage::empty(ground);
        for class in &classes {
            for x in class.iter() {
                for y in class.iter() {
                    emax.insert_pair(x, y)?;
                }
            }
        }
        Ok(CoarseSpace {
            ground: ground.clone(),
            generators,
            emax,
            classes,
            class_of,
        })
    }

    /// The structure whose classes are given directly: `class_of[x]` names
    /// the class of `x`. Convenience for enumerating all structures on a
    /// small ground set.
    pub fn from_partition(ground: &Ground, class_of: &[usize]) -> Result<CoarseSpace> {
        if class_of.len() != ground.size() {
            return Err(CoarseError::MapNotTotal {
                got: class_of.len(),
                expected: ground.size(),
            });
        }
        let mut gen = Entourage::diagonal(ground);
        for x in 0..class_of.len() {
            for y in 0..class_of.len() {
                if class_of[x] == class_of[y] {
                    gen.insert_pair(x, y)?;
                }
            }
        }
        CoarseSpace::generate(ground, vec![gen])
    }

    /// The ideal coarse structure: generated by `Δ ∪ (A x A)` for each `A`
    /// in the given family. Any list is accepted; the generated structure
    /// is taken.
    pub fn ideal_coarse(ground: &Ground, family: &[PointSet]) -> Result<CoarseSpace> {
        let mut generators = Vec::with_capacity(family.len().max(1));
        if family.is_empty() {
            generators.push(Entourage::diagonal(ground));
        }
        for a in family {
            if !same_ground(ground, a.ground()) {
                return Err(CoarseError::GroundMismatch {
                    left: ground.size(),
                    right: a.ground().size(),
                });
            }
            let mut g = Entourage::diagonal(ground);
            for x in a.iter() {
                for y in a.iter() {
                    g.insert_pair(x, y)?;
                }
            }
            generators.push(g);
        }
        CoarseSpace::generate(ground, generators)
    }

    /// The satellite structure of a bounded-set family: the ideal coarse
    /// structure over its maximal members.
    pub fn satellite(ground: &Ground, bornology: &Bornology) -> Result<CoarseSpace> {
        CoarseSpace::ideal_coarse(ground, bornology.maximal())
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn generators(&self) -> &[Entourage] {
        &self.generators
    }

    pub fn emax(&self) -> &Entourage {
        &self.emax
    }

    /// Membership test for the structure: a relation is an entourage here
    /// iff it is contained in `emax`.
    pub fn contains(&self, e: &Entourage) -> Result<bool> {
        e.is_subset(&self.emax)
    }

    /// The classes of `emax`, ordered by least member.
    pub fn components(&self) -> &[PointSet] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> Result<usize> {
        if x >= self.ground.size() {
            return Err(CoarseError::IndexOutOfRange {
                index: x,
                size: self.ground.size(),
            });
        }
        Ok(self.class_of[x])
    }

    /// A space with no points or a single class is connected.
    pub fn is_connected(&self) -> bool {
        self.classes.len() <= 1
    }

    /// The galaxy of `A`: its closure under the maximum entourage.
    pub fn gal(&self, a: &PointSet) -> Result<PointSet> {
        self.emax.closure(a)
    }

    /// The core of `A`: its interior under the maximum entourage.
    pub fn core(&self, a: &PointSet) -> Result<PointSet> {
        self.emax.interior(a)
    }

    /// The bounded sets of the structure: those `B` with `B x B` an
    /// entourage, i.e. the subsets of single classes. Represented by the
    /// maximal members, which are exactly the classes.
    pub fn induced_bornology(&self) -> Bornology {
        Bornology {
            ground: self.ground.clone(),
            maximal: self.classes.clone(),
        }
    }

    pub fn is_bounded(&self, a: &PointSet) -> Result<bool> {
        if !same_ground(&self.ground, a.ground()) {
            return Err(CoarseError::GroundMismatch {
                left: self.ground.size(),
                right: a.ground().size(),
            });
        }
        if a.is_empty() {
            return Ok(true);
        }
        for class in &self.classes {
            if a.is_subset(class)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// A family of bounded sets over a ground set, held by its maximal members.
/// The maximal members of a finite prebornology form a disjoint cover, so
/// the constructor enforces exactly that; the down-set of the members is the
/// bounded family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bornology {
    ground: Ground,
    maximal: Vec<PointSet>,
}

impl Bornology {
    /// Canonicalize and validate a maximal-member family: empties dropped,
    /// duplicates and dominated members removed, members sorted. The family
    /// must cover the ground (every point bounded) and be pairwise disjoint
    /// (otherwise the non-disjoint-union axiom would force a larger member).
    pub fn from_maximal(ground: &Ground, members: Vec<PointSet>) -> Result<Bornology> {
        let mut kept: Vec<PointSet> = Vec::new();
        for m in members {
            if !same_ground(ground, m.ground()) {
                return Err(CoarseError::GroundMismatch {
                    left: ground.size(),
                    right: m.ground().size(),
                });
            }
            if !m.is_empty() {
                kept.push(m);
            }
        }
        kept.sort_by(|a, b| a.cmp_members(b));
        kept.dedup();
        let dominated: Vec<bool> = kept
            .iter()
            .map(|m| {
                kept.iter()
                    .any(|other| other != m && m.is_subset(other).unwrap_or(false))
            })
            .collect();
        let maximal: Vec<PointSet> = kept
            .into_iter()
            .zip(dominated)
            .filter_map(|(m, dom)| if dom { None } else { Some(m) })
            .collect();
        let mut cover = PointSet::empty(ground);
        for m in &maximal {
            cover = cover.union(m)?;
        }
        if cover != PointSet::full(ground) {
            return Err(CoarseError::InvalidBornology {
                reason: "maximal members do not cover the ground set".into(),
            });
        }
        for (i, m) in maximal.iter().enumerate() {
            for other in &maximal[i + 1..] {
                if !m.is_disjoint(other)? {
                    return Err(CoarseError::InvalidBornology {
                        reason: format!(
                            "maximal members {m} and {other} overlap; their union would be bounded but dominates both"
                        ),
                    });
                }
            }
        }
        Ok(Bornology { ground: ground.clone(), maximal })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn maximal(&self) -> &[PointSet] {
        &self.maximal
    }

    pub fn is_bounded(&self, a: &PointSet) -> Result<bool> {
        if !same_ground(&self.ground, a.ground()) {
            return Err(CoarseError::GroundMismatch {
                left: self.ground.size(),
                right: a.ground().size(),
            });
        }
        if a.is_empty() {
            return Ok(true);
        }
        for m in &self.maximal {
            if a.is_subset(m)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// True when the family is closed under arbitrary (not just linked)
    /// unions; with a disjoint maximal cover that means a single member.
    pub fn is_bornology(&self) -> bool {
        self.maximal.len() <= 1
    }

    /// The prebornological union rule: defined only when both operands are
    /// bounded and they are linked (non-disjoint, or one of them empty).
    /// When the rule applies the union is bounded and returned.
    pub fn union_bounded_prebornological(
        &self,
        a: &PointSet,
        b: &PointSet,
    ) -> Result<Option<PointSet>> {
        if !self.is_bounded(a)? || !self.is_bounded(b)? {
            return Ok(None);
        }
        let linked = a.is_empty() || b.is_empty() || !a.is_disjoint(b)?;
        if !linked {
            return Ok(None);
        }
        let u = a.union(b)?;
        debug_assert!(self.is_bounded(&u)?);
        Ok(Some(u))
    }

    /// The unrestricted union rule of a full bornology: the union is
    /// returned exactly when it happens to be bounded here.
    pub fn union_bounded_unrestricted(
        &self,
        a: &PointSet,
        b: &PointSet,
    ) -> Result<Option<PointSet>> {
        let u = a.union(b)?;
        Ok(if self.is_bounded(&u)? { Some(u) } else { None })
    }
}
