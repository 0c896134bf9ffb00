//! Size classification of subsets of a coarse space.
//!
//! Nine mutually entangled predicates. All of them are monotone in the
//! entourage quantifier, so on a finite space each reduces to a statement
//! about the maximum entourage and its classes; `classify` computes those
//! reductions. `oracle_classify` ignores every reduction and evaluates the
//! raw definitions, quantifying entourages over all subsets of `emax` and
//! excision sets over all bounded sets. It exists to keep `classify`
//! honest and is capacity-guarded accordingly.
//!
//! Degenerate conventions are frozen here: over the empty ground set the
//! empty subset counts as large, thick, piecewise large, extralarge, and
//! thin, but not small, so that `small` never holds for a piecewise large
//! subset. Both classification paths share that convention.

use crate::error::{CoarseError, Result};
use crate::relation::{same_ground, PointSet};
use crate::space::CoarseSpace;

/// The nine size flags of one subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeFlags {
    pub large: bool,
    pub slim: bool,
    pub thick: bool,
    pub meshy: bool,
    pub piecewise_large: bool,
    pub small: bool,
    pub extralarge: bool,
    pub slim_interior: bool,
    pub thin: bool,
}

/// Classification result: the flags plus deterministic witness data.
///
/// Witness conventions: when `thick` holds, the least class (by least
/// member) contained in `A`; when `large` fails, the least class missed by
/// `A`; when `thin` holds, the excision set `A ∩ K` for the unique class
/// `K` holding two or more points of `A`, or the empty set when no class
/// does. Over the empty ground set no class witnesses exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub flags: SizeFlags,
    pub thick_witness: Option<PointSet>,
    pub large_missed_class: Option<PointSet>,
    pub thin_excision: Option<PointSet>,
}

fn check_grounds(c: &CoarseSpace, a: &PointSet) -> Result<()> {
    if same_ground(c.ground(), a.ground()) {
        Ok(())
    } else {
        Err(CoarseError::GroundMismatch {
            left: c.ground().size(),
            right: a.ground().size(),
        })
    }
}

fn empty_ground_report(c: &CoarseSpace) -> SizeReport {
    SizeReport {
        flags: SizeFlags {
            large: true,
            slim: false,
            thick: true,
            meshy: false,
            piecewise_large: true,
            small: false,
            extralarge: true,
            slim_interior: false,
            thin: true,
        },
        thick_witness: None,
        large_missed_class: None,
        thin_excision: Some(PointSet::empty(c.ground())),
    }
}

/// `A` is large when some entourage closure of it covers the space; at the
/// maximum entourage, exactly when `A` meets every class.
pub fn is_large(c: &CoarseSpace, a: &PointSet) -> Result<bool> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(true);
    }
    for class in c.components() {
        if class.is_disjoint(a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A` is thick when every entourage interior of it is inhabited; at the
/// maximum entourage, exactly when it contains a whole class.
pub fn is_thick(c: &CoarseSpace, a: &PointSet) -> Result<bool> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(true);
    }
    for class in c.components() {
        if class.is_subset(a)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `A` is piecewise large when some entourage closure of it is thick.
pub fn is_piecewise_large(c: &CoarseSpace, a: &PointSet) -> Result<bool> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(true);
    }
    is_thick(c, &c.gal(a)?)
}

/// `A` is small when the complement of every entourage closure of it is
/// large; evaluated at the maximum entourage.
pub fn is_small(c: &CoarseSpace, a: &PointSet) -> Result<bool> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(false);
    }
    is_large(c, &c.gal(a)?.complement())
}

/// `A` is extralarge when its core is large.
pub fn is_extralarge(c: &CoarseSpace, a: &PointSet) -> Result<bool> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(true);
    }
    is_large(c, &c.core(a)?)
}

/// `A` is thin when, modulo excising one bounded set, distinct remaining
/// points have disjoint entourage balls; at the maximum entourage, exactly
/// when at most one class holds two or more points of `A`.
pub fn is_thin(c: &CoarseSpace, a: &PointSet) -> Result<bool> {
    check_grounds(c, a)?;
    Ok(multi_point_classes(c, a)?.len() <= 1)
}

fn multi_point_classes(c: &CoarseSpace, a: &PointSet) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (id, class) in c.components().iter().enumerate() {
        if class.intersection(a)?.cardinality() >= 2 {
            out.push(id);
        }
    }
    Ok(out)
}

/// Full classification via the class reductions, with witnesses.
pub fn classify(c: &CoarseSpace, a: &PointSet) -> Result<SizeReport> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(empty_ground_report(c));
    }
    let large = is_large(c, a)?;
    let thick_witness = {
        let mut found = None;
        for class in c.components() {
            if class.is_subset(a)? {
                found = Some(class.clone());
                break;
            }
        }
        found
    };
    let large_missed_class = if large {
        None
    } else {
        let mut found = None;
        for class in c.components() {
            if class.is_disjoint(a)? {
                found = Some(class.clone());
                break;
            }
        }
        found
    };
    let thick = thick_witness.is_some();
    let piecewise_large = is_piecewise_large(c, a)?;
    let small = is_small(c, a)?;
    let extralarge = is_extralarge(c, a)?;
    let multi = multi_point_classes(c, a)?;
    let thin = multi.len() <= 1;
    let thin_excision = if thin {
        let b = match multi.first() {
            Some(&id) => c.components()[id].intersection(a)?,
            None => PointSet::empty(c.ground()),
        };
        Some(b)
    } else {
        None
    };
    Ok(SizeReport {
        flags: SizeFlags {
            large,
            slim: !large,
            thick,
            meshy: !thick,
            piecewise_large,
            small,
            extralarge,
            slim_interior: !extralarge,
            thin,
        },
        thick_witness,
        large_missed_class,
        thin_excision,
    })
}

/// Definitional oracle. Quantifies candidate entourages over every subset
/// of `emax` (so the maximum entourage may hold at most 16 pairs) and
/// excision sets over every bounded set. Witnesses follow the same
/// conventions as `classify`.
pub fn oracle_classify(c: &CoarseSpace, a: &PointSet) -> Result<SizeReport> {
    check_grounds(c, a)?;
    if c.ground().is_empty() {
        return Ok(empty_ground_report(c));
    }
    let pair_count = c.emax().pair_count();
    if pair_count > 16 {
        return Err(CoarseError::CapacityExceeded {
            what: "definitional size oracle (pairs of the maximum entourage)",
            limit: 16,
            actual: pair_count,
        });
    }
    let n = c.ground().size();
    debug_assert!(n <= 16);
    let pairs: Vec<(u32, u32)> = c
        .emax()
        .iter_pairs()
        .map(|(x, y)| (x as u32, y as u32))
        .collect();
    let k = pairs.len();
    let full: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    let mask_of = |s: &PointSet| -> u32 {
        let mut m = 0u32;
        for i in s.iter() {
            m |= 1 << i;
        }
        m
    };
    let a_mask = mask_of(a);

    let closure = |e: u32, s: u32| -> u32 {
        let mut out = 0u32;
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if e >> i & 1 == 1 && s >> x & 1 == 1 {
                out |= 1 << y;
            }
        }
        out
    };
    let interior = |e: u32, s: u32| -> u32 {
        let mut out = full;
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if e >> i & 1 == 1 && s >> y & 1 == 0 {
                out &= !(1 << x);
            }
        }
        out
    };

    let e_count: u64 = 1u64 << k;
    let mut large_memo: Vec<Option<bool>> = vec![None; 1 << n];
    let mut thick_memo: Vec<Option<bool>> = vec![None; 1 << n];
    // Declared as closures over the memo tables would fight the borrow
    // checker; plain loops with explicit memo access keep it simple.
    macro_rules! large_def {
        ($s:expr) => {{
            let s: u32 = $s;
            match large_memo[s as usize] {
                Some(v) => v,
                None => {
                    let mut v = false;
                    for e in 0..e_count {
                        if closure(e as u32, s) == full {
                            v = true;
                            break;
                        }
                    }
                    large_memo[s as usize] = Some(v);
                    v
                }
            }
        }};
    }
    macro_rules! thick_def {
        ($s:expr) => {{
            let s: u32 = $s;
            match thick_memo[s as usize] {
                Some(v) => v,
                None => {
                    let mut v = true;
                    for e in 0..e_count {
                        if interior(e as u32, s) == 0 {
                            v = false;
                            break;
                        }
                    }
                    thick_memo[s as usize] = Some(v);
                    v
                }
            }
        }};
    }

    let large = large_def!(a_mask);
    let thick = thick_def!(a_mask);
    let piecewise_large = {
        let mut v = false;
        for e in 0..e_count {
            let s = closure(e as u32, a_mask);
            if thick_def!(s) {
                v = true;
                break;
            }
        }
        v
    };
    let small = {
        let mut v = true;
        for e in 0..e_count {
            let s = full & !closure(e as u32, a_mask);
            if !large_def!(s) {
                v = false;
                break;
            }
        }
        v
    };
    let extralarge = {
        let mut v = true;
        for e in 0..e_count {
            let s = interior(e as u32, a_mask);
            if !large_def!(s) {
                v = false;
                break;
            }
        }
        v
    };

    // Bounded sets: all subsets of single classes, plus the empty set.
    let mut bounded: Vec<u32> = vec![0];
    for class in c.components() {
        let cm = mask_of(class);
        // Iterate the nonzero submasks of cm.
        let mut sub = cm;
        while sub != 0 {
            bounded.push(sub);
            sub = (sub - 1) & cm;
        }
    }
    let a_points: Vec<u32> = (0..n as u32).filter(|i| a_mask >> i & 1 == 1).collect();
    let thin = {
        let mut v = true;
        'outer: for e in 0..e_count {
            let e = e as u32;
            let mut balls = vec![0u32; n];
            for (i, &(x, y)) in pairs.iter().enumerate() {
                if e >> i & 1 == 1 {
                    balls[x as usize] |= 1 << y;
                }
            }
            let mut excisable = false;
            'b: for &b in &bounded {
                let kept: Vec<u32> = a_points
                    .iter()
                    .copied()
                    .filter(|&p| b >> p & 1 == 0)
                    .collect();
                for (i, &x) in kept.iter().enumerate() {
                    for &y in &kept[i + 1..] {
                        if balls[x as usize] & balls[y as usize] != 0 {
                            continue 'b;
                        }
                    }
                }
                excisable = true;
                break;
            }
            if !excisable {
                v = false;
                break 'outer;
            }
        }
        v
    };

    // Witnesses by the shared reporting convention.
    let thick_witness = if thick {
        let mut found = None;
        for class in c.components() {
            if class.is_subset(a)? {
                found = Some(class.clone());
                break;
            }
        }
        found
    } else {
        None
    };
    let large_missed_class = if large {
        None
    } else {
        let mut found = None;
        for class in c.components() {
            if class.is_disjoint(a)? {
                found = Some(class.clone());
                break;
            }
        }
        found
    };
    let thin_excision = if thin {
        let multi = multi_point_classes(c, a)?;
        let b = match multi.first() {
            Some(&id) => c.components()[id].intersection(a)?,
            None => PointSet::empty(c.ground()),
        };
        Some(b)
    } else {
        None
    };

    Ok(SizeReport {
        flags: SizeFlags {
            large,
            slim: !large,
            thick,
            meshy: !thick,
            piecewise_large,
            small,
            extralarge,
            slim_interior: !extralarge,
            thin,
        },
        thick_witness,
        large_missed_class,
        thin_excision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{Entourage, GroundSet};

    fn two_classes() -> CoarseSpace {
        // Classes {0, 1} and {2}.
        let g = GroundSet::bare(3);
        let gen = Entourage::from_pairs(&g, &[(0, 1)]).unwrap();
        CoarseSpace::generate(&g, vec![gen]).unwrap()
    }

    #[test]
    fn transversal_is_large_and_thick() {
        let c = two_classes();
        let a = PointSet::from_indices(c.ground(), &[0, 2]).unwrap();
        let r = classify(&c, &a).unwrap();
        assert!(r.flags.large);
        assert!(r.flags.thick);
        assert_eq!(r.thick_witness.unwrap().to_indices(), vec![2]);
        assert!(r.flags.piecewise_large);
        assert!(!r.flags.small);
        assert!(!r.flags.extralarge);
    }

    #[test]
    fn single_point_misses_a_class() {
        let c = two_classes();
        let a = PointSet::from_indices(c.ground(), &[0]).unwrap();
        let r = classify(&c, &a).unwrap();
        assert!(!r.flags.large);
        assert!(r.flags.slim);
        assert_eq!(r.large_missed_class.unwrap().to_indices(), vec![2]);
        assert!(!r.flags.small);
        assert!(r.flags.thin);
        assert!(r.thin_excision.unwrap().is_empty());
    }

    #[test]
    fn empty_subset_is_small_on_inhabited_ground() {
        let c = two_classes();
        let a = PointSet::empty(c.ground());
        let r = classify(&c, &a).unwrap();
        assert!(r.flags.small);
        assert!(!r.flags.piecewise_large);
        assert!(r.flags.meshy);
        assert!(r.flags.thin);
    }

    #[test]
    fn thinness_counts_doubly_occupied_classes() {
        let g = GroundSet::bare(4);
        let c = CoarseSpace::from_partition(&g, &[0, 0, 1, 1]).unwrap();
        let all = PointSet::full(&g);
        assert!(!is_thin(&c, &all).unwrap());
        let a = PointSet::from_indices(&g, &[0, 1, 2]).unwrap();
        let r = classify(&c, &a).unwrap();
        assert!(r.flags.thin);
        assert_eq!(r.thin_excision.unwrap().to_indices(), vec![0, 1]);
    }

    #[test]
    fn full_subset_is_extralarge() {
        let c = two_classes();
        let a = PointSet::full(c.ground());
        let r = classify(&c, &a).unwrap();
        assert!(r.flags.extralarge);
        assert!(!r.flags.slim_interior);
        // Thick witness is the least class.
        assert_eq!(r.thick_witness.unwrap().to_indices(), vec![0, 1]);
    }

    #[test]
    fn empty_ground_conventions_frozen() {
        let g = GroundSet::bare(0);
        let c = CoarseSpace::generate(&g, vec![]).unwrap();
        let a = PointSet::empty(&g);
        let r = classify(&c, &a).unwrap();
        assert!(r.flags.large);
        assert!(r.flags.thick);
        assert!(r.flags.extralarge);
        assert!(r.flags.thin);
        assert!(r.flags.piecewise_large);
        assert!(!r.flags.small);
        assert_eq!(r, oracle_classify(&c, &a).unwrap());
    }

    #[test]
    fn oracle_agrees_on_all_three_point_spaces() {
        // All five partitions of a three-point ground set.
        let partitions: [&[usize]; 5] = [
            &[0, 0, 0],
            &[0, 0, 1],
            &[0, 1, 0],
            &[0, 1, 1],
            &[0, 1, 2],
        ];
        let g = GroundSet::bare(3);
        for p in partitions {
            let c = CoarseSpace::from_partition(&g, p).unwrap();
            for bits in 0u32..8 {
                let members: Vec<usize> =
                    (0..3).filter(|i| bits >> i & 1 == 1).collect();
                let a = PointSet::from_indices(&g, &members).unwrap();
                assert_eq!(
                    classify(&c, &a).unwrap(),
                    oracle_classify(&c, &a).unwrap(),
                    "partition {p:?}, subset {members:?}"
                );
            }
        }
    }

    #[test]
    fn oracle_refuses_oversized_emax() {
        let g = GroundSet::bare(5);
        let c = CoarseSpace::from_partition(&g, &[0; 5]).unwrap();
        let a = PointSet::empty(&g);
        assert!(matches!(
            oracle_classify(&c, &a),
            Err(CoarseError::CapacityExceeded { .. })
        ));
    }
}
