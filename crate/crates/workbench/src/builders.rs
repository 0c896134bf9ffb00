//! Ready-made windows and the policies they share.
//!
//! Every builder labels points with their underlying values, puts the
//! origin at the natural zero, and derives the exclusion grid from the
//! horizon: unit steps up to a quarter of the horizon, capped at 2000.
//! Keeping the grid well short of the horizon is what lets a profile
//! answer "none" honestly; a grid reaching the horizon could excise the
//! entire window and make every question vacuous.

use std::collections::HashSet;

use coarse_core::error::{CoarseError, Result};
use coarse_core::relation::{GroundSet, PointSet};
use coarse_core::window::WindowSpace;

/// Scale grid used when the caller does not pick one.
pub const DEFAULT_SCALES: &[u64] = &[1, 2, 3, 5, 8, 13];

/// Unit-step exclusion grid: `0..=min(horizon / 4, 2000)`.
pub fn default_exclusion_grid(horizon: u64) -> Vec<u64> {
    (0..=(horizon / 4).min(2000)).collect()
}

fn chosen_scales(scales: Option<Vec<u64>>) -> Vec<u64> {
    scales.unwrap_or_else(|| DEFAULT_SCALES.to_vec())
}

/// Window over explicit integer points on a line, with the least point as
/// origin. Values are sorted and deduplicated.
pub fn line_window(values: &[i64], scales: Option<Vec<u64>>) -> Result<WindowSpace> {
    let mut pts: Vec<i64> = values.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return Err(CoarseError::InvalidWindow {
            reason: "a window needs at least one point".into(),
        });
    }
    let n = pts.len();
    let mut metric = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            metric[i * n + j] = pts[i].abs_diff(pts[j]);
        }
    }
    let labels = pts.iter().map(|p| p.to_string()).collect();
    let ground = GroundSet::with_labeled_metric(n, labels, metric, 0)?;
    let horizon = pts[n - 1].abs_diff(pts[0]);
    let coords = Some(pts.iter().map(|&p| vec![p - pts[0]]).collect());
    WindowSpace::new(
        &ground,
        horizon,
        chosen_scales(scales),
        default_exclusion_grid(horizon),
        coords,
    )
}

/// The perfect squares up to `n`, as a window.
pub fn squares_window(n: u64, scales: Option<Vec<u64>>) -> Result<WindowSpace> {
    let pts: Vec<i64> = (0u64..)
        .map(|k| k * k)
        .take_while(|&s| s <= n)
        .map(|s| s as i64)
        .collect();
    line_window(&pts, scales)
}

/// The squares together with the squares shifted by one, up to `n`.
pub fn squares_shifted_union_window(n: u64, scales: Option<Vec<u64>>) -> Result<WindowSpace> {
    let mut pts: Vec<i64> = (0u64..)
        .map(|k| k * k)
        .take_while(|&s| s <= n)
        .map(|s| s as i64)
        .collect();
    let shifted: Vec<i64> = (0u64..)
        .map(|k| k * k + 1)
        .take_while(|&s| s <= n)
        .map(|s| s as i64)
        .collect();
    pts.extend(shifted);
    line_window(&pts, scales)
}

/// The integer interval `0..=n`, as a window.
pub fn integer_interval_window(n: u64, scales: Option<Vec<u64>>) -> Result<WindowSpace> {
    let pts: Vec<i64> = (0..=n as i64).collect();
    line_window(&pts, scales)
}

/// A window onto the group of integers: `-half..=half` with the word
/// metric (absolute difference) and the origin at zero.
pub fn group_line_window(half: u64, scales: Option<Vec<u64>>) -> Result<WindowSpace> {
    let h = half as i64;
    let pts: Vec<i64> = (-h..=h).collect();
    let n = pts.len();
    let mut metric = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            metric[i * n + j] = pts[i].abs_diff(pts[j]);
        }
    }
    let labels = pts.iter().map(|p| p.to_string()).collect();
    let ground = GroundSet::with_labeled_metric(n, labels, metric, half as usize)?;
    let coords = Some(pts.iter().map(|&p| vec![p]).collect());
    WindowSpace::new(
        &ground,
        half,
        chosen_scales(scales),
        default_exclusion_grid(half),
        coords,
    )
}

/// A window onto the integer plane: `[-half, half]^2` with the taxicab
/// metric and the origin at (0, 0).
pub fn integer_grid_window(half: u64, scales: Option<Vec<u64>>) -> Result<WindowSpace> {
    let h = half as i64;
    let pts: Vec<(i64, i64)> = (-h..=h)
        .flat_map(|x| (-h..=h).map(move |y| (x, y)))
        .collect();
    let n = pts.len();
    let mut metric = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            metric[i * n + j] = pts[i].0.abs_diff(pts[j].0) + pts[i].1.abs_diff(pts[j].1);
        }
    }
    let labels = pts.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let origin = pts
        .iter()
        .position(|&p| p == (0, 0))
        .expect("the grid contains its center");
    let ground = GroundSet::with_labeled_metric(n, labels, metric, origin)?;
    let horizon = 2 * half;
    let coords = Some(pts.iter().map(|&(x, y)| vec![x, y]).collect());
    WindowSpace::new(
        &ground,
        horizon,
        chosen_scales(scales),
        default_exclusion_grid(horizon),
        coords,
    )
}

/// Largeness via translation: covers the core with translates of `A` by
/// the radius-r taxicab ball, which on an abelian group is the same
/// whether translates act on the left or the right. Needs a window built
/// with coordinates. The entourage route is computed alongside and the
/// two answers are asserted to agree.
pub fn left_large_at(w: &WindowSpace, a: &PointSet, r: u64) -> Result<bool> {
    let coords = w.coords().ok_or_else(|| CoarseError::InvalidWindow {
        reason: "translation route needs a window built with coordinates".into(),
    })?;
    let direct = w.large_at(a, r)?;
    let dim = coords.first().map(|c| c.len()).unwrap_or(0);
    if dim > 3 {
        return Err(CoarseError::CapacityExceeded {
            what: "translation ball enumeration (coordinate dimension)",
            limit: 3,
            actual: dim,
        });
    }
    let mut offsets: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![0i64; dim];
    fn fill(offsets: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, axis: usize, budget: i64) {
        if axis == cur.len() {
            offsets.push(cur.clone());
            return;
        }
        for v in -budget..=budget {
            cur[axis] = v;
            fill(offsets, cur, axis + 1, budget - v.abs());
        }
        cur[axis] = 0;
    }
    fill(&mut offsets, &mut cur, 0, r as i64);
    let mut covered: HashSet<Vec<i64>> = HashSet::new();
    for p in a.iter() {
        for off in &offsets {
            let shifted: Vec<i64> = coords[p].iter().zip(off).map(|(c, o)| c + o).collect();
            covered.insert(shifted);
        }
    }
    let translated = w
        .core_region(r)
        .iter()
        .all(|p| covered.contains(&coords[p]));
    assert_eq!(
        translated, direct,
        "translation covering and entourage closure disagree at scale {r}"
    );
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_builder_matches_hand_counts() {
        let w = squares_window(40000, None).unwrap();
        assert_eq!(w.ground().size(), 201);
        assert_eq!(w.horizon(), 40000);
        assert_eq!(w.exclusion_grid().last(), Some(&2000));
        assert_eq!(w.scales(), DEFAULT_SCALES);
        assert_eq!(w.ground().label(2), Some("4"));
    }

    #[test]
    fn union_builder_dedups_overlap() {
        // 0..=20 squared gives 21 squares; 20 shifted values stay in range
        // and two of them (1, 2) collide with nothing: only 0+1 and 1+1
        // overlap the squares at 1.
        let w = squares_shifted_union_window(400, None).unwrap();
        let squares = 21;
        let shifted_in_range = 20;
        let overlap = 1; // 1 = 0^2 + 1 is already a square
        assert_eq!(w.ground().size(), squares + shifted_in_range - overlap);
    }

    #[test]
    fn group_window_is_symmetric_about_zero() {
        let w = group_line_window(5, Some(vec![1, 2])).unwrap();
        assert_eq!(w.ground().size(), 11);
        assert_eq!(w.horizon(), 5);
        assert_eq!(w.ground().label(w.origin()), Some("0"));
        assert_eq!(w.radial(0).unwrap(), 5);
    }

    #[test]
    fn grid_window_uses_taxicab_distance() {
        let w = integer_grid_window(2, Some(vec![1, 2])).unwrap();
        assert_eq!(w.ground().size(), 25);
        assert_eq!(w.horizon(), 4);
        let corner = w
            .ground()
            .label(0)
            .map(|l| l.to_string())
            .unwrap();
        assert_eq!(corner, "(-2,-2)");
        assert_eq!(w.radial(0).unwrap(), 4);
    }

    #[test]
    fn translation_route_agrees_with_entourage_route() {
        let w = group_line_window(10, Some(vec![1, 2, 3])).unwrap();
        let evens: Vec<usize> = (0..w.ground().size())
            .filter(|&i| {
                w.ground()
                    .label(i)
                    .unwrap()
                    .parse::<i64>()
                    .unwrap()
                    .rem_euclid(2)
                    == 0
            })
            .collect();
        let a = PointSet::from_indices(w.ground(), &evens).unwrap();
        assert!(left_large_at(&w, &a, 1).unwrap());
        let sparse = PointSet::from_indices(w.ground(), &[0, 10, 20]).unwrap();
        assert!(!left_large_at(&w, &sparse, 2).unwrap());
        let g2 = integer_grid_window(3, Some(vec![1, 2])).unwrap();
        let all = PointSet::full(g2.ground());
        assert!(left_large_at(&g2, &all, 1).unwrap());
    }

    #[test]
    fn interval_window_covers_every_integer() {
        let w = integer_interval_window(30, Some(vec![1])).unwrap();
        assert_eq!(w.ground().size(), 31);
        let all = PointSet::full(w.ground());
        assert!(w.large_at(&all, 1).unwrap());
        assert!(w.thick_at(&all, 1).unwrap());
    }
}
