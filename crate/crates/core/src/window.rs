//! Finite windows onto unbounded metric spaces.
//!
//! A window is a metric ground set with a distinguished origin, a horizon
//! bounding every point's distance from the origin, a grid of metric
//! scales at which questions may be asked, and a grid of excision radii.
//! Scale-r entourages are metric thresholds. Universal statements are
//! evaluated on the core region, the set of points far enough from the
//! horizon that the relevant balls are complete; existential witnesses may
//! sit anywhere in the window. Questions whose answer depends on points
//! beyond the horizon come back as `None` rather than a guess.

use crate::error::{CoarseError, Result};
use crate::relation::{same_ground, Entourage, Ground, PointSet};

/// A finite window onto a metric space.
#[derive(Debug, Clone)]
pub struct WindowSpace {
    ground: Ground,
    horizon: u64,
    scales: Vec<u64>,
    exclusion_grid: Vec<u64>,
    coords: Option<Vec<Vec<i64>>>,
}

/// One scale's worth of an excision profile.
///
/// `required_radius` is the least excision radius (around the origin) that
/// removes every colliding pair: the maximum over colliding pairs of the
/// nearer endpoint's distance from the origin, or zero when nothing
/// collides. `grid_entry` is the first exclusion-grid value at least that
/// big, or `None` when the grid tops out below it, meaning the window
/// cannot certify any radius on the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileEntry {
    pub scale: u64,
    pub collision_count: usize,
    pub farthest_pair: Option<(usize, usize)>,
    pub required_radius: u64,
    pub grid_entry: Option<u64>,
}

/// Excision profile across the scale grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcisionProfile {
    pub entries: Vec<ProfileEntry>,
}

impl ExcisionProfile {
    pub fn entry_at(&self, scale: u64) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.scale == scale)
    }
}

/// Result of a slow-oscillation check at one scale and threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SoReport {
    pub scale: u64,
    pub eps: f64,
    pub offender_count: usize,
    /// Farthest offending point and its distance from the origin.
    pub farthest_offender: Option<(usize, u64)>,
    /// First grid radius past every offender; `None` when the grid tops
    /// out before the farthest offender.
    pub grid_entry: Option<u64>,
}

/// A function certifying non-thinness beyond the grid: it oscillates past
/// every grid radius at the matched scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SoWitness {
    pub values: Vec<f64>,
    /// Scale at which the oscillation is guaranteed: twice the collision
    /// scale, since a colliding pair sits in each other's doubled balls.
    pub matched_scale: u64,
    pub pair: (usize, usize),
}

impl WindowSpace {
    pub fn new(
        ground: &Ground,
        horizon: u64,
        scales: Vec<u64>,
        exclusion_grid: Vec<u64>,
        coords: Option<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        if !ground.has_metric() {
            return Err(CoarseError::NoMetric);
        }
        let origin = ground.origin()?;
        for p in 0..ground.size() {
            if ground.dist(origin, p)? > horizon {
                return Err(CoarseError::InvalidWindow {
                    reason: format!(
                        "point {p} lies {} from the origin, past the horizon {horizon}",
                        ground.dist(origin, p)?
                    ),
                });
            }
        }
        if scales.is_empty() {
            return Err(CoarseError::InvalidWindow {
                reason: "scale grid is empty".into(),
            });
        }
        if scales[0] == 0 {
            return Err(CoarseError::InvalidWindow {
                reason: "scales must be at least 1".into(),
            });
        }
        if !scales.windows(2).all(|w| w[0] < w[1]) {
            return Err(CoarseError::InvalidWindow {
                reason: "scales must be strictly increasing".into(),
            });
        }
        if exclusion_grid.is_empty() {
            return Err(CoarseError::InvalidWindow {
                reason: "exclusion grid is empty".into(),
            });
        }
        if !exclusion_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(CoarseError::InvalidWindow {
                reason: "exclusion grid must be strictly increasing".into(),
            });
        }
        if *exclusion_grid.last().unwrap() > horizon {
            return Err(CoarseError::InvalidWindow {
                reason: "exclusion grid reaches past the horizon".into(),
            });
        }
        if let Some(cs) = &coords {
            if cs.len() != ground.size() {
                return Err(CoarseError::InvalidWindow {
                    reason: format!(
                        "{} coordinate rows for {} points",
                        cs.len(),
                        ground.size()
                    ),
                });
            }
            let dim = cs.first().map(|c| c.len()).unwrap_or(0);
            for (p, c) in cs.iter().enumerate() {
                if c.len() != dim {
                    return Err(CoarseError::InvalidWindow {
                        reason: format!("coordinate row {p} has mixed dimension"),
                    });
                }
            }
            // The coordinates must reproduce the metric, otherwise the
            // translation-based dual routes they enable would be unsound.
            for x in 0..ground.size() {
                for y in 0..ground.size() {
                    let l1: u64 = cs[x]
                        .iter()
                        .zip(&cs[y])
                        .map(|(a, b)| a.abs_diff(*b))
                        .sum();
                    if l1 != ground.dist(x, y)? {
                        return Err(CoarseError::InvalidWindow {
                            reason: format!(
                                "coordinates disagree with the metric at ({x}, {y})"
                            ),
                        });
                    }
                }
            }
        }
        Ok(WindowSpace {
            ground: ground.clone(),
            horizon,
            scales,
            exclusion_grid,
            coords,
        })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn scales(&self) -> &[u64] {
        &self.scales
    }

    pub fn exclusion_grid(&self) -> &[u64] {
        &self.exclusion_grid
    }

    pub fn coords(&self) -> Option<&Vec<Vec<i64>>> {
        self.coords.as_ref()
    }

    pub fn origin(&self) -> usize {
        self.ground.origin().expect("validated at construction")
    }

    /// Distance from the origin.
    pub fn radial(&self, p: usize) -> Result<u64> {
        self.ground.dist(self.origin(), p)
    }

    fn require_scale(&self, r: u64) -> Result<()> {
        if self.scales.contains(&r) {
            Ok(())
        } else {
            Err(CoarseError::ScaleNotOnGrid { scale: r })
        }
    }

    fn check_subset(&self, a: &PointSet) -> Result<()> {
        if same_ground(a.ground(), &self.ground) {
            Ok(())
        } else {
            Err(CoarseError::GroundMismatch {
                left: a.ground().size(),
                right: self.ground.size(),
            })
        }
    }

    /// The scale-r entourage: pairs at distance at most r.
    pub fn entourage_at(&self, r: u64) -> Entourage {
        let n = self.ground.size();
        let mut e = Entourage::empty(&self.ground);
        for x in 0..n {
            for y in 0..n {
                if self.ground.dist(x, y).unwrap() <= r {
                    e.insert_pair(x, y).unwrap();
                }
            }
        }
        e
    }

    /// The closed metric ball of radius r, clipped to the window.
    pub fn ball(&self, x: usize, r: u64) -> Result<PointSet> {
        if x >= self.ground.size() {
            return Err(CoarseError::IndexOutOfRange {
                index: x,
                size: self.ground.size(),
            });
        }
        let mut out = PointSet::empty(&self.ground);
        for y in 0..self.ground.size() {
            if self.ground.dist(x, y)? <= r {
                out.insert(y)?;
            }
        }
        Ok(out)
    }

    /// Points whose scale-m balls cannot poke past the horizon: distance
    /// from the origin at most `horizon - m`. Empty when m exceeds the
    /// horizon.
    pub fn core_region(&self, m: u64) -> PointSet {
        let mut out = PointSet::empty(&self.ground);
        let Some(limit) = self.horizon.checked_sub(m) else {
            return out;
        };
        for p in 0..self.ground.size() {
            if self.radial(p).unwrap() <= limit {
                out.insert(p).unwrap();
            }
        }
        out
    }

    /// Whether `A` is large at scale r: every core point is within r of
    /// `A`.
    pub fn large_at(&self, a: &PointSet, r: u64) -> Result<bool> {
        self.check_subset(a)?;
        self.require_scale(r)?;
        let covered = self.entourage_at(r).closure(a)?;
        self.core_region(r).is_subset(&covered)
    }

    /// Whether `A` is thick at scale r: some core point's whole r-ball
    /// lies inside `A`.
    pub fn thick_at(&self, a: &PointSet, r: u64) -> Result<bool> {
        self.check_subset(a)?;
        self.require_scale(r)?;
        for x in self.core_region(r).iter() {
            if self.ball(x, r)?.is_subset(a)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `A` is small at scales (r, s): every core point is within s
    /// of a core point not r-covered by `A`. The core is taken at the
    /// larger of the two scales.
    pub fn small_at(&self, a: &PointSet, r: u64, s: u64) -> Result<bool> {
        self.check_subset(a)?;
        self.require_scale(r)?;
        self.require_scale(s)?;
        let core = self.core_region(r.max(s));
        let uncovered = core.difference(&self.entourage_at(r).closure(a)?)?;
        core.is_subset(&self.entourage_at(s).closure(&uncovered)?)
    }

    fn excision_scan(&self, a: &PointSet, collide_within: u64, scale: u64) -> Result<ProfileEntry> {
        let members: Vec<usize> = a.iter().collect();
        let mut collision_count = 0usize;
        let mut required = 0u64;
        let mut farthest_pair = None;
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if self.ground.dist(x, y)? <= collide_within {
                    collision_count += 1;
                    let near = self.radial(x)?.min(self.radial(y)?);
                    if farthest_pair.is_none() || near > required {
                        required = near;
                        farthest_pair = Some((x, y));
                    }
                }
            }
        }
        let grid_entry = self
            .exclusion_grid
            .iter()
            .copied()
            .find(|&g| g >= required);
        Ok(ProfileEntry {
            scale,
            collision_count,
            farthest_pair,
            required_radius: required,
            grid_entry,
        })
    }

    /// Thinness profile of `A` across the scale grid. At scale r a pair
    /// collides when its distance is at most 2r (that is when the two
    /// r-balls can intersect in the ambient space, whether or not the
    /// meeting point survives in the window).
    pub fn thin_profile(&self, a: &PointSet) -> Result<ExcisionProfile> {
        self.check_subset(a)?;
        let mut entries = Vec::with_capacity(self.scales.len());
        for &r in &self.scales {
            entries.push(self.excision_scan(a, 2 * r, r)?);
        }
        Ok(ExcisionProfile { entries })
    }

    /// Satellite agreement profile of `A`: at scale r a pair collides when
    /// its distance is at most r, i.e. the pair is a scale-r entourage
    /// pair not explained by the excised bornology.
    pub fn satellite_profile(&self, a: &PointSet) -> Result<ExcisionProfile> {
        self.check_subset(a)?;
        let mut entries = Vec::with_capacity(self.scales.len());
        for &r in &self.scales {
            entries.push(self.excision_scan(a, r, r)?);
        }
        Ok(ExcisionProfile { entries })
    }

    /// Checks whether `f` stops oscillating at scale r past some grid
    /// radius. A point offends when `f` varies by more than `eps` over its
    /// r-ball; the report records the farthest offender and the first grid
    /// radius past all of them, if the grid reaches that far. Any positive
    /// scale is accepted here, on or off the scale grid.
    pub fn slowly_oscillating_check(&self, f: &[f64], eps: f64, r: u64) -> Result<SoReport> {
        if f.len() != self.ground.size() {
            return Err(CoarseError::MapNotTotal {
                got: f.len(),
                expected: self.ground.size(),
            });
        }
        if !f.iter().all(|v| v.is_finite()) {
            return Err(CoarseError::InvalidWindow {
                reason: "function values must be finite".into(),
            });
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(CoarseError::InvalidWindow {
                reason: "oscillation threshold must be positive".into(),
            });
        }
        let mut offender_count = 0usize;
        let mut farthest: Option<(usize, u64)> = None;
        for x in 0..self.ground.size() {
            let mut lo = f[x];
            let mut hi = f[x];
            for y in self.ball(x, r)?.iter() {
                lo = lo.min(f[y]);
                hi = hi.max(f[y]);
            }
            if hi - lo > eps {
                offender_count += 1;
                let d = self.radial(x)?;
                if farthest.map_or(true, |(_, best)| d > best) {
                    farthest = Some((x, d));
                }
            }
        }
        let needed = farthest.map_or(0, |(_, d)| d);
        let grid_entry = self.exclusion_grid.iter().copied().find(|&g| g >= needed);
        Ok(SoReport {
            scale: r,
            eps,
            offender_count,
            farthest_offender: farthest,
            grid_entry,
        })
    }

    /// When the thinness profile of `A` at scale r tops out past the grid,
    /// builds the matching oscillation witness: the indicator of one
    /// endpoint of the farthest colliding pair, which then oscillates past
    /// every grid radius at scale 2r. Returns `None` when the profile
    /// resolves on the grid, i.e. no witness is owed.
    pub fn so_witness_function(&self, a: &PointSet, r: u64) -> Result<Option<SoWitness>> {
        self.check_subset(a)?;
        self.require_scale(r)?;
        let entry = self.excision_scan(a, 2 * r, r)?;
        if entry.grid_entry.is_some() {
            return Ok(None);
        }
        let pair = entry
            .farthest_pair
            .expect("an off-grid requirement only arises from a collision");
        let mut values = vec![0.0; self.ground.size()];
        values[pair.0] = 1.0;
        let report = self.slowly_oscillating_check(&values, 0.5, 2 * r)?;
        debug_assert!(report.grid_entry.is_none());
        Ok(Some(SoWitness {
            values,
            matched_scale: 2 * r,
            pair,
        }))
    }
}
