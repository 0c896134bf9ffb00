//! JSON documents for spaces, subsets, maps, and windows, plus the
//! serializable report shapes the CLI emits.
//!
//! Field order in the output structs is fixed, so serialization is
//! byte-stable for identical inputs; nothing here depends on hash maps.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use coarse_core::hyper::{CMapWitness, ExtDist};
use coarse_core::maps::{Map, MapReport};
use coarse_core::relation::{Entourage, Ground, GroundSet, PointSet};
use coarse_core::size::SizeReport;
use coarse_core::space::CoarseSpace;
use coarse_core::window::{ExcisionProfile, SoReport, WindowSpace};

use crate::builders;

/// Ground points: a bare count or a list of labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsSpec {
    Count(usize),
    Labels(Vec<String>),
}

/// A finite coarse space: points plus either a partition into classes or
/// a list of generator pair lists (or neither, for the discrete space).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: PointsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<(usize, usize)>>>,
}

impl SpaceDoc {
    pub fn ground(&self) -> anyhow::Result<Ground> {
        Ok(match &self.points {
            PointsSpec::Count(n) => GroundSet::bare(*n),
            PointsSpec::Labels(ls) => GroundSet::with_labels(ls.len(), ls.clone())?,
        })
    }

    pub fn build(&self) -> anyhow::Result<CoarseSpace> {
        let ground = self.ground()?;
        match (&self.partition, &self.generators) {
            (Some(_), Some(_)) => {
                bail!("a space document takes a partition or generators, not both")
            }
            (Some(p), None) => Ok(CoarseSpace::from_partition(&ground, p)?),
            (None, Some(gens)) => {
                let mut es = Vec::with_capacity(gens.len());
                for pairs in gens {
                    let mut e = Entourage::empty(&ground);
                    for &(x, y) in pairs {
                        e.insert_pair(x, y)?;
                    }
                    es.push(e);
                }
                Ok(CoarseSpace::generate(&ground, es)?)
            }
            (None, None) => Ok(CoarseSpace::generate(&ground, Vec::new())?),
        }
    }
}

/// A subset: a bare index array or `{"members": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetDoc {
    Bare(Vec<usize>),
    Wrapped { members: Vec<usize> },
}

impl SubsetDoc {
    pub fn build(&self, ground: &Ground) -> anyhow::Result<PointSet> {
        let members = match self {
            SubsetDoc::Bare(m) => m,
            SubsetDoc::Wrapped { members } => members,
        };
        Ok(PointSet::from_indices(ground, members)?)
    }
}

/// A map: a bare table array or `{"table": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapDoc {
    Bare(Vec<usize>),
    Wrapped { table: Vec<usize> },
}

impl MapDoc {
    pub fn build(&self, source: &Ground, target: &Ground) -> anyhow::Result<Map> {
        let table = match self {
            MapDoc::Bare(t) => t,
            MapDoc::Wrapped { table } => table,
        };
        Ok(Map::new(source, target, table.clone())?)
    }
}

/// A window: a named builder with its parameter, or explicit points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowDoc {
    pub builder: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<u64>>,
}

impl WindowDoc {
    pub fn build(&self) -> anyhow::Result<WindowSpace> {
        let scales = self.scales.clone();
        let need_n = || {
            self.n
                .with_context(|| format!("builder {:?} needs \"n\"", self.builder))
        };
        let need_half = || {
            self.half
                .with_context(|| format!("builder {:?} needs \"half\"", self.builder))
        };
        Ok(match self.builder.as_str() {
            "squares" => builders::squares_window(need_n()?, scales)?,
            "squares_shifted_union" => {
                builders::squares_shifted_union_window(need_n()?, scales)?
            }
            "interval" => builders::integer_interval_window(need_n()?, scales)?,
            "group_line" => builders::group_line_window(need_half()?, scales)?,
            "grid" => builders::integer_grid_window(need_half()?, scales)?,
            "points" => {
                let values = self
                    .values
                    .as_ref()
                    .context("builder \"points\" needs \"values\"")?;
                builders::line_window(values, scales)?
            }
            other => bail!(
                "unknown window builder {other:?} (expected squares, \
                 squares_shifted_union, interval, group_line, grid, or points)"
            ),
        })
    }
}

fn labels_of(ground: &Ground, indices: &[usize]) -> Vec<String> {
    indices
        .iter()
        .map(|&i| {
            ground
                .label(i)
                .map(|l| l.to_string())
                .unwrap_or_else(|| i.to_string())
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagsOut {
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

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOut {
    pub ground_points: usize,
    pub class_count: usize,
    pub subset: Vec<usize>,
    pub flags: FlagsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thick_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub large_missed_class: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thin_excision: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

pub fn classify_out(
    space: &CoarseSpace,
    subset: &PointSet,
    report: &SizeReport,
    oracle_agrees: Option<bool>,
) -> ClassifyOut {
    let f = &report.flags;
    ClassifyOut {
        ground_points: space.ground().size(),
        class_count: space.components().len(),
        subset: subset.to_indices(),
        flags: FlagsOut {
            large: f.large,
            slim: f.slim,
            thick: f.thick,
            meshy: f.meshy,
            piecewise_large: f.piecewise_large,
            small: f.small,
            extralarge: f.extralarge,
            slim_interior: f.slim_interior,
            thin: f.thin,
        },
        thick_witness: report.thick_witness.as_ref().map(|s| s.to_indices()),
        large_missed_class: report.large_missed_class.as_ref().map(|s| s.to_indices()),
        thin_excision: report.thin_excision.as_ref().map(|s| s.to_indices()),
        oracle_agrees,
    }
}

impl ClassifyOut {
    pub fn render_text(&self) -> String {
        let f = &self.flags;
        let mut lines = vec![
            format!(
                "space: {} points in {} classes; subset {:?}",
                self.ground_points, self.class_count, self.subset
            ),
            format!(
                "large={} slim={} thick={} meshy={} piecewise_large={}",
                f.large, f.slim, f.thick, f.meshy, f.piecewise_large
            ),
            format!(
                "small={} extralarge={} slim_interior={} thin={}",
                f.small, f.extralarge, f.slim_interior, f.thin
            ),
        ];
        if let Some(w) = &self.thick_witness {
            lines.push(format!("thick witness class: {w:?}"));
        }
        if let Some(w) = &self.large_missed_class {
            lines.push(format!("class missed by the subset: {w:?}"));
        }
        if let Some(w) = &self.thin_excision {
            lines.push(format!("thin excision set: {w:?}"));
        }
        if let Some(ok) = self.oracle_agrees {
            lines.push(format!("definitional oracle agrees: {ok}"));
        }
        lines.join("\n")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MapOut {
    pub bornologous: bool,
    pub proper: bool,
    pub effectively_proper: bool,
    pub coarsely_surjective: bool,
    pub bijective: bool,
    pub asymorphism: bool,
    pub coarse_equivalence: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bornotopy_inverse: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bornologous_violation: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effectively_proper_violation: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surjectivity_missed_class: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper_violation_class: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper_violation_preimage: Option<Vec<usize>>,
}

pub fn map_out(report: &MapReport) -> MapOut {
    MapOut {
        bornologous: report.bornologous,
        proper: report.proper,
        effectively_proper: report.effectively_proper,
        coarsely_surjective: report.coarsely_surjective,
        bijective: report.bijective,
        asymorphism: report.asymorphism,
        coarse_equivalence: report.coarse_equivalence,
        bornotopy_inverse: report
            .bornotopy_inverse
            .as_ref()
            .map(|m| m.table().to_vec()),
        bornologous_violation: report.bornologous_violation,
        effectively_proper_violation: report.effectively_proper_violation,
        surjectivity_missed_class: report
            .surjectivity_missed_class
            .as_ref()
            .map(|s| s.to_indices()),
        proper_violation_class: report
            .proper_violation
            .as_ref()
            .map(|(c, _)| c.to_indices()),
        proper_violation_preimage: report
            .proper_violation
            .as_ref()
            .map(|(_, p)| p.to_indices()),
    }
}

impl MapOut {
    pub fn render_text(&self) -> String {
        let mut lines = vec![
            format!(
                "bornologous={} effectively_proper={} proper={} coarsely_surjective={}",
                self.bornologous, self.effectively_proper, self.proper, self.coarsely_surjective
            ),
            format!(
                "bijective={} asymorphism={} coarse_equivalence={}",
                self.bijective, self.asymorphism, self.coarse_equivalence
            ),
        ];
        match &self.bornotopy_inverse {
            Some(t) => lines.push(format!("bornotopy inverse table: {t:?}")),
            None => lines.push("bornotopy inverse: none".to_string()),
        }
        if let Some(p) = self.bornologous_violation {
            lines.push(format!("bornologous violation at pair {p:?}"));
        }
        if let Some(p) = self.effectively_proper_violation {
            lines.push(format!("effective properness violation at pair {p:?}"));
        }
        if let Some(c) = &self.surjectivity_missed_class {
            lines.push(format!("image misses class {c:?}"));
        }
        if let Some(c) = &self.proper_violation_class {
            lines.push(format!(
                "preimage of class {c:?} is unbounded: {:?}",
                self.proper_violation_preimage.as_deref().unwrap_or(&[])
            ));
        }
        lines.join("\n")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileEntryOut {
    pub scale: u64,
    pub collision_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farthest_pair: Option<(String, String)>,
    pub required_radius: u64,
    /// First grid radius that suffices; null when the grid tops out first.
    pub grid_entry: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileOut {
    pub window_points: usize,
    pub horizon: u64,
    pub grid_max: u64,
    pub kind: String,
    pub entries: Vec<ProfileEntryOut>,
}

pub fn profile_out(w: &WindowSpace, profile: &ExcisionProfile, kind: &str) -> ProfileOut {
    ProfileOut {
        window_points: w.ground().size(),
        horizon: w.horizon(),
        grid_max: *w.exclusion_grid().last().unwrap(),
        kind: kind.to_string(),
        entries: profile
            .entries
            .iter()
            .map(|e| ProfileEntryOut {
                scale: e.scale,
                collision_count: e.collision_count,
                farthest_pair: e.farthest_pair.map(|(x, y)| {
                    let ls = labels_of(w.ground(), &[x, y]);
                    (ls[0].clone(), ls[1].clone())
                }),
                required_radius: e.required_radius,
                grid_entry: e.grid_entry,
            })
            .collect(),
    }
}

impl ProfileOut {
    pub fn render_text(&self) -> String {
        let mut lines = vec![format!(
            "{} profile over {} points (horizon {}, grid up to {})",
            self.kind, self.window_points, self.horizon, self.grid_max
        )];
        for e in &self.entries {
            let entry = match e.grid_entry {
                Some(g) => format!("{g}"),
                None => "none within grid".to_string(),
            };
            let pair = match &e.farthest_pair {
                Some((a, b)) => format!(" (farthest pair {a}, {b})"),
                None => String::new(),
            };
            lines.push(format!(
                "scale {}: {} collisions, needs radius {}, grid entry {}{}",
                e.scale, e.collision_count, e.required_radius, entry, pair
            ));
        }
        lines.join("\n")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperOut {
    pub family_size: usize,
    pub hyper_class_count: usize,
    pub connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iota_embedding: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounded_members_track_base_classes: Option<bool>,
}

impl HyperOut {
    pub fn render_text(&self) -> String {
        let mut lines = vec![format!(
            "family of {} member sets forming {} hyper classes (connected: {})",
            self.family_size, self.hyper_class_count, self.connected
        )];
        if let Some(v) = self.iota_embedding {
            lines.push(format!("singleton embedding preserves structure: {v}"));
        }
        if let Some(v) = self.bounded_members_track_base_classes {
            lines.push(format!("bounded members track base classes: {v}"));
        }
        lines.join("\n")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SoOut {
    pub scale: u64,
    pub eps: f64,
    pub offender_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farthest_offender: Option<(String, u64)>,
    pub grid_entry: Option<u64>,
}

pub fn so_out(w: &WindowSpace, report: &SoReport) -> SoOut {
    SoOut {
        scale: report.scale,
        eps: report.eps,
        offender_count: report.offender_count,
        farthest_offender: report
            .farthest_offender
            .map(|(p, d)| (labels_of(w.ground(), &[p])[0].clone(), d)),
        grid_entry: report.grid_entry,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CMapWitnessOut {
    pub x: String,
    pub y: String,
    pub distance: u64,
    pub radial_x: u64,
    pub radial_y: u64,
}

pub fn c_map_witness_out(w: &WindowSpace, wit: &CMapWitness) -> CMapWitnessOut {
    let ls = labels_of(w.ground(), &[wit.x, wit.y]);
    CMapWitnessOut {
        x: ls[0].clone(),
        y: ls[1].clone(),
        distance: wit.distance,
        radial_x: wit.radial_x,
        radial_y: wit.radial_y,
    }
}

/// Extended distances serialize as a number or the string "inf".
pub fn ext_dist_json(d: ExtDist) -> serde_json::Value {
    match d {
        ExtDist::Finite(v) => serde_json::json!(v),
        ExtDist::Infinite => serde_json::json!("inf"),
    }
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_doc_round_trips_both_shapes() {
        let doc: SpaceDoc =
            serde_json::from_str(r#"{"points": 3, "partition": [0, 0, 1]}"#).unwrap();
        let c = doc.build().unwrap();
        assert_eq!(c.components().len(), 2);
        let doc2: SpaceDoc =
            serde_json::from_str(r#"{"points": ["a", "b", "c"], "generators": [[[0, 1]]]}"#)
                .unwrap();
        let c2 = doc2.build().unwrap();
        assert_eq!(c2.components().len(), 2);
        assert_eq!(c2.ground().label(0), Some("a"));
        let bad: SpaceDoc = serde_json::from_str(
            r#"{"points": 2, "partition": [0, 0], "generators": []}"#,
        )
        .unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn subset_and_map_docs_accept_bare_arrays() {
        let g = GroundSet::bare(4);
        let s: SubsetDoc = serde_json::from_str("[0, 2]").unwrap();
        assert_eq!(s.build(&g).unwrap().to_indices(), vec![0, 2]);
        let s2: SubsetDoc = serde_json::from_str(r#"{"members": [1]}"#).unwrap();
        assert_eq!(s2.build(&g).unwrap().to_indices(), vec![1]);
        let m: MapDoc = serde_json::from_str("[3, 2, 1, 0]").unwrap();
        let f = m.build(&g, &g).unwrap();
        assert!(f.is_bijective());
    }

    #[test]
    fn window_doc_dispatches_builders() {
        let doc: WindowDoc =
            serde_json::from_str(r#"{"builder": "squares", "n": 400, "scales": [1, 2]}"#)
                .unwrap();
        let w = doc.build().unwrap();
        assert_eq!(w.ground().size(), 21);
        let bad: WindowDoc = serde_json::from_str(r#"{"builder": "moebius"}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn json_output_is_deterministic() {
        let doc: SpaceDoc =
            serde_json::from_str(r#"{"points": 3, "partition": [0, 1, 1]}"#).unwrap();
        let c = doc.build().unwrap();
        let a = PointSet::from_indices(c.ground(), &[0, 1]).unwrap();
        let r = coarse_core::size::classify(&c, &a).unwrap();
        let one = to_pretty_json(&classify_out(&c, &a, &r, None)).unwrap();
        let two = to_pretty_json(&classify_out(&c, &a, &r, None)).unwrap();
        assert_eq!(one, two);
        assert!(one.contains("\"piecewise_large\": true"));
    }
}
