//! Computational coarse geometry on finite ground sets, plus finite
//! windows onto infinite metric spaces.
//!
//! The finite side is exact: a coarse structure on a finite set is the
//! down-set of its maximum entourage, so spaces are represented by that
//! entourage and everything else (size classification, map analysis,
//! hyperspaces) is computed from it. The window side approximates an
//! unbounded metric space by a bounded piece with an explicit horizon and
//! reports where truncation makes an answer unreliable.

pub mod error;
pub mod hyper;
pub mod maps;
pub mod relation;
pub mod size;
pub mod space;
pub mod window;

pub use error::{CoarseError, Result};
pub use hyper::{
    c_map_window_check, exp_relates, hausdorff_distance, metric_vs_satellite, CMapWitness,
    ExtDist, FamilySelector, Hyperspace, MetricVsSatellite,
};
pub use maps::{classify_map, Map, MapReport};
pub use relation::{same_ground, Entourage, Ground, GroundSet, PointSet};
pub use size::{classify, oracle_classify, SizeFlags, SizeReport};
pub use space::{Bornology, CoarseSpace};
pub use window::{ExcisionProfile, ProfileEntry, SoReport, SoWitness, WindowSpace};
