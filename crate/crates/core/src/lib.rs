//! Metastable and stable phase diagrams of the three-state Curie-Weiss Potts
//! model in an arbitrary external field.
//!
//! The crate covers stationary points of the free energy and their census,
//! constant-temperature slices and the parametric surface of the bifurcation
//! set, the distinguished inverse temperatures, coexistence (Maxwell) sets,
//! and CSV/JSON/SVG export of all of these.

pub mod bifurcation;
pub mod critical;
pub mod error;
pub mod export;
pub mod landscape;
pub mod maxwell;
pub mod model;
pub mod plot;
pub mod roots;
pub mod stationary;

pub use critical::{all_critical_temps, beta_cross, beta_touch, CriticalTemps};
pub use error::{Error, Result};
pub use maxwell::{
    beyond_ellis_wang_segment, coexistence_curve, symmetric_segment, triple_point, AxisSegment,
    CoexistenceCurve, CoexistencePoint, CurveStatus,
};
pub use export::{ExportRecord, FieldValue, RecordKind};
pub use landscape::{potential_grid, PotentialGrid};
pub use model::{
    catastrophe_map, degeneracy_lhs, free_energy, gradient_local, hessian_local, stationary_value,
    AprioriMeasure, CoordPQ, CoordUV, CoordXY, ModelParams, Permutation, SpinDistribution,
    ToleranceConfig,
};
pub use plot::{CoordSystem, PlotSpec};
pub use stationary::{
    brute_force_global_min, census, census_with, find_stationary_points, MinimaCensus,
    StationaryKind, StationaryPoint,
};
