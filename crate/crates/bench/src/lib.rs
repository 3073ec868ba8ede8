//! Benchmark inputs shared by the criterion targets.

use potts_core::{AprioriMeasure, ModelParams};

/// Parameter points spanning the regimes of the zero-field census.
pub const CENSUS_BETAS: [f64; 5] = [1.5, 2.62, 2.75, 3.0, 3.5];

/// An asymmetric field used where the zero field would be degenerate.
pub fn tilted(beta: f64) -> ModelParams {
    ModelParams::new(beta, AprioriMeasure::new(0.3, 0.3, 0.4).expect("valid field")).expect("valid beta")
}
