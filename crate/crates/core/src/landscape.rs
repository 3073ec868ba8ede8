//! The free energy sampled over the spin triangle, with each sample assigned
//! to the basin of the local minimum that descent reaches from it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{raw, ModelParams, SpinDistribution, ToleranceConfig};
use crate::stationary::{census_with, descend_to_minimum, MinimaCensus};

/// Distance within which a descent end point is matched to a census minimum.
const BASIN_MATCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub lattice: (usize, usize),
    pub nu: SpinDistribution,
    pub value: f64,
    /// Index into the census points of the minimum reached by descent.
    pub basin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialGrid {
    pub params: ModelParams,
    pub density: usize,
    pub samples: Vec<GridSample>,
    pub census: MinimaCensus,
}

impl PotentialGrid {
    pub fn basin_value(&self, sample: &GridSample) -> Option<f64> {
        sample.basin.map(|b| self.census.points[b].value)
    }

    /// Census indices of the minima that own at least one sample, sorted by
    /// free energy.
    pub fn basins_by_depth(&self) -> Vec<usize> {
        let mut seen: Vec<usize> = self.samples.iter().filter_map(|s| s.basin).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.sort_by(|a, b| self.census.points[*a].value.total_cmp(&self.census.points[*b].value));
        seen
    }
}

/// Interior lattice `ν = (i, j, k)/density` with `i, j, k ≥ 1`.
pub fn potential_grid(
    params: &ModelParams,
    density: usize,
    seed_density: usize,
    tol: &ToleranceConfig,
) -> Result<PotentialGrid> {
    if density < 3 {
        return Err(Error::domain(format!("potential grid density must be at least 3, got {density}")));
    }
    let census = census_with(params, seed_density, tol)?;
    let minima: Vec<(usize, SpinDistribution)> = census
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_minimum())
        .map(|(k, p)| (k, p.nu))
        .collect();
    let n = density as f64;
    let lattice: Vec<(usize, usize)> = (1..density)
        .flat_map(|i| (1..(density - i)).map(move |j| (i, j)))
        .collect();
    let alpha = params.alpha.components();
    let samples = lattice
        .par_iter()
        .map(|&(i, j)| {
            let k = density - i - j;
            let nu = SpinDistribution::from_weights([i as f64 / n, j as f64 / n, k as f64 / n])?;
            let basin = descend_to_minimum(params, nu.components(), tol).and_then(|end| {
                minima
                    .iter()
                    .map(|(idx, m)| (*idx, m.xy_distance(&end)))
                    .filter(|(_, d)| *d <= BASIN_MATCH)
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(idx, _)| idx)
            });
            Ok(GridSample {
                lattice: (i, j),
                nu,
                value: raw::free_energy(params.beta, &alpha, &nu.components()),
                basin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialGrid { params: *params, density, samples, census })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::params;

    #[test]
    fn single_basin_at_high_temperature() {
        let p = params(1.0, [0.2, 0.3, 0.5]).unwrap();
        let g = potential_grid(&p, 20, 32, &ToleranceConfig::default()).unwrap();
        assert_eq!(g.samples.len(), 19 * 18 / 2);
        assert_eq!(g.basins_by_depth().len(), 1);
        assert!(g.samples.iter().all(|s| s.basin.is_some()));
    }

    #[test]
    fn three_basins_at_low_temperature() {
        let p = ModelParams::zero_field(3.5).unwrap();
        let g = potential_grid(&p, 30, 32, &ToleranceConfig::default()).unwrap();
        assert_eq!(g.basins_by_depth().len(), 3);
    }
}
