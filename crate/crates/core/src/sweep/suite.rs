//! The `check` run: every verifier family over the configured grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Config;
use crate::check::CheckResult;
use crate::error::Result;
use crate::params::{CircuitParams, ParamTag};
use crate::verify::{
    characteristic_partner, check_characteristic_invariance, check_level_spacing,
    check_pure_state_levels, LinearParameterProbe, VerificationPoint,
};

/// One `(L, C, R, beta)` point of the check grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: usize,
    pub params: CircuitParams,
    pub beta: f64,
    /// `R / sqrt(L/C)`.
    pub resistance_fraction: f64,
    /// `beta hbar omega`.
    pub reduced_frequency: f64,
}

/// Expands the check grid. Indices run over `L`, then `C`, then the
/// resistance fraction, then the reduced frequency (fastest).
pub fn check_grid(config: &Config) -> Result<Vec<GridPoint>> {
    let grid = &config.check;
    let mut points = Vec::new();
    for &l in &grid.inductance {
        for &c in &grid.capacitance {
            for &fraction in &grid.resistance_fraction {
                let params = config.units.params(l, c, fraction * (l / c).sqrt())?;
                params.require_underdamped()?;
                for &x in &grid.reduced_frequency {
                    points.push(GridPoint {
                        index: points.len(),
                        params,
                        beta: params.beta_for_reduced_frequency(x)?,
                        resistance_fraction: fraction,
                        reduced_frequency: x,
                    });
                }
            }
        }
    }
    Ok(points)
}

/// A probe tagged with the grid point it ran on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub grid_index: usize,
    #[serde(flatten)]
    pub probe: LinearParameterProbe,
}

/// Pass/fail tally for one check name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub name: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub worst_rel_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutput {
    pub checks: Vec<CheckResult>,
    pub probes: Vec<ProbeRecord>,
}

impl SuiteOutput {
    /// True when there is at least one check and every check passed;
    /// inconclusive checks count against.
    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn by_name<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckResult> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    /// One row per check name, in name order.
    pub fn summary(&self) -> Vec<FamilySummary> {
        let mut out: Vec<FamilySummary> = Vec::new();
        for c in &self.checks {
            if out.last().map(|f| f.name != c.name).unwrap_or(true) {
                out.push(FamilySummary {
                    name: c.name.clone(),
                    total: 0,
                    passed: 0,
                    failed: 0,
                    inconclusive: 0,
                    worst_rel_residual: 0.0,
                });
            }
            let f = out.last_mut().expect("pushed above");
            f.total += 1;
            if c.is_inconclusive() {
                f.inconclusive += 1;
            } else if c.pass {
                f.passed += 1;
            } else {
                f.failed += 1;
            }
            f.worst_rel_residual = f.worst_rel_residual.max(c.rel_residual);
        }
        out
    }
}

enum Task {
    Point(GridPoint),
    /// Per `(L, C, R)`: spacing and pure-state checks at fixed truncation.
    Levels(GridPoint),
    Pair {
        index: usize,
        first: CircuitParams,
        second: CircuitParams,
    },
}

fn tasks(config: &Config) -> Result<Vec<Task>> {
    let points = check_grid(config)?;
    let per_spectrum = config.check.reduced_frequency.len();
    let mut out: Vec<Task> = points.iter().copied().map(Task::Point).collect();
    out.extend(
        points
            .iter()
            .step_by(per_spectrum.max(1))
            .copied()
            .map(Task::Levels),
    );
    let grid = &config.check;
    for base in &grid.characteristic_bases {
        let [l, c, fraction] = *base;
        let first = config.units.params(l, c, fraction * (l / c).sqrt())?;
        for &scale in &grid.characteristic_scales {
            out.push(Task::Pair {
                index: out.len(),
                first,
                second: characteristic_partner(&first, scale)?,
            });
        }
    }
    Ok(out)
}

fn run_task(task: &Task, config: &Config) -> Result<(Vec<CheckResult>, Option<ProbeRecord>)> {
    let grid = &config.check;
    let settings = config.verifier_settings();
    let tol = &grid.tolerances;
    match *task {
        Task::Point(point) => {
            let vp = VerificationPoint::converge(&point.params, point.beta, &settings)?;
            let checks = vp
                .all_checks(tol)?
                .into_iter()
                .map(|c| c.with_grid_index(point.index))
                .collect();
            let probe = if grid.probe {
                Some(ProbeRecord {
                    grid_index: point.index,
                    probe: LinearParameterProbe::from_point(&vp)?,
                })
            } else {
                None
            };
            Ok((checks, probe))
        }
        Task::Levels(point) => {
            let mut checks = vec![check_level_spacing(
                &point.params,
                grid.spectrum_dim,
                grid.spectrum_levels,
                grid.spectrum_tolerance,
            )?];
            if !grid.pure_state_levels.is_empty() {
                for tag in ParamTag::ALL {
                    checks.extend(check_pure_state_levels(
                        &point.params,
                        grid.pure_state_dim,
                        &grid.pure_state_levels,
                        tag,
                        tol.pure_state,
                    )?);
                }
            }
            Ok((
                checks
                    .into_iter()
                    .map(|c| c.with_grid_index(point.index))
                    .collect(),
                None,
            ))
        }
        Task::Pair {
            index,
            first,
            second,
        } => {
            let check = check_characteristic_invariance(
                &first,
                &second,
                grid.characteristic_beta,
                &settings,
                tol.characteristic,
            )?;
            Ok((vec![check.with_grid_index(index)], None))
        }
    }
}

/// Runs every family. Work is spread over the rayon pool; the output is
/// sorted by check name, then grid index, so it does not depend on the
/// schedule.
pub fn run_check_suite(config: &Config) -> Result<SuiteOutput> {
    let tasks = tasks(config)?;
    let results = tasks
        .par_iter()
        .map(|t| run_task(t, config))
        .collect::<Result<Vec<_>>>()?;
    let mut out = SuiteOutput::default();
    for (checks, probe) in results {
        out.checks.extend(checks);
        out.probes.extend(probe);
    }
    out.checks.sort_by(|a, b| {
        a.name
            .cmp(&b.name)
            .then(a.context.grid_index.cmp(&b.context.grid_index))
    });
    out.probes.sort_by_key(|p| p.grid_index);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Config {
        let mut config = Config::default();
        config.check.inductance = vec![1.0];
        config.check.capacitance = vec![0.5];
        config.check.resistance_fraction = vec![0.0, 0.6];
        config.check.reduced_frequency = vec![1.0, 3.0];
        config.check.spectrum_dim = 256;
        config.check.characteristic_bases = vec![[1.0, 1.0, 0.3]];
        config.check.characteristic_scales = vec![2.0];
        config
    }

    #[test]
    fn grid_order() {
        let points = check_grid(&small()).unwrap();
        assert_eq!(points.len(), 4);
        assert_eq!(points[1].reduced_frequency, 3.0);
        assert_eq!(points[2].resistance_fraction, 0.6);
        assert!((points[2].params.resistance - 0.6 * 2f64.sqrt()).abs() < 1e-15);
        assert!(points.iter().enumerate().all(|(i, p)| p.index == i));
    }

    #[test]
    fn small_suite_passes_and_is_sorted() {
        let out = run_check_suite(&small()).unwrap();
        for c in &out.checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(out.all_pass());
        let keys: Vec<_> = out
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.context.grid_index))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(out.probes.len(), 4);
        let names: Vec<_> = out.summary().into_iter().map(|f| f.name).collect();
        assert!(names.len() >= 9, "{names:?}");
        assert!(names.contains(&"characteristic_invariance".to_string()));
        assert!(names.contains(&"hf_pure_state".to_string()));
    }

    #[test]
    fn zero_tolerance_fails_everything_but_signs() {
        let mut config = small();
        config.check.tolerances = crate::verify::Tolerances::uniform(0.0);
        config.check.spectrum_tolerance = 0.0;
        let out = run_check_suite(&config).unwrap();
        assert!(!out.all_pass());
        assert!(out
            .checks
            .iter()
            .filter(|c| c.name != "dissipation_sign")
            .all(|c| !c.pass));
    }
}
