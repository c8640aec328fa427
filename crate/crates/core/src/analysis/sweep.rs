use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::models::{L1Config, PlantParams, ReferenceModel};
use crate::poly_linalg::{Stability, StabilityVerdict};
use crate::simulator::{run_closed_loop, Architecture, InitialConditions, IntegratorConfig, RunVerdict};

use super::critical_gain::pi_stability;

/// One L1-AC run of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub k: f64,
    pub gamma: f64,
    pub verdict: RunVerdict,
    /// `‖x‖∞` at the last sample.
    pub final_x_norm: f64,
    /// Completed with `‖x(t_end)‖∞ ≤ 1e-2·‖x(0)‖∞`.
    pub decaying: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub k_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    /// PI verdict per `k`.
    pub pi: Vec<StabilityVerdict>,
    /// Row-major over `(k, γ)`.
    pub cells: Vec<SweepCell>,
}

/// Side-by-side tally of PI verdicts against L1-AC runs. Marginal PI
/// verdicts are counted separately and take no part in the tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Correspondence {
    pub hurwitz_completed: usize,
    pub hurwitz_diverged: usize,
    pub unstable_diverged: usize,
    pub unstable_completed: usize,
    /// PI unstable while the L1-AC run completed with a decaying state.
    pub unstable_decaying: usize,
    pub marginal_excluded: usize,
}

impl SweepGrid {
    pub fn correspondence(&self) -> Correspondence {
        let mut c = Correspondence::default();
        for (i, pi) in self.pi.iter().enumerate() {
            for j in 0..self.gamma_grid.len() {
                let cell = self.cell(i, j);
                let completed = cell.verdict.is_completed();
                match pi.stability {
                    Stability::Marginal => c.marginal_excluded += 1,
                    Stability::Hurwitz if completed => c.hurwitz_completed += 1,
                    Stability::Hurwitz => c.hurwitz_diverged += 1,
                    Stability::Unstable if completed => {
                        c.unstable_completed += 1;
                        if cell.decaying {
                            c.unstable_decaying += 1;
                        }
                    }
                    Stability::Unstable => c.unstable_diverged += 1,
                }
            }
        }
        c
    }

    pub fn cell(&self, i_k: usize, i_gamma: usize) -> &SweepCell {
        &self.cells[i_k * self.gamma_grid.len() + i_gamma]
    }

    /// Rows are `k`, columns are the PI verdict (`H`/`M`/`U`) followed by
    /// one L1-AC verdict (`C`/`D`) per `γ`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,pi");
        for g in &self.gamma_grid {
            write!(out, ",gamma={g:e}").expect("write to string");
        }
        out.push('\n');
        for (i, k) in self.k_grid.iter().enumerate() {
            write!(out, "{k:e},{}", self.pi[i].stability.code()).expect("write to string");
            for j in 0..self.gamma_grid.len() {
                write!(out, ",{}", self.cell(i, j).verdict.code()).expect("write to string");
            }
            out.push('\n');
        }
        out
    }
}

/// Runs the L1-AC on every `(k, γ)` pair and records the PI verdict per `k`.
/// Divergent runs are data, not errors.
pub fn stability_sweep(
    plant: &PlantParams,
    reference: &ReferenceModel,
    k_grid: &[f64],
    gamma_grid: &[f64],
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
    execution: Execution,
) -> Result<SweepGrid> {
    if k_grid.is_empty() || gamma_grid.is_empty() {
        return Err(Error::invalid("sweep grids must be nonempty"));
    }
    let configs = k_grid
        .iter()
        .flat_map(|&k| gamma_grid.iter().map(move |&g| L1Config::new(k, g, None)))
        .collect::<Result<Vec<_>>>()?;
    init.validate(plant.n())?;
    let pi = k_grid
        .iter()
        .map(|&k| pi_stability(plant, reference, k))
        .collect::<Result<Vec<_>>>()?;

    let x0_norm = init.x0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cells = exec::map(execution, &configs, |cfg| {
        let run = run_closed_loop(Architecture::L1ac, plant, reference, cfg, init, int_cfg)?;
        let final_x_norm = run
            .trace
            .last()
            .map_or(f64::NAN, |s| s.x.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        Ok(SweepCell {
            k: cfg.k,
            gamma: cfg.gamma,
            verdict: run.verdict,
            final_x_norm,
            decaying: run.is_completed() && final_x_norm <= 1e-2 * x0_norm,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { k_grid: k_grid.to_vec(), gamma_grid: gamma_grid.to_vec(), pi, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar() -> (PlantParams, ReferenceModel) {
        (
            PlantParams::new(vec![-1.0]).unwrap(),
            ReferenceModel::with_identity_q(vec![1.0]).unwrap(),
        )
    }

    #[test]
    fn pi_column_flips_at_critical_gain() {
        let (p, r) = scalar();
        let cfg = IntegratorConfig::new(1e-2, 5.0, 10, 1e6).unwrap();
        let g = stability_sweep(
            &p,
            &r,
            &[0.5, 0.9, 1.1, 2.0],
            &[1.0],
            &InitialConditions::default_for(1),
            &cfg,
            Execution::Sequential,
        )
        .unwrap();
        let codes: Vec<Stability> = g.pi.iter().map(|v| v.stability).collect();
        assert_eq!(codes, [Stability::Unstable, Stability::Unstable, Stability::Hurwitz, Stability::Hurwitz]);
        let at_kc = stability_sweep(
            &p,
            &r,
            &[1.0],
            &[1.0, 10.0],
            &InitialConditions::default_for(1),
            &cfg,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(at_kc.pi[0].stability, Stability::Marginal);
        assert_eq!(at_kc.correspondence().marginal_excluded, 2);
    }

    #[test]
    fn below_critical_gain_diverges_and_sequential_matches_parallel() {
        let (p, r) = scalar();
        let cfg = IntegratorConfig::new(1e-2, 200.0, 50, 1e6).unwrap();
        let init = InitialConditions::default_for(1);
        let ks = [0.5, 2.0];
        let gs = [1.0, 10.0, 100.0];
        let seq = stability_sweep(&p, &r, &ks, &gs, &init, &cfg, Execution::Sequential).unwrap();
        let par = stability_sweep(&p, &r, &ks, &gs, &init, &cfg, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        for j in 0..gs.len() {
            assert_eq!(seq.cell(0, j).verdict.code(), "D");
        }
        assert_eq!(seq.cell(1, 1).verdict, RunVerdict::Completed);
        let csv = seq.to_csv();
        assert!(csv.starts_with("k,pi,gamma=1e0,gamma=1e1,gamma=1e2\n"), "{csv}");
        assert_eq!(csv.lines().nth(1).unwrap(), "5e-1,U,D,D,D");
        let c = seq.correspondence();
        assert_eq!((c.unstable_diverged, c.unstable_decaying), (3, 0));
    }

    #[test]
    fn matched_plant_completes_everywhere() {
        let p = PlantParams::new(vec![1.0, 2.0]).unwrap();
        let r = ReferenceModel::with_identity_q(vec![1.0, 2.0]).unwrap();
        let cfg = IntegratorConfig::new(1e-2, 20.0, 10, 1e6).unwrap();
        let g = stability_sweep(
            &p,
            &r,
            &[0.5, 5.0, 50.0],
            &[1.0, 100.0],
            &InitialConditions::default_for(2),
            &cfg,
            Execution::Parallel,
        )
        .unwrap();
        assert!(g.cells.iter().all(|c| c.verdict == RunVerdict::Completed));
    }

    #[test]
    fn empty_grid_rejected() {
        let (p, r) = scalar();
        let cfg = IntegratorConfig::default();
        let init = InitialConditions::default_for(1);
        assert!(stability_sweep(&p, &r, &[], &[1.0], &init, &cfg, Execution::Sequential).is_err());
    }
}
