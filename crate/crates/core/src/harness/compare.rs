//! Cost and accuracy comparison of several schemes on one problem.
//!
//! The schemes run side by side, one time step each in turn, and each is
//! charged only for its own steps. Wall time per scheme is the minimum over
//! a number of such rounds. For the
//! Shu-Osher problem the density can also be scored against a fine-grid
//! reference run, linearly interpolated to the coarse cell centers.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{Axis, ConservationLaw};
use crate::exec::Execution;
use crate::reconstruct::Scheme;
use crate::solver::problems::ProblemId;
use crate::solver::{Field, Grid, ProblemSpec, RunReport, SchemeSpec, Solver};

use super::solve::{solve, Snapshot, SolveOptions};

/// Grid size of the Shu-Osher reference solution.
pub const REFERENCE_CELLS: usize = 16000;

/// The reference scheme: CWENO5 with `s1 = 3`, `s2 = 2`.
pub fn reference_scheme() -> SchemeSpec {
    SchemeSpec::new(Scheme::CwenoGlobal, 2).with_remap(3, 2)
}

/// Cell-center densities of a fine Shu-Osher run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub scheme: String,
    pub t_final: f64,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
}

impl Reference {
    pub fn compute(
        n: usize,
        scheme: SchemeSpec,
        t_final: Option<f64>,
        exec: Execution,
    ) -> Result<Self> {
        let mut o = SolveOptions::new(ProblemId::ShuOsher, scheme);
        o.nx = Some(n);
        o.t_final = t_final;
        o.exec = exec;
        let (report, snap) = solve(&o)?;
        let grid = snap.grid();
        Ok(Self {
            scheme: report.scheme,
            t_final: report.final_time,
            x: (0..n).map(|i| grid.center(Axis::X, i as isize)).collect(),
            rho: snap.density(),
        })
    }

    /// Piecewise-linear interpolant through the reference points, constant
    /// beyond the outermost ones.
    pub fn at(&self, x: f64) -> f64 {
        let k = self.x.partition_point(|&v| v <= x);
        if k == 0 {
            return self.rho[0];
        }
        if k == self.x.len() {
            return self.rho[k - 1];
        }
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        let t = (x - x0) / (x1 - x0);
        self.rho[k - 1] + t * (self.rho[k] - self.rho[k - 1])
    }

    /// `h * sum |rho_j - rho_ref(x_j)|` over a 1D grid.
    pub fn l1_error(&self, grid: &Grid, rho: &[f64]) -> Result<f64> {
        if grid.dims() != 1 || rho.len() != grid.n(Axis::X) {
            return Err(Error::domain(
                "L1 error needs a 1D density with one value per cell",
            ));
        }
        let h = grid.h(Axis::X);
        Ok(rho
            .iter()
            .enumerate()
            .map(|(i, r)| (r - self.at(grid.center(Axis::X, i as isize))).abs())
            .sum::<f64>()
            * h)
    }
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub problem: ProblemId,
    pub schemes: Vec<SchemeSpec>,
    pub resolutions: Vec<(usize, usize)>,
    pub repeats: usize,
    pub t_final: Option<f64>,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareEntry {
    pub scheme: String,
    pub nx: usize,
    pub ny: usize,
    pub wall_seconds: f64,
    pub wall_repeats: Vec<f64>,
    pub steps: usize,
    pub l1_error: Option<f64>,
    /// Wall time over that of the first scheme at the same resolution.
    pub relative_cost: f64,
}

/// Wall-time ratios between the first WENO-JS, CWENO-LPR and CWENO-global
/// entries of one resolution; absent when a family was not run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostRatios {
    pub nx: usize,
    pub ny: usize,
    pub cweno_over_weno: Option<f64>,
    pub lpr_over_weno: Option<f64>,
    pub cweno_over_lpr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub problem: String,
    pub repeats: usize,
    pub reference_scheme: Option<String>,
    pub reference_cells: Option<usize>,
    pub entries: Vec<CompareEntry>,
    pub ratios: Vec<CostRatios>,
}

impl CompareReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// Runs every scheme at every resolution `repeats` times. A reference
/// adds an L1 density error to 1D entries.
pub fn compare(opts: &CompareOptions, reference: Option<&Reference>) -> Result<CompareReport> {
    if opts.schemes.len() < 2 {
        return Err(Error::domain("comparison needs at least two schemes"));
    }
    if opts.repeats == 0 || opts.resolutions.is_empty() {
        return Err(Error::domain(
            "comparison needs at least one repeat and one resolution",
        ));
    }
    let mut entries = Vec::new();
    let mut ratios = Vec::new();
    for &(nx, ny) in &opts.resolutions {
        let runs: Vec<SolveOptions> = opts
            .schemes
            .iter()
            .map(|scheme| {
                let mut o = SolveOptions::new(opts.problem, scheme.clone());
                o.nx = Some(nx);
                o.ny = Some(ny);
                o.t_final = opts.t_final;
                o.exec = opts.exec;
                o
            })
            .collect();
        let mut walls = vec![Vec::with_capacity(opts.repeats); runs.len()];
        let mut last = Vec::new();
        for _ in 0..opts.repeats {
            last = lockstep(&runs)?;
            for (w, (report, _)) in walls.iter_mut().zip(&last) {
                w.push(report.wall_seconds);
            }
        }
        let first = entries.len();
        let mut families: Vec<(Scheme, f64)> = Vec::new();
        for ((scheme, walls), (report, snap)) in opts.schemes.iter().zip(walls).zip(last) {
            let wall = walls.iter().copied().fold(f64::INFINITY, f64::min);
            let l1_error = match reference {
                Some(r) if snap.grid().dims() == 1 => {
                    Some(r.l1_error(snap.grid(), &snap.density())?)
                }
                _ => None,
            };
            let base: f64 = entries
                .get(first)
                .map_or(wall, |e: &CompareEntry| e.wall_seconds);
            if !families.iter().any(|(s, _)| *s == scheme.config.scheme) {
                families.push((scheme.config.scheme, wall));
            }
            entries.push(CompareEntry {
                scheme: report.scheme,
                nx,
                ny,
                wall_seconds: wall,
                wall_repeats: walls,
                steps: report.steps,
                l1_error,
                relative_cost: wall / base,
            });
        }
        let cost = |s: Scheme| families.iter().find(|(f, _)| *f == s).map(|(_, w)| *w);
        let ratio = |a: Scheme, b: Scheme| Some(cost(a)? / cost(b)?);
        ratios.push(CostRatios {
            nx,
            ny,
            cweno_over_weno: ratio(Scheme::CwenoGlobal, Scheme::WenoJs),
            lpr_over_weno: ratio(Scheme::CwenoLpr, Scheme::WenoJs),
            cweno_over_lpr: ratio(Scheme::CwenoGlobal, Scheme::CwenoLpr),
        });
    }
    Ok(CompareReport {
        problem: opts.problem.name().into(),
        repeats: opts.repeats,
        reference_scheme: reference.map(|r| r.scheme.clone()),
        reference_cells: reference.map(|r| r.x.len()),
        entries,
        ratios,
    })
}

/// Runs all `runs` side by side, advancing each by one step in turn, and
/// charges every run only for its own steps. Load changes on the machine
/// then hit all schemes alike.
fn lockstep(runs: &[SolveOptions]) -> Result<Vec<(RunReport, Snapshot)>> {
    if runs[0].problem == ProblemId::ShuOsher {
        let specs = runs
            .iter()
            .map(SolveOptions::spec_1d)
            .collect::<Result<Vec<_>>>()?;
        Ok(lockstep_specs(&specs, runs[0].exec)?
            .into_iter()
            .zip(specs)
            .map(|((report, field), spec)| {
                let snap = Snapshot::OneD {
                    grid: spec.grid,
                    field,
                    law: spec.law,
                };
                (report, snap)
            })
            .collect())
    } else {
        let specs = runs
            .iter()
            .map(SolveOptions::spec_2d)
            .collect::<Result<Vec<_>>>()?;
        Ok(lockstep_specs(&specs, runs[0].exec)?
            .into_iter()
            .zip(specs)
            .map(|((report, field), spec)| {
                let snap = Snapshot::TwoD {
                    grid: spec.grid,
                    field,
                    law: spec.law,
                };
                (report, snap)
            })
            .collect())
    }
}

fn lockstep_specs<L: ConservationLaw<N> + Clone, const N: usize>(
    specs: &[ProblemSpec<L, N>],
    exec: Execution,
) -> Result<Vec<(RunReport, Field<N>)>> {
    let mut solvers = specs
        .iter()
        .map(|s| Solver::new(s, exec))
        .collect::<Result<Vec<_>>>()?;
    let mut walls = vec![0.0; solvers.len()];
    while solvers.iter().any(|s| !s.finished()) {
        for (s, wall) in solvers.iter_mut().zip(&mut walls) {
            if !s.finished() {
                let start = Instant::now();
                s.step()?;
                *wall += start.elapsed().as_secs_f64();
            }
        }
    }
    Ok(solvers
        .into_iter()
        .zip(walls)
        .map(|(s, wall)| (s.report(wall), s.into_field()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Reference {
        Reference {
            scheme: "test".into(),
            t_final: 1.0,
            x: vec![0.0, 1.0, 2.0, 3.0],
            rho: vec![1.0, 3.0, 2.0, 2.0],
        }
    }

    #[test]
    fn interpolation_between_and_beyond_points() {
        let r = reference();
        assert_eq!(r.at(0.5), 2.0);
        assert_eq!(r.at(1.0), 3.0);
        assert_eq!(r.at(1.25), 2.75);
        assert_eq!(r.at(-1.0), 1.0);
        assert_eq!(r.at(9.0), 2.0);
    }

    #[test]
    fn l1_error_of_the_interpolant_is_zero() {
        let r = reference();
        let grid = Grid::new_1d(3, 0.0, 3.0).unwrap();
        let exact = [2.0, 2.5, 2.0];
        assert_eq!(r.l1_error(&grid, &exact).unwrap(), 0.0);
        assert_eq!(r.l1_error(&grid, &[3.0, 2.5, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn needs_two_schemes() {
        let opts = CompareOptions {
            problem: ProblemId::ShuOsher,
            schemes: vec![SchemeSpec::new(Scheme::WenoJs, 2)],
            resolutions: vec![(50, 1)],
            repeats: 1,
            t_final: Some(0.01),
            exec: Execution::Sequential,
        };
        assert!(compare(&opts, None).is_err());
    }

    #[test]
    fn ratios_pick_scheme_families() {
        let opts = CompareOptions {
            problem: ProblemId::ShuOsher,
            schemes: vec![
                SchemeSpec::new(Scheme::WenoJs, 2),
                SchemeSpec::new(Scheme::CwenoGlobal, 2),
                SchemeSpec::new(Scheme::CwenoGlobal, 2).with_remap(3, 2),
            ],
            resolutions: vec![(40, 1)],
            repeats: 1,
            t_final: Some(0.02),
            exec: Execution::Sequential,
        };
        let rep = compare(&opts, Some(&reference())).unwrap();
        assert_eq!(rep.entries.len(), 3);
        assert_eq!(rep.entries[0].relative_cost, 1.0);
        let r = &rep.ratios[0];
        assert!(r.cweno_over_weno.is_some() && r.lpr_over_weno.is_none());
        let expected = rep.entries[1].wall_seconds / rep.entries[0].wall_seconds;
        assert_eq!(r.cweno_over_weno, Some(expected));
        assert!(rep.entries.iter().all(|e| e.l1_error.is_some()));
    }
}
