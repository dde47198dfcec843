//! Runs one of the named benchmark problems and writes its output files.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{Axis, Euler1D, Euler2D};
use crate::exec::Execution;
use crate::solver::output::{write_binary, write_csv_1d};
use crate::solver::problems::{double_mach, riemann3, shu_osher, ProblemId};
use crate::solver::{Field, Grid, ProblemSpec, RunReport, SchemeSpec, Solver};

use super::schlieren::schlieren;

/// Settings for one benchmark run. `None` keeps the problem default.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub problem: ProblemId,
    pub scheme: SchemeSpec,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    pub exec: Execution,
}

impl SolveOptions {
    pub fn new(problem: ProblemId, scheme: SchemeSpec) -> Self {
        Self {
            problem,
            scheme,
            nx: None,
            ny: None,
            cfl: None,
            t_final: None,
            exec: Execution::default(),
        }
    }

    pub fn resolution(&self) -> (usize, usize) {
        let (nx, ny) = self.problem.default_resolution();
        (self.nx.unwrap_or(nx), self.ny.unwrap_or(ny))
    }

    fn apply<L, const N: usize>(&self, mut spec: ProblemSpec<L, N>) -> Result<ProblemSpec<L, N>> {
        if let Some(c) = self.cfl {
            spec.cfl = c;
        }
        if let Some(t) = self.t_final {
            spec.t_final = t;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn spec_1d(&self) -> Result<ProblemSpec<Euler1D, 3>> {
        match self.problem {
            ProblemId::ShuOsher => {
                if self.ny.is_some_and(|n| n != 1) {
                    return Err(Error::domain("shu-osher is one-dimensional; ny must be 1"));
                }
                self.apply(shu_osher(self.resolution().0, self.scheme.clone())?)
            }
            other => Err(Error::domain(format!(
                "{} is two-dimensional",
                other.name()
            ))),
        }
    }

    pub fn spec_2d(&self) -> Result<ProblemSpec<Euler2D, 4>> {
        let (nx, ny) = self.resolution();
        match self.problem {
            ProblemId::DoubleMach => self.apply(double_mach(nx, ny, self.scheme.clone())?),
            ProblemId::Riemann3 => self.apply(riemann3(nx, ny, self.scheme.clone())?),
            ProblemId::ShuOsher => Err(Error::domain("shu-osher is one-dimensional")),
        }
    }
}

/// Final state of a run.
#[derive(Debug, Clone)]
pub enum Snapshot {
    OneD {
        grid: Grid,
        field: Field<3>,
        law: Euler1D,
    },
    TwoD {
        grid: Grid,
        field: Field<4>,
        law: Euler2D,
    },
}

impl Snapshot {
    pub fn grid(&self) -> &Grid {
        match self {
            Snapshot::OneD { grid, .. } | Snapshot::TwoD { grid, .. } => grid,
        }
    }

    /// Interior densities, x fastest.
    pub fn density(&self) -> Vec<f64> {
        match self {
            Snapshot::OneD { field, .. } => field.component(0),
            Snapshot::TwoD { field, .. } => field.component(0),
        }
    }
}

pub fn solve(opts: &SolveOptions) -> Result<(RunReport, Snapshot)> {
    if opts.problem == ProblemId::ShuOsher {
        let spec = opts.spec_1d()?;
        let mut solver = Solver::new(&spec, opts.exec)?;
        let report = solver.run()?;
        let snap = Snapshot::OneD {
            grid: spec.grid,
            field: solver.into_field(),
            law: spec.law,
        };
        Ok((report, snap))
    } else {
        let spec = opts.spec_2d()?;
        let mut solver = Solver::new(&spec, opts.exec)?;
        let report = solver.run()?;
        let snap = Snapshot::TwoD {
            grid: spec.grid,
            field: solver.into_field(),
            law: spec.law,
        };
        Ok((report, snap))
    }
}

/// Files written for one run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub binary: Option<PathBuf>,
    pub sidecar: Option<PathBuf>,
    pub schlieren: Option<PathBuf>,
}

/// 1D runs give `<stem>.csv`; 2D runs give `<stem>.bin`, `<stem>.json`
/// and the Schlieren image `<stem>.pgm`.
pub fn write_outputs(
    snap: &Snapshot,
    time: f64,
    dir: &Path,
    stem: &str,
    kappa: f64,
) -> Result<OutputPaths> {
    std::fs::create_dir_all(dir)?;
    match snap {
        Snapshot::OneD { grid, field, law } => {
            let path = dir.join(format!("{stem}.csv"));
            write_csv_1d(grid, field, law, BufWriter::new(File::create(&path)?))?;
            Ok(OutputPaths {
                csv: Some(path),
                ..OutputPaths::default()
            })
        }
        Snapshot::TwoD { grid, field, law } => {
            let (bin, json) = write_binary(dir, stem, grid, field, time, law)?;
            let img = schlieren(
                &field.component(0),
                field.nx(),
                field.ny(),
                grid.h(Axis::X),
                grid.h(Axis::Y),
                kappa,
            )?;
            let pgm = dir.join(format!("{stem}.pgm"));
            img.write_pgm(BufWriter::new(File::create(&pgm)?))?;
            Ok(OutputPaths {
                csv: None,
                binary: Some(bin),
                sidecar: Some(json),
                schlieren: Some(pgm),
            })
        }
    }
}
