//! Benchmark problems: the Shu-Osher shock/entropy-wave interaction, the
//! double Mach reflection, the four-quadrant Riemann problem with
//! configuration 3 of Kurganov and Tadmor, and periodic linear advection.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::euler::{Euler1D, Euler2D, EulerState1D, EulerState2D, LinearAdvection, DEFAULT_GAMMA};

use super::{Boundaries, Boundary, DtRule, Grid, ProblemSpec, SchemeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    ShuOsher,
    DoubleMach,
    Riemann3,
}

impl ProblemId {
    pub fn name(self) -> &'static str {
        match self {
            ProblemId::ShuOsher => "shu-osher",
            ProblemId::DoubleMach => "dmr",
            ProblemId::Riemann3 => "riemann3",
        }
    }

    /// Desk-scale default resolution `(nx, ny)`; `ny = 1` in 1D.
    pub fn default_resolution(self) -> (usize, usize) {
        match self {
            ProblemId::ShuOsher => (200, 1),
            ProblemId::DoubleMach => (512, 128),
            ProblemId::Riemann3 => (512, 512),
        }
    }

    /// Resolution of the published runs.
    pub fn full_resolution(self) -> (usize, usize) {
        match self {
            ProblemId::ShuOsher => (200, 1),
            ProblemId::DoubleMach => (2048, 512),
            ProblemId::Riemann3 => (2048, 2048),
        }
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shu-osher" | "shuosher" => Ok(ProblemId::ShuOsher),
            "dmr" | "double-mach" => Ok(ProblemId::DoubleMach),
            "riemann3" | "riemann" => Ok(ProblemId::Riemann3),
            other => Err(Error::Parse(format!("unknown problem {other:?}"))),
        }
    }
}

/// Post-shock state `(rho, v, p)` of the Shu-Osher problem.
pub const SHU_OSHER_LEFT: (f64, f64, f64) = (3.857143, 2.629369, 10.33333);

/// Shu-Osher problem on `(-5, 5)` with `n` cells: a Mach 3 shock at
/// `x = -4` running into a sinusoidal density field, up to `t = 1.8`.
pub fn shu_osher(n: usize, scheme: SchemeSpec) -> Result<ProblemSpec<Euler1D, 3>> {
    let (rho, v, p) = SHU_OSHER_LEFT;
    let left = EulerState1D::from_primitive(rho, v, p, DEFAULT_GAMMA).to_array();
    Ok(ProblemSpec {
        name: ProblemId::ShuOsher.name().into(),
        grid: Grid::new_1d(n, -5.0, 5.0)?,
        law: Euler1D::default(),
        initial: Arc::new(move |x, _| {
            if x[0] <= -4.0 {
                left
            } else {
                EulerState1D::from_primitive(
                    1.0 + 0.2 * (5.0 * x[0]).sin(),
                    0.0,
                    1.0,
                    DEFAULT_GAMMA,
                )
                .to_array()
            }
        }),
        boundaries: Boundaries::one_d(Boundary::Inflow(left), Boundary::Outflow),
        cfl: 0.5,
        t_final: 1.8,
        dt_rule: DtRule::Cfl,
        scheme,
        output_every: None,
    })
}

/// Post-shock state of the double Mach reflection as `(rho, rho vx, rho vy, E)`.
pub fn dmr_post_shock() -> [f64; 4] {
    let (s, c) = (PI / 6.0).sin_cos();
    let rho = 8.0;
    [rho, rho * 8.25 * c, -rho * 8.25 * s, 563.5]
}

/// Pre-shock state of the double Mach reflection.
pub const DMR_PRE_SHOCK: [f64; 4] = [1.4, 0.0, 0.0, 2.5];

/// Where the wall begins on the bottom side and where the shock meets it.
pub const DMR_WALL_START: f64 = 0.25;

/// Position of the shock along `y` at time `t`: post-shock gas where
/// `x <= 1/4 + (y + 20 t) / sqrt(3)`.
pub fn dmr_shock_x(y: f64, t: f64) -> f64 {
    DMR_WALL_START + (y + 20.0 * t) / 3f64.sqrt()
}

/// Double Mach reflection on `[0, 4] x [0, 1]`: a Mach 10 shock inclined
/// at 30 degrees to the vertical hits a reflecting wall that starts at
/// `x = 1/4`; the top boundary follows the exact shock motion.
pub fn double_mach(nx: usize, ny: usize, scheme: SchemeSpec) -> Result<ProblemSpec<Euler2D, 4>> {
    let c1 = dmr_post_shock();
    let c2 = DMR_PRE_SHOCK;
    let pick = move |x: [f64; 2], t: f64| if x[0] <= dmr_shock_x(x[1], t) { c1 } else { c2 };
    let top = move |x: [f64; 2], t: f64| if x[0] <= dmr_shock_x(1.0, t) { c1 } else { c2 };
    Ok(ProblemSpec {
        name: ProblemId::DoubleMach.name().into(),
        grid: Grid::new_2d(nx, ny, [0.0, 0.0], [4.0, 1.0])?,
        law: Euler2D::default(),
        initial: Arc::new(pick),
        boundaries: Boundaries {
            x_lo: Boundary::Inflow(c1),
            x_hi: Boundary::Outflow,
            y_lo: Boundary::Split {
                at: DMR_WALL_START,
                lower: Box::new(Boundary::Outflow),
                upper: Box::new(Boundary::Reflective),
            },
            y_hi: Boundary::TimeDependentInflow(Arc::new(top)),
        },
        cfl: 0.4,
        t_final: 0.2,
        dt_rule: DtRule::Cfl,
        scheme,
        output_every: None,
    })
}

/// Quadrant states `(rho, vx, vy, p)` of configuration 3, in the order
/// upper right, upper left, lower left, lower right.
pub const RIEMANN3_QUADRANTS: [[f64; 4]; 4] = [
    [1.5, 0.0, 0.0, 1.5],
    [0.5323, 1.206, 0.0, 0.3],
    [0.138, 1.206, 1.206, 0.029],
    [0.5323, 0.0, 1.206, 0.3],
];

pub fn riemann3_state(x: [f64; 2]) -> [f64; 4] {
    let q = match (x[0] > 0.5, x[1] > 0.5) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    };
    let [rho, vx, vy, p] = RIEMANN3_QUADRANTS[q];
    EulerState2D::from_primitive(rho, vx, vy, p, DEFAULT_GAMMA).to_array()
}

/// Four-quadrant Riemann problem on the unit square with outflow on every
/// side, up to `t = 0.3`.
pub fn riemann3(nx: usize, ny: usize, scheme: SchemeSpec) -> Result<ProblemSpec<Euler2D, 4>> {
    Ok(ProblemSpec {
        name: ProblemId::Riemann3.name().into(),
        grid: Grid::new_2d(nx, ny, [0.0, 0.0], [1.0, 1.0])?,
        law: Euler2D::default(),
        initial: Arc::new(|x, _| riemann3_state(x)),
        boundaries: Boundaries::uniform(Boundary::Outflow),
        cfl: 0.4,
        t_final: 0.3,
        dt_rule: DtRule::Cfl,
        scheme,
        output_every: None,
    })
}

/// Exact solution `sin(2 pi (x - t))` of the periodic advection problem.
pub fn advection_exact(x: f64, t: f64) -> f64 {
    (2.0 * PI * (x - t)).sin()
}

/// `u_t + u_x = 0` on `[0, 1]`, periodic, from `sin(2 pi x)`.
pub fn advection(
    n: usize,
    scheme: SchemeSpec,
    t_final: f64,
    dt_rule: DtRule,
) -> Result<ProblemSpec<LinearAdvection, 1>> {
    Ok(ProblemSpec {
        name: "advection".into(),
        grid: Grid::new_1d(n, 0.0, 1.0)?,
        law: LinearAdvection::one_d(1.0),
        initial: Arc::new(|x, t| [advection_exact(x[0], t)]),
        boundaries: Boundaries::uniform(Boundary::Periodic),
        cfl: 0.5,
        t_final,
        dt_rule,
        scheme,
        output_every: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::Scheme;

    #[test]
    fn dmr_states_and_geometry() {
        let c1 = EulerState2D::from_array(dmr_post_shock(), 1.4);
        assert!((c1.pressure() - 116.5).abs() < 1e-9);
        let c2 = EulerState2D::from_array(DMR_PRE_SHOCK, 1.4);
        assert!((c2.pressure() - 1.0).abs() < 1e-15);
        assert_eq!(dmr_shock_x(0.0, 0.0), 0.25);
        assert!((dmr_shock_x(1.0, 0.0) - (0.25 + 1.0 / 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn riemann_data_is_transpose_symmetric() {
        for &(x, y) in &[(0.2, 0.7), (0.9, 0.1), (0.3, 0.3), (0.8, 0.6)] {
            let a = riemann3_state([x, y]);
            let b = riemann3_state([y, x]);
            assert_eq!(a, [b[0], b[2], b[1], b[3]]);
        }
    }

    #[test]
    fn problem_ids_parse() {
        assert_eq!("dmr".parse::<ProblemId>().unwrap(), ProblemId::DoubleMach);
        assert!("sod".parse::<ProblemId>().is_err());
        let p = shu_osher(200, SchemeSpec::new(Scheme::WenoJs, 2)).unwrap();
        assert_eq!(p.grid.n(crate::euler::Axis::X), 200);
    }
}
