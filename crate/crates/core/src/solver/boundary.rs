//! Ghost-cell boundary conditions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::euler::{Axis, ConservationLaw};

use super::{Grid, Layout};

/// A state as a function of position and time.
pub type StateRule<const N: usize> = Arc<dyn Fn([f64; 2], f64) -> [f64; N] + Send + Sync>;

#[derive(Clone)]
pub enum Boundary<const N: usize> {
    /// Every ghost layer holds this state.
    Inflow([f64; N]),
    /// Zeroth-order extrapolation of the nearest interior cell.
    Outflow,
    /// Mirror image with the normal momentum negated.
    Reflective,
    /// Wraps around to the opposite side, which must also be periodic.
    Periodic,
    /// Ghost cells take `rule(center, t)`.
    TimeDependentInflow(StateRule<N>),
    /// `lower` where the tangential coordinate of the ghost cell is at
    /// most `at`, `upper` elsewhere.
    Split {
        at: f64,
        lower: Box<Boundary<N>>,
        upper: Box<Boundary<N>>,
    },
}

impl<const N: usize> fmt::Debug for Boundary<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Inflow(s) => f.debug_tuple("Inflow").field(s).finish(),
            Boundary::Outflow => f.write_str("Outflow"),
            Boundary::Reflective => f.write_str("Reflective"),
            Boundary::Periodic => f.write_str("Periodic"),
            Boundary::TimeDependentInflow(_) => f.write_str("TimeDependentInflow(..)"),
            Boundary::Split { at, lower, upper } => f
                .debug_struct("Split")
                .field("at", at)
                .field("lower", lower)
                .field("upper", upper)
                .finish(),
        }
    }
}

impl<const N: usize> Boundary<N> {
    fn resolve(&self, tangential: f64) -> &Boundary<N> {
        match self {
            Boundary::Split { at, lower, upper } => {
                if tangential <= *at {
                    lower.resolve(tangential)
                } else {
                    upper.resolve(tangential)
                }
            }
            other => other,
        }
    }

    fn has_periodic(&self) -> bool {
        match self {
            Boundary::Periodic => true,
            Boundary::Split { lower, upper, .. } => lower.has_periodic() || upper.has_periodic(),
            _ => false,
        }
    }
}

/// One condition per side. The y sides are ignored in 1D.
#[derive(Debug, Clone)]
pub struct Boundaries<const N: usize> {
    pub x_lo: Boundary<N>,
    pub x_hi: Boundary<N>,
    pub y_lo: Boundary<N>,
    pub y_hi: Boundary<N>,
}

impl<const N: usize> Boundaries<N> {
    pub fn uniform(b: Boundary<N>) -> Self {
        Self {
            x_lo: b.clone(),
            x_hi: b.clone(),
            y_lo: b.clone(),
            y_hi: b,
        }
    }

    pub fn one_d(lo: Boundary<N>, hi: Boundary<N>) -> Self {
        Self {
            x_lo: lo,
            x_hi: hi,
            y_lo: Boundary::Outflow,
            y_hi: Boundary::Outflow,
        }
    }

    /// Periodicity must be all-or-nothing on each axis, and cannot be
    /// combined with a split.
    pub fn validate(&self, dims: usize) -> Result<()> {
        let pairs: &[(&Boundary<N>, &Boundary<N>)] = if dims == 2 {
            &[(&self.x_lo, &self.x_hi), (&self.y_lo, &self.y_hi)]
        } else {
            &[(&self.x_lo, &self.x_hi)]
        };
        for (lo, hi) in pairs {
            let plain = |b: &Boundary<N>| matches!(b, Boundary::Periodic);
            if (lo.has_periodic() || hi.has_periodic()) && !(plain(lo) && plain(hi)) {
                return Err(Error::domain(
                    "periodic boundaries must pair whole opposite sides",
                ));
            }
        }
        Ok(())
    }
}

/// Fills every ghost layer of `u` for time `t`. The x sides are filled on
/// interior rows first, then the y sides on every column, so corner ghosts
/// follow the y rule.
pub fn fill_ghosts<L: ConservationLaw<N>, const N: usize>(
    u: &mut [[f64; N]],
    layout: Layout,
    grid: &Grid,
    b: &Boundaries<N>,
    law: &L,
    t: f64,
) {
    let g = layout.g;
    let (nx, ny) = (layout.nx, layout.ny);
    let gy = layout.gy();
    for j in 0..ny {
        let y = if layout.dims == 2 {
            grid.center(Axis::Y, j as isize)
        } else {
            0.0
        };
        let at = |i: usize| layout.raw(i, j + gy);
        for l in 1..=g {
            let lo = g - l;
            let v = ghost(
                b.x_lo.resolve(y),
                law,
                Axis::X,
                [grid.center(Axis::X, -(l as isize)), y],
                t,
                &u[at(g + l - 1)],
                &u[at(g)],
                &u[at(g + nx - l)],
            );
            u[at(lo)] = v;
            let hi = g + nx - 1 + l;
            let v = ghost(
                b.x_hi.resolve(y),
                law,
                Axis::X,
                [grid.center(Axis::X, (nx - 1 + l) as isize), y],
                t,
                &u[at(g + nx - l)],
                &u[at(g + nx - 1)],
                &u[at(g + l - 1)],
            );
            u[at(hi)] = v;
        }
    }
    if layout.dims != 2 {
        return;
    }
    for i in 0..layout.row_len() {
        let x = grid.center(Axis::X, i as isize - g as isize);
        let at = |j: usize| layout.raw(i, j);
        for l in 1..=g {
            let v = ghost(
                b.y_lo.resolve(x),
                law,
                Axis::Y,
                [x, grid.center(Axis::Y, -(l as isize))],
                t,
                &u[at(g + l - 1)],
                &u[at(g)],
                &u[at(g + ny - l)],
            );
            u[at(g - l)] = v;
            let v = ghost(
                b.y_hi.resolve(x),
                law,
                Axis::Y,
                [x, grid.center(Axis::Y, (ny - 1 + l) as isize)],
                t,
                &u[at(g + ny - l)],
                &u[at(g + ny - 1)],
                &u[at(g + l - 1)],
            );
            u[at(g + ny - 1 + l)] = v;
        }
    }
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn ghost<L: ConservationLaw<N>, const N: usize>(
    b: &Boundary<N>,
    law: &L,
    axis: Axis,
    center: [f64; 2],
    t: f64,
    mirror: &[f64; N],
    nearest: &[f64; N],
    wrapped: &[f64; N],
) -> [f64; N] {
    match b {
        Boundary::Inflow(s) => *s,
        Boundary::Outflow => *nearest,
        Boundary::Reflective => law.reflect(mirror, axis),
        Boundary::Periodic => *wrapped,
        Boundary::TimeDependentInflow(rule) => rule(center, t),
        Boundary::Split { .. } => unreachable!("splits are resolved before filling"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{Euler2D, LinearAdvection};
    use crate::solver::Field;

    fn field_2d(g: usize) -> (Grid, Field<4>) {
        let grid = Grid::new_2d(6, 5, [0.0, 0.0], [0.6, 0.5]).unwrap();
        let f = Field::from_fn(&grid, g, |x| {
            [1.0 + x[0], 0.5 + x[1], 2.0 * x[0] - x[1], 3.0]
        });
        (grid, f)
    }

    #[test]
    fn reflective_wall_mirrors_and_flips_normal_momentum() {
        let (grid, mut f) = field_2d(3);
        let l = f.layout();
        let b = Boundaries {
            y_lo: Boundary::Reflective,
            ..Boundaries::uniform(Boundary::Outflow)
        };
        fill_ghosts(f.data_mut(), l, &grid, &b, &Euler2D::default(), 0.0);
        for i in 0..l.nx {
            for k in 1..=3 {
                let ghost = f.data()[l.raw(i + 3, 3 - k)];
                let inner = *f.at(i, k - 1);
                assert_eq!(ghost, [inner[0], inner[1], -inner[2], inner[3]]);
            }
        }
    }

    #[test]
    fn outflow_of_constant_interior_is_constant() {
        let grid = Grid::new_1d(8, 0.0, 1.0).unwrap();
        let mut f = Field::from_fn(&grid, 3, |_| [2.5]);
        let l = f.layout();
        fill_ghosts(
            f.data_mut(),
            l,
            &grid,
            &Boundaries::uniform(Boundary::Outflow),
            &LinearAdvection::one_d(1.0),
            0.0,
        );
        assert!(f.data().iter().all(|v| v[0] == 2.5));
    }

    #[test]
    fn periodic_wraps_and_split_picks_by_position() {
        let grid = Grid::new_1d(8, 0.0, 1.0).unwrap();
        let mut f = Field::from_fn(&grid, 2, |x| [x[0]]);
        let l = f.layout();
        let law = LinearAdvection::one_d(1.0);
        fill_ghosts(
            f.data_mut(),
            l,
            &grid,
            &Boundaries::uniform(Boundary::Periodic),
            &law,
            0.0,
        );
        assert_eq!(f.data()[0][0], f.at(6, 0)[0]);
        assert_eq!(f.data()[l.row_len() - 1][0], f.at(1, 0)[0]);

        let (grid, mut f) = field_2d(2);
        let l = f.layout();
        let c1 = [9.0, 0.0, 0.0, 9.0];
        let b = Boundaries {
            y_hi: Boundary::Split {
                at: 0.3,
                lower: Box::new(Boundary::Inflow(c1)),
                upper: Box::new(Boundary::Outflow),
            },
            ..Boundaries::uniform(Boundary::Outflow)
        };
        fill_ghosts(f.data_mut(), l, &grid, &b, &Euler2D::default(), 0.0);
        let top = l.rows() - 1;
        assert_eq!(f.data()[l.raw(2 + 2, top)], c1);
        assert_eq!(f.data()[l.raw(2 + 3, top)], *f.at(3, 4));
        assert!(
            Boundaries::one_d(Boundary::<1>::Periodic, Boundary::Outflow)
                .validate(1)
                .is_err()
        );
    }
}
