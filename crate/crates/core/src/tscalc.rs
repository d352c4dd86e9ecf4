//! Time-scale calculus kernel: regressivity, circle operations, the cylinder
//! transform, the generalized exponential `e_p(t, s)`, delta integration and
//! numerical delta differentiation.
//!
//! `e_p` is accumulated in log space (a sum of cylinder terms) so that decay
//! envelopes spanning hundreds of time units do not underflow. On dense
//! stretches the cylinder term reduces to the trapezoid rule applied to `p`;
//! across a right-scattered step it is `ln(1 + mu * p)` exactly.

use crate::error::{Error, Result};
use crate::real::{cst, regressivity_tol, time_tol, Real};
use crate::timescale::{Grid, PointKind};

/// True when `1 + mu(t) p(t)` stays away from zero at every grid point.
pub fn is_regressive<T: Real>(p: impl Fn(T) -> T, grid: &Grid<T>) -> bool {
    let tol = regressivity_tol::<T>();
    grid.points()
        .iter()
        .zip(grid.graininess())
        .all(|(&t, &mu)| (T::one() + mu * p(t)).abs() > tol)
}

/// True when `1 + mu(t) p(t) > 0` at every grid point.
pub fn is_positively_regressive<T: Real>(p: impl Fn(T) -> T, grid: &Grid<T>) -> bool {
    grid.points()
        .iter()
        .zip(grid.graininess())
        .all(|(&t, &mu)| T::one() + mu * p(t) > T::zero())
}

/// Cylinder transform `xi_h(z)`: `z` for `h = 0`, `ln(1 + h z) / h` for
/// `h > 0`.
pub fn cylinder<T: Real>(h: T, z: T) -> Result<T> {
    if h == T::zero() {
        return Ok(z);
    }
    let w = T::one() + h * z;
    if w <= T::zero() {
        return Err(Error::NonRegressivePoint {
            t: f64::NAN,
            value: w.as_f64(),
        });
    }
    Ok(w.ln() / h)
}

/// `p ⊕ q = p + q + mu p q`.
pub fn circle_plus<T: Real>(p: T, q: T, mu: T) -> T {
    p + q + mu * p * q
}

/// `⊖p = -p / (1 + mu p)`.
pub fn circle_minus<T: Real>(p: T, mu: T) -> Result<T> {
    let w = T::one() + mu * p;
    if w.abs() <= regressivity_tol::<T>() {
        return Err(Error::NonRegressivePoint {
            t: f64::NAN,
            value: w.as_f64(),
        });
    }
    Ok(-p / w)
}

/// Generalized exponential `e_p(t, s)` on the grid.
///
/// Requires `s, t` to be grid points. For `s > t` the reciprocal convention
/// `e_p(t, s) = 1 / e_p(s, t)` applies. The result is a signed magnitude:
/// negative factors from merely-regressive (not positively regressive) `p`
/// are tracked explicitly.
pub fn ts_exp<T: Real>(p: impl Fn(T) -> T, t: T, s: T, grid: &Grid<T>) -> Result<T> {
    if (t - s).abs() <= time_tol::<T>() {
        return Ok(T::one());
    }
    if s > t {
        let v = ts_exp(p, s, t, grid)?;
        if v == T::zero() {
            return Err(Error::NonRegressivePoint {
                t: s.as_f64(),
                value: 0.0,
            });
        }
        return Ok(T::one() / v);
    }
    let i0 = grid.index_of(s)?;
    let i1 = grid.index_of(t)?;
    let pts = grid.points();
    let mus = grid.graininess();
    let kinds = grid.kinds();
    let mut log_abs = T::zero();
    let mut negatives = 0usize;
    for k in i0..i1 {
        let tk = pts[k];
        match kinds[k] {
            PointKind::RightScattered => {
                let w = T::one() + mus[k] * p(tk);
                if w.abs() <= regressivity_tol::<T>() {
                    return Err(Error::NonRegressivePoint {
                        t: tk.as_f64(),
                        value: w.as_f64(),
                    });
                }
                if w < T::zero() {
                    negatives += 1;
                }
                log_abs = log_abs + w.abs().ln();
            }
            PointKind::RightDense | PointKind::Terminal => {
                let h = pts[k + 1] - tk;
                let right = dense_right_node(pts, kinds, k, h);
                log_abs = log_abs + (p(tk) + p(right)) * h / cst(2.0);
            }
        }
    }
    let magnitude = log_abs.exp();
    if negatives % 2 == 1 {
        Ok(-magnitude)
    } else {
        Ok(magnitude)
    }
}

/// Delta integral of `f` over `[a, b]` on the grid: trapezoid on dense
/// stretches, `f(t) * mu(t)` across scattered steps.
pub fn delta_integral<T: Real>(f: impl Fn(T) -> T, a: T, b: T, grid: &Grid<T>) -> Result<T> {
    if (b - a).abs() <= time_tol::<T>() {
        return Ok(T::zero());
    }
    if b < a {
        return Ok(-delta_integral(f, b, a, grid)?);
    }
    let i0 = grid.index_of(a)?;
    let i1 = grid.index_of(b)?;
    let pts = grid.points();
    let mus = grid.graininess();
    let kinds = grid.kinds();
    let mut acc = T::zero();
    for k in i0..i1 {
        let tk = pts[k];
        match kinds[k] {
            PointKind::RightScattered => {
                acc = acc + f(tk) * mus[k];
            }
            PointKind::RightDense | PointKind::Terminal => {
                let h = pts[k + 1] - tk;
                let right = dense_right_node(pts, kinds, k, h);
                acc = acc + (f(tk) + f(right)) * h / cst(2.0);
            }
        }
    }
    Ok(acc)
}

/// Right evaluation node for the trapezoid step `[pts[k], pts[k+1]]`.
///
/// When the dense run ends at a right-scattered point, rd-continuous
/// integrands built from the graininess (such as `circleminus p`) jump AT the
/// junction; the half-open delta integral only sees the left limit, so the
/// node is pulled just inside the run.
fn dense_right_node<T: Real>(pts: &[T], kinds: &[PointKind], k: usize, h: T) -> T {
    if kinds[k + 1] == PointKind::RightScattered {
        // the pull-back must clear the membership tolerance so the node is
        // seen as interior
        let shift = (h * cst(1e-3)).max(time_tol::<T>() * cst(4.0));
        pts[k + 1] - shift
    } else {
        pts[k + 1]
    }
}

/// Numerical delta derivative of `f` at a grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaDerivative<T> {
    pub value: T,
    /// Set when only a one-sided difference was available (window edge of a
    /// dense segment). Flagged, not fatal.
    pub one_sided: bool,
}

pub fn delta_derivative<T: Real>(
    f: impl Fn(T) -> T,
    t: T,
    grid: &Grid<T>,
) -> Result<DeltaDerivative<T>> {
    let idx = grid.index_of(t)?;
    let pts = grid.points();
    let mus = grid.graininess();
    let kinds = grid.kinds();
    match kinds[idx] {
        PointKind::RightScattered => {
            // forward difference quotient is exact at scattered points
            let mu = mus[idx];
            Ok(DeltaDerivative {
                value: (f(t + mu) - f(t)) / mu,
                one_sided: false,
            })
        }
        PointKind::Terminal => Err(Error::NotInScale { t: t.as_f64() }),
        PointKind::RightDense => {
            let left_ok = idx > 0 && kinds[idx - 1] == PointKind::RightDense;
            let right = pts.get(idx + 1).copied();
            match (left_ok, right) {
                (true, Some(tr)) => {
                    let tl = pts[idx - 1];
                    // central difference; handles mildly nonuniform spacing
                    let hl = t - tl;
                    let hr = tr - t;
                    let value = (f(tr) * hl * hl - f(tl) * hr * hr
                        + f(t) * (hr * hr - hl * hl))
                        / (hl * hr * (hl + hr));
                    Ok(DeltaDerivative {
                        value,
                        one_sided: false,
                    })
                }
                (false, Some(tr)) => Ok(DeltaDerivative {
                    value: (f(tr) - f(t)) / (tr - t),
                    one_sided: true,
                }),
                (true, None) => {
                    let tl = pts[idx - 1];
                    Ok(DeltaDerivative {
                        value: (f(t) - f(tl)) / (t - tl),
                        one_sided: true,
                    })
                }
                (false, None) => Err(Error::NotInScale { t: t.as_f64() }),
            }
        }
    }
}
