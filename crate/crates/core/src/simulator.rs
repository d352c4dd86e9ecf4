//! Method-of-steps integration of the delayed system on an arbitrary time
//! scale: the delta dynamic gives the exact update across right-scattered
//! points, classical RK4 advances dense segments, and delayed arguments are
//! served from the stored trajectory.

use crate::error::{Error, Result};
use crate::model::{rhs, History, InitialCondition, NicholsonModel};
use crate::real::{cst, time_tol, Real};
use crate::timescale::{Grid, PointKind, ScaleFamily};

const BLOW_UP_LIMIT: f64 = 1e12;

/// Time-stamped state history with dense-output interpolation.
///
/// Lookups between samples interpolate linearly inside dense segments and
/// hold the left value across right-scattered gaps (state on a scale is only
/// defined at scale points; the left value is the last defined state).
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    times: Vec<T>,
    states: Vec<Vec<T>>,
    scattered: Vec<bool>,
    t0: T,
    n: usize,
    provenance: String,
}

impl<T: Real> Trajectory<T> {
    pub fn new(t0: T, n: usize, provenance: String) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            scattered: Vec::new(),
            t0,
            n,
            provenance,
        }
    }

    pub fn push(&mut self, t: T, x: Vec<T>, right_scattered: bool) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert!(self
            .times
            .last()
            .map(|last| t > *last)
            .unwrap_or(true));
        self.times.push(t);
        self.states.push(x);
        self.scattered.push(right_scattered);
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<T>] {
        &self.states
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Right-scattered flag per sample.
    pub fn scattered_flags(&self) -> &[bool] {
        &self.scattered
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn locate(&self, t: T) -> Result<usize> {
        let tol = time_tol::<T>();
        if self.times.is_empty() || t < self.times[0] - tol {
            return Err(Error::HistoryGap {
                t: t.as_f64(),
                start: self.times.first().map(|v| v.as_f64()).unwrap_or(f64::NAN),
            });
        }
        let mut lo = 0usize;
        let mut hi = self.times.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.times[mid] <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo) // first index with time > t
    }

    /// State component at time `t`, interpolating between stored samples.
    pub fn sample(&self, component: usize, t: T) -> Result<T> {
        let tol = time_tol::<T>();
        let up = self.locate(t)?;
        if up == self.times.len() {
            let last = self.times[up - 1];
            if t <= last + tol {
                return Ok(self.states[up - 1][component]);
            }
            return Err(Error::HistoryGap {
                t: t.as_f64(),
                start: last.as_f64(),
            });
        }
        if up == 0 {
            return Ok(self.states[0][component]);
        }
        let k = up - 1;
        let (tl, tr) = (self.times[k], self.times[up]);
        if (t - tl).abs() <= tol {
            return Ok(self.states[k][component]);
        }
        if (t - tr).abs() <= tol {
            return Ok(self.states[up][component]);
        }
        if self.scattered[k] {
            // inside a scattered gap: no scale points exist there
            Ok(self.states[k][component])
        } else {
            let w = (t - tl) / (tr - tl);
            Ok(self.states[k][component] + (self.states[up][component] - self.states[k][component]) * w)
        }
    }

    /// Full state vector at time `t`.
    pub fn sample_vec(&self, t: T) -> Result<Vec<T>> {
        (0..self.n).map(|i| self.sample(i, t)).collect()
    }
}

impl<T: Real> History<T> for Trajectory<T> {
    fn delayed(&self, component: usize, t: T) -> Result<T> {
        self.sample(component, t)
    }
}

/// History view used inside an integration step: the stage state serves
/// queries at the stage time itself (zero delay), queries that land inside
/// the not-yet-stored current step use an Euler predictor from the step
/// start, and everything older comes from the stored trajectory.
struct StageHistory<'a, T> {
    traj: &'a Trajectory<T>,
    stage_t: T,
    stage_x: &'a [T],
    step_start_t: T,
    step_start_x: &'a [T],
    step_slope: Option<&'a [T]>,
}

impl<'a, T: Real> History<T> for StageHistory<'a, T> {
    fn delayed(&self, component: usize, t: T) -> Result<T> {
        let tol = time_tol::<T>();
        if (t - self.stage_t).abs() <= tol {
            return Ok(self.stage_x[component]);
        }
        let last = *self.traj.times().last().expect("history is non-empty");
        if t > last + tol {
            let slope = self.step_slope.map(|s| s[component]).unwrap_or(T::zero());
            return Ok(self.step_start_x[component] + slope * (t - self.step_start_t));
        }
        self.traj.sample(component, t)
    }
}

fn check_finite<T: Real>(t: T, x: &[T]) -> Result<()> {
    let limit = cst::<T>(BLOW_UP_LIMIT);
    for (i, v) in x.iter().enumerate() {
        if !v.is_finite() || v.abs() > limit {
            return Err(Error::BlowUp {
                t: t.as_f64(),
                component: i,
            });
        }
    }
    Ok(())
}

/// Window that a simulation grid must cover: it reaches at least `theta`
/// below `t0` (snapped to the scale, and aligned to `max_step` so that `t0`
/// itself lands on a grid node inside dense segments) and extends to
/// `t_end`.
pub fn simulation_window<T: Real>(
    fam: &ScaleFamily<T>,
    t0: T,
    theta: T,
    t_end: T,
    max_step: T,
) -> (T, T) {
    let aligned = t0 - (theta / max_step).ceil() * max_step;
    let lo = fam.floor(aligned).min(aligned);
    (lo, t_end)
}

/// Integrates the system on the grid from the initial condition up to
/// `t_end`.
///
/// At a right-scattered grid point the update `x(sigma(t)) = x(t) + mu(t)
/// rhs(t)` is exact for the delta dynamic. On dense segments classical RK4
/// advances with the grid spacing and history interpolation.
pub fn simulate<T: Real>(
    model: &NicholsonModel<T>,
    fam: &ScaleFamily<T>,
    grid: &Grid<T>,
    ic: &InitialCondition<T>,
    t_end: T,
) -> Result<Trajectory<T>> {
    let tol = time_tol::<T>();
    let n = model.n();
    if ic.phi.len() != n {
        return Err(Error::InvalidModel {
            reason: format!("initial condition has {} components, model has {}", ic.phi.len(), n),
        });
    }
    let theta = model.theta()?;
    let t0 = ic.t0;
    if grid.first() > t0 - theta + tol {
        return Err(Error::HistoryGap {
            t: (t0 - theta).as_f64(),
            start: grid.first().as_f64(),
        });
    }
    if grid.last() < t_end - tol {
        return Err(Error::EmptyWindow {
            lo: grid.last().as_f64(),
            hi: t_end.as_f64(),
        });
    }
    let start_idx = grid.index_of(t0)?;

    let provenance = format!(
        "n={}, scale={:?}-family, grid {} points, max_step {}",
        n,
        std::mem::discriminant(fam),
        grid.len(),
        grid.max_step()
    );
    let mut traj = Trajectory::new(t0, n, provenance);

    // prehistory from the initial data
    for k in 0..=start_idx {
        let t = grid.points()[k];
        let x: Vec<T> = (0..n).map(|i| ic.eval(i, t)).collect();
        for (i, v) in x.iter().enumerate() {
            if *v <= T::zero() {
                return Err(Error::InvalidModel {
                    reason: format!(
                        "initial condition must be positive: phi[{}]({}) = {}",
                        i, t, v
                    ),
                });
            }
        }
        traj.push(t, x, grid.kinds()[k] == PointKind::RightScattered);
    }

    let pts = grid.points();
    let kinds = grid.kinds();
    let mus = grid.graininess();
    let mut k = start_idx;
    let mut x: Vec<T> = traj.states()[start_idx].clone();
    while pts[k] < t_end - tol && k + 1 < grid.len() {
        let t = pts[k];
        let next = match kinds[k] {
            PointKind::RightScattered => {
                let f = rhs(model, t, &x, &traj)?;
                let mu = mus[k];
                let stepped: Vec<T> = x
                    .iter()
                    .zip(&f)
                    .map(|(xi, fi)| *xi + mu * *fi)
                    .collect();
                debug_assert!((pts[k + 1] - (t + mu)).abs() <= cst::<T>(1e-7));
                stepped
            }
            PointKind::RightDense => {
                let h = pts[k + 1] - t;
                let half = h / cst(2.0);
                macro_rules! stage {
                    ($st:expr, $sx:expr, $slope:expr) => {
                        StageHistory {
                            traj: &traj,
                            stage_t: $st,
                            stage_x: $sx,
                            step_start_t: t,
                            step_start_x: &x,
                            step_slope: $slope,
                        }
                    };
                }
                let k1 = rhs(model, t, &x, &stage!(t, &x, None))?;
                let x2: Vec<T> = x.iter().zip(&k1).map(|(xi, f)| *xi + half * *f).collect();
                let k2 = rhs(model, t + half, &x2, &stage!(t + half, &x2, Some(&k1)))?;
                let x3: Vec<T> = x.iter().zip(&k2).map(|(xi, f)| *xi + half * *f).collect();
                let k3 = rhs(model, t + half, &x3, &stage!(t + half, &x3, Some(&k1)))?;
                let x4: Vec<T> = x.iter().zip(&k3).map(|(xi, f)| *xi + h * *f).collect();
                let k4 = rhs(model, t + h, &x4, &stage!(t + h, &x4, Some(&k1)))?;
                let sixth = h / cst(6.0);
                x.iter()
                    .enumerate()
                    .map(|(i, xi)| {
                        *xi + sixth * (k1[i] + cst::<T>(2.0) * k2[i] + cst::<T>(2.0) * k3[i] + k4[i])
                    })
                    .collect()
            }
            PointKind::Terminal => break,
        };
        check_finite(pts[k + 1], &next)?;
        x = next;
        k += 1;
        traj.push(pts[k], x.clone(), kinds[k] == PointKind::RightScattered);
    }
    Ok(traj)
}

/// Pointwise sup-norm difference between two trajectories on the same grid.
pub fn pair_deviation<T: Real>(
    a: &Trajectory<T>,
    b: &Trajectory<T>,
) -> Result<Vec<(T, T)>> {
    let tol = time_tol::<T>();
    if a.len() != b.len() {
        return Err(Error::GridMismatch {
            reason: format!("{} vs {} samples", a.len(), b.len()),
        });
    }
    if a.n() != b.n() {
        return Err(Error::GridMismatch {
            reason: format!("{} vs {} components", a.n(), b.n()),
        });
    }
    let mut out = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let (ta, tb) = (a.times()[k], b.times()[k]);
        if (ta - tb).abs() > tol {
            return Err(Error::GridMismatch {
                reason: format!("times diverge at index {}: {} vs {}", k, ta, tb),
            });
        }
        let mut d = T::zero();
        for i in 0..a.n() {
            d = d.max((a.states()[k][i] - b.states()[k][i]).abs());
        }
        out.push((ta, d));
    }
    Ok(out)
}
