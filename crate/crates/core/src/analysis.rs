//! Post-hoc diagnostics: exponential-envelope verification, decay-rate
//! fitting, translation-number search on trajectories, continuous/discrete
//! comparison, and a randomized closure diagnostic for almost periodic
//! coefficient algebra.

use crate::certifier;
use crate::error::{Error, Result};
use crate::model::{Coefficient, InitialCondition, InitialFunction, NicholsonModel};
use crate::real::{cst, time_tol, Real};
use crate::simulator::{pair_deviation, simulate, simulation_window, Trajectory};
use crate::timescale::{build_grid, ScaleFamily};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Multiplicative slack on the envelope bound absorbing quadrature error in
/// the generalized exponential.
const ENVELOPE_SLACK: f64 = 1e-6;

/// Outcome of checking `max_i |x_i - x_i*| <= M ||phi - phi*||_0
/// e_{circleminus alpha}(t, t0)` along a trajectory pair.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport<T> {
    pub violations: usize,
    pub worst_ratio: T,
    pub fitted_rate: Option<T>,
    pub alpha: T,
    pub m: T,
    pub ic_distance: T,
    /// Per-sample `(t, deviation, envelope)` rows for `t >= t0`.
    pub series: Vec<(T, T, T)>,
}

fn require_same_grid<T: Real>(a: &Trajectory<T>, b: &Trajectory<T>) -> Result<()> {
    let tol = time_tol::<T>();
    if a.len() != b.len() || a.n() != b.n() {
        return Err(Error::GridMismatch {
            reason: "sample count or dimension differs".into(),
        });
    }
    if (a.t0() - b.t0()).abs() > tol {
        return Err(Error::GridMismatch {
            reason: "start times differ".into(),
        });
    }
    for k in 0..a.len() {
        if (a.times()[k] - b.times()[k]).abs() > tol {
            return Err(Error::GridMismatch {
                reason: format!("times diverge at index {}", k),
            });
        }
    }
    Ok(())
}

/// Checks the exponential stability envelope of the pair `(traj, ref_traj)`
/// with the certified constants `(alpha, m)`.
///
/// The generalized exponential `e_{circleminus alpha}` is accumulated along
/// the trajectory's own grid: a factor `1/(1 + alpha mu)` across each
/// scattered step, `exp(-alpha h)` across dense steps.
pub fn verify_envelope<T: Real>(
    traj: &Trajectory<T>,
    ref_traj: &Trajectory<T>,
    alpha: T,
    m: T,
) -> Result<StabilityReport<T>> {
    require_same_grid(traj, ref_traj)?;
    let tol = time_tol::<T>();
    let t0 = traj.t0();
    let dev = pair_deviation(traj, ref_traj)?;

    let ic_distance = dev
        .iter()
        .filter(|(t, _)| *t <= t0 + tol)
        .fold(T::zero(), |m0, (_, d)| m0.max(*d));

    let start = dev
        .iter()
        .position(|(t, _)| (*t - t0).abs() <= tol)
        .ok_or(Error::GridMismatch {
            reason: "t0 is not a sample of the trajectory".into(),
        })?;

    let scattered = trajectory_scattered_flags(traj);
    let slack = T::one() + cst::<T>(ENVELOPE_SLACK);
    let mut log_env = T::zero();
    let mut violations = 0usize;
    let mut worst_ratio = T::zero();
    let mut series = Vec::with_capacity(dev.len() - start);
    for k in start..dev.len() {
        let (t, d) = dev[k];
        let envelope = m * ic_distance * log_env.exp();
        series.push((t, d, envelope));
        if envelope > T::zero() {
            let ratio = d / envelope;
            worst_ratio = worst_ratio.max(ratio);
            if d > envelope * slack {
                violations += 1;
            }
        } else if d > T::zero() {
            violations += 1;
            worst_ratio = T::infinity();
        }
        if k + 1 < dev.len() {
            let h = dev[k + 1].0 - t;
            if scattered[k] {
                log_env = log_env - (T::one() + alpha * h).ln();
            } else {
                log_env = log_env - alpha * h;
            }
        }
    }

    let fitted_rate = {
        let span = dev.last().unwrap().0 - t0;
        let window = (t0 + span * cst(0.05), t0 + span * cst(0.8));
        fit_decay(&dev[start..], window).ok()
    };

    Ok(StabilityReport {
        violations,
        worst_ratio,
        fitted_rate,
        alpha,
        m,
        ic_distance,
        series,
    })
}

fn trajectory_scattered_flags<T: Real>(traj: &Trajectory<T>) -> &[bool] {
    traj.scattered_flags()
}

/// Least-squares slope of `ln(deviation)` against `t` on the window;
/// positive return value means decay. The window is truncated at the first
/// underflowing deviation.
pub fn fit_decay<T: Real>(series: &[(T, T)], window: (T, T)) -> Result<T> {
    let floor = cst::<T>(1e-14);
    let mut pts: Vec<(T, T)> = Vec::new();
    for (t, d) in series {
        if *t < window.0 || *t > window.1 {
            continue;
        }
        if *d < floor {
            break;
        }
        pts.push((*t, d.ln()));
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateSeries {
            reason: format!("{} usable points on the fit window", pts.len()),
        });
    }
    let n = T::from_usize(pts.len()).unwrap();
    let sx = pts.iter().fold(T::zero(), |a, (t, _)| a + *t);
    let sy = pts.iter().fold(T::zero(), |a, (_, y)| a + *y);
    let sxx = pts.iter().fold(T::zero(), |a, (t, _)| a + *t * *t);
    let sxy = pts.iter().fold(T::zero(), |a, (t, y)| a + *t * *y);
    let denom = n * sxx - sx * sx;
    if denom == T::zero() {
        return Err(Error::DegenerateSeries {
            reason: "zero time variance on the fit window".into(),
        });
    }
    let slope = (n * sxy - sx * sy) / denom;
    Ok(-slope)
}

/// Translation-number search result.
#[derive(Debug, Clone, Serialize)]
pub struct TranslationReport<T> {
    pub eps: T,
    /// Accepted shifts with their sup-deviations.
    pub accepted: Vec<(T, T)>,
    /// Rejected shifts with the sup-deviation where overlap existed.
    pub rejected: Vec<(T, Option<T>)>,
    /// Largest gap between consecutive accepted shifts.
    pub inclusion_length: Option<T>,
}

/// Accepts candidate shifts `tau` with
/// `sup_t max_i |x_i(t + tau) - x_i(t)| < eps` over the overlapped part of
/// the trajectory at or after `t0`.
pub fn translation_numbers<T: Real>(
    traj: &Trajectory<T>,
    eps: T,
    candidates: &[T],
) -> Result<TranslationReport<T>> {
    let t0 = traj.t0();
    let t_end = *traj.times().last().ok_or(Error::InsufficientOverlap)?;
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    let mut any_overlap = false;
    for &tau in candidates {
        let lo = t0.max(t0 - tau);
        let hi = t_end.min(t_end - tau);
        let mut sup: Option<T> = None;
        for (k, &t) in traj.times().iter().enumerate() {
            if t < lo || t > hi {
                continue;
            }
            let mut d = T::zero();
            for i in 0..traj.n() {
                let shifted = traj.sample(i, t + tau)?;
                d = d.max((shifted - traj.states()[k][i]).abs());
            }
            sup = Some(sup.map_or(d, |s: T| s.max(d)));
        }
        match sup {
            None => rejected.push((tau, None)),
            Some(s) => {
                any_overlap = true;
                if s < eps {
                    accepted.push((tau, s));
                } else {
                    rejected.push((tau, Some(s)));
                }
            }
        }
    }
    if !any_overlap {
        return Err(Error::InsufficientOverlap);
    }
    let mut shifts: Vec<T> = accepted.iter().map(|(t, _)| *t).collect();
    shifts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let inclusion_length = if shifts.len() >= 2 {
        Some(
            shifts
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(T::zero(), |m, g| m.max(g)),
        )
    } else {
        None
    };
    Ok(TranslationReport {
        eps,
        accepted,
        rejected,
        inclusion_length,
    })
}

/// Per-scale outcome of the continuous/discrete comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ScaleOutcome<T> {
    pub certified: bool,
    pub compliant: bool,
    pub fitted_rate: Option<T>,
    pub state_min: T,
    pub state_max: T,
    /// `(condition name, holds)` pairs from the certificate.
    pub condition_holds: Vec<(String, bool)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompareVerdict {
    /// Both scales certify and both stay in the box.
    SameQualitativeBehavior,
    /// Some individual condition (typically regressivity of the mortality
    /// rates, which depends on the graininess) or the box compliance holds
    /// on one scale but not the other.
    DivergentAssumptions,
    /// The condition set fails identically on both scales.
    UncertifiedOnBoth,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary<T> {
    pub reals: ScaleOutcome<T>,
    pub integers: ScaleOutcome<T>,
    pub verdict: CompareVerdict,
}

/// Runs the model on `R` and on `Z` over `horizon` time units and compares
/// certification, box compliance and fitted contraction.
#[allow(clippy::too_many_arguments)]
pub fn compare_scales<T: Real>(
    model: &NicholsonModel<T>,
    ic_reals: &InitialCondition<T>,
    ic_integers: &InitialCondition<T>,
    horizon: T,
    a1: T,
    a2: T,
    max_step: T,
    bounds_horizon: T,
    bounds_samples: usize,
) -> Result<CompareSummary<T>> {
    let run = |fam: ScaleFamily<T>, ic: &InitialCondition<T>| -> Result<ScaleOutcome<T>> {
        let theta = model.theta()?;
        let t_end = ic.t0 + horizon;
        let window = simulation_window(&fam, ic.t0, theta, t_end, max_step);
        let grid = build_grid(&fam, window, max_step)?;
        let cert = certifier::certify(
            model,
            &fam,
            &grid,
            a1,
            a2,
            None,
            bounds_horizon,
            bounds_samples,
        )?;
        let traj = simulate(model, &fam, &grid, ic, t_end)?;
        let tol = cst::<T>(1e-6);
        let mut compliant = true;
        let mut state_min = T::infinity();
        let mut state_max = T::neg_infinity();
        for (k, x) in traj.states().iter().enumerate() {
            if traj.times()[k] < ic.t0 {
                continue;
            }
            for v in x {
                state_min = state_min.min(*v);
                state_max = state_max.max(*v);
                if *v < a1 - tol || *v > a2 + tol {
                    compliant = false;
                }
            }
        }
        // deterministic sibling start for the contraction fit
        let offset = cst::<T>(0.05);
        let ic2 = InitialCondition {
            t0: ic.t0,
            phi: ic
                .phi
                .iter()
                .map(|f| match f {
                    InitialFunction::Constant(v) => InitialFunction::Constant(*v + offset),
                    InitialFunction::Expr(c) => InitialFunction::Expr(Coefficient::Sum(vec![
                        c.clone(),
                        Coefficient::Const(offset),
                    ])),
                })
                .collect(),
        };
        let traj2 = simulate(model, &fam, &grid, &ic2, t_end)?;
        let dev = pair_deviation(&traj, &traj2)?;
        let window = (ic.t0 + horizon * cst(0.05), ic.t0 + horizon * cst(0.8));
        let fitted_rate = fit_decay(&dev, window).ok();
        Ok(ScaleOutcome {
            certified: cert.overall,
            compliant,
            fitted_rate,
            state_min,
            state_max,
            condition_holds: cert
                .conditions
                .iter()
                .map(|c| (c.name.clone(), c.holds))
                .collect(),
        })
    };
    let reals = run(ScaleFamily::Reals, ic_reals)?;
    let integers = run(ScaleFamily::Integers, ic_integers)?;
    let conditions_differ = reals
        .condition_holds
        .iter()
        .zip(&integers.condition_holds)
        .any(|(a, b)| a.1 != b.1);
    let verdict = if reals.certified && integers.certified && reals.compliant && integers.compliant
    {
        CompareVerdict::SameQualitativeBehavior
    } else if conditions_differ || reals.compliant != integers.compliant {
        CompareVerdict::DivergentAssumptions
    } else {
        CompareVerdict::UncertifiedOnBoth
    };
    Ok(CompareSummary {
        reals,
        integers,
        verdict,
    })
}

/// Result of the randomized sum/product closure diagnostic for almost
/// periodic coefficient functions.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureDiagnostic<T> {
    pub trials: usize,
    pub translations_found: usize,
    pub sum_closure_ok: usize,
    pub product_closure_ok: usize,
    pub eps: T,
}

/// For random quasi-periodic pairs `(f, g)`, searches a common
/// eps-translation number and verifies that it serves `f + g` within `2 eps`
/// and `f g` within `(sup|f| + sup|g|) eps + eps^2`.
pub fn ap_closure_diagnostic<T: Real>(seed: u64, eps: T, trials: usize) -> ClosureDiagnostic<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_coeff = |rng: &mut ChaCha8Rng| -> Coefficient<T> {
        let center = cst::<T>(rng.gen_range(0.5..1.5));
        let mut parts = vec![Coefficient::Const(center)];
        for _ in 0..2 {
            let amp = cst::<T>(rng.gen_range(0.05..0.3));
            let omega = cst::<T>(rng.gen_range(0.3..3.0));
            let phase = cst::<T>(rng.gen_range(0.0..std::f64::consts::TAU));
            parts.push(Coefficient::Scale {
                factor: amp,
                of: Box::new(Coefficient::Sin { omega, phase }),
            });
        }
        Coefficient::Sum(parts)
    };

    let samples = 1200usize;
    let span = cst::<T>(60.0);
    let dt = span / T::from_usize(samples).unwrap();
    let sup_dev = |f: &Coefficient<T>, tau: T| -> T {
        let mut sup = T::zero();
        for k in 0..samples {
            let t = dt * T::from_usize(k).unwrap();
            sup = sup.max((f.eval(t + tau) - f.eval(t)).abs());
        }
        sup
    };
    let sup_abs = |f: &Coefficient<T>| -> T {
        let mut sup = T::zero();
        for k in 0..samples {
            let t = dt * T::from_usize(k).unwrap();
            sup = sup.max(f.eval(t).abs());
        }
        sup
    };

    let mut found = 0usize;
    let mut sum_ok = 0usize;
    let mut prod_ok = 0usize;
    for _ in 0..trials {
        let f = random_coeff(&mut rng);
        let g = random_coeff(&mut rng);
        // scan for a common eps-translation number
        let mut tau_found: Option<T> = None;
        for k in 1..=3000usize {
            let tau = cst::<T>(0.1) * T::from_usize(k).unwrap();
            if sup_dev(&f, tau) < eps && sup_dev(&g, tau) < eps {
                tau_found = Some(tau);
                break;
            }
        }
        let Some(tau) = tau_found else { continue };
        found += 1;
        let sum = Coefficient::Sum(vec![f.clone(), g.clone()]);
        if sup_dev(&sum, tau) < eps * cst(2.0) {
            sum_ok += 1;
        }
        let bound = (sup_abs(&f) + sup_abs(&g)) * eps + eps * eps;
        let mut prod_dev = T::zero();
        for k in 0..samples {
            let t = dt * T::from_usize(k).unwrap();
            let d = (f.eval(t + tau) * g.eval(t + tau) - f.eval(t) * g.eval(t)).abs();
            prod_dev = prod_dev.max(d);
        }
        if prod_dev < bound {
            prod_ok += 1;
        }
    }
    ClosureDiagnostic {
        trials,
        translations_found: found,
        sum_closure_ok: sum_ok,
        product_closure_ok: prod_ok,
        eps,
    }
}
