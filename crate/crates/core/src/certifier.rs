//! Mechanical evaluation of the sufficient conditions for existence,
//! positivity, boundedness and exponential stability: the H-conditions, the
//! invariant-region parameters `(A1, A2)`, the constants `varsigma` and `M`,
//! the contraction ratio, and the decay rate `alpha` obtained by root-finding
//! on the per-patch margin functions `Gamma_i`.

use crate::error::{Error, Result};
use crate::model::{coeff_bounds, Coefficient, NicholsonModel};
use crate::real::{cst, Real};
use crate::timescale::{Grid, ScaleFamily};
use serde::{Deserialize, Serialize};

/// Sup/inf table for every model coefficient. Either recomputed from the
/// coefficient formulas by sampling, or supplied directly (e.g. a literature
/// table used as a fixture).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable<T> {
    /// `(inf, sup)` per patch.
    pub c: Vec<(T, T)>,
    /// `(inf, sup)` per ordered patch pair; `None` on the diagonal.
    pub b: Vec<Vec<Option<(T, T)>>>,
    pub beta: Vec<Vec<(T, T)>>,
    pub alpha: Vec<Vec<(T, T)>>,
    pub tau: Vec<Vec<(T, T)>>,
}

impl<T: Real> BoundsTable<T> {
    /// Recomputes every entry from the model formulas by dense sampling.
    pub fn from_model(
        model: &NicholsonModel<T>,
        horizon: T,
        samples: usize,
    ) -> Result<Self> {
        let n = model.n();
        let named = |coef: &Coefficient<T>, name: String| -> Result<(T, T)> {
            let b = coeff_bounds(coef, horizon, samples).map_err(|e| match e {
                Error::InconsistentBounds {
                    sampled, analytic, ..
                } => Error::InconsistentBounds {
                    name,
                    sampled,
                    analytic,
                },
                other => other,
            })?;
            Ok((b.lo, b.hi))
        };
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(named(model.c(i), format!("c[{}]", i + 1))?);
        }
        let mut b = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        let mut alpha = Vec::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        for i in 0..n {
            let mut brow = Vec::with_capacity(n);
            let mut berow = Vec::with_capacity(n);
            let mut arow = Vec::with_capacity(n);
            let mut trow = Vec::with_capacity(n);
            for j in 0..n {
                brow.push(match model.b(i, j) {
                    Some(coef) => Some(named(coef, format!("b[{}][{}]", i + 1, j + 1))?),
                    None => None,
                });
                berow.push(named(model.beta(i, j), format!("beta[{}][{}]", i + 1, j + 1))?);
                arow.push(named(model.alpha(i, j), format!("alpha[{}][{}]", i + 1, j + 1))?);
                trow.push(named(model.tau(i, j), format!("tau[{}][{}]", i + 1, j + 1))?);
            }
            b.push(brow);
            beta.push(berow);
            alpha.push(arow);
            tau.push(trow);
        }
        Ok(BoundsTable {
            c,
            b,
            beta,
            alpha,
            tau,
        })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `sum_{k != i} b_ik^+`.
    pub fn b_sup_sum(&self, i: usize) -> T {
        self.b[i]
            .iter()
            .flatten()
            .fold(T::zero(), |acc, (_, hi)| acc + *hi)
    }

    /// `sum_{k != i} b_ik^-`.
    pub fn b_inf_sum(&self, i: usize) -> T {
        self.b[i]
            .iter()
            .flatten()
            .fold(T::zero(), |acc, (lo, _)| acc + *lo)
    }

    /// `sum_{k != i} b_ik^+ + (1/e^2) sum_j beta_ij^+`, the smallness sum of
    /// the stability condition.
    pub fn smallness_sum(&self, i: usize) -> T {
        let e2 = cst::<T>(std::f64::consts::E * std::f64::consts::E);
        self.b_sup_sum(i)
            + self.beta[i]
                .iter()
                .fold(T::zero(), |acc, (_, hi)| acc + *hi)
                / e2
    }
}

/// Per-patch coupling ratio for the weak-coupling condition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct H2Entry<T> {
    pub ratio: T,
    pub margin: T,
}

/// `sum_{k != i} b_ik^+ / c_i^- < 1` per patch.
pub fn check_h2<T: Real>(table: &BoundsTable<T>) -> Vec<H2Entry<T>> {
    (0..table.n())
        .map(|i| {
            let ratio = table.b_sup_sum(i) / table.c[i].0;
            H2Entry {
                ratio,
                margin: T::one() - ratio,
            }
        })
        .collect()
}

/// Per-patch smallness sum for the stability condition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct H5Entry<T> {
    pub sum: T,
    pub margin: T,
    /// The smallness condition subsumes the coupling condition whenever it
    /// holds; recorded for the certificate.
    pub implies_h2: bool,
}

/// `sum b_ik^+ + (1/e^2) sum beta_ij^+ < c_i^-` per patch.
pub fn check_h5<T: Real>(table: &BoundsTable<T>) -> Vec<H5Entry<T>> {
    (0..table.n())
        .map(|i| {
            let sum = table.smallness_sum(i);
            let margin = table.c[i].0 - sum;
            H5Entry {
                sum,
                margin,
                implies_h2: margin > T::zero(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct A2Threshold<T> {
    pub per_patch: Vec<T>,
    pub threshold: T,
}

/// Lower threshold for the box ceiling `A2`:
/// `max_i [1 - sum b_ik^+/c_i^-]^{-1} sum_j beta_ij^+ / (c_i^- alpha_ij^- e)`.
pub fn a2_threshold<T: Real>(table: &BoundsTable<T>) -> Result<A2Threshold<T>> {
    let e = cst::<T>(std::f64::consts::E);
    let mut per_patch = Vec::with_capacity(table.n());
    for i in 0..table.n() {
        let ratio = table.b_sup_sum(i) / table.c[i].0;
        let bracket = T::one() - ratio;
        if bracket <= T::zero() {
            return Err(Error::H2Violated {
                patch: i + 1,
                ratio: ratio.as_f64(),
            });
        }
        let mut sum = T::zero();
        for j in 0..table.n() {
            sum = sum + table.beta[i][j].1 / (table.c[i].0 * table.alpha[i][j].0 * e);
        }
        per_patch.push(sum / bracket);
    }
    let threshold = per_patch
        .iter()
        .fold(T::neg_infinity(), |m, v| m.max(*v));
    Ok(A2Threshold {
        per_patch,
        threshold,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct A1Interval<T> {
    pub lo: T,
    pub hi: T,
    /// Per-patch ceilings from the condition as stated
    /// (`beta_ij^- / c_i^+` inside the sum).
    pub per_patch_hi_stated: Vec<T>,
    /// Per-patch ceilings from the worked-example variant with the extra
    /// `alpha_ij^+` in the denominator.
    pub per_patch_hi_variant: Vec<T>,
}

/// Admissible interval for the box floor `A1`, given `A2`. Both reported
/// forms of the ceiling are computed and the smaller (more conservative) one
/// is used. Returns the infeasibility error when the interval is empty.
pub fn a1_interval<T: Real>(table: &BoundsTable<T>, a2: T) -> Result<A1Interval<T>> {
    let interval = a1_interval_unchecked(table, a2);
    if interval.lo < interval.hi {
        Ok(interval)
    } else {
        Err(Error::InfeasibleA1Interval {
            lo: interval.lo.as_f64(),
            hi: interval.hi.as_f64(),
        })
    }
}

/// Endpoints of the `A1` interval without the feasibility gate.
pub fn a1_interval_unchecked<T: Real>(table: &BoundsTable<T>, a2: T) -> A1Interval<T> {
    let lo = a1_lower_bound(table);
    let mut stated = Vec::with_capacity(table.n());
    let mut variant = Vec::with_capacity(table.n());
    for i in 0..table.n() {
        let bracket = T::one() - table.b_inf_sum(i) / table.c[i].1;
        let mut s_stated = T::zero();
        let mut s_variant = T::zero();
        for j in 0..table.n() {
            let alpha_hi = table.alpha[i][j].1;
            let decay = (-alpha_hi * a2).exp();
            let base = a2 * table.beta[i][j].0 / table.c[i].1 * decay;
            s_stated = s_stated + base;
            s_variant = s_variant + base / alpha_hi;
        }
        stated.push(s_stated / bracket);
        variant.push(s_variant / bracket);
    }
    let min_of = |v: &[T]| v.iter().fold(T::infinity(), |m, x| m.min(*x));
    let hi = min_of(&stated).min(min_of(&variant));
    A1Interval {
        lo,
        hi,
        per_patch_hi_stated: stated,
        per_patch_hi_variant: variant,
    }
}

/// `varsigma / min alpha_ij^-`, the floor required for the mean-value bound
/// on the reproduction nonlinearity.
pub fn a1_lower_bound<T: Real>(table: &BoundsTable<T>) -> T {
    let min_alpha = table
        .alpha
        .iter()
        .flatten()
        .fold(T::infinity(), |m, (lo, _)| m.min(*lo));
    varsigma::<T>() / min_alpha
}

/// Unique root in (0, 1) of `(1 - x) e^{-x} = e^{-2}`, bisected to 1e-12.
pub fn varsigma<T: Real>() -> T {
    let target = cst::<T>((-2.0f64).exp());
    let g = |x: T| (T::one() - x) * (-x).exp() - target;
    let mut lo = T::zero();
    let mut hi = T::one();
    let tol = cst::<T>(1e-12).max(T::epsilon() * cst(4.0));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / cst(2.0);
        if g(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / cst(2.0)
}

/// Decay certificate: per-patch roots of `Gamma_i`, the admissible rate
/// bound `a`, the comparison constant `M`, and the working rate
/// `alpha = 0.9 min(a, min c_i^-)` (a deterministic choice strictly inside
/// the admissible interval).
#[derive(Debug, Clone, Serialize)]
pub struct DecayRate<T> {
    pub omegas: Vec<T>,
    pub a: T,
    pub alpha: T,
    pub m: T,
}

/// `Gamma_i(w) = c_i^- - w - e^{w sup_mu} (sum b_ik^+ + (1/e^2) sum_j
/// beta_ij^+ e^{w tau_ij^+})`.
pub fn gamma_margin<T: Real>(table: &BoundsTable<T>, i: usize, w: T, sup_mu: T) -> T {
    let e2 = cst::<T>(std::f64::consts::E * std::f64::consts::E);
    let mut inner = table.b_sup_sum(i);
    for j in 0..table.n() {
        inner = inner + table.beta[i][j].1 * (w * table.tau[i][j].1).exp() / e2;
    }
    table.c[i].0 - w - (w * sup_mu).exp() * inner
}

/// Finds the decay rate from a bounds table and the largest graininess on
/// the working grid.
pub fn decay_rate_from_bounds<T: Real>(
    table: &BoundsTable<T>,
    sup_mu: T,
) -> Result<DecayRate<T>> {
    let n = table.n();
    let mut omegas = Vec::with_capacity(n);
    for i in 0..n {
        let c_lo = table.c[i].0;
        let sum0 = table.smallness_sum(i);
        if gamma_margin(table, i, T::zero(), sup_mu) <= T::zero() {
            return Err(Error::H5Violated {
                patch: i + 1,
                sum: sum0.as_f64(),
                c_lo: c_lo.as_f64(),
            });
        }
        if sum0 == T::zero() {
            // Gamma_i(w) = c_i^- - w: the root is exactly c_i^-
            omegas.push(c_lo);
            continue;
        }
        if gamma_margin(table, i, c_lo, sup_mu) >= T::zero() {
            return Err(Error::RootBracketFailure {
                patch: i + 1,
                reason: "Gamma does not change sign on (0, c_lo)".into(),
            });
        }
        let mut lo = T::zero();
        let mut hi = c_lo;
        let tol = cst::<T>(1e-12).max(T::epsilon() * cst(4.0));
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = (lo + hi) / cst(2.0);
            if gamma_margin(table, i, mid, sup_mu) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        omegas.push((lo + hi) / cst(2.0));
    }
    let a = omegas.iter().fold(T::infinity(), |m, w| m.min(*w));
    let min_c = table.c.iter().fold(T::infinity(), |m, (lo, _)| m.min(*lo));
    let alpha = cst::<T>(0.9) * a.min(min_c);
    let mut m = T::zero();
    let mut any = false;
    for i in 0..n {
        let s = table.smallness_sum(i);
        if s > T::zero() {
            m = m.max(table.c[i].0 / s);
            any = true;
        }
    }
    let m = if any { m } else { T::infinity() };
    Ok(DecayRate { omegas, a, alpha, m })
}

/// Decay rate for a model on a concrete grid.
pub fn decay_rate<T: Real>(
    model: &NicholsonModel<T>,
    grid: &Grid<T>,
    horizon: T,
    samples: usize,
) -> Result<DecayRate<T>> {
    let table = BoundsTable::from_model(model, horizon, samples)?;
    decay_rate_from_bounds(&table, grid.sup_mu())
}

/// Positive regressivity of `-c_i` on the grid: `1 - mu(t) c_i(t) > 0`
/// everywhere.
#[derive(Debug, Clone, Serialize)]
pub struct RegressivityReport<T> {
    pub holds: bool,
    /// Smallest value of `1 - mu(t) c_i(t)` over the grid and patches.
    pub worst_margin: T,
}

pub fn check_regressivity<T: Real>(
    model: &NicholsonModel<T>,
    grid: &Grid<T>,
) -> RegressivityReport<T> {
    let mut worst = T::infinity();
    for (&t, &mu) in grid.points().iter().zip(grid.graininess()) {
        for i in 0..model.n() {
            worst = worst.min(T::one() - mu * model.c(i).eval(t));
        }
    }
    RegressivityReport {
        holds: worst > T::zero(),
        worst_margin: worst,
    }
}

/// A divergence between a supplied reference bound and the value
/// recomputed from the coefficient formula.
#[derive(Debug, Clone, Serialize)]
pub struct Divergence<T> {
    pub name: String,
    pub listed: T,
    pub recomputed: T,
}

/// One certified condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport<T> {
    pub name: String,
    pub holds: bool,
    pub margin: T,
    pub details: String,
}

/// Aggregated certificate. Derived constants appear only when their
/// prerequisites hold.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate<T> {
    pub conditions: Vec<ConditionReport<T>>,
    pub varsigma: T,
    pub a2_threshold: Option<T>,
    pub a1_lo: Option<T>,
    pub a1_hi: Option<T>,
    pub contraction_ratio: Option<T>,
    pub alpha: Option<T>,
    pub m: Option<T>,
    pub sup_mu: T,
    /// Largest distance from a delayed argument `t - tau_ij(t)` to the
    /// nearest scale point: 0 means the membership assumption holds exactly,
    /// positive values quantify the interpolation the simulator performs.
    pub worst_delay_snap: T,
    pub divergences: Vec<Divergence<T>>,
    pub overall: bool,
}

fn delay_snap_distance<T: Real>(
    model: &NicholsonModel<T>,
    fam: &ScaleFamily<T>,
    grid: &Grid<T>,
) -> T {
    let mut worst = T::zero();
    for &t in grid.points() {
        for i in 0..model.n() {
            for j in 0..model.n() {
                let q = t - model.tau(i, j).eval(t);
                let lo = fam.floor(q);
                let dist = if (q - lo).abs() <= crate::real::time_tol::<T>() {
                    T::zero()
                } else {
                    match fam.sigma(lo) {
                        Ok(next) => (q - lo).min(next - q).max(T::zero()),
                        Err(_) => q - lo,
                    }
                };
                worst = worst.max(dist);
            }
        }
    }
    worst
}

fn compare_tables<T: Real>(listed: &BoundsTable<T>, recomputed: &BoundsTable<T>) -> Vec<Divergence<T>> {
    let tol = cst::<T>(1e-3);
    let mut out = Vec::new();
    let mut push = |name: String, l: T, r: T| {
        if (l - r).abs() > tol {
            out.push(Divergence {
                name,
                listed: l,
                recomputed: r,
            });
        }
    };
    let n = listed.n().min(recomputed.n());
    for i in 0..n {
        push(format!("c[{}].inf", i + 1), listed.c[i].0, recomputed.c[i].0);
        push(format!("c[{}].sup", i + 1), listed.c[i].1, recomputed.c[i].1);
        for j in 0..n {
            if let (Some(l), Some(r)) = (listed.b[i][j], recomputed.b[i][j]) {
                push(format!("b[{}][{}].inf", i + 1, j + 1), l.0, r.0);
                push(format!("b[{}][{}].sup", i + 1, j + 1), l.1, r.1);
            }
            push(
                format!("beta[{}][{}].inf", i + 1, j + 1),
                listed.beta[i][j].0,
                recomputed.beta[i][j].0,
            );
            push(
                format!("beta[{}][{}].sup", i + 1, j + 1),
                listed.beta[i][j].1,
                recomputed.beta[i][j].1,
            );
            push(
                format!("alpha[{}][{}].inf", i + 1, j + 1),
                listed.alpha[i][j].0,
                recomputed.alpha[i][j].0,
            );
            push(
                format!("alpha[{}][{}].sup", i + 1, j + 1),
                listed.alpha[i][j].1,
                recomputed.alpha[i][j].1,
            );
            push(
                format!("tau[{}][{}].inf", i + 1, j + 1),
                listed.tau[i][j].0,
                recomputed.tau[i][j].0,
            );
            push(
                format!("tau[{}][{}].sup", i + 1, j + 1),
                listed.tau[i][j].1,
                recomputed.tau[i][j].1,
            );
        }
    }
    out
}

/// Full certification of a model on a scale with box parameters `(a1, a2)`.
///
/// Failures are recorded in the certificate, never thrown. When `listed` is
/// supplied (a reference bounds table), entries diverging from the
/// recomputed bounds by more than 1e-3 are flagged. The positive mortality
/// infima demanded by H1 are also the precondition under which the diagonal
/// comparison system admits an exponential dichotomy, so no separate record
/// is emitted for it.
#[allow(clippy::too_many_arguments)]
pub fn certify<T: Real>(
    model: &NicholsonModel<T>,
    fam: &ScaleFamily<T>,
    grid: &Grid<T>,
    a1: T,
    a2: T,
    listed: Option<&BoundsTable<T>>,
    horizon: T,
    samples: usize,
) -> Result<Certificate<T>> {
    let table = BoundsTable::from_model(model, horizon, samples)?;
    let n = table.n();
    let mut conditions = Vec::new();

    // H1: strict positivity of the coefficient infima, nonnegative delays
    let mut pos_min = T::infinity();
    for i in 0..n {
        pos_min = pos_min.min(table.c[i].0);
        for j in 0..n {
            if let Some((lo, _)) = table.b[i][j] {
                pos_min = pos_min.min(lo);
            }
            pos_min = pos_min.min(table.beta[i][j].0);
            pos_min = pos_min.min(table.alpha[i][j].0);
        }
    }
    let tau_min = table
        .tau
        .iter()
        .flatten()
        .fold(T::infinity(), |m, (lo, _)| m.min(*lo));
    let snap = delay_snap_distance(model, fam, grid);
    let h1_margin = if tau_min < T::zero() { tau_min } else { pos_min };
    conditions.push(ConditionReport {
        name: "H1".into(),
        holds: h1_margin > T::zero(),
        margin: h1_margin,
        details: format!(
            "min coefficient inf = {}, min delay = {}, worst delay snap distance = {}",
            pos_min, tau_min, snap
        ),
    });

    // H2: weak coupling
    let h2 = check_h2(&table);
    let h2_margin = h2
        .iter()
        .fold(T::infinity(), |m, e| m.min(e.margin));
    conditions.push(ConditionReport {
        name: "H2".into(),
        holds: h2_margin > T::zero(),
        margin: h2_margin,
        details: format!(
            "ratios = {:?}",
            h2.iter().map(|e| e.ratio.as_f64()).collect::<Vec<_>>()
        ),
    });

    // H3: box feasibility for the supplied (a1, a2)
    let a2th = a2_threshold(&table).ok();
    let interval = match a2th {
        Some(_) => match a1_interval(&table, a2) {
            Ok(iv) => Some((iv.lo, iv.hi)),
            Err(Error::InfeasibleA1Interval { lo, hi }) => Some((cst(lo), cst(hi))),
            Err(_) => None,
        },
        None => None,
    };
    let (h3_holds, h3_margin, h3_details) = match (&a2th, interval) {
        (Some(th), Some((lo, hi))) => {
            let m = (a2 - th.threshold).min(a1 - lo).min(hi - a1);
            (
                m > T::zero(),
                m,
                format!(
                    "A2 threshold = {}, A1 interval = [{}, {}), A1 = {}, A2 = {}",
                    th.threshold, lo, hi, a1, a2
                ),
            )
        }
        _ => (
            false,
            -T::infinity(),
            "prerequisite H2 violated: thresholds undefined".into(),
        ),
    };
    conditions.push(ConditionReport {
        name: "H3".into(),
        holds: h3_holds,
        margin: h3_margin,
        details: h3_details,
    });

    // H4: positive regressivity of -c_i on the working grid
    let reg = check_regressivity(model, grid);
    conditions.push(ConditionReport {
        name: "H4".into(),
        holds: reg.holds,
        margin: reg.worst_margin,
        details: "RegressivityOnScale: min over grid of 1 - mu(t) c_i(t)".into(),
    });

    // H5: smallness
    let h5 = check_h5(&table);
    let h5_margin = h5
        .iter()
        .fold(T::infinity(), |m, e| m.min(e.margin));
    conditions.push(ConditionReport {
        name: "H5".into(),
        holds: h5_margin > T::zero(),
        margin: h5_margin,
        details: format!(
            "sums = {:?}",
            h5.iter().map(|e| e.sum.as_f64()).collect::<Vec<_>>()
        ),
    });

    let h5_holds = h5_margin > T::zero();
    let decay = if h5_holds {
        decay_rate_from_bounds(&table, grid.sup_mu()).ok()
    } else {
        None
    };
    let contraction = if h5_holds {
        Some((0..n).fold(T::zero(), |m, i| {
            m.max(table.smallness_sum(i) / table.c[i].0)
        }))
    } else {
        None
    };

    let divergences = listed
        .map(|l| compare_tables(l, &table))
        .unwrap_or_default();

    let overall = conditions.iter().all(|c| c.holds);
    Ok(Certificate {
        conditions,
        varsigma: varsigma::<T>(),
        a2_threshold: a2th.map(|t| t.threshold),
        a1_lo: interval.map(|(lo, _)| lo),
        a1_hi: interval.map(|(_, hi)| hi),
        contraction_ratio: contraction,
        alpha: decay.as_ref().map(|d| d.alpha),
        m: decay.as_ref().map(|d| d.m),
        sup_mu: grid.sup_mu(),
        worst_delay_snap: snap,
        divergences,
        overall,
    })
}
