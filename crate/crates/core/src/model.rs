//! The delayed Nicholson patch system: coefficient expression trees, sup/inf
//! extraction, delays, and right-hand-side evaluation with delayed lookups.

use crate::error::{Error, Result};
use crate::real::{cst, Real};
use serde::{Deserialize, Serialize};

/// Default sampling horizon for sup/inf extraction. The quasi-periodic
/// frequencies in typical models are incommensurate, so a long horizon is
/// needed to approach the true extrema.
pub const DEFAULT_BOUNDS_HORIZON: f64 = 500.0;
/// Default sample count over the horizon.
pub const DEFAULT_BOUNDS_SAMPLES: usize = 200_000;

/// Quasi-periodic scalar coefficient as an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient<T> {
    Const(T),
    Sin { omega: T, phase: T },
    Cos { omega: T, phase: T },
    Abs(Box<Coefficient<T>>),
    /// `exp(scale * child)`
    Exp { scale: T, of: Box<Coefficient<T>> },
    Sum(Vec<Coefficient<T>>),
    /// `factor * child`
    Scale { factor: T, of: Box<Coefficient<T>> },
}

impl<T: Real> Coefficient<T> {
    /// `center + amp * sin(omega t + phase)`
    pub fn sinusoid(center: T, amp: T, omega: T, phase: T) -> Self {
        Coefficient::Sum(vec![
            Coefficient::Const(center),
            Coefficient::Scale {
                factor: amp,
                of: Box::new(Coefficient::Sin { omega, phase }),
            },
        ])
    }

    /// `center + amp * cos(omega t + phase)`
    pub fn cosinusoid(center: T, amp: T, omega: T, phase: T) -> Self {
        Coefficient::Sum(vec![
            Coefficient::Const(center),
            Coefficient::Scale {
                factor: amp,
                of: Box::new(Coefficient::Cos { omega, phase }),
            },
        ])
    }

    /// `center + amp * |sin(omega t + phase)|`
    pub fn abs_sinusoid(center: T, amp: T, omega: T, phase: T) -> Self {
        Coefficient::Sum(vec![
            Coefficient::Const(center),
            Coefficient::Scale {
                factor: amp,
                of: Box::new(Coefficient::Abs(Box::new(Coefficient::Sin {
                    omega,
                    phase,
                }))),
            },
        ])
    }

    /// `center + amp * |cos(omega t + phase)|`
    pub fn abs_cosinusoid(center: T, amp: T, omega: T, phase: T) -> Self {
        Coefficient::Sum(vec![
            Coefficient::Const(center),
            Coefficient::Scale {
                factor: amp,
                of: Box::new(Coefficient::Abs(Box::new(Coefficient::Cos {
                    omega,
                    phase,
                }))),
            },
        ])
    }

    /// `exp(scale * |sin(omega t + phase)|)`
    pub fn exp_abs_sin(scale: T, omega: T, phase: T) -> Self {
        Coefficient::Exp {
            scale,
            of: Box::new(Coefficient::Abs(Box::new(Coefficient::Sin {
                omega,
                phase,
            }))),
        }
    }

    /// `exp(scale * |cos(omega t + phase)|)`
    pub fn exp_abs_cos(scale: T, omega: T, phase: T) -> Self {
        Coefficient::Exp {
            scale,
            of: Box::new(Coefficient::Abs(Box::new(Coefficient::Cos {
                omega,
                phase,
            }))),
        }
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            Coefficient::Const(v) => *v,
            Coefficient::Sin { omega, phase } => (*omega * t + *phase).sin(),
            Coefficient::Cos { omega, phase } => (*omega * t + *phase).cos(),
            Coefficient::Abs(c) => c.eval(t).abs(),
            Coefficient::Exp { scale, of } => (*scale * of.eval(t)).exp(),
            Coefficient::Sum(cs) => cs.iter().fold(T::zero(), |a, c| a + c.eval(t)),
            Coefficient::Scale { factor, of } => *factor * of.eval(t),
        }
    }

    /// Outer range bracket by interval arithmetic over the tree. Tight for
    /// trees with a single oscillator; conservative for sums of distinct
    /// oscillators.
    pub fn analytic_range(&self) -> (T, T) {
        match self {
            Coefficient::Const(v) => (*v, *v),
            Coefficient::Sin { omega, phase } | Coefficient::Cos { omega, phase } => {
                if *omega == T::zero() {
                    let v = match self {
                        Coefficient::Sin { .. } => phase.sin(),
                        _ => phase.cos(),
                    };
                    (v, v)
                } else {
                    (-T::one(), T::one())
                }
            }
            Coefficient::Abs(c) => {
                let (lo, hi) = c.analytic_range();
                if lo >= T::zero() {
                    (lo, hi)
                } else if hi <= T::zero() {
                    (-hi, -lo)
                } else {
                    (T::zero(), hi.max(-lo))
                }
            }
            Coefficient::Exp { scale, of } => {
                let (lo, hi) = of.analytic_range();
                if *scale >= T::zero() {
                    ((*scale * lo).exp(), (*scale * hi).exp())
                } else {
                    ((*scale * hi).exp(), (*scale * lo).exp())
                }
            }
            Coefficient::Sum(cs) => cs.iter().fold((T::zero(), T::zero()), |(alo, ahi), c| {
                let (lo, hi) = c.analytic_range();
                (alo + lo, ahi + hi)
            }),
            Coefficient::Scale { factor, of } => {
                let (lo, hi) = of.analytic_range();
                if *factor >= T::zero() {
                    (*factor * lo, *factor * hi)
                } else {
                    (*factor * hi, *factor * lo)
                }
            }
        }
    }
}

// Serialized form: tagged records, e.g.
//   {"sum":[{"const":0.21},{"scale":0.01,"of":{"sin":{"omega":0.333,"phase":0.0}}}]}
#[derive(Deserialize)]
struct OscBody<T> {
    omega: T,
    phase: T,
}

#[derive(Deserialize)]
struct ExpBody<T> {
    scale: T,
    of: Box<Coefficient<T>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr<T> {
    Const {
        #[serde(rename = "const")]
        value: T,
    },
    Sin {
        sin: OscBody<T>,
    },
    Cos {
        cos: OscBody<T>,
    },
    Abs {
        abs: Box<Coefficient<T>>,
    },
    Exp {
        exp: ExpBody<T>,
    },
    Sum {
        sum: Vec<Coefficient<T>>,
    },
    Scale {
        scale: T,
        of: Box<Coefficient<T>>,
    },
}

#[derive(Serialize)]
struct OscBodyRef<'a, T> {
    omega: &'a T,
    phase: &'a T,
}

#[derive(Serialize)]
struct ExpBodyRef<'a, T> {
    scale: &'a T,
    of: &'a Coefficient<T>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum CoeffReprRef<'a, T> {
    Const {
        #[serde(rename = "const")]
        value: &'a T,
    },
    Sin {
        sin: OscBodyRef<'a, T>,
    },
    Cos {
        cos: OscBodyRef<'a, T>,
    },
    Abs {
        abs: &'a Coefficient<T>,
    },
    Exp {
        exp: ExpBodyRef<'a, T>,
    },
    Sum {
        sum: &'a [Coefficient<T>],
    },
    Scale {
        scale: &'a T,
        of: &'a Coefficient<T>,
    },
}

impl<T: Serialize> Serialize for Coefficient<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Coefficient::Const(value) => CoeffReprRef::Const { value },
            Coefficient::Sin { omega, phase } => CoeffReprRef::Sin {
                sin: OscBodyRef { omega, phase },
            },
            Coefficient::Cos { omega, phase } => CoeffReprRef::Cos {
                cos: OscBodyRef { omega, phase },
            },
            Coefficient::Abs(c) => CoeffReprRef::Abs { abs: c },
            Coefficient::Exp { scale, of } => CoeffReprRef::Exp {
                exp: ExpBodyRef { scale, of },
            },
            Coefficient::Sum(cs) => CoeffReprRef::Sum { sum: cs },
            Coefficient::Scale { factor, of } => CoeffReprRef::Scale { scale: factor, of },
        };
        repr.serialize(serializer)
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Coefficient<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match CoeffRepr::deserialize(deserializer)? {
            CoeffRepr::Const { value } => Coefficient::Const(value),
            CoeffRepr::Sin { sin } => Coefficient::Sin {
                omega: sin.omega,
                phase: sin.phase,
            },
            CoeffRepr::Cos { cos } => Coefficient::Cos {
                omega: cos.omega,
                phase: cos.phase,
            },
            CoeffRepr::Abs { abs } => Coefficient::Abs(abs),
            CoeffRepr::Exp { exp } => Coefficient::Exp {
                scale: exp.scale,
                of: exp.of,
            },
            CoeffRepr::Sum { sum } => Coefficient::Sum(sum),
            CoeffRepr::Scale { scale, of } => Coefficient::Scale { factor: scale, of },
        })
    }
}

/// Sup/inf estimate for a coefficient: dense sampling cross-checked against
/// the analytic amplitude bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffBounds<T> {
    /// Reported infimum.
    pub lo: T,
    /// Reported supremum.
    pub hi: T,
    pub sampled: (T, T),
    pub analytic: (T, T),
}

/// Samples `coef` on `[0, horizon]` and reconciles with the analytic range.
/// When sampling confirms an analytic endpoint within 1e-3, the analytic
/// value (exact for single-oscillator trees) is reported; otherwise the
/// sampled value stands.
pub fn coeff_bounds<T: Real>(
    coef: &Coefficient<T>,
    horizon: T,
    samples: usize,
) -> Result<CoeffBounds<T>> {
    let samples = samples.max(2);
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    let step = horizon / T::from_usize(samples - 1).unwrap();
    for k in 0..samples {
        let v = coef.eval(step * T::from_usize(k).unwrap());
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let (alo, ahi) = coef.analytic_range();
    let slack = cst::<T>(1e-6);
    if hi > ahi + slack || lo < alo - slack {
        return Err(Error::InconsistentBounds {
            name: String::new(),
            sampled: if hi > ahi + slack { hi.as_f64() } else { lo.as_f64() },
            analytic: if hi > ahi + slack { ahi.as_f64() } else { alo.as_f64() },
        });
    }
    let confirm = cst::<T>(1e-3);
    let rep_hi = if ahi - hi <= confirm { ahi } else { hi };
    let rep_lo = if lo - alo <= confirm { alo } else { lo };
    Ok(CoeffBounds {
        lo: rep_lo,
        hi: rep_hi,
        sampled: (lo, hi),
        analytic: (alo, ahi),
    })
}

/// Sup/inf extraction with the default horizon and sample count.
pub fn coeff_bounds_default<T: Real>(coef: &Coefficient<T>) -> Result<CoeffBounds<T>> {
    coeff_bounds(coef, cst(DEFAULT_BOUNDS_HORIZON), DEFAULT_BOUNDS_SAMPLES)
}

/// The n-patch blowfly system: per-patch mortality `c`, migration `b`,
/// reproduction gains `beta`, reproduction shape `alpha`, delays `tau`.
///
/// Dynamics of component i:
/// `x_i^Δ = -c_i x_i + Σ_{k≠i} b_ik x_k + Σ_j β_ij d_ij exp(-α_ij d_ij)`
/// with `d_ij` the own-patch state at the delayed time `t - τ_ij(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NicholsonModel<T> {
    n: usize,
    c: Vec<Coefficient<T>>,
    b: Vec<Vec<Option<Coefficient<T>>>>,
    beta: Vec<Vec<Coefficient<T>>>,
    alpha: Vec<Vec<Coefficient<T>>>,
    tau: Vec<Vec<Coefficient<T>>>,
}

impl<T: Real> NicholsonModel<T> {
    pub fn new(
        c: Vec<Coefficient<T>>,
        b: Vec<Vec<Option<Coefficient<T>>>>,
        beta: Vec<Vec<Coefficient<T>>>,
        alpha: Vec<Vec<Coefficient<T>>>,
        tau: Vec<Vec<Coefficient<T>>>,
    ) -> Result<Self> {
        let n = c.len();
        if n == 0 {
            return Err(Error::InvalidModel {
                reason: "at least one patch is required".into(),
            });
        }
        let square = |name: &str, m: usize| -> Result<()> {
            if m != n {
                Err(Error::InvalidModel {
                    reason: format!("{} must be {}x{}", name, n, n),
                })
            } else {
                Ok(())
            }
        };
        square("b", b.len())?;
        square("beta", beta.len())?;
        square("alpha", alpha.len())?;
        square("tau", tau.len())?;
        for i in 0..n {
            square("b rows", b[i].len())?;
            square("beta rows", beta[i].len())?;
            square("alpha rows", alpha[i].len())?;
            square("tau rows", tau[i].len())?;
            if b[i][i].is_some() {
                return Err(Error::InvalidModel {
                    reason: format!("b[{i}][{i}] must be absent (no self-migration)"),
                });
            }
        }
        Ok(NicholsonModel {
            n,
            c,
            b,
            beta,
            alpha,
            tau,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self, i: usize) -> &Coefficient<T> {
        &self.c[i]
    }

    pub fn b(&self, i: usize, k: usize) -> Option<&Coefficient<T>> {
        self.b[i][k].as_ref()
    }

    pub fn beta(&self, i: usize, j: usize) -> &Coefficient<T> {
        &self.beta[i][j]
    }

    pub fn alpha(&self, i: usize, j: usize) -> &Coefficient<T> {
        &self.alpha[i][j]
    }

    pub fn tau(&self, i: usize, j: usize) -> &Coefficient<T> {
        &self.tau[i][j]
    }

    /// Maximal delay bound: `max_{i,j} sup tau_ij`. Fixes the history window
    /// length `[t0 - theta, t0]`.
    pub fn theta(&self) -> Result<T> {
        let mut m = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let b = coeff_bounds_default(&self.tau[i][j])?;
                m = m.max(b.hi);
            }
        }
        Ok(m)
    }
}

/// Source of delayed state values for the right-hand side.
pub trait History<T> {
    fn delayed(&self, component: usize, t: T) -> Result<T>;
}

/// Evaluates the system right-hand side at `(t, x)` with delayed values from
/// `hist`.
pub fn rhs<T: Real>(
    model: &NicholsonModel<T>,
    t: T,
    x: &[T],
    hist: &dyn History<T>,
) -> Result<Vec<T>> {
    let n = model.n();
    debug_assert_eq!(x.len(), n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = -model.c(i).eval(t) * x[i];
        for (k, xk) in x.iter().enumerate() {
            if k != i {
                if let Some(bik) = model.b(i, k) {
                    v = v + bik.eval(t) * *xk;
                }
            }
        }
        for j in 0..n {
            let delay = model.tau(i, j).eval(t);
            let d = hist.delayed(i, t - delay)?;
            v = v + model.beta(i, j).eval(t) * d * (-model.alpha(i, j).eval(t) * d).exp();
        }
        out.push(v);
    }
    Ok(out)
}

/// Initial data on the history window `[t0 - theta, t0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialFunction<T> {
    Constant(T),
    Expr(Coefficient<T>),
}

impl<T: Real> InitialFunction<T> {
    pub fn eval(&self, t: T) -> T {
        match self {
            InitialFunction::Constant(v) => *v,
            InitialFunction::Expr(c) => c.eval(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition<T> {
    pub t0: T,
    pub phi: Vec<InitialFunction<T>>,
}

impl<T: Real> InitialCondition<T> {
    pub fn constant(t0: T, values: Vec<T>) -> Self {
        InitialCondition {
            t0,
            phi: values.into_iter().map(InitialFunction::Constant).collect(),
        }
    }

    pub fn eval(&self, component: usize, t: T) -> T {
        self.phi[component].eval(t)
    }
}
