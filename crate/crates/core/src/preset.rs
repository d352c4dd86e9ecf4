//! Bundled three-patch blowfly benchmark.
//!
//! The coefficient formulas, the reference sup/inf table, and the values
//! the original condition displays were computed with are all kept here.
//! The reference table is internally inconsistent with the formulas in a few
//! entries (see [`listed_bounds`]); the certifier recomputes everything from
//! the formulas and flags divergences rather than silently adopting either
//! side.

use crate::certifier::BoundsTable;
use crate::model::{Coefficient, InitialCondition, NicholsonModel};
use crate::real::{cst, Real};

/// Box parameters used with the benchmark: `(A1, A2)`.
pub fn box_bounds<T: Real>() -> (T, T) {
    (cst(1.21), cst(2.72))
}

/// Initial condition used for continuous-scale runs.
pub fn ic_reals<T: Real>() -> InitialCondition<T> {
    InitialCondition::constant(T::zero(), vec![cst(1.3), cst(1.3), cst(1.5)])
}

/// Initial condition used for integer-scale runs.
pub fn ic_integers<T: Real>() -> InitialCondition<T> {
    InitialCondition::constant(T::zero(), vec![cst(1.2), cst(1.2), cst(2.3)])
}

/// The three-patch model with quasi-periodic coefficients.
pub fn blowfly3<T: Real>() -> NicholsonModel<T> {
    let pi = cst::<T>(std::f64::consts::PI);
    let s2 = cst::<T>(std::f64::consts::SQRT_2);
    let s3 = cst::<T>(3.0f64.sqrt());
    let half_pi = pi / cst(2.0);
    let three_half_pi = pi * cst(1.5);
    let third = T::one() / cst(3.0);

    let c = vec![
        Coefficient::sinusoid(cst(0.21), cst(0.01), third, T::zero()),
        Coefficient::sinusoid(cst(0.3), cst(0.02), cst::<T>(4.0) * third, T::zero()),
        Coefficient::sinusoid(cst(0.41), cst(0.01), third, T::zero()),
    ];

    let b = vec![
        vec![
            None,
            Some(Coefficient::cosinusoid(cst(0.03), cst(0.01), pi, T::zero())),
            Some(Coefficient::cosinusoid(cst(0.06), cst(0.01), s3, T::zero())),
        ],
        vec![
            Some(Coefficient::cosinusoid(cst(0.05), cst(0.01), s3, T::zero())),
            None,
            Some(Coefficient::sinusoid(cst(0.05), cst(0.01), s2, T::zero())),
        ],
        vec![
            Some(Coefficient::sinusoid(cst(0.16), cst(0.01), s3, T::zero())),
            Some(Coefficient::cosinusoid(cst(0.13), cst(0.01), s2, T::zero())),
            None,
        ],
    ];

    let beta = vec![
        vec![
            Coefficient::sinusoid(cst(0.07), cst(0.02), pi, T::zero()),
            Coefficient::cosinusoid(cst(0.15), cst(0.01), s3, T::zero()),
            Coefficient::sinusoid(cst(0.15), cst(0.01), cst::<T>(5.0) / cst(6.0), T::zero()),
        ],
        vec![
            Coefficient::cosinusoid(cst(0.06), cst(0.01), pi, T::zero()),
            Coefficient::cosinusoid(cst(0.04), cst(0.01), s3, T::zero()),
            Coefficient::cosinusoid(cst(0.09), cst(0.01), third, T::zero()),
        ],
        vec![
            Coefficient::cosinusoid(cst(0.02), cst(0.01), T::one() / cst(6.0), T::zero()),
            Coefficient::cosinusoid(cst(0.032), cst(0.01), s2, T::zero()),
            Coefficient::sinusoid(cst(0.022), cst(0.001), third, T::zero()),
        ],
    ];

    let alpha_row1 = Coefficient::abs_sinusoid(cst(0.91), cst(0.09), s3, T::zero());
    let alpha = vec![
        vec![alpha_row1.clone(), alpha_row1.clone(), alpha_row1],
        vec![
            Coefficient::sinusoid(cst(0.8), cst(0.2), s2, T::zero()),
            Coefficient::cosinusoid(cst(0.8), cst(0.2), s2, T::zero()),
            Coefficient::sinusoid(cst(0.8), cst(0.2), pi, T::zero()),
        ],
        vec![
            Coefficient::abs_sinusoid(cst(0.8), cst(0.2), s3, T::zero()),
            Coefficient::sinusoid(cst(0.8), cst(0.2), s3, T::zero()),
            Coefficient::sinusoid(cst(0.8), cst(0.2), cst::<T>(4.0) * third, T::zero()),
        ],
    ];

    let tau = vec![
        vec![
            Coefficient::exp_abs_sin(cst(0.2), pi, T::zero()),
            Coefficient::exp_abs_cos(cst(0.4), pi, half_pi),
            Coefficient::exp_abs_sin(cst(0.5), pi, T::zero()),
        ],
        vec![
            Coefficient::exp_abs_cos(cst(0.2), pi, half_pi),
            Coefficient::exp_abs_sin(cst(0.3), cst::<T>(3.0) * pi, T::zero()),
            Coefficient::exp_abs_cos(cst(0.1), cst::<T>(2.0) * pi, half_pi),
        ],
        vec![
            Coefficient::exp_abs_cos(cst(0.5), pi, three_half_pi),
            Coefficient::exp_abs_cos(cst(0.6), pi, three_half_pi),
            Coefficient::exp_abs_sin(cst(0.3), cst::<T>(2.0) * pi, T::zero()),
        ],
    ];

    NicholsonModel::new(c, b, beta, alpha, tau).expect("benchmark model is well-formed")
}

fn pair<T: Real>(lo: f64, hi: f64) -> (T, T) {
    (cst(lo), cst(hi))
}

/// The reported sup/inf table that accompanies the benchmark, verbatim. Known misprints are preserved on
/// purpose so the certifier can flag them against recomputed values:
/// `b32.lo = 12` (formula gives 0.12), `beta33 = (0.21, 0.23)` (formula
/// gives (0.021, 0.023)) and `c3.hi = 0.43` (formula gives 0.42).
pub fn listed_bounds<T: Real>() -> BoundsTable<T> {
    BoundsTable {
        c: vec![pair(0.2, 0.22), pair(0.28, 0.32), pair(0.4, 0.43)],
        b: vec![
            vec![None, Some(pair(0.02, 0.04)), Some(pair(0.05, 0.07))],
            vec![Some(pair(0.04, 0.06)), None, Some(pair(0.04, 0.06))],
            vec![Some(pair(0.15, 0.17)), Some(pair(12.0, 0.14)), None],
        ],
        beta: vec![
            vec![pair(0.05, 0.09), pair(0.14, 0.16), pair(0.14, 0.16)],
            vec![pair(0.05, 0.07), pair(0.03, 0.05), pair(0.08, 0.1)],
            vec![pair(0.01, 0.03), pair(0.022, 0.042), pair(0.21, 0.23)],
        ],
        alpha: vec![
            vec![pair(0.91, 1.0), pair(0.91, 1.0), pair(0.91, 1.0)],
            vec![pair(0.6, 1.0), pair(0.6, 1.0), pair(0.6, 1.0)],
            vec![pair(0.8, 1.0), pair(0.6, 1.0), pair(0.6, 1.0)],
        ],
        tau: vec![
            vec![
                pair(1.0, 1.2214027581601699),
                pair(1.0, 1.4918246976412703),
                pair(1.0, 1.6487212707001282),
            ],
            vec![
                pair(1.0, 1.2214027581601699),
                pair(1.0, 1.3498588075760032),
                pair(1.0, 1.1051709180756477),
            ],
            vec![
                pair(1.0, 1.6487212707001282),
                pair(1.0, 1.8221188003905089),
                pair(1.0, 1.3498588075760032),
            ],
        ],
    }
}

/// The sup values the original per-patch sum display actually used for the smallness condition; they disagree with [`listed_bounds`]
/// for `beta23`, `b31`, `b32`, `beta31` and `beta32`. With these inputs the
/// displayed sums `{0.1655, 0.1457, 0.1539}` reproduce exactly.
pub fn h5_display_bounds<T: Real>() -> BoundsTable<T> {
    let mut table = listed_bounds::<T>();
    table.beta[1][2] = pair(0.08, 0.07);
    table.b[2][0] = Some(pair(0.15, 0.03));
    table.b[2][1] = Some(pair(0.12, 0.04));
    table.beta[2][0] = pair(0.01, 0.06);
    table.beta[2][1] = pair(0.022, 0.33);
    table.beta[2][2] = pair(0.21, 0.23);
    table
}
