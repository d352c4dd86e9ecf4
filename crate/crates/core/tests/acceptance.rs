//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the lines for passing criteria).
//!
//! Criteria 1b and 5 assert reported derived numbers that do not follow
//! from the benchmark coefficient formulas (see README); they are asserted
//! as stated and fail honestly, printing the recomputed values next to the
//! reported ones.

use nicholson_ts::analysis::{fit_decay, translation_numbers, verify_envelope};
use nicholson_ts::certifier::{
    a1_interval_unchecked, a1_lower_bound, a2_threshold, check_h2, check_h5, decay_rate_from_bounds,
    varsigma, BoundsTable,
};
use nicholson_ts::model::{InitialCondition, NicholsonModel};
use nicholson_ts::preset;
use nicholson_ts::simulator::{pair_deviation, simulate, simulation_window};
use nicholson_ts::timescale::{
    build_grid, shift_intersection, translation_group, RejectReason, ScaleFamily, Segment,
    TimeScale,
};
use nicholson_ts::tscalc::{circle_minus, ts_exp};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Criterion {
    label: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(label: &'static str) -> Self {
        Criterion {
            label,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, what: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(format!("{}: {}", what, detail));
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("ACCEPTANCE {}: PASS", self.label);
        } else {
            println!("ACCEPTANCE {}: FAIL", self.label);
            for f in &self.failures {
                println!("  - {}", f);
            }
            panic!("criterion failed: {}", self.label);
        }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn criterion_1a_h2_h5_margins_and_a1_lower() {
    let start = Instant::now();
    let mut c = Criterion::new("1a (benchmark reference arithmetic: H2, H5, A1 lower bound)");

    let listed = preset::listed_bounds::<f64>();
    let h2 = check_h2(&listed);
    let want_h2 = [0.55, 0.4286, 0.775];
    for (i, w) in want_h2.iter().enumerate() {
        c.check(
            &format!("H2 ratio patch {}", i + 1),
            close(h2[i].ratio, *w, 5e-4),
            format!("{} vs {}", h2[i].ratio, w),
        );
    }

    let display = preset::h5_display_bounds::<f64>();
    let h5 = check_h5(&display);
    let want_h5 = [0.1655, 0.1457, 0.1539];
    let want_c = [0.2, 0.28, 0.4];
    for i in 0..3 {
        c.check(
            &format!("H5 sum patch {}", i + 1),
            close(h5[i].sum, want_h5[i], 5e-4),
            format!("{} vs {}", h5[i].sum, want_h5[i]),
        );
        c.check(
            &format!("H5 margin patch {}", i + 1),
            close(h5[i].margin, want_c[i] - want_h5[i], 5e-4),
            format!("{} vs {}", h5[i].margin, want_c[i] - want_h5[i]),
        );
    }

    let lo = a1_lower_bound(&listed);
    c.check("A1 lower bound", close(lo, 1.2025, 5e-4), format!("{}", lo));

    let dt = start.elapsed();
    c.check(
        "runtime under 1 s",
        dt.as_secs_f64() < 1.0,
        format!("{:?}", dt),
    );
    c.finish();
}

#[test]
fn criterion_1b_a2_threshold_and_a1_upper_reported_values() {
    // The reported displays {2.7102, 0.8431, 0.6449} (A2 threshold) and
    // {1.2118, 8.0234, 1.3407} (A1 ceiling) reproduce from the stated
    // formulas only in the middle component. The assertions below pin the
    // reported values as the criterion states them; the recomputed
    // arithmetic is printed alongside.
    let mut c = Criterion::new("1b (benchmark reference arithmetic: A2 threshold, A1 upper bound)");

    let mut listed = preset::listed_bounds::<f64>();
    // repair the obvious misprint b32.inf = 12 (formula gives 0.12) so the
    // brackets stay meaningful; every other entry is used verbatim
    listed.b[2][1] = Some((0.12, 0.14));

    let th = a2_threshold(&listed).expect("H2 holds on the listed table");
    println!(
        "  a2_threshold per patch (listed extrema): {:?}; reported: [2.7102, 0.8431, 0.6449]",
        th.per_patch
    );
    c.check(
        "A2 threshold equals reported 2.7102",
        close(th.threshold, 2.7102, 5e-4),
        format!("computed {} vs reported 2.7102", th.threshold),
    );

    let iv = a1_interval_unchecked(&listed, 2.72);
    println!(
        "  a1 ceiling per patch (stated formula): {:?}; (variant): {:?}; reported: [1.2118, 8.0234, 1.3407]",
        iv.per_patch_hi_stated, iv.per_patch_hi_variant
    );
    if iv.lo >= iv.hi {
        println!(
            "  a1 interval is infeasible: lo = {} >= hi = {}",
            iv.lo, iv.hi
        );
    }
    c.check(
        "A1 upper bound equals reported 1.2118",
        close(iv.hi, 1.2118, 5e-4),
        format!("computed {} vs reported 1.2118", iv.hi),
    );
    c.finish();
}

#[test]
fn criterion_2_recomputation_tier_flags_inconsistencies() {
    let start = Instant::now();
    let mut c = Criterion::new("2 (recomputed extrema and divergence flags)");

    let model = preset::blowfly3::<f64>();
    let recomputed = BoundsTable::from_model(&model, 500.0, 200_000).unwrap();
    let listed = preset::listed_bounds::<f64>();

    // entries consistent with their formulas must be recovered within 1e-3
    let consistent: [(&str, f64, f64); 8] = [
        ("c1", listed.c[0].0, recomputed.c[0].0),
        ("c1 sup", listed.c[0].1, recomputed.c[0].1),
        ("c2", listed.c[1].0, recomputed.c[1].0),
        ("b12 inf", listed.b[0][1].unwrap().0, recomputed.b[0][1].unwrap().0),
        ("b12 sup", listed.b[0][1].unwrap().1, recomputed.b[0][1].unwrap().1),
        ("beta11 sup", listed.beta[0][0].1, recomputed.beta[0][0].1),
        ("alpha11 inf", listed.alpha[0][0].0, recomputed.alpha[0][0].0),
        ("alpha21 inf", listed.alpha[1][0].0, recomputed.alpha[1][0].0),
    ];
    for (name, l, r) in consistent {
        c.check(name, close(l, r, 1e-3), format!("listed {} vs recomputed {}", l, r));
    }

    // the known misprints must be flagged, not adopted
    let fam = ScaleFamily::Reals;
    let grid = build_grid(&fam, (-2.0, 10.0), 0.1).unwrap();
    let cert = nicholson_ts::certifier::certify(
        &model,
        &fam,
        &grid,
        1.21,
        2.72,
        Some(&listed),
        500.0,
        200_000,
    )
    .unwrap();
    let names: Vec<&str> = cert.divergences.iter().map(|d| d.name.as_str()).collect();
    for want in ["beta[3][3].inf", "beta[3][3].sup", "b[3][2].inf", "c[3].sup"] {
        c.check(
            &format!("flagged {}", want),
            names.contains(&want),
            format!("flags = {:?}", names),
        );
    }

    // the sup values used in the reported sum display diverge from the
    // formulas as well and must be flagged when supplied as the reference
    let cert2 = nicholson_ts::certifier::certify(
        &model,
        &fam,
        &grid,
        1.21,
        2.72,
        Some(&preset::h5_display_bounds::<f64>()),
        500.0,
        200_000,
    )
    .unwrap();
    let names2: Vec<&str> = cert2.divergences.iter().map(|d| d.name.as_str()).collect();
    for want in ["beta[3][1].sup", "beta[3][2].sup", "b[3][1].sup", "b[3][2].sup", "beta[2][3].sup"] {
        c.check(
            &format!("flagged {}", want),
            names2.contains(&want),
            format!("flags = {:?}", names2),
        );
    }

    let dt = start.elapsed();
    c.check(
        "runtime under 10 s",
        dt.as_secs_f64() < 10.0,
        format!("{:?}", dt),
    );
    c.finish();
}

#[test]
fn criterion_3_varsigma() {
    let mut c = Criterion::new("3 (varsigma root and sup identity)");
    let v = varsigma::<f64>();
    c.check(
        "root in [0.7215344, 0.7215364]",
        (0.7215344..=0.7215364).contains(&v),
        format!("{}", v),
    );
    let residual = (1.0 - v) * (-v).exp() - (-2.0f64).exp();
    c.check("residual below 1e-12", residual.abs() < 1e-12, format!("{:e}", residual));

    let mut sup = 0.0f64;
    let n = 2_000_000usize;
    for k in 0..=n {
        let x = v + 60.0 * k as f64 / n as f64;
        sup = sup.max(((1.0 - x) * (-x).exp()).abs());
    }
    c.check(
        "dense-scan sup equals e^-2 within 1e-9",
        close(sup, (-2.0f64).exp(), 1e-9),
        format!("{}", sup),
    );
    c.finish();
}

#[test]
fn criterion_4_time_scale_exponential() {
    let mut c = Criterion::new("4 (generalized exponential identities)");

    let gz = build_grid(&ScaleFamily::Integers, (0.0, 10.0), 0.5).unwrap();
    let v = ts_exp(|_| -0.2, 3.0, 0.0, &gz).unwrap();
    c.check(
        "integer-scale product 0.512 to 1e-15",
        close(v, 0.512, 1e-15),
        format!("{:.17}", v),
    );

    let gr = build_grid(&ScaleFamily::Reals, (0.0, 20.0), 0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rel = 0.0f64;
    for _ in 0..100 {
        let i = rng.gen_range(0..gr.len());
        let j = rng.gen_range(0..gr.len());
        let (s, t): (f64, f64) = (
            gr.points()[i.min(j)],
            gr.points()[i.max(j)],
        );
        let got = ts_exp(|_| -0.2, t, s, &gr).unwrap();
        let want = (-0.2 * (t - s)).exp();
        worst_rel = worst_rel.max(((got - want) / want).abs());
    }
    c.check(
        "continuous-scale relative error below 1e-8 over 100 random pairs",
        worst_rel < 1e-8,
        format!("{:e}", worst_rel),
    );

    // randomized hybrid scales: semigroup and reciprocal identities
    let mut worst_semi = 0.0f64;
    let mut worst_recip = 0.0f64;
    for trial in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + trial);
        let mut segs = Vec::new();
        let mut cursor = 0.0f64;
        for _ in 0..rng.gen_range(2..5) {
            cursor += rng.gen_range(0.3..1.2);
            if rng.gen_bool(0.5) {
                let len = rng.gen_range(0.4..1.5);
                segs.push(Segment::Interval {
                    lo: cursor,
                    hi: cursor + len,
                });
                cursor += len;
            } else {
                segs.push(Segment::Point(cursor));
            }
        }
        let ts = TimeScale::new(segs).unwrap();
        let window = ts.window();
        let fam = ScaleFamily::Explicit(ts.clone());
        let grid = build_grid(&fam, window, 0.01).unwrap();
        let amp: f64 = rng.gen_range(0.05..0.2);
        let center: f64 = rng.gen_range(-0.3..0.3);
        let omega: f64 = rng.gen_range(0.5..2.0);
        let p = move |t: f64| center + amp * (omega * t).sin();
        let pick = |rng: &mut ChaCha8Rng| grid.points()[rng.gen_range(0..grid.len())];
        let mut triple = [pick(&mut rng), pick(&mut rng), pick(&mut rng)];
        triple.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let [r, s, t] = triple;
        let e_ts = ts_exp(p, t, s, &grid).unwrap();
        let e_sr = ts_exp(p, s, r, &grid).unwrap();
        let e_tr = ts_exp(p, t, r, &grid).unwrap();
        if e_tr != 0.0 {
            worst_semi = worst_semi.max((e_ts * e_sr / e_tr - 1.0).abs());
        }
        let e_m = ts_exp(
            |u| circle_minus(p(u), ts.mu(u).unwrap()).unwrap(),
            t,
            s,
            &grid,
        )
        .unwrap();
        worst_recip = worst_recip.max((e_ts * e_m - 1.0).abs());
    }
    c.check(
        "semigroup identity within 1e-8 on random hybrid scales",
        worst_semi < 1e-8,
        format!("{:e}", worst_semi),
    );
    c.check(
        "reciprocal identity within 1e-8 on random hybrid scales",
        worst_recip < 1e-8,
        format!("{:e}", worst_recip),
    );
    c.finish();
}

fn run_preset(
    fam: &ScaleFamily<f64>,
    ic: &InitialCondition<f64>,
    t_end: f64,
    max_step: f64,
) -> nicholson_ts::simulator::Trajectory<f64> {
    let model = preset::blowfly3::<f64>();
    let theta = model.theta().unwrap();
    let window = simulation_window(fam, ic.t0, theta, t_end, max_step);
    let grid = build_grid(fam, window, max_step).unwrap();
    simulate(&model, fam, &grid, ic, t_end).unwrap()
}

#[test]
fn criterion_5_invariant_region_as_reported() {
    // Box property with the reported (A1, A2) = (1.21, 2.72).
    // The recomputed A1 ceiling (= 0.063 with formula extrema) sits far
    // below the required floor 1.2026, so the hypothesis set is infeasible
    // and the trajectories in fact settle well below A1. Asserted as stated;
    // the observed box is printed.
    let start = Instant::now();
    let mut c = Criterion::new("5 (invariant region with reported box)");
    let (a1, a2) = preset::box_bounds::<f64>();

    let traj_r = run_preset(&ScaleFamily::Reals, &preset::ic_reals(), 200.0, 0.05);
    let mut min_r = f64::INFINITY;
    let mut max_r = f64::NEG_INFINITY;
    for (k, x) in traj_r.states().iter().enumerate() {
        if traj_r.times()[k] < 0.0 {
            continue;
        }
        for v in x {
            min_r = min_r.min(*v);
            max_r = max_r.max(*v);
        }
    }
    println!(
        "  continuous run observed box: [{:.4}, {:.4}]; required: [{}, {}]",
        min_r, max_r, a1, a2
    );
    c.check(
        "continuous components stay in [A1 - 1e-6, A2 + 1e-6]",
        min_r >= a1 - 1e-6 && max_r <= a2 + 1e-6,
        format!("observed [{:.4}, {:.4}]", min_r, max_r),
    );

    let traj_z = run_preset(&ScaleFamily::Integers, &preset::ic_integers(), 200.0, 0.5);
    let mut min_z = f64::INFINITY;
    let mut max_z = f64::NEG_INFINITY;
    for (k, x) in traj_z.states().iter().enumerate() {
        if traj_z.times()[k] < 0.0 {
            continue;
        }
        for v in x {
            min_z = min_z.min(*v);
            max_z = max_z.max(*v);
        }
    }
    println!(
        "  integer run observed box: [{:.4}, {:.4}]; required: [{}, {}]",
        min_z, max_z, a1, a2
    );
    c.check(
        "integer components stay in [A1 - 1e-6, A2 + 1e-6]",
        min_z >= a1 - 1e-6 && max_z <= a2 + 1e-6,
        format!("observed [{:.4}, {:.4}]", min_z, max_z),
    );

    let dt = start.elapsed();
    c.check("runtime under 60 s", dt.as_secs_f64() < 60.0, format!("{:?}", dt));
    c.finish();
}

#[test]
fn criterion_6_exponential_stability_envelope() {
    let start = Instant::now();
    let mut c = Criterion::new("6 (stability envelope with certified constants)");
    let model = preset::blowfly3::<f64>();
    let table = BoundsTable::from_model(&model, 500.0, 200_000).unwrap();

    // continuous scale
    {
        let fam = ScaleFamily::Reals;
        let rate = decay_rate_from_bounds(&table, 0.0).unwrap();
        let ic_a = preset::ic_reals::<f64>();
        let ic_b = InitialCondition::constant(0.0, vec![1.71, 1.3, 2.0]);
        let a = run_preset(&fam, &ic_a, 120.0, 0.05);
        let b = {
            let theta = model.theta().unwrap();
            let window = simulation_window(&fam, 0.0, theta, 120.0, 0.05);
            let grid = build_grid(&fam, window, 0.05).unwrap();
            simulate(&model, &fam, &grid, &ic_b, 120.0).unwrap()
        };
        let rep = verify_envelope(&a, &b, rate.alpha, rate.m).unwrap();
        println!(
            "  continuous: alpha = {:.6}, M = {:.4}, worst ratio = {:.4}, fitted rate = {:?}",
            rate.alpha, rate.m, rep.worst_ratio, rep.fitted_rate
        );
        c.check(
            "continuous envelope has zero violations",
            rep.violations == 0,
            format!("{} violations, worst ratio {}", rep.violations, rep.worst_ratio),
        );
        let fitted = rep.fitted_rate.unwrap_or(0.0);
        c.check(
            "continuous fitted decay at least alpha/2",
            fitted >= 0.5 * rate.alpha,
            format!("fitted {} vs floor {}", fitted, 0.5 * rate.alpha),
        );
    }

    // integer scale
    {
        let fam = ScaleFamily::Integers;
        let rate = decay_rate_from_bounds(&table, 1.0).unwrap();
        let ic_a = preset::ic_integers::<f64>();
        let ic_b = InitialCondition::constant(0.0, vec![1.7, 1.2, 1.8]);
        let a = run_preset(&fam, &ic_a, 200.0, 0.5);
        let b = {
            let theta = model.theta().unwrap();
            let window = simulation_window(&fam, 0.0, theta, 200.0, 0.5);
            let grid = build_grid(&fam, window, 0.5).unwrap();
            simulate(&model, &fam, &grid, &ic_b, 200.0).unwrap()
        };
        let rep = verify_envelope(&a, &b, rate.alpha, rate.m).unwrap();
        println!(
            "  integer: alpha = {:.6}, M = {:.4}, worst ratio = {:.4}, fitted rate = {:?}",
            rate.alpha, rate.m, rep.worst_ratio, rep.fitted_rate
        );
        c.check(
            "integer envelope has zero violations",
            rep.violations == 0,
            format!("{} violations, worst ratio {}", rep.violations, rep.worst_ratio),
        );
        let fitted = rep.fitted_rate.unwrap_or(0.0);
        c.check(
            "integer fitted decay at least alpha/2",
            fitted >= 0.5 * rate.alpha,
            format!("fitted {} vs floor {}", fitted, 0.5 * rate.alpha),
        );
    }

    let dt = start.elapsed();
    c.check("runtime under 60 s", dt.as_secs_f64() < 60.0, format!("{:?}", dt));
    c.finish();
}

#[test]
fn criterion_7_translation_algebra() {
    let mut c = Criterion::new("7 (translation set of Z with an extra quarter point)");
    let fam = ScaleFamily::integers_with(vec![0.25]);
    let report = translation_group(
        &fam,
        &[0.25, -0.25, 1.0, -1.0, 2.0, -2.0],
        (-12.0, 12.0),
    )
    .unwrap();
    for want in [1.0, -1.0, 2.0, -2.0] {
        c.check(
            &format!("accepts {}", want),
            report.accepted.contains(&want),
            format!("accepted = {:?}", report.accepted),
        );
    }
    for tau in [0.25, -0.25] {
        c.check(
            &format!("excludes {}", tau),
            report.rejected.iter().any(|(t, _)| *t == tau),
            format!("rejected = {:?}", report.rejected),
        );
    }
    c.check(
        "quarter shift rejected because T_tau = {0}",
        report
            .rejected
            .iter()
            .any(|(t, r)| *t == 0.25 && *r == RejectReason::TrivialIntersection),
        format!("{:?}", report.rejected),
    );
    let core = report.common_core.expect("common core exists");
    let want = ScaleFamily::Integers.materialize((-10.0, 10.0)).unwrap();
    c.check(
        "common core is exactly Z on the window",
        core.segments() == want.segments(),
        format!("{:?}", core.segments()),
    );
    // and the defining intersections from the worked example
    let t_one = shift_intersection(&fam, 1.0, (-12.0, 12.0)).unwrap().unwrap();
    let want_full = ScaleFamily::Integers.materialize((-12.0, 12.0)).unwrap();
    c.check(
        "T_1 is Z on the window",
        t_one.segments() == want_full.segments(),
        format!("{:?}", t_one.segments()),
    );
    let t_quarter = shift_intersection(&fam, 0.25, (-12.0, 12.0)).unwrap().unwrap();
    c.check(
        "T_quarter is the zero singleton",
        t_quarter.is_singleton_zero(),
        format!("{:?}", t_quarter.segments()),
    );
    c.finish();
}

#[test]
fn criterion_8_integer_scale_oracle_equivalence() {
    let mut c = Criterion::new("8 (plain difference recursion oracle on Z)");
    let fam = ScaleFamily::Integers;
    let ic = preset::ic_integers::<f64>();
    let traj = run_preset(&fam, &ic, 500.0, 0.5);

    // independent straight-line recursion over the benchmark formulas
    let pi = std::f64::consts::PI;
    let s2 = std::f64::consts::SQRT_2;
    let s3 = 3.0f64.sqrt();
    let cs: [&dyn Fn(f64) -> f64; 3] = [
        &|t| 0.21 + 0.01 * (t / 3.0).sin(),
        &|t| 0.3 + 0.02 * (4.0 * t / 3.0).sin(),
        &|t| 0.41 + 0.01 * (t / 3.0).sin(),
    ];
    let b = |i: usize, k: usize, t: f64| -> f64 {
        match (i, k) {
            (0, 1) => 0.03 + 0.01 * (pi * t).cos(),
            (0, 2) => 0.06 + 0.01 * (s3 * t).cos(),
            (1, 0) => 0.05 + 0.01 * (s3 * t).cos(),
            (1, 2) => 0.05 + 0.01 * (s2 * t).sin(),
            (2, 0) => 0.16 + 0.01 * (s3 * t).sin(),
            (2, 1) => 0.13 + 0.01 * (s2 * t).cos(),
            _ => 0.0,
        }
    };
    let beta = |i: usize, j: usize, t: f64| -> f64 {
        match (i, j) {
            (0, 0) => 0.07 + 0.02 * (pi * t).sin(),
            (0, 1) => 0.15 + 0.01 * (s3 * t).cos(),
            (0, 2) => 0.15 + 0.01 * (5.0 * t / 6.0).sin(),
            (1, 0) => 0.06 + 0.01 * (pi * t).cos(),
            (1, 1) => 0.04 + 0.01 * (s3 * t).cos(),
            (1, 2) => 0.09 + 0.01 * (t / 3.0).cos(),
            (2, 0) => 0.02 + 0.01 * (t / 6.0).cos(),
            (2, 1) => 0.032 + 0.01 * (s2 * t).cos(),
            (2, 2) => 0.022 + 0.001 * (t / 3.0).sin(),
            _ => unreachable!(),
        }
    };
    let alpha = |i: usize, j: usize, t: f64| -> f64 {
        match (i, j) {
            (0, _) => 0.91 + 0.09 * (s3 * t).sin().abs(),
            (1, 0) => 0.8 + 0.2 * (s2 * t).sin(),
            (1, 1) => 0.8 + 0.2 * (s2 * t).cos(),
            (1, 2) => 0.8 + 0.2 * (pi * t).sin(),
            (2, 0) => 0.8 + 0.2 * (s3 * t).sin().abs(),
            (2, 1) => 0.8 + 0.2 * (s3 * t).sin(),
            (2, 2) => 0.8 + 0.2 * (4.0 * t / 3.0).sin(),
            _ => unreachable!(),
        }
    };
    let tau = |i: usize, j: usize, t: f64| -> f64 {
        match (i, j) {
            (0, 0) => (0.2 * (pi * t).sin().abs()).exp(),
            (0, 1) => (0.4 * (pi * t + pi / 2.0).cos().abs()).exp(),
            (0, 2) => (0.5 * (pi * t).sin().abs()).exp(),
            (1, 0) => (0.2 * (pi * t + pi / 2.0).cos().abs()).exp(),
            (1, 1) => (0.3 * (3.0 * pi * t).sin().abs()).exp(),
            (1, 2) => (0.1 * (2.0 * pi * t + pi / 2.0).cos().abs()).exp(),
            (2, 0) => (0.5 * (pi * t + 3.0 * pi / 2.0).cos().abs()).exp(),
            (2, 1) => (0.6 * (pi * t + 3.0 * pi / 2.0).cos().abs()).exp(),
            (2, 2) => (0.3 * (2.0 * pi * t).sin().abs()).exp(),
            _ => unreachable!(),
        }
    };

    // stored oracle samples, keyed from t = -2
    let mut times: Vec<f64> = vec![-2.0, -1.0, 0.0];
    let mut states: Vec<[f64; 3]> = vec![[1.2, 1.2, 2.3]; 3];
    let lookup = |times: &Vec<f64>, states: &Vec<[f64; 3]>, q: f64, i: usize| -> f64 {
        // the sample at q when q is a stored time, otherwise the last stored
        // sample before q (constant from the left across scattered gaps)
        let pos = times.partition_point(|t| *t <= q + 1e-9);
        states[pos.saturating_sub(1)][i]
    };
    for step in 0..500usize {
        let t = step as f64;
        let x = *states.last().unwrap();
        let mut next = [0.0f64; 3];
        for i in 0..3 {
            let mut v = -cs[i](t) * x[i];
            for (k, xk) in x.iter().enumerate() {
                if k != i {
                    v += b(i, k, t) * xk;
                }
            }
            for j in 0..3 {
                let d = lookup(&times, &states, t - tau(i, j, t), i);
                v += beta(i, j, t) * d * (-alpha(i, j, t) * d).exp();
            }
            next[i] = x[i] + v;
        }
        times.push(t + 1.0);
        states.push(next);
    }

    let mut worst = 0.0f64;
    for (k, t) in traj.times().iter().enumerate() {
        let idx = (t + 2.0).round() as usize;
        for (i, oracle) in states[idx].iter().enumerate() {
            worst = worst.max((traj.states()[k][i] - oracle).abs());
        }
    }
    c.check(
        "simulator matches the plain recursion within 1e-12 over 500 steps",
        worst < 1e-12,
        format!("worst deviation {:e}", worst),
    );
    c.finish();
}

#[test]
fn criterion_9_rk4_order_on_delay_free_configuration() {
    let mut c = Criterion::new("9 (RK4 order on a smooth delay-free configuration)");
    use nicholson_ts::model::Coefficient;
    let model = NicholsonModel::new(
        vec![Coefficient::sinusoid(0.5, 0.1, 1.0, 0.0)],
        vec![vec![None]],
        vec![vec![Coefficient::Const(0.3)]],
        vec![vec![Coefficient::Const(1.0)]],
        vec![vec![Coefficient::Const(0.0)]],
    )
    .unwrap();
    let fam = ScaleFamily::Reals;
    let ic = InitialCondition::constant(0.0, vec![1.4]);
    let t_end = 5.0;
    let run = |h: f64| -> f64 {
        let grid = build_grid(&fam, (0.0, t_end), h).unwrap();
        let traj = simulate(&model, &fam, &grid, &ic, t_end).unwrap();
        traj.states().last().unwrap()[0]
    };
    let reference = run(0.003125);
    let errs: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|h| (run(*h) - reference).abs())
        .collect();
    let order_1 = (errs[0] / errs[1]).log2();
    let order_2 = (errs[1] / errs[2]).log2();
    println!(
        "  errors = {:?}, observed orders = {:.2}, {:.2}",
        errs, order_1, order_2
    );
    c.check(
        "observed order at least 3.5",
        order_1 >= 3.5 && order_2 >= 3.5,
        format!("{:.2}, {:.2}", order_1, order_2),
    );
    c.finish();
}

#[test]
fn deviation_pair_decay_sanity() {
    // the deviation between nearby runs of the benchmark contracts; used by
    // the comparison verdicts
    let fam = ScaleFamily::Reals;
    let a = run_preset(&fam, &preset::ic_reals(), 80.0, 0.05);
    let model = preset::blowfly3::<f64>();
    let theta = model.theta().unwrap();
    let window = simulation_window(&fam, 0.0, theta, 80.0, 0.05);
    let grid = build_grid(&fam, window, 0.05).unwrap();
    let ic2 = InitialCondition::constant(0.0, vec![1.35, 1.25, 1.55]);
    let b = simulate(&model, &fam, &grid, &ic2, 80.0).unwrap();
    let dev = pair_deviation(&a, &b).unwrap();
    let rate = fit_decay(&dev, (5.0, 70.0)).unwrap();
    assert!(rate > 0.02, "fitted contraction rate {}", rate);
}

#[test]
fn translation_numbers_on_benchmark_steady_state() {
    // after the transient the trajectory is nearly almost periodic: even
    // shifts align the pi-family frequencies and many are accepted
    let fam = ScaleFamily::Reals;
    let traj = run_preset(&fam, &preset::ic_reals(), 260.0, 0.05);
    // drop the transient by re-basing on the tail
    let cands: Vec<f64> = (1..=40).map(|k| 2.0 * k as f64).collect();
    let start_idx = traj
        .times()
        .iter()
        .position(|t| *t >= 60.0)
        .unwrap();
    let mut tail = nicholson_ts::simulator::Trajectory::new(60.0, 3, "tail".into());
    for k in start_idx..traj.len() {
        tail.push(
            traj.times()[k],
            traj.states()[k].clone(),
            traj.scattered_flags()[k],
        );
    }
    let rep = translation_numbers(&tail, 0.05, &cands).unwrap();
    assert!(
        rep.accepted.len() >= 5,
        "accepted = {:?}",
        rep.accepted
    );
    assert!(rep.inclusion_length.is_some());
}
