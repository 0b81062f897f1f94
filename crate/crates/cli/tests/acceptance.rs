//! Acceptance criteria 1 to 10. Each test prints one PASS/FAIL line.

use std::process::Command;
use std::time::{Duration, Instant};

use gridzeta::exact_series::{
    det_series, geodesic_counts_from_series, trlog_series, zeta_series, zeta_series_via_theta,
    BigRational,
};
use gridzeta::finite_graphs::{
    convergence_table, finite_functional_equation_residual, torus_graph, Family,
};
use gridzeta::oracles::quadrature::integrate_real;
use gridzeta::oracles::{
    closed_walk_count_dp, geodesic_count_dp, primitive_class_count, zeta_via_quadrature_with,
    zint_identity_residual, QuadratureSpec,
};
use gridzeta::special_functions::{
    elliptic_k, modulus_from_t, nome_t_from_u, theta2_sq, theta3, theta4, TruncationPolicy,
};
use gridzeta::surface::{
    deck_transform, functional_equation_residual, lift_principal, zeta_tilde, RELATION_TOL,
};
use gridzeta::{Complex64, DeckWord, SurfacePoint};
use num_bigint::BigInt;
use serde_json::Value;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(n: u32, ok: bool, detail: &str) {
    println!(
        "criterion {n:>2}: {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn criterion_01_zeta_series_coefficients() {
    let start = Instant::now();
    let z = zeta_series(10);
    let elapsed = start.elapsed();
    let expected = [1i64, 0, 2, 4, 29, 160, 1070, 7192, 50688, 365376, 2695122];
    let coeffs_ok = expected
        .iter()
        .enumerate()
        .all(|(i, &e)| z.coeff(2 * i) == int(e));
    let odd_ok = (0..10).all(|i| z.coeff(2 * i + 1) == int(0));
    let ok = coeffs_ok && odd_ok && elapsed < Duration::from_secs(1);
    report(1, ok, &format!("u^0..u^20 exact, {elapsed:?}"));
}

#[test]
fn criterion_02_det_and_trlog_series() {
    let det = det_series(6);
    let trlog = trlog_series(6);
    let det_expected = [1i64, 1, -1, -5, -30, -174, -1120];
    let det_ok = det_expected
        .iter()
        .enumerate()
        .all(|(i, &e)| det.coeff(2 * i) == int(e));
    let trlog_expected = [
        (1i64, 1i64),
        (-3, 2),
        (-11, 3),
        (-107, 4),
        (-759, 5),
        (-6039, 6),
    ];
    let trlog_ok = trlog.coeff(0) == int(0)
        && trlog_expected.iter().enumerate().all(|(i, &(n, d))| {
            trlog.coeff(2 * i + 2) == BigRational::new(BigInt::from(n), BigInt::from(d))
        });
    let odd_ok = (0..6).all(|i| det.coeff(2 * i + 1) == int(0) && trlog.coeff(2 * i + 1) == int(0));
    report(
        2,
        det_ok && trlog_ok && odd_ok,
        "det and trlog through u^12",
    );
}

#[test]
fn criterion_03_theta_route_equals_combinatorial_series() {
    let start = Instant::now();
    let via_theta = zeta_series_via_theta(20);
    let elapsed = start.elapsed();
    let direct = zeta_series(10);
    let ok = via_theta == direct && elapsed < Duration::from_secs(10);
    report(3, ok, &format!("21 coefficients through u^20, {elapsed:?}"));
}

fn omega_points() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for r in [0.05, 0.15, 0.25, 0.32] {
        for k in 0..5 {
            pts.push(Complex64::from_polar(r, 0.3 + 1.3 * k as f64));
        }
    }
    pts.extend([
        c(0.3, 0.0),
        c(-0.3, 0.0),
        c(0.0, 0.5),
        c(0.2, 0.5),
        c(-0.45, -0.25),
    ]);
    pts
}

#[test]
fn criterion_04_theta_route_against_torus_quadrature() {
    let spec = QuadratureSpec::new(1e-10, 1e-10, 2000).unwrap();
    let start = Instant::now();
    let pts = omega_points();
    assert_eq!(pts.len(), 25);
    let mut worst = 0.0f64;
    for &u in &pts {
        let z = zeta_tilde(&lift_principal(u).unwrap()).unwrap();
        let q = zeta_via_quadrature_with(u, spec).unwrap();
        worst = worst.max((z - q).norm() / z.norm());
    }
    let elapsed = start.elapsed();
    let ok = worst < 1e-8 && elapsed < Duration::from_secs(60);
    report(
        4,
        ok,
        &format!("25 points, worst relative gap {worst:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_05_functional_equation_on_surface() {
    let mut points: Vec<SurfacePoint> = Vec::new();
    for r in [0.08, 0.16, 0.24, 0.3] {
        for k in 0..4 {
            points.push(lift_principal(Complex64::from_polar(r, 0.2 + 1.55 * k as f64)).unwrap());
        }
    }
    let bases = [
        lift_principal(c(0.15, 0.0)).unwrap(),
        lift_principal(c(0.1, 0.12)).unwrap(),
    ];
    let words: [&[(usize, i32)]; 6] = [
        &[(2, 1)],
        &[(2, -1)],
        &[(3, 1)],
        &[(3, -1)],
        &[(2, 1), (3, 1)],
        &[(3, -1), (2, 1)],
    ];
    let mut off_principal = 0;
    'outer: for base in &bases {
        for w in words {
            if points.len() >= 20 {
                break 'outer;
            }
            if let Ok(p) = deck_transform(base, &DeckWord::from_pairs(w).unwrap()) {
                let principal_t = nome_t_from_u(p.u()).unwrap();
                if (p.t() - principal_t).norm() > 1e-8 {
                    off_principal += 1;
                }
                points.push(p);
            }
        }
    }
    let worst = points
        .iter()
        .map(|p| functional_equation_residual(p).unwrap())
        .fold(0.0f64, f64::max);
    let ok = points.len() == 20 && off_principal >= 3 && worst < 1e-10;
    report(
        5,
        ok,
        &format!(
            "{} points, {off_principal} off the principal sheet, worst residual {worst:.2e}",
            points.len()
        ),
    );
}

#[test]
fn criterion_06_finite_functional_equation() {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (n, m) in [(3, 3), (4, 4), (3, 5), (6, 6)] {
        let g = torus_graph(n, m).unwrap();
        for j in 0..10 {
            let u = Complex64::from_polar(0.2, 0.1 + 0.6 * j as f64);
            worst = worst.max(finite_functional_equation_residual(&g, u).unwrap());
            count += 1;
        }
    }
    report(
        6,
        worst < 1e-8,
        &format!("{count} evaluations, worst residual {worst:.2e}"),
    );
}

fn central_binomial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| {
        acc * BigInt::from(k + i) / BigInt::from(i)
    })
}

#[test]
fn criterion_07_walk_and_geodesic_oracles() {
    let walks_ok = (0..=12u64).all(|k| {
        let b = central_binomial(k);
        BigInt::from(closed_walk_count_dp(k as usize)) == &b * &b
    });
    let series = geodesic_counts_from_series(14).unwrap();
    let geo_ok = series
        .iter()
        .filter(|(m, _)| m % 2 == 0)
        .all(|(m, n)| BigInt::from(geodesic_count_dp(*m)) == *n);
    let anchors = [(4usize, 8i64), (6, 24), (8, 216)];
    let anchors_ok = anchors.iter().all(|&(m, n)| {
        series[m - 1].1 == BigInt::from(n) && BigInt::from(geodesic_count_dp(m)) == BigInt::from(n)
    });
    let classes: Vec<u64> = (0..=12)
        .map(|l| {
            if l == 0 {
                0
            } else {
                primitive_class_count(l, true)
            }
        })
        .collect();
    let classes_ok = (1..=12usize).all(|m| {
        let sum: u64 = (1..=m)
            .filter(|l| m % l == 0)
            .map(|l| l as u64 * classes[l])
            .sum();
        BigInt::from(sum) == series[m - 1].1
    });
    let ok = walks_ok && geo_ok && anchors_ok && classes_ok;
    report(
        7,
        ok,
        &format!("walks k<=12 {walks_ok}, geodesics m<=14 {geo_ok}, anchors {anchors_ok}, classes m<=12 {classes_ok}"),
    );
}

#[test]
fn criterion_08_normalized_convergence() {
    let frozen: Value =
        serde_json::from_str(include_str!("data/convergence_thresholds.json")).unwrap();
    let floats = |v: &Value| -> Vec<f64> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect()
    };
    let sizes = |v: &Value| -> Vec<usize> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap() as usize)
            .collect()
    };

    let t = &frozen["torus"];
    let torus = convergence_table(
        Family::Torus,
        c(t["u"].as_f64().unwrap(), 0.0),
        &sizes(&t["sizes"]),
    )
    .unwrap();
    let torus_err: Vec<f64> = torus.iter().map(|r| r.error).collect();
    let strictly = torus_err.windows(2).all(|w| w[1] < w[0]);
    let halving = torus_err.windows(2).all(|w| w[1] < w[0] / 2.0);
    let torus_frozen = torus_err
        .iter()
        .zip(floats(&t["max_error"]))
        .all(|(e, m)| *e < m);
    let last_small = *torus_err.last().unwrap() < 1e-6;
    // where the error is far above rounding, the remainder series and the
    // direct difference must agree
    let routes_agree = (torus[0].error - torus[0].direct_error).abs() < 1e-14;

    let g = &frozen["grid"];
    let grid = convergence_table(
        Family::Grid,
        c(g["u"].as_f64().unwrap(), 0.0),
        &sizes(&g["sizes"]),
    )
    .unwrap();
    let grid_err: Vec<f64> = grid.iter().map(|r| r.error).collect();
    let grid_decreases = grid_err[1] < grid_err[0];
    let grid_frozen = grid_err
        .iter()
        .zip(floats(&g["max_error"]))
        .all(|(e, m)| *e < m);

    println!(
        "torus errors {:?}; direct differences {:?}; grid errors {:?}",
        torus_err,
        torus.iter().map(|r| r.direct_error).collect::<Vec<_>>(),
        grid_err
    );
    let ok = strictly
        && halving
        && torus_frozen
        && last_small
        && routes_agree
        && grid_decreases
        && grid_frozen;
    report(
        8,
        ok,
        &format!(
            "torus strictly decreasing {strictly}, halving {halving}, frozen {torus_frozen}; \
             grid error(64) < error(16) {grid_decreases}, frozen {grid_frozen}"
        ),
    );
}

fn k_by_quadrature(k: f64) -> f64 {
    let spec = QuadratureSpec::new(1e-15, 1e-15, 4000).unwrap();
    integrate_real(
        |w| 1.0 / (1.0 - k * k * w.sin() * w.sin()).sqrt(),
        0.0,
        std::f64::consts::FRAC_PI_2,
        spec,
    )
    .unwrap()
}

#[test]
fn criterion_09_special_functions() {
    let mut k_worst = 0.0f64;
    for i in 0..100 {
        let k = -0.99 + 1.98 * i as f64 / 99.0;
        let a = elliptic_k(c(k, 0.0)).unwrap();
        k_worst = k_worst.max((a - k_by_quadrature(k)).norm());
    }

    let policy = TruncationPolicy::default();
    let mut theta_k_worst = 0.0f64;
    for &u in &omega_points() {
        let t = nome_t_from_u(u).unwrap();
        let k = modulus_from_t(t).unwrap();
        let th3 = theta3(t * t, policy).unwrap();
        let lhs = elliptic_k(k).unwrap();
        theta_k_worst = theta_k_worst.max((lhs - th3 * th3 * std::f64::consts::FRAC_PI_2).norm());
    }

    let mut jacobi_worst = 0.0f64;
    for r in [0.1, 0.3, 0.45, 0.55, 0.6] {
        for j in 0..5 {
            let t = Complex64::from_polar(r, 0.4 + 1.2 * j as f64);
            let q = t * t;
            let lhs = theta2_sq(t, policy).unwrap().powi(2) + theta4(q, policy).unwrap().powi(4);
            let rhs = theta3(q, policy).unwrap().powi(4);
            jacobi_worst = jacobi_worst.max((lhs - rhs).norm());
        }
    }

    let zint_worst = (0..19)
        .map(|i| zint_identity_residual(-0.9 + 0.1 * i as f64).unwrap())
        .fold(0.0f64, f64::max);

    let ok = k_worst < 1e-12 && theta_k_worst < 1e-10 && jacobi_worst < 1e-12 && zint_worst < 1e-10;
    report(
        9,
        ok,
        &format!(
            "K vs quadrature {k_worst:.2e}, K vs theta {theta_k_worst:.2e}, Jacobi {jacobi_worst:.2e}, zint {zint_worst:.2e}"
        ),
    );
}

#[test]
fn criterion_10_sheets_over_fixed_u() {
    let out = Command::new(env!("CARGO_BIN_EXE_gridzeta"))
        .args(["sheets", "--u", "0.15", "--depth", "2", "--format", "json"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let distinct = v["distinct_count"].as_u64().unwrap();
    let sheets = v["sheets"].as_array().unwrap();
    let mut worst = 0.0f64;
    for s in sheets {
        worst = worst.max(s["relation_residual"].as_f64().unwrap());
        let t = c(s["t"][0].as_f64().unwrap(), s["t"][1].as_f64().unwrap());
        let p = SurfacePoint::new(c(0.15, 0.0), t).unwrap();
        worst = worst.max(p.relation_residual().unwrap());
    }
    let ok = distinct >= 5 && worst <= RELATION_TOL;
    report(
        10,
        ok,
        &format!(
            "{distinct} distinct values over {} sheets, worst relation residual {worst:.2e}",
            sheets.len()
        ),
    );
}
