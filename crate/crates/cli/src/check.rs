//! Invariant battery behind `gridzeta check`.

use gridzeta::exact_series::{
    closed_walk_moment, det_series, geodesic_counts_from_series, trlog_series, zeta_series,
    zeta_series_via_theta, BigRational,
};
use gridzeta::finite_graphs::{
    convergence_table, finite_functional_equation_residual, torus_graph, Family,
};
use gridzeta::oracles::{
    geodesic_count_dp, zeta_via_quadrature_with, zint_identity_residual, QuadratureSpec,
};
use gridzeta::special_functions::{theta2_sq, theta3, theta4, TruncationPolicy};
use gridzeta::surface::{
    deck_transform, enumerate_sheets, functional_equation_residual, lift_principal, zeta_tilde,
};
use gridzeta::{Complex64, DeckWord, ExactSeries, Result};
use num_bigint::BigInt;
use serde_json::json;

use crate::output::{Cell, Report, Table};

/// Coefficients of Z at u⁰, u², …, u²⁰.
pub const Z_COEFFS: [i64; 11] = [1, 0, 2, 4, 29, 160, 1070, 7192, 50688, 365376, 2695122];
/// Coefficients of det Δ_u at u⁰, u², …, u¹².
pub const DET_COEFFS: [i64; 7] = [1, 1, -1, -5, -30, -174, -1120];
/// Numerators of Tr log Δ_u at u², …, u¹² (denominators 1..6).
pub const TRLOG_NUMERATORS: [i64; 6] = [1, -3, -11, -107, -759, -6039];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn even_coeffs_equal(s: &ExactSeries, expected: &[i64]) -> bool {
    expected
        .iter()
        .enumerate()
        .all(|(i, &e)| s.coeff(2 * i) == BigRational::from_integer(BigInt::from(e)))
}

struct Suite {
    name: &'static str,
    run: fn(bool) -> Result<(bool, String)>,
}

fn computed_zeta(fault: bool) -> ExactSeries {
    let mut z = zeta_series(10);
    if fault {
        let bumped = z.coeff(8) + BigRational::from_integer(BigInt::from(1));
        z.set_coeff(8, bumped);
    }
    z
}

const SUITES: &[Suite] = &[
    Suite {
        name: "zeta_series_coefficients",
        run: |fault| {
            let z = computed_zeta(fault);
            Ok((
                even_coeffs_equal(&z, &Z_COEFFS),
                "u⁰..u²⁰ against frozen integers".into(),
            ))
        },
    },
    Suite {
        name: "det_and_trlog_series",
        run: |_| {
            let det = det_series(6);
            let trlog = trlog_series(6);
            let trlog_ok = TRLOG_NUMERATORS.iter().enumerate().all(|(i, &n)| {
                trlog.coeff(2 * i + 2)
                    == BigRational::new(BigInt::from(n), BigInt::from(i as i64 + 1))
            });
            Ok((
                even_coeffs_equal(&det, &DET_COEFFS) && trlog_ok,
                "through u¹²".into(),
            ))
        },
    },
    Suite {
        name: "theta_route_series",
        run: |fault| {
            let z = computed_zeta(fault);
            Ok((zeta_series_via_theta(20) == z, "order 20 in u".into()))
        },
    },
    Suite {
        name: "quadrature_route",
        run: |_| {
            let spec = QuadratureSpec::new(1e-10, 1e-10, 2000)?;
            let mut worst = 0.0f64;
            for u in [c(0.1, 0.0), c(-0.2, 0.1), c(0.0, 0.3), c(0.25, -0.2)] {
                let a = zeta_tilde(&lift_principal(u)?)?;
                let b = zeta_via_quadrature_with(u, spec)?;
                worst = worst.max((a - b).norm() / a.norm());
            }
            Ok((worst < 1e-8, format!("worst relative gap {worst:e}")))
        },
    },
    Suite {
        name: "functional_equation",
        run: |_| {
            let mut worst = 0.0f64;
            let base = lift_principal(c(0.15, 0.0))?;
            let mut points = vec![base, lift_principal(c(0.1, 0.12))?];
            for pairs in [[(2usize, 1i32)], [(3, 1)], [(2, -1)]] {
                points.push(deck_transform(&base, &DeckWord::from_pairs(&pairs)?)?);
            }
            for p in &points {
                worst = worst.max(functional_equation_residual(p)?);
            }
            Ok((worst < 1e-10, format!("worst residual {worst:e}")))
        },
    },
    Suite {
        name: "finite_functional_equation",
        run: |_| {
            let mut worst = 0.0f64;
            for (n, m) in [(3, 3), (4, 4), (3, 5)] {
                let g = torus_graph(n, m)?;
                for u in [c(0.1, 0.0), c(0.05, 0.02), c(-0.2, 0.1)] {
                    worst = worst.max(finite_functional_equation_residual(&g, u)?);
                }
            }
            Ok((worst < 1e-8, format!("worst residual {worst:e}")))
        },
    },
    Suite {
        name: "walk_counts",
        run: |_| {
            let series = geodesic_counts_from_series(12)?;
            let geo_ok = series
                .iter()
                .all(|(m, n)| BigInt::from(geodesic_count_dp(*m)) == *n);
            let walks_ok = (0..=8u64).all(|k| {
                BigInt::from(gridzeta::oracles::closed_walk_count_dp(k as usize))
                    == closed_walk_moment(k)
            });
            Ok((geo_ok && walks_ok, "m ≤ 12, k ≤ 8".into()))
        },
    },
    Suite {
        name: "theta_identities",
        run: |_| {
            let p = TruncationPolicy::default();
            let mut worst = 0.0f64;
            for t in [c(0.1, 0.0), c(0.3, 0.2), c(-0.4, 0.1), c(0.0, 0.5)] {
                let q = t * t;
                let lhs = theta2_sq(t, p)?.powi(2) + theta4(q, p)?.powi(4);
                let rhs = theta3(q, p)?.powi(4);
                worst = worst.max((lhs - rhs).norm() / rhs.norm());
            }
            for i in 0..19 {
                worst = worst.max(zint_identity_residual(-0.9 + 0.1 * i as f64)?);
            }
            Ok((worst < 1e-10, format!("worst residual {worst:e}")))
        },
    },
    Suite {
        name: "sheets",
        run: |_| {
            let r = enumerate_sheets(c(0.15, 0.0), 2)?;
            let n = r.distinct_zeta.len();
            Ok((n >= 5, format!("{n} distinct values at depth 2")))
        },
    },
    Suite {
        name: "torus_convergence",
        run: |_| {
            let rows = convergence_table(Family::Torus, c(0.1, 0.0), &[8, 16, 32])?;
            let ok = rows.windows(2).all(|w| w[1].error < w[0].error);
            Ok((
                ok,
                format!(
                    "errors {:e}, {:e}, {:e}",
                    rows[0].error, rows[1].error, rows[2].error
                ),
            ))
        },
    },
];

pub fn run_battery(inject_fault: bool) -> Result<Report> {
    let mut table = Table::new(&["suite", "passed", "detail"]);
    let mut js = Vec::new();
    let mut all = true;
    for s in SUITES {
        let (ok, detail) = match (s.run)(inject_fault) {
            Ok(r) => r,
            Err(e) => (false, e.to_string()),
        };
        all &= ok;
        table.push(vec![
            s.name.into(),
            ok.to_string().into(),
            Cell::Text(detail.clone()),
        ]);
        js.push(json!({"suite": s.name, "passed": ok, "detail": detail}));
    }
    let mut report = Report::new(
        json!({"command": "check", "fault_injected": inject_fault, "suites": js, "passed": all}),
        table,
    );
    report.passed = all;
    Ok(report)
}
