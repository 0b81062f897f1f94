use std::f64::consts::PI;

use gridzeta::exact_series::{
    det_series, format_rational, geodesic_counts_from_series, trlog_series, zeta_series,
    DEFAULT_ORDER,
};
use gridzeta::finite_graphs::{convergence_table, Family};
use gridzeta::oracles::{
    closed_walk_count_dp, geodesic_count_dp, primitive_class_count, primitive_classes,
    zeta_via_quadrature_with, QuadratureSpec,
};
use gridzeta::special_functions::{modulus_from_u, nome_t_from_u, nome_t_principal, u_pair_from_t};
use gridzeta::surface::{
    classify_u, enumerate_sheets, functional_equation_residual, lift_principal, zeta_tilde,
    DEFAULT_BOUNDARY_TOL,
};
use gridzeta::{Complex64, Error, RegionTag, Result, SurfacePoint};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{cells, jc, jnum, Cell, Report, Table};
use crate::{FamilyArg, PlotKind, Route};

fn region_name(tag: RegionTag) -> String {
    serde_json::to_value(tag)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Number of u² steps kept for a requested u-degree.
fn half_order(order: usize) -> usize {
    order.div_ceil(2)
}

pub fn eval(u: Complex64, route: Route, tol: f64, order: Option<usize>) -> Result<Report> {
    let region = classify_u(u, DEFAULT_BOUNDARY_TOL);
    let k = modulus_from_u(u).ok();
    let t = nome_t_from_u(u).ok();
    let (z, route_name) = match route {
        Route::Theta => (zeta_tilde(&lift_principal(u)?)?, "theta"),
        Route::Quadrature => {
            let spec = QuadratureSpec::new(tol, tol, 2000)?;
            (zeta_via_quadrature_with(u, spec)?, "quadrature")
        }
        Route::Series => {
            if u.norm() >= 1.0 / 3.0 {
                return Err(Error::Domain(format!(
                    "series route needs |u| < 1/3, got |u| = {}",
                    u.norm()
                )));
            }
            let m = half_order(order.unwrap_or(DEFAULT_ORDER)).max(1);
            (zeta_series(m).eval(u), "series")
        }
    };
    let opt = |x: Option<Complex64>| x.map(jc).unwrap_or(Value::Null);
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let json = json!({
        "command": "eval",
        "route": route_name,
        "u": jc(u),
        "region": region_name(region),
        "k": opt(k),
        "t": opt(t),
        "z": jc(z),
    });
    let mut table = Table::new(&[
        "u_re", "u_im", "route", "region", "k_re", "k_im", "t_re", "t_im", "z_re", "z_im",
    ]);
    let mut row: Vec<Cell> = cells(u).into();
    row.push(route_name.into());
    row.push(region_name(region).into());
    row.extend(cells(k.unwrap_or(nan)));
    row.extend(cells(t.unwrap_or(nan)));
    row.extend(cells(z));
    table.push(row);
    Ok(Report::new(json, table))
}

pub fn series(order: usize) -> Result<Report> {
    let m = half_order(order);
    let trlog = trlog_series(m.max(1));
    let det = det_series(m.max(1));
    let zeta = zeta_series(m.max(1));
    let mut table = Table::new(&["power", "trlog", "det", "zeta"]);
    let (mut jt, mut jd, mut jz) = (Vec::new(), Vec::new(), Vec::new());
    for p in (0..=2 * m).step_by(2) {
        let (a, b, c) = (
            format_rational(&trlog.coeff(p)),
            format_rational(&det.coeff(p)),
            format_rational(&zeta.coeff(p)),
        );
        table.push(vec![
            Cell::Text(p.to_string()),
            a.clone().into(),
            b.clone().into(),
            c.clone().into(),
        ]);
        jt.push(a);
        jd.push(b);
        jz.push(c);
    }
    let json = json!({
        "command": "series",
        "order": 2 * m,
        "powers": (0..=2 * m).step_by(2).collect::<Vec<_>>(),
        "trlog": jt,
        "det": jd,
        "zeta": jz,
    });
    Ok(Report::new(json, table))
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parsed: Vec<f64> = parts.iter().filter_map(|p| p.parse().ok()).collect();
    match parsed.as_slice() {
        [a, b] if parts.len() == 2 && a < b => Ok((*a, *b)),
        _ => Err(Error::Domain(format!(
            "range {s:?} must be `a,b` with a < b"
        ))),
    }
}

/// `n` points from `a` to `b`, mirrored exactly when `a = −b`.
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    let d = (n - 1) as f64;
    (0..n)
        .map(|i| a * ((n - 1 - i) as f64 / d) + b * (i as f64 / d))
        .collect()
}

pub fn plot(
    kind: PlotKind,
    samples: Option<usize>,
    range: Option<&str>,
    radius: f64,
    extent: f64,
) -> Result<Report> {
    let mut rows_json = Vec::new();
    let (name, table) = match kind {
        PlotKind::RealZeta => {
            let (a, b) = parse_range(range.unwrap_or("-0.33,0.33"))?;
            if a <= -1.0 / 3.0 || b >= 1.0 / 3.0 {
                return Err(Error::Domain(format!(
                    "real_zeta range [{a}, {b}] must lie in (−1/3, 1/3)"
                )));
            }
            let n = samples.unwrap_or(201).max(1);
            let mut table = Table::new(&["u", "Z"]);
            for u in linspace(a, b, n) {
                let z = zeta_tilde(&lift_principal(Complex64::new(u, 0.0))?)?;
                table.push(vec![u.into(), z.re.into()]);
                rows_json.push(json!({"u": jnum(u), "z": jnum(z.re)}));
            }
            ("real_zeta", table)
        }
        PlotKind::SheetsAbs => {
            if !(radius > 0.0 && radius <= gridzeta::special_functions::T_MAX) {
                return Err(Error::Domain(format!(
                    "sheets_abs radius must lie in (0, {}]",
                    gridzeta::special_functions::T_MAX
                )));
            }
            let n = samples.unwrap_or(24).max(1);
            let mut table = Table::new(&["t_re", "t_im", "u_re", "u_im", "absZ"]);
            for i in 1..=n {
                let r = radius * i as f64 / n as f64;
                for j in 0..n {
                    let t = Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64);
                    let Ok((u_plus, u_minus)) = u_pair_from_t(t) else {
                        continue;
                    };
                    for u in [u_plus, u_minus] {
                        let Ok(z) = SurfacePoint::new(u, t).and_then(|p| zeta_tilde(&p)) else {
                            continue;
                        };
                        let mut row: Vec<Cell> = cells(t).into();
                        row.extend(cells(u));
                        row.push(z.norm().into());
                        table.push(row);
                        rows_json.push(json!({"t": jc(t), "u": jc(u), "abs_z": jnum(z.norm())}));
                    }
                }
            }
            ("sheets_abs", table)
        }
        PlotKind::ImagBranchcut => {
            if !(extent > 0.0 && extent.is_finite()) {
                return Err(Error::Domain("extent must be positive".into()));
            }
            let n = samples.unwrap_or(101).max(2);
            let axis = linspace(-extent, extent, n);
            let mut table = Table::new(&["u_re", "u_im", "im_z"]);
            for &y in &axis {
                for &x in &axis {
                    let u = Complex64::new(x, y);
                    let z = nome_t_principal(u)
                        .and_then(|t| SurfacePoint::new(u, t))
                        .and_then(|p| zeta_tilde(&p));
                    if let Ok(z) = z {
                        table.push(vec![x.into(), y.into(), z.im.into()]);
                        rows_json.push(json!({"u": jc(u), "im_z": jnum(z.im)}));
                    }
                }
            }
            ("imag_branchcut", table)
        }
    };
    Ok(Report::new(
        json!({"command": "plot", "kind": name, "rows": rows_json}),
        table,
    ))
}

pub fn sheets(u: Complex64, depth: usize) -> Result<Report> {
    let report = enumerate_sheets(u, depth)?;
    let mut table = Table::new(&[
        "word",
        "t_re",
        "t_im",
        "z_re",
        "z_im",
        "relation_residual",
        "functional_equation_residual",
    ]);
    let mut js = Vec::new();
    for s in &report.sheets {
        let rel = s.point.relation_residual()?;
        let fe = if s.point.is_origin() {
            f64::NAN
        } else {
            functional_equation_residual(&s.point)?
        };
        let mut row: Vec<Cell> = vec![s.word.to_string().into()];
        row.extend(cells(s.point.t()));
        row.extend(cells(s.zeta));
        row.push(rel.into());
        row.push(fe.into());
        table.push(row);
        js.push(json!({
            "word": s.word.to_string(),
            "t": jc(s.point.t()),
            "z": jc(s.zeta),
            "relation_residual": jnum(rel),
            "functional_equation_residual": jnum(fe),
        }));
    }
    let skipped: Vec<Value> = report
        .skipped
        .iter()
        .map(|(w, why)| json!({"word": w.to_string(), "reason": why}))
        .collect();
    let json = json!({
        "command": "sheets",
        "u": jc(u),
        "depth": depth,
        "distinct_count": report.distinct_zeta.len(),
        "distinct_z": report.distinct_zeta.iter().map(|z| jc(*z)).collect::<Vec<_>>(),
        "sheets": js,
        "skipped": skipped,
    });
    Ok(Report::new(json, table))
}

pub fn converge(family: FamilyArg, u: Complex64, sizes: &[usize]) -> Result<Report> {
    let fam = match family {
        FamilyArg::Grid => Family::Grid,
        FamilyArg::Torus => Family::Torus,
    };
    let rows = convergence_table(fam, u, sizes)?;
    let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    let mut table = Table::new(&["size", "error"]);
    for r in &rows {
        table.push(vec![Cell::Text(r.size.to_string()), r.error.into()]);
    }
    let json = json!({
        "command": "converge",
        "family": fam,
        "u": jc(u),
        "rows": rows.iter().map(|r| json!({
            "size": r.size,
            "error": jnum(r.error),
            "direct_error": jnum(r.direct_error),
        })).collect::<Vec<_>>(),
        "decreasing": decreasing,
    });
    let mut report = Report::new(json, table);
    report.passed = decreasing;
    Ok(report)
}

const DIRECTION_LETTERS: [char; 4] = ['E', 'N', 'W', 'S'];

/// Longest length for which primitive classes are enumerated.
pub const MAX_CLASS_LENGTH: usize = 16;

pub fn walks(max_length: usize, classes: Option<usize>) -> Result<Report> {
    if max_length == 0 || max_length > MAX_CLASS_LENGTH {
        return Err(Error::Domain(format!(
            "--max-length must lie in 1..={MAX_CLASS_LENGTH}"
        )));
    }
    let series = geodesic_counts_from_series(max_length)?;
    let mut oriented = vec![0u64; max_length + 1];
    for (l, slot) in oriented.iter_mut().enumerate().skip(1) {
        *slot = primitive_class_count(l, true);
    }
    let mut table = Table::new(&[
        "m",
        "closed_walks",
        "geodesics_dp",
        "geodesics_series",
        "primitive_oriented",
        "primitive_unoriented",
        "consistent",
    ]);
    let mut js = Vec::new();
    let mut all_ok = true;
    for (m, n_series) in series {
        let closed = if m % 2 == 0 {
            closed_walk_count_dp(m / 2).to_string()
        } else {
            "0".to_string()
        };
        let dp = BigInt::from(geodesic_count_dp(m));
        let from_classes: u64 = (1..=m)
            .filter(|l| m % l == 0)
            .map(|l| l as u64 * oriented[l])
            .sum();
        let ok = dp == n_series && dp == BigInt::from(from_classes);
        all_ok &= ok;
        let unoriented = primitive_class_count(m, false);
        table.push(vec![
            Cell::Text(m.to_string()),
            closed.clone().into(),
            dp.to_string().into(),
            n_series.to_string().into(),
            oriented[m].to_string().into(),
            unoriented.to_string().into(),
            ok.to_string().into(),
        ]);
        js.push(json!({
            "m": m,
            "closed_walks": closed,
            "geodesics_dp": dp.to_string(),
            "geodesics_series": n_series.to_string(),
            "primitive_oriented": oriented[m],
            "primitive_unoriented": unoriented,
            "consistent": ok,
        }));
    }
    let mut json =
        json!({"command": "walks", "max_length": max_length, "rows": js, "consistent": all_ok});
    if let Some(l) = classes {
        if l == 0 || l > MAX_CLASS_LENGTH {
            return Err(Error::Domain(format!(
                "--classes must lie in 1..={MAX_CLASS_LENGTH}"
            )));
        }
        let words: Vec<String> = primitive_classes(l, false)
            .iter()
            .map(|w| w.iter().map(|&d| DIRECTION_LETTERS[d]).collect())
            .collect();
        json["classes"] = json!({"length": l, "unoriented": words});
    }
    let mut report = Report::new(json, table);
    report.passed = all_ok;
    Ok(report)
}
