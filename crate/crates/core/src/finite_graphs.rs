//! Square grid and torus graphs, their Ihara zeta via the Bass determinant,
//! the finite functional equation, and normalized convergence toward the
//! grid's `Z`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{classify_u, log_zeta_principal, RegionTag, DEFAULT_BOUNDARY_TOL};

/// Matrices up to this many rows use dense LU with partial pivoting.
pub const DENSE_LIMIT: usize = 512;

/// A pivot below this multiple of the matrix scale is treated as zero.
pub const POLE_TOL: f64 = 1e-13;

/// Largest `|u|` for which the grid family is known to converge, `1/(4 + √22)`.
pub fn grid_radius() -> f64 {
    1.0 / (4.0 + 22f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Grid { n: usize, m: usize },
    Torus { n: usize, m: usize },
    General,
}

/// Undirected multigraph without loops, stored as sorted sparse rows of
/// `(neighbor, multiplicity)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    kind: GraphKind,
    adjacency: Vec<Vec<(usize, u32)>>,
    degrees: Vec<u32>,
    n_edges: usize,
}

impl FiniteGraph {
    /// Builds a graph from an edge list. Loops are rejected and every
    /// vertex must have positive degree.
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(GraphKind::General, n_vertices, edges)
    }

    fn build(kind: GraphKind, n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::Domain("graph needs at least one vertex".into()));
        }
        let mut rows: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n_vertices];
        let mut bump = |i: usize, j: usize| match rows[i].iter_mut().find(|(k, _)| *k == j) {
            Some(entry) => entry.1 += 1,
            None => rows[i].push((j, 1)),
        };
        for &(i, j) in edges {
            if i >= n_vertices || j >= n_vertices {
                return Err(Error::Domain(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::Domain(format!("loop at vertex {i}")));
            }
            bump(i, j);
            bump(j, i);
        }
        for r in rows.iter_mut() {
            r.sort_unstable();
        }
        let degrees: Vec<u32> = rows.iter().map(|r| r.iter().map(|e| e.1).sum()).collect();
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::Domain(format!("vertex {v} is isolated")));
        }
        Ok(FiniteGraph {
            kind,
            adjacency: rows,
            degrees,
            n_edges: edges.len(),
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n_vertices(&self) -> usize {
        self.degrees.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adjacency[v]
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<u32> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&x| x == d).then_some(d)
    }

    /// Largest `|i − j|` over edges.
    pub fn bandwidth(&self) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// One `"i j"` line per edge with `i < j`, repeated for multi-edges.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for &(j, mult) in row {
                if i < j {
                    for _ in 0..mult {
                        let _ = writeln!(out, "{i} {j}");
                    }
                }
            }
        }
        out
    }

    /// Checks symmetry, the degree vector and the handshake count.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.adjacency.iter().enumerate() {
            for &(j, mult) in row {
                let back = self.adjacency[j].iter().find(|e| e.0 == i).map(|e| e.1);
                if back != Some(mult) {
                    return Err(Error::Consistency(format!(
                        "adjacency not symmetric at ({i}, {j})"
                    )));
                }
            }
            let sum: u32 = row.iter().map(|e| e.1).sum();
            if sum != self.degrees[i] {
                return Err(Error::Consistency(format!("degree mismatch at {i}")));
            }
        }
        let total: u64 = self.degrees.iter().map(|&d| d as u64).sum();
        if total != 2 * self.n_edges as u64 {
            return Err(Error::Consistency("Σ degrees ≠ 2e".into()));
        }
        Ok(())
    }

    /// `e − v`, the exponent of `(1 − u²)` in the Bass formula.
    pub fn euler_excess(&self) -> i64 {
        self.n_edges as i64 - self.n_vertices() as i64
    }
}

/// `P_n × P_m`; vertex `(x, y)` has index `x + n·y`.
pub fn grid_graph(n: usize, m: usize) -> Result<FiniteGraph> {
    if n < 2 || m < 2 {
        return Err(Error::Domain(format!(
            "grid_graph needs n, m ≥ 2, got {n}×{m}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * n * m);
    for y in 0..m {
        for x in 0..n {
            let v = x + n * y;
            if x + 1 < n {
                edges.push((v, v + 1));
            }
            if y + 1 < m {
                edges.push((v, v + n));
            }
        }
    }
    FiniteGraph::build(GraphKind::Grid { n, m }, n * m, &edges)
}

/// `C_n × C_m`; vertex `(x, y)` has index `x + n·y`.
pub fn torus_graph(n: usize, m: usize) -> Result<FiniteGraph> {
    if n < 3 || m < 3 {
        return Err(Error::Domain(format!(
            "torus_graph needs n, m ≥ 3, got {n}×{m}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * n * m);
    for y in 0..m {
        for x in 0..n {
            let v = x + n * y;
            edges.push((v, (x + 1) % n + n * y));
            edges.push((v, x + n * ((y + 1) % m)));
        }
    }
    FiniteGraph::build(GraphKind::Torus { n, m }, n * m, &edges)
}

/// `log det` as a sum of principal logs of LU pivots.
#[derive(Debug, Clone, Copy)]
struct LogDet {
    log: Complex64,
    /// Smallest `|pivot|` seen.
    min_pivot: f64,
}

/// Bass matrix `I − Au + (Deg − I)u²` as dense rows.
fn bass_dense(g: &FiniteGraph, u: Complex64) -> Vec<Vec<Complex64>> {
    let n = g.n_vertices();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0 + u * u * (g.degrees[i] as f64 - 1.0);
        for &(j, mult) in &g.adjacency[i] {
            row[j] -= u * mult as f64;
        }
    }
    a
}

fn lu_dense_pivoting(mut a: Vec<Vec<Complex64>>) -> LogDet {
    let n = a.len();
    let mut log = Complex64::new(0.0, 0.0);
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .expect("non-empty column");
        if p != k {
            a.swap(p, k);
            log += Complex64::new(0.0, PI);
        }
        let pivot = a[k][k];
        min_pivot = min_pivot.min(pivot.norm());
        if pivot.norm() == 0.0 {
            return LogDet {
                log: Complex64::new(f64::NEG_INFINITY, 0.0),
                min_pivot: 0.0,
            };
        }
        log += pivot.ln();
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let l = row[k] / pivot;
            if l.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                row[j] -= l * pivot_row[j];
            }
        }
    }
    LogDet { log, min_pivot }
}

/// Pivots of the Bass matrix from banded LU without row exchanges.
fn bass_pivots_banded(g: &FiniteGraph, u: Complex64) -> Vec<Complex64> {
    let n = g.n_vertices();
    let b = g.bandwidth();
    let w = 2 * b + 1;
    // row i holds columns i − b ..= i + b at offsets 0 ..= 2b
    let mut a = vec![Complex64::new(0.0, 0.0); n * w];
    for i in 0..n {
        a[i * w + b] = 1.0 + u * u * (g.degrees[i] as f64 - 1.0);
        for &(j, mult) in &g.adjacency[i] {
            a[i * w + (j + b - i)] -= u * mult as f64;
        }
    }
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = a[k * w + b];
        pivots.push(pivot);
        if pivot.norm() == 0.0 {
            break;
        }
        for i in k + 1..(k + b + 1).min(n) {
            let l = a[i * w + (k + b - i)] / pivot;
            if l.norm() == 0.0 {
                continue;
            }
            for j in k + 1..=(k + b).min(n - 1) {
                let kj = a[k * w + (j + b - k)];
                a[i * w + (j + b - i)] -= l * kj;
            }
        }
    }
    pivots
}

fn log_det_any_branch(g: &FiniteGraph, u: Complex64) -> LogDet {
    if g.n_vertices() <= DENSE_LIMIT {
        return lu_dense_pivoting(bass_dense(g, u));
    }
    let pivots = bass_pivots_banded(g, u);
    LogDet {
        log: pivots.iter().map(|p| p.ln()).sum(),
        min_pivot: pivots.iter().fold(f64::INFINITY, |m, p| m.min(p.norm())),
    }
}

/// `det(I − Au + (Deg − I)u²)`.
pub fn bass_determinant(g: &FiniteGraph, u: Complex64) -> Complex64 {
    let ld = log_det_any_branch(g, u);
    if ld.min_pivot == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    ld.log.exp()
}

/// `ζ_G(u) = 1 / ((1 − u²)^{e−v} det(I − Au + (Deg − I)u²))`.
pub fn ihara_zeta_finite(g: &FiniteGraph, u: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let excess = g.euler_excess();
    let base = one - u * u;
    if base.norm() == 0.0 && excess > 0 {
        return Err(Error::Pole(format!("ζ_G has a pole at u = {u}")));
    }
    let ld = log_det_any_branch(g, u);
    let max_degree = g.degrees.iter().copied().max().unwrap_or(0) as f64;
    let scale = 1.0 + max_degree * (u.norm() + u.norm_sqr());
    if ld.min_pivot <= POLE_TOL * scale || !ld.log.re.is_finite() {
        return Err(Error::Pole(format!(
            "ζ_G: det(I − Au + (Deg − I)u²) vanishes at u = {u} (|det| = {:e})",
            ld.log.re.exp()
        )));
    }
    let log_base = if excess == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        base.ln() * excess as f64
    };
    let z = (-ld.log - log_base).exp();
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Precision(format!(
            "ζ_G overflows at u = {u}: log|ζ| = {}",
            -(ld.log + log_base).re
        )));
    }
    Ok(z)
}

/// Eigenvalues `2cos(2πj/n) + 2cos(2πl/m)` of the torus adjacency.
pub fn torus_eigenvalues(n: usize, m: usize) -> Vec<f64> {
    let cx: Vec<f64> = (0..n)
        .map(|j| 2.0 * (2.0 * PI * j as f64 / n as f64).cos())
        .collect();
    let cy: Vec<f64> = (0..m)
        .map(|l| 2.0 * (2.0 * PI * l as f64 / m as f64).cos())
        .collect();
    cy.iter()
        .flat_map(|b| cx.iter().map(move |a| a + b))
        .collect()
}

/// `Π (1 − λu + 3u²)` over the torus spectrum.
pub fn torus_determinant_eigen(n: usize, m: usize, u: Complex64) -> Complex64 {
    let c = 1.0 + u * u * 3.0;
    torus_eigenvalues(n, m).iter().map(|&l| c - u * l).product()
}

fn sum_principal_logs<I: Iterator<Item = Complex64>>(factors: I, what: &str) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, f) in factors.enumerate() {
        if f.re <= 0.0 {
            return Err(Error::Branch(format!(
                "{what}: factor {i} = {f} is not in the right half-plane"
            )));
        }
        acc += f.ln();
    }
    Ok(acc)
}

/// `log det` continued from `u = 0`, as a sum of principal logs of factors
/// that must all lie in the right half-plane.
pub fn continuous_log_det(g: &FiniteGraph, u: Complex64) -> Result<Complex64> {
    match g.kind {
        GraphKind::Torus { n, m } => {
            let c = 1.0 + u * u * 3.0;
            sum_principal_logs(
                torus_eigenvalues(n, m).into_iter().map(|l| c - u * l),
                "torus eigenvalue factor",
            )
        }
        _ => sum_principal_logs(bass_pivots_banded(g, u).into_iter(), "LU pivot"),
    }
}

/// `u`, `ζ_G(u)` and `(log ζ_G)/v` on the branch continued from `u = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaEvaluation {
    pub u: Complex64,
    pub zeta: Complex64,
    pub log_zeta_per_vertex: Complex64,
}

fn check_family_domain(g: &FiniteGraph, u: Complex64) -> Result<()> {
    match g.kind {
        GraphKind::Torus { .. } => match classify_u(u, DEFAULT_BOUNDARY_TOL) {
            RegionTag::InOmega => Ok(()),
            tag => Err(Error::Domain(format!(
                "torus family needs u ∈ Ω; u = {u} is {tag:?}"
            ))),
        },
        GraphKind::Grid { .. } if u.norm() >= grid_radius() => Err(Error::Domain(format!(
            "grid family needs |u| < 1/(4 + √22) ≈ {:.6}; |u| = {}",
            grid_radius(),
            u.norm()
        ))),
        _ => Ok(()),
    }
}

pub fn normalized_log_zeta(g: &FiniteGraph, u: Complex64) -> Result<ZetaEvaluation> {
    check_family_domain(g, u)?;
    let zero = Complex64::new(0.0, 0.0);
    if u == zero {
        return Ok(ZetaEvaluation {
            u,
            zeta: Complex64::new(1.0, 0.0),
            log_zeta_per_vertex: zero,
        });
    }
    let log_base = (1.0 - u * u).ln();
    if log_base.re.is_infinite() {
        return Err(Error::Pole(format!("u = {u}")));
    }
    let log_zeta = -log_base * g.euler_excess() as f64 - continuous_log_det(g, u)?;
    Ok(ZetaEvaluation {
        u,
        zeta: log_zeta.exp(),
        log_zeta_per_vertex: log_zeta / g.n_vertices() as f64,
    })
}

/// Relative residual of
/// `ζ(1/(qu)) = q^{2e−v} u^{2e} ((1 − u²)/(q²u² − 1))^{e−v} ζ(u)` with
/// `q = 3`, compared in log form so large graphs do not overflow.
pub fn finite_functional_equation_residual(g: &FiniteGraph, u: Complex64) -> Result<f64> {
    if g.regular_degree() != Some(4) {
        return Err(Error::Domain(
            "functional equation needs a 4-regular graph".into(),
        ));
    }
    let one = Complex64::new(1.0, 0.0);
    if u.norm() == 0.0 {
        return Err(Error::Domain("functional equation needs u ≠ 0".into()));
    }
    let v = g.n_vertices() as f64;
    let e = g.n_edges() as f64;
    let w = (u * 3.0).inv();
    let mut logs = [Complex64::new(0.0, 0.0); 2];
    for (slot, x) in logs.iter_mut().zip([u, w]) {
        let ld = log_det_any_branch(g, x);
        let log_abs_det = ld.log.re;
        if ld.min_pivot == 0.0 || log_abs_det < (1e-12f64).ln() {
            return Err(Error::Conditioning(format!(
                "|det| = {:e} at u = {x}: too close to a pole",
                log_abs_det.exp()
            )));
        }
        let base = one - x * x;
        if base.norm() < 1e-12 {
            return Err(Error::Conditioning(format!(
                "u = {x} is at the pole u² = 1"
            )));
        }
        *slot = -(base.ln() * (e - v)) - ld.log;
    }
    let [log_zu, log_zw] = logs;
    let nine_u2 = u * u * 9.0;
    if (nine_u2 - 1.0).norm() < 1e-12 {
        return Err(Error::Conditioning(format!("9u² = 1 at u = {u}")));
    }
    let log_factor = Complex64::new((2.0 * e - v) * 3f64.ln(), 0.0)
        + u.ln() * (2.0 * e)
        + ((one - u * u) / (nine_u2 - 1.0)).ln() * (e - v);
    Ok(((log_zw - log_factor - log_zu).exp() - 1.0).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Grid,
    Torus,
}

impl Family {
    pub fn graph(&self, size: usize) -> Result<FiniteGraph> {
        match self {
            Family::Grid => grid_graph(size, size),
            Family::Torus => torus_graph(size, size),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Family::Grid),
            "torus" => Ok(Family::Torus),
            other => Err(Error::Domain(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub size: usize,
    /// `|normalized_log_zeta − log Z|`.
    pub error: f64,
    /// The same difference taken directly in floating point.
    pub direct_error: f64,
}

/// Exact remainder `normalized_log_zeta(C_n×C_m) − log Z` as a series over
/// closed walks of ℤ² that wrap around the torus:
/// `Σ_k w^k/k · #{walks of length k from 0 to (an, bm), (a, b) ≠ 0}`
/// with `w = u/(1 + 3u²)`. Every term is positive for real `u > 0`, so the
/// sum stays accurate far below the rounding level of either value.
/// `None` when `4|w| ≥ 1` and the series does not converge.
pub fn torus_wrap_remainder(n: usize, m: usize, u: Complex64) -> Option<Complex64> {
    let w = u / (1.0 + u * u * 3.0);
    let ratio = 4.0 * w.norm();
    if ratio >= 1.0 || u.norm() == 0.0 {
        return if u.norm() == 0.0 {
            Some(Complex64::new(0.0, 0.0))
        } else {
            None
        };
    }
    let kmin = n.min(m);
    // ln k! for binomials
    let mut ln_fact = vec![0.0f64];
    let ln_binom = |lf: &Vec<f64>, k: usize, j: usize| lf[k] - lf[j] - lf[k - j];
    let mut total = Complex64::new(0.0, 0.0);
    let mut k = kmin;
    let ln_w = w.ln();
    loop {
        while ln_fact.len() <= k {
            let i = ln_fact.len();
            ln_fact.push(ln_fact[i - 1] + (i as f64).ln());
        }
        // walks 0 → (x, y) of length k: C(k, (k+x+y)/2)·C(k, (k+x−y)/2)
        let mut count_scaled = 0.0f64;
        let amax = (k / n) as i64;
        for a in -amax..=amax {
            let x = a * n as i64;
            let rest = k as i64 - x.abs();
            let bmax = rest / m as i64;
            for b in -bmax..=bmax {
                if a == 0 && b == 0 {
                    continue;
                }
                let y = b * m as i64;
                let s = k as i64 + x + y;
                let d = k as i64 + x - y;
                if s.rem_euclid(2) != 0 || s < 0 || d < 0 || s > 2 * k as i64 || d > 2 * k as i64 {
                    continue;
                }
                let lb = ln_binom(&ln_fact, k, (s / 2) as usize)
                    + ln_binom(&ln_fact, k, (d / 2) as usize);
                count_scaled += (lb - k as f64 * 4f64.ln()).exp();
            }
        }
        // 4^k·w^k/k times the scaled count
        let term = (ln_w * k as f64 + Complex64::new(k as f64 * 4f64.ln(), 0.0)).exp()
            * (count_scaled / k as f64);
        total += term;
        let bound = ratio.powi(k as i32 + 1) / (1.0 - ratio) / (k as f64 + 1.0);
        if k > kmin + 4 && bound <= 1e-17 * total.norm() {
            break;
        }
        if k > kmin + 4000 {
            break;
        }
        k += 1;
    }
    Some(total)
}

/// `(size, |normalized_log_zeta(G_size) − log Z(u)|)` for square members of
/// a family.
pub fn convergence_table(
    family: Family,
    u: Complex64,
    sizes: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if sizes.is_empty() {
        return Err(Error::Domain(
            "convergence_table needs at least one size".into(),
        ));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("sizes must be strictly increasing".into()));
    }
    let target = log_zeta_principal(u)?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let g = family.graph(size)?;
        let eval = normalized_log_zeta(&g, u)?;
        let direct_error = (eval.log_zeta_per_vertex - target).norm();
        let error = match family {
            Family::Torus => torus_wrap_remainder(size, size, u)
                .map(|r| r.norm())
                .unwrap_or(direct_error),
            Family::Grid => direct_error,
        };
        rows.push(ConvergenceRow {
            size,
            error,
            direct_error,
        });
    }
    Ok(rows)
}

/// CSV with a `size,error` header.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("size,error\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.16e}", r.size, r.error);
    }
    out
}
