//! Complete elliptic integral, theta constants and the maps between the
//! grid variable `u`, the modulus `k` and the half-nome `t`.
//!
//! Conventions: `q = exp(iπτ)` is the nome and `t = exp(iπτ/2)`, so `q = t²`.
//! `θ₂²` is always treated as a function of `t`, where it is single valued.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::surface::{classify_u, RegionTag, DEFAULT_BOUNDARY_TOL};

/// Largest `|t|` accepted by the numeric theta-side routines.
pub const T_MAX: f64 = 0.95;

/// Iteration budget for the AGM; quadratic convergence needs far fewer.
const AGM_MAX_ITER: usize = 64;

/// `|4 − 3k²|` below this is treated as a branch point of the `u ↔ k` double cover.
pub const BRANCH_POINT_GUARD: f64 = 1e-8;

/// Stopping rule for theta-constant series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    /// Relative to the magnitude of the running sum.
    pub tail_tolerance: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 256,
            tail_tolerance: 1e-17,
        }
    }
}

fn ensure_finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what}: non-finite value {z}")))
    }
}

/// Arithmetic–geometric mean with the "right" square root at every step
/// (`|a' − b'| ≤ |a' + b'|`), which is the principal branch when
/// `Re(b/a) > 0`.
pub fn agm(a: Complex64, b: Complex64) -> Result<Complex64> {
    ensure_finite(a, "agm")?;
    ensure_finite(b, "agm")?;
    if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("agm: arguments must be nonzero".into()));
    }
    let ratio = a / b;
    if ratio.im.abs() <= 1e-15 * ratio.norm() && ratio.re < 0.0 {
        return Err(Error::Domain(format!(
            "agm: a/b = {ratio} is a negative real number"
        )));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_ITER {
        if (a - b).norm() <= 4.0 * f64::EPSILON * a.norm() {
            return Ok((a + b) * 0.5);
        }
        let mean = (a + b) * 0.5;
        let mut geo = (a * b).sqrt();
        let diff = (mean - geo).norm();
        let sum = (mean + geo).norm();
        if diff > sum || (diff == sum && (geo / mean).im < 0.0) {
            geo = -geo;
        }
        a = mean;
        b = geo;
    }
    Err(Error::IterationLimit(format!(
        "agm did not converge in {AGM_MAX_ITER} steps"
    )))
}

/// Complete elliptic integral of the first kind, principal branch,
/// `K(k) = π / (2·agm(1, √(1 − k²)))`.
pub fn elliptic_k(k: Complex64) -> Result<Complex64> {
    ensure_finite(k, "elliptic_k")?;
    let m = k * k;
    if (m - 1.0).norm() <= 1e-15 {
        return Err(Error::Pole(format!("elliptic_k: k = {k} is ±1")));
    }
    if m.im.abs() <= 1e-15 * m.norm() && m.re > 1.0 {
        return Err(Error::BranchCut(format!(
            "elliptic_k: k² = {m} lies on the cut [1, ∞)"
        )));
    }
    let kp = (Complex64::new(1.0, 0.0) - m).sqrt();
    let mean = agm(Complex64::new(1.0, 0.0), kp)?;
    ensure_finite(Complex64::new(PI / 2.0, 0.0) / mean, "elliptic_k")
}

/// The complementary integral `K(√(1−k²))` as an analytic function on
/// `Re k ≥ 0`, evaluated as `π / (2·agm(1, k))`. Unlike composing
/// [`elliptic_k`] with a principal square root, this stays finite for
/// purely imaginary `k`, where `1 − k² > 1`.
fn complementary_k(k: Complex64) -> Result<Complex64> {
    debug_assert!(k.re >= 0.0);
    let mean = agm(Complex64::new(1.0, 0.0), k)?;
    Ok(Complex64::new(PI / 2.0, 0.0) / mean)
}

fn check_nome(q: Complex64, limit: f64, what: &str) -> Result<()> {
    ensure_finite(q, what)?;
    let r = q.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("{what}: |{q}| ≥ 1")));
    }
    if r > limit {
        return Err(Error::Precision(format!(
            "{what}: |{q}| = {r} exceeds the supported radius {limit}"
        )));
    }
    Ok(())
}

/// Sums `1 + 2·Σ_{n≥1} sign(n)·q^{n²}`.
fn theta_sum(q: Complex64, policy: TruncationPolicy, alternating: bool) -> Result<Complex64> {
    let mut sum = Complex64::new(1.0, 0.0);
    if q == Complex64::new(0.0, 0.0) {
        return Ok(sum);
    }
    // q^{n²} and q^{2n+1}
    let mut power = q;
    let mut step = q * q * q;
    let mut prev = f64::INFINITY;
    for n in 1..=policy.max_terms {
        let sign = if alternating && n % 2 == 1 { -2.0 } else { 2.0 };
        let term = power * sign;
        sum += term;
        let mag = term.norm();
        if mag < policy.tail_tolerance * sum.norm() && mag < prev {
            return Ok(sum);
        }
        prev = mag;
        power *= step;
        step *= q * q;
    }
    Err(Error::Precision(format!(
        "theta series at q = {q} not resolved in {} terms",
        policy.max_terms
    )))
}

/// `θ₃(q) = Σ_{n∈ℤ} q^{n²}`.
pub fn theta3(q: Complex64, policy: TruncationPolicy) -> Result<Complex64> {
    check_nome(q, T_MAX * T_MAX, "theta3")?;
    theta_sum(q, policy, false)
}

/// `θ₄(q) = Σ_{n∈ℤ} (−1)ⁿ q^{n²}`.
pub fn theta4(q: Complex64, policy: TruncationPolicy) -> Result<Complex64> {
    check_nome(q, T_MAX * T_MAX, "theta4")?;
    theta_sum(q, policy, true)
}

/// `θ₂²` as an analytic function of `t`:
/// `θ₂² = 4t·(Σ_{n≥0} t^{2n(n+1)})²`.
pub fn theta2_sq(t: Complex64, policy: TruncationPolicy) -> Result<Complex64> {
    check_nome(t, T_MAX, "theta2_sq")?;
    if t == Complex64::new(0.0, 0.0) {
        return Ok(t);
    }
    let q = t * t;
    let q2 = q * q;
    let mut sum = Complex64::new(1.0, 0.0);
    // q^{n(n+1)} and q^{2(n+1)}
    let mut power = Complex64::new(1.0, 0.0);
    let mut step = q2;
    let mut prev = f64::INFINITY;
    let mut resolved = false;
    for _ in 1..=policy.max_terms {
        power *= step;
        step *= q2;
        sum += power;
        let mag = power.norm();
        if mag < policy.tail_tolerance * sum.norm() && mag < prev {
            resolved = true;
            break;
        }
        prev = mag;
    }
    if !resolved {
        return Err(Error::Precision(format!(
            "theta2 series at t = {t} not resolved in {} terms",
            policy.max_terms
        )));
    }
    Ok(t * 4.0 * sum * sum)
}

/// `k = 4u / (1 + 3u²)`.
pub fn modulus_from_u(u: Complex64) -> Result<Complex64> {
    ensure_finite(u, "modulus_from_u")?;
    let den = Complex64::new(1.0, 0.0) + u * u * 3.0;
    if den.norm() <= 1e-15 {
        return Err(Error::Pole(format!("modulus_from_u: u = {u} is ±i/√3")));
    }
    Ok(u * 4.0 / den)
}

/// `k = θ₂²(t) / θ₃²(t²)`.
pub fn modulus_from_t(t: Complex64) -> Result<Complex64> {
    let policy = TruncationPolicy::default();
    if t == Complex64::new(0.0, 0.0) {
        check_nome(t, T_MAX, "modulus_from_t")?;
        return Ok(t);
    }
    let num = theta2_sq(t, policy)?;
    let th3 = theta3(t * t, policy)?;
    ensure_finite(num / (th3 * th3), "modulus_from_t")
}

/// Principal lift `u ↦ t` for `u ∈ Ω`:
/// `k = 4u/(1+3u²)`, `τ = i·K'(k)/K(k)`, `t = exp(iπτ/2)`.
///
/// `K'` is taken on the half plane `Re k ≥ 0` and `t` is extended to
/// `Re k < 0` by `t(−k) = −t(k)`, which keeps `k(t(u)) = k(u)` on all of Ω.
pub fn nome_t_from_u(u: Complex64) -> Result<Complex64> {
    ensure_finite(u, "nome_t_from_u")?;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(u);
    }
    match classify_u(u, DEFAULT_BOUNDARY_TOL) {
        RegionTag::InOmega => {}
        tag => {
            return Err(Error::Domain(format!(
                "nome_t_from_u: u = {u} is {tag:?}, not in Ω; use deck words to reach other sheets"
            )))
        }
    }
    nome_t_principal(u)
}

/// The same formula for any `u` off the cuts of `K` and `K'`, with no
/// check that `u` lies in Ω. Outside Ω the result jumps across the images
/// of the cuts; it is a section of the surface, not a continuation.
pub fn nome_t_principal(u: Complex64) -> Result<Complex64> {
    ensure_finite(u, "nome_t_principal")?;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(u);
    }
    let k = modulus_from_u(u)?;
    let (kk, sign) = if k.re < 0.0 { (-k, -1.0) } else { (k, 1.0) };
    let big_k = elliptic_k(kk)?;
    let big_kp = complementary_k(kk)?;
    let t = (-big_kp / big_k * (PI / 2.0)).exp() * sign;
    if t.norm() > T_MAX {
        return Err(Error::Precision(format!(
            "nome_t_from_u: |t| = {} exceeds {T_MAX} at u = {u}",
            t.norm()
        )));
    }
    ensure_finite(t, "nome_t_from_u")
}

/// The two solutions `u± = (2 ± √(4 − 3k²)) / (3k)` of `4u/(1+3u²) = k(t)`,
/// returned as `(u₊, u₋)`. `u₋ → 0` as `t → 0`.
pub fn u_pair_from_t(t: Complex64) -> Result<(Complex64, Complex64)> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "u_pair_from_t: t = 0 lies over the single point u = 0".into(),
        ));
    }
    let k = modulus_from_t(t)?;
    u_pair_from_modulus(k)
}

pub(crate) fn u_pair_from_modulus(k: Complex64) -> Result<(Complex64, Complex64)> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("u_pair: k = 0".into()));
    }
    let disc = Complex64::new(4.0, 0.0) - k * k * 3.0;
    if disc.norm() < BRANCH_POINT_GUARD {
        return Err(Error::BranchPoint(format!(
            "u_pair: k = {k} is within {BRANCH_POINT_GUARD} of ±2/√3"
        )));
    }
    let s = disc.sqrt();
    let two_plus = s + 2.0;
    // k/(2+s) avoids cancellation in (2 − s)/(3k) near k = 0.
    let u_minus = k / two_plus;
    let u_plus = two_plus / (k * 3.0);
    Ok((u_plus, u_minus))
}
