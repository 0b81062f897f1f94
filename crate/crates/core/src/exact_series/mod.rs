//! Exact rational power series for the grid: the combinatorial expansion of
//! `Tr log Δ_u`, the determinant and zeta series built from it, and the
//! theta-side series (`θ` constants, `F(t)`, `t(u)`) whose composition must
//! reproduce the same zeta coefficients.

mod series;

pub use series::{format_rational, parse_rational, ExactSeries};

use num_bigint::BigInt;
use num_integer::Integer;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default working order used by the CLI and the surface module's tables.
pub const DEFAULT_ORDER: usize = 32;

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Tr (a + a⁻¹ + b + b⁻¹)^{2k} = C(2k, k)²`, the number of closed walks of
/// length `2k` at the origin of ℤ².
pub fn closed_walk_moment(k: u64) -> BigInt {
    let c = binomial(2 * k, k);
    &c * &c
}

/// Series of `Tr log Δ_u` through `u^{2·max_m}`; the coefficient of `u^{2M}`
/// is `−Σ_{k=0}^{M} (−3)^{M−k}/(M+k) · C(M+k, 2k) · C(2k, k)²`.
pub fn trlog_series(max_m: usize) -> ExactSeries {
    let order = 2 * max_m;
    let mut s = ExactSeries::zero("u", order);
    for m in 1..=max_m as u64 {
        let mut acc = BigRational::zero();
        for k in 0..=m {
            let sign_pow = BigInt::from(-3).pow((m - k) as u32);
            let num = sign_pow * binomial(m + k, 2 * k) * closed_walk_moment(k);
            acc += BigRational::new(num, BigInt::from(m + k));
        }
        s.set_coeff(2 * m as usize, -acc);
    }
    s
}

/// `det Δ_u = exp(Tr log Δ_u)`.
pub fn det_series(max_m: usize) -> ExactSeries {
    trlog_series(max_m)
        .exp()
        .expect("trace-log series has zero constant term")
}

/// `Z(u) = exp(−Tr log Δ_u) / (1 − u²)`.
pub fn zeta_series(max_m: usize) -> ExactSeries {
    let order = 2 * max_m;
    let inv_det = trlog_series(max_m)
        .neg()
        .exp()
        .expect("trace-log series has zero constant term");
    inv_det.mul(&one_over_one_minus_sq("u", order))
}

fn one_over_one_minus_sq(var: &str, order: usize) -> ExactSeries {
    let mut s = ExactSeries::zero(var, order);
    for i in (0..=order).step_by(2) {
        s.set_coeff(i, BigRational::one());
    }
    s
}

/// Theta constants as exact integer series.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSeries {
    /// `θ₂²/(4t) = (Σ_{n≥0} t^{2n(n+1)})²`, in `t`.
    pub theta2_sq_over_4t: ExactSeries,
    /// `θ₃ = Σ q^{n²}`, in `q`.
    pub theta3: ExactSeries,
    /// `θ₄ = Σ (−1)ⁿ q^{n²}`, in `q`.
    pub theta4: ExactSeries,
}

fn theta_int(order: usize, alternating: bool) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    let mut n = 1usize;
    while n * n <= order {
        let v = if alternating && n % 2 == 1 { -2 } else { 2 };
        c[n * n] = BigInt::from(v);
        n += 1;
    }
    c
}

fn theta2_half_int(order: usize) -> Vec<BigInt> {
    // Σ_{n≥0} t^{2n(n+1)}
    let mut c = vec![BigInt::zero(); order + 1];
    let mut n = 0usize;
    while 2 * n * (n + 1) <= order {
        c[2 * n * (n + 1)] = BigInt::one();
        n += 1;
    }
    c
}

fn int_mul(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn to_series(var: &str, c: Vec<BigInt>) -> ExactSeries {
    ExactSeries::from_coeffs(var, c.into_iter().map(BigRational::from_integer).collect())
}

/// `θ₂²/(4t)` in `t`, and `θ₃`, `θ₄` in `q`, each through `order`.
pub fn theta_series_exact(order: usize) -> ThetaSeries {
    let half = theta2_half_int(order);
    ThetaSeries {
        theta2_sq_over_4t: to_series("t", int_mul(&half, &half, order)),
        theta3: to_series("q", theta_int(order, false)),
        theta4: to_series("q", theta_int(order, true)),
    }
}

/// Integer coefficients of `θ₃²θ₄⁴` in `q` through `q^{q_order}`.
pub fn theta3_sq_theta4_4th(q_order: usize) -> Vec<BigInt> {
    let t3 = theta_int(q_order, false);
    let t4 = theta_int(q_order, true);
    let t3sq = int_mul(&t3, &t3, q_order);
    let t4sq = int_mul(&t4, &t4, q_order);
    let t4_4 = int_mul(&t4sq, &t4sq, q_order);
    int_mul(&t3sq, &t4_4, q_order)
}

/// `f(t) = (1 − θ₃²θ₄⁴)/t` with `q = t²` through `t^order`, and its
/// primitive `F` with `F(0) = 0` through `t^{order+1}`.
#[allow(non_snake_case)]
pub fn f_and_F_series(order: usize) -> (ExactSeries, ExactSeries) {
    let product = theta3_sq_theta4_4th(order.div_ceil(2));
    let mut f = ExactSeries::zero("t", order);
    for (j, a) in product.iter().enumerate().skip(1) {
        let exponent = 2 * j - 1;
        if exponent <= order {
            f.set_coeff(exponent, BigRational::from_integer(-a));
        }
    }
    let big_f = f.integrate();
    (f, big_f)
}

/// `k(t)/4 = t·(θ₂²/4t) / θ₃(t²)²` in `t` through `t^order`.
pub fn quarter_modulus_series(order: usize) -> ExactSeries {
    let theta = theta_series_exact(order);
    let mut th3_t = ExactSeries::zero("t", order);
    for (i, c) in theta.theta3.coeffs().iter().enumerate() {
        if 2 * i <= order {
            th3_t.set_coeff(2 * i, c.clone());
        }
    }
    let ratio = theta
        .theta2_sq_over_4t
        .div(&th3_t.mul(&th3_t))
        .expect("θ₃ has constant term 1");
    let mut shifted = ExactSeries::zero("t", order);
    for i in 1..=order {
        shifted.set_coeff(i, ratio.coeff(i - 1));
    }
    shifted
}

/// The branch `t(u) = u + O(u³)` solving `k(t) = 4u/(1+3u²)`.
pub fn t_series_in_u(order: usize) -> ExactSeries {
    let order = order.max(1);
    let inverse = quarter_modulus_series(order)
        .reversion()
        .expect("k(t)/4 = t + O(t³)");
    // u/(1+3u²) = Σ (−3)^j u^{2j+1}
    let mut kappa = ExactSeries::zero("u", order);
    let mut j = 0u32;
    while (2 * j as usize) < order {
        kappa.set_coeff(
            2 * j as usize + 1,
            BigRational::from_integer(BigInt::from(-3).pow(j)),
        );
        j += 1;
    }
    inverse
        .compose(&kappa)
        .expect("κ has zero constant term")
        .with_var("u")
}

/// `(t(u)/u)·exp(−F(t(u)))/(1 − u²)` through `u^order`.
pub fn zeta_series_via_theta(order: usize) -> ExactSeries {
    let work = order + 1;
    let t_of_u = t_series_in_u(work);
    let (_, big_f) = f_and_F_series(work);
    let f_of_u = big_f
        .truncate(work)
        .compose(&t_of_u)
        .expect("t(u) has zero constant term");
    let expo = f_of_u.neg().exp().expect("F(0) = 0").truncate(order);
    let ratio = t_of_u.shift_down(1).expect("t(0) = 0");
    ratio.mul(&expo).mul(&one_over_one_minus_sq("u", order))
}

/// `N_m = m·[u^m] log Z` for `m = 1..=max_m`, where
/// `log Z = −log(1 − u²) − Tr log Δ_u`.
pub fn geodesic_counts_from_series(max_m: usize) -> Result<Vec<(usize, BigInt)>> {
    let half = max_m.div_ceil(2).max(1);
    let trlog = trlog_series(half);
    let mut out = Vec::with_capacity(max_m);
    for m in 1..=max_m {
        let mut c = -trlog.coeff(m);
        if m % 2 == 0 {
            c += BigRational::new(BigInt::one(), BigInt::from(m / 2));
        }
        let n = c * BigRational::from_integer(BigInt::from(m));
        if !n.is_integer() {
            return Err(Error::Consistency(format!("N_{m} = {n} is not an integer")));
        }
        out.push((m, n.to_integer()));
    }
    Ok(out)
}

/// Checks that `s` has integer coefficients, all nonnegative.
pub fn is_nonnegative_integral(s: &ExactSeries) -> bool {
    s.coeffs()
        .iter()
        .all(|c| c.is_integer() && !c.is_negative())
}

/// `true` when `n` is even; convenience for the geodesic parity invariant.
pub fn is_even(n: &BigInt) -> bool {
    n.is_even()
}
