//! Independent routes used to check the theta-function closed form: direct
//! quadrature of the torus integral and its one-dimensional reduction,
//! product forms of the theta constants, and brute-force walk counts.

pub mod quadrature;
pub mod walks;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact_series::{ExactSeries, ThetaSeries};
use crate::special_functions::modulus_from_u;
use crate::surface::{classify_u, RegionTag, DEFAULT_BOUNDARY_TOL};

pub use quadrature::QuadratureSpec;
pub use walks::{
    closed_walk_count_dp, geodesic_count_dp, primitive_class_count, primitive_classes,
    WalkCounterState,
};

fn require_omega(u: Complex64, what: &str) -> Result<()> {
    match classify_u(u, DEFAULT_BOUNDARY_TOL) {
        RegionTag::InOmega => Ok(()),
        tag => Err(Error::Domain(format!(
            "{what}: u = {u} is {tag:?}, not in Ω"
        ))),
    }
}

fn torus_integrand(u: Complex64) -> impl Fn(f64, f64) -> Complex64 {
    let base = Complex64::new(1.0, 0.0) + u * u * 3.0;
    let two_u = u * 2.0;
    move |s, t| (base - two_u * (s.cos() + t.cos())).ln()
}

/// `∬ log(1 + 3u² − 2u cos s − 2u cos t)` over the torus with normalized
/// measure, as an iterated adaptive integral over `[0, π]²`.
pub fn log_det_torus_quadrature(u: Complex64, spec: QuadratureSpec) -> Result<Complex64> {
    require_omega(u, "log_det_torus_quadrature")?;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(u);
    }
    let f = torus_integrand(u);
    let inner_spec = spec.scaled(0.1);
    let outer = |s: f64| {
        quadrature::integrate(|t| f(s, t), 0.0, PI, inner_spec)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let total = quadrature::integrate(outer, 0.0, PI, spec)?;
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::Precision(format!(
            "inner torus integral did not converge at u = {u}"
        )));
    }
    Ok(total / (PI * PI))
}

/// Equispaced `n × n` rule for the same torus integral. For this periodic
/// analytic integrand it converges geometrically in `n`.
pub fn log_det_torus_trapezoid(u: Complex64, n: usize) -> Result<Complex64> {
    require_omega(u, "log_det_torus_trapezoid")?;
    let f = torus_integrand(u);
    let h = 2.0 * PI / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += f(i as f64 * h, j as f64 * h);
        }
    }
    Ok(acc / (n * n) as f64)
}

/// `log((1+3u²)/2) + (2/π)∫₀^{π/2} log(1 + √(1 − k² sin²ω)) dω`.
pub fn log_det_1d_quadrature(u: Complex64, spec: QuadratureSpec) -> Result<Complex64> {
    require_omega(u, "log_det_1d_quadrature")?;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(u);
    }
    let k = modulus_from_u(u)?;
    let k2 = k * k;
    let one = Complex64::new(1.0, 0.0);
    let integral = quadrature::integrate(
        |w| {
            let s = w.sin();
            (one + (one - k2 * (s * s)).sqrt()).ln()
        },
        0.0,
        PI / 2.0,
        spec,
    )?;
    Ok(((one + u * u * 3.0) / 2.0).ln() + integral * (2.0 / PI))
}

/// `Z = exp(−log det Δ_u)/(1 − u²)` from the torus quadrature.
pub fn zeta_via_quadrature_with(u: Complex64, spec: QuadratureSpec) -> Result<Complex64> {
    let one_minus = Complex64::new(1.0, 0.0) - u * u;
    if one_minus.norm() == 0.0 {
        return Err(Error::Pole(format!("zeta_via_quadrature: u = {u}")));
    }
    Ok((-log_det_torus_quadrature(u, spec)?).exp() / one_minus)
}

pub fn zeta_via_quadrature(u: Complex64) -> Result<Complex64> {
    zeta_via_quadrature_with(u, QuadratureSpec::default())
}

/// `|∫ log(1 − z cos θ) dθ − log((1 + √(1 − z²))/2)|` with normalized
/// measure on the circle.
pub fn zint_identity_residual(z: f64) -> Result<f64> {
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::Domain(format!("zint: z = {z} outside (−1, 1)")));
    }
    let spec = QuadratureSpec::new(1e-15, 1e-15, 2000)?;
    let integral = quadrature::integrate_real(|th| (1.0 - z * th.cos()).ln(), 0.0, PI, spec)? / PI;
    let closed = (0.5 * (1.0 + (1.0 - z * z).sqrt())).ln();
    Ok((integral - closed).abs())
}

fn product_until_stable<F: Fn(usize) -> Complex64>(factor: F) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for n in 1..10_000 {
        let f = factor(n);
        acc *= f;
        if (f - 1.0).norm() < 1e-18 {
            break;
        }
    }
    acc
}

/// `θ₃ = Π (1 − q^{2n})(1 + q^{2n−1})²`.
pub fn theta3_product(q: Complex64) -> Complex64 {
    product_until_stable(|n| {
        let a = q.powu(2 * n as u32);
        let b = q.powu(2 * n as u32 - 1);
        (1.0 - a) * (1.0 + b) * (1.0 + b)
    })
}

/// `θ₄ = Π (1 − q^{2n})(1 − q^{2n−1})²`.
pub fn theta4_product(q: Complex64) -> Complex64 {
    product_until_stable(|n| {
        let a = q.powu(2 * n as u32);
        let b = q.powu(2 * n as u32 - 1);
        (1.0 - a) * (1.0 - b) * (1.0 - b)
    })
}

/// `θ₂² = 4t·Π (1 − t^{4n})²(1 + t^{4n})⁴`.
pub fn theta2_sq_product(t: Complex64) -> Complex64 {
    t * 4.0
        * product_until_stable(|n| {
            let a = t.powu(4 * n as u32);
            (1.0 - a).powu(2) * (1.0 + a).powu(4)
        })
}

/// `θ₂²/(4t)`, `θ₃`, `θ₄` expanded exactly from their infinite products.
pub fn theta_products_exact(order: usize) -> ThetaSeries {
    let binomial_factor = |var: &str, exponent: usize, sign: i64| {
        let mut s = ExactSeries::one(var, order);
        if exponent <= order {
            let mut c = ExactSeries::zero(var, order);
            c.set_coeff(
                exponent,
                num_rational::BigRational::from_integer(sign.into()),
            );
            s = s.add(&c);
        }
        s
    };
    let mut t3 = ExactSeries::one("q", order);
    let mut t4 = ExactSeries::one("q", order);
    let mut t2 = ExactSeries::one("t", order);
    for n in 1..=order {
        let even = binomial_factor("q", 2 * n, -1);
        let odd_plus = binomial_factor("q", 2 * n - 1, 1);
        let odd_minus = binomial_factor("q", 2 * n - 1, -1);
        t3 = t3.mul(&even).mul(&odd_plus).mul(&odd_plus);
        t4 = t4.mul(&even).mul(&odd_minus).mul(&odd_minus);
        let minus = binomial_factor("t", 4 * n, -1);
        let plus = binomial_factor("t", 4 * n, 1);
        let plus2 = plus.mul(&plus);
        t2 = t2.mul(&minus).mul(&minus).mul(&plus2).mul(&plus2);
    }
    ThetaSeries {
        theta2_sq_over_4t: t2,
        theta3: t3,
        theta4: t4,
    }
}
