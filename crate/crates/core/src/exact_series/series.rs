//! Truncated formal power series over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// `Σ_{n=0}^{order} cₙ xⁿ` with exact rational coefficients. Arithmetic is
/// exact through the smaller of the operand orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSeries {
    var: String,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ExactSeries {
    pub fn zero(var: &str, order: usize) -> Self {
        ExactSeries {
            var: var.to_string(),
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(var: &str, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// `x` itself.
    pub fn variable(var: &str, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// Builds a series from coefficients `c₀, c₁, …`; the order is `len − 1`.
    pub fn from_coeffs(var: &str, coeffs: Vec<BigRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        ExactSeries {
            var: var.to_string(),
            coeffs,
        }
    }

    pub fn from_integers(var: &str, coeffs: &[i64]) -> Self {
        Self::from_coeffs(var, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `xⁿ`; zero past the order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn set_coeff(&mut self, n: usize, value: BigRational) {
        self.coeffs[n] = value;
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, BigRational::zero());
        ExactSeries {
            var: self.var.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Self::from_coeffs(&self.var, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        Self::from_coeffs(&self.var, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(&self.var, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::from_coeffs(&self.var, self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Cauchy product, truncated to the smaller order. Zero coefficients are
    /// skipped, which matters for the sparse theta series.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(&self.var, out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Domain(
                "reciprocal needs a nonzero constant term".into(),
            ));
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[k - i];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::from_coeffs(&self.var, out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.reciprocal()?))
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(&self.var, 0);
        }
        let coeffs = (1..=self.order())
            .map(|i| &self.coeffs[i] * rat(i as i64))
            .collect();
        Self::from_coeffs(&self.var, coeffs)
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / rat(i as i64 + 1));
        }
        Self::from_coeffs(&self.var, coeffs)
    }

    /// Divides by `x^shift`; the low coefficients must vanish.
    pub fn shift_down(&self, shift: usize) -> Result<Self> {
        if shift > self.order() || self.coeffs[..shift].iter().any(|c| !c.is_zero()) {
            return Err(Error::Domain(format!(
                "series is not divisible by {}^{shift}",
                self.var
            )));
        }
        Ok(Self::from_coeffs(&self.var, self.coeffs[shift..].to_vec()))
    }

    /// Natural logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(&self.var, 0));
        }
        // log S = ∫ S'/S
        let quotient = self.derivative().mul(&self.truncate(n - 1).reciprocal()?);
        Ok(quotient.integrate())
    }

    /// Exponential; requires constant term 0. Uses `n·eₙ = Σ k·sₖ·e_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs constant term 0".into()));
        }
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(BigRational::one());
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * rat(k as i64) * &out[m - k];
                }
            }
            out.push(acc / rat(m as i64));
        }
        Ok(Self::from_coeffs(&self.var, out))
    }

    /// `self ∘ inner`, i.e. `self(inner(y))`, in the variable of `inner`.
    /// Requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(&inner.var, n);
        acc.coeffs[0] = self.coeff(n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `self(g(x)) = x`, by Newton iteration
    /// with the working order doubled each pass.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() < 1 || self.coeffs[1].is_zero() {
            return Err(Error::Domain(
                "reversion needs zero constant and nonzero linear term".into(),
            ));
        }
        let n = self.order();
        let lead = self.coeffs[1].clone();
        let mut g = Self::zero(&self.var, 1);
        g.coeffs[1] = lead.recip();
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let g_ext = g.truncate(prec);
            let f = self.truncate(prec);
            let residual = f.compose(&g_ext)?.sub(&Self::variable(&self.var, prec));
            let slope = f.derivative().truncate(prec).compose(&g_ext)?;
            g = g_ext.sub(&residual.mul(&slope.reciprocal()?));
        }
        Ok(g.truncate(n))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Horner evaluation in double precision of the truncated polynomial.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// True when all odd (`parity = 1`) or all even (`parity = 0`)
    /// coefficients vanish.
    pub fn vanishes_at_parity(&self, parity: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == parity)
            .all(|(_, c)| c.is_zero())
    }

    /// `{"var": …, "order": n, "coeffs": ["num/den", …]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        json!({ "var": self.var, "order": self.order(), "coeffs": coeffs })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Domain(format!("series json: {m}"));
        let var = value["var"].as_str().ok_or_else(|| bad("missing var"))?;
        let order = value["order"]
            .as_u64()
            .ok_or_else(|| bad("missing order"))? as usize;
        let list = value["coeffs"]
            .as_array()
            .ok_or_else(|| bad("missing coeffs"))?;
        if list.len() != order + 1 {
            return Err(bad("coefficient count does not match order"));
        }
        let coeffs = list
            .iter()
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| bad("coefficient is not a string"))
                    .and_then(|s| parse_rational(s).ok_or_else(|| bad(s)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(var, coeffs))
    }
}

impl fmt::Display for ExactSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{i}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

/// Always `num/den`, including integers (`"3/1"`).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}
