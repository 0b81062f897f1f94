//! The uniformizing surface `S = {(u, t) : 4u/(1+3u²) = k(t)}` on which the
//! grid zeta function is single valued, together with the involution
//! `(u, t) ↦ (1/(3u), t)` and sheet navigation by deck words acting on `τ`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_series::f_and_F_series;
use crate::special_functions::{
    modulus_from_t, modulus_from_u, nome_t_from_u, u_pair_from_modulus, BRANCH_POINT_GUARD, T_MAX,
};

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-12;

/// Allowed `|k(u) − k(t)|` for a valid surface point.
pub const RELATION_TOL: f64 = 1e-10;

/// Order in `t` of the exact series behind [`f_eval`].
pub const F_SERIES_ORDER: usize = 1024;

/// Largest acceptable tail estimate when evaluating `F`.
const F_TAIL_TOL: f64 = 1e-14;

/// Where `u` sits relative to the singular set `D`, the domain `Ω` and the
/// extended domain `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionTag {
    InOmega,
    OnD,
    OutsideOmegaInY,
    ExcludedPoint,
}

fn excluded_points() -> [Complex64; 8] {
    let r = 1.0 / 3f64.sqrt();
    [
        Complex64::new(1.0 / 3.0, 0.0),
        Complex64::new(-1.0 / 3.0, 0.0),
        Complex64::new(r, 0.0),
        Complex64::new(-r, 0.0),
        Complex64::new(0.0, r),
        Complex64::new(0.0, -r),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]
}

/// Classifies `u`. `D` is the circle `|u| = 1/√3` together with the real
/// segments `[−1, −1/3]` and `[1/3, 1]`; `Ω` is the component of `ℂ − D`
/// containing zero; `Y` omits eight isolated points.
pub fn classify_u(u: Complex64, tol: f64) -> RegionTag {
    if excluded_points().iter().any(|p| (u - p).norm() <= tol) {
        return RegionTag::ExcludedPoint;
    }
    let r = 1.0 / 3f64.sqrt();
    let on_circle = (u.norm() - r).abs() <= tol;
    let on_segment = u.im.abs() <= tol && u.re.abs() >= 1.0 / 3.0 - tol && u.re.abs() <= 1.0 + tol;
    if on_circle || on_segment {
        RegionTag::OnD
    } else if u.norm() < r {
        RegionTag::InOmega
    } else {
        RegionTag::OutsideOmegaInY
    }
}

/// A point `σ = (u, t)` of the surface. Construction checks the defining
/// relation, so every value in hand lies on `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct SurfacePoint {
    u: Complex64,
    t: Complex64,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    u: [f64; 2],
    t: [f64; 2],
}

impl From<SurfacePoint> for PointRepr {
    fn from(p: SurfacePoint) -> Self {
        PointRepr {
            u: [p.u.re, p.u.im],
            t: [p.t.re, p.t.im],
        }
    }
}

impl TryFrom<PointRepr> for SurfacePoint {
    type Error = Error;

    fn try_from(r: PointRepr) -> Result<Self> {
        SurfacePoint::new(
            Complex64::new(r.u[0], r.u[1]),
            Complex64::new(r.t[0], r.t[1]),
        )
    }
}

impl SurfacePoint {
    /// The removable point `(0, 0)`.
    pub const ORIGIN: SurfacePoint = SurfacePoint {
        u: Complex64::new(0.0, 0.0),
        t: Complex64::new(0.0, 0.0),
    };

    pub fn new(u: Complex64, t: Complex64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        if t.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "surface point: |t| = {} ≥ 1",
                t.norm()
            )));
        }
        if u == zero && t == zero {
            return Ok(Self::ORIGIN);
        }
        if u == zero || t == zero {
            return Err(Error::Domain(format!(
                "surface point: ({u}, {t}) pairs zero with a nonzero coordinate"
            )));
        }
        let ku = modulus_from_u(u)?;
        let kt = modulus_from_t(t)?;
        let residual = (ku - kt).norm();
        if residual >= RELATION_TOL {
            return Err(Error::Domain(format!(
                "surface point: |k(u) − k(t)| = {residual:e} at ({u}, {t})"
            )));
        }
        if (Complex64::new(4.0, 0.0) - kt * kt * 3.0).norm() < BRANCH_POINT_GUARD {
            return Err(Error::BranchPoint(format!(
                "surface point: k = {kt} is a branch point"
            )));
        }
        Ok(SurfacePoint { u, t })
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn is_origin(&self) -> bool {
        *self == Self::ORIGIN
    }

    /// `|k(u) − k(t)|`.
    pub fn relation_residual(&self) -> Result<f64> {
        if self.is_origin() {
            return Ok(0.0);
        }
        Ok((modulus_from_u(self.u)? - modulus_from_t(self.t)?).norm())
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(u = {}, t = {})", self.u, self.t)
    }
}

/// The point of the principal sheet over `u ∈ Ω`.
pub fn lift_principal(u: Complex64) -> Result<SurfacePoint> {
    if u == Complex64::new(0.0, 0.0) {
        return Ok(SurfacePoint::ORIGIN);
    }
    match classify_u(u, DEFAULT_BOUNDARY_TOL) {
        RegionTag::InOmega => SurfacePoint::new(u, nome_t_from_u(u)?),
        tag => Err(Error::Domain(format!(
            "lift_principal: u = {u} is {tag:?}; reach it through deck_transform instead"
        ))),
    }
}

/// `ι(u, t) = (1/(3u), t)`.
pub fn involution(p: &SurfacePoint) -> Result<SurfacePoint> {
    if p.is_origin() {
        return Err(Error::Domain(
            "involution is undefined at the removable point (0, 0)".into(),
        ));
    }
    SurfacePoint::new((p.u * 3.0).inv(), p.t)
}

/// Integer Möbius transformation `τ ↦ (aτ + b)/(cτ + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn pow(&self, exponent: i32) -> Mobius {
        let base = if exponent < 0 { self.inverse() } else { *self };
        (0..exponent.unsigned_abs()).fold(Mobius::IDENTITY, |acc, _| acc.compose(&base))
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Membership in the group preserving `k`: determinant one, congruent to
    /// the identity mod 2, upper-right entry divisible by 4.
    pub fn preserves_modulus(&self) -> bool {
        self.det() == 1
            && self.a.rem_euclid(2) == 1
            && self.d.rem_euclid(2) == 1
            && self.c.rem_euclid(2) == 0
            && self.b.rem_euclid(4) == 0
    }

    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }
}

/// Free generators of the deck group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `[[1, 4], [0, 1]]`
    G1,
    /// `[[1, 0], [2, 1]]`
    G2,
    /// `[[5, −8], [2, −3]]`
    G3,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::G1, Generator::G2, Generator::G3];

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Generator::G1),
            2 => Ok(Generator::G2),
            3 => Ok(Generator::G3),
            _ => Err(Error::Domain(format!(
                "no deck generator with index {index}"
            ))),
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Generator::G1 => 1,
            Generator::G2 => 2,
            Generator::G3 => 3,
        }
    }

    pub fn matrix(&self) -> Mobius {
        match self {
            Generator::G1 => Mobius {
                a: 1,
                b: 4,
                c: 0,
                d: 1,
            },
            Generator::G2 => Mobius {
                a: 1,
                b: 0,
                c: 2,
                d: 1,
            },
            Generator::G3 => Mobius {
                a: 5,
                b: -8,
                c: 2,
                d: -3,
            },
        }
    }
}

/// A word `g_{i₁}^{e₁} ⋯ g_{iₙ}^{eₙ}` in the deck generators. The matrix of
/// the word is the left-to-right product, so the last letter acts on `τ`
/// first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeckWord(pub Vec<(Generator, i32)>);

impl DeckWord {
    pub fn empty() -> Self {
        DeckWord(Vec::new())
    }

    pub fn from_pairs(pairs: &[(usize, i32)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(i, e)| Generator::from_index(i).map(|g| (g, e)))
            .collect::<Result<Vec<_>>>()
            .map(DeckWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> Mobius {
        self.0.iter().fold(Mobius::IDENTITY, |acc, (g, e)| {
            acc.compose(&g.matrix().pow(*e))
        })
    }

    /// All freely reduced words of length at most `depth` with letters
    /// `gᵢ^{±1}`, shortest first.
    pub fn enumerate(depth: usize) -> Vec<DeckWord> {
        let letters: Vec<(Generator, i32)> = Generator::ALL
            .iter()
            .flat_map(|&g| [(g, 1), (g, -1)])
            .collect();
        let mut out = vec![DeckWord::empty()];
        let mut frontier = vec![DeckWord::empty()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for &(g, e) in &letters {
                    if let Some(&(lg, le)) = w.0.last() {
                        if lg == g && le == -e {
                            continue;
                        }
                    }
                    let mut word = w.0.clone();
                    word.push((g, e));
                    next.push(DeckWord(word));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for DeckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| format!("g{}^{e}", g.index()))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `τ = (2/iπ)·log t`, principal logarithm.
pub fn tau_from_t(t: Complex64) -> Complex64 {
    t.ln() * Complex64::new(0.0, -2.0 / PI)
}

/// `t = exp(iπτ/2)`.
pub fn t_from_tau(tau: Complex64) -> Complex64 {
    (tau * Complex64::new(0.0, PI / 2.0)).exp()
}

/// Moves `σ` to another sheet over the same `u` by acting on `τ` with the
/// word's Möbius transformation.
pub fn deck_transform(p: &SurfacePoint, word: &DeckWord) -> Result<SurfacePoint> {
    if p.is_origin() {
        return Err(Error::Domain(
            "deck transformations act on S₀; (0, 0) is fixed by definition".into(),
        ));
    }
    let m = word.matrix();
    if !m.preserves_modulus() {
        return Err(Error::Consistency(format!(
            "deck word {word} left the group"
        )));
    }
    if word.is_empty() {
        return Ok(*p);
    }
    let tau = m.apply(tau_from_t(p.t));
    if tau.im <= 0.0 {
        return Err(Error::Branch(format!(
            "image τ = {tau} left the upper half plane"
        )));
    }
    let t = t_from_tau(tau);
    if t.norm() >= T_MAX {
        return Err(Error::Precision(format!(
            "deck word {word} sends t to |t| = {} ≥ {T_MAX}",
            t.norm()
        )));
    }
    let (u_plus, u_minus) = u_pair_from_modulus(modulus_from_t(t)?)?;
    let scale = p.u.norm().max(1.0);
    let near = |v: Complex64| (v - p.u).norm() <= 1e-8 * scale;
    let u = match (near(u_plus), near(u_minus)) {
        (true, false) => u_plus,
        (false, true) => u_minus,
        (true, true) => {
            return Err(Error::Branch(format!(
                "both roots over t' = {t} match u = {}",
                p.u
            )))
        }
        (false, false) => {
            return Err(Error::Branch(format!(
                "neither root ({u_plus}, {u_minus}) over t' = {t} matches u = {}",
                p.u
            )))
        }
    };
    SurfacePoint::new(u, t)
}

fn f_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let (_, big_f) = f_and_F_series(F_SERIES_ORDER);
        // F has only even powers; keep c_j for t^{2j}
        big_f.to_f64_coeffs().into_iter().step_by(2).collect()
    })
}

/// `F(t)` with `F(0) = 0` and `F' = (1 − θ₃²θ₄⁴)/t`, from the exact series.
pub fn f_eval(t: Complex64) -> Result<Complex64> {
    let r = t.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("F: |t| = {r} ≥ 1")));
    }
    if r > T_MAX {
        return Err(Error::Precision(format!("F: |t| = {r} exceeds {T_MAX}")));
    }
    let coeffs = f_table();
    let s = t * t;
    let n = coeffs.len();
    let tail_scale = coeffs[n.saturating_sub(16)..]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let r2 = s.norm();
    let tail = tail_scale * r2.powi(n as i32) / (1.0 - r2).powi(2);
    if tail > F_TAIL_TOL {
        return Err(Error::Precision(format!(
            "F: series tail estimate {tail:e} at |t| = {r}"
        )));
    }
    Ok(coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c))
}

/// `Z̃(u, t) = t·e^{−F(t)} / (u(1 − u²))`, with `Z̃(0, 0) = 1`.
pub fn zeta_tilde(p: &SurfacePoint) -> Result<Complex64> {
    if p.is_origin() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let u = p.u;
    let den = u * (Complex64::new(1.0, 0.0) - u * u);
    if den.norm() == 0.0 {
        return Err(Error::Pole(format!("zeta_tilde: u = {u}")));
    }
    Ok(p.t * (-f_eval(p.t)?).exp() / den)
}

/// `log Z` on the principal sheet, continuous from `log Z(0) = 0`:
/// `−log(1 − u²) − F(t) + log(t/u)`.
pub fn log_zeta_principal(u: Complex64) -> Result<Complex64> {
    let p = lift_principal(u)?;
    if p.is_origin() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(-(one - u * u).ln() - f_eval(p.t)? + (p.t / u).ln())
}

/// Relative residual of `Z̃(ι σ) = 27u⁴·(1 − u²)/(9u² − 1)·Z̃(σ)`.
pub fn functional_equation_residual(p: &SurfacePoint) -> Result<f64> {
    let u = p.u;
    if p.is_origin() {
        return Err(Error::Domain("functional equation needs σ ≠ (0, 0)".into()));
    }
    let nine_u2 = u * u * 9.0;
    if (nine_u2 - 1.0).norm() == 0.0 {
        return Err(Error::Pole(format!(
            "functional equation: 9u² = 1 at u = {u}"
        )));
    }
    let lhs = zeta_tilde(&involution(p)?)?;
    let factor = u.powi(4) * 27.0 * (Complex64::new(1.0, 0.0) - u * u) / (nine_u2 - 1.0);
    let rhs = factor * zeta_tilde(p)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// One sheet reached from the principal lift.
#[derive(Debug, Clone, Serialize)]
pub struct SheetValue {
    pub word: DeckWord,
    pub point: SurfacePoint,
    pub zeta: Complex64,
}

/// Result of [`enumerate_sheets`].
#[derive(Debug, Clone, Serialize)]
pub struct SheetReport {
    pub u: Complex64,
    pub depth: usize,
    pub sheets: Vec<SheetValue>,
    /// Words whose image fell outside the numerically supported disk.
    pub skipped: Vec<(DeckWord, String)>,
    pub distinct_zeta: Vec<Complex64>,
}

/// Applies every reduced deck word up to `depth` to the principal lift of
/// `u` and collects the distinct values of `Z̃`.
pub fn enumerate_sheets(u: Complex64, depth: usize) -> Result<SheetReport> {
    let base = lift_principal(u)?;
    let mut sheets = Vec::new();
    let mut skipped = Vec::new();
    for word in DeckWord::enumerate(if base.is_origin() { 0 } else { depth }) {
        match deck_transform(&base, &word) {
            Ok(point) => {
                let zeta = zeta_tilde(&point)?;
                sheets.push(SheetValue { word, point, zeta });
            }
            Err(e @ (Error::Precision(_) | Error::Branch(_) | Error::BranchPoint(_))) => {
                skipped.push((word, e.to_string()))
            }
            Err(e) => return Err(e),
        }
    }
    let mut distinct: Vec<Complex64> = Vec::new();
    for s in &sheets {
        if !distinct
            .iter()
            .any(|z| (z - s.zeta).norm() <= 1e-9 * z.norm().max(1.0))
        {
            distinct.push(s.zeta);
        }
    }
    Ok(SheetReport {
        u,
        depth,
        sheets,
        skipped,
        distinct_zeta: distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::zeta_series;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_u(c(0.0, 0.0), DEFAULT_BOUNDARY_TOL),
            RegionTag::InOmega
        );
        assert_eq!(
            classify_u(c(0.5, 0.0), DEFAULT_BOUNDARY_TOL),
            RegionTag::OnD
        );
        assert_eq!(
            classify_u(c(2.0, 0.0), DEFAULT_BOUNDARY_TOL),
            RegionTag::OutsideOmegaInY
        );
        assert_eq!(
            classify_u(c(1.0 / 3.0, 0.0), DEFAULT_BOUNDARY_TOL),
            RegionTag::ExcludedPoint
        );
        assert_eq!(
            classify_u(c(0.0, 0.5), DEFAULT_BOUNDARY_TOL),
            RegionTag::InOmega
        );
        // |0.4 + 0.4i| ≈ 0.566 < 1/√3
        assert_eq!(
            classify_u(c(0.4, 0.4), DEFAULT_BOUNDARY_TOL),
            RegionTag::InOmega
        );
        assert_eq!(
            classify_u(c(0.45, 0.0), DEFAULT_BOUNDARY_TOL),
            RegionTag::OnD
        );
        assert_eq!(
            classify_u(c(0.45, 0.01), DEFAULT_BOUNDARY_TOL),
            RegionTag::InOmega
        );
    }

    #[test]
    fn origin_lift() {
        assert!(lift_principal(c(0.0, 0.0)).unwrap().is_origin());
        assert_eq!(zeta_tilde(&SurfacePoint::ORIGIN).unwrap(), c(1.0, 0.0));
        assert!(involution(&SurfacePoint::ORIGIN).is_err());
    }

    #[test]
    fn real_lift_is_real_and_close_to_u() {
        let p = lift_principal(c(0.1, 0.0)).unwrap();
        assert_eq!(p.t().im, 0.0);
        assert!(p.t().re > 0.0 && p.t().re < 0.11);
        // t = u + u³ + O(u⁵)
        assert!((p.t().re - 0.101).abs() < 1e-4);
        assert!(p.relation_residual().unwrap() < 1e-10);
        assert!(
            lift_principal(c(0.2, 0.1))
                .unwrap()
                .relation_residual()
                .unwrap()
                < 1e-10
        );
        assert!(lift_principal(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn constructor_rejects_off_surface() {
        assert!(SurfacePoint::new(c(0.1, 0.0), c(0.2, 0.0)).is_err());
        assert!(SurfacePoint::new(c(0.1, 0.0), c(0.0, 0.0)).is_err());
        assert!(SurfacePoint::new(c(0.1, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn involution_properties() {
        let p = lift_principal(c(0.1, 0.0)).unwrap();
        let q = involution(&p).unwrap();
        assert!((q.u() - c(10.0 / 3.0, 0.0)).norm() < 1e-14);
        let back = involution(&q).unwrap();
        assert!((back.u() - p.u()).norm() < 1e-14);
        assert_eq!(back.t(), p.t());
        assert!(q.relation_residual().unwrap() < 1e-10);
    }

    #[test]
    fn generators_are_in_the_group() {
        for g in Generator::ALL {
            assert!(g.matrix().preserves_modulus(), "{g:?}");
            assert_eq!(g.matrix().compose(&g.matrix().inverse()), Mobius::IDENTITY);
        }
        assert!(!Mobius {
            a: 1,
            b: 2,
            c: 0,
            d: 1
        }
        .preserves_modulus());
        assert!(Generator::from_index(4).is_err());
    }

    #[test]
    fn deck_words() {
        assert_eq!(DeckWord::enumerate(0).len(), 1);
        assert_eq!(DeckWord::enumerate(1).len(), 7);
        assert_eq!(DeckWord::enumerate(2).len(), 37);
        let w = DeckWord::from_pairs(&[(2, 1), (3, -2)]).unwrap();
        assert_eq!(
            w.matrix(),
            Generator::G2
                .matrix()
                .compose(&Generator::G3.matrix().pow(-2))
        );
        assert_eq!(w.to_string(), "g2^1 g3^-2");
    }

    #[test]
    fn deck_transform_preserves_modulus() {
        let p = lift_principal(c(0.15, 0.0)).unwrap();
        assert_eq!(deck_transform(&p, &DeckWord::empty()).unwrap(), p);
        for g in Generator::ALL {
            for e in [1, -1] {
                let q = deck_transform(&p, &DeckWord(vec![(g, e)])).unwrap();
                let dk = modulus_from_t(q.t()).unwrap() - modulus_from_t(p.t()).unwrap();
                assert!(dk.norm() < 1e-10, "{g:?}^{e}");
                assert!((q.u() - p.u()).norm() < 1e-8);
            }
        }
        assert!(deck_transform(&SurfacePoint::ORIGIN, &DeckWord::empty()).is_err());
    }

    #[test]
    fn many_sheets_over_one_u() {
        let report = enumerate_sheets(c(0.15, 0.0), 2).unwrap();
        let mut ts: Vec<Complex64> = Vec::new();
        for s in &report.sheets {
            if !ts.iter().any(|t| (t - s.point.t()).norm() < 1e-9) {
                ts.push(s.point.t());
            }
        }
        assert!(ts.len() >= 5, "{} distinct t", ts.len());
        assert!(report.distinct_zeta.len() >= 5);
        assert_eq!(
            enumerate_sheets(c(0.15, 0.0), 0)
                .unwrap()
                .distinct_zeta
                .len(),
            1
        );
    }

    #[test]
    fn f_values() {
        assert_eq!(f_eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        for x in [0.05, 0.2, 0.45] {
            assert_eq!(f_eval(c(x, 0.0)).unwrap().im, 0.0);
        }
        assert!(matches!(f_eval(c(0.96, 0.0)), Err(Error::Precision(_))));
        assert!(f_eval(c(0.94, 0.0)).is_ok());
    }

    #[test]
    fn f_derivative_by_central_difference() {
        use crate::special_functions::{theta3, theta4, TruncationPolicy};
        let t = c(0.1, 0.0);
        let h = 1e-5;
        let fd = (f_eval(t + h).unwrap() - f_eval(t - h).unwrap()) / (2.0 * h);
        let q = t * t;
        let p = TruncationPolicy::default();
        let th3 = theta3(q, p).unwrap();
        let th4 = theta4(q, p).unwrap();
        let exact = (Complex64::new(1.0, 0.0) - th3 * th3 * th4.powi(4)) / t;
        assert!((fd - exact).norm() < 1e-10);
    }

    #[test]
    fn zeta_matches_series_at_small_u() {
        let s = zeta_series(10);
        for u in [0.05, 0.2] {
            let z = zeta_tilde(&lift_principal(c(u, 0.0)).unwrap()).unwrap();
            let partial = s.eval(c(u, 0.0));
            // tail after u²⁰ is below 5·10⁷ u²² (ratio about 7.5 per power of u²)
            let bound = 5e7 * u.powi(22) + 1e-14;
            assert!((z - partial).norm() < bound, "u = {u}: {z} vs {partial}");
        }
    }

    #[test]
    fn functional_equation_on_principal_sheet() {
        for u in [c(0.1, 0.0), c(0.15, 0.1)] {
            let p = lift_principal(u).unwrap();
            assert!(functional_equation_residual(&p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn symmetries() {
        for u in [c(0.1, 0.05), c(0.25, -0.1), c(-0.05, 0.3)] {
            let z = zeta_tilde(&lift_principal(u).unwrap()).unwrap();
            let zc = zeta_tilde(&lift_principal(u.conj()).unwrap()).unwrap();
            let zn = zeta_tilde(&lift_principal(-u).unwrap()).unwrap();
            assert!((zc - z.conj()).norm() < 1e-12 * z.norm());
            assert!((zn - z).norm() < 1e-12 * z.norm());
            assert!(z.norm() > 0.0);
        }
    }

    #[test]
    fn json_shape() {
        let p = lift_principal(c(0.1, 0.0)).unwrap();
        let v = serde_json::to_value(p).unwrap();
        assert_eq!(v["u"][0], 0.1);
        let back: SurfacePoint = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
        let bad = serde_json::json!({"u": [0.1, 0.0], "t": [0.3, 0.0]});
        assert!(serde_json::from_value::<SurfacePoint>(bad).is_err());
    }
}
