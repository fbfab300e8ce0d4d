//! Exact truncated q-series and characters of the rational models.
//!
//! A [`QSeries`] stores terms `c·q^e z^f` with rational exponents and
//! integer coefficients, and an absolute precision `P`: every term with
//! `e < P` is exact, nothing at or above `P` is known.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, qi, to_f64, Q};
use crate::rootdata::{eps_inner, finite_weyl_group, sigma, AffineWeight, FiniteWeight};
use crate::walg::{WModel, WModuleLabel};

pub const QSERIES_SCHEMA: &str = "wfusion.qseries/v1";

type ZPoly = BTreeMap<Q, BigInt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<Q, ZPoly>,
    precision: Q,
}

fn insert(terms: &mut BTreeMap<Q, ZPoly>, e: Q, f: Q, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let poly = terms.entry(e).or_default();
    let slot = poly.entry(f).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        poly.remove(&f);
        if poly.is_empty() {
            terms.remove(&e);
        }
    }
}

impl QSeries {
    pub fn zero(precision: Q) -> Self {
        QSeries {
            terms: BTreeMap::new(),
            precision,
        }
    }

    pub fn one(precision: Q) -> Self {
        Self::monomial(qi(0), qi(0), BigInt::one(), precision)
    }

    pub fn monomial(e: Q, f: Q, c: BigInt, precision: Q) -> Self {
        let mut s = Self::zero(precision);
        if e < precision {
            insert(&mut s.terms, e, f, c);
        }
        s
    }

    /// Builds a series from `(q-exponent, z-exponent, coefficient)` triples,
    /// dropping terms at or above `precision`.
    pub fn from_terms<I: IntoIterator<Item = (Q, Q, BigInt)>>(terms: I, precision: Q) -> Self {
        let mut s = Self::zero(precision);
        for (e, f, c) in terms {
            if e < precision {
                insert(&mut s.terms, e, f, c);
            }
        }
        s
    }

    pub fn precision(&self) -> Q {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least q-exponent with a non-zero coefficient.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Q, Q, &BigInt)> + '_ {
        self.terms
            .iter()
            .flat_map(|(e, poly)| poly.iter().map(move |(f, c)| (*e, *f, c)))
    }

    pub fn coefficient(&self, e: Q, f: Q) -> BigInt {
        self.terms
            .get(&e)
            .and_then(|p| p.get(&f))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of `q^e` after setting `z = 1`.
    pub fn coefficient_at_z1(&self, e: Q) -> BigInt {
        self.terms.get(&e).map(|p| p.values().sum()).unwrap_or_else(BigInt::zero)
    }

    pub fn truncate(&self, precision: Q) -> Self {
        let precision = precision.min(self.precision);
        QSeries {
            terms: self
                .terms
                .range(..precision)
                .map(|(e, p)| (*e, p.clone()))
                .collect(),
            precision,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let mut out = self.truncate(precision);
        for (e, f, c) in other.terms() {
            if e < precision {
                insert(&mut out.terms, e, f, c.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        QSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (*e, p.iter().map(|(f, c)| (*f, -c)).collect()))
                .collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; the precision is `min(P_a + v_b, P_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let precision = match (self.valuation(), other.valuation()) {
            (Some(va), Some(vb)) => (self.precision + vb).min(other.precision + va),
            (None, Some(vb)) => self.precision + vb,
            (Some(va), None) => other.precision + va,
            (None, None) => self.precision.max(other.precision),
        };
        let mut out = Self::zero(precision);
        for (e1, p1) in &self.terms {
            for (e2, p2) in &other.terms {
                let e = e1 + e2;
                if e >= precision {
                    break;
                }
                for (f1, c1) in p1 {
                    for (f2, c2) in p2 {
                        insert(&mut out.terms, e, f1 + f2, c1 * c2);
                    }
                }
            }
        }
        out
    }

    /// Multiplication by `q^e z^f`.
    pub fn shift(&self, e: Q, f: Q) -> Self {
        QSeries {
            terms: self
                .terms
                .iter()
                .map(|(x, p)| (x + e, p.iter().map(|(y, c)| (y + f, c.clone())).collect()))
                .collect(),
            precision: self.precision + e,
        }
    }

    /// Splits by z-exponent: `f ↦ Σ_e c_{e,f} q^e`.
    pub fn z_components(&self) -> BTreeMap<Q, QSeries> {
        let mut out: BTreeMap<Q, QSeries> = BTreeMap::new();
        for (e, f, c) in self.terms() {
            let s = out.entry(f).or_insert_with(|| QSeries::zero(self.precision));
            insert(&mut s.terms, e, qi(0), c.clone());
        }
        out
    }

    /// First disagreement below `bound`, if any; both series must be known
    /// to at least `bound`.
    pub fn agrees_below(&self, other: &Self, bound: Q) -> std::result::Result<(), String> {
        if self.precision < bound || other.precision < bound {
            return Err(format!(
                "precision {} / {} below comparison bound {}",
                fmt_q(&self.precision),
                fmt_q(&other.precision),
                fmt_q(&bound)
            ));
        }
        let a = self.truncate(bound);
        let b = other.truncate(bound);
        if a.terms == b.terms {
            return Ok(());
        }
        let diff = a.sub(&b);
        let (e, f, c) = diff.terms().next().expect("non-zero difference");
        Err(format!("differ at q^{} z^{}: {}", fmt_q(&e), fmt_q(&f), c))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "schema": QSERIES_SCHEMA,
            "precision": fmt_q(&self.precision),
            "terms": self.terms().map(|(e, f, c)| json!([fmt_q(&e), fmt_q(&f), c.to_string()])).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, z, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c} q^{}", fmt_q(&e))?;
            if !z.is_zero() {
                write!(f, " z^{}", fmt_q(&z))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", fmt_q(&self.precision))
    }
}

fn series_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_pow(base: &[BigInt], mut k: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); base.len()];
    if !out.is_empty() {
        out[0] = BigInt::one();
    }
    let mut b = base.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            out = series_mul(&out, &b);
        }
        b = series_mul(&b, &b);
        k >>= 1;
    }
    out
}

/// `Π_{k≥1} (1 − q^k)` to `len` coefficients.
fn euler_product(len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = BigInt::one();
    for k in 1..len {
        for i in (k..len).rev() {
            let t = out[i - k].clone();
            out[i] -= t;
        }
    }
    out
}

/// Partition generating function `Π (1 − q^k)^{-1}` to `len` coefficients.
fn partition_series(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    if len == 0 {
        return p;
    }
    p[0] = BigInt::one();
    for k in 1..len {
        for i in k..len {
            let t = p[i - k].clone();
            p[i] += t;
        }
    }
    p
}

/// `η(q)^k = q^{k/24} Π(1 − q^m)^k` with `N` exact coefficients.
pub fn eta_power(k: i64, terms: usize) -> QSeries {
    let base = if k >= 0 { euler_product(terms) } else { partition_series(terms) };
    let coeffs = series_pow(&base, k.unsigned_abs());
    let lead = q(k, 24);
    QSeries::from_terms(
        coeffs.into_iter().enumerate().map(|(i, c)| (lead + i as i64, qi(0), c)),
        lead + terms as i64,
    )
}

/// `1/η(q)^r` with `N` exact coefficients.
pub fn eta_inverse_power(r: i64, terms: usize) -> QSeries {
    eta_power(-r, terms)
}

/// Number of coefficients of `η^k` needed to reach absolute precision `bound`.
fn eta_terms_for(k: i64, bound: Q) -> usize {
    let need = bound - q(k, 24);
    need.ceil().to_integer().max(1) as usize
}

/// `Σ_{μ ∈ offset + period·Z} q^{μ²/(2·form)} z^{μ/z_den}`, exact below `precision`.
pub fn lattice_theta(offset: Q, period: i64, form: Q, z_den: Q, precision: Q) -> Result<QSeries> {
    if period <= 0 || form <= qi(0) || z_den.is_zero() {
        return Err(Error::InvalidParameters("lattice theta needs period > 0, form > 0, z_den != 0".into()));
    }
    let mut out = QSeries::zero(precision);
    // μ = offset + period·k; μ² < 2·form·precision bounds |k|.
    let limit = if precision > qi(0) {
        (2.0 * to_f64(&form) * to_f64(&precision)).sqrt()
    } else {
        0.0
    };
    let centre = -to_f64(&offset) / period as f64;
    let spread = limit / period as f64 + 1.0;
    let (lo, hi) = ((centre - spread).floor() as i64, (centre + spread).ceil() as i64);
    for k in lo..=hi {
        let mu = offset + period * k;
        let e = mu * mu / (form * 2);
        if e < precision {
            insert(&mut out.terms, e, mu / z_den, BigInt::one());
        }
    }
    Ok(out)
}

/// Affine Weyl numerator
/// `Σ_{w̄ ∈ S_r, β ∈ Q} ε(w̄) q^{|(1+r)(w̄x + Kβ) − Kρ̄|²/(2K(1+r))}`,
/// `x = σ^i(λ) + ρ̄`, `K = n + r`, exact below `precision`.
pub fn fkw_numerator(lambda: &AffineWeight, i: i64, precision: Q) -> Result<QSeries> {
    let r = lambda.rank();
    let n = lambda.level();
    if r < 2 {
        return Err(Error::InvalidParameters("numerator needs rank >= 2".into()));
    }
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.coeffs().to_vec()));
    }
    let ri = r as i64;
    let k = n + ri;
    let rho = FiniteWeight::weyl_vector(r).to_eps();
    let fin = sigma(lambda, i).finite().to_eps();
    let x: Vec<i64> = fin.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let denom = qi(2 * k * (1 + ri));
    let mut out = QSeries::zero(precision);
    if precision <= qi(0) {
        return Ok(out);
    }
    let norm = |v: &[i64]| to_f64(&eps_inner(v, v)).max(0.0).sqrt();
    let bound = (to_f64(&denom) * to_f64(&precision)).sqrt() + (1 + ri) as f64 * norm(&x) + k as f64 * norm(&rho);
    let radius = (bound / ((1 + ri) * k) as f64).floor() as i64 + 1;
    let weyl = finite_weyl_group(r);
    let mut beta = vec![-radius; r - 1];
    loop {
        let last = -beta.iter().sum::<i64>();
        if last.abs() <= radius {
            let mut b = beta.clone();
            b.push(last);
            for (perm, sign) in &weyl {
                let v: Vec<i64> = (0..r)
                    .map(|j| (1 + ri) * (x[perm[j]] + k * b[j]) - k * rho[j])
                    .collect();
                let e = eps_inner(&v, &v) / denom;
                if e < precision {
                    insert(&mut out.terms, e, qi(0), BigInt::from(*sign));
                }
            }
        }
        // odometer over the first r-1 coordinates
        let mut pos = 0;
        loop {
            if pos == beta.len() {
                return Ok(out);
            }
            if beta[pos] < radius {
                beta[pos] += 1;
                break;
            }
            beta[pos] = -radius;
            pos += 1;
        }
    }
}

/// Character `q^{−c/24} tr q^{L_0}` of the principal W-algebra module for
/// `λ ∈ P̂_+^n(r)`, exact for `L_0 < order`.
pub fn char_prinw(lambda: &AffineWeight, order: Q) -> Result<QSeries> {
    let r = lambda.rank() as i64;
    if r == 1 {
        return Ok(QSeries::one(order));
    }
    let c = crate::rootdata::central_charge_prinw(r as usize, lambda.level());
    char_prinw_abs(lambda, order - c / 24)
}

fn char_prinw_abs(lambda: &AffineWeight, precision: Q) -> Result<QSeries> {
    let r = lambda.rank() as i64;
    if r == 1 {
        return Ok(QSeries::one(precision));
    }
    let shift = q(r - 1, 24);
    let num = fkw_numerator(lambda, 0, precision + shift)?;
    // the numerator has non-negative exponents
    let eta = eta_inverse_power(r - 1, eta_terms_for(-(r - 1), precision));
    let out = num.mul(&eta);
    if out.precision() < precision {
        return Err(Error::Truncation(format!(
            "W character reached {} < {}",
            fmt_q(&out.precision()),
            fmt_q(&precision)
        )));
    }
    Ok(out.truncate(precision))
}

/// `Σ_{i ∈ Z_r} ch L_W(σ^i λ) · θ_i / η` with
/// `θ_i = Σ_{μ ∈ a + step·i + N·Z} q^{μ²/(2N)} z^{μ/step}`; this is the
/// character of `L_spr(λ, a)` (step `n+r`) or `L_sb(λ, a)` (step `n`),
/// exact for `L_0 < order`.
pub fn char_model(model: &WModel, label: &WModuleLabel, order: Q) -> Result<QSeries> {
    let precision = order - model.central_charge / 24;
    if model.r == 0 {
        return Ok(QSeries::one(precision));
    }
    let step = model.step();
    let nn = model.modulus;
    let mut total = QSeries::zero(precision);
    for i in 0..model.r {
        let lam_i = if model.r == 1 { label.lambda.clone() } else { sigma(&label.lambda, i) };
        let w = char_prinw_abs(&lam_i, precision + q(1, 24))?;
        let vw = w.valuation().unwrap_or(precision);
        let lat_precision = precision - vw;
        let theta = lattice_theta(qi(label.a + step * i), nn, qi(nn), qi(step), lat_precision + q(1, 24))?;
        let eta = eta_inverse_power(1, eta_terms_for(-1, lat_precision));
        let part = w.mul(&theta.mul(&eta));
        total = total.add(&part);
    }
    if total.precision() < precision {
        return Err(Error::Truncation(format!(
            "character reached {} < {}",
            fmt_q(&total.precision()),
            fmt_q(&precision)
        )));
    }
    Ok(total.truncate(precision))
}

pub fn char_spr(label: &WModuleLabel, n: i64, r: i64, order: Q) -> Result<QSeries> {
    char_model(&WModel::superprincipal(n, r)?, label, order)
}

pub fn char_sb(label: &WModuleLabel, n: i64, r: i64, order: Q) -> Result<QSeries> {
    char_model(&WModel::subregular(n, r)?, label, order)
}

/// `min_{k ∈ Z} (a k² + b k)` for `a > 0`.
fn min_quadratic(a: Q, b: Q) -> Q {
    let vertex = -b / (a * 2);
    let f = |k: i64| a * k * k + b * k;
    f(vertex.floor().to_integer()).min(f(vertex.ceil().to_integer()))
}

/// Heisenberg coset transfer at character level.
///
/// Splits `ch` by z-exponent, keeps the Fock weights `e ∈ source_offset + Z`,
/// strips the source Fock character `q^{e²/(2ε)}/η` to get branching
/// functions `b_e`, and reassembles `Σ b_e q^{e'²/(2ε')} z^{e'} / η` with
/// `e' = e − source_offset + target_offset`.  Weights outside the coset
/// contribute nothing, so an inadmissible offset yields the zero series.
pub fn relcoh_character(ch: &QSeries, source_norm: Q, target_norm: Q, source_offset: Q, target_offset: Q) -> Result<QSeries> {
    if source_norm.is_zero() || target_norm.is_zero() {
        return Err(Error::DegenerateNorm);
    }
    let shift = target_offset - source_offset;
    // precision gain as a function of e = source_offset + k:
    // e'²/(2ε') − e²/(2ε) = A k² + B k + C
    let s = source_offset;
    let t = target_offset;
    let a = qi(1) / (target_norm * 2) - qi(1) / (source_norm * 2);
    let b = t / target_norm - s / source_norm;
    let c = t * t / (target_norm * 2) - s * s / (source_norm * 2);
    let gain = if a > qi(0) {
        min_quadratic(a, b) + c
    } else if a.is_zero() && b.is_zero() {
        c
    } else {
        return Err(Error::Truncation(
            "target Fock weights grow slower than source ones; output precision is unbounded below".into(),
        ));
    };
    let precision = ch.precision() + gain;
    let mut out = QSeries::zero(precision);
    for (e, comp) in ch.z_components() {
        if !(e - s).is_integer() {
            continue;
        }
        let v = comp.valuation().expect("non-empty component");
        let eta = eta_power(1, eta_terms_for(1, comp.precision() - v));
        let b_e = comp.mul(&eta).shift(-(e * e) / (source_norm * 2), qi(0));
        for (x, _, coeff) in b_e.terms() {
            if coeff.is_negative() {
                return Err(Error::NotBranchingForm(format!(
                    "branching function at z^{} has coefficient {} at q^{}",
                    fmt_q(&e),
                    coeff,
                    fmt_q(&x)
                )));
            }
        }
        let e2 = e + shift;
        let vb = b_e.valuation().unwrap_or(qi(0));
        let inv = eta_inverse_power(1, eta_terms_for(-1, b_e.precision() + vb + e2 * e2 / (target_norm * 2)));
        let part = b_e.mul(&inv).shift(e2 * e2 / (target_norm * 2), e2);
        out = out.add(&part);
    }
    if out.precision() < precision {
        return Err(Error::Truncation(format!(
            "transfer reached {} < {}",
            fmt_q(&out.precision()),
            fmt_q(&precision)
        )));
    }
    Ok(out.truncate(precision))
}

/// Precision lost by [`relcoh_character`] for the given norms and offsets;
/// `None` when unbounded.
pub fn relcoh_precision_gain(source_norm: Q, target_norm: Q, source_offset: Q, target_offset: Q) -> Option<Q> {
    let (s, t) = (source_offset, target_offset);
    let a = qi(1) / (target_norm * 2) - qi(1) / (source_norm * 2);
    let b = t / target_norm - s / source_norm;
    let c = t * t / (target_norm * 2) - s * s / (source_norm * 2);
    if a > qi(0) {
        Some(min_quadratic(a, b) + c)
    } else if a.is_zero() && b.is_zero() {
        Some(c)
    } else {
        None
    }
}

/// Integer coefficient list of `q^{-v}·s|_{z=1}` at `v, v+1, …` below the
/// precision; only meaningful when exponents differ by integers.
pub fn integer_coefficients(s: &QSeries) -> Vec<i64> {
    let Some(v) = s.valuation() else { return vec![] };
    let len = (s.precision() - v).ceil().to_integer().max(0);
    (0..len)
        .map(|k| s.coefficient_at_z1(v + k).to_i64().unwrap_or(i64::MAX))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walg::{canonical_label, hrel_map_plus, irr_subregular};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn eta_expansions() {
        let p = eta_inverse_power(1, 8);
        assert_eq!(p.valuation(), Some(q(-1, 24)));
        assert_eq!(integer_coefficients(&p), vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(eta_inverse_power(0, 5), QSeries::one(qi(5)));
        assert_eq!(integer_coefficients(&eta_inverse_power(2, 4))[3], 10);
        let prod = eta_power(1, 10).mul(&eta_inverse_power(1, 10));
        assert_eq!(prod.truncate(qi(9)), QSeries::one(qi(9)));
        assert_eq!(integer_coefficients(&eta_power(1, 8)), vec![1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(euler_product(4), ints(&[1, -1, -1, 0]));
    }

    #[test]
    fn theta_examples() {
        // Σ_k q^{k²} z^k for √2 Z
        let t = lattice_theta(qi(0), 2, qi(2), qi(2), qi(5)).unwrap();
        assert_eq!(t.coefficient(qi(0), qi(0)), BigInt::one());
        assert_eq!(t.coefficient_at_z1(qi(1)), BigInt::from(2));
        assert_eq!(t.coefficient_at_z1(qi(4)), BigInt::from(2));
        assert_eq!(t.coefficient_at_z1(qi(2)), BigInt::zero());
        let a = lattice_theta(qi(3), 8, qi(8), qi(4), qi(6)).unwrap();
        let b = lattice_theta(qi(11), 8, qi(8), qi(4), qi(6)).unwrap();
        assert_eq!(a, b);
    }

    fn rocha_caridi(p: i64, pp: i64, r: i64, s: i64, precision: Q) -> QSeries {
        let mut out = QSeries::zero(precision + q(1, 24));
        for k in -20..=20 {
            let x = 2 * p * pp * k + pp * r - p * s;
            let y = 2 * p * pp * k + pp * r + p * s;
            out = out.add(&QSeries::monomial(q(x * x, 4 * p * pp), qi(0), BigInt::one(), precision + q(1, 24)));
            out = out.add(&QSeries::monomial(q(y * y, 4 * p * pp), qi(0), -BigInt::one(), precision + q(1, 24)));
        }
        out.mul(&eta_inverse_power(1, 30)).truncate(precision)
    }

    #[test]
    fn virasoro_vacuum() {
        let vac = AffineWeight::vacuum(2, 2);
        let ch = char_prinw(&vac, qi(8)).unwrap();
        let c = q(1, 2);
        assert_eq!(ch.valuation(), Some(-c / 24));
        assert_eq!(integer_coefficients(&ch), vec![1, 0, 1, 1, 2, 2, 3, 3]);
        let rc = rocha_caridi(3, 4, 1, 1, qi(8) - c / 24);
        assert_eq!(ch, rc);
    }

    #[test]
    fn leading_exponent_matches_conformal_weight() {
        for (r, n) in [(2usize, 3i64), (3, 2), (3, 3), (2, 5)] {
            let c = crate::rootdata::central_charge_prinw(r, n);
            for w in crate::rootdata::dominant_weights(r, n) {
                let ch = char_prinw(&w, qi(3)).unwrap();
                let h = crate::rootdata::conformal_dim_prinw(&w, r, n).unwrap();
                assert_eq!(ch.valuation(), Some(h - c / 24), "{w}");
            }
        }
    }

    #[test]
    fn numerator_is_alternating() {
        let w = AffineWeight::new(vec![1, 1]).unwrap();
        let num = fkw_numerator(&w, 0, qi(4)).unwrap();
        let total: BigInt = num.terms().map(|(_, _, c)| c.clone()).sum();
        assert!(total.abs() <= BigInt::from(1));
    }

    #[test]
    fn spr_vacuum_is_orbit_invariant_and_normalised() {
        let (n, r) = (2, 2);
        let model = WModel::superprincipal(n, r).unwrap();
        let vac = WModuleLabel { lambda: AffineWeight::vacuum(2, 2), a: 0 };
        let ch = char_spr(&vac, n, r, qi(6)).unwrap();
        assert_eq!(ch.valuation(), Some(-model.central_charge / 24));
        assert_eq!(ch.coefficient(-model.central_charge / 24, qi(0)), BigInt::one());
        let partner = WModuleLabel { lambda: sigma(&vac.lambda, 1), a: n + r };
        assert_eq!(char_spr(&partner, n, r, qi(6)).unwrap(), ch);
        for (_, f, _) in ch.terms() {
            assert!(f.is_integer());
        }
    }

    #[test]
    fn transfer_matches_image_characters() {
        let (n, r) = (2, 2);
        let sb = WModel::subregular(n, r).unwrap();
        let spr = WModel::superprincipal(n, r).unwrap();
        let order = qi(5);
        for x in irr_subregular(n, r).unwrap() {
            for xi in 0..n * (n + r) {
                let (s, t) = (q(xi, n), q(xi, n + r));
                let gain = relcoh_precision_gain(sb.norm, spr.norm, s, t).unwrap();
                let shift = spr.central_charge / 24 - sb.central_charge / 24;
                let ch = char_model(&sb, &x, order - gain + shift.max(qi(0)) + 1).unwrap();
                let out = relcoh_character(&ch, sb.norm, spr.norm, s, t).unwrap();
                let bound = order - spr.central_charge / 24;
                match hrel_map_plus(n, r, &x, qi(xi)).unwrap() {
                    Some(y) => {
                        let want = char_model(&spr, &y, order).unwrap();
                        out.agrees_below(&want, bound).unwrap();
                        assert_eq!(canonical_label(&spr, &y.lambda, y.a), y);
                    }
                    None => assert!(out.is_zero()),
                }
            }
        }
        let ch = char_model(&sb, &irr_subregular(n, r).unwrap()[0], qi(4)).unwrap();
        assert!(relcoh_character(&ch, sb.norm, spr.norm, q(1, 2), q(1, 4)).unwrap().is_zero());
    }
}
