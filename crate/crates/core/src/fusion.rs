//! Tensor-product multiplicities of `sl_r` and level-`n` affine fusion rules.
//!
//! Production path: Freudenthal weight multiplicities, Racah–Speiser for the
//! finite tensor product, then Kac–Walton reflection into the level-`n`
//! alcove.  The Verlinde formula with the Kac–Peterson S-matrix is kept as an
//! independent floating-point cross-check.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{frac, q, to_f64};
use crate::ringkit::FusionRing;
use crate::rootdata::{
    dominant_weights, eps_inner, finite_weyl_group, AffineWeight, FiniteWeight,
};

const MAX_REFLECTIONS: usize = 100_000;
pub const VERLINDE_TOLERANCE: f64 = 1e-6;

fn rho_eps(r: usize) -> Vec<i64> {
    (0..r as i64).rev().collect()
}

/// Partitions with at most `x.len()` parts that are dominated by `x`,
/// in decreasing lexicographic order (so `x` comes first).
fn dominated_partitions(x: &[i64]) -> Vec<Vec<i64>> {
    fn rec(x_prefix: &[i64], cur: &mut Vec<i64>, left: i64, bound: i64, acc_x: i64, acc: i64, out: &mut Vec<Vec<i64>>) {
        let pos = cur.len();
        if pos == x_prefix.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let acc_x = acc_x + x_prefix[pos];
        let slots = (x_prefix.len() - pos) as i64;
        for v in (0..=bound.min(left)).rev() {
            if acc + v > acc_x {
                continue;
            }
            if v * slots < left {
                break;
            }
            cur.push(v);
            rec(x_prefix, cur, left - v, v, acc_x, acc + v, out);
            cur.pop();
        }
    }
    let total: i64 = x.iter().sum();
    let mut out = Vec::new();
    rec(x, &mut Vec::with_capacity(x.len()), total, x[0], 0, 0, &mut out);
    out
}

/// Dominant weight multiplicities of the irreducible `sl_r` module with
/// highest weight `mu`, keyed by epsilon coordinates (partitions of the
/// same size as that of `mu`).  Computed with Freudenthal's recursion.
pub fn weight_multiplicities(mu: &FiniteWeight) -> Result<BTreeMap<Vec<i64>, u64>> {
    if !mu.is_dominant() {
        return Err(Error::NotDominant(mu.coeffs().to_vec()));
    }
    let x = mu.to_eps();
    let r = x.len();
    let rho = rho_eps(r);
    let norm = |v: &[i64]| -> i64 { v.iter().zip(&rho).map(|(a, b)| (a + b) * (a + b)).sum() };
    let parts = dominated_partitions(&x);
    let top = norm(&x);
    let mut mult: HashMap<Vec<i64>, i64> = HashMap::new();
    mult.insert(x.clone(), 1);
    for y in parts.iter().skip(1) {
        let lhs = top - norm(y);
        let mut sum = 0i64;
        for i in 0..r {
            for j in i + 1..r {
                let mut z = y.clone();
                loop {
                    z[i] += 1;
                    z[j] -= 1;
                    if z[j] < 0 || z[i] > x[0] {
                        break;
                    }
                    let mut sorted = z.clone();
                    sorted.sort_unstable_by(|a, b| b.cmp(a));
                    if let Some(m) = mult.get(&sorted) {
                        sum += m * (z[i] - z[j]);
                    }
                }
            }
        }
        debug_assert!(lhs > 0 && (2 * sum) % lhs == 0);
        let m = 2 * sum / lhs;
        if m > 0 {
            mult.insert(y.clone(), m);
        }
    }
    Ok(mult.into_iter().map(|(k, v)| (k, v as u64)).collect())
}

/// Lexicographic successor permutation of `v`; false once `v` is descending.
fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Sorts `z` decreasingly, returning the sign of the sorting permutation, or
/// `None` when two entries coincide.
fn sort_with_sign(z: &mut [i64]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..z.len() {
        let mut j = i;
        while j > 0 && z[j - 1] < z[j] {
            z.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && z[j - 1] == z[j] {
            return None;
        }
    }
    Some(sign)
}

/// `dim Hom(V_ν, V_λ ⊗ V_μ)` for all `ν`, by Racah–Speiser.
pub fn tensor_multiplicities(lambda: &FiniteWeight, mu: &FiniteWeight) -> Result<BTreeMap<FiniteWeight, u64>> {
    if lambda.rank() != mu.rank() {
        return Err(Error::RankMismatch(lambda.rank(), mu.rank()));
    }
    for w in [lambda, mu] {
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.coeffs().to_vec()));
        }
    }
    let (big, small) = if lambda.to_eps().iter().sum::<i64>() >= mu.to_eps().iter().sum::<i64>() {
        (lambda, mu)
    } else {
        (mu, lambda)
    };
    let r = big.rank();
    let rho = rho_eps(r);
    let shift: Vec<i64> = big.to_eps().iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (dom, m) in weight_multiplicities(small)? {
        let mut w = dom.clone();
        w.reverse();
        loop {
            let mut z: Vec<i64> = shift.iter().zip(&w).map(|(a, b)| a + b).collect();
            if let Some(sign) = sort_with_sign(&mut z) {
                let nu: Vec<i64> = z.iter().zip(&rho).map(|(a, b)| a - b).collect();
                let last = nu[r - 1];
                let nu: Vec<i64> = nu.iter().map(|v| v - last).collect();
                *acc.entry(nu).or_insert(0) += sign as i64 * m as i64;
            }
            if !next_permutation(&mut w) {
                break;
            }
        }
    }
    let mut out = BTreeMap::new();
    for (nu, m) in acc {
        debug_assert!(m >= 0, "negative tensor multiplicity");
        if m > 0 {
            out.insert(FiniteWeight::from_eps(&nu), m as u64);
        }
    }
    Ok(out)
}

/// Brings a shifted weight `x` (epsilon coordinates) into the closed
/// fundamental alcove of level `k` for the shifted action.  `choose` picks
/// which applicable reflection to apply next (index into the candidate list,
/// where `0` stands for the affine reflection and `i` for swapping `i-1, i`).
/// Returns the accumulated sign, or `None` if `x` lies on a wall.
pub(crate) fn reflect_to_alcove<F>(x: &mut [i64], k: i64, mut choose: F) -> Result<Option<i8>>
where
    F: FnMut(&[usize]) -> usize,
{
    let r = x.len();
    let mut sign = 1i8;
    let mut candidates = Vec::with_capacity(r);
    for _ in 0..MAX_REFLECTIONS {
        candidates.clear();
        if x[0] - x[r - 1] > k {
            candidates.push(0);
        }
        for i in 1..r {
            if x[i - 1] < x[i] {
                candidates.push(i);
            }
        }
        if candidates.is_empty() {
            let on_wall = x.windows(2).any(|w| w[0] == w[1]) || x[0] - x[r - 1] == k;
            return Ok(if on_wall { None } else { Some(sign) });
        }
        let c = candidates[choose(&candidates) % candidates.len()];
        if c == 0 {
            let (a, b) = (x[0], x[r - 1]);
            x[0] = b + k;
            x[r - 1] = a - k;
        } else {
            x.swap(c - 1, c);
        }
        sign = -sign;
    }
    Err(Error::ReflectionOverflow(MAX_REFLECTIONS))
}

fn check_level(w: &AffineWeight, n: i64) -> Result<()> {
    if w.level() != n {
        return Err(Error::LevelMismatch {
            expected: n,
            got: w.level(),
        });
    }
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.coeffs().to_vec()));
    }
    Ok(())
}

pub(crate) fn affine_fusion_with<F>(
    lambda: &AffineWeight,
    mu: &AffineWeight,
    n: i64,
    mut choose: F,
) -> Result<BTreeMap<AffineWeight, u64>>
where
    F: FnMut(&[usize]) -> usize,
{
    check_level(lambda, n)?;
    check_level(mu, n)?;
    if lambda.rank() != mu.rank() {
        return Err(Error::RankMismatch(lambda.rank(), mu.rank()));
    }
    let r = lambda.rank();
    let k = n + r as i64;
    let rho = rho_eps(r);
    let mut acc: BTreeMap<AffineWeight, i64> = BTreeMap::new();
    for (nu, m) in tensor_multiplicities(&lambda.finite(), &mu.finite())? {
        let mut x: Vec<i64> = nu.to_eps().iter().zip(&rho).map(|(a, b)| a + b).collect();
        if let Some(sign) = reflect_to_alcove(&mut x, k, &mut choose)? {
            let labels: Vec<i64> = x.windows(2).map(|w| w[0] - w[1] - 1).collect();
            let fin = FiniteWeight::new(r, labels)?;
            let w = AffineWeight::from_finite(&fin, n);
            *acc.entry(w).or_insert(0) += sign as i64 * m as i64;
        }
    }
    let mut out = BTreeMap::new();
    for (w, m) in acc {
        if m < 0 {
            return Err(Error::MalformedRing(format!("negative fusion coefficient at {w}")));
        }
        if m > 0 {
            out.insert(w, m as u64);
        }
    }
    Ok(out)
}

/// Kac–Walton fusion multiplicities `N_{λμ}^ν` of `L_n(sl_r)`.
pub fn affine_fusion(lambda: &AffineWeight, mu: &AffineWeight, n: i64) -> Result<BTreeMap<AffineWeight, u64>> {
    affine_fusion_with(lambda, mu, n, |_| 0)
}

/// Modular S-matrix of `L_n(sl_r)` on the basis `dominant_weights(r, n)`.
#[derive(Debug, Clone)]
pub struct AffineSMatrix {
    pub r: usize,
    pub n: i64,
    pub basis: Vec<AffineWeight>,
    pub entries: Vec<Vec<Complex64>>,
}

/// Kac–Peterson formula
/// `S_{λμ} ∝ Σ_{w ∈ S_r} ε(w) exp(2πi (w(λ̄+ρ̄) | μ̄+ρ̄)/(n+r))`,
/// normalised so that the vacuum row is real and positive.  With this sign
/// `S_{σλ,μ} = exp(−2πi π(μ)/r) S_{λμ}`.
pub fn affine_smatrix(r: usize, n: i64) -> AffineSMatrix {
    let basis = dominant_weights(r, n);
    let k = n + r as i64;
    let rho = rho_eps(r);
    let shifted: Vec<Vec<i64>> = basis
        .iter()
        .map(|w| w.finite().to_eps().iter().zip(&rho).map(|(a, b)| a + b).collect())
        .collect();
    let weyl = finite_weyl_group(r);
    let raw = |x: &[i64], y: &[i64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (perm, sign) in &weyl {
            let wx: Vec<i64> = perm.iter().map(|&p| x[p]).collect();
            let phase = frac(&(eps_inner(&wx, y) / q(k, 1)));
            let angle = 2.0 * std::f64::consts::PI * to_f64(&phase);
            acc += Complex64::from_polar(*sign as f64, angle);
        }
        acc
    };
    let t00 = raw(&shifted[0], &shifted[0]);
    let norm = ((r as f64) * (k as f64).powi(r as i32 - 1)).sqrt();
    let fix = t00.conj() / t00.norm() / norm;
    let entries = shifted
        .par_iter()
        .map(|x| shifted.iter().map(|y| raw(x, y) * fix).collect())
        .collect();
    AffineSMatrix { r, n, basis, entries }
}

/// `N_{ij}^k = Σ_τ S_iτ S_jτ conj(S_kτ) / S_{unit,τ}`, rounded with a residual
/// certificate.
pub fn verlinde_coefficients(s: &[Vec<Complex64>], unit: usize, i: usize, j: usize) -> Result<Vec<(usize, u64)>> {
    let d = s.len();
    let mut out = Vec::new();
    for k in 0..d {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..d {
            acc += s[i][t] * s[j][t] * s[k][t].conj() / s[unit][t];
        }
        let rounded = acc.re.round();
        let residual = (acc.re - rounded).abs().max(acc.im.abs());
        if residual >= VERLINDE_TOLERANCE {
            return Err(Error::VerlindeResidual {
                residual,
                tolerance: VERLINDE_TOLERANCE,
            });
        }
        if rounded < 0.0 {
            return Err(Error::MalformedRing(format!(
                "negative Verlinde coefficient {rounded} at ({i}, {j}, {k})"
            )));
        }
        if rounded > 0.0 {
            out.push((k, rounded as u64));
        }
    }
    Ok(out)
}

/// Largest Verlinde rounding residual over a full table, or an error if any
/// entry fails the certificate.
pub fn verlinde_max_residual(s: &[Vec<Complex64>], unit: usize) -> f64 {
    let d = s.len();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in i..d {
            for k in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..d {
                    acc += s[i][t] * s[j][t] * s[k][t].conj() / s[unit][t];
                }
                worst = worst.max((acc.re - acc.re.round()).abs()).max(acc.im.abs());
            }
        }
    }
    worst
}

/// Verlinde-formula fusion multiplicities (floating-point oracle).
pub fn verlinde_fusion(lambda: &AffineWeight, mu: &AffineWeight, n: i64) -> Result<BTreeMap<AffineWeight, u64>> {
    check_level(lambda, n)?;
    check_level(mu, n)?;
    if lambda.rank() != mu.rank() {
        return Err(Error::RankMismatch(lambda.rank(), mu.rank()));
    }
    let s = affine_smatrix(lambda.rank(), n);
    let idx = |w: &AffineWeight| s.basis.iter().position(|b| b == w).expect("weight in basis");
    let coeffs = verlinde_coefficients(&s.entries, 0, idx(lambda), idx(mu))?;
    Ok(coeffs.into_iter().map(|(k, m)| (s.basis[k].clone(), m)).collect())
}

/// Label used for affine weights in ring bases and JSON: `"[a0,a1,...]"`.
pub fn weight_label(w: &AffineWeight) -> String {
    w.to_string()
}

static RING_CACHE: Lazy<Mutex<HashMap<(usize, i64), Arc<FusionRing>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// `K(L_n(sl_r))` on the basis `dominant_weights(r, n)`, with Picard subset
/// `{nΛ_i}`.  Memoized per `(r, n)`.
pub fn fusion_ring_affine(r: usize, n: i64) -> Result<Arc<FusionRing>> {
    if r < 2 || n < 0 {
        return Err(Error::InvalidParameters(format!(
            "affine fusion needs r >= 2 and n >= 0, got (r, n) = ({r}, {n})"
        )));
    }
    if let Some(ring) = RING_CACHE.lock().expect("cache lock").get(&(r, n)) {
        return Ok(ring.clone());
    }
    let basis = dominant_weights(r, n);
    let index: HashMap<&AffineWeight, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (i..basis.len()).map(move |j| (i, j)))
        .collect();
    let products: Vec<((usize, usize), Vec<(usize, u64)>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            affine_fusion(&basis[i], &basis[j], n)
                .map(|m| ((i, j), m.into_iter().map(|(w, c)| (index[&w], c)).collect()))
        })
        .collect::<Result<_>>()?;
    let mut pic: Vec<usize> = (0..r)
        .map(|i| index[&AffineWeight::multiple_of_fundamental(r, n, i)])
        .collect();
    pic.sort_unstable();
    pic.dedup();
    let ring = Arc::new(FusionRing::new(
        basis.iter().map(weight_label).collect(),
        0,
        pic,
        products.into_iter().collect(),
    )?);
    RING_CACHE.lock().expect("cache lock").insert((r, n), ring.clone());
    Ok(ring)
}
