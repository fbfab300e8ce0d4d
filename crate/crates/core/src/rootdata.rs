//! Type-A root and weight combinatorics.
//!
//! Finite weights of `sl_r` are stored by Dynkin labels on the fundamental
//! weights; internally most computations move to the orthonormal
//! epsilon-basis where a dominant weight is a partition `x_1 >= ... >= x_r`
//! (with `x_r = 0`) and the Weyl group acts by permuting coordinates.
//! The invariant form is then `(x|y) = sum x_i y_i - (sum x)(sum y)/r`, which
//! gives long roots square length 2.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{modp, q, qi, Q};

/// Dominant-or-not integral weight of `sl_r`, given by `r - 1` Dynkin labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteWeight {
    rank: usize,
    coeffs: Vec<i64>,
}

impl FiniteWeight {
    pub fn new(rank: usize, coeffs: Vec<i64>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameters("rank must be at least 1".into()));
        }
        if coeffs.len() != rank - 1 {
            return Err(Error::RankMismatch(rank - 1, coeffs.len()));
        }
        Ok(FiniteWeight { rank, coeffs })
    }

    pub fn zero(rank: usize) -> Self {
        FiniteWeight {
            rank,
            coeffs: vec![0; rank - 1],
        }
    }

    /// The fundamental weight `ϖ_i` (with `ϖ_0 = 0`).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        if i > 0 && i < rank {
            w.coeffs[i - 1] = 1;
        }
        w
    }

    pub fn weyl_vector(rank: usize) -> Self {
        FiniteWeight {
            rank,
            coeffs: vec![1; rank - 1],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_dominant(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Epsilon-basis coordinates, normalised so that the last entry is 0.
    pub fn to_eps(&self) -> Vec<i64> {
        let mut x = vec![0i64; self.rank];
        for i in (0..self.rank - 1).rev() {
            x[i] = x[i + 1] + self.coeffs[i];
        }
        x
    }

    pub fn from_eps(x: &[i64]) -> Self {
        let coeffs = x.windows(2).map(|w| w[0] - w[1]).collect();
        FiniteWeight {
            rank: x.len(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_rank(self.rank, other.rank)?;
        Ok(FiniteWeight {
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl fmt::Display for FiniteWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coeffs.iter().join(","))
    }
}

fn check_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(Error::RankMismatch(a, b))
    } else {
        Ok(())
    }
}

/// Affine weight of `sl_r` by its labels on `Λ_0, ..., Λ_{r-1}`; the level is
/// the label sum and is never stored separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffineWeight {
    coeffs: Vec<i64>,
}

impl AffineWeight {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameters("affine weight needs rank >= 1".into()));
        }
        Ok(AffineWeight { coeffs })
    }

    /// `level * Λ_i`.
    pub fn multiple_of_fundamental(rank: usize, level: i64, i: usize) -> Self {
        let mut coeffs = vec![0; rank];
        coeffs[i % rank] = level;
        AffineWeight { coeffs }
    }

    pub fn vacuum(rank: usize, level: i64) -> Self {
        Self::multiple_of_fundamental(rank, level, 0)
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn level(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Finite part `λ̄`.
    pub fn finite(&self) -> FiniteWeight {
        FiniteWeight {
            rank: self.rank(),
            coeffs: self.coeffs[1..].to_vec(),
        }
    }

    pub fn from_finite(finite: &FiniteWeight, level: i64) -> Self {
        let a0 = level - finite.coeffs.iter().sum::<i64>();
        let mut coeffs = vec![a0];
        coeffs.extend_from_slice(&finite.coeffs);
        AffineWeight { coeffs }
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coeffs.iter().join(","))
    }
}

/// Young diagram stored by its column heights, weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YoungDiagram {
    columns: Vec<u32>,
}

impl YoungDiagram {
    pub fn new(mut columns: Vec<u32>) -> Self {
        columns.retain(|&h| h > 0);
        columns.sort_unstable_by(|a, b| b.cmp(a));
        YoungDiagram { columns }
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    pub fn boxes(&self) -> u64 {
        self.columns.iter().map(|&h| h as u64).sum()
    }

    /// Conjugate diagram: column heights become row lengths.
    pub fn transpose(&self) -> YoungDiagram {
        let height = self.columns.first().copied().unwrap_or(0);
        let columns = (1..=height)
            .map(|row| self.columns.iter().filter(|&&h| h >= row).count() as u32)
            .collect();
        YoungDiagram::new(columns)
    }
}

/// Element of the affine Weyl group of `sl_r`: a permutation of the epsilon
/// coordinates followed by a translation in the root lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineWeylElement {
    pub translation: Vec<i64>,
    pub perm: Vec<usize>,
    pub sign: i8,
}

impl AffineWeylElement {
    /// Action `x ↦ perm(x) + scale * translation` on epsilon coordinates.
    pub fn act(&self, x: &[i64], scale: i64) -> Vec<i64> {
        self.perm
            .iter()
            .zip(&self.translation)
            .map(|(&p, t)| x[p] + scale * t)
            .collect()
    }
}

/// Permutations of `0..r` with their signs.
pub fn finite_weyl_group(r: usize) -> Vec<(Vec<usize>, i8)> {
    (0..r)
        .permutations(r)
        .map(|p| {
            let sign = permutation_sign(&p);
            (p, sign)
        })
        .collect()
}

pub fn permutation_sign(p: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The quadratic-form matrix `F_ij = min(i, j) - ij/r` on fundamental weights.
pub fn quadratic_form(r: usize) -> Vec<Vec<Q>> {
    let r_i = r as i64;
    (1..r as i64)
        .map(|i| {
            (1..r as i64)
                .map(|j| qi(i.min(j)) - q(i * j, r_i))
                .collect()
        })
        .collect()
}

pub fn inner_product(lambda: &FiniteWeight, mu: &FiniteWeight) -> Result<Q> {
    check_rank(lambda.rank, mu.rank)?;
    let f = quadratic_form(lambda.rank);
    let mut acc = qi(0);
    for (i, a) in lambda.coeffs.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in mu.coeffs.iter().enumerate() {
            acc += f[i][j] * (a * b);
        }
    }
    Ok(acc)
}

/// Invariant form on epsilon coordinates (any representative of the
/// `(1,...,1)` direction).
pub fn eps_inner(x: &[i64], y: &[i64]) -> Q {
    let r = x.len() as i64;
    let dot: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sx: i64 = x.iter().sum();
    let sy: i64 = y.iter().sum();
    qi(dot) - q(sx * sy, r)
}

/// `P̂_+^n(r)`, with the vacuum `nΛ_0` first and the remaining weights in
/// decreasing lexicographic order of labels.
pub fn dominant_weights(r: usize, n: i64) -> Vec<AffineWeight> {
    fn rec(slots: usize, remaining: i64, prefix: &mut Vec<i64>, out: &mut Vec<AffineWeight>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(AffineWeight {
                coeffs: prefix.clone(),
            });
            prefix.pop();
            return;
        }
        for a in (0..=remaining).rev() {
            prefix.push(a);
            rec(slots - 1, remaining - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 || n < 0 {
        return out;
    }
    rec(r, n, &mut Vec::with_capacity(r), &mut out);
    out
}

/// `π_{P/Q}`: `Λ_i ↦ i ∈ Z_r`.
pub fn pi_pq(lambda: &AffineWeight) -> i64 {
    let r = lambda.rank() as i64;
    let s: i64 = lambda
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| i as i64 * a)
        .sum();
    modp(s, r)
}

/// Diagram automorphism `σ^m`, `σ(Λ_i) = Λ_{i+1}`.
pub fn sigma(lambda: &AffineWeight, m: i64) -> AffineWeight {
    let r = lambda.rank();
    let shift = modp(m, r as i64) as usize;
    let mut coeffs = vec![0; r];
    for (i, a) in lambda.coeffs.iter().enumerate() {
        coeffs[(i + shift) % r] = *a;
    }
    AffineWeight { coeffs }
}

/// Young diagram `⊔ a_i R_i`, with `R_i` a column of height `i`.
pub fn to_young(lambda: &AffineWeight) -> YoungDiagram {
    let mut cols = Vec::new();
    for (i, a) in lambda.coeffs.iter().enumerate().skip(1) {
        for _ in 0..*a {
            cols.push(i as u32);
        }
    }
    YoungDiagram::new(cols)
}

/// Number of boxes `ℓ(λ)` of the associated diagram.
pub fn box_count(lambda: &AffineWeight) -> i64 {
    to_young(lambda).boxes() as i64
}

/// Reads a diagram back as a weight of `sl_rank` at `level`.  Columns of full
/// height `rank` are the empty column and are removed; their number is
/// returned alongside.
pub fn from_young(diagram: &YoungDiagram, rank: usize, level: i64) -> Result<(AffineWeight, u32)> {
    let mut coeffs = vec![0i64; rank];
    let mut full = 0u32;
    for &h in diagram.columns() {
        let h = h as usize;
        if h > rank {
            return Err(Error::InvalidParameters(format!(
                "column of height {h} does not fit sl_{rank}"
            )));
        }
        if h == rank {
            full += 1;
        } else {
            coeffs[h] += 1;
        }
    }
    let used: i64 = coeffs.iter().sum();
    if used > level {
        return Err(Error::InvalidParameters(format!(
            "diagram has {used} columns, more than level {level}"
        )));
    }
    coeffs[0] = level - used;
    Ok((AffineWeight { coeffs }, full))
}

/// Level-rank transpose `P̂_+^m(n) → P̂_+^n(m)` for `λ` of `sl_n` at level `m`.
pub fn transpose(lambda: &AffineWeight) -> Result<AffineWeight> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.coeffs.clone()));
    }
    let n = lambda.rank();
    let m = lambda.level();
    if m < 1 {
        return Err(Error::InvalidParameters("transpose needs level >= 1".into()));
    }
    let t = to_young(lambda).transpose();
    Ok(from_young(&t, m as usize, n as i64)?.0)
}

/// `(λ̄|λ̄+2ρ̄)/(2(k+r))` for an integrable weight of `sl_r` at level `k`.
pub fn conformal_dim_affine(lambda: &AffineWeight) -> Q {
    let r = lambda.rank();
    let x = lambda.finite().to_eps();
    let rho = FiniteWeight::weyl_vector(r).to_eps();
    let x2rho: Vec<i64> = x.iter().zip(&rho).map(|(a, b)| a + 2 * b).collect();
    eps_inner(&x, &x2rho) / qi(2 * (lambda.level() + r as i64))
}

/// Lowest conformal weight `h^W_λ = (λ|λ+2ρ)/2(k+r) − (λ|ρ)` of the principal
/// W-algebra module attached to `λ ∈ P̂_+^n(r)`, `k + r = (r+n)/(r+1)`, with
/// the form evaluated on finite parts.
pub fn conformal_dim_prinw(lambda: &AffineWeight, r: usize, n: i64) -> Result<Q> {
    if lambda.rank() != r {
        return Err(Error::RankMismatch(r, lambda.rank()));
    }
    if r < 2 || n < 0 {
        return Err(Error::InvalidParameters(format!("(r, n) = ({r}, {n})")));
    }
    if lambda.level() != n {
        return Err(Error::LevelMismatch {
            expected: n,
            got: lambda.level(),
        });
    }
    let ri = r as i64;
    let k_plus_r = q(ri + n, ri + 1);
    let x = lambda.finite().to_eps();
    let rho = FiniteWeight::weyl_vector(r).to_eps();
    let x2rho: Vec<i64> = x.iter().zip(&rho).map(|(a, b)| a + 2 * b).collect();
    Ok(eps_inner(&x, &x2rho) / (k_plus_r * 2) - eps_inner(&x, &rho))
}

/// Central charge of the principal W-algebra of `sl_r` at `k = −r + (r+n)/(r+1)`:
/// `(r−1)(1 − r(n−1)²/(n+r))`.
pub fn central_charge_prinw(r: usize, n: i64) -> Q {
    let ri = r as i64;
    qi(ri - 1) * (qi(1) - q(ri * (n - 1) * (n - 1), n + ri))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::binomial;
    use proptest::prelude::*;

    fn aw(c: &[i64]) -> AffineWeight {
        AffineWeight::new(c.to_vec()).unwrap()
    }

    /// Independent route: (λ|μ) = λ^T A^{-1} μ with A the Cartan matrix,
    /// inverse computed by exact Gauss–Jordan.
    fn inverse_cartan(r: usize) -> Vec<Vec<Q>> {
        let m = r - 1;
        let mut a: Vec<Vec<Q>> = (0..m)
            .map(|i| {
                (0..2 * m)
                    .map(|j| {
                        if j < m {
                            if i == j {
                                qi(2)
                            } else if (i as i64 - j as i64).abs() == 1 {
                                qi(-1)
                            } else {
                                qi(0)
                            }
                        } else if j - m == i {
                            qi(1)
                        } else {
                            qi(0)
                        }
                    })
                    .collect()
            })
            .collect();
        for c in 0..m {
            let p = (c..m).find(|&i| a[i][c] != qi(0)).unwrap();
            a.swap(c, p);
            let piv = a[c][c];
            for x in a[c].iter_mut() {
                *x /= piv;
            }
            for i in 0..m {
                if i != c {
                    let f = a[i][c];
                    let row_c = a[c].clone();
                    for (x, y) in a[i].iter_mut().zip(row_c) {
                        *x -= f * y;
                    }
                }
            }
        }
        a.into_iter().map(|row| row[m..].to_vec()).collect()
    }

    #[test]
    fn inner_product_examples() {
        let w = |r, i| FiniteWeight::fundamental(r, i);
        assert_eq!(inner_product(&w(2, 1), &w(2, 1)).unwrap(), q(1, 2));
        assert_eq!(inner_product(&w(3, 1), &w(3, 2)).unwrap(), q(1, 3));
        assert_eq!(
            inner_product(&FiniteWeight::zero(4), &FiniteWeight::new(4, vec![1, 2, 3]).unwrap()).unwrap(),
            qi(0)
        );
        assert!(matches!(
            inner_product(&w(2, 1), &w(3, 1)),
            Err(Error::RankMismatch(2, 3))
        ));
    }

    #[test]
    fn quadratic_form_is_inverse_cartan() {
        for r in 2..=6 {
            assert_eq!(quadratic_form(r), inverse_cartan(r), "r = {r}");
        }
    }

    #[test]
    fn simple_roots_reproduce_cartan_matrix() {
        for r in 2..=6usize {
            let roots: Vec<FiniteWeight> = (0..r - 1)
                .map(|i| {
                    let mut c = vec![0; r - 1];
                    c[i] = 2;
                    if i > 0 {
                        c[i - 1] = -1;
                    }
                    if i + 2 < r {
                        c[i + 1] = -1;
                    }
                    FiniteWeight::new(r, c).unwrap()
                })
                .collect();
            for i in 0..r - 1 {
                for j in 0..r - 1 {
                    let want = if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    assert_eq!(inner_product(&roots[i], &roots[j]).unwrap(), qi(want));
                }
            }
        }
    }

    #[test]
    fn eps_form_agrees_with_fundamental_form() {
        for r in 2..=5usize {
            for i in 1..r {
                for j in 1..r {
                    let a = FiniteWeight::fundamental(r, i);
                    let b = FiniteWeight::fundamental(r, j);
                    assert_eq!(eps_inner(&a.to_eps(), &b.to_eps()), inner_product(&a, &b).unwrap());
                }
            }
        }
    }

    #[test]
    fn dominant_weight_examples() {
        let w = dominant_weights(2, 2);
        assert_eq!(w, vec![aw(&[2, 0]), aw(&[1, 1]), aw(&[0, 2])]);
        assert_eq!(dominant_weights(3, 2).len(), 6);
        assert_eq!(dominant_weights(2, 0), vec![aw(&[0, 0])]);
        for r in 2..=6usize {
            for n in 0..=8i64 {
                assert_eq!(
                    dominant_weights(r, n).len() as u64,
                    binomial((n + r as i64 - 1) as u64, r as u64 - 1)
                );
            }
        }
    }

    #[test]
    fn pi_and_sigma_examples() {
        assert_eq!(pi_pq(&aw(&[0, 0, 1])), 2);
        assert_eq!(pi_pq(&aw(&[4, 0, 0])), 0);
        assert_eq!(pi_pq(&aw(&[1, 1, 3])), 1);
        assert_eq!(sigma(&aw(&[2, 0]), 1), aw(&[0, 2]));
        assert_eq!(sigma(&aw(&[1, 2, 3]), 0), aw(&[1, 2, 3]));
        assert_eq!(sigma(&aw(&[1, 0, 1]), 1), aw(&[1, 1, 0]));
    }

    #[test]
    fn transpose_examples() {
        let lambda = aw(&[1, 1, 3]);
        assert_eq!(lambda.level(), 5);
        let t = transpose(&lambda).unwrap();
        assert_eq!(t, aw(&[1, 0, 0, 1, 1]));
        assert_eq!(box_count(&lambda), 7);
        assert_eq!(box_count(&t), 7);
        assert_eq!(transpose(&aw(&[3, 0, 0])).unwrap(), aw(&[3, 0, 0]));
        assert_eq!(transpose(&AffineWeight::vacuum(3, 5)).unwrap(), AffineWeight::vacuum(5, 3));
    }

    #[test]
    fn full_columns_are_dropped() {
        // mΛ_1 of sl_n at level m is a single row; its transpose is a full column.
        let lambda = aw(&[0, 2]);
        let (w, full) = from_young(&to_young(&lambda).transpose(), 2, 2).unwrap();
        assert_eq!(full, 1);
        assert_eq!(w, AffineWeight::vacuum(2, 2));
    }

    #[test]
    fn conformal_dims() {
        assert_eq!(conformal_dim_prinw(&aw(&[0, 2]), 2, 2).unwrap(), q(1, 2));
        assert_eq!(conformal_dim_prinw(&aw(&[1, 1]), 2, 2).unwrap(), q(1, 16));
        assert_eq!(conformal_dim_prinw(&aw(&[3, 0, 0]), 3, 3).unwrap(), qi(0));
        for r in 2..=5usize {
            for n in 1..=6i64 {
                for i in 1..r {
                    let lam = AffineWeight::multiple_of_fundamental(r, n, i);
                    let ri = r as i64;
                    let ii = i as i64;
                    assert_eq!(
                        conformal_dim_prinw(&lam, r, n).unwrap(),
                        q(ii * n * (ri - ii), 2 * ri)
                    );
                }
            }
        }
        assert!(conformal_dim_prinw(&aw(&[1, 1]), 2, 3).is_err());
        assert_eq!(central_charge_prinw(2, 2), q(1, 2));
        assert_eq!(central_charge_prinw(2, 3), q(-3, 5));
    }

    #[test]
    fn affine_conformal_dims() {
        // ŝl_2 level 2: h = j(j+1)/(k+2) with j = a_1/2.
        assert_eq!(conformal_dim_affine(&aw(&[1, 1])), q(3, 16));
        assert_eq!(conformal_dim_affine(&aw(&[0, 2])), q(1, 2));
    }

    #[test]
    fn young_transpose_is_involution() {
        for n in 2..=4usize {
            for m in 1..=4i64 {
                for lam in dominant_weights(n, m) {
                    let d = to_young(&lam);
                    assert_eq!(d.transpose().transpose(), d);
                    assert_eq!(d.transpose().boxes(), d.boxes());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn sigma_shifts_pi_by_level(coeffs in proptest::collection::vec(0i64..5, 2..6), m in -6i64..6) {
            let lam = AffineWeight::new(coeffs).unwrap();
            let r = lam.rank() as i64;
            prop_assert_eq!(pi_pq(&sigma(&lam, m)), modp(pi_pq(&lam) + m * lam.level(), r));
            prop_assert_eq!(sigma(&lam, r), lam.clone());
            prop_assert_eq!(sigma(&sigma(&lam, m), -m), lam);
        }

        #[test]
        fn pi_is_box_count_mod_rank(coeffs in proptest::collection::vec(0i64..5, 2..6)) {
            let lam = AffineWeight::new(coeffs).unwrap();
            let r = lam.rank() as i64;
            prop_assert_eq!(pi_pq(&lam), modp(box_count(&lam), r));
        }

        #[test]
        fn transpose_preserves_pi_mod_other_rank(coeffs in proptest::collection::vec(0i64..4, 2..5)) {
            let lam = AffineWeight::new(coeffs).unwrap();
            prop_assume!(lam.level() >= 2);
            let t = transpose(&lam).unwrap();
            prop_assert_eq!(t.rank() as i64, lam.level());
            prop_assert_eq!(t.level(), lam.rank() as i64);
            prop_assert_eq!(modp(box_count(&t), lam.level()), modp(box_count(&lam), lam.level()));
        }
    }
}
