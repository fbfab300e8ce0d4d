//! Relative semi-infinite cohomology of a pair of Heisenberg Fock modules.
//!
//! The relative complex of `π^{B+}_λ ⊗ π^{B−}_μ` (norms `±b`) is the Fock
//! space of `B^±_{(−k)}`, `φ_{(−k)}`, `φ*_{(−k)}` for `k ≥ 1`, with
//! `d = Σ_{k≥1} (A_{(−k)} φ*_{(k)} + φ*_{(−k)} A_{(k)})`, `A = B^+ + B^−`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Basis monomial of the relative complex.  Boson modes are kept in
/// weakly decreasing order, fermion modes strictly increasing; the state is
/// `B^+ B^- φ_{(−i_1)}…φ_{(−i_a)} φ*_{(−j_1)}…φ*_{(−j_b)} |λ, μ⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RelBasisState {
    pub b_plus: Vec<u32>,
    pub b_minus: Vec<u32>,
    pub phi: Vec<u32>,
    pub phi_star: Vec<u32>,
}

impl RelBasisState {
    pub fn weight(&self) -> u32 {
        self.b_plus.iter().chain(&self.b_minus).chain(&self.phi).chain(&self.phi_star).sum()
    }

    pub fn ghost(&self) -> i32 {
        self.phi_star.len() as i32 - self.phi.len() as i32
    }

    pub fn parity(&self) -> u32 {
        ((self.phi.len() + self.phi_star.len()) % 2) as u32
    }
}

fn partitions(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn strict_partitions(n: u32, min_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in min_part..=n {
        for mut rest in strict_partitions(n - first, first + 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn states_of_weight(w: u32) -> Vec<RelBasisState> {
    let mut out = Vec::new();
    for w1 in 0..=w {
        for w2 in 0..=w - w1 {
            for w3 in 0..=w - w1 - w2 {
                let w4 = w - w1 - w2 - w3;
                for bp in partitions(w1, w1) {
                    for bm in partitions(w2, w2) {
                        for ph in strict_partitions(w3, 1) {
                            for ps in strict_partitions(w4, 1) {
                                out.push(RelBasisState {
                                    b_plus: bp.clone(),
                                    b_minus: bm.clone(),
                                    phi: ph.clone(),
                                    phi_star: ps.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn add_part(parts: &[u32], k: u32) -> Vec<u32> {
    let mut v = parts.to_vec();
    let pos = v.iter().position(|&x| x < k).unwrap_or(v.len());
    v.insert(pos, k);
    v
}

fn remove_part(parts: &[u32], k: u32) -> Option<(Vec<u32>, i64)> {
    let mult = parts.iter().filter(|&&x| x == k).count() as i64;
    let pos = parts.iter().position(|&x| x == k)?;
    let mut v = parts.to_vec();
    v.remove(pos);
    Some((v, mult))
}

/// `d` applied to one basis state, as `(target, coefficient)` pairs.
fn apply_d(s: &RelBasisState, b: Q) -> Vec<(RelBasisState, Q)> {
    let mut out = Vec::new();
    // A_{(−k)} φ*_{(k)}: φ*_{(k)} contracts φ_{(−k)} at fermion position p.
    for (p, &k) in s.phi.iter().enumerate() {
        let sign = if p % 2 == 0 { qi(1) } else { qi(-1) };
        let mut phi = s.phi.clone();
        phi.remove(p);
        out.push((
            RelBasisState {
                b_plus: add_part(&s.b_plus, k),
                phi: phi.clone(),
                ..s.clone()
            },
            sign,
        ));
        out.push((
            RelBasisState {
                b_minus: add_part(&s.b_minus, k),
                phi,
                ..s.clone()
            },
            sign,
        ));
    }
    // φ*_{(−k)} A_{(k)}
    let mut ks: Vec<u32> = s.b_plus.iter().chain(&s.b_minus).copied().collect();
    ks.sort_unstable();
    ks.dedup();
    for k in ks {
        if s.phi_star.contains(&k) {
            continue;
        }
        let passed = s.phi.len() + s.phi_star.iter().filter(|&&j| j < k).count();
        let sign = if passed % 2 == 0 { qi(1) } else { qi(-1) };
        let phi_star = add_part_ascending(&s.phi_star, k);
        let kq = qi(k as i64);
        if let Some((bp, mult)) = remove_part(&s.b_plus, k) {
            out.push((
                RelBasisState {
                    b_plus: bp,
                    phi_star: phi_star.clone(),
                    ..s.clone()
                },
                sign * b * kq * mult,
            ));
        }
        if let Some((bm, mult)) = remove_part(&s.b_minus, k) {
            out.push((
                RelBasisState {
                    b_minus: bm,
                    phi_star,
                    ..s.clone()
                },
                -sign * b * kq * mult,
            ));
        }
    }
    out
}

fn add_part_ascending(parts: &[u32], k: u32) -> Vec<u32> {
    let mut v = parts.to_vec();
    let pos = v.iter().position(|&x| x > k).unwrap_or(v.len());
    v.insert(pos, k);
    v
}

/// Dense matrix over `Q`; `rows[i][j]` is the coefficient of target `i` in
/// the image of source `j`.
pub type Matrix = Vec<Vec<Q>>;

#[derive(Debug, Clone, Serialize)]
pub struct GradedComplex {
    pub lambda: Q,
    pub mu: Q,
    pub norm: Q,
    pub max_weight: u32,
    /// Basis per `(weight, ghost)`; empty when `λ + μ ≠ 0`.
    pub basis: BTreeMap<(u32, i32), Vec<RelBasisState>>,
    /// `d: (w, p) → (w, p + 1)`.
    pub differential: BTreeMap<(u32, i32), Matrix>,
}

/// Builds the relative complex up to conformal weight `max_weight`.
pub fn build_rel_complex(lambda: Q, mu: Q, norm: Q, max_weight: u32) -> Result<GradedComplex> {
    if norm.is_zero() {
        return Err(Error::DegenerateNorm);
    }
    let mut complex = GradedComplex {
        lambda,
        mu,
        norm,
        max_weight,
        basis: BTreeMap::new(),
        differential: BTreeMap::new(),
    };
    if !(lambda + mu).is_zero() {
        return Ok(complex);
    }
    for w in 0..=max_weight {
        for s in states_of_weight(w) {
            complex.basis.entry((w, s.ghost())).or_default().push(s);
        }
    }
    let index: HashMap<(u32, i32), HashMap<&RelBasisState, usize>> = complex
        .basis
        .iter()
        .map(|(k, v)| (*k, v.iter().enumerate().map(|(i, s)| (s, i)).collect()))
        .collect();
    let mut differential = BTreeMap::new();
    for (&(w, p), states) in &complex.basis {
        let Some(targets) = index.get(&(w, p + 1)) else { continue };
        let mut m = vec![vec![qi(0); states.len()]; targets.len()];
        for (j, s) in states.iter().enumerate() {
            for (t, c) in apply_d(s, norm) {
                let i = targets[&t];
                m[i][j] += c;
            }
        }
        differential.insert((w, p), m);
    }
    complex.differential = differential;
    Ok(complex)
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(qi(0), |acc, k| acc + row[k] * b[k][j]))
                .collect()
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination over `Z`, after
/// clearing denominators row by row.
pub fn rank_exact(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| BigInt::from(x.numer() * (l / x.denom()))).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, piv);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

impl GradedComplex {
    /// Checks `d∘d = 0` on every block.
    pub fn check_nilpotent(&self) -> Result<()> {
        for (&(w, p), d1) in &self.differential {
            if let Some(d2) = self.differential.get(&(w, p + 1)) {
                let sq = mat_mul(d2, d1);
                if sq.iter().flatten().any(|x| !x.is_zero()) {
                    return Err(Error::NonNilpotent { weight: w, ghost: p });
                }
            }
        }
        Ok(())
    }

    fn rank_of(&self, key: (u32, i32)) -> usize {
        self.differential.get(&key).map_or(0, rank_exact)
    }

    /// Alternating basis count per weight.
    pub fn euler_characteristics(&self) -> BTreeMap<u32, i64> {
        let mut out = BTreeMap::new();
        for (&(w, p), v) in &self.basis {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            *out.entry(w).or_insert(0) += sign * v.len() as i64;
        }
        out
    }
}

/// `dim H^{(w,p)} = dim C^{(w,p)} − rank d_{(w,p)} − rank d_{(w,p−1)}`.
pub fn cohomology_dims(complex: &GradedComplex) -> Result<BTreeMap<(u32, i32), usize>> {
    complex.check_nilpotent()?;
    let keys: Vec<(u32, i32)> = complex.differential.keys().copied().collect();
    let ranks: HashMap<(u32, i32), usize> = keys.par_iter().map(|&k| (k, complex.rank_of(k))).collect();
    Ok(complex
        .basis
        .iter()
        .map(|(&(w, p), v)| {
            let out = ranks.get(&(w, p)).copied().unwrap_or(0);
            let inc = ranks.get(&(w, p - 1)).copied().unwrap_or(0);
            ((w, p), v.len() - out - inc)
        })
        .collect())
}

/// Euler characteristic per weight computed from cohomology.
pub fn euler_from_cohomology(dims: &BTreeMap<(u32, i32), usize>) -> BTreeMap<u32, i64> {
    let mut out = BTreeMap::new();
    for (&(w, p), &d) in dims {
        let sign = if p % 2 == 0 { 1 } else { -1 };
        *out.entry(w).or_insert(0) += sign * d as i64;
    }
    out
}

/// Small cochain complex: dimensions per ghost degree and `D: p → p+1`.
#[derive(Debug, Clone, Serialize)]
pub struct SmallComplex {
    pub dims: BTreeMap<i32, usize>,
    pub maps: BTreeMap<i32, Matrix>,
}

impl SmallComplex {
    pub fn check_nilpotent(&self) -> Result<()> {
        for (&p, d1) in &self.maps {
            if let Some(d2) = self.maps.get(&(p + 1)) {
                if mat_mul(d2, d1).iter().flatten().any(|x| !x.is_zero()) {
                    return Err(Error::NonNilpotent { weight: 0, ghost: p });
                }
            }
        }
        Ok(())
    }

    pub fn cohomology(&self) -> Result<BTreeMap<i32, usize>> {
        self.check_nilpotent()?;
        let rank = |p: i32| self.maps.get(&p).map_or(0, rank_exact);
        Ok(self.dims.iter().map(|(&p, &d)| (p, d - rank(p) - rank(p - 1))).collect())
    }

    /// Tensor product with the Koszul sign `D(x⊗y) = Dx⊗y + (−1)^{|x|} x⊗Dy`.
    pub fn tensor(&self, other: &SmallComplex) -> SmallComplex {
        // basis of degree p: pairs (p1, i, p2, j) with p1 + p2 = p, ordered by p1
        let mut blocks: BTreeMap<i32, Vec<(i32, usize, i32, usize)>> = BTreeMap::new();
        for (&p1, &d1) in &self.dims {
            for (&p2, &d2) in &other.dims {
                for i in 0..d1 {
                    for j in 0..d2 {
                        blocks.entry(p1 + p2).or_default().push((p1, i, p2, j));
                    }
                }
            }
        }
        let index: HashMap<(i32, usize, i32, usize), usize> = blocks
            .values()
            .flat_map(|v| v.iter().enumerate().map(|(k, e)| (*e, k)))
            .collect();
        let mut maps = BTreeMap::new();
        for (&p, src) in &blocks {
            let Some(tgt) = blocks.get(&(p + 1)) else { continue };
            let mut m = vec![vec![qi(0); src.len()]; tgt.len()];
            for (col, &(p1, i, p2, j)) in src.iter().enumerate() {
                if let Some(d) = self.maps.get(&p1) {
                    for (row_i, row) in d.iter().enumerate() {
                        if !row[i].is_zero() {
                            m[index[&(p1 + 1, row_i, p2, j)]][col] += row[i];
                        }
                    }
                }
                if let Some(d) = other.maps.get(&p2) {
                    let sign = if p1 % 2 == 0 { qi(1) } else { qi(-1) };
                    for (row_j, row) in d.iter().enumerate() {
                        if !row[j].is_zero() {
                            m[index[&(p1, i, p2 + 1, row_j)]][col] += sign * row[j];
                        }
                    }
                }
            }
            maps.insert(p, m);
        }
        SmallComplex {
            dims: blocks.iter().map(|(&p, v)| (p, v.len())).collect(),
            maps,
        }
    }

    pub fn direct_sum(&self, other: &SmallComplex) -> SmallComplex {
        let mut dims = self.dims.clone();
        for (&p, &d) in &other.dims {
            *dims.entry(p).or_insert(0) += d;
        }
        let mut maps = BTreeMap::new();
        let keys: std::collections::BTreeSet<i32> = self.maps.keys().chain(other.maps.keys()).copied().collect();
        for p in keys {
            let (s0, s1) = (self.dims.get(&p).copied().unwrap_or(0), self.dims.get(&(p + 1)).copied().unwrap_or(0));
            let (o0, o1) = (other.dims.get(&p).copied().unwrap_or(0), other.dims.get(&(p + 1)).copied().unwrap_or(0));
            let mut m = vec![vec![qi(0); s0 + o0]; s1 + o1];
            if let Some(a) = self.maps.get(&p) {
                for (i, row) in a.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        m[i][j] = *x;
                    }
                }
            }
            if let Some(b) = other.maps.get(&p) {
                for (i, row) in b.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        m[s1 + i][s0 + j] = *x;
                    }
                }
            }
            maps.insert(p, m);
        }
        SmallComplex { dims, maps }
    }
}

/// Homogeneous piece of total degree `deg` of `C[x, y] ⊗ Λ[ψ, ψ*]`
/// (`ψ` in ghost degree −1, `ψ*` in +1) with `D = ψ* ∂_y + x ∂_ψ`.
pub fn koszul_piece(deg: u32) -> SmallComplex {
    // monomials x^i y^j ψ^e ψ*^f, i + j + e + f = deg
    let mut blocks: BTreeMap<i32, Vec<(u32, u32, u32, u32)>> = BTreeMap::new();
    for e in 0..=1u32.min(deg) {
        for f in 0..=1u32.min(deg - e) {
            for i in 0..=deg - e - f {
                let j = deg - e - f - i;
                blocks.entry(f as i32 - e as i32).or_default().push((i, j, e, f));
            }
        }
    }
    let mut maps = BTreeMap::new();
    for (&p, src) in &blocks {
        let Some(tgt) = blocks.get(&(p + 1)) else { continue };
        let pos = |m: (u32, u32, u32, u32)| tgt.iter().position(|&t| t == m).expect("target monomial");
        let mut mat = vec![vec![qi(0); src.len()]; tgt.len()];
        for (col, &(i, j, e, f)) in src.iter().enumerate() {
            if f == 0 && j > 0 {
                let sign = if e == 0 { 1 } else { -1 };
                mat[pos((i, j - 1, e, 1))][col] += qi(sign * j as i64);
            }
            if e == 1 {
                mat[pos((i + 1, j, 0, f))][col] += qi(1);
            }
        }
        maps.insert(p, mat);
    }
    SmallComplex {
        dims: blocks.iter().map(|(&p, v)| (p, v.len())).collect(),
        maps,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KoszulReport {
    pub degree_bound: u32,
    /// Cohomology per ghost degree, summed over total degrees `≤ bound`.
    pub cohomology: BTreeMap<i32, usize>,
    pub basis_dims: BTreeMap<i32, usize>,
}

/// Cohomology of the Koszul factor truncated at total degree `bound`
/// (`x, y, ψ, ψ*` each of degree one; `D` preserves the degree).
pub fn koszul_factor(bound: u32) -> Result<KoszulReport> {
    let mut cohomology = BTreeMap::new();
    let mut basis_dims = BTreeMap::new();
    for deg in 0..=bound {
        let piece = koszul_piece(deg);
        for (p, d) in piece.cohomology()? {
            *cohomology.entry(p).or_insert(0) += d;
        }
        for (&p, &d) in &piece.dims {
            *basis_dims.entry(p).or_insert(0) += d;
        }
    }
    for p in [-1, 0, 1] {
        cohomology.entry(p).or_insert(0);
    }
    Ok(KoszulReport {
        degree_bound: bound,
        cohomology,
        basis_dims,
    })
}

/// Weight-`w` part of `⊗_{k≥1}` (mode-`k` Koszul factor, degree counted as
/// weight `k`), built as an explicit tensor product.
pub fn kunneth_block(w: u32) -> SmallComplex {
    fn go(k: u32, w: u32, remaining: u32) -> SmallComplex {
        if k > w {
            let mut dims = BTreeMap::new();
            if remaining == 0 {
                dims.insert(0, 1);
            }
            return SmallComplex { dims, maps: BTreeMap::new() };
        }
        let mut acc = SmallComplex { dims: BTreeMap::new(), maps: BTreeMap::new() };
        for deg in 0..=remaining / k {
            let rest = go(k + 1, w, remaining - deg * k);
            if rest.dims.is_empty() {
                continue;
            }
            acc = acc.direct_sum(&koszul_piece(deg).tensor(&rest));
        }
        acc
    }
    go(1, w, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(6, 6).len(), 11);
        assert_eq!(strict_partitions(6, 1).len(), 4);
    }

    #[test]
    fn off_diagonal_charge_gives_zero_complex() {
        let c = build_rel_complex(qi(1), qi(1), qi(1), 4).unwrap();
        assert!(c.basis.is_empty());
        assert!(cohomology_dims(&c).unwrap().is_empty());
        assert_eq!(build_rel_complex(qi(1), qi(-1), qi(0), 2).unwrap_err(), Error::DegenerateNorm);
    }

    #[test]
    fn cohomology_is_one_dimensional() {
        for b in [qi(1), qi(-1), q(1, 2), qi(2)] {
            for l in [qi(0), qi(1), q(-3, 2), qi(5)] {
                let c = build_rel_complex(l, -l, b, 5).unwrap();
                let h = cohomology_dims(&c).unwrap();
                for (&(w, p), &d) in &h {
                    let want = usize::from(w == 0 && p == 0);
                    assert_eq!(d, want, "b={b} lambda={l} at ({w},{p})");
                }
                assert_eq!(euler_from_cohomology(&h), c.euler_characteristics());
            }
        }
    }

    #[test]
    fn ranks_independent_of_ordering() {
        let c = build_rel_complex(qi(1), qi(-1), q(1, 2), 4).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for m in c.differential.values() {
            let mut rows: Vec<usize> = (0..m.len()).collect();
            let mut cols: Vec<usize> = (0..m.first().map_or(0, |r| r.len())).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            let p: Matrix = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
            assert_eq!(rank_exact(&p), rank_exact(m));
        }
    }

    #[test]
    fn bareiss_against_small_cases() {
        let m = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert_eq!(rank_exact(&m), 1);
        let m = vec![vec![q(1, 2), qi(1)], vec![qi(0), q(1, 3)], vec![qi(1), qi(2)]];
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_exact(&vec![]), 0);
    }

    #[test]
    fn koszul() {
        let r = koszul_factor(0).unwrap();
        assert_eq!(r.cohomology, BTreeMap::from([(-1, 0), (0, 1), (1, 0)]));
        let r = koszul_factor(5).unwrap();
        assert_eq!(r.cohomology, BTreeMap::from([(-1, 0), (0, 1), (1, 0)]));
    }

    #[test]
    fn kunneth_weight_two() {
        let c = build_rel_complex(qi(1), qi(-1), qi(1), 3).unwrap();
        for w in 1..=3 {
            let k = kunneth_block(w);
            let dims: BTreeMap<i32, usize> = c
                .basis
                .iter()
                .filter(|((ww, _), _)| *ww == w)
                .map(|((_, p), v)| (*p, v.len()))
                .collect();
            assert_eq!(k.dims, dims, "weight {w}");
            assert!(k.cohomology().unwrap().values().all(|&d| d == 0));
        }
    }
}
