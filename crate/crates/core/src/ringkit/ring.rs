use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FUSION_RING_SCHEMA: &str = "wfusion.fusion-ring/v1";

/// A based commutative ring with non-negative structure constants.
///
/// Products are stored for `i <= j` only, each as a sorted sparse vector
/// `[(k, N_ij^k)]` with zero entries omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    basis: Vec<String>,
    unit: usize,
    pic: Vec<usize>,
    constants: BTreeMap<(usize, usize), Vec<(usize, u64)>>,
}

#[derive(Serialize, Deserialize)]
struct FusionRingJson {
    schema: String,
    basis: Vec<String>,
    unit: usize,
    pic: Vec<usize>,
    constants: Vec<(usize, usize, Vec<(usize, u64)>)>,
}

impl FusionRing {
    /// Builds a ring from a product function evaluated on `i <= j`, then
    /// checks the unit axiom.
    pub fn from_fn<F>(basis: Vec<String>, unit: usize, pic: Vec<usize>, mut product: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Vec<(usize, u64)>,
    {
        let d = basis.len();
        let mut constants = BTreeMap::new();
        for i in 0..d {
            for j in i..d {
                constants.insert((i, j), normalize(product(i, j)));
            }
        }
        Self::new(basis, unit, pic, constants)
    }

    pub fn new(
        basis: Vec<String>,
        unit: usize,
        mut pic: Vec<usize>,
        constants: BTreeMap<(usize, usize), Vec<(usize, u64)>>,
    ) -> Result<Self> {
        let d = basis.len();
        if unit >= d {
            return Err(Error::MalformedRing(format!("unit {unit} out of range {d}")));
        }
        pic.sort_unstable();
        pic.dedup();
        let mut cleaned = BTreeMap::new();
        for ((i, j), v) in constants {
            if i >= d || j >= d || v.iter().any(|&(k, _)| k >= d) {
                return Err(Error::MalformedRing(format!("index out of range in ({i},{j})")));
            }
            let key = (i.min(j), i.max(j));
            cleaned.insert(key, normalize(v));
        }
        let ring = FusionRing {
            basis,
            unit,
            pic,
            constants: cleaned,
        };
        for i in 0..d {
            if ring.product(unit, i) != [(i, 1)] {
                return Err(Error::MalformedRing(format!(
                    "unit does not act as identity on {}",
                    ring.basis[i]
                )));
            }
        }
        Ok(ring)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn pic(&self) -> &[usize] {
        &self.pic
    }

    pub fn is_pic(&self, i: usize) -> bool {
        self.pic.binary_search(&i).is_ok()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, u64)] {
        self.constants
            .get(&(i.min(j), i.max(j)))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> u64 {
        let v = self.product(i, j);
        v.binary_search_by_key(&k, |&(a, _)| a)
            .map(|p| v[p].1)
            .unwrap_or(0)
    }

    /// If `i * j` is a single basis element with multiplicity one, return it.
    pub fn simple_product(&self, i: usize, j: usize) -> Option<usize> {
        match self.product(i, j) {
            [(k, 1)] => Some(*k),
            _ => None,
        }
    }

    /// The dual basis element: the unique `k` with `N_ik^unit = 1`.
    pub fn dual(&self, i: usize) -> Option<usize> {
        (0..self.dim()).find(|&k| self.coeff(i, k, self.unit) == 1)
    }

    /// Product of two vectors in the basis.
    pub fn multiply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for &(k, m) in self.product(i, j) {
                    out[k] += a * b * m;
                }
            }
        }
        out
    }

    pub fn check_associativity(&self) -> Result<()> {
        let d = self.dim();
        let basis_vec = |i: usize| {
            let mut v = vec![0u64; d];
            v[i] = 1;
            v
        };
        for i in 0..d {
            for j in 0..d {
                let ij = self.multiply(&basis_vec(i), &basis_vec(j));
                for k in 0..d {
                    let left = self.multiply(&ij, &basis_vec(k));
                    let jk = self.multiply(&basis_vec(j), &basis_vec(k));
                    let right = self.multiply(&basis_vec(i), &jk);
                    if left != right {
                        return Err(Error::MalformedRing(format!(
                            "associativity fails on ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every Picard element is invertible with a Picard inverse, and fusion
    /// with it permutes the basis.
    pub fn check_pic(&self) -> Result<()> {
        for &g in &self.pic {
            self.pic
                .iter()
                .copied()
                .find(|&h| self.simple_product(g, h) == Some(self.unit))
                .ok_or_else(|| Error::MalformedRing(format!("{} has no inverse in pic", self.basis[g])))?;
            let mut seen = vec![false; self.dim()];
            for i in 0..self.dim() {
                let k = self.simple_product(g, i).ok_or_else(|| {
                    Error::MalformedRing(format!("{} is not a simple current", self.basis[g]))
                })?;
                if std::mem::replace(&mut seen[k], true) {
                    return Err(Error::MalformedRing(format!(
                        "{} does not permute the basis",
                        self.basis[g]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Returns a copy with basis reordered: new index `p` holds old index `order[p]`.
    pub fn reorder(&self, order: &[usize]) -> Result<FusionRing> {
        let d = self.dim();
        let mut new_of_old = vec![usize::MAX; d];
        for (p, &o) in order.iter().enumerate() {
            new_of_old[o] = p;
        }
        if order.len() != d || new_of_old.contains(&usize::MAX) {
            return Err(Error::MalformedRing("reorder is not a permutation".into()));
        }
        FusionRing::from_fn(
            order.iter().map(|&o| self.basis[o].clone()).collect(),
            new_of_old[self.unit],
            self.pic.iter().map(|&g| new_of_old[g]).collect(),
            |i, j| {
                self.product(order[i], order[j])
                    .iter()
                    .map(|&(k, m)| (new_of_old[k], m))
                    .collect()
            },
        )
    }

    /// Exact comparison of structure constants along a bijection
    /// `map: self -> other`, including unit and Picard subset.
    pub fn agrees_under(&self, other: &FusionRing, map: &[usize]) -> std::result::Result<(), String> {
        if self.dim() != other.dim() || map.len() != self.dim() {
            return Err(format!("dimensions {} vs {}", self.dim(), other.dim()));
        }
        if map[self.unit] != other.unit {
            return Err(format!(
                "unit {} maps to {}, not the unit",
                self.basis[self.unit], other.basis[map[self.unit]]
            ));
        }
        let mut pic: Vec<usize> = self.pic.iter().map(|&g| map[g]).collect();
        pic.sort_unstable();
        if pic != other.pic {
            return Err("Picard subsets differ".into());
        }
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let mut mine: Vec<(usize, u64)> =
                    self.product(i, j).iter().map(|&(k, m)| (map[k], m)).collect();
                mine.sort_unstable();
                if mine.as_slice() != other.product(map[i], map[j]) {
                    return Err(format!(
                        "product {} * {} differs",
                        self.basis[i], self.basis[j]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(FusionRingJson {
            schema: FUSION_RING_SCHEMA.to_string(),
            basis: self.basis.clone(),
            unit: self.unit,
            pic: self.pic.clone(),
            constants: self
                .constants
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(&(i, j), v)| (i, j, v.clone()))
                .collect(),
        })
        .expect("fusion ring serializes")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let raw: FusionRingJson =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.schema != FUSION_RING_SCHEMA {
            return Err(Error::Parse(format!("unexpected schema {:?}", raw.schema)));
        }
        let constants = raw.constants.into_iter().map(|(i, j, v)| ((i, j), v)).collect();
        FusionRing::new(raw.basis, raw.unit, raw.pic, constants)
    }
}

fn normalize(mut v: Vec<(usize, u64)>) -> Vec<(usize, u64)> {
    v.sort_unstable();
    let mut out: Vec<(usize, u64)> = Vec::with_capacity(v.len());
    for (k, m) in v {
        match out.last_mut() {
            Some((lk, lm)) if *lk == k => *lm += m,
            _ => out.push((k, m)),
        }
    }
    out.retain(|&(_, m)| m > 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FusionRing {
        FusionRing::from_fn(vec!["0".into(), "1".into()], 0, vec![0, 1], |i, j| vec![((i + j) % 2, 1)]).unwrap()
    }

    fn ising() -> FusionRing {
        // 1, sigma, psi
        FusionRing::from_fn(
            vec!["1".into(), "s".into(), "p".into()],
            0,
            vec![0, 2],
            |i, j| match (i, j) {
                (0, k) | (k, 0) => vec![(k, 1)],
                (1, 1) => vec![(0, 1), (2, 1)],
                (1, 2) | (2, 1) => vec![(1, 1)],
                _ => vec![(0, 1)],
            },
        )
        .unwrap()
    }

    #[test]
    fn basics() {
        let r = ising();
        assert_eq!(r.coeff(1, 1, 2), 1);
        assert_eq!(r.coeff(2, 1, 1), 1);
        assert_eq!(r.dual(1), Some(1));
        r.check_associativity().unwrap();
        r.check_pic().unwrap();
        z2().check_pic().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let r = ising();
        let back = FusionRing::from_json_value(r.to_json_value()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn reorder_agrees() {
        let r = ising();
        let s = r.reorder(&[2, 0, 1]).unwrap();
        // old i sits at new position p with order[p] = i
        let map = vec![1, 2, 0];
        r.agrees_under(&s, &map).unwrap();
        assert!(r.agrees_under(&s, &[0, 1, 2]).is_err());
    }

    #[test]
    fn bad_unit_rejected() {
        let e = FusionRing::from_fn(vec!["a".into(), "b".into()], 0, vec![], |_, _| vec![(0, 1)]);
        assert!(matches!(e, Err(Error::MalformedRing(_))));
    }
}
