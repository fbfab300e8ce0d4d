use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::rational::{frac, modp, qi, Q};
use crate::ringkit::FusionRing;

/// Discriminant group `L'/L` of a non-degenerate lattice, as a product of
/// cyclic groups with the induced pairing and quadratic form on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantForm {
    orders: Vec<i64>,
    gram: Vec<Vec<Q>>,
    norms: Vec<Q>,
}

impl DiscriminantForm {
    /// `√N·Z`: group `Z_N`, pairing `ab/N`, `q(a) = a²/N`.
    pub fn rank_one(n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateNorm);
        }
        Ok(DiscriminantForm {
            orders: vec![n.abs()],
            gram: vec![vec![Q::new(1, n)]],
            norms: vec![Q::new(1, n)],
        })
    }

    pub fn orthogonal_sum(&self, other: &DiscriminantForm) -> DiscriminantForm {
        let d1 = self.orders.len();
        let d = d1 + other.orders.len();
        let mut gram = vec![vec![qi(0); d]; d];
        for i in 0..d1 {
            for j in 0..d1 {
                gram[i][j] = self.gram[i][j];
            }
        }
        for i in 0..other.orders.len() {
            for j in 0..other.orders.len() {
                gram[d1 + i][d1 + j] = other.gram[i][j];
            }
        }
        DiscriminantForm {
            orders: self.orders.iter().chain(&other.orders).copied().collect(),
            gram,
            norms: self.norms.iter().chain(&other.norms).copied().collect(),
        }
    }

    /// The form of the lattice with negated inner product.
    pub fn negate(&self) -> DiscriminantForm {
        DiscriminantForm {
            orders: self.orders.clone(),
            gram: self.gram.iter().map(|row| row.iter().map(|x| -x).collect()).collect(),
            norms: self.norms.iter().map(|x| -x).collect(),
        }
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<i64>() as usize
    }

    /// Whether `q` is well defined modulo 2 (even lattice); otherwise only
    /// modulo 1.
    pub fn is_even(&self) -> bool {
        self.orders
            .iter()
            .zip(&self.norms)
            .all(|(&o, q)| (q * o * o / 2).is_integer())
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.orders.len()]
    }

    pub fn reduce(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.orders).map(|(&x, &o)| modp(x, o)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), &o)| modp(x + y, o))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.orders).map(|(&x, &o)| modp(-x, o)).collect()
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        a.iter().zip(&self.orders).map(|(&x, &o)| modp(k * x, o)).collect()
    }

    /// All group elements in mixed-radix order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &o in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..o).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// `(a|b) mod 1`, in `[0, 1)`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> Q {
        let mut acc = qi(0);
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                acc += self.gram[i][j] * (x * y);
            }
        }
        frac(&acc)
    }

    /// `q(a)` reduced modulo 2 for even lattices and modulo 1 otherwise.
    pub fn quadratic(&self, a: &[i64]) -> Q {
        let mut acc = qi(0);
        for (i, x) in a.iter().enumerate() {
            acc += self.norms[i] * (x * x);
            for (j, y) in a.iter().enumerate().skip(i + 1) {
                acc += self.gram[i][j] * (2 * x * y);
            }
        }
        if self.is_even() {
            frac(&(acc / 2)) * 2
        } else {
            frac(&acc)
        }
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.zero()]);
        seen.insert(self.zero());
        while let Some(g) = queue.pop_front() {
            for h in gens {
                let s = self.add(&g, h);
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// `{a : (a|g) ∈ Z for all g in gens}`.
    pub fn orthogonal_complement(&self, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        self.elements()
            .into_iter()
            .filter(|a| gens.iter().all(|g| self.pairing(a, g) == qi(0)))
            .collect()
    }

    /// Display form: `"a"` for cyclic groups, `"(a,b,...)"` otherwise.
    pub fn label(&self, a: &[i64]) -> String {
        if a.len() == 1 {
            a[0].to_string()
        } else {
            format!("({})", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

/// Group ring `Z[Z_{o_1} × ... × Z_{o_k}]`; every basis element is a simple current.
pub fn group_ring(orders: &[i64]) -> Result<FusionRing> {
    if orders.iter().any(|&o| o < 1) {
        return Err(Error::InvalidParameters(format!("group orders must be >= 1: {orders:?}")));
    }
    let form = DiscriminantForm {
        orders: orders.to_vec(),
        gram: vec![vec![qi(0); orders.len()]; orders.len()],
        norms: vec![qi(0); orders.len()],
    };
    let elems = form.elements();
    let index = |a: &[i64]| elems.binary_search_by(|e| e.as_slice().cmp(a)).expect("element");
    FusionRing::from_fn(
        elems.iter().map(|a| form.label(a)).collect(),
        0,
        (0..elems.len()).collect(),
        |i, j| vec![(index(&form.add(&elems[i], &elems[j])), 1)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn rank_one_pairing() {
        let f = DiscriminantForm::rank_one(8).unwrap();
        assert_eq!(f.size(), 8);
        assert_eq!(f.pairing(&[3], &[5]), q(7, 8));
        assert_eq!(f.quadratic(&[3]), q(9, 8));
        assert!(f.is_even());
        assert!(!DiscriminantForm::rank_one(15).unwrap().is_even());
        assert!(matches!(DiscriminantForm::rank_one(0), Err(Error::DegenerateNorm)));
    }

    #[test]
    fn group_ring_z4() {
        let r = group_ring(&[4]).unwrap();
        assert_eq!(r.dim(), 4);
        assert_eq!(r.simple_product(3, 2), Some(1));
        r.check_associativity().unwrap();
        r.check_pic().unwrap();
        let r = group_ring(&[2, 3]).unwrap();
        assert_eq!(r.dim(), 6);
        assert_eq!(r.pic().len(), 6);
    }

    #[test]
    fn complements() {
        let f = DiscriminantForm::rank_one(12).unwrap();
        let n = f.subgroup(&[vec![3]]);
        assert_eq!(n.len(), 4);
        let perp = f.orthogonal_complement(&[vec![3]]);
        assert_eq!(perp, vec![vec![0], vec![4], vec![8]]);
        let sum = f.orthogonal_sum(&f.negate());
        assert_eq!(sum.size(), 144);
        assert_eq!(sum.pairing(&[1, 1], &[1, 1]), qi(0));
    }

    proptest! {
        #[test]
        fn pairing_polarizes_quadratic(n in 2i64..30, a in 0i64..30, b in 0i64..30) {
            let f = DiscriminantForm::rank_one(n).unwrap();
            let (a, b) = (vec![a % n], vec![b % n]);
            prop_assert_eq!(f.pairing(&a, &a), frac(&Q::new(a[0] * a[0], n)));
            let ab = f.add(&a, &b);
            let lhs = f.quadratic(&ab) - f.quadratic(&a) - f.quadratic(&b);
            let m = if f.is_even() { 2 } else { 1 };
            prop_assert!(((lhs - f.pairing(&a, &b) * 2) / m).is_integer());
        }
    }
}
