use crate::ringkit::FusionRing;

/// Per-element invariants preserved by any based ring isomorphism that maps
/// unit to unit and Picard subset to Picard subset.
fn invariants(ring: &FusionRing) -> Vec<(bool, bool, usize, u64, Vec<u64>, bool)> {
    (0..ring.dim())
        .map(|i| {
            let pic = ring.is_pic(i);
            let order = if pic {
                let mut x = i;
                let mut t = 1;
                while x != ring.unit() && t <= ring.dim() {
                    x = ring.simple_product(x, i).unwrap_or(ring.unit());
                    t += 1;
                }
                t
            } else {
                0
            };
            let total: u64 = (0..ring.dim())
                .map(|j| ring.product(i, j).iter().map(|&(_, m)| m).sum::<u64>())
                .sum();
            let mut square: Vec<u64> = ring.product(i, i).iter().map(|&(_, m)| m).collect();
            square.sort_unstable();
            let self_dual = ring.dual(i) == Some(i);
            (i == ring.unit(), pic, order, total, square, self_dual)
        })
        .collect()
}

struct Search<'a> {
    a: &'a FusionRing,
    b: &'a FusionRing,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_> {
    fn consistent(&self, x: usize) -> bool {
        let assigned: Vec<usize> = (0..self.a.dim()).filter(|&i| self.map[i].is_some()).collect();
        let fx = self.map[x].expect("assigned");
        for &y in &assigned {
            let fy = self.map[y].expect("assigned");
            for &k in &assigned {
                let fk = self.map[k].expect("assigned");
                if self.a.coeff(x, y, k) != self.b.coeff(fx, fy, fk) {
                    return false;
                }
            }
            for &i in &assigned {
                let fi = self.map[i].expect("assigned");
                if self.a.coeff(i, y, x) != self.b.coeff(fi, fy, fx) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            self.found.push(self.map.iter().map(|m| m.expect("complete")).collect());
            return;
        }
        let x = self.order[depth];
        for c in self.candidates[x].clone() {
            if self.used[c] {
                continue;
            }
            self.map[x] = Some(c);
            self.used[c] = true;
            if self.consistent(x) {
                self.run(depth + 1);
            }
            self.map[x] = None;
            self.used[c] = false;
        }
    }
}

fn search(a: &FusionRing, b: &FusionRing, limit: usize) -> Vec<Vec<usize>> {
    if a.dim() != b.dim() || a.pic().len() != b.pic().len() {
        return Vec::new();
    }
    let ia = invariants(a);
    let ib = invariants(b);
    let candidates: Vec<Vec<usize>> = ia
        .iter()
        .map(|inv| (0..b.dim()).filter(|&j| &ib[j] == inv).collect())
        .collect();
    let mut order: Vec<usize> = (0..a.dim()).collect();
    // Unit and simple currents first, then by fewest candidates.
    order.sort_by_key(|&i| (i != a.unit(), !a.is_pic(i), candidates[i].len(), i));
    let mut s = Search {
        a,
        b,
        order,
        candidates,
        map: vec![None; a.dim()],
        used: vec![false; b.dim()],
        found: Vec::new(),
        limit,
    };
    s.run(0);
    s.found
}

/// Backtracking search for a bijection of bases preserving unit, Picard
/// subset and all structure constants.
pub fn find_isomorphism(a: &FusionRing, b: &FusionRing) -> Option<Vec<usize>> {
    search(a, b, 1).into_iter().next()
}

/// Number of isomorphisms `a → b`, capped at `limit`.
pub fn count_isomorphisms(a: &FusionRing, b: &FusionRing, limit: usize) -> usize {
    search(a, b, limit).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringkit::group_ring;

    #[test]
    fn cyclic_automorphisms() {
        // Aut(Z_5) has 4 elements, Aut(Z_2 x Z_2) has 6.
        let z5 = group_ring(&[5]).unwrap();
        assert_eq!(count_isomorphisms(&z5, &z5, 100), 4);
        let v4 = group_ring(&[2, 2]).unwrap();
        assert_eq!(count_isomorphisms(&v4, &v4, 100), 6);
        assert!(find_isomorphism(&group_ring(&[4]).unwrap(), &v4).is_none());
    }

    #[test]
    fn found_map_agrees() {
        let z6 = group_ring(&[6]).unwrap();
        let z23 = group_ring(&[2, 3]).unwrap();
        let map = find_isomorphism(&z6, &z23).unwrap();
        z6.agrees_under(&z23, &map).unwrap();
    }
}
