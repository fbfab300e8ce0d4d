use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::rational::{frac, qi, Q};
use crate::ringkit::{DiscriminantForm, FusionRing};

/// A simple current `S_g` of the base ring paired with a lattice element `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleCurrent {
    pub element: Vec<i64>,
    pub current: usize,
}

/// Input to [`extend`]: the base ring `K(V)`, the form on `L'/L`, generators
/// of `N/L` with their currents, and the monodromy phases
/// `phases[M][j] = φ_M(g_j) ∈ Q/Z` of every basis element with each generator.
#[derive(Debug, Clone)]
pub struct ExtensionDatum {
    pub base: FusionRing,
    pub lattice: DiscriminantForm,
    pub generators: Vec<SimpleCurrent>,
    pub phases: Vec<Vec<Q>>,
}

/// The extended ring together with its description in terms of pairs.
#[derive(Debug, Clone)]
pub struct Extension {
    pub ring: FusionRing,
    /// Canonical pair `(M, a)` of each basis element.
    pub representatives: Vec<(usize, Vec<i64>)>,
    /// Every local pair mapped to its orbit.
    pub orbit_of: BTreeMap<(usize, Vec<i64>), usize>,
    pub base: FusionRing,
    pub lattice: DiscriminantForm,
    /// Elements of `N/L`.
    pub subgroup: Vec<Vec<i64>>,
}

impl Extension {
    pub fn class_of(&self, m: usize, a: &[i64]) -> Option<usize> {
        self.orbit_of.get(&(m, self.lattice.reduce(a))).copied()
    }

    /// Lattice charge of a basis element (well defined modulo `N/L`).
    pub fn charge(&self, x: usize) -> &[i64] {
        &self.representatives[x].1
    }

    /// `|L'/L| / |N/L|`, the size of `N'/L`.
    pub fn complement_size(&self) -> usize {
        self.lattice.size() / self.subgroup.len()
    }
}

struct GroupData {
    elements: Vec<Vec<i64>>,
    currents: Vec<usize>,
}

fn enumerate_group(datum: &ExtensionDatum) -> Result<GroupData> {
    let base = &datum.base;
    let lat = &datum.lattice;
    let d = base.dim();
    let mut found: HashMap<Vec<i64>, (usize, Vec<Q>)> = HashMap::new();
    let zero = lat.zero();
    found.insert(zero.clone(), (base.unit(), vec![qi(0); d]));
    let mut order = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(g) = queue.pop_front() {
        let (cur, ph) = found[&g].clone();
        for (j, gen) in datum.generators.iter().enumerate() {
            let h = lat.add(&g, &gen.element);
            let next_cur = base.simple_product(cur, gen.current).ok_or_else(|| {
                Error::MalformedRing(format!("{} is not a simple current", base.basis()[gen.current]))
            })?;
            let next_ph: Vec<Q> = (0..d).map(|m| frac(&(ph[m] + datum.phases[m][j]))).collect();
            match found.get(&h) {
                Some((c, p)) => {
                    if *c != next_cur || *p != next_ph {
                        return Err(Error::InconsistentMonodromy(format!(
                            "current assignment is not a homomorphism at {}",
                            lat.label(&h)
                        )));
                    }
                }
                None => {
                    found.insert(h.clone(), (next_cur, next_ph));
                    order.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
    }
    order.sort();
    let currents = order.iter().map(|g| found[g].0).collect();
    Ok(GroupData {
        elements: order,
        currents,
    })
}

/// Simple current extension on the level of Grothendieck rings.
///
/// Basis: `N/L`-orbits of local pairs `(M, a) ∈ Irr(V) × L'/L`, i.e. pairs with
/// `φ_M(g) + (a|g) ∈ Z` for all `g ∈ N/L`, under `g·(M, a) = (S_g ⊠ M, a + g)`.
/// Products are inherited from `K(V) ⊗ Z[L'/L]`.
pub fn extend(datum: &ExtensionDatum) -> Result<Extension> {
    let base = &datum.base;
    let lat = &datum.lattice;
    let d = base.dim();
    if datum.phases.len() != d || datum.phases.iter().any(|p| p.len() != datum.generators.len()) {
        return Err(Error::InconsistentMonodromy("phase table has wrong shape".into()));
    }
    // φ must be a grading compatible with the currents.
    for (j, gen) in datum.generators.iter().enumerate() {
        let s = gen.current;
        for m in 0..d {
            let sm = base.simple_product(s, m).ok_or_else(|| {
                Error::MalformedRing(format!("{} is not a simple current", base.basis()[s]))
            })?;
            for (k, _) in datum.generators.iter().enumerate() {
                if frac(&(datum.phases[s][k] + datum.phases[m][k])) != frac(&datum.phases[sm][k]) {
                    return Err(Error::InconsistentMonodromy(format!(
                        "phase of {} under generator {k} is not additive along current {j}",
                        base.basis()[m]
                    )));
                }
            }
        }
    }
    let group = enumerate_group(datum)?;
    let local = |m: usize, a: &[i64]| {
        datum
            .generators
            .iter()
            .enumerate()
            .all(|(j, gen)| (datum.phases[m][j] + lat.pairing(a, &gen.element)).is_integer())
    };
    let mut reps: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut orbit_tmp: BTreeMap<(usize, Vec<i64>), usize> = BTreeMap::new();
    let mut local_count = 0usize;
    for a in lat.elements() {
        for m in 0..d {
            if !local(m, &a) {
                continue;
            }
            local_count += 1;
            if orbit_tmp.contains_key(&(m, a.clone())) {
                continue;
            }
            let id = reps.len();
            let mut members = Vec::with_capacity(group.elements.len());
            for (g, &s) in group.elements.iter().zip(&group.currents) {
                let sm = base.simple_product(s, m).expect("checked current");
                members.push((sm, lat.add(&a, g)));
            }
            let mut sorted = members.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != group.elements.len() {
                return Err(Error::NonFreeAction {
                    orbit: sorted.len(),
                    order: group.elements.len(),
                });
            }
            let rep = members
                .iter()
                .min_by(|x, y| (&x.1, x.0).cmp(&(&y.1, y.0)))
                .cloned()
                .expect("non-empty orbit");
            for p in members {
                orbit_tmp.insert(p, id);
            }
            reps.push(rep);
        }
    }
    // Order orbits by canonical representative (a first, then label index).
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&x, &y| (&reps[x].1, reps[x].0).cmp(&(&reps[y].1, reps[y].0)));
    let mut new_id = vec![0usize; reps.len()];
    for (p, &o) in order.iter().enumerate() {
        new_id[o] = p;
    }
    let representatives: Vec<(usize, Vec<i64>)> = order.iter().map(|&o| reps[o].clone()).collect();
    let orbit_of: BTreeMap<(usize, Vec<i64>), usize> =
        orbit_tmp.into_iter().map(|(k, v)| (k, new_id[v])).collect();

    let expected = d * lat.size() / group.elements.len() / group.elements.len();
    if local_count != d * lat.size() / group.elements.len() || representatives.len() != expected {
        return Err(Error::InconsistentMonodromy(format!(
            "cardinality identity fails: {} orbits, expected {expected}",
            representatives.len()
        )));
    }

    let labels = representatives
        .iter()
        .map(|(m, a)| format!("({},{})", base.basis()[*m], lat.label(a)))
        .collect();
    let unit = orbit_of[&(base.unit(), lat.zero())];
    let pic = representatives
        .iter()
        .enumerate()
        .filter(|(_, (m, _))| base.is_pic(*m))
        .map(|(i, _)| i)
        .collect();
    let mut err = None;
    let ring = FusionRing::from_fn(labels, unit, pic, |x, y| {
        let (m1, a1) = &representatives[x];
        let (m2, a2) = &representatives[y];
        let a = lat.add(a1, a2);
        let mut out = Vec::new();
        for &(k, mult) in base.product(*m1, *m2) {
            match orbit_of.get(&(k, a.clone())) {
                Some(&z) => out.push((z, mult)),
                None => {
                    err = Some(Error::InconsistentMonodromy(format!(
                        "product leaves the local pairs at ({}, {})",
                        base.basis()[k],
                        lat.label(&a)
                    )))
                }
            }
        }
        out
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Extension {
        ring: ring?,
        representatives,
        orbit_of,
        base: base.clone(),
        lattice: lat.clone(),
        subgroup: group.elements,
    })
}

/// Inverse construction: extends `K(E)` by the negated lattice along
/// `N'/L`, with currents `V_{-h}` (the classes of `(unit, -h)`) whose
/// monodromy with `(M, a)` is `-(h|a)`.
pub fn deextend(ext: &Extension) -> Result<Extension> {
    let lat = &ext.lattice;
    let complement = lat.orthogonal_complement(&ext.subgroup);
    let mut generators = Vec::new();
    for h in complement.iter().filter(|h| h.iter().any(|&x| x != 0)) {
        let current = ext.class_of(ext.base.unit(), &lat.neg(h)).ok_or_else(|| {
            Error::InconsistentMonodromy(format!("(unit, -{}) is not local", lat.label(h)))
        })?;
        generators.push(SimpleCurrent {
            element: h.clone(),
            current,
        });
    }
    let phases = ext
        .representatives
        .iter()
        .map(|(_, a)| generators.iter().map(|g| frac(&-lat.pairing(&g.element, a))).collect())
        .collect();
    extend(&ExtensionDatum {
        base: ext.ring.clone(),
        lattice: lat.negate(),
        generators,
        phases,
    })
}

/// Monodromy phases `φ_M(S) = h(S ⊠ M) − h(S) − h(M) mod 1` of every basis
/// element with each listed current, checked to be a grading:
/// `φ_z = φ_x + φ_y` whenever `z` occurs in `x·y`.
pub fn monodromy_decomposition(ring: &FusionRing, currents: &[usize], weights: &[Q]) -> Result<Vec<Vec<Q>>> {
    if weights.len() != ring.dim() {
        return Err(Error::InconsistentMonodromy("one conformal weight per basis element required".into()));
    }
    let mut phases = vec![Vec::with_capacity(currents.len()); ring.dim()];
    for &s in currents {
        for m in 0..ring.dim() {
            let sm = ring.simple_product(s, m).ok_or_else(|| {
                Error::MalformedRing(format!("{} is not a simple current", ring.basis()[s]))
            })?;
            phases[m].push(frac(&(weights[sm] - weights[s] - weights[m])));
        }
    }
    for x in 0..ring.dim() {
        for y in x..ring.dim() {
            for &(z, _) in ring.product(x, y) {
                for j in 0..currents.len() {
                    if frac(&(phases[x][j] + phases[y][j])) != phases[z][j] {
                        return Err(Error::InconsistentMonodromy(format!(
                            "grading not multiplicative on {} * {} -> {}",
                            ring.basis()[x],
                            ring.basis()[y],
                            ring.basis()[z]
                        )));
                    }
                }
            }
        }
    }
    Ok(phases)
}

/// Outcome of the two round trips `V → E → V'` and `E → V' → E'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    pub base_size: usize,
    pub extended_size: usize,
    pub deextended_size: usize,
    pub subgroup_order: usize,
    pub complement_order: usize,
}

/// Runs `extend`, `deextend` twice, and checks both cardinality identities
/// and both round trips as exact ring isomorphisms along the explicit maps
/// `M ↦ ((M, a_M), −a_M)` and `(M, a) ↦ (((M, a), −a), a)`.
pub fn verify_round_trips(datum: &ExtensionDatum) -> Result<RoundTripReport> {
    let e = extend(datum)?;
    let v2 = deextend(&e)?;
    let e2 = deextend(&v2)?;
    let lat = &e.lattice;
    let n_order = e.subgroup.len();
    let np_order = e.complement_size();
    let base_size = datum.base.dim();
    if e.ring.dim() * n_order != base_size * np_order {
        return Err(Error::InconsistentMonodromy("|Irr(E)| identity fails".into()));
    }
    if v2.ring.dim() * np_order != e.ring.dim() * n_order {
        return Err(Error::InconsistentMonodromy("|Irr(V)| identity fails".into()));
    }
    let mut to_v2 = Vec::with_capacity(base_size);
    for m in 0..base_size {
        let a = lat
            .elements()
            .into_iter()
            .find(|a| e.class_of(m, a).is_some())
            .ok_or_else(|| Error::InconsistentMonodromy(format!("no local charge for {}", datum.base.basis()[m])))?;
        let x = e.class_of(m, &a).expect("local");
        let y = v2
            .class_of(x, &lat.neg(&a))
            .ok_or_else(|| Error::InconsistentMonodromy("round trip leaves local pairs".into()))?;
        to_v2.push(y);
    }
    datum
        .base
        .agrees_under(&v2.ring, &to_v2)
        .map_err(|m| Error::NoIsomorphism(format!("V -> E -> V': {m}")))?;
    let mut to_e2 = Vec::with_capacity(e.ring.dim());
    for (x, (_, a)) in e.representatives.iter().enumerate() {
        let y = v2
            .class_of(x, &lat.neg(a))
            .ok_or_else(|| Error::InconsistentMonodromy("round trip leaves local pairs".into()))?;
        let z = e2
            .class_of(y, a)
            .ok_or_else(|| Error::InconsistentMonodromy("round trip leaves local pairs".into()))?;
        to_e2.push(z);
    }
    e.ring
        .agrees_under(&e2.ring, &to_e2)
        .map_err(|m| Error::NoIsomorphism(format!("E -> V' -> E': {m}")))?;
    Ok(RoundTripReport {
        base_size,
        extended_size: e.ring.dim(),
        deextended_size: v2.ring.dim(),
        subgroup_order: n_order,
        complement_order: np_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    use crate::ringkit::examples::{ising_datum, ising_ring as ising, ising_weights};

    #[test]
    fn ising_grading() {
        let phases = monodromy_decomposition(&ising(), &[2], &ising_weights()).unwrap();
        assert_eq!(phases, vec![vec![qi(0)], vec![q(1, 2)], vec![qi(0)]]);
    }

    #[test]
    fn ising_times_sqrt4() {
        let e = extend(&ising_datum(4)).unwrap();
        // |Irr(E)| = 3 * 2 / 2 = 3
        assert_eq!(e.ring.dim(), 3);
        e.ring.check_associativity().unwrap();
        e.ring.check_pic().unwrap();
        assert_eq!(e.ring.unit(), 0);
    }

    #[test]
    fn ising_times_sqrt8() {
        let e = extend(&ising_datum(8)).unwrap();
        assert_eq!(e.ring.dim(), 6);
        assert_eq!(e.ring.pic().len(), 4);
        e.ring.check_associativity().unwrap();
    }

    #[test]
    fn trivial_extension_is_tensor_product() {
        let datum = ExtensionDatum {
            base: ising(),
            lattice: DiscriminantForm::rank_one(3).unwrap(),
            generators: vec![],
            phases: vec![vec![]; 3],
        };
        let e = extend(&datum).unwrap();
        assert_eq!(e.ring.dim(), 9);
        assert_eq!(e.ring.pic().len(), 6);
    }

    #[test]
    fn round_trips() {
        for n in [4, 8, 12, 16] {
            let rep = verify_round_trips(&ising_datum(n)).unwrap();
            assert_eq!(rep.extended_size * rep.subgroup_order, rep.base_size * rep.complement_order);
        }
        let trivial = ExtensionDatum {
            base: ising(),
            lattice: DiscriminantForm::rank_one(2).unwrap(),
            generators: vec![],
            phases: vec![vec![]; 3],
        };
        verify_round_trips(&trivial).unwrap();
    }

    #[test]
    fn fixed_points_are_rejected() {
        // Ising with ψ paired to the trivial lattice element fixes σ.
        let base = ising();
        let phases = monodromy_decomposition(&base, &[2], &ising_weights()).unwrap();
        let datum = ExtensionDatum {
            base,
            lattice: DiscriminantForm::rank_one(1).unwrap(),
            generators: vec![SimpleCurrent {
                element: vec![0],
                current: 2,
            }],
            phases: phases.iter().map(|_| vec![qi(0)]).collect(),
        };
        assert!(matches!(
            extend(&datum),
            Err(Error::NonFreeAction { .. }) | Err(Error::InconsistentMonodromy(_))
        ));
    }

    #[test]
    fn inconsistent_phases_are_rejected() {
        let mut datum = ising_datum(4);
        datum.phases[1][0] = q(1, 3);
        assert!(matches!(extend(&datum), Err(Error::InconsistentMonodromy(_))));
    }
}
