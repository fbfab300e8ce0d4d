use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use wfusion_core::levelrank::levelrank_extension;
use wfusion_core::qchar::QSeries;
use wfusion_core::rational::{modp, q, qi};
use wfusion_core::rootdata::{box_count, dominant_weights, pi_pq, transpose};
use wfusion_core::walg::{canonical_label, fusion_ring, hrel_map_minus, hrel_map_plus, is_local};
use wfusion_core::{Family, WModel};

#[test]
fn transpose_pairs_are_a_bijection() {
    for n in 2..=4usize {
        for m in 2..=4i64 {
            let domain = dominant_weights(n, m);
            let target = dominant_weights(m as usize, n as i64);
            assert_eq!(domain.len() * m as usize, target.len() * n);
            let ext = levelrank_extension(n as i64, m).unwrap();
            let classes: BTreeSet<usize> = domain
                .iter()
                .map(|w| {
                    let t = transpose(w).unwrap();
                    let idx = target.iter().position(|x| *x == t).unwrap();
                    ext.class_of(idx, &[box_count(w)]).expect("local pair")
                })
                .collect();
            assert_eq!(classes.len(), domain.len(), "({n},{m})");
            for w in &domain {
                let t = transpose(w).unwrap();
                assert_eq!(modp(pi_pq(w) - box_count(w), n as i64), 0);
                assert_eq!(modp(pi_pq(&t) - box_count(w), m), 0);
            }
        }
    }
}

#[test]
fn rings_are_commutative_associative_with_duals() {
    for family in [Family::Subregular, Family::Superprincipal] {
        for (n, r) in [(2, 2), (3, 2), (2, 3), (4, 3), (2, 1), (5, 0)] {
            let w = fusion_ring(&WModel::new(family, n, r).unwrap()).unwrap();
            w.ring.check_associativity().unwrap();
            w.ring.check_pic().unwrap();
            for i in 0..w.ring.dim() {
                assert!(w.ring.dual(i).is_some());
                assert!(is_local(&w.model, &w.labels[i]));
            }
        }
    }
}

proptest! {
    #[test]
    fn hrel_round_trip(idx in 0usize..64, xi in -40i64..40) {
        let (n, r) = (3, 2);
        let sb = fusion_ring(&WModel::subregular(n, r).unwrap()).unwrap();
        let x = &sb.labels[idx % sb.labels.len()];
        if let Some(y) = hrel_map_plus(n, r, x, qi(xi)).unwrap() {
            let back = hrel_map_minus(n, r, &y, qi(xi)).unwrap();
            prop_assert_eq!(back.as_ref(), Some(x));
        } else {
            prop_assert_ne!(modp(xi - x.a, n), 0);
        }
    }

    #[test]
    fn canonical_label_is_orbit_invariant(idx in 0usize..64, m in 0i64..4) {
        let model = WModel::superprincipal(2, 3).unwrap();
        let w = fusion_ring(&model).unwrap();
        let x = &w.labels[idx % w.labels.len()];
        let moved = wfusion_core::rootdata::sigma(&x.lambda, m);
        prop_assert_eq!(&canonical_label(&model, &moved, x.a + m * model.step()), x);
    }

    #[test]
    fn series_product_is_associative(
        a in prop::collection::vec((0i64..12, -2i64..3, -3i64..4), 0..6),
        b in prop::collection::vec((0i64..12, -2i64..3, -3i64..4), 0..6),
        c in prop::collection::vec((0i64..12, -2i64..3, -3i64..4), 0..6),
    ) {
        let mk = |v: &[(i64, i64, i64)]| QSeries::from_terms(
            v.iter().map(|&(e, f, k)| (q(e, 4), qi(f), BigInt::from(k))),
            qi(3),
        );
        let (x, y, z) = (mk(&a), mk(&b), mk(&c));
        let lhs = x.mul(&y).mul(&z);
        let rhs = x.mul(&y.mul(&z));
        let bound = lhs.precision().min(rhs.precision());
        prop_assert_eq!(lhs.truncate(bound), rhs.truncate(bound));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
    }
}
