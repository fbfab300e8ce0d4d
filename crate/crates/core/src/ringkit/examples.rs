//! Small synthetic instances for the extension machinery.

use crate::rational::{q, qi, Q};
use crate::ringkit::{monodromy_decomposition, DiscriminantForm, ExtensionDatum, FusionRing, SimpleCurrent};

/// Ising fusion ring on `{1, σ, ψ}`.
pub fn ising_ring() -> FusionRing {
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
    .expect("valid ring")
}

pub fn ising_weights() -> Vec<Q> {
    vec![qi(0), q(1, 16), q(1, 2)]
}

/// Ising ⊗ `V_{√N Z}` extended by `ψ ⊗ V_{N/2 + L}`; `n` must be even.
pub fn ising_datum(n: i64) -> ExtensionDatum {
    let base = ising_ring();
    let phases = monodromy_decomposition(&base, &[2], &ising_weights()).expect("graded");
    ExtensionDatum {
        base,
        lattice: DiscriminantForm::rank_one(n).expect("non-zero"),
        generators: vec![SimpleCurrent {
            element: vec![n / 2],
            current: 2,
        }],
        phases,
    }
}
