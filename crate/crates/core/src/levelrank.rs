//! Level-rank duality at the level of fusion rings: the transpose map
//! `L_m(λ) ↦ (λ^t, ℓ(λ))` from `K(L_m(sl_n))` into the `Z_m`-extension of
//! `K(L_n(sl_m)) ⊗ Z[Z_{nm}]`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{fusion_ring_affine, weight_label};
use crate::rational::{modp, Q};
use crate::ringkit::{extend, monodromy_decomposition, DiscriminantForm, Extension, ExtensionDatum, FusionRing, SimpleCurrent};
use crate::rootdata::{box_count, conformal_dim_affine, dominant_weights, pi_pq, sigma, transpose, AffineWeight};
use crate::walg::fusion_subregular;

/// Datum for `(K(L_n(sl_m)) ⊗ Z[Z_{nm}])^{Z_m}` with `r·(λ, a) = (σ^r λ, a + rn)`.
pub fn levelrank_datum(n: i64, m: i64) -> Result<ExtensionDatum> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidParameters(format!("need n, m >= 2, got ({n}, {m})")));
    }
    let mu = m as usize;
    let base = fusion_ring_affine(mu, n)?;
    let weights = dominant_weights(mu, n);
    let h: Vec<Q> = weights.iter().map(conformal_dim_affine).collect();
    let current = weights
        .iter()
        .position(|w| *w == AffineWeight::multiple_of_fundamental(mu, n, 1))
        .expect("simple current in basis");
    let phases = monodromy_decomposition(&base, &[current], &h)?;
    Ok(ExtensionDatum {
        base: (*base).clone(),
        lattice: DiscriminantForm::rank_one(n * m)?,
        generators: vec![SimpleCurrent {
            element: vec![n],
            current,
        }],
        phases,
    })
}

pub fn levelrank_extension(n: i64, m: i64) -> Result<Extension> {
    extend(&levelrank_datum(n, m)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct TransposeReport {
    pub domain_size: usize,
    pub target_size: usize,
    pub bijective: bool,
    pub unit_preserved: bool,
    /// `(λ, image label)` for every simple of the domain.
    pub images: Vec<(String, String)>,
    pub mismatches: Vec<String>,
}

impl TransposeReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.unit_preserved && self.mismatches.is_empty()
    }
}

fn compare(domain: &FusionRing, domain_weights: &[AffineWeight], target: &FusionRing, images: Vec<Option<usize>>) -> TransposeReport {
    let mut mismatches = Vec::new();
    let mut seen = BTreeSet::new();
    let mut map = Vec::with_capacity(images.len());
    for (i, img) in images.iter().enumerate() {
        match img {
            Some(t) => {
                seen.insert(*t);
                map.push(*t);
            }
            None => {
                mismatches.push(format!("{} has no image", weight_label(&domain_weights[i])));
                map.push(usize::MAX);
            }
        }
    }
    let bijective = mismatches.is_empty() && seen.len() == domain.dim() && domain.dim() == target.dim();
    let unit_preserved = map[domain.unit()] == target.unit();
    if bijective {
        if let Err(e) = domain.agrees_under(target, &map) {
            mismatches.push(e);
        }
    }
    TransposeReport {
        domain_size: domain.dim(),
        target_size: target.dim(),
        bijective,
        unit_preserved,
        images: map
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let label = if t == usize::MAX { "none".to_string() } else { target.basis()[t].clone() };
                (weight_label(&domain_weights[i]), label)
            })
            .collect(),
        mismatches,
    }
}

/// The two affine fusion rings of a level-rank pair and the extension ring
/// `E_{m,n}`.  Their sizes satisfy `m·|P̂_+^n(m)| = n·|P̂_+^m(n)|`.
#[derive(Debug, Clone)]
pub struct LevelRankPair {
    pub n: i64,
    pub m: i64,
    /// `K(L_m(sl_n))`.
    pub domain: Arc<FusionRing>,
    /// `K(L_n(sl_m))`.
    pub dual: Arc<FusionRing>,
    pub extension: Extension,
}

impl LevelRankPair {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        let extension = levelrank_extension(n, m)?;
        Ok(LevelRankPair {
            n,
            m,
            domain: fusion_ring_affine(n as usize, m)?,
            dual: fusion_ring_affine(m as usize, n)?,
            extension,
        })
    }

    /// Image of `L_m(λ)`: the orbit of `(λ^t, ℓ(λ))`.
    pub fn image(&self, lambda: &AffineWeight) -> Result<Option<usize>> {
        let t = transpose(lambda)?;
        let idx = dominant_weights(self.m as usize, self.n)
            .iter()
            .position(|x| *x == t)
            .expect("transpose is dominant");
        Ok(self.extension.class_of(idx, &[modp(box_count(lambda), self.n * self.m)]))
    }
}

/// Level-rank ring isomorphism `K(L_m(sl_n)) ≅ E_{m,n}` by transpose, checked
/// on all structure constants.
pub fn levelrank_iso_check(n: i64, m: i64) -> Result<TransposeReport> {
    let pair = LevelRankPair::new(n, m)?;
    let domain_weights = dominant_weights(n as usize, m);
    let images = domain_weights.iter().map(|w| pair.image(w)).collect::<Result<Vec<_>>>()?;
    let size_identity = pair.domain.dim() as i64 * m == pair.dual.dim() as i64 * n;
    let mut report = compare(&pair.domain, &domain_weights, &pair.extension.ring, images);
    if !size_identity {
        report.mismatches.push("size identity m|P(sl_n, m)| = n|P(sl_m, n)| fails".into());
    }
    Ok(report)
}

/// `K(L_r(sl_n)) ≅ K(W_sb(n, r))` by `λ ↦ (λ^t, ℓ(λ))`.
pub fn subregular_transpose_check(n: i64, r: i64) -> Result<TransposeReport> {
    let sb = fusion_subregular(n, r)?;
    if r < 2 {
        return Err(Error::InvalidParameters("transpose check needs r >= 2".into()));
    }
    let domain = fusion_ring_affine(n as usize, r)?;
    let domain_weights = dominant_weights(n as usize, r);
    let images = domain_weights
        .iter()
        .map(|w| Ok(sb.index_of(&transpose(w)?, box_count(w))))
        .collect::<Result<Vec<_>>>()?;
    Ok(compare(&domain, &domain_weights, &sb.ring, images))
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchingSector {
    pub a: i64,
    /// `(λ, σ^{(a−ℓ(λ))/n}(λ^t))`.
    pub pairs: Vec<(AffineWeight, AffineWeight)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchingReport {
    pub n: i64,
    pub m: i64,
    pub sectors: Vec<BranchingSector>,
    pub total: usize,
    pub expected: usize,
    pub ill_defined: Vec<String>,
}

impl BranchingReport {
    pub fn passed(&self) -> bool {
        self.total == self.expected && self.ill_defined.is_empty()
    }
}

/// Label combinatorics of the branching `V_{Z^{nm}} ⊇ L_m(sl_n) ⊗ L_n(sl_m) ⊗ V`:
/// sector `a ∈ Z_{nm}` pairs `λ` with `π(λ) ≡ a mod n` and `σ^{(a−ℓ(λ))/n}(λ^t)`.
pub fn branching_label_check(n: i64, m: i64) -> Result<BranchingReport> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidParameters(format!("need n, m >= 2, got ({n}, {m})")));
    }
    let weights = dominant_weights(n as usize, m);
    let mut sectors = Vec::new();
    let mut ill_defined = Vec::new();
    let mut total = 0;
    for a in 0..n * m {
        let mut pairs = Vec::new();
        for w in &weights {
            if modp(pi_pq(w) - a, n) != 0 {
                continue;
            }
            let diff = a - box_count(w);
            if diff % n != 0 {
                ill_defined.push(format!("a = {a}, lambda = {}", weight_label(w)));
                continue;
            }
            pairs.push((w.clone(), sigma(&transpose(w)?, diff / n)));
        }
        total += pairs.len();
        sectors.push(BranchingSector { a, pairs });
    }
    Ok(BranchingReport {
        n,
        m,
        sectors,
        total,
        expected: weights.len() * m as usize,
        ill_defined,
    })
}
