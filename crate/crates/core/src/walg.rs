//! Rational subregular W-algebras `W_sb(n, r)` and principal W-superalgebras
//! `W_spr(n, r)`: simple modules, fusion rings, S-matrices, and the label
//! maps induced by relative semi-infinite cohomology.
//!
//! Simple modules are orbits of local pairs `(λ, a)` with `λ ∈ P̂_+^n(r)` and
//! `a ∈ Z_N`, where `N = nr` (sb) or `(n+r)r` (spr); `Z_r` acts by
//! `m·(λ, a) = (σ^m λ, a + m·step)` with `step = n` (sb) or `n + r` (spr).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{affine_smatrix, fusion_ring_affine, verlinde_coefficients, verlinde_max_residual};
use crate::rational::{binomial, frac, gcd, modp, q, qi, to_f64, Q};
use crate::ringkit::{
    extend, find_isomorphism, count_isomorphisms, group_ring, monodromy_decomposition, DiscriminantForm,
    ExtensionDatum, FusionRing, SimpleCurrent,
};
use crate::rootdata::{
    central_charge_prinw, conformal_dim_affine, conformal_dim_prinw, dominant_weights, pi_pq, sigma, AffineWeight,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "sb")]
    Subregular,
    #[serde(rename = "spr")]
    Superprincipal,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Subregular => "sb",
            Family::Superprincipal => "spr",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sb" => Ok(Family::Subregular),
            "spr" => Ok(Family::Superprincipal),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected sb or spr)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Scalar data of one rational model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WModel {
    pub family: Family,
    pub n: i64,
    pub r: i64,
    /// `k = −n + (n+r)/(n−1)` (sb) or `ℓ = −(n−1) + (n−1)/(n+r)` (spr).
    pub level: Q,
    /// Heisenberg norm `ε_+ = r/n` or `ε_− = r/(n+r)`.
    pub norm: Q,
    /// Lattice modulus `N`.
    pub modulus: i64,
    pub central_charge: Q,
    /// Set when `gcd(n+r, r−1) = 1` disagrees with the enforced
    /// `gcd(n−1, r+1) = 1`.
    pub alternative_condition_disagrees: bool,
}

impl WModel {
    pub fn new(family: Family, n: i64, r: i64) -> Result<Self> {
        if n < 2 || r < 0 {
            return Err(Error::InvalidParameters(format!(
                "need n >= 2 and r >= 0, got (n, r) = ({n}, {r})"
            )));
        }
        if gcd(n - 1, r + 1) != 1 {
            return Err(Error::NotRational { n, r });
        }
        let (level, norm, modulus) = match family {
            Family::Subregular => (q(n + r, n - 1) - n, q(r, n), n * r),
            Family::Superprincipal => (q(n - 1, n + r) - (n - 1), q(r, n + r), (n + r) * r),
        };
        Ok(WModel {
            family,
            n,
            r,
            level,
            norm,
            modulus,
            central_charge: central_charge_prinw(r as usize, n) + 1,
            alternative_condition_disagrees: gcd(n + r, (r - 1).abs()) != 1,
        })
    }

    pub fn subregular(n: i64, r: i64) -> Result<Self> {
        Self::new(Family::Subregular, n, r)
    }

    pub fn superprincipal(n: i64, r: i64) -> Result<Self> {
        Self::new(Family::Superprincipal, n, r)
    }

    /// Lattice charge carried by the generating simple current `L_W(nΛ_1)`.
    pub fn step(&self) -> i64 {
        match self.family {
            Family::Subregular => self.n,
            Family::Superprincipal => self.n + self.r,
        }
    }

    /// Number of simple modules predicted in closed form.
    pub fn expected_size(&self) -> u64 {
        let (n, r) = (self.n as u64, self.r as u64);
        match self.family {
            Family::Subregular => binomial(n + r - 1, n - 1),
            Family::Superprincipal => binomial(n + r, n),
        }
    }
}

/// Label `(λ, a)` of a simple module, normally an orbit representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WModuleLabel {
    pub lambda: AffineWeight,
    pub a: i64,
}

impl fmt::Display for WModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda, self.a)
    }
}

fn empty_weight() -> AffineWeight {
    AffineWeight::new(vec![0]).expect("rank one")
}

/// Label used for `r = 0`, where the model is one-dimensional.
fn trivial_label() -> WModuleLabel {
    WModuleLabel {
        lambda: empty_weight(),
        a: 0,
    }
}

fn weight_index(r: i64, n: i64) -> HashMap<AffineWeight, usize> {
    dominant_weights(r as usize, n)
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect()
}

/// Whether `(λ, a)` is local: `π(λ) ≡ a mod r`.
pub fn is_local(model: &WModel, label: &WModuleLabel) -> bool {
    match model.r {
        0 => true,
        1 => true,
        r => modp(pi_pq(&label.lambda) - label.a, r) == 0,
    }
}

/// Orbit representative minimising `(a, index of λ)`.
pub fn canonical_label(model: &WModel, lambda: &AffineWeight, a: i64) -> WModuleLabel {
    if model.r == 0 {
        return trivial_label();
    }
    let nn = model.modulus;
    if model.r == 1 {
        return WModuleLabel {
            lambda: lambda.clone(),
            a: modp(a, nn),
        };
    }
    let index = weight_index(model.r, model.n);
    (0..model.r)
        .map(|m| WModuleLabel {
            lambda: sigma(lambda, m),
            a: modp(a + m * model.step(), nn),
        })
        .min_by_key(|l| (l.a, index[&l.lambda]))
        .expect("non-empty orbit")
}

/// Model together with its fusion ring; `labels[i]` names basis element `i`.
#[derive(Debug, Clone)]
pub struct WRing {
    pub model: WModel,
    pub labels: Vec<WModuleLabel>,
    pub ring: FusionRing,
    index: HashMap<WModuleLabel, usize>,
}

impl WRing {
    fn new(model: WModel, labels: Vec<WModuleLabel>, ring: FusionRing) -> Self {
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        WRing {
            model,
            labels,
            ring,
            index,
        }
    }

    /// Basis index of the orbit containing `(λ, a)`, if that pair is local.
    pub fn index_of(&self, lambda: &AffineWeight, a: i64) -> Option<usize> {
        let l = canonical_label(&self.model, lambda, a);
        if !is_local(&self.model, &l) {
            return None;
        }
        self.index.get(&l).copied()
    }

    pub fn index_of_label(&self, label: &WModuleLabel) -> Option<usize> {
        self.index_of(&label.lambda, label.a)
    }
}

/// Extension datum realising the model as a simple current extension of
/// `W_pr(r, n) ⊗ V_{√N Z}` (fusion ring `K(L_n(sl_r)) ⊗ Z[Z_N]`), with
/// monodromy phases read off from conformal weights.
pub fn extension_datum(model: &WModel) -> Result<ExtensionDatum> {
    if model.r < 2 {
        return Err(Error::InvalidParameters("extension datum needs r >= 2".into()));
    }
    let (r, n) = (model.r as usize, model.n);
    let base = fusion_ring_affine(r, n)?;
    let weights = dominant_weights(r, n);
    let h: Vec<Q> = weights
        .iter()
        .map(|w| conformal_dim_prinw(w, r, n))
        .collect::<Result<_>>()?;
    let current = weights
        .iter()
        .position(|w| *w == AffineWeight::multiple_of_fundamental(r, n, 1))
        .expect("simple current in basis");
    let phases = monodromy_decomposition(&base, &[current], &h)?;
    Ok(ExtensionDatum {
        base: (*base).clone(),
        lattice: DiscriminantForm::rank_one(model.modulus)?,
        generators: vec![SimpleCurrent {
            element: vec![model.step()],
            current,
        }],
        phases,
    })
}

static W_CACHE: Lazy<Mutex<HashMap<(Family, i64, i64), Arc<WRing>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Fusion ring of the model, memoized.
pub fn fusion_ring(model: &WModel) -> Result<Arc<WRing>> {
    let key = (model.family, model.n, model.r);
    if let Some(w) = W_CACHE.lock().expect("cache lock").get(&key) {
        return Ok(w.clone());
    }
    let built = Arc::new(build_ring(model)?);
    W_CACHE.lock().expect("cache lock").insert(key, built.clone());
    Ok(built)
}

fn build_ring(model: &WModel) -> Result<WRing> {
    match model.r {
        0 => {
            let ring = FusionRing::from_fn(vec![trivial_label().to_string()], 0, vec![0], |_, _| vec![(0, 1)])?;
            Ok(WRing::new(model.clone(), vec![trivial_label()], ring))
        }
        1 => {
            let nn = model.modulus;
            let labels: Vec<WModuleLabel> = (0..nn)
                .map(|a| WModuleLabel {
                    lambda: AffineWeight::vacuum(1, model.n),
                    a,
                })
                .collect();
            let g = group_ring(&[nn])?;
            let ring = FusionRing::from_fn(
                labels.iter().map(|l| l.to_string()).collect(),
                0,
                (0..nn as usize).collect(),
                |i, j| g.product(i, j).to_vec(),
            )?;
            Ok(WRing::new(model.clone(), labels, ring))
        }
        _ => {
            let datum = extension_datum(model)?;
            let ext = extend(&datum)?;
            let weights = dominant_weights(model.r as usize, model.n);
            let labels: Vec<WModuleLabel> = ext
                .representatives
                .iter()
                .map(|(m, a)| WModuleLabel {
                    lambda: weights[*m].clone(),
                    a: a[0],
                })
                .collect();
            for l in &labels {
                debug_assert!(is_local(model, l));
                debug_assert_eq!(&canonical_label(model, &l.lambda, l.a), l);
            }
            let ring = FusionRing::from_fn(
                labels.iter().map(|l| l.to_string()).collect(),
                ext.ring.unit(),
                ext.ring.pic().to_vec(),
                |i, j| ext.ring.product(i, j).to_vec(),
            )?;
            Ok(WRing::new(model.clone(), labels, ring))
        }
    }
}

/// Simple modules of the model as canonical labels.
pub fn irr(model: &WModel) -> Result<Vec<WModuleLabel>> {
    Ok(fusion_ring(model)?.labels.clone())
}

pub fn irr_subregular(n: i64, r: i64) -> Result<Vec<WModuleLabel>> {
    irr(&WModel::subregular(n, r)?)
}

pub fn irr_spr(n: i64, r: i64) -> Result<Vec<WModuleLabel>> {
    irr(&WModel::superprincipal(n, r)?)
}

pub fn fusion_subregular(n: i64, r: i64) -> Result<Arc<WRing>> {
    fusion_ring(&WModel::subregular(n, r)?)
}

pub fn fusion_spr(n: i64, r: i64) -> Result<Arc<WRing>> {
    fusion_ring(&WModel::superprincipal(n, r)?)
}

/// Lowest conformal weight of `(λ, a)`:
/// `min_i [h^W(σ^i λ) + min_k (a + i·step + kN)²/(2N)]`.
pub fn lowest_conformal_weight(model: &WModel, label: &WModuleLabel) -> Result<Q> {
    if model.r == 0 {
        return Ok(qi(0));
    }
    let nn = model.modulus;
    let lattice_min = |c: i64| {
        let c = modp(c, nn);
        let d = c.min(nn - c);
        q(d * d, 2 * nn)
    };
    if model.r == 1 {
        return Ok(lattice_min(label.a));
    }
    let mut best: Option<Q> = None;
    for i in 0..model.r {
        let h = conformal_dim_prinw(&sigma(&label.lambda, i), model.r as usize, model.n)? + lattice_min(label.a + i * model.step());
        best = Some(best.map_or(h, |b: Q| b.min(h)));
    }
    Ok(best.expect("r >= 2"))
}

/// Twist checks on the currents `E_i = L_W(nΛ_i) ⊗ V_{i·step + L}` used in
/// the extension: `2h(E_i) ∈ Z`, and `h` additive along the group, modulo 1
/// for even lattices and modulo 1/2 for odd ones.
pub fn check_current_twists(model: &WModel) -> Result<Vec<Q>> {
    if model.r < 2 {
        return Ok(vec![]);
    }
    let (r, n, nn) = (model.r as usize, model.n, model.modulus);
    let hs: Vec<Q> = (0..model.r)
        .map(|i| {
            let c = i * model.step();
            conformal_dim_prinw(&AffineWeight::multiple_of_fundamental(r, n, i as usize), r, n)
                .map(|h| h + q(c * c, 2 * nn))
        })
        .collect::<Result<_>>()?;
    let modulus = if nn % 2 == 0 { qi(1) } else { q(1, 2) };
    for (i, h) in hs.iter().enumerate() {
        if !(h * 2).is_integer() {
            return Err(Error::InconsistentMonodromy(format!("2h(E_{i}) = {} is not integral", h * 2)));
        }
        for (j, k) in hs.iter().enumerate() {
            let s = hs[(i + j) % r];
            if !((s - h - k) / modulus).is_integer() {
                return Err(Error::InconsistentMonodromy(format!("twists of E_{i}, E_{j} are not additive")));
            }
        }
    }
    Ok(hs)
}

/// S-matrix on the basis of [`fusion_ring`].
#[derive(Debug, Clone)]
pub struct WSMatrix {
    pub labels: Vec<WModuleLabel>,
    pub entries: Vec<Vec<Complex64>>,
}

/// `S_{(λ,a),(μ,b)} = exp(2πi ab/N) √(r/m) S^W_{λμ}` with `m = n` (sb) or
/// `n + r` (spr) and `S^W` the S-matrix of `L_n(sl_r)`.
pub fn smatrix(model: &WModel) -> Result<WSMatrix> {
    let wr = fusion_ring(model)?;
    if model.r == 0 {
        return Ok(WSMatrix {
            labels: wr.labels.clone(),
            entries: vec![vec![Complex64::new(1.0, 0.0)]],
        });
    }
    let nn = model.modulus;
    let (sw, index): (Vec<Vec<Complex64>>, HashMap<AffineWeight, usize>) = if model.r == 1 {
        (vec![vec![Complex64::new(1.0, 0.0)]], HashMap::from([(AffineWeight::vacuum(1, model.n), 0)]))
    } else {
        let s = affine_smatrix(model.r as usize, model.n);
        let idx = s.basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        (s.entries, idx)
    };
    let scale = (to_f64(&q(model.r, model.step()))).sqrt();
    let entries = wr
        .labels
        .iter()
        .map(|x| {
            wr.labels
                .iter()
                .map(|y| {
                    let phase = frac(&q(x.a * y.a, nn));
                    let angle = 2.0 * std::f64::consts::PI * to_f64(&phase);
                    Complex64::from_polar(scale, angle) * sw[index[&x.lambda]][index[&y.lambda]]
                })
                .collect()
        })
        .collect();
    Ok(WSMatrix {
        labels: wr.labels.clone(),
        entries,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SMatrixReport {
    pub unitarity_error: f64,
    pub verlinde_residual: f64,
    pub verlinde_matches_fusion: bool,
    pub s_squared_error: f64,
    pub s_squared_is_permutation: bool,
}

/// Unitarity, Verlinde closure against the fusion ring, and `S²` being a
/// permutation matrix.
pub fn check_smatrix(model: &WModel) -> Result<SMatrixReport> {
    let wr = fusion_ring(model)?;
    let s = smatrix(model)?;
    let d = s.entries.len();
    let e = &s.entries;
    let mut unitarity_error = 0.0f64;
    let mut s2_error = 0.0f64;
    let mut perm_ok = true;
    for i in 0..d {
        let mut ones = 0;
        for j in 0..d {
            let dot: Complex64 = (0..d).map(|k| e[i][k] * e[j][k].conj()).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            unitarity_error = unitarity_error.max((dot - want).norm());
            let sq: Complex64 = (0..d).map(|k| e[i][k] * e[k][j]).sum();
            let rounded = sq.re.round();
            s2_error = s2_error.max((sq - Complex64::new(rounded, 0.0)).norm());
            if rounded == 1.0 {
                ones += 1;
            } else if rounded != 0.0 {
                perm_ok = false;
            }
        }
        if ones != 1 {
            perm_ok = false;
        }
    }
    let unit = wr.ring.unit();
    let residual = verlinde_max_residual(e, unit);
    let mut matches = residual < crate::fusion::VERLINDE_TOLERANCE;
    if matches {
        'outer: for i in 0..d {
            for j in i..d {
                if verlinde_coefficients(e, unit, i, j)? != wr.ring.product(i, j) {
                    matches = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(SMatrixReport {
        unitarity_error,
        verlinde_residual: residual,
        verlinde_matches_fusion: matches,
        s_squared_error: s2_error,
        s_squared_is_permutation: perm_ok && s2_error < 1e-8,
    })
}

fn integral_xi(xi: &Q) -> Option<i64> {
    xi.is_integer().then(|| xi.to_integer())
}

/// `L_sb(λ, a) ↦ L_spr(λ, ((n+r)a − rξ)/n)` when `ξ ≡ a mod n`, else `None`.
pub fn hrel_map_plus(n: i64, r: i64, label: &WModuleLabel, xi: Q) -> Result<Option<WModuleLabel>> {
    let spr = WModel::superprincipal(n, r)?;
    let Some(x) = integral_xi(&xi) else { return Ok(None) };
    if modp(x - label.a, n) != 0 {
        return Ok(None);
    }
    let a = ((n + r) * label.a - r * x) / n;
    Ok(Some(canonical_label(&spr, &label.lambda, a)))
}

/// `L_spr(λ, a) ↦ L_sb(λ, (na + rξ)/(n+r))` when `ξ ≡ a mod (n+r)`, else `None`.
pub fn hrel_map_minus(n: i64, r: i64, label: &WModuleLabel, xi: Q) -> Result<Option<WModuleLabel>> {
    let sb = WModel::subregular(n, r)?;
    let Some(x) = integral_xi(&xi) else { return Ok(None) };
    if modp(x - label.a, n + r) != 0 {
        return Ok(None);
    }
    let a = (n * label.a + r * x) / (n + r);
    Ok(Some(canonical_label(&sb, &label.lambda, a)))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MonoidalityDirection {
    pub cases: usize,
    pub compatible_cases: usize,
    /// Incompatible cases whose right-hand side `H(x ⊠ y)` is nevertheless
    /// non-zero (allowed: only the left-hand side is asserted to vanish).
    pub incompatible_with_nonzero_rhs: usize,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoidalityReport {
    pub n: i64,
    pub r: i64,
    pub plus: MonoidalityDirection,
    pub minus: MonoidalityDirection,
}

impl MonoidalityReport {
    pub fn passed(&self) -> bool {
        self.plus.mismatches.is_empty() && self.minus.mismatches.is_empty()
    }
}

type LabelMap = fn(i64, i64, &WModuleLabel, Q) -> Result<Option<WModuleLabel>>;

fn monoidality_direction(source: &WRing, target: &WRing, map: LabelMap, period: i64) -> Result<MonoidalityDirection> {
    let (n, r) = (source.model.n, source.model.r);
    let d = source.labels.len();
    // images[x][ξ]
    let mut images = vec![vec![None; period as usize]; d];
    for (x, label) in source.labels.iter().enumerate() {
        for xi in 0..period {
            images[x][xi as usize] = match map(n, r, label, qi(xi))? {
                Some(l) => Some(target.index_of_label(&l).ok_or_else(|| {
                    Error::InconsistentMonodromy(format!("image {l} is not a simple module"))
                })?),
                None => None,
            };
        }
    }
    let mut out = MonoidalityDirection::default();
    for x in 0..d {
        for y in 0..d {
            for x1 in 0..period as usize {
                for x2 in 0..period as usize {
                    out.cases += 1;
                    let sum = (x1 + x2) % period as usize;
                    let mut rhs: BTreeMap<usize, u64> = BTreeMap::new();
                    for &(z, m) in source.ring.product(x, y) {
                        if let Some(t) = images[z][sum] {
                            *rhs.entry(t).or_insert(0) += m;
                        }
                    }
                    match (images[x][x1], images[y][x2]) {
                        (Some(ix), Some(iy)) => {
                            out.compatible_cases += 1;
                            let lhs: BTreeMap<usize, u64> = target.ring.product(ix, iy).iter().copied().collect();
                            if lhs != rhs {
                                out.mismatches.push(format!(
                                    "{} x {} at xi = ({x1}, {x2})",
                                    source.labels[x], source.labels[y]
                                ));
                            }
                        }
                        _ => {
                            if !rhs.is_empty() {
                                out.incompatible_with_nonzero_rhs += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive label-level check that `H^rel` intertwines fusion products, in
/// both directions, over all residues `ξ_1, ξ_2 ∈ Z_{n(n+r)}`.
pub fn check_monoidality(n: i64, r: i64) -> Result<MonoidalityReport> {
    let sb = fusion_subregular(n, r)?;
    let spr = fusion_spr(n, r)?;
    let period = n * (n + r);
    Ok(MonoidalityReport {
        n,
        r,
        plus: monoidality_direction(&sb, &spr, hrel_map_plus, period)?,
        minus: monoidality_direction(&spr, &sb, hrel_map_minus, period)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AlternativeLabelsReport {
    pub n: i64,
    pub r: i64,
    pub size: usize,
    pub expected: u64,
    /// Alternative label `(λ, a)` with `λ ∈ P̂_+^r(n)`, `a ∈ Z_{n(n+r)}`,
    /// paired with its image under the isomorphism found.
    pub isomorphism: Vec<(WModuleLabel, WModuleLabel)>,
    pub isomorphism_count: usize,
}

/// Second parametrisation of `Irr(W_spr(n, r))` as orbits of
/// `P̂_+^r(n) × Z_{n(n+r)}` under `m·(λ, a) = (σ^m λ, a − m(n+r))`, with
/// locality `π(λ) ≡ −a mod n`; the resulting ring is matched with
/// [`fusion_spr`] by isomorphism search.
pub fn spr_alternative_labels(n: i64, r: i64) -> Result<AlternativeLabelsReport> {
    let spr = fusion_spr(n, r)?;
    if r < 1 {
        return Err(Error::InvalidParameters("alternative labels need r >= 1".into()));
    }
    let (nu, ri) = (n as usize, r);
    let base = fusion_ring_affine(nu, ri)?;
    let weights = dominant_weights(nu, ri);
    let h: Vec<Q> = weights.iter().map(conformal_dim_affine).collect();
    let current = weights
        .iter()
        .position(|w| *w == AffineWeight::multiple_of_fundamental(nu, ri, 1))
        .expect("simple current in basis");
    let phases = monodromy_decomposition(&base, &[current], &h)?;
    let modulus = n * (n + r);
    let datum = ExtensionDatum {
        base: (*base).clone(),
        lattice: DiscriminantForm::rank_one(modulus)?,
        generators: vec![SimpleCurrent {
            element: vec![modp(-(n + r), modulus)],
            current,
        }],
        phases,
    };
    let ext = extend(&datum)?;
    let alt: Vec<WModuleLabel> = ext
        .representatives
        .iter()
        .map(|(m, a)| WModuleLabel {
            lambda: weights[*m].clone(),
            a: a[0],
        })
        .collect();
    for l in &alt {
        if modp(pi_pq(&l.lambda) + l.a, n) != 0 {
            return Err(Error::InconsistentMonodromy(format!(
                "alternative label {l} violates pi(lambda) = -a mod n"
            )));
        }
    }
    let map = find_isomorphism(&ext.ring, &spr.ring).ok_or_else(|| {
        Error::NoIsomorphism(format!("alternative parametrisation of W_spr({n},{r})"))
    })?;
    let count = count_isomorphisms(&ext.ring, &spr.ring, 10_000);
    Ok(AlternativeLabelsReport {
        n,
        r,
        size: alt.len(),
        expected: WModel::superprincipal(n, r)?.expected_size(),
        isomorphism: alt
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), spr.labels[map[i]].clone()))
            .collect(),
        isomorphism_count: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::affine_fusion;

    fn label(c: &[i64], a: i64) -> WModuleLabel {
        WModuleLabel {
            lambda: AffineWeight::new(c.to_vec()).unwrap(),
            a,
        }
    }

    #[test]
    fn model_data() {
        let m = WModel::subregular(2, 2).unwrap();
        assert_eq!(m.level, qi(2));
        assert_eq!(m.norm, qi(1));
        assert_eq!(m.central_charge, q(3, 2));
        let m = WModel::superprincipal(2, 2).unwrap();
        assert_eq!(m.level, q(-3, 4));
        assert_eq!(m.norm, q(1, 2));
        assert_eq!(m.modulus, 8);
        assert!(matches!(WModel::subregular(3, 1), Err(Error::NotRational { n: 3, r: 1 })));
        assert!(matches!(WModel::subregular(4, 2), Err(Error::NotRational { .. })));
        assert!(WModel::subregular(2, 4).unwrap().alternative_condition_disagrees);
        assert!(!WModel::subregular(2, 3).unwrap().alternative_condition_disagrees);
    }

    #[test]
    fn cardinalities_small() {
        assert_eq!(irr_subregular(3, 2).unwrap().len(), 6);
        assert_eq!(irr_spr(2, 2).unwrap().len(), 6);
        assert_eq!(irr_subregular(5, 0).unwrap().len(), 1);
        assert_eq!(irr_subregular(4, 1).unwrap().len(), 4);
        assert_eq!(irr_spr(2, 1).unwrap().len(), 3);
        assert_eq!(irr_spr(6, 0).unwrap().len(), 1);
    }

    #[test]
    fn spr_pic_is_cyclic() {
        for (n, r) in [(2, 2), (3, 2), (2, 3)] {
            let w = fusion_spr(n, r).unwrap();
            let pic: Vec<WModuleLabel> = w.ring.pic().iter().map(|&i| w.labels[i].clone()).collect();
            assert_eq!(pic.len() as i64, n + r);
            let model = &w.model;
            for a in 0..n + r {
                let want = canonical_label(model, &AffineWeight::vacuum(r as usize, n), a * r);
                assert!(pic.contains(&want));
            }
            w.ring.check_pic().unwrap();
        }
    }

    /// Independent route: enumerate local pairs and orbits directly and
    /// apply the fusion formula N_{λμ}^ν with additive a.
    #[test]
    fn fusion_matches_direct_formula() {
        for family in [Family::Subregular, Family::Superprincipal] {
            for (n, r) in [(2, 2), (3, 2), (2, 3)] {
                let model = WModel::new(family, n, r).unwrap();
                let w = fusion_ring(&model).unwrap();
                let weights = dominant_weights(r as usize, n);
                let mut direct = std::collections::BTreeSet::new();
                for lam in &weights {
                    for a in 0..model.modulus {
                        if modp(pi_pq(lam) - a, r) == 0 {
                            direct.insert(canonical_label(&model, lam, a));
                        }
                    }
                }
                assert_eq!(direct.len(), w.labels.len());
                assert_eq!(direct.len() as u64, model.expected_size());
                for (i, x) in w.labels.iter().enumerate() {
                    for (j, y) in w.labels.iter().enumerate() {
                        let mut want: BTreeMap<usize, u64> = BTreeMap::new();
                        for (nu, m) in affine_fusion(&x.lambda, &y.lambda, n).unwrap() {
                            *want.entry(w.index_of(&nu, x.a + y.a).unwrap()).or_insert(0) += m;
                        }
                        let got: BTreeMap<usize, u64> = w.ring.product(i, j).iter().copied().collect();
                        assert_eq!(got, want, "{family} ({n},{r}) {x} x {y}");
                    }
                }
                w.ring.check_associativity().unwrap();
            }
        }
    }

    #[test]
    fn smatrix_checks() {
        for family in [Family::Subregular, Family::Superprincipal] {
            for (n, r) in [(2, 2), (3, 2), (2, 3), (2, 1), (4, 1), (3, 0)] {
                let model = WModel::new(family, n, r).unwrap();
                let rep = check_smatrix(&model).unwrap();
                assert!(rep.unitarity_error < 1e-10, "{family} ({n},{r}) {rep:?}");
                assert!(rep.verlinde_matches_fusion, "{family} ({n},{r}) {rep:?}");
                assert!(rep.s_squared_is_permutation, "{family} ({n},{r}) {rep:?}");
                let s = smatrix(&model).unwrap();
                let unit = fusion_ring(&model).unwrap().ring.unit();
                assert!(s.entries[unit].iter().all(|z| z.re > 0.0));
            }
        }
    }

    #[test]
    fn hrel_examples() {
        let vac_sb = label(&[2, 0], 0);
        assert_eq!(hrel_map_plus(2, 2, &vac_sb, qi(0)).unwrap(), Some(label(&[2, 0], 0)));
        assert_eq!(hrel_map_plus(2, 2, &vac_sb, qi(1)).unwrap(), None);
        assert_eq!(hrel_map_plus(2, 2, &vac_sb, q(1, 2)).unwrap(), None);
        let spr = WModel::superprincipal(2, 2).unwrap();
        assert_eq!(
            hrel_map_plus(2, 2, &label(&[0, 2], 2), qi(0)).unwrap(),
            Some(canonical_label(&spr, &AffineWeight::new(vec![0, 2]).unwrap(), 4))
        );
        assert_eq!(hrel_map_minus(2, 2, &label(&[2, 0], 0), qi(0)).unwrap(), Some(vac_sb));
        assert_eq!(hrel_map_minus(2, 2, &label(&[2, 0], 0), qi(1)).unwrap(), None);
    }

    #[test]
    fn hrel_round_trip_and_bijection() {
        for (n, r) in [(2, 2), (3, 2), (2, 3)] {
            let sb = fusion_subregular(n, r).unwrap();
            let spr = fusion_spr(n, r).unwrap();
            for xi in 0..n * (n + r) {
                let mut images = std::collections::BTreeSet::new();
                let mut count = 0;
                for x in &sb.labels {
                    if let Some(y) = hrel_map_plus(n, r, x, qi(xi)).unwrap() {
                        count += 1;
                        images.insert(y.clone());
                        assert_eq!(hrel_map_minus(n, r, &y, qi(xi)).unwrap().as_ref(), Some(x));
                        assert!(spr.index_of_label(&y).is_some());
                    }
                }
                assert_eq!(images.len(), count);
                // period n(n+r) in xi
                for x in &sb.labels {
                    assert_eq!(
                        hrel_map_plus(n, r, x, qi(xi)).unwrap(),
                        hrel_map_plus(n, r, x, qi(xi + n * (n + r))).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn hrel_is_orbit_invariant() {
        let (n, r) = (3, 2);
        let sb = WModel::subregular(n, r).unwrap();
        for x in irr_subregular(n, r).unwrap() {
            let other = (sigma(&x.lambda, 1), x.a + n);
            for xi in 0..n * (n + r) {
                let a = hrel_map_plus(n, r, &x, qi(xi)).unwrap();
                let b = hrel_map_plus(n, r, &WModuleLabel { lambda: other.0.clone(), a: other.1 }, qi(xi)).unwrap();
                assert_eq!(a, b);
            }
            assert_eq!(canonical_label(&sb, &other.0, other.1), x);
        }
    }

    #[test]
    fn monoidality_small() {
        let rep = check_monoidality(2, 2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.plus.compatible_cases > 0 && rep.minus.compatible_cases > 0);
    }

    #[test]
    fn twists_of_currents() {
        for (n, r) in [(2, 2), (3, 2), (2, 3), (3, 4)] {
            let sb = check_current_twists(&WModel::subregular(n, r).unwrap()).unwrap();
            for (i, h) in sb.iter().enumerate() {
                assert_eq!(*h, q(i as i64 * n, 2));
            }
            let spr = check_current_twists(&WModel::superprincipal(n, r).unwrap()).unwrap();
            for (i, h) in spr.iter().enumerate() {
                let i = i as i64;
                assert_eq!(*h, q(i * (n + i), 2));
            }
        }
    }

    #[test]
    fn alternative_labels() {
        for (n, r) in [(2, 2), (3, 2), (2, 3)] {
            let rep = spr_alternative_labels(n, r).unwrap();
            assert_eq!(rep.size as u64, rep.expected);
            let vac = &rep.isomorphism[0];
            assert_eq!(vac.0.a, 0);
            assert_eq!(vac.1, label(&AffineWeight::vacuum(r as usize, n).coeffs().to_vec(), 0));
        }
    }

    #[test]
    fn conformal_weights_of_labels() {
        // W_sb(2,2) = L_2(sl_2): lowest weights 0, 3/16, 1/2.
        let model = WModel::subregular(2, 2).unwrap();
        let mut hs: Vec<Q> = irr(&model)
            .unwrap()
            .iter()
            .map(|l| lowest_conformal_weight(&model, l).unwrap())
            .collect();
        hs.sort();
        assert_eq!(hs, vec![qi(0), q(3, 16), q(1, 2)]);
    }
}
