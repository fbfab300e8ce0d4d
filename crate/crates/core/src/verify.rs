//! The acceptance suite: ten exact checks shared by the `verify` command and
//! the `acceptance` test target.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{affine_fusion, affine_smatrix, verlinde_coefficients, verlinde_max_residual, VERLINDE_TOLERANCE};
use crate::levelrank::{branching_label_check, levelrank_datum, levelrank_iso_check, subregular_transpose_check};
use crate::qchar::{char_model, lattice_theta, relcoh_character, relcoh_precision_gain, eta_inverse_power, QSeries};
use crate::rational::{binomial, gcd, q, qi, Q};
use crate::ringkit::examples::ising_datum;
use crate::ringkit::verify_round_trips;
use crate::rootdata::{box_count, conformal_dim_prinw, sigma, transpose, AffineWeight};
use crate::sicoh::{build_rel_complex, cohomology_dims, koszul_factor};
use crate::walg::{
    check_monoidality, check_smatrix, extension_datum, fusion_ring, hrel_map_plus, irr, Family, WModel, WModuleLabel,
};

pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Independent reference formulas.
pub mod oracle {
    use num_bigint::BigInt;
    use num_traits::One;

    use crate::qchar::{eta_inverse_power, QSeries};
    use crate::rational::{q, qi, to_f64, Q};

    /// Rocha–Caridi character of the `(p, p')` Virasoro minimal model,
    /// `χ_{r,s} = η^{-1} Σ_k (q^{(2pp'k + p'r − ps)²/4pp'} − q^{(2pp'k + p'r + ps)²/4pp'})`,
    /// exact below `precision`.
    pub fn rocha_caridi(p: i64, pp: i64, r: i64, s: i64, precision: Q) -> QSeries {
        let inner = precision + q(1, 24);
        let mut num = QSeries::zero(inner);
        let span = if inner > qi(0) { (4.0 * (p * pp) as f64 * to_f64(&inner)).sqrt() } else { 0.0 };
        let kmax = (span / (2 * p * pp) as f64).ceil() as i64 + 1;
        for k in -kmax..=kmax {
            let x = 2 * p * pp * k + pp * r - p * s;
            let y = 2 * p * pp * k + pp * r + p * s;
            num = num.add(&QSeries::monomial(q(x * x, 4 * p * pp), qi(0), BigInt::one(), inner));
            num = num.add(&QSeries::monomial(q(y * y, 4 * p * pp), qi(0), -BigInt::one(), inner));
        }
        let terms = (precision + q(1, 24)).ceil().to_integer().max(1) as usize + 1;
        num.mul(&eta_inverse_power(1, terms)).truncate(precision)
    }

    /// `h_{r,s} = ((p'r − ps)² − (p' − p)²)/(4pp')`.
    pub fn kac_weight(p: i64, pp: i64, r: i64, s: i64) -> Q {
        q((pp * r - p * s).pow(2) - (pp - p).pow(2), 4 * p * pp)
    }

    /// Kac label `(r, s)` with `1 ≤ r < p`, `1 ≤ s < p'` of lowest weight `h`.
    pub fn kac_label(p: i64, pp: i64, h: Q) -> Option<(i64, i64)> {
        (1..p).flat_map(|r| (1..pp).map(move |s| (r, s))).find(|&(r, s)| kac_weight(p, pp, r, s) == h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Restrict to the instances named in the criteria.
    pub quick: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2}s, budget {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

pub const TITLES: [&str; 10] = [
    "fusion oracle agreement",
    "cardinalities",
    "subregular transpose isomorphism",
    "S-matrix Verlinde closure",
    "monoidality",
    "level-rank",
    "extension-ring duality",
    "relative cohomology",
    "character identity",
    "cohomology at character level",
];

const BUDGETS: [f64; 10] = [60.0, 5.0, 30.0, 30.0, 30.0, 30.0, 10.0, 60.0, 30.0, 60.0];

/// Outcome of one check: `Ok(detail)` on success, `Err(detail)` on failure.
type Check = std::result::Result<String, String>;

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn run_criterion(id: u8, opts: SuiteOptions) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => fusion_oracle(opts),
        2 => cardinalities(opts),
        3 => subregular_transpose(opts),
        4 => smatrix_closure(opts),
        5 => monoidality(opts),
        6 => level_rank(opts),
        7 => extension_duality(opts),
        8 => relative_cohomology(opts),
        9 => character_identity(opts),
        10 => character_transfer(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let idx = (id as usize).clamp(1, 10) - 1;
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        title: TITLES[idx],
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
        budget_seconds: BUDGETS[idx],
    }
}

pub fn run_all(opts: SuiteOptions) -> Vec<CriterionResult> {
    (1..=10).map(|id| run_criterion(id, opts)).collect()
}

fn fusion_oracle(_opts: SuiteOptions) -> Check {
    let mut cases = vec![];
    cases.extend((1..=6).map(|n| (2usize, n)));
    cases.extend((1..=4).map(|n| (3usize, n)));
    cases.extend([(4usize, 2), (4, 3)]);
    let mut pairs = 0usize;
    let mut worst = 0.0f64;
    for (r, n) in cases {
        let s = affine_smatrix(r, n);
        let unit = 0;
        let residual = verlinde_max_residual(&s.entries, unit);
        worst = worst.max(residual);
        ensure(residual < VERLINDE_TOLERANCE, || format!("residual {residual:e} at (r,n)=({r},{n})"))?;
        for (i, x) in s.basis.iter().enumerate() {
            for (j, y) in s.basis.iter().enumerate().skip(i) {
                let kw = lift(affine_fusion(x, y, n))?;
                let kw: Vec<(usize, u64)> = kw
                    .into_iter()
                    .map(|(w, m)| (s.basis.iter().position(|b| *b == w).expect("alcove weight"), m))
                    .collect::<std::collections::BTreeMap<_, _>>()
                    .into_iter()
                    .collect();
                let vl = lift(verlinde_coefficients(&s.entries, unit, i, j))?;
                ensure(kw == vl, || format!("(r,n)=({r},{n}): {x} x {y} differs"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} products agree, max rounding residual {worst:.1e}"))
}

fn cardinalities(_opts: SuiteOptions) -> Check {
    let mut checked = 0;
    for n in 2..=5i64 {
        for r in 0..=5i64 {
            let rational = gcd(n - 1, r + 1) == 1;
            for family in [Family::Subregular, Family::Superprincipal] {
                match WModel::new(family, n, r) {
                    Err(Error::NotRational { .. }) => {
                        ensure(!rational, || format!("{family} ({n},{r}) rejected but rational"))?;
                    }
                    Err(e) => return Err(e.to_string()),
                    Ok(model) => {
                        ensure(rational, || format!("{family} ({n},{r}) accepted but not rational"))?;
                        let size = lift(irr(&model))?.len() as u64;
                        let (nu, ru) = (n as u64, r as u64);
                        let want = match family {
                            Family::Subregular => binomial(nu + ru - 1, nu - 1),
                            Family::Superprincipal => binomial(nu + ru, nu),
                        };
                        ensure(size == want, || format!("{family} ({n},{r}): {size} simples, expected {want}"))?;
                        let ring = lift(fusion_ring(&model))?;
                        match r {
                            0 => ensure(size == 1, || format!("{family} ({n},0) is not trivial"))?,
                            1 => ensure(ring.ring.pic().len() as u64 == size, || {
                                format!("{family} ({n},1) is not a group ring")
                            })?,
                            _ => {}
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} rational models match the binomial counts"))
}

fn subregular_transpose(_opts: SuiteOptions) -> Check {
    for (n, r) in [(2, 2), (2, 3), (3, 2)] {
        let rep = lift(subregular_transpose_check(n, r))?;
        ensure(rep.passed(), || format!("(n,r)=({n},{r}): {:?}", rep.mismatches))?;
    }
    Ok("structure constants agree for (2,2), (2,3), (3,2)".into())
}

fn smatrix_closure(opts: SuiteOptions) -> Check {
    let mut cases = vec![(2, 2), (3, 2), (2, 3)];
    if !opts.quick {
        cases.extend([(4, 1), (2, 4), (3, 4)]);
    }
    let (mut worst_u, mut worst_v) = (0.0f64, 0.0f64);
    for (n, r) in cases {
        for family in [Family::Subregular, Family::Superprincipal] {
            let model = lift(WModel::new(family, n, r))?;
            let rep = lift(check_smatrix(&model))?;
            worst_u = worst_u.max(rep.unitarity_error);
            worst_v = worst_v.max(rep.verlinde_residual);
            ensure(rep.unitarity_error < UNITARITY_TOLERANCE, || {
                format!("{family} ({n},{r}) unitarity error {:e}", rep.unitarity_error)
            })?;
            ensure(rep.verlinde_residual < VERLINDE_TOLERANCE, || {
                format!("{family} ({n},{r}) Verlinde residual {:e}", rep.verlinde_residual)
            })?;
            ensure(rep.verlinde_matches_fusion, || format!("{family} ({n},{r}) Verlinde differs from fusion"))?;
            ensure(rep.s_squared_is_permutation, || format!("{family} ({n},{r}) S^2 is not a permutation"))?;
        }
    }
    Ok(format!("unitarity error {worst_u:.1e}, Verlinde residual {worst_v:.1e}"))
}

fn monoidality(opts: SuiteOptions) -> Check {
    let mut cases = vec![(2, 2), (3, 2)];
    if !opts.quick {
        cases.push((2, 3));
    }
    let mut summary = Vec::new();
    for (n, r) in cases {
        let rep = lift(check_monoidality(n, r))?;
        for (dir, d) in [("sb->spr", &rep.plus), ("spr->sb", &rep.minus)] {
            ensure(d.mismatches.is_empty(), || format!("({n},{r}) {dir}: {}", d.mismatches[0]))?;
            ensure(d.compatible_cases > 0 && d.compatible_cases < d.cases, || {
                format!("({n},{r}) {dir}: degenerate case split")
            })?;
            summary.push(format!(
                "({n},{r}) {dir} {}/{} compatible",
                d.compatible_cases, d.cases
            ));
        }
    }
    Ok(summary.join(", "))
}

fn level_rank(opts: SuiteOptions) -> Check {
    let mut cases = vec![(2, 2), (2, 3), (3, 2), (2, 4)];
    if !opts.quick {
        cases.extend([(4, 2), (3, 3)]);
    }
    for &(n, m) in &cases {
        let rep = lift(levelrank_iso_check(n, m))?;
        ensure(rep.passed(), || format!("(n,m)=({n},{m}): {:?}", rep.mismatches))?;
        let br = lift(branching_label_check(n, m))?;
        ensure(br.passed(), || format!("(n,m)=({n},{m}) branching count {} vs {}", br.total, br.expected))?;
    }
    let lambda = lift(AffineWeight::new(vec![1, 1, 3]))?;
    let t = lift(transpose(&lambda))?;
    let want = lift(AffineWeight::new(vec![1, 0, 0, 1, 1]))?;
    ensure(t == want && box_count(&lambda) == 7, || format!("figure example gives {t}, ell = {}", box_count(&lambda)))?;
    Ok(format!("{} pairs isomorphic; {lambda} -> ({t}, 7)", cases.len()))
}

fn extension_duality(_opts: SuiteOptions) -> Check {
    let mut count = 0;
    let mut check = |name: String, datum: Result<crate::ringkit::ExtensionDatum>| -> std::result::Result<(), String> {
        let datum = lift(datum)?;
        let rep = verify_round_trips(&datum).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            rep.extended_size * rep.subgroup_order == rep.base_size * rep.complement_order
                && rep.deextended_size * rep.complement_order == rep.extended_size * rep.subgroup_order,
            || format!("{name}: cardinality identities fail"),
        )?;
        count += 1;
        Ok(())
    };
    for n in [4, 8, 12, 16] {
        check(format!("Ising x Z_{n}"), Ok(ising_datum(n)))?;
    }
    for (n, r) in [(2, 2), (3, 2), (2, 3)] {
        for family in [Family::Subregular, Family::Superprincipal] {
            check(
                format!("{family} ({n},{r})"),
                WModel::new(family, n, r).and_then(|m| extension_datum(&m)),
            )?;
        }
    }
    for (n, m) in [(2, 2), (2, 3), (3, 2)] {
        check(format!("level-rank ({n},{m})"), levelrank_datum(n, m))?;
    }
    Ok(format!("{count} instances round-trip"))
}

fn relative_cohomology(opts: SuiteOptions) -> Check {
    let mut norms = vec![qi(1), qi(-1), q(1, 2)];
    let mut charges = vec![qi(0), qi(1), q(-3, 2)];
    if !opts.quick {
        norms.push(qi(2));
        charges.push(qi(5));
    }
    let max_weight = 6;
    let mut blocks = 0;
    for &b in &norms {
        for &l in &charges {
            let c = lift(build_rel_complex(l, -l, b, max_weight))?;
            let h = lift(cohomology_dims(&c))?;
            for (&(w, p), &d) in &h {
                let want = usize::from(w == 0 && p == 0);
                ensure(d == want, || format!("b={b}, lambda={l}: dim H^({w},{p}) = {d}"))?;
            }
            blocks += h.len();
            let off = lift(build_rel_complex(l, qi(1) - l, b, max_weight))?;
            ensure(lift(cohomology_dims(&off))?.is_empty(), || format!("lambda+mu=1 complex is not zero"))?;
        }
    }
    let k = lift(koszul_factor(5))?;
    ensure(
        k.cohomology.get(&0) == Some(&1) && k.cohomology.get(&-1) == Some(&0) && k.cohomology.get(&1) == Some(&0),
        || format!("Koszul factor cohomology {:?}", k.cohomology),
    )?;
    Ok(format!("{blocks} blocks, d^2 = 0, H = C at (0,0) only; Koszul H = (0,1,0)"))
}

/// `Σ_i χ_i θ_i / η` for the vacuum of `W_spr(2, 2)` with `χ_i` from the
/// Rocha–Caridi formula.
fn spr22_vacuum_from_oracle(order: Q) -> std::result::Result<QSeries, String> {
    let model = lift(WModel::superprincipal(2, 2))?;
    let precision = order - model.central_charge / 24;
    let vac = AffineWeight::vacuum(2, 2);
    let mut total = QSeries::zero(precision);
    for i in 0..2 {
        let lam = sigma(&vac, i);
        let h = lift(conformal_dim_prinw(&lam, 2, 2))?;
        let (r, s) = oracle::kac_label(3, 4, h).ok_or_else(|| format!("no (3,4) field of weight {h}"))?;
        let chi = oracle::rocha_caridi(3, 4, r, s, precision + 1);
        let v = chi.valuation().unwrap_or(qi(0));
        let theta = lift(lattice_theta(qi(4 * i), 8, qi(8), qi(4), precision - v + q(1, 24)))?;
        let eta = eta_inverse_power(1, (precision - v + 1).ceil().to_integer().max(1) as usize + 1);
        total = total.add(&chi.mul(&theta.mul(&eta)));
    }
    Ok(total.truncate(precision))
}

fn character_identity(_opts: SuiteOptions) -> Check {
    let order = qi(10);
    let model = lift(WModel::superprincipal(2, 2))?;
    let vac = WModuleLabel { lambda: AffineWeight::vacuum(2, 2), a: 0 };
    let lhs = lift(char_model(&model, &vac, order))?;
    let rhs = spr22_vacuum_from_oracle(order)?;
    let bound = order - model.central_charge / 24;
    lhs.agrees_below(&rhs, bound)?;
    Ok(format!("{} terms agree below q^{}", lhs.terms().count(), crate::rational::fmt_q(&bound)))
}

fn character_transfer(_opts: SuiteOptions) -> Check {
    let (n, r) = (2, 2);
    let order = qi(8);
    let sb = lift(WModel::subregular(n, r))?;
    let spr = lift(WModel::superprincipal(n, r))?;
    let bound = order - spr.central_charge / 24;
    let (mut admissible, mut zero) = (0, 0);
    let mut xis: Vec<Q> = (0..n * (n + r)).map(qi).collect();
    xis.extend([q(1, 2), q(-7, 3)]);
    for x in lift(irr(&sb))? {
        for &xi in &xis {
            let (s, t) = (xi / n, xi / (n + r));
            let gain = relcoh_precision_gain(sb.norm, spr.norm, s, t).ok_or("unbounded precision loss")?;
            let input_order = order - gain + (sb.central_charge - spr.central_charge) / 24;
            let ch = lift(char_model(&sb, &x, input_order))?;
            let out = lift(relcoh_character(&ch, sb.norm, spr.norm, s, t))?;
            match lift(hrel_map_plus(n, r, &x, xi))? {
                Some(y) => {
                    let want = lift(char_model(&spr, &y, order))?;
                    out.agrees_below(&want, bound).map_err(|e| format!("{x} at xi={xi}: {e}"))?;
                    admissible += 1;
                }
                None => {
                    ensure(out.is_zero(), || format!("{x} at inadmissible xi={xi} gives non-zero series"))?;
                    zero += 1;
                }
            }
        }
    }
    Ok(format!("{admissible} admissible transfers match, {zero} inadmissible give 0"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kac_table_34() {
        assert_eq!(oracle::kac_weight(3, 4, 1, 1), qi(0));
        assert_eq!(oracle::kac_weight(3, 4, 1, 2), q(1, 16));
        assert_eq!(oracle::kac_weight(3, 4, 1, 3), q(1, 2));
        let vac = oracle::rocha_caridi(3, 4, 1, 1, qi(6) - q(1, 48));
        let coeffs = crate::qchar::integer_coefficients(&vac);
        assert_eq!(coeffs, vec![1, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(11, SuiteOptions { quick: true }).passed);
    }
}
