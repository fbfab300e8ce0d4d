use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};
use wfusion_core::fusion::{affine_fusion, weight_label};
use wfusion_core::levelrank::{branching_label_check, levelrank_iso_check};
use wfusion_core::qchar::{char_model, char_prinw, QSeries};
use wfusion_core::rational::{fmt_q, parse_q, qi};
use wfusion_core::rootdata::{box_count, conformal_dim_affine, dominant_weights, pi_pq};
use wfusion_core::sicoh::{build_rel_complex, cohomology_dims};
use wfusion_core::verify::{run_criterion, SuiteOptions, UNITARITY_TOLERANCE};
use wfusion_core::walg::{
    check_current_twists, check_monoidality, check_smatrix, fusion_ring, hrel_map_minus, hrel_map_plus,
    is_local, lowest_conformal_weight, smatrix, spr_alternative_labels,
};
use wfusion_core::{AffineWeight, Error, Family, FusionRing, WModel, WModuleLabel};

use crate::args::*;
use crate::cache::affine_ring;
use crate::output::{csv_row, json};

/// Why a command did not succeed; determines the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Input violates a stated precondition (exit 3).
    Validation(String),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RankMismatch(..)
            | Error::NotDominant(_)
            | Error::LevelMismatch { .. }
            | Error::InvalidParameters(_)
            | Error::NotRational { .. }
            | Error::DegenerateNorm
            | Error::Parse(_) => Failure::Validation(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

/// Text to print plus an optional verification failure to report after it.
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn validation(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn parse_algebra(a: &AlgebraArgs) -> Result<(usize, i64), Failure> {
    let r: usize = a
        .algebra
        .strip_prefix("sl")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| validation(format!("algebra must be written sl<r>, got {:?}", a.algebra)))?;
    if r < 2 {
        return Err(validation(format!("need r >= 2, got sl{r}")));
    }
    if a.level < 0 {
        return Err(validation(format!("need level >= 0, got {}", a.level)));
    }
    Ok((r, a.level))
}

fn parse_weight(s: &str) -> Result<AffineWeight, Failure> {
    let coeffs: Vec<i64> =
        serde_json::from_str(s).map_err(|e| validation(format!("weight must be a JSON integer list: {e}")))?;
    Ok(AffineWeight::new(coeffs)?)
}

fn check_weight(w: &AffineWeight, r: usize, n: i64) -> Result<(), Failure> {
    if w.rank() != r {
        return Err(Error::RankMismatch(r, w.rank()).into());
    }
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.coeffs().to_vec()).into());
    }
    if w.level() != n {
        return Err(Error::LevelMismatch { expected: n, got: w.level() }.into());
    }
    Ok(())
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::Sb => Family::Subregular,
        FamilyArg::Spr => Family::Superprincipal,
    }
}

fn model(m: &ModelArgs) -> Result<WModel, Failure> {
    Ok(WModel::new(family(m.family), m.n, m.r)?)
}

fn model_json(m: &WModel) -> Value {
    json!({
        "family": m.family.tag(),
        "n": m.n,
        "r": m.r,
        "level": fmt_q(&m.level),
        "norm": fmt_q(&m.norm),
        "modulus": m.modulus,
        "central_charge": fmt_q(&m.central_charge),
    })
}

fn ring_csv(ring: &FusionRing) -> String {
    let mut out = csv_row(&["lhs", "rhs", "result", "multiplicity"]);
    let b = ring.basis();
    for i in 0..ring.dim() {
        for j in i..ring.dim() {
            for &(k, m) in ring.product(i, j) {
                out.push_str(&csv_row(&[b[i].as_str(), b[j].as_str(), b[k].as_str(), &m.to_string()]));
            }
        }
    }
    out
}

fn ring_pretty(ring: &FusionRing) -> String {
    let b = ring.basis();
    let mut out = String::new();
    for i in 0..ring.dim() {
        for j in i..ring.dim() {
            let terms: Vec<String> = ring
                .product(i, j)
                .iter()
                .map(|&(k, m)| if m == 1 { b[k].clone() } else { format!("{m} {}", b[k]) })
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let _ = writeln!(out, "{} x {} = {}", b[i], b[j], rhs);
        }
    }
    out
}

pub fn weights(algebra: &AlgebraArgs, format: Format) -> CmdResult {
    let (r, n) = parse_algebra(algebra)?;
    let ws = dominant_weights(r, n);
    let text = match format {
        Format::Json => json(&json!({
            "schema": "wfusion.weights/v1",
            "algebra": format!("sl{r}"),
            "level": n,
            "weights": ws.iter().map(|w| json!({
                "label": w.coeffs(),
                "pi": pi_pq(w),
                "boxes": box_count(w),
                "h": fmt_q(&conformal_dim_affine(w)),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = csv_row(&["label", "pi", "boxes", "h"]);
            for w in &ws {
                s.push_str(&csv_row(&[
                    weight_label(w),
                    pi_pq(w).to_string(),
                    box_count(w).to_string(),
                    fmt_q(&conformal_dim_affine(w)),
                ]));
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{} integrable weights of sl{r} at level {n}\n", ws.len());
            for w in &ws {
                let _ = writeln!(s, "{:<16} pi={} boxes={} h={}", weight_label(w), pi_pq(w), box_count(w), fmt_q(&conformal_dim_affine(w)));
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

pub fn fusion(cmd: &FusionCommand) -> CmdResult {
    match cmd {
        FusionCommand::Dump { algebra, format } => {
            let (r, n) = parse_algebra(algebra)?;
            let ring = affine_ring(r, n)?;
            Ok(Outcome::ok(match format {
                Format::Json => json(&ring.to_json_value()),
                Format::Csv => ring_csv(&ring),
                Format::Pretty => ring_pretty(&ring),
            }))
        }
        FusionCommand::Product { algebra, lhs, rhs, format } => {
            let (r, n) = parse_algebra(algebra)?;
            let (x, y) = (parse_weight(lhs)?, parse_weight(rhs)?);
            check_weight(&x, r, n)?;
            check_weight(&y, r, n)?;
            let prod = affine_fusion(&x, &y, n)?;
            Ok(Outcome::ok(match format {
                Format::Json => json(&json!({
                    "schema": "wfusion.fusion-product/v1",
                    "lhs": x.coeffs(),
                    "rhs": y.coeffs(),
                    "terms": prod.iter().map(|(w, m)| json!([w.coeffs(), m])).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut s = csv_row(&["result", "multiplicity"]);
                    for (w, m) in &prod {
                        s.push_str(&csv_row(&[weight_label(w), m.to_string()]));
                    }
                    s
                }
                Format::Pretty => {
                    let terms: Vec<String> = prod
                        .iter()
                        .map(|(w, m)| if *m == 1 { weight_label(w) } else { format!("{m} {}", weight_label(w)) })
                        .collect();
                    format!("{x} x {y} = {}\n", terms.join(" + "))
                }
            }))
        }
    }
}

fn label_json(l: &WModuleLabel) -> Value {
    json!({ "lambda": l.lambda.coeffs(), "a": l.a })
}

pub fn walg(cmd: &WalgCommand) -> CmdResult {
    match cmd {
        WalgCommand::Irr { model: m, format } => {
            let model = model(m)?;
            let w = fusion_ring(&model)?;
            let hs = w
                .labels
                .iter()
                .map(|l| lowest_conformal_weight(&model, l))
                .collect::<wfusion_core::Result<Vec<_>>>()?;
            Ok(Outcome::ok(match format {
                Format::Json => {
                    let mut v = model_json(&model);
                    v["schema"] = json!("wfusion.w-labels/v1");
                    v["labels"] = w
                        .labels
                        .iter()
                        .zip(&hs)
                        .map(|(l, h)| {
                            let mut e = label_json(l);
                            e["h"] = json!(fmt_q(h));
                            e
                        })
                        .collect();
                    json(&v)
                }
                Format::Csv => {
                    let mut s = csv_row(&["lambda", "a", "h"]);
                    for (l, h) in w.labels.iter().zip(&hs) {
                        s.push_str(&csv_row(&[weight_label(&l.lambda), l.a.to_string(), fmt_q(h)]));
                    }
                    s
                }
                Format::Pretty => {
                    let mut s = format!(
                        "W_{}({}, {}): {} simple modules, c = {}\n",
                        model.family,
                        model.n,
                        model.r,
                        w.labels.len(),
                        fmt_q(&model.central_charge)
                    );
                    for (l, h) in w.labels.iter().zip(&hs) {
                        let _ = writeln!(s, "{l:<20} h = {}", fmt_q(h));
                    }
                    s
                }
            }))
        }
        WalgCommand::Fusion { model: m, format } => {
            let w = fusion_ring(&model(m)?)?;
            Ok(Outcome::ok(match format {
                Format::Json => json(&w.ring.to_json_value()),
                Format::Csv => ring_csv(&w.ring),
                Format::Pretty => ring_pretty(&w.ring),
            }))
        }
        WalgCommand::Smatrix { model: m, format } => {
            let s = smatrix(&model(m)?)?;
            let names: Vec<String> = s.labels.iter().map(|l| l.to_string()).collect();
            let num = |x: f64| format!("{:.15e}", if x.abs() < 1e-15 { 0.0 } else { x });
            Ok(Outcome::ok(match format {
                Format::Json => json(&json!({
                    "schema": "wfusion.smatrix/v1",
                    "tolerance": UNITARITY_TOLERANCE,
                    "labels": s.labels.iter().map(label_json).collect::<Vec<_>>(),
                    "re": s.entries.iter().map(|row| row.iter().map(|z| num(z.re)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "im": s.entries.iter().map(|row| row.iter().map(|z| num(z.im)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut out = csv_row(&["row", "column", "re", "im"]);
                    for (i, row) in s.entries.iter().enumerate() {
                        for (j, z) in row.iter().enumerate() {
                            out.push_str(&csv_row(&[names[i].as_str(), names[j].as_str(), &num(z.re), &num(z.im)]));
                        }
                    }
                    out
                }
                Format::Pretty => {
                    let mut out = format!("S-matrix (entries accurate to {UNITARITY_TOLERANCE:e})\n");
                    for (i, row) in s.entries.iter().enumerate() {
                        let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
                        let cells: Vec<String> =
                            row.iter().map(|z| format!("{:+.6}{:+.6}i", clean(z.re), clean(z.im))).collect();
                        let _ = writeln!(out, "{:<16} {}", names[i], cells.join("  "));
                    }
                    out
                }
            }))
        }
        WalgCommand::Hrelmap { model: m, xi, format } => {
            let model = model(m)?;
            let xi = parse_q(xi)?;
            let w = fusion_ring(&model)?;
            let (target, map): (Family, fn(i64, i64, &WModuleLabel, _) -> _) = match model.family {
                Family::Subregular => (Family::Superprincipal, hrel_map_plus),
                Family::Superprincipal => (Family::Subregular, hrel_map_minus),
            };
            let images = w
                .labels
                .iter()
                .map(|l| map(model.n, model.r, l, xi).map(|img| (l.clone(), img)))
                .collect::<wfusion_core::Result<Vec<_>>>()?;
            Ok(Outcome::ok(match format {
                Format::Json => json(&json!({
                    "schema": "wfusion.hrel-map/v1",
                    "source": model.family.tag(),
                    "target": target.tag(),
                    "n": model.n,
                    "r": model.r,
                    "xi": fmt_q(&xi),
                    "images": images.iter().map(|(s, t)| json!({
                        "source": label_json(s),
                        "target": t.as_ref().map(label_json),
                    })).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut s = csv_row(&["source", "target"]);
                    for (a, b) in &images {
                        s.push_str(&csv_row(&[a.to_string(), b.as_ref().map_or("0".into(), |b| b.to_string())]));
                    }
                    s
                }
                Format::Pretty => {
                    let mut s = format!("H^rel: {} -> {} at xi = {}\n", model.family, target, fmt_q(&xi));
                    for (a, b) in &images {
                        let _ = writeln!(s, "{a:<20} -> {}", b.as_ref().map_or("0".into(), |b| b.to_string()));
                    }
                    s
                }
            }))
        }
        WalgCommand::Verify { model: m, format } => {
            let model = model(m)?;
            let mut checks: BTreeMap<&str, (bool, String)> = BTreeMap::new();
            let ring = fusion_ring(&model)?;
            let size_ok = ring.labels.len() as u64 == model.expected_size();
            checks.insert("cardinality", (size_ok, format!("{} simples, expected {}", ring.labels.len(), model.expected_size())));
            let assoc = ring.ring.check_associativity();
            checks.insert("associativity", (assoc.is_ok(), assoc.err().map_or("ok".into(), |e| e.to_string())));
            let s = check_smatrix(&model)?;
            let s_ok = s.unitarity_error < UNITARITY_TOLERANCE && s.verlinde_matches_fusion && s.s_squared_is_permutation;
            checks.insert(
                "smatrix",
                (s_ok, format!("unitarity {:.1e}, Verlinde residual {:.1e}", s.unitarity_error, s.verlinde_residual)),
            );
            let tw = check_current_twists(&model);
            checks.insert("current_twists", (tw.is_ok(), tw.err().map_or("ok".into(), |e| e.to_string())));
            let mono = check_monoidality(model.n, model.r)?;
            checks.insert(
                "monoidality",
                (mono.passed(), format!("{} + {} compatible cases", mono.plus.compatible_cases, mono.minus.compatible_cases)),
            );
            if model.family == Family::Superprincipal && model.r >= 1 {
                let alt = spr_alternative_labels(model.n, model.r);
                let (ok, msg) = match alt {
                    Ok(a) => (a.size as u64 == a.expected, format!("{} labels, {} isomorphisms", a.size, a.isomorphism_count)),
                    Err(e) => (false, e.to_string()),
                };
                checks.insert("alternative_labels", (ok, msg));
            }
            let passed = checks.values().all(|(ok, _)| *ok);
            let text = match format {
                Format::Json => {
                    let mut v = model_json(&model);
                    v["schema"] = json!("wfusion.walg-report/v1");
                    v["passed"] = json!(passed);
                    v["checks"] = checks.iter().map(|(k, (ok, d))| (k.to_string(), json!({"passed": ok, "detail": d}))).collect();
                    json(&v)
                }
                _ => {
                    let mut s = String::new();
                    for (k, (ok, d)) in &checks {
                        let _ = writeln!(s, "[{}] {k}: {d}", if *ok { "PASS" } else { "FAIL" });
                    }
                    s
                }
            };
            Ok(Outcome {
                text,
                failure: (!passed).then(|| format!("W_{}({}, {}) checks failed", model.family, model.n, model.r)),
            })
        }
    }
}

pub fn levelrank(cmd: &LevelrankCommand) -> CmdResult {
    let LevelrankCommand::Verify { n, m } = cmd;
    let (n, m) = (*n, *m);
    if n < 2 || m < 2 {
        return Err(validation(format!("need n, m >= 2, got ({n}, {m})")));
    }
    let iso = levelrank_iso_check(n, m)?;
    let br = branching_label_check(n, m)?;
    let passed = iso.passed() && br.passed();
    let text = json(&json!({
        "schema": "wfusion.levelrank-report/v1",
        "n": n,
        "m": m,
        "passed": passed,
        "isomorphism": {
            "passed": iso.passed(),
            "domain_size": iso.domain_size,
            "target_size": iso.target_size,
            "bijective": iso.bijective,
            "unit_preserved": iso.unit_preserved,
            "images": iso.images.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "counterexamples": iso.mismatches,
        },
        "branching": {
            "passed": br.passed(),
            "total": br.total,
            "expected": br.expected,
            "counterexamples": br.ill_defined,
        },
    }));
    Ok(Outcome {
        text,
        failure: (!passed).then(|| format!("level-rank check failed for (n, m) = ({n}, {m})")),
    })
}

fn series_output(s: &QSeries, header: Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = s.to_json_value();
            if let (Value::Object(obj), Value::Object(h)) = (&mut v, header) {
                obj.extend(h);
            }
            json(&v)
        }
        Format::Csv => {
            let mut out = csv_row(&["q", "z", "coefficient"]);
            for (e, f, c) in s.terms() {
                out.push_str(&csv_row(&[fmt_q(&e), fmt_q(&f), c.to_string()]));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("{:<14} {:<10} coefficient\n", "q^", "z^");
            for (e, f, c) in s.terms() {
                let _ = writeln!(out, "{:<14} {:<10} {}", fmt_q(&e), fmt_q(&f), c);
            }
            let _ = writeln!(out, "exact below q^{}", fmt_q(&s.precision()));
            out
        }
    }
}

pub fn character(args: &CharArgs) -> CmdResult {
    let lambda = parse_weight(&args.lambda)?;
    let order = qi(args.order);
    let (series, header) = match args.family {
        CharFamily::PrinW => {
            if args.r < 2 || args.n < 0 {
                return Err(validation(format!("prinW needs r >= 2 and n >= 0, got (n, r) = ({}, {})", args.n, args.r)));
            }
            check_weight(&lambda, args.r as usize, args.n)?;
            (char_prinw(&lambda, order)?, json!({"family": "prinW", "n": args.n, "r": args.r, "lambda": lambda.coeffs()}))
        }
        CharFamily::Sb | CharFamily::Spr => {
            let fam = if args.family == CharFamily::Sb { Family::Subregular } else { Family::Superprincipal };
            let model = WModel::new(fam, args.n, args.r)?;
            let label = WModuleLabel { lambda: lambda.clone(), a: args.a };
            if model.r >= 1 {
                check_weight(&lambda, model.r as usize, model.n)?;
                if !is_local(&model, &label) {
                    return Err(validation(format!(
                        "label {label} is not local: need pi(lambda) = a mod r, got pi(lambda) = {}",
                        pi_pq(&lambda)
                    )));
                }
            }
            (
                char_model(&model, &label, order)?,
                json!({"family": fam.tag(), "n": args.n, "r": args.r, "lambda": lambda.coeffs(), "a": args.a}),
            )
        }
    };
    Ok(Outcome::ok(series_output(&series, header, args.format)))
}

pub fn sicoh(args: &SicohArgs) -> CmdResult {
    let (lambda, mu, norm) = (parse_q(&args.lambda)?, parse_q(&args.mu)?, parse_q(&args.norm)?);
    let complex = build_rel_complex(lambda, mu, norm, args.maxweight)?;
    let dims = cohomology_dims(&complex)?;
    let text = match args.format {
        Format::Json => json(&json!({
            "schema": "wfusion.sicoh/v1",
            "lambda": fmt_q(&lambda),
            "mu": fmt_q(&mu),
            "norm": fmt_q(&norm),
            "max_weight": args.maxweight,
            "cohomology": dims.iter().map(|(&(w, p), d)| json!([w, p, d])).collect::<Vec<_>>(),
            "basis": complex.basis.iter().map(|(&(w, p), v)| json!([w, p, v.len()])).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = csv_row(&["weight", "ghost", "dim_h", "dim_c"]);
            for (&(w, p), d) in &dims {
                s.push_str(&csv_row(&[w.to_string(), p.to_string(), d.to_string(), complex.basis[&(w, p)].len().to_string()]));
            }
            s
        }
        Format::Pretty => {
            if dims.is_empty() {
                format!("lambda + mu = {} != 0: the relative complex is zero\n", fmt_q(&(lambda + mu)))
            } else {
                let pmax = dims.keys().map(|&(_, p)| p.abs()).max().unwrap_or(0);
                let mut s = format!("{:<8}", "weight");
                for p in -pmax..=pmax {
                    let _ = write!(s, "{:>6}", format!("H^{p}"));
                }
                s.push('\n');
                for w in 0..=args.maxweight {
                    let _ = write!(s, "{w:<8}");
                    for p in -pmax..=pmax {
                        let _ = write!(s, "{:>6}", dims.get(&(w, p)).copied().unwrap_or(0));
                    }
                    s.push('\n');
                }
                s
            }
        }
    };
    Ok(Outcome::ok(text))
}

pub fn verify(suite: &str, quick: bool, format: Format) -> CmdResult {
    let ids: Vec<u8> = if suite == "all" {
        (1..=10).collect()
    } else {
        suite
            .split(',')
            .map(|s| s.trim().parse::<u8>().ok().filter(|i| (1..=10).contains(i)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| validation(format!("suite must be `all` or criterion numbers 1-10, got {suite:?}")))?
    };
    let opts = SuiteOptions { quick };
    let results: Vec<_> = ids.iter().map(|&i| run_criterion(i, opts)).collect();
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let text = match format {
        Format::Json => json(&json!({
            "schema": "wfusion.verify-report/v1",
            "quick": quick,
            "passed": failed.is_empty(),
            "criteria": results.iter().map(|r| json!({
                "id": r.id,
                "title": r.title,
                "passed": r.passed,
                "detail": r.detail,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s: String = results.iter().map(|r| format!("{r}\n")).collect();
            let _ = writeln!(s, "{} of {} criteria passed", results.len() - failed.len(), results.len());
            s
        }
    };
    Ok(Outcome {
        text,
        failure: (!failed.is_empty()).then(|| format!("criteria {failed:?} failed")),
    })
}
