use rayon::prelude::*;
use repstab_core::algebra::{graded_basis, Family};
use repstab_core::rational::to_pq;
use repstab_core::repstab::{
    character, check_size, coinvariant_probe, decompose_character, fit_betti_polynomial, fit_character_polynomial,
    generation_degree_check, rep_stability_report, Validation,
};
use repstab_core::symcomb::Partition;
use repstab_core::ENGINE_VERSION;
use serde_json::{json, Map, Value};

use crate::args::{CoinvariantArgs, ComputeArgs, FitArgs, GenDegreeArgs, SelftestArgs, StabilityArgs};
use crate::cache::{ArtifactKind, Cache, CacheKey};
use crate::config::RunConfig;
use crate::report::{char_poly_json, character_json, multiplicities_json, yes, Document, Table};
use crate::selftest;
use crate::{single_family, CliError};

fn pool(config: &RunConfig) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("engine_version".into(), json!(ENGINE_VERSION));
    m
}

fn compute_cell(cache: &Cache, family: Family, degree: usize, n: usize, args: &ComputeArgs) -> Result<Value, CliError> {
    let key = |kind| CacheKey { family, n, degree, kind };
    let basis = cache.get_or_compute(&key(ArtifactKind::Basis), || {
        serde_json::to_value(graded_basis(family, n, degree)).map_err(|e| CliError::Io(e.to_string()))
    })?;
    let dimension = basis["dimension"].as_u64().ok_or_else(|| CliError::Io("malformed basis payload".into()))?;
    let mut cell = Map::new();
    cell.insert("family".into(), json!(family));
    cell.insert("degree".into(), json!(degree));
    cell.insert("n".into(), json!(n));
    cell.insert("dimension".into(), json!(dimension));
    if !(args.emit.character() || args.emit.decomposition()) {
        return Ok(Value::Object(cell));
    }
    let chi = cache.get_or_compute(&key(ArtifactKind::Character), || Ok(character_json(&character(family, n, degree)?)))?;
    let at_identity = chi
        .as_object()
        .and_then(|m| m.get(&Partition::new(vec![1; n]).expect("valid").to_string()))
        .and_then(Value::as_str)
        .map(str::to_string);
    if args.emit.character() {
        cell.insert("character".into(), chi.clone());
    }
    if args.emit.decomposition() {
        let d = cache.get_or_compute(&key(ArtifactKind::Decomposition), || {
            let t = decompose_character(&character(family, n, degree)?)?;
            Ok(json!({"multiplicities": multiplicities_json(&t), "weight": t.weight()}))
        })?;
        cell.insert("multiplicities".into(), d["multiplicities"].clone());
        cell.insert("weight".into(), d["weight"].clone());
    }
    let matches = at_identity.as_deref() == Some(format!("{dimension}/1").as_str());
    cell.insert("conditions".into(), json!({"character_at_identity_equals_dimension": matches}));
    Ok(Value::Object(cell))
}

pub fn compute(args: &ComputeArgs, config: &RunConfig, cache: &Cache) -> Result<Document, CliError> {
    let mut cells = Vec::new();
    for &family in &args.family.0 {
        for &degree in args.degree.values() {
            for &n in args.n.values() {
                check_size(family, n, degree)?;
                cells.push((family, degree, n));
            }
        }
    }
    let results: Vec<Value> = pool(config)?.install(|| {
        cells.par_iter().map(|&(f, d, n)| compute_cell(cache, f, d, n, args)).collect::<Result<_, _>>()
    })?;
    let mut table = Table::new(&["family", "degree", "n", "kind", "key", "value"]);
    let mut passed = true;
    for r in &results {
        let base = vec![r["family"].as_str().unwrap_or_default().to_string(), r["degree"].to_string(), r["n"].to_string()];
        let row = |kind: &str, key: &str, value: String| {
            let mut v = base.clone();
            v.extend([kind.to_string(), key.to_string(), value]);
            v
        };
        table.push(row("dimension", "", r["dimension"].to_string()));
        if let Some(chi) = r.get("character").and_then(Value::as_object) {
            for (mu, v) in chi {
                table.push(row("character", mu, v.as_str().unwrap_or_default().to_string()));
            }
        }
        if let Some(m) = r.get("multiplicities").and_then(Value::as_object) {
            for (lam, v) in m {
                table.push(row("multiplicity", lam, v.to_string()));
            }
            table.push(row("weight", "", r["weight"].to_string()));
        }
        if let Some(ok) = r.pointer("/conditions/character_at_identity_equals_dimension").and_then(Value::as_bool) {
            passed &= ok;
        }
    }
    let mut doc = header("compute");
    doc.insert("results".into(), Value::Array(results));
    Ok(Document { json: Value::Object(doc), table, passed })
}

pub fn stability(args: &StabilityArgs) -> Result<Document, CliError> {
    let family = single_family(&args.family)?;
    if !args.n.is_contiguous() {
        return Err(CliError::Usage("stability needs a contiguous --n range".into()));
    }
    let r = rep_stability_report(family, args.degree, args.n.first(), args.n.last())?;
    let mut table = Table::new(&[
        "n",
        "dimension",
        "next_dimension",
        "injective",
        "orbit_spanning",
        "multiplicities_stable",
        "multiplicities",
    ]);
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            table.push(vec![
                e.n.to_string(),
                e.dimension.to_string(),
                e.next_dimension.to_string(),
                yes(e.injective),
                yes(e.spanning),
                yes(e.multiplicities_stable),
                e.multiplicities.to_string(),
            ]);
            json!({
                "n": e.n,
                "dimension": e.dimension,
                "next_dimension": e.next_dimension,
                "multiplicities": multiplicities_json(&e.multiplicities),
                "weight": e.multiplicities.weight(),
                "conditions": {
                    "injective": e.injective,
                    "orbit_spanning": e.spanning,
                    "multiplicities_stable": e.multiplicities_stable,
                },
            })
        })
        .collect();
    let mut doc = header("stability");
    doc.insert("family".into(), json!(family));
    doc.insert("degree".into(), json!(args.degree));
    doc.insert("n".into(), json!(args.n.to_string()));
    doc.insert("guaranteed_onset".into(), json!(r.guaranteed_onset));
    doc.insert("observed_onset".into(), json!(r.observed_onset));
    doc.insert("entries".into(), Value::Array(entries));
    Ok(Document { json: Value::Object(doc), table, passed: true })
}

fn validation_json(v: &Validation) -> Value {
    let mismatches: Vec<Value> = v
        .mismatches
        .iter()
        .map(|(n, mu)| if mu.is_empty() { json!({"n": n}) } else { json!({"n": n, "class": mu.to_string()}) })
        .collect();
    json!({"checked": v.checked, "passed": v.passed(), "mismatches": mismatches})
}

fn check_levels(args: &FitArgs) -> Vec<usize> {
    args.check.as_ref().map(|c| c.values().to_vec()).unwrap_or_default()
}

pub fn fit_charpoly(args: &FitArgs) -> Result<Document, CliError> {
    let family = single_family(&args.family)?;
    let check = check_levels(args);
    let fit = fit_character_polynomial(family, args.degree, args.fit.values(), &check, args.max_deg)?;
    let mut table = Table::new(&["monomial", "coefficient"]);
    let coefficients = char_poly_json(&fit.polynomial);
    for (k, v) in coefficients.as_object().expect("object") {
        table.push(vec![k.clone(), v.as_str().unwrap_or_default().to_string()]);
    }
    let mut doc = header("fit-charpoly");
    doc.insert("family".into(), json!(family));
    doc.insert("degree".into(), json!(args.degree));
    doc.insert("fit".into(), json!(args.fit.values()));
    doc.insert("max_deg".into(), json!(args.max_deg));
    doc.insert("polynomial".into(), json!(fit.polynomial.to_string()));
    doc.insert("coefficients".into(), coefficients);
    doc.insert("validation".into(), validation_json(&fit.validation));
    Ok(Document { json: Value::Object(doc), table, passed: fit.validation.passed() })
}

pub fn fit_betti(args: &FitArgs) -> Result<Document, CliError> {
    let family = single_family(&args.family)?;
    let check = check_levels(args);
    let fit = fit_betti_polynomial(family, args.degree, args.fit.values(), &check, args.max_deg)?;
    let mut table = Table::new(&["power", "coefficient"]);
    let coefficients: Vec<String> = fit.polynomial.coefficients().iter().map(to_pq).collect();
    for (k, c) in coefficients.iter().enumerate() {
        table.push(vec![k.to_string(), c.clone()]);
    }
    let mut doc = header("fit-betti");
    doc.insert("family".into(), json!(family));
    doc.insert("degree".into(), json!(args.degree));
    doc.insert("fit".into(), json!(args.fit.values()));
    doc.insert("max_deg".into(), json!(args.max_deg));
    doc.insert("polynomial".into(), json!(fit.polynomial.to_string()));
    doc.insert("coefficients".into(), json!(coefficients));
    doc.insert("validation".into(), validation_json(&fit.validation));
    Ok(Document { json: Value::Object(doc), table, passed: fit.validation.passed() })
}

pub fn coinvariants(args: &CoinvariantArgs) -> Result<Document, CliError> {
    let family = single_family(&args.family)?;
    if !args.n.is_contiguous() {
        return Err(CliError::Usage("coinvariants needs a contiguous --n range".into()));
    }
    let probe = coinvariant_probe(family, args.degree, args.a, args.n.first(), args.n.last())?;
    let mut table = Table::new(&["n", "dimension", "t_injective", "t_surjective", "t_iso"]);
    let levels: Vec<Value> = probe
        .levels
        .iter()
        .map(|l| {
            table.push(vec![l.n.to_string(), l.dimension.to_string(), yes(l.t_injective), yes(l.t_surjective), yes(l.t_iso())]);
            json!({
                "n": l.n,
                "dimension": l.dimension,
                "t_map": l.t_map.to_json(),
                "t_injective": l.t_injective,
                "t_surjective": l.t_surjective,
                "t_iso": l.t_iso(),
            })
        })
        .collect();
    let mut iso_from = None;
    for l in probe.levels.iter().rev() {
        if !l.t_iso() {
            break;
        }
        iso_from = Some(l.n);
    }
    let mut doc = header("coinvariants");
    doc.insert("family".into(), json!(family));
    doc.insert("degree".into(), json!(args.degree));
    doc.insert("a".into(), json!(args.a));
    doc.insert("frozen_labels".into(), json!((1..=args.a).map(|k| -(k as i64)).collect::<Vec<_>>()));
    doc.insert("t_iso_from".into(), json!(iso_from));
    doc.insert("levels".into(), Value::Array(levels));
    Ok(Document { json: Value::Object(doc), table, passed: true })
}

pub fn gen_degree(args: &GenDegreeArgs, config: &RunConfig) -> Result<Document, CliError> {
    let family = single_family(&args.family)?;
    for &n in args.n.values() {
        check_size(family, n, args.degree)?;
    }
    let results: Vec<bool> = pool(config)?.install(|| {
        args.n
            .values()
            .par_iter()
            .map(|&n| generation_degree_check(family, args.degree, args.gen_m, n))
            .collect::<Result<_, _>>()
    })?;
    let mut table = Table::new(&["n", "gen_m", "generated"]);
    let mut rows = Vec::new();
    for (&n, &ok) in args.n.values().iter().zip(&results) {
        table.push(vec![n.to_string(), args.gen_m.to_string(), yes(ok)]);
        rows.push(json!({"n": n, "generated": ok}));
    }
    let mut doc = header("gen-degree");
    doc.insert("family".into(), json!(family));
    doc.insert("degree".into(), json!(args.degree));
    doc.insert("gen_m".into(), json!(args.gen_m));
    doc.insert("results".into(), Value::Array(rows));
    Ok(Document { json: Value::Object(doc), table, passed: results.iter().all(|&b| b) })
}

pub fn selftest(args: &SelftestArgs, config: &RunConfig) -> Result<Document, CliError> {
    let checks = selftest::select(&args.only)?;
    let outcomes: Vec<selftest::Outcome> = pool(config)?.install(|| checks.par_iter().map(|c| c.run()).collect());
    let mut table = Table::new(&["check", "passed", "detail"]);
    let mut rows = Vec::new();
    for o in &outcomes {
        table.push(vec![o.name.to_string(), yes(o.passed), o.detail.clone()]);
        rows.push(json!({"check": o.name, "title": o.title, "passed": o.passed, "detail": o.detail}));
    }
    let mut doc = header("selftest");
    doc.insert("checks".into(), Value::Array(rows));
    Ok(Document { json: Value::Object(doc), table, passed: outcomes.iter().all(|o| o.passed) })
}
