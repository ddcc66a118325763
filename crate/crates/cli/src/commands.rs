//! Subcommand dispatch: each command turns a resolved config into a JSON
//! report, an optional CSV table and a status.

use anyhow::{anyhow, bail, Context, Result};
use heightgap::algebraic::AlgebraicNumber;
use heightgap::gaplab::{gap_check, gap_scan_at, margulis_scan, GapOptions, GroupClass, Verdict};
use heightgap::generic::{discriminant_decomposition, search_generic, word_eval, SearchMode, SearchOptions, Word};
use heightgap::heights::{height_matrix, nheight_bounds, NHeightOptions};
use heightgap::mobius::{classify, displacement, is_generic, phi_embed, translation_length, GElement};
use heightgap::nfield::{zeta2, PlaceKind};
use heightgap::qalg::max_lattice_covolume;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::model;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Inconclusive,
}

pub struct Output {
    pub report: Value,
    pub csv: Option<String>,
    pub status: Status,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn csv_table<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("csv: {e}"))?)?)
}

fn ok(report: Value, csv: Option<String>) -> Output {
    Output { report, csv, status: Status::Ok }
}

pub fn run(c: &RunConfig) -> Result<Output> {
    match c.command.as_str() {
        "height" => height(c),
        "nheight" => nheight(c),
        "covol" => covol(c),
        "zeta" => zeta(c),
        "generic-search" => generic_search(c),
        "disc-decompose" => disc_decompose(c),
        "gap-check" => gap_check_cmd(c),
        "gap-scan" => gap_scan_cmd(c),
        "margulis-scan" => margulis(c),
        "mobius-inspect" => inspect(c),
        other => bail!("unknown command {other:?}"),
    }
}

fn height(c: &RunConfig) -> Result<Output> {
    let ms = model::matrices(c)?;
    let reports = ms.iter().map(height_matrix).collect::<heightgap::Result<Vec<_>>>().context("heights")?;
    let total = reports.iter().map(|r| r.total).fold(f64::NEG_INFINITY, f64::max);
    #[derive(Serialize)]
    struct Row<'a> {
        matrix: usize,
        place: &'a str,
        n_v: u32,
        log_plus: f64,
    }
    let rows: Vec<Row> = reports
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.rows.iter().map(move |x| Row { matrix: i, place: &x.place, n_v: x.n_v, log_plus: x.log_plus }))
        .collect();
    let csv = csv_table(&rows)?;
    let report = if reports.len() == 1 {
        to_value(&reports[0])
    } else {
        json!({ "total": total, "matrices": reports })
    };
    Ok(ok(report, Some(csv)))
}

fn nheight(c: &RunConfig) -> Result<Output> {
    let ms = model::matrices(c)?;
    let opts = NHeightOptions { n_max: c.run.nheight_n_max, max_products: c.run.max_products, eig_words: c.run.eig_words, bits: c.run.precision_bits };
    let r = nheight_bounds(&ms, &opts).context("heights")?;
    let csv = csv_table(&r.levels)?;
    Ok(ok(to_value(&r), Some(csv)))
}

fn covol(c: &RunConfig) -> Result<Output> {
    let spec = model::lattice(c)?;
    let r = max_lattice_covolume(&spec.algebra, &spec.s, c.run.zeta_prime_bound, spec.index_hint.clone()).context("qalg")?;
    let mut v = to_value(&r);
    v["covol_interval"] = json!([format!("{:.12e}", r.covol_lower), format!("{:.12e}", r.covol_upper)]);
    Ok(ok(v, None))
}

fn zeta(c: &RunConfig) -> Result<Output> {
    let k = model::field(c)?;
    let z = zeta2(&k, c.run.zeta_prime_bound).context("nfield")?;
    let report = json!({
        "minpoly": k.minpoly().to_string(),
        "degree": k.degree(),
        "r1": k.r1(),
        "r2": k.r2(),
        "disc": k.disc().to_string(),
        "disc_exact": k.disc_exact(),
        "zeta2": z,
    });
    Ok(ok(report, None))
}

fn search_options(c: &RunConfig) -> SearchOptions {
    let mode = if c.run.mode == "double-commutator" { SearchMode::DoubleCommutator } else { SearchMode::Direct };
    SearchOptions { n_max: c.run.n_max, mode, max_candidates: c.run.max_candidates, ..Default::default() }
}

fn generic_search(c: &RunConfig) -> Result<Output> {
    let spec = model::lattice(c)?;
    let r = search_generic(&spec.generators, &search_options(c)).context("generic")?;
    let status = if r.truncated { Status::Inconclusive } else { Status::Ok };
    let mut v = to_value(&r);
    v["lattice"] = json!(spec.id);
    Ok(Output { report: v, csv: None, status })
}

fn disc_decompose(c: &RunConfig) -> Result<Output> {
    let m = c.run.minpoly.as_ref().ok_or_else(|| anyhow!("disc-decompose needs --minpoly (or run.minpoly)"))?;
    let p = model::poly_from(m, "run.minpoly")?;
    let bits = c.run.precision_bits;
    let first = AlgebraicNumber::from_root_index(&p, 0, bits).context("algebraic")?;
    let idx = match c.run.root {
        Some(i) if i >= first.degree() => bail!("run.root = {i} but the polynomial has {} roots", first.degree()),
        Some(i) => i,
        None => {
            let conj = first.conjugates();
            (0..conj.len()).fold(0, |b, i| if conj[i].norm() > conj[b].norm() { i } else { b })
        }
    };
    let a = AlgebraicNumber::from_root_index(&p, idx, bits).context("algebraic")?;
    let d = discriminant_decomposition(&a, None);
    let csv = csv_table(&d.pairs)?;
    let mut v = to_value(&d);
    v["minpoly"] = json!(a.minpoly().to_string());
    v["root"] = json!(idx);
    Ok(ok(v, Some(csv)))
}

fn gap_options(c: &RunConfig) -> GapOptions {
    let s = search_options(c);
    GapOptions {
        n_max: s.n_max,
        nheight_n_max: c.run.nheight_n_max,
        zeta_prime_bound: c.run.zeta_prime_bound,
        max_candidates: s.max_candidates,
        mode: s.mode,
        nheight: NHeightOptions { n_max: c.run.nheight_n_max, max_products: c.run.max_products, eig_words: c.run.eig_words, bits: c.run.precision_bits },
    }
}

#[derive(Serialize)]
struct GapCsv {
    lattice: String,
    degree: usize,
    verdict: String,
    hhat_lower: f64,
    hhat_upper: f64,
    log_covol_upper: Option<f64>,
    ratio: Option<f64>,
    witness: Option<String>,
    error: Option<String>,
}

fn verdict_name(v: Verdict) -> String {
    to_value(&v).as_str().unwrap_or_default().to_string()
}

fn gap_row(r: &heightgap::gaplab::GapReport) -> GapCsv {
    GapCsv {
        lattice: r.lattice.clone(),
        degree: r.degree,
        verdict: verdict_name(r.verdict),
        hhat_lower: r.hhat_lower,
        hhat_upper: r.hhat_upper,
        log_covol_upper: r.log_covol_upper,
        ratio: r.ratio,
        witness: r.witness.as_ref().map(|w| w.word.clone()),
        error: None,
    }
}

fn gap_check_cmd(c: &RunConfig) -> Result<Output> {
    let spec = model::lattice(c)?;
    let r = gap_check(&spec, &gap_options(c)).context("gaplab")?;
    let status = if r.verdict == Verdict::Inconclusive { Status::Inconclusive } else { Status::Ok };
    let csv = csv_table(&[gap_row(&r)])?;
    Ok(Output { report: to_value(&r), csv: Some(csv), status })
}

fn gap_scan_cmd(c: &RunConfig) -> Result<Output> {
    if c.run.bianchi.is_empty() {
        bail!("gap-scan needs --bianchi D1,D2,... (or run.bianchi)");
    }
    let s = gap_scan_at(&c.run.bianchi, &gap_options(c), c.run.precision_bits);
    let rows: Vec<GapCsv> = s
        .rows
        .iter()
        .map(|r| match &r.report {
            Some(x) => gap_row(x),
            None => GapCsv {
                lattice: format!("bianchi-{}", r.d),
                degree: 2,
                verdict: "error".into(),
                hhat_lower: f64::NAN,
                hhat_upper: f64::NAN,
                log_covol_upper: None,
                ratio: None,
                witness: None,
                error: r.error.clone(),
            },
        })
        .collect();
    if s.rows.iter().all(|r| r.report.is_none()) {
        bail!("gaplab: every row failed: {}", s.rows.iter().filter_map(|r| r.error.clone()).collect::<Vec<_>>().join("; "));
    }
    let conclusive = s.rows.iter().filter_map(|r| r.report.as_ref()).any(|r| r.verdict != Verdict::Inconclusive);
    let csv = csv_table(&rows)?;
    Ok(Output { report: to_value(&s), csv: Some(csv), status: if conclusive { Status::Ok } else { Status::Inconclusive } })
}

fn margulis(c: &RunConfig) -> Result<Output> {
    let spec = model::lattice(c)?;
    let x = model::base_point(c, &spec)?;
    let s = margulis_scan(&spec, &x, &c.run.eps, c.run.radius, c.run.zeta_prime_bound).context("gaplab")?;
    #[derive(Serialize)]
    struct Row {
        epsilon: f64,
        radius: f64,
        members: usize,
        class: String,
    }
    let rows: Vec<Row> = s
        .rows
        .iter()
        .map(|r| Row {
            epsilon: r.epsilon,
            radius: r.radius,
            members: r.members.len(),
            class: to_value(&r.certificate.class).as_str().unwrap_or_default().to_string(),
        })
        .collect();
    let conclusive = s.rows.iter().any(|r| r.certificate.class != GroupClass::Inconclusive);
    let mut v = to_value(&s);
    v["lattice"] = json!(spec.id);
    Ok(Output { report: v, csv: Some(csv_table(&rows)?), status: if conclusive { Status::Ok } else { Status::Inconclusive } })
}

fn inspect(c: &RunConfig) -> Result<Output> {
    let spec = model::lattice(c)?;
    let x = model::base_point(c, &spec)?;
    let words: Vec<Word> = if c.run.words.is_empty() {
        (1..=spec.generators.len() as i32).map(Word::generator).collect()
    } else {
        c.run.words.iter().map(|w| Word::parse(w)).collect::<heightgap::Result<_>>().context("run.words")?
    };
    let mut out = Vec::new();
    for w in &words {
        let g: GElement = word_eval(w, &spec.generators).context("generic")?;
        let des = g.designation().clone();
        let m = g.matrix();
        let entries: Vec<Vec<String>> = m.e.iter().map(|e| e.coeffs().iter().map(|q| q.to_string()).collect()).collect();
        let mut factors = Vec::new();
        for (f, fac) in des.factors().iter().enumerate() {
            let kind = if fac.kind == PlaceKind::Real { "real" } else { "complex" };
            let s2 = g.s_at(f);
            let lam = g.lambda_at(f);
            factors.push(json!({
                "factor": f,
                "kind": kind,
                "root": fac.root,
                "type": classify(&g, f).map(|t| to_value(&t)).unwrap_or_else(|e| json!(format!("error: {e}"))),
                "s2": [s2.re, s2.im],
                "lambda": [lam.re, lam.im],
            }));
        }
        let phi = phi_embed(&g);
        out.push(json!({
            "word": w.to_string(),
            "matrix": entries,
            "det": m.det().coeffs().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "factors": factors,
            "phi": phi,
            "translation_length": translation_length(&g).ok(),
            "genericity": is_generic(&g).ok(),
            "displacement": displacement(&g, &x).ok(),
        }));
    }
    Ok(ok(json!({ "lattice": spec.id, "base_point": x, "elements": out }), None))
}
