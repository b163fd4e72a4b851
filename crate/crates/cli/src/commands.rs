//! The three commands behind the binary, written as library functions so the
//! rendering and caching behaviour is testable without spawning processes.
//!
//! Every command builds one JSON *document* describing its result, caches it
//! under a canonical key, and renders the requested format purely from that
//! document.  A cached rerun therefore prints byte-identical output, and the
//! JSON format is simply the pretty-printed document.

use crate::cache::Cache;
use crate::render;
use exactalg::rational;
use num_bigint::BigInt;
use rayon::prelude::*;
use semimeander::gram::{verify_closed_form, Sign};
use semimeander::{
    frobenius_spectrum, intersection_entry, satake_from_hecke, spectrum_csv, tate_report, Band,
    PeriodicSemiMeander, Regime, SatakeParams, TateReport,
};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Json,
    Csv,
}

/// Largest `--max-g` the verification sweep accepts: past this the sweep
/// visits every plus-set of every larger band, and the Gram matrices grow
/// combinatorially (252 rows already at g = 10).
pub const SWEEP_BOUND: usize = 10;

/// How the Satake pair is supplied on the command line.
pub enum SatakeInput {
    Direct { alpha: String, beta: String },
    Hecke { tp: String, sp: String },
}

pub struct TateRequest {
    pub g: usize,
    pub plus: Vec<usize>,
    pub r: usize,
    pub tcount: usize,
    pub p: u64,
    pub satake: SatakeInput,
    pub regime: Regime,
}

/// Entry tables are embedded in reports only up to this many cycle classes;
/// beyond it the table is omitted (the matrix itself is still evaluated).
const ENTRY_TABLE_LIMIT: usize = 32;

fn build_band(g: usize, plus: &[usize]) -> Result<Band, String> {
    if let Some(&bad) = plus.iter().find(|&&p| p >= g) {
        return Err(format!(
            "plus position {bad} is out of range on a band of circumference {g}"
        ));
    }
    Band::new(g, plus.iter().copied()).map_err(|e| e.to_string())
}

fn check_r(band: &Band, r: usize) -> Result<(), String> {
    let d = band.node_count();
    if 2 * r > d {
        return Err(format!(
            "r = {r} exceeds half the node count: the band has d = {d} nodes, so r must be at most {}",
            d / 2
        ));
    }
    Ok(())
}

fn plus_key(band: &Band) -> String {
    band.plus_positions()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn plus_display(band: &Band) -> String {
    format!(
        "{{{}}}",
        band.plus_positions()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// RFC 4180 field quoting: wrap and double quotes only when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn pretty(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("documents serialize");
    out.push('\n');
    out
}

fn ascii_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let fmt_row = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let mut out = fmt_row(&head);
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

pub fn run_enumerate(
    g: usize,
    plus: &[usize],
    r: usize,
    format: Format,
    cache: &Cache,
) -> Result<String, String> {
    let band = build_band(g, plus)?;
    check_r(&band, r)?;
    let key = format!("v1|enumerate|g={}|plus={}|r={r}", band.g(), plus_key(&band));
    let doc = cache.get_or_insert_with(&key, || {
        let diagrams = PeriodicSemiMeander::enumerate(&band, r).map_err(|e| e.to_string())?;
        Ok(json!({
            "band": band,
            "r": r,
            "count": diagrams.len(),
            "diagrams": diagrams,
        }))
    })?;
    if format == Format::Json {
        return Ok(pretty(&doc));
    }

    let diagrams: Vec<PeriodicSemiMeander> = serde_json::from_value(doc["diagrams"].clone())
        .map_err(|e| format!("stored enumeration is not a valid diagram list: {e}"))?;
    match format {
        Format::Ascii => {
            let plural = if diagrams.len() == 1 { "" } else { "s" };
            let mut out = format!(
                "{} semi-meander{plural} (g = {}, plus = {}, r = {r})\n",
                diagrams.len(),
                band.g(),
                plus_display(&band),
            );
            for (i, m) in diagrams.iter().enumerate() {
                out.push('\n');
                out.push_str(&format!("#{i}  total span {}\n", m.total_span()));
                out.push_str(&render::render(m));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from("index,arcs,semilines,total_span\n");
            for (i, m) in diagrams.iter().enumerate() {
                let arcs = m
                    .arcs()
                    .iter()
                    .map(|a| format!("{}-{}", a.left, a.right))
                    .collect::<Vec<_>>()
                    .join(";");
                let semis = m
                    .semilines()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(";");
                out.push_str(&format!(
                    "{i},{},{},{}\n",
                    csv_field(&arcs),
                    csv_field(&semis),
                    m.total_span()
                ));
            }
            Ok(out)
        }
        Format::Json => unreachable!("handled above"),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Sweeps every plus-set with at least one node for `g ≤ max_g` and every
/// `r ≤ d/2`, checking each Gram determinant against its closed form.
/// Returns the rendered table and whether every row matched.
pub fn run_verify(max_g: usize, format: Format, cache: &Cache) -> Result<(String, bool), String> {
    if max_g > SWEEP_BOUND {
        return Err(format!(
            "refusing the sweep: --max-g {max_g} exceeds the supported bound {SWEEP_BOUND} \
             (the sweep visits every plus-set of every band up to that circumference)"
        ));
    }
    let mut cases = Vec::new();
    for g in 1..=max_g {
        for mask in 0usize..(1 << g) {
            let plus: Vec<usize> = (0..g).filter(|b| mask >> b & 1 == 1).collect();
            if plus.len() == g {
                continue; // no nodes, no Gram matrix
            }
            let band = Band::new(g, plus).expect("g >= 1");
            let d = band.node_count();
            for r in 0..=d / 2 {
                cases.push((band.clone(), r));
            }
        }
    }

    let rows: Vec<Value> = cases
        .par_iter()
        .map(|(band, r)| verify_row(band, *r, cache))
        .collect::<Result<Vec<_>, _>>()?;
    let all_pass = rows.iter().all(|row| row["pass"].as_bool() == Some(true));

    let text = match format {
        Format::Json => pretty(&Value::Array(rows)),
        Format::Csv => {
            let mut out = String::from("g,plus,r,size,t,sign,form,pass\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    row["g"],
                    csv_field(&join_numbers(&row["plus"], ";")),
                    row["r"],
                    row["size"],
                    csv_field(row["t"].as_str().unwrap_or("?")),
                    csv_field(row["sign"].as_str().unwrap_or("?")),
                    csv_field(row["form"].as_str().unwrap_or("?")),
                    row["pass"],
                ));
            }
            out
        }
        Format::Ascii => {
            let table_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    vec![
                        row["g"].to_string(),
                        format!("{{{}}}", join_numbers(&row["plus"], ", ")),
                        row["r"].to_string(),
                        row["size"].to_string(),
                        row["t"].as_str().unwrap_or("?").to_string(),
                        row["sign"].as_str().unwrap_or("?").to_string(),
                        row["form"].as_str().unwrap_or("?").to_string(),
                        if row["pass"].as_bool() == Some(true) {
                            "yes".to_string()
                        } else {
                            "NO".to_string()
                        },
                    ]
                })
                .collect();
            let failures = rows
                .iter()
                .filter(|row| row["pass"].as_bool() != Some(true))
                .count();
            let mut out = ascii_table(
                &["g", "plus", "r", "size", "t", "sign", "form", "match"],
                &table_rows,
            );
            let plural = if rows.len() == 1 { "" } else { "s" };
            out.push_str(&if failures == 0 {
                format!("\n{} case{plural}, all match\n", rows.len())
            } else {
                format!("\n{} case{plural}, {failures} FAIL\n", rows.len())
            });
            out
        }
    };
    Ok((text, all_pass))
}

fn join_numbers(list: &Value, sep: &str) -> String {
    list.as_array()
        .map(|a| {
            a.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        })
        .unwrap_or_default()
}

fn verify_row(band: &Band, r: usize, cache: &Cache) -> Result<Value, String> {
    let key = format!("v1|verify-row|g={}|plus={}|r={r}", band.g(), plus_key(band));
    cache.get_or_insert_with(&key, || {
        let report = verify_closed_form(band, r).map_err(|e| e.to_string())?;
        let zero = BigInt::from(0);
        let form = if report.t == zero {
            "1".to_string()
        } else if 2 * r == band.node_count() {
            format!("(T^2-4)^{}", report.t)
        } else {
            format!("(v^{g}-v^-{g})^{}", &report.t * 2, g = band.g())
        };
        let sign = match report.sign {
            Some(Sign::Plus) => "+",
            Some(Sign::Minus) => "-",
            None => "?",
        };
        Ok(json!({
            "g": band.g(),
            "plus": band.plus_positions(),
            "r": r,
            "size": report.size,
            "t": report.t.to_string(),
            "sign": sign,
            "form": form,
            "pass": report.pass,
        }))
    })
}

// ---------------------------------------------------------------------------
// tate
// ---------------------------------------------------------------------------

pub fn run_tate(req: &TateRequest, format: Format, cache: &Cache) -> Result<String, String> {
    let band = build_band(req.g, &req.plus)?;
    check_r(&band, req.r)?;
    let d = band.node_count();
    let regime_name = match req.regime {
        Regime::Inert => "inert",
        Regime::Split => "split",
    };

    let (params, satake_lines, satake_key) = resolve_satake(&req.satake, req.p, band.g())?;
    let key = format!(
        "v1|tate|g={}|plus={}|r={}|tcount={}|p={}|satake={satake_key}|regime={regime_name}",
        band.g(),
        plus_key(&band),
        req.r,
        req.tcount,
        req.p,
    );

    let doc = cache.get_or_insert_with(&key, || {
        let report = tate_report(&band, req.r, req.tcount, &params).map_err(|e| e.to_string())?;
        let spectrum = frobenius_spectrum(d, req.tcount, &params).map_err(|e| e.to_string())?;
        let entries = entry_table(&band, req.r, req.regime, &report)?;
        let display = display_lines(&band, req, regime_name, &satake_lines, &report);
        Ok(json!({
            "config": {
                "g": band.g(),
                "plus": band.plus_positions(),
                "r": req.r,
                "tcount": req.tcount,
                "p": req.p,
                "regime": regime_name,
            },
            "report": report,
            "entries": entries,
            "spectrum_csv": spectrum_csv(&spectrum),
            "display": display,
        }))
    })?;

    match format {
        Format::Json => Ok(pretty(&doc)),
        Format::Csv => Ok(doc["spectrum_csv"].as_str().unwrap_or_default().to_string()),
        Format::Ascii => {
            let mut out = String::new();
            if let Some(lines) = doc["display"].as_array() {
                for line in lines {
                    out.push_str(line.as_str().unwrap_or_default());
                    out.push('\n');
                }
            }
            out.push_str("\nfull report (JSON):\n");
            out.push_str(&pretty(&doc["report"]));
            Ok(out)
        }
    }
}

fn resolve_satake(
    input: &SatakeInput,
    p: u64,
    g: usize,
) -> Result<(SatakeParams, Vec<String>, String), String> {
    match input {
        SatakeInput::Direct { alpha, beta } => {
            let a = rational::from_str(alpha).map_err(|e| format!("--alpha: {e}"))?;
            let b = rational::from_str(beta).map_err(|e| format!("--beta: {e}"))?;
            let params =
                SatakeParams::rational(a.clone(), b.clone(), p, g).map_err(|e| e.to_string())?;
            let line = format!(
                "satake: alpha = {}, beta = {}, p = {p}",
                rational::to_string(&a),
                rational::to_string(&b),
            );
            let key = format!(
                "direct:{}:{}",
                rational::to_string(&a),
                rational::to_string(&b)
            );
            Ok((params, vec![line], key))
        }
        SatakeInput::Hecke { tp, sp } => {
            let tp_v = rational::from_str(tp).map_err(|e| format!("--tp: {e}"))?;
            let sp_v = rational::from_str(sp).map_err(|e| format!("--sp: {e}"))?;
            let data = satake_from_hecke(&tp_v, &sp_v, p, g).map_err(|e| e.to_string())?;
            let params = data
                .satake_params()
                .map_err(|e| e.to_string())?
                .ok_or_else(|| {
                    format!(
                        "the Hecke inputs give no rational pair: the discriminant {} is not a \
                         rational square; pass --alpha and --beta directly",
                        rational::to_string(&data.discriminant)
                    )
                })?;
            let lines = vec![
                format!(
                    "hecke: tp = {}, sp = {}, p = {p}",
                    rational::to_string(&tp_v),
                    rational::to_string(&sp_v),
                ),
                format!(
                    "satake: alpha = {}, beta = {} (roots of the Hecke quadratic)",
                    params.alpha().map(rational::to_string).unwrap_or_default(),
                    params.beta().map(rational::to_string).unwrap_or_default(),
                ),
            ];
            let key = format!(
                "hecke:{}:{}",
                rational::to_string(&tp_v),
                rational::to_string(&sp_v)
            );
            Ok((params, lines, key))
        }
    }
}

fn entry_table(
    band: &Band,
    r: usize,
    regime: Regime,
    report: &TateReport,
) -> Result<Value, String> {
    if report.cycle_count > BigInt::from(ENTRY_TABLE_LIMIT) {
        return Ok(Value::Null);
    }
    let diagrams = PeriodicSemiMeander::enumerate(band, r).map_err(|e| e.to_string())?;
    let mut list = Vec::new();
    for (i, a) in diagrams.iter().enumerate() {
        for (j, b) in diagrams.iter().enumerate().skip(i) {
            let entry = intersection_entry(a, b, regime).map_err(|e| e.to_string())?;
            list.push(json!({ "a": i, "b": j, "entry": entry }));
        }
    }
    Ok(Value::Array(list))
}

fn display_lines(
    band: &Band,
    req: &TateRequest,
    regime_name: &str,
    satake_lines: &[String],
    report: &TateReport,
) -> Vec<String> {
    use semimeander::spectra::{Conclusion, GenericityVerdict, NonvanishingVerdict};

    let mut lines = vec![
        format!(
            "band: g = {}, plus = {} (d = {})",
            band.g(),
            plus_display(band),
            report.d
        ),
        format!(
            "r = {}, tcount = {}, regime = {regime_name}",
            req.r, req.tcount
        ),
    ];
    lines.extend(satake_lines.iter().cloned());
    lines.push(format!(
        "target line: i = {}, eigenvalue {}, multiplicity {}",
        report.target_line.i,
        report.target_line.eigenvalue.to_display_string(),
        report.target_line.multiplicity,
    ));
    lines.push(format!("dimension: {}", report.dimension));
    lines.push(format!("cycle classes: {}", report.cycle_count));
    lines.push(format!("tate twist: p^{}", report.tate_twist_p_exponent));
    lines.push(format!(
        "twisted eigenvalue: {}",
        report.twisted_eigenvalue.to_display_string()
    ));
    lines.push(match &report.genericity {
        GenericityVerdict::Holds => "genericity: holds".to_string(),
        GenericityVerdict::Fails => "genericity: fails".to_string(),
        GenericityVerdict::Symbolic { criterion } => {
            format!("genericity: symbolic — criterion {criterion}")
        }
    });
    let verdict = match report.determinant.verdict {
        NonvanishingVerdict::Nonzero => "nonzero",
        NonvanishingVerdict::Zero => "zero",
        NonvanishingVerdict::CriterionFails => "criterion fails",
        NonvanishingVerdict::Symbolic => "symbolic",
    };
    let holds = match report.determinant.criterion_holds {
        Some(true) => " (holds)",
        Some(false) => " (fails)",
        None => "",
    };
    lines.push(format!(
        "determinant: {verdict} — criterion {}{holds}",
        report.determinant.criterion
    ));
    let (word, reason) = match &report.conclusion {
        Conclusion::Yes { reason } => ("yes", reason),
        Conclusion::No { reason } => ("no (degenerate)", reason),
        Conclusion::Unknown { reason } => ("unknown", reason),
    };
    lines.push(format!("isomorphism: {word}"));
    lines.push(format!("  reason: {reason}"));
    lines
}
