//! `elabsub`: classify and verify elementary abelian p-subgroups of
//! PGL_n(q) and PGU_n(q).

use clap::{Parser, Subcommand, ValueEnum};
use elabsub_core::classify::{self, ClassRecord};
use elabsub_core::gamma;
use elabsub_core::localstruct::{self, Budget};
use elabsub_core::oracle::{self, ComparisonReport};
use elabsub_core::projmat::{Form, GroupSpec, ProjMat};
use elabsub_core::toral::{self, WeightMultiset};
use elabsub_core::{gfq, Error};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "elabsub", version, about = "Elementary abelian p-subgroups of PGL_n(q) and PGU_n(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every class with predicted centralizer and normalizer.
    Classify(Args),
    /// Compare the classification with brute force; nonzero exit on mismatch.
    Verify(Args),
    /// Dump the Γ̄_r generators for each admissible r.
    Gamma(Args),
    /// List toral classes with their component data.
    Toral(Args),
    /// Render a JSON report as text tables.
    Report {
        /// JSON file written by classify or verify; standard input if absent.
        input: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(clap::Args, Debug)]
struct Args {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, value_enum, default_value_t = FormArg::Linear)]
    form: FormArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    group_cap: u64,
    #[arg(long, default_value_t = 1_000_000)]
    subspace_cap: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormArg {
    Linear,
    Unitary,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("report input is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Output together with the exit status it implies.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

impl Args {
    fn form(&self) -> Form {
        match self.form {
            FormArg::Linear => Form::Linear,
            FormArg::Unitary => Form::Unitary,
        }
    }

    fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Config(format!("--{name} is required")))
    }

    fn n(&self) -> Result<usize, CliError> {
        let n = Self::need(self.n, "n")?;
        if n < 2 {
            return Err(CliError::Config("--n must be at least 2".into()));
        }
        Ok(n)
    }

    fn p(&self) -> Result<u32, CliError> {
        let p = Self::need(self.p, "p")?;
        if !gfq::is_prime(p as u64) {
            return Err(CliError::Config(format!("--p {p} is not prime")));
        }
        Ok(p)
    }

    fn q(&self) -> Result<u64, CliError> {
        let q = Self::need(self.q, "q")?;
        let Some((ell, _)) = gfq::prime_power(q) else {
            return Err(CliError::Config(format!("--q {q} is not a prime power")));
        };
        if let Some(p) = self.p {
            if p as u64 == ell {
                return Err(CliError::Config(format!("--p {p} divides --q {q}")));
            }
        }
        Ok(q)
    }

    fn spec(&self) -> Result<GroupSpec, CliError> {
        Ok(GroupSpec::new(self.form(), self.n()?, self.q()?)?)
    }
}

fn group_json(args: &Args, spec: &GroupSpec) -> Value {
    let f = &spec.field;
    let m = &spec.mfield;
    json!({
        "group": {"form": spec.form, "n": spec.n, "q": spec.q()},
        "p": args.p,
        "field": {
            "characteristic": m.characteristic(),
            "degree": m.degree(),
            "modulus": m.modulus(),
            "q": f.q(),
        },
    })
}

fn mats_json(ms: &[ProjMat]) -> Value {
    json!(ms.iter().map(|m| m.mat().entries().iter().map(|x| x.0).collect::<Vec<u32>>()).collect::<Vec<_>>())
}

fn lambda_text(w: &WeightMultiset) -> String {
    if w.d == 0 {
        return format!("trivial({})", w.n);
    }
    let parts: Vec<String> = w
        .weights
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect::<String>())
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn records_text(title: &str, records: &[ClassRecord]) -> String {
    let mut out = format!("{title}\n");
    let mut by_rank: BTreeMap<usize, Vec<&ClassRecord>> = BTreeMap::new();
    for r in records {
        by_rank.entry(r.rank).or_default().push(r);
    }
    for (rank, recs) in by_rank {
        out.push_str(&format!("\nrank {rank}\n"));
        let rows: Vec<[String; 7]> = recs
            .iter()
            .map(|r| {
                [
                    format!("{:?}", r.kind).to_lowercase(),
                    r.r.to_string(),
                    lambda_text(&r.lambda_w),
                    format!("{} {}", r.splitting_label, r.tag),
                    r.centralizer.order.to_string(),
                    r.normalizer.order.to_string(),
                    format!("C = {}; N = {}", r.centralizer.descriptor, r.normalizer.descriptor),
                ]
            })
            .collect();
        out.push_str(&table(&["kind", "r", "lambda", "class", "|C|", "|N|", "structure"], &rows));
    }
    out
}

fn table<const K: usize>(header: &[&str; K], rows: &[[String; K]]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .enumerate()
            .map(|(i, (c, w))| if i + 1 == K { c.to_string() } else { format!("{c:<w$}") })
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(|s| s.as_str()).collect()));
    }
    out
}

fn verification_json(report: Option<&ComparisonReport>, status: &str) -> Value {
    match report {
        Some(r) => json!({
            "status": r.status,
            "checked_against_oracle": true,
            "group_order": r.group_order,
            "matched": r.matched,
            "principal_checks": r.principal_checks,
            "mismatches": r.mismatches,
        }),
        None => json!({"status": status, "checked_against_oracle": false, "mismatches": []}),
    }
}

fn classify_outcome(args: &Args, verify: bool) -> Result<Outcome, CliError> {
    let spec = args.spec()?;
    let p = args.p()?;
    let (n, q, form) = (spec.n, spec.q(), spec.form);
    let records = classify::classify(n, q, p, form)?;
    let mut json = group_json(args, &spec);
    json["classes"] = serde_json::to_value(&records)?;
    let title = format!("{} p = {p}: {}", group_name(&spec), classify::CaseKey::new(form, q, p)?);
    let mut text = records_text(&title, &records);
    let mut code = 0;
    if !verify {
        json["verification"] = verification_json(None, "not-run");
    } else {
        match oracle::enumerate_group(&spec, args.group_cap) {
            Ok(table) => {
                let report = oracle::compare_records(&table, p, &records)?;
                json["verification"] = verification_json(Some(&report), "");
                text.push_str(&format!(
                    "\nverification: {} ({} of {} classes matched, {} principal representatives checked)\n",
                    report.status,
                    report.matched,
                    report.oracle.len(),
                    report.principal_checks
                ));
                for m in &report.mismatches {
                    text.push_str(&format!("  mismatch: {}: expected {}, found {}\n", m.claim, m.expected, m.found));
                }
                if !report.passed() {
                    code = 1;
                }
            }
            Err(Error::CapExceeded { order, cap }) => {
                json["verification"] = json!({
                    "status": "cap-exceeded",
                    "checked_against_oracle": false,
                    "partial": true,
                    "group_order": order,
                    "group_cap": cap,
                    "mismatches": [],
                    "local": local_checks(&spec, &records, args.subspace_cap)?,
                });
                text.push_str(&format!("\nverification: group order {order} exceeds --group-cap {cap}; partial output\n"));
                code = 2;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome { json, text, code })
}

/// Centralizer and normalizer orders of principal representatives by local
/// linear algebra.
fn local_checks(spec: &GroupSpec, records: &[ClassRecord], subspace: u64) -> Result<Value, CliError> {
    let budget = Budget::with_subspace(subspace);
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.is_principal() && r.rank <= 4) {
        let mut entry = json!({"class": r.splitting_label, "rank": r.rank, "r": r.r});
        let c = localstruct::projective_centralizer(&r.generators, spec, budget, Some(&r.centralizer.order));
        let nn = localstruct::normalizer_via_aut(&r.generators, spec, budget, Some(&r.normalizer.order));
        match (c, nn) {
            (Ok(c), Ok(nn)) => {
                entry["agrees"] = json!(c.order == r.centralizer.order && nn.order == r.normalizer.order);
                entry["centralizer"] = serde_json::to_value(c)?;
                entry["normalizer"] = serde_json::to_value(nn)?;
            }
            (Err(Error::BudgetExceeded { lower_bound }), _) | (_, Err(Error::BudgetExceeded { lower_bound })) => {
                entry["status"] = json!("budget-exceeded");
                entry["lower_bound"] = json!(lower_bound);
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
        out.push(entry);
    }
    Ok(Value::Array(out))
}

fn group_name(spec: &GroupSpec) -> String {
    match spec.form {
        Form::Linear => format!("PGL_{}({})", spec.n, spec.q()),
        Form::Unitary => format!("PGU_{}({})", spec.n, spec.q()),
    }
}

fn gamma_outcome(args: &Args) -> Result<Outcome, CliError> {
    let spec = args.spec()?;
    let p = args.p()?;
    let mut json = group_json(args, &spec);
    let mut text = format!("Γ̄_r generators in {}\n", group_name(&spec));
    let mut list = Vec::new();
    for r in classify::existence_check(spec.n, spec.q(), p, spec.form)? {
        let k = spec.n / (p as usize).pow(r);
        let beta = toral::diagonal_root(p, &spec)?;
        let g = gamma::gamma_generators_with_root(p, r, k, beta, &spec.mfield)?;
        let relations = gamma::check_relations(&g);
        let fixed = g.interleaved().iter().all(|x| spec.is_steinberg_fixed(x));
        list.push(json!({
            "r": r,
            "k": k,
            "beta": beta.0,
            "relations_hold": relations,
            "steinberg_fixed": fixed,
            "a": mats_json(&g.a_list),
            "b": mats_json(&g.b_list),
        }));
        text.push_str(&format!("\nr = {r}, k = {k}, beta = {}: relations {relations}, Steinberg-fixed {fixed}\n", beta.0));
        for (name, ms) in [("A", &g.a_list), ("B", &g.b_list)] {
            for (s, m) in ms.iter().enumerate() {
                text.push_str(&format!("{name}_{s}:\n{}", matrix_text(m)));
            }
        }
    }
    if list.is_empty() {
        text.push_str("no admissible r: every elementary abelian p-subgroup is toral\n");
    }
    json["gamma"] = Value::Array(list);
    Ok(Outcome { json, text, code: 0 })
}

fn matrix_text(m: &ProjMat) -> String {
    let n = m.n();
    let e = m.mat().entries();
    (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n).map(|j| e[i * n + j].0.to_string()).collect();
            format!("  {}\n", row.join(" "))
        })
        .collect()
}

fn toral_outcome(args: &Args) -> Result<Outcome, CliError> {
    let n = args.n()?;
    let p = args.p()?;
    let classes = toral::enumerate_toral_classes(n, p, n - 1)?;
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for w in &classes {
        let stab = toral::translation_stabilizer(w).len();
        let aff = toral::affine_symmetries(w)?;
        let residual = if stab > 1 {
            let (r1, h) = toral::decompose_disconnected(w)?;
            Some((r1, h))
        } else {
            None
        };
        list.push(json!({
            "lambda_w": w,
            "rank": w.d,
            "translation_stabilizer": stab,
            "connected": stab == 1,
            "affine_symmetries": aff.order(),
            "linear_parts": aff.linear_order(),
            "decomposition": residual.as_ref().map(|(r1, h)| json!({"r1": r1, "residual": h})),
        }));
        rows.push([
            w.d.to_string(),
            lambda_text(w),
            stab.to_string(),
            aff.order().to_string(),
            aff.linear_order().to_string(),
            residual.map_or(String::new(), |(r1, h)| format!("D_{r1} × {}", lambda_text(&h))),
        ]);
    }
    let json = json!({"n": n, "p": p, "classes": list});
    let mut text = format!("toral classes of PGL_{n}, p = {p}: {}\n\n", classes.len());
    text.push_str(&table(&["rank", "weights", "|stab|", "|Aff|", "|N/C|", "decomposition"], &rows));
    Ok(Outcome { json, text, code: 0 })
}

fn report_outcome(input: Option<&str>) -> Result<Outcome, CliError> {
    let raw = match input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let v: Value = serde_json::from_str(&raw)?;
    let classes = v["classes"].as_array().ok_or_else(|| CliError::Config("report input has no \"classes\" array".into()))?;
    let g = &v["group"];
    let form = g["form"].as_str().unwrap_or("?");
    let mut text = format!("{form} n = {} q = {} p = {}\n", g["n"], g["q"], v["p"]);
    let mut by_rank: BTreeMap<u64, Vec<[String; 6]>> = BTreeMap::new();
    for c in classes {
        let s = |x: &Value| match x {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let rank = c["rank"].as_u64().unwrap_or(0);
        by_rank.entry(rank).or_default().push([
            s(&c["kind"]),
            s(&c["r"]),
            format!("{} {}", s(&c["splitting_label"]), s(&c["tag"])),
            s(&c["centralizer"]["order"]),
            s(&c["normalizer"]["order"]),
            format!("C = {}; N = {}", s(&c["centralizer"]["descriptor"]), s(&c["normalizer"]["descriptor"])),
        ]);
    }
    for (rank, rows) in by_rank {
        text.push_str(&format!("\nrank {rank}\n"));
        text.push_str(&table(&["kind", "r", "class", "|C|", "|N|", "structure"], &rows));
    }
    if let Some(status) = v["verification"]["status"].as_str() {
        text.push_str(&format!("\nverification: {status}\n"));
    }
    Ok(Outcome { json: v, text, code: 0 })
}

fn emit(outcome: &Outcome, format: Format, out: Option<&str>) -> Result<(), CliError> {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&outcome.json)? + "\n",
        Format::Text => outcome.text.clone(),
    };
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (outcome, format, out) = match &cli.command {
        Command::Classify(a) => (classify_outcome(a, false)?, a.format, a.out.as_deref()),
        Command::Verify(a) => (classify_outcome(a, true)?, a.format, a.out.as_deref()),
        Command::Gamma(a) => (gamma_outcome(a)?, a.format, a.out.as_deref()),
        Command::Toral(a) => (toral_outcome(a)?, a.format, a.out.as_deref()),
        Command::Report { input, out } => (report_outcome(input.as_deref())?, Format::Text, out.as_deref()),
    };
    emit(&outcome, format, out)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let cap = matches!(e, CliError::Core(Error::CapExceeded { .. } | Error::CapacityExceeded(_)));
            ExitCode::from(if cap { 2 } else { 1 })
        }
    }
}
