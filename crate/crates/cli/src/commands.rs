use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use purcat_core::complexes::{cone, homology, is_acyclic, is_quasi_isomorphism, truncate_geq, truncate_leq};
use purcat_core::monoidal::{adjunction_iso, check_dpur_adjunction, check_phom_adjunction, check_phom_invariance, phom, Report as CheckReport};
use purcat_core::purity::{battery_for, is_pure_acyclic, is_pure_acyclic_at, is_pure_mono, ImpureWitness, PureWitness, PurityVerdict};
use purcat_core::resolutions::{colimit_tower, injective_tower, limit_tower, projective_tower, resolve, Side};
use purcat_core::{Complex, FpModule};

use crate::format::{self, chain_map_doc, complex_doc, map_doc, CertificateDoc, RingDoc, Workspace};
use crate::report::{Report, Status};

#[derive(Clone, Debug, Parser)]
#[command(name = "purcat", version, about = "Exact pure homological algebra over Z and Z/m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Opts {
    /// Emit JSON reports instead of text.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Tower depth for resolutions of unbounded windows.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Worker threads for `batch`.
    #[arg(long, global = true, default_value_t = 1)]
    #[serde(skip)]
    pub jobs: usize,
    /// Leave the timing field out of reports.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Injective,
    Projective,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Injective => Side::Injective,
            SideArg::Projective => Side::Projective,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncKind {
    /// Kernel-topped `τ≤n`.
    Leq,
    /// Cokernel-topped `τ≥n`.
    Geq,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Invariant factors of the homology of a complex.
    Homology {
        #[arg(long)]
        complex: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Mapping cone of a chain map.
    Cone {
        #[arg(long)]
        map: String,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Canonical truncation of a complex.
    Truncate {
        #[arg(long)]
        complex: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, value_enum, default_value_t = TruncKind::Leq)]
        kind: TruncKind,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Pure acyclicity of a complex, or purity of a module monomorphism.
    Purity {
        #[arg(long, conflicts_with = "map", required_unless_present = "map")]
        complex: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Whether a chain map is a pure quasi-isomorphism.
    Qis {
        #[arg(long)]
        map: String,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Pure injective or pure projective resolution with its certificate.
    Resolve {
        #[arg(long)]
        complex: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[serde(skip)]
        input: PathBuf,
    },
    /// The semi-split tower behind a resolution, level by level.
    Towers {
        #[arg(long)]
        complex: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[serde(skip)]
        input: PathBuf,
    },
    /// The pure derived Hom complex `Hom(P_M, I_N)`.
    Phom {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Tensor-Hom adjunction checks on a triple of complexes.
    Adjunction {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[serde(skip)]
        input: PathBuf,
    },
    /// Re-validate the certificates in a report or certificate file.
    ValidateCert {
        #[serde(skip)]
        input: PathBuf,
    },
    /// Run the command lines listed under `batch` in the input, `--jobs` at a time.
    Batch {
        #[serde(skip)]
        input: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Homology { .. } => "homology",
            Command::Cone { .. } => "cone",
            Command::Truncate { .. } => "truncate",
            Command::Purity { .. } => "purity",
            Command::Qis { .. } => "qis",
            Command::Resolve { .. } => "resolve",
            Command::Towers { .. } => "towers",
            Command::Phom { .. } => "phom",
            Command::Adjunction { .. } => "adjunction",
            Command::ValidateCert { .. } => "validate-cert",
            Command::Batch { .. } => "batch",
        }
    }

    pub fn input(&self) -> &PathBuf {
        match self {
            Command::Homology { input, .. }
            | Command::Cone { input, .. }
            | Command::Truncate { input, .. }
            | Command::Purity { input, .. }
            | Command::Qis { input, .. }
            | Command::Resolve { input, .. }
            | Command::Towers { input, .. }
            | Command::Phom { input, .. }
            | Command::Adjunction { input, .. }
            | Command::ValidateCert { input }
            | Command::Batch { input } => input,
        }
    }

    fn params(&self, opts: &Opts) -> Value {
        let mut p = match serde_json::to_value(self).expect("commands serialize") {
            Value::Object(mut o) => o.remove(self.name()).unwrap_or(Value::Null),
            _ => Value::Null,
        };
        if let Value::Object(o) = &mut p {
            o.retain(|_, v| !v.is_null());
            if let Value::Object(g) = serde_json::to_value(opts).expect("options serialize") {
                o.extend(g);
            }
        } else {
            p = serde_json::to_value(opts).expect("options serialize");
        }
        p
    }
}

/// Runs a parsed command line: reads the input file, dispatches, and returns one
/// report (several in batch mode).
pub fn execute(cli: &Cli) -> Vec<Report> {
    let cmd = &cli.command;
    let text = match std::fs::read_to_string(cmd.input()) {
        Ok(t) => t,
        Err(e) => return vec![Report::error(cmd.name(), cmd.params(&cli.opts), format!("cannot read {}: {e}", cmd.input().display()))],
    };
    match cmd {
        Command::ValidateCert { .. } => vec![timed(&cli.opts, || validate_cert(&text, cmd.params(&cli.opts)))],
        Command::Batch { .. } => match format::parse_input(&text) {
            Err(e) => vec![Report::error("batch", cmd.params(&cli.opts), e.to_string())],
            Ok(ws) => run_batch(&ws, &cli.opts),
        },
        _ => match format::parse_input(&text) {
            Err(e) => vec![Report::error(cmd.name(), cmd.params(&cli.opts), e.to_string())],
            Ok(ws) => vec![timed(&cli.opts, || run(cmd, &ws, &cli.opts))],
        },
    }
}

fn timed(opts: &Opts, f: impl FnOnce() -> Report) -> Report {
    let start = Instant::now();
    let mut r = f();
    if !opts.no_timing {
        r.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    r
}

fn run_batch(ws: &Workspace, outer: &Opts) -> Vec<Report> {
    let job = |line: &Vec<String>| -> Report {
        let argv = std::iter::once("purcat".to_string()).chain(line.iter().cloned()).chain(std::iter::once("<batch>".to_string()));
        match Cli::try_parse_from(argv) {
            Err(e) => Report::error("batch", json!({ "line": line }), e.to_string().trim_end().to_string()),
            Ok(c) if matches!(c.command, Command::Batch { .. } | Command::ValidateCert { .. }) => {
                Report::error(c.command.name(), json!({ "line": line }), "not available inside a batch")
            }
            Ok(c) => {
                let opts = Opts { no_timing: outer.no_timing, ..c.opts.clone() };
                timed(&opts, || run(&c.command, ws, &opts))
            }
        }
    };
    match rayon::ThreadPoolBuilder::new().num_threads(outer.jobs.max(1)).build() {
        Ok(pool) => pool.install(|| ws.batch.par_iter().map(job).collect()),
        Err(_) => ws.batch.iter().map(job).collect(),
    }
}

fn factors(m: &FpModule) -> Value {
    json!(m.invariant_factors())
}

fn homology_table(c: &Complex, r: &mut Report) -> Value {
    if c.is_zero() {
        r.lines.push("  (zero complex)".into());
        return json!([]);
    }
    c.degrees()
        .map(|n| {
            let h = homology(c, n);
            r.lines.push(format!("  H^{n} = {h}"));
            json!({ "degree": n, "invariant_factors": factors(&h) })
        })
        .collect()
}

fn complex_lines(name: &str, c: &Complex, r: &mut Report) {
    if c.is_zero() {
        r.lines.push(format!("{name}: 0"));
        return;
    }
    let terms: Vec<String> = c.degrees().map(|n| format!("{n}: {}", c.module(n))).collect();
    r.lines.push(format!("{name}: [{}]", terms.join(", ")));
}

fn lookup<'a, T>(table: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, String> {
    table.get(name).ok_or_else(|| format!("unknown {kind} `{name}`"))
}

fn check_report(name: &str, rep: &CheckReport, r: &mut Report) -> Value {
    r.lines.push(format!("{name}:"));
    for c in &rep.checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        if c.detail.is_empty() {
            r.lines.push(format!("  [{mark}] {}", c.name));
        } else {
            r.lines.push(format!("  [{mark}] {} ({})", c.name, c.detail));
        }
    }
    serde_json::to_value(&rep.checks).expect("checks serialize")
}

/// Dispatches one command against a validated workspace.
pub fn run(cmd: &Command, ws: &Workspace, opts: &Opts) -> Report {
    let mut r = Report::new(cmd.name(), cmd.params(opts));
    match dispatch(cmd, ws, opts, &mut r) {
        Ok(()) => r,
        Err(e) => Report::error(cmd.name(), cmd.params(opts), e),
    }
}

fn dispatch(cmd: &Command, ws: &Workspace, opts: &Opts, r: &mut Report) -> Result<(), String> {
    let err = |e: purcat_core::Error| e.to_string();
    match cmd {
        Command::Homology { complex, degree, .. } => {
            let c = lookup(&ws.complexes, "complex", complex)?;
            let table = match degree {
                Some(n) => {
                    let h = homology(c, *n);
                    r.lines.push(format!("  H^{n} = {h}"));
                    json!([{ "degree": n, "invariant_factors": factors(&h) }])
                }
                None => homology_table(c, r),
            };
            r.results = json!({ "homology": table });
        }
        Command::Cone { map, .. } => {
            let f = lookup(&ws.chain_maps, "chain map", map)?;
            let c = cone(f).complex;
            complex_lines("cone", &c, r);
            let table = homology_table(&c, r);
            r.results = json!({ "cone": complex_doc(&c), "homology": table });
        }
        Command::Truncate { complex, degree, kind, .. } => {
            let c = lookup(&ws.complexes, "complex", complex)?;
            let (t, map) = match kind {
                TruncKind::Leq => truncate_leq(c, *degree),
                TruncKind::Geq => truncate_geq(c, *degree),
            };
            complex_lines("truncation", &t, r);
            let table = homology_table(&t, r);
            r.results = json!({ "truncation": complex_doc(&t), "map": chain_map_doc(&map), "homology": table });
        }
        Command::Purity { complex: Some(name), .. } => {
            let c = lookup(&ws.complexes, "complex", name)?;
            let battery = battery_for(&ws.ring, &[c]);
            let per_degree: Vec<Value> = c
                .degrees()
                .filter(|_| !c.is_zero())
                .map(|n| match is_pure_acyclic_at(c, n, &battery) {
                    Ok(v) => json!({ "degree": n, "acyclic": true, "pure": v.is_pure() }),
                    Err(_) => json!({ "degree": n, "acyclic": false, "pure": false }),
                })
                .collect();
            let verdict = is_pure_acyclic(c, &battery);
            r.lines.push(format!("acyclic: {}", is_acyclic(c)));
            let mut out = json!({ "acyclic": is_acyclic(c), "pure_acyclic": verdict.is_pure(), "per_degree": per_degree });
            verdict_into(&verdict, r, &mut out, |h| CertificateDoc::Contraction {
                ring: RingDoc::of(&ws.ring),
                complex: complex_doc(c),
                homotopy: format::homotopy_doc(h),
            });
            r.results = out;
        }
        Command::Purity { map: Some(name), .. } => {
            let f = lookup(&ws.maps, "map", name)?;
            let battery = battery_for(&ws.ring, &[&Complex::concentrated(f.src(), 0), &Complex::concentrated(f.tgt(), 0)]);
            let verdict = is_pure_mono(f, &battery).map_err(err)?;
            let mut out = json!({ "pure_mono": verdict.is_pure() });
            if let PurityVerdict::Pure(PureWitness::Retraction(s)) = &verdict {
                let cert = CertificateDoc::Retraction { ring: RingDoc::of(&ws.ring), map: map_doc(f), retraction: map_doc(s) };
                out["certificate"] = serde_json::to_value(cert).expect("certificates serialize");
                r.lines.push("pure monomorphism (split)".into());
            } else {
                verdict_into(&verdict, r, &mut out, |_| unreachable!("maps have retraction witnesses"));
            }
            r.results = out;
        }
        Command::Purity { .. } => return Err("purity needs --complex or --map".into()),
        Command::Qis { map, .. } => {
            let f = lookup(&ws.chain_maps, "chain map", map)?;
            let battery = battery_for(&ws.ring, &[f.src(), f.tgt()]);
            let verdict = purcat_core::purity::is_pure_qis(f, &battery);
            let q = is_quasi_isomorphism(f);
            r.lines.push(format!("quasi-isomorphism: {q}"));
            let mut out = json!({ "quasi_isomorphism": q, "pure_qis": verdict.is_pure() });
            verdict_into(&verdict, r, &mut out, |h| CertificateDoc::PureQis {
                ring: RingDoc::of(&ws.ring),
                src: complex_doc(f.src()),
                tgt: complex_doc(f.tgt()),
                map: chain_map_doc(f),
                homotopy: format::homotopy_doc(h),
            });
            r.results = out;
        }
        Command::Resolve { complex, side, .. } => {
            let c = lookup(&ws.complexes, "complex", complex)?;
            let cert = resolve(c, (*side).into(), opts.depth).map_err(err)?;
            complex_lines("resolution", &cert.target, r);
            r.lines.push(format!("certificate: {} resolution, {} terms, all flags {}", cert.side, cert.termwise_flags.len(), cert.termwise_flags.iter().all(|f| f.1)));
            let terms: Vec<Value> = cert.target.degrees().filter(|_| !cert.target.is_zero()).map(|n| json!({ "degree": n, "invariant_factors": factors(&cert.target.module(n)) })).collect();
            r.results = json!({ "terms": terms, "certificate": CertificateDoc::resolution(&cert) });
        }
        Command::Towers { complex, side, .. } => {
            let c = lookup(&ws.complexes, "complex", complex)?;
            r.results = towers(c, (*side).into(), opts.depth, r).map_err(err)?;
        }
        Command::Phom { m, n, .. } => {
            let (a, b) = (lookup(&ws.complexes, "complex", m)?, lookup(&ws.complexes, "complex", n)?);
            let p = phom(a, b, opts.depth).map_err(err)?;
            complex_lines("PHom", &p.value, r);
            let table = homology_table(&p.value, r);
            let verify = p.verify().map_err(err)?;
            let v = check_report("comparison maps", &verify, r);
            let inv = check_phom_invariance(a, b, (opts.seed, opts.seed.wrapping_add(1)), opts.depth).map_err(err)?;
            let i = check_report("independence of resolutions", &inv, r);
            if !verify.passed() || !inv.passed() {
                r.status = Status::Refuted;
            }
            r.results = json!({ "phom": complex_doc(&p.value), "homology": table, "checks": v, "invariance": i });
        }
        Command::Adjunction { a, b, c, .. } => {
            let (x, y, z) = (lookup(&ws.complexes, "complex", a)?, lookup(&ws.complexes, "complex", b)?, lookup(&ws.complexes, "complex", c)?);
            let w = adjunction_iso(x, y, z).map_err(err)?.validate();
            let links = check_dpur_adjunction(x, y, z, opts.depth).map_err(err)?;
            let derived = check_phom_adjunction(x, y, z, opts.depth).map_err(err)?;
            let wv = check_report("currying isomorphism", &w, r);
            let lv = check_report("derived adjunction links", &links, r);
            let dv = check_report("PHom adjunction", &derived, r);
            if !(w.passed() && links.passed() && derived.passed()) {
                r.status = Status::Refuted;
            }
            r.results = json!({ "currying": wv, "links": lv, "phom": dv });
        }
        Command::ValidateCert { .. } | Command::Batch { .. } => return Err(format!("{} does not run against a workspace", cmd.name())),
    }
    Ok(())
}

fn verdict_into(verdict: &PurityVerdict, r: &mut Report, out: &mut Value, cert: impl FnOnce(&purcat_core::Homotopy) -> CertificateDoc) {
    match verdict {
        PurityVerdict::Pure(PureWitness::Contraction(h)) => {
            r.lines.push("pure: contracting homotopy found".into());
            out["certificate"] = serde_json::to_value(cert(h)).expect("certificates serialize");
        }
        PurityVerdict::Pure(PureWitness::Retraction(_)) => r.lines.push("pure".into()),
        PurityVerdict::NotPure(w) => {
            r.status = Status::Refuted;
            out["witness"] = match w {
                ImpureWitness::Probe { probe, degree } => {
                    r.lines.push(format!("not pure: tensoring with {probe} breaks exactness at degree {degree}"));
                    json!({ "probe": factors(probe), "degree": degree })
                }
                ImpureWitness::Unsolvable { degree } => {
                    r.lines.push(format!("not pure: no splitting at degree {degree}"));
                    json!({ "unsolvable_degree": degree })
                }
            };
        }
    }
}

fn towers(c: &Complex, side: Side, depth: usize, r: &mut Report) -> purcat_core::Result<Value> {
    let mut levels = Vec::new();
    let (valid, cert) = match side {
        Side::Injective => {
            let (t, fs) = injective_tower(c, depth)?;
            for (n, l) in t.levels.iter().enumerate() {
                complex_lines(&format!("level {n}"), &l.complex, r);
                complex_lines(&format!("  kernel {n}"), &l.kernel, r);
                levels.push(json!({
                    "level": n,
                    "truncation": complex_doc(&l.truncation),
                    "complex": complex_doc(&l.complex),
                    "kernel": complex_doc(&l.kernel),
                    "cone_identity": l.cone_identity,
                    "kernel_route": l.kernel_certificate.as_ref().map(|k| k.route),
                }));
            }
            (t.validate().is_ok(), limit_tower(&t, &fs))
        }
        Side::Projective => {
            let (t, fs) = projective_tower(c, depth)?;
            for (n, l) in t.levels.iter().enumerate() {
                complex_lines(&format!("level {n}"), &l.complex, r);
                complex_lines(&format!("  cokernel {n}"), &l.cokernel, r);
                levels.push(json!({
                    "level": n,
                    "truncation": complex_doc(&l.truncation),
                    "complex": complex_doc(&l.complex),
                    "cokernel": complex_doc(&l.cokernel),
                    "cone_identity": l.cone_identity,
                    "cokernel_route": l.cokernel_certificate.as_ref().map(|k| k.route),
                }));
            }
            (t.validate().is_ok(), colimit_tower(&t, &fs))
        }
    };
    r.lines.push(format!("tower invariants: {}", if valid { "pass" } else { "FAIL" }));
    let limit = match &cert {
        Ok(cert) => {
            r.lines.push(format!("{}: valid resolution", if side == Side::Injective { "limit" } else { "colimit" }));
            json!({ "certificate": CertificateDoc::resolution(cert) })
        }
        Err(e) => {
            r.lines.push(format!("(co)limit: {e}"));
            json!({ "error": e.to_string() })
        }
    };
    if !valid || cert.is_err() {
        r.status = Status::Refuted;
    }
    Ok(json!({ "levels": levels, "valid": valid, "limit": limit }))
}

/// Finds every certificate in a report (or a bare certificate document) and
/// re-validates it.
pub fn validate_cert(text: &str, params: Value) -> Report {
    let mut r = Report::new("validate-cert", params);
    let doc: Value = match format::from_json(text) {
        Ok(v) => v,
        Err(e) => return Report::error("validate-cert", r.params, e.to_string()),
    };
    let mut found = Vec::new();
    collect_certs(&doc, &mut found);
    if found.is_empty() {
        return Report::error("validate-cert", r.params, "no certificate found");
    }
    let mut results = Vec::new();
    for v in found {
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("?").to_string();
        let outcome = serde_json::from_value::<CertificateDoc>(v.clone()).map_err(|e| e.to_string()).and_then(|c| c.validate());
        match &outcome {
            Ok(()) => r.lines.push(format!("{kind}: valid")),
            Err(e) => {
                r.lines.push(format!("{kind}: INVALID ({e})"));
                r.status = Status::Refuted;
            }
        }
        results.push(json!({ "kind": kind, "valid": outcome.is_ok(), "reason": outcome.err() }));
    }
    r.results = json!({ "certificates": results });
    r
}

fn collect_certs<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
    match v {
        Value::Object(o) => {
            if o.contains_key("kind") && (o.contains_key("ring")) && !o.contains_key("format") {
                out.push(v);
                return;
            }
            for (k, x) in o {
                if k == "certificate" && x.is_object() {
                    out.push(x);
                } else {
                    collect_certs(x, out);
                }
            }
        }
        Value::Array(a) => a.iter().for_each(|x| collect_certs(x, out)),
        _ => {}
    }
}
