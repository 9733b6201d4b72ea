//! Batch command-line interface: parse tower descriptions, run validations,
//! verifications, demos, and searches, and emit deterministic reports.
//!
//! Exit codes: 0 = all checks passed, 1 = a verification or validation
//! check failed (witnesses are in the report), 2 = input error. Reports are
//! byte-stable for fixed inputs and seed.

pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use format::{parse_document, tower_from_doc, Document, ParseError, TowerInput};
use prolim::commutation::{self, LimitVerdict, Witness};
use prolim::limits::enumerate_threads;
use prolim::search::{search, SearchParams, ViolationMode};
use prolim::systems::{negation_tower, solenoid};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "prolim", version, about = "inverse limits of finite group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Solenoid,
    Negation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    None,
    NotFree,
    NuNotInjective,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group, action, or tower file.
    Validate { input: PathBuf },
    /// Enumerate the threads of a tower at a depth.
    Threads {
        input: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Per-level orbit counts and the induced orbit tower.
    Orbits {
        input: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run the full commutation suite on a tower.
    Verify {
        input: Option<PathBuf>,
        /// Verify a generated family instead of a file.
        #[arg(long, value_enum, conflicts_with = "input")]
        builtin: Option<Builtin>,
        #[arg(long)]
        depth: Option<usize>,
        /// Odd base for the generated families.
        #[arg(long, default_value_t = 3)]
        p: usize,
    },
    /// Stabilized commutation check for a constant-tower spec.
    Stabilized { input: PathBuf },
    /// Emit the finite solenoid analogue as an explicit tower file.
    DemoSolenoid {
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Generate and verify seeded random towers.
    Search {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        max_carrier: usize,
        #[arg(long, default_value_t = 6)]
        max_group_order: usize,
        #[arg(long, value_enum, default_value_t = Mode::None)]
        mode: Mode,
    },
}

pub fn run_from_args() -> i32 {
    let cli = Cli::parse();
    let (code, output) = dispatch(&cli);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, output) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{output}"),
    }
    code
}

fn dispatch(cli: &Cli) -> (i32, String) {
    match &cli.command {
        Command::Validate { input } => cmd_validate(cli, input),
        Command::Threads { input, depth } => cmd_threads(cli, input, *depth),
        Command::Orbits { input, depth } => cmd_orbits(cli, input, *depth),
        Command::Verify { input, builtin, depth, p } => {
            cmd_verify(cli, input.as_deref(), *builtin, *depth, *p)
        }
        Command::Stabilized { input } => cmd_stabilized(cli, input),
        Command::DemoSolenoid { p, depth } => cmd_demo_solenoid(*p, *depth),
        Command::Search { seed, count, depth, max_carrier, max_group_order, mode } => {
            cmd_search(cli, *seed, *count, *depth, *max_carrier, *max_group_order, *mode)
        }
    }
}

struct Report {
    command: &'static str,
    config: Value,
    verdict: String,
    sizes: Value,
    hypotheses: Value,
    witnesses: Vec<Value>,
    extra: Vec<(&'static str, Value)>,
}

impl Report {
    fn new(command: &'static str, config: Value) -> Self {
        Report {
            command,
            config,
            verdict: String::new(),
            sizes: Value::Null,
            hypotheses: Value::Null,
            witnesses: Vec::new(),
            extra: Vec::new(),
        }
    }

    fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("version".into(), json!(VERSION));
        obj.insert("config".into(), self.config.clone());
        obj.insert("verdict".into(), json!(self.verdict));
        obj.insert("hypotheses".into(), self.hypotheses.clone());
        obj.insert("sizes".into(), self.sizes.clone());
        obj.insert("witnesses".into(), Value::Array(self.witnesses.clone()));
        for (k, v) in &self.extra {
            obj.insert((*k).into(), v.clone());
        }
        Value::Object(obj)
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).unwrap();
                s.push('\n');
                s
            }
            OutputFormat::Text => {
                let mut s = String::new();
                s.push_str(&format!("command:    {}\n", self.command));
                s.push_str(&format!("version:    {VERSION}\n"));
                s.push_str(&format!("config:     {}\n", self.config));
                s.push_str(&format!("verdict:    {}\n", self.verdict));
                if !self.hypotheses.is_null() {
                    s.push_str(&format!("hypotheses: {}\n", self.hypotheses));
                }
                if !self.sizes.is_null() {
                    s.push_str(&format!("sizes:      {}\n", self.sizes));
                }
                for (k, v) in &self.extra {
                    s.push_str(&format!("{k}: {v}\n"));
                }
                if self.witnesses.is_empty() {
                    s.push_str("witnesses:  (none)\n");
                } else {
                    s.push_str("witnesses:\n");
                    for w in &self.witnesses {
                        s.push_str(&format!("  - {w}\n"));
                    }
                }
                s
            }
        }
    }
}

fn input_error(cli: &Cli, command: &'static str, config: Value, msg: String) -> (i32, String) {
    let mut report = Report::new(command, config);
    report.verdict = "input-error".into();
    report.witnesses.push(json!({ "error": msg }));
    (2, report.render(cli.format))
}

fn read_document(path: &PathBuf) -> Result<Document, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_document(&text).map_err(|e| e.to_string())
}

fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::NotFree { level, g, x } => {
            json!({ "kind": "NotFree", "level": level, "g": g, "x": x })
        }
        Witness::NotInjectiveHom { level, g } => {
            json!({ "kind": "NotInjectiveHom", "level": level, "g": g })
        }
        Witness::LiftFailure { orbit_thread, level } => {
            json!({ "kind": "LiftFailure", "orbit_thread": orbit_thread.entries(), "level": level })
        }
        Witness::TransporterEmpty { x, y, level } => json!({
            "kind": "TransporterEmpty", "x": x.entries(), "y": y.entries(), "level": level
        }),
    }
}

fn cmd_validate(cli: &Cli, input: &PathBuf) -> (i32, String) {
    let config = json!({ "input": input.display().to_string() });
    let mut report = Report::new("validate", config.clone());
    let doc = match read_document(input) {
        Ok(doc) => doc,
        Err(e) => return input_error(cli, "validate", config, e),
    };
    let outcome = match &doc {
        Document::Group(g) => {
            report.extra.push(("object", json!("group")));
            format::group_from_doc(g, "group").map(|_| ())
        }
        Document::GSpace(s) => {
            report.extra.push(("object", json!("gspace")));
            format::gspace_from_doc(s, "gspace").map(|_| ())
        }
        Document::Tower(t) => {
            report.extra.push(("object", json!("tower")));
            tower_from_doc(t).map(|_| ())
        }
    };
    match outcome {
        Ok(()) => {
            report.verdict = "valid".into();
            (0, report.render(cli.format))
        }
        Err(ParseError::Validation(msg)) => {
            report.verdict = "invalid".into();
            report.witnesses.push(json!({ "error": msg }));
            (1, report.render(cli.format))
        }
        Err(ParseError::Syntax(msg)) => input_error(cli, "validate", config, msg),
    }
}

fn load_tower_input(path: &PathBuf) -> Result<TowerInput, String> {
    match read_document(path)? {
        Document::Tower(doc) => tower_from_doc(&doc).map_err(|e| e.to_string()),
        _ => Err("expected a tower document (kind = constant or explicit)".into()),
    }
}

fn cmd_threads(cli: &Cli, input: &PathBuf, depth: Option<usize>) -> (i32, String) {
    let config = json!({ "input": input.display().to_string(), "depth": depth });
    let tower = match load_tower_input(input).and_then(|t| {
        t.at_depth(depth).map_err(|e| e.to_string())
    }) {
        Ok(t) => t,
        Err(e) => return input_error(cli, "threads", config, e),
    };
    let threads = enumerate_threads(tower.spaces(), tower.depth()).expect("depth in range");
    let mut report = Report::new("threads", config);
    report.verdict = "ok".into();
    report.sizes = json!({
        "depth": tower.depth(),
        "levels": tower.spaces().sizes(),
        "threads": threads.len(),
    });
    report.extra.push((
        "threads",
        Value::Array(threads.iter().map(|t| json!(t.entries())).collect()),
    ));
    (0, report.render(cli.format))
}

fn cmd_orbits(cli: &Cli, input: &PathBuf, depth: Option<usize>) -> (i32, String) {
    let config = json!({ "input": input.display().to_string(), "depth": depth });
    let tower = match load_tower_input(input).and_then(|t| {
        t.at_depth(depth).map_err(|e| e.to_string())
    }) {
        Ok(t) => t,
        Err(e) => return input_error(cli, "orbits", config, e),
    };
    let orbits = commutation::orbit_tower(&tower);
    let mut report = Report::new("orbits", config);
    report.verdict = "ok".into();
    report.sizes = json!({
        "depth": tower.depth(),
        "levels": tower.spaces().sizes(),
        "orbit_levels": orbits.sizes(),
    });
    report.extra.push((
        "orbit_bonds",
        Value::Array((0..tower.depth()).map(|k| json!(orbits.bond(k))).collect()),
    ));
    (0, report.render(cli.format))
}

fn verdict_name(v: LimitVerdict) -> &'static str {
    match v {
        LimitVerdict::CertifiedByHypotheses => "CertifiedByHypotheses",
        LimitVerdict::CertifiedByTransporters => "CertifiedByTransporters",
        LimitVerdict::DepthOnly => "DepthOnly",
    }
}

fn cmd_verify(
    cli: &Cli,
    input: Option<&std::path::Path>,
    builtin: Option<Builtin>,
    depth: Option<usize>,
    p: usize,
) -> (i32, String) {
    let config = json!({
        "input": input.map(|p| p.display().to_string()),
        "builtin": builtin.map(|b| match b {
            Builtin::Solenoid => "solenoid",
            Builtin::Negation => "negation",
        }),
        "depth": depth,
        "p": p,
    });
    let tower = match (input, builtin) {
        (_, Some(b)) => {
            if p < 3 || p % 2 == 0 {
                return input_error(cli, "verify", config, format!("p must be odd and >= 3, got {p}"));
            }
            match b {
                Builtin::Solenoid => solenoid(p, depth.unwrap_or(3)),
                Builtin::Negation => negation_tower(p, depth.unwrap_or(3)),
            }
        }
        (Some(path), None) => {
            match load_tower_input(&path.to_path_buf())
                .and_then(|t| t.at_depth(depth).map_err(|e| e.to_string()))
            {
                Ok(t) => t,
                Err(e) => return input_error(cli, "verify", config, e),
            }
        }
        (None, None) => {
            return input_error(cli, "verify", config, "no input file or --builtin given".into())
        }
    };
    let psi = commutation::verify(&tower);
    let mut report = Report::new("verify", config);
    report.verdict = verdict_name(psi.limit_verdict).into();
    report.hypotheses = json!({
        "least_level": psi.hypotheses.least_level,
        "free": psi.hypotheses.freeness_witness.is_none(),
        "freeness_witness": psi.hypotheses.freeness_witness,
        "nu_injective": psi.hypotheses.nu_kernel_witnesses.iter().all(Option::is_none),
        "nu_kernel_witnesses": psi.hypotheses.nu_kernel_witnesses,
        "exact_for_all_levels": psi.hypotheses.exact_for_all_levels,
    });
    report.sizes = json!({
        "depth": psi.depth,
        "threads": psi.thread_count,
        "psi_domain": psi.domain_size,
        "psi_codomain": psi.codomain_size,
    });
    report.extra.push(("surjective", json!(psi.surjective.ok())));
    report.extra.push(("injective", json!(psi.injective.ok())));
    report.extra.push(("bijective", json!(psi.bijective())));
    report.extra.push((
        "unique_transporters",
        json!(psi.unique_transporters.as_ref().map(|r| r.ok())),
    ));
    report.witnesses = psi.witnesses().iter().map(witness_to_json).collect();
    let code = i32::from(!psi.bijective());
    (code, report.render(cli.format))
}

fn cmd_stabilized(cli: &Cli, input: &PathBuf) -> (i32, String) {
    let config = json!({ "input": input.display().to_string() });
    let spec = match load_tower_input(input) {
        Ok(TowerInput::Constant(spec)) => spec,
        Ok(TowerInput::Explicit(_)) => {
            return input_error(
                cli,
                "stabilized",
                config,
                "stabilized check needs a constant-tower spec (kind = constant)".into(),
            )
        }
        Err(e) => return input_error(cli, "stabilized", config, e),
    };
    let r = commutation::stabilized_commutation_check(&spec);
    let mut report = Report::new("stabilized", config);
    report.verdict = if r.bijective { "bijective" } else { "not-bijective" }.into();
    report.sizes = json!({
        "omega": r.omega,
        "gamma": r.gamma,
        "omega_classes": r.omega_class_count,
        "q": r.q_size,
    });
    report.extra.push(("closed_under_gamma", json!(r.closed_under_gamma)));
    report.extra.push(("class_map", json!(r.class_map)));
    (i32::from(!r.bijective), report.render(cli.format))
}

fn cmd_demo_solenoid(p: usize, depth: usize) -> (i32, String) {
    if p < 3 || p % 2 == 0 {
        return (2, format!("error: p must be odd and >= 3, got {p}\n"));
    }
    let tower = solenoid(p, depth);
    let doc = format::tower_to_doc(&tower);
    let mut s = serde_json::to_string_pretty(&doc).unwrap();
    s.push('\n');
    (0, s)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    cli: &Cli,
    seed: u64,
    count: usize,
    depth: usize,
    max_carrier: usize,
    max_group_order: usize,
    mode: Mode,
) -> (i32, String) {
    let mode_name = match mode {
        Mode::None => "none",
        Mode::NotFree => "not-free",
        Mode::NuNotInjective => "nu-not-injective",
    };
    let config = json!({
        "seed": seed,
        "count": count,
        "depth": depth,
        "max_carrier": max_carrier,
        "max_group_order": max_group_order,
        "mode": mode_name,
    });
    let params = SearchParams {
        max_carrier,
        max_group_order,
        depth,
        count,
        mode: match mode {
            Mode::None => ViolationMode::None,
            Mode::NotFree => ViolationMode::NotFree,
            Mode::NuNotInjective => ViolationMode::NuNotInjective,
        },
    };
    let summary = search(seed, &params);
    let all_pass = summary.bijective_passes == summary.count
        && summary.stabilized_bijective == summary.stabilized_total;
    let mut report = Report::new("search", config);
    report.verdict = if all_pass { "pass" } else { "fail" }.into();
    report.sizes = json!({
        "towers": summary.count,
        "surjective_passes": summary.surjective_passes,
        "injective_passes": summary.injective_passes,
        "bijective_passes": summary.bijective_passes,
        "hypothesis_passes": summary.hypothesis_passes,
        "unique_transporter_passes": summary.unique_transporter_passes,
        "stabilized_bijective": summary.stabilized_bijective,
        "stabilized_total": summary.stabilized_total,
    });
    if let Some((index, failed)) = &summary.first_psi_failure {
        report.witnesses.push(json!({
            "kind": "PsiFailure",
            "tower_index": index,
            "depth": failed.depth,
            "domain": failed.domain_size,
            "codomain": failed.codomain_size,
        }));
    }
    (i32::from(!all_pass), report.render(cli.format))
}
