//! `monogamy` command-line front end.

mod error;
mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monogamy::entropy::{self, EntropySpec};
use monogamy::measures::{self, MeasureKind, MeasureSpec};
use monogamy::monogamy::{self as audit, AlphaRange, AuditConfig, AuditRecord, WitnessOutcome};
use monogamy::quantum::{Bipartition, PureState, State};
use monogamy::roof::{self, OptimizerConfig, RoofG};
use monogamy::structure::{self, EPS_WITNESS};
use monogamy::tolerances::{self, Tolerances};
use serde::Serialize;
use serde_json::{json, Value};

use error::{CliError, CliResult};
use input::Source;

#[derive(Parser, Debug)]
#[command(name = "monogamy", version, about = "Entanglement measures, convex roofs and monogamy audits")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance overrides, e.g. `recon=1e-7,psd=1e-8`.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 10_000)]
    max_evals: usize,
    #[arg(long, default_value_t = 2)]
    n_extra: usize,
    #[arg(long)]
    n_members: Option<usize>,
    /// Relative improvement treated as stalled.
    #[arg(long, default_value_t = 1e-8)]
    opt_tol: f64,
}

impl OptimizerArgs {
    fn config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_evals: self.max_evals,
            n_extra: self.n_extra,
            n_members: self.n_members,
            tol: self.opt_tol,
            seed,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of a measure; mixed input goes through the convex roof.
    Measure {
        #[command(flatten)]
        source: Source,
        /// Cut such as `A|BC`; defaults to the first party against the rest.
        #[arg(long)]
        cut: Option<String>,
        #[arg(long, default_value = "eoe")]
        spec: String,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Convex roof with its certificate decomposition.
    Roof {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        cut: Option<String>,
        #[arg(long, default_value = "eoe")]
        spec: String,
        /// Function applied before averaging: id, square, pow:<p>, exp.
        #[arg(long, default_value = "id")]
        g: String,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Disentangling-gap audit of an ensemble, as JSON lines.
    Audit {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "eoe")]
        spec: String,
        /// Gap threshold; defaults to 1e-6 for pure and 1e-3 for mixed states.
        #[arg(long)]
        eps_gap: Option<f64>,
        /// Always optimize two-qubit marginals instead of using the closed form.
        #[arg(long)]
        no_exact: bool,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Smallest α with E^α(A|BC) ≥ E^α(AB) + E^α(AC) on a sample.
    Alpha {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "eoe")]
        spec: String,
        #[arg(long, default_value_t = 0.05)]
        alpha_min: f64,
        #[arg(long, default_value_t = 16.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        resolution: f64,
        #[arg(long)]
        no_exact: bool,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Three-qubit tangle residual τ(A|BC) − τ_AB − τ_AC.
    Ckw {
        #[command(flatten)]
        source: Source,
    },
    /// Factorization witness of a pure tripartite state.
    Witness {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = EPS_WITNESS)]
        eps: f64,
    },
    /// Randomized strict-concavity probe of an entropy or of a measure's h.
    Probe {
        /// Entropy such as vn, tsallis:2, renyi:0.5, linear, g:power:0.5.
        #[arg(long, conflicts_with = "measure")]
        entropy: Option<String>,
        /// Measure whose reduced-state function is probed.
        #[arg(long)]
        measure: Option<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Generate an ensemble as JSON lines of state records.
    Gen {
        #[command(flatten)]
        source: Source,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| usage(format!("{what} is randomized and needs --seed")))
}

fn parse_measure(text: &str) -> CliResult<MeasureSpec> {
    MeasureSpec::parse(text).map_err(|e| usage(e.to_string()))
}

fn parse_cut(state: &State, cut: &Option<String>) -> CliResult<Bipartition> {
    let sig = state.signature();
    Ok(match cut {
        Some(text) => Bipartition::parse(sig, text)?,
        None => Bipartition::first_vs_rest(sig)?,
    })
}

/// Output envelope: tool, version, command, configuration and seed.
fn envelope(command: &str, config: Value, seed: Option<u64>) -> Value {
    json!({
        "tool": "monogamy",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "tolerances": tolerances::global(),
        "config": config,
    })
}

fn with_result(mut env: Value, result: impl Serialize) -> Value {
    env["result"] = serde_json::to_value(result).expect("results serialize");
    env
}

struct Sink {
    writer: Box<dyn Write>,
    to_file: bool,
}

impl Sink {
    fn open(out: &Option<PathBuf>) -> CliResult<Self> {
        Ok(match out {
            Some(path) => Sink {
                writer: Box::new(BufWriter::new(
                    File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
                )),
                to_file: true,
            },
            None => Sink { writer: Box::new(BufWriter::new(io::stdout())), to_file: false },
        })
    }

    fn line(&mut self, value: &Value) -> CliResult<()> {
        serde_json::to_writer(&mut self.writer, value).map_err(|e| CliError::Io(e.to_string()))?;
        self.writer.write_all(b"\n")?;
        Ok(())
    }

    fn pretty(&mut self, value: &Value) -> CliResult<()> {
        serde_json::to_writer_pretty(&mut self.writer, value).map_err(|e| CliError::Io(e.to_string()))?;
        self.writer.write_all(b"\n")?;
        Ok(())
    }

    fn finish(mut self) -> CliResult<()> {
        self.writer.flush()?;
        Ok(())
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = &cli.tol {
        tolerances::set_global(Tolerances::DEFAULT.with_overrides(t)?);
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("cannot set up {n} threads: {e}")))?;
    }
    let seed = cli.seed;
    let mut sink = Sink::open(&cli.out)?;
    match &cli.command {
        Command::Measure { source, cut, spec, optimizer } => {
            let spec = parse_measure(spec)?;
            let (descriptor, state) = source.load_one(seed)?;
            let cut = parse_cut(&state, cut)?;
            let mut flags = Vec::new();
            let (method, value) = match (&state, spec.kind()) {
                (State::Pure(psi), _) => ("pure", measures::pure_measure(psi, &cut, &spec)?),
                (State::Mixed(rho), MeasureKind::Negativity) => ("negativity", measures::negativity(rho, &cut)?),
                (State::Mixed(rho), _) => {
                    let cfg = optimizer.config(require_seed(seed, "the convex roof")?);
                    let res = roof::roof_value(rho, &cut, &spec, &cfg)?;
                    if !res.converged {
                        flags.push("roof_not_converged");
                    }
                    ("roof", res.value)
                }
            };
            let config = json!({ "source": source, "descriptor": descriptor, "cut": cut.to_string(), "spec": spec, "optimizer": optimizer });
            let out = with_result(envelope("measure", config, seed), json!({ "value": value, "method": method, "flags": flags }));
            if sink.to_file {
                println!("{value}");
            }
            sink.pretty(&out)?;
        }
        Command::Roof { source, cut, spec, g, optimizer } => {
            let spec = parse_measure(spec)?;
            let g = RoofG::parse(g).map_err(|e| usage(e.to_string()))?;
            let (descriptor, state) = source.load_one(seed)?;
            let cut = parse_cut(&state, cut)?;
            let cfg = optimizer.config(require_seed(seed, "the convex roof")?);
            let res = roof::e_g_roof(&state.density(), &cut, &spec, g, &cfg)?;
            let mut flags = Vec::new();
            if !res.converged {
                flags.push("roof_not_converged");
            }
            let config = json!({ "source": source, "descriptor": descriptor, "cut": cut.to_string(), "spec": spec, "g": g, "optimizer": cfg });
            let mut out = with_result(envelope("roof", config, seed), &res);
            out["flags"] = json!(flags);
            sink.pretty(&out)?;
        }
        Command::Audit { source, spec, eps_gap, no_exact, optimizer } => {
            let spec = parse_measure(spec)?;
            let seed_value = require_seed(seed, "the audit")?;
            let seed = Some(seed_value);
            let states = source.load(seed)?;
            let cfg = AuditConfig {
                optimizer: optimizer.config(seed_value),
                eps_gap: *eps_gap,
                exact_two_qubit: !no_exact,
                eps_witness: EPS_WITNESS,
            };
            let config = json!({ "source": source, "ensemble": source.ensemble(seed)?, "spec": spec, "audit": cfg });
            let mut header = envelope("audit", config, seed);
            header["type"] = json!("header");
            sink.line(&header)?;
            let mut records = audit::audit_batch(&states, &spec, &cfg)?;
            for r in &mut records {
                r.seed = seed;
                let mut v = serde_json::to_value(&*r).expect("records serialize");
                v["type"] = json!("record");
                sink.line(&v)?;
            }
            let summary = AuditSummary::from_records(&records);
            let mut v = serde_json::to_value(&summary).expect("summary serializes");
            v["type"] = json!("summary");
            sink.line(&v)?;
            let table = summary.table();
            if sink.to_file {
                print!("{table}");
            } else {
                eprint!("{table}");
            }
        }
        Command::Alpha { source, spec, alpha_min, alpha_max, resolution, no_exact, optimizer } => {
            let spec = parse_measure(spec)?;
            let seed_value = require_seed(seed, "the α search")?;
            let seed = Some(seed_value);
            let states = source.load(seed)?;
            let cfg = AuditConfig {
                optimizer: optimizer.config(seed_value),
                exact_two_qubit: !no_exact,
                ..AuditConfig::default()
            };
            let range = AlphaRange { lower: *alpha_min, upper: *alpha_max, resolution: *resolution };
            let res = audit::alpha_search(&states, &spec, &cfg, range)?;
            let config = json!({ "source": source, "ensemble": source.ensemble(seed)?, "spec": spec, "audit": cfg, "range": range });
            sink.pretty(&with_result(envelope("alpha", config, seed), &res))?;
        }
        Command::Ckw { source } => {
            let states = source.load(seed)?;
            let mut results = Vec::new();
            for (descriptor, state) in &states {
                let psi = pure_input(state, "ckw")?;
                let r = audit::ckw_check(psi)?;
                results.push(json!({ "descriptor": descriptor, "tau_abc": r.tau_abc, "tau_ab": r.tau_ab, "tau_ac": r.tau_ac, "residual": r.residual }));
            }
            let min = results.iter().map(|r| r["residual"].as_f64().unwrap_or(f64::NAN)).fold(f64::INFINITY, f64::min);
            let config = json!({ "source": source });
            sink.pretty(&with_result(envelope("ckw", config, seed), json!({ "min_residual": min, "states": results })))?;
        }
        Command::Witness { source, eps } => {
            let (descriptor, state) = source.load_one(seed)?;
            let psi = pure_input(&state, "witness")?;
            let res = structure::witness_factorization(psi, *eps)?;
            let config = json!({ "source": source, "descriptor": descriptor, "eps": eps });
            sink.pretty(&with_result(envelope("witness", config, seed), &res))?;
        }
        Command::Probe { entropy: ent, measure, dim, trials } => {
            let seed = require_seed(seed, "the concavity probe")?;
            let report = match (ent, measure) {
                (Some(e), None) => {
                    let spec = EntropySpec::parse(e).map_err(|e| usage(e.to_string()))?;
                    let report = entropy::concavity_probe(&spec, *dim, *trials, seed)?;
                    json!({ "report": report, "strictly_concave": report.is_strict(), "flagged_strictly_concave": spec.strictly_concave() })
                }
                (None, Some(m)) => {
                    let spec = parse_measure(m)?;
                    let report = measures::h_concavity_probe(&spec, *dim, *trials, seed)?;
                    json!({ "report": report, "strictly_concave": report.is_strict(), "flagged_strictly_concave": spec.strictly_concave() })
                }
                _ => return Err(usage("give exactly one of --entropy or --measure")),
            };
            let config = json!({ "entropy": ent, "measure": measure, "dim": dim, "trials": trials });
            sink.pretty(&with_result(envelope("probe", config, Some(seed)), report))?;
        }
        Command::Gen { source } => {
            if source.file.is_some() {
                return Err(usage("gen takes an ensemble (--family), not a file"));
            }
            for (descriptor, state) in source.load(seed)? {
                let mut v = serde_json::to_value(state.to_record()).expect("records serialize");
                v["descriptor"] = json!(descriptor);
                sink.line(&v)?;
            }
        }
    }
    sink.finish()
}

fn pure_input<'a>(state: &'a State, command: &str) -> CliResult<&'a PureState> {
    match state {
        State::Pure(p) => Ok(p),
        State::Mixed(_) => Err(usage(format!("{command} needs a pure state"))),
    }
}

#[derive(Debug, Serialize)]
struct AuditSummary {
    count: usize,
    min_gap: f64,
    median_gap: f64,
    disentangled: usize,
    factored: usize,
    product_ac: usize,
    separable_ac_ppt: usize,
    no_witness: usize,
    flagged: usize,
}

impl AuditSummary {
    fn from_records(records: &[AuditRecord]) -> Self {
        let mut gaps: Vec<f64> = records.iter().map(|r| r.gap).collect();
        gaps.sort_by(f64::total_cmp);
        let median = match gaps.len() {
            0 => f64::NAN,
            n if n % 2 == 1 => gaps[n / 2],
            n => 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]),
        };
        let count_outcome = |o: WitnessOutcome| records.iter().filter(|r| r.witness_outcome == Some(o)).count();
        AuditSummary {
            count: records.len(),
            min_gap: gaps.first().copied().unwrap_or(f64::NAN),
            median_gap: median,
            disentangled: records.iter().filter(|r| r.disentangled).count(),
            factored: count_outcome(WitnessOutcome::Factored),
            product_ac: count_outcome(WitnessOutcome::ProductAc),
            separable_ac_ppt: count_outcome(WitnessOutcome::SeparableAcPpt),
            no_witness: count_outcome(WitnessOutcome::None),
            flagged: records.iter().filter(|r| !r.flags.is_empty()).count(),
        }
    }

    fn table(&self) -> String {
        let rows = [
            ("states", self.count.to_string()),
            ("min gap", format!("{:.3e}", self.min_gap)),
            ("median gap", format!("{:.3e}", self.median_gap)),
            ("disentangled", self.disentangled.to_string()),
            ("  factored", self.factored.to_string()),
            ("  product AC", self.product_ac.to_string()),
            ("  separable AC (PPT)", self.separable_ac_ppt.to_string()),
            ("  no witness", self.no_witness.to_string()),
            ("flagged records", self.flagged.to_string()),
        ];
        rows.iter().map(|(k, v)| format!("{k:<22}{v:>12}\n")).collect()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("monogamy: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
