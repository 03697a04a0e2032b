//! `qsa`: JSON in, JSON out front end for the qsa-core toolkit.
//!
//! Exit codes: 0 on success, 2 when a module reports a domain error (the
//! report then carries an `"error"` field with the error name), 1 on I/O,
//! usage or schema errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qsa_core::acceptance::{self, Config};
use qsa_core::binomial::{build_tree, oracle_price, superhedge_price};
use qsa_core::bipolar::{bipolar_membership, check_bs_equivalence};
use qsa_core::classifier::{classify, classify_preset, explain, SymbolicDescriptor, PRESETS};
use qsa_core::io;
use qsa_core::measure::MeasureFamily;
use qsa_core::rational::Extended;
use qsa_core::risk::{
    acceptance_set, auto_dual_grid, conjugate, dirac_grid, member_grid, rho, simplex_grid, verify_representation,
    RiskMeasureSpec, Value as RiskValue,
};
use qsa_core::support::{
    aggregate, disjoint_supported_alternative, ess_sup, order_support, verify_support_with, SupportMode,
    EXHAUSTIVE_LIMIT,
};
use qsa_core::{Error, Measure};

#[derive(Parser)]
#[command(name = "qsa", version, about = "Quasi-sure analysis on finite models")]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON (the default; accepted for explicitness).
    #[arg(long, global = true)]
    json: bool,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a model descriptor or a named preset.
    Classify {
        descriptor: Option<PathBuf>,
        #[arg(long, conflicts_with = "descriptor")]
        preset: Option<String>,
        /// Add a human-readable derivation to the report.
        #[arg(long)]
        explain: bool,
    },
    /// Order support of a measure, verified in both modes.
    Support {
        model: PathBuf,
        /// Member of the model whose support is computed.
        #[arg(long)]
        measure: String,
        /// Family defining the polar sets (defaults to the model itself).
        #[arg(long)]
        family: Option<PathBuf>,
        /// Candidate support (JSON array of atoms) to verify instead.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Disjoint supported alternative of a model.
    Alternative { model: PathBuf },
    /// Glue a per-member assignment into one random variable.
    Aggregate { model: PathBuf, assignment: PathBuf },
    /// Quasi-sure essential supremum of a list of random variables.
    Esssup { model: PathBuf, variables: PathBuf },
    /// Bipolar membership and the direct/bipolar comparison.
    Bipolar {
        model: PathBuf,
        set: PathBuf,
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Risk values and the dual representation check.
    Risk {
        spec: PathBuf,
        model: PathBuf,
        #[arg(long)]
        probes: Option<PathBuf>,
        /// Dual grid: dirac, member, simplex:N or auto:N.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Superhedging price on a robust binomial tree.
    Price {
        tree: PathBuf,
        /// call:K, put:K, digital:K or identity.
        #[arg(long, conflicts_with = "payoff_file")]
        payoff: Option<String>,
        /// Explicit payoff as {leaf: "p/q"}.
        #[arg(long)]
        payoff_file: Option<PathBuf>,
        /// Also compute the independent oracle price.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Comma-separated groups or criterion numbers.
        #[arg(long)]
        filter: Option<String>,
        /// JSON object of preset descriptors replacing the built-in ones.
        #[arg(long)]
        presets: Option<PathBuf>,
    },
}

enum Failure {
    Domain(Error),
    Input(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_schema() {
            Failure::Input(e.name().to_string(), e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type Outcome = Result<(Value, ExitCode), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input("Io".into(), format!("{}: {e}", path.display())))?;
    io::parse_json(&text).map_err(|e| Failure::Input(e.name().into(), format!("{}: {e}", path.display())))
}

fn read_model(path: &Path) -> Result<MeasureFamily, Failure> {
    Ok(io::parse_model(&read_json(path)?)?)
}

fn ok(v: Value) -> Outcome {
    Ok((v, ExitCode::SUCCESS))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Classify { descriptor, preset, explain: with_text } => {
            let report = match (descriptor, preset) {
                (_, Some(name)) => classify_preset(&name)?,
                (Some(path), None) => classify(&io::parse_descriptor(&read_json(&path)?)?)?,
                (None, None) => {
                    return Err(Failure::Input(
                        "Usage".into(),
                        format!("give a descriptor file or --preset (one of {})", PRESETS.join(", ")),
                    ))
                }
            };
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if with_text {
                v["explanation"] = json!(explain(&report));
            }
            ok(v)
        }
        Command::Support { model, measure, family, candidate } => {
            let source = read_model(&model)?;
            let mu = source.member(&measure)?.clone();
            let fam = match family {
                Some(p) => read_model(&p)?,
                None => source,
            };
            let mu = Measure::new(fam.space().clone(), mu.weights().to_vec()).map_err(|_| Failure::Domain(Error::SpaceMismatch))?;
            if fam.space().atoms() != mu.space().atoms() {
                return Err(Failure::Domain(Error::SpaceMismatch));
            }
            let canonical = order_support(&fam, &mu)?;
            let s = match candidate {
                Some(p) => io::parse_event(fam.space(), &read_json(&p)?)?,
                None => canonical.clone(),
            };
            let space = fam.space();
            let mut v = json!({
                "measure": measure,
                "support": io::event_json(space, &canonical),
                "checked": io::event_json(space, &s),
                "atomwise": io::support_check_json(space, &verify_support_with(&fam, &mu, &s, SupportMode::Atomwise)?),
            });
            if space.len() <= EXHAUSTIVE_LIMIT {
                v["exhaustive"] =
                    io::support_check_json(space, &verify_support_with(&fam, &mu, &s, SupportMode::Exhaustive)?);
            }
            ok(v)
        }
        Command::Alternative { model } => {
            let f = read_model(&model)?;
            ok(io::alternative_json(&disjoint_supported_alternative(&f)?))
        }
        Command::Aggregate { model, assignment } => {
            let f = read_model(&model)?;
            let a = io::parse_assignment(f.space(), &read_json(&assignment)?)?;
            ok(json!({ "aggregate": io::rv_json(&aggregate(&f, &a)?) }))
        }
        Command::Esssup { model, variables } => {
            let f = read_model(&model)?;
            let xs = io::parse_rv_list(f.space(), &read_json(&variables)?)?;
            ok(json!({ "ess_sup": io::rv_json(&ess_sup(&f, &xs)?) }))
        }
        Command::Bipolar { model, set, probes } => {
            let f = read_model(&model)?;
            let c = io::parse_generators(f.space(), &read_json(&set)?)?;
            let probes = match probes {
                Some(p) => io::parse_rv_list(f.space(), &read_json(&p)?)?,
                None => Vec::new(),
            };
            let report = check_bs_equivalence(&f, &c, &probes)?;
            let memberships = probes
                .iter()
                .map(|x| {
                    let x = x.canonical(&f);
                    let mut m = io::membership_json(&bipolar_membership(&f, &c, &x)?);
                    m["probe"] = io::rv_json(&x);
                    m["in_set"] = json!(c.contains(&f, &x)?);
                    Ok(m)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            ok(json!({ "equivalence": io::bs_report_json(&report), "probes": memberships }))
        }
        Command::Risk { spec, model, probes, grid } => risk(&spec, &model, probes.as_deref(), grid.as_deref()),
        Command::Price { tree, payoff, payoff_file, oracle } => {
            let spec = io::parse_tree_spec(&read_json(&tree)?)?;
            let t = build_tree(&spec)?;
            let payoff = match (payoff, payoff_file) {
                (Some(s), _) => io::parse_payoff(&s)?,
                (None, Some(p)) => io::parse_payoff_map(&read_json(&p)?)?,
                (None, None) => return Err(Failure::Input("Usage".into(), "give --payoff or --payoff-file".into())),
            };
            let r = superhedge_price(&t, &payoff)?;
            let mut v = io::superhedge_json(&t, &r);
            if oracle {
                v["oracle"] = io::rational_json(&oracle_price(&t, &payoff)?);
            }
            ok(v)
        }
        Command::Selftest { filter, presets } => selftest(filter, presets.as_deref()),
    }
}

fn risk(spec_path: &Path, model_path: &Path, probes: Option<&Path>, grid: Option<&str>) -> Outcome {
    let f = read_model(model_path)?;
    let spec = io::parse_risk_spec(f.space(), &read_json(spec_path)?)?;
    spec.validate(&f)?;
    let probes = match probes {
        Some(p) => io::parse_rv_list(f.space(), &read_json(p)?)?,
        None => f.space().atoms().iter().map(|a| {
            qsa_core::QsRandomVariable::indicator(f.space().clone(), &f.space().event([a]).expect("own atom"))
        }).collect(),
    };
    let default_grid = match &spec {
        RiskMeasureSpec::WorstCase => "dirac",
        RiskMeasureSpec::ScenarioPenalty { .. } => "member",
        RiskMeasureSpec::Entropic { .. } => "simplex:16",
        RiskMeasureSpec::AcceptanceGenerated { .. } => "auto:4",
    };
    let grid_name = grid.unwrap_or(default_grid);
    let den = |s: &str| -> Result<u32, Failure> {
        s.parse::<u32>()
            .ok()
            .filter(|d| *d > 0)
            .ok_or_else(|| Failure::Input("Parse".into(), format!("invalid grid `{grid_name}`")))
    };
    let dual = match grid_name.split_once(':') {
        None if grid_name == "dirac" => dirac_grid(&f),
        None if grid_name == "member" => member_grid(&f),
        Some(("simplex", d)) => simplex_grid(&f, den(d)?),
        Some(("auto", d)) => auto_dual_grid(&f, den(d)?),
        _ => return Err(Failure::Input("Parse".into(), format!("invalid grid `{grid_name}`"))),
    };
    let report = verify_representation(&spec, &f, &probes, &dual)?;
    let penalties = dual.iter().map(|q| conjugate(&spec, &f, q)).collect::<Result<Vec<_>, _>>()?;
    let accept = if spec.is_exact() { Some(acceptance_set(&spec, &f)?) } else { None };
    let mut rows = Vec::new();
    for x in &probes {
        let value = rho(&spec, &f, x)?;
        // Best dual grid measure for this probe.
        let mut best: Option<(usize, f64)> = None;
        for (k, (q, a)) in dual.iter().zip(&penalties).enumerate() {
            if a.is_infinite() {
                continue;
            }
            let score = match (a, q.integrate(x)?) {
                (RiskValue::Exact(Extended::Finite(a)), e) => qsa_core::rational::to_f64(&(e - a)),
                (a, e) => qsa_core::rational::to_f64(&e) - a.to_f64(),
            };
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((k, score));
            }
        }
        let mut row = json!({ "probe": io::rv_json(x), "rho": io::risk_value_json(&value) });
        if let Some((k, _)) = best {
            row["certificate"] = json!({
                "measure": io::measure_json(&dual[k]),
                "penalty": io::risk_value_json(&penalties[k]),
            });
        }
        if let Some(a) = &accept {
            row["recovered"] = io::rational_json(&a.recover(x)?);
        }
        rows.push(row);
    }
    ok(json!({
        "kind": spec.kind(),
        "grid": grid_name,
        "probes": rows,
        "representation": io::representation_json(&report),
    }))
}

fn selftest(filter: Option<String>, presets: Option<&Path>) -> Outcome {
    if let Some(f) = &filter {
        let groups = acceptance::groups();
        for part in f.split(',').map(str::trim) {
            let numeric = part.parse::<u8>().is_ok_and(|n| (1..=10).contains(&n));
            if !numeric && !groups.contains(&part) {
                return Err(Failure::Input(
                    "Usage".into(),
                    format!("unknown filter `{part}`; groups are {}", groups.join(", ")),
                ));
            }
        }
    }
    let presets = match presets {
        None => None,
        Some(p) => {
            let v = read_json(p)?;
            let map: BTreeMap<String, SymbolicDescriptor> = serde_json::from_value(v)
                .map_err(|e| Failure::Input("Parse".into(), format!("{}: {e}", p.display())))?;
            Some(map)
        }
    };
    let outcomes = acceptance::run(&Config { filter, presets });
    let mut all = true;
    let rows: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            eprintln!("{o}");
            all &= o.passed;
            json!({
                "criterion": o.id,
                "group": o.group,
                "title": o.title,
                "passed": o.passed,
                "detail": o.detail,
            })
        })
        .collect();
    let code = if all { ExitCode::SUCCESS } else { ExitCode::from(2) };
    Ok((json!({ "passed": all, "criteria": rows }), code))
}

fn emit(v: &Value, out: &OutputArgs) -> Result<(), String> {
    let mut text = io::to_string(v, out.pretty);
    text.push('\n');
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = match run(cli.command) {
        Ok(r) => r,
        Err(Failure::Domain(e)) => (io::error_json(&e), ExitCode::from(2)),
        Err(Failure::Input(name, message)) => {
            eprintln!("qsa: {message}");
            (json!({ "error": name, "message": message }), ExitCode::from(1))
        }
    };
    match emit(&report, &cli.out) {
        Ok(()) => code,
        Err(msg) => {
            eprintln!("qsa: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_errors_map_to_input_failures() {
        assert!(matches!(Failure::from(Error::Parse("x".into())), Failure::Input(..)));
        assert!(matches!(Failure::from(Error::EmptyFamily), Failure::Domain(_)));
    }

    #[test]
    fn cli_definition_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn descriptor_variants_are_constructible() {
        let d = qsa_core::classifier::preset("innovation").unwrap();
        assert!(classify(&qsa_core::classifier::ModelDescriptor::Symbolic(d)).is_ok());
    }
}
