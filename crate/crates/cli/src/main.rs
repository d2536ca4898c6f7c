//! `bincum`: command-line access to transforms, hyperdeterminants, hidden
//! subset models, the orbit census and the space of cumulants.
//!
//! Every command prints JSON (or a plain polynomial dump) on stdout. Failures
//! print `{"error": {"kind": ..., "message": ...}}` and exit with 2 for
//! schema or validation errors and 3 for unsupported sizes.

mod io;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bincum::algebra::format_rational;
use bincum::classify::{classify, Filter};
use bincum::cumulant_space::{knspace_membership_exact, maximize_top_cumulant};
use bincum::fixtures::{parse_all, secant_generators_n4, PRINCIPAL_MINOR_GENERATORS_N4, SPLIT_MODEL_EXAMPLE_GENERATORS};
use bincum::hyperdet::{hyperdet_cumulants, hyperdet_eval};
use bincum::models::{
    csi_to_hsm, hsm_parametrization, hsm_to_csi, model_codimension, tangential_ideal_generators_n4, verify_vanishing,
    VerifyMode,
};
use bincum::transforms::{cumulant_ring, zgrade, Grading};
use bincum::{Coords, CsiSplitModel, Error, HiddenSubsetModel, Result, SparsePoly};

#[derive(Parser)]
#[command(name = "bincum", version, about = "Exact cumulant toolkit for binary tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum CoordsArg {
    Prob,
    Moment,
    Cumulant,
}

impl From<CoordsArg> for Coords {
    fn from(c: CoordsArg) -> Coords {
        match c {
            CoordsArg::Prob => Coords::Prob,
            CoordsArg::Moment => Coords::Moment,
            CoordsArg::Cumulant => Coords::Cumulant,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum FilterArg {
    None,
    Nondeg,
    A1a2,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a table between probability, moment and cumulant coordinates.
    Transform {
        input: PathBuf,
        /// Expected coordinates of the input (checked against its `coords` field).
        #[arg(long)]
        from: Option<CoordsArg>,
        #[arg(long)]
        to: CoordsArg,
    },
    /// Dump the hyperdeterminant in cumulants, or evaluate it on a table.
    Hyperdet {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eval: Option<PathBuf>,
    },
    /// Parametrization, codimension or ideal checks for a hidden subset model.
    Model {
        /// Comma-separated hidden subsets, e.g. `{},12,34,1234`.
        #[arg(long, conflicts_with = "csi", required_unless_present = "csi")]
        subsets: Option<String>,
        /// Split list, e.g. `1|234;2|134;3|124;4|123`.
        #[arg(long)]
        csi: Option<String>,
        /// Number of variables for `--subsets` (default: largest element).
        #[arg(long)]
        n: Option<usize>,
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Orbit census of hidden subset models under the cube group.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "a1a2")]
        filter: FilterArg,
        /// Range of the number of hidden subsets, e.g. `2..4`.
        #[arg(long)]
        m: Option<String>,
        /// Also compute the codimension of every representative.
        #[arg(long)]
        codim: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Maximize the top cumulant over the probability simplex.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Test whether a table is the cumulant table of a probability distribution.
    Member { input: PathBuf },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Print the cumulant parametrization.
    Param,
    /// Print the codimension.
    Codim {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check that a named generator list vanishes on the model.
    Verify {
        /// One of secant_n4, tangential_n4, principal_minors_n4, split_example, det4.
        fixture: String,
        /// Use this many sampled points instead of symbolic substitution.
        #[arg(long)]
        sampled: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "schema",
        Error::Unsupported(_) => "unsupported",
        Error::Constraint(_) => "constraint",
        Error::WrongCoords { .. } => "coords",
        Error::DimensionMismatch { .. } => "dimension",
        Error::UnknownVariable(_) | Error::UnboundVariable(_) => "variable",
        Error::RingMismatch(_) => "ring",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_m_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Parse(format!("`{s}` is not a range like 2..4"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => {
            let m: usize = s.trim().parse().map_err(|_| bad())?;
            Ok(m..=m)
        }
    }
}

fn resolve_model(subsets: Option<&str>, csi: Option<&str>, n: Option<usize>) -> Result<HiddenSubsetModel> {
    if let Some(src) = csi {
        return csi_to_hsm(&CsiSplitModel::parse(src)?);
    }
    let src = subsets.ok_or_else(|| Error::InvalidArgument("give --subsets or --csi".into()))?;
    let n = match n {
        Some(n) => n,
        None => src.chars().filter_map(|c| c.to_digit(10)).max().unwrap_or(1).max(1) as usize,
    };
    HiddenSubsetModel::parse(n, src)
}

fn fixture(name: &str) -> Result<(Vec<SparsePoly>, VerifyMode)> {
    let ring = cumulant_ring(4, 2);
    let symbolic = VerifyMode::Symbolic;
    match name {
        "secant_n4" => Ok((secant_generators_n4(&ring)?, symbolic)),
        "tangential_n4" => Ok((tangential_ideal_generators_n4(), symbolic)),
        "principal_minors_n4" => Ok((parse_all(&ring, &PRINCIPAL_MINOR_GENERATORS_N4)?, symbolic)),
        "split_example" => Ok((parse_all(&ring, &SPLIT_MODEL_EXAMPLE_GENERATORS)?, symbolic)),
        "det4" => Ok((vec![hyperdet_cumulants(4)?], VerifyMode::Sampled { trials: 200, seed: 1 })),
        other => Err(Error::InvalidArgument(format!("unknown fixture `{other}`"))),
    }
}

fn model_json(h: &HiddenSubsetModel) -> Value {
    json!({
        "n": h.n(),
        "subsets": h.to_string(),
        "csi": hsm_to_csi(h).to_string(),
    })
}

fn run(cli: Cli) -> Result<String> {
    let value = match cli.command {
        Command::Transform { input, from, to } => {
            let t = io::table_from_json(&read_json(&input)?)?;
            if let Some(from) = from {
                let from: Coords = from.into();
                if from != t.coords() {
                    return Err(Error::WrongCoords {
                        expected: from.to_string(),
                        found: t.coords().to_string(),
                    });
                }
            }
            io::table_to_json(&t.to_coords(to.into())?)
        }
        Command::Hyperdet { n, eval: Some(path) } => {
            let t = io::table_from_json(&read_json(&path)?)?;
            if t.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: t.n() });
            }
            json!({ "n": n, "value": format_rational(&hyperdet_eval(&t)?) })
        }
        Command::Hyperdet { n, eval: None } => {
            if !(2..=4).contains(&n) {
                return Err(Error::Unsupported(format!("hyperdeterminant for n = {n}; use 2, 3 or 4")));
            }
            let p = hyperdet_cumulants(n)?;
            let zdeg = match zgrade(&p)? {
                Grading::Homogeneous(d) => d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                Grading::Inhomogeneous { .. } => "inhomogeneous".to_string(),
            };
            let mut out = format!("terms: {}, zdeg: ({zdeg})\n", p.num_terms());
            for term in p.term_strings() {
                out.push_str(&term);
                out.push('\n');
            }
            return Ok(out);
        }
        Command::Model { subsets, csi, n, action } => {
            let h = resolve_model(subsets.as_deref(), csi.as_deref(), n)?;
            let mut report = model_json(&h);
            match action {
                ModelAction::Param => {
                    let p = hsm_parametrization(&h)?;
                    let cumulants: serde_json::Map<String, Value> = bincum::SubsetMask::full(h.n())
                        .subsets()
                        .skip(1)
                        .map(|s| (s.key(), Value::String(p.cumulant(s).to_string())))
                        .collect();
                    report["free_params"] = json!(p.free_params());
                    report["cumulants"] = Value::Object(cumulants);
                }
                ModelAction::Codim { seed } => {
                    report["codimension"] = json!(model_codimension(&h, seed)?);
                    report["seed"] = json!(seed);
                }
                ModelAction::Verify { fixture: name, sampled, seed } => {
                    let (gens, default_mode) = fixture(&name)?;
                    let mode = match sampled {
                        Some(trials) => VerifyMode::Sampled { trials, seed },
                        None => match default_mode {
                            VerifyMode::Sampled { trials, .. } => VerifyMode::Sampled { trials, seed },
                            m => m,
                        },
                    };
                    let param = hsm_parametrization(&h)?;
                    let verdicts = gens
                        .iter()
                        .map(|g| verify_vanishing(std::slice::from_ref(g), &param, mode))
                        .collect::<Result<Vec<bool>>>()?;
                    report["fixture"] = json!(name);
                    report["mode"] = match mode {
                        VerifyMode::Symbolic => json!("symbolic"),
                        VerifyMode::Sampled { trials, seed } => json!({ "sampled": trials, "seed": seed }),
                    };
                    report["generators"] = json!(gens.len());
                    report["all_zero"] = json!(verdicts.iter().all(|&v| v));
                    report["vanishing"] = json!(verdicts);
                }
            }
            report
        }
        Command::Classify { n, filter, m, codim, seed } => {
            let filter = match filter {
                FilterArg::None => Filter::None,
                FilterArg::Nondeg => Filter::Nondegenerate,
                FilterArg::A1a2 => Filter::A1A2,
            };
            let range = m.as_deref().map(parse_m_range).transpose()?;
            let mut census = classify(n, range, filter)?;
            if codim {
                census = census.with_codimensions(usize::MAX, seed)?;
            }
            io::census_to_json(&census)
        }
        Command::Optimize { n, starts, seed } => io::optimizer_to_json(&maximize_top_cumulant(n, starts, seed)?),
        Command::Member { input } => {
            let t = io::table_from_json(&read_json(&input)?)?;
            let k = t.to_coords(Coords::Cumulant)?;
            io::membership_to_json(&knspace_membership_exact(&k)?)
        }
    };
    Ok(serde_json::to_string_pretty(&value).expect("serializable") + "\n")
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let body = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
            emit(&(serde_json::to_string_pretty(&body).expect("serializable") + "\n"));
            ExitCode::from(if matches!(e, Error::Unsupported(_)) { 3 } else { 2 })
        }
    }
}
