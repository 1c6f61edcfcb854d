//! Command-line front door: parse inputs, dispatch to the library, emit
//! JSON. Exit codes: 0 success, 2 parse/usage error, 3 invalid input,
//! 4 internal assertion failure (the combinatorial/oracle tripwire).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bandbrick::brauer::{bga_presentation, decide_tau_finite_bg, parse_brauer_graph, BrauerError};
use bandbrick::matrix::{parse_scalar, scalar_from_int, Scalar};
use bandbrick::quiver::{parse_presentation, Presentation};
use bandbrick::rep::{
    build_band_module, build_string_module, hom_dim, is_brick_oracle, Representation,
};
use bandbrick::tau::{
    brick_family_bt1, brick_family_bt2, decide_tau_finite_sb, default_band_bound,
    verify_decision_with_oracle, TauError,
};
use bandbrick::words::{
    band_endo_pairs, enumerate_bands, graph_map_pairs, is_band_brick, Band, HomPair, Host,
    StringWord, WordsError,
};

#[derive(Parser)]
#[command(
    name = "bandbrick",
    version,
    about = "String and band combinatorics for quiver algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a presentation: admissibility and special biserial report
    Check { file: PathBuf },
    /// Enumerate canonical bands up to a length bound
    Bands {
        file: PathBuf,
        #[arg(long = "max-len")]
        max_len: usize,
    },
    /// Brick verdict for a band module, with endomorphism witnesses
    Brick {
        file: PathBuf,
        #[arg(long)]
        band: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Hom dimension between two modules ("WORD" or "band:WORD:λ:n")
    Hom {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Tau-tilting finiteness decision for a special biserial presentation
    TauFinite {
        file: PathBuf,
        #[arg(long = "max-band-len")]
        max_band_len: Option<usize>,
        #[arg(long)]
        oracle: bool,
    },
    /// Tau-tilting finiteness of a Brauer graph via the cycle criterion
    Brauer {
        file: PathBuf,
        #[arg(long = "emit-presentation")]
        emit_presentation: Option<PathBuf>,
    },
    /// Brick family evidence tables for a brick band
    Evidence {
        file: PathBuf,
        #[arg(long)]
        band: String,
        #[arg(long)]
        bt1: Option<usize>,
        #[arg(long)]
        bt2: Option<String>,
    },
}

enum CliError {
    /// Malformed input document (exit 2).
    Parse(String),
    /// Well-formed input that fails a semantic precondition (exit 3).
    Invalid(String),
    /// Cross-validation tripwire or broken internal invariant (exit 4).
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Invalid(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<WordsError> for CliError {
    fn from(e: WordsError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<TauError> for CliError {
    fn from(e: TauError) -> Self {
        match e {
            TauError::OracleDisagreement { .. } => CliError::Internal(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<bandbrick::rep::RepError> for CliError {
    fn from(e: bandbrick::rep::RepError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = read_file(path)?;
    parse_presentation(&text).map_err(|e| CliError::Parse(e.to_string()))
}

fn pair_json(p: &HomPair) -> serde_json::Value {
    json!({
        "word": p.word.to_string(),
        "quotient_start": p.quotient.start,
        "submodule_start": p.submodule.start,
        "length": p.word.len(),
        "inverted": p.inverted,
    })
}

fn cmd_check(file: &Path) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let adm = pres.check_admissible();
    let sb = pres.is_special_biserial();
    let value = json!({
        "vertices": pres.quiver.vertices.len(),
        "arrows": pres.quiver.arrows.len(),
        "relations": pres.relations.len(),
        "nilpotency_bound": adm.bound,
        "admissible": adm.is_admissible(),
        "violations": adm.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "special_biserial": sb.is_special_biserial(),
        "special_biserial_violation": sb.violation.map(|v| v.to_string()),
    });
    Ok(value.to_string())
}

fn cmd_bands(file: &Path, max_len: usize) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let bands: Vec<String> = enumerate_bands(&pres, max_len)
        .iter()
        .map(ToString::to_string)
        .collect();
    Ok(json!({"max_len": max_len, "count": bands.len(), "bands": bands}).to_string())
}

fn cmd_brick(file: &Path, band: &str, oracle: bool) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let band = Band::parse(&pres, band)?;
    let pairs = band_endo_pairs(&pres, &band);
    let brick = pairs.is_empty();
    let mut verified_by = vec!["combinatorial".to_string()];
    if oracle {
        let module = build_band_module(&pres, &band, &scalar_from_int(1), 1)?;
        let oracle_brick = is_brick_oracle(&pres, &module)?;
        if oracle_brick != brick {
            return Err(CliError::Internal(format!(
                "brick checkers disagree on `{band}`: combinatorial={brick}, oracle={oracle_brick}"
            )));
        }
        verified_by.push("oracle".to_string());
    }
    Ok(json!({
        "band": band.canonical().to_string(),
        "brick": brick,
        "endo_pairs": pairs.iter().map(pair_json).collect::<Vec<_>>(),
        "verified_by": verified_by,
    })
    .to_string())
}

enum ModuleSpec {
    Str(StringWord),
    Band {
        band: Band,
        lambda: Scalar,
        mult: usize,
    },
}

impl ModuleSpec {
    fn parse(pres: &Presentation, text: &str) -> Result<ModuleSpec, CliError> {
        if let Some(rest) = text.strip_prefix("band:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::Invalid(format!(
                    "band spec must be band:WORD:lambda:mult, got `{text}`"
                )));
            }
            let band = Band::parse(pres, parts[0])?;
            let lambda = parse_scalar(parts[1])
                .ok_or_else(|| CliError::Invalid(format!("invalid lambda `{}`", parts[1])))?;
            let mult: usize = parts[2]
                .parse()
                .map_err(|_| CliError::Invalid(format!("invalid multiplicity `{}`", parts[2])))?;
            Ok(ModuleSpec::Band { band, lambda, mult })
        } else {
            Ok(ModuleSpec::Str(StringWord::parse(pres, text)?))
        }
    }

    fn build(&self, pres: &Presentation) -> Result<Representation, CliError> {
        match self {
            ModuleSpec::Str(w) => Ok(build_string_module(pres, w)),
            ModuleSpec::Band { band, lambda, mult } => {
                Ok(build_band_module(pres, band, lambda, *mult)?)
            }
        }
    }
}

fn cmd_hom(file: &Path, source: &str, target: &str, oracle: bool) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let src = ModuleSpec::parse(&pres, source)?;
    let tgt = ModuleSpec::parse(&pres, target)?;

    // combinatorial count when the graph-map basis applies at multiplicity one
    let combinatorial: Option<usize> = match (&src, &tgt) {
        (ModuleSpec::Str(v), ModuleSpec::Str(w)) => {
            Some(graph_map_pairs(&pres, Host::Finite(v.walk()), Host::Finite(w.walk()))?.len())
        }
        (ModuleSpec::Str(v), ModuleSpec::Band { band, mult: 1, .. }) => {
            Some(graph_map_pairs(&pres, Host::Finite(v.walk()), Host::Band(band))?.len())
        }
        (ModuleSpec::Band { band, mult: 1, .. }, ModuleSpec::Str(w)) => {
            Some(graph_map_pairs(&pres, Host::Band(band), Host::Finite(w.walk()))?.len())
        }
        (
            ModuleSpec::Band {
                band: b,
                lambda: l,
                mult: 1,
            },
            ModuleSpec::Band {
                band: c,
                lambda: m,
                mult: 1,
            },
        ) => {
            if b.canonical() == c.canonical() {
                if b.letters() == c.letters() && l == m {
                    Some(1 + band_endo_pairs(&pres, b).len())
                } else {
                    None
                }
            } else {
                Some(graph_map_pairs(&pres, Host::Band(b), Host::Band(c))?.len())
            }
        }
        _ => None,
    };

    let mut computed_by: Vec<String> = Vec::new();
    let dimension = match combinatorial {
        Some(count) => {
            computed_by.push("combinatorial".into());
            if oracle {
                let a = src.build(&pres)?;
                let b = tgt.build(&pres)?;
                let od = hom_dim(&pres, &a, &b)?;
                if od != count {
                    return Err(CliError::Internal(format!(
                        "hom dimension disagreement: combinatorial={count}, oracle={od}"
                    )));
                }
                computed_by.push("oracle".into());
            }
            count
        }
        None => {
            let a = src.build(&pres)?;
            let b = tgt.build(&pres)?;
            computed_by.push("oracle".into());
            hom_dim(&pres, &a, &b)?
        }
    };
    Ok(json!({
        "source": source,
        "target": target,
        "dimension": dimension,
        "computed_by": computed_by,
    })
    .to_string())
}

fn cmd_tau_finite(
    file: &Path,
    max_band_len: Option<usize>,
    oracle: bool,
) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let bound = max_band_len.unwrap_or_else(|| default_band_bound(&pres));
    let mut decision = decide_tau_finite_sb(&pres, bound)?;
    if oracle {
        verify_decision_with_oracle(&pres, &mut decision)?;
    }
    Ok(decision.to_json())
}

fn cmd_brauer(file: &Path, emit: Option<&Path>) -> Result<String, CliError> {
    let text = read_file(file)?;
    let graph = parse_brauer_graph(&text).map_err(|e| match e {
        BrauerError::BadWitness(msg) => CliError::Internal(msg),
        other => CliError::Parse(other.to_string()),
    })?;
    let decision = decide_tau_finite_bg(&graph).map_err(|e| CliError::Invalid(e.to_string()))?;
    if let Some(path) = emit {
        let pres = bga_presentation(&graph);
        fs::write(path, pres.to_dsl())
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(decision.to_json())
}

fn cmd_evidence(
    file: &Path,
    band: &str,
    bt1: Option<usize>,
    bt2: Option<&str>,
) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let band = Band::parse(&pres, band)?;
    if !is_band_brick(&pres, &band) {
        return Err(CliError::Invalid(format!(
            "band `{band}` is not a brick band"
        )));
    }
    let mut out = serde_json::Map::new();
    out.insert("band".into(), json!(band.canonical().to_string()));
    if let Some(k) = bt1 {
        let family = brick_family_bt1(&pres, &band, k)?;
        let powers: Vec<serde_json::Value> = family
            .iter()
            .map(|s| json!({"string": s.to_string(), "dimension": s.len() + 1}))
            .collect();
        out.insert(
            "bt1".into(),
            json!({"count": powers.len(), "powers": powers}),
        );
    }
    if let Some(spec) = bt2 {
        let lambdas: Vec<Scalar> = spec
            .split(',')
            .map(|s| {
                parse_scalar(s).ok_or_else(|| CliError::Invalid(format!("invalid lambda `{s}`")))
            })
            .collect::<Result<_, _>>()?;
        let table = brick_family_bt2(&pres, &band, &lambdas)?;
        out.insert(
            "bt2".into(),
            serde_json::to_value(&table).map_err(|e| CliError::Internal(e.to_string()))?,
        );
    }
    Ok(serde_json::Value::Object(out).to_string())
}

fn dispatch(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Check { file } => cmd_check(file),
        Command::Bands { file, max_len } => cmd_bands(file, *max_len),
        Command::Brick { file, band, oracle } => cmd_brick(file, band, *oracle),
        Command::Hom {
            file,
            source,
            target,
            oracle,
        } => cmd_hom(file, source, target, *oracle),
        Command::TauFinite {
            file,
            max_band_len,
            oracle,
        } => cmd_tau_finite(file, *max_band_len, *oracle),
        Command::Brauer {
            file,
            emit_presentation,
        } => cmd_brauer(file, emit_presentation.as_deref()),
        Command::Evidence {
            file,
            band,
            bt1,
            bt2,
        } => cmd_evidence(file, band, *bt1, bt2.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // assertion failures are reported once, through the exit-4 path
    std::panic::set_hook(Box::new(|_| {}));
    let outcome = std::panic::catch_unwind(|| dispatch(&cli.command));
    match outcome {
        Ok(Ok(output)) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Ok(Err(err)) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("no detail");
            eprintln!("error: internal assertion failure: {detail}");
            ExitCode::from(4)
        }
    }
}
