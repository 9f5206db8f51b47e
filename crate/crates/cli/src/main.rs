//! `intdef`: build, inspect and verify diophantine definitions of valuation
//! rings from the command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intdef::diophdef::artifact::DefinitionArtifact;
use intdef::diophdef::{build_definition, decide, emit_formula, DefinitionConfig, IntegralityDefinition};
use intdef::harness::{agreement_sweep, perf_agreement_sweep, SweepReport};
use intdef::perfectclosure::{build_perf_definition, decide_perf, emit_perf_formula, PerfConfig, PerfDefinitionArtifact};
use intdef::{Error, FieldSpec, FunctionField, GlobalField, PerfectClosure, Rationals};

const USAGE: u8 = 1;
const VERIFICATION: u8 = 2;
const EXHAUSTED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "intdef", version, about = "Diophantine definitions of valuation rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the definition of R_p over F_q(t) or Q.
    Build(BuildArgs),
    /// Decide membership of an element in R_p.
    Decide(DecideArgs),
    /// Compare the definition against direct valuations on all elements of bounded height.
    Verify(VerifyArgs),
    /// Build the definition of the valuation ring over the perfect closure of F_q(t).
    PerfectBuild(PerfectBuildArgs),
    /// Decide membership over the perfect closure.
    PerfectDecide(DecideArgs),
    /// Sweep the perfect-closure definition over bounded levels and heights.
    PerfectVerify(PerfectVerifyArgs),
    /// Print the existential formula of a definition artifact.
    Emit(EmitArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// `F<q>t` for F_q(t), or `Q`.
    #[arg(long)]
    field: String,
    /// `finite:<monic irreducible>` or `prime:<odd prime>`.
    #[arg(long)]
    place: String,
    #[arg(long)]
    out: PathBuf,
    /// Height bound for the ramified algebra search.
    #[arg(long, default_value_t = DefinitionConfig::default().ram_bound)]
    ram_bound: u64,
    /// Largest admissible number of coset representatives.
    #[arg(long, default_value_t = DefinitionConfig::default().coset_cap)]
    coset_cap: u128,
}

#[derive(Args, Debug)]
struct PerfectBuildArgs {
    /// `F<q>t` with q odd.
    #[arg(long)]
    field: String,
    #[arg(long)]
    place: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = PerfConfig::default().ram_bound)]
    ram_bound: u64,
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long = "def")]
    def: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    element: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "def")]
    def: PathBuf,
    #[arg(long)]
    bound: u64,
    /// Report path; the report goes to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PerfectVerifyArgs {
    #[arg(long = "def")]
    def: PathBuf,
    #[arg(long)]
    levels: u32,
    #[arg(long)]
    bound: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmitArgs {
    #[arg(long = "def")]
    def: PathBuf,
    /// Print the formula tree as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchExhausted(_) | Error::CapExceeded(_) => EXHAUSTED,
            Error::Invariant(_) | Error::Artifact(_) => VERIFICATION,
            _ => USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Print to standard output, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(USAGE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::new(USAGE, format!("cannot write {}: {e}", path.display())))
}

enum Field {
    Fqt(FunctionField),
    Q,
}

fn parse_field(s: &str) -> std::result::Result<Field, Failure> {
    if s == "Q" {
        return Ok(Field::Q);
    }
    let q = s
        .strip_prefix('F')
        .and_then(|r| r.strip_suffix('t'))
        .and_then(|q| q.parse::<u64>().ok())
        .ok_or_else(|| Failure::new(USAGE, format!("unknown field {s:?}; expected F<q>t or Q")))?;
    Ok(Field::Fqt(FunctionField::new(q)?))
}

fn field_of(spec: &FieldSpec) -> std::result::Result<Field, Failure> {
    match spec {
        FieldSpec::Q => Ok(Field::Q),
        FieldSpec::FqT { q, .. } => Ok(Field::Fqt(FunctionField::new(*q)?)),
    }
}

fn build<F: GlobalField>(k: &F, a: &BuildArgs) -> Outcome {
    let place = k.parse_place(&a.place)?;
    let cfg = DefinitionConfig { ram_bound: a.ram_bound, coset_cap: a.coset_cap };
    let def = build_definition(k, &place, &cfg)?;
    write(&a.out, &DefinitionArtifact::from_definition(&def).to_json()?)?;
    let d = &def.copies[0];
    println!(
        "built R_{} with helpers {}, {}; H({}, {}), {} coset representatives per copy",
        def.target,
        def.helpers[0],
        def.helpers[1],
        k.format_elem(&d.a),
        k.format_elem(&d.b),
        d.coset_reps.len()
    );
    Ok(())
}

fn decide_with<F: GlobalField>(def: &IntegralityDefinition<F>, element: &str) -> Outcome {
    let k = &def.field;
    let x = k.parse_elem(element)?;
    let tr = decide(def, &x)?;
    println!("element: {}", k.format_elem(&tr.x));
    println!("verdict: {}", tr.verdict);
    println!("y: {}", k.format_elem(&tr.y));
    println!("z: {}", k.format_elem(&tr.z));
    for (name, d, v) in [("first", &def.copies[0], &tr.first), ("second", &def.copies[1], &tr.second)] {
        let rep = v.rep.map(|i| k.format_elem(&d.coset_reps[i])).unwrap_or_else(|| "none".into());
        println!("{name}: R_{} ∩ R_{} holds={} rep={rep} evaluated={}", d.place, d.helper, v.holds, v.evaluated);
    }
    Ok(())
}

fn report(r: &SweepReport, out: Option<&Path>) -> Outcome {
    let json = r.to_json()?;
    match out {
        Some(p) => write(p, &json)?,
        None => emit(&json),
    }
    eprintln!(
        "tested {}, agreed {}, disagreed {} in {:.2}s",
        r.tested,
        r.agreed,
        r.disagreed,
        r.wall_time.as_secs_f64()
    );
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::new(VERIFICATION, format!("{} disagreements", r.disagreed)))
    }
}

fn load_definition(path: &Path) -> std::result::Result<(DefinitionArtifact, Field), Failure> {
    let art = DefinitionArtifact::from_json(&read(path)?)?;
    let field = field_of(&art.field)?;
    Ok((art, field))
}

fn load_perf(path: &Path) -> std::result::Result<intdef::perfectclosure::PerfIntegralityDefinition, Failure> {
    let art = PerfDefinitionArtifact::from_json(&read(path)?)?;
    let FieldSpec::FqT { q, .. } = art.field else {
        return Err(Failure::new(USAGE, "perfect-closure artifacts live over F_q(t)"));
    };
    let k = PerfectClosure::new(q)?;
    Ok(art.load(&k)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build(a) => match parse_field(&a.field)? {
            Field::Fqt(k) => build(&k, &a),
            Field::Q => build(&Rationals, &a),
        },
        Command::Decide(a) => match load_definition(&a.def)? {
            (art, Field::Fqt(k)) => decide_with(&art.load(&k)?, &a.element),
            (art, Field::Q) => decide_with(&art.load(&Rationals)?, &a.element),
        },
        Command::Verify(a) => {
            let r = match load_definition(&a.def)? {
                (art, Field::Fqt(k)) => agreement_sweep(&art.load(&k)?, a.bound),
                (art, Field::Q) => agreement_sweep(&art.load(&Rationals)?, a.bound),
            };
            report(&r, a.out.as_deref())
        }
        Command::PerfectBuild(a) => {
            let Field::Fqt(base) = parse_field(&a.field)? else {
                return Err(Failure::new(USAGE, "the perfect closure needs F<q>t"));
            };
            let k = PerfectClosure::over(base)?;
            let place = k.base().parse_place(&a.place)?;
            let def = build_perf_definition(&k, &place, &PerfConfig { ram_bound: a.ram_bound })?;
            write(&a.out, &PerfDefinitionArtifact::from_definition(&def).to_json()?)?;
            println!(
                "built O_{} over the perfect closure with helpers {}, {}; {} shifts per copy",
                def.target,
                def.helpers[0],
                def.helpers[1],
                def.copies[0].alphas.len()
            );
            Ok(())
        }
        Command::PerfectDecide(a) => {
            let def = load_perf(&a.def)?;
            let k = &def.closure;
            let x = k.parse_elem(&a.element)?;
            let tr = decide_perf(&def, &x)?;
            println!("element: {}", k.format_elem(&tr.x));
            println!("verdict: {}", tr.verdict);
            println!("y: {}", k.format_elem(&tr.y));
            println!("z: {}", k.format_elem(&tr.z));
            for (name, d, v) in [("first", &def.copies[0], &tr.first), ("second", &def.copies[1], &tr.second)] {
                let shift = v.shift.map_or("none".to_string(), |(i, j)| format!("({i}, {j})"));
                println!("{name}: O_{} ∩ O_{} holds={} shift={shift} evaluated={}", d.place, d.helper, v.holds, v.evaluated);
            }
            Ok(())
        }
        Command::PerfectVerify(a) => {
            let def = load_perf(&a.def)?;
            report(&perf_agreement_sweep(&def, a.levels, a.bound), a.out.as_deref())
        }
        Command::Emit(a) => {
            let text = read(&a.def)?;
            let formula = if let Ok(art) = DefinitionArtifact::from_json(&text) {
                match field_of(&art.field)? {
                    Field::Fqt(k) => emit_formula(&art.load(&k)?),
                    Field::Q => emit_formula(&art.load(&Rationals)?),
                }
            } else {
                emit_perf_formula(&load_perf(&a.def)?)
            };
            if a.json {
                emit(&formula.to_json()?);
            } else {
                emit(&formula.to_string());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
