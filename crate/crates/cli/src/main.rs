use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use envelope::contract::{contract_algebra, contracted_su3, ContractionSpec};
use envelope::lie::LieAlgebra;
use envelope::realize::{classical_env, ideal_member, required_degree, ConstraintIdeal, Membership, PhaseElement};
use envelope::suite::{run_suite, Registry, RunOptions};
use envelope::{su3, Algebra, EAElement, EnvKind, ExprEnv};
use serde_json::json;

#[derive(Parser)]
#[command(name = "envelope", version, about = "Exact computation in universal enveloping algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Structure constants as JSON (default: built-in su3).
    #[arg(long, global = true, value_name = "FILE.json")]
    algebra: Option<PathBuf>,
    /// Named elements to load: standard, appendixA or contracted.
    #[arg(long, global = true)]
    env: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Constraint ideal for classical brackets.
    #[arg(long, global = true, value_enum, default_value_t = IdealArg::None)]
    ideal: IdealArg,
    /// Accept an algebra file without verifying the Jacobi identity.
    #[arg(long, global = true)]
    no_jacobi_check: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdealArg {
    Sphere,
    #[value(name = "sphere+momentum")]
    SphereMomentum,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// PBW normal form of an expression.
    Nf {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Normal form of the commutator [A, B].
    Comm { a: String, b: String },
    /// Poisson bracket {A, B} in the classical realization.
    Pb { a: String, b: String },
    /// Run registry checks.
    Verify {
        #[arg(long, default_value = "all")]
        group: String,
        /// Registry file to use instead of the built-in one.
        #[arg(long, value_name = "FILE.toml")]
        registry: Option<PathBuf>,
        /// Re-evaluate enveloping-algebra checks as matrices.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        no_repair: bool,
        /// Record per-check wall time (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Contract the algebra along an integer grading.
    Contract {
        #[arg(long, value_name = "W1,W2,...")]
        weights: String,
        /// Print the whole contracted table.
        #[arg(long)]
        dump: bool,
    },
    /// Read expressions from standard input, one per line.
    Repl,
}

/// A driver error: reported on stderr with exit status 2. A closed stdout
/// ends the run quietly instead.
struct Fatal {
    msg: String,
    quiet: bool,
}

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal { msg: e.to_string(), quiet: false }
    }
}

fn fatal(msg: String) -> Fatal {
    Fatal { msg, quiet: false }
}

/// `println!` that propagates write errors.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*).map_err(|e| Fatal {
            quiet: e.kind() == io::ErrorKind::BrokenPipe,
            msg: e.to_string(),
        })?
    };
}

fn load_algebra(g: &Global) -> Result<Option<Algebra>, Fatal> {
    let Some(path) = &g.algebra else { return Ok(None) };
    let text = std::fs::read_to_string(path).map_err(|e| fatal(format!("{}: {e}", path.display())))?;
    Ok(Some(LieAlgebra::from_json(&text, !g.no_jacobi_check)?))
}

fn environment(g: &Global) -> Result<ExprEnv, Fatal> {
    let kind =
        match &g.env {
            Some(name) => Some(EnvKind::from_name(name).ok_or_else(|| {
                fatal(format!("unknown environment {name:?}; valid: standard, appendixA, contracted"))
            })?),
            None => None,
        };
    Ok(match (load_algebra(g)?, kind) {
        (Some(alg), Some(kind)) => ExprEnv::new(kind, &alg)?,
        (Some(alg), None) => ExprEnv::empty(&alg),
        (None, Some(EnvKind::Contracted)) => ExprEnv::new(EnvKind::Contracted, &contracted_su3())?,
        (None, kind) => ExprEnv::new(kind.unwrap_or(EnvKind::Standard), &su3())?,
    })
}

fn print_element(g: &Global, input: &str, e: &EAElement) -> Result<(), Fatal> {
    match g.format {
        Format::Text => out!("{e}"),
        Format::Json => {
            out!("{}", json!({"input": input, "normal_form": e.to_string(), "terms": e.len(), "degree": e.degree()}))
        }
    }
    Ok(())
}

fn cmd_pb(g: &Global, a: &str, b: &str) -> Result<(), Fatal> {
    let env = classical_env();
    let src = format!("pb({a}, {b})");
    let r: PhaseElement = env.eval(&src)?;
    let modulo = if r.is_zero() {
        None
    } else {
        let ideal = match g.ideal {
            IdealArg::Sphere => Some(ConstraintIdeal::<PhaseElement>::sphere()),
            IdealArg::SphereMomentum => Some(ConstraintIdeal::<PhaseElement>::sphere_momentum()),
            IdealArg::None => None,
        };
        match ideal {
            Some(ideal) => {
                let bound = required_degree(&r) + 2;
                let verdict = match ideal_member(&r, &ideal, bound)? {
                    Membership::Member(_) => "zero",
                    _ => "not shown zero",
                };
                Some(format!("{verdict} modulo ({}) at degree bound {bound}", ideal.names.join(", ")))
            }
            None => None,
        }
    };
    match g.format {
        Format::Text => {
            out!("{r}");
            if let Some(m) = &modulo {
                out!("{m}");
            }
        }
        Format::Json => out!("{}", json!({"input": src, "result": r.to_string(), "modulo": modulo})),
    }
    Ok(())
}

fn cmd_verify(g: &Global, group: &str, registry: Option<&PathBuf>, opts: RunOptions) -> Result<ExitCode, Fatal> {
    let owned;
    let reg = match registry {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| fatal(format!("{}: {e}", path.display())))?;
            owned = Registry::parse(&text)?;
            &owned
        }
        None => Registry::builtin(),
    };
    let report = run_suite(reg, group, &opts)?;
    match g.format {
        Format::Text => out!("{}", report.to_text().trim_end()),
        Format::Json => out!("{}", report.to_json()),
    }
    Ok(if report.has_fail() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

/// `X3` becomes `X'3`; other labels get a trailing prime.
fn primed(label: &str) -> String {
    match label.find(|c: char| c.is_ascii_digit()) {
        Some(k) if k > 0 => format!("{}'{}", &label[..k], &label[k..]),
        _ => format!("{label}'"),
    }
}

fn bracket(alg: &Algebra, i: usize, j: usize) -> EAElement {
    EAElement::generator(alg, i).commutator(&EAElement::generator(alg, j)).expect("same algebra")
}

fn cmd_contract(g: &Global, weights: &str, dump: bool) -> Result<(), Fatal> {
    let source = load_algebra(g)?.unwrap_or_else(su3);
    let spec = ContractionSpec::parse(weights)?;
    let target = contract_algebra(&source, &spec)?;
    let n = source.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let name = |i: usize| primed(source.label(i));
    let vanished: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(i, j)| !bracket(&source, i, j).is_zero() && bracket(&target, i, j).is_zero())
        .collect();
    // render with primed generators
    let render = |e: &EAElement| {
        let mut s = e.to_string();
        for k in (0..n).rev() {
            s = s.replace(source.label(k), &name(k));
        }
        s
    };
    match g.format {
        Format::Text => {
            out!("contraction of {} with weights {:?}", source.name(), spec.weights);
            out!("{} brackets vanish:", vanished.len());
            for &(i, j) in &vanished {
                out!("  [{}, {}] = 0", name(i), name(j));
            }
            if dump {
                out!("contracted table:");
                for &(i, j) in &pairs {
                    let b = bracket(&target, i, j);
                    if !b.is_zero() {
                        out!("  [{}, {}] = {}", name(i), name(j), render(&b));
                    }
                }
            }
        }
        Format::Json => {
            let mut doc = json!({
                "source": source.name(),
                "weights": spec.weights,
                "vanished": vanished.iter().map(|&(i, j)| [name(i), name(j)]).collect::<Vec<_>>(),
            });
            if dump {
                let table: serde_json::Value = serde_json::from_str(&target.to_json())?;
                doc["algebra"] = table;
            }
            out!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(())
}

fn cmd_repl(g: &Global) -> Result<(), Fatal> {
    let mut env = environment(g)?;
    let interactive = io::stdin().is_terminal();
    let mut out = io::stdout();
    if interactive {
        out!("commands: let NAME = EXPR, :names, :quit");
    }
    let mut lines = io::stdin().lock().lines();
    loop {
        if interactive {
            write!(out, "> ")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { break };
        let line = line?;
        let line = line.trim();
        match line {
            "" => continue,
            ":quit" | ":q" => break,
            ":names" => out!("{}", env.names().join(" ")),
            _ => {
                if let Some(def) = line.strip_prefix("let ") {
                    let Some((name, src)) = def.split_once('=') else {
                        out!("error: expected let NAME = EXPR");
                        continue;
                    };
                    if let Err(e) = env.define(name.trim(), src.trim()) {
                        out!("error: {e}");
                    }
                    continue;
                }
                match env.eval(line) {
                    Ok(e) => print_element(g, line, &e)?,
                    Err(e) => out!("error: {e}"),
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Fatal> {
    let g = &cli.global;
    match &cli.command {
        Command::Nf { expr } => print_element(g, expr, &environment(g)?.eval(expr)?)?,
        Command::Comm { a, b } => {
            let env = environment(g)?;
            let c = env.eval(a)?.commutator(&env.eval(b)?)?;
            print_element(g, &format!("comm({a}, {b})"), &c)?;
        }
        Command::Pb { a, b } => cmd_pb(g, a, b)?,
        Command::Verify { group, registry, oracle, no_repair, timings } => {
            let opts = RunOptions { timings: *timings, repair: !no_repair, oracle: *oracle };
            return cmd_verify(g, group, registry.as_ref(), opts);
        }
        Command::Contract { weights, dump } => cmd_contract(g, weights, *dump)?,
        Command::Repl => cmd_repl(g)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Fatal { quiet: true, .. }) => ExitCode::SUCCESS,
        Err(Fatal { msg, .. }) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
