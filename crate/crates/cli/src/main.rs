//! Batch front end for the algebra kernel.
//!
//! Every operation is described by a job file — a header of options and
//! variable blocks followed by named `[sections]` — read from a path or
//! standard input.  `run` dispatches on the file's `job:` line; the area
//! subcommands validate that the file belongs to them; a few common
//! queries can be phrased inline without a file (`hilbert --gotzmann`,
//! `hilbscheme --n --Q`, `pair rank a=t`).

mod input;
mod ops;
mod report;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use noether_core::parse::{parse_job, JobSpec, OrderChoice, Section};

use report::OutputMode;

#[derive(Parser)]
#[command(
    name = "noether",
    version,
    about = "Exact algebra batch tool: polynomial rings, Groebner bases, Hilbert \
             polynomials and parameter schemes, Grassmannians, finite Noetherian \
             topologies, and the generic-pair formula calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Term order, `grevlex` or `lex` (overrides the job header).
    #[arg(long, global = true, value_name = "ORDER")]
    order: Option<String>,

    /// Random seed (overrides the job header).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Degree window for windowed checks (overrides the job header).
    #[arg(long, global = true, value_name = "N")]
    window: Option<u32>,

    /// Coefficient characteristic: 0 or a prime below 2^31.
    #[arg(long = "char", global = true, value_name = "P")]
    characteristic: Option<u32>,

    /// Output format, `text` or `kv`.
    #[arg(long, global = true, value_name = "FORMAT")]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job file, dispatching on its `job:` header.
    Run {
        /// Job file path; `-` or absent reads standard input.
        file: Option<PathBuf>,
    },
    /// Polynomial arithmetic and monomial bases (`poly ...` jobs).
    Poly { file: Option<PathBuf> },
    /// Groebner bases, division, ideal products, elimination (`groebner ...`).
    Groebner { file: Option<PathBuf> },
    /// Graded dimensions, Hilbert polynomials, saturation (`hilbert ...`).
    Hilbert {
        /// Report the Hilbert polynomial of the [generators] ideal.
        #[arg(long)]
        polynomial: bool,
        /// Report the graded dimension in this degree.
        #[arg(long, value_name = "D")]
        dimension: Option<u32>,
        /// Saturate the [generators] ideal by the irrelevant ideal.
        #[arg(long)]
        saturate: bool,
        /// Greedy binomial-representation length of a numerical polynomial
        /// in `d`, e.g. `3*d + 1`; needs no job file.
        #[arg(long, value_name = "Q")]
        gotzmann: Option<String>,
        /// Compare the [left] and [right] saturated ideals.
        #[arg(long)]
        equal: bool,
        file: Option<PathBuf>,
    },
    /// Exterior algebra and Grassmannian queries (`grassmann ...`).
    Grassmann { file: Option<PathBuf> },
    /// Parameter-scheme data and the ideal/point dictionary (`hilbscheme ...`).
    Hilbscheme {
        /// Ambient projective dimension; with --Q, needs no job file.
        #[arg(long, value_name = "N")]
        n: Option<u32>,
        /// Hilbert polynomial in `d`, e.g. `1` or `d + 1`.
        #[arg(long = "Q", value_name = "Q")]
        q: Option<String>,
        file: Option<PathBuf>,
    },
    /// Finite closed-set families: irreducibility, components, rank, degree.
    Topology { file: Option<PathBuf> },
    /// Tame-formula operations: eval, conjoin, zariski.
    Tame {
        /// One of `eval`, `conjoin`, `zariski`.
        op: String,
        file: Option<PathBuf>,
    },
    /// Generic-pair operations: rank, theta, chi, minimal, lambda, rewrite,
    /// disjoin.  Payload either from a job file or inline (`a=t`, `base=e1`).
    Pair {
        /// One of `rank`, `theta`, `chi`, `minimal`, `lambda`, `rewrite`,
        /// `disjoin`.
        op: String,
        /// `name=value` payload assignments, or one job file path.
        args: Vec<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => print!("{text}"),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn run(cli: &Cli) -> Result<String, String> {
    let mode = match &cli.out {
        None => OutputMode::Text,
        Some(s) => OutputMode::parse(s).ok_or_else(|| format!("unknown output format {s:?}"))?,
    };
    let mut job = load_job(&cli.command)?;
    apply_overrides(&mut job, cli)?;
    let report = ops::dispatch(&job).map_err(|e| e.to_string())?;
    Ok(report.render(mode))
}

fn apply_overrides(job: &mut JobSpec, cli: &Cli) -> Result<(), String> {
    if let Some(o) = &cli.order {
        job.order = OrderChoice::parse(o).ok_or_else(|| format!("unknown order {o:?}"))?;
    }
    if let Some(s) = cli.seed {
        job.seed = s;
    }
    if let Some(w) = cli.window {
        job.window = w;
    }
    if let Some(c) = cli.characteristic {
        job.characteristic = c;
    }
    Ok(())
}

/// Builds the job from the subcommand: either by reading and validating a
/// job file, or by synthesizing one from inline arguments.
fn load_job(cmd: &Command) -> Result<JobSpec, String> {
    match cmd {
        Command::Run { file } => read_job(file.as_ref()),
        Command::Poly { file } => read_area_job(file.as_ref(), "poly"),
        Command::Groebner { file } => read_area_job(file.as_ref(), "groebner"),
        Command::Grassmann { file } => read_area_job(file.as_ref(), "grassmann"),
        Command::Topology { file } => read_area_job(file.as_ref(), "topology"),
        Command::Hilbert { polynomial, dimension, saturate, gotzmann, equal, file } => {
            let mut selected: Vec<(&str, bool)> = vec![
                ("polynomial", *polynomial),
                ("dimension", dimension.is_some()),
                ("saturate", *saturate),
                ("gotzmann", gotzmann.is_some()),
                ("equal", *equal),
            ];
            selected.retain(|(_, on)| *on);
            if selected.len() > 1 {
                return Err("pick at most one hilbert operation flag".into());
            }
            if let (Some(q), None) = (gotzmann, file) {
                let mut job = synthetic_job("hilbert gotzmann");
                set_section(&mut job, "q", vec![q.clone()]);
                return Ok(job);
            }
            let mut job = read_area_job(file.as_ref(), "hilbert")?;
            if let Some((op, _)) = selected.first() {
                let expected = format!("hilbert {op}");
                if job.command != expected {
                    return Err(format!(
                        "the job file runs `{}`, not `{expected}`",
                        job.command
                    ));
                }
            }
            if let Some(d) = dimension {
                set_section(&mut job, "degree", vec![d.to_string()]);
            }
            if let Some(q) = gotzmann {
                set_section(&mut job, "q", vec![q.clone()]);
            }
            Ok(job)
        }
        Command::Hilbscheme { n, q, file } => {
            if file.is_none() {
                let (Some(n), Some(q)) = (n, q) else {
                    return Err("hilbscheme needs a job file, or both --n and --Q".into());
                };
                let mut job = synthetic_job("hilbscheme data");
                set_section(&mut job, "n", vec![n.to_string()]);
                set_section(&mut job, "q", vec![q.clone()]);
                return Ok(job);
            }
            let mut job = read_area_job(file.as_ref(), "hilbscheme")?;
            if let Some(n) = n {
                set_section(&mut job, "n", vec![n.to_string()]);
            }
            if let Some(q) = q {
                set_section(&mut job, "q", vec![q.clone()]);
            }
            Ok(job)
        }
        Command::Tame { op, file } => {
            let expected = format!("tame {op}");
            if !matches!(op.as_str(), "eval" | "conjoin" | "zariski") {
                return Err(format!("unknown tame operation {op:?}"));
            }
            let job = read_job(file.as_ref())?;
            if job.command != expected {
                return Err(format!("the job file runs `{}`, not `{expected}`", job.command));
            }
            Ok(job)
        }
        Command::Pair { op, args } => load_pair_job(op, args),
    }
}

fn load_pair_job(op: &str, args: &[String]) -> Result<JobSpec, String> {
    const OPS: [&str; 7] = ["rank", "theta", "chi", "minimal", "lambda", "rewrite", "disjoin"];
    if !OPS.contains(&op) {
        return Err(format!("unknown pair operation {op:?}"));
    }
    let expected = format!("pair {op}");
    let mut assignments: Vec<(&str, &str)> = Vec::new();
    let mut file: Option<PathBuf> = None;
    for arg in args {
        match arg.split_once('=') {
            Some((k, v)) => assignments.push((k.trim(), v.trim())),
            None if file.is_none() => file = Some(PathBuf::from(arg)),
            None => return Err(format!("unexpected extra argument {arg:?}")),
        }
    }
    if let Some(file) = file {
        if !assignments.is_empty() {
            return Err("give either a job file or inline assignments, not both".into());
        }
        let job = read_job(Some(&file))?;
        if job.command != expected {
            return Err(format!("the job file runs `{}`, not `{expected}`", job.command));
        }
        return Ok(job);
    }
    if assignments.is_empty() {
        let job = read_job(None)?;
        if job.command != expected {
            return Err(format!("the job file runs `{}`, not `{expected}`", job.command));
        }
        return Ok(job);
    }
    let mut job = synthetic_job(&expected);
    for (key, value) in assignments {
        let value = alias_model_vars(value);
        match key {
            // tuple-valued payloads: one element per comma
            "a" => set_section(&mut job, "tuple", split_commas(&value)),
            "basis" | "witness" | "class" | "members" => {
                set_section(&mut job, key, split_commas(&value))
            }
            "base" => {
                let line = value.replace(',', " ");
                set_section(&mut job, "base", vec![line.trim().to_string()])
            }
            "a0" | "param" | "designated" => {
                set_section(&mut job, key, vec![value.trim().to_string()])
            }
            other => return Err(format!("unknown inline payload key {other:?}")),
        }
    }
    Ok(job)
}

fn split_commas(s: &str) -> Vec<String> {
    input::split_top_commas(s).iter().map(|p| p.trim().to_string()).collect()
}

/// Rewrites the standalone identifiers `e` and `t` to the first model
/// variables `e1`, `t1`, so `pair rank a=t` names the generic element.
fn alias_model_vars(s: &str) -> String {
    let mut out = String::new();
    let mut ident = String::new();
    for ch in s.chars().chain(std::iter::once('\0')) {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            ident.push(ch);
            continue;
        }
        match ident.as_str() {
            "e" => out.push_str("e1"),
            "t" => out.push_str("t1"),
            _ => out.push_str(&ident),
        }
        ident.clear();
        if ch != '\0' {
            out.push(ch);
        }
    }
    out
}

fn synthetic_job(command: &str) -> JobSpec {
    JobSpec {
        command: command.to_string(),
        characteristic: 0,
        order: OrderChoice::Grevlex,
        seed: 0,
        window: 1,
        samples: 20,
        blocks: Vec::new(),
        sections: Vec::new(),
    }
}

fn set_section(job: &mut JobSpec, name: &str, lines: Vec<String>) {
    match job.sections.iter_mut().find(|s| s.name == name) {
        Some(s) => s.lines = lines,
        None => job.sections.push(Section { name: name.to_string(), line0: 1, lines }),
    }
}

fn read_job(file: Option<&PathBuf>) -> Result<JobSpec, String> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read {}: {e}", p.display()))?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            s
        }
    };
    parse_job(&text).map_err(|e| e.to_string())
}

fn read_area_job(file: Option<&PathBuf>, area: &str) -> Result<JobSpec, String> {
    let job = read_job(file)?;
    let in_area = job.command == area || job.command.starts_with(&format!("{area} "));
    if !in_area {
        return Err(format!("the job file runs `{}`, which is not a `{area}` job", job.command));
    }
    Ok(job)
}
