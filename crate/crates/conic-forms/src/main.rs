use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use conic_core::liealg::{structure_constants, AlgebraTag};
use conic_core::numerics::{
    build_chart, chart_invariant, constraint_residual, simulate, ChartBox, ControlSchedule, DEFAULT_STEP,
};
use conic_core::systems::ConicKind;
use conic_core::vectorfield::{lie_bracket, DEFAULT_TOL};
use conic_core::{classify, solve_symmetries, Ansatz, ClassifyOptions, VerdictTag};
use conic_forms::export::{trajectory_csv, trajectory_json};
use conic_forms::report::{chart_json, symmetries_text, verdict_json};
use conic_forms::scramble::scramble;
use conic_forms::SystemDocument;

const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "conic-forms", version, about = "Symmetry-based recognition of conic control systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Lie bracket [u, v] of two named fields.
    Bracket {
        file: PathBuf,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Solve for the infinitesimal symmetries.
    Symmetries {
        file: PathBuf,
        /// Degree, trig and exponential bounds as D,T,E.
        #[arg(long, default_value = "2,2,2")]
        ansatz: String,
    },
    /// Decide feedback equivalence to a conic null-form at the base point.
    Classify {
        file: PathBuf,
        #[arg(long, default_value = "2,2,2")]
        ansatz: String,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        /// Also print the evidence as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Integrate the system under a piecewise-constant control.
    Simulate {
        file: PathBuf,
        /// A constant, or start:value pairs such as 0:1,0.5:-1.
        #[arg(long)]
        u: String,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Build the rectifying chart at the base point and read the conserved quantity.
    Chart {
        file: PathBuf,
        #[arg(long = "box", default_value_t = 0.25)]
        half_width: f64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a seeded random feedback transformation.
    Scramble {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_ansatz(s: &str) -> Result<Ansatz> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad ansatz {s:?}"))?;
    match parts.as_slice() {
        [d, t, e] => Ok(Ansatz::new(*d, *t, *e)),
        _ => bail!("ansatz needs three numbers D,T,E, got {s:?}"),
    }
}

fn parse_schedule(s: &str) -> Result<ControlSchedule> {
    if let Ok(u) = s.trim().parse::<f64>() {
        return Ok(ControlSchedule::constant(u));
    }
    let mut pieces = Vec::new();
    for part in s.split(',') {
        let (t, u) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("bad schedule piece {part:?}, expected start:value"))?;
        pieces.push((t.trim().parse::<f64>()?, u.trim().parse::<f64>()?));
    }
    Ok(ControlSchedule::new(pieces)?)
}

fn tolerance() -> Result<f64> {
    match std::env::var("CONIC_FORMS_TOL") {
        Ok(v) => {
            let t: f64 = v.parse().with_context(|| format!("CONIC_FORMS_TOL={v:?} is not a number"))?;
            if !(t > 0.0 && t.is_finite()) {
                bail!("CONIC_FORMS_TOL must be positive");
            }
            Ok(t)
        }
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn kind_for(tag: AlgebraTag) -> Option<ConicKind> {
    match tag {
        AlgebraTag::EllipticE2 => Some(ConicKind::Elliptic),
        AlgebraTag::HyperbolicP11 => Some(ConicKind::Hyperbolic),
        AlgebraTag::ParabolicL322 => Some(ConicKind::Parabolic),
        AlgebraTag::Other => None,
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Bracket { file, u, v } => {
            let doc = SystemDocument::load(&file)?;
            let (a, b) = (doc.field(&u)?, doc.field(&v)?);
            println!("{}", lie_bracket(&a, &b));
        }
        Command::Symmetries { file, ansatz } => {
            let doc = SystemDocument::load(&file)?;
            let s = doc.system()?;
            let basis = solve_symmetries(&s, &parse_ansatz(&ansatz)?)?;
            let sc = if basis.dim() == 3 { structure_constants(&basis).ok() } else { None };
            print!("{}", symmetries_text(&basis, sc.as_ref()));
        }
        Command::Classify { file, ansatz, kmax, json } => {
            let doc = SystemDocument::load(&file)?;
            let s = doc.system()?;
            let opt = ClassifyOptions {
                ansatz: parse_ansatz(&ansatz)?,
                kmax,
                tol: tolerance()?,
            };
            let v = classify(&s, &doc.base_point()?, &opt)?;
            println!("{}", v.tag);
            if json {
                println!("{}", serde_json::to_string_pretty(&verdict_json(&v))?);
            }
            if let VerdictTag::Inconclusive(_) = v.tag {
                return Ok(EXIT_INCONCLUSIVE);
            }
        }
        Command::Simulate {
            file,
            u,
            t_end,
            step,
            out,
            format,
        } => {
            let doc = SystemDocument::load(&file)?;
            let s = doc.system()?;
            let schedule = parse_schedule(&u)?;
            let tr = simulate(&s, &schedule, &doc.base_point()?, t_end, step)?;
            let text = match format {
                Format::Csv => trajectory_csv(&tr),
                Format::Json => serde_json::to_string_pretty(&trajectory_json(&tr))? + "\n",
            };
            write_or_print(out.as_deref(), &text)?;
            if let Some(kind) = doc.kind()? {
                let r = constraint_residual(&tr, kind)?;
                eprintln!("constraint residual ({kind}): {r:.3e}");
            }
        }
        Command::Chart {
            file,
            half_width,
            step,
            out,
        } => {
            let doc = SystemDocument::load(&file)?;
            let s = doc.system()?;
            let p = doc.base_point()?;
            let basis = solve_symmetries(&s, &Ansatz::default())?;
            let chart = build_chart(&s, &basis, &p, ChartBox::new(half_width), step)?;
            let kind = match doc.kind()? {
                Some(k) => k,
                None => kind_for(chart.tag).ok_or_else(|| anyhow!("symmetry algebra is not of conic type"))?,
            };
            let reading = chart_invariant(&s, &chart, kind)?;
            let text = serde_json::to_string_pretty(&chart_json(&chart, Some(&reading)))? + "\n";
            write_or_print(out.as_deref(), &text)?;
            if out.is_some() {
                println!("invariant {:.12} spread {:.3e}", reading.value, reading.spread);
            }
        }
        Command::Scramble { file, seed, out } => {
            let doc = SystemDocument::load(&file)?;
            let s = doc.system()?;
            let (scrambled, _) = scramble(&s, seed)?;
            let mut next = SystemDocument::from_system(&format!("{} (seed {seed})", doc.name), &scrambled, doc.kind()?);
            next.kind = doc.kind.clone();
            write_or_print(out.as_deref(), &(next.to_json() + "\n"))?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
