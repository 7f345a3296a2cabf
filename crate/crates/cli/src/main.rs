use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gqm_core::io::{self, Code, Diagnostic, Experiment, Format, GridSpec, OutputKind};

#[derive(Parser)]
#[command(name = "gqm", version, about = "Run groupoid quantum-mechanics experiment specs")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a spec and write the axiom report.
    Check(Common),
    /// Write the multiplication table.
    Cayley(Common),
    /// Write the state's characteristic function and flags.
    State(Common),
    /// Write transition amplitudes and the Schrödinger trajectory over the time grid.
    Evolve(Common),
    /// Write quantum measures, decoherence values and the amplitude matrix.
    Measure(Common),
    /// Write the GNS space summary.
    Gns(Common),
    /// Write every output the spec requests.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Output format; tables default to csv and documents to json.
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_stop: Option<f64>,
    #[arg(long)]
    t_steps: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<Experiment, Diagnostic> {
        let bytes =
            fs::read(&self.spec).map_err(|e| Diagnostic::new(Code::Io, format!("{}: {e}", self.spec.display())))?;
        let mut spec = io::parse_spec(&bytes)?;
        if self.t_start.is_some() || self.t_stop.is_some() || self.t_steps.is_some() {
            let base = spec.grid;
            spec.grid = Some(GridSpec {
                start: pick(self.t_start, base.map(|g| g.start), "t-start")?,
                stop: pick(self.t_stop, base.map(|g| g.stop), "t-stop")?,
                steps: pick(self.t_steps, base.map(|g| g.steps), "t-steps")?,
            });
        }
        io::from_spec(spec)
    }
}

fn pick<T>(flag: Option<T>, from_spec: Option<T>, name: &str) -> Result<T, Diagnostic> {
    flag.or(from_spec)
        .ok_or_else(|| Diagnostic::new(Code::Grid, format!("--{name} is required when the spec has no grid")))
}

fn write(exp: &Experiment, c: &Common, kinds: &[OutputKind]) -> Result<Vec<PathBuf>, Diagnostic> {
    kinds.iter().try_for_each(|&k| exp.check_output(k))?;
    kinds.iter().map(|&k| io::write_output(exp, k, &c.out, c.format)).collect()
}

fn execute(verb: &Verb) -> Result<(), Diagnostic> {
    let (c, kinds): (&Common, &[OutputKind]) = match verb {
        Verb::Check(c) => (c, &[OutputKind::Axioms]),
        Verb::Cayley(c) => (c, &[OutputKind::Cayley]),
        Verb::State(c) => (c, &[OutputKind::State]),
        Verb::Evolve(c) => (c, &[OutputKind::Amplitudes, OutputKind::Evolve]),
        Verb::Measure(c) => (c, &[OutputKind::Measure]),
        Verb::Gns(c) => (c, &[OutputKind::Gns]),
        Verb::Run(c) => (c, &[]),
    };
    let exp = c.load()?;
    let written = if matches!(verb, Verb::Run(_)) { io::run(&exp, &c.out, c.format)? } else { write(&exp, c, kinds)? };
    if matches!(verb, Verb::Check(_)) {
        let g = &exp.groupoid;
        println!(
            "ok: {} outcomes, {} transitions, {} composable pairs",
            g.num_outcomes(),
            g.len(),
            g.composable_triples().len()
        );
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(d) => {
            eprintln!("{d}");
            match d.code {
                Code::Numeric | Code::Io => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
