use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fermilu_core::canonical::{canonical_3in5, reduce_to_minimal, reduce_to_sov, takagi_2vector, SovOptions};
use fermilu_core::multilinear::apply_unitary;
use fermilu_core::polycert::{certify, certify_with_multiplier, dims_report, CertifyOptions, ExponentVector, Multiplier, Preset, SubspaceSpec, Verdict};
use fermilu_core::report::{
    coeff_table_text, parse_excluded, to_pretty_json, Canon5Document, CertificateReport, DimsDocument, EscapeDocument, ObstructionDocument,
    ReductionDocument, TakagiDocument,
};
use fermilu_core::rng::seeded;
use fermilu_core::states::{bcs_obstruction, bcs_state, extend_modes, pair_block_unitary, sov_escape_experiment};
use fermilu_core::verify::{run_all, ESCAPE_THRESHOLD};
use fermilu_core::{FermionState, UnitaryMatrix};

#[derive(Parser)]
#[command(name = "fermilu", version, about = "Local unitary tools for fermionic states")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "FERMILU_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Bcs,
    Slater,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Sov,
    MinimalEven,
    MinimalOdd,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Sov => Preset::Sov,
            PresetArg::MinimalEven => Preset::MinimalEven,
            PresetArg::MinimalOdd => Preset::MinimalOdd,
        }
    }
}

#[derive(clap::Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = SovOptions::default().restarts)]
    restarts: usize,
    /// Success threshold relative to the squared norm.
    #[arg(long, default_value_t = SovOptions::default().tol)]
    tol: f64,
    /// Also write the reduced state here.
    #[arg(long)]
    reduced: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random, pair (BCS) or Slater state to a file.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Occupied modes for `slater`, comma separated (default 1..n).
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Canonical form of a 2-vector.
    Takagi {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Canonical form of a 3-vector in dimension five.
    Canon5 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Rotate a 3-fermion state into single occupancy.
    ReduceSov(ReduceArgs),
    /// Rotate a 3-fermion state into the minimal subspace (even m).
    ReduceMinimal(ReduceArgs),
    /// Exact universality certificate for a subspace of trivectors.
    Certify {
        #[arg(long)]
        m: usize,
        /// Excluded triples: JSON `[[i,j,k],…]` or one triple per line.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        excluded_file: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        /// Fixed monomial multiplier such as `x1^2*x3`; searched when absent.
        #[arg(long)]
        multiplier: Option<String>,
        /// Remove the last variable before pairing (automatic for odd m >= 11).
        #[arg(long)]
        eliminate_last_var: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Coefficient table rows for M = 4..max_m.
    Atable {
        #[arg(long)]
        max_m: usize,
        #[arg(long)]
        columns: Option<usize>,
    },
    /// Dimension counts for (m, n).
    Dims {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Pair-state obstruction, stabilizer and contraction checks.
    BcsCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Try to rotate a 4-fermion state into single occupancy.
    Escape {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = ESCAPE_THRESHOLD)]
        threshold: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    Verify {
        /// Run only these criteria, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn read_state(path: &Path) -> Result<FermionState> {
    FermionState::read(path).with_context(|| format!("reading state from {}", path.display()))
}

fn reduce(args: &ReduceArgs, minimal: bool) -> Result<ExitCode> {
    let psi = read_state(&args.input)?;
    let opts = SovOptions { seed: args.seed, restarts: args.restarts, tol: args.tol, ..Default::default() };
    let r = if minimal { reduce_to_minimal(&psi, opts)? } else { reduce_to_sov(&psi, opts)? };
    if let Some(p) = &args.reduced {
        r.reduced.write(p).with_context(|| format!("writing {}", p.display()))?;
    }
    let target = if minimal { "minimal" } else { "sov" };
    let doc = ReductionDocument::new(&psi, &r, target, args.seed, args.reduced.as_ref().map(|p| p.display().to_string()));
    emit(&to_pretty_json(&doc), args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Gen { kind, m, n, seed, indices, output } => {
            let psi = match kind {
                Kind::Random => FermionState::random(m, n, &mut seeded(seed))?,
                Kind::Bcs => bcs_state(n, m)?,
                Kind::Slater => {
                    let idx = indices.unwrap_or_else(|| (1..=n).collect());
                    if idx.len() != n {
                        bail!("--indices lists {} modes, expected {n}", idx.len());
                    }
                    FermionState::basis(m, &idx)?
                }
            };
            emit(&psi.to_json(), output.as_deref())?;
        }
        Command::Takagi { input, output } => {
            let psi = read_state(&input)?;
            emit(&to_pretty_json(&TakagiDocument::new(&psi, &takagi_2vector(&psi)?)), output.as_deref())?;
        }
        Command::Canon5 { input, output } => {
            let psi = read_state(&input)?;
            emit(&to_pretty_json(&Canon5Document::new(&psi, &canonical_3in5(&psi)?)), output.as_deref())?;
        }
        Command::ReduceSov(args) => return reduce(&args, false),
        Command::ReduceMinimal(args) => return reduce(&args, true),
        Command::Certify { m, excluded_file, preset, multiplier, eliminate_last_var, output } => {
            let spec = match (excluded_file, preset) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    parse_excluded(m, &text).with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(p)) => SubspaceSpec::preset(p.into(), m)?,
                (None, None) => bail!("either --excluded-file or --preset is required"),
            };
            let opts = CertifyOptions { eliminate_last_var: eliminate_last_var.then_some(true), ..Default::default() };
            let cert = match multiplier {
                Some(text) => certify_with_multiplier(&spec, Multiplier::Monomial(ExponentVector::parse(m, &text)?), opts)?,
                None => certify(&spec, opts)?,
            };
            emit(&to_pretty_json(&CertificateReport::from(&cert)), output.as_deref())?;
            if cert.verdict == Verdict::Unknown {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Atable { max_m, columns } => emit(coeff_table_text(max_m, columns)?.trim_end(), None)?,
        Command::Dims { m, n } => emit(&to_pretty_json(&DimsDocument::from(&dims_report(m, n)?)), None)?,
        Command::BcsCheck { n, m, restarts, seed, output } => {
            let psi = bcs_state(n, m)?;
            let r = bcs_obstruction(n, m, restarts, seed)?;
            let mut rng = seeded(seed);
            let mut deviation = 0.0f64;
            for _ in 0..100 {
                let blocks: Vec<_> = (0..m / 2).map(|_| UnitaryMatrix::random_su2(&mut rng)).collect();
                let d = pair_block_unitary(m, &blocks)?;
                deviation = deviation.max(apply_unitary(&d, &psi)?.distance(&psi)?);
            }
            let identity = if n >= 4 {
                FermionState::basis(m, &[m - 1, m])?.partial_inner(&psi)? == extend_modes(&bcs_state(n - 2, m - 2)?, m)?
            } else {
                true
            };
            let doc = ObstructionDocument::new(n, m, restarts, seed, &r, deviation, identity);
            emit(&to_pretty_json(&doc), output.as_deref())?;
        }
        Command::Escape { input, restarts, seed, threshold, output } => {
            let psi = read_state(&input)?;
            let r = sov_escape_experiment(&psi, restarts, seed)?;
            emit(&to_pretty_json(&EscapeDocument::new(&psi, restarts, seed, threshold, &r)), output.as_deref())?;
        }
        Command::Verify { only, json } => {
            let reports = run_all(&only);
            for r in &reports {
                emit(&r.line(), None)?;
                for d in &r.details {
                    emit(&format!("    {d}"), None)?;
                }
            }
            if let Some(p) = json {
                std::fs::write(&p, to_pretty_json(&reports)).with_context(|| format!("writing {}", p.display()))?;
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
