use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use agstab::artifact::{CodeArtifact, DistanceCheck};
use agstab::bounds::{emit_curves, write_csv, Curve};
use agstab::curve::{CurveBackend, CurveKind};
use agstab::decoder::{symplectic_decode_with, DecodeOptions, SyndromeProblem};
use agstab::field::Gf;
use agstab::rng::Lcg;
use agstab::symplectic::weight;
use agstab::Error;

#[derive(Parser)]
#[command(name = "agstab", version, about = "Stabilizer codes from symplectic function-field evaluation codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build C_G ⊇ C_H for a backend and write the code artifact.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record the exact minimum distance (enumeration).
        #[arg(long)]
        exact_distance: bool,
    },
    /// Recompute an artifact and report every check as JSON.
    Verify {
        path: PathBuf,
        #[arg(long, conflicts_with = "budget")]
        exact_distance: bool,
        /// Check the distance bound only up to this symplectic weight.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Descend an artifact to the subfield GF(2^base-degree).
    Descend {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        base_degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        exact_distance: bool,
    },
    /// Plant random errors, decode their syndromes, emit JSON lines.
    DecodeSim {
        #[arg(long, conflicts_with_all = ["backend", "q", "j", "gamma"])]
        artifact: Option<PathBuf>,
        #[arg(long, value_enum)]
        backend: Option<Backend>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        gamma: Option<u32>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Symplectic weight of each planted error.
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Symplectic weight limit of the fallback search.
        #[arg(long)]
        fallback_max_weight: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the rate curves as CSV.
    Bounds {
        #[arg(long, value_enum, default_value_t = CurveArg::Both)]
        curve: CurveArg,
        #[arg(long)]
        delta_min: f64,
        #[arg(long)]
        delta_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    backend: Backend,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    j: usize,
    /// σ shift as a field element index; 1 by default.
    #[arg(long)]
    gamma: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Rational,
    Hermitian,
}

impl From<Backend> for CurveKind {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Rational => CurveKind::Rational,
            Backend::Hermitian => CurveKind::Hermitian,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    R1,
    Alt,
    Both,
}

enum Failure {
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn summary(a: &CodeArtifact) -> String {
    let d = match a.params.d_exact {
        Some(d) => d.to_string(),
        None => format!("≥{}", a.params.d_lower),
    };
    format!(
        "[[{}, {}, {}]] over GF({})",
        a.params.n,
        a.params.k,
        d,
        1u32 << a.field.degree
    )
}

#[derive(Serialize)]
struct Trial<'a> {
    trial: usize,
    planted: &'a [Gf],
    planted_weight: usize,
    syndrome: &'a [Gf],
    decoded: Option<&'a [Gf]>,
    decoded_weight: Option<usize>,
    status: String,
    exact: bool,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct {
            code,
            out,
            exact_distance,
        } => {
            let backend = CurveBackend::new(code.backend.into(), code.q, code.gamma)?;
            let a = CodeArtifact::construct(&backend, code.j, exact_distance)?;
            write_json(out.as_deref(), &a)?;
            eprintln!("{}", summary(&a));
        }
        Command::Verify {
            path,
            exact_distance,
            budget,
        } => {
            let a = CodeArtifact::load(&path)?;
            let mode = match (exact_distance, budget) {
                (true, _) => DistanceCheck::Exact,
                (_, Some(w)) => DistanceCheck::Budget(w),
                _ => DistanceCheck::Auto,
            };
            let report = a.verify(mode)?;
            write_json(None, &report)?;
            if !report.passed {
                return Err(Failure::Check);
            }
        }
        Command::Descend {
            path,
            base_degree,
            out,
            exact_distance,
        } => {
            let a = CodeArtifact::load(&path)?;
            let d = a.descend(base_degree, exact_distance)?;
            write_json(out.as_deref(), &d)?;
            eprintln!("{}", summary(&d));
        }
        Command::DecodeSim {
            artifact,
            backend,
            q,
            j,
            gamma,
            trials,
            weight: w,
            seed,
            fallback_max_weight,
            out,
        } => {
            let (curve, j) = match artifact {
                Some(p) => {
                    let a = CodeArtifact::load(&p)?;
                    if a.is_descended() {
                        return Err(Failure::Usage("decode-sim needs a non-descended artifact".into()));
                    }
                    (a.curve()?, a.backend.j)
                }
                None => {
                    let (Some(b), Some(q), Some(j)) = (backend, q, j) else {
                        return Err(Failure::Usage(
                            "decode-sim needs --artifact or all of --backend, --q, --j".into(),
                        ));
                    };
                    (CurveBackend::new(b.into(), q, gamma)?, j)
                }
            };
            let (_, ch) = curve.build_codes(j)?;
            let n = curve.n();
            if w > n {
                return Err(Failure::Usage(format!("weight {w} exceeds n = {n}")));
            }
            let deg_g = curve.deg_g0() + j as i64;
            let opts = fallback_max_weight
                .map(|f| DecodeOptions { fallback_max_weight: f })
                .unwrap_or_else(|| DecodeOptions::bounded(n));
            let r = curve.field().degree();
            let mut rng = Lcg::new(seed);
            let mut sink = output(out.as_deref())?;
            let (mut exact_count, mut unique_count) = (0, 0);
            for trial in 0..trials {
                let e = rng.symplectic_error(n, w, r);
                let p = SyndromeProblem::for_error(&ch, &e)?;
                let res = symplectic_decode_with(&p, deg_g, opts)?;
                let exact = res.error.as_ref() == Some(&e);
                exact_count += exact as usize;
                unique_count += (res.status == agstab::decoder::DecodeStatus::UniqueGuaranteed) as usize;
                let rec = Trial {
                    trial,
                    planted: &e,
                    planted_weight: weight(&e),
                    syndrome: p.syndrome(),
                    decoded: res.error.as_deref(),
                    decoded_weight: res.weight,
                    status: res.status.to_string(),
                    exact,
                };
                serde_json::to_writer(&mut sink, &rec).map_err(Error::from)?;
                writeln!(sink)?;
            }
            sink.flush()?;
            eprintln!("trials={trials} exact={exact_count} unique-guaranteed={unique_count}");
        }
        Command::Bounds {
            curve,
            delta_min,
            delta_max,
            step,
            out,
        } => {
            let curves: &[Curve] = match curve {
                CurveArg::R1 => &[Curve::R1],
                CurveArg::Alt => &[Curve::Alt],
                CurveArg::Both => &[Curve::R1, Curve::Alt],
            };
            let pts = emit_curves(delta_min, delta_max, step, curves)?;
            let mut w = output(out.as_deref())?;
            write_csv(&mut w, &pts)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
