//! `singvec` command-line front end.
//!
//! Exit codes: 0 success, 1 bad flags or input, 2 cylinder descent exhausted,
//! 3 certificate schema mismatch, 4 verification failed, 5 precision exhausted.

mod analysis;
mod certificate;
mod render;
mod roots;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use singvec::Error;

#[derive(Parser)]
#[command(name = "singvec", version, about = "Singular vectors on product sets: construction, certification, exponents")]
struct Cli {
    /// Worker threads for the enumeration kernels (outputs do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certified nested-box construction and write it as JSON.
    Construct(certificate::ConstructArgs),
    /// Re-check a certificate; exit 0 iff every check passes.
    Certify(certificate::CertifyArgs),
    /// Irrationality measure function ψ(t) with a witness.
    Psi(analysis::PsiArgs),
    /// Record sequence of ψ up to t_max.
    ///
    /// CSV columns: threshold (exact, "b^e" when irrational), value_lo,
    /// value_hi (exact rationals), witness ("(q1,q2,...)").
    Records(analysis::RecordsArgs),
    /// Exponent bound constants and certified polynomial roots.
    Roots(roots::RootsArgs),
    /// Finite-range infimum of q^w ‖⟨qξ⟩‖ along an affine line.
    ///
    /// CSV columns: Q, inf_lo, inf_hi (exact), inf_decimal, witness.
    Badness(analysis::BadnessArgs),
    /// Check the Dirichlet bound for every integer t up to t_max.
    Dirichlet(analysis::DirichletArgs),
}

/// Where a table goes: a file, or standard output.
#[derive(Args, Clone)]
pub struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArgs {
    pub fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub enum Failure {
    Usage(String),
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => 1,
        Failure::Verification => 4,
        Failure::Core(e) => match e {
            Error::DepthExhausted { .. } | Error::NoRationalFound { .. } => 2,
            Error::Schema(_) => 3,
            Error::PrecisionExhausted { .. } => 5,
            _ => 1,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool already set");
    }
    let res = match &cli.command {
        Command::Construct(a) => certificate::run_construct(a),
        Command::Certify(a) => certificate::run_certify(a),
        Command::Psi(a) => analysis::run_psi(a),
        Command::Records(a) => analysis::run_records(a),
        Command::Roots(a) => roots::run_roots(a),
        Command::Badness(a) => analysis::run_badness(a),
        Command::Dirichlet(a) => analysis::run_dirichlet(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Verification => eprintln!("certificate FAILED verification"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
