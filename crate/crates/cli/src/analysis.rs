use std::fmt::Write as _;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use singvec::approx::{
    badness_profile, cubic_line, default_tol, dirichlet_check, exponent_estimate, psi, psi_simultaneous,
    record_sequence, DirichletMode, NormSpec,
};
use singvec::arith::rational::{fmt_rat, parse_rat};
use singvec::{RealDescriptor, RootPower};

use crate::render;
use crate::{Failure, OutArgs};

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Dual,
    Simultaneous,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct PsiArgs {
    /// Coordinate of ξ: p/q, decimal, alg:c0,c1,...:lo,hi, cyl:<system>:<policy>, cbrt2, cbrt4, sqrt2.
    #[arg(long, required = true)]
    xi: Vec<String>,
    /// Threshold t (rational or b^e).
    #[arg(long)]
    t: String,
    /// sup or weighted:s1,s2,... (dual mode only)
    #[arg(long, default_value = "sup")]
    norm: String,
    #[arg(long, value_enum, default_value = "dual")]
    mode: Mode,
    /// Maximal enclosure width; default 2^-64.
    #[arg(long)]
    tol: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
pub struct RecordsArgs {
    #[arg(long, required = true)]
    xi: Vec<String>,
    #[arg(long)]
    t_max: String,
    #[arg(long, default_value = "sup")]
    norm: String,
    #[arg(long)]
    tol: Option<String>,
    /// json adds the finite-range exponent estimate.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
pub struct BadnessArgs {
    /// θ for the line with augmented matrix (θ, θ²).
    #[arg(long, default_value = "cbrt2")]
    theta: String,
    /// Largest height Q.
    #[arg(long = "Q")]
    q_max: u64,
    /// Heights to tabulate; default: powers of ten up to Q, then Q.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<u64>>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
pub struct DirichletArgs {
    #[arg(long, required = true)]
    xi: Vec<String>,
    #[arg(long)]
    t_max: u64,
    /// Check one mode only; default both.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_xi(xs: &[String]) -> Result<Vec<RealDescriptor>, Failure> {
    Ok(xs.iter().map(|s| RealDescriptor::parse(s)).collect::<Result<_, _>>()?)
}

fn parse_tol(t: &Option<String>) -> Result<singvec::Rational, Failure> {
    let tol = match t {
        Some(s) => parse_rat(s)?,
        None => default_tol(),
    };
    if tol <= num_traits::Zero::zero() {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    Ok(tol)
}

pub fn run_psi(a: &PsiArgs) -> Result<(), Failure> {
    let xi = parse_xi(&a.xi)?;
    let t = RootPower::parse(&a.t)?;
    let tol = parse_tol(&a.tol)?;
    let (r, mode) = match a.mode {
        Mode::Dual => (psi(&NormSpec::parse(&a.norm)?, &xi, &t, &tol)?, "dual"),
        Mode::Simultaneous => {
            let tr = t
                .to_rational()
                .ok_or_else(|| Failure::Usage("simultaneous mode needs a rational t".into()))?;
            (psi_simultaneous(&xi, &tr, &tol)?, "simultaneous")
        }
    };
    let v = json!({
        "xi": a.xi,
        "t": render::power(&t),
        "norm": a.norm,
        "mode": mode,
        "value": render::interval(&r.value),
        "witness": r.witness,
    });
    a.out.emit(&render::pretty(&v))
}

pub fn run_records(a: &RecordsArgs) -> Result<(), Failure> {
    let xi = parse_xi(&a.xi)?;
    let t_max = RootPower::parse(&a.t_max)?;
    let rs = record_sequence(&NormSpec::parse(&a.norm)?, &xi, &t_max, &parse_tol(&a.tol)?)?;
    let text = match a.format {
        Format::Csv => rs.to_csv(),
        Format::Json => {
            let entries: Vec<Value> = rs
                .entries
                .iter()
                .map(|e| json!({ "threshold": render::power(&e.threshold), "value": render::interval(&e.value), "witness": e.witness }))
                .collect();
            let estimate = match exponent_estimate(&rs) {
                Ok(e) => json!({ "gamma_hat": e.gamma_hat, "local": e.local }),
                Err(e) => json!({ "unavailable": e.to_string() }),
            };
            render::pretty(&json!({ "records": entries, "exponent_estimate": estimate }))
        }
    };
    a.out.emit(&text)
}

fn default_points(q: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = std::iter::successors(Some(10u64), |p| p.checked_mul(10))
        .take_while(|p| *p < q)
        .collect();
    pts.push(q);
    pts
}

pub fn run_badness(a: &BadnessArgs) -> Result<(), Failure> {
    if a.q_max == 0 {
        return Err(Failure::Usage("--Q must be at least 1".into()));
    }
    let spec = cubic_line(RealDescriptor::parse(&a.theta)?);
    let points = a.points.clone().unwrap_or_else(|| default_points(a.q_max));
    if points.iter().any(|&p| p == 0 || p > a.q_max) {
        return Err(Failure::Usage("--points must lie in [1, Q]".into()));
    }
    let prof = badness_profile(&spec, &points)?;
    let mut s = String::from("Q,inf_lo,inf_hi,inf_decimal,witness\n");
    for (q, r) in points.iter().zip(&prof) {
        let w: Vec<String> = r.witness.iter().map(|x| x.to_string()).collect();
        writeln!(
            s,
            "{q},{},{},{},\"({})\"",
            fmt_rat(r.value.lo()),
            fmt_rat(r.value.hi()),
            render::sci(r.value.hi()),
            w.join(",")
        )
        .unwrap();
    }
    a.out.emit(&s)
}

pub fn run_dirichlet(a: &DirichletArgs) -> Result<(), Failure> {
    let xi = parse_xi(&a.xi)?;
    if a.t_max == 0 {
        return Err(Failure::Usage("--t-max must be at least 1".into()));
    }
    let modes: Vec<(&str, DirichletMode)> = match a.mode {
        Some(Mode::Dual) => vec![("dual", DirichletMode::Dual)],
        Some(Mode::Simultaneous) => vec![("simultaneous", DirichletMode::Simultaneous)],
        None => vec![("dual", DirichletMode::Dual), ("simultaneous", DirichletMode::Simultaneous)],
    };
    let mut out = serde_json::Map::new();
    for (name, mode) in modes {
        let mut violations = Vec::new();
        for t in 1..=a.t_max {
            if !dirichlet_check(&xi, t, mode)? {
                violations.push(t);
            }
        }
        out.insert(name.into(), json!({ "checked": a.t_max, "violations": violations }));
    }
    a.out.emit(&render::pretty(&json!({ "xi": a.xi, "t_max": a.t_max, "modes": out })))
}
