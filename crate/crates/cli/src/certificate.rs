use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};
use singvec::approx::NormSpec;
use singvec::arith::rational::{log2_estimate, parse_rat};
use singvec::construct::{
    construct, default_spot_checks, verify_certificate, Certificate, ConstructionSpec, PhiSpec, Schedule,
    VerificationReport,
};
use singvec::{DigitSystem, ProductSet, RootPower};

use crate::render::{self, short_int, short_rat};
use crate::Failure;

#[derive(Args)]
pub struct ConstructArgs {
    /// Construction spec as JSON; replaces the inline flags below.
    #[arg(long, conflicts_with_all = ["cantor", "phi", "norm", "steps", "heights", "max_depth"])]
    spec: Option<PathBuf>,
    /// One digit system per factor, e.g. 3:0,2 (repeat the flag; at least two).
    #[arg(long)]
    cantor: Vec<String>,
    /// Bound function: pow:N, const:v, or table:t1=v1,t2=v2,...
    #[arg(long)]
    phi: Option<String>,
    /// sup or weighted:s1,s2,...
    #[arg(long)]
    norm: Option<String>,
    /// Number of nested boxes to build.
    #[arg(long)]
    steps: Option<usize>,
    /// Avoidance heights: linear:OFFSET (H_ν = ν + OFFSET) or table:h1,h2,...
    #[arg(long)]
    heights: Option<String>,
    /// Cylinder levels the avoidance search may add per step.
    #[arg(long)]
    max_depth: Option<usize>,
    /// Certificate path.
    #[arg(long, default_value = "certificate.json")]
    out: PathBuf,
}

#[derive(Args)]
pub struct CertifyArgs {
    certificate: PathBuf,
    /// Comma-separated thresholds t (rationals or b^e); default: Φ(q_ν) for ν >= 2 up to --spot-cap.
    #[arg(long, value_delimiter = ',')]
    spot_checks: Option<Vec<String>>,
    #[arg(long, default_value = "10000")]
    spot_cap: String,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn parse_schedule(s: &str) -> Result<Schedule, Failure> {
    let bad = || Failure::Usage(format!("--heights must be linear:N or table:h1,h2,..., got {s:?}"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let sched = match kind {
        "linear" => Schedule::Linear {
            offset: rest.trim().parse().map_err(|_| bad())?,
        },
        "table" => Schedule::Table {
            heights: rest
                .split(',')
                .map(|h| h.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?,
        },
        _ => return Err(bad()),
    };
    sched.validate()?;
    Ok(sched)
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn spec_from_args(a: &ConstructArgs) -> Result<ConstructionSpec, Failure> {
    if let Some(p) = &a.spec {
        let spec: ConstructionSpec =
            serde_json::from_str(&read(p)?).map_err(|e| Failure::Usage(format!("bad spec file: {e}")))?;
        spec.validate()?;
        return Ok(spec);
    }
    if a.cantor.len() < 2 {
        return Err(Failure::Usage(format!(
            "need n >= 2 factors (repeat --cantor), got {}",
            a.cantor.len()
        )));
    }
    let factors = a.cantor.iter().map(|s| DigitSystem::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let phi = a.phi.as_deref().ok_or_else(|| Failure::Usage("--phi is required".into()))?;
    let steps = a.steps.ok_or_else(|| Failure::Usage("--steps is required".into()))?;
    if steps == 0 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    let norm = NormSpec::parse(a.norm.as_deref().unwrap_or("sup"))?;
    let mut spec = ConstructionSpec::new(ProductSet::new(factors)?, norm, PhiSpec::parse(phi)?, steps)?;
    if let Some(h) = &a.heights {
        spec.avoidance_schedule = parse_schedule(h)?;
    }
    if let Some(d) = a.max_depth {
        spec.max_depth = d;
    }
    Ok(spec)
}

fn summary(cert: &Certificate) -> String {
    let mut s = String::new();
    writeln!(s, "nu\tk\tp/q\tPhi(q)\tbound").unwrap();
    for st in &cert.steps {
        let bound = st.bound_used.as_ref().map_or("-".to_string(), render::sci);
        writeln!(
            s,
            "{}\t{}\t{}/{}\t{}\t{}",
            st.nu,
            st.k,
            short_int(&st.p),
            short_int(&st.q),
            render::sci_power(&st.phi_of_q),
            bound
        )
        .unwrap();
    }
    let widths: Vec<String> = cert
        .final_widths()
        .iter()
        .map(|w| format!("{} (~2^{})", render::sci(w), log2_estimate(w)))
        .collect();
    writeln!(s, "final box widths: {}", widths.join(", ")).unwrap();
    writeln!(s, "avoided hyperplanes: {}", cert.avoided.len()).unwrap();
    s
}

pub fn run_construct(a: &ConstructArgs) -> Result<(), Failure> {
    let spec = spec_from_args(a)?;
    let cert = construct(&spec)?;
    let mut text = cert.to_json();
    text.push('\n');
    std::fs::write(&a.out, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", a.out.display())))?;
    print!("{}", summary(&cert));
    println!("certificate written to {}", a.out.display());
    Ok(())
}

fn report_json(rep: &VerificationReport) -> Value {
    let steps: Vec<Value> = rep
        .steps
        .iter()
        .map(|s| {
            json!({
                "nu": s.nu,
                "ok": s.ok(),
                "structure": s.structure,
                "nesting": s.nesting,
                "phi_monotone": s.phi_monotone,
                "bound_chain": s.bound_chain,
                "avoidance": s.avoidance,
                "pin_meets_box": s.pin_meets_box,
                "messages": s.messages,
            })
        })
        .collect();
    let spots: Vec<Value> = rep
        .psi_spot_checks
        .iter()
        .map(|c| {
            json!({
                "t": render::power(&c.t),
                "psi": c.psi.as_ref().map(render::interval),
                "phi": c.phi,
                "pass": c.pass,
                "message": c.message,
            })
        })
        .collect();
    json!({ "ok": rep.ok, "global": rep.global, "steps": steps, "psi_spot_checks": spots })
}

fn report_text(rep: &VerificationReport) -> String {
    let mut s = String::new();
    for g in &rep.global {
        writeln!(s, "global: {g}").unwrap();
    }
    for st in &rep.steps {
        if st.ok() {
            writeln!(s, "step {}: ok", st.nu).unwrap();
            continue;
        }
        let flags = [
            ("structure", st.structure),
            ("nesting", st.nesting),
            ("phi_monotone", st.phi_monotone),
            ("bound_chain", st.bound_chain),
            ("avoidance", st.avoidance),
            ("pin_meets_box", st.pin_meets_box),
        ];
        let failed: Vec<&str> = flags.iter().filter(|f| !f.1).map(|f| f.0).collect();
        writeln!(s, "step {}: FAILED {}", st.nu, failed.join(",")).unwrap();
        for m in &st.messages {
            writeln!(s, "  {m}").unwrap();
        }
    }
    for c in &rep.psi_spot_checks {
        let psi = c.psi.as_ref().map_or("-".to_string(), |p| {
            format!("[{}, {}]", short_rat(p.lo()), short_rat(p.hi()))
        });
        write!(
            s,
            "spot check t={}: psi={} phi(t)={} {}",
            c.t,
            psi,
            c.phi,
            if c.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
        if let Some(m) = &c.message {
            write!(s, " ({m})").unwrap();
        }
        s.push('\n');
    }
    writeln!(s, "certificate {}", if rep.ok { "OK" } else { "FAILED" }).unwrap();
    s
}

pub fn run_certify(a: &CertifyArgs) -> Result<(), Failure> {
    let cert = Certificate::from_json(&read(&a.certificate)?)?;
    let checks: Vec<RootPower> = match &a.spot_checks {
        Some(list) => list.iter().map(|t| RootPower::parse(t)).collect::<Result<_, _>>()?,
        None if cert.steps.is_empty() => Vec::new(),
        None => default_spot_checks(&cert, &parse_rat(&a.spot_cap)?),
    };
    let rep = verify_certificate(&cert, &checks);
    if a.json {
        print!("{}", render::pretty(&report_json(&rep)));
    } else {
        print!("{}", report_text(&rep));
    }
    if rep.ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert!(matches!(parse_schedule("linear:3"), Ok(Schedule::Linear { offset: 3 })));
        assert!(matches!(parse_schedule("table:3,4"), Ok(Schedule::Table { .. })));
        assert!(parse_schedule("table:4,3").is_err());
        assert!(parse_schedule("cubic").is_err());
    }
}
