use clap::{ArgGroup, Args};
use serde_json::{json, Value};
use singvec::arith::rational::parse_rat;
use singvec::bounds::{
    g_polynomial, h_polynomial, prop51_bound, reference_examples, transference_constants, w_const, w_polynomial,
    G_root, H_root, W_root,
};

use crate::render;
use crate::{Failure, OutArgs};

/// Fractional digits shown next to root enclosures.
const ROOT_DIGITS: usize = 10;

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["w", "h", "g", "transference", "prop51", "paper_examples"])))]
pub struct RootsArgs {
    /// Root of x^{n+1} − w^{n−1}(1+w)x + w^n in (0, w), w = (s+1)/(n−s).
    #[arg(long = "W", num_args = 2, value_names = ["S", "N"])]
    w: Option<Vec<u32>>,
    /// Positive root of 1 − x = x Σ_{k=1}^{n−1} (x/(s−1))^k.
    #[arg(long = "H", num_args = 2, value_names = ["N", "SDEG"])]
    h: Option<Vec<u32>>,
    /// Root in [1, ∞) of (1−ω)x^n − x^{n−1} + ω other than the trivial 1 (when there is one).
    #[arg(long = "G", num_args = 2, value_names = ["N", "OMEGA"])]
    g: Option<Vec<String>>,
    /// Transference constants for dimension N.
    #[arg(long, value_name = "N")]
    transference: Option<u32>,
    /// Weight vector for --transference.
    #[arg(long, value_delimiter = ',', requires = "transference")]
    weights: Option<Vec<String>>,
    /// Linear and refined upper bounds for (s, n).
    #[arg(long, num_args = 2, value_names = ["S", "N"])]
    prop51: Option<Vec<u32>>,
    /// Table of worked bounds: (1,4), (1,2), (1,3), (2,3).
    #[arg(long)]
    paper_examples: bool,
    #[arg(long, default_value = "1e-9")]
    tol: String,
    #[command(flatten)]
    out: OutArgs,
}

pub fn run_roots(a: &RootsArgs) -> Result<(), Failure> {
    let tol = parse_rat(&a.tol)?;
    let v: Value = if let Some(sn) = &a.w {
        let (s, n) = (sn[0], sn[1]);
        json!({
            "kind": "W",
            "s": s,
            "n": n,
            "w": render::rational(&w_const(s, n)?),
            "polynomial": w_polynomial(s, n)?.to_string(),
            "root": render::interval_fixed(&W_root(s, n, &tol)?, ROOT_DIGITS),
        })
    } else if let Some(ns) = &a.h {
        let (n, s) = (ns[0], ns[1]);
        json!({
            "kind": "H",
            "n": n,
            "s_deg": s,
            "polynomial": h_polynomial(n, s)?.to_string(),
            "root": render::interval_fixed(&H_root(n, s, &tol)?, ROOT_DIGITS),
        })
    } else if let Some(no) = &a.g {
        let n: u32 = no[0].parse().map_err(|_| Failure::Usage(format!("bad N {:?}", no[0])))?;
        let omega = parse_rat(&no[1])?;
        let root = G_root(n, &omega, &tol)?;
        json!({
            "kind": "G",
            "n": n,
            "omega": render::rational(&omega),
            "polynomial": g_polynomial(n, &omega).to_string(),
            "root": render::interval_fixed(&root, ROOT_DIGITS),
        })
    } else if let Some(n) = a.transference {
        let s = match &a.weights {
            Some(w) => Some(w.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        let c = transference_constants(n, s.as_deref())?;
        json!({
            "kind": "transference",
            "n": n,
            "unweighted": render::rational(&c.unweighted),
            "weighted": c.weighted.as_ref().map(render::rational),
            "kw2005": render::rational(&c.kw2005),
        })
    } else if let Some(sn) = &a.prop51 {
        let b = prop51_bound(sn[0], sn[1], &tol)?;
        json!({
            "kind": "prop51",
            "s": sn[0],
            "n": sn[1],
            "linear": render::rational(&b.linear),
            "refined": render::interval_fixed(&b.refined, ROOT_DIGITS),
        })
    } else {
        let rows: Vec<Value> = reference_examples(&tol)?
            .iter()
            .map(|e| {
                json!({
                    "s": e.s,
                    "n": e.n,
                    "w": render::rational(&e.w),
                    "polynomial": e.polynomial.as_ref().map(|p| p.to_string()),
                    "root": e.root.as_ref().map(|r| render::interval_fixed(r, ROOT_DIGITS)),
                })
            })
            .collect();
        json!({ "kind": "examples", "rows": rows })
    };
    a.out.emit(&render::pretty(&v))
}
