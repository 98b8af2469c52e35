//! Acceptance criteria, one line each. The run fails if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use singvec::approx::{
    badness_profile, cubic_line, dirichlet_check, lemma53_check, lemma53_min, psi, record_sequence, DirichletMode,
    NormSpec,
};
use singvec::arith::rational::{int, nearest_int_dist, parse_rat, rat};
use singvec::bounds::{transference_constants, w_const, w_polynomial, W_root};
use singvec::construct::{construct, default_spot_checks, verify_certificate, Certificate, ConstructionSpec, PhiSpec};
use singvec::hyperplane::interval_linform;
use singvec::{DigitSystem, ProductSet, RatInterval, RatPoly, Rational, RealDescriptor, RootPower};
use tempfile::TempDir;

const ROOT_TOL: &str = "1e-9";
/// Allowed gap between the W(1,2) enclosure and 0.7320508.
const W12_AGREEMENT: &str = "1e-6";
const FAST: Duration = Duration::from_secs(1);
const CONSTRUCT_BUDGET: Duration = Duration::from_secs(60);
const DIRICHLET_BUDGET: Duration = Duration::from_secs(120);
const BADNESS_BUDGET: Duration = Duration::from_secs(60);
const SPOT_CAP: i64 = 10_000;
const DECADES: [i64; 4] = [10, 100, 1000, 10_000];
const SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t0 = Instant::now();
    let mut o = f();
    let dt = t0.elapsed();
    if let Some(b) = budget {
        if dt > b {
            o.pass = false;
            o.detail = format!("{} (over the {:?} budget)", o.detail, b);
        }
    }
    (o, dt)
}

/// `round(x · 10^d)` with halves rounded up.
fn rounded(x: &Rational, d: usize) -> BigInt {
    let s = x * Rational::from_integer(num_traits::pow(BigInt::from(10), d));
    (s + rat(1, 2)).floor().to_integer()
}

fn both_round_to(e: &RatInterval, d: usize, target: i64) -> bool {
    rounded(e.lo(), d) == BigInt::from(target) && rounded(e.hi(), d) == BigInt::from(target)
}

fn constants() -> Outcome {
    let tol = parse_rat(ROOT_TOL).unwrap();
    let w12 = W_root(1, 2, &tol).unwrap();
    // √3 − 1 ∈ [lo, hi]  ⇔  (lo+1)² <= 3 <= (hi+1)²
    let sq = |x: &Rational| (x + int(1)) * (x + int(1));
    let contains = sq(w12.lo()) <= int(3) && sq(w12.hi()) >= int(3);
    let agree = (w12.midpoint() - parse_rat("0.7320508").unwrap()).abs() <= parse_rat(W12_AGREEMENT).unwrap();
    let w13 = both_round_to(&W_root(1, 3, &tol).unwrap(), 2, 54);
    let w23 = both_round_to(&W_root(2, 3, &tol).unwrap(), 3, 759);
    let w14 = w_const(1, 4).unwrap() == rat(2, 3);
    outcome(
        contains && agree && w13 && w23 && w14,
        format!("W(1,2)∋√3−1:{contains} ≈0.7320508:{agree} W(1,3)→0.54:{w13} W(2,3)→0.759:{w23} w(1,4)=2/3:{w14}"),
    )
}

fn polynomial_identities() -> Outcome {
    let tol = parse_rat(ROOT_TOL).unwrap();
    let printed = [
        ((1, 2), [4, -6, 0, 1].as_slice(), "x^3 - 6x + 4"),
        ((1, 3), [1, -2, 0, 0, 1].as_slice(), "x^4 - 2x + 1"),
        ((2, 3), [27, -36, 0, 1].as_slice(), "x^3 - 36x + 27"),
    ];
    let mut bad = Vec::new();
    for ((s, n), coeffs, text) in printed {
        let want = RatPoly::from_ints(coeffs);
        let got = w_polynomial(s, n).unwrap();
        let root = W_root(s, n, &tol).unwrap();
        let brackets = want.sign_at(root.lo()) != want.sign_at(root.hi());
        if got != want || !brackets {
            bad.push(format!("({s},{n}): printed {text}, solved {got}"));
        }
    }
    if bad.is_empty() {
        outcome(true, "all three solved polynomials equal the printed ones")
    } else {
        outcome(false, bad.join("; "))
    }
}

fn transference() -> Outcome {
    let mut ok = true;
    for n in 2..=20i64 {
        let c = transference_constants(n as u32, None).unwrap();
        let nn = int(n);
        let expr = (&nn * &nn + int(1)) / (&nn * (&nn * &nn - int(1)));
        ok &= c.kw2005 == expr;
        ok &= expr == Rational::one() / &nn + int(2) / (&nn * (&nn * &nn - int(1)));
        ok &= expr == Rational::one() / (&nn - int(1)) - Rational::one() / (&nn * (&nn + int(1)));
        ok &= c.unweighted == Rational::one() / (&nn - int(1)) && c.kw2005 < c.unweighted;
    }
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..10 {
        let n = rng.gen_range(2..=6usize);
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
        let total: i64 = raw.iter().sum();
        let s: Vec<Rational> = raw.iter().map(|&r| rat(r, total)).collect();
        let delta = rat(*raw.iter().min().unwrap(), total);
        let want = Rational::one() / (int(n as i64) * (Rational::one() - delta));
        let got = transference_constants(n as u32, Some(&s)).unwrap().weighted.unwrap();
        ok &= got == want;
    }
    outcome(ok, "identities and strict inequality for n = 2..20; 10 random weight vectors")
}

fn middle_thirds_squared() -> ProductSet {
    ProductSet::new(vec![DigitSystem::middle_thirds(); 2]).unwrap()
}

fn construct_and_verify(norm: NormSpec) -> Outcome {
    let spec = ConstructionSpec::new(middle_thirds_squared(), norm, PhiSpec::parse("pow:5").unwrap(), 6).unwrap();
    let t0 = Instant::now();
    let cert = match construct(&spec) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("construct failed: {e}")),
    };
    let dt = t0.elapsed();
    if dt > CONSTRUCT_BUDGET {
        return outcome(false, format!("construct took {dt:?}"));
    }
    let mut checks = default_spot_checks(&cert, &int(SPOT_CAP));
    // only the first few Φ(q_ν) fall under the cap; decades fill the range
    checks.extend(DECADES.iter().map(|&t| RootPower::integer(t).unwrap()));
    let rep = verify_certificate(&cert, &checks);
    let steps_ok = rep.steps.len() == 6 && rep.steps.iter().all(|s| s.ok());
    let spots_ok = !rep.psi_spot_checks.is_empty() && rep.psi_spot_checks.iter().all(|s| s.pass);
    let ts: Vec<String> = rep.psi_spot_checks.iter().map(|s| s.t.to_exact_string()).collect();
    outcome(
        rep.ok && steps_ok && spots_ok,
        format!(
            "construct {dt:.2?}, conditions (1)-(5) on 6 steps: {steps_ok}, ψ(t) <= φ(t) at t = {}: {spots_ok}",
            ts.join(", ")
        ),
    )
}

fn random_rational(rng: &mut StdRng) -> Rational {
    let q = rng.gen_range(1..=1000i64);
    rat(rng.gen_range(0..q), q)
}

fn dirichlet_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut violations = 0;
    let mut checks = 0;
    for i in 0..100 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let xi: Vec<RealDescriptor> = (0..n).map(|_| RealDescriptor::exact(random_rational(&mut rng))).collect();
        for t in 1..=50 {
            for mode in [DirichletMode::Dual, DirichletMode::Simultaneous] {
                checks += 1;
                if !dirichlet_check(&xi, t, mode).unwrap() {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{checks} checks, {violations} violations"))
}

/// `min ⟨q·ξ⟩` over `0 < ‖q‖_∞ <= h`, by a plain double loop.
fn naive_psi(xi: &[Rational; 2], h: i64) -> Rational {
    let mut best: Option<Rational> = None;
    for a in -h..=h {
        for b in -h..=h {
            if a == 0 && b == 0 {
                continue;
            }
            let v = nearest_int_dist(&(&xi[0] * int(a) + &xi[1] * int(b)));
            if best.as_ref().is_none_or(|m| &v < m) {
                best = Some(v);
            }
        }
    }
    best.unwrap()
}

fn oracle_equivalence() -> Outcome {
    const T_MAX: i64 = 30;
    let mut rng = StdRng::seed_from_u64(SEED ^ 7);
    let mut mismatches = Vec::new();
    let tol = Rational::one();
    for i in 0..50 {
        let x = [random_rational(&mut rng), random_rational(&mut rng)];
        let xi: Vec<RealDescriptor> = x.iter().cloned().map(RealDescriptor::exact).collect();
        let naive: Vec<Rational> = (1..=T_MAX).map(|h| naive_psi(&x, h)).collect();
        let t = rng.gen_range(1..=T_MAX);
        let got = psi(&NormSpec::Sup, &xi, &RootPower::integer(t).unwrap(), &tol).unwrap();
        if got.value != RatInterval::point(naive[t as usize - 1].clone()) {
            mismatches.push(format!("psi #{i}"));
        }
        let mut want = Vec::new();
        for (h, v) in naive.iter().enumerate() {
            if want.last().is_none_or(|(_, m): &(i64, Rational)| v < m) {
                want.push((h as i64 + 1, v.clone()));
            }
        }
        let rs = record_sequence(&NormSpec::Sup, &xi, &RootPower::integer(T_MAX).unwrap(), &tol).unwrap();
        let got: Vec<(i64, Rational)> = rs
            .entries
            .iter()
            .map(|e| {
                let t = e.threshold.to_rational().unwrap();
                assert!(t.is_integer() && e.value.is_point());
                (t.to_integer().try_into().unwrap(), e.value.lo().clone())
            })
            .collect();
        if got != want {
            mismatches.push(format!("records #{i}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "50 random inputs agree exactly".to_string()
        } else {
            mismatches.join(", ")
        },
    )
}

fn badness_evidence() -> Outcome {
    let theta = RealDescriptor::cbrt2();
    let spec = cubic_line(theta);
    let prof = badness_profile(&spec, &[10, 100, 1000]).unwrap();
    let positive = prof.iter().all(|a| a.value.lo().is_positive());
    let monotone = prof
        .windows(2)
        .all(|w| w[1].value.hi() <= w[0].value.hi() && w[1].value.lo() <= w[0].value.lo());
    let x = [RealDescriptor::cbrt4()];
    let min = lemma53_min(&spec, &x, 1000).unwrap();
    let c = min.value.lo() / int(2);
    let held = c.is_positive() && lemma53_check(&spec, &x, 1000, &c).unwrap().holds;
    let decimals: Vec<String> = prof.iter().map(|a| format!("{:.6}", singvec::arith::rational::to_f64(a.value.hi()))).collect();
    outcome(
        positive && monotone && held,
        format!(
            "inf at Q=10,100,1000: {} positive:{positive} non-increasing:{monotone}; lower bound with c = min/2 holds:{held}",
            decimals.join(", ")
        ),
    )
}

fn fault_injection() -> Outcome {
    let spec = ConstructionSpec::new(
        middle_thirds_squared(),
        NormSpec::Sup,
        PhiSpec::parse("pow:3").unwrap(),
        4,
    )
    .unwrap();
    let cert = construct(&spec).unwrap();
    let mut lowered = cert.clone();
    let reach = interval_linform(&lowered.steps[1].pin(2).unwrap(), &lowered.steps[2].hull).unwrap();
    lowered.steps[1].bound_used = Some(reach.hi().clone().max(-reach.lo().clone()) / int(2));
    let mut reordered = cert.clone();
    reordered.steps.swap(1, 2);
    let mut widened = cert.clone();
    let idx = widened.avoided.iter().position(|a| a.nu >= 2).unwrap();
    let nu = widened.avoided[idx].nu;
    let gone = widened.avoided.remove(idx).hyperplane().unwrap();
    widened.steps[nu - 1].hull = widened.steps[nu - 2].hull.clone();
    let touches = interval_linform(&gone, &widened.steps[nu - 1].hull).unwrap().contains_zero();

    let dir = TempDir::new().unwrap();
    let mut codes = Vec::new();
    for (name, c) in [("pristine", &cert), ("lowered", &lowered), ("reordered", &reordered), ("widened", &widened)] {
        let p = dir.path().join(format!("{name}.json"));
        std::fs::write(&p, c.to_json()).unwrap();
        let st = Command::new(env!("CARGO_BIN_EXE_singvec"))
            .args(["certify", p.to_str().unwrap()])
            .output()
            .unwrap();
        codes.push(st.status.code().unwrap());
    }
    let roundtrip = Certificate::from_json(&cert.to_json()).unwrap() == cert;
    outcome(
        codes[0] == 0 && codes[1..].iter().all(|&c| c != 0) && touches && roundtrip,
        format!("exit codes pristine/lowered/reordered/widened = {codes:?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: Vec<(u32, &str, Option<Duration>, fn() -> Outcome)> = vec![
        (1, "bound constants", Some(FAST), constants),
        (2, "printed polynomials match the solved ones", Some(FAST), polynomial_identities),
        (3, "transference identities", Some(FAST), transference),
        (4, "construction on middle-thirds², sup norm, φ(t) = t^-5", None, || construct_and_verify(NormSpec::Sup)),
        (5, "weighted construction, s = (2/3, 1/3)", None, || {
            construct_and_verify(NormSpec::parse("weighted:2/3,1/3").unwrap())
        }),
        (6, "Dirichlet property suite", Some(DIRICHLET_BUDGET), dirichlet_suite),
        (7, "oracle equivalence with a naive double loop", None, oracle_equivalence),
        (8, "badness of (θ, θ²), θ = 2^(1/3)", Some(BADNESS_BUDGET), badness_evidence),
        (9, "certify rejects tampered certificates", None, fault_injection),
    ];
    let mut failed = Vec::new();
    println!();
    for (id, title, budget, f) in criteria {
        let (o, dt) = timed(budget, f);
        println!("#{id:<2} {} {title} [{dt:.2?}]: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    println!(
        "#10 N/A  declared out of reach: uncountability of the family, total irrationality of the limit point \
         beyond the last avoidance height, the limiting exponents themselves, analytic manifolds"
    );
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn rounding_helper() {
    assert_eq!(rounded(&parse_rat("0.545").unwrap(), 2), BigInt::from(55));
    assert_eq!(rounded(&parse_rat("0.5449").unwrap(), 2), BigInt::from(54));
    assert!(rounded(&Rational::zero(), 3).is_zero());
}
