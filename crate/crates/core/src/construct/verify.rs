//! Re-checks a certificate from its JSON content alone.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;

use super::{phi_of_pin, Certificate, Step};
use crate::approx::{default_tol, psi};
use crate::arith::power::RootPower;
use crate::arith::rational::{fmt_rat, pow2};
use crate::hyperplane::{hyperplanes_meeting, interval_linform};
use crate::{Cylinder, RatBox, RatInterval, Rational, RealDescriptor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub nu: usize,
    /// Pin data, cylinders and box agree with each other.
    pub structure: bool,
    /// Condition (1).
    pub nesting: bool,
    /// Condition (2).
    pub phi_monotone: bool,
    /// Condition (4); vacuous on the last step.
    pub bound_chain: bool,
    /// Condition (3), including that nothing was left off the list.
    pub avoidance: bool,
    /// Condition (5).
    pub pin_meets_box: bool,
    pub messages: Vec<String>,
}

impl StepCheck {
    pub fn ok(&self) -> bool {
        self.structure && self.nesting && self.phi_monotone && self.bound_chain && self.avoidance && self.pin_meets_box
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpotCheck {
    pub t: RootPower,
    pub psi: Option<RatInterval>,
    /// `φ(t)`, written exactly.
    pub phi: String,
    pub pass: bool,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub steps: Vec<StepCheck>,
    pub psi_spot_checks: Vec<SpotCheck>,
    pub global: Vec<String>,
}

impl VerificationReport {
    /// First failing step, if any.
    pub fn first_failure(&self) -> Option<&StepCheck> {
        self.steps.iter().find(|s| !s.ok())
    }
}

fn step_cylinders(cert: &Certificate, step: &Step) -> Result<Vec<Cylinder>, String> {
    let f = cert.spec.product.factors();
    if step.cylinders.len() != f.len() {
        return Err(format!("{} cylinders for {} factors", step.cylinders.len(), f.len()));
    }
    f.iter()
        .zip(&step.cylinders)
        .map(|(s, r)| Cylinder::parse(s.clone(), &r.prefix).map_err(|e| e.to_string()))
        .collect()
}

fn check_structure(cert: &Certificate, i: usize, msgs: &mut Vec<String>) -> bool {
    let s = &cert.steps[i];
    let n = cert.spec.product.dims();
    let mut ok = true;
    let mut fail = |m: String| {
        msgs.push(m);
        false
    };
    if s.nu != i + 1 {
        ok &= fail(format!("step index {} recorded as {}", i + 1, s.nu));
    }
    let want_k = if i == 0 { 1 } else { 3 - cert.steps[i - 1].k };
    if s.k != want_k || i > 0 && cert.steps[i - 1].k > 2 {
        return fail(format!("pinned coordinate {} breaks the alternation", s.k));
    }
    if !s.q.is_positive() || !s.p.gcd(&s.q).is_one() {
        return fail(format!("pin {}/{} is not in lowest terms", s.p, s.q));
    }
    match cert.spec.product.factor(s.k - 1).contains(&s.pin_value()) {
        Ok(true) => {}
        Ok(false) => ok &= fail(format!("pin {} is not in the digit set", fmt_rat(&s.pin_value()))),
        Err(e) => ok &= fail(format!("membership of the pin undecided: {e}")),
    }
    match phi_of_pin(&cert.spec.norm, s.k, &s.q) {
        Ok(v) if v == s.phi_of_q => {}
        _ => ok &= fail("phi_of_q does not match Φ(q e_k)".into()),
    }
    match step_cylinders(cert, s) {
        Ok(c) => {
            let hulls: Vec<RatInterval> = c.iter().map(Cylinder::hull).collect();
            if hulls.as_slice() != s.hull.intervals() {
                ok &= fail("box differs from the hull of the cylinders".into());
            }
        }
        Err(e) => ok &= fail(format!("bad cylinders: {e}")),
    }
    if s.hull.dims() != n {
        ok &= fail("box has the wrong dimension".into());
    }
    ok
}

fn check_step(cert: &Certificate, i: usize) -> StepCheck {
    let steps = &cert.steps;
    let s = &steps[i];
    let n = cert.spec.product.dims();
    let mut messages = Vec::new();
    let structure = check_structure(cert, i, &mut messages);
    if !structure {
        return StepCheck {
            nu: i + 1,
            structure,
            nesting: false,
            phi_monotone: false,
            bound_chain: false,
            avoidance: false,
            pin_meets_box: false,
            messages,
        };
    }
    let pin = s.pin(n).expect("checked primitive");

    let nesting = if i == 0 {
        let root = RatBox::new(cert.spec.product.factors().iter().map(|f| f.hull()).collect()).unwrap();
        s.hull.is_subset_of(&root)
    } else {
        s.hull.is_strictly_inside(&steps[i - 1].hull)
    };
    if !nesting {
        messages.push("box is not strictly inside the previous box".into());
    }

    let phi_monotone = i == 0 || s.phi_of_q > steps[i - 1].phi_of_q;
    if !phi_monotone {
        messages.push("Φ(q) does not increase".into());
    }

    let bound_chain = match (steps.get(i + 1), &s.bound_used) {
        (None, _) => true,
        (Some(_), None) => {
            messages.push("bound_used missing".into());
            false
        }
        (Some(next), Some(b)) => {
            let sound = cert.spec.phi.cmp_at(&next.phi_of_q, b) != Ordering::Less && b.is_positive();
            if !sound {
                messages.push("bound_used exceeds φ(Φ(q_{ν+1}))".into());
            }
            let held = match interval_linform(&pin, &next.hull) {
                Ok(iv) => iv.hi() < b && &-b.clone() < iv.lo(),
                Err(_) => false,
            };
            if !held {
                messages.push(format!("|q ξ_k − p| reaches bound {} on the next box", fmt_rat(b)));
            }
            sound && held
        }
    };

    let h = cert.spec.avoidance_schedule.height(i + 1);
    let mut avoidance = true;
    for a in cert.avoided.iter().filter(|a| a.nu == i + 1) {
        match a.hyperplane() {
            Ok(hp) if hp == pin => {
                messages.push("the pin is listed as avoided".into());
                avoidance = false;
            }
            Ok(hp) => {
                if interval_linform(&hp, &s.hull).map_or(true, |iv| iv.contains_zero()) {
                    messages.push(format!("hyperplane {hp} meets the box"));
                    avoidance = false;
                }
            }
            Err(e) => {
                messages.push(format!("bad avoided entry: {e}"));
                avoidance = false;
            }
        }
    }
    let stray: Vec<String> = hyperplanes_meeting(&s.hull, h)
        .into_iter()
        .filter(|a| *a != pin)
        .map(|a| a.to_string())
        .collect();
    if !stray.is_empty() {
        messages.push(format!("hyperplanes of height <= {h} meet the box: {}", stray.join(" ")));
        avoidance = false;
    }
    if i > 0 {
        let prev_pin = steps[i - 1].pin(n).expect("checked primitive");
        if interval_linform(&prev_pin, &s.hull).map_or(true, |iv| iv.contains_zero()) {
            messages.push("previous pin meets the box".into());
            avoidance = false;
        }
    }

    let pin_meets_box = s.hull.interval(s.k - 1).contains(&s.pin_value())
        && (i == 0 || steps[i - 1].hull.interval(s.k - 1).contains(&s.pin_value()));
    if !pin_meets_box {
        messages.push("pinned hyperplane misses the box".into());
    }

    StepCheck {
        nu: i + 1,
        structure,
        nesting,
        phi_monotone,
        bound_chain,
        avoidance,
        pin_meets_box,
        messages,
    }
}

fn spot_check(cert: &Certificate, t: &RootPower) -> SpotCheck {
    let phi = &cert.spec.phi;
    let (first, last) = cert.phi_range();
    let mut out = SpotCheck {
        t: t.clone(),
        psi: None,
        phi: phi.exact_string(t),
        pass: false,
        message: None,
    };
    if t < &first || t > &last {
        out.message = Some("t lies outside [Φ(q_1), Φ(q_last)]".into());
        return out;
    }
    let xi: Vec<RealDescriptor> = cert.final_box.midpoint().into_iter().map(RealDescriptor::exact).collect();
    let floor = phi.lower(t);
    let tol = default_tol().min(floor / pow2(8));
    match psi(&cert.spec.norm, &xi, t, &tol) {
        Ok(r) => {
            out.pass = phi.cmp_at(t, r.value.hi()) != Ordering::Less;
            out.psi = Some(r.value);
        }
        Err(e) => out.message = Some(e.to_string()),
    }
    out
}

/// Thresholds `Φ(q_ν)` for `ν >= 2` that do not exceed `cap`.
pub fn default_spot_checks(cert: &Certificate, cap: &Rational) -> Vec<RootPower> {
    cert.steps
        .iter()
        .skip(1)
        .map(|s| s.phi_of_q.clone())
        .filter(|t| t.cmp_rational(cap) != Ordering::Greater)
        .collect()
}

/// Checks conditions (1)–(5) for every step with exact arithmetic and
/// evaluates `ψ` by enumeration at the final-box midpoint for each `t`.
pub fn verify_certificate(cert: &Certificate, spot_checks: &[RootPower]) -> VerificationReport {
    let mut global = Vec::new();
    if cert.steps.is_empty() {
        global.push("certificate has no steps".into());
    }
    if let Err(e) = cert.spec.validate() {
        global.push(format!("invalid spec: {e}"));
    }
    if cert.steps.len() != cert.spec.steps {
        global.push(format!("spec asks for {} steps, certificate has {}", cert.spec.steps, cert.steps.len()));
    }
    if let Some(last) = cert.steps.last() {
        if last.hull != cert.final_box {
            global.push("final_box differs from the last step's box".into());
        }
    }
    if cert.avoided.iter().any(|a| a.nu == 0 || a.nu > cert.steps.len()) {
        global.push("avoided entry refers to a missing step".into());
    }
    if cert.final_box.dims() != cert.spec.product.dims() {
        global.push("final_box has the wrong dimension".into());
    }
    if !global.is_empty() {
        return VerificationReport {
            ok: false,
            steps: Vec::new(),
            psi_spot_checks: Vec::new(),
            global,
        };
    }
    let steps: Vec<StepCheck> = (0..cert.steps.len()).into_par_iter().map(|i| check_step(cert, i)).collect();
    let psi_spot_checks: Vec<SpotCheck> = spot_checks.iter().map(|t| spot_check(cert, t)).collect();
    let ok = steps.iter().all(StepCheck::ok) && psi_spot_checks.iter().all(|s| s.pass);
    VerificationReport {
        ok,
        steps,
        psi_spot_checks,
        global,
    }
}
