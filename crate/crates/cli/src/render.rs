//! Display renderings. Exact values always travel alongside these strings.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use singvec::arith::rational::{fmt_rat, ln_rat};
use singvec::{RatInterval, Rational, RootPower};

const SHORT_DIGITS: usize = 24;

/// Six significant digits in scientific form, from a natural logarithm.
fn sci_from_ln(ln: f64, negative: bool) -> String {
    let l10 = ln / std::f64::consts::LN_10;
    let mut e = l10.floor();
    let mut m = 10f64.powf(l10 - e);
    if m >= 9.999995 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{}{m:.5}e{e}", if negative { "-" } else { "" })
}

pub fn sci(x: &Rational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    sci_from_ln(ln_rat(&x.abs()), x.is_negative())
}

pub fn sci_power(t: &RootPower) -> String {
    sci_from_ln(t.ln(), false)
}

/// Integers longer than a table cell are cut down to a prefix and a digit count.
pub fn short_int(n: &BigInt) -> String {
    let s = n.to_string();
    let digits = s.trim_start_matches('-').len();
    if digits <= SHORT_DIGITS {
        s
    } else {
        format!("{}…({digits} digits)", &s[..12 + usize::from(n.is_negative())])
    }
}

pub fn short_rat(x: &Rational) -> String {
    if x.denom() == &BigInt::from(1) {
        short_int(x.numer())
    } else {
        format!("{}/{}", short_int(x.numer()), short_int(x.denom()))
    }
}

pub fn rational(x: &Rational) -> Value {
    json!({ "exact": fmt_rat(x), "decimal": sci(x) })
}

pub fn interval(iv: &RatInterval) -> Value {
    json!({
        "lo": fmt_rat(iv.lo()),
        "hi": fmt_rat(iv.hi()),
        "decimal": format!("[{}, {}]", sci(iv.lo()), sci(iv.hi())),
    })
}

/// Interval display for values of moderate size, at fixed decimals.
pub fn interval_fixed(iv: &RatInterval, digits: usize) -> Value {
    json!({
        "lo": fmt_rat(iv.lo()),
        "hi": fmt_rat(iv.hi()),
        "decimal": iv.to_decimal(digits),
    })
}

pub fn power(t: &RootPower) -> Value {
    json!({ "exact": t.to_exact_string(), "decimal": sci_power(t) })
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
