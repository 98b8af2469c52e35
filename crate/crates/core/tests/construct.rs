use num_bigint::BigInt;
use num_traits::{One, Zero};
use singvec::approx::NormSpec;
use singvec::arith::rational::{int, rat};
use singvec::construct::{
    construct, default_spot_checks, extend, refine_point, verify_certificate, Certificate, ConstructionSpec, PhiSpec,
};
use singvec::hyperplane::{hyperplanes_meeting, interval_linform};
use singvec::{DigitSystem, Error, ProductSet, RatBox};

fn mt2() -> ProductSet {
    ProductSet::new(vec![DigitSystem::middle_thirds(); 2]).unwrap()
}

fn spec(phi: &str, steps: usize) -> ConstructionSpec {
    ConstructionSpec::new(mt2(), NormSpec::Sup, PhiSpec::parse(phi).unwrap(), steps).unwrap()
}

fn is_power_of_three(q: &BigInt) -> bool {
    let mut q = q.clone();
    let three = BigInt::from(3);
    while (&q % &three).is_zero() {
        q /= &three;
    }
    q.is_one()
}

#[test]
fn cube_four_steps() {
    let cert = construct(&spec("pow:3", 4)).unwrap();
    assert_eq!(cert.steps.len(), 4);
    let ks: Vec<usize> = cert.steps.iter().map(|s| s.k).collect();
    assert_eq!(ks, [1, 2, 1, 2]);
    for w in cert.steps.windows(2) {
        assert!(w[1].q > w[0].q);
    }
    // middle-thirds anchors have 3-power denominators
    assert!(cert.steps.iter().all(|s| is_power_of_three(&s.q)));
    let rep = verify_certificate(&cert, &default_spot_checks(&cert, &int(10_000)));
    assert!(rep.ok, "{:?}", rep.first_failure());
}

#[test]
fn single_step_is_vacuous() {
    let cert = construct(&spec("pow:3", 1)).unwrap();
    assert_eq!(cert.steps.len(), 1);
    assert_eq!(cert.steps[0].k, 1);
    assert!(cert.steps[0].bound_used.is_none());
    assert!(verify_certificate(&cert, &[]).ok);
}

#[test]
fn constant_half() {
    let cert = construct(&spec("const:1/2", 3)).unwrap();
    assert!(verify_certificate(&cert, &[]).ok);
    assert!(cert.steps[..2].iter().all(|s| s.bound_used == Some(rat(1, 2))));
}

#[test]
fn deterministic() {
    let s = spec("pow:3", 4);
    assert_eq!(construct(&s).unwrap().to_json(), construct(&s).unwrap().to_json());
}

#[test]
fn json_roundtrip() {
    let cert = construct(&spec("pow:3", 3)).unwrap();
    let text = cert.to_json();
    let back = Certificate::from_json(&text).unwrap();
    assert_eq!(back, cert);
    assert_eq!(back.to_json(), text);
}

#[test]
fn unknown_version_is_schema_error() {
    let cert = construct(&spec("pow:3", 2)).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
    v["version"] = 7.into();
    assert!(matches!(Certificate::from_json(&v.to_string()), Err(Error::Schema(_))));
    assert!(matches!(Certificate::from_json("{\"steps\": []}"), Err(Error::Schema(_))));
}

#[test]
fn lowered_bound_is_caught() {
    let mut cert = construct(&spec("pow:3", 4)).unwrap();
    let next = &cert.steps[2].hull;
    let pin = cert.steps[1].pin(2).unwrap();
    let iv = interval_linform(&pin, next).unwrap();
    // just under what the form actually reaches on the next box
    let reach = iv.hi().clone().max(-iv.lo().clone());
    cert.steps[1].bound_used = Some(reach / int(2));
    let rep = verify_certificate(&cert, &[]);
    assert!(!rep.ok);
    let bad = rep.first_failure().unwrap();
    assert_eq!(bad.nu, 2);
    assert!(!bad.bound_chain);
}

#[test]
fn reordered_steps_are_caught() {
    let mut cert = construct(&spec("pow:3", 4)).unwrap();
    cert.steps.swap(1, 2);
    let rep = verify_certificate(&cert, &[]);
    assert!(!rep.ok);
    assert!(rep.steps.iter().any(|s| !s.structure || !s.phi_monotone));
}

#[test]
fn deleted_avoidance_with_widened_box_is_caught() {
    let mut cert = construct(&spec("pow:3", 4)).unwrap();
    let idx = cert.avoided.iter().position(|a| a.nu >= 2).unwrap();
    let nu = cert.avoided[idx].nu;
    let gone = cert.avoided.remove(idx).hyperplane().unwrap();
    let parent = cert.steps[nu - 2].hull.clone();
    assert!(interval_linform(&gone, &parent).unwrap().contains_zero());
    cert.steps[nu - 1].hull = parent;
    let rep = verify_certificate(&cert, &[]);
    assert!(!rep.ok);
    assert!(!rep.steps[nu - 1].ok());
}

#[test]
fn refine_and_extend() {
    let cert = construct(&spec("pow:3", 3)).unwrap();
    assert_eq!(refine_point(&cert, 0).unwrap(), cert.final_box.intervals());
    let refined = refine_point(&cert, 3).unwrap();
    for (a, b) in refined.iter().zip(cert.final_box.intervals()) {
        assert!(a.width() < b.width());
    }
    let longer = extend(&cert, 3).unwrap();
    assert_eq!(longer.final_box.intervals(), refined.as_slice());
    assert!(verify_certificate(&longer, &[]).ok);
    let h = longer.spec.avoidance_schedule.height(longer.steps.len());
    let last = longer.steps.last().unwrap();
    let pin = last.pin(2).unwrap();
    let refined_box = RatBox::new(refined).unwrap();
    assert!(hyperplanes_meeting(&refined_box, h).iter().all(|a| *a == pin));
    // a fresh construction of the longer run agrees
    assert_eq!(construct(&spec("pow:3", 6)).unwrap(), longer);
}

#[test]
fn weighted_construction() {
    let norm = NormSpec::parse("weighted:2/3,1/3").unwrap();
    let s = ConstructionSpec::new(mt2(), norm, PhiSpec::parse("pow:5").unwrap(), 6).unwrap();
    let cert = construct(&s).unwrap();
    let rep = verify_certificate(&cert, &default_spot_checks(&cert, &int(10_000)));
    assert!(rep.ok, "{:?} {:?}", rep.first_failure(), rep.psi_spot_checks);
}
