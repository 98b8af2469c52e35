use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{phi_of_pin, AvoidedRecord, Certificate, ConstructionSpec, CylinderRecord, Step, CERT_VERSION};
use crate::arith::power::RootPower;
use crate::error::{Error, Result};
use crate::hyperplane::hyperplanes_meeting;
use crate::{Cylinder, Hyperplane, RatBox, RatInterval, Rational};

/// Nodes the avoidance search may visit in one step.
const NODE_BUDGET: usize = 1 << 16;
/// Anchors examined per depth when looking for the next pin.
const CANDIDATES_PER_DEPTH: usize = 256;
/// Depth beyond the current cylinder at which the anchor search gives up.
const ANCHOR_DEPTH_LIMIT: usize = 1 << 16;

struct State<'a> {
    spec: &'a ConstructionSpec,
    cyls: Vec<Cylinder>,
    steps: Vec<Step>,
    avoided: Vec<AvoidedRecord>,
}

fn hull_box(cyls: &[Cylinder]) -> RatBox {
    RatBox::new(cyls.iter().map(Cylinder::hull).collect()).unwrap()
}

fn records(cyls: &[Cylinder]) -> Vec<CylinderRecord> {
    cyls.iter()
        .map(|c| CylinderRecord {
            prefix: c.prefix_string(),
        })
        .collect()
}

fn min_child(c: &Cylinder) -> Cylinder {
    c.child(c.system().min_digit()).unwrap()
}

/// Breadth-first refinement of `start` until no hyperplane of height `<= h`
/// other than `exempt` meets the hull box. Coordinate `locked` only moves to
/// its minimal-digit child, which keeps the lower hull end (the pin) fixed.
fn avoid(
    spec: &ConstructionSpec,
    nu: usize,
    start: Vec<Cylinder>,
    locked: usize,
    exempt: &Hyperplane,
    h: u32,
) -> Result<Vec<Cylinder>> {
    let obstruction = |c: &[Cylinder]| hyperplanes_meeting(&hull_box(c), h).into_iter().find(|a| a != exempt);
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    let mut seen: HashSet<Vec<Cylinder>> = HashSet::from([start]);
    let mut last = None;
    while let Some((node, depth)) = queue.pop_front() {
        let Some(a) = obstruction(&node) else {
            return Ok(node);
        };
        if depth < spec.max_depth && seen.len() < NODE_BUDGET {
            for (j, mj) in a.m().iter().enumerate() {
                if mj.is_zero() {
                    continue;
                }
                let kids = if j == locked {
                    vec![min_child(&node[j])]
                } else {
                    node[j].children()
                };
                for c in kids {
                    let mut next = node.clone();
                    next[j] = c;
                    if seen.insert(next.clone()) {
                        queue.push_back((next, depth + 1));
                    }
                }
            }
        }
        last = Some(a);
    }
    Err(Error::DepthExhausted {
        step: nu,
        hyperplane: last.expect("search visited at least one node"),
    })
}

/// Hyperplanes of height `<= h` meeting `parent`, other than `pin`.
fn to_avoid(nu: usize, parent: &RatBox, h: u32, pin: &Hyperplane) -> Vec<AvoidedRecord> {
    hyperplanes_meeting(parent, h)
        .iter()
        .filter(|a| *a != pin)
        .map(|a| AvoidedRecord::new(nu, a))
        .collect()
}

/// Next pin in cylinder `c` of coordinate `k` (1-based): the anchor of the
/// shallowest extension with `Φ(q e_k) > floor`, smallest value first,
/// excluding the lower end of `c`.
fn next_anchor(spec: &ConstructionSpec, c: &Cylinder, k: usize, floor: &RootPower, nu: usize) -> Result<(Rational, Cylinder)> {
    let sys = c.system();
    let lo = c.anchor();
    let b = BigInt::from(sys.base());
    let mut den_bound = sys.offset().denom() * sys.scale().denom() * (&b - 1);
    for _ in 0..c.depth() {
        den_bound *= &b;
    }
    for d in c.depth() + 1..=c.depth() + ANCHOR_DEPTH_LIMIT {
        den_bound *= &b;
        if &phi_of_pin(&spec.norm, k, &den_bound)? <= floor {
            continue;
        }
        for (value, cyl) in c.rationals_in(d)?.take(CANDIDATES_PER_DEPTH) {
            if cyl.depth() != d {
                break;
            }
            if value == lo {
                continue;
            }
            if &phi_of_pin(&spec.norm, k, value.denom())? > floor {
                return Ok((value, cyl));
            }
        }
    }
    Err(Error::NoRationalFound { step: nu, coordinate: k })
}

/// Least `j >= 1` with `b^j > r`.
fn squeeze_depth(r: &Rational, b: u32) -> usize {
    let (num, den) = (r.numer(), r.denom());
    let bits = num.bits().saturating_sub(den.bits()) as f64;
    let mut j = ((bits / f64::from(b).log2()) as usize).saturating_sub(2).max(1);
    let big_b = BigInt::from(b);
    let mut lhs = big_b.pow(j as u32) * den;
    while &lhs <= num {
        lhs *= &big_b;
        j += 1;
    }
    j
}

impl<'a> State<'a> {
    fn start(spec: &'a ConstructionSpec) -> Result<Self> {
        let n = spec.product.dims();
        let cyls: Vec<Cylinder> = spec.product.factors().iter().cloned().map(Cylinder::root).collect();
        let value = cyls[0].anchor();
        let pin = Hyperplane::coordinate(1, &value, n)?;
        let h = spec.avoidance_schedule.height(1);
        let avoided = to_avoid(1, &hull_box(&cyls), h, &pin);
        let cyls = avoid(spec, 1, cyls, 0, &pin, h)?;
        let q = value.denom().clone();
        let step = Step {
            nu: 1,
            k: 1,
            p: value.numer().clone(),
            phi_of_q: phi_of_pin(&spec.norm, 1, &q)?,
            q,
            bound_used: None,
            hull: hull_box(&cyls),
            cylinders: records(&cyls),
        };
        Ok(State {
            spec,
            cyls,
            steps: vec![step],
            avoided,
        })
    }

    fn resume(spec: &'a ConstructionSpec, cert: &Certificate) -> Result<Self> {
        let last = cert
            .steps
            .last()
            .ok_or_else(|| Error::Invalid("certificate has no steps".into()))?;
        let cyls = spec
            .product
            .factors()
            .iter()
            .zip(&last.cylinders)
            .map(|(s, r)| Cylinder::parse(s.clone(), &r.prefix))
            .collect::<Result<Vec<_>>>()?;
        if cyls.len() != spec.product.dims() {
            return Err(Error::BadDims("cylinder list does not match the product".into()));
        }
        Ok(State {
            spec,
            cyls,
            steps: cert.steps.clone(),
            avoided: cert.avoided.clone(),
        })
    }

    fn advance(&mut self) -> Result<()> {
        let spec = self.spec;
        let n = self.cyls.len();
        let nu = self.steps.len() + 1;
        let prev = self.steps.last().unwrap().clone();
        let k_old = prev.k - 1;
        let k_new = 1 - k_old;

        // (a) the next pin, in the other coordinate
        let (value, anchor_cyl) = next_anchor(spec, &self.cyls[k_new], k_new + 1, &prev.phi_of_q, nu)?;
        let q_new = value.denom().clone();
        let phi_new = phi_of_pin(&spec.norm, k_new + 1, &q_new)?;
        let bound = spec.phi.lower(&phi_new);

        // (b) squeeze the old pinned coordinate above p/q
        let sys = self.cyls[k_old].system().clone();
        let old = &self.cyls[k_old];
        let j = squeeze_depth(&(Rational::from_integer(prev.q.clone()) * old.hull().width() / &bound), sys.base());
        let mut tail = vec![sys.min_digit(); j];
        tail.push(sys.max_digit());
        let mut next = self.cyls.clone();
        next[k_old] = old.extend(&tail)?;

        let parent = &self.cyls[k_new];
        let mut c = anchor_cyl;
        while c.hull().hi() >= parent.hull().hi() {
            c = min_child(&c);
        }
        next[k_new] = c;
        for (j, cyl) in next.iter_mut().enumerate().skip(2) {
            let s = self.cyls[j].system();
            *cyl = self.cyls[j].extend(&[s.min_digit(), s.max_digit()])?;
        }

        // (c) clear every other low-height hyperplane
        let pin = Hyperplane::coordinate(k_new + 1, &value, n)?;
        let h = spec.avoidance_schedule.height(nu);
        let parent_box = hull_box(&self.cyls);
        let avoided = to_avoid(nu, &parent_box, h, &pin);
        let next = avoid(spec, nu, next, k_new, &pin, h)?;

        self.steps.last_mut().unwrap().bound_used = Some(bound);
        self.steps.push(Step {
            nu,
            k: k_new + 1,
            p: value.numer().clone(),
            q: q_new,
            phi_of_q: phi_new,
            bound_used: None,
            hull: hull_box(&next),
            cylinders: records(&next),
        });
        self.avoided.extend(avoided);
        self.cyls = next;
        Ok(())
    }

    fn certificate(self) -> Certificate {
        let mut spec = self.spec.clone();
        spec.steps = self.steps.len();
        Certificate {
            version: CERT_VERSION,
            spec,
            final_box: hull_box(&self.cyls),
            steps: self.steps,
            avoided: self.avoided,
        }
    }
}

/// Runs `spec.steps` steps of the construction. Deterministic.
pub fn construct(spec: &ConstructionSpec) -> Result<Certificate> {
    spec.validate()?;
    let mut st = State::start(spec)?;
    while st.steps.len() < spec.steps {
        st.advance()?;
    }
    Ok(st.certificate())
}

/// Continues a certificate by `extra` steps.
pub fn extend(cert: &Certificate, extra: usize) -> Result<Certificate> {
    let spec = cert.spec.clone();
    spec.validate()?;
    let mut st = State::resume(&spec, cert)?;
    for _ in 0..extra {
        st.advance()?;
    }
    Ok(st.certificate())
}

/// The final box after `extra` further steps: an enclosure of the limit point.
pub fn refine_point(cert: &Certificate, extra: usize) -> Result<Vec<RatInterval>> {
    if extra == 0 {
        return Ok(cert.final_box.intervals().to_vec());
    }
    Ok(extend(cert, extra)?.final_box.intervals().to_vec())
}
