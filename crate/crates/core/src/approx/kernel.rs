//! Exhaustive evaluation of `min_q max_i ⟨Σ_j a_ij q_j⟩` over boxes of
//! integer vectors.
//!
//! The matrix entries are reduced mod 1 and written over one denominator
//! `D`, either exactly (rational entries with a small common denominator)
//! or as outward-rounded dyadic enclosures with `D = 2^bits`. Row values
//! are then integer intervals `[S_lo, S_lo + w]` and distances to `D·ℤ`
//! are tracked in units of `1/(2D)`, so every comparison is an integer one.
//!
//! Only vectors whose first nonzero coordinate is positive are visited,
//! since `q` and `−q` give the same value. Ties are broken by the order
//! `0 < 1 < −1 < 2 < −2 < …` applied lexicographically.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::arith::rational::pow2;
use crate::error::Result;
use crate::scalar::GridInt;
use crate::{RatInterval, Rational, RealDescriptor};

/// Admissible values of one coordinate: a union of inclusive ranges.
pub type Ranges = Vec<(i64, i64)>;

/// A product of per-coordinate [`Ranges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub coords: Vec<Ranges>,
}

impl Piece {
    fn count(&self) -> u128 {
        self.coords
            .iter()
            .map(|r| r.iter().map(|&(a, b)| (b - a + 1).max(0) as u128).sum::<u128>())
            .product()
    }

    fn max_abs(&self) -> Vec<i64> {
        self.coords
            .iter()
            .map(|r| r.iter().map(|&(a, b)| a.abs().max(b.abs())).max().unwrap_or(0))
            .collect()
    }
}

/// Canonical vectors of the box `|q_j| <= outer_j` outside the box
/// `|q_j| <= inner_j` (`inner = None` removes only the origin).
pub fn shell_pieces(outer: &[i64], inner: Option<&[i64]>) -> Vec<Piece> {
    let n = outer.len();
    let zeros = vec![0i64; n];
    let inner = inner.unwrap_or(&zeros);
    let mut out = Vec::new();
    for e in 0..n {
        if outer[e] <= inner[e] {
            continue;
        }
        for f in 0..=e {
            if f < e && inner[f] == 0 {
                continue;
            }
            let mut coords = Vec::with_capacity(n);
            for i in 0..n {
                let r = if i < f {
                    vec![(0, 0)]
                } else if i == f && f < e {
                    vec![(1, inner[f])]
                } else if i < e {
                    vec![(-inner[i], inner[i])]
                } else if i == e && f == e {
                    vec![(inner[e] + 1, outer[e])]
                } else if i == e {
                    vec![(-outer[e], -inner[e] - 1), (inner[e] + 1, outer[e])]
                } else {
                    vec![(-outer[i], outer[i])]
                };
                coords.push(r);
            }
            out.push(Piece { coords });
        }
    }
    out
}

/// `a` before `b` in the tie-break order.
pub fn key_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let key = |x: i64| (x.unsigned_abs(), x < 0);
    a.iter().map(|&x| key(x)).cmp(b.iter().map(|&x| key(x)))
}

fn key_cmp_split(prefix: &[i64], last: i64, b: &[i64]) -> Ordering {
    let key = |x: i64| (x.unsigned_abs(), x < 0);
    prefix
        .iter()
        .chain(std::iter::once(&last))
        .map(|&x| key(x))
        .cmp(b.iter().map(|&x| key(x)))
}

/// Smallest value found: `lo`/`hi` in units of `1/(2D)`.
#[derive(Clone, Debug)]
struct Best<T> {
    lo: T,
    hi: T,
    q: Vec<i64>,
}

fn merge<T: GridInt>(a: Option<Best<T>>, b: Option<Best<T>>) -> Option<Best<T>> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let lo = if a.lo <= b.lo { a.lo.clone() } else { b.lo.clone() };
            let a_wins = match a.hi.cmp(&b.hi) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => key_cmp(&a.q, &b.q) != Ordering::Greater,
            };
            let mut w = if a_wins { a } else { b };
            w.lo = lo;
            Some(w)
        }
    }
}

struct Kernel<T> {
    rows: usize,
    cols: usize,
    den: T,
    two_den: T,
    three_den: T,
    lo: Vec<T>,
    hi: Vec<T>,
    delta: Vec<T>,
}

impl<T: GridInt> Kernel<T> {
    fn from_grid(g: &FormGrid) -> Option<Self> {
        let conv = |v: &[BigInt]| v.iter().map(T::from_bigint).collect::<Option<Vec<T>>>();
        let den = T::from_bigint(&g.den)?;
        let lo = conv(&g.lo)?;
        let hi = conv(&g.hi)?;
        let delta = hi.iter().zip(&lo).map(|(h, l)| h.clone() - l.clone()).collect();
        Some(Kernel {
            rows: g.rows,
            cols: g.cols,
            two_den: den.clone() + den.clone(),
            three_den: den.clone() + den.clone() + den.clone(),
            den,
            lo,
            hi,
            delta,
        })
    }

    /// `2·dist(x, Dℤ)` for `0 <= x < 2D`.
    fn dist2(&self, x: &T) -> T {
        let y = if x >= &self.den { x.clone() - self.den.clone() } else { x.clone() };
        let a = y.clone() + y.clone();
        let b = self.two_den.clone() - a.clone();
        if a <= b {
            a
        } else {
            b
        }
    }

    /// Bounds on `2D·⟨x/D⟩` for `x ∈ [r, r + w]`, `0 <= r < D`, `w >= 0`.
    fn row_bounds(&self, r: &T, w: &T) -> (T, T) {
        if w >= &self.den {
            return (T::zero(), self.den.clone());
        }
        let end = r.clone() + w.clone();
        let lo = if r.is_zero() || end >= self.den {
            T::zero()
        } else {
            let (a, b) = (self.dist2(r), self.dist2(&end));
            if a <= b {
                a
            } else {
                b
            }
        };
        let r2 = r.clone() + r.clone();
        let e2 = end.clone() + end.clone();
        let hi = if (r2 <= self.den && self.den <= e2) || (r2 <= self.three_den && self.three_den <= e2) {
            self.den.clone()
        } else {
            let (a, b) = (self.dist2(r), self.dist2(&end));
            if a >= b {
                a
            } else {
                b
            }
        };
        (lo, hi)
    }

    fn t(v: i64) -> T {
        T::from_i64(v).unwrap()
    }

    /// Exact bounds for a single vector.
    fn eval(&self, q: &[i64]) -> (T, T) {
        let mut lo = T::zero();
        let mut hi = T::zero();
        for i in 0..self.rows {
            let mut s = T::zero();
            let mut w = T::zero();
            for (j, &qj) in q.iter().enumerate() {
                let k = i * self.cols + j;
                let x = if qj >= 0 { &self.lo[k] } else { &self.hi[k] };
                s = s + Self::t(qj) * x.clone();
                w = w + Self::t(qj.abs()) * self.delta[k].clone();
            }
            let r = s.mod_floor(&self.den);
            let (l, h) = self.row_bounds(&r, &w);
            if l > lo {
                lo = l;
            }
            if h > hi {
                hi = h;
            }
        }
        (lo, hi)
    }

    /// Scans all vectors with the given prefix and last coordinate in `last`.
    fn scan_line(&self, prefix: &[i64], last: &Ranges) -> Option<Best<T>> {
        let c = self.cols - 1;
        let mut p_lo = vec![T::zero(); self.rows];
        let mut p_w = vec![T::zero(); self.rows];
        for i in 0..self.rows {
            for (j, &qj) in prefix.iter().enumerate() {
                let k = i * self.cols + j;
                let x = if qj >= 0 { &self.lo[k] } else { &self.hi[k] };
                p_lo[i] = p_lo[i].clone() + Self::t(qj) * x.clone();
                p_w[i] = p_w[i].clone() + Self::t(qj.abs()) * self.delta[k].clone();
            }
        }
        let mut best: Option<Best<T>> = None;
        let mut r = vec![T::zero(); self.rows];
        let mut w = vec![T::zero(); self.rows];
        let mut step = vec![T::zero(); self.rows];
        let mut dw = vec![T::zero(); self.rows];
        for &(a, b) in last {
            for (from, to, neg) in [(a, b.min(-1), true), (a.max(0), b, false)] {
                if from > to {
                    continue;
                }
                for i in 0..self.rows {
                    let k = i * self.cols + c;
                    let x = if neg { &self.hi[k] } else { &self.lo[k] };
                    r[i] = (p_lo[i].clone() + Self::t(from) * x.clone()).mod_floor(&self.den);
                    w[i] = p_w[i].clone() + Self::t(from.abs()) * self.delta[k].clone();
                    step[i] = x.mod_floor(&self.den);
                    dw[i] = if neg { -self.delta[k].clone() } else { self.delta[k].clone() };
                }
                for v in from..=to {
                    let mut lo = T::zero();
                    let mut hi = T::zero();
                    for i in 0..self.rows {
                        let (l, h) = self.row_bounds(&r[i], &w[i]);
                        if l > lo {
                            lo = l;
                        }
                        if h > hi {
                            hi = h;
                        }
                    }
                    match &mut best {
                        None => {
                            let mut q = prefix.to_vec();
                            q.push(v);
                            best = Some(Best { lo, hi, q });
                        }
                        Some(bst) => {
                            if lo < bst.lo {
                                bst.lo = lo;
                            }
                            let better = match hi.cmp(&bst.hi) {
                                Ordering::Less => true,
                                Ordering::Greater => false,
                                Ordering::Equal => key_cmp_split(prefix, v, &bst.q) == Ordering::Less,
                            };
                            if better {
                                bst.hi = hi;
                                bst.q.clear();
                                bst.q.extend_from_slice(prefix);
                                bst.q.push(v);
                            }
                        }
                    }
                    for i in 0..self.rows {
                        r[i] = r[i].clone() + step[i].clone();
                        if r[i] >= self.den {
                            r[i] = r[i].clone() - self.den.clone();
                        }
                        w[i] = w[i].clone() + dw[i].clone();
                    }
                }
            }
        }
        best
    }

    fn scan_piece(&self, piece: &Piece) -> Option<Best<T>> {
        let c = self.cols - 1;
        let values: Vec<Vec<i64>> = piece.coords[..c]
            .iter()
            .map(|r| r.iter().flat_map(|&(a, b)| a..=b).collect())
            .collect();
        if values.iter().any(|v| v.is_empty()) {
            return None;
        }
        let total: u64 = values.iter().map(|v| v.len() as u64).product();
        let last = &piece.coords[c];
        (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut prefix = vec![0i64; c];
                for j in (0..c).rev() {
                    let m = values[j].len() as u64;
                    prefix[j] = values[j][(idx % m) as usize];
                    idx /= m;
                }
                self.scan_line(&prefix, last)
            })
            .reduce(|| None, merge)
    }
}

/// Result of a scan: `min_q lo_q`, `min_q hi_q`, and the witness of the latter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub value: RatInterval,
    pub witness: Vec<i64>,
}

/// A matrix of reals prepared for integer evaluation.
#[derive(Clone, Debug)]
pub struct FormGrid {
    rows: usize,
    cols: usize,
    den: BigInt,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
    exact: bool,
}

impl FormGrid {
    /// `entries` is row-major. Rational entries whose common denominator has
    /// at most `max(bits, 120)` bits are used exactly; otherwise every
    /// entry is enclosed to `2^{-bits}`.
    pub fn build(entries: &[Vec<RealDescriptor>], bits: u64) -> Result<Self> {
        let rows = entries.len();
        let cols = entries[0].len();
        let exact: Option<Vec<Rational>> = entries.iter().flatten().map(|d| d.exact_value()).collect();
        if let Some(vals) = exact {
            let den = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            if den.bits() <= bits.max(120) {
                let lo: Vec<BigInt> = vals
                    .iter()
                    .map(|v| {
                        let f = v - v.floor();
                        f.numer() * (&den / f.denom())
                    })
                    .collect();
                return Ok(FormGrid {
                    rows,
                    cols,
                    den,
                    hi: lo.clone(),
                    lo,
                    exact: true,
                });
            }
        }
        let den = BigInt::one() << bits as usize;
        let scale = Rational::from_integer(den.clone());
        let width = pow2(-(bits as i64) - 2);
        let mut lo = Vec::with_capacity(rows * cols);
        let mut hi = Vec::with_capacity(rows * cols);
        for d in entries.iter().flatten() {
            let e = d.enclose(&width)?;
            let k = e.lo().floor();
            lo.push(((e.lo() - &k) * &scale).floor().to_integer());
            hi.push(((e.hi() - &k) * &scale).ceil().to_integer());
        }
        Ok(FormGrid {
            rows,
            cols,
            den,
            lo,
            hi,
            exact: false,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn fits_i128(&self, qsum: i64) -> bool {
        let bound: BigInt = (BigInt::from(qsum) + 2) * (&self.den + 2u32) * 8u32;
        bound.bits() < 127
    }

    fn to_rational(&self, x: &BigInt) -> Rational {
        Rational::new(x.clone(), &self.den * 2u32)
    }

    /// The minimum over all vectors of all pieces, or `None` if they are empty.
    pub fn scan(&self, pieces: &[Piece]) -> Option<ScanResult> {
        let pieces: Vec<&Piece> = pieces.iter().filter(|p| p.count() > 0).collect();
        if pieces.is_empty() {
            return None;
        }
        let qsum = pieces
            .iter()
            .map(|p| p.max_abs().iter().sum::<i64>())
            .max()
            .unwrap();
        let best = if self.fits_i128(qsum) {
            let k = Kernel::<i128>::from_grid(self).unwrap();
            pieces
                .iter()
                .map(|p| k.scan_piece(p))
                .fold(None, merge)
                .map(|b| (BigInt::from(b.lo), BigInt::from(b.hi), b.q))
        } else {
            let k = Kernel::<BigInt>::from_grid(self).unwrap();
            pieces
                .iter()
                .map(|p| k.scan_piece(p))
                .fold(None, merge)
                .map(|b| (b.lo, b.hi, b.q))
        }?;
        Some(ScanResult {
            value: RatInterval::new(self.to_rational(&best.0), self.to_rational(&best.1)).unwrap(),
            witness: best.2,
        })
    }

    /// Enclosure of `max_i ⟨Σ_j a_ij q_j⟩` for one vector.
    pub fn eval(&self, q: &[i64]) -> RatInterval {
        let qsum = q.iter().map(|x| x.abs()).sum();
        let (lo, hi) = if self.fits_i128(qsum) {
            let (l, h) = Kernel::<i128>::from_grid(self).unwrap().eval(q);
            (BigInt::from(l), BigInt::from(h))
        } else {
            Kernel::<BigInt>::from_grid(self).unwrap().eval(q)
        };
        RatInterval::new(self.to_rational(&lo), self.to_rational(&hi)).unwrap()
    }
}

/// Straightforward reference: the same minimum by evaluating every vector
/// of the box with exact rationals. Only for rational matrices.
pub fn naive_min(entries: &[Vec<Rational>], bounds: &[i64]) -> Option<(Rational, Vec<i64>)> {
    use crate::arith::rational::nearest_int_dist;
    let n = bounds.len();
    let mut best: Option<(Rational, Vec<i64>)> = None;
    let mut q: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let first = q.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x > 0) {
            let v = entries
                .iter()
                .map(|row| {
                    let s: Rational = row.iter().zip(&q).map(|(a, &x)| a * Rational::from_integer(x.into())).sum();
                    nearest_int_dist(&s)
                })
                .max()
                .unwrap();
            let better = match &best {
                None => true,
                Some((b, bq)) => v < *b || (v == *b && key_cmp(&q, bq) == Ordering::Less),
            };
            if better {
                best = Some((v, q.clone()));
            }
        }
        let mut j = n;
        loop {
            if j == 0 {
                return best;
            }
            j -= 1;
            if q[j] < bounds[j] {
                q[j] += 1;
                break;
            }
            q[j] = -bounds[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::arith::rational::{int, rat};

    fn ex(v: &[Rational]) -> Vec<RealDescriptor> {
        v.iter().map(|x| RealDescriptor::exact(x.clone())).collect()
    }

    fn enumerate(pieces: &[Piece]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for p in pieces {
            let mut acc: Vec<Vec<i64>> = vec![vec![]];
            for r in &p.coords {
                let vals: Vec<i64> = r.iter().flat_map(|&(a, b)| a..=b).collect();
                acc = acc
                    .into_iter()
                    .flat_map(|q| {
                        vals.iter().map(move |&v| {
                            let mut q = q.clone();
                            q.push(v);
                            q
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
        out
    }

    #[test]
    fn pieces_partition_the_shell() {
        for (outer, inner) in [
            (vec![3, 2], Some(vec![1, 1])),
            (vec![2, 2, 2], None),
            (vec![4, 1], Some(vec![2, 1])),
            (vec![2, 3, 1], Some(vec![2, 1, 0])),
            (vec![5], Some(vec![2])),
        ] {
            let got = enumerate(&shell_pieces(&outer, inner.as_deref()));
            let set: HashSet<_> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len());
            let inner = inner.unwrap_or(vec![0; outer.len()]);
            let mut want = HashSet::new();
            for q in enumerate(&[Piece {
                coords: outer.iter().map(|&b| vec![(-b, b)]).collect(),
            }]) {
                let canon = q.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
                let outside = q.iter().zip(&inner).any(|(x, b)| x.abs() > *b);
                if canon && outside {
                    want.insert(q);
                }
            }
            assert_eq!(set, want);
        }
    }

    #[test]
    fn tie_break_order() {
        assert_eq!(key_cmp(&[1, 1], &[1, -1]), Ordering::Less);
        assert_eq!(key_cmp(&[0, 3], &[2, 0]), Ordering::Less);
        assert_eq!(key_cmp(&[1, -1], &[1, 2]), Ordering::Less);
    }

    #[test]
    fn small_dual_example() {
        let g = FormGrid::build(&[ex(&[rat(1, 2), rat(1, 3)])], 96).unwrap();
        assert!(g.is_exact());
        let r = g.scan(&shell_pieces(&[1, 1], None)).unwrap();
        assert_eq!(r.value, RatInterval::point(rat(1, 6)));
        assert_eq!(r.witness, vec![1, 1]);
        let r = g.scan(&shell_pieces(&[3, 3], None)).unwrap();
        assert_eq!(r.value, RatInterval::point(int(0)));
        assert_eq!(r.witness, vec![0, 3]);
    }

    #[test]
    fn dyadic_enclosures_contain_high_precision_minimum() {
        let xi = vec![RealDescriptor::cbrt2(), RealDescriptor::cbrt4()];
        let dy = FormGrid::build(&[xi.clone()], 96).unwrap();
        assert!(!dy.is_exact());
        let fine: Vec<Rational> = xi.iter().map(|d| d.enclose(&pow2(-200)).unwrap().lo().clone()).collect();
        let (v, q) = naive_min(&[fine], &[6, 6]).unwrap();
        let r = dy.scan(&shell_pieces(&[6, 6], None)).unwrap();
        let eps = pow2(-190);
        assert!(r.value.lo() <= &(&v + &eps) && &(&v - &eps) <= r.value.hi());
        assert!(r.value.width() < pow2(-80));
        assert_eq!(r.witness, q);
    }

    #[test]
    fn bigint_path_agrees_with_i128() {
        let xs = [rat(1, 5), rat(2, 11), rat(3, 13)];
        let g = FormGrid::build(&[ex(&xs)], 96).unwrap();
        let p = shell_pieces(&[4, 4, 4], None);
        let fast = g.scan(&p).unwrap();
        let k = Kernel::<BigInt>::from_grid(&g).unwrap();
        let slow = p.iter().map(|x| k.scan_piece(x)).fold(None, merge).unwrap();
        assert_eq!(fast.witness, slow.q);
        assert_eq!(fast.value.hi(), &g.to_rational(&slow.hi));
    }

    proptest::proptest! {
        #[test]
        fn matches_naive_minimum(a in 0i64..60, b in 1i64..60, c in -60i64..60, d in 1i64..60,
                                  e in -9i64..9, f in 1i64..9, rows in 1usize..3, bx in 1i64..6, by in 1i64..6) {
            let m: Vec<Vec<Rational>> = (0..rows)
                .map(|i| vec![rat(a + i as i64, b), rat(c - 3 * i as i64, d)])
                .chain(std::iter::once(vec![rat(e, f), rat(1, 2)]))
                .take(rows)
                .collect();
            let g = FormGrid::build(&m.iter().map(|r| ex(r)).collect::<Vec<_>>(), 96).unwrap();
            let r = g.scan(&shell_pieces(&[bx, by], None)).unwrap();
            let (v, q) = naive_min(&m, &[bx, by]).unwrap();
            proptest::prop_assert_eq!(r.value, RatInterval::point(v.clone()));
            proptest::prop_assert_eq!(r.witness.clone(), q);
            proptest::prop_assert_eq!(g.eval(&r.witness), RatInterval::point(v));
        }
    }
}
