//! Certified real-root counting and isolation with Sturm sequences.
//!
//! The chain is built over integer polynomials with a primitive
//! pseudo-remainder sequence, which keeps coefficient growth in check while
//! preserving the signs Sturm's theorem needs. Every count is exact.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polynomial::{exact_from_f64, to_f64, RationalPolynomial};

type IntPoly = Vec<BigInt>;

/// Evaluation point for sign-variation counts.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    NegInf,
    At(BigRational),
    PosInf,
}

/// Interval `(lo, hi]` known to hold exactly one real root. When the root is
/// rational and was hit exactly, `lo == hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }
}

fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn primitive(mut p: IntPoly) -> IntPoly {
    trim(&mut p);
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &g).collect()
}

fn derivative(p: &IntPoly) -> IntPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
fn pseudo_remainder(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.clone();
    if r.len() < b.len() {
        return r;
    }
    let da = r.len() - 1;
    for k in (db..=da).rev() {
        let top = r[k].clone();
        for c in r.iter_mut() {
            *c *= lc;
        }
        if !top.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[k - db + i] -= &top * bc;
            }
        }
        r.truncate(k);
    }
    trim(&mut r);
    r
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sign of `p(num/den)` with `den > 0`, computed on the homogenized form.
fn sign_at(p: &IntPoly, num: &BigInt, den: &BigInt) -> i8 {
    let Some((lead, rest)) = p.split_last() else {
        return 0;
    };
    let mut acc = lead.clone();
    let mut den_pow = BigInt::one();
    for c in rest.iter().rev() {
        den_pow *= den;
        acc = acc * num + c * &den_pow;
    }
    sign_of(&acc)
}

fn sign_at_point(p: &IntPoly, pt: &Point) -> i8 {
    match pt {
        Point::PosInf => p.last().map_or(0, sign_of),
        Point::NegInf => {
            let s = p.last().map_or(0, sign_of);
            if p.len().is_multiple_of(2) { -s } else { s }
        }
        Point::At(x) => sign_at(p, x.numer(), x.denom()),
    }
}

#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    /// Chain for a nonzero polynomial.
    pub fn new(p: &RationalPolynomial) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let p0 = p.primitive_integer();
        let mut chain = vec![p0.clone()];
        if p0.len() == 1 {
            return Self { chain };
        }
        chain.push(primitive(derivative(&p0)));
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.len() == 1 {
                break;
            }
            let delta = a.len() - b.len();
            let mut r = pseudo_remainder(a, b);
            if r.is_empty() {
                break;
            }
            // -rem(a, b) up to a positive factor
            let lc_negative = b[b.len() - 1].is_negative();
            let flip = !(lc_negative && (delta + 1) % 2 == 1);
            if flip {
                for c in r.iter_mut() {
                    *c = -std::mem::take(c);
                }
            }
            chain.push(primitive(r));
        }
        Self { chain }
    }

    pub fn degree(&self) -> usize {
        self.chain[0].len() - 1
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// True when the last chain element (the gcd of p and p') is constant.
    pub fn is_squarefree(&self) -> bool {
        self.chain.last().is_some_and(|g| g.len() == 1)
    }

    pub fn sign(&self, pt: &Point) -> i8 {
        sign_at_point(&self.chain[0], pt)
    }

    pub fn variations(&self, pt: &Point) -> usize {
        let mut count = 0;
        let mut prev = 0i8;
        for q in &self.chain {
            let s = sign_at_point(q, pt);
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &Point, hi: &Point) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn count_real_roots(&self) -> usize {
        self.count_roots(&Point::NegInf, &Point::PosInf)
    }

    /// Distinct roots in `(0, ∞)`; a root at zero is not counted.
    pub fn count_positive_roots(&self) -> usize {
        self.count_roots(&Point::At(BigRational::zero()), &Point::PosInf)
    }

    /// Power of two strictly above the magnitude of every root (Cauchy bound).
    pub fn root_bound(&self) -> BigRational {
        let p = &self.chain[0];
        let lead = p[p.len() - 1].abs();
        let max = p[..p.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let ceil = max.div_ceil(&lead) + BigInt::one();
        let mut b = BigInt::one();
        while b <= ceil {
            b <<= 1;
        }
        BigRational::from_integer(b)
    }

    /// Isolating brackets for the distinct roots in `(lo, hi]`, ascending.
    pub fn isolate(&self, lo: BigRational, hi: BigRational) -> Vec<Bracket> {
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi)];
        while let Some((a, b)) = stack.pop() {
            let count = self.count_roots(&Point::At(a.clone()), &Point::At(b.clone()));
            if count == 0 {
                continue;
            }
            if count == 1 {
                out.push(self.settle(a, b));
                continue;
            }
            // half-open intervals: a root landing on `mid` belongs to the left half
            let mid = (&a + &b) / BigInt::from(2);
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Isolating brackets for all positive roots.
    pub fn isolate_positive(&self) -> Vec<Bracket> {
        self.isolate(BigRational::zero(), self.root_bound())
    }

    /// Isolating brackets for all real roots.
    pub fn isolate_all(&self) -> Vec<Bracket> {
        let b = self.root_bound();
        self.isolate(-b.clone(), b)
    }

    fn settle(&self, lo: BigRational, hi: BigRational) -> Bracket {
        if self.sign(&Point::At(hi.clone())) == 0 {
            return Bracket { lo: hi.clone(), hi };
        }
        Bracket { lo, hi }
    }

    /// Shrink a single-root bracket of a squarefree polynomial below `width`
    /// by exact bisection on the sign of the polynomial.
    pub fn refine(&self, bracket: &Bracket, width: &BigRational) -> Bracket {
        let mut lo = bracket.lo.clone();
        let mut hi = bracket.hi.clone();
        if lo == hi {
            return Bracket { lo, hi };
        }
        let p = &self.chain[0];
        let s_hi = sign_at(p, hi.numer(), hi.denom());
        while &hi - &lo > *width {
            let mid = (&lo + &hi) / BigInt::from(2);
            let s = sign_at(p, mid.numer(), mid.denom());
            match s.cmp(&0) {
                Ordering::Equal => return Bracket { lo: mid.clone(), hi: mid },
                _ if s == s_hi => hi = mid,
                _ => lo = mid,
            }
        }
        Bracket { lo, hi }
    }
}

/// Newton steps with exactly evaluated `p/p'`, kept inside `bracket`.
pub fn polish_root(p: &RationalPolynomial, bracket: &Bracket, steps: usize) -> f64 {
    let lo = to_f64(&bracket.lo);
    let hi = to_f64(&bracket.hi);
    let mut x = to_f64(&bracket.midpoint());
    if lo == hi {
        return lo;
    }
    let dp = p.derivative();
    for _ in 0..steps {
        let xq = exact_from_f64(x);
        let fx = p.eval(&xq);
        if fx.is_zero() {
            break;
        }
        let dfx = dp.eval(&xq);
        if dfx.is_zero() {
            break;
        }
        let next = x - to_f64(&(fx / dfx));
        if !(next >= lo && next <= hi) || next == x {
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::ratio;
    use proptest::prelude::*;

    fn poly_from_roots(roots: &[i64]) -> RationalPolynomial {
        roots.iter().fold(RationalPolynomial::one(), |acc, &r| {
            &acc * &RationalPolynomial::from_i64(&[-r, 1])
        })
    }

    #[test]
    fn counts_sqrt_two() {
        let p = RationalPolynomial::from_i64(&[-2, 0, 1]);
        let s = SturmChain::new(&p);
        assert_eq!(s.count_real_roots(), 2);
        assert_eq!(s.count_positive_roots(), 1);
        assert!(s.is_squarefree());
        let roots = s.isolate_all();
        assert_eq!(roots.len(), 2);
        let r = s.refine(&roots[1], &ratio(1, 1 << 40));
        let x = polish_root(&p, &r, 3);
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn complex_roots_are_not_counted() {
        // (x² + 1)(x - 3)
        let p = &RationalPolynomial::from_i64(&[1, 0, 1]) * &RationalPolynomial::from_i64(&[-3, 1]);
        let s = SturmChain::new(&p);
        assert_eq!(s.count_real_roots(), 1);
        assert_eq!(s.count_positive_roots(), 1);
    }

    #[test]
    fn repeated_root_detected() {
        let p = poly_from_roots(&[1, 1, 4]);
        let s = SturmChain::new(&p);
        assert!(!s.is_squarefree());
        assert_eq!(s.count_real_roots(), 2);
    }

    #[test]
    fn zero_root_is_not_positive() {
        let p = poly_from_roots(&[0, 2, -5]);
        let s = SturmChain::new(&p);
        assert_eq!(s.count_real_roots(), 3);
        assert_eq!(s.count_positive_roots(), 1);
    }

    #[test]
    fn exact_rational_roots_hit_at_midpoints() {
        // Root bound 16 puts 8, 4 and 12 on bisection midpoints.
        let p = poly_from_roots(&[4, 8, 12]);
        let s = SturmChain::new(&p);
        let roots: Vec<f64> = s
            .isolate_positive()
            .iter()
            .map(|b| polish_root(&p, &s.refine(b, &ratio(1, 1 << 30)), 3))
            .collect();
        assert_eq!(roots, vec![4.0, 8.0, 12.0]);
    }

    #[test]
    fn constant_polynomial() {
        let s = SturmChain::new(&RationalPolynomial::from_i64(&[5]));
        assert_eq!(s.count_real_roots(), 0);
        assert!(s.isolate_all().is_empty());
    }

    proptest! {
        #[test]
        fn isolates_integer_roots(mut roots in prop::collection::btree_set(-30i64..30, 1..7)
            .prop_map(|s| s.into_iter().collect::<Vec<_>>()), lead in prop::sample::select(vec![-3i64, -1, 2, 5])) {
            let p = poly_from_roots(&roots).scale(&ratio(lead, 1));
            let s = SturmChain::new(&p);
            prop_assert_eq!(s.count_real_roots(), roots.len());
            prop_assert_eq!(s.count_positive_roots(), roots.iter().filter(|&&r| r > 0).count());
            let found: Vec<f64> = s
                .isolate_all()
                .iter()
                .map(|b| polish_root(&p, &s.refine(b, &ratio(1, 1 << 30)), 3))
                .collect();
            roots.sort();
            let expect: Vec<f64> = roots.iter().map(|&r| r as f64).collect();
            prop_assert_eq!(found.len(), expect.len());
            for (f, e) in found.iter().zip(&expect) {
                prop_assert!((f - e).abs() < 1e-9, "{} vs {}", f, e);
            }
        }
    }
}
