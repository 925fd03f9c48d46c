//! Exact solutions from the terminating Frobenius series.
//!
//! With the ansatz `f(r) = r^(l+1) (1 + r) e^(-αr) Σ c_j r^j` the radial
//! equation `-f''/2 + l(l+1) f/(2r²) - β f/(r+1) = E f`, `α = √(-2E)`,
//! gives the three-term recurrence
//!
//! ```text
//! c_{j+2} = A_j c_{j+1} + B_j c_j,   c_{-1} = 0, c_0 = 1,
//! A_j = [2α(j+l+2) - j² - j(2l+5) - 2(2l+3)] / [(j+2)(j+2l+3)]
//! B_j = 2[α(j+l+2) - β] / [(j+2)(j+2l+3)]
//! ```
//!
//! The series terminates at degree `n` when `B_n = 0` and `c_{n+1} = 0`. The
//! first condition fixes `β = α(n+l+2)`; substituting it makes every `c_j` a
//! polynomial in `α` alone, and the roots of `c_{n+1}(α)` are the exact
//! eigenvalues.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::{exact_from_f64, ratio, to_f64, RationalPolynomial};
use crate::sturm::{polish_root, SturmChain};

/// Largest truncation order `n` accepted by default (polynomial degree 41).
pub const DEFAULT_MAX_ORDER: u32 = 40;

/// Newton polish steps applied after exact bisection.
const NEWTON_STEPS: usize = 3;

/// Roots closer than this, relative to `max(1, x)`, count as repeated.
pub const ROOT_SEPARATION_RTOL: f64 = 1e-9;
/// Precision of the rational root behind the node polynomial.
pub const NODE_ROOT_BITS: usize = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusConfig {
    pub max_order: u32,
}

impl Default for FrobeniusConfig {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER }
    }
}

impl FrobeniusConfig {
    fn max_degree(&self) -> usize {
        self.max_order as usize + 1
    }
}

/// `A_j` and `B_j` for one step, as polynomials in `α` with `β = α(n+l+2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    pub j: i64,
    pub l: u32,
    pub n: u32,
    pub a: RationalPolynomial,
    pub b: RationalPolynomial,
}

impl RecurrenceCoeffs {
    pub fn new(j: i64, l: u32, n: u32) -> Self {
        assert!(j >= -1, "recurrence index starts at -1");
        let l_ = i64::from(l);
        let n_ = i64::from(n);
        let den = (j + 2) * (j + 2 * l_ + 3);
        let a = RationalPolynomial::linear(
            ratio(-(j * j) - j * (2 * l_ + 5) - 2 * (2 * l_ + 3), den),
            ratio(2 * (j + l_ + 2), den),
        );
        let b = RationalPolynomial::linear(ratio(0, 1), ratio(2 * (j - n_), den));
        Self { j, l, n, a, b }
    }

    /// Unsubstituted `(A_j, B_j)` at arbitrary `(α, β)`.
    pub fn general(j: i64, l: u32, alpha: f64, beta: f64) -> (f64, f64) {
        let j = j as f64;
        let l = f64::from(l);
        let den = (j + 2.0) * (j + 2.0 * l + 3.0);
        let a = (2.0 * alpha * (j + l + 2.0) - j * j - j * (2.0 * l + 5.0) - 2.0 * (2.0 * l + 3.0))
            / den;
        let b = 2.0 * (alpha * (j + l + 2.0) - beta) / den;
        (a, b)
    }
}

/// One exact step: `c_{j+2} = A_j c_{j+1} + B_j c_j`.
pub fn recurrence_step(
    j: i64,
    l: u32,
    n: u32,
    c_prev: &RationalPolynomial,
    c_curr: &RationalPolynomial,
) -> Result<RationalPolynomial> {
    recurrence_step_with(&FrobeniusConfig::default(), j, l, n, c_prev, c_curr)
}

pub fn recurrence_step_with(
    config: &FrobeniusConfig,
    j: i64,
    l: u32,
    n: u32,
    c_prev: &RationalPolynomial,
    c_curr: &RationalPolynomial,
) -> Result<RationalPolynomial> {
    if j < -1 {
        return Err(Error::InvalidInput(format!("recurrence index j={j} < -1")));
    }
    let degree = (j + 2) as usize;
    if degree > config.max_degree() {
        return Err(Error::DegreeOverflow { degree, max: config.max_degree() });
    }
    let rc = RecurrenceCoeffs::new(j, l, n);
    Ok(&(&rc.a * c_curr) + &(&rc.b * c_prev))
}

/// `c_0, ..., c_{n+1}` as polynomials in `α` under `β = α(n+l+2)`.
pub fn series_coefficients(n: u32, l: u32) -> Result<Vec<RationalPolynomial>> {
    series_coefficients_with(&FrobeniusConfig::default(), n, l)
}

pub fn series_coefficients_with(
    config: &FrobeniusConfig,
    n: u32,
    l: u32,
) -> Result<Vec<RationalPolynomial>> {
    if n > config.max_order {
        return Err(Error::DegreeOverflow {
            degree: n as usize + 1,
            max: config.max_degree(),
        });
    }
    let mut cs = Vec::with_capacity(n as usize + 2);
    let mut prev = RationalPolynomial::zero();
    let mut curr = RationalPolynomial::one();
    cs.push(curr.clone());
    for j in -1..i64::from(n) {
        let next = recurrence_step_with(config, j, l, n, &prev, &curr)?;
        prev = std::mem::replace(&mut curr, next);
        cs.push(curr.clone());
    }
    Ok(cs)
}

/// `c_{n+1}(α)`, whose roots are the exact `α` values of order `n`.
pub fn truncation_polynomial(n: u32, l: u32) -> Result<RationalPolynomial> {
    let mut cs = series_coefficients(n, l)?;
    Ok(cs.pop().expect("at least c_0 and c_1"))
}

/// One exact eigenpair of the truncated Coulomb problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSolution {
    /// Truncation order: the node polynomial has degree `n`.
    pub n: u32,
    pub l: u32,
    /// Root index, 1-based, ascending in `alpha`.
    pub i: u32,
    pub alpha: f64,
    /// `alpha * (n + l + 2)`
    pub beta: f64,
    /// `c_0..=c_n` evaluated at `alpha`.
    pub coeffs: Vec<f64>,
    /// Radial quantum number, `n + 1 - i`.
    pub nodes: u32,
    pub energy_tilde: f64,
}

impl ExactSolution {
    /// `n + l + 2`, the hydrogen-like principal number of the breve frame.
    pub fn principal(&self) -> u32 {
        self.n + self.l + 2
    }

    /// `E / β²`, which equals `-1 / (2 (n+l+2)²)` for every exact solution.
    pub fn energy_breve(&self) -> f64 {
        self.energy_tilde / (self.beta * self.beta)
    }

    /// `Σ c_j(α*) r^j` with `α*` a rational within `2^-NODE_ROOT_BITS` of
    /// the exact root.
    ///
    /// The f64 coefficients are too ill-conditioned in `α` to resolve the
    /// outer nodes of weakly bound states, so the root is recomputed here.
    pub fn node_polynomial(&self) -> Result<RationalPolynomial> {
        Ok(self.eigenfunction()?.polynomial())
    }

    /// The eigenfunction in exact rational arithmetic.
    pub fn eigenfunction(&self) -> Result<ExactEigenfunction> {
        let cs = series_coefficients(self.n, self.l)?;
        let poly = &cs[self.n as usize + 1];
        let (a, q) = match refine_near(poly, self.alpha) {
            Some(pair) => pair,
            None => {
                let chain = SturmChain::new(poly);
                let brackets = chain.isolate_positive();
                let bracket = brackets.get((self.i as usize).wrapping_sub(1)).ok_or_else(|| {
                    Error::Integrity(format!(
                        "root index {} out of range for n={}, l={}",
                        self.i, self.n, self.l
                    ))
                })?;
                let width = BigRational::new(BigInt::one(), BigInt::one() << NODE_ROOT_BITS);
                let mid = chain.refine(bracket, &width).midpoint();
                (mid.numer().clone(), mid.denom().clone())
            }
        };
        Ok(ExactEigenfunction::new(self.l, self.principal(), &cs[..=self.n as usize], a, q))
    }
}

/// Bisect a sign change of `poly` within `1e-12` relative of `alpha` down to
/// `2^-NODE_ROOT_BITS`, on integers scaled by a fixed power of two.
///
/// Roots of a verified truncation polynomial are separated far beyond this
/// window, so a sign change here belongs to the root `alpha` approximates.
fn refine_near(poly: &RationalPolynomial, alpha: f64) -> Option<(BigInt, BigInt)> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return None;
    }
    let exponent = NODE_ROOT_BITS + 80;
    let q = BigInt::one() << exponent;
    let scaled = |x: f64| (exact_from_f64(x) * BigRational::from_integer(q.clone())).floor().to_integer();
    let coeffs = poly.primitive_integer();
    let d = coeffs.len().checked_sub(1)?;
    let sign = |m: &BigInt| eval_homogeneous(&coeffs, d, m, &q).sign();
    let mut lo = scaled(alpha * (1.0 - 1e-12));
    let mut hi = scaled(alpha * (1.0 + 1e-12)) + 1;
    let s_lo = sign(&lo);
    let s_hi = sign(&hi);
    if s_lo == s_hi || s_lo == Sign::NoSign || s_hi == Sign::NoSign {
        return None;
    }
    let width = BigInt::one() << (exponent - NODE_ROOT_BITS);
    while &hi - &lo > width {
        let mid: BigInt = (&lo + &hi) >> 1;
        match sign(&mid) {
            Sign::NoSign => return Some((mid, q)),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Some((lo + hi, q << 1))
}

/// `f = e^(-α*r) u(r)` held exactly, for evaluations where the f64 series
/// cancels catastrophically.
///
/// Multiplying the radial equation by `2r²(r+1)` turns each of its terms into
/// an integer polynomial in `r` over one shared denominator; these are
/// evaluated homogeneously at the binary value of `r`.
#[derive(Debug, Clone)]
pub struct ExactEigenfunction {
    alpha: BigRational,
    polynomial: Vec<BigInt>,
    u: Vec<BigInt>,
    u_den: BigInt,
    terms: [Vec<BigInt>; 4],
    terms_den: BigInt,
}

/// `Σ a_k p^k q^(d-k)`, i.e. `q^d` times the polynomial at `p/q`.
fn eval_homogeneous(a: &[BigInt], d: usize, p: &BigInt, q: &BigInt) -> BigInt {
    let coeff = |k: usize| a.get(k).cloned().unwrap_or_default();
    let mut acc = coeff(d);
    let mut q_pow = BigInt::one();
    for k in (0..d).rev() {
        q_pow *= q;
        acc = acc * p + coeff(k) * &q_pow;
    }
    acc
}

fn shift(a: &[BigInt], by: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); by];
    out.extend_from_slice(a);
    out
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    (0..a.len().max(b.len()))
        .map(|k| a.get(k).cloned().unwrap_or_default() + b.get(k).cloned().unwrap_or_default())
        .collect()
}

fn scale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * c).collect()
}

fn derivative(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().enumerate().skip(1).map(|(k, x)| x * BigInt::from(k)).collect()
}

impl ExactEigenfunction {
    /// `α* = a/q` with `q > 0`; `cs` are `c_0..=c_n` as polynomials in `α`.
    fn new(l: u32, principal: u32, cs: &[RationalPolynomial], a: BigInt, q: BigInt) -> Self {
        let den = cs
            .iter()
            .flat_map(|c| c.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let degree = cs.len() - 1;
        // (den · q^degree) · P(r)
        let polynomial: Vec<BigInt> = cs
            .iter()
            .map(|c| {
                let ints: Vec<BigInt> =
                    c.coeffs().iter().map(|x| x.numer() * (&den / x.denom())).collect();
                eval_homogeneous(&ints, degree, &a, &q)
            })
            .collect();
        let u_den = den * q.pow(degree as u32);
        // u = r^(l+1) (1 + r) P(r)
        let u = shift(&add(&polynomial, &shift(&polynomial, 1)), l as usize + 1);
        let du = derivative(&u);
        let d2u = derivative(&du);
        let with_shift = |v: &[BigInt]| add(&shift(v, 2), &shift(v, 3));
        let ll = BigInt::from(u64::from(l) * u64::from(l + 1));
        // over the common denominator u_den · q; the α² u terms cancel identically
        let terms = [
            scale(&with_shift(&d2u), &-&q),
            scale(&with_shift(&du), &(&a * 2)),
            scale(&add(&u, &shift(&u, 1)), &(&ll * &q)),
            scale(&shift(&u, 2), &(&a * BigInt::from(-2 * i64::from(principal)))),
        ];
        let terms_den = &u_den * &q;
        let alpha = BigRational::new(a, q);
        Self { alpha, polynomial, u, u_den, terms, terms_den }
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// A positive multiple of `Σ c_j r^j`.
    pub fn polynomial(&self) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(
            self.polynomial.iter().cloned().map(BigRational::from_integer).collect(),
        )
    }

    /// `f(r)`, rounded once from the exact polynomial factor.
    pub fn eval(&self, r: f64) -> f64 {
        let rq = exact_from_f64(r);
        let d = self.u.len().saturating_sub(1);
        let num = eval_homogeneous(&self.u, d, rq.numer(), rq.denom());
        let den = &self.u_den * rq.denom().pow(d as u32);
        ratio_to_f64(num, den) * (-to_f64(&self.alpha) * r).exp()
    }

    /// Terms of the radial equation times `2r²(r+1)`, sharing the positive
    /// denominator `terms_den · q^d`.
    fn scaled_terms(&self, r: f64) -> ([BigInt; 4], usize, BigRational) {
        let rq = exact_from_f64(r);
        let d = self.terms.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1);
        let t = std::array::from_fn(|k| eval_homogeneous(&self.terms[k], d, rq.numer(), rq.denom()));
        (t, d, rq)
    }

    /// Residual `-f''/2 + l(l+1) f/(2r²) - β f/(r+1) - E f` at `r > 0`.
    pub fn ode_residual(&self, r: f64) -> f64 {
        let (t, d, rq) = self.scaled_terms(r);
        let sum: BigInt = t.iter().sum();
        let den = &self.terms_den * rq.denom().pow(d as u32);
        let scaled = ratio_to_f64(sum, den);
        scaled / (2.0 * r * r * (r + 1.0)) * (-to_f64(&self.alpha) * r).exp()
    }

    /// Residual divided by the largest term of the equation, in exact arithmetic.
    pub fn relative_ode_residual(&self, r: f64) -> f64 {
        let (t, _, _) = self.scaled_terms(r);
        let sum: BigInt = t.iter().sum();
        let scale = t.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
        if scale.is_zero() {
            return 0.0;
        }
        ratio_to_f64(sum.abs(), scale)
    }
}

fn ratio_to_f64(num: BigInt, den: BigInt) -> f64 {
    to_f64(&BigRational::new_raw(num, den))
}

/// All `n + 1` exact solutions of order `n`, ascending in `α`.
///
/// Roots are bracketed exactly to width `tol` and then polished with a few
/// Newton steps that never leave the bracket.
pub fn solve_truncation(n: u32, l: u32, tol: f64) -> Result<Vec<ExactSolution>> {
    solve_truncation_with(&FrobeniusConfig::default(), n, l, tol)
}

pub fn solve_truncation_with(
    config: &FrobeniusConfig,
    n: u32,
    l: u32,
    tol: f64,
) -> Result<Vec<ExactSolution>> {
    if !(tol > 0.0 && tol < 1e-8) {
        return Err(Error::InvalidInput(format!("tol must lie in (0, 1e-8), got {tol}")));
    }
    let cs = series_coefficients_with(config, n, l)?;
    let poly = &cs[n as usize + 1];
    let expected = n as usize + 1;
    if poly.degree() != Some(expected) {
        return Err(Error::Integrity(format!(
            "c_{{n+1}} has degree {:?}, expected {expected} (n={n}, l={l})",
            poly.degree()
        )));
    }
    let chain = SturmChain::new(poly);
    if !chain.is_squarefree() {
        return Err(Error::Integrity(format!(
            "truncation polynomial has a repeated root (n={n}, l={l})"
        )));
    }
    let positive = chain.count_positive_roots();
    if positive != expected {
        return Err(Error::Integrity(format!(
            "truncation polynomial has {positive} positive and {} real roots, expected {expected} \
             positive (n={n}, l={l})",
            chain.count_real_roots()
        )));
    }
    let width = exact_from_f64(tol);
    let alphas: Vec<f64> = chain
        .isolate_positive()
        .iter()
        .map(|b| polish_root(poly, &chain.refine(b, &width), NEWTON_STEPS))
        .collect();
    check_separation(&alphas, "truncation polynomial", n, l)?;

    let principal = f64::from(n + l + 2);
    let solutions = alphas
        .iter()
        .enumerate()
        .map(|(k, &alpha)| {
            let i = k as u32 + 1;
            let at = exact_from_f64(alpha);
            let coeffs = cs[..=n as usize]
                .iter()
                .map(|c| to_f64(&c.eval(&at)))
                .collect();
            ExactSolution {
                n,
                l,
                i,
                alpha,
                beta: alpha * principal,
                coeffs,
                nodes: n + 1 - i,
                energy_tilde: -0.5 * alpha * alpha,
            }
        })
        .collect();
    Ok(solutions)
}

fn check_separation(roots: &[f64], what: &str, n: u32, l: u32) -> Result<()> {
    for w in roots.windows(2) {
        if w[1] - w[0] <= ROOT_SEPARATION_RTOL * w[1].abs().max(1.0) {
            return Err(Error::Integrity(format!(
                "{what} roots {} and {} coincide within tolerance (n={n}, l={l})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn squarefree_chain(poly: &RationalPolynomial) -> Result<SturmChain> {
    if poly.is_zero() {
        return Err(Error::Integrity("node polynomial vanishes identically".into()));
    }
    let chain = SturmChain::new(poly);
    if !chain.is_squarefree() {
        return Err(Error::Integrity(format!("node polynomial {poly} has a repeated root")));
    }
    Ok(chain)
}

/// Positive zeros of a node polynomial, ascending, to absolute accuracy
/// ~`2^-60`.
pub fn positive_zeros(poly: &RationalPolynomial) -> Result<Vec<f64>> {
    let chain = squarefree_chain(poly)?;
    let width = BigRational::new(BigInt::one(), BigInt::one() << 60);
    Ok(chain
        .isolate_positive()
        .iter()
        .map(|b| polish_root(poly, &chain.refine(b, &width), NEWTON_STEPS))
        .collect())
}

/// Nodes of the eigenfunction, ascending.
///
/// The prefactor `r^(l+1) (1+r) e^(-αr)` is positive on `r > 0`, so these are
/// the positive zeros of `Σ c_j r^j`.
pub fn node_positions(sol: &ExactSolution) -> Result<Vec<f64>> {
    let roots = positive_zeros(&sol.node_polynomial()?)?;
    check_separation(&roots, "node polynomial", sol.n, sol.l)?;
    Ok(roots)
}

/// Number of nodes of the eigenfunction on `(0, ∞)`, by exact Sturm count.
pub fn count_nodes(sol: &ExactSolution) -> Result<u32> {
    let chain = squarefree_chain(&sol.node_polynomial()?)?;
    Ok(chain.count_positive_roots() as u32)
}

/// Unnormalized `f(r) = r^(l+1) (1+r) e^(-αr) Σ c_j r^j`.
pub fn eval_wavefunction(sol: &ExactSolution, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let series = sol.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
    r.powi(sol.l as i32 + 1) * (1.0 + r) * (-sol.alpha * r).exp() * series
}

/// Largest relative violation of `c_0 = 1` and of the recurrence steps that
/// produce the stored `c_1..=c_n`.
///
/// The terminating step `c_{n+1} = 0` cancels too strongly to be checked in
/// f64; it is certified exactly when the roots are isolated.
pub fn recurrence_defect(sol: &ExactSolution) -> f64 {
    let c = |j: i64| -> f64 {
        if j < 0 || j > i64::from(sol.n) {
            0.0
        } else {
            sol.coeffs.get(j as usize).copied().unwrap_or(f64::NAN)
        }
    };
    let mut worst = (c(0) - 1.0).abs();
    for j in -1..i64::from(sol.n) - 1 {
        let (a, b) = RecurrenceCoeffs::general(j, sol.l, sol.alpha, sol.beta);
        let (t1, t2, next) = (a * c(j + 1), b * c(j), c(j + 2));
        let scale = t1.abs() + t2.abs() + next.abs();
        let defect = if scale == 0.0 { 0.0 } else { (next - t1 - t2).abs() / scale };
        worst = worst.max(if defect.is_nan() { f64::INFINITY } else { defect });
    }
    if sol.coeffs.len() != sol.n as usize + 1 {
        return f64::INFINITY;
    }
    worst
}

/// `(f, f', f'')` from analytic differentiation.
pub fn wavefunction_derivatives(sol: &ExactSolution, r: f64) -> (f64, f64, f64) {
    // f = e^(-αr) u with u = Σ q_k r^(k+l+1), q = (1 + r)·c
    let n = sol.coeffs.len();
    let q = (0..=n).map(|k| {
        let own = sol.coeffs.get(k).copied().unwrap_or(0.0);
        let below = if k > 0 { sol.coeffs[k - 1] } else { 0.0 };
        own + below
    });
    let (mut u, mut du, mut d2u) = (0.0, 0.0, 0.0);
    let l = sol.l as i32;
    for (k, qk) in q.enumerate() {
        let p = k as i32 + l + 1;
        let pf = f64::from(p);
        let rp = r.powi(p);
        u += qk * rp;
        du += qk * pf * rp / r;
        d2u += qk * pf * (pf - 1.0) * rp / (r * r);
    }
    let a = sol.alpha;
    let e = (-a * r).exp();
    (e * u, e * (du - a * u), e * (d2u - 2.0 * a * du + a * a * u))
}

fn residual_terms(sol: &ExactSolution, r: f64) -> [f64; 4] {
    let (f, _, d2f) = wavefunction_derivatives(sol, r);
    let l = f64::from(sol.l);
    [
        -0.5 * d2f,
        l * (l + 1.0) / (2.0 * r * r) * f,
        -sol.beta * f / (r + 1.0),
        -sol.energy_tilde * f,
    ]
}

/// `-f''/2 + l(l+1) f/(2r²) - β f/(r+1) - E f` at `r > 0`.
pub fn ode_residual(sol: &ExactSolution, r: f64) -> f64 {
    residual_terms(sol, r).iter().sum()
}

/// Residual divided by the largest individual term of the equation.
pub fn relative_ode_residual(sol: &ExactSolution, r: f64) -> f64 {
    let terms = residual_terms(sol, r);
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let res: f64 = terms.iter().sum();
    if scale == 0.0 {
        return res.abs();
    }
    res.abs() / scale
}
