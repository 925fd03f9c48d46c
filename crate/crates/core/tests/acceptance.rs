//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tcoulomb::checks::degeneracy_grid;
use tcoulomb::frobenius::{count_nodes, solve_truncation};
use tcoulomb::spectrum::{
    degenerate_family, expectation_inverse_shifted_r, hellmann_feynman_check, interpolate,
    monotonicity_scan, split_table, strictly_decreasing, ExactTable, CURVE_ROOT_TOL,
};
use tcoulomb::{solve_state, validate_exact, RadialProblem, Result};

const TOL: f64 = 1e-12;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { passed, detail: detail.into() })
}

fn n0_exactness() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for l in 0..=10u32 {
        let s = &solve_truncation(0, l, TOL)?[0];
        worst = worst.max((s.alpha - 1.0).abs()).max((s.beta - f64::from(l + 2)).abs());
    }
    verdict(worst <= f64::EPSILON, format!("max deviation {worst:e}"))
}

fn n1_closed_form() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut ordered = true;
    for l in 0..=10u32 {
        let (a, b) = (f64::from(l + 2).sqrt(), f64::from(l + 6).sqrt());
        let alpha = [(3.0 * a - b) / (2.0 * a), (b + 3.0 * a) / (2.0 * a)];
        let c1 = [(a - b) / (2.0 * a), (b + a) / (2.0 * a)];
        let sols = solve_truncation(1, l, TOL)?;
        for k in 0..2 {
            let s = &sols[k];
            worst = worst
                .max((s.alpha - alpha[k]).abs())
                .max((s.beta - alpha[k] * f64::from(l + 3)).abs())
                .max((s.coeffs[0] - 1.0).abs())
                .max((s.coeffs[1] - c1[k]).abs());
        }
        ordered &= sols[0].energy_tilde > sols[1].energy_tilde;
    }
    verdict(worst <= 1e-12 && ordered, format!("max deviation {worst:e}, E(1,1) > E(1,2): {ordered}"))
}

fn root_realness() -> Result<Verdict> {
    let mut cases = 0;
    for n in 0..=20 {
        for l in 0..=10 {
            // refuses anything but n+1 simple positive roots
            let sols = solve_truncation(n, l, TOL)?;
            if sols.len() != n as usize + 1 {
                return verdict(false, format!("n={n} l={l}: {} roots", sols.len()));
            }
            cases += 1;
        }
    }
    verdict(true, format!("{cases} polynomials certified"))
}

fn node_theorem() -> Result<Verdict> {
    let mut cases = 0;
    for n in 0..=10 {
        for l in 0..=5 {
            for s in solve_truncation(n, l, TOL)? {
                let nodes = count_nodes(&s)?;
                if nodes != n + 1 - s.i {
                    return verdict(false, format!("n={n} l={l} i={}: {nodes} nodes", s.i));
                }
                cases += 1;
            }
        }
    }
    verdict(true, format!("{cases} states"))
}

fn breve_identity() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for n in 0..=20 {
        for l in 0..=10 {
            for s in solve_truncation(n, l, TOL)? {
                let expected = -0.5 / f64::from(n + l + 2).powi(2);
                worst = worst.max(((s.energy_tilde / (s.beta * s.beta) - expected) / expected).abs());
            }
        }
    }
    verdict(worst <= 1e-12, format!("max relative deviation {worst:e}"))
}

fn ode_residual() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for n in 0..=10 {
        for l in 0..=10 {
            for s in solve_truncation(n, l, TOL)? {
                let ef = s.eigenfunction()?;
                let (lo, hi) = (1e-3f64, 30.0 / s.alpha);
                for k in 0..50 {
                    let r = lo * (hi / lo).powf(f64::from(k) / 49.0);
                    worst = worst.max(ef.relative_ode_residual(r));
                    samples += 1;
                }
            }
        }
    }
    verdict(worst <= 1e-10, format!("max relative residual {worst:e} over {samples} samples"))
}

fn interpolation_at_40() -> Result<Verdict> {
    let curve = ExactTable::build(0, 20, CURVE_ROOT_TOL)?.curve(0)?;
    let alpha = interpolate(&curve, 40.0)?;
    let points = curve.len();
    verdict(
        points == 21 && (alpha - 6.856).abs() <= 1e-3,
        format!("alpha(40) = {alpha:.6} from {points} points"),
    )
}

fn oracle_benchmark() -> Result<Verdict> {
    let res = solve_state(&RadialProblem::new(40.0, 0)?, 0)?;
    let dev = (res.alpha - 6.854786377).abs();
    verdict(dev <= 1e-6, format!("alpha = {:.12}, deviation {dev:e}", res.alpha))
}

fn oracle_equivalence() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 0..=5 {
        for l in 0..=3 {
            for s in solve_truncation(n, l, TOL)? {
                worst = worst.max(validate_exact(&s, 1e-6)?.abs());
                cases += 1;
            }
        }
    }
    verdict(worst <= 1e-6, format!("max |oracle - exact| {worst:e} over {cases} states"))
}

fn hellmann_feynman() -> Result<Verdict> {
    // closed form for n=0, l=0 from Γ moments: ∫ r^k e^{-2r} = k!/2^{k+1}
    let m = |k: i32| (1..=k).map(f64::from).product::<f64>() / 2f64.powi(k + 1);
    let closed = -(m(2) + m(3)) / (m(2) + 2.0 * m(3) + m(4));
    let ground = &solve_truncation(0, 0, TOL)?[0];
    let rhs0 = expectation_inverse_shifted_r(ground, 1e-12)?;
    let mut worst = 0.0f64;
    for (n, i) in [(0u32, 1usize), (1, 1), (1, 2)] {
        let s = &solve_truncation(n, 0, TOL)?[i - 1];
        worst = worst.max(hellmann_feynman_check(s, 1e-12)?.discrepancy());
    }
    let closed_ok = (rhs0 - closed).abs() <= 1e-12;
    verdict(
        worst <= 1e-4 && closed_ok,
        format!("max |lhs - rhs| {worst:e}; n=0 rhs {rhs0:.15} vs {closed:.15}"),
    )
}

fn monotonicity() -> Result<Verdict> {
    let mut curves = 0;
    let table0 = ExactTable::build(0, 20, CURVE_ROOT_TOL)?;
    for nu in 0..=8 {
        if !table0.curve(nu)?.is_monotone() {
            return verdict(false, format!("alpha_{{{nu},0}} not increasing"));
        }
        curves += 1;
    }
    for l in 1..=9 {
        if !ExactTable::build(l, 20, CURVE_ROOT_TOL)?.curve(0)?.is_monotone() {
            return verdict(false, format!("alpha_{{0,{l}}} not increasing"));
        }
        curves += 1;
    }
    let scan = monotonicity_scan(9, 12.0, 20)?;
    if !strictly_decreasing(&scan) {
        return verdict(false, "alpha_{0,l}(12) not decreasing in l");
    }
    let mut betas = 0;
    for k in [2, 3] {
        let family = degenerate_family(k, 20, CURVE_ROOT_TOL)?;
        if !family.iter().all(|c| c.is_monotone()) {
            return verdict(false, format!("k={k} family has a non-increasing curve"));
        }
        curves += family.len();
        for beta in degeneracy_grid(&family) {
            if !strictly_decreasing(&split_table(&family, &[beta])) {
                return verdict(false, format!("k={k} ordering broken at beta={beta}"));
            }
            betas += 1;
        }
    }
    verdict(true, format!("{curves} curves increasing, beta=12 scan decreasing, {betas} degeneracy betas ordered"))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Result<Verdict>);
    let criteria: [Criterion; 11] = [
        (1, "n=0 exactness", Duration::from_secs(1), n0_exactness),
        (2, "n=1 closed form", Duration::from_secs(1), n1_closed_form),
        (3, "root realness and count", Duration::from_secs(120), root_realness),
        (4, "node theorem", Duration::from_secs(60), node_theorem),
        (5, "breve-energy identity", Duration::from_secs(30), breve_identity),
        (6, "ode residual", Duration::from_secs(60), ode_residual),
        (7, "interpolation at beta=40", Duration::from_secs(30), interpolation_at_40),
        (8, "oracle benchmark", Duration::from_secs(10), oracle_benchmark),
        (9, "oracle equivalence", Duration::from_secs(120), oracle_equivalence),
        (10, "hellmann-feynman", Duration::from_secs(30), hellmann_feynman),
        (11, "monotonicity", Duration::from_secs(120), monotonicity),
    ];
    let mut failures = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(v) => (v.passed && elapsed <= budget, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let over = if elapsed > budget { format!(" over budget {budget:?}") } else { String::new() };
        println!(
            "{} {id:>2} {name}: {detail} [{:.2}s{over}]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        failures += usize::from(!passed);
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
