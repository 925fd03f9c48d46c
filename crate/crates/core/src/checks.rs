//! Invariant suites run by `tcoulomb check`.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::frobenius::{count_nodes, recurrence_defect, solve_truncation, ExactSolution};
use crate::oracle::validate_exact;
use crate::spectrum::{
    common_range, degenerate_family, hellmann_feynman_check, monotonicity_scan,
    split_table, strictly_decreasing, ExactTable, SpectralCurve, CURVE_ROOT_TOL,
};

const ROOT_TOL: f64 = 1e-12;
const RECURRENCE_TOL: f64 = 1e-10;
const BREVE_RTOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-6;
const HF_TOL: f64 = 1e-4;
const HF_QUADRATURE_TOL: f64 = 1e-12;
const RESIDUAL_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    Quick,
    Full,
}

impl CheckLevel {
    fn realness_range(self) -> (u32, u32) {
        match self {
            CheckLevel::Quick => (5, 3),
            CheckLevel::Full => (20, 10),
        }
    }

    fn node_range(self) -> (u32, u32) {
        match self {
            CheckLevel::Quick => (5, 3),
            CheckLevel::Full => (10, 5),
        }
    }
}

/// Multiplies one stored series coefficient by `factor` before the suites
/// see it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fault {
    pub n: u32,
    pub l: u32,
    pub i: u32,
    pub coefficient: usize,
    pub factor: f64,
}

impl Default for Fault {
    fn default() -> Self {
        Fault { n: 2, l: 0, i: 1, coefficient: 1, factor: 1.0 + 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Worst value of the suite's measure, compared against `threshold`.
    pub worst: f64,
    pub threshold: f64,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub level: CheckLevel,
    pub fault: Option<Fault>,
    pub suites: Vec<SuiteOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(
                f,
                "{} {:<28} cases={:<5} worst={:.3e} threshold={:.1e} ({:.2}s) {}",
                if s.passed { "PASS" } else { "FAIL" },
                s.name,
                s.cases,
                s.worst,
                s.threshold,
                s.seconds,
                s.detail
            )?;
        }
        let failed = self.suites.iter().filter(|s| !s.passed).count();
        write!(f, "{} of {} suites passed", self.suites.len() - failed, self.suites.len())
    }
}

struct Solutions {
    fault: Option<Fault>,
}

impl Solutions {
    fn get(&self, n: u32, l: u32) -> Result<Vec<ExactSolution>> {
        let mut sols = solve_truncation(n, l, ROOT_TOL)?;
        if let Some(fault) = self.fault.filter(|f| f.n == n && f.l == l) {
            if let Some(c) = sols
                .get_mut(fault.i as usize - 1)
                .and_then(|s| s.coeffs.get_mut(fault.coefficient))
            {
                *c *= fault.factor;
            }
        }
        Ok(sols)
    }

    fn each(&self, n_max: u32, l_max: u32, mut f: impl FnMut(&ExactSolution) -> Result<()>) -> Result<()> {
        for n in 0..=n_max {
            for l in 0..=l_max {
                for s in self.get(n, l)? {
                    f(&s)?;
                }
            }
        }
        Ok(())
    }
}

struct Tally {
    cases: usize,
    worst: f64,
    at: String,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, worst: 0.0, at: String::new() }
    }

    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        self.cases += 1;
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if value > self.worst || self.at.is_empty() {
            self.worst = value;
            self.at = at();
        }
    }
}

fn label(s: &ExactSolution) -> String {
    format!("n={} l={} i={}", s.n, s.l, s.i)
}

fn suite(name: &str, threshold: f64, body: impl FnOnce(&mut Tally) -> Result<()>) -> SuiteOutcome {
    let start = Instant::now();
    let mut tally = Tally::new();
    let outcome = body(&mut tally);
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => SuiteOutcome {
            name: name.into(),
            passed: tally.worst <= threshold,
            cases: tally.cases,
            worst: tally.worst,
            threshold,
            detail: if tally.at.is_empty() { String::new() } else { format!("worst at {}", tally.at) },
            seconds,
        },
        Err(e) => SuiteOutcome {
            name: name.into(),
            passed: false,
            cases: tally.cases,
            worst: f64::INFINITY,
            threshold,
            detail: format!("error: {e}"),
            seconds,
        },
    }
}

fn log_samples(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(move |k| lo * (step * k as f64).exp())
}

/// Run every suite of `level`, optionally corrupting one coefficient first.
pub fn run_checks(level: CheckLevel, fault: Option<Fault>) -> CheckReport {
    let sols = Solutions { fault };
    let (rn, rl) = level.realness_range();
    let (nn, nl) = level.node_range();
    let mut suites = Vec::new();

    // solve_truncation already refuses any polynomial without n+1 simple
    // positive roots, so success of every order is the certificate
    suites.push(suite("root realness", 0.0, |t| {
        for n in 0..=rn {
            for l in 0..=rl {
                let found = sols.get(n, l)?.len();
                t.record((found as f64 - f64::from(n + 1)).abs(), || format!("n={n} l={l}"));
            }
        }
        Ok(())
    }));

    suites.push(suite("series recurrence", RECURRENCE_TOL, |t| {
        sols.each(rn, rl, |s| {
            t.record(recurrence_defect(s), || label(s));
            Ok(())
        })
    }));

    suites.push(suite("breve energy", BREVE_RTOL, |t| {
        sols.each(rn, rl, |s| {
            let expected = -0.5 / f64::from(s.principal()).powi(2);
            t.record(((s.energy_breve() - expected) / expected).abs(), || label(s));
            Ok(())
        })
    }));

    suites.push(suite("node count", 0.0, |t| {
        sols.each(nn, nl, |s| {
            let found = count_nodes(s)?;
            t.record(f64::from(found.abs_diff(s.nodes)), || label(s));
            Ok(())
        })
    }));

    suites.push(suite("ode residual", RESIDUAL_TOL, |t| {
        sols.each(nn, nl, |s| {
            let ef = s.eigenfunction()?;
            for r in log_samples(1e-3, 30.0 / s.alpha, RESIDUAL_SAMPLES) {
                t.record(ef.relative_ode_residual(r), || format!("{} r={r:.4}", label(s)));
            }
            Ok(())
        })
    }));

    suites.push(suite("oracle equivalence", ORACLE_TOL, |t| {
        sols.each(5, 3, |s| {
            let d = validate_exact(s, ORACLE_TOL)?;
            t.record(d.abs(), || label(s));
            Ok(())
        })
    }));

    suites.push(suite("hellmann-feynman", HF_TOL, |t| {
        for (n, i) in [(0u32, 1u32), (1, 1), (1, 2)] {
            let s = &sols.get(n, 0)?[i as usize - 1];
            let hf = hellmann_feynman_check(s, HF_QUADRATURE_TOL)?;
            t.record(hf.discrepancy(), || label(s));
        }
        Ok(())
    }));

    if level == CheckLevel::Full {
        suites.push(suite("curve monotonicity", 0.0, |t| {
            for l in 0..=9 {
                let table = ExactTable::build(l, 20, CURVE_ROOT_TOL)?;
                for nu in 0..=3 {
                    let c = table.curve(nu)?;
                    t.record(if c.is_monotone() { 0.0 } else { 1.0 }, || format!("nu={nu} l={l}"));
                }
            }
            let scan = monotonicity_scan(9, 12.0, 20)?;
            t.record(if strictly_decreasing(&scan) { 0.0 } else { 1.0 }, || "beta=12 scan".into());
            Ok(())
        }));

        suites.push(suite("degeneracy ordering", 0.0, |t| {
            for k in [2u32, 3] {
                let family = degenerate_family(k, 20, CURVE_ROOT_TOL)?;
                let grid = degeneracy_grid(&family);
                for &beta in &grid {
                    let ok = strictly_decreasing(&split_table(&family, &[beta]));
                    t.record(if ok { 0.0 } else { 1.0 }, || format!("k={k} beta={beta}"));
                }
            }
            Ok(())
        }));
    }

    CheckReport { level, fault, suites }
}

/// Largest `β` at which degeneracy orderings are tested.
pub const DEGENERACY_BETA_MAX: f64 = 100.0;

/// Unit-spaced `β` grid from the family's common lower edge up to
/// [`DEGENERACY_BETA_MAX`].
pub fn degeneracy_grid(family: &[SpectralCurve]) -> Vec<f64> {
    let Some((lo, hi)) = common_range(family) else {
        return Vec::new();
    };
    let hi = hi.min(DEGENERACY_BETA_MAX);
    let start = lo.ceil();
    (0..)
        .map(|k| start + f64::from(k))
        .take_while(|&b| b <= hi)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_level_passes() {
        let report = run_checks(CheckLevel::Quick, None);
        assert!(report.passed(), "{report}");
        assert!(report.suites.iter().all(|s| s.cases > 0));
    }

    #[test]
    fn injected_fault_fails_the_recurrence_suite() {
        let report = run_checks(CheckLevel::Quick, Some(Fault::default()));
        assert!(!report.passed());
        let failed: Vec<_> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
        assert!(failed.contains(&"series recurrence"), "{failed:?}");
    }

    #[test]
    fn degeneracy_grid_is_inside_every_curve() {
        let family = degenerate_family(2, 20, CURVE_ROOT_TOL).unwrap();
        let grid = degeneracy_grid(&family);
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|&b| family.iter().all(|c| c.contains(b))));
    }
}
