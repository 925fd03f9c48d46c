//! Shooting eigensolver on its own and against exact points.

use tcoulomb::{solve_state, solve_truncation, validate_exact, RadialProblem};

pub fn main() -> tcoulomb::Result<()> {
    let p = RadialProblem::new(40.0, 0)?;
    for nu in 0..=3 {
        let r = solve_state(&p, nu)?;
        println!(
            "beta=40 nu={nu}: alpha={:.10} error~{:.1e} order={:.2} grid={} r_max={:.1}",
            r.alpha, r.grid_error_estimate, r.observed_order, r.grid_size, r.r_max
        );
    }
    for s in solve_truncation(3, 2, 1e-12)? {
        println!("n=3 l=2 i={}: oracle - exact = {:+.2e}", s.i, validate_exact(&s, 1e-8)?);
    }
    Ok(())
}
