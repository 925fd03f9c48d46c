//! Ground-state `α` at `β = 40` interpolated through 21 exact points and
//! compared with the shooting solver.

use tcoulomb::{build_curve, interpolate, solve_state, RadialProblem};

pub fn main() -> tcoulomb::Result<()> {
    let curve = build_curve(0, 0, 20, 1e-12)?;
    let interpolated = interpolate(&curve, 40.0)?;
    let numerical = solve_state(&RadialProblem::new(40.0, 0)?, 0)?.alpha;
    println!("interpolated alpha(40) = {interpolated:.9}");
    println!("numerical    alpha(40) = {numerical:.9}");
    println!("difference             = {:.2e}", (interpolated - numerical).abs());
    Ok(())
}
