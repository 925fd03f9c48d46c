//! Node positions of exact eigenfunctions, located from the exact node
//! polynomial.

use tcoulomb::frobenius::{count_nodes, node_positions};
use tcoulomb::solve_truncation;

pub fn main() -> tcoulomb::Result<()> {
    for s in solve_truncation(4, 1, 1e-12)? {
        let nodes = node_positions(&s)?;
        let text: Vec<String> = nodes.iter().map(|r| format!("{r:.6}")).collect();
        println!("i={} nodes={} at [{}]", s.i, count_nodes(&s)?, text.join(", "));
        let ef = s.eigenfunction()?;
        let worst = (1..=40)
            .map(|k| ef.relative_ode_residual(0.75 * f64::from(k) / s.alpha))
            .fold(0.0, f64::max);
        println!("    worst relative residual on r < 30/alpha: {worst:.2e}");
    }
    Ok(())
}
