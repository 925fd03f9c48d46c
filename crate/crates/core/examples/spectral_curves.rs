//! Exact points of the lowest spectral curves `α_{ν,0}(β)`.

use tcoulomb::spectrum::{ExactTable, CURVE_ROOT_TOL};

pub fn main() -> tcoulomb::Result<()> {
    let table = ExactTable::build(0, 12, CURVE_ROOT_TOL)?;
    for nu in 0..=3 {
        let curve = table.curve(nu)?;
        let (lo, hi) = curve.beta_range().expect("curve has points");
        println!(
            "nu={nu}: {} points on beta in [{lo:.4}, {hi:.4}], increasing: {}",
            curve.len(),
            curve.is_monotone()
        );
        for p in curve.points().iter().take(3) {
            println!("    beta={:.6} alpha={:.6} E~={:.6}", p.beta, p.alpha, p.energy_tilde());
        }
    }
    Ok(())
}
