//! `dE/dβ` from neighbouring numerical energies against `-<1/(r+1)>`.

use tcoulomb::spectrum::expectation_inverse_shifted_r;
use tcoulomb::{hellmann_feynman_check, solve_truncation};

pub fn main() -> tcoulomb::Result<()> {
    let ground = &solve_truncation(0, 0, 1e-12)?[0];
    println!("n=0: -<1/(r+1)> = {:.15} (closed form -5/14 = {:.15})",
        expectation_inverse_shifted_r(ground, 1e-12)?, -5.0 / 14.0);
    for n in 0..=2 {
        for s in solve_truncation(n, 0, 1e-12)? {
            let hf = hellmann_feynman_check(&s, 1e-12)?;
            println!(
                "n={n} i={}: dE/dbeta={:.12} rhs={:.12} |diff|={:.1e}",
                s.i,
                hf.lhs,
                hf.rhs,
                hf.discrepancy()
            );
        }
    }
    Ok(())
}
