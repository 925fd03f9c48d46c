//! Exact eigenpairs obtained by terminating the Frobenius series.

use tcoulomb::{solve_truncation, truncation_polynomial};

pub fn main() -> tcoulomb::Result<()> {
    println!("c_2(alpha) for n=1, l=0: {}", truncation_polynomial(1, 0)?);
    for n in 0..=3 {
        for s in solve_truncation(n, 0, 1e-12)? {
            println!(
                "n={n} i={} nu={} alpha={:.12} beta={:.12} E~={:.12} E^={:.12}",
                s.i,
                s.nodes,
                s.alpha,
                s.beta,
                s.energy_tilde,
                s.energy_breve()
            );
        }
    }
    Ok(())
}
