//! Splitting of the Coulomb-degenerate families `ν + l = k`.

use tcoulomb::checks::degeneracy_grid;
use tcoulomb::spectrum::{degenerate_family, split_table, strictly_decreasing, CURVE_ROOT_TOL};
use tcoulomb::monotonicity_scan;

pub fn main() -> tcoulomb::Result<()> {
    let scan = monotonicity_scan(5, 12.0, 20)?;
    let alphas: Vec<String> = scan.iter().map(|e| format!("{:.5}", e.alpha.unwrap_or(f64::NAN))).collect();
    println!("alpha_(0,l)(12), l=0..5: {}", alphas.join(" > "));
    for k in [2, 3] {
        let family = degenerate_family(k, 20, CURVE_ROOT_TOL)?;
        let grid = degeneracy_grid(&family);
        let ordered = grid.iter().filter(|&&b| strictly_decreasing(&split_table(&family, &[b]))).count();
        println!("k={k}: ordering holds at {ordered} of {} grid betas", grid.len());
        for e in split_table(&family, &[30.0]) {
            println!("    beta=30 nu={} l={} alpha={:.6}", e.nu, e.l, e.alpha.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
