//! Energies of one state in the tilde, breve and physical frames.

use tcoulomb::{beta_from_physical, cli, convert_energy, solve_truncation, Energy, UnitFrame};

pub fn main() -> tcoulomb::Result<()> {
    let s = &solve_truncation(2, 1, 1e-12)?[0];
    let params = cli::hydrogen(s.beta)?;
    println!("cutoff radius {:.6e} m gives beta={:.12}", params.cutoff_radius(), beta_from_physical(&params));
    let tilde = Energy::new(s.energy_tilde, UnitFrame::tilde(s.beta)?);
    let breve = convert_energy(tilde, UnitFrame::breve(s.beta)?, None)?;
    let physical = convert_energy(tilde, UnitFrame::physical(s.beta)?, Some(&params))?;
    println!("E~ = {:.12}", tilde.value);
    println!("E^ = {:.12} (series value {:.12})", breve.value, s.energy_breve());
    println!("E  = {:.6e} J = {:.6} eV", physical.value, physical.value / 1.602_176_634e-19);
    Ok(())
}
