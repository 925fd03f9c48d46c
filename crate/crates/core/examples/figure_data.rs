//! Data behind the three spectral-curve figures, written as CSV files.

use tcoulomb::cli;

pub fn main() -> tcoulomb::Result<()> {
    let dir = std::env::temp_dir().join("tcoulomb-figures");
    for path in cli::cmd_figures(&dir, 20, "figure_data example")? {
        let text = std::fs::read_to_string(&path)?;
        let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
        println!("{}: {rows} rows", path.display());
    }
    let fig1 = cli::figure1(20)?;
    if let Some((id, beta, alpha, _)) = fig1.rows().iter().find(|r| r.3 == "oracle") {
        println!("first oracle row: {id} beta={beta} alpha={alpha:.9}");
    }
    Ok(())
}
