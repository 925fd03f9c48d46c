//! Physical parameters and the three energy conventions of the model.
//!
//! The physical Hamiltonian `-ħ²∇²/2m - Ze²/(4πε₀(r + r₀))` becomes, after
//! measuring lengths in units of `r₀`, the tilde Hamiltonian
//! `-∇²/2 - β/(r + 1)` with `Ẽ = m r₀² E / ħ²`. Rescaling once more by `β`
//! gives the breve Hamiltonian `-∇²/2 - 1/(r + β)` with `Ẽ = β² Ĕ`.
//!
//! All numerical work in this crate happens in the tilde frame; the other two
//! frames only appear at input/output boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when comparing the coupling carried by two frames.
const BETA_MATCH_RTOL: f64 = 1e-12;

/// SI-unit parameters of the physical Hamiltonian. All fields are positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    mass: f64,
    charge: f64,
    atomic_number: u32,
    permittivity: f64,
    cutoff_radius: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(
        mass: f64,
        charge: f64,
        atomic_number: u32,
        permittivity: f64,
        cutoff_radius: f64,
        hbar: f64,
    ) -> Result<Self> {
        let named = [
            ("mass", mass),
            ("charge", charge),
            ("permittivity", permittivity),
            ("cutoff_radius", cutoff_radius),
            ("hbar", hbar),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if atomic_number == 0 {
            return Err(Error::InvalidInput("atomic_number must be positive".into()));
        }
        Ok(Self { mass, charge, atomic_number, permittivity, cutoff_radius, hbar })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    pub fn atomic_number(&self) -> u32 {
        self.atomic_number
    }
    pub fn permittivity(&self) -> f64 {
        self.permittivity
    }
    pub fn cutoff_radius(&self) -> f64 {
        self.cutoff_radius
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Same parameters with a different cutoff radius.
    pub fn with_cutoff_radius(&self, cutoff_radius: f64) -> Result<Self> {
        Self::new(
            self.mass,
            self.charge,
            self.atomic_number,
            self.permittivity,
            cutoff_radius,
            self.hbar,
        )
    }

    /// Same parameters with a different atomic number.
    pub fn with_atomic_number(&self, atomic_number: u32) -> Result<Self> {
        Self::new(
            self.mass,
            self.charge,
            atomic_number,
            self.permittivity,
            self.cutoff_radius,
            self.hbar,
        )
    }

    /// Factor `m r₀² / ħ²` taking physical energies to the tilde frame.
    pub fn tilde_energy_scale(&self) -> f64 {
        self.mass * self.cutoff_radius * self.cutoff_radius / (self.hbar * self.hbar)
    }
}

/// Dimensionless coupling `β = m r₀ Z e² / (4π ε₀ ħ²)`.
pub fn beta_from_physical(p: &PhysicalParams) -> f64 {
    p.mass * p.cutoff_radius * f64::from(p.atomic_number) * p.charge * p.charge
        / (4.0 * std::f64::consts::PI * p.permittivity * p.hbar * p.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Physical,
    Tilde,
    Breve,
}

/// An energy convention together with the coupling it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitFrame {
    kind: FrameKind,
    beta: f64,
}

impl UnitFrame {
    pub fn new(kind: FrameKind, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { kind, beta })
    }
    pub fn tilde(beta: f64) -> Result<Self> {
        Self::new(FrameKind::Tilde, beta)
    }
    pub fn breve(beta: f64) -> Result<Self> {
        Self::new(FrameKind::Breve, beta)
    }
    pub fn physical(beta: f64) -> Result<Self> {
        Self::new(FrameKind::Physical, beta)
    }
    pub fn kind(&self) -> FrameKind {
        self.kind
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub value: f64,
    pub frame: UnitFrame,
}

impl Energy {
    pub fn new(value: f64, frame: UnitFrame) -> Self {
        Self { value, frame }
    }

    pub fn is_bound(&self) -> bool {
        self.value < 0.0
    }
}

fn same_beta(a: f64, b: f64) -> bool {
    (a - b).abs() <= BETA_MATCH_RTOL * a.abs().max(b.abs())
}

fn physical_scale(params: Option<&PhysicalParams>, beta: f64) -> Result<f64> {
    let p = params.ok_or_else(|| {
        Error::InvalidInput("physical-frame conversion needs PhysicalParams".into())
    })?;
    let pb = beta_from_physical(p);
    if !same_beta(pb, beta) {
        return Err(Error::InconsistentModel(format!(
            "physical parameters give beta={pb}, frame carries beta={beta}"
        )));
    }
    Ok(p.tilde_energy_scale())
}

/// Convert an energy between frames sharing the same coupling.
///
/// Conversions that touch the physical frame need `params`, whose coupling
/// must agree with the frames' `β`.
pub fn convert_energy(
    e: Energy,
    target: UnitFrame,
    params: Option<&PhysicalParams>,
) -> Result<Energy> {
    let beta = e.frame.beta;
    if !same_beta(beta, target.beta) {
        return Err(Error::InconsistentModel(format!(
            "source frame beta={beta} differs from target frame beta={}",
            target.beta
        )));
    }
    if e.frame.kind == target.kind {
        return Ok(Energy::new(e.value, target));
    }
    let value = match (e.frame.kind, target.kind) {
        (FrameKind::Tilde, FrameKind::Breve) => e.value / (beta * beta),
        (FrameKind::Breve, FrameKind::Tilde) => e.value * (beta * beta),
        (FrameKind::Physical, FrameKind::Tilde) => e.value * physical_scale(params, beta)?,
        (FrameKind::Tilde, FrameKind::Physical) => e.value / physical_scale(params, beta)?,
        (FrameKind::Physical, FrameKind::Breve) => {
            e.value * physical_scale(params, beta)? / (beta * beta)
        }
        (FrameKind::Breve, FrameKind::Physical) => {
            e.value * (beta * beta) / physical_scale(params, beta)?
        }
        _ => unreachable!("identical kinds handled above"),
    };
    Ok(Energy::new(value, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // CODATA 2018
    const ME: f64 = 9.109_383_701_5e-31;
    const QE: f64 = 1.602_176_634e-19;
    const EPS0: f64 = 8.854_187_812_8e-12;
    const HBAR: f64 = 1.054_571_817e-34;

    fn bohr_radius() -> f64 {
        4.0 * std::f64::consts::PI * EPS0 * HBAR * HBAR / (ME * QE * QE)
    }

    fn hydrogen(r0: f64) -> PhysicalParams {
        PhysicalParams::new(ME, QE, 1, EPS0, r0, HBAR).unwrap()
    }

    #[test]
    fn beta_is_one_at_bohr_radius() {
        let b = beta_from_physical(&hydrogen(bohr_radius()));
        assert!((b - 1.0).abs() < 1e-14, "{b}");
    }

    #[test]
    fn beta_is_linear_in_cutoff_and_charge_number() {
        let p = hydrogen(1e-10);
        let b = beta_from_physical(&p);
        let b2r = beta_from_physical(&p.with_cutoff_radius(2e-10).unwrap());
        let b2z = beta_from_physical(&p.with_atomic_number(2).unwrap());
        assert!((b2r - 2.0 * b).abs() <= 4.0 * f64::EPSILON * b2r);
        assert!((b2z - 2.0 * b).abs() <= 4.0 * f64::EPSILON * b2z);
    }

    #[test]
    fn rejects_nonpositive_fields() {
        assert!(PhysicalParams::new(0.0, QE, 1, EPS0, 1.0, HBAR).is_err());
        assert!(PhysicalParams::new(ME, QE, 0, EPS0, 1.0, HBAR).is_err());
        assert!(PhysicalParams::new(ME, QE, 1, -EPS0, 1.0, HBAR).is_err());
        assert!(UnitFrame::tilde(0.0).is_err());
    }

    #[test]
    fn tilde_to_breve_examples() {
        let e = Energy::new(-0.5, UnitFrame::tilde(1.0).unwrap());
        let b = convert_energy(e, UnitFrame::breve(1.0).unwrap(), None).unwrap();
        assert_eq!(b.value, -0.5);

        let e = Energy::new(-2.0, UnitFrame::tilde(2.0).unwrap());
        let b = convert_energy(e, UnitFrame::breve(2.0).unwrap(), None).unwrap();
        assert_eq!(b.value, -0.5);
        assert_eq!(b.frame.kind(), FrameKind::Breve);
    }

    #[test]
    fn mismatched_beta_is_rejected() {
        let e = Energy::new(-1.0, UnitFrame::tilde(1.0).unwrap());
        let err = convert_energy(e, UnitFrame::breve(1.5).unwrap(), None).unwrap_err();
        assert!(matches!(err, Error::InconsistentModel(_)));
    }

    #[test]
    fn physical_frame_needs_matching_params() {
        let p = hydrogen(2.0 * bohr_radius());
        let beta = beta_from_physical(&p);
        let e = Energy::new(-1.0, UnitFrame::tilde(beta).unwrap());
        let target = UnitFrame::physical(beta).unwrap();
        assert!(matches!(
            convert_energy(e, target, None).unwrap_err(),
            Error::InvalidInput(_)
        ));
        let wrong = hydrogen(3.0 * bohr_radius());
        assert!(matches!(
            convert_energy(e, target, Some(&wrong)).unwrap_err(),
            Error::InconsistentModel(_)
        ));
        let phys = convert_energy(e, target, Some(&p)).unwrap();
        // Ẽ = m r₀² E / ħ²
        let expected = -HBAR * HBAR / (ME * p.cutoff_radius().powi(2));
        assert!((phys.value - expected).abs() <= 1e-14 * expected.abs());
    }

    #[test]
    fn breve_physical_consistent_with_two_hops() {
        let p = hydrogen(0.7 * bohr_radius());
        let beta = beta_from_physical(&p);
        let e = Energy::new(-0.125, UnitFrame::breve(beta).unwrap());
        let direct = convert_energy(e, UnitFrame::physical(beta).unwrap(), Some(&p)).unwrap();
        let t = convert_energy(e, UnitFrame::tilde(beta).unwrap(), None).unwrap();
        let two = convert_energy(t, UnitFrame::physical(beta).unwrap(), Some(&p)).unwrap();
        assert!((direct.value - two.value).abs() <= 4.0 * f64::EPSILON * two.value.abs());
    }

    proptest! {
        #[test]
        fn tilde_breve_round_trip(value in -1e6f64..-1e-6, beta in 1e-3f64..1e3) {
            let t = UnitFrame::tilde(beta).unwrap();
            let b = UnitFrame::breve(beta).unwrap();
            let there = convert_energy(Energy::new(value, t), b, None).unwrap();
            let back = convert_energy(there, t, None).unwrap();
            prop_assert!((back.value - value).abs() <= 4.0 * f64::EPSILON * value.abs());
        }

        #[test]
        fn tilde_physical_round_trip(value in -1e3f64..-1e-3, r0_scale in 0.1f64..10.0) {
            let p = hydrogen(r0_scale * bohr_radius());
            let beta = beta_from_physical(&p);
            let t = UnitFrame::tilde(beta).unwrap();
            let ph = UnitFrame::physical(beta).unwrap();
            let there = convert_energy(Energy::new(value, t), ph, Some(&p)).unwrap();
            let back = convert_energy(there, t, Some(&p)).unwrap();
            prop_assert!((back.value - value).abs() <= 4.0 * f64::EPSILON * value.abs());
        }

        #[test]
        fn beta_monotone_in_each_parameter(f in 1.01f64..3.0) {
            let p = hydrogen(bohr_radius());
            let b = beta_from_physical(&p);
            let up = |q: PhysicalParams| beta_from_physical(&q);
            prop_assert!(up(PhysicalParams::new(ME * f, QE, 1, EPS0, p.cutoff_radius(), HBAR).unwrap()) > b);
            prop_assert!(up(PhysicalParams::new(ME, QE * f, 1, EPS0, p.cutoff_radius(), HBAR).unwrap()) > b);
            prop_assert!(up(p.with_cutoff_radius(p.cutoff_radius() * f).unwrap()) > b);
            prop_assert!(up(PhysicalParams::new(ME, QE, 1, EPS0 * f, p.cutoff_radius(), HBAR).unwrap()) < b);
            prop_assert!(up(PhysicalParams::new(ME, QE, 1, EPS0, p.cutoff_radius(), HBAR * f).unwrap()) < b);
        }
    }
}
