//! Critical current of the half-shielded SQUID, the proposed discriminating
//! measurement.
//!
//! Under the flux hypothesis the modulation is the standard
//! I_c = I₀|cos(πΦ/Φ₀)|. Under the energy hypothesis the half-coated
//! solenoid halves the superimposed energy, which moves half the flux into
//! the cosine: I_c = I₀|cos(π(Φ/2)/Φ₀)|. At Φ = (2n+1)Φ₀ the first law
//! gives I₀ and the second gives 0, so a flux sweep separates them.

use crate::constants::FLUX_QUANTUM_PAIR;
use crate::error::{Error, Result};
use crate::model::Hypothesis;
use std::f64::consts::PI;

/// Hypothesis disagreement threshold, as a fraction of I₀. The dichotomy
/// is exact; this only guards floating-point equality.
pub const DISCRIMINATION_TOL: f64 = 1e-9;

/// Predictions for one enclosed-flux value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquidPrediction {
    /// Enclosed flux (Wb).
    pub flux: f64,
    /// I_c under the flux law (A).
    pub ic_vector_potential: f64,
    /// I_c under the halved-energy law (A).
    pub ic_superimposed_energy: f64,
    /// Whether the two laws differ by more than `DISCRIMINATION_TOL`·I₀.
    pub discriminating: bool,
}

/// Critical current through the SQUID at the given enclosed flux.
/// Requires I₀ > 0.
pub fn critical_current(flux: f64, i0: f64, hypothesis: Hypothesis) -> f64 {
    let effective_flux = match hypothesis {
        Hypothesis::VectorPotential => flux,
        Hypothesis::SuperimposedEnergy => 0.5 * flux,
    };
    i0 * (PI * effective_flux / FLUX_QUANTUM_PAIR).cos().abs()
}

/// One prediction per sweep value, flagged where the hypotheses disagree.
pub fn discrimination_table(flux_sweep: &[f64], i0: f64) -> Result<Vec<SquidPrediction>> {
    if flux_sweep.is_empty() {
        return Err(Error::EmptyFluxSweep);
    }
    Ok(flux_sweep
        .iter()
        .map(|&flux| {
            let ic_vector_potential = critical_current(flux, i0, Hypothesis::VectorPotential);
            let ic_superimposed_energy =
                critical_current(flux, i0, Hypothesis::SuperimposedEnergy);
            SquidPrediction {
                flux,
                ic_vector_potential,
                ic_superimposed_energy,
                discriminating: (ic_vector_potential - ic_superimposed_energy).abs()
                    > DISCRIMINATION_TOL * i0,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const I0: f64 = 1.0e-6;

    #[test]
    fn zero_flux_gives_i0_under_both() {
        assert_eq!(critical_current(0.0, I0, Hypothesis::VectorPotential), I0);
        assert_eq!(critical_current(0.0, I0, Hypothesis::SuperimposedEnergy), I0);
    }

    #[test]
    fn one_flux_quantum_separates_the_hypotheses() {
        let phi0 = FLUX_QUANTUM_PAIR;
        assert_eq!(critical_current(phi0, I0, Hypothesis::VectorPotential), I0);
        assert!(critical_current(phi0, I0, Hypothesis::SuperimposedEnergy) <= 1e-12 * I0);
    }

    #[test]
    fn standard_sweep_table() {
        let phi0 = FLUX_QUANTUM_PAIR;
        let table = discrimination_table(&[0.0, phi0, 2.0 * phi0], I0).unwrap();
        assert_eq!(table.len(), 3);

        assert_eq!(table[0].ic_vector_potential, I0);
        assert_eq!(table[0].ic_superimposed_energy, I0);
        assert!(!table[0].discriminating);

        assert_eq!(table[1].ic_vector_potential, I0);
        assert!(table[1].ic_superimposed_energy <= 1e-12 * I0);
        assert!(table[1].discriminating);

        assert_eq!(table[2].ic_vector_potential, I0);
        assert_eq!(table[2].ic_superimposed_energy, I0);
        assert!(!table[2].discriminating);
    }

    #[test]
    fn half_quantum_point() {
        let phi0 = FLUX_QUANTUM_PAIR;
        let table = discrimination_table(&[0.5 * phi0], I0).unwrap();
        assert!(table[0].ic_vector_potential <= 1e-12 * I0);
        // cos(π/4) = √2/2.
        assert_relative_eq!(
            table[0].ic_superimposed_energy,
            I0 * std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-12
        );
        assert!(table[0].discriminating);
    }

    #[test]
    fn empty_sweep_is_rejected() {
        assert!(matches!(
            discrimination_table(&[], I0),
            Err(Error::EmptyFluxSweep)
        ));
    }

    #[test]
    fn periodicities() {
        let phi0 = FLUX_QUANTUM_PAIR;
        for k in 0..100 {
            let flux = 0.37 * phi0 * k as f64;
            let vp0 = critical_current(flux, I0, Hypothesis::VectorPotential);
            let vp1 = critical_current(flux + phi0, I0, Hypothesis::VectorPotential);
            assert!((vp0 - vp1).abs() <= 1e-12 * I0, "flux-law period broke at k = {k}");

            let se0 = critical_current(flux, I0, Hypothesis::SuperimposedEnergy);
            let se1 = critical_current(flux + 2.0 * phi0, I0, Hypothesis::SuperimposedEnergy);
            assert!((se0 - se1).abs() <= 1e-12 * I0, "energy-law period broke at k = {k}");
        }
    }

    #[test]
    fn quantized_fluxes_hit_only_the_two_listed_cases() {
        // Every flux the quantizer can emit is n·Φ₀, where the flux law
        // pins I_c = I₀ and the energy law alternates between I₀ and 0.
        for n in [-5i64, -2, -1, 0, 1, 2, 3, 10, 1001] {
            let (m, flux) = crate::shielding::flux_quantize(n as f64 * FLUX_QUANTUM_PAIR);
            assert_eq!(m, n);
            let vp = critical_current(flux, I0, Hypothesis::VectorPotential);
            let se = critical_current(flux, I0, Hypothesis::SuperimposedEnergy);
            assert!((vp - I0).abs() <= 1e-12 * I0);
            if n % 2 == 0 {
                assert!((se - I0).abs() <= 1e-12 * I0);
            } else {
                assert!(se <= 1e-12 * I0);
            }
        }
    }
}
