//! Physical constants, SI.
//!
//! `h` and `e` are the exact 2019 SI defined values. `mu0` is kept at the
//! classical defined value 4π×10⁻⁷ T·m/A so that `mu0/4π` is exactly 1e-7;
//! the deviation from the measured constant (~1.5e-10 relative) is far below
//! every tolerance used here. Derived constants are computed, not typed in,
//! so the stored values satisfy their defining relations bit-for-bit.

use serde::Serialize;
use std::f64::consts::PI;

/// Magnetic constant μ₀ (T·m/A).
pub const MU0: f64 = 4.0e-7 * PI;

/// μ₀/4π (T·m/A), the prefactor of the moving-charge field law.
pub const MU0_OVER_4PI: f64 = 1.0e-7;

/// Planck constant h (J·s).
pub const PLANCK_H: f64 = 6.62607015e-34;

/// Reduced Planck constant ħ = h/2π (J·s).
pub const HBAR: f64 = PLANCK_H / (2.0 * PI);

/// Elementary charge e (C), positive; the electron carries −e.
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;

/// Superconducting flux quantum Φ₀ = h/2e (Wb) (Cooper-pair carriers).
pub const FLUX_QUANTUM_PAIR: f64 = PLANCK_H / (2.0 * ELEMENTARY_CHARGE);

/// Single-charge flux quantum h/e (Wb).
pub const FLUX_QUANTUM_SINGLE: f64 = PLANCK_H / ELEMENTARY_CHARGE;

/// Speed of light c (m/s); sanity bound for charge velocities.
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// The full constants record, dumped verbatim by the CLI so published
/// reports are reproducible bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// μ₀ (T·m/A)
    pub mu0: f64,
    /// h (J·s)
    pub h: f64,
    /// ħ (J·s)
    pub hbar: f64,
    /// e (C)
    pub e: f64,
    /// h/2e (Wb)
    pub flux_quantum_pair: f64,
    /// h/e (Wb)
    pub flux_quantum_single: f64,
}

impl Constants {
    pub const fn si() -> Self {
        Constants {
            mu0: MU0,
            h: PLANCK_H,
            hbar: HBAR,
            e: ELEMENTARY_CHARGE,
            flux_quantum_pair: FLUX_QUANTUM_PAIR,
            flux_quantum_single: FLUX_QUANTUM_SINGLE,
        }
    }
}
