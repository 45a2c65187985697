//! Shielding analysis: wave-packet pulse timescales against the
//! superconductor energy gap, flux quantization, and the resolved shield
//! transmission.
//!
//! A passing wave packet drives a magnetic pulse of width Δt ≈ Δl/v at the
//! shielded source. The shield responds as a step filter: below the gap
//! frequency Δ/h it shields as configured, above it it is transparent —
//! which is how a coated source can still show the full interference shift
//! for fast packets.

use crate::constants::{ELEMENTARY_CHARGE, FLUX_QUANTUM_PAIR, PLANCK_H};
use crate::error::Result;
use crate::fields::b1_unchecked;
use crate::model::{PointCharge, ShieldSpec, WavePacketSpec};
use crate::vec3::Vec3;
use crate::Error;

/// Pulse timescale and spectrum versus the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseReport {
    /// Pulse width Δt = Δl/v (s).
    pub dt: f64,
    /// Main frequency ν = 1/Δt (Hz).
    pub nu: f64,
    /// Photon energy hν (eV).
    pub photon_energy: f64,
    /// Superconductor gap Δ (eV).
    pub gap: f64,
    /// Whether the shield can respond: hν < Δ.
    pub shielded: bool,
}

/// Pulse analysis for a wave packet against an energy gap (eV).
pub fn pulse_report(wp: &WavePacketSpec, gap: f64) -> PulseReport {
    let dt = wp.coherence_length / wp.speed;
    let nu = 1.0 / dt;
    let photon_energy = PLANCK_H * nu / ELEMENTARY_CHARGE;
    PulseReport {
        dt,
        nu,
        photon_energy,
        gap,
        shielded: photon_energy < gap,
    }
}

/// |B₁|(t) at a fixed observation point for a uniformly moving charge,
/// x(t) = x₀ + v·t. The magnitude peaks at closest approach and falls off
/// with the square of the distance, which is what turns a passing packet
/// into a pulse.
pub fn bfield_pulse_profile(
    charge: &PointCharge,
    observation: Vec3,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let speed = charge.v.norm();
    if speed >= crate::constants::SPEED_OF_LIGHT {
        return Err(Error::SuperluminalCharge { speed });
    }
    // Impact parameter: distance from the observation point to the
    // trajectory (line for a moving charge, point for a static one).
    let offset = observation - charge.x;
    let impact = if speed > 0.0 {
        let dir = charge.v * (1.0 / speed);
        (offset - dir * offset.dot(dir)).norm()
    } else {
        offset.norm()
    };
    if impact <= 0.0 {
        return Err(Error::SingularPoint);
    }

    Ok(t_grid
        .iter()
        .map(|&t| {
            let at_t = PointCharge {
                x: charge.x + charge.v * t,
                ..*charge
            };
            (t, b1_unchecked(&at_t, observation).norm())
        })
        .collect())
}

/// Nearest-integer flux quantization: n = round(Φ/Φ₀), half-to-even on
/// exact ties. Returns (n, n·Φ₀).
pub fn flux_quantize(applied_flux: f64) -> (i64, f64) {
    let n = (applied_flux / FLUX_QUANTUM_PAIR).round_ties_even();
    (n as i64, n * FLUX_QUANTUM_PAIR)
}

/// The transmission that actually applies to a probe.
///
/// Without a wave packet the configured transmission passes through.
/// With one, the step response decides: the configured value when the
/// pulse is slow enough to shield (hν < Δ), full transparency otherwise.
pub fn resolve_transmission(shield: &ShieldSpec, wave_packet: Option<&WavePacketSpec>) -> f64 {
    match wave_packet {
        None => shield.transmission,
        Some(wp) => {
            if pulse_report(wp, shield.energy_gap).shielded {
                shield.transmission
            } else {
                1.0
            }
        }
    }
}
