//! The superimposed energy W′ between the confined field B₀ and the field
//! of external currents, computed along independent routes:
//!
//! * direct overlap: W′ = ∫_Ω (1/μ₀) B₀·B₁ dr³,
//! * via the potential: W′ = A(x)·qv for a point charge,
//! * via a current distribution: W′ = Σ A₀(x)·J(x) dx³.
//!
//! The routes agree for the Coulomb-gauge A and for no gauge-shifted
//! variant of it; `energy_gauge_breach` measures exactly how a shift
//! ∇χ breaks the identity. Shields enter as a transmission factor on B₁
//! inside Ω: over the whole region for a full enclosure, over the z > 0
//! half for the half-coated geometry.

use crate::constants::MU0;
use crate::error::{Error, Result};
use crate::fields::{
    b1_unchecked, clearance_margin, infinite_solenoid_potential, vector_potential_numeric,
};
use crate::model::{FluxSource, PointCharge, ShieldGeometry, ShieldSpec, SourceKind};
use crate::quadrature::{integrate_region, Kahan, QuadratureConfig, Region3};
use crate::vec3::Vec3;

/// Which route produced an energy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMethod {
    DirectOverlap,
    ViaPotential,
    ViaCurrent,
}

/// A superimposed-energy value (J) with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub value: f64,
    pub method: EnergyMethod,
    /// Transmission factor that was applied to the shielded part of Ω
    /// (1 when no shield is present).
    pub shield_factor_applied: f64,
}

/// One discretized current element: J(x)dx³ as a position and a vector
/// element (A·m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentElement {
    pub position: Vec3,
    pub element: Vec3,
}

/// A discretized current distribution, all of it outside Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentDistribution {
    pub elements: Vec<CurrentElement>,
}

impl CurrentDistribution {
    /// A circular loop of current discretized into `n` straight elements.
    /// Element vectors follow the right-handed tangent about `axis`.
    pub fn circular_loop(center: Vec3, axis: Vec3, radius: f64, current: f64, n: usize) -> Self {
        let frame = crate::quadrature::Frame::from_axis(center, axis);
        let dl = 2.0 * std::f64::consts::PI * radius / n as f64;
        let elements = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                let (c, s) = (t.cos(), t.sin());
                let position = center + frame.u * (radius * c) + frame.v * (radius * s);
                let tangent = frame.v * c - frame.u * s;
                CurrentElement {
                    position,
                    element: tangent * (current * dl),
                }
            })
            .collect();
        CurrentDistribution { elements }
    }
}

fn ensure_charge_clear(src: &FluxSource, region: &Region3, x: Vec3) -> Result<()> {
    let margin = clearance_margin(src);
    let clearance = region.exterior_distance(x);
    if clearance <= margin {
        return Err(Error::TooCloseToRegion { clearance, margin });
    }
    Ok(())
}

/// Axial coordinate of `r` in the source frame, used by the half-space
/// shield: the coated half is z > 0.
fn axial_coordinate(src: &FluxSource, r: Vec3) -> f64 {
    (r - src.center).dot(src.axis)
}

/// W′ by direct overlap: ∫_Ω (1/μ₀) B₀·B₁ dr³, with B₁ the moving-charge
/// field. A full-cylinder shield scales the whole integral by its
/// transmission (applied after integration, so the scaling is exact); the
/// half-space shield scales only the z > 0 part of Ω.
pub fn energy_direct(
    src: &FluxSource,
    charge: &PointCharge,
    shield: Option<&ShieldSpec>,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let speed = charge.v.norm();
    if speed >= crate::constants::SPEED_OF_LIGHT {
        return Err(Error::SuperluminalCharge { speed });
    }
    let region = Region3::from_source(src)?;
    ensure_charge_clear(src, &region, charge.x)?;

    let overlap = |weight: &dyn Fn(Vec3) -> f64| -> crate::quadrature::IntegralResult<f64> {
        match src.kind {
            SourceKind::Toroid { .. } => {
                let axis = src.axis;
                let center = src.center;
                let coef = src.b0 / MU0;
                integrate_region(
                    |r| {
                        let local = r - center;
                        let transverse = local - axis * local.dot(axis);
                        let toroidal = axis.cross(transverse).normalized().unwrap_or(Vec3::ZERO);
                        toroidal.dot(b1_unchecked(charge, r)) * coef * weight(r)
                    },
                    &region,
                    cfg,
                )
            }
            _ => {
                let bdir = src.axis;
                let coef = src.b0 / MU0;
                integrate_region(
                    |r| bdir.dot(b1_unchecked(charge, r)) * coef * weight(r),
                    &region,
                    cfg,
                )
            }
        }
    };

    let (raw, factor) = match shield {
        None => (overlap(&|_| 1.0), 1.0),
        Some(spec) => match spec.geometry {
            ShieldGeometry::FullCylinder => {
                let mut res = overlap(&|_| 1.0);
                res.value *= spec.transmission;
                res.error_estimate *= spec.transmission;
                (res, spec.transmission)
            }
            ShieldGeometry::HalfSpaceCylinder => {
                let t = spec.transmission;
                (
                    overlap(&|r| if axial_coordinate(src, r) > 0.0 { t } else { 1.0 }),
                    t,
                )
            }
        },
    };

    if !raw.converged {
        return Err(Error::QuadratureDidNotConverge {
            subdivisions: raw.subdivisions_used,
            error_estimate: raw.error_estimate,
        });
    }
    Ok(EnergyResult {
        value: raw.value,
        method: EnergyMethod::DirectOverlap,
        shield_factor_applied: factor,
    })
}

/// W′ via the potential identity: A(x)·qv. No shield parameter — the
/// identity presumes the two fields superpose freely.
pub fn energy_via_potential(
    src: &FluxSource,
    charge: &PointCharge,
    use_numeric_a: bool,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    let speed = charge.v.norm();
    if speed >= crate::constants::SPEED_OF_LIGHT {
        return Err(Error::SuperluminalCharge { speed });
    }
    let a = potential_for_source(src, charge.x, use_numeric_a, cfg)?;
    Ok(EnergyResult {
        value: charge.q * a.dot(charge.v),
        method: EnergyMethod::ViaPotential,
        shield_factor_applied: 1.0,
    })
}

/// The Coulomb-gauge A of a source: exact for the ideal solenoid, the
/// infinite-solenoid idealization for a finite one when `use_numeric` is
/// off, full volume quadrature otherwise.
fn potential_for_source(
    src: &FluxSource,
    x: Vec3,
    use_numeric: bool,
    cfg: &QuadratureConfig,
) -> Result<Vec3> {
    if use_numeric {
        vector_potential_numeric(src, x, cfg)
    } else {
        match src.kind {
            SourceKind::Toroid { .. } => Err(Error::WrongSourceKind {
                operation: "energy_via_potential (analytic potential)",
                required: "solenoid",
            }),
            _ => {
                let region_clear = match Region3::from_source(src) {
                    Ok(region) => region.exterior_distance(x) > 0.0,
                    Err(_) => {
                        // Infinite solenoid: outside means off the cylinder wall.
                        let d = x - src.center;
                        let transverse = d - src.axis * d.dot(src.axis);
                        transverse.norm() > src.radius
                    }
                };
                if !region_clear {
                    return Err(Error::TooCloseToRegion {
                        clearance: 0.0,
                        margin: 0.0,
                    });
                }
                Ok(infinite_solenoid_potential(src, x))
            }
        }
    }
}

/// Outcome of the gauge-breach probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeBreach {
    /// Whether A′·qv still matches the superimposed energy within 10× the
    /// quadrature tolerance.
    pub identity_holds: bool,
    /// |A′(x)·qv − W′| (J).
    pub discrepancy: f64,
}

/// Applies A′ = A + ∇χ and measures how far A′(x)·qv departs from the
/// superimposed energy. For ∇χ(x)·v ≠ 0 the departure is |q ∇χ·v|, which
/// is exactly why the gauge is pinned.
pub fn energy_gauge_breach(
    src: &FluxSource,
    charge: &PointCharge,
    chi: &crate::fields::GaugeFunction,
    cfg: &QuadratureConfig,
) -> Result<GaugeBreach> {
    let (reference, use_numeric) = match src.kind {
        SourceKind::InfiniteSolenoid => (
            energy_via_potential(src, charge, false, cfg)?.value,
            false,
        ),
        _ => (energy_direct(src, charge, None, cfg)?.value, true),
    };
    let a = potential_for_source(src, charge.x, use_numeric, cfg)?;
    let shifted = a + chi.gradient(charge.x);
    let discrepancy = (charge.q * shifted.dot(charge.v) - reference).abs();
    let tolerance = (cfg.rel_tol * reference.abs()).max(cfg.abs_tol);
    Ok(GaugeBreach {
        identity_holds: discrepancy <= 10.0 * tolerance,
        discrepancy,
    })
}

/// W′ of a discretized current distribution.
///
/// Unshielded and fully shielded cases use Σ A₀(x)·J(x)dx³ (the full
/// shield scales the sum by its transmission, exactly). The half-space
/// shield breaks the symmetry the potential route relies on, so it falls
/// back to the direct overlap of B₀ with the distribution's field, with
/// the transmission weighting the coated half of Ω; for a source and
/// distribution symmetric about z = 0 and zero transmission this lands on
/// half the unshielded value.
pub fn energy_of_current(
    src: &FluxSource,
    dist: &CurrentDistribution,
    shield: Option<&ShieldSpec>,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    if dist.elements.is_empty() {
        return Err(Error::EmptyCurrentDistribution);
    }
    ensure_distribution_clear(src, dist)?;

    match shield.map(|s| (s.geometry, s.transmission)) {
        None => Ok(EnergyResult {
            value: potential_route(src, dist, cfg)?,
            method: EnergyMethod::ViaCurrent,
            shield_factor_applied: 1.0,
        }),
        Some((ShieldGeometry::FullCylinder, t)) => Ok(EnergyResult {
            value: t * potential_route(src, dist, cfg)?,
            method: EnergyMethod::ViaCurrent,
            shield_factor_applied: t,
        }),
        Some((ShieldGeometry::HalfSpaceCylinder, t)) => {
            let region = Region3::from_source(src)?;
            let elements = dist.elements.clone();
            let b1_of_distribution = move |r: Vec3| {
                let mut acc = Kahan::new();
                for e in &elements {
                    let d = r - e.position;
                    let n2 = d.norm_squared();
                    let inv_cube = 1.0 / (n2 * n2.sqrt());
                    acc.add(e.element.cross(d) * (crate::constants::MU0_OVER_4PI * inv_cube));
                }
                acc.value()
            };
            let res = match src.kind {
                SourceKind::Toroid { .. } => {
                    let axis = src.axis;
                    let center = src.center;
                    let coef = src.b0 / MU0;
                    integrate_region(
                        |r| {
                            let local = r - center;
                            let transverse = local - axis * local.dot(axis);
                            let toroidal =
                                axis.cross(transverse).normalized().unwrap_or(Vec3::ZERO);
                            let w = if axial_coordinate(src, r) > 0.0 { t } else { 1.0 };
                            toroidal.dot(b1_of_distribution(r)) * coef * w
                        },
                        &region,
                        cfg,
                    )
                }
                _ => {
                    let bdir = src.axis;
                    let coef = src.b0 / MU0;
                    integrate_region(
                        |r| {
                            let w = if axial_coordinate(src, r) > 0.0 { t } else { 1.0 };
                            bdir.dot(b1_of_distribution(r)) * coef * w
                        },
                        &region,
                        cfg,
                    )
                }
            };
            if !res.converged {
                return Err(Error::QuadratureDidNotConverge {
                    subdivisions: res.subdivisions_used,
                    error_estimate: res.error_estimate,
                });
            }
            Ok(EnergyResult {
                value: res.value,
                method: EnergyMethod::DirectOverlap,
                shield_factor_applied: t,
            })
        }
    }
}

fn potential_route(
    src: &FluxSource,
    dist: &CurrentDistribution,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let use_numeric = !matches!(src.kind, SourceKind::InfiniteSolenoid);
    let mut acc = Kahan::new();
    for e in &dist.elements {
        let a = potential_for_source(src, e.position, use_numeric, cfg)?;
        acc.add(a.dot(e.element));
    }
    Ok(acc.value())
}

fn ensure_distribution_clear(src: &FluxSource, dist: &CurrentDistribution) -> Result<()> {
    let margin = clearance_margin(src);
    match Region3::from_source(src) {
        Ok(region) => {
            for e in &dist.elements {
                let clearance = region.exterior_distance(e.position);
                if clearance <= margin {
                    return Err(Error::TooCloseToRegion { clearance, margin });
                }
            }
        }
        Err(_) => {
            for e in &dist.elements {
                let d = e.position - src.center;
                let transverse = d - src.axis * d.dot(src.axis);
                let clearance = transverse.norm() - src.radius;
                if clearance <= margin {
                    return Err(Error::TooCloseToRegion { clearance, margin });
                }
            }
        }
    }
    Ok(())
}
