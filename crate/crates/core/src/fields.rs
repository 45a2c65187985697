//! Magnetic fields and vector potentials: the moving-charge field B₁, the
//! confined-source field B₀, the vector potential A of the confined flux
//! (closed form for the ideal infinite solenoid, volume quadrature for
//! bounded sources), and the finite-difference operators used to verify
//! the differential identities ∇×A = B₀ and ∇·A = 0.
//!
//! The vector potential here is the specific Coulomb-gauge solution
//!
//! ```text
//! A(x) = (1/4π) ∫_Ω  B₀(r) × (x − r) / |x − r|³  dr³
//! ```
//!
//! and gauge-shifted copies A′ = A + ∇χ are tracked explicitly through
//! their provenance, because the superimposed-energy identity holds for
//! this A and for no gauge-shifted variant of it.

use crate::constants::{MU0_OVER_4PI, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::model::{BeamPath, FluxSource, PointCharge, SourceKind};
use crate::quadrature::{
    integrate_polyline, integrate_region, IntegralResult, QuadratureConfig, Region3,
};
use crate::vec3::Vec3;
use std::cell::RefCell;
use std::f64::consts::FRAC_1_PI;
use std::fmt;
use std::sync::Arc;

/// Exclusion margin around Ω for numeric potential evaluation, as a
/// fraction of the source radius. Points closer than this to the region
/// boundary are rejected rather than integrated inaccurately.
pub const REGION_CLEARANCE_FACTOR: f64 = 0.05;

pub(crate) fn clearance_margin(src: &FluxSource) -> f64 {
    REGION_CLEARANCE_FACTOR * src.radius
}

/// Magnetic field of a moving point charge (T):
/// B₁(r) = (μ₀/4π) q v × (r − x) / |r − x|³.
pub fn b1_point_charge(charge: &PointCharge, r: Vec3) -> Result<Vec3> {
    let speed = charge.v.norm();
    if speed >= SPEED_OF_LIGHT {
        return Err(Error::SuperluminalCharge { speed });
    }
    if r == charge.x {
        return Err(Error::SingularPoint);
    }
    Ok(b1_unchecked(charge, r))
}

/// Same field law without the precondition checks; callers guarantee
/// r ≠ x. Used inside integration loops.
pub(crate) fn b1_unchecked(charge: &PointCharge, r: Vec3) -> Vec3 {
    let d = r - charge.x;
    let n2 = d.norm_squared();
    let inv_cube = 1.0 / (n2 * n2.sqrt());
    charge.v.cross(d) * (MU0_OVER_4PI * charge.q * inv_cube)
}

/// The confined static field B₀ (T): uniform along the axis inside a
/// solenoid, uniform along the tube inside a torus, identically zero
/// outside the region Ω.
pub fn b0_field(src: &FluxSource, r: Vec3) -> Vec3 {
    let d = r - src.center;
    let z = d.dot(src.axis);
    let transverse = d - src.axis * z;
    match src.kind {
        SourceKind::InfiniteSolenoid => {
            if transverse.norm_squared() < src.radius * src.radius {
                src.axis * src.b0
            } else {
                Vec3::ZERO
            }
        }
        SourceKind::FiniteSolenoid { length } => {
            if transverse.norm_squared() < src.radius * src.radius && z.abs() < 0.5 * length {
                src.axis * src.b0
            } else {
                Vec3::ZERO
            }
        }
        SourceKind::Toroid { minor_radius } => {
            let rho = transverse.norm();
            let in_tube = (rho - src.radius).powi(2) + z * z < minor_radius * minor_radius;
            if in_tube {
                match src.axis.cross(transverse).normalized() {
                    Some(toroidal) => toroidal * src.b0,
                    None => Vec3::ZERO,
                }
            } else {
                Vec3::ZERO
            }
        }
    }
}

/// Closed-form Coulomb-gauge potential of the ideal infinite solenoid
/// (T·m): azimuthal, |A| = B₀ρ/2 inside and B₀R²/(2ρ) = Φ/(2πρ) outside,
/// right-handed about the axis.
pub fn vector_potential_analytic(src: &FluxSource, x: Vec3) -> Result<Vec3> {
    if !matches!(src.kind, SourceKind::InfiniteSolenoid) {
        return Err(Error::WrongSourceKind {
            operation: "vector_potential_analytic",
            required: "infinite_solenoid",
        });
    }
    Ok(infinite_solenoid_potential(src, x))
}

/// The same closed form, usable with any source's axis/radius/B₀ as the
/// infinite-solenoid idealization of that source.
pub(crate) fn infinite_solenoid_potential(src: &FluxSource, x: Vec3) -> Vec3 {
    let d = x - src.center;
    let z = d.dot(src.axis);
    let transverse = d - src.axis * z;
    let rho2 = transverse.norm_squared();
    // axis × transverse has magnitude ρ and points azimuthally.
    let tangent = src.axis.cross(transverse);
    let r2 = src.radius * src.radius;
    if rho2 <= r2 {
        tangent * (0.5 * src.b0)
    } else {
        tangent * (0.5 * src.b0 * r2 / rho2)
    }
}

/// Volume-quadrature potential of a bounded source (T·m).
///
/// The evaluation point must clear the region boundary by
/// [`REGION_CLEARANCE_FACTOR`] times the source radius; the kernel is then
/// smooth and the product rule converges fast.
pub fn vector_potential_numeric(src: &FluxSource, x: Vec3, cfg: &QuadratureConfig) -> Result<Vec3> {
    let region = Region3::from_source(src)?;
    let margin = clearance_margin(src);
    let clearance = region.exterior_distance(x);
    if clearance <= margin {
        return Err(Error::TooCloseToRegion { clearance, margin });
    }
    let res = vector_potential_numeric_raw(src, &region, x, cfg);
    if !res.converged {
        return Err(Error::QuadratureDidNotConverge {
            subdivisions: res.subdivisions_used,
            error_estimate: res.error_estimate,
        });
    }
    Ok(res.value)
}

pub(crate) fn vector_potential_numeric_raw(
    src: &FluxSource,
    region: &Region3,
    x: Vec3,
    cfg: &QuadratureConfig,
) -> IntegralResult<Vec3> {
    let pref = 0.25 * FRAC_1_PI;
    match src.kind {
        SourceKind::Toroid { .. } => {
            let axis = src.axis;
            let center = src.center;
            let b0 = src.b0;
            integrate_region(
                |r| {
                    let local = r - center;
                    let transverse = local - axis * local.dot(axis);
                    let toroidal = axis
                        .cross(transverse)
                        .normalized()
                        .unwrap_or(Vec3::ZERO);
                    let d = x - r;
                    let n2 = d.norm_squared();
                    let inv_cube = 1.0 / (n2 * n2.sqrt());
                    toroidal.cross(d) * (pref * b0 * inv_cube)
                },
                region,
                cfg,
            )
        }
        _ => {
            let bvec = src.axis * src.b0;
            integrate_region(
                |r| {
                    let d = x - r;
                    let n2 = d.norm_squared();
                    let inv_cube = 1.0 / (n2 * n2.sqrt());
                    bvec.cross(d) * (pref * inv_cube)
                },
                region,
                cfg,
            )
        }
    }
}

/// A scalar gauge function χ with its analytically supplied gradient.
///
/// Carrying the gradient explicitly keeps gauge-breach tests free of
/// finite-difference noise; `gradient_consistent` cross-checks the pair.
#[derive(Clone)]
pub struct GaugeFunction {
    chi: Arc<dyn Fn(Vec3) -> f64 + Send + Sync>,
    gradient: Arc<dyn Fn(Vec3) -> Vec3 + Send + Sync>,
}

impl fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeFunction").finish_non_exhaustive()
    }
}

impl GaugeFunction {
    pub fn new(
        chi: impl Fn(Vec3) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Vec3) -> Vec3 + Send + Sync + 'static,
    ) -> Self {
        GaugeFunction {
            chi: Arc::new(chi),
            gradient: Arc::new(gradient),
        }
    }

    /// χ ≡ 0, the identity gauge.
    pub fn zero() -> Self {
        GaugeFunction::new(|_| 0.0, |_| Vec3::ZERO)
    }

    /// χ(x) = c·x, whose gradient is the constant c.
    pub fn linear(c: Vec3) -> Self {
        GaugeFunction::new(move |x| c.dot(x), move |_| c)
    }

    pub fn chi(&self, x: Vec3) -> f64 {
        (self.chi)(x)
    }

    pub fn gradient(&self, x: Vec3) -> Vec3 {
        (self.gradient)(x)
    }

    /// Checks the supplied gradient against central differences of χ at the
    /// given points, to 1e-6 relative (or absolute where the gradient is
    /// tiny).
    pub fn gradient_consistent(&self, points: &[Vec3], h: f64) -> bool {
        points.iter().all(|&x| {
            let fd = Vec3::new(
                (self.chi(x + Vec3::new(h, 0.0, 0.0)) - self.chi(x - Vec3::new(h, 0.0, 0.0)))
                    / (2.0 * h),
                (self.chi(x + Vec3::new(0.0, h, 0.0)) - self.chi(x - Vec3::new(0.0, h, 0.0)))
                    / (2.0 * h),
                (self.chi(x + Vec3::new(0.0, 0.0, h)) - self.chi(x - Vec3::new(0.0, 0.0, h)))
                    / (2.0 * h),
            );
            let g = self.gradient(x);
            (fd - g).norm() <= 1e-6 * g.norm().max(1.0)
        })
    }
}

/// How a [`VectorField`] produces values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form infinite-solenoid potential.
    Analytic,
    /// Volume quadrature over a bounded source.
    Numeric,
    /// Spatially constant field.
    Constant,
    /// Arbitrary user-supplied callable (tests, probes).
    Custom,
    /// A base field plus the gradient of a gauge function.
    GaugeShifted,
}

#[derive(Clone)]
enum FieldKind {
    InfiniteSolenoid {
        src: FluxSource,
    },
    Numeric {
        src: FluxSource,
        cfg: QuadratureConfig,
    },
    Constant {
        value: Vec3,
    },
    Custom {
        eval: Arc<dyn Fn(Vec3) -> Vec3 + Send + Sync>,
    },
    GaugeShifted {
        base: Box<VectorField>,
        chi: GaugeFunction,
    },
}

/// A pure vector field Vec3 → Vec3 with provenance metadata. Evaluation
/// has no state, so the same point always yields the same vector.
#[derive(Clone)]
pub struct VectorField {
    kind: FieldKind,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("provenance", &self.provenance())
            .finish()
    }
}

impl VectorField {
    /// Analytic potential of an ideal infinite solenoid.
    pub fn infinite_solenoid(src: &FluxSource) -> Result<Self> {
        if !matches!(src.kind, SourceKind::InfiniteSolenoid) {
            return Err(Error::WrongSourceKind {
                operation: "VectorField::infinite_solenoid",
                required: "infinite_solenoid",
            });
        }
        Ok(VectorField {
            kind: FieldKind::InfiniteSolenoid { src: *src },
        })
    }

    /// Quadrature-backed potential of a bounded source.
    pub fn numeric(src: &FluxSource, cfg: QuadratureConfig) -> Result<Self> {
        Region3::from_source(src)?;
        Ok(VectorField {
            kind: FieldKind::Numeric { src: *src, cfg },
        })
    }

    pub fn constant(value: Vec3) -> Self {
        VectorField {
            kind: FieldKind::Constant { value },
        }
    }

    pub fn custom(eval: impl Fn(Vec3) -> Vec3 + Send + Sync + 'static) -> Self {
        VectorField {
            kind: FieldKind::Custom {
                eval: Arc::new(eval),
            },
        }
    }

    pub fn provenance(&self) -> Provenance {
        match &self.kind {
            FieldKind::InfiniteSolenoid { .. } => Provenance::Analytic,
            FieldKind::Numeric { .. } => Provenance::Numeric,
            FieldKind::Constant { .. } => Provenance::Constant,
            FieldKind::Custom { .. } => Provenance::Custom,
            FieldKind::GaugeShifted { .. } => Provenance::GaugeShifted,
        }
    }

    pub fn eval(&self, x: Vec3) -> Result<Vec3> {
        match &self.kind {
            FieldKind::InfiniteSolenoid { src } => Ok(infinite_solenoid_potential(src, x)),
            FieldKind::Numeric { src, cfg } => vector_potential_numeric(src, x, cfg),
            FieldKind::Constant { value } => Ok(*value),
            FieldKind::Custom { eval } => Ok(eval(x)),
            FieldKind::GaugeShifted { base, chi } => Ok(base.eval(x)? + chi.gradient(x)),
        }
    }
}

/// F′ = F + ∇χ, marked as gauge-shifted.
pub fn apply_gauge(field: &VectorField, chi: &GaugeFunction) -> VectorField {
    VectorField {
        kind: FieldKind::GaugeShifted {
            base: Box::new(field.clone()),
            chi: chi.clone(),
        },
    }
}

/// Central-difference curl with step h, O(h²).
pub fn curl_fd(field: &VectorField, x: Vec3, h: f64) -> Result<Vec3> {
    let inv2h = 1.0 / (2.0 * h);
    let fxp = field.eval(x + Vec3::new(h, 0.0, 0.0))?;
    let fxm = field.eval(x - Vec3::new(h, 0.0, 0.0))?;
    let fyp = field.eval(x + Vec3::new(0.0, h, 0.0))?;
    let fym = field.eval(x - Vec3::new(0.0, h, 0.0))?;
    let fzp = field.eval(x + Vec3::new(0.0, 0.0, h))?;
    let fzm = field.eval(x - Vec3::new(0.0, 0.0, h))?;
    Ok(Vec3::new(
        (fyp.z - fym.z) * inv2h - (fzp.y - fzm.y) * inv2h,
        (fzp.x - fzm.x) * inv2h - (fxp.z - fxm.z) * inv2h,
        (fxp.y - fxm.y) * inv2h - (fyp.x - fym.x) * inv2h,
    ))
}

/// Central-difference divergence with step h, O(h²).
pub fn div_fd(field: &VectorField, x: Vec3, h: f64) -> Result<f64> {
    let inv2h = 1.0 / (2.0 * h);
    let fxp = field.eval(x + Vec3::new(h, 0.0, 0.0))?;
    let fxm = field.eval(x - Vec3::new(h, 0.0, 0.0))?;
    let fyp = field.eval(x + Vec3::new(0.0, h, 0.0))?;
    let fym = field.eval(x - Vec3::new(0.0, h, 0.0))?;
    let fzp = field.eval(x + Vec3::new(0.0, 0.0, h))?;
    let fzm = field.eval(x - Vec3::new(0.0, 0.0, h))?;
    Ok((fxp.x - fxm.x) * inv2h + (fyp.y - fym.y) * inv2h + (fzp.z - fzm.z) * inv2h)
}

/// ∮ F·dl around a closed polyline [Wb for A-fields].
pub fn loop_integral_a(
    field: &VectorField,
    path: &BeamPath,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<f64>> {
    if !path.is_closed() {
        return Err(Error::OpenPath);
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let res = integrate_polyline(
        |p| match field.eval(p) {
            Ok(v) => v,
            Err(e) => {
                let mut slot = failure.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                Vec3::ZERO
            }
        },
        path,
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(res)
}

/// Smallest clearance between a beam path and the source region: exact
/// segment-to-axis geometry for the infinite solenoid, dense sampling for
/// bounded regions. Negative means the path enters Ω.
pub fn path_region_clearance(src: &FluxSource, path: &BeamPath) -> f64 {
    match src.kind {
        SourceKind::InfiniteSolenoid => {
            let mut min = f64::INFINITY;
            for seg in path.segments() {
                min = min.min(segment_axis_distance(src, seg.start, seg.end) - src.radius);
            }
            min
        }
        _ => {
            let region = match Region3::from_source(src) {
                Ok(r) => r,
                Err(_) => return f64::INFINITY,
            };
            let mut min = f64::INFINITY;
            for seg in path.segments() {
                let samples = 32;
                for i in 0..=samples {
                    let s = i as f64 / samples as f64;
                    min = min.min(region.exterior_distance(seg.point_at(s)));
                }
            }
            min
        }
    }
}

/// Minimum distance from the segment [p0, p1] to the source axis line.
/// The squared distance is quadratic in the segment parameter, so the
/// minimum is closed-form.
fn segment_axis_distance(src: &FluxSource, p0: Vec3, p1: Vec3) -> f64 {
    let a = src.axis;
    let e = p0 - src.center;
    let d = p1 - p0;
    let e_perp = e - a * e.dot(a);
    let d_perp = d - a * d.dot(a);
    let dd = d_perp.norm_squared();
    let s = if dd > 0.0 {
        (-(e_perp.dot(d_perp)) / dd).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (e_perp + d_perp * s).norm()
}
