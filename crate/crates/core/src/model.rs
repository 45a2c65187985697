//! Domain types shared by every other module: flux sources, charges,
//! shields, beam paths, and the scenario container consumed by the CLI.
//!
//! All types are immutable values; operations elsewhere are pure functions
//! of them. `Scenario` doubles as the scenario-file schema (TOML via serde),
//! with SI units throughout.

use crate::quadrature::QuadratureConfig;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Tolerance on |axis| − 1 for unit-axis validation.
pub const AXIS_UNIT_TOL: f64 = 1e-12;

/// Geometry of the confined static field region Ω.
///
/// The interior field is idealized: uniform magnitude `B0` along the axis
/// (solenoids) or along the tube (toroid), and exactly zero outside Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceKind {
    /// Ideal infinitely long solenoid; fields are served analytically.
    InfiniteSolenoid,
    /// Solenoid of finite length (m); fields come from numerical quadrature.
    FiniteSolenoid { length: f64 },
    /// Torus with the given minor radius (m); the `radius` field of
    /// [`FluxSource`] is the major radius.
    Toroid { minor_radius: f64 },
}

/// A confined static flux source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxSource {
    #[serde(flatten)]
    pub kind: SourceKind,
    /// Geometric center (m).
    pub center: Vec3,
    /// Unit symmetry axis.
    pub axis: Vec3,
    /// Solenoid radius or torus major radius (m).
    pub radius: f64,
    /// Interior field magnitude (T), non-negative.
    #[serde(rename = "B0")]
    pub b0: f64,
}

impl FluxSource {
    /// Total confined flux Φ (Wb): B₀·πR² through a solenoid cross-section,
    /// B₀·πr² through the torus tube cross-section.
    pub fn flux(&self) -> f64 {
        match self.kind {
            SourceKind::InfiniteSolenoid | SourceKind::FiniteSolenoid { .. } => {
                self.b0 * PI * self.radius * self.radius
            }
            SourceKind::Toroid { minor_radius } => self.b0 * PI * minor_radius * minor_radius,
        }
    }

    /// The infinite-solenoid idealization of this source (same axis, radius
    /// and field), used as the analytic reference for finite solenoids.
    pub fn idealized(&self) -> FluxSource {
        FluxSource {
            kind: SourceKind::InfiniteSolenoid,
            ..*self
        }
    }

    fn validate_into(&self, path: &str, issues: &mut Vec<ValidationIssue>) {
        if !self.center.is_finite() {
            issues.push(ValidationIssue::new(
                format!("{path}.center"),
                "components must be finite",
            ));
        }
        if !self.axis.is_finite() || (self.axis.norm() - 1.0).abs() > AXIS_UNIT_TOL {
            issues.push(ValidationIssue::new(
                format!("{path}.axis"),
                "must be a unit vector (|axis| = 1 within 1e-12)",
            ));
        }
        if !(self.radius > 0.0) {
            issues.push(ValidationIssue::new(
                format!("{path}.radius"),
                "must be > 0",
            ));
        }
        if !(self.b0 >= 0.0) || !self.b0.is_finite() {
            issues.push(ValidationIssue::new(
                format!("{path}.B0"),
                "must be finite and >= 0",
            ));
        }
        match self.kind {
            SourceKind::FiniteSolenoid { length } => {
                if !(length > 0.0) {
                    issues.push(ValidationIssue::new(
                        format!("{path}.length"),
                        "must be > 0",
                    ));
                }
            }
            SourceKind::Toroid { minor_radius } => {
                if !(minor_radius > 0.0) {
                    issues.push(ValidationIssue::new(
                        format!("{path}.minor_radius"),
                        "must be > 0",
                    ));
                } else if minor_radius >= self.radius {
                    issues.push(ValidationIssue::new(
                        format!("{path}.minor_radius"),
                        "must be smaller than the major radius",
                    ));
                }
            }
            SourceKind::InfiniteSolenoid => {}
        }
    }
}

/// A point charge with position and velocity, the source of B₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCharge {
    /// Signed charge (C); an electron is −e.
    pub q: f64,
    /// Position (m).
    pub x: Vec3,
    /// Velocity (m/s); the field law is non-relativistic, |v| < c enforced.
    pub v: Vec3,
}

impl PointCharge {
    pub fn new(q: f64, x: Vec3, v: Vec3) -> Self {
        PointCharge { q, x, v }
    }
}

/// Superconducting enclosure geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShieldGeometry {
    /// The whole flux region is enclosed.
    FullCylinder,
    /// Only the half with axial coordinate z > 0 (in the source frame) is
    /// coated; the half below is naked.
    HalfSpaceCylinder,
}

/// Superconducting shield around the flux source.
///
/// The Meissner response is modeled as a scalar transmission factor on the
/// external field B₁ inside Ω: 0 is a perfect shield, 1 is transparent.
/// Whether the configured transmission applies at all depends on the probe
/// frequency versus the energy gap; see `shielding::resolve_transmission`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShieldSpec {
    pub geometry: ShieldGeometry,
    /// Superconductor energy gap Δ (eV).
    pub energy_gap: f64,
    /// Fraction of B₁ reaching Ω, in [0, 1].
    pub transmission: f64,
}

impl ShieldSpec {
    fn validate_into(&self, path: &str, issues: &mut Vec<ValidationIssue>) {
        if !(self.energy_gap > 0.0) {
            issues.push(ValidationIssue::new(
                format!("{path}.energy_gap"),
                "must be > 0",
            ));
        }
        if !(0.0..=1.0).contains(&self.transmission) {
            issues.push(ValidationIssue::new(
                format!("{path}.transmission"),
                "must lie in [0, 1]",
            ));
        }
    }
}

/// Polyline trajectory traversed at constant speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamPath {
    /// Ordered vertices (m); at least two, consecutive vertices distinct.
    pub vertices: Vec<Vec3>,
    /// Constant speed along the path (m/s).
    pub speed: f64,
}

/// One straight piece of a [`BeamPath`].
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub start: Vec3,
    pub end: Vec3,
}

impl Segment {
    pub fn delta(&self) -> Vec3 {
        self.end - self.start
    }

    pub fn length(&self) -> f64 {
        self.delta().norm()
    }

    pub fn point_at(&self, s: f64) -> Vec3 {
        self.start + self.delta() * s
    }
}

impl BeamPath {
    pub fn new(vertices: Vec<Vec3>, speed: f64) -> Self {
        BeamPath { vertices, speed }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices
            .windows(2)
            .map(|w| Segment { start: w[0], end: w[1] })
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }

    /// A path is closed when its first and last vertices are identical.
    pub fn is_closed(&self) -> bool {
        self.vertices.len() >= 2 && self.vertices.first() == self.vertices.last()
    }

    fn validate_into(&self, path: &str, issues: &mut Vec<ValidationIssue>) {
        if self.vertices.len() < 2 {
            issues.push(ValidationIssue::new(
                format!("{path}.vertices"),
                "needs at least 2 vertices",
            ));
        }
        if self.vertices.iter().any(|v| !v.is_finite()) {
            issues.push(ValidationIssue::new(
                format!("{path}.vertices"),
                "components must be finite",
            ));
        }
        for (i, w) in self.vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                issues.push(ValidationIssue::new(
                    format!("{path}.vertices[{}]", i + 1),
                    "consecutive vertices must be distinct",
                ));
            }
        }
        if !(self.speed > 0.0) {
            issues.push(ValidationIssue::new(format!("{path}.speed"), "must be > 0"));
        } else if self.speed >= crate::constants::SPEED_OF_LIGHT {
            issues.push(ValidationIssue::new(
                format!("{path}.speed"),
                "must be below the speed of light",
            ));
        }
    }
}

/// Electron wave packet parameters for the pulse/shielding analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePacketSpec {
    /// Coherence length Δl (m).
    pub coherence_length: f64,
    /// Packet speed v (m/s).
    pub speed: f64,
}

impl WavePacketSpec {
    fn validate_into(&self, path: &str, issues: &mut Vec<ValidationIssue>) {
        if !(self.coherence_length > 0.0) {
            issues.push(ValidationIssue::new(
                format!("{path}.coherence_length"),
                "must be > 0",
            ));
        }
        if !(self.speed > 0.0) {
            issues.push(ValidationIssue::new(format!("{path}.speed"), "must be > 0"));
        }
    }
}

/// Which mechanism is assumed to produce the interference shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// The phase follows the enclosed flux via the vector potential,
    /// unaffected by shielding.
    VectorPotential,
    /// The phase accumulates from the superimposed field energy, which a
    /// shield can suppress.
    SuperimposedEnergy,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::VectorPotential => "vector_potential",
            Hypothesis::SuperimposedEnergy => "superimposed_energy",
        }
    }
}

/// The experiment a scenario describes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    /// Two beams split at a common point, pass the source on opposite
    /// sides, and recombine. Scalar fields precede the path tables so the
    /// TOML form stays serializable.
    TwoPath {
        /// Beam particle charge (C); electrons are −e.
        charge_q: f64,
        #[serde(rename = "path_C")]
        path_c: BeamPath,
        #[serde(rename = "path_D")]
        path_d: BeamPath,
    },
    /// A SQUID in the z = 0 plane threaded by the confined flux.
    Squid {
        #[serde(rename = "loop_current_I0")]
        loop_current_i0: f64,
        /// Enclosed flux values to tabulate (Wb).
        flux_sweep: Vec<f64>,
    },
}

/// Full declarative description of a run: source, optional shield, the
/// experiment, which hypothesis to evaluate, and quadrature budget.
///
/// Field order matters for TOML serialization (values before tables).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// `None` means "report both hypotheses" (file value `"both"`).
    #[serde(default, with = "hypothesis_selection")]
    pub hypothesis: Option<Hypothesis>,
    pub source: FluxSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shield: Option<ShieldSpec>,
    pub experiment: Experiment,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_packet: Option<WavePacketSpec>,
}

/// Serde adapter for the tri-state hypothesis key: `"vector_potential"`,
/// `"superimposed_energy"`, or `"both"` (the default).
mod hypothesis_selection {
    use super::Hypothesis;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        value: &Option<Hypothesis>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(match value {
            None => "both",
            Some(h) => h.name(),
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<Hypothesis>, D::Error> {
        let raw = String::deserialize(deserializer)?;
        match raw.as_str() {
            "both" => Ok(None),
            "vector_potential" => Ok(Some(Hypothesis::VectorPotential)),
            "superimposed_energy" => Ok(Some(Hypothesis::SuperimposedEnergy)),
            other => Err(D::Error::custom(format!(
                "unknown hypothesis {other:?}; expected vector_potential, \
                 superimposed_energy, or both"
            ))),
        }
    }
}

/// One violated invariant, with the path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationIssue {
    pub path: String,
    pub message: String,
}

impl ValidationIssue {
    pub(crate) fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.path, self.message)
    }
}

/// Every violated invariant found in a scenario, one line per issue.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Checks every type invariant and returns either `Ok(())` or the full list
/// of violations. Validation is pure, so it is idempotent by construction.
pub fn validate_scenario(s: &Scenario) -> Result<(), ValidationReport> {
    let mut issues = Vec::new();

    s.source.validate_into("source", &mut issues);
    if let Some(shield) = &s.shield {
        shield.validate_into("shield", &mut issues);
    }

    match &s.experiment {
        Experiment::TwoPath {
            path_c,
            path_d,
            charge_q,
        } => {
            path_c.validate_into("experiment.two_path.path_C", &mut issues);
            path_d.validate_into("experiment.two_path.path_D", &mut issues);
            if !charge_q.is_finite() {
                issues.push(ValidationIssue::new(
                    "experiment.two_path.charge_q",
                    "must be finite",
                ));
            }
            // The beams must split and recombine at shared points.
            if let (Some(fc), Some(fd)) = (path_c.vertices.first(), path_d.vertices.first()) {
                if fc != fd {
                    issues.push(ValidationIssue::new(
                        "experiment.two_path",
                        format!(
                            "paths start at different points (path_C first = \
                             [{}, {}, {}], path_D first = [{}, {}, {}])",
                            fc.x, fc.y, fc.z, fd.x, fd.y, fd.z
                        ),
                    ));
                }
            }
            if let (Some(lc), Some(ld)) = (path_c.vertices.last(), path_d.vertices.last()) {
                if lc != ld {
                    issues.push(ValidationIssue::new(
                        "experiment.two_path",
                        format!(
                            "paths end at different points (path_C last = \
                             [{}, {}, {}], path_D last = [{}, {}, {}])",
                            lc.x, lc.y, lc.z, ld.x, ld.y, ld.z
                        ),
                    ));
                }
            }
        }
        Experiment::Squid {
            loop_current_i0,
            flux_sweep,
        } => {
            if !(*loop_current_i0 > 0.0) {
                issues.push(ValidationIssue::new(
                    "experiment.squid.loop_current_I0",
                    "must be > 0",
                ));
            }
            if flux_sweep.is_empty() {
                issues.push(ValidationIssue::new(
                    "experiment.squid.flux_sweep",
                    "must not be empty",
                ));
            }
            if flux_sweep.iter().any(|f| !f.is_finite()) {
                issues.push(ValidationIssue::new(
                    "experiment.squid.flux_sweep",
                    "values must be finite",
                ));
            }
        }
    }

    s.quadrature.validate_into("quadrature", &mut issues);
    if let Some(wp) = &s.wave_packet {
        wp.validate_into("wave_packet", &mut issues);
    }

    if issues.is_empty() {
        Ok(())
    } else {
        Err(ValidationReport { issues })
    }
}

impl Scenario {
    /// See [`validate_scenario`].
    pub fn validate(&self) -> Result<(), ValidationReport> {
        validate_scenario(self)
    }
}
