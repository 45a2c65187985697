//! Deterministic numerical integration over flux regions, polylines, and
//! time intervals.
//!
//! Three integrators share one convergence contract: the result carries an
//! error estimate, and `converged` implies
//! `error_estimate <= max(rel_tol * |value|, abs_tol)`.
//!
//! Region integrals use tensor-product Gauss–Legendre panels refined by
//! whole-grid doubling, with the error estimated from the last two
//! refinement levels. Angular and axial nodes are generated in exact ±
//! pairs, so mirror-symmetric inputs produce results that agree to rounding
//! rather than to the quadrature tolerance; the half-space shield and the
//! mirror-point relations rely on this. One-dimensional integrals use
//! largest-error-first interval subdivision with a fixed index tiebreak, so
//! results are reproducible bit-for-bit.

use crate::error::{Error, Result};
use crate::model::{BeamPath, FluxSource, SourceKind, ValidationIssue};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Convergence targets shared by all integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral value.
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Absolute tolerance, in integrand units times the measure.
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    /// Budget of cells (region) or intervals (1D) per integral.
    #[serde(default = "default_max_subdivisions")]
    pub max_subdivisions: u64,
}

fn default_rel_tol() -> f64 {
    1e-6
}
fn default_abs_tol() -> f64 {
    1e-14
}
fn default_max_subdivisions() -> u64 {
    1_000_000
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            max_subdivisions: default_max_subdivisions(),
        }
    }
}

impl QuadratureConfig {
    /// Same budget, tighter relative tolerance.
    pub fn with_rel_tol(&self, rel_tol: f64) -> Self {
        QuadratureConfig { rel_tol, ..*self }
    }

    pub(crate) fn validate_into(&self, path: &str, issues: &mut Vec<ValidationIssue>) {
        if !(self.rel_tol > 0.0) {
            issues.push(ValidationIssue::new(
                format!("{path}.rel_tol"),
                "must be > 0",
            ));
        }
        if !(self.abs_tol >= 0.0) {
            issues.push(ValidationIssue::new(
                format!("{path}.abs_tol"),
                "must be >= 0",
            ));
        }
        if self.max_subdivisions < 1 {
            issues.push(ValidationIssue::new(
                format!("{path}.max_subdivisions"),
                "must be >= 1",
            ));
        }
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy)]
pub struct IntegralResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub subdivisions_used: u64,
    pub converged: bool,
}

impl<T: QuadValue> IntegralResult<T> {
    /// Convergence threshold this result was held to.
    pub fn tolerance_bound(&self, cfg: &QuadratureConfig) -> f64 {
        (cfg.rel_tol * self.value.magnitude()).max(cfg.abs_tol)
    }
}

/// Values the integrators can accumulate: scalars and 3-vectors.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Vec3 {
    fn zero() -> Self {
        Vec3::ZERO
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Compensated (Kahan) accumulator; keeps long node sums order-stable to
/// a couple of ulps, which the exact-symmetry tests lean on.
pub(crate) struct Kahan<T: QuadValue> {
    sum: T,
    comp: T,
}

impl<T: QuadValue> Kahan<T> {
    pub(crate) fn new() -> Self {
        Kahan {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub(crate) fn add(&mut self, term: T) {
        let y = term.sub(self.comp);
        let t = self.sum.add(y);
        self.comp = t.sub(self.sum).sub(y);
        self.sum = t;
    }

    pub(crate) fn value(&self) -> T {
        self.sum
    }
}

// 8-point Gauss–Legendre rule on [-1, 1].
const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gl8<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> T {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Kahan::new();
    for i in 0..8 {
        acc.add(f(mid + half * GL8_NODES[i]).scale(GL8_WEIGHTS[i] * half));
    }
    acc.value()
}

// ---------------------------------------------------------------------------
// 1D adaptive integration
// ---------------------------------------------------------------------------

struct Interval<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    alive: bool,
}

/// Max-heap key: largest error first, smaller sequence number on ties.
#[derive(PartialEq)]
struct HeapKey {
    err: f64,
    seq: usize,
}

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn assess<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let whole = gl8(f, a, b);
    let mid = 0.5 * (a + b);
    let fine = gl8(f, a, mid).add(gl8(f, mid, b));
    let err = fine.sub(whole).magnitude();
    (fine, err)
}

/// Adaptive 1D integration of `f` over `[t0, t1]`.
///
/// Subdivision is deterministic: the interval with the largest error
/// estimate splits first, ties broken by creation order. The final value is
/// re-summed over intervals sorted by position, so it does not depend on
/// the history of heap operations.
pub fn integrate_interval<T: QuadValue>(
    f: impl Fn(f64) -> T,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<T>> {
    if !t0.is_finite() || !t1.is_finite() || !(t0 < t1) {
        return Err(Error::EmptyTimeInterval { t0, t1 });
    }

    let mut intervals: Vec<Interval<T>> = Vec::new();
    let mut heap: BinaryHeap<HeapKey> = BinaryHeap::new();

    let mut running_sum: T;
    let mut running_err: f64;

    {
        let (value, err) = assess(&f, t0, t1);
        running_sum = value;
        running_err = err;
        intervals.push(Interval {
            a: t0,
            b: t1,
            value,
            err,
            alive: true,
        });
        heap.push(HeapKey { err, seq: 0 });
    }
    let mut processed: u64 = 1;

    loop {
        let bound = (cfg.rel_tol * running_sum.magnitude()).max(cfg.abs_tol);
        if running_err <= bound || processed >= cfg.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let (a, b, parent_value, parent_err) = {
            let iv = &intervals[worst.seq];
            (iv.a, iv.b, iv.value, iv.err)
        };
        let mid = 0.5 * (a + b);
        if !(mid > a && mid < b) {
            // Interval is at floating-point resolution; keep its estimate
            // and stop refining it.
            continue;
        }
        intervals[worst.seq].alive = false;

        let (lv, le) = assess(&f, a, mid);
        let (rv, re) = assess(&f, mid, b);
        running_sum = running_sum.sub(parent_value).add(lv).add(rv);
        running_err = running_err - parent_err + le + re;
        processed += 2;

        let seq_l = intervals.len();
        intervals.push(Interval {
            a,
            b: mid,
            value: lv,
            err: le,
            alive: true,
        });
        heap.push(HeapKey { err: le, seq: seq_l });

        let seq_r = intervals.len();
        intervals.push(Interval {
            a: mid,
            b,
            value: rv,
            err: re,
            alive: true,
        });
        heap.push(HeapKey { err: re, seq: seq_r });
    }

    // Final reduction in positional order, independent of refinement history.
    let mut live: Vec<&Interval<T>> = intervals.iter().filter(|iv| iv.alive).collect();
    live.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let mut vsum = Kahan::new();
    let mut esum = Kahan::new();
    for iv in &live {
        vsum.add(iv.value);
        esum.add(iv.err);
    }
    let value = vsum.value();
    let error_estimate = esum.value();
    let bound = (cfg.rel_tol * value.magnitude()).max(cfg.abs_tol);

    Ok(IntegralResult {
        value,
        error_estimate,
        subdivisions_used: processed,
        converged: error_estimate <= bound,
    })
}

/// Adaptive integral of a scalar function of time over `[t0, t1]`.
pub fn integrate_time(
    g: impl Fn(f64) -> f64,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<f64>> {
    integrate_interval(g, t0, t1, cfg)
}

/// Line integral of a vector field along a polyline: Σ over segments of
/// ∫ f(p)·dl, each segment refined adaptively with its share of the
/// absolute-tolerance and subdivision budgets.
pub fn integrate_polyline(
    f: impl Fn(Vec3) -> Vec3,
    path: &BeamPath,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<f64>> {
    let nseg = path.vertices.len().saturating_sub(1);
    if nseg == 0 {
        return Err(Error::PathTooShort);
    }
    let seg_cfg = QuadratureConfig {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol / nseg as f64,
        max_subdivisions: (cfg.max_subdivisions / nseg as u64).max(16),
    };

    let mut vsum = Kahan::new();
    let mut esum = Kahan::new();
    let mut used = 0;
    let mut converged = true;
    for seg in path.segments() {
        let delta = seg.delta();
        let part = integrate_interval(|s| f(seg.point_at(s)).dot(delta), 0.0, 1.0, &seg_cfg)?;
        vsum.add(part.value);
        esum.add(part.error_estimate);
        used += part.subdivisions_used;
        converged &= part.converged;
    }

    Ok(IntegralResult {
        value: vsum.value(),
        error_estimate: esum.value(),
        subdivisions_used: used,
        converged,
    })
}

// ---------------------------------------------------------------------------
// Region integration
// ---------------------------------------------------------------------------

/// Right-handed orthonormal frame with `w` along the source axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
    pub w: Vec3,
}

impl Frame {
    /// Deterministic frame from an axis: `u` is built from the coordinate
    /// direction least aligned with `w`, so equal inputs give equal frames.
    pub fn from_axis(origin: Vec3, axis: Vec3) -> Frame {
        let w = axis;
        let (ax, ay, az) = (w.x.abs(), w.y.abs(), w.z.abs());
        let helper = if ax <= ay && ax <= az {
            Vec3::new(1.0, 0.0, 0.0)
        } else if ay <= az {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        let u = w
            .cross(helper)
            .normalized()
            .expect("axis must be a unit vector");
        let v = w.cross(u);
        Frame { origin, u, v, w }
    }
}

/// Bounded integration domain Ω in coordinates adapted to a flux source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region3 {
    Cylinder {
        frame: Frame,
        radius: f64,
        half_length: f64,
    },
    Torus {
        frame: Frame,
        major_radius: f64,
        minor_radius: f64,
    },
}

impl Region3 {
    /// The region occupied by a bounded source; the ideal infinite solenoid
    /// has no bounded region.
    pub fn from_source(src: &FluxSource) -> Result<Region3> {
        let frame = Frame::from_axis(src.center, src.axis);
        match src.kind {
            SourceKind::FiniteSolenoid { length } => Ok(Region3::Cylinder {
                frame,
                radius: src.radius,
                half_length: 0.5 * length,
            }),
            SourceKind::Toroid { minor_radius } => Ok(Region3::Torus {
                frame,
                major_radius: src.radius,
                minor_radius,
            }),
            SourceKind::InfiniteSolenoid => Err(Error::UnboundedRegion),
        }
    }

    /// Signed distance to the region boundary: positive outside, negative
    /// inside.
    pub fn exterior_distance(&self, x: Vec3) -> f64 {
        match *self {
            Region3::Cylinder {
                frame,
                radius,
                half_length,
            } => {
                let d = x - frame.origin;
                let z = d.dot(frame.w);
                let rho = (d - frame.w * z).norm();
                let dz = z.abs() - half_length;
                let dr = rho - radius;
                if dz <= 0.0 && dr <= 0.0 {
                    dz.max(dr)
                } else {
                    (dz.max(0.0).powi(2) + dr.max(0.0).powi(2)).sqrt()
                }
            }
            Region3::Torus {
                frame,
                major_radius,
                minor_radius,
            } => {
                let d = x - frame.origin;
                let z = d.dot(frame.w);
                let rho = (d - frame.w * z).norm();
                ((rho - major_radius).powi(2) + z * z).sqrt() - minor_radius
            }
        }
    }

    /// Volume of the region.
    pub fn measure(&self) -> f64 {
        match *self {
            Region3::Cylinder {
                radius,
                half_length,
                ..
            } => PI * radius * radius * 2.0 * half_length,
            Region3::Torus {
                major_radius,
                minor_radius,
                ..
            } => 2.0 * PI * PI * major_radius * minor_radius * minor_radius,
        }
    }

    pub fn frame(&self) -> &Frame {
        match self {
            Region3::Cylinder { frame, .. } => frame,
            Region3::Torus { frame, .. } => frame,
        }
    }

    /// Initial panel counts per coordinate, scaled so panel widths track the
    /// smallest geometric feature. Counts that must pair (axial, angular)
    /// start even and stay even under doubling.
    fn base_panels(&self) -> [usize; 3] {
        match *self {
            Region3::Cylinder {
                radius,
                half_length,
                ..
            } => {
                let nz = even_at_least((half_length / radius).ceil() as usize, 2).min(512);
                [nz, 2, 4]
            }
            Region3::Torus {
                major_radius,
                minor_radius,
                ..
            } => {
                let nt =
                    even_at_least((PI * major_radius / minor_radius).ceil() as usize, 8).min(128);
                [2, 4, nt]
            }
        }
    }

    fn cell_count(panels: [usize; 3]) -> u64 {
        panels.iter().map(|&n| n as u64).product()
    }

    fn eval_tensor<T: QuadValue>(&self, f: &impl Fn(Vec3) -> T, panels: [usize; 3]) -> T {
        match *self {
            Region3::Cylinder {
                frame,
                radius,
                half_length,
            } => {
                let axial = symmetric_axial_nodes(panels[0], half_length);
                let radial = line_nodes(panels[1], 0.0, radius);
                let angular = angular_nodes(panels[2]);
                let mut acc = Kahan::new();
                for &(z, wz) in &axial {
                    let on_axis = frame.origin + frame.w * z;
                    for &(rho, wr) in &radial {
                        let jr = wz * wr * rho;
                        for &(c, s, wt) in &angular {
                            let p = on_axis + frame.u * (rho * c) + frame.v * (rho * s);
                            acc.add(f(p).scale(jr * wt));
                        }
                    }
                }
                acc.value()
            }
            Region3::Torus {
                frame,
                major_radius,
                minor_radius,
            } => {
                let minor = line_nodes(panels[0], 0.0, minor_radius);
                let poloidal = angular_nodes(panels[1]);
                let toroidal = angular_nodes(panels[2]);
                let mut acc = Kahan::new();
                for &(sr, wsr) in &minor {
                    for &(cp, sp, wp) in &poloidal {
                        let ring = major_radius + sr * cp;
                        let lift = frame.w * (sr * sp);
                        let jac = wsr * wp * sr * ring;
                        for &(ct, st, wt) in &toroidal {
                            let p = frame.origin
                                + frame.u * (ring * ct)
                                + frame.v * (ring * st)
                                + lift;
                            acc.add(f(p).scale(jac * wt));
                        }
                    }
                }
                acc.value()
            }
        }
    }
}

fn even_at_least(n: usize, lo: usize) -> usize {
    let n = n.max(lo);
    if n % 2 == 1 {
        n + 1
    } else {
        n
    }
}

/// Plain composite Gauss–Legendre nodes over `[a, b]`.
fn line_nodes(panels: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * 8);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        for i in 0..8 {
            nodes.push((mid + half * GL8_NODES[i], GL8_WEIGHTS[i] * half));
        }
    }
    nodes
}

/// Axial nodes over `[-h, h]` built as exact ± pairs: the z > 0 half is
/// generated, then mirrored by negation, so the node set is bitwise
/// symmetric about the midplane and z = 0 is always a panel boundary.
fn symmetric_axial_nodes(panels: usize, half_length: f64) -> Vec<(f64, f64)> {
    debug_assert!(panels.is_multiple_of(2));
    let upper = line_nodes(panels / 2, 0.0, half_length);
    let mut nodes = Vec::with_capacity(panels * 8);
    nodes.extend_from_slice(&upper);
    nodes.extend(upper.iter().map(|&(z, w)| (-z, w)));
    nodes
}

/// Angular nodes over the full circle as `(cos, sin, weight)`, built as
/// exact antipodal pairs: nodes on `[0, π)` are generated, then their
/// θ + π partners appended as `(-cos, -sin)`. Rotating an evaluation point
/// by π therefore permutes node contributions instead of perturbing them.
fn angular_nodes(panels: usize) -> Vec<(f64, f64, f64)> {
    debug_assert!(panels.is_multiple_of(2));
    let half = panels / 2;
    let width = PI / half as f64;
    let mut nodes = Vec::with_capacity(panels * 8);
    for p in 0..half {
        let mid = (p as f64 + 0.5) * width;
        let hw = 0.5 * width;
        for i in 0..8 {
            let theta = mid + hw * GL8_NODES[i];
            nodes.push((theta.cos(), theta.sin(), GL8_WEIGHTS[i] * hw));
        }
    }
    for i in 0..half * 8 {
        let (c, s, w) = nodes[i];
        nodes.push((-c, -s, w));
    }
    nodes
}

/// Integral of `f` over a bounded region.
///
/// The grid is refined by doubling every panel count until two successive
/// levels agree to tolerance; the reported estimate is that last
/// level-to-level difference. Non-convergence (budget exhausted) is
/// reported through the `converged` flag, with the best value so far.
pub fn integrate_region<T: QuadValue>(
    f: impl Fn(Vec3) -> T,
    region: &Region3,
    cfg: &QuadratureConfig,
) -> IntegralResult<T> {
    let mut panels = region.base_panels();
    let mut value = region.eval_tensor(&f, panels);
    let mut used = Region3::cell_count(panels);
    let mut error_estimate = f64::INFINITY;

    loop {
        let next = panels.map(|n| n * 2);
        if used + Region3::cell_count(next) > cfg.max_subdivisions {
            return IntegralResult {
                value,
                error_estimate,
                subdivisions_used: used,
                converged: false,
            };
        }
        let refined = region.eval_tensor(&f, next);
        used += Region3::cell_count(next);
        error_estimate = refined.sub(value).magnitude();
        value = refined;
        panels = next;

        let bound = (cfg.rel_tol * value.magnitude()).max(cfg.abs_tol);
        if error_estimate <= bound {
            return IntegralResult {
                value,
                error_estimate,
                subdivisions_used: used,
                converged: true,
            };
        }
    }
}
