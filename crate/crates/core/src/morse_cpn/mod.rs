//! The Morse flow of `h(w) = Σ j|w_j|²` on `ℂPᴺ` (`N ≤ 3`), parallel
//! transport for the round connection on `S^{2N+1} → ℂPᴺ`, and the integer
//! weight computations behind the boundary maps of the low-dimensional
//! trajectory spaces.
//!
//! The negative gradient flow is the projectivized linear flow
//! `s·(w₀, w₁, w₂, …) = (w₀, e^{−2s}w₁, e^{−4s}w₂, …)`. Fibres over the
//! critical points `c_k` are identified with `S¹ = ℝ/ℤ` by
//! `r ↦ e^{2πir}·e_k`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Largest supported `N`.
pub const MAX_N: usize = 3;
/// Distance to a critical point below which a sample counts as having arrived.
pub const LIMIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorseError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("trajectory endpoints are not near critical points: {0}")]
    EndpointsNotCritical(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    coords: Vec<Complex64>,
}

impl ProjectivePoint {
    /// Normalizes to unit length; the phase of the representative is kept.
    pub fn new(coords: Vec<Complex64>) -> Result<Self, MorseError> {
        if coords.len() < 2 || coords.len() > MAX_N + 1 {
            return Err(MorseError::Invalid(format!("need 2..={} homogeneous coordinates, got {}", MAX_N + 1, coords.len())));
        }
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(MorseError::Invalid("homogeneous coordinates must be finite and not all zero".into()));
        }
        Ok(ProjectivePoint { coords: coords.into_iter().map(|z| z / norm).collect() })
    }

    pub fn critical(n: usize, k: usize) -> Self {
        let mut coords = vec![Complex64::new(0.0, 0.0); n + 1];
        coords[k] = Complex64::new(1.0, 0.0);
        ProjectivePoint { coords }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Fubini–Study chordal distance `‖a − e^{iθ}b‖` minimized over `θ`.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        let ip: Complex64 = self.coords.iter().zip(&other.coords).map(|(a, b)| b.conj() * a).sum();
        let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b * phase).norm_sqr()).sum::<f64>().sqrt()
    }

    fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&j| self.coords[j].norm() > 0.0).collect()
    }

    /// The point flowed for time `s`, evaluated in closed form with each
    /// coordinate rescaled by the largest modulus to avoid overflow.
    pub fn flowed(&self, s: f64) -> ProjectivePoint {
        let logs: Vec<Option<f64>> =
            self.coords.iter().enumerate().map(|(j, z)| (z.norm() > 0.0).then(|| z.norm().ln() - 2.0 * j as f64 * s)).collect();
        let top = logs.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
        let coords = self
            .coords
            .iter()
            .zip(&logs)
            .map(|(z, l)| match l {
                Some(l) => z / z.norm() * (l - top).exp(),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        ProjectivePoint::new(coords).expect("nonzero after rescaling")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub points: Vec<ProjectivePoint>,
    /// `c_k` the trajectory leaves as `s → −∞`.
    pub source: usize,
    /// `c_j` it approaches as `s → +∞`.
    pub target: usize,
    pub stationary: bool,
}

impl FlowTrajectory {
    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    /// Distances of the first and last samples to the limiting critical points.
    pub fn endpoint_distances(&self) -> (f64, f64) {
        let n = self.points[0].dim();
        let first = self.points[0].distance(&ProjectivePoint::critical(n, self.source));
        let last = self.points.last().unwrap().distance(&ProjectivePoint::critical(n, self.target));
        (first, last)
    }
}

/// Samples the flow line through `start` on `[−back, forward]` with `steps`
/// equal steps. A critical `start` gives a stationary trajectory.
pub fn integrate_flow(start: &ProjectivePoint, back: f64, forward: f64, steps: usize) -> Result<FlowTrajectory, MorseError> {
    if steps == 0 || !(back >= 0.0 && forward >= 0.0) || back + forward <= 0.0 {
        return Err(MorseError::Invalid("need a positive time window and at least one step".into()));
    }
    let support = start.support();
    let (source, target) = (*support.last().unwrap(), support[0]);
    let h = (back + forward) / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|i| -back + i as f64 * h).collect();
    let points = times.iter().map(|&t| start.flowed(t)).collect();
    Ok(FlowTrajectory { times, points, source, target, stationary: source == target })
}

/// Velocity of the horizontal lift at a unit vector `ψ`: the linear field
/// `V = diag(0, −2, −4, …)` minus its component along `ψ`.
fn lift_velocity(psi: &[Complex64]) -> Vec<Complex64> {
    let v: Vec<Complex64> = psi.iter().enumerate().map(|(j, z)| z * (-2.0 * j as f64)).collect();
    let along: Complex64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    v.iter().zip(psi).map(|(b, a)| b - a * along).collect()
}

fn axpy(x: &[Complex64], a: f64, y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(p, q)| p + q * a).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transport {
    pub source: usize,
    pub target: usize,
    /// The transport element in `ℝ/ℤ`, in `[0, 1)`.
    pub alpha: f64,
    pub rk4_steps: usize,
}

/// Parallel transport from the fibre over the source to the fibre over the
/// target, for the round connection.
///
/// The lift starts at the point over the first sample whose source
/// coordinate is real and positive (the projection of `1 ∈ S¹` over the
/// source) and is integrated with classical RK4 at the sample step. The
/// result is the phase of its target coordinate at the last sample.
pub fn parallel_transport(traj: &FlowTrajectory) -> Result<Transport, MorseError> {
    let (first, last) = traj.endpoint_distances();
    if first > LIMIT_TOL || last > LIMIT_TOL {
        return Err(MorseError::EndpointsNotCritical(format!(
            "first sample is {first:.2e} from c_{}, last is {last:.2e} from c_{}",
            traj.source, traj.target
        )));
    }
    if traj.stationary {
        return Ok(Transport { source: traj.source, target: traj.target, alpha: 0.0, rk4_steps: 0 });
    }
    let p0 = traj.points[0].coords();
    let z = p0[traj.source];
    let mut psi: Vec<Complex64> = p0.iter().map(|c| c * (z.conj() / z.norm())).collect();
    let h = traj.step();
    let steps = traj.times.len() - 1;
    for _ in 0..steps {
        let k1 = lift_velocity(&psi);
        let k2 = lift_velocity(&axpy(&psi, h / 2.0, &k1));
        let k3 = lift_velocity(&axpy(&psi, h / 2.0, &k2));
        let k4 = lift_velocity(&axpy(&psi, h, &k3));
        psi = psi
            .iter()
            .enumerate()
            .map(|(j, p)| p + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0))
            .collect();
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|c| *c /= norm);
    }
    let alpha = (psi[traj.target].arg() / (2.0 * PI)).rem_euclid(1.0);
    Ok(Transport { source: traj.source, target: traj.target, alpha, rk4_steps: steps })
}

/// Distance from `a` to `b` in `ℝ/ℤ`, in `[0, 1/2]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Time step used for every transport computed in this module.
pub const STEP: f64 = 0.01;

/// Transport along the flow line through `p`, over a window long enough that
/// both ends are within `1e−9` of their critical points.
pub fn transport_through(p: &ProjectivePoint) -> Result<Transport, MorseError> {
    let support = p.support();
    let (lo, hi) = (support[0], *support.last().unwrap());
    if lo == hi {
        return parallel_transport(&integrate_flow(p, 1.0, 1.0, 1)?);
    }
    // the slowest rate of approach is e^{−2s}; pad for small coordinates
    let smallest = support.iter().map(|&j| p.coords()[j].norm()).fold(1.0, f64::min);
    let window = 12.0 + 0.5 * (1.0 / smallest).ln();
    let steps = (2.0 * window / STEP).ceil() as usize;
    parallel_transport(&integrate_flow(p, window, window, steps)?)
}

fn cis(r: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// The `P₁` family `v_r(s) = (e^{2πir} : e^{−2s} : 0)` evaluated in closed form.
pub fn p1_family_point(r: f64, s: f64) -> ProjectivePoint {
    ProjectivePoint::new(vec![cis(r), Complex64::new((-2.0 * s).exp(), 0.0), Complex64::new(0.0, 0.0)]).unwrap()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindingReport {
    pub grid: usize,
    pub winding: i64,
    /// Distance of the accumulated unwrapped change from the nearest integer.
    pub unwrap_residual: f64,
    /// Largest single unwrapped step; the grid is doubled while it exceeds 1/4.
    pub max_step: f64,
    pub values: Vec<f64>,
    pub orientation: String,
}

/// Degree of `r ↦ α₁(v_r)` by unwrapped accumulation over a uniform grid of
/// at least `grid` points.
pub fn alpha1_winding(grid: usize) -> Result<WindingReport, MorseError> {
    if grid < 2 {
        return Err(MorseError::Invalid("grid needs at least 2 points".into()));
    }
    let mut g = grid;
    loop {
        let values = (0..g)
            .map(|i| transport_through(&p1_family_point(i as f64 / g as f64, 0.0)).map(|t| t.alpha))
            .collect::<Result<Vec<_>, _>>()?;
        let steps: Vec<f64> = (0..g)
            .map(|i| {
                let d = (values[(i + 1) % g] - values[i]).rem_euclid(1.0);
                if d > 0.5 { d - 1.0 } else { d }
            })
            .collect();
        let total: f64 = steps.iter().sum();
        let max_step = steps.iter().map(|s| s.abs()).fold(0.0, f64::max);
        if max_step > 0.25 && g < 1 << 14 {
            g *= 2;
            continue;
        }
        return Ok(WindingReport {
            grid: g,
            winding: total.round() as i64,
            unwrap_residual: (total - total.round()).abs(),
            max_step,
            values,
            orientation: "r increasing, S^1 = R/Z, fibre over c_k identified by r -> e^{2 pi i r} e_k".into(),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityRow {
    pub delta: f64,
    /// Closest sampled approach of the unbroken trajectory to `c₁`.
    pub closest_approach: f64,
    pub alpha2: f64,
    pub upper_piece: f64,
    pub lower_piece: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub rows: Vec<AdditivityRow>,
    /// Errors never increase from one `δ` to the next smaller one, counting
    /// anything below [`ROUNDOFF_FLOOR`] as zero.
    pub monotone: bool,
    pub finest_error: f64,
}

/// Below this, differences between transport values are floating-point noise.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Phases of the two pieces of the broken trajectory used by [`additivity`].
pub const BROKEN_PHASES: (f64, f64) = (0.3, 0.85);

/// `α₂` along trajectories in `ℂP²` through `(δa/√2 : 1 : δb/√2)`, which pass
/// within about `δ` of `c₁` and break as `δ → 0` into the flow lines through
/// `(0 : 1 : b)` and `(a : 1 : 0)`, compared with the sum of `α₁` on those
/// pieces.
pub fn additivity(deltas: &[f64]) -> Result<AdditivityReport, MorseError> {
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
        return Err(MorseError::Invalid("deltas must lie in (0, 1)".into()));
    }
    let (a, b) = (cis(BROKEN_PHASES.0), cis(BROKEN_PHASES.1));
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let upper = transport_through(&ProjectivePoint::new(vec![zero, one, b])?)?.alpha;
    let lower = transport_through(&ProjectivePoint::new(vec![a, one, zero])?)?.alpha;
    let c1 = ProjectivePoint::critical(2, 1);
    let mut rows = Vec::new();
    for &delta in deltas {
        let s = delta / 2f64.sqrt();
        let p = ProjectivePoint::new(vec![a * s, one, b * s])?;
        let closest = [-1.0, -0.5, 0.0, 0.5, 1.0].iter().map(|&t| p.flowed(t).distance(&c1)).fold(f64::INFINITY, f64::min);
        let alpha2 = transport_through(&p)?.alpha;
        rows.push(AdditivityRow {
            delta,
            closest_approach: closest,
            alpha2,
            upper_piece: upper,
            lower_piece: lower,
            error: circle_distance(alpha2, (upper + lower).rem_euclid(1.0)),
        });
    }
    let mut sorted = rows.clone();
    sorted.sort_by(|x, y| y.delta.total_cmp(&x.delta));
    let floor = |e: f64| if e < ROUNDOFF_FLOOR { 0.0 } else { e };
    let monotone = sorted.windows(2).all(|w| floor(w[1].error) <= floor(w[0].error));
    let finest_error = sorted.last().unwrap().error;
    Ok(AdditivityReport { rows, monotone, finest_error })
}

/// 2×2 integer matrix, row-major.
pub type Mat2 = [[i64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_det(a: &Mat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse over `ℤ`, if the determinant is `±1`.
pub fn mat2_inverse(a: &Mat2) -> Option<Mat2> {
    let det = mat2_det(a);
    (det == 1 || det == -1).then(|| [[a[1][1] * det, -a[0][1] * det], [-a[1][0] * det, a[0][0] * det]])
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightFacts {
    /// `(S¹)³` weights on the two `P₁` boundary factors of `P₂`.
    pub factor_weights: [[i64; 3]; 2],
    /// The diagonal subgroup acts trivially on both factors.
    pub diagonal_trivial: bool,
    /// Weights of the subgroup `(1, e^{2πir}, 1)` on the two factors.
    pub subgroup_weights: [i64; 2],
    /// The orbit class of that subgroup, which lies in the kernel.
    pub kernel_vector: [i64; 2],
    /// The onto map `ℤ² → ℤ` killing the kernel vector, up to sign.
    pub boundary_map: [i64; 2],
    pub boundary_map_is_diagonal: bool,
    /// `H₁(S¹×S¹) → H₁(P₀ˢ × P₁)`, rows the weights on the two factors.
    pub to_first: Mat2,
    /// `H₁(S¹×S¹) → H₁(P₁ × P₀ˢ)`.
    pub to_second: Mat2,
    /// `to_second · to_first⁻¹`.
    pub transition: Mat2,
    pub transition_det: i64,
}

/// Integer weight computations behind the boundary maps between the broken-trajectory spaces.
pub fn weight_matrix_facts() -> WeightFacts {
    let factor_weights = [[0, 1, -1], [1, -1, 0]];
    let diagonal_trivial = factor_weights.iter().all(|w| dot(w, &[1, 1, 1]) == 0);
    let dir = [0, 1, 0];
    let subgroup_weights = [dot(&factor_weights[0], &dir), dot(&factor_weights[1], &dir)];
    let kernel_vector = subgroup_weights;
    // primitive integer row vector orthogonal to the kernel vector
    let g = num_integer::gcd(kernel_vector[0], kernel_vector[1]).max(1);
    let boundary_map = [kernel_vector[1] / g, -kernel_vector[0] / g];
    let boundary_map = if boundary_map[0] < 0 { [-boundary_map[0], -boundary_map[1]] } else { boundary_map };
    let boundary_map_is_diagonal = boundary_map[0] == boundary_map[1];

    let p0s_first = [0, 1];
    let p1 = [1, -1];
    let p0s_second = [1, 0];
    let to_first: Mat2 = [p0s_first, p1];
    let to_second: Mat2 = [p1, p0s_second];
    let transition = mat2_mul(&to_second, &mat2_inverse(&to_first).expect("weights give an invertible matrix"));
    WeightFacts {
        factor_weights,
        diagonal_trivial,
        subgroup_weights,
        kernel_vector,
        boundary_map,
        boundary_map_is_diagonal,
        to_first,
        to_second,
        transition,
        transition_det: mat2_det(&transition),
    }
}
