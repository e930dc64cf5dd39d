//! The adjoint (covector) system along a control law, its closed-form
//! solutions in the abnormal regime, and the one-parameter flows
//! `exp(t ad X)`.
//!
//! Covectors are written in an adapted frame: `ψᵢ = ψ(eᵢ)`, and a control
//! `u = u₁e₁ + u₂e₂ + u₃e₃` gives `ψᵢ' = ψ([u, eᵢ])`, i.e. `ψ' = (ad u)ᵀ ψ`.

use alloc::vec::Vec;
use nalgebra::{Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::gauge::GaugeBody;
use crate::lie::StructureConstants;

/// Step-doubling bound on the local error of one step.
pub const STEP_ERROR_BOUND: f64 = 1e-6;
/// Default step.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovectorState {
    pub t: f64,
    pub psi: Vector4<f64>,
}

/// Control `t ↦ u(t) ∈ q` in adapted coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum ControlLaw {
    Constant(Vector3<f64>),
    /// `(tᵢ, uᵢ)` with increasing `tᵢ`, `t₀ = 0`; `uᵢ` holds on `[tᵢ, tᵢ₊₁)`.
    Piecewise(Vec<(f64, Vector3<f64>)>),
}

impl ControlLaw {
    /// `u = (0, s/F(s e₂), 0)`.
    pub fn abnormal(body: &GaugeBody, s: f64) -> Self {
        ControlLaw::Constant(Vector3::new(0.0, abnormal_u2(body, s), 0.0))
    }

    pub fn piecewise(pieces: Vec<(f64, Vector3<f64>)>) -> Result<Self> {
        if pieces.is_empty() || pieces[0].0 != 0.0 {
            return Err(Error::InvalidInput("piecewise law must start at t = 0".into()));
        }
        if pieces.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidInput("breakpoints must increase".into()));
        }
        Ok(ControlLaw::Piecewise(pieces))
    }

    pub fn at(&self, t: f64) -> Vector3<f64> {
        match self {
            ControlLaw::Constant(u) => *u,
            ControlLaw::Piecewise(p) => p.iter().rev().find(|(t0, _)| *t0 <= t).unwrap_or(&p[0]).1,
        }
    }

    /// Largest `|F(u) − 1|` over the pieces.
    pub fn unit_speed_defect(&self, body: &GaugeBody) -> f64 {
        let pieces: Vec<Vector3<f64>> = match self {
            ControlLaw::Constant(u) => Vec::from([*u]),
            ControlLaw::Piecewise(p) => p.iter().map(|(_, u)| *u).collect(),
        };
        pieces.iter().map(|u| (body.gauge(u) - 1.0).abs()).fold(0.0, f64::max)
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            ControlLaw::Constant(_) => Vec::new(),
            ControlLaw::Piecewise(p) => p.iter().skip(1).map(|(t, _)| *t).collect(),
        }
    }
}

/// `u₂ = s / F(s e₂)`.
pub fn abnormal_u2(body: &GaugeBody, s: f64) -> f64 {
    s / body.gauge_e2(s)
}

/// `(ad u)ᵀ` for `u` in `q`.
fn generator(c: &StructureConstants, u: &Vector3<f64>) -> Matrix4<f64> {
    c.ad(&Vector4::new(u[0], u[1], u[2], 0.0)).transpose()
}

fn rk4(m: &Matrix4<f64>, psi: &Vector4<f64>, h: f64) -> Vector4<f64> {
    let k1 = m * psi;
    let k2 = m * (psi + k1 * (h / 2.0));
    let k3 = m * (psi + k2 * (h / 2.0));
    let k4 = m * (psi + k3 * h);
    psi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Classic RK4 on `ψ' = (ad u(t))ᵀ ψ` from `t = 0` to `t_end` with step
/// `h`, shortened at breakpoints of the law and at `t_end`.
///
/// Every step is repeated as two half steps; the difference, divided by
/// 15 and taken relative to `max(1, |ψ|)`, must stay below
/// [`STEP_ERROR_BOUND`]. The half-step result is kept.
pub fn integrate_adjoint(
    c: &StructureConstants,
    law: &ControlLaw,
    psi0: Vector4<f64>,
    t_end: f64,
    h: f64,
) -> Result<Vec<CovectorState>> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidInput("t_end must be a finite nonnegative time".into()));
    }
    let mut stops: Vec<f64> = law.breakpoints().into_iter().filter(|b| *b < t_end).collect();
    stops.push(t_end);

    let mut out = Vec::from([CovectorState { t: 0.0, psi: psi0 }]);
    let (mut t, mut psi) = (0.0, psi0);
    for stop in stops {
        let m = generator(c, &law.at(t));
        let n = libm::ceil((stop - t) / h - 1e-9).max(0.0) as usize;
        let t_start = t;
        for i in 0..n {
            let next = if i + 1 == n { stop } else { t_start + (i + 1) as f64 * h };
            let dt = next - t;
            let full = rk4(&m, &psi, dt);
            let half = rk4(&m, &rk4(&m, &psi, dt / 2.0), dt / 2.0);
            let estimate = (half - full).amax() / 15.0 / half.amax().max(1.0);
            if !(estimate <= STEP_ERROR_BOUND) {
                return Err(Error::StepTooLarge { t, estimate });
            }
            psi = half;
            t = next;
            out.push(CovectorState { t, psi });
        }
    }
    Ok(out)
}

/// `ψ₄(t) = φ₄ exp(C⁴₂₄ u₂ t)` with `C⁴₂₄ = C³₂₃ − C¹₁₂`.
pub fn psi4_closed_form(c: &StructureConstants, u2: f64, phi4: f64, t: f64) -> f64 {
    let c424 = c.get(2, 3, 3) - c.get(1, 2, 1);
    phi4 * libm::exp(c424 * u2 * t)
}

/// Regime of `ψ₁'' − u₂C³ψ₁' + u₂²C¹ψ₁ + u₂C² = 0` (`Cᵏ = Cᵏ₂₃`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Psi1Branch {
    /// `C¹ ≠ 0`, `B = (C³)² − 4C¹ > 0`: two real exponents.
    Exponential,
    /// `C¹ ≠ 0`, `B = 0`.
    Resonant,
    /// `C¹ ≠ 0`, `B < 0`.
    Oscillatory,
    /// `C¹ = 0`, `C³ ≠ 0`: exponential plus linear drift.
    DriftExponential,
    /// `C¹ = C³ = 0`: quadratic.
    Quadratic,
}

impl Psi1Branch {
    pub fn name(self) -> &'static str {
        match self {
            Psi1Branch::Exponential => "exponential",
            Psi1Branch::Resonant => "resonant",
            Psi1Branch::Oscillatory => "oscillatory",
            Psi1Branch::DriftExponential => "drift-exponential",
            Psi1Branch::Quadratic => "quadratic",
        }
    }
}

/// `B = (C³₂₃)² − 4C¹₂₃`.
pub fn discriminant(c23: [f64; 3]) -> f64 {
    c23[2] * c23[2] - 4.0 * c23[0]
}

/// Branch for `c23 = (C¹₂₃, C²₂₃, C³₂₃)`; `|B| ≤ 1e-12·(1 + (C³₂₃)²)`
/// counts as `B = 0`.
pub fn psi1_branch(c23: [f64; 3]) -> Psi1Branch {
    let [c1, _, c3] = c23;
    if c1 == 0.0 {
        return if c3 == 0.0 { Psi1Branch::Quadratic } else { Psi1Branch::DriftExponential };
    }
    let b = discriminant(c23);
    if b.abs() <= 1e-12 * (1.0 + c3 * c3) {
        Psi1Branch::Resonant
    } else if b > 0.0 {
        Psi1Branch::Exponential
    } else {
        Psi1Branch::Oscillatory
    }
}

/// General solution of the `ψ₁` equation with `ψ₂ = 1/u₂`, in the branch
/// selected by [`psi1_branch`].
///
/// With `κ = −C²/(C¹u₂)`: `A₁e^{λ₁t} + A₂e^{λ₂t} + κ`, `λ₁,₂ = u₂(C³ ± √B)/2`;
/// `(A₁t + A₂)e^{C³u₂t/2} + κ`; `e^{C³u₂t/2}(A₁cos ωt + A₂sin ωt) + κ`,
/// `ω = u₂√(−B)/2`. For `C¹ = 0`: `A₂e^{C³u₂t} + C²t/C³ + A₁`, or
/// `−C²u₂t²/2 + A₂t + A₁`.
pub fn psi1_solution(c23: [f64; 3], u2: f64, a1: f64, a2: f64, t: f64) -> f64 {
    psi1_eval(psi1_branch(c23), c23, u2, a1, a2, t)
}

/// [`psi1_solution`] in a caller-chosen branch; fails when the
/// coefficients select a different one.
pub fn psi1_solution_in(
    branch: Psi1Branch,
    c23: [f64; 3],
    u2: f64,
    a1: f64,
    a2: f64,
    t: f64,
) -> Result<f64> {
    let actual = psi1_branch(c23);
    if actual != branch {
        return Err(Error::Branch { requested: branch.name(), actual: actual.name(), b: discriminant(c23) });
    }
    Ok(psi1_eval(branch, c23, u2, a1, a2, t))
}

fn psi1_eval(branch: Psi1Branch, c23: [f64; 3], u2: f64, a1: f64, a2: f64, t: f64) -> f64 {
    let [c1, c2, c3] = c23;
    let b = discriminant(c23);
    let shift = if c1 != 0.0 { -c2 / (c1 * u2) } else { 0.0 };
    match branch {
        Psi1Branch::Exponential => {
            let r = libm::sqrt(b);
            let l1 = u2 * (c3 + r) / 2.0;
            let l2 = u2 * (c3 - r) / 2.0;
            a1 * libm::exp(l1 * t) + a2 * libm::exp(l2 * t) + shift
        }
        Psi1Branch::Resonant => (a1 * t + a2) * libm::exp(c3 * u2 * t / 2.0) + shift,
        Psi1Branch::Oscillatory => {
            let w = u2 * libm::sqrt(-b) / 2.0;
            libm::exp(c3 * u2 * t / 2.0) * (a1 * libm::cos(w * t) + a2 * libm::sin(w * t)) + shift
        }
        Psi1Branch::DriftExponential => a2 * libm::exp(c3 * u2 * t) + c2 * t / c3 + a1,
        Psi1Branch::Quadratic => -0.5 * c2 * u2 * t * t + a2 * t + a1,
    }
}

/// Residual of the `ψ₁` equation for a sampled function, by central
/// differences with step `h`.
pub fn psi1_residual(c23: [f64; 3], u2: f64, f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    let [c1, c2, c3] = c23;
    let (fm, f0, fp) = (f(t - h), f(t), f(t + h));
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    let d1 = (fp - fm) / (2.0 * h);
    d2 - u2 * c3 * d1 + u2 * u2 * c1 * f0 + u2 * c2
}

/// `exp(t ad X)` in the frame of `c`.
///
/// A nilpotent `ad X` uses the terminating series; otherwise the matrix is
/// scaled to norm at most 1/2, expanded to degree 18 and squared back.
pub fn adjoint_flow(c: &StructureConstants, x: &Vector4<f64>, t: f64) -> Matrix4<f64> {
    let a = c.ad(x) * t;
    let norm = a.amax();
    if norm == 0.0 {
        return Matrix4::identity();
    }
    let a4 = (a * a) * (a * a);
    if a4.amax() <= 1e-14 * libm::pow(norm, 4.0) {
        let a2 = a * a;
        return Matrix4::identity() + a + a2 / 2.0 + a2 * a / 6.0;
    }
    let mut j = 0;
    let mut scaled = a;
    while scaled.norm() > 0.5 {
        scaled /= 2.0;
        j += 1;
    }
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for k in 1..=18 {
        term = term * scaled / k as f64;
        sum += term;
    }
    for _ in 0..j {
        sum = sum * sum;
    }
    sum
}
