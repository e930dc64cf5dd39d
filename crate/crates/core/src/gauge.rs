//! Convex unit bodies `U ⊂ ℝ³` with `0` in the interior: the gauge
//! (Minkowski functional) `F`, the support function `F_U`, and the
//! one-dimensional searches over covectors `(k, s, 0)`.

use alloc::vec::Vec;
use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vector3f = Vector3<f64>;

/// Unit ball of a (possibly asymmetric) seminorm on `q`, in adapted
/// coordinates `(u₁, u₂, u₃)`.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeBody {
    /// `F(u) = √(uᵀQu)`.
    Ellipsoid { q: Matrix3<f64>, q_inv: Matrix3<f64> },
    /// Convex hull of `vertices`; `facets` are the outward normals scaled
    /// so that each facet is `{n · x = 1}` (the vertices of the polar).
    Polytope { vertices: Vec<Vector3f>, facets: Vec<Vector3f> },
    /// `F(u) = ‖(Tu)ᵢ / wᵢ‖_p` with weights `w` and linear map `T`.
    PNorm { p: f64, weights: Vector3f, map: Matrix3<f64> },
}

fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn p_norm(v: &Vector3f, p: f64) -> f64 {
    if p.is_infinite() {
        v.amax()
    } else if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        v.norm()
    } else {
        let m = v.amax();
        if m == 0.0 {
            return 0.0;
        }
        let s: f64 = v.iter().map(|x| libm::pow(x.abs() / m, p)).sum();
        m * libm::pow(s, 1.0 / p)
    }
}

impl GaugeBody {
    pub fn euclidean() -> Self {
        Self::ellipsoid(Matrix3::identity()).unwrap()
    }

    /// Ellipsoid `{uᵀQu ≤ 1}`; `Q` is symmetrized and must be positive
    /// definite.
    pub fn ellipsoid(q: Matrix3<f64>) -> Result<Self> {
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBody("non-finite matrix entry".into()));
        }
        let q = (q + q.transpose()) * 0.5;
        let chol = q
            .cholesky()
            .ok_or_else(|| Error::InvalidBody("ellipsoid matrix is not positive definite".into()))?;
        let q_inv = chol.inverse();
        Ok(GaugeBody::Ellipsoid { q, q_inv })
    }

    /// Convex hull of at least four points with `0` strictly inside.
    pub fn polytope(vertices: Vec<Vector3f>) -> Result<Self> {
        if vertices.iter().any(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidBody("non-finite vertex".into()));
        }
        let size = vertices.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if vertices.len() < 4 || size == 0.0 {
            return Err(Error::InvalidBody("polytope needs at least four vertices".into()));
        }
        let eps = 1e-12 * size;
        let n = vertices.len();
        let mut facets: Vec<Vector3f> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (vertices[i], vertices[j], vertices[k]);
                    let m = (b - a).cross(&(c - a));
                    if m.norm() <= eps * size {
                        continue;
                    }
                    let m = m.normalize();
                    let d = m.dot(&a);
                    let (mut above, mut below) = (false, false);
                    for v in &vertices {
                        let t = m.dot(v) - d;
                        above |= t > eps;
                        below |= t < -eps;
                    }
                    if above && below {
                        continue;
                    }
                    // orient so the hull lies in {m · x ≤ d}
                    let (m, d) = if above { (-m, -d) } else { (m, d) };
                    if d <= eps {
                        return Err(Error::InvalidBody("0 is not an interior point of the hull".into()));
                    }
                    let nrm = m / d;
                    if !facets.iter().any(|f| (f - nrm).norm() <= 1e-9 * nrm.norm()) {
                        facets.push(nrm);
                    }
                }
            }
        }
        if facets.len() < 4 {
            return Err(Error::InvalidBody("polytope is not full-dimensional".into()));
        }
        Ok(GaugeBody::Polytope { vertices, facets })
    }

    /// Weighted `p`-norm ball `{Σ |uᵢ/wᵢ|^p ≤ 1}`, `1 ≤ p ≤ ∞`.
    pub fn pnorm(p: f64, weights: [f64; 3]) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidBody("p must be at least 1".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidBody("p-norm weights must be positive".into()));
        }
        Ok(GaugeBody::PNorm { p, weights: Vector3f::from(weights), map: Matrix3::identity() })
    }

    /// Minkowski functional `inf{λ > 0 : u/λ ∈ U}`.
    pub fn gauge(&self, u: &Vector3f) -> f64 {
        match self {
            GaugeBody::Ellipsoid { q, .. } => libm::sqrt((u.transpose() * q * u)[0].max(0.0)),
            GaugeBody::Polytope { facets, .. } => {
                facets.iter().map(|f| f.dot(u)).fold(0.0f64, f64::max)
            }
            GaugeBody::PNorm { p, weights, map } => {
                let t = map * u;
                p_norm(&t.component_div(weights), *p)
            }
        }
    }

    /// Support function `F_U(ξ) = max_{u ∈ U} ⟨ξ, u⟩`.
    pub fn support(&self, xi: &Vector3f) -> f64 {
        match self {
            GaugeBody::Ellipsoid { q_inv, .. } => {
                libm::sqrt((xi.transpose() * q_inv * xi)[0].max(0.0))
            }
            GaugeBody::Polytope { vertices, .. } => {
                vertices.iter().map(|v| v.dot(xi)).fold(f64::NEG_INFINITY, f64::max)
            }
            GaugeBody::PNorm { p, weights, map } => {
                let t = match map.try_inverse() {
                    Some(inv) => inv.transpose() * xi,
                    None => return f64::INFINITY,
                };
                p_norm(&t.component_mul(weights), dual_exponent(*p))
            }
        }
    }

    /// The body of `u ↦ F(Mu)`, i.e. `M⁻¹U`.
    pub fn pullback(&self, m: &Matrix3<f64>) -> Result<Self> {
        let inv = m
            .try_inverse()
            .ok_or_else(|| Error::InvalidBody("frame change is singular".into()))?;
        match self {
            GaugeBody::Ellipsoid { q, .. } => Self::ellipsoid(m.transpose() * q * m),
            GaugeBody::Polytope { vertices, .. } => {
                Self::polytope(vertices.iter().map(|v| inv * v).collect())
            }
            GaugeBody::PNorm { p, weights, map } => {
                Ok(GaugeBody::PNorm { p: *p, weights: *weights, map: map * m })
            }
        }
    }

    /// `λU` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Self {
        match self {
            GaugeBody::Ellipsoid { q, q_inv } => GaugeBody::Ellipsoid {
                q: q / (lambda * lambda),
                q_inv: q_inv * (lambda * lambda),
            },
            GaugeBody::Polytope { vertices, facets } => GaugeBody::Polytope {
                vertices: vertices.iter().map(|v| v * lambda).collect(),
                facets: facets.iter().map(|f| f / lambda).collect(),
            },
            GaugeBody::PNorm { p, weights, map } => {
                GaugeBody::PNorm { p: *p, weights: weights * lambda, map: *map }
            }
        }
    }

    /// Whether `U = −U`.
    pub fn is_symmetric(&self) -> bool {
        match self {
            GaugeBody::Polytope { vertices, facets } => {
                let scale = facets.iter().fold(0.0f64, |m, f| m.max(f.norm()));
                facets
                    .iter()
                    .all(|f| facets.iter().any(|g| (f + g).norm() <= 1e-9 * scale))
                    && !vertices.is_empty()
            }
            _ => true,
        }
    }

    /// `F(0, s, 0)`.
    pub fn gauge_e2(&self, s: f64) -> f64 {
        self.gauge(&Vector3f::new(0.0, s, 0.0))
    }

    /// `1/F(0, s, 0)`, the lower bound of `k ↦ F_U(k, s, 0)`.
    pub fn e2_bound(&self, s: f64) -> f64 {
        1.0 / self.gauge_e2(s)
    }
}

/// Outcome of minimizing `φ(k) = F_U(k, s, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportSearch {
    pub found: bool,
    /// Minimizer of `φ`.
    pub k: f64,
    /// `φ(k) − 1/F(0, s, 0)`.
    pub gap: f64,
}

/// Whether some `k` has `F_U(k, s, 0) = 1/F(0, s, 0)` (relative `tol`).
///
/// `φ` is convex and coercive; the bracket `[−L, L]` is doubled until
/// `φ` stops decreasing at both ends, then golden-section search runs to
/// width `1e-10`.
pub fn exists_supporting_k(body: &GaugeBody, s: f64, tol: f64) -> SupportSearch {
    let phi = |k: f64| body.support(&Vector3f::new(k, s, 0.0));
    let bound = body.e2_bound(s);
    let mut l = 1.0f64;
    while l < 1e12 && (phi(l) < phi(l / 2.0) || phi(-l) < phi(-l / 2.0)) {
        l *= 2.0;
    }
    let (mut a, mut b) = (-l, l);
    let r = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (phi(x1), phi(x2));
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = phi(x2);
        }
    }
    let mut k = (a + b) / 2.0;
    let mut best = phi(k);
    // flat minima: prefer 0 when it attains the same value
    let at_zero = phi(0.0);
    if at_zero <= best {
        k = 0.0;
        best = at_zero;
    }
    let gap = best - bound;
    SupportSearch { found: gap <= tol * (1.0 + bound), k, gap }
}

/// Outcome of testing `F_U(k₀, s, 0) = 1/F(0, s, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportTest {
    pub holds: bool,
    pub k: f64,
    /// `F_U(k₀, s, 0) − 1/F(0, s, 0)`.
    pub gap: f64,
}

pub fn fixed_k_support_test(body: &GaugeBody, k0: f64, s: f64, tol: f64) -> SupportTest {
    let bound = body.e2_bound(s);
    let gap = body.support(&Vector3f::new(k0, s, 0.0)) - bound;
    SupportTest { holds: gap.abs() <= tol * (1.0 + bound), k: k0, gap }
}
