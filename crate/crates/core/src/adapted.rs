//! Bases of the algebra adapted to a generating three-dimensional subspace
//! `q`: the distinguished line `q₁ = q ∩ 𝔑(q)`, bases with `e₄ = [e₁, e₃]`,
//! and bases with `e₃ = [e₁, e₂]` where they exist.

use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::lie::{StructureConstants, Subspace, Vector4};
use crate::linalg;

/// Relative threshold for treating a bracket coefficient as zero.
const ZERO_TOL: f64 = 1e-9;
/// Squared-scale threshold on the discriminant of `ad(e₂)` for equal
/// eigenvalues. Defective pairs split by about `√ε`, hence the width.
const DISC_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `e₄ = [e₁, e₃]`, `C¹₁₃ = C²₁₃ = C³₁₃ = 0`, `C⁴₁₃ = 1`, `C⁴₁₂ = C⁴₂₃ = 0`.
    Lemma1,
    /// Additionally `e₃ = [e₁, e₂]`.
    Commutator,
}

/// A basis `(e₁, e₂, e₃, e₄)` with `e₁, e₂, e₃` spanning `q` and `e₂`
/// spanning `q₁`, together with the structure constants in that basis.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    /// Basis vectors in ambient coordinates.
    pub e: [Vector4; 4],
    pub convention: Convention,
    pub adapted_c: StructureConstants,
}

impl AdaptedBasis {
    fn from_vectors(c: &StructureConstants, e: [Vector4; 4], convention: Convention) -> Result<Self> {
        let p = Matrix4::from_columns(&e);
        let adapted_c = c.in_basis(&p).ok_or(Error::DegenerateIntersection(0))?;
        Ok(Self { e, convention, adapted_c })
    }

    /// Columns `e₁..e₄`.
    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&self.e)
    }

    /// Coordinates in `(e₁, …, e₄)` of an ambient vector.
    pub fn coords(&self, v: &Vector4) -> Vector4 {
        self.matrix().try_inverse().map(|m| m * v).unwrap_or_else(Vector4::zeros)
    }

    /// Ambient vector from coordinates in `(e₁, e₂, e₃)`.
    pub fn from_q_coords(&self, u: &Vector3<f64>) -> Vector4 {
        self.e[0] * u[0] + self.e[1] * u[1] + self.e[2] * u[2]
    }

    /// Maximal residual of the identities relating `C_{24}` to `C_{12}` and
    /// `C_{23}` in any basis satisfying the `e₄ = [e₁, e₃]` normalization:
    /// `C¹₂₄ = C¹₁₂C²₂₃ − C²₁₂C¹₂₃`, `C²₂₄ = 0`, `C³₂₄ = C³₁₂C²₂₃ − C²₁₂C³₂₃`,
    /// `C⁴₂₄ = C³₂₃ − C¹₁₂`.
    pub fn derived_constants_check(&self) -> f64 {
        derived_constants_residual(&self.adapted_c)
    }

    /// Residual of the normalization `C¹₁₃ = C²₁₃ = C³₁₃ = 0`, `C⁴₁₃ = 1`,
    /// `C⁴₁₂ = C⁴₂₃ = 0` (plus `C_{12} = e₃` in the commutator convention).
    pub fn normalization_residual(&self) -> f64 {
        let a = &self.adapted_c;
        let mut r = [
            a.get(1, 3, 1),
            a.get(1, 3, 2),
            a.get(1, 3, 3),
            a.get(1, 3, 4) - 1.0,
            a.get(1, 2, 4),
            a.get(2, 3, 4),
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
        if self.convention == Convention::Commutator {
            for (k, want) in [(1, 0.0), (2, 0.0), (3, 1.0)] {
                r = r.max((a.get(1, 2, k) - want).abs());
            }
        }
        r
    }
}

/// See [`AdaptedBasis::derived_constants_check`].
pub fn derived_constants_residual(a: &StructureConstants) -> f64 {
    let c = |i, j, k| a.get(i, j, k);
    [
        c(2, 4, 1) - (c(1, 2, 1) * c(2, 3, 2) - c(1, 2, 2) * c(2, 3, 1)),
        c(2, 4, 2),
        c(2, 4, 3) - (c(1, 2, 3) * c(2, 3, 2) - c(1, 2, 2) * c(2, 3, 3)),
        c(2, 4, 4) - (c(2, 3, 3) - c(1, 2, 1)),
    ]
    .iter()
    .fold(0.0f64, |m, v| m.max(v.abs()))
}

fn require_generating(c: &StructureConstants, q: &Subspace) -> Result<()> {
    if q.dim() != 3 || !c.generates(q) {
        return Err(Error::NotGenerating);
    }
    Ok(())
}

/// `K_ij = w · [b_i, b_j]` for the unit normal `w` of `q`.
fn normal_form(c: &StructureConstants, q: &Subspace) -> (Vector4, Matrix3<f64>) {
    let w = q.complement()[0];
    let b = q.basis();
    let k = Matrix3::from_fn(|i, j| w.dot(&c.bracket(&b[i], &b[j])));
    (w, k)
}

/// Unit vector spanning `q ∩ 𝔑(q)`, first nonzero coordinate positive.
///
/// `x = Σ aᵢbᵢ` normalizes `q` iff `K a = 0` for the antisymmetric form `K`
/// above, whose kernel is spanned by its axial vector.
pub fn distinguished_line(c: &StructureConstants, q: &Subspace) -> Result<Vector4> {
    require_generating(c, q)?;
    let (_, k) = normal_form(c, q);
    let axial = Vector3::new(k[(1, 2)], -k[(0, 2)], k[(0, 1)]);
    if axial.norm() <= ZERO_TOL * c.scale() {
        return Err(Error::DegenerateIntersection(3));
    }
    let b = q.basis();
    let v = b[0] * axial[0] + b[1] * axial[1] + b[2] * axial[2];
    Ok(linalg::sign_normalize(v.normalize()))
}

/// Basis with `e₄ = [e₁, e₃]` and the normalization of
/// [`Convention::Lemma1`].
///
/// `e₁, e₃` are the pair of orthonormal basis vectors of `q` whose bracket
/// leaves `q` the most; the remaining vector is corrected to
/// `e₂ − C⁴₂₃e₁ − C⁴₁₂e₃`, then scaled to unit length.
pub fn lemma1_basis(c: &StructureConstants, q: &Subspace) -> Result<AdaptedBasis> {
    require_generating(c, q)?;
    let (w, k) = normal_form(c, q);
    let b = q.basis();
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .max_by(|a, b| k[*a].abs().total_cmp(&k[*b].abs()))
        .unwrap();
    let rest = 3 - i - j;
    let (e1, e3) = (b[i], b[j]);
    let e4 = c.bracket(&e1, &e3);
    if w.dot(&e4).abs() <= ZERO_TOL * c.scale() {
        return Err(Error::DegenerateIntersection(3));
    }
    let raw = b[rest];
    let p = Matrix4::from_columns(&[e1, raw, e3, e4]);
    let inv = p.try_inverse().ok_or(Error::DegenerateIntersection(0))?;
    let c412 = (inv * c.bracket(&e1, &raw))[3];
    let c423 = (inv * c.bracket(&raw, &e3))[3];
    let e2 = raw - e1 * c423 - e3 * c412;
    let e2 = linalg::sign_normalize(e2.normalize());
    AdaptedBasis::from_vectors(c, [e1, e2, e3, e4], Convention::Lemma1)
}

/// Why no basis with `e₃ = [e₁, e₂]` exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unavailable {
    /// `e₂` is central: `[e₂, q] = 0`.
    Central,
    /// `[e₂, q] = ⟨e₂⟩`: `ad e₂` is zero on `q/⟨e₂⟩`.
    SelfImage,
    /// `ad e₂` is a nonzero scalar on the plane `[e₂, q]`; only `𝔤¹₄,₈`.
    G481,
}

/// Which branch of the case analysis produced a commutator basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `e₂ ∈ [e₂, q]`: `e₁` taken in `q` orthogonal to `[e₂, q]`.
    SelfContaining,
    /// One-dimensional image, `ad e₂` with eigenvalues `0, 0, α ≠ 0`.
    RankOne,
    /// One-dimensional image, `ad e₂|_q` nilpotent.
    RankOneNilpotent,
    /// Two-dimensional image, complex pair.
    ComplexPair,
    /// Two-dimensional image, distinct real eigenvalues.
    RealDistinct,
    /// Two-dimensional image, one real eigenvalue with a Jordan block.
    Jordan,
}

/// Basis with `e₃ = [e₁, e₂]`, `e₄ = [e₁, e₃]`, `e₂` the unit vector of
/// [`distinguished_line`], or the reason none exists.
pub fn commutator_basis(
    c: &StructureConstants,
    q: &Subspace,
) -> Result<core::result::Result<(AdaptedBasis, Construction), Unavailable>> {
    let e2 = distinguished_line(c, q)?;
    let scale = c.scale();
    let s = c.ad_image(&e2, q);
    if s.dim() == 0 {
        return Ok(Err(Unavailable::Central));
    }
    // orthonormal (e₂, a, b) of q and ad e₂ on the quotient q/⟨e₂⟩
    let qb: Vec<Vector4> = {
        let mut v = Vec::from([e2]);
        for x in q.basis() {
            let r = v.iter().fold(*x, |r, y| r - y * y.dot(&r));
            if r.norm() > 1e-6 {
                v.push(r.normalize());
            }
        }
        v
    };
    let (a, b) = (qb[1], qb[2]);
    let quot = Matrix2::new(
        a.dot(&c.bracket(&e2, &a)),
        a.dot(&c.bracket(&e2, &b)),
        b.dot(&c.bracket(&e2, &a)),
        b.dot(&c.bracket(&e2, &b)),
    );
    if s.dim() == 1 && s.contains(&e2) {
        return Ok(Err(Unavailable::SelfImage));
    }
    let (tr, _, _) = linalg::trace_det_disc(&quot);
    let half = tr / 2.0;
    let off_scalar = (quot - Matrix2::identity() * half).amax();
    if s.dim() == 2 && off_scalar <= ZERO_TOL * scale {
        return Ok(Err(Unavailable::G481));
    }

    let (e1, how) = if s.contains(&e2) {
        let perp = q
            .basis()
            .iter()
            .map(|x| s.basis().iter().fold(*x, |r, y| r - y * y.dot(&r)))
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        (perp.normalize(), Construction::SelfContaining)
    } else if s.dim() == 1 {
        if tr.abs() > ZERO_TOL * scale {
            // e ∈ ker ad e₂ off ⟨e₂⟩, f eigenvector for α = tr
            let m = DMatrix::from_fn(3, 3, |r, k| qb[r].dot(&c.bracket(&e2, &qb[k])));
            let ker = linalg::null_space(&m, 1e-7, scale);
            let e_coord = ker
                .iter()
                .map(|v| Vector3::new(0.0, v[1], v[2]))
                .max_by(|x, y| x.norm().total_cmp(&y.norm()))
                .ok_or(Error::DegenerateIntersection(0))?;
            let shifted = &m - DMatrix::identity(3, 3) * tr;
            let f_coord = linalg::null_space(&shifted, 1e-7, scale)
                .into_iter()
                .next()
                .ok_or(Error::DegenerateIntersection(0))?;
            let lift = |v: &[f64]| qb[0] * v[0] + qb[1] * v[1] + qb[2] * v[2];
            let e = lift(e_coord.as_slice());
            let f = lift(&f_coord);
            (-(e + f), Construction::RankOne)
        } else {
            // rank one: the longer row spans the row space
            let r = if quot.row(0).norm() >= quot.row(1).norm() { quot.row(0) } else { quot.row(1) };
            let r = r / r.norm();
            (a * r[0] + b * r[1], Construction::RankOneNilpotent)
        }
    } else {
        // ad e₂ restricted to the invariant plane s
        let sb = s.basis();
        let m = Matrix2::from_fn(|i, j| sb[i].dot(&c.bracket(&e2, &sb[j])));
        let (tr, _, disc_s) = linalg::trace_det_disc(&m);
        if disc_s < -DISC_TOL * scale * scale {
            (sb[0], Construction::ComplexPair)
        } else if disc_s > DISC_TOL * scale * scale {
            let r = libm::sqrt(disc_s);
            let ev = |lam: f64| {
                let v1 = Matrix2::from_columns(&[
                    nalgebra::Vector2::new(m[(0, 1)], lam - m[(0, 0)]),
                    nalgebra::Vector2::new(lam - m[(1, 1)], m[(1, 0)]),
                ]);
                let c0 = v1.column(0).into_owned();
                let c1 = v1.column(1).into_owned();
                let v = if c0.norm() >= c1.norm() { c0 } else { c1 };
                let v = v.normalize();
                sb[0] * v[0] + sb[1] * v[1]
            };
            let e = ev((tr + r) / 2.0);
            let f = ev((tr - r) / 2.0);
            (-(e + f), Construction::RealDistinct)
        } else {
            // Jordan chain: f = (ad e₂ − λ) e for a non-eigenvector e
            let lam = tr / 2.0;
            let n = m - Matrix2::identity() * lam;
            let (i, _) = n.column_iter().enumerate().fold((0, 0.0), |best, (i, col)| {
                if col.norm() > best.1 {
                    (i, col.norm())
                } else {
                    best
                }
            });
            let e_loc = if i == 0 {
                nalgebra::Vector2::new(1.0, 0.0)
            } else {
                nalgebra::Vector2::new(0.0, 1.0)
            };
            let f_loc = n * e_loc;
            let e = sb[0] * e_loc[0] + sb[1] * e_loc[1];
            let f = sb[0] * f_loc[0] + sb[1] * f_loc[1];
            (f - e, Construction::Jordan)
        }
    };

    let e3 = c.bracket(&e1, &e2);
    let e4 = c.bracket(&e1, &e3);
    let p = Matrix4::from_columns(&[e1, e2, e3, e4]);
    let vol = p.determinant().abs() / (e1.norm() * e3.norm() * e4.norm()).max(f64::MIN_POSITIVE);
    if !(vol > 1e-13) {
        return Err(Error::DegenerateIntersection(0));
    }
    let basis = AdaptedBasis::from_vectors(c, [e1, e2, e3, e4], Convention::Commutator)?;
    Ok(Ok((basis, how)))
}

/// Frame for the `𝔤¹₄,₈` branch: `e₁, e₃` an orthonormal basis of
/// `[e₂, q]`, `e₄ = [e₁, e₃]`, so that `[e₂, e₁] ∥ e₁`-type relations hold
/// with `ad e₂` scalar on `⟨e₁, e₃⟩`.
pub fn g481_frame(c: &StructureConstants, q: &Subspace) -> Result<AdaptedBasis> {
    let e2 = distinguished_line(c, q)?;
    let s = c.ad_image(&e2, q);
    if s.dim() != 2 {
        return Err(Error::DegenerateIntersection(s.dim()));
    }
    let (e1, e3) = (s.basis()[0], s.basis()[1]);
    let e4 = c.bracket(&e1, &e3);
    AdaptedBasis::from_vectors(c, [e1, e2, e3, e4], Convention::Lemma1)
}

/// How the frame returned by [`adapted_frame`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Commutator(Construction),
    G481,
    /// No commutator basis (`e₂` central or `[e₂, q] = ⟨e₂⟩`).
    Lemma1(Unavailable),
}

/// The frame in which unit bodies are declared: a commutator basis when
/// one exists, otherwise the `𝔤¹₄,₈` frame or a [`lemma1_basis`].
pub fn adapted_frame(c: &StructureConstants, q: &Subspace) -> Result<(AdaptedBasis, FrameKind)> {
    match commutator_basis(c, q)? {
        Ok((b, how)) => Ok((b, FrameKind::Commutator(how))),
        Err(Unavailable::G481) => Ok((g481_frame(c, q)?, FrameKind::G481)),
        Err(why) => Ok((lemma1_basis(c, q)?, FrameKind::Lemma1(why))),
    }
}
