//! Strong versus nonstrong abnormality of the abnormal extremals
//! `t ↦ exp(s t e₂ / F(s e₂))`.

use alloc::string::String;
use nalgebra::{Matrix3, Vector3};

use crate::adapted::{self, AdaptedBasis, FrameKind};
use crate::error::{Error, Result};
use crate::gauge::{exists_supporting_k, fixed_k_support_test, GaugeBody};
use crate::lie::{StructureConstants, Subspace, Vector4};

/// Coefficients of `adapted_c` below this fraction of its scale are zero.
pub const COEFF_ZERO_TOL: f64 = 1e-10;
/// Between the zero threshold and this one, `C¹₂₃` is too ambiguous to
/// pick a case.
pub const COEFF_AMBIGUOUS_TOL: f64 = 1e-7;
/// Default relative tolerance for the support-function equalities.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Verdict that does not depend on the seminorm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeminormFree {
    /// `e₂` is central.
    NonstrongAll,
    /// `e₂ ∈ [e₂, q]`.
    StrongAll,
    Dependent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VerdictKind {
    NonstrongForAllSeminorms,
    StrongForAllSeminorms,
    SeminormDependent,
}

/// Which equality decides a seminorm-dependent case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Route {
    /// `C¹₂₃ = C²₂₃ = 0`: nonstrong iff some `k` has
    /// `F_U(k, s, 0) = 1/F(0, s, 0)`.
    ExistsK,
    /// `C¹₂₃ ≠ 0`: nonstrong iff the equality holds at
    /// `k = slope · s`, `slope = −C²₂₃/C¹₂₃`.
    FixedK { slope: f64 },
    /// `ad e₂` scalar on `[e₂, q]`: the equality at `k = 0`.
    ScalarImage,
    /// `C¹₂₃ = 0 ≠ C²₂₃`: the adjoint component `ψ₁` grows linearly, so
    /// no bounded covector exists and the extremal is strong.
    Unbounded,
}

/// Result for one sign `s` of the extremal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch {
    pub s: f64,
    pub nonstrong: bool,
    pub witness_k: Option<f64>,
    pub gap: f64,
    /// `u₂ = s / F(s e₂)`.
    pub u2: f64,
}

#[derive(Clone, Debug)]
pub struct AbnormalityVerdict {
    pub kind: VerdictKind,
    /// `s = +1` and `s = −1`; present for seminorm-dependent cases.
    pub branches: Option<[Branch; 2]>,
    pub route: Option<Route>,
    /// `e₂/F(e₂)` and `−e₂/F(−e₂)` in ambient coordinates.
    pub extremal_directions: [Vector4; 2],
    pub basis: AdaptedBasis,
    pub frame: FrameKind,
    pub diagnostic: Option<String>,
}

impl AbnormalityVerdict {
    /// Nonstrong for the given sign.
    pub fn nonstrong(&self, s: f64) -> bool {
        match self.kind {
            VerdictKind::NonstrongForAllSeminorms => true,
            VerdictKind::StrongForAllSeminorms => false,
            VerdictKind::SeminormDependent => {
                let b = self.branches.as_ref().unwrap();
                if s > 0.0 {
                    b[0].nonstrong
                } else {
                    b[1].nonstrong
                }
            }
        }
    }
}

/// Seminorm-independent part of the decision.
pub fn seminorm_free_verdict(c: &StructureConstants, q: &Subspace) -> Result<SeminormFree> {
    let e2 = adapted::distinguished_line(c, q)?;
    if c.is_central(&e2, 1e-9) {
        return Ok(SeminormFree::NonstrongAll);
    }
    if c.ad_image(&e2, q).contains(&e2) {
        return Ok(SeminormFree::StrongAll);
    }
    Ok(SeminormFree::Dependent)
}

/// Route read off literal adapted constants `C¹₂₃, C²₂₃` of a commutator
/// frame, thresholded against the scale of the tensor.
pub fn route_from_constants(a: &StructureConstants) -> Result<Route> {
    let scale = a.scale();
    let (c1, c2) = (a.get(2, 3, 1), a.get(2, 3, 2));
    let r1 = c1.abs() / scale;
    if r1 > COEFF_AMBIGUOUS_TOL {
        Ok(Route::FixedK { slope: -c2 / c1 })
    } else if r1 > COEFF_ZERO_TOL {
        Err(Error::InconsistentCase { c1, c2 })
    } else if c2.abs() / scale <= COEFF_ZERO_TOL {
        Ok(Route::ExistsK)
    } else {
        Ok(Route::Unbounded)
    }
}

/// `(C¹₂₃, C²₂₃)` from `[e₂, e₃] = C¹e₁ + C²e₂ + C³e₃`, solved inside `q`
/// so that a short `e₄` does not enter.
fn coefficients_in_q(c: &StructureConstants, basis: &AdaptedBasis) -> (f64, f64) {
    let [e1, e2, e3, _] = basis.e;
    let m = nalgebra::Matrix4x3::from_columns(&[e1, e2, e3]);
    let rhs = c.bracket(&e2, &e3);
    let qr = m.qr();
    let x = qr.r().solve_upper_triangular(&(qr.q().transpose() * rhs));
    match x {
        Some(x) => (x[0], x[1]),
        None => (0.0, 0.0),
    }
}

/// How a seminorm-dependent case is decided.
///
/// For a generating `q` with `e₂ ∉ [e₂, q]`, `C¹₂₃ = C²₂₃ = 0` exactly when
/// `[e₂, q]` is a line, so the route follows that dimension; the slope is
/// then read from coefficients solved inside `q`.
pub fn route(
    c: &StructureConstants,
    q: &Subspace,
    basis: &AdaptedBasis,
    frame: FrameKind,
) -> Result<Route> {
    match frame {
        FrameKind::G481 => Ok(Route::ScalarImage),
        FrameKind::Lemma1(_) => Err(Error::DegenerateIntersection(1)),
        FrameKind::Commutator(_) => {
            let e2 = basis.e[1];
            match c.ad_image(&e2, q).dim() {
                1 => Ok(Route::ExistsK),
                2 => {
                    let (c1, c2) = coefficients_in_q(c, basis);
                    let noise = 1e3 * f64::EPSILON * c.scale() * basis.e[2].norm() / basis.e[0].norm();
                    if c1.abs() <= noise {
                        Err(Error::InconsistentCase { c1, c2 })
                    } else {
                        Ok(Route::FixedK { slope: -c2 / c1 })
                    }
                }
                d => Err(Error::DegenerateIntersection(d)),
            }
        }
    }
}

fn directions(basis: &AdaptedBasis, body: &GaugeBody) -> [Vector4; 2] {
    let e2 = basis.e[1];
    [e2 / body.gauge_e2(1.0), -e2 / body.gauge_e2(-1.0)]
}

/// Full decision for a generating `q` and a unit body given in the frame
/// of [`adapted::adapted_frame`]. Both signs are evaluated independently.
pub fn classify_abnormal(
    c: &StructureConstants,
    q: &Subspace,
    body: &GaugeBody,
    tol: f64,
) -> Result<AbnormalityVerdict> {
    let free = seminorm_free_verdict(c, q)?;
    let (basis, frame) = adapted::adapted_frame(c, q)?;
    let extremal_directions = directions(&basis, body);
    let kind = match free {
        SeminormFree::NonstrongAll => VerdictKind::NonstrongForAllSeminorms,
        SeminormFree::StrongAll => VerdictKind::StrongForAllSeminorms,
        SeminormFree::Dependent => VerdictKind::SeminormDependent,
    };
    if kind != VerdictKind::SeminormDependent {
        return Ok(AbnormalityVerdict {
            kind,
            branches: None,
            route: None,
            extremal_directions,
            basis,
            frame,
            diagnostic: None,
        });
    }
    let r = route(c, q, &basis, frame)?;
    let branch = |s: f64| -> Branch {
        let u2 = s / body.gauge_e2(s);
        match r {
            Route::ExistsK => {
                let t = exists_supporting_k(body, s, tol);
                Branch { s, nonstrong: t.found, witness_k: t.found.then_some(t.k), gap: t.gap, u2 }
            }
            Route::FixedK { slope } => {
                let t = fixed_k_support_test(body, slope * s, s, tol);
                Branch { s, nonstrong: t.holds, witness_k: t.holds.then_some(t.k), gap: t.gap, u2 }
            }
            Route::ScalarImage => {
                let t = fixed_k_support_test(body, 0.0, s, tol);
                Branch { s, nonstrong: t.holds, witness_k: t.holds.then_some(0.0), gap: t.gap, u2 }
            }
            Route::Unbounded => Branch { s, nonstrong: false, witness_k: None, gap: f64::INFINITY, u2 },
        }
    };
    let diagnostic = matches!(r, Route::Unbounded).then(|| {
        String::from("C^1_23 = 0 with C^2_23 != 0: psi_1 grows linearly, extremal is strongly abnormal")
    });
    Ok(AbnormalityVerdict {
        kind,
        branches: Some([branch(1.0), branch(-1.0)]),
        route: Some(r),
        extremal_directions,
        basis,
        frame,
        diagnostic,
    })
}

/// Sub-Riemannian case: `Q` is the Gram matrix of the inner product on `q`
/// in the adapted frame. Nonstrong iff `[e₂, q]` is `Q`-orthogonal to `e₂`.
///
/// Orthogonality is accepted when the squared `Q`-cosine is at most `tol`;
/// the support-function gaps of [`classify_abnormal`] are quadratic in
/// that angle, so the two tests agree at the same `tol`.
pub fn subriemannian_verdict(
    c: &StructureConstants,
    q: &Subspace,
    gram: &Matrix3<f64>,
    tol: f64,
) -> Result<bool> {
    match seminorm_free_verdict(c, q)? {
        SeminormFree::NonstrongAll => return Ok(true),
        SeminormFree::StrongAll => return Ok(false),
        SeminormFree::Dependent => {}
    }
    let (basis, _) = adapted::adapted_frame(c, q)?;
    let e2 = basis.e[1];
    let image = c.ad_image(&e2, q);
    let y = Vector3::new(0.0, 1.0, 0.0);
    let qy = gram * y;
    let yy = y.dot(&qy);
    for v in image.basis() {
        let x = basis.coords(v).fixed_rows::<3>(0).into_owned();
        let xy = x.dot(&qy);
        let xx = x.dot(&(gram * x));
        if xy * xy > tol * xx * yy {
            return Ok(false);
        }
    }
    Ok(true)
}
