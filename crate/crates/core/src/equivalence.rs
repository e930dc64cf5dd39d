//! Automorphism-invariant fingerprints of generating three-dimensional
//! subspaces, their case labels, and a seeded census that counts distinct
//! fingerprints.
//!
//! A one-dimensional ideal inside `q` normalizes `q`, so it can only be the
//! distinguished line `⟨e₂⟩`. The remaining components describe `ad e₂` on
//! `q` and on its image `𝔰 = [e₂, q]`; none of them depends on the basis
//! chosen inside `q`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Matrix4x3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::adapted;
use crate::catalog::{AlgebraFamily, Family};
use crate::error::Result;
use crate::lie::{IdealEigenspace, StructureConstants, Subspace, Vector4};
use crate::linalg;

/// Draws per independent random stream.
pub const STREAM_LEN: usize = 250;
/// `‖ad e₂‖` below this (relative to the algebra scale) makes `e₂` central.
pub const CENTRAL_TOL: f64 = 1e-8;
/// Largest sine between an ideal line and `q` for `q` to contain it.
pub const IDEAL_TOL: f64 = 1e-8;
/// Ideal margins in `(IDEAL_TOL, NEAR_IDEAL)` are left out of a census:
/// near an ideal the remaining invariants degenerate polynomially.
pub const NEAR_IDEAL: f64 = 1e-3;
/// Distance from `e₂` to `[e₂, q]` below which `e₂ ∈ [e₂, q]`.
const SELF_IMAGE_TOL: f64 = 1e-12;
/// Ratio signatures are rounded to this grid.
const RATIO_GRID: f64 = 1e3;
const RATIO_MATCH: f64 = 1e-4;
const IDEAL_SEEDS: usize = 64;
const LATTICE_DRAWS: usize = 500;

/// Direction of `[e₂, e₃]` in a commutator basis, read off invariantly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum C23Pattern {
    /// No commutator basis: `⟨e₂⟩` is an ideal.
    Unavailable,
    /// `[e₂, e₃] = 0`: `𝔰` is a line killed by `ad e₂`.
    Zero,
    /// `C¹₂₃ ≠ 0 = C²₂₃ = C³₂₃`: `ad e₂` traceless on a plane `𝔰`.
    ParallelE1,
    /// `e₂ ∈ 𝔰`.
    ParallelE2,
    /// `C¹₂₃ = C²₂₃ = 0 ≠ C³₂₃`: `𝔰` is an eigenline with nonzero eigenvalue.
    ParallelE3,
    /// `C¹₂₃ ≠ 0`, `C²₂₃ = 0`, `C³₂₃ ≠ 0`.
    C1NonzeroC2Zero,
}

/// Eigenvalue type of `ad e₂` restricted to `𝔰`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectralType {
    /// Nilpotent (including `𝔰 = 0`).
    Null,
    RealDistinct,
    /// One nonzero real eigenvalue (a line, a Jordan block or a scalar).
    RealEqual,
    ComplexPair,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub contains_central_ideal: bool,
    /// For a noncentral ideal `⟨e₂⟩` with character `χ`: the eigenvalues of
    /// `ad x` common to every `x` with `χ(x) = 1`, as `(re, im)` on a
    /// `10⁻³` grid, sorted.
    pub contained_noncentral_ideal: Option<Vec<(i64, i64)>>,
    /// `(n₊, n₋, n₀)` of the Killing form restricted to `q`.
    pub killing_signature_on_q: (u8, u8, u8),
    pub c23_pattern: C23Pattern,
    pub ad_e2_spectral_type: SpectralType,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ideal = if self.contains_central_ideal {
            "central ideal"
        } else if self.contained_noncentral_ideal.is_some() {
            "noncentral ideal"
        } else {
            "no ideal"
        };
        let (p, n, z) = self.killing_signature_on_q;
        write!(f, "{ideal}, killing ({p},{n},{z}), [e2,e3] {:?}, ad e2 {:?}", self.c23_pattern, self.ad_e2_spectral_type)?;
        if let Some(sig) = &self.contained_noncentral_ideal {
            write!(f, ", ratios [")?;
            for (i, (re, im)) in sig.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                let (re, im) = (*re as f64 / RATIO_GRID, *im as f64 / RATIO_GRID);
                if im == 0.0 {
                    write!(f, "{re}")?;
                } else {
                    write!(f, "{re}{:+}i", im)?;
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

fn cabs(z: Complex<f64>) -> f64 {
    libm::hypot(z.re, z.im)
}

fn eigenvalues(m: &Matrix4<f64>) -> Option<Vec<Complex<f64>>> {
    let schur = nalgebra::linalg::Schur::try_new(*m, f64::EPSILON, 2000)?;
    Some(schur.complex_eigenvalues().iter().cloned().collect())
}

/// Eigenvalues of `ad x` shared by all `x` in the affine hyperplane
/// `χ(x) = 1`, sampled at three points.
fn ratio_signature(c: &StructureConstants, chi: &Vector4) -> Vec<(i64, i64)> {
    let x0 = chi / chi.norm_squared();
    let ker = linalg::complement(&[chi.normalize()]);
    let w1 = ker[0] * 0.754877666 + ker[1] * 0.569840291 + ker[2] * 0.430159709;
    let w2 = ker[0] * -0.324717957 + ker[1] * 0.877438833 - ker[2] * 0.618033989;
    let samples = [x0, x0 + w1, x0 + w2 * 0.7];
    let spectra: Vec<Vec<Complex<f64>>> =
        samples.iter().filter_map(|x| eigenvalues(&c.ad(x))).collect();
    if spectra.len() < samples.len() {
        return Vec::new();
    }
    let mut common = Vec::new();
    let mut used: Vec<Vec<bool>> = spectra.iter().map(|s| alloc::vec![false; s.len()]).collect();
    for a in &spectra[0] {
        let tol = RATIO_MATCH * libm::hypot(a.re, a.im).max(1.0);
        let mut hits = Vec::new();
        for (k, other) in spectra.iter().enumerate().skip(1) {
            let j = (0..other.len()).find(|&j| !used[k][j] && cabs(other[j] - a) <= tol);
            match j {
                Some(j) => hits.push((k, j)),
                None => break,
            }
        }
        if hits.len() == spectra.len() - 1 {
            for (k, j) in hits {
                used[k][j] = true;
            }
            let round = |v: f64| {
                let r = libm::round(v * RATIO_GRID) as i64;
                if r == 0 { 0 } else { r }
            };
            common.push((round(a.re), round(a.im)));
        }
    }
    common.sort_unstable();
    common
}

/// The ideal eigenspace meeting `q`, if any. A plane of ideals always
/// meets a hyperplane; a single ideal line must be orthogonal to the normal.
fn ideal_in(c: &StructureConstants, q: &Subspace) -> Option<IdealEigenspace> {
    nearest_ideal(c, q).filter(|(sine, _)| *sine <= IDEAL_TOL).map(|(_, ideal)| ideal)
}

fn nearest_ideal(c: &StructureConstants, q: &Subspace) -> Option<(f64, IdealEigenspace)> {
    let normal = q.complement()[0];
    c.one_dim_ideals()
        .into_iter()
        .map(|ideal| {
            let sine = if ideal.span.dim() >= 2 { 0.0 } else { normal.dot(&ideal.direction).abs() };
            (sine, ideal)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Sine of the angle between `q` and the nearest ideal line; `None` when
/// the algebra has no one-dimensional ideal.
pub fn ideal_margin(c: &StructureConstants, q: &Subspace) -> Option<f64> {
    nearest_ideal(c, q).map(|(sine, _)| sine)
}

/// Type and `[e₂, e₃]` pattern of `ad e₂` on `𝔰 = [e₂, q]` for `⟨e₂⟩`
/// not an ideal.
fn image_invariants(c: &StructureConstants, q: &Subspace, e2: &Vector4) -> (C23Pattern, SpectralType) {
    let scale = c.scale();
    let s = c.ad_image(e2, q);
    let self_containing = s.dim() > 0 && (e2 - s.project(e2)).norm() <= SELF_IMAGE_TOL;
    let sb = s.basis();
    let spectral = match s.dim() {
        0 => SpectralType::Null,
        1 => {
            let mu = sb[0].dot(&c.bracket(e2, &sb[0]));
            if mu.abs() <= 1e-9 * scale {
                SpectralType::Null
            } else {
                SpectralType::RealEqual
            }
        }
        _ => {
            let m = Matrix2::from_fn(|i, j| sb[i].dot(&c.bracket(e2, &sb[j])));
            let (tr, det, disc) = linalg::trace_det_disc(&m);
            let size = tr * tr + 4.0 * det.abs();
            if size <= 1e-12 * m.norm_squared() {
                SpectralType::Null
            } else if disc > 1e-8 * size {
                SpectralType::RealDistinct
            } else if disc < -1e-8 * size {
                SpectralType::ComplexPair
            } else {
                SpectralType::RealEqual
            }
        }
    };
    let pattern = if self_containing {
        C23Pattern::ParallelE2
    } else if s.dim() == 1 {
        if spectral == SpectralType::Null {
            C23Pattern::Zero
        } else {
            C23Pattern::ParallelE3
        }
    } else {
        let m = Matrix2::from_fn(|i, j| sb[i].dot(&c.bracket(e2, &sb[j])));
        let (tr, det, _) = linalg::trace_det_disc(&m);
        if tr.abs() <= 1e-7 * libm::sqrt(tr * tr + 4.0 * det.abs()) {
            C23Pattern::ParallelE1
        } else {
            C23Pattern::C1NonzeroC2Zero
        }
    };
    (pattern, spectral)
}

/// Invariant description of a generating `q`.
pub fn fingerprint(c: &StructureConstants, q: &Subspace) -> Result<Fingerprint> {
    let e2 = adapted::distinguished_line(c, q)?;
    let scale = c.scale();
    let b = Matrix4x3::from_columns(q.basis());
    let kq: Matrix3<f64> = b.transpose() * c.killing() * b;
    let killing_signature_on_q = linalg::signature3(&kq, 1e-9, 1e-12 * scale * scale);

    if let Some(ideal) = ideal_in(c, q) {
        let chi = Vector4::from(ideal.character);
        let central = chi.amax() <= CENTRAL_TOL * scale;
        let contained_noncentral_ideal = (!central).then(|| ratio_signature(c, &chi));
        return Ok(Fingerprint {
            contains_central_ideal: central,
            contained_noncentral_ideal,
            killing_signature_on_q,
            c23_pattern: C23Pattern::Unavailable,
            ad_e2_spectral_type: SpectralType::Null,
        });
    }
    let (c23_pattern, ad_e2_spectral_type) = image_invariants(c, q, &e2);
    Ok(Fingerprint {
        contains_central_ideal: false,
        contained_noncentral_ideal: None,
        killing_signature_on_q,
        c23_pattern,
        ad_e2_spectral_type,
    })
}

/// Item and case in the classification of generating subspaces, e.g. `3,2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseLabel {
    pub item: u8,
    pub case: u8,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.item, self.case)
    }
}

/// Item of the classification covering a catalog entry, if any.
pub fn theorem4_item(fam: &AlgebraFamily) -> Option<u8> {
    let p = fam.params();
    match fam.family() {
        Family::TwoG21 => Some(1),
        Family::G32G1 | Family::G34aG1 | Family::G43 => Some(2),
        Family::G35aG1 | Family::G41 => Some(3),
        Family::G36G1 => Some(4),
        Family::G37G1 => Some(5),
        Family::G42a => (p[0] != 1.0).then_some(6),
        Family::G44 | Family::G46ab => Some(6),
        Family::G45ab => {
            let (a, b) = (p[0], p[1]);
            let listed = (-1.0 < a && a < b && b < 1.0) || (a == -1.0 && 0.0 < b && b <= 1.0);
            listed.then_some(6)
        }
        Family::G47 => Some(7),
        Family::G48a => match p[0] {
            a if a == -1.0 => Some(8),
            a if a == 0.0 => Some(9),
            a if a == 1.0 => None,
            _ => Some(7),
        },
        Family::G49a => Some(if p[0] == 0.0 { 8 } else { 7 }),
        _ => None,
    }
}

/// Case label for a subspace of a catalog algebra, from its fingerprint.
pub fn case_from_fingerprint(item: u8, fp: &Fingerprint) -> CaseLabel {
    let ideal = fp.contains_central_ideal || fp.contained_noncentral_ideal.is_some();
    let case = match item {
        1 => {
            if ideal {
                1
            } else {
                2
            }
        }
        2 => {
            if fp.contains_central_ideal {
                1
            } else if ideal {
                2
            } else {
                3
            }
        }
        4 => {
            if fp.contains_central_ideal {
                1
            } else if fp.c23_pattern == C23Pattern::ParallelE2 {
                2
            } else {
                3
            }
        }
        3 | 5 | 8 => {
            if fp.contains_central_ideal {
                1
            } else {
                2
            }
        }
        _ => {
            if ideal {
                1
            } else {
                2
            }
        }
    };
    CaseLabel { item, case }
}

/// Case label for `q` in a catalog tensor; `None` for families the
/// classification does not enumerate.
pub fn theorem4_case(c: &StructureConstants, q: &Subspace) -> Result<Option<CaseLabel>> {
    let fam = AlgebraFamily::identify(c)?;
    let fp = fingerprint(c, q)?;
    Ok(theorem4_item(&fam).map(|item| case_from_fingerprint(item, &fp)))
}

/// Fingerprint counts with the draws that produced them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub classes: BTreeMap<Fingerprint, usize>,
    pub draws: usize,
    pub generating: usize,
    /// Generating draws whose fingerprint could not be computed.
    pub failures: usize,
    /// Generating draws skipped for an ideal margin in `(IDEAL_TOL, NEAR_IDEAL)`.
    pub near_ideal: usize,
}

impl Census {
    pub fn merge(mut self, other: Census) -> Census {
        for (k, v) in other.classes {
            *self.classes.entry(k).or_insert(0) += v;
        }
        self.draws += other.draws;
        self.generating += other.generating;
        self.failures += other.failures;
        self.near_ideal += other.near_ideal;
        self
    }

    pub fn record(&mut self, c: &StructureConstants, q: &Subspace) {
        self.draws += 1;
        if q.dim() != 3 || !c.generates(q) {
            return;
        }
        self.generating += 1;
        if ideal_margin(c, q).is_some_and(|m| m > IDEAL_TOL && m < NEAR_IDEAL) {
            self.near_ideal += 1;
            return;
        }
        match fingerprint(c, q) {
            Ok(fp) => *self.classes.entry(fp).or_insert(0) += 1,
            Err(_) => self.failures += 1,
        }
    }

    pub fn distinct(&self) -> usize {
        self.classes.len()
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_vector(rng: &mut ChaCha8Rng) -> Vector4 {
    Vector4::from_fn(|_, _| StandardNormal.sample(rng))
}

/// Span of three standard-Gaussian vectors.
pub fn gaussian_subspace(rng: &mut ChaCha8Rng) -> Subspace {
    let v = [gaussian_vector(rng), gaussian_vector(rng), gaussian_vector(rng)];
    Subspace::of(&v)
}

/// `count` Gaussian draws from stream `stream` of `seed`.
pub fn sample_stream(c: &StructureConstants, seed: u64, stream: u64, count: usize) -> Census {
    let mut rng = stream_rng(seed, stream);
    let mut census = Census::default();
    for _ in 0..count {
        census.record(c, &gaussian_subspace(&mut rng));
    }
    census
}

/// Number of streams and the length of each for `n` draws.
pub fn stream_plan(n: usize) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    let mut left = n;
    let mut i = 0u64;
    while left > 0 {
        let len = left.min(STREAM_LEN);
        out.push((i, len));
        left -= len;
        i += 1;
    }
    out
}

/// `n` Gaussian draws split into streams of [`STREAM_LEN`].
pub fn sample_classes(c: &StructureConstants, n: usize, seed: u64) -> Census {
    stream_plan(n)
        .into_iter()
        .map(|(stream, len)| sample_stream(c, seed, stream, len))
        .fold(Census::default(), Census::merge)
}

/// Subspaces aimed at classes of measure zero: for every one-dimensional
/// ideal (a line drawn inside each ideal eigenspace) a batch of
/// `⟨L, g₁, g₂⟩` with Gaussian `gᵢ`, and spans of small integer vectors.
pub fn seeded_subspaces(c: &StructureConstants, seed: u64) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut rng = stream_rng(seed, u64::MAX);
    for ideal in c.one_dim_ideals() {
        let basis = ideal.span.basis().to_vec();
        for _ in 0..IDEAL_SEEDS {
            let l = basis.iter().fold(Vector4::zeros(), |acc, b| {
                let w: f64 = StandardNormal.sample(&mut rng);
                acc + b * w
            });
            let v = [l, gaussian_vector(&mut rng), gaussian_vector(&mut rng)];
            out.push(Subspace::of(&v));
        }
    }
    let mut rng = stream_rng(seed, u64::MAX - 1);
    for _ in 0..LATTICE_DRAWS {
        let mut v = [Vector4::zeros(); 3];
        for x in v.iter_mut() {
            *x = Vector4::from_fn(|_, _| rng.random_range(-1i32..=1) as f64);
        }
        out.push(Subspace::of(&v));
    }
    out
}

/// Census over the seeded subspaces only.
pub fn seeded_census(c: &StructureConstants, seed: u64) -> Census {
    let mut census = Census::default();
    for q in seeded_subspaces(c, seed) {
        census.record(c, &q);
    }
    census
}

/// [`sample_classes`] together with [`seeded_census`].
pub fn census(c: &StructureConstants, n: usize, seed: u64) -> Census {
    sample_classes(c, n, seed).merge(seeded_census(c, seed))
}
