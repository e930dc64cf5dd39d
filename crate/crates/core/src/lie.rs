//! Four-dimensional real Lie algebras given by structure constants, and the
//! subspace lattice operations (sums, intersections, normalizers,
//! centralizers, bracket closure) the rest of the crate is built on.

use alloc::vec::Vec;
use core::fmt;
use nalgebra::{Complex, DMatrix, Matrix4};

use crate::linalg::{self, DEFAULT_RANK_TOL};

pub type Vector4 = nalgebra::Vector4<f64>;

/// Index pairs `(i, j)`, `i < j`, zero-based, in storage order.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_slot(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 4);
    PAIRS.iter().position(|&p| p == (i, j)).unwrap()
}

/// Structure constants `C^k_{ij}` of a four-dimensional real Lie algebra,
/// `[E_i, E_j] = Σ_k C^k_{ij} E_k`.
///
/// Only `i < j` is stored; the other half follows from antisymmetry. All
/// public indices are 1-based to match `E₁..E₄`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct StructureConstants {
    c: [[f64; 4]; 6],
}

impl StructureConstants {
    /// The abelian algebra.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sets `[E_i, E_j] = Σ_k v_k E_k` (1-based, `i ≠ j`); `i > j` stores the
    /// negated bracket.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: [f64; 4]) {
        assert!((1..=4).contains(&i) && (1..=4).contains(&j) && i != j);
        let (a, b, sign) = if i < j { (i - 1, j - 1, 1.0) } else { (j - 1, i - 1, -1.0) };
        let slot = pair_slot(a, b);
        for k in 0..4 {
            self.c[slot][k] = sign * v[k];
        }
    }

    /// Builder form of [`set_bracket`](Self::set_bracket).
    pub fn with_bracket(mut self, i: usize, j: usize, v: [f64; 4]) -> Self {
        self.set_bracket(i, j, v);
        self
    }

    /// Sets a single constant `C^k_{ij}` (1-based, `i < j`).
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        assert!(1 <= i && i < j && j <= 4 && (1..=4).contains(&k));
        self.c[pair_slot(i - 1, j - 1)][k - 1] = value;
    }

    /// `C^k_{ij}` for any `i, j` (1-based).
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        assert!((1..=4).contains(&i) && (1..=4).contains(&j) && (1..=4).contains(&k));
        match i.cmp(&j) {
            core::cmp::Ordering::Equal => 0.0,
            core::cmp::Ordering::Less => self.c[pair_slot(i - 1, j - 1)][k - 1],
            core::cmp::Ordering::Greater => -self.c[pair_slot(j - 1, i - 1)][k - 1],
        }
    }

    /// `[E_i, E_j]` as a vector (1-based).
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector4 {
        Vector4::from_fn(|k, _| self.get(i, j, k + 1))
    }

    /// Nonzero entries as `(i, j, k, value)` with `i < j`, 1-based.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        PAIRS.iter().enumerate().flat_map(move |(slot, &(i, j))| {
            (0..4).filter_map(move |k| {
                let v = self.c[slot][k];
                (v != 0.0).then_some((i + 1, j + 1, k + 1, v))
            })
        })
    }

    /// Largest absolute structure constant.
    pub fn scale(&self) -> f64 {
        self.c.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    pub fn is_abelian(&self) -> bool {
        self.scale() == 0.0
    }

    /// `[x, y] = Σ_{i<j} (x_i y_j − x_j y_i) C_{ij}`.
    pub fn bracket(&self, x: &Vector4, y: &Vector4) -> Vector4 {
        let mut out = Vector4::zeros();
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            let w = x[i] * y[j] - x[j] * y[i];
            if w != 0.0 {
                for k in 0..4 {
                    out[k] += w * self.c[slot][k];
                }
            }
        }
        out
    }

    /// Matrix of `ad x = [x, ·]` in the ambient basis.
    pub fn ad(&self, x: &Vector4) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for j in 0..4 {
            m.set_column(j, &self.bracket(x, &linalg::unit(j)));
        }
        m
    }

    /// Killing form `B(x, y) = tr(ad x · ad y)` as a symmetric matrix.
    pub fn killing(&self) -> Matrix4<f64> {
        let ads: Vec<Matrix4<f64>> = (0..4).map(|i| self.ad(&linalg::unit(i))).collect();
        Matrix4::from_fn(|i, j| (ads[i] * ads[j]).trace())
    }

    /// Max over basis triples `i<j<k` of the sup-norm of the cyclic Jacobi sum.
    pub fn check_jacobi(&self) -> f64 {
        let e: Vec<Vector4> = (0..4).map(linalg::unit).collect();
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    let s = self.bracket(&e[i], &self.bracket(&e[j], &e[k]))
                        + self.bracket(&e[j], &self.bracket(&e[k], &e[i]))
                        + self.bracket(&e[k], &self.bracket(&e[i], &e[j]));
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }

    /// Whether the Jacobi residual is within `tol · max|c|`.
    pub fn is_lie(&self, tol: f64) -> bool {
        self.check_jacobi() <= tol * self.scale().max(f64::MIN_POSITIVE)
    }

    /// Structure constants in the basis given by the columns of `p`:
    /// `C'_{ij} = P⁻¹ [p_i, p_j]`. Returns `None` if `p` is singular.
    pub fn in_basis(&self, p: &Matrix4<f64>) -> Option<Self> {
        let inv = p.try_inverse()?;
        let cols: Vec<Vector4> = (0..4).map(|i| p.column(i).into_owned()).collect();
        let mut out = Self::zero();
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            let v = inv * self.bracket(&cols[i], &cols[j]);
            for k in 0..4 {
                out.c[slot][k] = v[k];
            }
        }
        Some(out)
    }

    /// Derived algebra `[𝔤, 𝔤]`.
    pub fn derived(&self) -> Subspace {
        let v: Vec<Vector4> = PAIRS
            .iter()
            .map(|&(i, j)| self.basis_bracket(i + 1, j + 1))
            .collect();
        Subspace::span_scaled(&v, DEFAULT_RANK_TOL, self.scale())
    }

    /// Center `𝔠(𝔤)`.
    pub fn center(&self) -> Subspace {
        self.centralizer(&Subspace::whole())
    }

    /// `span{[x, b] : b ∈ S}`.
    pub fn ad_image(&self, x: &Vector4, s: &Subspace) -> Subspace {
        let v: Vec<Vector4> = s.basis().iter().map(|b| self.bracket(x, b)).collect();
        Subspace::span_scaled(&v, s.rank_tol, self.scale() * x.norm())
    }

    /// `span{[a, b] : a ∈ A, b ∈ B}`.
    pub fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut v = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                v.push(self.bracket(x, y));
            }
        }
        Subspace::span_scaled(&v, a.rank_tol, self.scale())
    }

    /// Whether `S` is closed under the bracket.
    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_spaces(s, s))
    }

    /// Bracket closure of `q`: iterate `S ← S + [S, S]` until stable.
    pub fn closure(&self, q: &Subspace) -> Subspace {
        let mut s = q.clone();
        loop {
            let next = s.sum(&self.bracket_spaces(&s, &s));
            if next.dim() == s.dim() {
                return next;
            }
            s = next;
        }
    }

    /// Whether `q` generates the whole algebra by brackets.
    pub fn generates(&self, q: &Subspace) -> bool {
        q.dim() >= 1 && self.closure(q).dim() == 4
    }

    /// Normalizer `𝔑(q) = {x : [x, q] ⊂ q}`.
    pub fn normalizer(&self, q: &Subspace) -> Subspace {
        let comp = q.complement();
        if q.dim() == 0 || comp.is_empty() {
            return Subspace::whole().with_tol(q.rank_tol);
        }
        // rows: w · [x, b] = −w · ad(b) x, for b ∈ q and w ⊥ q
        let mut rows = Vec::new();
        for b in q.basis() {
            let adb = self.ad(b);
            for w in &comp {
                let r = -(w.transpose() * adb);
                rows.push([r[0], r[1], r[2], r[3]]);
            }
        }
        self.solve_kernel(&rows, q.rank_tol)
    }

    /// Centralizer `𝔠(S) = {x : [x, S] = 0}`.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::whole().with_tol(s.rank_tol);
        }
        let mut rows = Vec::new();
        for b in s.basis() {
            let adb = self.ad(b);
            for r in 0..4 {
                rows.push([adb[(r, 0)], adb[(r, 1)], adb[(r, 2)], adb[(r, 3)]]);
            }
        }
        self.solve_kernel(&rows, s.rank_tol)
    }

    fn solve_kernel(&self, rows: &[[f64; 4]], rank_tol: f64) -> Subspace {
        let m = DMatrix::from_fn(rows.len(), 4, |r, c| rows[r][c]);
        let ns = linalg::null_space(&m, rank_tol, self.scale());
        let v: Vec<Vector4> = ns.iter().map(|n| Vector4::new(n[0], n[1], n[2], n[3])).collect();
        Subspace::span(&v, rank_tol)
    }

    /// Residual of `[E_j, v] ∥ v` over all `j`, relative to `‖v‖·max|c|`.
    pub fn ideal_residual(&self, v: &Vector4) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        let u = v / n;
        let mut worst = 0.0f64;
        for j in 0..4 {
            let w = self.bracket(&linalg::unit(j), &u);
            worst = worst.max((w - u * u.dot(&w)).norm());
        }
        worst / self.scale().max(f64::MIN_POSITIVE)
    }

    /// Whether `⟨v⟩` is an ideal.
    pub fn spans_ideal(&self, v: &Vector4, tol: f64) -> bool {
        self.ideal_residual(v) <= tol
    }

    /// Whether `v` is central.
    pub fn is_central(&self, v: &Vector4, tol: f64) -> bool {
        let n = v.norm();
        n == 0.0 || self.ad(&(v / n)).amax() <= tol * self.scale().max(f64::MIN_POSITIVE)
    }

    /// All one-dimensional ideals, grouped by character.
    ///
    /// Every ideal line lies in the centralizer `Z` of the derived algebra
    /// (characters vanish on `[𝔤, 𝔤]`), and the operators `ad E_j|_Z` commute
    /// there. Each group is the joint eigenspace of one character; when its
    /// dimension exceeds one, every line inside it is an ideal.
    pub fn one_dim_ideals(&self) -> Vec<IdealEigenspace> {
        let tol = DEFAULT_RANK_TOL;
        let z = self.centralizer(&self.derived());
        let m = z.dim();
        if m == 0 {
            return Vec::new();
        }
        let zb = z.basis();
        let restricted: Vec<DMatrix<f64>> = (0..4)
            .map(|j| {
                let e = linalg::unit(j);
                DMatrix::from_fn(m, m, |a, b| zb[a].dot(&self.bracket(&e, &zb[b])))
            })
            .collect();
        // generic combination; its eigenvalues separate distinct characters
        const MIX: [f64; 4] = [0.754877666, 0.569840291, 0.430159709, 0.324717957];
        let mut gx = DMatrix::zeros(m, m);
        for j in 0..4 {
            gx += &restricted[j] * MIX[j];
        }
        let scale = gx.amax().max(self.scale()).max(1.0);
        let eig: Vec<Complex<f64>> = gx.clone().complex_eigenvalues().iter().cloned().collect();

        // cluster (Jordan blocks split eigenvalues by up to ~ε^{1/3})
        let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
        for ev in eig {
            match clusters
                .iter_mut()
                .find(|(c, n)| {
                    let d = *c / *n as f64 - ev;
                    libm::hypot(d.re, d.im) <= 1e-4 * scale
                })
            {
                Some((c, n)) => {
                    *c += ev;
                    *n += 1;
                }
                None => clusters.push((ev, 1)),
            }
        }

        let mut out: Vec<IdealEigenspace> = Vec::new();
        for (sum, n) in clusters {
            let mu = sum / n as f64;
            if mu.im.abs() > 1e-7 * scale {
                continue;
            }
            let shifted = &gx - DMatrix::identity(m, m) * mu.re;
            let kern = linalg::null_space(&shifted, tol, scale);
            if kern.is_empty() {
                continue;
            }
            let d = kern.len();
            let kmat = DMatrix::from_fn(m, d, |r, c| kern[c][r]);
            let mut character = [0.0; 4];
            let mut stacked = DMatrix::zeros(4 * m, d);
            for j in 0..4 {
                let rk = &restricted[j] * &kmat;
                let inner = kmat.transpose() * &rk;
                character[j] = inner.trace() / d as f64;
                let block = rk - &kmat * character[j];
                stacked.view_mut((j * m, 0), (m, d)).copy_from(&block);
            }
            let joint = linalg::null_space(&stacked, tol, scale);
            let vecs: Vec<Vector4> = joint
                .iter()
                .map(|a| {
                    let mut v = Vector4::zeros();
                    for (c, coef) in a.iter().enumerate() {
                        for (r, zr) in zb.iter().enumerate() {
                            v += zr * (kmat[(r, c)] * coef);
                        }
                    }
                    v
                })
                .filter(|v| self.ideal_residual(v) <= 1e-7)
                .collect();
            if vecs.is_empty() {
                continue;
            }
            let span = Subspace::span(&vecs, tol);
            let dir = if span.dim() == 1 {
                linalg::sign_normalize(span.basis()[0])
            } else {
                span.basis()[0]
            };
            for c in character.iter_mut() {
                if c.abs() <= 1e-12 * scale {
                    *c = 0.0;
                }
            }
            out.push(IdealEigenspace { span, direction: dir, character });
        }
        out
    }

    /// Whether the algebra has a three-dimensional bracket-generating
    /// subspace.
    ///
    /// It has none exactly when it is commutative or has a commutative
    /// three-dimensional ideal `I` and `z` with `ad z|_I = id`. Such an `I`
    /// must equal the derived algebra (`[z + I, z + I] = I`), so the test
    /// reduces to: `[𝔤,𝔤]` three-dimensional and commutative, and the linear
    /// system `[z, b] = b` (all `b ∈ I`) solvable.
    pub fn admits_generating_hyperplane(&self) -> bool {
        if self.is_abelian() {
            return false;
        }
        let ideal = self.derived();
        if ideal.dim() != 3 || self.bracket_spaces(&ideal, &ideal).dim() != 0 {
            return true;
        }
        // stack −ad(b) z = b over the basis of I
        let mut a = DMatrix::zeros(12, 4);
        let mut rhs = nalgebra::DVector::zeros(12);
        for (n, b) in ideal.basis().iter().enumerate() {
            let adb = -self.ad(b);
            a.view_mut((4 * n, 0), (4, 4)).copy_from(&adb);
            for r in 0..4 {
                rhs[4 * n + r] = b[r];
            }
        }
        // consistent iff rhs lies in the column space of a
        let cols: Vec<nalgebra::DVector<f64>> = a.column_iter().map(|c| c.into_owned()).collect();
        let range = linalg::orthonormal_span_dyn(&cols, 1e-12, self.scale());
        let resid = range.iter().fold(rhs.clone(), |r, q| {
            let d = q.dot(&r);
            r - q * d
        });
        let resid = resid.amax();
        resid > 1e-9 * (1.0 + self.scale())
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(i, j) in PAIRS.iter() {
            let v = self.basis_bracket(i + 1, j + 1);
            if v.amax() == 0.0 {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "[E{}, E{}] = {}", i + 1, j + 1, DisplayVec(&v))?;
        }
        if first {
            write!(f, "abelian")?;
        }
        Ok(())
    }
}

/// Linear combination display `a E1 + b E2 ...`.
pub struct DisplayVec<'a>(pub &'a Vector4);

impl fmt::Display for DisplayVec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in 0..4 {
            let c = self.0[k];
            if c.abs() < 1e-12 {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            }
            first = false;
            if (mag - 1.0).abs() < 1e-12 {
                write!(f, "E{}", k + 1)?;
            } else {
                write!(f, "{}E{}", Trim(mag), k + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Compact float formatting: at most 6 decimals, trailing zeros removed.
pub struct Trim(pub f64);

impl fmt::Display for Trim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = libm::round(self.0 * 1e6) / 1e6;
        if r == libm::trunc(r) && r.abs() < 1e15 {
            write!(f, "{}", r as i64)
        } else {
            let s = alloc::format!("{:.6}", r);
            write!(f, "{}", s.trim_end_matches('0'))
        }
    }
}

/// A joint eigenspace of `ad` for one character `λ`: `[x, v] = λ(x) v`.
#[derive(Clone, Debug)]
pub struct IdealEigenspace {
    /// All `v` with `[x, v] = λ(x) v`; every line in it is an ideal.
    pub span: Subspace,
    /// Unit representative (sign-normalized when the span is a line).
    pub direction: Vector4,
    /// `λ(E₁), …, λ(E₄)`.
    pub character: [f64; 4],
}

impl IdealEigenspace {
    pub fn is_central(&self) -> bool {
        self.character.iter().all(|&c| c == 0.0)
    }
}

/// A linear subspace of ℝ⁴ with an orthonormal basis and a rank tolerance.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Vec<Vector4>,
    rank_tol: f64,
}

impl Subspace {
    /// Numerical span with relative threshold `rank_tol · σ_max`.
    pub fn span(vectors: &[Vector4], rank_tol: f64) -> Self {
        Self::span_scaled(vectors, rank_tol, 0.0)
    }

    /// Span with threshold `rank_tol · max(σ_max, scale)`.
    pub fn span_scaled(vectors: &[Vector4], rank_tol: f64, scale: f64) -> Self {
        Self { basis: linalg::orthonormal_span(vectors, rank_tol, scale), rank_tol }
    }

    /// Span with the default tolerance.
    pub fn of(vectors: &[Vector4]) -> Self {
        Self::span(vectors, DEFAULT_RANK_TOL)
    }

    /// `⟨E_i, …⟩` from 1-based indices.
    pub fn coordinate(indices: &[usize]) -> Self {
        let v: Vec<Vector4> = indices.iter().map(|&i| linalg::unit(i - 1)).collect();
        Self::of(&v)
    }

    pub fn zero() -> Self {
        Self { basis: Vec::new(), rank_tol: DEFAULT_RANK_TOL }
    }

    pub fn whole() -> Self {
        Self { basis: (0..4).map(linalg::unit).collect(), rank_tol: DEFAULT_RANK_TOL }
    }

    pub fn with_tol(mut self, rank_tol: f64) -> Self {
        self.rank_tol = rank_tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis.
    pub fn basis(&self) -> &[Vector4] {
        &self.basis
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &Vector4) -> Vector4 {
        self.basis.iter().fold(Vector4::zeros(), |acc, b| acc + b * b.dot(v))
    }

    /// `‖v − Pv‖ ≤ tol·‖v‖` with a containment tolerance derived from
    /// `rank_tol`.
    pub fn contains(&self, v: &Vector4) -> bool {
        let n = v.norm();
        n == 0.0 || (v - self.project(v)).norm() <= self.containment_tol() * n
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    fn containment_tol(&self) -> f64 {
        // directions are recovered to about √ of the rank threshold
        (self.rank_tol * 1e3).max(1e-9)
    }

    /// `A + B`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend_from_slice(&other.basis);
        Subspace::span_scaled(&v, self.rank_tol, 1.0)
    }

    /// `A ∩ B` from the null space of `[A | −B]`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let (da, db) = (self.dim(), other.dim());
        if da == 0 || db == 0 {
            return Subspace::zero().with_tol(self.rank_tol);
        }
        let m = DMatrix::from_fn(4, da + db, |r, c| {
            if c < da {
                self.basis[c][r]
            } else {
                -other.basis[c - da][r]
            }
        });
        let ns = linalg::null_space(&m, self.rank_tol, 1.0);
        let v: Vec<Vector4> = ns
            .iter()
            .map(|n| (0..da).fold(Vector4::zeros(), |acc, c| acc + self.basis[c] * n[c]))
            .collect();
        Subspace::span_scaled(&v, self.rank_tol, 1.0)
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Vec<Vector4> {
        linalg::complement(&self.basis)
    }

    /// Image under a linear map.
    pub fn map(&self, m: &Matrix4<f64>) -> Subspace {
        let v: Vec<Vector4> = self.basis.iter().map(|b| m * b).collect();
        Subspace::span(&v, self.rank_tol)
    }
}
