#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use subfinsler_core::catalog::{AlgebraFamily, Family};
use subfinsler_core::{StructureConstants, Subspace, Vector4};

pub fn e(i: usize) -> Vector4 {
    let mut v = Vector4::zeros();
    v[i - 1] = 1.0;
    v
}

pub fn build(f: Family, p: &[f64]) -> StructureConstants {
    AlgebraFamily::new(f, p).unwrap().build()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Vector4 {
    Vector4::from_fn(|_, _| StandardNormal.sample(rng))
}

pub fn random_q(rng: &mut ChaCha8Rng) -> Subspace {
    Subspace::of(&[gaussian(rng), gaussian(rng), gaussian(rng)])
}

pub fn random_spd(rng: &mut ChaCha8Rng) -> nalgebra::Matrix3<f64> {
    let a = nalgebra::Matrix3::<f64>::from_fn(|_, _| StandardNormal.sample(rng));
    a * a.transpose() + nalgebra::Matrix3::identity() * 0.2
}

/// A generating `q` for `c`, or `None` after `tries` draws.
pub fn generating_q(c: &StructureConstants, rng: &mut ChaCha8Rng, tries: usize) -> Option<Subspace> {
    (0..tries).map(|_| random_q(rng)).find(|q| q.dim() == 3 && c.generates(q))
}

/// Row-echelon rank with partial pivoting; pivots below `tol · max|entry|`
/// count as zero.
pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let big = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
    if big == 0.0 {
        return 0;
    }
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else {
            break;
        };
        if m[p][col].abs() <= tol * big {
            continue;
        }
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r {
                let f = m[i][col] / m[r][col];
                for j in col..cols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub fn rank_of(vs: &[Vector4], tol: f64) -> usize {
    let rows: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().cloned().collect()).collect();
    rank(&rows, tol)
}

/// Bracket of two coordinate vectors read directly off the stored
/// constants.
pub fn raw_bracket(c: &StructureConstants, x: &Vector4, y: &Vector4) -> Vector4 {
    let mut out = Vector4::zeros();
    for i in 1..=4 {
        for j in (i + 1)..=4 {
            let w = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1];
            for k in 1..=4 {
                out[k - 1] += w * c.get(i, j, k);
            }
        }
    }
    out
}

/// Every catalog tensor: the representatives plus the parameter grid.
pub fn all_catalog() -> Vec<AlgebraFamily> {
    let mut v = AlgebraFamily::representatives();
    v.extend(AlgebraFamily::grid(&[-1.0, -0.5, 0.3, 0.5, 1.0]));
    v
}
