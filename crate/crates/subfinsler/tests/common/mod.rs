#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use subfinsler_core::{StructureConstants, Subspace, Vector4};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Vector4 {
    Vector4::from_fn(|_, _| StandardNormal.sample(rng))
}

pub fn random_q(rng: &mut ChaCha8Rng) -> Subspace {
    Subspace::of(&[gaussian(rng), gaussian(rng), gaussian(rng)])
}

pub fn random_spd(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    let a = Matrix3::<f64>::from_fn(|_, _| StandardNormal.sample(rng));
    a * a.transpose() + Matrix3::identity() * 0.2
}

pub fn generating_q(c: &StructureConstants, rng: &mut ChaCha8Rng, tries: usize) -> Option<Subspace> {
    (0..tries).map(|_| random_q(rng)).find(|q| q.dim() == 3 && c.generates(q))
}

pub fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}
