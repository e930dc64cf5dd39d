mod common;

use common::*;
use nalgebra::{Matrix4, Vector4};
use proptest::prelude::*;
use rand::Rng;
use subfinsler_core::adapted::{adapted_frame, FrameKind};
use subfinsler_core::catalog::{AlgebraFamily, Family};
use subfinsler_core::extremal::*;
use subfinsler_core::gauge::GaugeBody;
use subfinsler_core::StructureConstants;

fn families_with_q() -> Vec<AlgebraFamily> {
    all_catalog().into_iter().filter(|f| f.build().admits_generating_hyperplane()).collect()
}

fn c23(a: &StructureConstants) -> [f64; 3] {
    [a.get(2, 3, 1), a.get(2, 3, 2), a.get(2, 3, 3)]
}

/// Second and first derivative by five-point stencils on equally spaced
/// samples, at index `i`.
fn stencil(f: &[f64], i: usize, h: f64) -> (f64, f64) {
    let (m2, m1, z, p1, p2) = (f[i - 2], f[i - 1], f[i], f[i + 1], f[i + 2]);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    (d2, d1)
}

fn psi1_equation(c: [f64; 3], u2: f64, d2: f64, d1: f64, f: f64) -> f64 {
    d2 - u2 * c[2] * d1 + u2 * u2 * c[0] * f + u2 * c[1]
}

#[test]
fn closed_form_psi4_on_random_frames() {
    let fams = families_with_q();
    let mut r = rng(51);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let fam = &fams[r.random_range(0..fams.len())];
        let c = fam.build();
        let Some(q) = generating_q(&c, &mut r, 50) else { continue };
        let (basis, _) = adapted_frame(&c, &q).unwrap();
        let a = &basis.adapted_c;
        let body = GaugeBody::ellipsoid(random_spd(&mut r)).unwrap();
        let s = if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let u2 = abnormal_u2(&body, s);
        let phi4 = gaussian(&mut r)[0];
        let law = ControlLaw::abnormal(&body, s);
        let traj = integrate_adjoint(a, &law, Vector4::new(0.0, 0.0, 0.0, phi4), 1.0, DEFAULT_STEP).unwrap();
        for st in traj.iter().step_by(100) {
            let exact = phi4 * (a.get(2, 4, 4) * u2 * st.t).exp();
            assert!((st.psi[3] - exact).abs() <= 1e-8, "{fam} t={} {} vs {exact}", st.t, st.psi[3]);
            assert!(st.psi.fixed_rows::<3>(0).amax() <= 1e-12 * phi4.abs().max(1.0) * (1.0 + st.psi[3].abs()));
        }
        let last = traj.last().unwrap();
        assert_eq!(last.t, 1.0);
        let closed = psi4_closed_form(a, u2, phi4, 1.0);
        // C⁴₂₄ = C³₂₃ − C¹₁₂ whenever e₄ = [e₁, e₃]
        assert!((a.get(2, 4, 4) - (a.get(2, 3, 3) - a.get(1, 2, 1))).abs() <= 1e-9 * c.scale());
        worst = worst.max((last.psi[3] - closed).abs());
        n += 1;
    }
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn psi2_is_frozen_for_any_covector() {
    let fams = families_with_q();
    let mut r = rng(52);
    for fam in fams.iter().take(20) {
        let c = fam.build();
        let q = generating_q(&c, &mut r, 50).unwrap();
        let (basis, _) = adapted_frame(&c, &q).unwrap();
        let law = ControlLaw::abnormal(&GaugeBody::pnorm(3.0, [1.0, 2.0, 0.5]).unwrap(), -1.0);
        let psi0 = gaussian(&mut r);
        let traj = integrate_adjoint(&basis.adapted_c, &law, psi0, 0.5, DEFAULT_STEP).unwrap();
        assert!(traj.iter().all(|st| st.psi[1] == psi0[1]), "{fam}");
    }
}

#[test]
fn first_order_system_satisfies_second_order_equation() {
    let fams = families_with_q();
    let mut r = rng(53);
    let mut n = 0;
    let mut worst = 0.0f64;
    while n < 40 {
        let fam = &fams[r.random_range(0..fams.len())];
        let c = fam.build();
        let Some(q) = generating_q(&c, &mut r, 50) else { continue };
        let (basis, frame) = adapted_frame(&c, &q).unwrap();
        if !matches!(frame, FrameKind::Commutator(_)) {
            continue;
        }
        let a = &basis.adapted_c;
        let body = GaugeBody::ellipsoid(random_spd(&mut r)).unwrap();
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        let u2 = abnormal_u2(&body, s);
        let g = gaussian(&mut r);
        let psi0 = Vector4::new(g[0], 1.0 / u2, g[2], g[3]);
        let h = 1e-3;
        let traj = integrate_adjoint(a, &ControlLaw::abnormal(&body, s), psi0, 2.0, h).unwrap();
        let psi1: Vec<f64> = traj.iter().step_by(10).map(|st| st.psi[0]).collect();
        let big = psi1.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let c = c23(a);
        for i in 2..psi1.len() - 2 {
            let (d2, d1) = stencil(&psi1, i, 10.0 * h);
            let res = psi1_equation(c, u2, d2, d1, psi1[i]) / big;
            worst = worst.max(res.abs());
        }
        n += 1;
    }
    assert!(worst <= 1e-6, "{worst}");
}

/// Constants below 1e-12 are exact zeros of the frame computed in floating
/// point; the branch formula needs them as zeros.
fn snapped(c: [f64; 3]) -> [f64; 3] {
    c.map(|x| if x.abs() < 1e-12 { 0.0 } else { x })
}

#[test]
fn integrated_psi1_is_a_general_solution() {
    let fams = families_with_q();
    let mut r = rng(54);
    let mut n = 0;
    let mut branches = std::collections::BTreeSet::new();
    while n < 60 {
        let fam = &fams[r.random_range(0..fams.len())];
        let c = fam.build();
        let Some(q) = generating_q(&c, &mut r, 50) else { continue };
        let (basis, frame) = adapted_frame(&c, &q).unwrap();
        if !matches!(frame, FrameKind::Commutator(_)) {
            continue;
        }
        let a = &basis.adapted_c;
        let cs = snapped(c23(a));
        let u2 = abnormal_u2(&GaugeBody::euclidean(), 1.0);
        let g = gaussian(&mut r);
        let psi0 = Vector4::new(g[0], 1.0 / u2, g[2], 0.0);
        let traj = integrate_adjoint(a, &ControlLaw::Constant(nalgebra::Vector3::new(0.0, u2, 0.0)), psi0, 1.0, 1e-3).unwrap();
        let at = |t: f64| traj.iter().find(|st| (st.t - t).abs() < 1e-9).unwrap().psi[0];
        // ψ₁ = base + A₁g₁ + A₂g₂; fit A from t = 0 and t = 0.5
        let base = |t: f64| psi1_solution(cs, u2, 0.0, 0.0, t);
        let g1 = |t: f64| psi1_solution(cs, u2, 1.0, 0.0, t) - base(t);
        let g2 = |t: f64| psi1_solution(cs, u2, 0.0, 1.0, t) - base(t);
        let m = nalgebra::Matrix2::new(g1(0.0), g2(0.0), g1(0.5), g2(0.5));
        let rhs = nalgebra::Vector2::new(at(0.0) - base(0.0), at(0.5) - base(0.5));
        let Some(coef) = m.lu().solve(&rhs) else { panic!("{fam} singular fit") };
        for t in [0.25, 0.75, 1.0] {
            let fit = base(t) + coef[0] * g1(t) + coef[1] * g2(t);
            assert!((fit - at(t)).abs() <= 1e-7 * (1.0 + at(t).abs()), "{fam} {cs:?} t={t}: {fit} vs {}", at(t));
        }
        branches.insert(psi1_branch(cs).name());
        n += 1;
    }
    assert!(branches.len() >= 3, "{branches:?}");
}

#[test]
fn general_solution_satisfies_the_equation_in_every_branch() {
    let cases: [[f64; 3]; 6] = [
        [-1.0, 0.3, 0.5],
        [1.0, -0.4, 2.0],
        [2.0, 0.7, -0.2],
        [0.0, 1.3, 0.8],
        [0.0, -0.6, 0.0],
        [2.25, 0.5, 3.0],
    ];
    let mut r = rng(55);
    let mut seen = std::collections::BTreeSet::new();
    for c in cases {
        seen.insert(psi1_branch(c).name());
        for _ in 0..10 {
            let g = gaussian(&mut r);
            let u2 = if g[3] > 0.0 { 0.5 + g[3].abs() } else { -0.5 - g[3].abs() };
            let h = 1e-3;
            let samples: Vec<f64> = (0..5).map(|i| psi1_solution(c, u2, g[0], g[1], 0.4 + (i as f64 - 2.0) * h)).collect();
            let (d2, d1) = stencil(&samples, 2, h);
            let res = psi1_equation(c, u2, d2, d1, samples[2]);
            assert!(res.abs() <= 1e-6, "{c:?} u2={u2}: {res}");
            let lib = psi1_residual(c, u2, |t| psi1_solution(c, u2, g[0], g[1], t), 0.4, 1e-4);
            assert!((lib - res).abs() <= 1e-4 * (1.0 + samples[2].abs()), "{c:?}: {lib} vs {res}");
        }
    }
    assert_eq!(seen.len(), 5);
}

#[test]
fn cosine_solution() {
    let c = [1.0, 0.0, 0.0];
    let f: Vec<f64> = (0..5).map(|i| psi1_solution(c, 1.0, 1.0, 0.0, 1.0 + (i as f64 - 2.0) * 1e-3)).collect();
    assert!((f[2] - 1f64.cos()).abs() < 1e-15);
    assert!(psi1_solution(c, 1.0, 1.0, 0.0, std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let (d2, _) = stencil(&f, 2, 1e-3);
    assert!((d2 + f[2]).abs() <= 1e-9);
    // the growing mode e^{+t} carries A₁
    let grow = psi1_solution([-1.0, 0.0, 0.0], 1.0, 1.0, 0.0, 3.0);
    assert!((grow - 3f64.exp()).abs() < 1e-12);
    assert!((psi1_solution([-1.0, 0.0, 0.0], 1.0, 0.0, 1.0, 3.0) - (-3f64).exp()).abs() < 1e-15);
}

#[test]
fn oscillatory_range_is_a_segment() {
    let mut r = rng(56);
    for _ in 0..20 {
        let g = gaussian(&mut r);
        let c1 = 0.2 + 2.8 * r.random::<f64>();
        let c = [c1, g[0], 0.0];
        let u2 = if g[1] > 0.0 { 0.5 + g[1].abs().min(1.5) } else { -0.5 - g[1].abs().min(1.5) };
        let (a1, a2) = (g[2], g[3]);
        let period = 2.0 * std::f64::consts::PI / (u2.abs() * c1.sqrt());
        let n = 20000;
        let vals: Vec<f64> = (0..=n).map(|i| psi1_solution(c, u2, a1, a2, period * i as f64 / n as f64)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let amp = a1.hypot(a2);
        let shift = -c[1] / (c1 * u2);
        assert!((lo - (shift - amp)).abs() <= 1e-6, "{lo} vs {}", shift - amp);
        assert!((hi - (shift + amp)).abs() <= 1e-6, "{hi} vs {}", shift + amp);
    }
}

/// A commutator frame on 𝔤₃,₆⊕𝔤₁ with `[e₂, e₃] ∥ e₁` and the sign of
/// `C¹₂₃` requested.
fn parallel_e1_frame(sign: f64, seed: u64) -> StructureConstants {
    let c = build(Family::G36G1, &[]);
    let mut r = rng(seed);
    for _ in 0..2000 {
        let Some(q) = generating_q(&c, &mut r, 10) else { continue };
        let Ok((basis, FrameKind::Commutator(_))) = adapted_frame(&c, &q) else { continue };
        let [c1, c2, c3] = c23(&basis.adapted_c);
        if c2.abs() < 1e-9 && c3.abs() < 1e-9 && c1 * sign > 0.1 && c1.abs() < 10.0 {
            return basis.adapted_c;
        }
    }
    panic!("no frame with sign {sign}");
}

#[test]
fn boundedness_dichotomy() {
    let h = 1e-3;
    let law = ControlLaw::abnormal(&GaugeBody::euclidean(), 1.0);
    let bounded = parallel_e1_frame(1.0, 57);
    let mut r = rng(58);
    for _ in 0..5 {
        let g = gaussian(&mut r);
        let psi0 = Vector4::new(g[0], 1.0, g[1], g[2]);
        let traj = integrate_adjoint(&bounded, &law, psi0, 100.0, h).unwrap();
        let top = traj.iter().map(|st| st.psi[0].abs()).fold(0.0, f64::max);
        let amp = {
            // ψ₁ = A cos ωt + B sin ωt with ω = √C¹, ψ₁' = −ψ₃
            let w = bounded.get(2, 3, 1).sqrt();
            g[0].hypot(g[1] / w)
        };
        assert!(top <= amp * (1.0 + 1e-6), "{top} > {amp}");
    }

    let growing = parallel_e1_frame(-1.0, 59);
    let psi0 = Vector4::new(0.3, 1.0, -0.2, 1.0);
    let traj = integrate_adjoint(&growing, &law, psi0, 100.0, h).unwrap();
    let top = traj.iter().map(|st| st.psi[0].abs()).fold(0.0, f64::max);
    assert!(top > 1e6, "{top}");
    // the decaying mode alone stays bounded: ψ₁' = −ψ₃ = −λψ₁
    let lam = (-growing.get(2, 3, 1)).sqrt();
    let traj = integrate_adjoint(&growing, &law, Vector4::new(1.0, 1.0, lam, 0.0), 8.0 / lam, h).unwrap();
    assert!(traj.iter().all(|st| st.psi[0].abs() <= 1.0 + 1e-6));
}

fn rk4_flow(c: &StructureConstants, x: &Vector4<f64>, t: f64) -> Matrix4<f64> {
    let a = c.ad(x);
    let n = 4000;
    let h = t / n as f64;
    let mut m = Matrix4::identity();
    for _ in 0..n {
        let k1 = a * m;
        let k2 = a * (m + k1 * (h / 2.0));
        let k3 = a * (m + k2 * (h / 2.0));
        let k4 = a * (m + k3 * h);
        m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    m
}

#[test]
fn flow_examples() {
    let g41 = build(Family::G41, &[]);
    let t = 1.3;
    let m = adjoint_flow(&g41, &e(4), t);
    let a = g41.ad(&e(4)) * t;
    assert_eq!(a * a * a, Matrix4::zeros());
    let series = Matrix4::identity() + a + a * a / 2.0;
    assert!((m - series).amax() <= 1e-15);
    assert_eq!(m * e(2), Vector4::new(-t, 1.0, 0.0, 0.0));
    assert!((m * e(3) - Vector4::new(t * t / 2.0, -t, 1.0, 0.0)).amax() <= 1e-15);

    let g481 = build(Family::G48a, &[1.0]);
    let m = adjoint_flow(&g481, &(-e(4)), t);
    let d = Matrix4::from_diagonal(&Vector4::new((2.0 * t).exp(), t.exp(), t.exp(), 1.0));
    assert!((m - d).amax() <= 1e-12 * d.amax());

    for fam in AlgebraFamily::representatives() {
        let c = fam.build();
        for z in c.center().basis() {
            assert!((adjoint_flow(&c, z, 2.0) - Matrix4::identity()).amax() <= 1e-15, "{fam}");
        }
    }
}

#[test]
fn flow_matches_integrated_matrix_ode() {
    let mut r = rng(60);
    for fam in all_catalog() {
        let c = fam.build();
        let x = gaussian(&mut r) * 0.5;
        let t = 1.5;
        let m = adjoint_flow(&c, &x, t);
        let o = rk4_flow(&c, &x, t);
        assert!((m - o).amax() <= 1e-9 * o.amax().max(1.0), "{fam}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flow_inverse_group_and_automorphism(
        idx in 0usize..64,
        x in prop::array::uniform4(-1.0f64..1.0),
        y in prop::array::uniform4(-1.0f64..1.0),
        z in prop::array::uniform4(-1.0f64..1.0),
        t in -2.0f64..2.0,
        s in -1.0f64..1.0,
    ) {
        let fams = all_catalog();
        let c = fams[idx % fams.len()].build();
        let x = Vector4::from(x);
        let (y, z) = (Vector4::from(y), Vector4::from(z));
        let f = adjoint_flow(&c, &x, t);
        let back = adjoint_flow(&c, &x, -t);
        prop_assert!((f * back - Matrix4::identity()).amax() <= 1e-10);
        let sum = adjoint_flow(&c, &x, t + s);
        prop_assert!((f * adjoint_flow(&c, &x, s) - sum).amax() <= 1e-10 * sum.amax().max(1.0));
        let lhs = f * c.bracket(&y, &z);
        let rhs = c.bracket(&(f * y), &(f * z));
        prop_assert!((lhs - rhs).amax() <= 1e-10 * lhs.amax().max(f.amax() * f.amax()));
    }
}
