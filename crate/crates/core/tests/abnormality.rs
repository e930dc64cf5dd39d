mod common;

use common::*;
use nalgebra::{Matrix3, Vector3};
use subfinsler_core::abnormality::{
    classify_abnormal, seminorm_free_verdict, subriemannian_verdict, Route, SeminormFree, VerdictKind,
};
use subfinsler_core::catalog::{AlgebraFamily, Family};
use subfinsler_core::equivalence::{ideal_margin, seeded_subspaces, theorem4_case, CaseLabel};
use subfinsler_core::gauge::GaugeBody;
use subfinsler_core::Subspace;

const TOL: f64 = 1e-8;

fn tilted() -> Matrix3<f64> {
    Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.5, 1.0)
}

#[test]
fn seminorm_free_examples() {
    let mut r = rng(31);
    for (f, want) in [(Family::G31G1, SeminormFree::NonstrongAll), (Family::G33G1, SeminormFree::StrongAll)] {
        let c = build(f, &[]);
        for _ in 0..50 {
            let q = generating_q(&c, &mut r, 50).unwrap();
            assert_eq!(seminorm_free_verdict(&c, &q).unwrap(), want);
        }
    }
    let g41 = build(Family::G41, &[]);
    assert_eq!(seminorm_free_verdict(&g41, &Subspace::coordinate(&[2, 3, 4])).unwrap(), SeminormFree::Dependent);
}

#[test]
fn classify_examples() {
    let q = Subspace::coordinate(&[2, 3, 4]);
    let v = classify_abnormal(&build(Family::G41, &[]), &q, &GaugeBody::euclidean(), TOL).unwrap();
    assert_eq!(v.kind, VerdictKind::SeminormDependent);
    for b in v.branches.unwrap() {
        assert!(b.nonstrong && b.witness_k.unwrap().abs() < 1e-6 && b.gap.abs() < 1e-9);
    }

    let body = GaugeBody::ellipsoid(tilted()).unwrap();
    let v = classify_abnormal(&build(Family::G48a, &[1.0]), &q, &body, TOL).unwrap();
    assert_eq!(v.route, Some(Route::ScalarImage));
    for b in v.branches.unwrap() {
        assert!(!b.nonstrong);
        assert!((b.gap - (2.0 / 3f64.sqrt() - 1.0)).abs() < 1e-9);
    }

    let g33 = build(Family::G33G1, &[]);
    let mut r = rng(32);
    let q = generating_q(&g33, &mut r, 50).unwrap();
    assert_eq!(classify_abnormal(&g33, &q, &body, TOL).unwrap().kind, VerdictKind::StrongForAllSeminorms);
}

#[test]
fn extremal_directions_have_unit_gauge() {
    let q = Subspace::coordinate(&[2, 3, 4]);
    let body = GaugeBody::polytope(vec![
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(-1.0, 0.0, 0.0),
        Vector3::new(0.0, 2.0, 0.0),
        Vector3::new(0.0, -0.5, 0.0),
        Vector3::new(0.0, 0.0, 1.0),
        Vector3::new(0.0, 0.0, -1.0),
    ])
    .unwrap();
    let v = classify_abnormal(&build(Family::G41, &[]), &q, &body, TOL).unwrap();
    let e2 = v.basis.e[1];
    assert!((v.extremal_directions[0] - e2 * 2.0).norm() < 1e-12);
    assert!((v.extremal_directions[1] + e2 * 0.5).norm() < 1e-12);
    let [plus, minus] = v.branches.unwrap();
    assert!((plus.u2 - 2.0).abs() < 1e-12 && (minus.u2 + 0.5).abs() < 1e-12);
}

#[test]
fn subriemannian_examples() {
    let g41 = build(Family::G41, &[]);
    let q = Subspace::coordinate(&[2, 3, 4]);
    assert!(subriemannian_verdict(&g41, &q, &Matrix3::identity(), TOL).unwrap());
    assert!(!subriemannian_verdict(&g41, &q, &tilted(), TOL).unwrap());
    let g31 = build(Family::G31G1, &[]);
    let mut r = rng(33);
    let q = generating_q(&g31, &mut r, 50).unwrap();
    for _ in 0..10 {
        assert!(subriemannian_verdict(&g31, &q, &random_spd(&mut r), TOL).unwrap());
    }
}

#[test]
fn subriemannian_and_general_verdicts_agree() {
    let fams = AlgebraFamily::representatives();
    let mut r = rng(34);
    let mut done = 0;
    let mut dependent = 0;
    while done < 500 {
        let fam = fams[done % fams.len()];
        let c = fam.build();
        done += 1;
        let Some(q) = generating_q(&c, &mut r, 50) else { continue };
        // half of the forms make e2 orthogonal to s, the other half are generic
        let gram = random_spd(&mut r);
        let sr = subriemannian_verdict(&c, &q, &gram, TOL).unwrap();
        let v = classify_abnormal(&c, &q, &GaugeBody::ellipsoid(gram).unwrap(), TOL).unwrap();
        assert_eq!(v.nonstrong(1.0), sr, "{fam}");
        assert_eq!(v.nonstrong(-1.0), sr, "{fam}");
        if v.kind == VerdictKind::SeminormDependent {
            dependent += 1;
        }
    }
    assert!(dependent > 100);
}

#[test]
fn orthogonal_forms_are_nonstrong() {
    // Gram matrices making e2 orthogonal to e1, e3 in the adapted frame
    let mut r = rng(35);
    for fam in AlgebraFamily::representatives() {
        let c = fam.build();
        let Some(q) = generating_q(&c, &mut r, 50) else { continue };
        if seminorm_free_verdict(&c, &q).unwrap() != SeminormFree::Dependent {
            continue;
        }
        let a = random_spd(&mut r);
        let mut gram = Matrix3::zeros();
        for (i, j) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            gram[(i, j)] = a[(i, j)];
        }
        gram[(1, 1)] = 1.5;
        let v = classify_abnormal(&c, &q, &GaugeBody::ellipsoid(gram).unwrap(), TOL).unwrap();
        let sr = subriemannian_verdict(&c, &q, &gram, TOL).unwrap();
        assert_eq!(v.nonstrong(1.0), sr, "{fam}");
        if matches!(v.route, Some(Route::ExistsK) | Some(Route::ScalarImage)) {
            assert!(sr, "{fam}");
        }
    }
}

#[test]
fn symmetric_bodies_give_equal_branches_and_scaling_changes_nothing() {
    let fams = AlgebraFamily::representatives();
    let mut r = rng(36);
    let mut n = 0;
    let mut i = 0;
    while n < 100 {
        let fam = fams[i % fams.len()];
        i += 1;
        let c = fam.build();
        let Some(q) = generating_q(&c, &mut r, 50) else { continue };
        let body = match n % 3 {
            0 => GaugeBody::ellipsoid(random_spd(&mut r)).unwrap(),
            1 => {
                let mut vs = Vec::new();
                for _ in 0..5 {
                    let g = gaussian(&mut r);
                    let x = Vector3::new(g[0], g[1], g[2]);
                    vs.push(x);
                    vs.push(-x);
                }
                match GaugeBody::polytope(vs) {
                    Ok(b) => b,
                    Err(_) => continue,
                }
            }
            _ => GaugeBody::pnorm(1.0 + n as f64 * 0.05, [1.0, 0.5, 2.0]).unwrap(),
        };
        n += 1;
        assert!(body.is_symmetric());
        let v = classify_abnormal(&c, &q, &body, TOL).unwrap();
        assert_eq!(v.nonstrong(1.0), v.nonstrong(-1.0), "{fam}");
        let w = classify_abnormal(&c, &q, &body.scaled(3.7), TOL).unwrap();
        assert_eq!(v.nonstrong(1.0), w.nonstrong(1.0), "{fam}");
        assert_eq!(v.nonstrong(-1.0), w.nonstrong(-1.0), "{fam}");
    }
}

#[test]
fn asymmetric_polytope_splits_the_signs() {
    // top facet y = 1 is flat, the bottom facet -y + z/2 = 1/2 through
    // (0, -1/2, 0) leans on e3, so F(e2) = 1 and F(-e2) = 2
    let body = GaugeBody::polytope(vec![
        Vector3::new(1.0, 1.0, 1.0),
        Vector3::new(-1.0, 1.0, 1.0),
        Vector3::new(1.0, 1.0, -1.0),
        Vector3::new(-1.0, 1.0, -1.0),
        Vector3::new(1.0, -0.25, 0.5),
        Vector3::new(-1.0, -0.25, 0.5),
        Vector3::new(1.0, -0.75, -0.5),
        Vector3::new(-1.0, -0.75, -0.5),
    ])
    .unwrap();
    assert!(!body.is_symmetric());
    let g41 = build(Family::G41, &[]);
    let q = Subspace::coordinate(&[2, 3, 4]);
    let v = classify_abnormal(&g41, &q, &body, TOL).unwrap();
    assert_eq!(v.route, Some(Route::ExistsK));
    let [p, m] = v.branches.unwrap();
    assert_eq!((p.s, m.s), (1.0, -1.0));
    assert!((p.u2 - 1.0).abs() < 1e-12 && (m.u2 + 0.5).abs() < 1e-12, "{} {}", p.u2, m.u2);
    assert!(p.nonstrong && p.witness_k.unwrap().abs() < 1e-6);
    assert!(!m.nonstrong && m.gap > 1e-3);
    assert!(v.nonstrong(1.0) && !v.nonstrong(-1.0));
}

/// Verdict kind and decisive equality listed for each case label.
fn listed(fam: &AlgebraFamily, label: Option<CaseLabel>) -> Option<&'static str> {
    let p = fam.params();
    match fam.family() {
        Family::G21Plus2G1 | Family::G31G1 => return Some("nonstrong"),
        Family::G33G1 => return Some("strong"),
        Family::G42a if p[0] == 1.0 => return Some("strong"),
        Family::G45ab if p[1] == 1.0 || p[0] == p[1] => return Some("strong"),
        Family::G410 => return Some("exists-k"),
        Family::G48a if p[0] == 1.0 => return Some("k=0"),
        _ => {}
    }
    let l = label?;
    Some(match (l.item, l.case) {
        (2, 1) | (3, 1) | (4, 1) | (5, 1) | (8, 1) => "nonstrong",
        (1, 1) | (2, 2) | (4, 2) | (6, 1) | (7, 1) | (9, 1) => "strong",
        (1, 2) | (2, 3) | (3, 2) | (6, 2) | (9, 2) => "exists-k",
        (4, 3) | (5, 2) | (7, 2) | (8, 2) => "k=0",
        _ => return None,
    })
}

fn observed(c: &subfinsler_core::StructureConstants, q: &Subspace, ctx: &str) -> &'static str {
    let v = classify_abnormal(c, q, &GaugeBody::euclidean(), TOL).unwrap();
    match (v.kind, v.route) {
        (VerdictKind::NonstrongForAllSeminorms, _) => "nonstrong",
        (VerdictKind::StrongForAllSeminorms, _) => "strong",
        (_, Some(Route::ExistsK)) => "exists-k",
        (_, Some(Route::ScalarImage)) => "k=0",
        (_, Some(Route::FixedK { slope })) if slope.abs() <= 1e-8 => "k=0",
        (_, r) => panic!("{ctx}: unexpected route {r:?} frame {:?}", v.frame),
    }
}

#[test]
fn verdicts_follow_the_case_table() {
    let mut r = rng(37);
    for fam in AlgebraFamily::representatives() {
        let c = fam.build();
        let mut qs: Vec<Subspace> = seeded_subspaces(&c, 5);
        // the slope loses ~ margin^-3.5 ulps next to an ideal line
        qs.extend((0..100).map(|_| random_q(&mut r)).filter(|q| ideal_margin(&c, q).is_none_or(|m| !(1e-8..1e-2).contains(&m))));
        let mut seen = std::collections::BTreeSet::new();
        for q in qs.iter().filter(|q| q.dim() == 3 && c.generates(q)) {
            let label = theorem4_case(&c, q).unwrap();
            let want = listed(&fam, label).unwrap_or_else(|| panic!("{fam} {label:?} not listed"));
            assert_eq!(observed(&c, q, &format!("{fam} {label:?}")), want, "{fam} {label:?}");
            seen.insert(label);
        }
        if !c.is_abelian() && fam.family() != Family::G45ab || fam.params() != [1.0, 1.0] {
            assert!(!seen.is_empty() || !c.admits_generating_hyperplane(), "{fam}");
        }
    }
}
