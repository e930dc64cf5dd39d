use std::thread;

use nalgebra::Vector4;
use subfinsler_core::abnormality::{classify_abnormal, VerdictKind};
use subfinsler_core::adapted::{adapted_frame, distinguished_line};
use subfinsler_core::catalog::AlgebraFamily;
use subfinsler_core::equivalence::{
    case_from_fingerprint, fingerprint, sample_stream, seeded_census, stream_plan, theorem4_item, Census,
};
use subfinsler_core::extremal::{abnormal_u2, integrate_adjoint, psi4_closed_form, ControlLaw};
use subfinsler_core::{Error as CoreError, StructureConstants};

use crate::error::{CliError, Result};
use crate::problem::Problem;
use crate::report::*;

pub fn validate(p: &Problem) -> Result<ValidateReport> {
    let c = &p.constants;
    let generates = c.generates(&p.subspace);
    let mut report = ValidateReport {
        algebra: p.algebra_name(),
        jacobi_residual: c.check_jacobi(),
        generates,
        q1: None,
        frame: None,
        basis: None,
    };
    if generates {
        report.q1 = Some(distinguished_line(c, &p.subspace)?.into());
        let (basis, kind) = adapted_frame(c, &p.subspace)?;
        report.frame = Some(frame_name(kind));
        report.basis = Some(basis.e.map(Into::into));
    }
    Ok(report)
}

pub fn classify(p: &Problem) -> Result<ClassifyReport> {
    let c = &p.constants;
    let (basis, _) = adapted_frame(c, &p.subspace)?;
    let body = p.body_in(&basis)?;
    let v = classify_abnormal(c, &p.subspace, &body, p.support_tol)?;
    let case = p
        .family
        .as_ref()
        .and_then(theorem4_item)
        .and_then(|item| fingerprint(c, &p.subspace).ok().map(|fp| case_from_fingerprint(item, &fp).to_string()));
    let branches = match &v.branches {
        Some(bs) => bs.map(|b| BranchReport {
            s: b.s as i8,
            nonstrong: b.nonstrong,
            witness_k: b.witness_k,
            gap: b.gap.is_finite().then_some(b.gap),
            u2: b.u2,
        }),
        None => [1i8, -1].map(|s| BranchReport {
            s,
            nonstrong: v.kind == VerdictKind::NonstrongForAllSeminorms,
            witness_k: None,
            gap: None,
            u2: abnormal_u2(&body, s as f64),
        }),
    };
    Ok(ClassifyReport {
        algebra: p.algebra_name(),
        case,
        verdict: v.kind.into(),
        route: v.route.map(Into::into),
        frame: frame_name(v.frame),
        branches,
        directions: v.extremal_directions.map(Into::into),
        diagnostic: v.diagnostic.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub step: f64,
    /// `ψ(0)` in the adapted frame.
    pub psi0: [f64; 4],
    pub s: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { t_end: 1.0, step: 1e-3, psi0: [0.0, 0.0, 0.0, 1.0], s: 1.0 }
    }
}

/// The adjoint system along `t ↦ exp(s t e₂/F(s e₂))` in the adapted frame.
pub fn integrate(p: &Problem, opts: &IntegrateOptions) -> Result<IntegrateReport> {
    if opts.s != 1.0 && opts.s != -1.0 {
        return Err(CliError::Parse("sign must be 1 or -1".into()));
    }
    let (basis, _) = adapted_frame(&p.constants, &p.subspace)?;
    let body = p.body_in(&basis)?;
    let a = &basis.adapted_c;
    let law = ControlLaw::abnormal(&body, opts.s);
    let u2 = abnormal_u2(&body, opts.s);
    let traj = integrate_adjoint(a, &law, Vector4::from(opts.psi0), opts.t_end, opts.step).map_err(|e| match e {
        CoreError::StepTooLarge { .. } => CliError::Integration(e),
        CoreError::InvalidInput(msg) => CliError::Parse(msg),
        e => CliError::Core(e),
    })?;
    let rows = traj
        .iter()
        .map(|st| {
            let closed = psi4_closed_form(a, u2, opts.psi0[3], st.t);
            TrajectoryRow { t: st.t, psi: st.psi.into(), psi4_closed: closed, deviation: (st.psi[3] - closed).abs() }
        })
        .collect();
    Ok(IntegrateReport { s: opts.s as i8, u2, c424: a.get(2, 4, 4), rows })
}

/// Census over `n` Gaussian draws and the seeded subspaces, with streams
/// spread over the available cores. The result does not depend on the
/// number of workers.
pub fn parallel_census(c: &StructureConstants, n: usize, seed: u64) -> Census {
    let plan = stream_plan(n);
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).clamp(1, plan.len().max(1));
    thread::scope(|scope| {
        let seeded = scope.spawn(|| seeded_census(c, seed));
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let plan = &plan;
                scope.spawn(move || {
                    plan.iter()
                        .skip(w)
                        .step_by(workers)
                        .map(|&(stream, len)| sample_stream(c, seed, stream, len))
                        .fold(Census::default(), Census::merge)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .fold(Census::default(), Census::merge)
            .merge(seeded.join().expect("census worker panicked"))
    })
}

pub fn survey_family(fam: &AlgebraFamily, n: usize, seed: u64) -> FamilySurvey {
    let census = parallel_census(&fam.build(), n, seed);
    FamilySurvey {
        algebra: fam.to_string(),
        expected: fam.k(),
        found: census.distinct(),
        draws: census.draws,
        generating: census.generating,
        near_ideal: census.near_ideal,
        failures: census.failures,
        classes: census
            .classes
            .iter()
            .map(|(fp, &count)| ClassCount { fingerprint: fp.to_string(), count })
            .collect(),
    }
}

pub fn survey(targets: &[AlgebraFamily], n: usize, seed: u64) -> SurveyReport {
    SurveyReport { n, seed, families: targets.iter().map(|f| survey_family(f, n, seed)).collect() }
}

pub fn catalog() -> CatalogReport {
    let entries = AlgebraFamily::representatives()
        .into_iter()
        .map(|f| CatalogEntry {
            family: f.family().name().to_string(),
            params: f.params().to_vec(),
            domain: f.family().domain().to_string(),
            k: f.k(),
            generating_hyperplane: f.build().admits_generating_hyperplane(),
        })
        .collect();
    CatalogReport { entries }
}
