//! Command results. Every report serializes to JSON and renders as text.

use std::fmt;

use serde::{Deserialize, Serialize};
use subfinsler_core::abnormality::{Route, VerdictKind};
use subfinsler_core::adapted::{Construction, FrameKind, Unavailable};

/// Compact decimal: four places, scientific below `10⁻³`.
pub fn num(x: f64) -> String {
    if x.abs() < 5e-13 {
        return "0".into();
    }
    if x.abs() < 1e-3 {
        return format!("{x:.3e}");
    }
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("({})", parts.join(", "))
}

/// `⟨E3⟩` for a coordinate axis, otherwise the combination.
pub fn line(v: &[f64; 4]) -> String {
    let big = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let support: Vec<usize> = (0..4).filter(|&i| v[i].abs() > 1e-12 * big).collect();
    if support.len() == 1 {
        return format!("⟨E{}⟩", support[0] + 1);
    }
    let mut s = String::new();
    for (n, &i) in support.iter().enumerate() {
        let c = v[i];
        if n > 0 {
            s.push_str(if c < 0.0 { " - " } else { " + " });
        } else if c < 0.0 {
            s.push('-');
        }
        s.push_str(&format!("{} E{}", num(c.abs()), i + 1));
    }
    format!("⟨{s}⟩")
}

pub fn frame_name(kind: FrameKind) -> String {
    match kind {
        FrameKind::Commutator(how) => {
            let how = match how {
                Construction::SelfContaining => "e2 in [e2, q]",
                Construction::RankOne => "rank-one image",
                Construction::RankOneNilpotent => "rank-one nilpotent image",
                Construction::ComplexPair => "complex pair",
                Construction::RealDistinct => "distinct real eigenvalues",
                Construction::Jordan => "Jordan block",
            };
            format!("commutator ({how})")
        }
        FrameKind::G481 => "scalar image".into(),
        FrameKind::Lemma1(why) => match why {
            Unavailable::Central => "e4 = [e1, e3] (e2 central)".into(),
            Unavailable::SelfImage => "e4 = [e1, e3] ([e2, q] = <e2>)".into(),
            Unavailable::G481 => "e4 = [e1, e3]".into(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub algebra: String,
    pub jacobi_residual: f64,
    pub generates: bool,
    /// Unit vector spanning `q ∩ N(q)`.
    pub q1: Option<[f64; 4]>,
    pub frame: Option<String>,
    /// `e₁..e₄` of the adapted frame in `E` coordinates.
    pub basis: Option<[[f64; 4]; 4]>,
}

impl fmt::Display for ValidateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra: {}", self.algebra)?;
        writeln!(f, "jacobi residual: {}", num(self.jacobi_residual))?;
        match &self.q1 {
            Some(v) if self.generates => writeln!(f, "generates: yes, q1 = {}", line(v))?,
            _ => writeln!(f, "generates: no")?,
        }
        if let Some(frame) = &self.frame {
            writeln!(f, "frame: {frame}")?;
        }
        if let Some(b) = &self.basis {
            for (i, e) in b.iter().enumerate() {
                writeln!(f, "e{} = {}", i + 1, vector(e))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NonstrongForAllSeminorms,
    StrongForAllSeminorms,
    SeminormDependent,
}

impl From<VerdictKind> for Verdict {
    fn from(k: VerdictKind) -> Self {
        match k {
            VerdictKind::NonstrongForAllSeminorms => Verdict::NonstrongForAllSeminorms,
            VerdictKind::StrongForAllSeminorms => Verdict::StrongForAllSeminorms,
            VerdictKind::SeminormDependent => Verdict::SeminormDependent,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RouteReport {
    ExistsK,
    FixedK { slope: f64 },
    ScalarImage,
    Unbounded,
}

impl From<Route> for RouteReport {
    fn from(r: Route) -> Self {
        match r {
            Route::ExistsK => RouteReport::ExistsK,
            Route::FixedK { slope } => RouteReport::FixedK { slope },
            Route::ScalarImage => RouteReport::ScalarImage,
            Route::Unbounded => RouteReport::Unbounded,
        }
    }
}

impl fmt::Display for RouteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RouteReport::ExistsK => write!(f, "some k with F_U(k, s, 0) = 1/F(0, s, 0)"),
            RouteReport::FixedK { slope } => write!(f, "F_U(k, s, 0) = 1/F(0, s, 0) at k = {} s", num(*slope)),
            RouteReport::ScalarImage => write!(f, "F_U(0, s, 0) = 1/F(0, s, 0)"),
            RouteReport::Unbounded => write!(f, "none (psi_1 unbounded)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub s: i8,
    pub nonstrong: bool,
    pub witness_k: Option<f64>,
    /// Gap of the deciding support-function equality; absent when the
    /// verdict does not depend on the body or no covector is bounded.
    pub gap: Option<f64>,
    /// `s / F(s e₂)`.
    pub u2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub algebra: String,
    /// `"item,case"` of the classification of generating subspaces.
    pub case: Option<String>,
    pub verdict: Verdict,
    pub route: Option<RouteReport>,
    pub frame: String,
    /// `s = +1` then `s = −1`.
    pub branches: [BranchReport; 2],
    /// `±e₂/F(±e₂)` in `E` coordinates.
    pub directions: [[f64; 4]; 2],
    pub diagnostic: Option<String>,
}

impl ClassifyReport {
    pub fn nonstrong(&self, s: i8) -> bool {
        self.branches[if s > 0 { 0 } else { 1 }].nonstrong
    }

    pub fn headline(&self) -> String {
        let sign = |s: i8| if s > 0 { "+1" } else { "-1" };
        let detail = |b: &BranchReport| {
            let gap = b.gap.map_or("inf".to_string(), num);
            match b.witness_k {
                Some(k) => format!("s={}: k={}, gap={}", sign(b.s), num(k), gap),
                None => format!("s={}: gap={}", sign(b.s), gap),
            }
        };
        let mut out = match self.verdict {
            Verdict::NonstrongForAllSeminorms => "NONSTRONG for all seminorms".to_string(),
            Verdict::StrongForAllSeminorms => "STRONG for all seminorms".to_string(),
            Verdict::SeminormDependent => {
                let [p, m] = &self.branches;
                let word = |b: &BranchReport| if b.nonstrong { "NONSTRONG" } else { "STRONG" };
                let head = if p.nonstrong == m.nonstrong {
                    word(p).to_string()
                } else {
                    format!("{} for s=+1, {} for s=-1", word(p), word(m))
                };
                format!("{head} ({}; {})", detail(p), detail(m))
            }
        };
        if let Some(case) = &self.case {
            out.push_str(&format!(", case {case}"));
        }
        out
    }
}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline())?;
        writeln!(f, "algebra: {}", self.algebra)?;
        writeln!(f, "frame: {}", self.frame)?;
        if let Some(r) = &self.route {
            writeln!(f, "condition: {r}")?;
        }
        writeln!(f, "direction s=+1: {}", vector(&self.directions[0]))?;
        writeln!(f, "direction s=-1: {}", vector(&self.directions[1]))?;
        if let Some(d) = &self.diagnostic {
            writeln!(f, "note: {d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub psi: [f64; 4],
    pub psi4_closed: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateReport {
    pub s: i8,
    pub u2: f64,
    /// `C⁴₂₄` of the adapted frame.
    pub c424: f64,
    pub rows: Vec<TrajectoryRow>,
}

impl IntegrateReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.deviation).fold(0.0, f64::max)
    }
}

impl fmt::Display for IntegrateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t\tpsi1\tpsi2\tpsi3\tpsi4\tpsi4_closed\tdeviation")?;
        for r in &self.rows {
            let [a, b, c, d] = r.psi;
            writeln!(f, "{}\t{a}\t{b}\t{c}\t{d}\t{}\t{}", r.t, r.psi4_closed, r.deviation)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub fingerprint: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySurvey {
    pub algebra: String,
    pub expected: usize,
    pub found: usize,
    pub draws: usize,
    pub generating: usize,
    pub near_ideal: usize,
    pub failures: usize,
    pub classes: Vec<ClassCount>,
}

impl FamilySurvey {
    pub fn ok(&self) -> bool {
        self.found == self.expected && self.failures == 0
    }

    pub fn summary(&self) -> String {
        if self.generating == 0 {
            return format!("{}: no generating subspaces", self.algebra);
        }
        let noun = if self.found == 1 { "class" } else { "classes" };
        let status = if self.ok() { "OK" } else { "MISMATCH" };
        format!("{}: {} {noun} (expected {}) {status}", self.algebra, self.found, self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub n: usize,
    pub seed: u64,
    pub families: Vec<FamilySurvey>,
}

impl SurveyReport {
    pub fn ok(&self) -> bool {
        self.families.iter().all(FamilySurvey::ok)
    }
}

impl fmt::Display for SurveyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in &self.families {
            if fam.generating > 0 {
                writeln!(
                    f,
                    "{}: {} draws, {} generating, {} near an ideal",
                    fam.algebra, fam.draws, fam.generating, fam.near_ideal
                )?;
                for c in &fam.classes {
                    writeln!(f, "{:>8}  {}", c.count, c.fingerprint)?;
                }
            }
            writeln!(f, "{}", fam.summary())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family: String,
    pub params: Vec<f64>,
    pub domain: String,
    pub k: usize,
    pub generating_hyperplane: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub entries: Vec<CatalogEntry>,
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family\tparams\tk\tdomain")?;
        for e in &self.entries {
            let p: Vec<String> = e.params.iter().map(|x| x.to_string()).collect();
            let p = if p.is_empty() { "-".to_string() } else { p.join(" ") };
            writeln!(f, "{}\t{}\t{}\t{}", e.family, p, e.k, e.domain)?;
        }
        Ok(())
    }
}
