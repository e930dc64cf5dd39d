//! The four-dimensional real Lie algebras, by family name and parameters,
//! with their parameter domains and the number `k` of equivalence classes
//! of generating three-dimensional subspaces.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::lie::StructureConstants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Abelian,
    G21Plus2G1,
    TwoG21,
    G31G1,
    G32G1,
    G33G1,
    G34aG1,
    G35aG1,
    G36G1,
    G37G1,
    G41,
    G42a,
    G43,
    G44,
    G45ab,
    G46ab,
    G47,
    G48a,
    G49a,
    G410,
}

impl Family {
    pub const ALL: [Family; 20] = [
        Family::Abelian,
        Family::G21Plus2G1,
        Family::TwoG21,
        Family::G31G1,
        Family::G32G1,
        Family::G33G1,
        Family::G34aG1,
        Family::G35aG1,
        Family::G36G1,
        Family::G37G1,
        Family::G41,
        Family::G42a,
        Family::G43,
        Family::G44,
        Family::G45ab,
        Family::G46ab,
        Family::G47,
        Family::G48a,
        Family::G49a,
        Family::G410,
    ];

    /// Short ASCII name used on the command line and in files.
    pub fn name(self) -> &'static str {
        match self {
            Family::Abelian => "4g1",
            Family::G21Plus2G1 => "g21+2g1",
            Family::TwoG21 => "2g21",
            Family::G31G1 => "g31+g1",
            Family::G32G1 => "g32+g1",
            Family::G33G1 => "g33+g1",
            Family::G34aG1 => "g34a+g1",
            Family::G35aG1 => "g35a+g1",
            Family::G36G1 => "g36+g1",
            Family::G37G1 => "g37+g1",
            Family::G41 => "g41",
            Family::G42a => "g42a",
            Family::G43 => "g43",
            Family::G44 => "g44",
            Family::G45ab => "g45ab",
            Family::G46ab => "g46ab",
            Family::G47 => "g47",
            Family::G48a => "g48a",
            Family::G49a => "g49a",
            Family::G410 => "g410",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            Family::G34aG1 | Family::G35aG1 | Family::G42a | Family::G48a | Family::G49a => 1,
            Family::G45ab | Family::G46ab => 2,
            _ => 0,
        }
    }

    /// Human-readable parameter domain.
    pub fn domain(self) -> &'static str {
        match self {
            Family::G34aG1 => "0 <= a, a != 1",
            Family::G35aG1 => "a >= 0",
            Family::G42a => "a != 0",
            Family::G45ab => "-1 < a <= b <= 1 with ab != 0, or a = -1 and 0 < b <= 1",
            Family::G46ab => "a > 0",
            Family::G48a => "-1 <= a <= 1",
            Family::G49a => "a >= 0",
            _ => "no parameters",
        }
    }

    fn accepts(self, p: &[f64]) -> bool {
        match self {
            Family::G34aG1 => p[0] >= 0.0 && p[0] != 1.0,
            Family::G35aG1 | Family::G49a => p[0] >= 0.0,
            Family::G42a => p[0] != 0.0,
            Family::G45ab => {
                let (a, b) = (p[0], p[1]);
                (-1.0 < a && a <= b && b <= 1.0 && a * b != 0.0)
                    || (a == -1.0 && 0.0 < b && b <= 1.0)
            }
            Family::G46ab => p[0] > 0.0,
            Family::G48a => (-1.0..=1.0).contains(&p[0]),
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == t)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family `{s}`")))
    }
}

/// A catalog family with validated parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraFamily {
    family: Family,
    params: [f64; 2],
}

impl AlgebraFamily {
    pub fn new(family: Family, params: &[f64]) -> Result<Self> {
        let n = family.param_count();
        if params.len() != n {
            return Err(Error::Domain(format!(
                "{} takes {} parameter(s), got {}",
                family,
                n,
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) || !family.accepts(params) {
            return Err(Error::Domain(format!(
                "{} with parameters {:?}; domain is {}",
                family,
                params,
                family.domain()
            )));
        }
        let mut p = [0.0; 2];
        p[..n].copy_from_slice(params);
        Ok(Self { family, params: p })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params[..self.family.param_count()]
    }

    fn alpha(&self) -> f64 {
        self.params[0]
    }

    fn beta(&self) -> f64 {
        self.params[1]
    }

    /// Structure constants with exactly the listed nonzero commutators.
    pub fn build(&self) -> StructureConstants {
        let (a, b) = (self.alpha(), self.beta());
        let c = StructureConstants::zero();
        match self.family {
            Family::Abelian => c,
            Family::G21Plus2G1 => c.with_bracket(1, 2, [1.0, 0.0, 0.0, 0.0]),
            Family::TwoG21 => c
                .with_bracket(1, 2, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 0.0, 1.0, 0.0]),
            Family::G31G1 => c.with_bracket(2, 3, [1.0, 0.0, 0.0, 0.0]),
            Family::G32G1 => c
                .with_bracket(2, 3, [1.0, -1.0, 0.0, 0.0])
                .with_bracket(3, 1, [1.0, 0.0, 0.0, 0.0]),
            Family::G33G1 => c
                .with_bracket(2, 3, [0.0, -1.0, 0.0, 0.0])
                .with_bracket(3, 1, [1.0, 0.0, 0.0, 0.0]),
            Family::G34aG1 => c
                .with_bracket(2, 3, [1.0, -a, 0.0, 0.0])
                .with_bracket(3, 1, [a, -1.0, 0.0, 0.0]),
            Family::G35aG1 => c
                .with_bracket(2, 3, [1.0, -a, 0.0, 0.0])
                .with_bracket(3, 1, [a, 1.0, 0.0, 0.0]),
            Family::G36G1 => c
                .with_bracket(2, 3, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(3, 1, [0.0, 1.0, 0.0, 0.0])
                .with_bracket(1, 2, [0.0, 0.0, -1.0, 0.0]),
            Family::G37G1 => c
                .with_bracket(2, 3, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(3, 1, [0.0, 1.0, 0.0, 0.0])
                .with_bracket(1, 2, [0.0, 0.0, 1.0, 0.0]),
            Family::G41 => c
                .with_bracket(2, 4, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, 0.0, 0.0]),
            Family::G42a => c
                .with_bracket(1, 4, [a, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [0.0, 1.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, 1.0, 0.0]),
            Family::G43 => c
                .with_bracket(1, 4, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, 0.0, 0.0]),
            Family::G44 => c
                .with_bracket(1, 4, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [1.0, 1.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, 1.0, 0.0]),
            Family::G45ab => c
                .with_bracket(1, 4, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [0.0, b, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 0.0, a, 0.0]),
            Family::G46ab => c
                .with_bracket(1, 4, [a, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [0.0, b, -1.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, b, 0.0]),
            Family::G47 => c
                .with_bracket(1, 4, [2.0, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [0.0, 1.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, 1.0, 0.0])
                .with_bracket(2, 3, [1.0, 0.0, 0.0, 0.0]),
            Family::G48a => c
                .with_bracket(1, 4, [1.0 + a, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [0.0, 1.0, 0.0, 0.0])
                .with_bracket(3, 4, [0.0, 0.0, a, 0.0])
                .with_bracket(2, 3, [1.0, 0.0, 0.0, 0.0]),
            Family::G49a => c
                .with_bracket(1, 4, [2.0 * a, 0.0, 0.0, 0.0])
                .with_bracket(2, 4, [0.0, a, -1.0, 0.0])
                .with_bracket(3, 4, [0.0, 1.0, a, 0.0])
                .with_bracket(2, 3, [1.0, 0.0, 0.0, 0.0]),
            Family::G410 => c
                .with_bracket(1, 3, [1.0, 0.0, 0.0, 0.0])
                .with_bracket(2, 3, [0.0, 1.0, 0.0, 0.0])
                .with_bracket(1, 4, [0.0, -1.0, 0.0, 0.0])
                .with_bracket(2, 4, [1.0, 0.0, 0.0, 0.0]),
        }
    }

    /// The catalog entry whose [`build`](Self::build) reproduces `c`
    /// entry by entry (to `1e-12` of its scale), parameters read off their
    /// defining positions.
    pub fn identify(c: &StructureConstants) -> Result<Self> {
        let tol = 1e-12 * c.scale().max(1.0);
        for f in Family::ALL {
            let params: Vec<f64> = match f {
                Family::G34aG1 | Family::G35aG1 => Vec::from([-c.get(2, 3, 2)]),
                Family::G42a => Vec::from([c.get(1, 4, 1)]),
                Family::G45ab => Vec::from([c.get(3, 4, 3), c.get(2, 4, 2)]),
                Family::G46ab => Vec::from([c.get(1, 4, 1), c.get(2, 4, 2)]),
                Family::G48a => Vec::from([c.get(3, 4, 3)]),
                Family::G49a => Vec::from([c.get(2, 4, 2)]),
                _ => Vec::new(),
            };
            if let Ok(fam) = AlgebraFamily::new(f, &params) {
                let built = fam.build();
                let same = (1..=4).all(|i| {
                    (i + 1..=4).all(|j| (1..=4).all(|k| (built.get(i, j, k) - c.get(i, j, k)).abs() <= tol))
                });
                if same {
                    return Ok(fam);
                }
            }
        }
        Err(Error::UnknownFamily)
    }

    /// Number of equivalence classes of generating three-dimensional
    /// subspaces; two-valued table cells are resolved by parameter.
    pub fn k(&self) -> usize {
        let (a, b) = (self.alpha(), self.beta());
        match self.family {
            Family::Abelian => 0,
            Family::G21Plus2G1 => 1,
            Family::TwoG21 => 2,
            Family::G31G1 => 1,
            Family::G32G1 => 3,
            Family::G33G1 => 1,
            Family::G34aG1 => {
                if a == 0.0 {
                    3
                } else {
                    4
                }
            }
            Family::G35aG1 => 2,
            Family::G36G1 => 5,
            Family::G37G1 => 2,
            Family::G41 => 2,
            Family::G42a => {
                if a == 1.0 {
                    1
                } else {
                    3
                }
            }
            Family::G43 => 3,
            Family::G44 => 2,
            Family::G45ab => {
                if a == 1.0 && b == 1.0 {
                    0
                } else if a == b || b == 1.0 {
                    1
                } else {
                    4
                }
            }
            Family::G46ab => 2,
            Family::G47 => 2,
            Family::G48a => {
                if a == 1.0 {
                    1
                } else {
                    2
                }
            }
            Family::G49a => 2,
            Family::G410 => 1,
        }
    }

    /// Parameter points covering every branch of [`k`](Self::k) and every
    /// special case of the classification, for each family.
    pub fn representatives() -> Vec<AlgebraFamily> {
        let mut out = Vec::new();
        for f in Family::ALL {
            let sets: &[&[f64]] = match f {
                Family::G34aG1 => &[&[0.0], &[0.5], &[2.0]],
                Family::G35aG1 => &[&[0.0], &[0.5]],
                Family::G42a => &[&[1.0], &[0.5], &[-1.0]],
                Family::G45ab => &[
                    &[1.0, 1.0],
                    &[0.5, 0.5],
                    &[-0.5, 1.0],
                    &[-1.0, 1.0],
                    &[0.3, 0.5],
                    &[-1.0, 0.5],
                    &[-0.5, 0.5],
                ],
                Family::G46ab => &[&[1.0, 0.0], &[0.5, 0.3]],
                Family::G48a => &[&[-1.0], &[-0.5], &[0.0], &[0.5], &[1.0]],
                Family::G49a => &[&[0.0], &[0.5]],
                _ => &[&[]],
            };
            for p in sets {
                out.push(AlgebraFamily::new(f, p).expect("representative in domain"));
            }
        }
        out
    }

    /// Every family at every admissible combination of parameters drawn
    /// from `values`.
    pub fn grid(values: &[f64]) -> Vec<AlgebraFamily> {
        let mut out = Vec::new();
        for f in Family::ALL {
            match f.param_count() {
                0 => out.push(AlgebraFamily::new(f, &[]).unwrap()),
                1 => out.extend(values.iter().filter_map(|&a| AlgebraFamily::new(f, &[a]).ok())),
                _ => {
                    for &a in values {
                        out.extend(
                            values.iter().filter_map(|&b| AlgebraFamily::new(f, &[a, b]).ok()),
                        );
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for AlgebraFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        let p = self.params();
        if !p.is_empty() {
            write!(f, "(")?;
            for (i, v) in p.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
