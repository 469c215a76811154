use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{
    invariant_factors, subquotient_homology, AbelianInvariants, FpAbGroup, GroupMorphism, IntMatrix,
};
use crate::error::{Error, Result};

/// Bounded cochain complex of finitely presented groups.
///
/// `groups[i]` sits in degree `min_degree + i` and `differentials[i]` maps
/// it to `groups[i + 1]`; everything outside the stored range is zero. A
/// truncated complex is missing its outgoing differential in the top degree,
/// so that degree is left out of reports.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    min_degree: i64,
    groups: Vec<FpAbGroup>,
    differentials: Vec<IntMatrix>,
    truncated: bool,
}

impl CochainComplex {
    pub fn new(
        min_degree: i64,
        groups: Vec<FpAbGroup>,
        differentials: Vec<IntMatrix>,
    ) -> Result<Self> {
        if !groups.is_empty() && differentials.len() + 1 != groups.len() {
            return Err(Error::Shape(format!(
                "{} groups need {} differentials, got {}",
                groups.len(),
                groups.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            let expected = (groups[i + 1].generators(), groups[i].generators());
            if d.shape() != expected {
                return Err(Error::Shape(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    min_degree + i as i64,
                    d.rows(),
                    d.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        Ok(CochainComplex {
            min_degree,
            groups,
            differentials,
            truncated: false,
        })
    }

    pub fn zero() -> Self {
        CochainComplex {
            min_degree: 0,
            groups: Vec::new(),
            differentials: Vec::new(),
            truncated: false,
        }
    }

    pub fn with_truncation(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Highest stored degree, if any group is stored.
    pub fn max_degree(&self) -> Option<i64> {
        (!self.groups.is_empty()).then(|| self.min_degree + self.groups.len() as i64 - 1)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.groups.len()).map(move |i| self.min_degree + i as i64)
    }

    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.min_degree;
        (i >= 0 && (i as usize) < self.groups.len()).then_some(i as usize)
    }

    /// The group in degree `n`; the zero group outside the stored range.
    pub fn group(&self, n: i64) -> FpAbGroup {
        self.index(n)
            .map_or_else(FpAbGroup::zero, |i| self.groups[i].clone())
    }

    pub fn generators(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.groups[i].generators())
    }

    /// Matrix of `d^n`: degree `n` to degree `n + 1`.
    pub fn differential(&self, n: i64) -> IntMatrix {
        match self.index(n) {
            Some(i) if i < self.differentials.len() => self.differentials[i].clone(),
            _ => IntMatrix::zeros(self.generators(n + 1), self.generators(n)),
        }
    }

    pub fn is_free(&self) -> bool {
        self.groups.iter().all(FpAbGroup::is_free_presentation)
    }

    pub fn is_zero_complex(&self) -> bool {
        self.groups.iter().all(|g| g.generators() == 0)
    }

    /// Checks that every differential is well defined on the presentations
    /// and that consecutive differentials compose to zero modulo relations.
    pub fn check_square_zero(&self) -> Result<()> {
        for n in self.degrees() {
            let d = self.differential(n);
            let next = self.group(n + 1);
            if !self.group(n).is_free_presentation() {
                GroupMorphism::new(self.group(n), next.clone(), d.clone())
                    .map_err(|_| Error::BrokenComplex(n))?;
            }
            let dd = &self.differential(n + 1) * &d;
            if dd.is_zero() {
                continue;
            }
            let target = self.group(n + 2);
            if target.is_free_presentation() || !target.relation_lattice().contains_columns(&dd) {
                return Err(Error::BrokenComplex(n));
            }
        }
        Ok(())
    }

    /// Replaces each group by its Smith presentation and conjugates the
    /// differentials accordingly.
    pub fn simplify(&self) -> CochainComplex {
        let pres: Vec<_> = self
            .groups
            .iter()
            .map(FpAbGroup::smith_presentation)
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, d)| &(&pres[i + 1].to * d) * &pres[i].from)
            .collect();
        CochainComplex {
            min_degree: self.min_degree,
            groups: pres.into_iter().map(|p| p.group).collect(),
            differentials,
            truncated: self.truncated,
        }
    }

    /// Cohomology in every reported degree.
    pub fn cohomology(&self, method: Method) -> Result<CohomologyReport> {
        let groups = if self.is_free() {
            self.free_cohomology()
        } else {
            self.simplify().general_cohomology()?
        };
        let mut degrees: Vec<DegreeReport> = groups
            .into_iter()
            .map(|(n, inv)| DegreeReport { n, group: inv })
            .collect();
        if self.truncated {
            degrees.pop();
        }
        Ok(CohomologyReport { method, degrees })
    }

    fn free_cohomology(&self) -> Vec<(i64, AbelianInvariants)> {
        let factors: Vec<_> = self.differentials.iter().map(invariant_factors).collect();
        let empty = Vec::new();
        self.degrees()
            .enumerate()
            .map(|(i, n)| {
                let out = factors.get(i).unwrap_or(&empty);
                let inc = if i == 0 { &empty } else { &factors[i - 1] };
                let rank = self.groups[i].generators() - out.len() - inc.len();
                let torsion = inc
                    .iter()
                    .filter(|d| !num_traits::One::is_one(*d))
                    .cloned()
                    .collect();
                (n, AbelianInvariants { rank, torsion })
            })
            .collect()
    }

    fn general_cohomology(&self) -> Result<Vec<(i64, AbelianInvariants)>> {
        let mut out = Vec::new();
        for n in self.degrees() {
            let incoming = GroupMorphism {
                source: self.group(n - 1),
                target: self.group(n),
                matrix: self.differential(n - 1),
            };
            let outgoing = GroupMorphism {
                source: self.group(n),
                target: self.group(n + 1),
                matrix: self.differential(n),
            };
            let h = subquotient_homology(&incoming, &outgoing).map_err(|e| match e {
                Error::BrokenComplex(_) => Error::BrokenComplex(n),
                other => other,
            })?;
            out.push((n, h.invariants().clone()));
        }
        Ok(out)
    }
}

/// Which complex a cohomology report was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Singular,
    Cellular,
    /// Any other complex (relative, reduced, S-complex, ...).
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub n: i64,
    #[serde(flatten)]
    pub group: AbelianInvariants,
}

/// Per-degree cohomology, with the complex it was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub method: Method,
    pub degrees: Vec<DegreeReport>,
}

impl CohomologyReport {
    /// The group in degree `n` (zero outside the reported range).
    pub fn at(&self, n: i64) -> AbelianInvariants {
        self.degrees
            .iter()
            .find(|d| d.n == n)
            .map(|d| d.group.clone())
            .unwrap_or_default()
    }

    pub fn nonzero(&self) -> BTreeMap<i64, AbelianInvariants> {
        self.degrees
            .iter()
            .filter(|d| !d.group.is_zero())
            .map(|d| (d.n, d.group.clone()))
            .collect()
    }

    /// Equal invariants in every degree, treating missing degrees as zero.
    pub fn same_groups(&self, other: &CohomologyReport) -> bool {
        self.nonzero() == other.nonzero()
    }

    /// Ranks in degrees `0..len`, handy for short assertions.
    pub fn ranks(&self, len: usize) -> Vec<usize> {
        (0..len as i64).map(|n| self.at(n).rank).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().is_empty()
    }
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .degrees
            .iter()
            .map(|d| format!("H^{} = {}", d.n, d.group))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}
