//! Cellular cochain complexes.
//!
//! For `x` of corank `n`, the group `A_x` is presented by the maximal chains
//! `x = sigma_n < ... < sigma_0` (corank of `sigma_i` equal to `i`) subject
//! to one relation per compatible family: the chains that agree outside a
//! single corank level `j < n` sum to zero. The cellular complex has
//! `C^n = sum_{corank x = n} A_x (x) F(x)` and matrix elements
//! `sigma (x) a |-> x sigma (x) (-1)^n F^y_x(a)` for `x < y` a cover.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianInvariants, FpAbGroup, IntMatrix, SmithPresentation};
use crate::complex::{CochainComplex, CohomologyReport, Method};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::presheaf::Presheaf;
use crate::singular::{
    self, reduced_cohomology, relative_t_complex, t_complex, NerveComplex, Simplex,
};

/// Chains sharing everything except the element of corank `level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleFamily {
    /// The chain with the level removed, bottom first.
    pub anchor: Simplex,
    pub level: usize,
    /// Indices into the owning [`AGroup`]'s chains.
    pub members: Vec<usize>,
}

/// The presented group `A_x`.
#[derive(Debug, Clone)]
pub struct AGroup {
    pub element: usize,
    pub corank: usize,
    /// Maximal chains from `x`, bottom first, lexicographic.
    pub chains: Vec<Simplex>,
    pub families: Vec<CompatibleFamily>,
    pub group: FpAbGroup,
    index: HashMap<Simplex, usize>,
}

impl AGroup {
    pub fn position(&self, chain: &Simplex) -> Option<usize> {
        self.index.get(chain).copied()
    }
}

/// Maximal chains `x = sigma_n < ... < sigma_0` with `corank(sigma_i) = i`.
fn maximal_chains(p: &Poset, x: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    let mut stack = vec![x];
    fn rec(p: &Poset, stack: &mut Vec<usize>, out: &mut Vec<Simplex>) {
        let last = *stack.last().unwrap();
        if p.corank(last).unwrap() == 0 {
            out.push(Simplex(stack.clone()));
            return;
        }
        for &y in p.upper_covers(last) {
            stack.push(y);
            rec(p, stack, out);
            stack.pop();
        }
    }
    rec(p, &mut stack, &mut out);
    out
}

/// `A_x` with its presentation.
pub fn a_group(p: &Poset, x: &str) -> Result<AGroup> {
    p.require_graded()?;
    Ok(a_group_at(p, p.index_of(x)?))
}

fn a_group_at(p: &Poset, x: usize) -> AGroup {
    let n = p.corank(x).unwrap();
    let chains = maximal_chains(p, x);
    let index: HashMap<Simplex, usize> = chains
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut grouped: BTreeMap<(usize, Simplex), Vec<usize>> = BTreeMap::new();
    for level in 0..n {
        // Storage position of the element of corank `level`.
        let pos = n - level;
        for (i, c) in chains.iter().enumerate() {
            let mut anchor = c.0.clone();
            anchor.remove(pos);
            grouped.entry((level, Simplex(anchor))).or_default().push(i);
        }
    }
    let families: Vec<CompatibleFamily> = grouped
        .into_iter()
        .map(|((level, anchor), members)| CompatibleFamily {
            anchor,
            level,
            members,
        })
        .collect();
    let mut rel = IntMatrix::zeros(chains.len(), families.len());
    for (c, fam) in families.iter().enumerate() {
        for &m in &fam.members {
            rel.set(m, c, 1);
        }
    }
    let group = FpAbGroup::new(chains.len(), rel).expect("relation rows match chains");
    AGroup {
        element: x,
        corank: n,
        chains,
        families,
        group,
        index,
    }
}

/// All `A_x`, indexed by element.
pub fn a_groups(p: &Poset) -> Result<Vec<AGroup>> {
    p.require_graded()?;
    Ok((0..p.len()).map(|x| a_group_at(p, x)).collect())
}

/// Verdict of the cellularity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cellularity {
    pub cellular: bool,
    pub witness: Option<Witness>,
}

/// An element whose open interval has reduced cohomology in a degree other
/// than `corank - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub element: String,
    pub degree: i64,
    pub group: AbelianInvariants,
}

/// Checks that every open interval `P_{>x}` has integral reduced
/// cohomology concentrated in degree `corank(x) - 1`.
pub fn is_cellular(p: &Poset) -> Result<Cellularity> {
    p.require_graded()?;
    for x in 0..p.len() {
        let expected = p.corank(x)? as i64 - 1;
        let open = p.open_interval(p.id(x))?;
        let h = reduced_cohomology(&open, 1)?;
        if let Some((&m, g)) = h.nonzero().iter().find(|(&m, _)| m != expected) {
            return Ok(Cellularity {
                cellular: false,
                witness: Some(Witness {
                    element: p.id(x).to_string(),
                    degree: m,
                    group: g.clone(),
                }),
            });
        }
    }
    Ok(Cellularity {
        cellular: true,
        witness: None,
    })
}

/// A cellular cochain complex together with the data it was built from.
#[derive(Debug, Clone)]
pub struct CellularComplex {
    pub poset: Poset,
    /// Elements of each corank, in index order; `cells[n]` spans `C^n`.
    pub cells: Vec<Vec<usize>>,
    pub a_groups: Vec<AGroup>,
    pub complex: CochainComplex,
}

impl CellularComplex {
    pub fn cohomology(&self) -> Result<CohomologyReport> {
        self.complex.cohomology(Method::Cellular)
    }
}

fn check_inputs(p: &Poset, f: &Presheaf) -> Result<()> {
    p.require_graded()?;
    if f.base() != p {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

fn cells_by_corank(p: &Poset) -> Vec<Vec<usize>> {
    if p.is_empty() {
        return Vec::new();
    }
    let top = p.max_corank().unwrap();
    let mut cells = vec![Vec::new(); top + 1];
    for x in 0..p.len() {
        cells[p.corank(x).unwrap()].push(x);
    }
    cells
}

/// `P_{xy}`: chain `j` of `A_y` to chain `x sigma_j` of `A_x`.
fn prepend_matrix(ax: &AGroup, ay: &AGroup) -> IntMatrix {
    let mut m = IntMatrix::zeros(ax.chains.len(), ay.chains.len());
    for (j, sigma) in ay.chains.iter().enumerate() {
        let mut c = vec![ax.element];
        c.extend_from_slice(&sigma.0);
        let i = ax
            .position(&Simplex(c))
            .expect("prepending a cover gives a maximal chain");
        m.set(i, j, 1);
    }
    m
}

fn sign(n: usize) -> BigInt {
    if n.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Assembles `C^*` from per-element groups `G_x`, maps `block(x, y)` between
/// them, and the presheaf.
fn assemble(
    p: &Poset,
    f: &Presheaf,
    cells: &[Vec<usize>],
    group: &dyn Fn(usize) -> FpAbGroup,
    block: &dyn Fn(usize, usize) -> IntMatrix,
) -> CochainComplex {
    if cells.is_empty() {
        return CochainComplex::zero();
    }
    let mut offsets: Vec<BTreeMap<usize, usize>> = Vec::new();
    let mut groups = Vec::new();
    for level in cells {
        let mut off = BTreeMap::new();
        let mut parts = Vec::new();
        let mut total = 0;
        for &x in level {
            off.insert(x, total);
            let g = group(x).tensor_free(f.dim(x));
            total += g.generators();
            parts.push(g);
        }
        offsets.push(off);
        groups.push(FpAbGroup::direct_sum(&parts));
    }
    let mut differentials = Vec::new();
    for n in 1..cells.len() {
        let mut d = IntMatrix::zeros(groups[n].generators(), groups[n - 1].generators());
        for &x in &cells[n] {
            for &y in p.upper_covers(x) {
                let coeff = f.cover_map(x, y).scaled(&sign(n));
                let b = block(x, y).kronecker(&coeff);
                d.add_block(offsets[n][&x], offsets[n - 1][&y], &b);
            }
        }
        differentials.push(d);
    }
    CochainComplex::new(0, groups, differentials).expect("cellular shapes agree")
}

/// The cellular complex on the raw presentations (generators are maximal
/// chains tensored with coordinates of `F(x)`).
pub fn cellular_complex_raw(p: &Poset, f: &Presheaf) -> Result<CellularComplex> {
    check_inputs(p, f)?;
    let ags = a_groups(p)?;
    let cells = cells_by_corank(p);
    let complex = assemble(p, f, &cells, &|x| ags[x].group.clone(), &|x, y| {
        prepend_matrix(&ags[x], &ags[y])
    });
    Ok(CellularComplex {
        poset: p.clone(),
        cells,
        a_groups: ags,
        complex,
    })
}

/// The cellular complex with every `A_x` replaced by its Smith form, so
/// each summand has as few generators as its isomorphism type allows.
pub fn cellular_complex(p: &Poset, f: &Presheaf) -> Result<CellularComplex> {
    check_inputs(p, f)?;
    let ags = a_groups(p)?;
    let pres: Vec<SmithPresentation> = ags.iter().map(|a| a.group.smith_presentation()).collect();
    let cells = cells_by_corank(p);
    let complex = assemble(p, f, &cells, &|x| pres[x].group.clone(), &|x, y| {
        &(&pres[x].to * &prepend_matrix(&ags[x], &ags[y])) * &pres[y].from
    });
    Ok(CellularComplex {
        poset: p.clone(),
        cells,
        a_groups: ags,
        complex,
    })
}

/// `HC^*(P; F)`.
pub fn hc(p: &Poset, f: &Presheaf) -> Result<CohomologyReport> {
    cellular_complex(p, f)?.cohomology()
}

/// The cellular complex in its filtration form: `C^n` is the top cohomology
/// `HS^n(P^n, P^{n-1}; F)` of the relative complex (a cokernel, since the
/// relative complex stops in degree `n`), and the differential is the
/// connecting map of the pair `(P^{n+1}, P^n)` after the inclusion
/// `(P^n, P^{n-1}) -> P^n`.
pub fn filtration_complex(p: &Poset, f: &Presheaf) -> Result<CochainComplex> {
    check_inputs(p, f)?;
    if p.is_empty() {
        return Ok(CochainComplex::zero());
    }
    let top = p.max_corank()? as i64;
    let mut groups = Vec::new();
    let mut rels: Vec<NerveComplex> = Vec::new();
    for n in 0..=top {
        let pn = p.filtration_level(n)?;
        let pm = p.filtration_level(n - 1)?;
        let rel = relative_t_complex(&pn, &pm, &f.restrict_to(&pn)?)?;
        let g = FpAbGroup::new(rel.rank(n), rel.differential(n - 1))?;
        groups.push(g);
        rels.push(rel);
    }
    let mut differentials = Vec::new();
    for n in 0..top {
        let up = p.filtration_level(n + 1)?;
        let whole = t_complex(&up, &f.restrict_to(&up)?)?;
        let src = &rels[n as usize];
        let dst = &rels[n as usize + 1];
        let d = whole.differential(n);
        let mut row_map: Vec<Option<usize>> = vec![None; whole.rank(n + 1)];
        for tau in dst.simplices(n + 1) {
            let rows = dst.coordinates(tau).unwrap();
            let to = whole.coordinates(&relabel(tau, &dst.poset, &up)).unwrap();
            for (r, rr) in rows.zip(to) {
                row_map[rr] = Some(r);
            }
        }
        let mut m = IntMatrix::zeros(dst.rank(n + 1), src.rank(n));
        for sigma in src.simplices(n) {
            let cols = src.coordinates(sigma).unwrap();
            let from = whole.coordinates(&relabel(sigma, &src.poset, &up)).unwrap();
            for (c, cc) in cols.zip(from) {
                for (rr, r) in row_map.iter().enumerate() {
                    if let Some(r) = r {
                        m.set(*r, c, d.get(rr, cc).clone());
                    }
                }
            }
        }
        differentials.push(m);
    }
    CochainComplex::new(0, groups, differentials)
}

fn relabel(s: &Simplex, from: &Poset, to: &Poset) -> Simplex {
    Simplex(
        s.0.iter()
            .map(|&x| to.index_of(from.id(x)).unwrap())
            .collect(),
    )
}

/// Result of the epsilon-decomposition check in one filtration degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonReport {
    pub holds: bool,
    pub failure: Option<String>,
}

/// Checks, for filtration degree `n`, that
/// `HS^*(P^n, P^{n-1}; F)` is the direct sum over `corank x = n` of
/// `HS^*(P_{>=x}, P_{>x}; F)`, and that for each such `x`
/// `HS^*(P_{>=x}, P_{>x}; F) = HS^*(P_{>=x}, P_{>x}; Delta F(x))
///   = reduced HS^{*-1}(P_{>x}; Delta F(x))`.
pub fn epsilon_check(p: &Poset, f: &Presheaf, n: i64) -> Result<EpsilonReport> {
    check_inputs(p, f)?;
    let pn = p.filtration_level(n)?;
    let pm = p.filtration_level(n - 1)?;
    let whole = relative_t_complex(&pn, &pm, &f.restrict_to(&pn)?)?.cohomology()?;

    let mut total: BTreeMap<i64, Vec<AbelianInvariants>> = BTreeMap::new();
    for x in 0..p.len() {
        if p.corank(x)? as i64 != n {
            continue;
        }
        let id = p.id(x);
        let closed = p.closed_interval(id)?;
        let open = p.open_interval(id)?;
        let fx = f.restrict_to(&closed)?;
        let pair = relative_t_complex(&closed, &open, &fx)?.cohomology()?;
        let constant = Presheaf::constant(&closed, f.dim(x));
        let pair_const = relative_t_complex(&closed, &open, &constant)?.cohomology()?;
        let reduced = reduced_cohomology(&open, f.dim(x))?;
        if !pair.same_groups(&pair_const) {
            return Ok(EpsilonReport {
                holds: false,
                failure: Some(format!("{id}: coefficients F and constant F(x) differ")),
            });
        }
        let shifted = CohomologyReport {
            method: reduced.method,
            degrees: reduced
                .degrees
                .iter()
                .map(|d| crate::complex::DegreeReport {
                    n: d.n + 1,
                    group: d.group.clone(),
                })
                .collect(),
        };
        if !pair_const.same_groups(&shifted) {
            return Ok(EpsilonReport {
                holds: false,
                failure: Some(format!("{id}: pair and shifted reduced cohomology differ")),
            });
        }
        for (m, g) in pair.nonzero() {
            total.entry(m).or_default().push(g);
        }
    }
    for m in whole.nonzero().keys().chain(total.keys()) {
        let parts = total.get(m).cloned().unwrap_or_default();
        if whole.at(*m) != direct_sum_invariants(&parts) {
            return Ok(EpsilonReport {
                holds: false,
                failure: Some(format!(
                    "degree {m}: filtration pair differs from the sum over cells"
                )),
            });
        }
    }
    Ok(EpsilonReport {
        holds: true,
        failure: None,
    })
}

/// Invariants of a direct sum of groups.
pub fn direct_sum_invariants(parts: &[AbelianInvariants]) -> AbelianInvariants {
    let groups: Vec<FpAbGroup> = parts.iter().map(FpAbGroup::from_invariants).collect();
    FpAbGroup::direct_sum(&groups).invariants().clone()
}

/// One degree of a comparison between the two cohomologies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub n: i64,
    pub hs: AbelianInvariants,
    pub hc: AbelianInvariants,
    pub isomorphic: bool,
}

/// `HS` against `HC`, with the cellularity verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub cellular: bool,
    pub witness: Option<Witness>,
    pub degrees: Vec<DegreeComparison>,
    /// False only when the poset is cellular and some degree differs.
    pub implication_holds: bool,
}

impl ComparisonReport {
    pub fn all_isomorphic(&self) -> bool {
        self.degrees.iter().all(|d| d.isomorphic)
    }
}

pub fn compare(p: &Poset, f: &Presheaf) -> Result<ComparisonReport> {
    check_inputs(p, f)?;
    let verdict = is_cellular(p)?;
    let hs = singular::cohomology(p, f)?;
    let hcr = hc(p, f)?;
    let top = hs
        .degrees
        .iter()
        .chain(&hcr.degrees)
        .map(|d| d.n)
        .max()
        .unwrap_or(-1);
    let degrees: Vec<DegreeComparison> = (0..=top)
        .map(|n| {
            let (a, b) = (hs.at(n), hcr.at(n));
            DegreeComparison {
                n,
                isomorphic: a == b,
                hs: a,
                hc: b,
            }
        })
        .collect();
    let all = degrees.iter().all(|d| d.isomorphic);
    Ok(ComparisonReport {
        cellular: verdict.cellular,
        witness: verdict.witness,
        degrees,
        implication_holds: !verdict.cellular || all,
    })
}

/// Incidence signs `[x, y]` for the covers of a cell-like poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    pub poset: Poset,
    /// Chosen generator of each `A_x`.
    pub generators: Vec<Simplex>,
    pub signs: BTreeMap<(usize, usize), i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignEntry {
    pub lower: String,
    pub upper: String,
    pub sign: i8,
}

/// Diamond statistics for the sign relation `[x,y][y,z] = -[x,y'][y',z]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondCheck {
    pub diamonds: usize,
    pub violations: usize,
}

impl SignTable {
    pub fn sign(&self, x: usize, y: usize) -> Option<i8> {
        self.signs.get(&(x, y)).copied()
    }

    pub fn entries(&self) -> Vec<SignEntry> {
        self.signs
            .iter()
            .map(|(&(x, y), &s)| SignEntry {
                lower: self.poset.id(x).to_string(),
                upper: self.poset.id(y).to_string(),
                sign: s,
            })
            .collect()
    }

    pub fn check_diamonds(&self) -> DiamondCheck {
        let p = &self.poset;
        let mut out = DiamondCheck {
            diamonds: 0,
            violations: 0,
        };
        for x in 0..p.len() {
            let mut tops: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &y in p.upper_covers(x) {
                for &z in p.upper_covers(y) {
                    tops.entry(z).or_default().push(y);
                }
            }
            for (z, mids) in tops {
                if let [y, y2] = mids[..] {
                    out.diamonds += 1;
                    let left = self.signs[&(x, y)] * self.signs[&(y, z)];
                    let right = self.signs[&(x, y2)] * self.signs[&(y2, z)];
                    if left != -right {
                        out.violations += 1;
                    }
                }
            }
        }
        out
    }
}

/// Computes `[x, y]` from `x sigma_y = [x, y] sigma_x` in `A_x`, where
/// `sigma_x` is the lexicographically least maximal chain unless `chosen`
/// supplies one.
pub fn cell_signs(p: &Poset, chosen: Option<&dyn Fn(usize) -> Simplex>) -> Result<SignTable> {
    p.require_graded()?;
    if let Some((x, y)) = p.diamond_failure() {
        return Err(Error::NotCellLike {
            element: p.id(x).to_string(),
            reason: format!("the interval up to `{}` is not a diamond", p.id(y)),
        });
    }
    let ags = a_groups(p)?;
    let mut phi: Vec<Vec<BigInt>> = Vec::with_capacity(p.len());
    let mut generators = Vec::with_capacity(p.len());
    for a in &ags {
        let not_cell = |reason: String| Error::NotCellLike {
            element: p.id(a.element).to_string(),
            reason,
        };
        if a.group.invariants() != &AbelianInvariants::free(1) {
            return Err(not_cell(format!(
                "A_x is {} rather than Z",
                a.group.invariants()
            )));
        }
        let sp = a.group.smith_presentation();
        let gen = match chosen {
            Some(choose) => choose(a.element),
            None => a.chains[0].clone(),
        };
        let pos = a
            .position(&gen)
            .ok_or_else(|| not_cell("chosen generator is not a maximal chain".into()))?;
        let row: Vec<BigInt> = sp.to.row(0).to_vec();
        let s = row[pos].clone();
        if !s.abs().is_one() {
            return Err(not_cell("chosen chain does not generate A_x".into()));
        }
        phi.push(row.into_iter().map(|v| v * &s).collect());
        generators.push(gen);
    }
    let mut signs = BTreeMap::new();
    for (x, y) in p.cover_pairs() {
        let mut c = vec![x];
        c.extend_from_slice(&generators[y].0);
        let v = &phi[x][ags[x].position(&Simplex(c)).unwrap()];
        let s = v
            .to_i8()
            .filter(|s| s.abs() == 1)
            .ok_or_else(|| Error::NotCellLike {
                element: p.id(x).to_string(),
                reason: format!("pre-appending gives {v} times the generator"),
            })?;
        signs.insert((x, y), s);
    }
    Ok(SignTable {
        poset: p.clone(),
        generators,
        signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_circle() -> Poset {
        // Two vertices u, v and two edges e, f; edges sit below vertices.
        Poset::from_covers(
            &["e", "f", "u", "v"],
            &[("e", "u"), ("e", "v"), ("f", "u"), ("f", "v")],
        )
        .unwrap()
    }

    #[test]
    fn edge_group_is_z() {
        let p = square_circle();
        let a = a_group(&p, "e").unwrap();
        assert_eq!(a.chains.len(), 2);
        assert_eq!(a.families.len(), 1);
        assert_eq!(a.group.invariants(), &AbelianInvariants::free(1));
    }

    #[test]
    fn circle_cellular_cohomology() {
        let p = square_circle();
        let f = Presheaf::constant(&p, 1);
        let c = cellular_complex_raw(&p, &f).unwrap();
        c.complex.check_square_zero().unwrap();
        assert_eq!(c.complex.generators(0), 2);
        assert_eq!(c.complex.generators(1), 4);
        let h = c.cohomology().unwrap();
        assert_eq!(h.ranks(2), vec![1, 1]);
        assert!(is_cellular(&p).unwrap().cellular);
    }

    #[test]
    fn signs_on_circle() {
        let p = square_circle();
        let t = cell_signs(&p, None).unwrap();
        assert_eq!(t.signs.len(), 4);
        let d = t.check_diamonds();
        assert_eq!((d.diamonds, d.violations), (0, 0));
    }

    #[test]
    fn zero_presheaf_gives_zero_complex() {
        let p = square_circle();
        let c = cellular_complex(&p, &Presheaf::zero(&p)).unwrap();
        assert!(c.complex.is_zero_complex());
    }
}
