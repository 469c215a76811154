//! Nerve complexes of a poset with presheaf coefficients.
//!
//! A simplex `sigma_n <= ... <= sigma_0` is stored bottom first, so the
//! element with index `i` sits at position `n - i`. For a cochain `s` of
//! degree `n - 1` and an `n`-simplex `sigma`,
//!
//! `(ds).sigma = sum_{i<n} (-1)^i s.d_i(sigma)
//!               + (-1)^n F^{sigma_{n-1}}_{sigma_n} (s.d_n(sigma))`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{kernel_lattice, FpAbGroup, IntMatrix, Lattice};
use crate::complex::{CochainComplex, CohomologyReport, Method};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::presheaf::{Presheaf, PresheafMorphism};

/// A chain `sigma_n <= ... <= sigma_0` of element indices, bottom first.
/// The empty chain is the basepoint of degree -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(pub Vec<usize>);

impl Simplex {
    pub fn basepoint() -> Self {
        Simplex(Vec::new())
    }

    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == w[1])
    }

    /// `sigma_n`, the least element.
    pub fn bottom(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// `sigma_i`.
    pub fn vertex(&self, i: usize) -> Result<usize> {
        let n = self.0.len();
        if i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: n.saturating_sub(1),
            });
        }
        Ok(self.0[n - 1 - i])
    }

    /// `d_i`: removes `sigma_i`.
    pub fn face(&self, i: usize) -> Result<Simplex> {
        let n = self.0.len();
        if n == 0 || i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: n.saturating_sub(1),
            });
        }
        let mut v = self.0.clone();
        v.remove(n - 1 - i);
        Ok(Simplex(v))
    }

    /// `s_i`: repeats `sigma_i`.
    pub fn degeneracy(&self, i: usize) -> Result<Simplex> {
        let n = self.0.len();
        if n == 0 || i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: n.saturating_sub(1),
            });
        }
        let mut v = self.0.clone();
        v.insert(n - 1 - i, v[n - 1 - i]);
        Ok(Simplex(v))
    }

    pub fn is_chain_in(&self, p: &Poset) -> bool {
        self.0.windows(2).all(|w| p.leq(w[0], w[1]))
    }

    pub fn labels(&self, p: &Poset) -> Vec<String> {
        self.0.iter().map(|&x| p.id(x).to_string()).collect()
    }

    pub fn display<'a>(&'a self, p: &'a Poset) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Simplex, &'a Poset);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0 .0.is_empty() {
                    return write!(f, "*");
                }
                write!(f, "{}", self.0.labels(self.1).join("<="))
            }
        }
        D(self, p)
    }
}

/// Strictly increasing chains of `n + 1` elements, lexicographic. Degree -1
/// gives the basepoint.
pub fn nondegenerate_simplices(p: &Poset, n: i64) -> Vec<Simplex> {
    chains(p, n, true)
}

/// Weakly increasing chains of `n + 1` elements, lexicographic.
pub fn all_simplices(p: &Poset, n: i64) -> Vec<Simplex> {
    chains(p, n, false)
}

fn chains(p: &Poset, n: i64, strict: bool) -> Vec<Simplex> {
    if n < -1 {
        return Vec::new();
    }
    if n == -1 {
        return vec![Simplex::basepoint()];
    }
    let len = (n + 1) as usize;
    let above: Vec<Vec<usize>> = (0..p.len())
        .map(|x| {
            (0..p.len())
                .filter(|&y| if strict { p.lt(x, y) } else { p.leq(x, y) })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(len);
    fn rec(above: &[Vec<usize>], len: usize, stack: &mut Vec<usize>, out: &mut Vec<Simplex>) {
        if stack.len() == len {
            out.push(Simplex(stack.clone()));
            return;
        }
        let last = *stack.last().unwrap();
        for &y in &above[last] {
            stack.push(y);
            rec(above, len, stack, out);
            stack.pop();
        }
    }
    for x in 0..p.len() {
        stack.push(x);
        rec(&above, len, &mut stack, &mut out);
        stack.pop();
    }
    out
}

/// Length of the longest strict chain (number of covers along it), or -1
/// for the empty poset.
pub fn chain_length(p: &Poset) -> i64 {
    let mut best = vec![0i64; p.len()];
    let mut order = p.linear_extension();
    order.reverse();
    for &x in &order {
        best[x] = p
            .upper_covers(x)
            .iter()
            .map(|&y| best[y] + 1)
            .max()
            .unwrap_or(0);
    }
    best.into_iter().max().unwrap_or(-1)
}

/// A cochain complex on simplices of a nerve, with its generator basis.
///
/// In each degree the generators are pairs (simplex, coordinate of
/// `F(sigma_n)`), ordered lexicographically.
#[derive(Debug, Clone)]
pub struct NerveComplex {
    pub poset: Poset,
    pub presheaf: Presheaf,
    pub complex: CochainComplex,
    simplices: Vec<Vec<Simplex>>,
    offsets: Vec<Vec<usize>>,
    lookup: Vec<HashMap<Simplex, usize>>,
}

impl NerveComplex {
    /// Builds the complex on the given simplices per degree (starting at
    /// `min_degree`), with the coefficient at the basepoint taken from
    /// `augmentation` (the constant value `Z^k` of a reduced complex).
    fn build(
        p: &Poset,
        f: &Presheaf,
        min_degree: i64,
        simplices: Vec<Vec<Simplex>>,
        augmentation: Option<usize>,
    ) -> NerveComplex {
        let dim_of = |s: &Simplex| match s.bottom() {
            Some(b) => f.dim(b),
            None => augmentation.unwrap_or(0),
        };
        let mut offsets = Vec::with_capacity(simplices.len());
        let mut lookup = Vec::with_capacity(simplices.len());
        let mut groups = Vec::with_capacity(simplices.len());
        for list in &simplices {
            let mut off = Vec::with_capacity(list.len() + 1);
            let mut total = 0;
            let mut map = HashMap::with_capacity(list.len());
            for (i, s) in list.iter().enumerate() {
                off.push(total);
                total += dim_of(s);
                map.insert(s.clone(), i);
            }
            off.push(total);
            offsets.push(off);
            lookup.push(map);
            groups.push(FpAbGroup::free(total));
        }
        let mut differentials = Vec::new();
        for k in 1..simplices.len() {
            let rows = *offsets[k].last().unwrap();
            let cols = *offsets[k - 1].last().unwrap();
            let mut d = IntMatrix::zeros(rows, cols);
            for (si, sigma) in simplices[k].iter().enumerate() {
                let r0 = offsets[k][si];
                let n = sigma.degree();
                if n == 0 {
                    // Augmentation: d^{-1} a . (x) = a.
                    if let Some(&c) = lookup[k - 1].get(&Simplex::basepoint()) {
                        let block = IntMatrix::identity(dim_of(sigma));
                        d.add_block(r0, offsets[k - 1][c], &block);
                    }
                    continue;
                }
                for i in 0..=n as usize {
                    let face = sigma.face(i).unwrap();
                    let Some(&c) = lookup[k - 1].get(&face) else {
                        continue;
                    };
                    let c0 = offsets[k - 1][c];
                    let sign = if i % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                    let block = if i < n as usize {
                        IntMatrix::scalar(dim_of(sigma), sign)
                    } else {
                        let lower = sigma.0[0];
                        let upper = sigma.0[1];
                        f.res(lower, upper).scaled(&sign)
                    };
                    d.add_block(r0, c0, &block);
                }
            }
            differentials.push(d);
        }
        let complex = if simplices.is_empty() {
            CochainComplex::zero()
        } else {
            CochainComplex::new(min_degree, groups, differentials).expect("shapes are consistent")
        };
        NerveComplex {
            poset: p.clone(),
            presheaf: f.clone(),
            complex,
            simplices,
            offsets,
            lookup,
        }
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let i = n - self.complex.min_degree();
        (i >= 0 && (i as usize) < self.simplices.len()).then_some(i as usize)
    }

    /// Generating simplices in degree `n`.
    pub fn simplices(&self, n: i64) -> &[Simplex] {
        self.slot(n).map_or(&[], |i| &self.simplices[i])
    }

    /// Position of `sigma` among the degree generators, if it is one.
    pub fn position(&self, sigma: &Simplex) -> Option<usize> {
        self.slot(sigma.degree())
            .and_then(|i| self.lookup[i].get(sigma).copied())
    }

    /// Coordinate range of `sigma`'s value inside a cochain.
    pub fn coordinates(&self, sigma: &Simplex) -> Option<std::ops::Range<usize>> {
        let i = self.slot(sigma.degree())?;
        let k = *self.lookup[i].get(sigma)?;
        Some(self.offsets[i][k]..self.offsets[i][k + 1])
    }

    pub fn rank(&self, n: i64) -> usize {
        self.complex.generators(n)
    }

    pub fn differential(&self, n: i64) -> IntMatrix {
        self.complex.differential(n)
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        self.complex.cohomology(Method::Singular)
    }
}

fn check_base(p: &Poset, f: &Presheaf) -> Result<()> {
    if f.base() != p {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// The complex of non-degenerate simplices.
pub fn t_complex(p: &Poset, f: &Presheaf) -> Result<NerveComplex> {
    check_base(p, f)?;
    let top = chain_length(p);
    let simplices = (0..=top).map(|n| nondegenerate_simplices(p, n)).collect();
    Ok(NerveComplex::build(p, f, 0, simplices, None))
}

/// The complex of all simplices, degenerate ones included, through
/// `max_degree`; the top degree has no outgoing differential and is left
/// out of cohomology reports.
pub fn s_complex(p: &Poset, f: &Presheaf, max_degree: i64) -> Result<NerveComplex> {
    check_base(p, f)?;
    let top = chain_length(p);
    if max_degree < top + 1 {
        return Err(Error::OutOfRange(format!(
            "degree bound {max_degree} is below chain length {top} plus one"
        )));
    }
    if p.is_empty() {
        return Ok(NerveComplex::build(p, f, 0, Vec::new(), None));
    }
    let simplices = (0..=max_degree).map(|n| all_simplices(p, n)).collect();
    let mut c = NerveComplex::build(p, f, 0, simplices, None);
    c.complex = c.complex.with_truncation(true);
    Ok(c)
}

/// Cochains on `P` vanishing on every simplex of the subposet `Q`.
pub fn relative_t_complex(p: &Poset, q: &Poset, f: &Presheaf) -> Result<NerveComplex> {
    check_base(p, f)?;
    if !p.is_induced_subposet(q) {
        return Err(Error::NotInduced(
            "relative complex needs an induced subposet".into(),
        ));
    }
    let in_q: Vec<bool> = p.ids().iter().map(|id| q.contains(id)).collect();
    let top = chain_length(p);
    let simplices = (0..=top)
        .map(|n| {
            nondegenerate_simplices(p, n)
                .into_iter()
                .filter(|s| !s.0.iter().all(|&x| in_q[x]))
                .collect()
        })
        .collect();
    Ok(NerveComplex::build(p, f, 0, simplices, None))
}

/// The augmented complex `Z^k -> T^0 -> T^1 -> ...` with constant
/// coefficients `Z^k`, the augmentation injecting diagonally.
pub fn reduced_t_complex(p: &Poset, k: usize) -> NerveComplex {
    let f = Presheaf::constant(p, k);
    let top = chain_length(p);
    let simplices = (-1..=top).map(|n| nondegenerate_simplices(p, n)).collect();
    NerveComplex::build(p, &f, -1, simplices, Some(k))
}

/// `HS^*(P; F)` from the complex of non-degenerate simplices.
pub fn cohomology(p: &Poset, f: &Presheaf) -> Result<CohomologyReport> {
    t_complex(p, f)?.cohomology()
}

/// Reduced cohomology with coefficients `Z^k`, from degree -1.
pub fn reduced_cohomology(p: &Poset, k: usize) -> Result<CohomologyReport> {
    reduced_t_complex(p, k).complex.cohomology(Method::Other)
}

/// `lim F`: tuples `(s_x)` with `F^y_x s_y = s_x` on every cover.
/// Returns the kernel basis (columns, in the coordinates of `T^0`).
pub fn limit(p: &Poset, f: &Presheaf) -> Result<IntMatrix> {
    check_base(p, f)?;
    let mut off = vec![0];
    for x in 0..p.len() {
        off.push(off[x] + f.dim(x));
    }
    let covers = p.cover_pairs();
    let rows: usize = covers.iter().map(|&(x, _)| f.dim(x)).sum();
    let mut m = IntMatrix::zeros(rows, off[p.len()]);
    let mut r0 = 0;
    for &(x, y) in &covers {
        m.add_block(r0, off[x], &IntMatrix::identity(f.dim(x)));
        m.add_block(r0, off[y], &f.cover_map(x, y).neg());
        r0 += f.dim(x);
    }
    Ok(kernel_lattice(&m))
}

/// Order-preserving map between finite posets, by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetMap {
    pub source: Poset,
    pub target: Poset,
    pub map: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: &Poset, target: &Poset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::Shape(
                "map must send every source element into the target".into(),
            ));
        }
        for (a, b) in source.cover_pairs() {
            if !target.leq(map[a], map[b]) {
                return Err(Error::NotMonotone(format!(
                    "{} < {} but {} is not below {}",
                    source.id(a),
                    source.id(b),
                    target.id(map[a]),
                    target.id(map[b])
                )));
            }
        }
        Ok(PosetMap {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    /// Builds a map from identifier pairs.
    pub fn from_ids<S: AsRef<str>>(
        source: &Poset,
        target: &Poset,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            map[source.index_of(a.as_ref())?] = target.index_of(b.as_ref())?;
        }
        if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Malformed(format!("no image for `{}`", source.id(i))));
        }
        Self::new(source, target, map)
    }

    pub fn identity(p: &Poset) -> Self {
        PosetMap {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    /// Inclusion of an induced subposet (matched by identifier).
    pub fn inclusion(sub: &Poset, ambient: &Poset) -> Result<Self> {
        let map = sub
            .ids()
            .iter()
            .map(|s| ambient.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sub, ambient, map)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &PosetMap) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::BaseMismatch);
        }
        Ok(PosetMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        Simplex(s.0.iter().map(|&x| self.map[x]).collect())
    }

    fn preimage(&self, s: &Simplex) -> Option<Simplex> {
        let mut inv = vec![None; self.target.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = Some(a);
        }
        let pre = Simplex(s.0.iter().map(|&x| inv[x]).collect::<Option<Vec<_>>>()?);
        pre.is_chain_in(&self.source).then_some(pre)
    }
}

/// Matrix of `f^*: T^n(P; F) -> T^n(Q; f^*F)`, `(f^*s).sigma = s.(f sigma)`,
/// zero where `f sigma` is degenerate.
pub fn pullback_matrix(
    f: &PosetMap,
    over_p: &NerveComplex,
    over_q: &NerveComplex,
    n: i64,
) -> IntMatrix {
    let mut m = IntMatrix::zeros(over_q.rank(n), over_p.rank(n));
    for sigma in over_q.simplices(n) {
        let image = f.apply(sigma);
        if image.is_degenerate() {
            continue;
        }
        let (Some(rows), Some(cols)) = (over_q.coordinates(sigma), over_p.coordinates(&image))
        else {
            continue;
        };
        m.add_block(rows.start, cols.start, &IntMatrix::identity(rows.len()));
    }
    m
}

/// Matrix of `f_*: T^n(Q; f^*F) -> T^n(P; F)` for injective `f`:
/// `(f_*s).sigma = s.(f^{-1} sigma)`, zero when the preimage is empty.
pub fn pushforward_matrix(
    f: &PosetMap,
    over_q: &NerveComplex,
    over_p: &NerveComplex,
    n: i64,
) -> Result<IntMatrix> {
    if !f.is_injective() {
        let dup = (0..f.target.len())
            .find(|&y| f.map.iter().filter(|&&v| v == y).count() > 1)
            .unwrap();
        return Err(Error::NotInjective(f.target.id(dup).to_string()));
    }
    let mut m = IntMatrix::zeros(over_p.rank(n), over_q.rank(n));
    for sigma in over_p.simplices(n) {
        let Some(pre) = f.preimage(sigma) else {
            continue;
        };
        let (Some(rows), Some(cols)) = (over_p.coordinates(sigma), over_q.coordinates(&pre)) else {
            continue;
        };
        m.add_block(rows.start, cols.start, &IntMatrix::identity(rows.len()));
    }
    Ok(m)
}

/// Applies `f^*` to a cochain of degree `n`.
pub fn pullback(
    f: &PosetMap,
    over_p: &NerveComplex,
    over_q: &NerveComplex,
    n: i64,
    s: &[BigInt],
) -> Vec<BigInt> {
    pullback_matrix(f, over_p, over_q, n).mul_vec(s)
}

/// Applies `f_*` to a cochain of degree `n`.
pub fn pushforward(
    f: &PosetMap,
    over_q: &NerveComplex,
    over_p: &NerveComplex,
    n: i64,
    s: &[BigInt],
) -> Result<Vec<BigInt>> {
    Ok(pushforward_matrix(f, over_q, over_p, n)?.mul_vec(s))
}

/// Degree-wise matrices of `kappa_*`, `(kappa_* s).sigma = kappa_{sigma_n}(s.sigma)`,
/// between the complexes of non-degenerate simplices.
pub fn morphism_induced(kappa: &PresheafMorphism) -> Result<Vec<IntMatrix>> {
    let p = kappa.source.base();
    let src = t_complex(p, &kappa.source)?;
    let tgt = t_complex(p, &kappa.target)?;
    Ok(induced_matrices(kappa, &src, &tgt))
}

pub fn induced_matrices(
    kappa: &PresheafMorphism,
    src: &NerveComplex,
    tgt: &NerveComplex,
) -> Vec<IntMatrix> {
    src.complex
        .degrees()
        .map(|n| {
            let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
            for sigma in src.simplices(n) {
                let b = sigma.bottom().unwrap();
                let rows = tgt.coordinates(sigma).unwrap();
                let cols = src.coordinates(sigma).unwrap();
                m.add_block(rows.start, cols.start, &kappa.components[b]);
            }
            m
        })
        .collect()
}

/// True when `maps[n]` commutes with the differentials of the two complexes.
pub fn is_chain_map(
    src: &CochainComplex,
    tgt: &CochainComplex,
    maps: &dyn Fn(i64) -> IntMatrix,
) -> bool {
    let lo = src.min_degree().min(tgt.min_degree());
    let hi = src
        .max_degree()
        .unwrap_or(lo)
        .max(tgt.max_degree().unwrap_or(lo));
    (lo..=hi).all(|n| {
        let left = &tgt.differential(n) * &maps(n);
        let right = &maps(n + 1) * &src.differential(n);
        left == right
    })
}

/// Outcome of checking the long exact sequence of a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesReport {
    pub exact: bool,
    /// First failing term, e.g. `"H^1(P)"`.
    pub failure: Option<String>,
}

/// Builds `0 -> T(P,Q) -> T(P) -> T(Q) -> 0` and checks exactness of its
/// long exact sequence at every term. The connecting map lifts a cocycle of
/// `Q` by extension by zero, applies `d` on `P`, and lands in the relative
/// complex.
pub fn pair_les_check(p: &Poset, q: &Poset, f: &Presheaf) -> Result<LesReport> {
    let rel = relative_t_complex(p, q, f)?;
    let whole = t_complex(p, f)?;
    let fq = f.restrict_to(q)?;
    let sub = t_complex(q, &fq)?;
    let incl = PosetMap::inclusion(q, p)?;

    let top = chain_length(p).max(0);
    let iota = |n: i64| selection(&rel, &whole, n);
    let pi = |n: i64| pullback_matrix(&incl, &whole, &sub, n);
    let extend =
        |n: i64| pushforward_matrix(&incl, &sub, &whole, n).expect("inclusions are injective");
    let beta = |n: i64| {
        &(&selection(&rel, &whole, n + 1).transpose() * &whole.differential(n)) * &extend(n)
    };

    let a = &rel.complex;
    let b = &whole.complex;
    let c = &sub.complex;
    for n in 0..=top {
        if !exact_at((b, n), (a, n, &iota(n)), (c, n, &pi(n))) {
            return Ok(fail(format!("H^{n}(P)")));
        }
        if !exact_at((c, n), (b, n, &pi(n)), (a, n + 1, &beta(n))) {
            return Ok(fail(format!("H^{n}(Q)")));
        }
        let incoming = if n == 0 {
            IntMatrix::zeros(a.generators(0), 0)
        } else {
            beta(n - 1)
        };
        if !exact_at((a, n), (c, n - 1, &incoming), (b, n, &iota(n))) {
            return Ok(fail(format!("H^{n}(P,Q)")));
        }
    }
    Ok(LesReport {
        exact: true,
        failure: None,
    })
}

fn fail(at: String) -> LesReport {
    LesReport {
        exact: false,
        failure: Some(at),
    }
}

/// Inclusion of relative generators into the generators of `P` (a 0/1 matrix).
fn selection(rel: &NerveComplex, whole: &NerveComplex, n: i64) -> IntMatrix {
    let mut m = IntMatrix::zeros(whole.rank(n), rel.rank(n));
    for sigma in rel.simplices(n) {
        let rows = whole.coordinates(sigma).unwrap();
        let cols = rel.coordinates(sigma).unwrap();
        m.add_block(rows.start, cols.start, &IntMatrix::identity(rows.len()));
    }
    m
}

fn cocycles(c: &CochainComplex, n: i64) -> IntMatrix {
    kernel_lattice(&c.differential(n))
}

type Term<'a> = (&'a CochainComplex, i64);
type Arrow<'a> = (&'a CochainComplex, i64, &'a IntMatrix);

/// Exactness of `H^j(Y) --phi--> H^n(X) --psi--> H^k(W)` at the middle:
/// `{z in Z_X : psi z in B_W}` must equal `phi(Z_Y) + B_X` as lattices.
fn exact_at(middle: Term<'_>, incoming: Arrow<'_>, outgoing: Arrow<'_>) -> bool {
    let (x, n) = middle;
    let (y, j, phi) = incoming;
    let (w, k, psi) = outgoing;
    let zx = cocycles(x, n);
    let stacked = (psi * &zx).hstack(&w.differential(k - 1).neg());
    let lift = kernel_lattice(&stacked);
    let top: Vec<usize> = (0..zx.cols()).collect();
    let kernel = Lattice::from_columns(&(&zx * &lift.select_rows(&top)));

    let image = (phi * &cocycles(y, j)).hstack(&x.differential(n - 1));
    kernel == Lattice::from_columns(&image)
}

/// `true` when every entry of the vector is zero.
pub fn is_zero_cochain(s: &[BigInt]) -> bool {
    s.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::AbelianInvariants;

    fn chain2() -> Poset {
        Poset::from_covers(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn hexagon() -> Poset {
        Poset::from_covers(
            &["1", "2", "3", "12", "13", "23"],
            &[
                ("12", "1"),
                ("12", "2"),
                ("13", "1"),
                ("13", "3"),
                ("23", "2"),
                ("23", "3"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn faces_follow_index_convention() {
        let s = Simplex(vec![0, 1]);
        assert_eq!(s.face(0).unwrap(), Simplex(vec![0]));
        assert_eq!(s.face(1).unwrap(), Simplex(vec![1]));
        assert_eq!(Simplex(vec![0]).degeneracy(0).unwrap(), Simplex(vec![0, 0]));
        assert!(s.face(2).is_err());
    }

    #[test]
    fn simplicial_identities() {
        let s = Simplex(vec![0, 1, 2, 3, 4]);
        for j in 0..5 {
            for i in 0..j {
                let a = s.face(j).unwrap().face(i).unwrap();
                let b = s.face(i).unwrap().face(j - 1).unwrap();
                assert_eq!(a, b, "d_{i} d_{j}");
            }
        }
    }

    #[test]
    fn counts() {
        let p = chain2();
        assert_eq!(nondegenerate_simplices(&p, 1), vec![Simplex(vec![0, 1])]);
        assert_eq!(nondegenerate_simplices(&p, -1), vec![Simplex::basepoint()]);
        let h = hexagon();
        assert_eq!(nondegenerate_simplices(&h, 0).len(), 6);
        assert_eq!(nondegenerate_simplices(&h, 1).len(), 6);
        assert!(nondegenerate_simplices(&h, 2).is_empty());
        assert_eq!(all_simplices(&p, 1).len(), 3);
    }

    #[test]
    fn two_chain_differential() {
        let p = chain2();
        let f = Presheaf::constant(&p, 1);
        let t = t_complex(&p, &f).unwrap();
        assert_eq!(t.rank(0), 2);
        assert_eq!(t.rank(1), 1);
        assert_eq!(t.differential(0), IntMatrix::from_i64(&[&[1, -1]]));
        let h = t.cohomology().unwrap();
        assert_eq!(h.at(0), AbelianInvariants::free(1));
        assert!(h.at(1).is_zero());
    }

    #[test]
    fn empty_and_point() {
        let e = Poset::empty();
        let t = t_complex(&e, &Presheaf::constant(&e, 1)).unwrap();
        assert!(t.complex.is_zero_complex());
        let r = reduced_cohomology(&e, 1).unwrap();
        assert_eq!(r.at(-1), AbelianInvariants::free(1));

        let pt = Poset::from_covers::<&str>(&["x"], &[]).unwrap();
        let f = Presheaf::constant(&pt, 1);
        assert_eq!(cohomology(&pt, &f).unwrap().ranks(2), vec![1, 0]);
        assert!(reduced_cohomology(&pt, 1).unwrap().is_zero());
        let s = s_complex(&pt, &f, 2).unwrap();
        assert_eq!((s.rank(0), s.rank(1), s.rank(2)), (1, 1, 1));
    }

    #[test]
    fn hexagon_is_a_circle() {
        let h = hexagon();
        let f = Presheaf::constant(&h, 1);
        assert_eq!(cohomology(&h, &f).unwrap().ranks(3), vec![1, 1, 0]);
        let r = reduced_cohomology(&h, 1).unwrap();
        assert!(r.at(0).is_zero());
        assert_eq!(r.at(1), AbelianInvariants::free(1));
        let s = s_complex(&h, &f, 3).unwrap().cohomology().unwrap();
        assert_eq!(s.ranks(3), vec![1, 1, 0]);
    }

    #[test]
    fn relative_conventions() {
        let p = chain2();
        let f = Presheaf::constant(&p, 1);
        let all = relative_t_complex(&p, &p, &f).unwrap();
        assert!(all.complex.is_zero_complex());
        let none = relative_t_complex(&p, &Poset::empty(), &f).unwrap();
        assert_eq!(none.rank(0), 2);
        assert!(pair_les_check(&p, &Poset::empty(), &f).unwrap().exact);
        let top = p.induced(&[1]);
        assert!(pair_les_check(&p, &top, &f).unwrap().exact);
    }

    #[test]
    fn push_then_pull_is_identity() {
        let p = chain2();
        let q = p.induced(&[0]);
        let f = Presheaf::constant(&p, 1);
        let incl = PosetMap::inclusion(&q, &p).unwrap();
        let tp = t_complex(&p, &f).unwrap();
        let tq = t_complex(&q, &f.pullback(&q, &incl.map).unwrap()).unwrap();
        let s = vec![BigInt::from(1)];
        let pushed = pushforward(&incl, &tq, &tp, 0, &s).unwrap();
        assert_eq!(pushed, vec![BigInt::from(1), BigInt::from(0)]);
        assert_eq!(pullback(&incl, &tp, &tq, 0, &pushed), s);
    }

    #[test]
    fn limit_matches_h0() {
        let h = hexagon();
        let f = Presheaf::constant(&h, 2);
        assert_eq!(limit(&h, &f).unwrap().cols(), 2);
    }
}
