use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::IntMatrix;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Presheaf of free abelian groups on a poset: `F(x) = Z^dim(x)` and, for
/// each cover `x < y`, the matrix of `F^y_x : F(y) -> F(x)` with `dim(x)`
/// rows and `dim(y)` columns.
///
/// Construction validates path independence, after which `restriction`
/// returns the unique composite for any `x <= y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    base: Poset,
    dims: Vec<usize>,
    cover_maps: BTreeMap<(usize, usize), IntMatrix>,
    /// `restrictions[x][y]` for `x <= y`.
    restrictions: Vec<BTreeMap<usize, IntMatrix>>,
}

/// Serialized form: `{"dims": {...}, "maps": {"x<y": [[...]]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub dims: BTreeMap<String, usize>,
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

/// Two saturated chains from `upper` down to `lower` whose composites differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathViolation {
    pub lower: String,
    pub upper: String,
    pub first: Vec<String>,
    pub second: Vec<String>,
}

impl Presheaf {
    /// Validates shapes and path independence.
    pub fn new(
        base: &Poset,
        dims: Vec<usize>,
        cover_maps: BTreeMap<(usize, usize), IntMatrix>,
    ) -> Result<Self> {
        match Self::check_raw(base, &dims, &cover_maps)? {
            None => Ok(Self::assemble(base, dims, cover_maps)),
            Some(v) => Err(Error::NotFunctorial(format!(
                "chains {} and {} from `{}` to `{}` give different maps",
                v.first.join("<"),
                v.second.join("<"),
                v.upper,
                v.lower
            ))),
        }
    }

    fn assemble(
        base: &Poset,
        dims: Vec<usize>,
        cover_maps: BTreeMap<(usize, usize), IntMatrix>,
    ) -> Self {
        let n = base.len();
        let mut restrictions: Vec<BTreeMap<usize, IntMatrix>> = vec![BTreeMap::new(); n];
        // Fill from the top down so every restriction from an upper cover exists.
        let mut order = base.linear_extension();
        order.reverse();
        for &x in &order {
            restrictions[x].insert(x, IntMatrix::identity(dims[x]));
            for y in 0..n {
                if !base.lt(x, y) {
                    continue;
                }
                let z = *base
                    .upper_covers(x)
                    .iter()
                    .find(|&&z| base.leq(z, y))
                    .expect("some cover of x lies below y");
                let m = &cover_maps[&(x, z)] * &restrictions[z][&y];
                restrictions[x].insert(y, m);
            }
        }
        Presheaf {
            base: base.clone(),
            dims,
            cover_maps,
            restrictions,
        }
    }

    /// Shape checks, then the first path-independence violation if any.
    ///
    /// Path independence is checked locally: for `x < y`, every cover `z` of
    /// `x` below `y` must give the same composite as a fixed canonical
    /// chain. By induction on the length of `[x, y]` this covers all pairs
    /// of saturated chains.
    pub fn check_raw(
        base: &Poset,
        dims: &[usize],
        cover_maps: &BTreeMap<(usize, usize), IntMatrix>,
    ) -> Result<Option<PathViolation>> {
        let n = base.len();
        if dims.len() != n {
            return Err(Error::Shape(format!(
                "{} dimensions for {} elements",
                dims.len(),
                n
            )));
        }
        for &(x, y) in cover_maps.keys() {
            if x >= n || y >= n || !base.covers(x, y) {
                return Err(Error::Shape(format!("map given on a non-cover ({x}, {y})")));
            }
        }
        for (x, y) in base.cover_pairs() {
            let m = cover_maps.get(&(x, y)).ok_or_else(|| {
                Error::Shape(format!(
                    "missing map on cover `{}<{}`",
                    base.id(x),
                    base.id(y)
                ))
            })?;
            if m.shape() != (dims[x], dims[y]) {
                return Err(Error::Shape(format!(
                    "map on `{}<{}` is {}x{}, expected {}x{}",
                    base.id(x),
                    base.id(y),
                    m.rows(),
                    m.cols(),
                    dims[x],
                    dims[y]
                )));
            }
        }
        // Canonical chains: from x always step to the least cover below y.
        let mut order = base.linear_extension();
        order.reverse();
        let mut canon: Vec<BTreeMap<usize, IntMatrix>> = vec![BTreeMap::new(); n];
        let mut canon_chain: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); n];
        for &x in &order {
            canon[x].insert(x, IntMatrix::identity(dims[x]));
            canon_chain[x].insert(x, vec![x]);
            for y in 0..n {
                if !base.lt(x, y) {
                    continue;
                }
                let mut first: Option<(usize, IntMatrix)> = None;
                for &z in base.upper_covers(x) {
                    if !base.leq(z, y) {
                        continue;
                    }
                    let m = &cover_maps[&(x, z)] * &canon[z][&y];
                    match &first {
                        None => first = Some((z, m)),
                        Some((z0, m0)) => {
                            if *m0 != m {
                                let chain = |start: usize| {
                                    let mut c = vec![base.id(x).to_string()];
                                    c.extend(
                                        canon_chain[start][&y]
                                            .iter()
                                            .map(|&w| base.id(w).to_string()),
                                    );
                                    c
                                };
                                return Ok(Some(PathViolation {
                                    lower: base.id(x).to_string(),
                                    upper: base.id(y).to_string(),
                                    first: chain(*z0),
                                    second: chain(z),
                                }));
                            }
                        }
                    }
                }
                let (z0, m0) = first.expect("a cover of x lies below y");
                let mut chain = vec![x];
                chain.extend(canon_chain[z0][&y].iter().copied());
                canon_chain[x].insert(y, chain);
                canon[x].insert(y, m0);
            }
        }
        Ok(None)
    }

    /// Re-runs the functoriality check on a constructed presheaf.
    pub fn validate(&self) -> Result<Option<PathViolation>> {
        Self::check_raw(&self.base, &self.dims, &self.cover_maps)
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cover_map(&self, x: usize, y: usize) -> &IntMatrix {
        &self.cover_maps[&(x, y)]
    }

    pub fn cover_maps(&self) -> &BTreeMap<(usize, usize), IntMatrix> {
        &self.cover_maps
    }

    /// `F^y_x` for `x <= y`.
    pub fn restriction(&self, x: usize, y: usize) -> Result<&IntMatrix> {
        self.restrictions[x]
            .get(&y)
            .ok_or_else(|| Error::NotComparable {
                lower: self.base.id(x).to_string(),
                upper: self.base.id(y).to_string(),
            })
    }

    pub fn restriction_by_id(&self, x: &str, y: &str) -> Result<&IntMatrix> {
        self.restriction(self.base.index_of(x)?, self.base.index_of(y)?)
    }

    /// `F^y_x` when it is known to exist.
    pub(crate) fn res(&self, x: usize, y: usize) -> &IntMatrix {
        &self.restrictions[x][&y]
    }

    /// Constant presheaf `Z^k` with identity restrictions.
    pub fn constant(base: &Poset, k: usize) -> Presheaf {
        let maps = base
            .cover_pairs()
            .into_iter()
            .map(|c| (c, IntMatrix::identity(k)))
            .collect();
        Self::assemble(base, vec![k; base.len()], maps)
    }

    pub fn zero(base: &Poset) -> Presheaf {
        Self::constant(base, 0)
    }

    /// `Z^k` on `P_{<=x}` with identity maps, zero elsewhere.
    pub fn yoneda(base: &Poset, x: &str, k: usize) -> Result<Presheaf> {
        let xi = base.index_of(x)?;
        let dims: Vec<usize> = (0..base.len())
            .map(|y| if base.leq(y, xi) { k } else { 0 })
            .collect();
        let maps = base
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| {
                let m = if dims[a] == k && dims[b] == k {
                    IntMatrix::identity(k)
                } else {
                    IntMatrix::zeros(dims[a], dims[b])
                };
                ((a, b), m)
            })
            .collect();
        Ok(Self::assemble(base, dims, maps))
    }

    /// Direct sum, values concatenated in argument order.
    pub fn direct_sum(parts: &[Presheaf]) -> Result<Presheaf> {
        let base = parts
            .first()
            .map(|p| p.base.clone())
            .ok_or(Error::BaseMismatch)?;
        if parts.iter().any(|p| p.base != base) {
            return Err(Error::BaseMismatch);
        }
        let dims = (0..base.len())
            .map(|x| parts.iter().map(|p| p.dims[x]).sum())
            .collect();
        let maps = base
            .cover_pairs()
            .into_iter()
            .map(|c| {
                let blocks: Vec<IntMatrix> =
                    parts.iter().map(|p| p.cover_maps[&c].clone()).collect();
                (c, IntMatrix::block_diagonal(&blocks))
            })
            .collect();
        Ok(Self::assemble(&base, dims, maps))
    }

    /// Changes basis in every value: `F'(x) = g_x F(x)` with each `g_x`
    /// unimodular and `g_inv[x]` its inverse.
    pub fn conjugate(&self, g: &[IntMatrix], g_inv: &[IntMatrix]) -> Result<Presheaf> {
        let maps = self
            .cover_maps
            .iter()
            .map(|(&(x, y), m)| ((x, y), &(&g[x] * m) * &g_inv[y]))
            .collect();
        Presheaf::new(&self.base, self.dims.clone(), maps)
    }

    /// Restriction of `F` to an induced subposet (matching identifiers).
    pub fn restrict_to(&self, sub: &Poset) -> Result<Presheaf> {
        let idx = sub
            .ids()
            .iter()
            .map(|s| self.base.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        if !self.base.is_induced_subposet(sub) {
            return Err(Error::NotInduced(
                "subposet order differs from the ambient order".into(),
            ));
        }
        let dims = idx.iter().map(|&x| self.dims[x]).collect();
        let maps = sub
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| ((a, b), self.res(idx[a], idx[b]).clone()))
            .collect();
        Ok(Self::assemble(sub, dims, maps))
    }

    /// Pull-back along an order-preserving map `f: Q -> P` given as a list of
    /// target indices: `(f^* F)(q) = F(f(q))`.
    pub fn pullback(&self, source: &Poset, f: &[usize]) -> Result<Presheaf> {
        let dims = f.iter().map(|&p| self.dims[p]).collect();
        let maps = source
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| {
                if !self.base.leq(f[a], f[b]) {
                    return Err(Error::NotMonotone(format!(
                        "{} < {}",
                        source.id(a),
                        source.id(b)
                    )));
                }
                Ok(((a, b), self.res(f[a], f[b]).clone()))
            })
            .collect::<Result<_>>()?;
        Ok(Self::assemble(source, dims, maps))
    }

    pub fn from_json(base: &Poset, js: &PresheafJson) -> Result<Presheaf> {
        let mut dims = vec![0; base.len()];
        for (id, &d) in &js.dims {
            dims[base.index_of(id)?] = d;
        }
        if js.dims.len() != base.len() {
            let missing = base
                .ids()
                .iter()
                .find(|id| !js.dims.contains_key(*id))
                .unwrap();
            return Err(Error::Malformed(format!("no dimension for `{missing}`")));
        }
        let mut maps = BTreeMap::new();
        for (key, rows) in &js.maps {
            let (a, b) = key.split_once('<').ok_or_else(|| {
                Error::Malformed(format!("map key `{key}` is not of the form x<y"))
            })?;
            let (x, y) = (base.index_of(a)?, base.index_of(b)?);
            if !base.covers(x, y) {
                return Err(Error::Malformed(format!("map key `{key}` is not a cover")));
            }
            let cols = dims[y];
            if rows.len() != dims[x] || rows.iter().any(|r| r.len() != cols) {
                return Err(Error::Shape(format!(
                    "map `{key}` should be {}x{}",
                    dims[x], cols
                )));
            }
            maps.insert((x, y), IntMatrix::from_rows(cols, rows));
        }
        for (x, y) in base.cover_pairs() {
            if let std::collections::btree_map::Entry::Vacant(slot) = maps.entry((x, y)) {
                if dims[x] == 0 || dims[y] == 0 {
                    slot.insert(IntMatrix::zeros(dims[x], dims[y]));
                } else {
                    return Err(Error::Malformed(format!(
                        "no map for cover {}<{}",
                        base.id(x),
                        base.id(y)
                    )));
                }
            }
        }
        Presheaf::new(base, dims, maps)
    }

    pub fn to_json(&self) -> PresheafJson {
        let dims = (0..self.base.len())
            .map(|x| (self.base.id(x).to_string(), self.dims[x]))
            .collect();
        let maps = self
            .cover_maps
            .iter()
            .map(|(&(x, y), m)| {
                let key = format!("{}<{}", self.base.id(x), self.base.id(y));
                (key, m.to_i64_rows().expect("presheaf entries fit in i64"))
            })
            .collect();
        PresheafJson { dims, maps }
    }
}

/// Natural transformation `kappa: F -> G` with components `kappa_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMorphism {
    pub source: Presheaf,
    pub target: Presheaf,
    pub components: Vec<IntMatrix>,
}

impl PresheafMorphism {
    /// Checks shapes and naturality on every cover.
    pub fn new(source: &Presheaf, target: &Presheaf, components: Vec<IntMatrix>) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::BaseMismatch);
        }
        let base = &source.base;
        if components.len() != base.len() {
            return Err(Error::Shape("one component per element required".into()));
        }
        for (x, c) in components.iter().enumerate() {
            if c.shape() != (target.dims[x], source.dims[x]) {
                return Err(Error::Shape(format!(
                    "component at `{}` has wrong shape",
                    base.id(x)
                )));
            }
        }
        for (x, y) in base.cover_pairs() {
            let left = &components[x] * source.cover_map(x, y);
            let right = target.cover_map(x, y) * &components[y];
            if left != right {
                return Err(Error::NotNatural {
                    lower: base.id(x).to_string(),
                    upper: base.id(y).to_string(),
                });
            }
        }
        Ok(PresheafMorphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(f: &Presheaf) -> Self {
        let components = f.dims.iter().map(|&d| IntMatrix::identity(d)).collect();
        PresheafMorphism {
            source: f.clone(),
            target: f.clone(),
            components,
        }
    }

    pub fn zero(source: &Presheaf, target: &Presheaf) -> Result<Self> {
        let components = (0..source.base.len())
            .map(|x| IntMatrix::zeros(target.dims[x], source.dims[x]))
            .collect();
        Self::new(source, target, components)
    }

    /// On `P_{>=x}` (given as the closed interval's poset and the restriction
    /// of `F` to it), the morphism `F -> Delta F(x)` with `kappa_y = F^y_x`.
    pub fn to_constant_at(f: &Presheaf, x: usize) -> Result<Self> {
        let base = &f.base;
        if (0..base.len()).any(|y| !base.leq(x, y)) {
            return Err(Error::NotComparable {
                lower: base.id(x).to_string(),
                upper: "every element".into(),
            });
        }
        let target = Presheaf::constant(base, f.dims[x]);
        let components = (0..base.len()).map(|y| f.res(x, y).clone()).collect();
        Self::new(f, &target, components)
    }

    pub fn compose(&self, first: &PresheafMorphism) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::BaseMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(a, b)| a * b)
            .collect();
        Ok(PresheafMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        })
    }
}
