use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite poset on string identifiers.
///
/// Elements are kept in lexicographic order of their identifiers and are
/// addressed by position in that order; every matrix downstream inherits
/// this ordering. `covers` stores `x < y` with nothing in between.
#[derive(Clone)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    leq: Vec<bool>,
    rank: Option<Vec<i64>>,
    top_rank: i64,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
            && self.up == other.up
            && self.rank == other.rank
            && self.top_rank == other.top_rank
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.ids)
            .field("covers", &self.cover_ids())
            .field("rank", &self.rank)
            .finish()
    }
}

/// Serialized form: `{"elements": [...], "covers": [[x, y], ...], "rank": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, i64>>,
}

impl Poset {
    /// Builds a poset from cover pairs `(x, y)` meaning `y` covers `x`.
    /// Grading is inferred, normalized so each connected component has
    /// minimum rank 0; inconsistent chain lengths leave it ungraded.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        Self::build(elements, covers, None)
    }

    /// As [`Poset::from_covers`] with a prescribed rank function, shifted so
    /// the minimum rank is 0.
    pub fn with_ranks<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
        ranks: &BTreeMap<String, i64>,
    ) -> Result<Self> {
        Self::build(elements, covers, Some(ranks))
    }

    pub fn empty() -> Self {
        Poset {
            ids: Vec::new(),
            index: HashMap::new(),
            up: Vec::new(),
            down: Vec::new(),
            leq: Vec::new(),
            rank: Some(Vec::new()),
            top_rank: 0,
        }
    }

    fn build<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
        ranks: Option<&BTreeMap<String, i64>>,
    ) -> Result<Self> {
        let mut ids: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        ids.sort();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        let index: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let mut pairs = BTreeSet::new();
        for (a, b) in covers {
            let (x, y) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if x == y {
                return Err(Error::Cycle(ids[x].clone()));
            }
            pairs.insert((x, y));
        }
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let mut poset = Self::assemble(ids, &pairs)?;
        for &(x, y) in &pairs {
            if let Some(&z) = poset.up[x].iter().find(|&&z| z != y && poset.leq(z, y)) {
                return Err(Error::RedundantCover {
                    lower: poset.ids[x].clone(),
                    upper: poset.ids[y].clone(),
                    via: poset.ids[z].clone(),
                });
            }
        }
        match ranks {
            Some(given) => {
                let mut r = Vec::with_capacity(poset.len());
                for id in &poset.ids {
                    let v = given
                        .get(id)
                        .ok_or_else(|| Error::InvalidRank(format!("no rank for `{id}`")))?;
                    r.push(*v);
                }
                if let Some(stray) = given.keys().find(|id| !poset.index.contains_key(*id)) {
                    return Err(Error::UnknownElement(stray.clone()));
                }
                for &(x, y) in &pairs {
                    if r[y] != r[x] + 1 {
                        return Err(Error::InvalidRank(format!(
                            "cover ({}, {}) has ranks {} and {}",
                            poset.ids[x], poset.ids[y], r[x], r[y]
                        )));
                    }
                }
                let min = r.iter().copied().min().unwrap_or(0);
                r.iter_mut().for_each(|v| *v -= min);
                poset.top_rank = r.iter().copied().max().unwrap_or(0);
                poset.rank = Some(r);
            }
            None => {
                poset.rank = poset.infer_ranks();
                poset.top_rank = poset
                    .rank
                    .as_ref()
                    .and_then(|r| r.iter().copied().max())
                    .unwrap_or(0);
            }
        }
        Ok(poset)
    }

    /// Order closure and adjacency; rejects cycles.
    fn assemble(ids: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(x, y) in pairs {
            up[x].push(y);
            down[y].push(x);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        // Kahn's algorithm from the maximal elements downward.
        let mut pending: Vec<usize> = up.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &down[v] {
                pending[w] -= 1;
                if pending[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| pending[i] > 0).unwrap();
            return Err(Error::Cycle(ids[stuck].clone()));
        }
        let mut leq = vec![false; n * n];
        for &v in &order {
            leq[v * n + v] = true;
            for &w in &up[v] {
                for t in 0..n {
                    if leq[w * n + t] {
                        leq[v * n + t] = true;
                    }
                }
            }
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Poset {
            ids,
            index,
            up,
            down,
            leq,
            rank: None,
            top_rank: 0,
        })
    }

    fn infer_ranks(&self) -> Option<Vec<i64>> {
        let n = self.len();
        let mut rank: Vec<Option<i64>> = vec![None; n];
        for start in 0..n {
            if rank[start].is_some() {
                continue;
            }
            rank[start] = Some(0);
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let rv = rank[v].unwrap();
                let nbrs = self.up[v]
                    .iter()
                    .map(|&w| (w, rv + 1))
                    .chain(self.down[v].iter().map(|&w| (w, rv - 1)));
                for (w, rw) in nbrs {
                    match rank[w] {
                        None => {
                            rank[w] = Some(rw);
                            component.push(w);
                            queue.push_back(w);
                        }
                        Some(existing) if existing != rw => return None,
                        _ => {}
                    }
                }
            }
            let min = component.iter().map(|&v| rank[v].unwrap()).min().unwrap();
            for v in component {
                rank[v] = Some(rank[v].unwrap() - min);
            }
        }
        Some(rank.into_iter().map(Option::unwrap).collect())
    }

    pub fn from_json(js: &PosetJson) -> Result<Self> {
        match &js.rank {
            Some(r) => Self::with_ranks(&js.elements, &js.covers, r),
            None => Self::from_covers(&js.elements, &js.covers),
        }
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.ids.clone(),
            covers: self.cover_ids(),
            rank: self
                .rank
                .as_ref()
                .map(|r| self.ids.iter().cloned().zip(r.iter().copied()).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Elements covering `x`, ascending.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Elements covered by `x`, ascending.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.up[x].binary_search(&y).is_ok()
    }

    /// All cover pairs `(x, y)`, lexicographic.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.up[x].iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn cover_ids(&self) -> Vec<(String, String)> {
        self.cover_pairs()
            .into_iter()
            .map(|(x, y)| (self.ids[x].clone(), self.ids[y].clone()))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.up[x].is_empty()).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.down[x].is_empty())
            .collect()
    }

    /// Elements in an order compatible with `<` (smaller first).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        let below = |x: usize| (0..self.len()).filter(|&z| self.leq(z, x)).count();
        v.sort_by_key(|&x| (below(x), x));
        v
    }

    pub fn is_graded(&self) -> bool {
        self.rank.is_some()
    }

    pub fn rank(&self, x: usize) -> Result<i64> {
        self.rank.as_ref().map(|r| r[x]).ok_or(Error::Ungraded)
    }

    /// `top_rank - rank(x)`, where the top rank is that of the poset the
    /// element was first built in.
    pub fn corank(&self, x: usize) -> Result<usize> {
        Ok((self.top_rank - self.rank(x)?) as usize)
    }

    pub fn top_rank(&self) -> i64 {
        self.top_rank
    }

    pub fn max_corank(&self) -> Result<usize> {
        let mut best = 0;
        for x in 0..self.len() {
            best = best.max(self.corank(x)?);
        }
        Ok(best)
    }

    pub fn require_graded(&self) -> Result<()> {
        if self.is_graded() {
            Ok(())
        } else {
            Err(Error::Ungraded)
        }
    }

    /// Induced subposet on `elements` (indices), keeping identifiers and,
    /// where still consistent with the induced covers, ranks and coranks.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let mut keep: Vec<usize> = elements.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let ids: Vec<String> = keep.iter().map(|&x| self.ids[x].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.lt(x, y) && !keep.iter().any(|&z| self.lt(x, z) && self.lt(z, y)) {
                    pairs.push((i, j));
                }
            }
        }
        let mut sub = Self::assemble(ids, &pairs).expect("suborder of a poset is acyclic");
        sub.top_rank = self.top_rank;
        sub.rank = self.rank.as_ref().and_then(|r| {
            let sr: Vec<i64> = keep.iter().map(|&x| r[x]).collect();
            pairs.iter().all(|&(a, b)| sr[b] == sr[a] + 1).then_some(sr)
        });
        sub
    }

    pub fn induced_by_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Poset> {
        let idx = ids
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.induced(&idx))
    }

    /// True when `sub` is the induced subposet of `self` on its elements.
    pub fn is_induced_subposet(&self, sub: &Poset) -> bool {
        let Ok(idx) = sub
            .ids
            .iter()
            .map(|s| self.index_of(s))
            .collect::<Result<Vec<_>>>()
        else {
            return false;
        };
        (0..sub.len()).all(|a| (0..sub.len()).all(|b| sub.leq(a, b) == self.leq(idx[a], idx[b])))
    }

    /// `P^k = {x : corank(x) <= k}`; empty for `k < 0`.
    pub fn filtration_level(&self, k: i64) -> Result<Poset> {
        self.require_graded()?;
        let keep: Vec<usize> = (0..self.len())
            .filter(|&x| (self.corank(x).unwrap() as i64) <= k)
            .collect();
        Ok(self.induced(&keep))
    }

    /// `P_{>=x}`.
    pub fn closed_interval(&self, x: &str) -> Result<Interval> {
        let xi = self.index_of(x)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.leq(xi, y)).collect();
        Ok(Interval {
            poset: self.induced(&keep),
            anchor: x.to_string(),
            closed: true,
        })
    }

    /// `P_{>x}`.
    pub fn open_interval(&self, x: &str) -> Result<Interval> {
        let xi = self.index_of(x)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.lt(xi, y)).collect();
        Ok(Interval {
            poset: self.induced(&keep),
            anchor: x.to_string(),
            closed: false,
        })
    }

    /// `{z : x <= z <= y}` as indices.
    pub fn segment(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect()
    }

    /// Möbius function via `mu(x,x) = 1`, `mu(x,y) = -sum_{x<=z<y} mu(x,z)`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        if !self.leq(x, y) {
            return Err(Error::NotComparable {
                lower: self.ids[x].clone(),
                upper: self.ids[y].clone(),
            });
        }
        Ok(self.mobius_from(x)[y])
    }

    /// `mu(x, z)` for every `z` (zero where `x` is not below `z`).
    pub fn mobius_from(&self, x: usize) -> Vec<i64> {
        let mut mu = vec![0i64; self.len()];
        for z in self.linear_extension() {
            if !self.leq(x, z) {
                continue;
            }
            mu[z] = if z == x {
                1
            } else {
                -(0..self.len())
                    .filter(|&w| self.leq(x, w) && self.lt(w, z))
                    .map(|w| mu[w])
                    .sum::<i64>()
            };
        }
        mu
    }

    /// Every interval spanning two ranks has exactly two middle elements.
    pub fn has_diamond_property(&self) -> bool {
        self.rank.is_some() && self.diamond_failure().is_none()
    }

    /// First interval `[x, y]` spanning two ranks without exactly two middle
    /// elements.
    pub fn diamond_failure(&self) -> Option<(usize, usize)> {
        let rank = self.rank.as_ref()?;
        (0..self.len())
            .flat_map(|x| (0..self.len()).map(move |y| (x, y)))
            .find(|&(x, y)| {
                self.lt(x, y)
                    && rank[y] - rank[x] == 2
                    && self.up[x].iter().filter(|&&z| self.covers(z, y)).count() != 2
            })
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let ub: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(y, z))
            .collect();
        ub.iter()
            .copied()
            .find(|&z| ub.iter().all(|&w| self.leq(z, w)))
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let lb: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(z, x) && self.leq(z, y))
            .collect();
        lb.iter()
            .copied()
            .find(|&z| lb.iter().all(|&w| self.leq(w, z)))
    }

    pub fn is_lattice(&self) -> bool {
        !self.is_empty()
            && (0..self.len()).all(|x| {
                (0..self.len()).all(|y| self.join(x, y).is_some() && self.meet(x, y).is_some())
            })
    }

    /// Unique maximum, if there is one.
    pub fn top(&self) -> Option<usize> {
        match self.maximal().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }
}

/// A closed interval `P_{>=x}` or open interval `P_{>x}`, keeping the
/// original identifiers and coranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub poset: Poset,
    pub anchor: String,
    pub closed: bool,
}

impl Deref for Interval {
    type Target = Poset;

    fn deref(&self) -> &Poset {
        &self.poset
    }
}
