use std::collections::BTreeMap;

use crate::abelian::IntMatrix;
use crate::builders::lattices::subset_id;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::presheaf::Presheaf;

/// Identifiers of the two formal maxima of the suspension poset.
pub const APEX: &str = "1";
pub const APEX_PRIME: &str = "1'";

/// A link diagram as a planar-diagram code: crossing `[a, b, c, d]` lists
/// its four strand labels counterclockwise starting from the incoming
/// under-strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    pub crossings: Vec<[u32; 4]>,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self> {
        let mut count: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &crossings {
            for &l in c {
                *count.entry(l).or_default() += 1;
            }
        }
        if let Some((l, k)) = count.iter().find(|&(_, &k)| k != 2) {
            return Err(Error::Malformed(format!(
                "strand label {l} occurs {k} times, expected 2"
            )));
        }
        Ok(LinkDiagram { crossings })
    }

    /// Parses one crossing per line, written `Xa,b,c,d` (brackets around the
    /// labels are tolerated). Blank lines and `#` comments are skipped; an
    /// empty code is the crossingless unknot.
    pub fn parse(text: &str) -> Result<Self> {
        let mut crossings = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = || {
                Error::Malformed(format!(
                    "line {}: expected Xa,b,c,d, got {line:?}",
                    lineno + 1
                ))
            };
            let body = line.strip_prefix('X').ok_or_else(bad)?;
            let body = body.trim_matches(|c: char| {
                c == '[' || c == ']' || c == '(' || c == ')' || c.is_whitespace()
            });
            let labels: Vec<u32> = body
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let labels: [u32; 4] = labels.try_into().map_err(|_| bad())?;
            crossings.push(labels);
        }
        Self::new(crossings)
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Circles of the resolution in which crossing `k` (0-based) takes its
    /// 1-smoothing exactly when bit `k` of `state` is set. Each circle is
    /// its sorted list of strand labels; circles are ordered by least label.
    /// The 0-smoothing joins `a-b` and `c-d`, the 1-smoothing `a-d` and `b-c`.
    pub fn circles(&self, state: u32) -> Vec<Vec<u32>> {
        if self.crossings.is_empty() {
            return vec![Vec::new()];
        }
        let labels: Vec<u32> = {
            let mut l: Vec<u32> = self.crossings.iter().flatten().copied().collect();
            l.sort_unstable();
            l.dedup();
            l
        };
        let pos = |l: u32| labels.binary_search(&l).unwrap();
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut union = |a: u32, b: u32| {
            let (ra, rb) = (find(&mut parent, pos(a)), find(&mut parent, pos(b)));
            parent[ra.max(rb)] = ra.min(rb);
        };
        for (k, &[a, b, c, d]) in self.crossings.iter().enumerate() {
            if state >> k & 1 == 0 {
                union(a, b);
                union(c, d);
            } else {
                union(a, d);
                union(b, c);
            }
        }
        let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(l);
        }
        let mut out: Vec<Vec<u32>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Matrix of the cube edge map from `state` to `state | 1 << k`, in the
    /// basis of `V^{(x) c}` indexed by bit masks (bit `m` set means `X` on
    /// circle `m`).
    pub fn edge_map(&self, state: u32, k: usize) -> Result<IntMatrix> {
        debug_assert_eq!(state >> k & 1, 0);
        let src = self.circles(state);
        let dst = self.circles(state | 1 << k);
        let touched = self.crossings[k];
        let affected = |c: &Vec<u32>| c.iter().any(|l| touched.contains(l));
        let src_aff: Vec<usize> = (0..src.len()).filter(|&i| affected(&src[i])).collect();
        let dst_aff: Vec<usize> = (0..dst.len()).filter(|&i| affected(&dst[i])).collect();
        // Unaffected circles carry over unchanged.
        let carry: Vec<(usize, usize)> = (0..src.len())
            .filter(|i| !src_aff.contains(i))
            .map(|i| {
                (
                    i,
                    dst.iter()
                        .position(|c| *c == src[i])
                        .expect("unaffected circle persists"),
                )
            })
            .collect();
        let mut m = IntMatrix::zeros(1 << dst.len(), 1 << src.len());
        for s in 0usize..1 << src.len() {
            let base: usize = carry.iter().map(|&(i, j)| (s >> i & 1) << j).sum();
            let bit = |i: usize| s >> i & 1;
            let mut terms: Vec<usize> = Vec::new();
            match (src_aff.as_slice(), dst_aff.as_slice()) {
                (&[a, b], &[c]) => {
                    // m(1 1) = 1, m(1 X) = m(X 1) = X, m(X X) = 0.
                    if bit(a) + bit(b) < 2 {
                        terms.push(base | (bit(a) | bit(b)) << c);
                    }
                }
                (&[a], &[c, d]) => {
                    // D(1) = 1 X + X 1, D(X) = X X.
                    if bit(a) == 0 {
                        terms.push(base | 1 << d);
                        terms.push(base | 1 << c);
                    } else {
                        terms.push(base | 1 << c | 1 << d);
                    }
                }
                _ => {
                    return Err(Error::Malformed(format!(
                        "crossing {} neither merges nor splits circles",
                        k + 1
                    )))
                }
            }
            for t in terms {
                *m.entry_mut(t, s) += 1;
            }
        }
        Ok(m)
    }
}

/// How the two formal maxima are decorated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ApexMode {
    /// `F(1) = V^{(x) c(empty)}` and `F(1') = 0`: the cellular complex is the
    /// Khovanov cube complex itself.
    #[default]
    Single,
    /// `F(1) = F(1') = V^{(x) c(empty)}`: the cube complex plus an extra copy
    /// of `F(empty)` in degree 0.
    Doubled,
}

fn suspension_covers(n: usize) -> (Vec<String>, Vec<(String, String)>) {
    let mut elements = vec![APEX.to_string(), APEX_PRIME.to_string()];
    let mut covers = Vec::new();
    for mask in 1u32..1 << n {
        elements.push(subset_id(mask));
        if mask.count_ones() == 1 {
            covers.push((subset_id(mask), APEX.to_string()));
            covers.push((subset_id(mask), APEX_PRIME.to_string()));
        } else {
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    covers.push((subset_id(mask), subset_id(mask & !(1 << i))));
                }
            }
        }
    }
    (elements, covers)
}

/// Cell poset of the suspension of the `(n-1)`-simplex: nonempty subsets of
/// `{1..n}` under reverse inclusion (corank `|T|`) below two maxima `1`, `1'`.
pub fn suspension_simplex_poset(n: usize) -> Result<Poset> {
    if n > 6 {
        return Err(Error::OutOfRange(format!("suspension size {n} exceeds 6")));
    }
    let (elements, covers) = suspension_covers(n);
    Poset::from_covers(&elements, &covers)
}

/// The suspension poset of a diagram with its Khovanov presheaf:
/// `F(T) = V^{(x) c(T)}` with the merge and split maps on covers.
pub fn khovanov(d: &LinkDiagram, mode: ApexMode) -> Result<(Poset, Presheaf)> {
    let n = d.len();
    if n > 8 {
        return Err(Error::OutOfRange(format!(
            "{n} crossings exceeds the limit of 8"
        )));
    }
    let (elements, covers) = suspension_covers(n);
    let p = Poset::from_covers(&elements, &covers)?;
    let state_of = |id: &str| -> Option<u32> {
        if id == APEX || id == APEX_PRIME {
            return None;
        }
        let inner = id.trim_start_matches('{').trim_end_matches('}');
        Some(
            inner
                .split(',')
                .map(|v| 1u32 << (v.parse::<u32>().unwrap() - 1))
                .sum(),
        )
    };
    let c0 = d.circles(0).len();
    let dims: Vec<usize> = p
        .ids()
        .iter()
        .map(|id| match state_of(id) {
            Some(s) => 1 << d.circles(s).len(),
            None if id == APEX_PRIME && mode == ApexMode::Single => 0,
            None => 1 << c0,
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (x, y) in p.cover_pairs() {
        let sx = state_of(p.id(x)).expect("covers start at subsets");
        let m = match state_of(p.id(y)) {
            Some(sy) => d.edge_map(sy, (sx & !sy).trailing_zeros() as usize)?,
            None if dims[y] == 0 => IntMatrix::zeros(dims[x], 0),
            None => d.edge_map(0, sx.trailing_zeros() as usize)?,
        };
        maps.insert((x, y), m);
    }
    let f = Presheaf::new(&p, dims, maps)?;
    Ok((p, f))
}
