use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::singular::Simplex;

/// `S_n` minus the identity under the Bruhat order, turned upside down so
/// that the transpositions are maximal and `w_0 = n...21` is the minimum.
///
/// For `i > j`, `(i, j)` is a swap pair of `x` when `i` appears before `j`
/// in one-line notation and every value strictly between them is `< j` or
/// `> i`. Interchanging a swap pair gives an upper cover and lowers the
/// inversion count by one, so `corank(x) = l(x) - 1`.
#[derive(Debug, Clone)]
pub struct BruhatPoset {
    pub n: usize,
    pub poset: Poset,
    perms: Vec<Vec<u8>>,
}

fn perm_id(p: &[u8]) -> String {
    p.iter().map(|v| v.to_string()).collect()
}

fn inversions(p: &[u8]) -> usize {
    (0..p.len())
        .map(|a| (a + 1..p.len()).filter(|&b| p[a] > p[b]).count())
        .sum()
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 1..=n as u8 {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// Position of a swap pair in the total order
/// `(n,n-1) > ... > (n,2) > ... > (3,2) > (n,1) > ... > (2,1)`.
fn pair_key(pair: (u8, u8)) -> (u8, u8) {
    (pair.1, pair.0)
}

/// Swap pairs `(i, j)`, `i > j`, of a permutation in one-line notation,
/// ascending in the total order.
pub fn swap_pairs_of(p: &[u8]) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            let (i, j) = (p[a], p[b]);
            if i > j && p[a + 1..b].iter().all(|&v| v < j || v > i) {
                out.push((i, j));
            }
        }
    }
    out.sort_by_key(|&pair| pair_key(pair));
    out
}

fn interchange(p: &[u8], (i, j): (u8, u8)) -> Vec<u8> {
    p.iter()
        .map(|&v| {
            if v == i {
                j
            } else if v == j {
                i
            } else {
                v
            }
        })
        .collect()
}

impl BruhatPoset {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=5).contains(&n) {
            return Err(Error::OutOfRange(format!(
                "Bruhat order needs 2 <= n <= 5, got {n}"
            )));
        }
        let perms: Vec<Vec<u8>> = permutations(n)
            .into_iter()
            .filter(|p| inversions(p) > 0)
            .collect();
        let elements: Vec<String> = perms.iter().map(|p| perm_id(p)).collect();
        let mut covers = Vec::new();
        let mut ranks = BTreeMap::new();
        for p in &perms {
            // Rank decreases with length; the transpositions sit on top.
            ranks.insert(perm_id(p), (n * (n - 1) / 2 - inversions(p)) as i64);
            for pair in swap_pairs_of(p) {
                let q = interchange(p, pair);
                if inversions(&q) > 0 {
                    covers.push((perm_id(p), perm_id(&q)));
                }
            }
        }
        let poset = Poset::with_ranks(&elements, &covers, &ranks)?;
        let perms = poset
            .ids()
            .iter()
            .map(|id| id.bytes().map(|b| b - b'0').collect())
            .collect();
        Ok(BruhatPoset { n, poset, perms })
    }

    pub fn permutation(&self, x: usize) -> &[u8] {
        &self.perms[x]
    }

    pub fn length(&self, x: usize) -> usize {
        inversions(&self.perms[x])
    }

    fn parse(&self, id: &str) -> Result<usize> {
        self.poset.index_of(id)
    }

    pub fn swap_pairs(&self, id: &str) -> Result<Vec<(u8, u8)>> {
        Ok(swap_pairs_of(&self.perms[self.parse(id)?]))
    }

    /// The least swap pair of `x` in the total order.
    pub fn minimal_swap_pair(&self, id: &str) -> Result<(u8, u8)> {
        let pairs = self.swap_pairs(id)?;
        Ok(pairs[0])
    }

    /// The cover obtained by interchanging the minimal swap pair, or `None`
    /// for a transposition.
    pub fn minimal_swap(&self, x: usize) -> Option<usize> {
        if self.length(x) == 1 {
            return None;
        }
        let p = &self.perms[x];
        let q = interchange(p, swap_pairs_of(p)[0]);
        self.poset.index_of(&perm_id(&q)).ok()
    }

    /// Maximal chain from `x` up to a transposition, repeatedly interchanging
    /// the minimal swap pair; listed bottom first.
    pub fn canonical_chain_indices(&self, x: usize) -> Vec<usize> {
        let mut chain = vec![x];
        while let Some(y) = self.minimal_swap(*chain.last().unwrap()) {
            chain.push(y);
        }
        chain
    }

    pub fn canonical_chain(&self, id: &str) -> Result<Vec<String>> {
        let x = self.parse(id)?;
        Ok(self
            .canonical_chain_indices(x)
            .into_iter()
            .map(|c| self.poset.id(c).to_string())
            .collect())
    }

    /// Canonical chain of `x` as a simplex, for use as the generator of `A_x`.
    pub fn canonical_simplex(&self, x: usize) -> Simplex {
        Simplex(self.canonical_chain_indices(x))
    }

    /// Incidence signs `[x, y]` for every cover, by induction on corank:
    /// the minimal swap gives `+1`, any other cover of a corank-1 element
    /// gives `-1`, and otherwise `[x,y] = -[x,y'][y,z][y',z]` through a
    /// diamond `x < y, y' < z` in which `[x,y']` is already known.
    pub fn sign_table(&self) -> Result<BTreeMap<(usize, usize), i8>> {
        let p = &self.poset;
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by_key(|&x| (self.length(x), x));
        let mut signs: BTreeMap<(usize, usize), i8> = BTreeMap::new();
        for x in order {
            let Some(m) = self.minimal_swap(x) else {
                continue;
            };
            signs.insert((x, m), 1);
            let mut pending: Vec<usize> = p
                .upper_covers(x)
                .iter()
                .copied()
                .filter(|&y| y != m)
                .collect();
            if self.length(x) == 2 {
                for y in pending {
                    signs.insert((x, y), -1);
                }
                continue;
            }
            while !pending.is_empty() {
                let before = pending.len();
                pending.retain(|&y| {
                    let found = p.upper_covers(x).iter().find_map(|&y2| {
                        let s2 = *signs.get(&(x, y2))?;
                        let z = p
                            .upper_covers(y)
                            .iter()
                            .copied()
                            .find(|&z| p.covers(y2, z))?;
                        Some(-s2 * signs[&(y, z)] * signs[&(y2, z)])
                    });
                    match found {
                        Some(s) => {
                            signs.insert((x, y), s);
                            false
                        }
                        None => true,
                    }
                });
                if pending.len() == before {
                    return Err(Error::NotCellLike {
                        element: p.id(x).to_string(),
                        reason: format!("no diamond reaches the cover {}", p.id(pending[0])),
                    });
                }
            }
        }
        Ok(signs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let b = BruhatPoset::new(3).unwrap();
        assert_eq!(b.poset.len(), 5);
        let b = BruhatPoset::new(4).unwrap();
        assert_eq!(b.poset.len(), 23);
        let w0 = b.poset.index_of("4321").unwrap();
        assert_eq!(b.poset.bottom(), Some(w0));
        assert_eq!(b.poset.corank(w0).unwrap(), 5);
        assert!(BruhatPoset::new(6).is_err());
    }

    #[test]
    fn swap_pairs_of_longest() {
        let b = BruhatPoset::new(4).unwrap();
        let mut pairs = b.swap_pairs("4321").unwrap();
        pairs.sort();
        assert_eq!(pairs, vec![(2, 1), (3, 2), (4, 3)]);
        assert_eq!(b.minimal_swap_pair("4321").unwrap(), (2, 1));
    }

    #[test]
    fn canonical_chain_of_longest() {
        let b = BruhatPoset::new(4).unwrap();
        assert_eq!(
            b.canonical_chain("4321").unwrap(),
            vec!["4321", "4312", "4132", "1432", "1423", "1243"]
        );
    }
}
