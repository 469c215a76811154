use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poset::Poset;

fn check_size(n: usize, what: &str) -> Result<()> {
    if (1..=6).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{what} lattice size {n} not in 1..=6"
        )))
    }
}

/// Identifier of a subset of `{1..n}`: `{1,3}`, or `{}` for the empty set.
pub fn subset_id(mask: u32) -> String {
    let parts: Vec<String> = (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Subsets of `{1..n}` ordered by inclusion, rank `|S|`.
pub fn boolean_lattice(n: usize) -> Result<Poset> {
    check_size(n, "Boolean")?;
    let elements: Vec<String> = (0u32..1 << n).map(subset_id).collect();
    let mut covers = Vec::new();
    for mask in 0u32..1 << n {
        for i in 0..n {
            if mask >> i & 1 == 0 {
                covers.push((subset_id(mask), subset_id(mask | 1 << i)));
            }
        }
    }
    Poset::from_covers(&elements, &covers)
}

/// A set partition of `{1..n}` as sorted blocks of sorted elements.
type Partition = Vec<Vec<usize>>;

fn partition_id(p: &Partition) -> String {
    p.iter()
        .map(|b| b.iter().map(|v| v.to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join("|")
}

fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = vec![Vec::new()];
    for v in 1..=n {
        let mut next = Vec::new();
        for p in out {
            for b in 0..p.len() {
                let mut q: Partition = p.clone();
                q[b].push(v);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![v]);
            next.push(q);
        }
        out = next;
    }
    for p in &mut out {
        p.sort();
    }
    out
}

/// Set partitions of `{1..n}` ordered by refinement (finer below coarser),
/// rank `n - #blocks`. Identifiers list blocks separated by `|`, e.g. `12|3`.
pub fn partition_lattice(n: usize) -> Result<Poset> {
    check_size(n, "partition")?;
    let parts = all_partitions(n);
    let elements: Vec<String> = parts.iter().map(partition_id).collect();
    let mut covers = Vec::new();
    for p in &parts {
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let mut q: Partition = p
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, b)| b.clone())
                    .collect();
                let mut merged = [p[i].clone(), p[j].clone()].concat();
                merged.sort();
                q.push(merged);
                q.sort();
                covers.push((partition_id(p), partition_id(&q)));
            }
        }
    }
    Poset::from_covers(&elements, &covers)
}

/// The poset with its unique maximum removed, ranks recomputed from the
/// remaining covers.
pub fn remove_top(p: &Poset) -> Result<Poset> {
    let top = p
        .top()
        .ok_or_else(|| Error::Malformed("poset has no unique maximum".into()))?;
    let keep: Vec<&str> = p
        .ids()
        .iter()
        .filter(|id| *id != p.id(top))
        .map(String::as_str)
        .collect();
    let covers: Vec<(String, String)> = p
        .cover_ids()
        .into_iter()
        .filter(|(_, y)| y != p.id(top))
        .collect();
    let cover_refs: Vec<(&str, &str)> = covers
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let ranks: BTreeMap<String, i64> = keep
        .iter()
        .map(|id| Ok((id.to_string(), p.rank(p.index_of(id)?)?)))
        .collect::<Result<_>>()?;
    Poset::with_ranks(&keep, &cover_refs, &ranks)
}

/// `rk(x v y) + rk(x ^ y) <= rk(x) + rk(y)` for all pairs. False when the
/// poset is not a graded lattice.
pub fn is_semimodular(p: &Poset) -> bool {
    if !p.is_graded() || !p.is_lattice() {
        return false;
    }
    let r = |x| p.rank(x).unwrap();
    (0..p.len()).all(|x| {
        (0..p.len()).all(|y| {
            let (j, m) = (p.join(x, y).unwrap(), p.meet(x, y).unwrap());
            r(j) + r(m) <= r(x) + r(y)
        })
    })
}

/// Every element is the join of the atoms below it.
pub fn is_atomic(p: &Poset) -> bool {
    let Some(bottom) = p.bottom() else {
        return false;
    };
    let atoms = p.upper_covers(bottom).to_vec();
    (0..p.len()).all(|x| {
        let mut join = bottom;
        for &a in atoms.iter().filter(|&&a| p.leq(a, x)) {
            match p.join(join, a) {
                Some(j) => join = j,
                None => return false,
            }
        }
        join == x
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_three() {
        let b = boolean_lattice(3).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(b.cover_pairs().len(), 12);
        assert_eq!(b.top_rank(), 3);
        assert!(is_semimodular(&b) && is_atomic(&b));
    }

    #[test]
    fn partitions_three() {
        let p = partition_lattice(3).unwrap();
        assert_eq!(p.len(), 5);
        let (lo, hi) = (p.index_of("1|2|3").unwrap(), p.index_of("123").unwrap());
        assert_eq!(p.mobius(lo, hi).unwrap(), 2);
        assert!(is_semimodular(&p) && is_atomic(&p));
        assert_eq!(partition_lattice(4).unwrap().len(), 15);
    }

    #[test]
    fn top_removal() {
        let b = remove_top(&boolean_lattice(4).unwrap()).unwrap();
        assert_eq!(b.len(), 15);
        assert_eq!(b.corank(b.index_of("{}").unwrap()).unwrap(), 3);
        assert!(boolean_lattice(7).is_err());
    }
}
