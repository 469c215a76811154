use crate::error::{Error, Result};
use crate::poset::Poset;

/// Rooted tree ordered away from the root, all leaves at distance `depth`.
///
/// The root `r` has `branching` children and every other internal vertex
/// has `branching - 1`, so each internal non-root vertex has degree
/// `branching` in the underlying graph. Children of `r.2` are `r.2.1`,
/// `r.2.2`, and so on.
pub fn tree_poset(depth: usize, branching: usize) -> Result<Poset> {
    if depth < 1 || branching < 2 {
        return Err(Error::OutOfRange(format!(
            "tree needs depth >= 1 and branching >= 2, got depth {depth}, branching {branching}"
        )));
    }
    let mut leaves = branching;
    for _ in 1..depth {
        leaves = leaves.saturating_mul(branching - 1);
    }
    if leaves > 4096 {
        return Err(Error::OutOfRange(format!(
            "tree would have {leaves} leaves"
        )));
    }
    let mut elements = vec!["r".to_string()];
    let mut covers = Vec::new();
    let mut level = vec!["r".to_string()];
    for d in 0..depth {
        let children = if d == 0 { branching } else { branching - 1 };
        let mut next = Vec::new();
        for parent in &level {
            for c in 1..=children {
                let id = format!("{parent}.{c}");
                covers.push((parent.clone(), id.clone()));
                elements.push(id.clone());
                next.push(id);
            }
        }
        level = next;
    }
    Poset::from_covers(&elements, &covers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let t = tree_poset(1, 2).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.minimal().len(), 1);
        let t = tree_poset(2, 3).unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.maximal().len(), 6);
        assert_eq!(t.corank(t.index_of("r").unwrap()).unwrap(), 2);
        assert!(tree_poset(0, 3).is_err());
        assert!(tree_poset(2, 1).is_err());
    }
}
