mod common;

use common::from_relation;
use common::lemmas::*;
use posetcoh::singular::{chain_length, limit, pair_les_check, s_complex, t_complex};
use posetcoh::{AbelianInvariants, Poset, Presheaf};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn pullback_is_functorial(seed in any::<u64>()) { check_functoriality(seed); }

    #[test]
    fn pushforward_splits_pullback(seed in any::<u64>()) { check_injection(seed); }

    #[test]
    fn morphisms_give_natural_chain_maps(seed in any::<u64>()) { check_morphisms(seed); }

    #[test]
    fn pair_sequences_are_exact(seed in any::<u64>()) { check_pairs(seed); }

    #[test]
    fn s_and_t_complexes_agree(seed in any::<u64>()) { check_s_vs_t(seed); }

    #[test]
    fn unique_maximum_evaluates(seed in any::<u64>()) { check_maximum(seed); }

    #[test]
    fn limit_is_degree_zero(seed in any::<u64>()) { check_limit(seed); }
}

/// Every poset on at most five labelled elements (as a natural-order
/// respecting relation), constant coefficients.
fn all_small_posets() -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let mut lt = vec![vec![false; n]; n];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                lt[i][j] = mask >> b & 1 == 1;
            }
            let transitive =
                (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(lt[i][j] && lt[j][k]) || lt[i][k])));
            if transitive {
                out.push(from_relation(&lt));
            }
        }
    }
    out
}

#[test]
fn exhaustive_small_posets() {
    let posets = all_small_posets();
    assert_eq!(posets.len(), 1 + 2 + 7 + 40 + 357);
    for p in posets {
        let f = Presheaf::constant(&p, 1);
        for x in 0..p.len() {
            let closed = p.closed_interval(p.id(x)).unwrap();
            let open = p.open_interval(p.id(x)).unwrap();
            assert!(
                pair_les_check(&closed, &open, &f.restrict_to(&closed).unwrap())
                    .unwrap()
                    .exact
            );
        }
        let t = t_complex(&p, &f).unwrap().cohomology().unwrap();
        let s = s_complex(&p, &f, chain_length(&p) + 1)
            .unwrap()
            .cohomology()
            .unwrap();
        assert!(t.same_groups(&s));
        assert_eq!(
            t.at(0),
            AbelianInvariants::free(limit(&p, &f).unwrap().cols())
        );
    }
}
