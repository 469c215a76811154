use std::time::Instant;

use posetcoh::builders::{boundary_simplex_poset, circle_poset, BruhatPoset};
use posetcoh::cellular::{cell_signs, compare};
use posetcoh::singular::{chain_length, nondegenerate_simplices};
use posetcoh::Presheaf;

#[test]
fn covers_drop_length_by_one() {
    for n in 2..=5 {
        let b = BruhatPoset::new(n).unwrap();
        for (x, y) in b.poset.cover_pairs() {
            assert_eq!(b.length(x), b.length(y) + 1);
        }
        let w0 = b.poset.bottom().unwrap();
        assert_eq!(b.length(w0), n * (n - 1) / 2);
        assert!(b.poset.maximal().iter().all(|&t| b.length(t) == 1));
    }
}

#[test]
fn s4_chain_counts() {
    let b = BruhatPoset::new(4).unwrap();
    let counts: Vec<usize> = (0..=chain_length(&b.poset))
        .map(|n| nondegenerate_simplices(&b.poset, n).len())
        .collect();
    assert_eq!(counts, vec![23, 166, 520, 796, 588, 168]);
}

#[test]
fn induction_signs_match_canonical_generators() {
    for n in 3..=4 {
        let b = BruhatPoset::new(n).unwrap();
        let choose = |x: usize| b.canonical_simplex(x);
        let table = cell_signs(&b.poset, Some(&choose)).unwrap();
        let induced = b.sign_table().unwrap();
        assert_eq!(induced.len(), b.poset.cover_pairs().len());
        for (&(x, y), &s) in &induced {
            assert_eq!(
                table.sign(x, y),
                Some(s),
                "n={n} {} < {}",
                b.poset.id(x),
                b.poset.id(y)
            );
            if b.minimal_swap(x) == Some(y) {
                assert_eq!(s, 1);
            }
        }
    }
}

#[test]
fn diamonds_hold_for_all_sign_tables() {
    let b = BruhatPoset::new(4).unwrap();
    let choose = |x: usize| b.canonical_simplex(x);
    for t in [
        cell_signs(&circle_poset(), None).unwrap(),
        cell_signs(&boundary_simplex_poset(3).unwrap(), None).unwrap(),
        cell_signs(&b.poset, None).unwrap(),
        cell_signs(&b.poset, Some(&choose)).unwrap(),
    ] {
        let check = t.check_diamonds();
        assert_eq!(check.violations, 0);
    }
    assert!(
        cell_signs(&b.poset, None)
            .unwrap()
            .check_diamonds()
            .diamonds
            > 0
    );
}

#[test]
fn s4_theorem_instance() {
    let start = Instant::now();
    let b = BruhatPoset::new(4).unwrap();
    let r = compare(&b.poset, &Presheaf::constant(&b.poset, 1)).unwrap();
    assert!(r.cellular);
    assert!(r.all_isomorphic());
    assert_eq!(r.degrees[0].hs, posetcoh::AbelianInvariants::free(1));
    assert!(r.degrees[1..].iter().all(|d| d.hs.is_zero()));
    assert!(start.elapsed().as_secs() < 120);
}
