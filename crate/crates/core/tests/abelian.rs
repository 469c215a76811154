use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use posetcoh::abelian::{
    hnf_rank, invariant_factors, kernel_lattice, smith, FpAbGroup, GroupMorphism, Lattice,
};
use posetcoh::IntMatrix;
use proptest::prelude::*;

/// Fraction-free Gaussian elimination determinant.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// `d_k = D_k / D_{k-1}` with `D_k` the gcd of all `k x k` minors.
fn factors_from_minors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let minor = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m.get(r, c).clone()).collect())
                    .collect();
                g = g.gcd(&bareiss(minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

fn det(m: &IntMatrix) -> BigInt {
    bareiss((0..m.rows()).map(|r| m.row(r).to_vec()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn smith_matches_minors(m in matrix()) {
        let sd = smith(&m);
        prop_assert_eq!(&(&(&sd.u * &m) * &sd.v), &sd.s);
        prop_assert!((&sd.u * &sd.u_inv).is_identity());
        prop_assert!(det(&sd.v).abs().is_one());
        let expected = factors_from_minors(&m);
        prop_assert_eq!(sd.diagonal(), expected.clone());
        prop_assert_eq!(invariant_factors(&m), expected);
    }

    #[test]
    fn hermite_form_postconditions(m in matrix()) {
        let (h, u, rank) = hnf_rank(&m);
        prop_assert_eq!(&(&u * &m), &h);
        prop_assert!(det(&u).abs().is_one());
        prop_assert_eq!(rank, factors_from_minors(&m).len());
        let mut last = None;
        for r in 0..rank {
            let p = (0..h.cols()).find(|&c| !h.get(r, c).is_zero()).unwrap();
            prop_assert!(last.is_none_or(|l| p > l));
            prop_assert!(h.get(r, p).is_positive());
            for above in 0..r {
                prop_assert!(!h.get(above, p).is_negative() && h.get(above, p) < h.get(r, p));
            }
            last = Some(p);
        }
        prop_assert!((rank..h.rows()).all(|r| h.row(r).iter().all(Zero::is_zero)));
    }

    #[test]
    fn kernel_is_saturated_basis(m in matrix()) {
        let k = kernel_lattice(&m);
        prop_assert!((&m * &k).is_zero());
        prop_assert_eq!(k.cols(), m.cols() - factors_from_minors(&m).len());
        // A saturated lattice has trivial torsion in the quotient.
        prop_assert!(invariant_factors(&k).iter().all(One::is_one));
    }

    #[test]
    fn lattice_membership(m in matrix(), coeffs in proptest::collection::vec(-3i64..=3, 4)) {
        let l = Lattice::from_columns(&m);
        let v: Vec<BigInt> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c) * coeffs[c % coeffs.len()]).sum())
            .collect();
        prop_assert!(l.contains(&v));
        let c = l.coordinates(&v).unwrap();
        prop_assert_eq!(l.basis_columns().mul_vec(&c), v);
    }

    #[test]
    fn presentation_invariants(m in matrix()) {
        let g = FpAbGroup::new(m.rows(), m.clone()).unwrap();
        let sp = g.smith_presentation();
        prop_assert!((&sp.to * &sp.from).is_identity());
        prop_assert!(g.is_isomorphic(&sp.group));
        let factors = factors_from_minors(&m);
        prop_assert_eq!(g.invariants().rank, m.rows() - factors.len());
        let torsion: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
        prop_assert_eq!(&g.invariants().torsion, &torsion);
        // to and from are mutually inverse morphisms.
        prop_assert!(GroupMorphism::new(g.clone(), sp.group.clone(), sp.to.clone()).is_ok());
        prop_assert!(GroupMorphism::new(sp.group.clone(), g.clone(), sp.from.clone()).is_ok());
    }
}

#[test]
fn documented_examples() {
    let (h, _, _) = hnf_rank(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
    assert_eq!(h, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    assert_eq!(
        smith(&IntMatrix::from_i64(&[
            &[2, 4, 4],
            &[-6, 6, 12],
            &[10, -4, -16]
        ]))
        .diagonal(),
        vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
    );
}
