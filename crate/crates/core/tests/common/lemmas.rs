//! The basic lemmas as seeded checks that panic on failure.

use posetcoh::singular::{
    chain_length, induced_matrices, is_chain_map, limit, pair_les_check, pullback_matrix,
    pushforward_matrix, s_complex, t_complex, PosetMap,
};
use posetcoh::{AbelianInvariants, IntMatrix, Poset, Presheaf, PresheafMorphism};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn instance(seed: u64) -> (ChaCha8Rng, Poset, Presheaf) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=6);
    let p = if rng.gen_bool(0.5) {
        random_graded_poset(&mut rng, n)
    } else {
        random_poset(&mut rng, n, 0.4)
    };
    let f = random_presheaf(&mut rng, &p);
    (rng, p, f)
}

fn degrees(p: &Poset) -> std::ops::RangeInclusive<i64> {
    0..=chain_length(p).max(0)
}

pub fn check_functoriality(seed: u64) {
    let (mut rng, p, f) = instance(seed);
    let (nq, nr) = (rng.gen_range(1..=5), rng.gen_range(1..=4));
    let q = random_poset(&mut rng, nq, 0.4);
    let r = random_poset(&mut rng, nr, 0.4);
    let fm = PosetMap::new(&q, &p, random_monotone(&mut rng, &q, &p)).unwrap();
    let gm = PosetMap::new(&r, &q, random_monotone(&mut rng, &r, &q)).unwrap();
    let fg = fm.compose(&gm).unwrap();
    let ff = f.pullback(&q, &fm.map).unwrap();
    let gff = ff.pullback(&r, &gm.map).unwrap();
    let tp = t_complex(&p, &f).unwrap();
    let tq = t_complex(&q, &ff).unwrap();
    let tr = t_complex(&r, &gff).unwrap();
    for n in degrees(&p).chain(degrees(&q)) {
        let whole = pullback_matrix(&fg, &tp, &tr, n);
        let steps = &pullback_matrix(&gm, &tq, &tr, n) * &pullback_matrix(&fm, &tp, &tq, n);
        assert_eq!(whole, steps, "degree {n}");
    }
    assert!(is_chain_map(
        &tp.complex,
        &tq.complex,
        &|n| pullback_matrix(&fm, &tp, &tq, n)
    ));
}

pub fn check_injection(seed: u64) {
    let (mut rng, p, f) = instance(seed);
    let keep: Vec<usize> = (0..p.len()).filter(|_| rng.gen_bool(0.6)).collect();
    let q = p.induced(&keep);
    let incl = PosetMap::inclusion(&q, &p).unwrap();
    let tp = t_complex(&p, &f).unwrap();
    let tq = t_complex(&q, &f.restrict_to(&q).unwrap()).unwrap();
    for n in degrees(&p) {
        let round =
            &pullback_matrix(&incl, &tp, &tq, n) * &pushforward_matrix(&incl, &tq, &tp, n).unwrap();
        assert!(round.is_identity() || tq.rank(n) == 0, "degree {n}");
    }
}

pub fn check_morphisms(seed: u64) {
    let (mut rng, p, f) = instance(seed);
    let h = random_presheaf(&mut rng, &p);
    let g = Presheaf::direct_sum(&[f.clone(), h]).unwrap();
    let k: i64 = rng.gen_range(-3..=3);
    let comps: Vec<IntMatrix> = (0..p.len())
        .map(|x| {
            let (a, b) = (f.dim(x), g.dim(x) - f.dim(x));
            IntMatrix::scalar(a, k).vstack(&IntMatrix::zeros(b, a))
        })
        .collect();
    let kappa = PresheafMorphism::new(&f, &g, comps.clone()).unwrap();
    let (tf, tg) = (t_complex(&p, &f).unwrap(), t_complex(&p, &g).unwrap());
    let km = induced_matrices(&kappa, &tf, &tg);
    let lo = tf.complex.min_degree();
    let at = |n: i64| {
        km.get((n - lo) as usize)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(tg.rank(n), tf.rank(n)))
    };
    assert!(is_chain_map(&tf.complex, &tg.complex, &at));

    // Naturality against pull-back along a random map into P.
    let nq = rng.gen_range(1..=5);
    let q = random_poset(&mut rng, nq, 0.4);
    let fm = PosetMap::new(&q, &p, random_monotone(&mut rng, &q, &p)).unwrap();
    let (ff, fg) = (
        f.pullback(&q, &fm.map).unwrap(),
        g.pullback(&q, &fm.map).unwrap(),
    );
    let pulled =
        PresheafMorphism::new(&ff, &fg, fm.map.iter().map(|&x| comps[x].clone()).collect())
            .unwrap();
    let (tqf, tqg) = (t_complex(&q, &ff).unwrap(), t_complex(&q, &fg).unwrap());
    let kq = induced_matrices(&pulled, &tqf, &tqg);
    for n in degrees(&q) {
        if n > chain_length(&p).max(0) {
            continue;
        }
        let left = &pullback_matrix(&fm, &tg, &tqg, n) * &at(n);
        let right = &kq[(n - lo) as usize] * &pullback_matrix(&fm, &tf, &tqf, n);
        assert_eq!(left, right, "degree {n}");
    }
}

pub fn check_pairs(seed: u64) {
    let (_, p, f) = instance(seed);
    for x in 0..p.len() {
        let closed = p.closed_interval(p.id(x)).unwrap();
        let open = p.open_interval(p.id(x)).unwrap();
        let fc = f.restrict_to(&closed).unwrap();
        let r = pair_les_check(&closed, &open, &fc).unwrap();
        assert!(r.exact, "at {}: {:?}", p.id(x), r.failure);
    }
    if p.is_graded() {
        for k in -1..=p.max_corank().unwrap() as i64 {
            let pk = p.filtration_level(k).unwrap();
            let r = pair_les_check(&p, &pk, &f).unwrap();
            assert!(r.exact, "P^{k}: {:?}", r.failure);
        }
    }
}

pub fn check_s_vs_t(seed: u64) {
    let (_, p, f) = instance(seed);
    let t = t_complex(&p, &f).unwrap().cohomology().unwrap();
    let top = chain_length(&p) + 1;
    let s = s_complex(&p, &f, top).unwrap().cohomology().unwrap();
    for n in 0..=top {
        assert_eq!(s.at(n), t.at(n), "degree {n}");
    }
}

pub fn check_maximum(seed: u64) {
    let (mut rng, p0, _) = instance(seed);
    let p = with_top(&p0);
    let f = random_presheaf(&mut rng, &p);
    let h = t_complex(&p, &f).unwrap().cohomology().unwrap();
    let top = p.index_of("top").unwrap();
    assert_eq!(h.at(0), AbelianInvariants::free(f.dim(top)));
    assert_eq!(h.nonzero().len(), (f.dim(top) > 0) as usize);
}

pub fn check_limit(seed: u64) {
    let (_, p, f) = instance(seed);
    let h0 = t_complex(&p, &f).unwrap().cohomology().unwrap().at(0);
    assert_eq!(h0, AbelianInvariants::free(limit(&p, &f).unwrap().cols()));
}
