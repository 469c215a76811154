//! Random posets and presheaves for property tests.
#![allow(dead_code)]

pub mod cube;
pub mod lemmas;

use posetcoh::{IntMatrix, Poset, Presheaf};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random poset on `n` elements from a random relation on `0..n` that
/// respects the natural order, reduced to its covers.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Poset {
    let mut lt = vec![vec![false; n]; n];
    for (i, row) in lt.iter_mut().enumerate() {
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    from_relation(&lt)
}

/// Random graded poset: elements spread over layers, covers only between
/// consecutive layers, each element above the bottom layer gets a cover.
pub fn random_graded_poset(rng: &mut ChaCha8Rng, n: usize) -> Poset {
    let layers = rng.gen_range(1..=n.min(4));
    let mut layer: Vec<usize> = (0..n)
        .map(|i| {
            if i < layers {
                i
            } else {
                rng.gen_range(0..layers)
            }
        })
        .collect();
    layer.sort();
    let mut lt = vec![vec![false; n]; n];
    for j in 0..n {
        if layer[j] == 0 {
            continue;
        }
        let below: Vec<usize> = (0..n).filter(|&i| layer[i] + 1 == layer[j]).collect();
        let first = *below.choose(rng).unwrap();
        lt[first][j] = true;
        for &i in &below {
            if rng.gen_bool(0.4) {
                lt[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    from_relation(&lt)
}

pub fn from_relation(lt: &[Vec<bool>]) -> Poset {
    let n = lt.len();
    let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]) {
                covers.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    Poset::from_covers(&ids, &covers).unwrap()
}

/// Adjoins a new maximum `top` above every element.
pub fn with_top(p: &Poset) -> Poset {
    let mut ids: Vec<String> = p.ids().to_vec();
    ids.push("top".into());
    let mut covers = p.cover_ids();
    for &m in &p.maximal() {
        covers.push((p.id(m).to_string(), "top".into()));
    }
    Poset::from_covers(&ids, &covers).unwrap()
}

fn indicator(p: &Poset, keep: &[bool], map: impl Fn(usize, usize) -> IntMatrix) -> Presheaf {
    let dims: Vec<usize> = keep.iter().map(|&k| k as usize).collect();
    let maps = p
        .cover_pairs()
        .into_iter()
        .map(|(x, y)| {
            let m = if keep[x] && keep[y] {
                map(x, y)
            } else {
                IntMatrix::zeros(dims[x], dims[y])
            };
            ((x, y), m)
        })
        .collect();
    Presheaf::new(p, dims, maps).unwrap()
}

/// A rank-one piece: constant, supported on an up-set or down-set, or
/// with multiplication-by-`2^(h(y)-h(x))` restrictions for a monotone `h`.
fn random_piece(rng: &mut ChaCha8Rng, p: &Poset) -> Presheaf {
    let n = p.len();
    match rng.gen_range(0..4) {
        0 => Presheaf::constant(p, 1),
        1 => {
            let seeds: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let keep: Vec<bool> = (0..n).map(|x| seeds.iter().any(|&s| p.leq(s, x))).collect();
            indicator(p, &keep, |_, _| IntMatrix::identity(1))
        }
        2 => {
            let seeds: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            let keep: Vec<bool> = (0..n).map(|x| seeds.iter().any(|&s| p.leq(x, s))).collect();
            indicator(p, &keep, |_, _| IntMatrix::identity(1))
        }
        _ => {
            let mut h = vec![0u32; n];
            for &x in &p.linear_extension() {
                let base = p.lower_covers(x).iter().map(|&y| h[y]).max().unwrap_or(0);
                h[x] = base + rng.gen_range(0..2);
            }
            indicator(p, &vec![true; n], |x, y| {
                IntMatrix::scalar(1, 1i64 << (h[y] - h[x]))
            })
        }
    }
}

/// Random unimodular matrix and its inverse, from elementary operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, k: usize) -> (IntMatrix, IntMatrix) {
    let mut g = IntMatrix::identity(k);
    let mut g_inv = IntMatrix::identity(k);
    if k < 2 {
        if k == 1 && rng.gen_bool(0.5) {
            g = IntMatrix::from_i64(&[&[-1]]);
            g_inv = g.clone();
        }
        return (g, g_inv);
    }
    for _ in 0..4 {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = rng.gen_range(-2..=2);
        let mut e = IntMatrix::identity(k);
        e.set(i, j, c);
        let mut e_inv = IntMatrix::identity(k);
        e_inv.set(i, j, -c);
        g = &e * &g;
        g_inv = &g_inv * &e_inv;
    }
    (g, g_inv)
}

/// Direct sum of one to three random pieces, in a random basis at every
/// element.
pub fn random_presheaf(rng: &mut ChaCha8Rng, p: &Poset) -> Presheaf {
    let parts: Vec<Presheaf> = (0..rng.gen_range(1..=3))
        .map(|_| random_piece(rng, p))
        .collect();
    let f = Presheaf::direct_sum(&parts).unwrap();
    let (g, g_inv): (Vec<_>, Vec<_>) = (0..p.len())
        .map(|x| random_unimodular(rng, f.dim(x)))
        .unzip();
    f.conjugate(&g, &g_inv).unwrap()
}

/// Random order-preserving map `source -> target`: rejection sampling, with
/// a constant map as fallback.
pub fn random_monotone(rng: &mut ChaCha8Rng, source: &Poset, target: &Poset) -> Vec<usize> {
    for _ in 0..200 {
        let map: Vec<usize> = (0..source.len())
            .map(|_| rng.gen_range(0..target.len()))
            .collect();
        if source
            .cover_pairs()
            .iter()
            .all(|&(a, b)| target.leq(map[a], map[b]))
        {
            return map;
        }
    }
    vec![rng.gen_range(0..target.len()); source.len()]
}
