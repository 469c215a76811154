//! Khovanov cube complex built independently of the library's builders.

use std::collections::HashMap;

use posetcoh::{CochainComplex, FpAbGroup, IntMatrix};

/// Independent cube: circles traced by a separate union-find, tensor basis
/// stored as maps from circle representative to `X`-exponent.
pub struct Cube {
    pd: Vec<[u32; 4]>,
}

impl Cube {
    pub fn parse(text: &str) -> Cube {
        let pd = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let v: Vec<u32> = l.trim()[1..]
                    .split(',')
                    .map(|t| t.parse().unwrap())
                    .collect();
                [v[0], v[1], v[2], v[3]]
            })
            .collect();
        Cube { pd }
    }

    /// Label -> least label of its circle.
    fn circle_of(&self, state: &[bool]) -> HashMap<u32, u32> {
        let mut rep: HashMap<u32, u32> = HashMap::new();
        for c in &self.pd {
            for &l in c {
                rep.insert(l, l);
            }
        }
        let root = |rep: &HashMap<u32, u32>, mut l: u32| {
            while rep[&l] != l {
                l = rep[&l];
            }
            l
        };
        for (k, &[a, b, c, d]) in self.pd.iter().enumerate() {
            let pairs = if state[k] {
                [(a, d), (b, c)]
            } else {
                [(a, b), (c, d)]
            };
            for (u, v) in pairs {
                let (ru, rv) = (root(&rep, u), root(&rep, v));
                rep.insert(ru.max(rv), ru.min(rv));
            }
        }
        let keys: Vec<u32> = rep.keys().copied().collect();
        keys.into_iter().map(|l| (l, root(&rep, l))).collect()
    }

    pub fn circles(&self, state: &[bool]) -> Vec<u32> {
        let mut c: Vec<u32> = self.circle_of(state).values().copied().collect();
        c.sort();
        c.dedup();
        c
    }

    fn basis(&self, state: &[bool]) -> Vec<HashMap<u32, u8>> {
        let circles = self.circles(state);
        (0..1usize << circles.len())
            .map(|m| {
                circles
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, (m >> i & 1) as u8))
                    .collect()
            })
            .collect()
    }

    /// Edge map from `state` to `state` with crossing `k` switched on.
    pub fn edge(&self, state: &[bool], k: usize) -> IntMatrix {
        let mut next = state.to_vec();
        next[k] = true;
        let (src, dst) = (self.circle_of(state), self.circle_of(&next));
        let (sb, db) = (self.basis(state), self.basis(&next));
        let index: HashMap<Vec<(u32, u8)>, usize> = db
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut key: Vec<(u32, u8)> = v.iter().map(|(&a, &b)| (a, b)).collect();
                key.sort();
                (key, i)
            })
            .collect();
        let mut m = IntMatrix::zeros(db.len(), sb.len());
        let touched = self.pd[k];
        for (j, v) in sb.iter().enumerate() {
            let old: Vec<u32> = {
                let mut o: Vec<u32> = touched.iter().map(|l| src[l]).collect();
                o.sort();
                o.dedup();
                o
            };
            let new: Vec<u32> = {
                let mut o: Vec<u32> = touched.iter().map(|l| dst[l]).collect();
                o.sort();
                o.dedup();
                o
            };
            // Every circle untouched by crossing k keeps its representative.
            let mut rest: HashMap<u32, u8> = HashMap::new();
            for (&c, &e) in v {
                if !old.contains(&c) {
                    rest.insert(c, e);
                }
            }
            let outs: Vec<HashMap<u32, u8>> = if old.len() == 2 {
                let e = v[&old[0]] + v[&old[1]];
                if e > 1 {
                    vec![]
                } else {
                    vec![HashMap::from([(new[0], e)])]
                }
            } else if v[&old[0]] == 1 {
                vec![HashMap::from([(new[0], 1), (new[1], 1)])]
            } else {
                vec![
                    HashMap::from([(new[0], 1), (new[1], 0)]),
                    HashMap::from([(new[0], 0), (new[1], 1)]),
                ]
            };
            for o in outs {
                let mut key: Vec<(u32, u8)> =
                    rest.iter().chain(o.iter()).map(|(&a, &b)| (a, b)).collect();
                key.sort();
                *m.entry_mut(index[&key], j) += 1;
            }
        }
        m
    }

    pub fn complex(&self) -> CochainComplex {
        let n = self.pd.len();
        let states: Vec<Vec<Vec<bool>>> = (0..=n)
            .map(|k| {
                (0u32..1 << n)
                    .filter(|m| m.count_ones() as usize == k)
                    .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect())
                    .collect()
            })
            .collect();
        let dim = |s: &Vec<bool>| 1usize << self.circles(s).len();
        let mut groups = Vec::new();
        let mut diffs = Vec::new();
        for k in 0..=n {
            let offs: Vec<usize> = states[k]
                .iter()
                .scan(0, |acc, s| {
                    let o = *acc;
                    *acc += dim(s);
                    Some(o)
                })
                .collect();
            let total: usize = states[k].iter().map(dim).sum();
            groups.push(FpAbGroup::free(total));
            if k == n {
                break;
            }
            let next_offs: Vec<usize> = states[k + 1]
                .iter()
                .scan(0, |acc, s| {
                    let o = *acc;
                    *acc += dim(s);
                    Some(o)
                })
                .collect();
            let next_total: usize = states[k + 1].iter().map(dim).sum();
            let mut d = IntMatrix::zeros(next_total, total);
            for (a, s) in states[k].iter().enumerate() {
                for i in (0..n).filter(|&i| !s[i]) {
                    let sign = if s[..i].iter().filter(|&&b| b).count() % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    let mut t = s.clone();
                    t[i] = true;
                    let b = states[k + 1].iter().position(|u| *u == t).unwrap();
                    let e = self.edge(s, i);
                    d.add_block(next_offs[b], offs[a], &e.scaled(&sign.into()));
                }
            }
            diffs.push(d);
        }
        CochainComplex::new(0, groups, diffs).unwrap()
    }
}
