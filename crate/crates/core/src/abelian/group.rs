use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use super::normal_form::{kernel_lattice, smith, Lattice};
use super::sparse::{invariant_factors, SparseElim};
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated abelian group:
/// `Z^rank + Z/d_1 + ... + Z/d_k` with `1 < d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    #[serde(serialize_with = "ser_torsion", deserialize_with = "de_torsion")]
    pub torsion: Vec<BigInt>,
}

fn ser_torsion<S: Serializer>(t: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for d in t {
        match d.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&d.to_string())?,
        }
    }
    seq.end()
}

fn de_torsion<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Coef {
        Small(u64),
        Big(String),
    }
    let raw = Vec::<Coef>::deserialize(d)?;
    raw.into_iter()
        .map(|c| match c {
            Coef::Small(v) => Ok(BigInt::from(v)),
            Coef::Big(s) => s.parse().map_err(D::Error::custom),
        })
        .collect()
}

impl AbelianInvariants {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(rank: usize, torsion: Vec<i64>) -> Self {
        AbelianInvariants {
            rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Invariants of `Z^generators / (lattice with the given invariant factors)`.
    pub fn from_factors(generators: usize, factors: &[BigInt]) -> Self {
        AbelianInvariants {
            rank: generators - factors.len(),
            torsion: factors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Finitely presented abelian group `Z^generators / im(relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpAbGroup {
    generators: usize,
    relations: IntMatrix,
    invariants: AbelianInvariants,
}

impl FpAbGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::Shape(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                generators
            )));
        }
        let invariants =
            AbelianInvariants::from_factors(generators, &invariant_factors(&relations));
        Ok(FpAbGroup {
            generators,
            relations,
            invariants,
        })
    }

    pub fn free(rank: usize) -> Self {
        FpAbGroup {
            generators: rank,
            relations: IntMatrix::zeros(rank, 0),
            invariants: AbelianInvariants::free(rank),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `Z/d_1 + ... + Z/d_k + Z^rank` with diagonal relations.
    pub fn from_invariants(inv: &AbelianInvariants) -> Self {
        let t = inv.torsion.len();
        let g = t + inv.rank;
        let mut rel = IntMatrix::zeros(g, t);
        for (i, d) in inv.torsion.iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        FpAbGroup {
            generators: g,
            relations: rel,
            invariants: inv.clone(),
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &AbelianInvariants {
        &self.invariants
    }

    pub fn is_free_presentation(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_zero()
    }

    pub fn is_isomorphic(&self, other: &FpAbGroup) -> bool {
        self.invariants == other.invariants
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_columns(&self.relations)
    }

    /// Recomputes the normal form from the relations.
    pub fn renormalized(&self) -> Self {
        FpAbGroup::new(self.generators, self.relations.clone()).expect("shape already checked")
    }

    /// Smith presentation: an isomorphic group with diagonal relations, and
    /// the generator-level maps realizing the isomorphism.
    pub fn smith_presentation(&self) -> SmithPresentation {
        SmithPresentation::of(self)
    }

    /// Direct sum presentation, generators concatenated in order.
    pub fn direct_sum(parts: &[FpAbGroup]) -> FpAbGroup {
        let blocks: Vec<IntMatrix> = parts.iter().map(|p| p.relations.clone()).collect();
        let rel = IntMatrix::block_diagonal(&blocks);
        FpAbGroup::new(rel.rows(), rel).expect("block shapes agree")
    }

    /// `A (x) Z^k`, generators ordered as (generator, coordinate).
    pub fn tensor_free(&self, k: usize) -> FpAbGroup {
        let rel = self.relations.kronecker(&IntMatrix::identity(k));
        FpAbGroup::new(self.generators * k, rel).expect("kronecker shape")
    }
}

impl fmt::Display for FpAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.invariants.fmt(f)
    }
}

/// A group `G = Z^g / im R` rewritten as `Z^k / im D` with `D` diagonal.
///
/// `to` (k x g) and `from` (g x k) are generator-level homomorphisms
/// inducing mutually inverse isomorphisms; the first `torsion.len()`
/// simplified generators carry the torsion, the rest are free.
#[derive(Debug, Clone)]
pub struct SmithPresentation {
    pub group: FpAbGroup,
    pub to: IntMatrix,
    pub from: IntMatrix,
}

impl SmithPresentation {
    pub fn of(g: &FpAbGroup) -> Self {
        let n = g.generators;
        let mut elim = SparseElim::new(&g.relations);
        let subs = elim.eliminate_units();
        let (kept, rest) = elim.remainder();

        // Express every original generator in terms of the kept ones.
        let kept_pos: BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut expr: Vec<Option<Vec<(usize, BigInt)>>> = vec![None; n];
        for (&r, &i) in &kept_pos {
            expr[r] = Some(vec![(i, BigInt::one())]);
        }
        for s in subs.iter().rev() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (other, coef) in &s.expr {
                for (i, v) in expr[*other].as_ref().expect("substituted in reverse order") {
                    *acc.entry(*i).or_insert_with(BigInt::zero) += coef * v;
                }
            }
            expr[s.gen] = Some(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        let mut to_sparse = IntMatrix::zeros(kept.len(), n);
        for (g_idx, e) in expr.iter().enumerate() {
            for (i, v) in e.as_ref().unwrap() {
                to_sparse.set(*i, g_idx, v.clone());
            }
        }

        let d = smith(&rest);
        let diag = d.diagonal();
        let k_all = kept.len();
        // Simplified generators: nonunit diagonal positions, then the free tail.
        let mut torsion_pos = Vec::new();
        let mut torsion = Vec::new();
        for (i, di) in diag.iter().enumerate() {
            if !di.is_one() {
                torsion_pos.push(i);
                torsion.push(di.clone());
            }
        }
        let mut keep_rows = torsion_pos.clone();
        keep_rows.extend(d.rank..k_all);
        let to = &d.u.select_rows(&keep_rows) * &to_sparse;
        let u_inv_cols = d.u_inv.select_columns(&keep_rows);
        let mut from = IntMatrix::zeros(n, keep_rows.len());
        for (i, &r) in kept.iter().enumerate() {
            for c in 0..keep_rows.len() {
                from.set(r, c, u_inv_cols.get(i, c).clone());
            }
        }
        let inv = AbelianInvariants {
            rank: k_all - d.rank,
            torsion,
        };
        debug_assert_eq!(&inv, g.invariants());
        SmithPresentation {
            group: FpAbGroup::from_invariants(&inv),
            to,
            from,
        }
    }
}

/// Homomorphism of finitely presented groups given on generators.
#[derive(Debug, Clone)]
pub struct GroupMorphism {
    pub source: FpAbGroup,
    pub target: FpAbGroup,
    pub matrix: IntMatrix,
}

impl GroupMorphism {
    /// Checks shapes and that relations of the source map into relations of
    /// the target.
    pub fn new(source: FpAbGroup, target: FpAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.generators, source.generators) {
            return Err(Error::Shape(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators,
                source.generators
            )));
        }
        if !source.relations.is_zero() {
            let image = &matrix * &source.relations;
            if !image.is_zero() && !target.relation_lattice().contains_columns(&image) {
                return Err(Error::NotWellDefined);
            }
        }
        Ok(GroupMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: FpAbGroup, target: FpAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.generators, source.generators);
        GroupMorphism {
            source,
            target,
            matrix,
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &GroupMorphism) -> Result<GroupMorphism> {
        if first.target.generators != self.source.generators {
            return Err(Error::Shape(
                "composable morphisms must share a group".into(),
            ));
        }
        Ok(GroupMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    /// True when the induced map is zero.
    pub fn is_zero_map(&self) -> bool {
        self.matrix.is_zero()
            || self
                .target
                .relation_lattice()
                .contains_columns(&self.matrix)
    }
}

/// `ker(g) / im(f)` at the middle group of `A --f--> B --g--> C`.
pub fn subquotient_homology(f: &GroupMorphism, g: &GroupMorphism) -> Result<FpAbGroup> {
    let b = &f.target;
    if g.source.generators != b.generators {
        return Err(Error::Shape(
            "morphisms do not meet at a common group".into(),
        ));
    }
    let gf = &g.matrix * &f.matrix;
    let c_lattice = g.target.relation_lattice();
    if !gf.is_zero() && !c_lattice.contains_columns(&gf) {
        return Err(Error::BrokenComplex(0));
    }
    let nb = b.generators;
    // x with g x in the relation lattice of C: kernel of [G | -R_C], top rows.
    let stacked = g.matrix.hstack(&g.target.relations.neg());
    let k = kernel_lattice(&stacked);
    let top: Vec<usize> = (0..nb).collect();
    let cycles = Lattice::from_columns(&k.select_rows(&top));
    let boundaries = f.matrix.hstack(&b.relations);
    let rel = cycles
        .coordinate_matrix(&boundaries)
        .ok_or(Error::BrokenComplex(0))?;
    FpAbGroup::new(cycles.rank(), rel)
}
