//! Finite groups given by Cayley tables, integer representations, and
//! simplicial actions on delta-sets.

use num_traits::Zero;
use thiserror::Error;

use crate::complexes::{DeltaSet, SimplicialComplex};
use crate::exact::{determinant, identity_matrix, mat_mul, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square or is empty")]
    NotSquare,
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("representation: {0}")]
    BadRepresentation(String),
    #[error("action: {0}")]
    BadAction(String),
}

/// A finite group as a validated Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let m = table.len();
        if m == 0 || table.iter().any(|r| r.len() != m) {
            return Err(GroupError::NotSquare);
        }
        for (row, r) in table.iter().enumerate() {
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= m) {
                return Err(GroupError::EntryOutOfRange { row, col, value });
            }
        }
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let mul = |a: usize, b: usize| flat[a * m + b];
        let identity = (0..m)
            .find(|&e| (0..m).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let inverses = (0..m)
            .map(|x| {
                (0..m)
                    .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                    .ok_or(GroupError::NoInverse(x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Self { order: m, table: flat, identity, inverses })
    }

    /// The cyclic group of order `m`, element `i` standing for `i mod m`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let table: Vec<usize> = (0..m * m).map(|x| (x / m + x % m) % m).collect();
        let inverses = (0..m).map(|x| (m - x) % m).collect();
        Self { order: m, table, identity: 0, inverses }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Abelian with every element squaring to the identity.
    pub fn is_elementary_abelian(&self) -> bool {
        self.is_abelian() && (0..self.order).all(|a| self.mul(a, a) == self.identity)
    }

    /// Elements in index order.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }
}

pub fn group_from_table(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_table(table)
}

/// `Z_2^k` with elements indexed by bit-vectors; the product is XOR.
pub fn elementary_abelian(k: usize) -> FiniteGroup {
    assert!(k < 16, "Z_2^{k} is beyond desk scale");
    let m = 1usize << k;
    FiniteGroup {
        order: m,
        table: (0..m * m).map(|x| (x / m) ^ (x % m)).collect(),
        identity: 0,
        inverses: (0..m).collect(),
    }
}

/// A linear representation by integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<IntMatrix>,
}

impl Representation {
    /// Validates shape, `rho(e) = I`, `rho(gh) = rho(g) rho(h)` and invertibility.
    pub fn new(group: FiniteGroup, dim: usize, matrices: Vec<IntMatrix>) -> Result<Self, GroupError> {
        let bad = |msg: String| Err(GroupError::BadRepresentation(msg));
        if matrices.len() != group.order() {
            return bad(format!("{} matrices for a group of order {}", matrices.len(), group.order()));
        }
        if let Some(g) = matrices.iter().position(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
            return bad(format!("matrix of element {g} is not {dim}x{dim}"));
        }
        if matrices[group.identity()] != identity_matrix(dim) {
            return bad("identity element is not represented by the identity matrix".into());
        }
        for g in group.elements() {
            if determinant(&matrices[g]).is_zero() {
                return bad(format!("matrix of element {g} is singular"));
            }
            for h in group.elements() {
                let prod = mat_mul(&matrices[g], &matrices[h]);
                if prod.as_ref() != Some(&matrices[group.mul(g, h)]) {
                    return bad(format!("rho({g}) rho({h}) != rho({g}*{h})"));
                }
            }
        }
        Ok(Self { group, dim, matrices })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }
}

/// `Z_2^k` acting on `Z^k` by flipping the sign of coordinate `i` when bit
/// `i` of the element is set.
pub fn sign_representation(k: usize) -> Representation {
    assert!(k >= 1);
    let group = elementary_abelian(k);
    let matrices = group
        .elements()
        .map(|g| {
            (0..k)
                .map(|i| (0..k).map(|j| if i != j { 0 } else if g >> i & 1 == 1 { -1 } else { 1 }).collect())
                .collect()
        })
        .collect();
    Representation::new(group, k, matrices).expect("sign representation is valid")
}

/// `Z_2` acting on `Z^dim` by `-I`.
pub fn antipodal_representation(dim: usize) -> Representation {
    assert!(dim >= 1);
    let neg: IntMatrix = (0..dim).map(|i| (0..dim).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
    Representation::new(elementary_abelian(1), dim, vec![identity_matrix(dim), neg])
        .expect("antipodal representation is valid")
}

/// A group acting on a delta-set by dimension-preserving permutations that
/// commute with every face map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    // perms[g][k][s] = g . s
    perms: Vec<Vec<Vec<usize>>>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, target: &DeltaSet, perms: Vec<Vec<Vec<usize>>>) -> Result<Self, GroupError> {
        let bad = |msg: String| Err(GroupError::BadAction(msg));
        let dims = target.counts().len();
        if perms.len() != group.order() {
            return bad(format!("{} permutations for a group of order {}", perms.len(), group.order()));
        }
        for (g, per_dim) in perms.iter().enumerate() {
            if per_dim.len() != dims {
                return bad(format!("element {g}: {} dimensions, target has {dims}", per_dim.len()));
            }
            for (k, p) in per_dim.iter().enumerate() {
                let n = target.count(k);
                let mut seen = vec![false; n];
                if p.len() != n || p.iter().any(|&t| t >= n || std::mem::replace(&mut seen[t], true)) {
                    return bad(format!("element {g} does not permute the {k}-simplices"));
                }
            }
        }
        let act = Self { group, perms };
        let e = act.group.identity();
        for k in 0..dims {
            if act.perms[e][k].iter().enumerate().any(|(s, &t)| s != t) {
                return bad("identity element acts nontrivially".into());
            }
        }
        for g in act.group.elements() {
            for h in act.group.elements() {
                let gh = act.group.mul(g, h);
                for k in 0..dims {
                    for s in 0..target.count(k) {
                        if act.apply(gh, k, s) != act.apply(g, k, act.apply(h, k, s)) {
                            return bad(format!("(g h).s != g.(h.s) for g={g}, h={h}, simplex {s} of dimension {k}"));
                        }
                    }
                }
            }
        }
        for g in act.group.elements() {
            for k in 1..dims {
                for s in 0..target.count(k) {
                    let gs = act.apply(g, k, s);
                    for i in 0..=k {
                        if target.face(k, gs, i) != act.apply(g, k - 1, target.face(k, s, i)) {
                            return bad(format!("element {g} does not commute with d_{i} on simplex {s} of dimension {k}"));
                        }
                    }
                }
            }
        }
        Ok(act)
    }

    /// The trivial group acting trivially.
    pub fn trivial(target: &DeltaSet) -> Self {
        let perms = vec![target.counts().iter().map(|&n| (0..n).collect()).collect()];
        Self { group: FiniteGroup::cyclic(1), perms }
    }

    /// Extends vertex permutations of a complex to all its faces. Fails when
    /// some element does not preserve the vertex order of a face, since the
    /// face maps would then not commute.
    pub fn from_vertex_maps(
        group: FiniteGroup,
        complex: &SimplicialComplex,
        vertex_maps: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let target = complex
            .to_delta()
            .map_err(|e| GroupError::BadAction(format!("target is not a complex: {e}")))?;
        let dims = complex.dim().map_or(0, |d| d + 1);
        let mut perms = Vec::with_capacity(vertex_maps.len());
        for (g, vm) in vertex_maps.iter().enumerate() {
            if vm.len() != complex.vertex_count() {
                return Err(GroupError::BadAction(format!("vertex map of element {g} has wrong length")));
            }
            let mut per_dim = Vec::with_capacity(dims);
            for k in 0..dims {
                let mut p = Vec::with_capacity(complex.faces(k).len());
                for f in complex.faces(k) {
                    let image: Vec<usize> = f.iter().map(|&v| vm[v]).collect();
                    let mut sorted = image.clone();
                    sorted.sort_unstable();
                    if sorted != image {
                        return Err(GroupError::BadAction(format!(
                            "element {g} reverses the vertex order of face {f:?}"
                        )));
                    }
                    let idx = complex
                        .index_of(&sorted)
                        .ok_or_else(|| GroupError::BadAction(format!("element {g} maps {f:?} outside the complex")))?;
                    p.push(idx);
                }
                per_dim.push(p);
            }
            perms.push(per_dim);
        }
        Self::new(group, &target, perms)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn apply(&self, g: usize, k: usize, s: usize) -> usize {
        self.perms[g][k][s]
    }

    pub fn perms(&self) -> &[Vec<Vec<usize>>] {
        &self.perms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::determinant;
    use num_bigint::BigInt;

    #[test]
    fn z2_from_table() {
        let g = group_from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn klein_four_from_table() {
        let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let g = group_from_table(&table).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.elements().all(|x| g.inv(x) == x));
        assert_eq!(g, elementary_abelian(2));
    }

    #[test]
    fn rejects_non_groups() {
        // a monoid: identity exists but 1 has no inverse
        assert_eq!(group_from_table(&[vec![0, 1], vec![1, 1]]), Err(GroupError::NoInverse(1)));
        assert_eq!(group_from_table(&[vec![1, 0], vec![0, 0]]), Err(GroupError::NoIdentity));
        assert!(matches!(group_from_table(&[vec![0, 2], vec![1, 0]]), Err(GroupError::EntryOutOfRange { .. })));
        assert_eq!(group_from_table(&[vec![0, 1]]), Err(GroupError::NotSquare));
        // identity 0, every element self-inverse, but (1*1)*2 != 1*(1*2)
        let quasi = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 0]];
        assert!(matches!(group_from_table(&quasi), Err(GroupError::NotAssociative { .. }) | Err(GroupError::NoInverse(_))));
    }

    #[test]
    fn elementary_abelian_examples() {
        assert_eq!(elementary_abelian(0).order(), 1);
        assert_eq!(elementary_abelian(1), FiniteGroup::cyclic(2));
        let g = elementary_abelian(3);
        assert_eq!(g.order(), 8);
        assert!(g.is_elementary_abelian());
        assert!((1..8).all(|x| x != g.identity() && g.mul(x, x) == g.identity()));
        assert!(!FiniteGroup::cyclic(4).is_elementary_abelian());
        assert_eq!(FiniteGroup::from_table(&FiniteGroup::cyclic(5).table()).unwrap(), FiniteGroup::cyclic(5));
    }

    #[test]
    fn sign_representation_examples() {
        assert_eq!(sign_representation(1).matrix(1), &vec![vec![-1]]);
        for k in 1..=4 {
            let rho = sign_representation(k);
            assert_eq!(rho.matrix(0), &identity_matrix(k));
            for g in rho.group().elements() {
                let inv = rho.group().inv(g);
                assert_eq!(mat_mul(rho.matrix(g), rho.matrix(inv)).unwrap(), identity_matrix(k));
                let sign = if (g as u32).count_ones() % 2 == 0 { 1 } else { -1 };
                assert_eq!(determinant(rho.matrix(g)), BigInt::from(sign));
            }
        }
        assert_eq!(sign_representation(2).matrix(3), &vec![vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn rejects_bad_representations() {
        let z2 = elementary_abelian(1);
        assert!(Representation::new(z2.clone(), 1, vec![vec![vec![1]], vec![vec![2]]]).is_err());
        assert!(Representation::new(z2.clone(), 1, vec![vec![vec![1]], vec![vec![0]]]).is_err());
        assert!(Representation::new(z2, 1, vec![vec![vec![-1]], vec![vec![-1]]]).is_err());
        let rot = vec![vec![0, -1], vec![1, 0]];
        let z4 = FiniteGroup::cyclic(4);
        let mut ms = vec![identity_matrix(2)];
        for _ in 1..4 {
            let next = mat_mul(ms.last().unwrap(), &rot).unwrap();
            ms.push(next);
        }
        assert!(Representation::new(z4, 2, ms).is_ok());
    }
}
