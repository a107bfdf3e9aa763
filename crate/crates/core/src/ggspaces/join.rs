//! Iterated joins `EG_N = G * ... * G` (N+1 factors), their quotients
//! `BG_N`, and the right action of `H_N = G^(N+1) x| S_(N+1)`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::GgError;
use crate::complexes::{quotient_by_action, DeltaSet, Quotient};
use crate::groups::{FiniteGroup, GroupAction};

/// A simplex of the join: one vertex from each of the listed factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JoinSimplex {
    /// Strictly increasing factor indices in `0..=N`.
    pub factors: Vec<usize>,
    /// Group element labelling the vertex taken from each factor.
    pub labels: Vec<usize>,
}

impl JoinSimplex {
    pub fn dim(&self) -> usize {
        self.factors.len() - 1
    }

    /// Builds a simplex from unordered `(factor, label)` vertices.
    pub fn from_vertices(mut vertices: Vec<(usize, usize)>) -> Self {
        vertices.sort_unstable();
        let (factors, labels) = vertices.into_iter().unzip();
        Self { factors, labels }
    }
}

/// An element `(h_0..h_N; pi)` of `H_N`. It sends the vertex `g` of factor `k`
/// to the vertex `g h_k` of factor `pi(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HNElement {
    pub translations: Vec<usize>,
    pub permutation: Vec<usize>,
}

impl HNElement {
    pub fn identity(group: &FiniteGroup, n: usize) -> Self {
        Self { translations: vec![group.identity(); n + 1], permutation: (0..=n).collect() }
    }

    pub fn is_valid(&self, group: &FiniteGroup) -> bool {
        let m = self.permutation.len();
        self.translations.len() == m
            && self.translations.iter().all(|&t| t < group.order())
            && self.permutation.iter().copied().sorted().eq(0..m)
    }

    /// The element acting as `self` followed by `other`:
    /// `sigma.(self.compose(other)) == (sigma.self).other`.
    pub fn compose(&self, other: &HNElement, group: &FiniteGroup) -> HNElement {
        let permutation = self.permutation.iter().map(|&p| other.permutation[p]).collect();
        let translations = self
            .translations
            .iter()
            .zip(&self.permutation)
            .map(|(&t, &p)| group.mul(t, other.translations[p]))
            .collect();
        HNElement { translations, permutation }
    }

    pub fn inverse(&self, group: &FiniteGroup) -> HNElement {
        let m = self.permutation.len();
        let mut permutation = vec![0; m];
        for (k, &p) in self.permutation.iter().enumerate() {
            permutation[p] = k;
        }
        let translations = (0..m).map(|j| group.inv(self.translations[permutation[j]])).collect();
        HNElement { translations, permutation }
    }

    pub fn apply(&self, sigma: &JoinSimplex, group: &FiniteGroup) -> JoinSimplex {
        JoinSimplex::from_vertices(
            sigma
                .factors
                .iter()
                .zip(&sigma.labels)
                .map(|(&k, &g)| (self.permutation[k], group.mul(g, self.translations[k])))
                .collect(),
        )
    }
}

/// `|H_N| = |G|^(N+1) (N+1)!`, saturating.
pub fn hn_order(group_order: usize, n: usize) -> usize {
    let mut total: usize = 1;
    for k in 1..=n + 1 {
        total = total.saturating_mul(group_order).saturating_mul(k);
    }
    total
}

/// Every element of `H_N`: permutations in lexicographic order, translations
/// varying fastest (lexicographic, `h_0` most significant).
pub fn enumerate_hn(group: &FiniteGroup, n: usize) -> impl Iterator<Item = HNElement> + '_ {
    (0..=n).permutations(n + 1).flat_map(move |perm| {
        (0..=n)
            .map(|_| group.elements())
            .multi_cartesian_product()
            .map(move |translations| HNElement { translations, permutation: perm.clone() })
    })
}

/// `EG_N` as a delta-set, together with its left `G`-action.
///
/// Simplices of dimension `m` are numbered by the lexicographic rank of their
/// factor set, then by their labels read as base-`|G|` digits (first label
/// most significant). Vertex `(k, g)` has index `k |G| + g`.
#[derive(Clone, Debug)]
pub struct EgSpace {
    group: FiniteGroup,
    n: usize,
    delta: DeltaSet,
    left: GroupAction,
    subsets: Vec<Vec<Vec<usize>>>,
    subset_rank: Vec<HashMap<Vec<usize>, usize>>,
}

impl EgSpace {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The `N` of `EG_N`; there are `N + 1` join factors.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &DeltaSet {
        &self.delta
    }

    pub fn left_action(&self) -> &GroupAction {
        &self.left
    }

    fn labels_per_subset(&self, m: usize) -> usize {
        self.group.order().pow(m as u32 + 1)
    }

    pub fn index_of(&self, sigma: &JoinSimplex) -> Option<usize> {
        let m = sigma.dim();
        let rank = *self.subset_rank.get(m)?.get(&sigma.factors)?;
        let q = self.group.order();
        let label_rank = sigma.labels.iter().try_fold(0usize, |acc, &g| (g < q).then_some(acc * q + g))?;
        Some(rank * self.labels_per_subset(m) + label_rank)
    }

    pub fn simplex(&self, m: usize, idx: usize) -> JoinSimplex {
        let per = self.labels_per_subset(m);
        let factors = self.subsets[m][idx / per].clone();
        let q = self.group.order();
        let mut rest = idx % per;
        let mut labels = vec![0; m + 1];
        for slot in labels.iter_mut().rev() {
            *slot = rest % q;
            rest /= q;
        }
        JoinSimplex { factors, labels }
    }

    /// `(factor, element)` of every vertex.
    pub fn vertex_labels(&self) -> Vec<(usize, usize)> {
        let q = self.group.order();
        (0..self.delta.count(0)).map(|v| (v / q, v % q)).collect()
    }

    /// Index of `sigma . h` for an `m`-simplex `sigma`.
    pub fn right_apply(&self, m: usize, idx: usize, h: &HNElement) -> usize {
        let image = h.apply(&self.simplex(m, idx), &self.group);
        self.index_of(&image).expect("H_N maps simplices of EG_N to simplices")
    }

    /// `BG_N = EG_N / G`.
    pub fn quotient(&self) -> Quotient {
        quotient_by_action(&self.delta, &self.left).expect("left action on EG_N is free")
    }
}

/// Builds `EG_N` for `N >= 0`.
pub fn eg_space(group: &FiniteGroup, n: usize) -> EgSpace {
    let q = group.order();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|m| (0..=n).combinations(m + 1).collect()).collect();
    let subset_rank: Vec<HashMap<Vec<usize>, usize>> = subsets
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let counts: Vec<usize> = subsets.iter().enumerate().map(|(m, level)| level.len() * q.pow(m as u32 + 1)).collect();
    let mut space = EgSpace {
        group: group.clone(),
        n,
        delta: DeltaSet::empty(),
        left: GroupAction::trivial(&DeltaSet::empty()),
        subsets,
        subset_rank,
    };
    let mut faces = vec![Vec::new()];
    for m in 1..=n {
        let mut row = Vec::with_capacity(counts[m] * (m + 1));
        for idx in 0..counts[m] {
            let sigma = space.simplex(m, idx);
            for i in 0..=m {
                let mut face = sigma.clone();
                face.factors.remove(i);
                face.labels.remove(i);
                row.push(space.index_of(&face).expect("faces of join simplices are join simplices"));
            }
        }
        faces.push(row);
    }
    space.delta = DeltaSet::from_flat(counts.clone(), faces);
    let perms: Vec<Vec<Vec<usize>>> = group
        .elements()
        .map(|g| {
            (0..=n)
                .map(|m| {
                    (0..counts[m])
                        .map(|idx| {
                            let mut sigma = space.simplex(m, idx);
                            for l in sigma.labels.iter_mut() {
                                *l = group.mul(g, *l);
                            }
                            space.index_of(&sigma).expect("left translate is a join simplex")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    space.left = GroupAction::new(group.clone(), &space.delta, perms).expect("left multiplication is an action");
    space
}

/// `BG_N` with its projection from `EG_N`.
pub fn bg_space(group: &FiniteGroup, n: usize) -> (EgSpace, Quotient) {
    let eg = eg_space(group, n);
    let q = eg.quotient();
    (eg, q)
}

/// Whether `H_N` acts transitively on the `m`-simplices of `EG_N`, by
/// enumerating the orbit of simplex 0 under every element.
pub fn h_transitivity_check(group: &FiniteGroup, n: usize, m: usize, max_enum: usize) -> Result<bool, GgError> {
    let size = hn_order(group.order(), n);
    if size > max_enum {
        return Err(GgError::TooLarge { size, limit: max_enum });
    }
    if m > n {
        return Ok(true);
    }
    let eg = eg_space(group, n);
    let mut hit = vec![false; eg.delta().count(m)];
    for h in enumerate_hn(group, n) {
        hit[eg.right_apply(m, 0, &h)] = true;
    }
    Ok(hit.iter().all(|&b| b))
}
