//! Simplicial complexes and delta-sets.
//!
//! A [`DeltaSet`] stores only non-degenerate simplices together with their
//! face maps `d_i`. Simplicial complexes convert into delta-sets with faces
//! ordered by increasing vertex index, so `d_i` deletes the `i`-th vertex.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupAction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("simplicial identity d_{i} d_{j} = d_{} d_{i} fails on simplex {simplex} of dimension {dim}", j - 1)]
    IdentityViolation { dim: usize, simplex: usize, i: usize, j: usize },
    #[error("complex is not downward closed: face {face:?} of {of:?} is missing")]
    NotClosed { face: Vec<usize>, of: Vec<usize> },
    #[error("action is not free: element {g} fixes simplex {simplex} of dimension {dim}")]
    NotFree { dim: usize, simplex: usize, g: usize },
    #[error("action is not free on vertices: element {g} fixes vertex {vertex}")]
    NotFreeOnVertices { vertex: usize, g: usize },
}

/// Per-dimension face counts `f_0, ..., f_d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// `f_k`, zero above the top dimension.
    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// Graded simplex tables with face maps.
///
/// `faces[k]` is flat: simplex `s` of dimension `k >= 1` owns the slice
/// `faces[k][s*(k+1)..(s+1)*(k+1)]`, entry `i` being the index of `d_i(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSet {
    counts: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl DeltaSet {
    /// Builds a delta-set from nested face tuples, checking only index ranges
    /// and tuple lengths. Use [`DeltaSet::validate`] for the simplicial identities.
    pub fn new(counts: Vec<usize>, faces: Vec<Vec<Vec<usize>>>) -> Result<Self, ComplexError> {
        let dim_count = counts.len();
        let mut flat = vec![Vec::new()];
        for k in 1..dim_count {
            // faces[0] may be omitted
            let table = faces
                .get(k)
                .ok_or_else(|| ComplexError::Malformed(format!("missing face table for dimension {k}")))?;
            if table.len() != counts[k] {
                return Err(ComplexError::Malformed(format!(
                    "dimension {k}: {} face tuples for {} simplices",
                    table.len(),
                    counts[k]
                )));
            }
            let mut row = Vec::with_capacity(counts[k] * (k + 1));
            for (s, tuple) in table.iter().enumerate() {
                if tuple.len() != k + 1 {
                    return Err(ComplexError::Malformed(format!(
                        "simplex {s} of dimension {k} has {} faces, expected {}",
                        tuple.len(),
                        k + 1
                    )));
                }
                if let Some(bad) = tuple.iter().find(|&&f| f >= counts[k - 1]) {
                    return Err(ComplexError::Malformed(format!(
                        "simplex {s} of dimension {k} refers to missing face {bad}"
                    )));
                }
                row.extend_from_slice(tuple);
            }
            flat.push(row);
        }
        if faces.len() > dim_count.max(1) {
            return Err(ComplexError::Malformed("face tables above the top dimension".into()));
        }
        Ok(Self { counts, faces: flat })
    }

    pub(crate) fn from_flat(counts: Vec<usize>, faces: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(faces.len(), counts.len().max(1));
        Self { counts, faces }
    }

    pub fn empty() -> Self {
        Self { counts: Vec::new(), faces: vec![Vec::new()] }
    }

    /// Top dimension, `None` for the empty delta-set.
    pub fn dim(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    #[inline]
    pub fn face(&self, k: usize, s: usize, i: usize) -> usize {
        debug_assert!(k >= 1 && i <= k);
        self.faces[k][s * (k + 1) + i]
    }

    /// All faces `d_0 s, ..., d_k s` of a `k`-simplex.
    pub fn faces_of(&self, k: usize, s: usize) -> &[usize] {
        &self.faces[k][s * (k + 1)..(s + 1) * (k + 1)]
    }

    /// Nested copy of the face tables, `out[k][s][i] = d_i(s)`; `out[0]` is empty.
    pub fn face_tables(&self) -> Vec<Vec<Vec<usize>>> {
        (0..self.counts.len())
            .map(|k| {
                if k == 0 {
                    Vec::new()
                } else {
                    self.faces[k].chunks(k + 1).map(<[usize]>::to_vec).collect()
                }
            })
            .collect()
    }

    /// The face of a `k`-simplex spanned by the given vertex positions
    /// (strictly increasing, within `0..=k`). Returns its index in dimension
    /// `positions.len() - 1`.
    pub fn face_by_positions(&self, k: usize, s: usize, positions: &[usize]) -> usize {
        debug_assert!(!positions.is_empty() && positions.windows(2).all(|w| w[0] < w[1]));
        let mut keep = positions.iter().rev().peekable();
        let mut cur = s;
        let mut cur_dim = k;
        // delete from the highest position down so lower positions stay put
        for pos in (0..=k).rev() {
            if keep.peek() == Some(&&pos) {
                keep.next();
                continue;
            }
            cur = self.face(cur_dim, cur, pos);
            cur_dim -= 1;
        }
        cur
    }

    /// Face through the first `p + 1` vertices.
    pub fn front_face(&self, k: usize, s: usize, p: usize) -> usize {
        let mut cur = s;
        for d in ((p + 1)..=k).rev() {
            cur = self.face(d, cur, d);
        }
        cur
    }

    /// Face through the last `q + 1` vertices.
    pub fn back_face(&self, k: usize, s: usize, q: usize) -> usize {
        let mut cur = s;
        for d in ((q + 1)..=k).rev() {
            cur = self.face(d, cur, 0);
        }
        cur
    }

    /// The edge through vertices 0 and 1 of a simplex of dimension >= 1.
    pub fn leading_edge(&self, k: usize, s: usize) -> usize {
        self.front_face(k, s, 1)
    }

    /// Vertex `i` of a `k`-simplex.
    pub fn vertex(&self, k: usize, s: usize, i: usize) -> usize {
        self.back_face(i, self.front_face(k, s, i), 0)
    }

    /// Ordered vertex list of a `k`-simplex; entries may repeat when the
    /// delta-set is not regular.
    pub fn vertices(&self, k: usize, s: usize) -> Vec<usize> {
        (0..=k).map(|i| self.vertex(k, s, i)).collect()
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for all `i < j` in every dimension.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for k in 2..self.counts.len() {
            for s in 0..self.counts[k] {
                for j in 1..=k {
                    for i in 0..j {
                        let lhs = self.face(k - 1, self.face(k, s, j), i);
                        let rhs = self.face(k - 1, self.face(k, s, i), j - 1);
                        if lhs != rhs {
                            return Err(ComplexError::IdentityViolation { dim: k, simplex: s, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.counts.clone())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// True when every simplex has an embedded boundary: distinct vertex
    /// subsets of a simplex always give distinct faces.
    pub fn is_regular(&self) -> bool {
        for k in 1..self.counts.len() {
            for s in 0..self.counts[k] {
                let mut seen: HashSet<(usize, usize)> = HashSet::new();
                for mask in 1u64..(1u64 << (k + 1)) {
                    let positions: Vec<usize> = (0..=k).filter(|b| mask >> b & 1 == 1).collect();
                    let face = self.face_by_positions(k, s, &positions);
                    if !seen.insert((positions.len(), face)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of connected components, through the 1-skeleton.
    pub fn component_count(&self) -> usize {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for e in 0..self.count(1) {
            let a = find(&mut parent, self.face(1, e, 0));
            let b = find(&mut parent, self.face(1, e, 1));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    /// Disjoint union, `self` first.
    pub fn disjoint_union(&self, other: &DeltaSet) -> DeltaSet {
        let top = self.counts.len().max(other.counts.len());
        let counts: Vec<usize> = (0..top).map(|k| self.count(k) + other.count(k)).collect();
        let mut faces = vec![Vec::new()];
        for k in 1..top {
            let mut row = Vec::with_capacity(counts[k] * (k + 1));
            if k < self.counts.len() {
                row.extend_from_slice(&self.faces[k]);
            }
            if k < other.counts.len() {
                let shift = self.count(k - 1);
                row.extend(other.faces[k].iter().map(|f| f + shift));
            }
            faces.push(row);
        }
        DeltaSet { counts, faces }
    }
}

/// A face-closed selection of simplices, reindexed as a delta-set of its own.
#[derive(Clone, Debug)]
pub struct SubDeltaSet {
    pub space: DeltaSet,
    /// `inclusion[k][t]` is the index in the ambient delta-set of simplex `t`.
    pub inclusion: Vec<Vec<usize>>,
}

impl DeltaSet {
    /// Restricts to the given simplices (any order, duplicates ignored). Every
    /// face of a kept simplex must be kept as well.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<SubDeltaSet, ComplexError> {
        let mut inclusion: Vec<Vec<usize>> = keep
            .iter()
            .map(|k| {
                let mut v = k.clone();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        while inclusion.last().is_some_and(Vec::is_empty) {
            inclusion.pop();
        }
        if inclusion.len() > self.counts.len() {
            return Err(ComplexError::Malformed("selection above the top dimension".into()));
        }
        let mut local: Vec<Vec<usize>> = Vec::with_capacity(inclusion.len());
        for (k, sel) in inclusion.iter().enumerate() {
            let mut map = vec![usize::MAX; self.count(k)];
            for (t, &s) in sel.iter().enumerate() {
                if s >= self.count(k) {
                    return Err(ComplexError::Malformed(format!("simplex {s} of dimension {k} does not exist")));
                }
                map[s] = t;
            }
            local.push(map);
        }
        let counts: Vec<usize> = inclusion.iter().map(Vec::len).collect();
        let mut faces = vec![Vec::new()];
        for k in 1..counts.len() {
            let mut row = Vec::with_capacity(counts[k] * (k + 1));
            for &s in &inclusion[k] {
                for &f in self.faces_of(k, s) {
                    let t = local[k - 1][f];
                    if t == usize::MAX {
                        return Err(ComplexError::NotClosed { face: vec![k - 1, f], of: vec![k, s] });
                    }
                    row.push(t);
                }
            }
            faces.push(row);
        }
        Ok(SubDeltaSet { space: DeltaSet::from_flat(counts, faces), inclusion })
    }
}

/// A finite abstract simplicial complex on vertices `0..vertex_count`.
///
/// `faces[k]` holds the `k`-faces as strictly increasing tuples, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// The closure of the given facets. Every vertex `0..vertex_count` is
    /// included, even when no facet uses it.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![(0..vertex_count).map(|v| vec![v]).collect()];
        for facet in facets {
            let facet = normalize_tuple(vertex_count, facet)?;
            for size in 1..=facet.len() {
                if by_dim.len() < size {
                    by_dim.resize_with(size, BTreeSet::new);
                }
                for sub in facet.iter().copied().combinations(size) {
                    by_dim[size - 1].insert(sub);
                }
            }
        }
        Ok(Self::from_sets(vertex_count, by_dim))
    }

    /// Takes the faces as given without computing the closure; conversion to
    /// a delta-set reports any missing face.
    pub fn from_faces(vertex_count: usize, faces: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for face in faces {
            let face = normalize_tuple(vertex_count, face)?;
            if by_dim.len() < face.len() {
                by_dim.resize_with(face.len(), BTreeSet::new);
            }
            by_dim[face.len() - 1].insert(face);
        }
        Ok(Self::from_sets(vertex_count, by_dim))
    }

    fn from_sets(vertex_count: usize, mut by_dim: Vec<BTreeSet<Vec<usize>>>) -> Self {
        while by_dim.last().is_some_and(BTreeSet::is_empty) {
            by_dim.pop();
        }
        Self { vertex_count, faces: by_dim.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    /// Sorted `k`-faces.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, face: &[usize]) -> Option<usize> {
        let k = face.len().checked_sub(1)?;
        self.faces.get(k)?.binary_search_by(|f| f.as_slice().cmp(face)).ok()
    }

    /// Faces not contained in any larger face.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered: HashSet<Vec<usize>> = HashSet::new();
        for k in 1..self.faces.len() {
            for f in &self.faces[k] {
                for i in 0..f.len() {
                    let mut sub = f.clone();
                    sub.remove(i);
                    covered.insert(sub);
                }
            }
        }
        self.faces.iter().flatten().filter(|f| !covered.contains(*f)).cloned().collect()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces.iter().map(Vec::len).collect())
    }

    /// Converts to a delta-set indexed like [`SimplicialComplex::faces`].
    pub fn to_delta(&self) -> Result<DeltaSet, ComplexError> {
        let counts: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        let mut flat = vec![Vec::new()];
        for k in 1..self.faces.len() {
            let mut row = Vec::with_capacity(counts[k] * (k + 1));
            for f in &self.faces[k] {
                for i in 0..=k {
                    let mut sub = f.clone();
                    sub.remove(i);
                    let idx = self
                        .index_of(&sub)
                        .ok_or_else(|| ComplexError::NotClosed { face: sub.clone(), of: f.clone() })?;
                    row.push(idx);
                }
            }
            flat.push(row);
        }
        Ok(DeltaSet::from_flat(counts, flat))
    }
}

fn normalize_tuple(vertex_count: usize, tuple: &[usize]) -> Result<Vec<usize>, ComplexError> {
    if tuple.is_empty() {
        return Err(ComplexError::Malformed("empty face".into()));
    }
    let mut t = tuple.to_vec();
    t.sort_unstable();
    if t.windows(2).any(|w| w[0] == w[1]) {
        return Err(ComplexError::Malformed(format!("face {tuple:?} repeats a vertex")));
    }
    if let Some(&v) = t.last().filter(|&&v| v >= vertex_count) {
        return Err(ComplexError::Malformed(format!("vertex {v} out of range 0..{vertex_count}")));
    }
    Ok(t)
}

/// Converts a simplicial complex into a delta-set.
pub fn complex_to_delta(sc: &SimplicialComplex) -> Result<DeltaSet, ComplexError> {
    sc.to_delta()
}

pub fn validate_delta_set(ds: &DeltaSet) -> Result<(), ComplexError> {
    ds.validate()
}

pub fn is_regular(ds: &DeltaSet) -> bool {
    ds.is_regular()
}

pub fn f_vector(ds: &DeltaSet) -> FVector {
    ds.f_vector()
}

/// Result of dividing a delta-set by a free action.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: DeltaSet,
    /// `projection[k][s]` is the orbit of simplex `s`.
    pub projection: Vec<Vec<usize>>,
    /// Lowest-index member of each orbit, per dimension.
    pub representatives: Vec<Vec<usize>>,
}

fn orbit_ids(ds: &DeltaSet, act: &GroupAction, k: usize, require_free: bool) -> Result<(Vec<usize>, Vec<usize>), ComplexError> {
    let group = act.group();
    let n = ds.count(k);
    let mut ids = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if ids[s] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(s);
        for g in 0..group.order() {
            let t = act.apply(g, k, s);
            if require_free && g != group.identity() && t == s {
                return Err(ComplexError::NotFree { dim: k, simplex: s, g });
            }
            ids[t] = id;
        }
    }
    Ok((ids, reps))
}

/// Orbit space of a free action, with the induced face maps.
pub fn quotient_by_action(ds: &DeltaSet, act: &GroupAction) -> Result<Quotient, ComplexError> {
    let mut projection = Vec::new();
    let mut representatives = Vec::new();
    for k in 0..ds.counts().len() {
        let (ids, reps) = orbit_ids(ds, act, k, true)?;
        projection.push(ids);
        representatives.push(reps);
    }
    let counts: Vec<usize> = representatives.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new()];
    for k in 1..counts.len() {
        let row = representatives[k]
            .iter()
            .flat_map(|&r| ds.faces_of(k, r).iter().map(|&f| projection[k - 1][f]).collect::<Vec<_>>())
            .collect();
        faces.push(row);
    }
    Ok(Quotient { space: DeltaSet::from_flat(counts, faces), projection, representatives })
}

/// Orbit index of every vertex under an action that is free on vertices.
pub fn vertex_orbits(ds: &DeltaSet, act: &GroupAction) -> Result<(Vec<usize>, Vec<usize>), ComplexError> {
    orbit_ids(ds, act, 0, true).map_err(|e| match e {
        ComplexError::NotFree { simplex, g, .. } => ComplexError::NotFreeOnVertices { vertex: simplex, g },
        other => other,
    })
}

/// Whether every simplex contains at most one vertex from each vertex orbit.
pub fn meets_each_orbit_once(ds: &DeltaSet, act: &GroupAction) -> Result<bool, ComplexError> {
    let (orbit, _) = vertex_orbits(ds, act)?;
    for k in 1..ds.counts().len() {
        for s in 0..ds.count(k) {
            let vs = ds.vertices(k, s);
            if !vs.iter().map(|&v| orbit[v]).all_unique() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of orbits per dimension of a free action.
pub fn orbit_f_vector(ds: &DeltaSet, act: &GroupAction) -> Result<FVector, ComplexError> {
    let order = act.group().order();
    let mut out = Vec::new();
    for k in 0..ds.counts().len() {
        let (_, reps) = orbit_ids(ds, act, k, true)?;
        debug_assert_eq!(reps.len() * order, ds.count(k));
        out.push(reps.len());
    }
    Ok(FVector(out))
}
