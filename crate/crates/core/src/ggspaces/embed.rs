//! Equivariant map of a space with a free action into `EG_N`, one join
//! factor per vertex orbit.

use super::join::{eg_space, EgSpace, JoinSimplex};
use super::GgError;
use crate::complexes::{vertex_orbits, DeltaSet, SubDeltaSet};
use crate::groups::GroupAction;

#[derive(Clone, Debug)]
pub struct Embedding {
    pub eg: EgSpace,
    /// Join factor (vertex orbit) of each vertex of the source.
    pub vertex_factor: Vec<usize>,
    /// The group element carrying the orbit representative to each vertex.
    pub vertex_label: Vec<usize>,
    /// `simplex_map[k][s]`: index in `EG_N` of the image of source simplex `s`.
    pub simplex_map: Vec<Vec<usize>>,
    /// The image `Z` as a sub-delta-set of `EG_N`.
    pub image: SubDeltaSet,
}

impl Embedding {
    /// `N` with `N + 1` vertex orbits.
    pub fn n(&self) -> usize {
        self.eg.n()
    }
}

/// Orbit representatives are the lowest-index vertices, and join factors
/// follow representative order.
pub fn equivariant_embed(ds: &DeltaSet, act: &GroupAction) -> Result<Embedding, GgError> {
    let group = act.group();
    let (vertex_factor, reps) = vertex_orbits(ds, act)?;
    let mut vertex_label = vec![usize::MAX; ds.count(0)];
    for &r in &reps {
        for g in group.elements() {
            vertex_label[act.apply(g, 0, r)] = g;
        }
    }
    let n = reps.len().checked_sub(1).ok_or(GgError::Complex(crate::complexes::ComplexError::Malformed(
        "cannot embed a space without vertices".into(),
    )))?;
    let eg = eg_space(group, n);
    let mut simplex_map = Vec::with_capacity(ds.counts().len());
    for k in 0..ds.counts().len() {
        let mut row = Vec::with_capacity(ds.count(k));
        for s in 0..ds.count(k) {
            let verts = ds.vertices(k, s);
            let sigma = JoinSimplex::from_vertices(verts.iter().map(|&v| (vertex_factor[v], vertex_label[v])).collect());
            if sigma.factors.windows(2).any(|w| w[0] == w[1]) {
                return Err(GgError::OrbitViolation { dim: k, simplex: s });
            }
            row.push(eg.index_of(&sigma).expect("distinct factors give a join simplex"));
        }
        simplex_map.push(row);
    }
    let image = eg.delta().restrict(&simplex_map)?;
    Ok(Embedding { eg, vertex_factor, vertex_label, simplex_map, image })
}
