//! Finite abelian covers classified by degree-1 mod-2 cocycles.
//!
//! The cover attached to cocycles `z_1..z_k` has sheets `Z_2^k`. Its
//! `k`-simplices are pairs `(s, e)`; `d_i` keeps the sheet for `i >= 1`, and
//! `d_0` moves to sheet `e + (z_1(l), ..., z_k(l))` where `l` is the edge
//! through the first two vertices of `s`. The cocycle condition is exactly
//! what makes the simplicial identities hold upstairs.

use thiserror::Error;

use crate::cohomology::{is_cocycle, Cochain};
use crate::complexes::{ComplexError, DeltaSet};
use crate::groups::{elementary_abelian, GroupAction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoveringError {
    #[error("cocycle {0} is not a degree-1 cocycle")]
    NotACocycle(usize),
    #[error("base simplex {simplex} of dimension {dim} has {found} preimages, expected {expected}")]
    FiberSizeError { dim: usize, simplex: usize, found: usize, expected: usize },
    #[error("projection does not commute with d_{i} on total simplex {simplex} of dimension {dim}")]
    CommutationError { dim: usize, simplex: usize, i: usize },
    #[error("deck element {g} fixes or leaves the fiber of simplex {simplex} of dimension {dim}")]
    DeckNotFree { dim: usize, simplex: usize, g: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug)]
pub struct Covering {
    pub total: DeltaSet,
    pub base: DeltaSet,
    /// `projection[k][t]` is the base simplex under total simplex `t`.
    pub projection: Vec<Vec<usize>>,
    /// `Z_2^k` acting by translation on sheets.
    pub deck: GroupAction,
}

impl Covering {
    /// `log2` of the number of sheets.
    pub fn rank(&self) -> usize {
        self.deck.group().order().trailing_zeros() as usize
    }

    pub fn sheets(&self) -> usize {
        self.deck.group().order()
    }
}

/// Total simplex index of `(s, sheet)`: sheets are stacked blockwise.
#[inline]
fn lift(base_count: usize, s: usize, sheet: usize) -> usize {
    sheet * base_count + s
}

/// The double cover classified by `z`.
pub fn double_cover(ds: &DeltaSet, z: &Cochain) -> Result<Covering, CoveringError> {
    fiberwise_product(ds, std::slice::from_ref(z))
}

/// Fibre product of the double covers of each `z_i`.
pub fn fiberwise_product(ds: &DeltaSet, zs: &[Cochain]) -> Result<Covering, CoveringError> {
    for (i, z) in zs.iter().enumerate() {
        if z.degree != 1 || z.values.len() != ds.count(1) || !is_cocycle(ds, z) {
            return Err(CoveringError::NotACocycle(i));
        }
    }
    let k = zs.len();
    let sheets = 1usize << k;
    // twist bits per base edge
    let twist: Vec<usize> = (0..ds.count(1))
        .map(|e| zs.iter().enumerate().fold(0, |acc, (i, z)| acc | (usize::from(z.get(e)) << i)))
        .collect();
    let dims = ds.counts().len();
    let counts: Vec<usize> = ds.counts().iter().map(|&c| c * sheets).collect();
    let mut faces = vec![Vec::new()];
    for d in 1..dims {
        let base_count = ds.count(d);
        let below = ds.count(d - 1);
        let mut row = vec![0; counts[d] * (d + 1)];
        for sheet in 0..sheets {
            for s in 0..base_count {
                let t = lift(base_count, s, sheet);
                let shift = twist[ds.leading_edge(d, s)];
                for (i, &f) in ds.faces_of(d, s).iter().enumerate() {
                    let target_sheet = if i == 0 { sheet ^ shift } else { sheet };
                    row[t * (d + 1) + i] = lift(below, f, target_sheet);
                }
            }
        }
        faces.push(row);
    }
    let total = DeltaSet::from_flat(counts, faces);
    total.validate()?;
    let projection: Vec<Vec<usize>> =
        (0..dims).map(|d| (0..sheets).flat_map(|_| 0..ds.count(d)).collect()).collect();
    let group = elementary_abelian(k);
    let perms: Vec<Vec<Vec<usize>>> = group
        .elements()
        .map(|g| {
            (0..dims)
                .map(|d| {
                    let n = ds.count(d);
                    (0..n * sheets).map(|t| lift(n, t % n, (t / n) ^ g)).collect()
                })
                .collect()
        })
        .collect();
    let deck = GroupAction::new(group, &total, perms).expect("sheet translation is a simplicial action");
    Ok(Covering { total, base: ds.clone(), projection, deck })
}

/// Checks fibre sizes, commutation of the projection with every face map,
/// and that deck transformations are free and preserve fibres.
pub fn verify_covering(c: &Covering) -> Result<(), CoveringError> {
    c.total.validate()?;
    let sheets = c.sheets();
    for d in 0..c.total.counts().len() {
        let mut hits = vec![0usize; c.base.count(d)];
        for &b in &c.projection[d] {
            hits[b] += 1;
        }
        if let Some((simplex, &found)) = hits.iter().enumerate().find(|(_, &h)| h != sheets) {
            return Err(CoveringError::FiberSizeError { dim: d, simplex, found, expected: sheets });
        }
        if c.base.count(d) * sheets != c.total.count(d) {
            return Err(CoveringError::FiberSizeError { dim: d, simplex: 0, found: c.total.count(d), expected: sheets });
        }
        for t in 0..c.total.count(d) {
            if d > 0 {
                for i in 0..=d {
                    if c.projection[d - 1][c.total.face(d, t, i)] != c.base.face(d, c.projection[d][t], i) {
                        return Err(CoveringError::CommutationError { dim: d, simplex: t, i });
                    }
                }
            }
            for g in c.deck.group().elements() {
                let gt = c.deck.apply(g, d, t);
                let moves = gt != t || g == c.deck.group().identity();
                if !moves || c.projection[d][gt] != c.projection[d][t] {
                    return Err(CoveringError::DeckNotFree { dim: d, simplex: t, g });
                }
            }
        }
    }
    Ok(())
}
