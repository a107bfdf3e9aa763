//! Mod-2 simplicial cohomology of delta-sets and the Alexander-Whitney cup
//! product.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::DeltaSet;
use crate::f2linalg::{ColumnSpace, F2Matrix, F2Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("degree {degree} is out of range for a delta-set of dimension {dim:?}")]
    DegreeOutOfRange { degree: usize, dim: Option<usize> },
    #[error("product degree {0} exceeds the dimension")]
    DegreeOverflow(usize),
    #[error("degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("{0} is not a cocycle")]
    NotACocycle(&'static str),
    #[error("cochain of degree {degree} has {found} values, expected {expected}")]
    LengthMismatch { degree: usize, expected: usize, found: usize },
}

/// A mod-2 cochain: one bit per simplex of the given degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub degree: usize,
    pub values: F2Vector,
}

impl Cochain {
    pub fn zero(ds: &DeltaSet, degree: usize) -> Self {
        Self { degree, values: F2Vector::zeros(ds.count(degree)) }
    }

    pub fn new(degree: usize, values: F2Vector) -> Self {
        Self { degree, values }
    }

    /// Indicator of the given simplices.
    pub fn indicator(ds: &DeltaSet, degree: usize, simplices: impl IntoIterator<Item = usize>) -> Self {
        Self { degree, values: F2Vector::from_support(ds.count(degree), simplices) }
    }

    /// The constant 0-cochain 1, the unit of the cup product.
    pub fn unit(ds: &DeltaSet) -> Self {
        Self { degree: 0, values: F2Vector::ones(ds.count(0)) }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    #[inline]
    pub fn get(&self, s: usize) -> bool {
        self.values.get(s)
    }

    /// Sum over GF(2).
    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain { degree: self.degree, values: self.values.xor(&other.values) }
    }

    /// Pulls back along a simplex map: `out[s] = self[map[s]]`.
    pub fn pullback(&self, map: &[usize]) -> Cochain {
        let mut values = F2Vector::zeros(map.len());
        for (s, &t) in map.iter().enumerate() {
            if self.values.get(t) {
                values.set(s, true);
            }
        }
        Cochain { degree: self.degree, values }
    }

    fn check_on(&self, ds: &DeltaSet) -> Result<(), CohomologyError> {
        let expected = ds.count(self.degree);
        if self.values.len() != expected {
            return Err(CohomologyError::LengthMismatch { degree: self.degree, expected, found: self.values.len() });
        }
        Ok(())
    }
}

/// Serialized form: degree plus a 0/1 list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainFile {
    pub degree: usize,
    pub values: Vec<u8>,
}

impl From<&Cochain> for CochainFile {
    fn from(c: &Cochain) -> Self {
        Self { degree: c.degree, values: c.values.to_bools().into_iter().map(u8::from).collect() }
    }
}

impl From<&CochainFile> for Cochain {
    fn from(f: &CochainFile) -> Self {
        Cochain::new(f.degree, F2Vector::from_bools(&f.values.iter().map(|&b| b % 2 == 1).collect::<Vec<_>>()))
    }
}

/// Matrix of `delta^k : C^k -> C^{k+1}`; requires `k < dim`.
pub fn coboundary_matrix(ds: &DeltaSet, k: usize) -> Result<F2Matrix, CohomologyError> {
    match ds.dim() {
        Some(d) if k < d => Ok(coboundary_or_zero(ds, k)),
        dim => Err(CohomologyError::DegreeOutOfRange { degree: k, dim }),
    }
}

/// `delta^k`, taken to be the zero map out of the top degree.
fn coboundary_or_zero(ds: &DeltaSet, k: usize) -> F2Matrix {
    let rows = ds.count(k + 1);
    let mut m = F2Matrix::zeros(rows, ds.count(k));
    for t in 0..rows {
        for &f in ds.faces_of(k + 1, t) {
            m.flip(t, f);
        }
    }
    m
}

/// `delta c`, computed directly from the face maps.
pub fn coboundary(ds: &DeltaSet, c: &Cochain) -> Cochain {
    let k = c.degree;
    let rows = ds.count(k + 1);
    let mut values = F2Vector::zeros(rows);
    for t in 0..rows {
        let parity = ds.faces_of(k + 1, t).iter().filter(|&&f| c.values.get(f)).count() % 2;
        if parity == 1 {
            values.set(t, true);
        }
    }
    Cochain { degree: k + 1, values }
}

pub fn is_cocycle(ds: &DeltaSet, c: &Cochain) -> bool {
    coboundary(ds, c).is_zero()
}

/// The coboundaries `B^k = im delta^{k-1}` inside `C^k`, reduced once for
/// repeated membership queries.
#[derive(Clone, Debug)]
pub struct Coboundaries {
    degree: usize,
    space: ColumnSpace,
}

impl Coboundaries {
    pub fn new(ds: &DeltaSet, degree: usize) -> Self {
        let space = if degree == 0 {
            ColumnSpace::from_vectors(ds.count(0), std::iter::empty())
        } else {
            ColumnSpace::new(&coboundary_or_zero(ds, degree - 1))
        };
        Self { degree, space }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn contains(&self, c: &Cochain) -> bool {
        assert_eq!(c.degree, self.degree);
        self.space.contains(&c.values)
    }

    /// A `(k-1)`-cochain `x` with `delta x = c`, if any.
    pub fn primitive(&self, c: &Cochain) -> Option<Cochain> {
        assert_eq!(c.degree, self.degree);
        if self.degree == 0 {
            return c.is_zero().then(|| Cochain::new(0, F2Vector::zeros(0)));
        }
        self.space.preimage(&c.values).map(|x| Cochain::new(self.degree - 1, x))
    }

    /// Rank after adjoining `c` to the coboundaries.
    pub fn augmented_rank(&self, c: &Cochain) -> usize {
        self.rank() + usize::from(!self.contains(c))
    }
}

/// Representative cocycles for a basis of `H^k(X; Z_2)`.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: usize,
    pub representatives: Vec<Cochain>,
    pub betti: usize,
}

pub fn cohomology_basis(ds: &DeltaSet, k: usize) -> Result<CohomologyBasis, CohomologyError> {
    let dim = ds.dim();
    if dim.is_none_or(|d| k > d) {
        return Err(CohomologyError::DegreeOutOfRange { degree: k, dim });
    }
    let cocycles = coboundary_or_zero(ds, k).kernel_basis();
    let mut span = Coboundaries::new(ds, k).space;
    let representatives: Vec<Cochain> = cocycles
        .into_iter()
        .filter(|z| span.extend(z.clone()))
        .map(|z| Cochain::new(k, z))
        .collect();
    Ok(CohomologyBasis { degree: k, betti: representatives.len(), representatives })
}

/// Mod-2 Betti numbers in every degree `0..=dim`.
pub fn betti_numbers(ds: &DeltaSet) -> Vec<usize> {
    let Some(dim) = ds.dim() else {
        return Vec::new();
    };
    let ranks: Vec<usize> = (0..dim).map(|k| coboundary_or_zero(ds, k).rank()).collect();
    (0..=dim)
        .map(|k| {
            let kernel = ds.count(k) - ranks.get(k).copied().unwrap_or(0);
            let image = if k == 0 { 0 } else { ranks[k - 1] };
            kernel - image
        })
        .collect()
}

/// Front-face/back-face product without hypothesis checks.
pub fn cup_product_unchecked(ds: &DeltaSet, a: &Cochain, b: &Cochain) -> Cochain {
    let (p, q) = (a.degree, b.degree);
    let k = p + q;
    let n = ds.count(k);
    let mut values = F2Vector::zeros(n);
    for s in 0..n {
        if a.values.get(ds.front_face(k, s, p)) && b.values.get(ds.back_face(k, s, q)) {
            values.set(s, true);
        }
    }
    Cochain { degree: k, values }
}

pub fn cup_product(ds: &DeltaSet, a: &Cochain, b: &Cochain) -> Result<Cochain, CohomologyError> {
    a.check_on(ds)?;
    b.check_on(ds)?;
    let k = a.degree + b.degree;
    if ds.dim().is_none_or(|d| k > d) {
        return Err(CohomologyError::DegreeOverflow(k));
    }
    if !is_cocycle(ds, a) {
        return Err(CohomologyError::NotACocycle("left factor"));
    }
    if !is_cocycle(ds, b) {
        return Err(CohomologyError::NotACocycle("right factor"));
    }
    Ok(cup_product_unchecked(ds, a, b))
}

/// Whether `a - b` is a coboundary.
pub fn is_cohomologous(ds: &DeltaSet, a: &Cochain, b: &Cochain) -> Result<bool, CohomologyError> {
    if a.degree != b.degree {
        return Err(CohomologyError::DegreeMismatch(a.degree, b.degree));
    }
    a.check_on(ds)?;
    b.check_on(ds)?;
    if !is_cocycle(ds, a) {
        return Err(CohomologyError::NotACocycle("left class"));
    }
    if !is_cocycle(ds, b) {
        return Err(CohomologyError::NotACocycle("right class"));
    }
    Ok(Coboundaries::new(ds, a.degree).contains(&a.add(b)))
}

/// A certified nonzero product of degree-1 classes.
#[derive(Clone, Debug)]
pub struct ProductWitness {
    /// Positions in the `H^1` basis, one per factor.
    pub basis_indices: Vec<usize>,
    pub factors: Vec<Cochain>,
    pub product: Cochain,
    /// Rank of `delta^{n-1}` and of the same matrix with the product adjoined
    /// as an extra column; they differ exactly when the product is not a
    /// coboundary.
    pub coboundary_rank: usize,
    pub augmented_rank: usize,
}

/// Searches tuples of `H^1` basis cocycles, with repetition and in
/// lexicographic order, for one whose `n`-fold cup product is not a
/// coboundary. Multilinearity makes basis tuples exhaustive.
pub fn nonzero_product_search(ds: &DeltaSet, n: usize) -> Option<ProductWitness> {
    let dim = ds.dim()?;
    if n > dim {
        return None;
    }
    if n == 0 {
        let product = Cochain::unit(ds);
        let b0 = Coboundaries::new(ds, 0);
        return (!product.is_zero()).then(|| ProductWitness {
            basis_indices: Vec::new(),
            factors: Vec::new(),
            augmented_rank: b0.augmented_rank(&product),
            coboundary_rank: b0.rank(),
            product,
        });
    }
    let basis = cohomology_basis(ds, 1).ok()?.representatives;
    if basis.is_empty() {
        return None;
    }
    let boundaries: Vec<Coboundaries> = (0..=n).map(|k| Coboundaries::new(ds, k)).collect();
    let mut chosen = Vec::with_capacity(n);
    let product = search(ds, &basis, &boundaries, n, &mut chosen, None)?;
    let top = &boundaries[n];
    Some(ProductWitness {
        factors: chosen.iter().map(|&i| basis[i].clone()).collect(),
        basis_indices: chosen,
        coboundary_rank: top.rank(),
        augmented_rank: top.augmented_rank(&product),
        product,
    })
}

// A coboundary times a cocycle is again a coboundary, so subtrees below a
// coboundary partial product hold no witness and are skipped.
fn search(
    ds: &DeltaSet,
    basis: &[Cochain],
    boundaries: &[Coboundaries],
    n: usize,
    chosen: &mut Vec<usize>,
    partial: Option<&Cochain>,
) -> Option<Cochain> {
    for (i, xi) in basis.iter().enumerate() {
        let next = match partial {
            None => xi.clone(),
            Some(p) => cup_product_unchecked(ds, p, xi),
        };
        if boundaries[next.degree].contains(&next) {
            continue;
        }
        chosen.push(i);
        if next.degree == n {
            return Some(next);
        }
        if let Some(found) = search(ds, basis, boundaries, n, chosen, Some(&next)) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::SimplicialComplex;

    fn circle(m: usize) -> DeltaSet {
        let facets: Vec<Vec<usize>> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        SimplicialComplex::from_facets(m, &facets).unwrap().to_delta().unwrap()
    }

    fn octahedron() -> DeltaSet {
        let facets: Vec<Vec<usize>> =
            (0..8u32).map(|m| (0..3).map(|i| 2 * i + ((m >> i) & 1) as usize).collect()).collect();
        SimplicialComplex::from_facets(6, &facets).unwrap().to_delta().unwrap()
    }

    /// All coboundaries by enumerating every (k-1)-cochain.
    fn brute_coboundaries(ds: &DeltaSet, k: usize) -> Vec<F2Vector> {
        let m = ds.count(k - 1);
        (0..1u64 << m)
            .map(|mask| coboundary(ds, &Cochain::new(k - 1, F2Vector::from_mask(m, mask))).values)
            .collect()
    }

    #[test]
    fn coboundary_matrix_examples() {
        let edge = SimplicialComplex::from_facets(2, &[vec![0, 1]]).unwrap().to_delta().unwrap();
        assert_eq!(coboundary_matrix(&edge, 0).unwrap(), F2Matrix::from_strs(&["11"]));
        let c3 = coboundary_matrix(&circle(3), 0).unwrap();
        assert_eq!((c3.rows(), c3.cols(), c3.rank()), (3, 3, 2));
        assert!((0..3).all(|r| c3.row(r).count_ones() == 2));
        let loop1 = DeltaSet::new(vec![1, 1], vec![vec![], vec![vec![0, 0]]]).unwrap();
        assert_eq!(coboundary_matrix(&loop1, 0).unwrap(), F2Matrix::zeros(1, 1));
        assert!(matches!(coboundary_matrix(&edge, 1), Err(CohomologyError::DegreeOutOfRange { .. })));
    }

    #[test]
    fn delta_squared_vanishes() {
        let ds = octahedron();
        let d0 = coboundary_matrix(&ds, 0).unwrap();
        let d1 = coboundary_matrix(&ds, 1).unwrap();
        assert!(d1.mul(&d0).unwrap().is_zero());
    }

    #[test]
    fn basis_examples() {
        assert_eq!(cohomology_basis(&octahedron(), 1).unwrap().betti, 0);
        assert_eq!(betti_numbers(&octahedron()), vec![1, 0, 1]);
        assert_eq!(betti_numbers(&circle(5)), vec![1, 1]);
        let b = cohomology_basis(&circle(3), 1).unwrap();
        assert_eq!(b.betti, 1);
        assert!(is_cocycle(&circle(3), &b.representatives[0]));
    }

    #[test]
    fn circle_classes() {
        let ds = circle(3);
        let e0 = Cochain::indicator(&ds, 1, [0]);
        let e1 = Cochain::indicator(&ds, 1, [2]);
        assert!(is_cohomologous(&ds, &e0, &e0).unwrap());
        assert!(is_cohomologous(&ds, &e0, &e1).unwrap());
        assert!(!is_cohomologous(&ds, &e0, &Cochain::zero(&ds, 1)).unwrap());
        // brute force: e0 - e1 is a coboundary, e0 is not
        let all = brute_coboundaries(&ds, 1);
        assert!(all.contains(&e0.add(&e1).values));
        assert!(!all.contains(&e0.values));
        assert!(matches!(
            is_cohomologous(&ds, &e0, &Cochain::zero(&ds, 0)),
            Err(CohomologyError::DegreeMismatch(1, 0))
        ));
    }

    #[test]
    fn cup_with_zero_is_zero() {
        let ds = octahedron();
        let z = Cochain::zero(&ds, 1);
        let u = Cochain::unit(&ds);
        assert!(cup_product(&ds, &z, &z).unwrap().is_zero());
        assert!(cup_product(&ds, &Cochain::zero(&ds, 0), &u).unwrap().is_zero());
        assert_eq!(cup_product(&ds, &u, &u).unwrap(), u);
    }

    #[test]
    fn cup_rejects_bad_inputs() {
        let ds = circle(4);
        let x = cohomology_basis(&ds, 1).unwrap().representatives[0].clone();
        assert_eq!(cup_product(&ds, &x, &x), Err(CohomologyError::DegreeOverflow(2)));
        let not_cocycle = Cochain::indicator(&ds, 0, [0]);
        assert_eq!(cup_product(&ds, &not_cocycle, &x), Err(CohomologyError::NotACocycle("left factor")));
        let short = Cochain::new(1, F2Vector::zeros(2));
        assert!(matches!(cup_product(&ds, &short, &x), Err(CohomologyError::LengthMismatch { .. })));
    }

    #[test]
    fn sphere_has_no_product_witness() {
        assert!(nonzero_product_search(&octahedron(), 1).is_none());
        assert!(nonzero_product_search(&circle(4), 1).is_some());
        assert!(nonzero_product_search(&circle(4), 2).is_none());
        let unit = nonzero_product_search(&circle(4), 0).unwrap();
        assert!(unit.factors.is_empty());
    }
}
