//! Equivariant piecewise-linear maps `EG_N -> V` in exact integer arithmetic,
//! origin containment of face images, sign-flip averaging, and the mod-2
//! Euler cocycle that records which top faces cover the origin.
//!
//! A map is fixed by one base point `u_k` per join factor; the vertex `g` of
//! factor `k` goes to `rho(g) u_k`. Flipping by a sign vector `e` replaces
//! `u_k` by `e_k u_k`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::Cochain;
use crate::complexes::Quotient;
use crate::exact::{determinant, mat_vec};
use crate::f2linalg::F2Vector;
use crate::ggspaces::{EgSpace, JoinSimplex};
use crate::groups::{FiniteGroup, Representation};

/// Default coordinate bound for random base points.
pub const DEFAULT_COORDINATE_BOUND: i64 = 1_000_000;
/// Resampling attempts before giving up on genericity.
pub const GENERICITY_ATTEMPTS: usize = 32;
/// Largest number of join factors searched exhaustively (`2^20` sign vectors).
pub const MAX_EXHAUSTIVE_FACTORS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignflipError {
    #[error("no generic configuration found in {attempts} attempts with coordinates in [-{bound}, {bound}]")]
    GenericityExhausted { attempts: usize, bound: i64 },
    #[error("face {0:?} has linearly dependent vertex images")]
    DegenerateFace(JoinSimplex),
    #[error("exhaustive search over 2^{0} sign vectors exceeds the limit 2^{MAX_EXHAUSTIVE_FACTORS}")]
    BudgetTooLarge(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("coordinate overflow while applying the representation")]
    Overflow,
}

/// Signs `e_0..e_N`; `true` marks a factor flipped to `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(pub Vec<bool>);

impl SignVector {
    pub fn all_positive(len: usize) -> Self {
        Self(vec![false; len])
    }

    /// The `index`-th vector in lexicographic order with `+1 < -1`, `e_0`
    /// most significant.
    pub fn from_lex_index(len: usize, index: u64) -> Self {
        Self((0..len).map(|k| index >> (len - 1 - k) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, k: usize) -> i64 {
        if self.0[k] {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|b| !b).collect())
    }

    pub fn as_signs(&self) -> Vec<i8> {
        self.0.iter().map(|&b| if b { -1 } else { 1 }).collect()
    }

    fn mask(&self) -> u64 {
        self.0.iter().enumerate().fold(0, |m, (k, &b)| m | (u64::from(b) << k))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_signs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<i8>::deserialize(d)?;
        raw.iter()
            .map(|&x| match x {
                1 => Ok(false),
                -1 => Ok(true),
                other => Err(serde::de::Error::custom(format!("sign must be 1 or -1, got {other}"))),
            })
            .collect::<Result<_, _>>()
            .map(SignVector)
    }
}

/// Base points of an equivariant map `EG_N -> V` and their orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    rep: Representation,
    n_join: usize,
    base_points: Vec<Vec<i64>>,
    // images[k * |G| + g] = rho(g) u_k
    images: Vec<Vec<i64>>,
}

impl PointConfiguration {
    pub fn new(rep: Representation, n_join: usize, base_points: Vec<Vec<i64>>) -> Result<Self, SignflipError> {
        if base_points.len() != n_join + 1 {
            return Err(SignflipError::DimensionMismatch(format!(
                "{} base points for {} join factors",
                base_points.len(),
                n_join + 1
            )));
        }
        if base_points.iter().any(|u| u.len() != rep.dim()) {
            return Err(SignflipError::DimensionMismatch(format!("base points must have {} coordinates", rep.dim())));
        }
        let images = base_points
            .iter()
            .flat_map(|u| rep.group().elements().map(move |g| (g, u)))
            .map(|(g, u)| mat_vec(rep.matrix(g), u).ok_or(SignflipError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rep, n_join, base_points, images })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.rep.group()
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    /// Dimension `n` of the representation.
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// The `N` of `EG_N`.
    pub fn n_join(&self) -> usize {
        self.n_join
    }

    pub fn base_points(&self) -> &[Vec<i64>] {
        &self.base_points
    }

    /// `F(k, g) = rho(g) u_k`.
    pub fn image(&self, factor: usize, g: usize) -> &[i64] {
        &self.images[factor * self.group().order() + g]
    }

    /// The configuration of `F_e`.
    pub fn flipped(&self, e: &SignVector) -> PointConfiguration {
        let base = self
            .base_points
            .iter()
            .enumerate()
            .map(|(k, u)| u.iter().map(|&x| x * e.sign(k)).collect())
            .collect();
        PointConfiguration::new(self.rep.clone(), self.n_join, base).expect("negation cannot overflow symmetric bounds")
    }

    fn face_images(&self, face: &JoinSimplex) -> Vec<&[i64]> {
        face.factors.iter().zip(&face.labels).map(|(&k, &g)| self.image(k, g)).collect()
    }
}

/// Outcome of the genericity sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    /// Every `(n-1)`-face has linearly independent images (equivalently,
    /// every `n`-subset of every `n`-face), and no base point is zero.
    pub linear: bool,
    /// No flipped map `F_e` sends the vertices of an `n`-face to affinely
    /// dependent points.
    pub affine_under_flips: bool,
    pub determinants_checked: usize,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.linear && self.affine_under_flips
    }
}

/// The linear genericity condition; invariant under every sign flip since
/// flips only negate determinant columns.
pub fn genericity_check(cfg: &PointConfiguration, eg: &EgSpace) -> bool {
    genericity_report(cfg, eg).linear
}

pub fn genericity_report(cfg: &PointConfiguration, eg: &EgSpace) -> GenericityReport {
    let n = cfg.dim();
    let nonzero = cfg.base_points.iter().all(|u| u.iter().any(|&x| x != 0));
    let mut report = GenericityReport { linear: nonzero, affine_under_flips: nonzero, determinants_checked: 0 };
    if !nonzero {
        return report;
    }
    let ds = eg.delta();
    let ridge_count = ds.count(n - 1);
    let ridge_ok = (0..ridge_count).into_par_iter().all(|s| {
        let imgs = cfg.face_images(&eg.simplex(n - 1, s));
        let rows: Vec<Vec<i64>> = imgs.iter().map(|v| v.to_vec()).collect();
        !determinant(&rows).is_zero()
    });
    report.determinants_checked = ridge_count;
    report.linear = ridge_ok;
    if !ridge_ok {
        report.affine_under_flips = false;
        return report;
    }
    // with independent ridges the linear relation on an n-face is unique up
    // to scale; the flipped points are affinely dependent iff some signed
    // sum of its coefficients vanishes
    report.affine_under_flips = (0..ds.count(n)).into_par_iter().all(|s| {
        let a = relation_coefficients(&cfg.face_images(&eg.simplex(n, s)));
        (0..1u64 << n).all(|pattern| {
            let sum: BigInt = a
                .iter()
                .enumerate()
                .map(|(i, x)| if i > 0 && pattern >> (i - 1) & 1 == 1 { -x.clone() } else { x.clone() })
                .sum();
            !sum.is_zero()
        })
    });
    report.determinants_checked += ds.count(n) * (n + 1);
    report
}

/// `a_i = (-1)^i det(v_0..^v_i..v_n)`, so that `sum a_i v_i = 0`.
fn relation_coefficients(images: &[&[i64]]) -> Vec<BigInt> {
    (0..images.len())
        .map(|i| {
            let rows: Vec<Vec<i64>> =
                images.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.to_vec()).collect();
            let d = determinant(&rows);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Signs of the coefficients of the linear relation `0 = sum a_i v_i` among
/// the images of an `n`-face, scaled so that `a_0 > 0`.
pub fn origin_coefficients(face: &JoinSimplex, cfg: &PointConfiguration) -> Result<Vec<i8>, SignflipError> {
    if face.dim() != cfg.dim() {
        return Err(SignflipError::DimensionMismatch(format!(
            "face of dimension {} in a representation of dimension {}",
            face.dim(),
            cfg.dim()
        )));
    }
    let images = cfg.face_images(face);
    let mut a = relation_coefficients(&images);
    if a.iter().any(Zero::is_zero) {
        return Err(SignflipError::DegenerateFace(face.clone()));
    }
    if a[0].is_negative() {
        a.iter_mut().for_each(|x| *x = -x.clone());
    }
    for coord in 0..cfg.dim() {
        let sum: BigInt = a.iter().zip(&images).map(|(ai, v)| ai * v[coord]).sum();
        assert!(sum.is_zero(), "Cramer relation failed on {face:?}");
    }
    Ok(a.iter().map(|x| if x.is_positive() { 1 } else { -1 }).collect())
}

/// Whether `F_e` maps the face onto a simplex containing the origin.
pub fn contains_origin(face: &JoinSimplex, cfg: &PointConfiguration, e: &SignVector) -> Result<bool, SignflipError> {
    let signs = origin_coefficients(face, cfg)?;
    let mut flipped = signs.iter().zip(&face.factors).map(|(&s, &k)| i64::from(s) * e.sign(k));
    let first = flipped.next().expect("faces are nonempty");
    Ok(flipped.all(|x| x == first))
}

/// Seeded uniform base points in `[-M, M]^n \ {0}`, resampled until generic.
pub fn random_configuration(
    rep: &Representation,
    n_join: usize,
    seed: u64,
    bound: i64,
    eg: &EgSpace,
) -> Result<PointConfiguration, SignflipError> {
    let exhausted = SignflipError::GenericityExhausted { attempts: GENERICITY_ATTEMPTS, bound };
    if bound <= 0 {
        return Err(exhausted);
    }
    if eg.n() != n_join || eg.group() != rep.group() {
        return Err(SignflipError::DimensionMismatch("join space does not match the configuration".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERICITY_ATTEMPTS {
        let base: Vec<Vec<i64>> = (0..=n_join)
            .map(|_| loop {
                let u: Vec<i64> = (0..rep.dim()).map(|_| rng.gen_range(-bound..=bound)).collect();
                if u.iter().any(|&x| x != 0) {
                    break u;
                }
            })
            .collect();
        let cfg = PointConfiguration::new(rep.clone(), n_join, base)?;
        if genericity_report(&cfg, eg).is_generic() {
            return Ok(cfg);
        }
    }
    Err(exhausted)
}

/// Factors and coefficient signs of every top face, in `EG_N` index order.
#[derive(Clone, Debug)]
pub struct FaceSigns {
    n: usize,
    // per face: bit mask of factors and, per vertex, (factor, negative sign)
    faces: Vec<Vec<(usize, bool)>>,
}

impl FaceSigns {
    pub fn compute(cfg: &PointConfiguration, eg: &EgSpace) -> Result<Self, SignflipError> {
        let n = cfg.dim();
        let faces = (0..eg.delta().count(n))
            .into_par_iter()
            .map(|s| {
                let face = eg.simplex(n, s);
                let signs = origin_coefficients(&face, cfg)?;
                Ok(face.factors.iter().zip(signs).map(|(&k, sg)| (k, sg < 0)).collect())
            })
            .collect::<Result<Vec<_>, SignflipError>>()?;
        Ok(Self { n, faces })
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    #[inline]
    fn contains(&self, face: usize, e_mask: u64) -> bool {
        let mut it = self.faces[face].iter().map(|&(k, neg)| (e_mask >> k & 1 == 1) ^ neg);
        let first = it.next().expect("faces are nonempty");
        it.all(|b| b == first)
    }

    /// Faces whose `F_e` image contains the origin.
    pub fn support(&self, e: &SignVector) -> Vec<usize> {
        let mask = e.mask();
        (0..self.faces.len()).filter(|&f| self.contains(f, mask)).collect()
    }

    pub fn support_size(&self, e: &SignVector) -> usize {
        let mask = e.mask();
        (0..self.faces.len()).filter(|&f| self.contains(f, mask)).count()
    }

    /// For each face, how many of the `2^(n+1)` sign patterns on its own
    /// factors put the origin inside its image.
    pub fn capturing_pattern_counts(&self) -> Vec<usize> {
        (0..self.faces.len())
            .map(|f| {
                let factors: Vec<usize> = self.faces[f].iter().map(|&(k, _)| k).collect();
                (0..1u64 << (self.n + 1))
                    .filter(|pattern| {
                        let mask = factors
                            .iter()
                            .enumerate()
                            .fold(0u64, |m, (i, &k)| m | ((pattern >> i & 1) << k));
                        self.contains(f, mask)
                    })
                    .count()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sampled { budget: usize, seed: u64 },
}

/// Result of the sign-vector search.
#[derive(Clone, Debug, Serialize)]
pub struct SupportSearch {
    pub e: SignVector,
    /// `n`-faces of `EG_N` whose image under `F_e` contains the origin.
    pub face_count: usize,
    /// The same faces counted up to the left `G`-action.
    pub orbit_count: usize,
    /// `2^-n |G|^n C(N+1, n+1)`.
    pub orbit_bound: Ratio<u128>,
    /// Exact average of `face_count` over all sign vectors (exhaustive mode).
    pub average_face_count: Option<Ratio<u128>>,
    /// The same average assembled face by face.
    pub per_face_average: Ratio<u128>,
    /// `2^-n |G|^(n+1) C(N+1, n+1)`.
    pub closed_form_average: Ratio<u128>,
    pub certified: bool,
    pub evaluated: usize,
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `2^-n |G|^n C(N+1, n+1)`: the orbit count the averaging argument guarantees.
pub fn orbit_bound(group_order: usize, n: usize, n_join: usize) -> Ratio<u128> {
    Ratio::new((group_order as u128).pow(n as u32) * binomial(n_join as u128 + 1, n as u128 + 1), 1u128 << n)
}

/// Finds the sign vector with the fewest origin-capturing `n`-faces
/// (ties broken lexicographically, `+1 < -1`).
pub fn min_support_search(
    cfg: &PointConfiguration,
    eg: &EgSpace,
    mode: SearchMode,
) -> Result<SupportSearch, SignflipError> {
    let factors = cfg.n_join() + 1;
    if mode == SearchMode::Exhaustive && factors > MAX_EXHAUSTIVE_FACTORS {
        return Err(SignflipError::BudgetTooLarge(factors));
    }
    if eg.n() != cfg.n_join() || eg.group() != cfg.group() {
        return Err(SignflipError::DimensionMismatch("join space does not match the configuration".into()));
    }
    let n = cfg.dim();
    let order = cfg.group().order();
    let signs = FaceSigns::compute(cfg, eg)?;
    let per_face_average = signs
        .capturing_pattern_counts()
        .iter()
        .fold(Ratio::from_integer(0u128), |acc, &c| acc + Ratio::new(c as u128, 1u128 << (n + 1)));
    let closed_form_average =
        Ratio::new((order as u128).pow(n as u32 + 1) * binomial(factors as u128, n as u128 + 1), 1u128 << n);

    let count = |index: u64| -> (usize, u64) {
        let e = SignVector::from_lex_index(factors, index);
        (signs.support_size(&e), index)
    };
    let (best, average, evaluated, certified) = match mode {
        SearchMode::Exhaustive => {
            let total = 1u64 << factors;
            let (sum, best) = (0..total)
                .into_par_iter()
                .map(|i| {
                    let c = count(i);
                    (c.0 as u128, c)
                })
                .reduce(|| (0, (usize::MAX, u64::MAX)), |a, b| (a.0 + b.0, a.1.min(b.1)));
            (best, Some(Ratio::new(sum, u128::from(total))), total as usize, true)
        }
        SearchMode::Sampled { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let space = if factors >= 64 { u64::MAX } else { (1u64 << factors) - 1 };
            let samples: Vec<u64> = (0..budget.max(1)).map(|_| rng.gen_range(0..=space)).collect();
            let best = samples.par_iter().map(|&i| count(i)).min().expect("budget is at least one");
            (best, None, samples.len(), false)
        }
    };
    let e = SignVector::from_lex_index(factors, best.1);
    debug_assert_eq!(best.0 % order, 0, "support is a union of G-orbits");
    Ok(SupportSearch {
        e,
        face_count: best.0,
        orbit_count: best.0 / order,
        orbit_bound: orbit_bound(order, n, cfg.n_join()),
        average_face_count: average,
        per_face_average,
        closed_form_average,
        certified,
        evaluated,
    })
}

/// The mod-2 Euler cocycle of `F_e` on `EG_N` and its descent to `BG_N`.
#[derive(Clone, Debug)]
pub struct EulerCocycle {
    pub upstairs: Cochain,
    pub downstairs: Cochain,
}

pub fn euler_cocycle(
    cfg: &PointConfiguration,
    eg: &EgSpace,
    bg: &Quotient,
    e: &SignVector,
) -> Result<EulerCocycle, SignflipError> {
    if e.len() != cfg.n_join() + 1 {
        return Err(SignflipError::DimensionMismatch(format!("sign vector of length {}", e.len())));
    }
    let n = cfg.dim();
    let signs = FaceSigns::compute(cfg, eg)?;
    let upstairs = Cochain::new(n, F2Vector::from_support(eg.delta().count(n), signs.support(e)));
    let reps = bg.representatives.get(n).map_or(&[][..], Vec::as_slice);
    let downstairs = Cochain::new(n, F2Vector::from_support(reps.len(), (0..reps.len()).filter(|&o| upstairs.get(reps[o]))));
    Ok(EulerCocycle { upstairs, downstairs })
}
