//! End-to-end checks of the face-count bounds: the cup-length bound on
//! regular spaces, the orbit bound for free actions with a nonvanishing mod-2
//! Euler witness, and the translate-averaging inequality inside `EG_N`.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{cohomology_basis, is_cohomologous, nonzero_product_search, Cochain, CochainFile, Coboundaries};
use crate::complexes::{meets_each_orbit_once, orbit_f_vector, ComplexError, DeltaSet, Quotient, SubDeltaSet};
use crate::f2linalg::F2Vector;
use crate::ggspaces::{enumerate_hn, equivariant_embed, hn_order, EgSpace, GgError, HNElement};
use crate::groups::{GroupAction, Representation};
use crate::signflip::{
    binomial, euler_cocycle, random_configuration, PointConfiguration, SignVector, SignflipError,
    DEFAULT_COORDINATE_BOUND,
};

/// Default cap on `|H_N|` for exhaustive translate searches.
pub const DEFAULT_MAX_ENUM: usize = 1_000_000;
/// Default number of seeds tried for the Euler witness.
pub const DEFAULT_RETRIES: u64 = 8;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("input is not regular; the cup-length bound needs a complex or a regular delta-set")]
    NotRegular,
    #[error("a witnessed bound failed; diagnostic dump follows\n{0}")]
    Contradiction(String),
    #[error("simplex {simplex} of dimension {dim} meets some vertex orbit twice")]
    OrbitViolation { dim: usize, simplex: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration of {size} elements exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("{0} is not invariant under the left action")]
    NotInvariant(&'static str),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Signflip(#[from] SignflipError),
}

impl From<GgError> for BoundError {
    fn from(e: GgError) -> Self {
        match e {
            GgError::TooLarge { size, limit } => BoundError::TooLarge { size, limit },
            GgError::OrbitViolation { dim, simplex } => BoundError::OrbitViolation { dim, simplex },
            GgError::Complex(c) => BoundError::Complex(c),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    /// Witnessed by an explicit certificate.
    Verified,
    /// Taken on trust: no certificate route for this group, or not requested.
    Assumed,
    /// Certificate attempts all came back inconclusive.
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Faces,
    Orbits,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub basis_indices: Vec<usize>,
    pub factors: Vec<CochainFile>,
    pub product: CochainFile,
    pub coboundary_rank: usize,
    pub augmented_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub seed: u64,
    pub seeds_tried: u64,
    pub base_points: Vec<Vec<i64>>,
    pub signs: SignVector,
    /// Top faces of `Z / G` whose image covers the origin.
    pub support_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub input: String,
    pub betti1: usize,
    pub degree: usize,
    pub bound: u64,
    pub actual: usize,
    pub measure: Measure,
    pub status: HypothesisStatus,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_witness: Option<ProductReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_witness: Option<EulerReport>,
    /// Orbit count of the image in `EG_N`; never exceeds `actual`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_orbits: Option<usize>,
}

fn dump_delta(ds: &DeltaSet) -> serde_json::Value {
    serde_json::json!({ "counts": ds.counts(), "faces": ds.face_tables() })
}

/// The cup-length bound: if some `n` classes of degree one have a nonzero
/// product, the space has at least `2^n` faces of dimension `n`. Reports the
/// largest witnessed `n`.
pub fn check_corollary(ds: &DeltaSet, input: &str) -> Result<BoundReport, BoundError> {
    ds.validate()?;
    if !ds.is_regular() {
        return Err(BoundError::NotRegular);
    }
    let betti1 = if ds.dim().is_some_and(|d| d >= 1) { cohomology_basis(ds, 1).map_or(0, |b| b.betti) } else { 0 };
    let top = ds.dim().unwrap_or(0);
    let witness = (1..=top).rev().find_map(|n| nonzero_product_search(ds, n).map(|w| (n, w)));
    let (degree, product_witness) = match witness {
        Some((n, w)) => (
            n,
            Some(ProductReport {
                basis_indices: w.basis_indices.clone(),
                factors: w.factors.iter().map(CochainFile::from).collect(),
                product: CochainFile::from(&w.product),
                coboundary_rank: w.coboundary_rank,
                augmented_rank: w.augmented_rank,
            }),
        ),
        None => (0, None),
    };
    let bound = 1u64 << degree;
    let actual = ds.count(degree);
    let report = BoundReport {
        input: input.to_string(),
        betti1,
        degree,
        bound,
        actual,
        measure: Measure::Faces,
        status: HypothesisStatus::Verified,
        pass: actual as u64 >= bound,
        product_witness,
        euler_witness: None,
        image_orbits: None,
    };
    if !report.pass {
        let dump = serde_json::json!({ "input": dump_delta(ds), "report": report });
        return Err(BoundError::Contradiction(serde_json::to_string_pretty(&dump).expect("dump serializes")));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug)]
pub struct TheoremOptions {
    pub verify_euler: bool,
    pub retries: u64,
    pub first_seed: u64,
    pub coordinate_bound: i64,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self { verify_euler: true, retries: DEFAULT_RETRIES, first_seed: 0, coordinate_bound: DEFAULT_COORDINATE_BOUND }
    }
}

/// The orbit bound for a free action whose faces meet every vertex orbit at
/// most once: at least `2^n` orbits of `n`-faces, `n = dim V`, provided the
/// Euler class of `V` survives on the quotient. For elementary abelian groups
/// the survival is certified by a mod-2 witness cocycle pulled back to the
/// image of the space in `BG_N`.
pub fn check_theorem(
    ds: &DeltaSet,
    act: &GroupAction,
    rep: &Representation,
    input: &str,
    opts: TheoremOptions,
) -> Result<BoundReport, BoundError> {
    ds.validate()?;
    let n = rep.dim();
    if rep.group() != act.group() {
        return Err(BoundError::DimensionMismatch("representation and action use different groups".into()));
    }
    if ds.dim().is_none_or(|d| n > d) {
        return Err(BoundError::DimensionMismatch(format!("representation of dimension {n} exceeds the space")));
    }
    if !meets_each_orbit_once(ds, act)? {
        let emb = equivariant_embed(ds, act);
        return Err(match emb {
            Err(e) => e.into(),
            Ok(_) => BoundError::OrbitViolation { dim: 0, simplex: 0 },
        });
    }
    let zn = orbit_f_vector(ds, act)?.get(n);
    let betti1 = cohomology_basis(ds, 1).map_or(0, |b| b.betti);
    let bound = 1u64 << n;
    let embedding = equivariant_embed(ds, act)?;
    let image_orbits = embedding.image.inclusion.get(n).map_or(0, Vec::len) / act.group().order();

    let mut status = HypothesisStatus::Assumed;
    let mut euler_witness = None;
    if opts.verify_euler && act.group().is_elementary_abelian() {
        status = HypothesisStatus::Unverified;
        let eg = &embedding.eg;
        let bg = eg.quotient();
        let zg = image_mod_g(&embedding.image, &bg)?;
        let boundaries = Coboundaries::new(&zg.space, n);
        let e = SignVector::all_positive(eg.n() + 1);
        for (tried, seed) in (opts.first_seed..opts.first_seed + opts.retries).enumerate() {
            let cfg = match random_configuration(rep, eg.n(), seed, opts.coordinate_bound, eg) {
                Ok(cfg) => cfg,
                Err(SignflipError::GenericityExhausted { .. }) => continue,
                Err(other) => return Err(other.into()),
            };
            let c = euler_cocycle(&cfg, eg, &bg, &e)?;
            let restricted = c.downstairs.pullback(&zg.inclusion[n]);
            if !boundaries.contains(&restricted) {
                status = HypothesisStatus::Verified;
                euler_witness = Some(EulerReport {
                    seed,
                    seeds_tried: tried as u64 + 1,
                    base_points: cfg.base_points().to_vec(),
                    signs: e.clone(),
                    support_size: restricted.values.count_ones(),
                });
                break;
            }
        }
    }
    let report = BoundReport {
        input: input.to_string(),
        betti1,
        degree: n,
        bound,
        actual: zn,
        measure: Measure::Orbits,
        status,
        pass: zn as u64 >= bound,
        product_witness: None,
        euler_witness,
        image_orbits: Some(image_orbits),
    };
    if !report.pass && status == HypothesisStatus::Verified {
        let dump = serde_json::json!({ "input": dump_delta(ds), "action": act.perms(), "report": report });
        return Err(BoundError::Contradiction(serde_json::to_string_pretty(&dump).expect("dump serializes")));
    }
    Ok(report)
}

/// The image of a left-invariant sub-delta-set of `EG_N` in `BG_N`.
pub fn image_mod_g(z: &SubDeltaSet, bg: &Quotient) -> Result<SubDeltaSet, BoundError> {
    let keep: Vec<Vec<usize>> =
        z.inclusion.iter().enumerate().map(|(k, sel)| sel.iter().map(|&s| bg.projection[k][s]).collect()).collect();
    Ok(bg.space.restrict(&keep)?)
}

/// The smallest left-invariant sub-delta-set of `EG_N` containing the given
/// `k`-simplices.
pub fn orbit_closure(eg: &EgSpace, k: usize, simplices: &[usize]) -> Result<SubDeltaSet, BoundError> {
    let ds = eg.delta();
    let act = eg.left_action();
    let mut keep: Vec<Vec<bool>> = (0..=k).map(|d| vec![false; ds.count(d)]).collect();
    for &s in simplices {
        for g in eg.group().elements() {
            keep[k][act.apply(g, k, s)] = true;
        }
    }
    for d in (1..=k).rev() {
        for s in 0..ds.count(d) {
            if keep[d][s] {
                for &f in ds.faces_of(d, s) {
                    keep[d - 1][f] = true;
                }
            }
        }
    }
    let sel: Vec<Vec<usize>> =
        keep.iter().map(|row| row.iter().enumerate().filter(|(_, &b)| b).map(|(s, _)| s).collect()).collect();
    Ok(ds.restrict(&sel)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim2Report {
    pub degree: usize,
    pub z_n: usize,
    pub c_n: usize,
    /// `|G|^n C(N+1, n+1)`, the number of `G`-orbits of `n`-faces.
    pub threshold: u128,
    /// First element of `H_N` in enumeration order with `Z` disjoint from the
    /// translated support.
    pub found_h: Option<HNElement>,
    /// `z_n c_n / threshold`: mean number of orbits where `Z` meets `supp(C) h`.
    pub incidence_average: Ratio<u128>,
    /// The same mean from enumerating every `h`.
    pub enumerated_average: Ratio<u128>,
    pub hn_order: usize,
}

fn is_left_invariant(eg: &EgSpace, k: usize, member: &[bool]) -> bool {
    let act = eg.left_action();
    (0..member.len()).filter(|&s| member[s]).all(|s| eg.group().elements().all(|g| member[act.apply(g, k, s)]))
}

/// Searches `H_N` for a translate of `supp(C)` avoiding `Z` in degree `n`,
/// and computes the mean overlap both from the closed form and by brute force.
pub fn claim2_experiment(
    eg: &EgSpace,
    z: &SubDeltaSet,
    c: &Cochain,
    max_enum: usize,
) -> Result<Claim2Report, BoundError> {
    let n = c.degree;
    let ds = eg.delta();
    if n > eg.n() || c.values.len() != ds.count(n) {
        return Err(BoundError::DimensionMismatch(format!("cochain of degree {n} on EG_{}", eg.n())));
    }
    let size = hn_order(eg.group().order(), eg.n());
    if size > max_enum {
        return Err(BoundError::TooLarge { size, limit: max_enum });
    }
    let mut in_z = vec![false; ds.count(n)];
    for &s in z.inclusion.get(n).map_or(&[][..], Vec::as_slice) {
        in_z[s] = true;
    }
    for (k, sel) in z.inclusion.iter().enumerate() {
        let mut member = vec![false; ds.count(k)];
        sel.iter().for_each(|&s| member[s] = true);
        if !is_left_invariant(eg, k, &member) {
            return Err(BoundError::NotInvariant("Z"));
        }
    }
    if !is_left_invariant(eg, n, &c.values.to_bools()) {
        return Err(BoundError::NotInvariant("supp C"));
    }
    let order = eg.group().order();
    let support = c.values.support();
    let z_n = in_z.iter().filter(|&&b| b).count() / order;
    let c_n = support.len() / order;
    let threshold = (order as u128).pow(n as u32) * binomial(eg.n() as u128 + 1, n as u128 + 1);

    let elements: Vec<HNElement> = enumerate_hn(eg.group(), eg.n()).collect();
    let overlaps: Vec<usize> = elements
        .par_iter()
        .map(|h| support.iter().filter(|&&t| in_z[eg.right_apply(n, t, h)]).count() / order)
        .collect();
    let total: u128 = overlaps.iter().map(|&x| x as u128).sum();
    let found_h = overlaps.iter().position(|&x| x == 0).map(|i| elements[i].clone());
    Ok(Claim2Report {
        degree: n,
        z_n,
        c_n,
        threshold,
        found_h,
        incidence_average: Ratio::new((z_n * c_n) as u128, threshold),
        enumerated_average: Ratio::new(total, elements.len() as u128),
        hn_order: elements.len(),
    })
}

/// `(C h)(o) = C(o h)` for a cochain on `BG_N`, translating through orbit
/// representatives.
pub fn translate_bg_cochain(eg: &EgSpace, bg: &Quotient, c: &Cochain, h: &HNElement) -> Cochain {
    let n = c.degree;
    let reps = &bg.representatives[n];
    let values = F2Vector::from_support(
        reps.len(),
        (0..reps.len()).filter(|&o| c.get(bg.projection[n][eg.right_apply(n, reps[o], h)])),
    );
    Cochain::new(n, values)
}

/// Whether the descended Euler cocycle of `F_e` and its translate by `h` are
/// cohomologous on `BG_N`.
pub fn translate_class_check(
    cfg: &PointConfiguration,
    eg: &EgSpace,
    bg: &Quotient,
    e: &SignVector,
    h: &HNElement,
) -> Result<bool, BoundError> {
    if !h.is_valid(eg.group()) || h.permutation.len() != eg.n() + 1 {
        return Err(BoundError::DimensionMismatch("translation is not an element of H_N".into()));
    }
    let c = euler_cocycle(cfg, eg, bg, e)?.downstairs;
    let moved = translate_bg_cochain(eg, bg, &c, h);
    is_cohomologous(&bg.space, &c, &moved).map_err(|err| BoundError::DimensionMismatch(err.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverings::fiberwise_product;
    use crate::ggspaces::{antipodal_action, bg_space, crosspolytope_boundary, eg_space, rp_deltaset, torus7};
    use crate::groups::{antipodal_representation, elementary_abelian, sign_representation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cup_length_examples() {
        let t = check_corollary(&torus7().to_delta().unwrap(), "torus7").unwrap();
        assert_eq!((t.degree, t.bound, t.actual, t.pass, t.betti1), (2, 4, 14, true, 2));
        let rp = check_corollary(&rp_deltaset(5), "rp5").unwrap();
        assert_eq!((rp.degree, rp.bound, rp.actual), (5, 32, 32));
        let oct = check_corollary(&crosspolytope_boundary(3).to_delta().unwrap(), "octahedron").unwrap();
        assert_eq!((oct.degree, oct.bound, oct.actual, oct.pass), (0, 1, 6, true));
        assert!(oct.product_witness.is_none());
    }

    #[test]
    fn cup_length_rejects_irregular_input() {
        // a circle with one vertex and one loop edge
        let loop_ds = DeltaSet::new(vec![1, 1], vec![vec![], vec![vec![0, 0]]]).unwrap();
        assert!(matches!(check_corollary(&loop_ds, "loop"), Err(BoundError::NotRegular)));
    }

    #[test]
    fn orbit_bound_on_crosspolytopes() {
        for d in 2..=5 {
            let ds = crosspolytope_boundary(d).to_delta().unwrap();
            let r = check_theorem(&ds, &antipodal_action(d), &antipodal_representation(d - 1), "cp", TheoremOptions::default())
                .unwrap();
            assert_eq!(r.actual, 1 << (d - 1));
            assert_eq!(r.bound, 1 << (d - 1));
            assert_eq!(r.status, HypothesisStatus::Verified, "d = {d}");
            assert_eq!(r.image_orbits, Some(r.actual));
        }
    }

    #[test]
    fn orbit_bound_on_torus_cover() {
        let ds = torus7().to_delta().unwrap();
        let gens = cohomology_basis(&ds, 1).unwrap().representatives;
        let cover = fiberwise_product(&ds, &gens).unwrap();
        let r = check_theorem(&cover.total, &cover.deck, &sign_representation(2), "torus cover", TheoremOptions::default())
            .unwrap();
        assert_eq!((r.actual, r.bound, r.pass), (14, 4, true));
        assert_eq!(r.status, HypothesisStatus::Verified);
        let skip = TheoremOptions { verify_euler: false, ..TheoremOptions::default() };
        let r = check_theorem(&cover.total, &cover.deck, &sign_representation(2), "torus cover", skip).unwrap();
        assert_eq!(r.status, HypothesisStatus::Assumed);
    }

    #[test]
    fn orbit_bound_rejects_mismatches() {
        let ds = crosspolytope_boundary(3).to_delta().unwrap();
        let err = check_theorem(&ds, &antipodal_action(3), &sign_representation(2), "x", TheoremOptions::default());
        assert!(matches!(err, Err(BoundError::DimensionMismatch(_))));
        let err = check_theorem(&ds, &antipodal_action(3), &antipodal_representation(3), "x", TheoremOptions::default());
        assert!(matches!(err, Err(BoundError::DimensionMismatch(_))));
    }

    #[test]
    fn translate_search_examples() {
        let g = elementary_abelian(1);
        let eg = eg_space(&g, 2);
        let z = orbit_closure(&eg, 1, &[0]).unwrap();
        let c = Cochain::new(1, F2Vector::from_support(12, [0, eg.left_action().apply(1, 1, 0)]));
        let r = claim2_experiment(&eg, &z, &c, DEFAULT_MAX_ENUM).unwrap();
        assert_eq!((r.z_n, r.c_n, r.threshold, r.hn_order), (1, 1, 6, 48));
        assert!(r.found_h.is_some());
        assert_eq!(r.incidence_average, Ratio::new(1, 6));
        assert_eq!(r.enumerated_average, r.incidence_average);

        let full = eg.delta().restrict(&(0..3).map(|k| (0..eg.delta().count(k)).collect()).collect::<Vec<_>>()).unwrap();
        let r = claim2_experiment(&eg, &full, &c, DEFAULT_MAX_ENUM).unwrap();
        assert!(r.found_h.is_none());
        assert!(r.z_n * r.c_n >= 6);
        assert_eq!(r.enumerated_average, Ratio::from_integer(1));

        let lopsided = Cochain::new(1, F2Vector::from_support(12, [0]));
        assert!(matches!(claim2_experiment(&eg, &z, &lopsided, DEFAULT_MAX_ENUM), Err(BoundError::NotInvariant(_))));
        assert!(matches!(claim2_experiment(&eg, &z, &c, 10), Err(BoundError::TooLarge { size: 48, limit: 10 })));
    }

    #[test]
    fn translates_keep_the_class() {
        for (rep, n_join, samples) in [(sign_representation(1), 4, 50), (sign_representation(2), 3, 20)] {
            let (eg, bg) = bg_space(rep.group(), n_join);
            let cfg = random_configuration(&rep, n_join, 9, DEFAULT_COORDINATE_BOUND, &eg).unwrap();
            let e = SignVector::all_positive(n_join + 1);
            let id = HNElement::identity(rep.group(), n_join);
            assert!(translate_class_check(&cfg, &eg, &bg, &e, &id).unwrap());
            let all: Vec<HNElement> = enumerate_hn(rep.group(), n_join).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..samples {
                let h = &all[rng.gen_range(0..all.len())];
                assert!(translate_class_check(&cfg, &eg, &bg, &e, h).unwrap());
            }
        }
    }
}
