//! Explicit model spaces: crosspolytope boundaries, the antipodal quotients
//! modelling real projective spaces, polygons, tori, and product
//! triangulations.

use itertools::Itertools;

use crate::complexes::{quotient_by_action, DeltaSet, SimplicialComplex};
use crate::groups::{elementary_abelian, GroupAction};

/// Boundary of the `d`-dimensional crosspolytope. Vertex `2i` is `+e_i`
/// and vertex `2i + 1` is `-e_i`; faces are signed subsets of coordinates.
pub fn crosspolytope_boundary(d: usize) -> SimplicialComplex {
    assert!(d >= 1, "crosspolytope needs d >= 1");
    let facets: Vec<Vec<usize>> =
        (0..1usize << d).map(|signs| (0..d).map(|i| 2 * i + (signs >> i & 1)).collect()).collect();
    SimplicialComplex::from_facets(2 * d, &facets).expect("crosspolytope facets are well formed")
}

/// The antipodal `Z_2` action `v -> -v` on [`crosspolytope_boundary`].
pub fn antipodal_action(d: usize) -> GroupAction {
    let sc = crosspolytope_boundary(d);
    let n = sc.vertex_count();
    GroupAction::from_vertex_maps(elementary_abelian(1), &sc, vec![(0..n).collect(), (0..n).map(|v| v ^ 1).collect()])
        .expect("antipodal map preserves the vertex order of every face")
}

/// `RP^n` as the antipodal quotient of the `(n+1)`-crosspolytope boundary.
pub fn rp_deltaset(n: usize) -> DeltaSet {
    assert!(n >= 1, "rp_deltaset needs n >= 1");
    let ds = crosspolytope_boundary(n + 1).to_delta().expect("crosspolytope is closed");
    quotient_by_action(&ds, &antipodal_action(n + 1)).expect("antipodal action is free").space
}

/// The `m`-gon.
pub fn cycle_complex(m: usize) -> SimplicialComplex {
    assert!(m >= 3, "a simplicial circle needs at least 3 vertices");
    let facets: Vec<Vec<usize>> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    SimplicialComplex::from_facets(m, &facets).expect("polygon is well formed")
}

/// The 7-vertex torus with facets `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    SimplicialComplex::from_facets(7, &facets).expect("torus facets are well formed")
}

/// Staircase triangulation of `a x b`. Vertex `(i, j)` gets index
/// `i * |V(b)| + j`; each pair of facets of dimensions `p`, `q` contributes
/// `binomial(p + q, p)` monotone lattice-path simplices.
pub fn product_triangulation(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let nb = b.vertex_count();
    let mut facets = Vec::new();
    for fa in a.facets() {
        for fb in b.facets() {
            let (p, q) = (fa.len() - 1, fb.len() - 1);
            for steps_in_a in (0..p + q).combinations(p) {
                let (mut i, mut j) = (0, 0);
                let mut simplex = vec![fa[0] * nb + fb[0]];
                for step in 0..p + q {
                    if steps_in_a.contains(&step) {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    simplex.push(fa[i] * nb + fb[j]);
                }
                facets.push(simplex);
            }
        }
    }
    SimplicialComplex::from_facets(a.vertex_count() * nb, &facets).expect("staircase simplices are well formed")
}

/// The `k`-torus as an iterated product of triangles' boundaries.
pub fn torus_product(k: usize) -> SimplicialComplex {
    assert!(k >= 1);
    let circle = cycle_complex(3);
    (1..k).fold(circle.clone(), |acc, _| product_triangulation(&acc, &circle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::FVector;
    use crate::ggspaces::eg_space;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Crosspolytope face counts `f_k = 2^(k+1) C(d, k+1)`.
    fn crosspolytope_f(d: usize) -> Vec<usize> {
        (0..d).map(|k| (1 << (k + 1)) * binomial(d, k + 1)).collect()
    }

    #[test]
    fn crosspolytope_examples() {
        assert_eq!(crosspolytope_boundary(2).f_vector(), FVector(vec![4, 4]));
        // the square 0-1-2-3 relabelled to +e0,-e0,+e1,-e1 via 0->0, 1->2, 2->1, 3->3
        assert_eq!(crosspolytope_boundary(2), relabel(&cycle_complex(4), &[0, 2, 1, 3]));
        assert_eq!(crosspolytope_boundary(3).f_vector(), FVector(vec![6, 12, 8]));
        assert_eq!(crosspolytope_boundary(4).faces(3).len(), 16);
        for d in 1..=6 {
            assert_eq!(crosspolytope_boundary(d).f_vector().0, crosspolytope_f(d));
        }
    }

    #[test]
    fn crosspolytope_is_the_z2_join() {
        for d in 1..=5 {
            let eg = eg_space(&elementary_abelian(1), d - 1);
            let cp = crosspolytope_boundary(d).to_delta().unwrap();
            assert_eq!(eg.delta().counts(), cp.counts());
        }
    }

    #[test]
    fn rp_examples() {
        assert_eq!(rp_deltaset(1).counts(), &[2, 2]);
        assert_eq!(rp_deltaset(2).counts(), &[3, 6, 4]);
        assert_eq!(rp_deltaset(3).counts(), &[4, 12, 16, 8]);
        for n in 1..=5 {
            let rp = rp_deltaset(n);
            rp.validate().unwrap();
            assert!(rp.is_regular());
            let halved: Vec<usize> = crosspolytope_f(n + 1).iter().map(|f| f / 2).collect();
            assert_eq!(rp.counts(), halved.as_slice());
            assert_eq!(rp.count(n), 1 << n);
        }
        assert_eq!(rp_deltaset(4).count(4), 16);
    }

    #[test]
    fn circle_and_torus() {
        assert_eq!(cycle_complex(3).f_vector(), FVector(vec![3, 3]));
        let t = torus7();
        assert_eq!(t.f_vector(), FVector(vec![7, 21, 14]));
        assert_eq!(t.f_vector().euler_characteristic(), 0);
    }

    #[test]
    fn products() {
        let point = SimplicialComplex::from_facets(1, &[vec![0]]).unwrap();
        let t = torus7();
        assert_eq!(product_triangulation(&point, &t), t);
        let edge = SimplicialComplex::from_facets(2, &[vec![0, 1]]).unwrap();
        let square = product_triangulation(&edge, &edge);
        assert_eq!(square.faces(2), &[vec![0, 1, 3], vec![0, 2, 3]]);
        let t2 = product_triangulation(&cycle_complex(3), &cycle_complex(3));
        assert_eq!(t2.f_vector(), FVector(vec![9, 27, 18]));
        let t3 = torus_product(3);
        assert_eq!(t3.faces(3).len(), 162);
        assert_eq!(t3.vertex_count(), 27);
        for (x, y) in [(cycle_complex(4), torus7()), (crosspolytope_boundary(3), cycle_complex(3))] {
            let p = product_triangulation(&x, &y);
            assert_eq!(
                p.f_vector().euler_characteristic(),
                x.f_vector().euler_characteristic() * y.f_vector().euler_characteristic()
            );
        }
    }

    fn relabel(sc: &SimplicialComplex, map: &[usize]) -> SimplicialComplex {
        let facets: Vec<Vec<usize>> = sc.facets().iter().map(|f| f.iter().map(|&v| map[v]).collect()).collect();
        SimplicialComplex::from_facets(sc.vertex_count(), &facets).unwrap()
    }
}
