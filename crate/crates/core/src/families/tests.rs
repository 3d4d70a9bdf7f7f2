use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::hypgeo::{geodesic_distance, Isometry};

fn neighbor_ratios(fam: &SignedGeodesicFamily) -> Vec<f64> {
    fam.neighbors()
        .into_iter()
        .map(|(i, j)| cross_ratio_r(&fam.geodesics[i], &fam.geodesics[j]).unwrap())
        .collect()
}

#[test]
fn c1_depth_zero_is_the_pair() {
    let fam = construct1(0.01, 0).unwrap();
    assert_eq!(fam.len(), 2);
    assert_relative_eq!(cross_ratio_r(&fam.geodesics[0], &fam.geodesics[1]).unwrap(), 0.01, epsilon = 1e-9);
    // central symmetry about i: x ↦ −1/x swaps the two
    let s = Isometry::from_matrix(0.0, -1.0, 1.0, 0.0, false).unwrap();
    let img = s.apply_geodesic(&fam.geodesics[0]);
    assert_relative_eq!(img.e1.real().unwrap(), fam.geodesics[1].e1.real().unwrap(), epsilon = 1e-12);
}

#[test]
fn c1_neighbors_all_alpha() {
    for depth in 1..=3 {
        let fam = construct1(0.05, depth).unwrap();
        let rs = neighbor_ratios(&fam);
        assert!(!rs.is_empty());
        for r in rs {
            assert_relative_eq!(r, 0.05, epsilon = 1e-9);
        }
    }
}

#[test]
fn c1_gamma1_spacing() {
    let fam = construct1(0.01, 1).unwrap();
    let d = geodesic_distance(&fam.geodesics[0], &fam.geodesics[1]).value;
    let o = ModelPoint::origin(Model::HalfPlane);
    for g in &fam.geodesics {
        let pos = g.distance_to(&o) / (d / 2.0);
        assert!((pos - pos.round()).abs() < 1e-6 && pos.round() as i64 % 2 == 1, "{pos}");
    }
    assert!(fam.len() >= 4);
}

#[test]
fn c1_verifies() {
    let fam = construct1(0.01, 2).unwrap();
    let rep = verify_geodesical(&fam, 0.0101);
    assert_eq!(rep.crossings, 0);
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn c1_rejects_bad_alpha() {
    assert!(matches!(construct1(1.5, 1), Err(FamilyError::ParameterOutOfRange(_))));
    assert!(matches!(construct1(0.0, 1), Err(FamilyError::ParameterOutOfRange(_))));
}

#[test]
fn c2_first_step() {
    let fam = construct2(0.1, 0.2, 1).unwrap();
    assert_eq!(fam.len(), 1);
    assert!(fam.geodesics[0].contains(&ModelPoint::origin(Model::HalfPlane)));
    let right = fam.sign(&ModelPoint::halfplane(1.0, 1.0)).unwrap();
    let left = fam.sign(&ModelPoint::halfplane(-1.0, 1.0)).unwrap();
    assert_eq!(right, -left);
}

#[test]
fn c2_counts_and_regions() {
    for steps in [1u32, 2, 5, 18] {
        let fam = construct2(0.05, 0.1, steps).unwrap();
        assert_eq!(fam.len(), steps as usize);
        let signs = arc_signs(&fam);
        assert_eq!(signs.len(), 2 * steps as usize);
        // k curves cut k+1 regions; consecutive arcs split by one end alternate
        for w in 0..signs.len() {
            let a = signs[w].2.unwrap();
            let b = signs[(w + 1) % signs.len()].2.unwrap();
            assert_eq!(a, -b);
        }
        assert!(verify_geodesical(&fam, 0.1 * (1.0 + 1e-6)).crossings == 0);
    }
}

#[test]
fn c2_neighbor_ratios_follow_phase() {
    let fam = construct2(0.05, 0.1, 18).unwrap();
    for r in neighbor_ratios(&fam) {
        assert!((r - 0.05).abs() < 1e-9 || (r - 0.1).abs() < 1e-9, "{r}");
    }
}

#[test]
fn c2_is_deterministic() {
    assert_eq!(construct2(0.05, 0.1, 18).unwrap(), construct2(0.05, 0.1, 18).unwrap());
}

#[test]
fn verify_flags_crossings_and_large_r() {
    let o = ModelPoint::origin(Model::HalfPlane);
    let crossing = SignedGeodesicFamily::custom(
        vec![G::semicircle(-1.0, 1.0).unwrap(), G::semicircle(0.0, 2.0).unwrap()],
        ModelPoint::halfplane(5.0, 0.1),
        1,
    );
    let rep = verify_geodesical(&crossing, 1.0);
    assert_eq!(rep.crossings, 1);
    assert!(!rep.pass);
    // R = 2: semicircles centred ±x with x² − 1 = 1/2
    let x = 1.5f64.sqrt();
    let close = SignedGeodesicFamily::custom(
        vec![G::semicircle(-x - 1.0, -x + 1.0).unwrap(), G::semicircle(x - 1.0, x + 1.0).unwrap()],
        o,
        1,
    );
    let rep = verify_geodesical(&close, 1.0);
    assert_relative_eq!(rep.max_pairwise_r, 2.0, epsilon = 1e-9);
    assert!(!rep.pass);
}

#[test]
fn sign_parity_single_geodesic() {
    let fam = SignedGeodesicFamily::custom(vec![G::semicircle(-1.0, 1.0).unwrap()], ModelPoint::halfplane(0.0, 5.0), 1);
    assert_eq!(fam.sign(&ModelPoint::halfplane(0.0, 0.5)), Some(-1));
    assert_eq!(fam.sign(&ModelPoint::halfplane(3.0, 0.5)), Some(1));
    assert_eq!(fam.sign(&ModelPoint::halfplane(0.0, 1.0)), None);
}

#[test]
fn density_errors_and_monotone() {
    let empty = SignedGeodesicFamily::custom(vec![], ModelPoint::origin(Model::HalfPlane), 1);
    let o = ModelPoint::origin(Model::HalfPlane);
    assert_eq!(density_radius(&empty, &o, 5.0, 100), Err(FamilyError::EmptyFamily));
    let d3 = density_radius(&construct1(0.05, 3).unwrap(), &o, 5.0, 2000).unwrap();
    let d4 = density_radius(&construct1(0.05, 4).unwrap(), &o, 5.0, 2000).unwrap();
    assert!(d3.is_finite() && d3 > 0.0);
    assert!(d4 <= d3 + 1e-12, "{d4} > {d3}");
}

#[test]
fn decay_single_and_errors() {
    let p = decay_profile(&[(3.0, 0.5)], 10.0, 2.0).unwrap();
    assert_eq!(p.terms.len(), 1);
    assert!(p.sum <= p.bound);
    assert!(decay_profile(&[(3.0, 0.6)], 10.0, 2.0).is_err());
    assert!(decay_profile(&[(3.0, 0.5), (3.5, 0.5)], 10.0, 2.0).is_err());
    assert!(decay_profile(&[(3.0, 0.5)], 10.0, 1.0).is_err());
}

#[test]
fn decay_formula_offset_is_ln4() {
    // the closed form drops the factor 4 from 1/sinh²(ϱ/2) ≈ 4e^{−ϱ}
    let p = decay_profile(&[(20.0, 0.5), (45.0, 0.25)], 100.0, 2.0).unwrap();
    for t in &p.terms {
        assert!((t.rho_distance - t.rho_formula - 4f64.ln()).abs() < 0.05, "{t:?}");
    }
}

fn packing() -> impl Strategy<Value = (f64, Vec<(f64, f64)>)> {
    (prop_oneof![Just(10.0), Just(100.0)], proptest::collection::vec((0.01f64..0.5, 0.0f64..1.0), 1..40)).prop_map(
        |(x, raw)| {
            // lay intervals left to right with random gaps, dropping what does not fit
            let mut out = Vec::new();
            let mut cursor = 0.0;
            for (r, gap) in raw {
                let c = cursor + gap + r;
                if c + r > x - 1.0 {
                    break;
                }
                out.push((c, r));
                cursor = c + r;
            }
            (x, out)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    #[test]
    fn decay_sum_below_bound((x, sc) in packing(), beta in 1.01f64..4.0) {
        prop_assume!(!sc.is_empty());
        let p = decay_profile(&sc, x, beta).unwrap();
        prop_assert!(p.sum <= p.bound, "{} > {}", p.sum, p.bound);
    }

    #[test]
    fn double_solution_recomputes(t in -20.0f64..-2.0, w in 0.1f64..1.5, y in 0.5f64..10.0, z in 0.1f64..5.0, alpha in 0.001f64..0.2) {
        let left = [BoundaryPoint::Real(t), BoundaryPoint::Real(t + w)];
        let right = [BoundaryPoint::Real(y), BoundaryPoint::Real(y + z)];
        match solve_double_crossratio_ends(left, right, alpha) {
            Ok((u, v)) => {
                let chi = G::new(u, v).unwrap();
                let g = G::new(left[0], left[1]).unwrap();
                let gp = G::new(right[0], right[1]).unwrap();
                prop_assert!((cross_ratio_r(&chi, &g).unwrap() - alpha).abs() < 1e-9);
                prop_assert!((cross_ratio_r(&chi, &gp).unwrap() - alpha).abs() < 1e-9);
                let (u, v) = (u.real().unwrap(), v.real().unwrap());
                prop_assert!(t + w < u && u < v && v < y);
            }
            Err(e) => prop_assert_eq!(e, FamilyError::NoSolution),
        }
    }

    #[test]
    fn sign_is_parity(x in -3.0f64..3.0, y in 0.05f64..3.0) {
        let fam = construct1(0.05, 2).unwrap();
        let p = ModelPoint::halfplane(x, y);
        if let Some(s) = fam.sign(&p) {
            let crossings = fam.geodesics.iter().filter(|g| g.separates(&p, &fam.base_point)).count();
            prop_assert_eq!(s, if crossings % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn surgery_positive_on_family(i in 0usize..6, j in 0usize..6, far in 8.0f64..20.0, swap in any::<bool>()) {
        prop_assume!(i != j);
        let fam = construct1(0.05, 2).unwrap();
        let o = ModelPoint::origin(Model::HalfPlane);
        let (a, b) = (fam.geodesics[i], fam.geodesics[j]);
        let (ta, tb) = (a.parameter_of(&o), b.parameter_of(&o));
        let perm = if swap { vec![0, 2, 1, 3] } else { vec![0, 3, 1, 2] };
        let spec = SurgerySpec::from_parameters(vec![a, b], &[(ta - far, ta + far), (tb - far, tb + far)], perm);
        prop_assert!(surgery_increment(&spec).unwrap() > 0.0);
    }
}
