#![allow(clippy::needless_range_loop)]

mod common;

use lie3::algebra::{catalog_entry, Group, Mat3, MetricSpec, StructureConstants, Vec3};
use lie3::bianchi::{classify, milnor_decompose};
use lie3::foliation::{
    adapt_basis, classify_family, enumerate_families, horizontal_frame, jacobi_constraints,
    residuals, residuals_with_frame, search_directions, AdaptedBracketParams, SearchOptions,
    ADAPT_TOL,
};
use lie3::geometry::{connection, curvature};
use lie3::random::{random_basis, random_metric, random_rotation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vec3() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-10.0..10.0f64).prop_map(Vec3::from)
}

fn antisymmetric() -> impl Strategy<Value = StructureConstants> {
    prop::array::uniform9(-3.0..3.0f64).prop_map(|v| {
        StructureConstants::from_brackets(&[
            (0, 1, [v[0], v[1], v[2]]),
            (0, 2, [v[3], v[4], v[5]]),
            (1, 2, [v[6], v[7], v[8]]),
        ])
    })
}

/// Adapted-form coefficients, each zero with probability one half.
fn sparse_params() -> impl Strategy<Value = AdaptedBracketParams> {
    prop::array::uniform5(prop_oneof![Just(0.0), -3.0..3.0f64])
        .prop_map(|v| AdaptedBracketParams::new(v[0], v[1], v[2], v[3], v[4]))
}

fn gap(a: &[[[f64; 3]; 3]; 3], b: &[[[f64; 3]; 3]; 3]) -> f64 {
    a.iter()
        .flatten()
        .flatten()
        .zip(b.iter().flatten().flatten())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Killing-form signature, with eigenvalues below `1e-12 · |c|²` counted as zero.
fn killing_signature(c: &StructureConstants) -> (usize, usize, usize) {
    let floor = 1e-12 * c.max_abs().powi(2);
    let eig = c.killing_form().symmetric_eigenvalues();
    let pos = eig.iter().filter(|v| **v > floor).count();
    let neg = eig.iter().filter(|v| **v < -floor).count();
    (pos, neg, 3 - pos - neg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bracket_is_antisymmetric(c in antisymmetric(), u in vec3(), v in vec3()) {
        prop_assert_eq!(c.bracket(&u, &v), -c.bracket(&v, &u));
    }

    #[test]
    fn trace_form_is_linear(seed in any::<u64>(), u in vec3(), v in vec3(), s in -5.0..5.0f64, t in -5.0..5.0f64) {
        let c = common::random_orthonormal_algebra(&mut rng(seed));
        let lhs = c.trace_form(&(u * s + v * t));
        let rhs = s * c.trace_form(&u) + t * c.trace_form(&v);
        let scale = c.max_abs().max(1.0) * (s.abs() * u.amax() + t.abs() * v.amax()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale);
    }

    #[test]
    fn milnor_reconstruction(c in antisymmetric()) {
        let m = milnor_decompose(&c);
        prop_assert!(gap(&m.reconstruct(), &c.tensor()) <= 1e-10);
    }

    #[test]
    fn milnor_n_annihilates_a(seed in any::<u64>()) {
        let c = common::random_orthonormal_algebra(&mut rng(seed));
        let m = milnor_decompose(&c);
        let scale = c.max_abs().max(1.0).powi(2);
        prop_assert!((m.n * m.a).amax() <= 1e-9 * scale);
    }

    #[test]
    fn connection_identities(c in antisymmetric()) {
        let g = connection(&c);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    prop_assert!((g.get(i, j, k) + g.get(i, k, j)).abs() <= 1e-15);
                    prop_assert!((g.get(i, j, k) - g.get(j, i, k) - c.get(i, j, k)).abs() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn curvature_symmetries(seed in any::<u64>(), from_family in any::<bool>()) {
        let mut r = rng(seed);
        let c = if from_family {
            let families = enumerate_families();
            families[r.random_range(0..families.len())].sample(&mut r).structure_constants()
        } else {
            common::random_orthonormal_algebra(&mut r)
        };
        let report = curvature(&c);
        let rm = &report.riemann;
        let tol = 1e-9 * c.max_abs().max(1.0).powi(2);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        prop_assert!((rm[i][j][k][l] + rm[j][i][k][l]).abs() <= tol);
                        prop_assert!((rm[i][j][k][l] + rm[i][j][l][k]).abs() <= tol);
                        prop_assert!((rm[i][j][k][l] - rm[k][l][i][j]).abs() <= tol);
                        prop_assert!((rm[i][j][k][l] + rm[j][k][i][l] + rm[k][i][j][l]).abs() <= tol);
                    }
                }
                let path_a: f64 = (0..3).map(|k| rm[k][i][j][k]).sum();
                let path_b: f64 = (0..3).map(|k| rm[i][k][k][j]).sum();
                prop_assert!((path_a - path_b).abs() <= tol);
                prop_assert!((report.ricci[(i, j)] - path_a).abs() <= tol);
            }
        }
        prop_assert!((report.scalar - report.ricci.trace()).abs() <= tol);
    }

    #[test]
    fn residuals_do_not_depend_on_horizontal_frame(seed in any::<u64>(), theta in 0.0..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let c = common::random_orthonormal_algebra(&mut r);
        let u = Vec3::from_fn(|_, _| r.random_range(-1.0..1.0)).normalize();
        let (h1, h2) = horizontal_frame(&u);
        let (k1, k2) = (h1 * theta.cos() + h2 * theta.sin(), h2 * theta.cos() - h1 * theta.sin());
        let (g0, c0) = residuals(&c, &u).unwrap();
        // orientation of the horizontal pair does not matter either
        for (a, b) in [(k1, k2), (k2, k1)] {
            let (g1, c1) = residuals_with_frame(&c, &u, &a, &b);
            let scale = c.max_abs().max(1.0);
            prop_assert!((g0 - g1).abs() <= 1e-10 * scale);
            prop_assert!((c0 - c1).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn constraints_match_full_jacobi(p in sparse_params()) {
        let constraints = jacobi_constraints(&p) <= 1e-12;
        let jacobi = p.structure_constants().jacobi_residual() <= 1e-10;
        prop_assert_eq!(constraints, jacobi, "{:?}", p);
    }

    #[test]
    fn family_classifier_agrees_with_bianchi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let families = enumerate_families();
        let family = &families[r.random_range(0..families.len())];
        let p = family.sample(&mut r);
        let by_family = classify_family(&p, 1e-9).unwrap();
        let by_algebra = classify(&p.structure_constants(), 1e-9).unwrap();
        prop_assert!(by_family.approx_eq(&by_algebra, 1e-6), "{:?}: {} vs {}", p, by_family, by_algebra);
    }

    #[test]
    fn orthonormalize_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let group = Group::ALL[r.random_range(0..Group::ALL.len())];
        let alpha = match group {
            Group::Sol3 => Some(1.5),
            Group::G7 => Some(-0.5),
            _ => None,
        };
        let c = catalog_entry(group, alpha).unwrap().constants;
        let g = random_metric(&mut r);
        let (_, p_inv) = g.orthonormal_frame();
        let back = c.orthonormalize(&g).change_basis(&p_inv).unwrap();
        prop_assert!(gap(&back.tensor(), &c.tensor()) <= 1e-10);
    }

    #[test]
    fn sectional_curvature_scales_inversely_with_metric(seed in any::<u64>(), lambda in 0.2..5.0f64) {
        let mut r = rng(seed);
        let group = Group::ALL[r.random_range(0..Group::ALL.len())];
        let alpha = match group {
            Group::Sol3 => Some(2.0),
            Group::G7 => Some(0.7),
            _ => None,
        };
        let c = catalog_entry(group, alpha).unwrap().constants;
        let g = random_metric(&mut r);
        let base = curvature(&c.orthonormalize(&g)).sectional_basis;
        let scaled = curvature(&c.orthonormalize(&g.scaled(lambda * lambda).unwrap())).sectional_basis;
        let scale = base.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for k in 0..3 {
            prop_assert!((scaled[k] * lambda * lambda - base[k]).abs() <= 1e-8 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_directions_adapt(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = common::random_orthonormal_algebra(&mut r);
        let report = search_directions(&c, &SearchOptions::default()).unwrap();
        for d in &report.directions {
            let p = adapt_basis(&c, &d.direction()).unwrap();
            prop_assert!(jacobi_constraints(&p) <= ADAPT_TOL * c.max_abs().max(1.0).powi(2));
        }
    }

    #[test]
    fn directions_rotate_with_the_basis(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = common::random_orthonormal_algebra(&mut r);
        let q = random_rotation(&mut r);
        let opts = SearchOptions::default();
        let before = search_directions(&c, &opts).unwrap();
        let after = search_directions(&c.change_basis(&q).unwrap(), &opts).unwrap();
        prop_assert_eq!(before.directions.len(), after.directions.len());
        for d in &after.directions {
            let mapped = q * d.direction();
            let best = before
                .directions
                .iter()
                .map(|o| o.direction().dot(&mapped).abs().min(1.0).acos())
                .fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-6);
        }
    }
}

#[test]
fn basis_change_preserves_jacobi_signature_and_type() {
    let mut r = rng(3);
    for entry in common::catalog_entries() {
        let c = entry.constants;
        let expected_type = classify(&c, 1e-9).unwrap();
        let expected_sig = killing_signature(&c);
        for _ in 0..100 {
            let p = random_basis(&mut r, 1e3);
            let d = c.change_basis(&p).unwrap();
            assert!(d.check_jacobi(1e-9).is_ok(), "{}", entry.label());
            assert_eq!(killing_signature(&d), expected_sig, "{}", entry.label());
            let got = classify(&d, 1e-9).unwrap();
            assert!(
                got.approx_eq(&expected_type, 1e-6),
                "{}: {got} vs {expected_type}",
                entry.label()
            );
        }
    }
}

#[test]
fn classification_ignores_overall_scale() {
    for entry in common::catalog_entries() {
        let expected = classify(&entry.constants, 1e-9).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let got = classify(&entry.constants.scaled(lambda), 1e-9).unwrap();
            assert!(
                got.approx_eq(&expected, 1e-9),
                "{} x{lambda}",
                entry.label()
            );
        }
    }
}

#[test]
fn constant_curvature_has_einstein_ricci() {
    let mut r = rng(5);
    let mut seen = 0;
    for i in 0..1000 {
        // H3 has constant curvature for every metric; the others only for special ones
        let c = if i % 2 == 0 {
            let h3 = catalog_entry(Group::H3, None).unwrap().constants;
            h3.orthonormalize(&random_metric(&mut r))
        } else {
            let group = [Group::R3, Group::Su2, Group::G7][i % 3];
            let alpha = (group == Group::G7).then(|| r.random_range(-2.0..2.0));
            let c = catalog_entry(group, alpha).unwrap().constants;
            c.change_basis(&random_rotation(&mut r))
                .unwrap()
                .scaled(r.random_range(0.5..2.0))
        };
        let report = curvature(&c);
        let k = report
            .constant_curvature
            .expect("constant curvature expected");
        assert!((report.ricci - Mat3::identity() * (2.0 * k)).amax() <= 1e-9);
        seen += 1;
    }
    assert_eq!(seen, 1000);
}

#[test]
fn identity_metric_round_trip_is_exact() {
    for entry in common::catalog_entries() {
        let c = entry.constants.orthonormalize(&MetricSpec::identity());
        assert_eq!(c.tensor(), entry.constants.tensor());
    }
}
