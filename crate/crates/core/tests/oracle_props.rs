use num_complex::Complex64;
use proptest::prelude::*;
use spectral_cones::classical_cones::horn_system;
use spectral_cones::oracle::{
    eigen_residual, eigh, gaussian_matrix, hat_matrix, random_unitary, sample_cone_point, singular_values,
    soundness_check, soundness_check_system, svd, svd_residual, ComplexMatrix, Seed, DEFAULT_TOL,
};
use spectral_cones::polyhedra::Provenance;
use spectral_cones::{ConeId, Variant};

fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix(n, n, &mut Seed(seed).rng()).hermitian_part()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_has_small_backward_error(n in 1usize..=9, seed in any::<u64>()) {
        let m = hermitian(n, seed);
        let (values, vectors) = eigh(&m).unwrap();
        prop_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(eigen_residual(&m, &values, &vectors) <= 1e-10 * (1.0 + m.norm_inf()));
    }

    #[test]
    fn svd_has_small_backward_error(rows in 1usize..=7, cols in 1usize..=7, seed in any::<u64>()) {
        let a = gaussian_matrix(rows, cols, &mut Seed(seed).rng());
        let (u, s, v) = svd(&a).unwrap();
        prop_assert!(s.iter().all(|&x| x >= 0.0));
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(svd_residual(&a, &u, &s, &v) <= 1e-10 * (1.0 + a.norm_inf()));
    }

    #[test]
    fn weyl_bounds_hold_on_samples(n in 1usize..=6, seed in any::<u64>()) {
        let a = hermitian(n, seed);
        let b = hermitian(n, seed.wrapping_add(1));
        let x = eigh(&a).unwrap().0;
        let y = eigh(&b).unwrap().0;
        let z = eigh(&(&a + &b)).unwrap().0;
        for i in 0..n {
            for j in 0..n - i {
                prop_assert!(z[i + j] <= x[i] + y[j] + 1e-9);
            }
        }
    }

    #[test]
    fn singular_values_of_a_sum_obey_the_triangle_bound(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = Seed(seed).rng();
        let a = gaussian_matrix(n, n, &mut rng);
        let b = gaussian_matrix(n, n, &mut rng);
        let (sa, sb, sc) = (singular_values(&a).unwrap(), singular_values(&b).unwrap(), singular_values(&(&a + &b)).unwrap());
        prop_assert!(sc[0] <= sa[0] + sb[0] + 1e-9);
    }

    #[test]
    fn hat_spectrum_is_symmetric(rows in 1usize..=4, extra in 0usize..=2, seed in any::<u64>()) {
        let a = gaussian_matrix(rows + extra, rows, &mut Seed(seed).rng());
        let s = singular_values(&a).unwrap();
        let e = eigh(&hat_matrix(&a)).unwrap().0;
        for (k, sv) in s.iter().enumerate() {
            prop_assert!((e[k] - sv).abs() < 1e-9);
            prop_assert!((e[e.len() - 1 - k] + sv).abs() < 1e-9);
        }
    }
}

#[test]
fn haar_unitaries_are_unitary() {
    for n in 1..=8 {
        let u = random_unitary(n, Seed(n as u64));
        let gram = &u.adjoint() * &u;
        let err = (&gram - &ComplexMatrix::identity(n)).norm_inf();
        assert!(err < 1e-12, "n = {n}: {err}");
    }
}

#[test]
fn eigh_rejects_non_hermitian_input() {
    let mut m = ComplexMatrix::identity(2);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(eigh(&m).is_err());
}

#[test]
fn soundness_reports_are_reproducible() {
    let cone = ConeId::sing(3, 2);
    let a = soundness_check(&cone, 200, Seed(9), DEFAULT_TOL).unwrap();
    let b = soundness_check(&cone, 200, Seed(9), DEFAULT_TOL).unwrap();
    assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
    assert!(a.is_clean());
    assert_eq!(sample_cone_point(&cone, Seed(3)).unwrap(), sample_cone_point(&cone, Seed(3)).unwrap());
}

#[test]
fn soundness_catches_a_false_inequality() {
    // x1 + y2 >= z1 fails whenever A and B share a well separated top eigenvector.
    let mut sys = horn_system(3, Variant::Nonzero).unwrap();
    let mut form = sys.form();
    form.add("x", 1, 1).unwrap().add("y", 2, 1).unwrap().add("z", 1, -1).unwrap();
    sys.insert(form.ge(Provenance::Manual).unwrap()).unwrap();
    let report = soundness_check_system(&sys, 300, Seed(1), DEFAULT_TOL).unwrap();
    assert!(!report.is_clean());
    assert!(report.violations.iter().all(|v| v.provenance == Some(Provenance::Manual)));
}
