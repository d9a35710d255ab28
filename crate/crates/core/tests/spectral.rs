use nalgebra::{DMatrix, SymmetricEigen};

use wreath_core::exact::rat;
use wreath_core::groupring::{FiniteAbelianGroup, GroupRingElement};
use wreath_core::spectral::{
    completeness_partial_sum, completeness_tail, lambda_consistent, lambda_f64, spectral_measure,
    spectral_measure_with, Mu, SpectralSetup,
};
use wreath_core::{Error, Rational};

// Eigenvalues of the (n-1)x(n-1) path adjacency matrix, computed numerically.
fn path_spectrum(n: usize) -> Vec<f64> {
    let k = n - 1;
    let a = DMatrix::from_fn(k, k, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}

#[test]
fn lambdas_match_numeric_spectrum() {
    for n in 2..=14u64 {
        let numeric = path_spectrum(n as usize);
        for (idx, m) in (1..n).enumerate() {
            assert!((numeric[idx] - lambda_f64(m, n)).abs() < 1e-9, "n={n} m={m}");
            assert!(lambda_consistent(m, n).unwrap());
        }
    }
}

#[test]
fn klein_four_suite() {
    let u = FiniteAbelianGroup::parse_spec("C2xC2").unwrap();
    let setup = SpectralSetup::avg(u).unwrap();
    assert_eq!(*setup.w(), rat(4, 1));
    let report = setup.verify_suite(4).unwrap();
    assert!(report.all(), "{report:?}");
}

#[test]
fn non_avg_projection() {
    // e = (1 + u²)/2 in Q[C4] has trace 1/2, so W = 2 although |U| = 4.
    let c4 = FiniteAbelianGroup::cyclic(4).unwrap();
    let e = GroupRingElement::from_terms(c4, [(0u32, rat(1, 2)), (2u32, rat(1, 2))]);
    let setup = SpectralSetup::new(e).unwrap();
    assert_eq!(*setup.w(), rat(2, 1));
    for n in 2..=4 {
        assert_eq!(setup.build_q(n).unwrap().trace(), setup.expected_q_trace(n));
        assert!(setup.verify_p(1, n).unwrap().all());
    }
}

#[test]
fn rejects_bad_projections() {
    let c2 = FiniteAbelianGroup::cyclic(2).unwrap();
    let not_idempotent = GroupRingElement::from_terms(c2.clone(), [(1u32, rat(1, 1))]);
    assert!(matches!(SpectralSetup::new(not_idempotent), Err(Error::InvalidInput(_))));
    assert!(SpectralSetup::new(GroupRingElement::one(c2.clone())).is_err());
    assert!(SpectralSetup::new(GroupRingElement::zero(c2)).is_err());
    assert!(SpectralSetup::avg(FiniteAbelianGroup::cyclic(1).unwrap()).is_err());
}

#[test]
fn measure_values_and_errors() {
    let two = rat(2, 1);
    let by_decimal = spectral_measure(&two, &Mu::Decimal(1.0)).unwrap();
    assert_eq!(by_decimal.rotation, Some((1, 3)));
    assert_eq!(by_decimal.mass, rat(1, 7));
    let reduced = spectral_measure(&two, &Mu::Rotation { m: 2, n: 4 }).unwrap();
    assert_eq!(reduced.rotation, Some((1, 2)));
    let off = spectral_measure(&two, &Mu::Decimal(0.123)).unwrap();
    assert!(!off.recognized);
    assert_eq!(off.mass, rat(0, 1));
    let unseen = spectral_measure_with(&two, &Mu::Decimal(lambda_f64(1, 70)), 64).unwrap();
    assert!(!unseen.recognized);
    assert!(spectral_measure(&rat(1, 1), &Mu::Rotation { m: 1, n: 2 }).is_err());
    assert!(spectral_measure(&two, &Mu::Rotation { m: 0, n: 2 }).is_err());
    assert!(spectral_measure(&two, &Mu::Rotation { m: 3, n: 3 }).is_err());
}

#[test]
fn completeness_tail_closes_the_sum() {
    for w in [rat(2, 1), rat(3, 1), rat(5, 2)] {
        for n in [2u64, 5, 20] {
            let total: Rational = completeness_partial_sum(&w, n).unwrap() + completeness_tail(&w, n).unwrap();
            assert_eq!(total, rat(1, 1));
        }
    }
}
