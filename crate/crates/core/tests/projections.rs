use proptest::prelude::*;

use wreath_core::exact::rat;
use wreath_core::projections::{integral_multiplier, is_valid_denominator, rational_projection};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certificates_verify(den in 1i64..=16, num_seed in 0i64..1000) {
        let num = num_seed % (den + 1);
        let q = rat(num, den);
        let cert = rational_projection(&q).unwrap();
        prop_assert!(is_valid_denominator(cert.n));
        prop_assert!(cert.verify().all());
        let k = integral_multiplier(&cert.e);
        prop_assert!(k <= num_bigint::BigInt::from(cert.n));
        prop_assert_eq!(cert.n % u64::try_from(k).unwrap(), 0);
    }
}

#[test]
fn valid_denominators() {
    let valid: Vec<u64> = (1..=24).filter(|&n| is_valid_denominator(n)).collect();
    assert_eq!(valid, vec![1, 2, 4, 6, 8, 12, 16, 20, 24]);
}
