//! Acceptance criteria. Each criterion runs in isolation and prints one
//! `PASS`/`FAIL` line; the process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;

use wreath_core::cyclotomic::{eigen_relation_check, orthogonality_inner};
use wreath_core::exact::{pow_int, rat};
use wreath_core::groupring::FiniteAbelianGroup;
use wreath_core::numtheory::{a_three_way_check, large_q_checks, large_q_threshold};
use wreath_core::products::{
    b_count_bruteforce, build_z_and_check, dim_ker_ts, kappa_eval, kappa_tail_bound, log10_abs,
    working_precision, KappaParams,
};
use wreath_core::projections::sweep;
use wreath_core::series::{diagonal_bridge_check, gap_witness, gcd_phi_identity_check};
use wreath_core::spectral::{completeness_partial_sum, det_identity_check, spectral_measure, Mu, SpectralSetup};
use wreath_core::Rational;

const SUITE_BUDGET: Duration = Duration::from_secs(60);
const IDENTITY_BUDGET: Duration = Duration::from_secs(10);
const KAPPA_BUDGET: Duration = Duration::from_secs(300);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const KAPPA_10: (i64, i64) = (1_659_457_149, 10_000_000_000);
const KAPPA_10_TOL: (i64, i64) = (5, 100_000_000_000);
const TAIL_400_EXP: i64 = -201;
const CF_MIN_TERMS: usize = 150;
const CF_MIN_DENOM_DIGITS: u32 = 100;

fn report(id: u32, label: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id}: {label} ({detail})");
}

fn criterion_1_spectral_suites() {
    let start = Instant::now();
    let mut pass = true;
    for order in [2u32, 3] {
        let setup = SpectralSetup::avg(FiniteAbelianGroup::cyclic(order).unwrap()).unwrap();
        pass &= setup.verify_suite(5).unwrap().all();
    }
    let elapsed = start.elapsed();
    pass &= elapsed < SUITE_BUDGET;
    report(1, "C2 and C3 projection, orthogonality, action and eigenprojection suites, n <= 5", pass, format!("{elapsed:.2?}"));
    assert!(pass);
}

fn criterion_2_masses_and_completeness() {
    let two = rat(2, 1);
    let half = spectral_measure(&two, &Mu::Rotation { m: 1, n: 2 }).unwrap().mass;
    let third = spectral_measure(&two, &Mu::Rotation { m: 1, n: 3 }).unwrap().mass;
    let gap = Rational::one() - completeness_partial_sum(&two, 20).unwrap();
    let pass = half == rat(1, 3) && third == rat(1, 7) && gap == rat(21, 1 << 20);
    report(2, "atom masses and completeness defect", pass, format!("{half}, {third}, 1 - S_20 = {gap}"));
    assert!(pass);
}

fn criterion_3_eigenvector_identities() {
    let start = Instant::now();
    let mut pass = det_identity_check(12).unwrap();
    for n in 2..=12u64 {
        for m in 1..n {
            pass &= eigen_relation_check(m, n).unwrap();
            for m2 in 1..n {
                let expected = if m == m2 { rat(n as i64, 2) } else { rat(0, 1) };
                pass &= orthogonality_inner(m, m2, n).unwrap() == expected;
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < IDENTITY_BUDGET;
    report(3, "eigen relation, inner products and determinant identity, n <= 12", pass, format!("{elapsed:.2?}"));
    assert!(pass);
}

fn criterion_4_kappa() {
    let start = Instant::now();
    let k10 = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 10)).unwrap();
    let target = rat(KAPPA_10.0, KAPPA_10.1);
    let tol = rat(KAPPA_10_TOL.0, KAPPA_10_TOL.1);
    let ten_ok = k10.value.lower() >= &target - &tol && k10.value.upper() <= &target + &tol;

    let two = rat(2, 1);
    let tail = kappa_tail_bound(&two, &two, 400);
    let tail_ok = tail < pow_int(&rat(10, 1), TAIL_400_EXP);

    let k210 = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 210)).unwrap();
    let denom_floor = BigInt::from(10).pow(CF_MIN_DENOM_DIGITS);
    let cf_ok = k210.cf.certified >= CF_MIN_TERMS && k210.min_denominator_witness > denom_floor;

    let elapsed = start.elapsed();
    let pass = ten_ok && tail_ok && cf_ok && elapsed < KAPPA_BUDGET;
    report(
        4,
        "kappa(1/2,1/2) to 10 digits, K=400 tail, 210-digit continued fraction",
        pass,
        format!(
            "value {}, K=400 tail 1e{:.1}, {} cf terms, denominator {} digits, {elapsed:.2?}",
            k10.value.center_decimal(10),
            log10_abs(&tail),
            k210.cf.certified,
            k210.min_denominator_witness.to_string().len()
        ),
    );
    assert!(pass);
}

fn criterion_5_double_sum_and_counts() {
    let mut pass = true;
    for (x, y) in [(2, 2), (2, 3)] {
        let (x, y) = (rat(x, 1), rat(y, 1));
        let ds = dim_ker_ts(&x, &y, 200).unwrap();
        let kv = kappa_eval(&KappaParams::new(x.recip(), y.recip(), 30)).unwrap();
        pass &= ds.enclosure(working_precision(30)).unwrap().intersects(&kv.value);
    }
    pass &= (1..=30u64).all(|n| (1..=30u64).all(|m| b_count_bruteforce(n, m) == num_integer::gcd(n, m) - 1));
    report(5, "double sum agrees with kappa at 30 digits; b-counts for n, n' <= 30", pass, "(2,2), (2,3)".into());
    assert!(pass);
}

fn criterion_6_rational_projection_sweep() {
    let start = Instant::now();
    let failure = sweep(64).unwrap();
    let elapsed = start.elapsed();
    let pass = failure.is_none() && elapsed < SWEEP_BUDGET;
    report(6, "rational-trace projections for every valid m/n, n <= 64", pass, format!("{failure:?}, {elapsed:.2?}"));
    assert!(pass);
}

fn criterion_7_z_element() {
    let z = build_z_and_check(&rat(1, 2), &rat(1, 2), 3).unwrap();
    let pass = z.all() && z.multiplier == 4;
    report(7, "Z integral with the expected eigenvectors for p = q = 1/2", pass, format!("multiplier {}", z.multiplier));
    assert!(pass);
}

fn criterion_8_series_and_gaps() {
    let three_way = a_three_way_check(10_000).unwrap();
    let bridge = diagonal_bridge_check(300).unwrap();
    let gcd_phi = gcd_phi_identity_check(100);
    let witnesses: Vec<_> = (1..=6u64).map(|q| gap_witness(q, 2).unwrap()).collect();
    let reported = witnesses.iter().all(|w| w.check.entries.len() == 4);
    let trend = witnesses[5].max_ratio() < witnesses[0].max_ratio();
    let pass = three_way && bridge && gcd_phi && reported && trend;
    report(
        8,
        "a(n) three ways, diagonal bridge, gcd-phi identity, gap witnesses Q <= 6",
        pass,
        format!(
            "max ratio {} at Q=1, {} at Q=6",
            witnesses[0].max_ratio(),
            witnesses[5].max_ratio()
        ),
    );
    assert!(pass);
}

fn criterion_9_large_q() {
    let failing: Vec<u64> = (10..=60u64).filter(|&q| !large_q_checks(q).unwrap().all()).collect();
    let threshold = large_q_threshold(10, 60).unwrap();
    let pass = failing.is_empty();
    report(9, "large-Q inequalities for 10 <= Q <= 60", pass, format!("failing {failing:?}, holds from {threshold:?}"));
    assert!(pass, "large-Q checks fail at {failing:?}");
}

fn main() {
    let criteria: [fn(); 9] = [
        criterion_1_spectral_suites,
        criterion_2_masses_and_completeness,
        criterion_3_eigenvector_identities,
        criterion_4_kappa,
        criterion_5_double_sum_and_counts,
        criterion_6_rational_projection_sweep,
        criterion_7_z_element,
        criterion_8_series_and_gaps,
        criterion_9_large_q,
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let failed: Vec<usize> = criteria
        .iter()
        .enumerate()
        .filter(|(_, run)| std::panic::catch_unwind(**run).is_err())
        .map(|(i, _)| i + 1)
        .collect();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
