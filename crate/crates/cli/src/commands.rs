use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use wreath_core::cyclotomic::{eigen_relation_check, orthogonality_inner};
use wreath_core::exact::{parse_rational, pow_int, rat};
use wreath_core::groupring::{avg_projection, FiniteAbelianGroup};
use wreath_core::numtheory::{a_three_way_check, large_q_checks, large_q_threshold};
use wreath_core::products::{
    b_count_bruteforce, build_z_and_check, dim_ker_ts, kappa_eval, kappa_tail_bound,
    rationality_probe, series_identity_check, working_precision, KappaParams,
};
use wreath_core::projections::{rational_projection, sweep};
use wreath_core::series::{
    diagonal_bridge_check, gap_condition_check_with, gap_witness_with, gcd_phi_identity_check,
    phi_series,
};
use wreath_core::spectral::{
    completeness_partial_sum, completeness_tail, det_identity_check, lambda_f64, spectral_mass,
    spectral_measure, Mu, SpectralSetup,
};
use wreath_core::{Error, Rational, Result};

use crate::args::*;
use crate::report::{dual, CommandResult};

/// Largest `n` accepted by `spectrum --verify`.
const VERIFY_NMAX: u64 = 8;

pub struct Context {
    pub seed: u64,
    pub budget: u64,
}

pub fn run(command: &Command, ctx: &Context) -> CommandResult {
    let (name, outcome) = match command {
        Command::Spectrum(a) => ("spectrum", spectrum(a)),
        Command::Kappa(a) => ("kappa", kappa(a)),
        Command::Dimker(a) => ("dimker", dimker(a)),
        Command::Projection(a) => ("projection", projection(a)),
        Command::Series(a) => ("series", series(a)),
        Command::Gaps(a) => ("gaps", gaps(a, ctx)),
        Command::CheckAll(a) => ("check-all", check_all(a, ctx)),
    };
    match outcome {
        Ok((checks, payload)) => CommandResult::from_checks(name, &checks, payload),
        Err(err) => CommandResult::from_error(name, &err),
    }
}

/// Named boolean checks plus the command payload.
type Outcome = (Vec<(&'static str, bool)>, Value);

fn checked(checks: Vec<(&'static str, bool)>, payload: Value) -> Result<Outcome> {
    Ok((checks, payload))
}

fn parse_mu(s: &str) -> Result<Mu> {
    if let Some((kind, rest)) = s.split_once(':') {
        if !kind.trim().eq_ignore_ascii_case("rot") {
            return Err(Error::InvalidInput(format!("unknown mu form {kind:?}; use rot:m/n or a decimal")));
        }
        let (m, n) = rest
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("rotation {rest:?} must look like m/n")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad rotation component {x:?}")))
        };
        return Ok(Mu::Rotation { m: parse(m)?, n: parse(n)? });
    }
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("mu {s:?} is neither rot:m/n nor a decimal")))?;
    Ok(Mu::Decimal(x))
}

fn parse_q(s: &str) -> Result<Rational> {
    parse_rational(s)
}

fn build_setup(u_spec: &str, e_spec: &str) -> Result<(SpectralSetup, Value)> {
    if e_spec == "avg" {
        let u = FiniteAbelianGroup::parse_spec(u_spec)?;
        let describe = u.describe();
        let setup = SpectralSetup::new(avg_projection(&u))?;
        return Ok((setup, json!({ "U": describe, "e": "avg" })));
    }
    if let Some(q) = e_spec.strip_prefix("trace:") {
        let cert = rational_projection(&parse_q(q)?)?;
        let describe = cert.e.group().describe();
        let setup = SpectralSetup::new(cert.e.clone())?;
        return Ok((setup, json!({ "U": describe, "e": e_spec, "projection_n": cert.n })));
    }
    Err(Error::InvalidInput(format!("unknown projection spec {e_spec:?}; use avg or trace:q")))
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let (setup, mut payload) = build_setup(&a.u, &a.e)?;
    if a.nmax < 2 {
        return Err(Error::InvalidInput("--nmax must be at least 2".into()));
    }
    let w = setup.w().clone();
    payload["W"] = dual(&w);
    let mut atoms = Vec::new();
    for n in 2..=a.nmax {
        for m in (1..n).filter(|&m| num_integer::gcd(m, n) == 1) {
            atoms.push(json!({
                "m": m,
                "n": n,
                "lambda_decimal": format!("{:.15}", lambda_f64(m, n)),
                "mass": dual(&spectral_mass(&w, n)?),
            }));
        }
    }
    payload["atoms"] = Value::Array(atoms);
    payload["completeness"] = json!({
        "N": a.n_terms,
        "partial_sum": dual(&completeness_partial_sum(&w, a.n_terms)?),
        "tail": dual(&completeness_tail(&w, a.n_terms)?),
    });
    let mut checks = Vec::new();
    if let Some(mu) = &a.mu {
        let value = spectral_measure(&w, &parse_mu(mu)?)?;
        payload["measure"] = json!({
            "mu": mu,
            "mass": dual(&value.mass),
            "recognized": value.recognized,
            "rotation": value.rotation.map(|(m, n)| json!({ "m": m, "n": n })),
        });
    }
    if a.verify {
        if a.nmax > VERIFY_NMAX {
            return Err(Error::BudgetExceeded(format!("--verify supports --nmax up to {VERIFY_NMAX}")));
        }
        let suite = setup.verify_suite(a.nmax)?;
        checks.push(("q_projections", suite.q_projections));
        checks.push(("orthogonality", suite.orthogonality));
        checks.push(("action", suite.action));
        checks.push(("r_orthogonality", suite.r_orthogonality));
        checks.push(("p_projections", suite.p_all()));
        payload["verification"] = serde_json::to_value(&suite).expect("suite serializes");
    }
    checked(checks, payload)
}

fn parse_bound(s: &str) -> Result<BigInt> {
    let r = parse_rational(s)?;
    if !r.is_integer() || !r.is_positive() {
        return Err(Error::InvalidInput(format!("bound {s:?} must be a positive integer")));
    }
    Ok(r.to_integer())
}

fn kappa(a: &KappaArgs) -> Result<Outcome> {
    let mut params = KappaParams::new(parse_q(&a.p)?, parse_q(&a.q)?, a.digits);
    if let Some(t) = a.terms {
        params = params.with_terms(t);
    }
    let report = kappa_eval(&params)?;
    let mut payload = json!({ "kappa": report.record() });
    let mut checks = Vec::new();
    // a fixed term count need not reach the requested digits
    if a.terms.is_none() {
        let target = pow_int(&rat(10, 1), -(a.digits as i64));
        checks.push(("tail_below_digits", report.tail_exact < target));
    }
    if let Some(b) = &a.bound {
        let probe = rationality_probe(&report, &parse_bound(b)?)?;
        payload["kappa"]["verdict"] = serde_json::to_value(&probe).expect("probe serializes");
    }
    checked(checks, payload)
}

fn dimker(a: &DimkerArgs) -> Result<Outcome> {
    let x = parse_q(&a.x)?;
    let y = parse_q(&a.y)?;
    let ds = dim_ker_ts(&x, &y, a.trunc_n)?;
    let prec = working_precision(a.digits);
    let k = kappa_eval(&KappaParams::new(x.recip(), y.recip(), a.digits))?;
    let agree = ds.enclosure(prec)?.intersects(&k.value);
    let payload = json!({
        "X": dual(&x),
        "Y": dual(&y),
        "truncN": a.trunc_n,
        "partial": dual(&ds.partial),
        "tail_bound": dual(&ds.tail_bound),
        "single_sum": k.record().ball,
    });
    checked(vec![("double_sum_meets_single_sum", agree)], payload)
}

fn projection(a: &ProjectionArgs) -> Result<Outcome> {
    let cert = rational_projection(&parse_q(&a.q)?)?;
    let v = cert.verify();
    let mut record = serde_json::to_value(cert.record()).expect("certificate serializes");
    if !a.show_element {
        record.as_object_mut().expect("object").remove("e");
        record["support"] = json!(cert.e.support_len());
    }
    let payload = json!({ "certificate": record, "trace": dual(&cert.e.trace()) });
    checked(
        vec![
            ("projection", v.projection),
            ("trace", v.trace),
            ("integral", v.integral),
            ("decomposition", v.decomposition),
            ("orthogonal_parts", v.orthogonal_parts),
        ],
        payload,
    )
}

fn series(a: &SeriesArgs) -> Result<Outcome> {
    let s = phi_series(a.k)?;
    let limit = a.k.min(100);
    let checks = vec![
        ("symmetric", s.is_symmetric()),
        ("diagonal_bridge", diagonal_bridge_check(a.k)?),
        ("gcd_phi_identity", gcd_phi_identity_check(limit)),
        ("totient_series", series_identity_check(a.k)?),
    ];
    checked(checks, json!({ "K": a.k, "gcd_phi_limit": limit }))
}

fn gaps(a: &GapsArgs, ctx: &Context) -> Result<Outcome> {
    if let Some(m) = a.m {
        let c = gap_condition_check_with(m, a.n, ctx.seed, ctx.budget)?;
        return checked(vec![], json!({ "gap_check": c }));
    }
    let q = a.q.ok_or_else(|| Error::InvalidInput("either --Q or --m is required".into()))?;
    let w = gap_witness_with(q, a.n, ctx.seed, ctx.budget)?;
    checked(vec![], json!({ "witness": w.record() }))
}

fn check_all(a: &CheckAllArgs, ctx: &Context) -> Result<Outcome> {
    let mut checks: Vec<(&'static str, bool)> = Vec::new();
    let mut payload = json!({});
    let two = rat(2, 1);

    let c2 = SpectralSetup::avg(FiniteAbelianGroup::cyclic(2)?)?;
    checks.push(("spectral_suite_c2", c2.verify_suite(if a.quick { 4 } else { 5 })?.all()));
    if !a.quick {
        let c3 = SpectralSetup::avg(FiniteAbelianGroup::cyclic(3)?)?;
        checks.push(("spectral_suite_c3", c3.verify_suite(5)?.all()));
    }
    checks.push((
        "atom_masses",
        spectral_measure(&two, &Mu::Rotation { m: 1, n: 2 })?.mass == rat(1, 3)
            && spectral_measure(&two, &Mu::Rotation { m: 1, n: 3 })?.mass == rat(1, 7),
    ));
    checks.push((
        "completeness_20",
        Rational::one() - completeness_partial_sum(&two, 20)? == rat(21, 1 << 20),
    ));
    checks.push(("determinant_identity", det_identity_check(12)?));
    let mut eigen_ok = true;
    for n in 2..=12u64 {
        for m in 1..n {
            eigen_ok &= eigen_relation_check(m, n)?;
            for m2 in 1..n {
                let expected = if m == m2 { rat(n as i64, 2) } else { rat(0, 1) };
                eigen_ok &= orthogonality_inner(m, m2, n)? == expected;
            }
        }
    }
    checks.push(("eigenvector_identities", eigen_ok));

    let k = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 10))?;
    checks.push(("kappa_ten_digits", k.value.center_decimal(10) == "0.1659457149"));
    checks.push(("kappa_tail_400", kappa_tail_bound(&two, &two, 400) < pow_int(&rat(10, 1), -201)));
    let mut cross = true;
    for (x, y) in [(rat(2, 1), rat(2, 1)), (rat(2, 1), rat(3, 1))] {
        let ds = dim_ker_ts(&x, &y, 200)?;
        let kv = kappa_eval(&KappaParams::new(x.recip(), y.recip(), 30))?;
        cross &= ds.enclosure(working_precision(30))?.intersects(&kv.value);
    }
    checks.push(("double_vs_single_sum", cross));
    checks.push((
        "b_counts_30",
        (1..=30u64).all(|n| (1..=30u64).all(|m| b_count_bruteforce(n, m) == num_integer::gcd(n, m) - 1)),
    ));
    let sweep_failure = sweep(64)?;
    checks.push(("rational_projection_sweep_64", sweep_failure.is_none()));
    let z = build_z_and_check(&rat(1, 2), &rat(1, 2), 3)?;
    checks.push(("z_integral_and_eigen", z.all()));
    payload["z"] = json!({ "multiplier": z.multiplier, "minimal_multiplier": z.minimal_multiplier });

    checks.push(("a_three_way", a_three_way_check(if a.quick { 1000 } else { 10_000 })?));
    checks.push(("diagonal_bridge_300", diagonal_bridge_check(300)?));
    checks.push(("gcd_phi_identity_100", gcd_phi_identity_check(100)));
    let first = gap_witness_with(1, 2, ctx.seed, ctx.budget)?;
    let last = gap_witness_with(6, 2, ctx.seed, ctx.budget)?;
    checks.push(("gap_ratio_trend", last.max_ratio() < first.max_ratio()));

    let failing: Vec<u64> = (10..=60u64)
        .filter_map(|q| large_q_checks(q).map(|c| (!c.all()).then_some(q)).transpose())
        .collect::<Result<_>>()?;
    let threshold = large_q_threshold(10, 60)?;
    checks.push(("large_q_from_threshold", threshold.is_some()));
    payload["large_q"] = json!({ "range": [10, 60], "failing_q": failing, "threshold": threshold });
    checks.sort_by_key(|(n, _)| *n);
    checked(checks, payload)
}
