//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ctscheme::scheme_auto::{normalize_pair, Normalized, Target};
use ctscheme::*;

const PARITY_LIMIT: u64 = 1 << 16;
const PUBLISHED_SCHEME_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_SUITE_LIMIT: Duration = Duration::from_secs(600);
const GOOGOL_EVAL_LIMIT: Duration = Duration::from_millis(100);
const MOD125_GENERATION_LIMIT: Duration = Duration::from_secs(30 * 60);
const MOD125_CAP: usize = 1_000_000;
const FIBONACCI_LIMIT: Duration = Duration::from_millis(50);
const THROUGHPUT_TERMS: usize = 100_000;
const THROUGHPUT_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_TERMS: u64 = 300;
const APERY_TERMS: u64 = 60;
const LAMBDA_SAMPLES: usize = 100;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, title: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS [{id}] {title}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL [{id}] {title}: {detail}");
            }
        }
    }
}

fn md(p: u64, a: u32) -> Modulus {
    Modulus::new(p, a).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_published_schemes() -> Result<String, String> {
    let t = Instant::now();
    let catalan = generate_auto(&catalog("catalan").unwrap(), md(2, 1), 10).map_err(|e| e.to_string())?;
    let tc = t.elapsed();
    check(catalan.to_string() == "[[[2, 1], [2, 0]], [1, 1]]", || format!("catalan gave {catalan}"))?;
    let t = Instant::now();
    let motzkin = generate_auto(&catalog("motzkin").unwrap(), md(2, 1), 30).map_err(|e| e.to_string())?;
    let tm = t.elapsed();
    check(motzkin.to_string() == "[[[2, 2], [3, 4], [3, 3], [0, 2]], [1, 1, 1, 0]]", || {
        format!("motzkin gave {motzkin}")
    })?;
    let x = vec!["x".to_string()];
    let qs: Vec<String> = motzkin.defs().unwrap().iter().map(|(_, q)| format_mod(q, &x)).collect();
    check(qs == ["1+x^2", "1+x", "1", "x"], || format!("motzkin Q components {qs:?}"))?;
    check(tc < PUBLISHED_SCHEME_LIMIT && tm < PUBLISHED_SCHEME_LIMIT, || format!("too slow: {tc:?}, {tm:?}"))?;
    Ok(format!("both exact ({tc:?}, {tm:?})"))
}

struct CountRow {
    name: &'static str,
    modulus: Modulus,
    auto: usize,
    linear: usize,
}

fn scheme_invariants(auto: &AutoScheme, linear: &LinearScheme) -> Result<(), String> {
    let init = auto.initial();
    for (i, row) in auto.transitions().iter().enumerate() {
        if let Target::State(j) = row[0] {
            check(init[j] == init[i], || format!("automatic initial[σ(0,{})] differs", i + 1))?;
        }
    }
    check(linear.apply(0, linear.initial()) == linear.initial(), || "initial != C^(0)·initial".into())
}

fn oracle_equivalence(counts: &mut Vec<CountRow>) -> Result<String, String> {
    let start = Instant::now();
    let single = [md(2, 1), md(2, 2), md(2, 3), md(3, 1), md(3, 2), md(5, 1), md(5, 2)];
    let apery = [md(2, 1), md(2, 2), md(3, 1), md(5, 1)];
    let mut checked = 0usize;
    for name in ["catalan", "motzkin", "delannoy", "apery"] {
        let pair = catalog(name).unwrap();
        let (moduli, terms, exact): (&[Modulus], u64, Vec<BigInt>) = if name == "apery" {
            // The closed binomial sum is an independent exact oracle for the
            // three-variable constant term.
            let spec = BinomialSumSpec::apery();
            (&apery, APERY_TERMS, (0..APERY_TERMS).map(|n| binsum_direct(&spec, n)).collect())
        } else {
            (&single, ORACLE_TERMS, (0..ORACLE_TERMS).map(|n| ct_direct(&pair, n, None)).collect())
        };
        for &m in moduli {
            let auto = generate_auto(&pair, m, MOD125_CAP).map_err(|e| format!("{name} mod {m}: {e}"))?;
            let linear = generate_linear(&pair, m, MOD125_CAP).map_err(|e| format!("{name} mod {m}: {e}"))?;
            scheme_invariants(&auto, &linear).map_err(|e| format!("{name} mod {m}: {e}"))?;
            let pa = BigInt::from(m.value());
            let sa = seq_auto(&auto, terms as usize);
            let sl = seq_linear(&linear, terms as usize);
            for n in 0..terms {
                let want = (((&exact[n as usize] % &pa) + &pa) % &pa).to_u64().unwrap();
                let big = BigIndex::from(n);
                let got = [eval_auto(&auto, &big), eval_linear(&linear, &big), sa[n as usize], sl[n as usize]];
                check(got.iter().all(|&g| g == want), || {
                    format!("{name} mod {} at n={n}: oracle {want}, schemes {got:?}", m.value())
                })?;
                checked += 1;
            }
            counts.push(CountRow { name, modulus: m, auto: auto.state_count(), linear: linear.state_count() });
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < ORACLE_SUITE_LIMIT, || format!("suite took {elapsed:?}"))?;
    Ok(format!("{} (sequence, modulus) cases, {checked} indices, {elapsed:?}", counts.len()))
}

fn googol_residues() -> Result<String, String> {
    let googol = BigIndex::power(10, 100);
    let mut notes = Vec::new();
    let timed = |s: &Scheme| {
        let t = Instant::now();
        let v = s.eval(&googol);
        (v, t.elapsed())
    };
    let motzkin = catalog("motzkin").unwrap();
    for scheme in [
        Scheme::Auto(generate_auto(&motzkin, md(5, 2), 10_000).map_err(|e| e.to_string())?),
        Scheme::Linear(generate_linear(&motzkin, md(5, 2), 10_000).map_err(|e| e.to_string())?),
    ] {
        let (v, t) = timed(&scheme);
        check(v == 12, || format!("motzkin mod 25 ({}) gave {v}", scheme.kind()))?;
        check(t < GOOGOL_EVAL_LIMIT, || format!("mod 25 evaluation took {t:?}"))?;
    }
    notes.push("motzkin mod 25 = 12".to_string());
    for (name, expected) in [("catalan", 0u64), ("motzkin", 187), ("delannoy", 281)] {
        let pair = catalog(name).unwrap();
        let t = Instant::now();
        let s125 = generate_linear(&pair, md(5, 3), MOD125_CAP).map_err(|e| format!("{name} mod 125: {e}"))?;
        let gen_time = t.elapsed();
        check(gen_time < MOD125_GENERATION_LIMIT, || format!("{name} mod 125 generation took {gen_time:?}"))?;
        let s8 = generate_linear(&pair, md(2, 3), MOD125_CAP).map_err(|e| format!("{name} mod 8: {e}"))?;
        let r125 = s125.state_count();
        let schemes = [Scheme::Linear(s8), Scheme::Linear(s125)];
        let t = Instant::now();
        let v = eval_crt(&schemes, 1000, &googol).map_err(|e| e.to_string())?;
        let t = t.elapsed();
        check(v == expected, || format!("{name} mod 1000 gave {v:03}, expected {expected:03}"))?;
        check(t < GOOGOL_EVAL_LIMIT, || format!("{name} CRT evaluation took {t:?}"))?;
        notes.push(format!("{name} {v:03} ({r125} states mod 125, {t:?})"));
    }
    Ok(notes.join("; "))
}

fn catalan_parity() -> Result<String, String> {
    let s = generate_auto(&catalog("catalan").unwrap(), md(2, 1), 10).map_err(|e| e.to_string())?;
    for n in 0..PARITY_LIMIT {
        let odd = eval_auto(&s, &BigIndex::from(n)) == 1;
        check(odd == (n + 1).is_power_of_two(), || format!("n={n}"))?;
    }
    Ok(format!("all n < {PARITY_LIMIT}"))
}

fn fibonacci() -> Result<String, String> {
    let googol = BigIndex::power(10, 100);
    let t = Instant::now();
    let a = cfinite_eval(&CFiniteSpec::fibonacci(), 1000, &googol).map_err(|e| e.to_string())?;
    let ta = t.elapsed();
    let t = Instant::now();
    let b = fib_doubling(&googol, 1000).map_err(|e| e.to_string())?;
    let tb = t.elapsed();
    check(a == 875 && b == 875, || format!("companion {a}, doubling {b}"))?;
    check(ta < FIBONACCI_LIMIT && tb < FIBONACCI_LIMIT, || format!("too slow: {ta:?}, {tb:?}"))?;
    Ok(format!("875 by both ({ta:?}, {tb:?})"))
}

fn fail_semantics() -> Result<String, String> {
    match generate_auto(&catalog("motzkin").unwrap(), md(2, 6), 10_000) {
        Err(GenerateError::CapExceeded { cap, reached }) => Ok(format!("CapExceeded (cap {cap}, reached {reached})")),
        Ok(s) => Err(format!("generated {} states", s.state_count())),
        Err(e) => Err(e.to_string()),
    }
}

fn state_counts(counts: &[CountRow]) -> Result<String, String> {
    let motzkin = catalog("motzkin").unwrap();
    let published = [(2u32, 24usize, 8usize), (3, 128, 18), (4, 801, 43), (5, 5093, 96)];
    let mut lines = Vec::new();
    let mut warnings = 0;
    for (a, auto_ref, lin_ref) in published {
        let m = md(2, a);
        let auto = generate_auto(&motzkin, m, 100_000).map_err(|e| e.to_string())?.state_count();
        let linear = generate_linear(&motzkin, m, 100_000).map_err(|e| e.to_string())?.state_count();
        check(linear <= auto, || format!("motzkin mod {}: linear {linear} > automatic {auto}", m.value()))?;
        if auto != auto_ref || linear != lin_ref {
            warnings += 1;
        }
        lines.push(format!("mod {}: auto {auto}/{auto_ref}, linear {linear}/{lin_ref}", m.value()));
    }
    for row in counts {
        check(row.linear <= row.auto, || {
            format!("{} mod {}: linear {} > automatic {}", row.name, row.modulus.value(), row.linear, row.auto)
        })?;
    }
    Ok(format!(
        "linear <= automatic everywhere; motzkin ours/reference {}{}",
        lines.join(", "),
        if warnings > 0 { format!(" (WARNING: {warnings} count mismatches)") } else { String::new() }
    ))
}

fn random_poly(rng: &mut StdRng, m: Modulus, arity: usize, max_terms: usize) -> ModLaurentPoly {
    let len = rng.random_range(1..=max_terms);
    let terms: Vec<(ExponentVector, u64)> = (0..len)
        .map(|_| {
            let e: Vec<i32> = (0..arity).map(|_| rng.random_range(-2..=2)).collect();
            (ExponentVector::from_slice(&e), rng.random_range(0..m.value()))
        })
        .collect();
    ModLaurentPoly::from_terms(m, arity, terms)
}

fn algebraic_properties() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut lambda = 0;
    for p in [2u64, 3] {
        for a in 1..=3u32 {
            let m = md(p, a);
            for sample in 0..LAMBDA_SAMPLES {
                let arity = 1 + sample % 2;
                let poly = random_poly(&mut rng, m, arity, 4);
                let lhs = poly.pow(p.pow(a)).lambda_divide().map_err(|e| format!("{p}^{a}: {e}"))?;
                check(lhs == poly.pow(p.pow(a - 1)), || format!("Λ identity fails mod {p}^{a} for {poly:?}"))?;
                lambda += 1;
            }
        }
    }

    let mut normalized = 0;
    for p in [2u64, 3, 5] {
        let m = md(p, 2);
        for _ in 0..40 {
            let base = random_poly(&mut rng, m, 1, 3);
            let q = random_poly(&mut rng, m, 1, 4);
            // Powers of p make the first component p-power supported.
            let pp = base.pow(p);
            let before = ct_prefix(&CtPair::new(pp.to_int(), q.to_int()).unwrap(), 25, m);
            let after = match normalize_pair(pp, q) {
                Normalized::Zero => vec![0; 25],
                Normalized::Pair(np, nq) => ct_prefix(&CtPair::new(np.to_int(), nq.to_int()).unwrap(), 25, m),
            };
            check(before == after, || "normalize_pair changed the sequence".into())?;
            normalized += 1;
        }
    }

    let mut spans = 0;
    for (p, a) in [(2u64, 3u32), (3, 2), (5, 2), (2, 5)] {
        let m = md(p, a);
        for _ in 0..100 {
            let basis: Vec<ModLaurentPoly> = (0..rng.random_range(1..5)).map(|_| random_poly(&mut rng, m, 1, 4)).collect();
            let coeffs: Vec<u64> = basis.iter().map(|_| rng.random_range(0..m.value())).collect();
            let combine = |c: &[u64]| {
                basis.iter().zip(c).fold(ModLaurentPoly::zero(m, 1), |acc, (b, &k)| &acc + &b.scale(k))
            };
            let target = combine(&coeffs);
            let found = span_solve(&basis, &target).ok_or("combination not found")?;
            check(combine(&found) == target, || "reconstruction mismatch".into())?;
            let perturbed = &target + &random_poly(&mut rng, m, 1, 2);
            if let Some(c) = span_solve(&basis, &perturbed) {
                check(combine(&c) == perturbed, || "perturbed reconstruction mismatch".into())?;
            }
            spans += 1;
        }
    }

    let central: BinomialSumSpec = "1; 1,0,0,0,1,0".parse().map_err(|e: CtDefError| e.to_string())?;
    let doubled: BinomialSumSpec = "0; 2,0,0,1,0,0".parse().map_err(|e: CtDefError| e.to_string())?;
    for spec in [BinomialSumSpec::apery(), central, doubled] {
        let pair = bin_to_ct(&spec).map_err(|e| e.to_string())?;
        for n in 0..=12 {
            let (direct, ct) = (binsum_direct(&spec, n), ct_direct(&pair, n, None));
            check(direct == ct, || format!("{spec}: n={n} binsum {direct} vs constant term {ct}"))?;
        }
    }
    Ok(format!(
        "Λ identity {lambda} samples, normalization {normalized} pairs, span fuzz {spans} cases, binsum n <= 12; \
         scheme initial-value invariants checked in [2]"
    ))
}

fn throughput() -> Result<String, String> {
    let motzkin = catalog("motzkin").unwrap();
    let mut notes = Vec::new();
    for scheme in [
        Scheme::Auto(generate_auto(&motzkin, md(5, 2), 10_000).map_err(|e| e.to_string())?),
        Scheme::Linear(generate_linear(&motzkin, md(5, 2), 10_000).map_err(|e| e.to_string())?),
    ] {
        let t = Instant::now();
        let values = scheme.seq(THROUGHPUT_TERMS);
        let elapsed = t.elapsed();
        check(values.len() == THROUGHPUT_TERMS, || "wrong length".into())?;
        check(elapsed <= THROUGHPUT_LIMIT, || format!("{} took {elapsed:?}", scheme.kind()))?;
        notes.push(format!("{} {elapsed:?}", scheme.kind()));
    }
    Ok(format!("{THROUGHPUT_TERMS} terms: {}", notes.join(", ")))
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };
    let mut counts = Vec::new();
    report.line(1, "exact published schemes", exact_published_schemes());
    report.line(2, "oracle equivalence", oracle_equivalence(&mut counts));
    report.line(3, "googol-th residues", googol_residues());
    report.line(4, "catalan parity law", catalan_parity());
    report.line(5, "fibonacci", fibonacci());
    report.line(6, "FAIL semantics", fail_semantics());
    report.line(7, "state counts", state_counts(&counts));
    report.line(8, "algebraic properties", algebraic_properties());
    report.line(9, "throughput", throughput());
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
