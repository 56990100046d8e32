use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use covstat::asympt::log_log_slope;
use covstat::core_surface::{core_ab, core_cyclic, verify_core, word_cycle};
use covstat::expect::{
    build_frame, cyclic_core, defect_bound_check, e_emb_exact, e_fix_exact, e_fix_series, random_trial,
    upsilon_bound_checks, xi_exact,
};
use covstat::oracle::{all_covers, brute_e_emb, brute_e_fix, count_homs, sample_estimate};
use covstat::perm::factorial;
use covstat::resolve::{growing_resolution, verify_resolution};
use covstat::symrep::{zeta_exact, zeta_poly};
use covstat::tiled::{is_isomorphic, octagon_disc, point, single_edge};
use covstat::words::{divisor_count, max_root, parse_word};
use covstat::{TiledSurface, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

fn core(s: &str) -> TiledSurface {
    cyclic_core(&w(s)).unwrap()
}

fn f64_of(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

fn hurwitz_count() -> Outcome {
    let t = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=4 {
        let c = count_homs(n).map_err(|e| e.to_string())?;
        let f = BigRational::from_integer(BigInt::from(factorial(n)));
        let expected = f.clone() * f.clone() * f * zeta_exact(n, 2);
        ensure(BigRational::from_integer(c.clone()) == expected, || format!("n = {}: {} vs {}", n, c, expected))?;
        counts.push(c.to_string());
    }
    ensure(counts[..3] == ["1", "16", "486"], || format!("counts {:?}", counts))?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {:.1} s", secs))?;
    Ok(format!("counts {:?} in {:.2} s", counts, secs))
}

fn zeta_expansion() -> Outcome {
    let p = zeta_poly(2, 5).map_err(|e| e.to_string())?;
    let coeffs: Vec<BigRational> = (0..5).map(|k| p.coeff(k)).collect();
    let expected: Vec<BigRational> = [1, 0, 1, 2, 11].iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
    ensure(coeffs == expected, || format!("coefficients {:?}", coeffs))?;
    let cs: Vec<f64> = (8..=14)
        .map(|n| {
            let exact = zeta_exact(n, 2) / BigRational::from_integer(BigInt::from(2));
            let approx = p.eval_at(n as i64);
            f64_of(&(exact - approx)).abs() * (n as f64).powi(5)
        })
        .collect();
    ensure(cs.iter().all(|&c| c.is_finite() && c <= cs[0]), || format!("n^5 |gap| over 8..14 = {:?}", cs))?;
    Ok(format!("coefficients (1,0,1,2,11); n^5 |gap| falls from {:.1} to {:.1} over n = 8..14", cs[0], cs[6]))
}

fn core_fixtures() -> Outcome {
    for (word, counts, len) in [("aba^-2b^-1c", (12, 14, 2), 6), ("[a,b]", (7, 8, 1), 4)] {
        let (y, _) = core_cyclic(&w(word)).map_err(|e| e.to_string())?;
        let got = (y.vertex_count(), y.edge_count(), y.octagon_count());
        ensure(got == counts, || format!("{}: (v,e,f) = {:?}", word, got))?;
        let lens: Vec<usize> = y.boundary_cycles().iter().map(|c| c.len()).collect();
        ensure(lens == [len, len], || format!("{}: boundary lengths {:?}", word, lens))?;
        verify_core(&y).map_err(|e| format!("{}: {}", word, e))?;
    }
    Ok("(12,14,2) with boundaries 6,6 and (7,8,1) with boundaries 4,4; both verify".into())
}

fn formula_vs_oracle() -> Outcome {
    let ys = [("point", point()), ("Core(a)", core("a")), ("Core([a,b])", core("[a,b]")), ("octagon disc", octagon_disc())];
    let mut checked = 0;
    for (name, y) in &ys {
        for n in 3..=4 {
            let a = e_emb_exact(y, n).map_err(|e| e.to_string())?;
            let b = f64_of(&brute_e_emb(y, n).map_err(|e| e.to_string())?);
            ensure((a - b).abs() <= 1e-9 * b.abs().max(1.0), || format!("emb {} n={}: {} vs {}", name, n, a, b))?;
            checked += 1;
        }
    }
    for word in ["a", "a^2", "ab", "[a,b]"] {
        for n in 3..=4 {
            let a = e_fix_exact(&w(word), n).map_err(|e| e.to_string())?;
            let b = f64_of(&brute_e_fix(&w(word), n).map_err(|e| e.to_string())?);
            ensure((a - b).abs() <= 1e-9 * b.abs().max(1.0), || format!("fix {} n={}: {} vs {}", word, n, a, b))?;
            checked += 1;
        }
    }
    Ok(format!("{} comparisons within 1e-9", checked))
}

fn leading_terms() -> Outcome {
    let mut parts = Vec::new();
    for (word, d) in [("a", 1), ("a^2", 2), ("a^6", 4), ("[a,b]", 1), ("ab", 1)] {
        let q = max_root(&w(word)).map_err(|e| e.to_string())?;
        ensure(q.divisor_count == d, || format!("{}: divisor count {}", word, q.divisor_count))?;
        let r = e_fix_series(&w(word), 2).map_err(|e| e.to_string())?;
        ensure(r.a_minus_1 == "0" && r.a_0 == d.to_string(), || {
            format!("{}: a_-1 = {}, a_0 = {}, expected {}", word, r.a_minus_1, r.a_0, d)
        })?;
        parts.push(format!("{}:{}", word, r.a_0));
    }
    for (word, d, seed) in [("a", 1.0, 1), ("a^2", 2.0, 2)] {
        let (est, se) = sample_estimate(&w(word), 20, 100_000, seed).map_err(|e| e.to_string())?;
        ensure((est - d).abs() <= 3.0 * se, || format!("{} at n=20: {} +- {}", word, est, se))?;
        parts.push(format!("{}@20={:.3}+-{:.3}", word, est, se));
    }
    Ok(format!("a_-1 = 0 and a_0 = d(q): {}", parts.join(" ")))
}

fn resolution_structure() -> Outcome {
    let covers = all_covers(3).map_err(|e| e.to_string())?;
    for q in [1usize, 2, 3, 4, 6] {
        let y = core(&format!("a^{}", q));
        let r = growing_resolution(&y, 0).map_err(|e| e.to_string())?;
        let top = r.with_chi_at_least(0);
        ensure(top.len() == divisor_count(q), || format!("q={}: {} elements with chi >= 0", q, top.len()))?;
        let mut found = BTreeSet::new();
        for e in &top {
            let m = (1..=q)
                .filter(|m| q % m == 0)
                .find(|&m| is_isomorphic(&e.surface, &core(&format!("a^{}", m))))
                .ok_or_else(|| format!("q={}: element is not a core of a power of a", q))?;
            found.insert(m);
        }
        ensure(found.len() == divisor_count(q), || format!("q={}: divisors hit {:?}", q, found))?;
        verify_resolution(&r, &covers).map_err(|e| format!("q={}: {:?}", q, e))?;
    }
    Ok("d(q) elements with chi >= 0 for q in {1,2,3,4,6}; factorization verified on all covers at n = 3".into())
}

fn xi_estimates() -> Outcome {
    let sbr = [
        ("point", point()),
        ("edge", single_edge(0)),
        ("octagon disc", octagon_disc()),
        ("Core(a)", core("a")),
        ("Core(a^2)", core("a^2")),
        ("Core(ab)", core("ab")),
        ("Core([a,b])", core("[a,b]")),
        ("Core(<a,b>)", core_ab()),
    ];
    let mut worst = 0.0f64;
    for (name, y) in &sbr {
        ensure(y.is_strongly_boundary_reduced(), || format!("{} is not strongly boundary reduced", name))?;
        let fr = build_frame(y, 0).map_err(|e| e.to_string())?;
        let scaled: Vec<f64> = (6..=12)
            .filter(|&n| n >= y.vertex_count())
            .map(|n| xi_exact(&fr, n).map(|x| (x - 2.0).abs() * n as f64))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let max = scaled.iter().cloned().fold(0.0, f64::max);
        ensure(max <= 4.0 && scaled.last() <= scaled.first(), || format!("{}: n |xi - 2| = {:?}", name, scaled))?;
        worst = worst.max(max);
    }
    let y = word_cycle(&w("[a,b]").0).map_err(|e| e.to_string())?;
    ensure(y.is_boundary_reduced() && !y.is_strongly_boundary_reduced(), || "cycle of [a,b] is not boundary reduced only".into())?;
    let fr = build_frame(&y, 0).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (6..=12).map(|n| xi_exact(&fr, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(xs.iter().all(|&x| x.abs() <= 4.0), || format!("cycle of [a,b]: xi = {:?}", xs))?;
    Ok(format!(
        "{} strongly reduced members with n |xi - 2| <= {:.2}; reduced-only cycle has xi in [{:.3}, {:.3}]",
        sbr.len(),
        worst,
        xs.iter().cloned().fold(f64::MAX, f64::min),
        xs.iter().cloned().fold(0.0, f64::max)
    ))
}

fn defect_inequalities() -> Outcome {
    let mut corpus = vec![
        ("point", point()),
        ("edge", single_edge(1)),
        ("octagon disc", octagon_disc()),
        ("Core(<a,b>)", core_ab()),
    ];
    for s in ["a", "a^2", "ab", "abc", "[a,b]"] {
        corpus.push((s, core(s)));
    }
    corpus.push(("cycle of [a,b]", word_cycle(&w("[a,b]").0).unwrap()));
    for (name, y) in &corpus {
        let md = y.max_defect().map_err(|e| e.to_string())?;
        let flags = y.boundary_flags();
        ensure(flags.boundary_reduced, || format!("{} is not boundary reduced", name))?;
        ensure(md <= 0, || format!("{}: maxDefect {}", name, md))?;
        if flags.strongly_boundary_reduced {
            ensure(md <= -2, || format!("{}: maxDefect {}", name, md))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut trials, mut checks) = (0usize, 0usize);
    while trials < 10_000 {
        let (name, y) = &corpus[rng.gen_range(0..corpus.len())];
        let frame = build_frame(y, rng.gen()).map_err(|e| e.to_string())?;
        let n = rng.gen_range(40..120);
        let Some(t) = random_trial(&frame, n, 4, 300, &mut rng).map_err(|e| e.to_string())? else { continue };
        let report = defect_bound_check(y, &frame, &t.index, &t.choice).map_err(|e| e.to_string())?;
        let mut all = report.checks;
        if trials % 10 == 0 {
            all.extend(upsilon_bound_checks(&frame, &t.index).map_err(|e| e.to_string())?);
        }
        if let Some(bad) = all.iter().find(|c| !c.holds) {
            return Err(format!("{}: {} ({}) at {:?}", name, bad.name, bad.detail, t.index));
        }
        checks += all.len();
        trials += 1;
    }
    Ok(format!("{} trials, {} inequality checks, zero violations", trials, checks))
}

fn series_consistency() -> Outcome {
    let mut slopes = Vec::new();
    for word in ["a", "a^2"] {
        let s = e_fix_series(&w(word), 4).map_err(|e| e.to_string())?;
        let pts: Vec<(f64, f64)> = (6..=10)
            .map(|n| e_fix_exact(&w(word), n).map(|e| (n as f64, (s.eval_f64(n as f64) - e).abs())))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let slope = log_log_slope(&pts);
        ensure(slope <= -3.0, || format!("{}: slope {:.2} from {:?}", word, slope, pts))?;
        slopes.push(format!("{}: {:.2}", word, slope));
    }
    for (name, y, n) in [("Core(a)", core("a"), 8), ("Core(ab)", core("ab"), 8), ("Core([a,b])", core("[a,b]"), 9)] {
        let xs: Vec<f64> = [3u64, 17, 99]
            .iter()
            .map(|&s| build_frame(&y, s).and_then(|fr| xi_exact(&fr, n)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(xs.iter().all(|x| (x - xs[0]).abs() <= 1e-9 * xs[0].abs().max(1.0)), || format!("{}: {:?}", name, xs))?;
    }
    Ok(format!("log-log slopes {}; xi agrees across 3 frame seeds", slopes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("homomorphism count", hurwitz_count),
        ("zeta expansion", zeta_expansion),
        ("core surface fixtures", core_fixtures),
        ("formula vs oracle", formula_vs_oracle),
        ("leading term d(q)", leading_terms),
        ("resolution structure", resolution_structure),
        ("xi estimates", xi_estimates),
        ("defect and coefficient inequalities", defect_inequalities),
        ("series consistency", series_consistency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS [{}] {} ({:.1} s)", i + 1, name, detail, secs),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL [{}] {} ({:.1} s)", i + 1, name, detail, secs);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
