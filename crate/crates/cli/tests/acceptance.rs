//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::process::Command;
use std::time::{Duration, Instant};

use multiplicity_core::certify::{genus_four, genus_oddp, genus_pow2_rp, projective_sweep};
use multiplicity_core::charclass::{
    alpha_class, alpha_class_stable, alpha_default_k, compute_s, compute_s4_keeping_a, default_sizes,
    leading_term_reduce, s_formula_at, Route,
};
use multiplicity_core::gpoly::{ring_new, GradedPoly, Monomial, Ring};
use multiplicity_core::oracle::{morin_tuple, moment_tuple, perturbed_residual, random_moment_tuple, Scalar};
use multiplicity_core::spaces::{cp_pontryagin_virtual, evaluate_class, virtual_sw_rp, ClassSeries};
use multiplicity_core::symfun::{
    elementary_symmetric, expand_elementary, expanded_coefficient, random_eval_check, ElementaryBasis, FormalRoots,
    SymmetricPoly,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Check {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sw(n: usize, text: &str) -> Result<GradedPoly, String> {
    let ring = multiplicity_core::charclass::stiefel_whitney_ring(n).map_err(err)?;
    GradedPoly::parse(&ring, text).map_err(err)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for d in 0..=6 {
        let r = compute_s(2, d).map_err(err)?;
        let want = sw(r.formula.ring().nvars(), &format!("w{}", d + 1))?;
        ensure(r.formula == want, || format!("s_{{2,{d}}} = {}", r.formula))?;
    }
    within(start.elapsed(), Duration::from_secs(1))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let s0 = compute_s(4, 0).map_err(err)?;
    let want0 = sw(s0.formula.ring().nvars(), "w1^3 + w1*w2")?;
    ensure(s0.formula == want0, || format!("s_{{4,0}} = {}", s0.formula))?;
    let s1 = compute_s(4, 1).map_err(err)?;
    let want1 = sw(s1.formula.ring().nvars(), "w2^3 + w3^2 + w1*w2*w3 + w2*w4")?;
    ensure(s1.formula == want1, || format!("s_{{4,1}} = {}", s1.formula))?;
    within(start.elapsed(), Duration::from_secs(30))
}

fn criterion_3() -> Check {
    for q in [2, 4] {
        for d in 0..=3 {
            let r = compute_s(q, d).map_err(err)?;
            let want = GradedPoly::generator(r.formula.ring(), &format!("w{}", d + 1)).map_err(err)?.pow(q as u64 - 1);
            let got = leading_term_reduce(&r);
            ensure(got == want, || format!("q = {q}, d = {d}: reduced to {got}"))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    for q in [2, 4] {
        for d in 0..=3 {
            let (nu, mu) = default_sizes(q, d);
            let a = s_formula_at(q, nu, mu, Route::FactorCoefficients).map_err(err)?;
            let b = s_formula_at(q, nu + 1, mu + 1, Route::FactorCoefficients).map_err(err)?;
            ensure(a == b, || format!("s_{{{q},{d}}} unstable: {a} vs {b}"))?;
        }
    }
    for p in [3, 5, 7] {
        for i in 1..=3 {
            let k = alpha_default_k(p, i);
            let a = alpha_class(p, i, k).map_err(err)?;
            let b = alpha_class(p, i, k + 1).map_err(err)?;
            let a_up = a.formula.embed_into(b.formula.ring()).map_err(err)?;
            ensure(a_up == b.formula, || format!("alpha_{{{p},{i}}} unstable: {} vs {}", a.formula, b.formula))?;
        }
    }
    for d in 0..=2 {
        let with_a = compute_s4_keeping_a(d, Route::FactorCoefficients).map_err(err)?;
        let without = compute_s(4, d).map_err(err)?.formula;
        ensure(with_a == without, || format!("d = {d}: with a {with_a}, without {without}"))?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    for i in 1..=4 {
        for k in [i, alpha_default_k(3, i), alpha_default_k(3, i) + 2] {
            let a = alpha_class(3, i, k).map_err(err)?;
            let want = GradedPoly::generator(a.formula.ring(), &format!("p{}", 4 * i)).map_err(err)?;
            ensure(a.formula == want, || format!("alpha_{{3,{i}}} at k = {k} is {}", a.formula))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [3u32, 5, 7] {
        for i in 1..=3 {
            let a = alpha_class_stable(p, i).map_err(err)?;
            let roots = FormalRoots::new("s", a.k as usize, 4).and_then(|r| r.ring(p)).map_err(err)?;
            let images: Vec<GradedPoly> = roots
                .generators()
                .iter()
                .map(|g| GradedPoly::generator(&roots, &g.name).map(|x| x.pow((p as u64 - 1) / 2)))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let s = elementary_symmetric(&roots, i as usize).substitute(&roots, &images).map_err(err)?;
            ensure(random_eval_check(&s, &a.formula, 100, &mut rng), || {
                format!("alpha_{{{p},{i}}} = {} fails random evaluation", a.formula)
            })?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let start = Instant::now();
    for l in [3u32, 4] {
        let n = (1u32 << l) - 2;
        let rows = projective_sweep(l).map_err(err)?;
        ensure(rows.len() == 3 * n as usize, || format!("l = {l}: {} rows", rows.len()))?;
        for c in &rows {
            let (q, d, m) = (c.params["q"] as u32, c.params["d"] as u32, c.params["m"] as u32);
            let power = (q - 1) * (d + 1);
            let expect = power <= m;
            ensure(c.conclusive == expect, || format!("l = {l}, q = {q}, d = {d}: conclusive = {}", c.conclusive))?;
            if expect {
                let w = c.witness_text().unwrap_or_default();
                let want = if power == 1 { "u".to_string() } else { format!("u^{power}") };
                ensure(w == want, || format!("l = {l}, q = {q}, d = {d}: witness {w}"))?;
            }
            if q == 2 || q == 4 {
                // Independent recomputation of both routes.
                let series = virtual_sw_rp(m, n).map_err(err)?;
                let leading = series.component(d + 1).pow(q as u64 - 1);
                let explicit = if power <= m {
                    evaluate_class(&compute_s(q, d).map_err(err)?.formula, &series).map_err(err)?
                } else {
                    GradedPoly::zero(series.ring())
                };
                ensure(leading == explicit && leading == c.evaluated, || {
                    format!("l = {l}, q = {q}, d = {d}: {leading} vs {explicit} vs {}", c.evaluated)
                })?;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10))
}

fn criterion_7() -> Check {
    for l in [3u32, 4, 5] {
        for q in [2u32, 4, 8] {
            for d in 0..(1u32 << l) - 3 {
                if q * (d + 1) >= (1 << l) - 1 {
                    continue;
                }
                let c = genus_pow2_rp(l, d, q).map_err(err)?;
                let m = (1u64 << l) - 2 - d as u64;
                let general = (m + d as u64) * (q as u64 - 1) + 1;
                let special = ((1u64 << l) - 3) * (q as u64 - 1) + 1;
                ensure(c.conclusive && c.bound == Some(general), || format!("l = {l}, q = {q}, d = {d}: {:?}", c.bound))?;
                ensure(general == ((1u64 << l) - 2) * (q as u64 - 1) + 1, || "general bound".into())?;
                ensure(c.params["rp_specialised_bound"] == special as i64, || format!("l = {l}, q = {q}, d = {d}: specialised"))?;
            }
        }
    }
    let rp6 = virtual_sw_rp(6, 6).map_err(err)?;
    let g = genus_four(6, &rp6).map_err(err)?;
    ensure(g.bound == Some(19) && g.witness_text().as_deref() == Some("u^3"), || format!("genus_four(RP^6): {:?}", g.bound))?;
    ensure(g.evaluated.to_string() == "u^3", || format!("RP^6 evaluated {}", g.evaluated))?;
    let mut conclusive = 0;
    for p in [3u32, 5, 7] {
        for cp in 1..=6u32 {
            for extra in 0..=4 {
                let series = cp_pontryagin_virtual(cp, 2 * cp + extra, p).map_err(err)?;
                for i in 1..=3 {
                    let c = genus_oddp(2 * cp, p, i, &series).map_err(err)?;
                    let want = (2 * cp as u64 + 2 * i as u64 - 1) * (p as u64 - 1) + 1;
                    if c.conclusive {
                        conclusive += 1;
                        ensure(c.bound == Some(want), || format!("p = {p}, CP^{cp}, i = {i}: {:?}", c.bound))?;
                    }
                }
            }
        }
    }
    ensure(conclusive > 0, || "no conclusive odd-prime genus input".into())
}

fn criterion_8() -> Check {
    let zero = BigRational::zero();
    for k in 1..=3u32 {
        for (m, n) in [(k as usize, k as usize), (2 * k as usize, 2 * k as usize + 1), (3 * k as usize, 3 * k as usize + 2)] {
            if k as usize * (n - m + 1) > m {
                continue;
            }
            let (_, t) = morin_tuple::<BigRational>(k, m, n).map_err(err)?;
            ensure(t.len() == k as usize + 1, || format!("k = {k}: {} points", t.len()))?;
            ensure(t.residual == zero, || format!("k = {k}, m = {m}, n = {n}: residual {}", t.residual))?;
            ensure(t.min_separation.is_positive(), || format!("k = {k}: points coincide"))?;
            let (_, f) = morin_tuple::<f64>(k, m, n).map_err(err)?;
            ensure(f.residual < 1e-9 && f.min_separation > 0.0, || format!("k = {k}: float residual {}", f.residual))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(0..=3);
        let q = rng.gen_range(2..=5);
        let (c, _, t) = random_moment_tuple::<BigRational, _>(n, d, q, &mut rng).map_err(err)?;
        ensure(t.residual == zero && t.min_separation.is_positive(), || format!("moment residual {}", t.residual))?;
        ensure(t.images.iter().all(|img| img == &c), || "moment image differs from c".into())?;
    }
    let r = |a: i64, b: i64| BigRational::from_ratio(a, b);
    let t = moment_tuple(1, 1, 2, &[r(1, 1), r(2, 1)], &[r(0, 1), r(1, 1)]).map_err(err)?;
    ensure(t.image() == [r(1, 1), r(2, 1)], || "moment example image".into())?;
    for k in 2..=3u32 {
        let (model, t) = morin_tuple::<BigRational>(k, 2 * k as usize, 2 * k as usize + 1).map_err(err)?;
        let small = perturbed_residual(&model, &t, 1, r(1, 1000)).map_err(err)?;
        let double = perturbed_residual(&model, &t, 1, r(2, 1000)).map_err(err)?;
        ensure(small.is_positive(), || format!("k = {k}: perturbation not detected"))?;
        ensure(double == small.clone() * r(2, 1), || format!("k = {k}: residual not linear in eps"))?;
    }
    Ok(())
}

fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng) -> GradedPoly {
    let n = rng.gen_range(0..7);
    let terms: Vec<(Monomial, i64)> = (0..n)
        .map(|_| {
            let exps = (0..ring.nvars()).map(|_| rng.gen_range(0..5)).collect();
            (Monomial::new(exps), rng.gen_range(-20..20))
        })
        .collect();
    GradedPoly::from_terms(ring, terms)
}

fn partitions(n: u32, max_part: u32, max_len: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    if prefix.len() == max_len {
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, max_len, prefix, out);
        prefix.pop();
    }
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rings: Vec<Ring> = [2u32, 3, 5, 7]
        .iter()
        .map(|&p| ring_new(p, &[("x", 1), ("y", 2), ("z", 3)], &["x^5", "y*z^2", "z^3", "x^2*y^2"]))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for trial in 0..1000 {
        let ring = &rings[trial % rings.len()];
        let (a, b, c) = (random_poly(ring, &mut rng), random_poly(ring, &mut rng), random_poly(ring, &mut rng));
        let ok = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a + &b) + &c == &a + &(&b + &c)
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a * &GradedPoly::one(ring) == a
            && (&a + &(-&a)).is_zero();
        ensure(ok, || format!("ring axioms fail for a = {a}, b = {b}, c = {c}"))?;
        let nf = a.normal_form();
        ensure(nf.normal_form() == nf && nf.terms().all(|(m, _)| !ring.vanishes(m.exps())), || {
            format!("normal form not idempotent on {a}")
        })?;
    }
    for nu in 1..=14usize {
        let p = [2u32, 3, 5][nu % 3];
        let mut parts = Vec::new();
        for deg in 0..=12 {
            partitions(deg, deg, nu, &mut Vec::new(), &mut parts);
        }
        for _ in 0..3 {
            let deg = rng.gen_range(1..=12u32);
            let of_deg: Vec<&Vec<u32>> = parts.iter().filter(|l| l.iter().sum::<u32>() == deg).collect();
            let mut s = SymmetricPoly::zero(p, nu, 1);
            for _ in 0..3 {
                s.add_monomial(of_deg[rng.gen_range(0..of_deg.len())].clone(), rng.gen_range(1..7));
            }
            let e = s.to_elementary(&ElementaryBasis::standard(p, nu, 1).map_err(err)?).map_err(err)?;
            let roots = FormalRoots::new("t", nu, 1).and_then(|r| r.ring(p)).map_err(err)?;
            if nu <= 5 {
                let back = expand_elementary(&e, &roots).map_err(err)?;
                ensure(back == s.to_poly(&roots).map_err(err)?, || format!("round trip fails, nu = {nu}"))?;
            } else {
                for lam in &of_deg {
                    let mut exps = (*lam).clone();
                    exps.resize(nu, 0);
                    let got = expanded_coefficient(&e, &roots, &exps).map_err(err)?;
                    ensure(got == s.coeff(lam), || format!("round trip fails at {lam:?}, nu = {nu}"))?;
                }
            }
        }
    }
    let mut series: Vec<ClassSeries> = Vec::new();
    for m in 1..=20 {
        for n in m..=m + 6 {
            series.push(virtual_sw_rp(m, n).map_err(err)?);
        }
    }
    for p in [3, 5, 7] {
        for m in 1..=8 {
            series.push(cp_pontryagin_virtual(m, 2 * m + 2, p).map_err(err)?);
        }
    }
    for s in &series {
        let inv = s.inverse().map_err(err)?;
        ensure(s.total() * inv.total() == GradedPoly::one(s.ring()), || format!("inverse of {}", s.total()))?;
        ensure(inv.inverse().map_err(err)? == *s, || format!("double inverse of {}", s.total()))?;
    }
    within(start.elapsed(), Duration::from_secs(60))
}

fn criterion_10() -> Check {
    let bin = env!("CARGO_BIN_EXE_multiplicity");
    let run = || Command::new(bin).args(["table", "theorem3", "--l", "4", "--json"]).output();
    let a = run().map_err(err)?;
    let b = run().map_err(err)?;
    ensure(a.status.success() && b.status.success(), || format!("exit status {:?} / {:?}", a.status, b.status))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into())?;
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(err)?;
    ensure(v["rows"].as_array().map_or(0, Vec::len) == 42, || "expected 42 rows".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("double-point classes are w_{d+1}, d = 0..6", criterion_1),
        ("four-tuple classes for d = 0, 1", criterion_2),
        ("leading term is w_{d+1}^{q-1}", criterion_3),
        ("stability and generator-a irrelevance", criterion_4),
        ("alpha_{3,i} = p_{4i}; random evaluation for p = 3, 5, 7", criterion_5),
        ("projective-space sweep for l = 3, 4 with route agreement", criterion_6),
        ("genus bounds", criterion_7),
        ("coincident tuples for Morin forms and the moment curve", criterion_8),
        ("kernel property suite", criterion_9),
        ("deterministic table output", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
