use multiplicity_core::charclass::{alpha_class_stable, compute_s, leading_term_reduce, stiefel_whitney_ring};
use multiplicity_core::certify::multiplicity_rp;
use multiplicity_core::gpoly::{ring_new, GradedPoly, Monomial, Ring};
use multiplicity_core::spaces::{cp_pontryagin_virtual, virtual_sw_rp};
use multiplicity_core::symfun::{expand_elementary, expanded_coefficient, ElementaryBasis, FormalRoots, SymmetricPoly};
use proptest::prelude::*;

fn test_ring(p: u32) -> Ring {
    ring_new(p, &[("x", 1), ("y", 2), ("z", 3)], &["x^5", "y*z^2", "z^3", "x^2*y^2"]).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = (u32, Vec<([u32; 3], i64)>)> {
    let terms = prop::collection::vec((prop::array::uniform3(0u32..5), -20i64..20), 0..7);
    (prop::sample::select(vec![2u32, 3, 5, 7]), terms)
}

fn build(ring: &Ring, terms: &[([u32; 3], i64)]) -> GradedPoly {
    GradedPoly::from_terms(ring, terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), *c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((p, a) in poly_strategy(), b in prop::collection::vec((prop::array::uniform3(0u32..5), -20i64..20), 0..7), c in prop::collection::vec((prop::array::uniform3(0u32..5), -20i64..20), 0..7)) {
        let r = test_ring(p);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        let zero = GradedPoly::zero(&r);
        let one = GradedPoly::one(&r);
        prop_assert_eq!(&(&a + &b), &(&b + &a));
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
        prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
        prop_assert_eq!(&(&a + &zero), &a);
        prop_assert_eq!(&(&a * &one), &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(a.scale(p as i64), zero);
    }

    #[test]
    fn normal_form_is_idempotent((p, a) in poly_strategy()) {
        let r = test_ring(p);
        let a = build(&r, &a);
        let once = a.normal_form();
        prop_assert_eq!(&once.normal_form(), &once);
        for (m, c) in once.terms() {
            prop_assert!(!r.vanishes(m.exps()));
            prop_assert!(c > 0 && c < p);
        }
    }

    #[test]
    fn json_round_trip((p, a) in poly_strategy()) {
        let r = test_ring(p);
        let a = build(&r, &a);
        prop_assert_eq!(GradedPoly::from_json(&r, &a.to_json()).unwrap(), a.clone());
        prop_assert_eq!(GradedPoly::parse(&r, &a.to_string()).unwrap(), a);
    }
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

fn all_partitions(max_degree: u32, nu: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for n in 0..=max_degree {
        partitions(n, n, nu, &mut Vec::new(), &mut out);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Rewriting in elementary functions and expanding back reproduces every
    /// dominant coefficient, which determines a symmetric polynomial.
    #[test]
    fn symmetric_round_trip(
        p in prop::sample::select(vec![2u32, 3, 5]),
        nu in 1usize..=14,
        picks in prop::collection::vec((0usize..10_000, 1u64..7), 1..5),
    ) {
        let max_degree = 12;
        let parts = all_partitions(max_degree, nu);
        let mut s = SymmetricPoly::zero(p, nu, 1);
        for (i, c) in &picks {
            s.add_monomial(parts[i % parts.len()].clone(), *c);
        }
        let basis = ElementaryBasis::standard(p, nu, 1).unwrap();
        let e = s.to_elementary(&basis).unwrap();
        let roots = FormalRoots::new("t", nu, 1).unwrap().ring(p).unwrap();
        if nu <= 5 {
            prop_assert_eq!(expand_elementary(&e, &roots).unwrap(), s.to_poly(&roots).unwrap());
        } else {
            let degrees: Vec<u32> = s.coeffs().keys().map(|l| l.iter().sum()).collect();
            for lam in parts.iter().filter(|l| degrees.contains(&l.iter().sum())) {
                let mut exps = lam.clone();
                exps.resize(nu, 0);
                prop_assert_eq!(expanded_coefficient(&e, &roots, &exps).unwrap(), s.coeff(lam), "partition {:?}", lam);
            }
        }
    }
}

#[test]
fn inverse_round_trip_on_constructed_series() {
    for m in 1..=20 {
        for n in m..=m + 8 {
            let s = virtual_sw_rp(m, n).unwrap();
            let inv = s.inverse().unwrap();
            assert_eq!(s.total() * inv.total(), GradedPoly::one(s.ring()), "RP^{m}, n = {n}");
            assert_eq!(inv.inverse().unwrap(), s);
        }
    }
    for p in [3, 5, 7] {
        for m in 1..=8 {
            let s = cp_pontryagin_virtual(m, 2 * m + 3, p).unwrap();
            let inv = s.inverse().unwrap();
            assert_eq!(s.total() * inv.total(), GradedPoly::one(s.ring()), "CP^{m}, p = {p}");
            assert_eq!(inv.inverse().unwrap(), s);
        }
    }
}

#[test]
fn leading_term_property() {
    for q in [2, 4] {
        for d in 0..=3 {
            let r = compute_s(q, d).unwrap();
            let want = GradedPoly::generator(r.formula.ring(), &format!("w{}", d + 1)).unwrap().pow(q as u64 - 1);
            assert_eq!(leading_term_reduce(&r), want, "q = {q}, d = {d}");
        }
    }
}

#[test]
fn double_point_class_is_a_single_stiefel_whitney_class() {
    for d in 0..=8 {
        let r = compute_s(2, d).unwrap();
        let w = stiefel_whitney_ring(r.formula.ring().nvars()).unwrap();
        assert_eq!(r.formula.to_string(), format!("w{}", d + 1));
        assert_eq!(r.formula.ring(), &w);
    }
}

#[test]
fn alpha_mod_three_is_pontryagin() {
    for i in 1..=5 {
        let a = alpha_class_stable(3, i).unwrap();
        assert_eq!(a.formula.to_string(), format!("p{}", 4 * i));
    }
}

#[test]
fn certificates_monotone_in_q() {
    for m in 1..=20 {
        for n in m..=m + 6 {
            let mut prev = true;
            for q in [2, 4, 8, 16] {
                let now = multiplicity_rp(m, n, q).unwrap().conclusive;
                assert!(prev || !now, "m = {m}, n = {n}, q = {q}");
                prev = now;
            }
        }
    }
}

#[test]
fn routes_agree_on_projective_spaces() {
    // multiplicity_rp raises on disagreement; every call returning Ok means agreement.
    for l in 2..=5 {
        let n = (1u32 << l) - 2;
        for d in 0..n {
            for q in [2, 4] {
                let c = multiplicity_rp(n - d, n, q).unwrap();
                assert!(c.notes.iter().any(|s| s.contains("routes agree")));
            }
        }
    }
}
