//! Leading characteristic classes of local coincident tuples.
//!
//! For `q ∈ {2, 4}` the class `s_{q,d}` is the coefficient of the top
//! power of the representation's Euler class in
//! `e(A_q ⊗ (τ_1 ⊕ ⋯ ⊕ τ_ν)) = Π_i F(t_i)`, rewritten in Stiefel–Whitney
//! classes. Here
//!
//! * `q = 2`: `F(t) = t + u` in `Z_2[u]/(u^μ)`, top monomial `u^{μ-1}`;
//! * `q = 4`: `F(t) = (t^2 + (a+c)t + b)(t + c)` in the cohomology of the
//!   dihedral group of order 8 (`deg a = deg c = 1`, `deg b = 2`, `ac = 0`),
//!   truncated by `b^μ = c^μ = 0`, top monomial `b^{μ-1} c^{μ-1}`; the
//!   generator `a` may be set to zero without changing that coefficient.
//!
//! The sizes are `μ = (q-1)(d+1) + 2`, `ν = μ + d`, and every result is
//! recomputed at `(ν+1, μ+1)` to confirm it has stabilised.
//!
//! For odd primes `p` the classes `α_{p,i} = σ_i(t_1^{p-1}, …, t_k^{p-1})`
//! are written in Pontryagin classes `p_{4j} = σ_j(t_1^2, …, t_k^2)`.

use crate::error::{Error, Result};
use crate::gpoly::{is_prime, GradedPoly, Generator, Ring, RingPresentation};
use crate::symfun::{elementary_symmetric, ElementaryBasis, FormalRoots, SymmetricPoly};

/// A class formula: a polynomial in abstract class generators (`w1, w2, …`
/// or `p4, p8, …`).
pub type ClassFormula = GradedPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqdResult {
    pub q: u32,
    pub d: u32,
    pub nu: usize,
    pub mu: usize,
    /// Homogeneous of degree `(q-1)(d+1)` in `w1..w_{(q-1)(d+1)}`.
    pub formula: ClassFormula,
    /// Sizes at which the formula was recomputed and found identical.
    pub stable_at: (usize, usize),
}

impl SqdResult {
    pub fn degree(&self) -> u32 {
        (self.q - 1) * (self.d + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    pub p: u32,
    pub i: u32,
    pub k: u32,
    /// Homogeneous of degree `2(p-1)i` in `p4..p_{4k}`.
    pub formula: ClassFormula,
}

/// How the top coefficient of the Euler product is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// The product is a product of one univariate factor evaluated at each
    /// root, so the coefficient of `t^λ` is `Π_i [t^{λ_i}] F`. Only dominant
    /// monomials are visited.
    FactorCoefficients,
    /// Full sparse expansion of the product followed by coefficient
    /// extraction. Exponential in `ν`; used as an independent check.
    Expanded,
}

fn check_q(q: u32) -> Result<()> {
    if q == 2 || q == 4 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "explicit leading classes are available for q = 2 and q = 4 only, got {q}"
        )))
    }
}

fn check_sizes(q: u32, nu: usize, mu: usize) -> Result<()> {
    let min_mu = if q == 2 { 2 } else { 1 };
    if mu < min_mu || nu < mu {
        return Err(Error::InvalidParameter(format!(
            "need mu >= {min_mu} and nu >= mu, got nu = {nu}, mu = {mu}"
        )));
    }
    Ok(())
}

fn root_generators(nu: usize) -> Vec<Generator> {
    (1..=nu).map(|i| Generator::new(format!("t{i}"), 1)).collect()
}

fn q2_ring(extra: Vec<Generator>, mu: usize) -> Result<Ring> {
    let mut gens = vec![Generator::new("u", 1)];
    gens.extend(extra);
    RingPresentation::new(2, gens, &[vec![("u".into(), mu as u32)]])
}

fn q4_ring(extra: Vec<Generator>, mu: usize, with_a: bool) -> Result<Ring> {
    let mut gens = Vec::new();
    let mut rels = vec![vec![("b".to_string(), mu as u32)], vec![("c".to_string(), mu as u32)]];
    if with_a {
        gens.push(Generator::new("a", 1));
        rels.insert(0, vec![("a".to_string(), 1), ("c".to_string(), 1)]);
    }
    gens.push(Generator::new("b", 2));
    gens.push(Generator::new("c", 1));
    gens.extend(extra);
    RingPresentation::new(2, gens, &rels)
}

fn q4_factor(ring: &Ring, t: &str, with_a: bool) -> Result<GradedPoly> {
    let text = if with_a { format!("{t}^2 + a*{t} + c*{t} + b") } else { format!("{t}^2 + c*{t} + b") };
    let quad = GradedPoly::parse(ring, &text)?;
    let lin = GradedPoly::parse(ring, &format!("{t} + c"))?;
    quad.checked_mul(&lin)
}

/// `Π_{i=1}^{ν} (t_i + u)` in `Z_2[u, t_1..t_ν]/(u^μ)`.
pub fn euler_product_q2(nu: usize, mu: usize) -> Result<GradedPoly> {
    check_sizes(2, nu, mu)?;
    let ring = q2_ring(root_generators(nu), mu)?;
    let mut acc = GradedPoly::one(&ring);
    for i in 1..=nu {
        acc = acc.checked_mul(&GradedPoly::parse(&ring, &format!("t{i} + u"))?)?;
    }
    Ok(acc)
}

/// `Π_{i=1}^{ν} (t_i^2 + c t_i + b)(t_i + c)` in
/// `Z_2[b, c, t_1..t_ν]/(b^μ, c^μ)`, that is, with `a = 0`.
pub fn euler_product_q4(nu: usize, mu: usize) -> Result<GradedPoly> {
    euler_product_q4_impl(nu, mu, false)
}

/// The same product keeping the generator `a` and the relation `ac = 0`.
pub fn euler_product_q4_with_a(nu: usize, mu: usize) -> Result<GradedPoly> {
    euler_product_q4_impl(nu, mu, true)
}

fn euler_product_q4_impl(nu: usize, mu: usize, with_a: bool) -> Result<GradedPoly> {
    check_sizes(4, nu, mu)?;
    let ring = q4_ring(root_generators(nu), mu, with_a)?;
    let mut acc = GradedPoly::one(&ring);
    for i in 1..=nu {
        acc = acc.checked_mul(&q4_factor(&ring, &format!("t{i}"), with_a)?)?;
    }
    Ok(acc)
}

fn top_monomial(q: u32, mu: usize, with_a: bool) -> Vec<(&'static str, u32)> {
    let top = mu as u32 - 1;
    match (q, with_a) {
        (2, _) => vec![("u", top)],
        (_, true) => vec![("a", 0), ("b", top), ("c", top)],
        (_, false) => vec![("b", top), ("c", top)],
    }
}

/// Coefficient of the top monomial of the Euler product, as a symmetric
/// polynomial in `t_1..t_ν`.
pub fn leading_coefficient(q: u32, nu: usize, mu: usize, route: Route, with_a: bool) -> Result<SymmetricPoly> {
    check_q(q)?;
    check_sizes(q, nu, mu)?;
    let target = top_monomial(q, mu, with_a);
    match route {
        Route::Expanded => {
            let product = match q {
                2 => euler_product_q2(nu, mu)?,
                _ => euler_product_q4_impl(nu, mu, with_a)?,
            };
            SymmetricPoly::from_poly(&product.coefficient_of(&target)?)
        }
        Route::FactorCoefficients => factor_route(q, nu, mu, with_a, &target),
    }
}

fn factor_route(q: u32, nu: usize, mu: usize, with_a: bool, target: &[(&str, u32)]) -> Result<SymmetricPoly> {
    let t = Generator::new("t", 1);
    let (ring, factor) = if q == 2 {
        let ring = q2_ring(vec![t], mu)?;
        let f = GradedPoly::parse(&ring, "t + u")?;
        (ring, f)
    } else {
        let ring = q4_ring(vec![t], mu, with_a)?;
        let f = q4_factor(&ring, "t", with_a)?;
        (ring, f)
    };
    let t_degree = ring
        .generators()
        .iter()
        .position(|g| g.name == "t")
        .and_then(|i| factor.terms().map(|(m, _)| m.exps()[i]).max())
        .unwrap_or(0) as usize;
    // coeffs[k] = [t^k] F, a polynomial in the structure generators.
    let coeffs: Vec<GradedPoly> = (0..=t_degree)
        .map(|k| factor.coefficient_of(&[("t", k as u32)]))
        .collect::<Result<_>>()?;
    // powers[k][n] = coeffs[k]^n
    let powers: Vec<Vec<GradedPoly>> = coeffs
        .iter()
        .map(|c| {
            let mut v = vec![GradedPoly::one(c.ring())];
            for n in 1..=nu {
                let next = &v[n - 1] * c;
                v.push(next);
            }
            v
        })
        .collect();
    let names: Vec<&str> = target.iter().map(|&(n, _)| n).collect();
    let mut out = SymmetricPoly::zero(2, nu, 1);
    // counts[k-1] = number of parts equal to k
    let mut counts = vec![0usize; t_degree];
    loop {
        let used: usize = counts.iter().sum();
        if used <= nu {
            let mut prod = powers[0][nu - used].clone();
            for (k, &n) in counts.iter().enumerate() {
                if prod.is_zero() {
                    break;
                }
                prod = &prod * &powers[k + 1][n];
            }
            if !prod.is_zero() {
                let ring = prod.ring().clone();
                let mut exps = vec![0u32; ring.nvars()];
                for &(name, e) in target {
                    exps[ring.index_of(name)?] = e;
                }
                let c = prod.coeff(&exps);
                if c != 0 {
                    debug_assert_eq!(names.len(), ring.nvars());
                    let mut lam = Vec::with_capacity(used);
                    for k in (0..t_degree).rev() {
                        lam.extend(std::iter::repeat_n(k as u32 + 1, counts[k]));
                    }
                    out.add_monomial(lam, c as u64);
                }
            }
        }
        // odometer over counts with each entry in 0..=nu
        let mut idx = 0;
        loop {
            if idx == t_degree {
                return Ok(out);
            }
            counts[idx] += 1;
            if counts.iter().sum::<usize>() <= nu {
                break;
            }
            counts[idx] = 0;
            idx += 1;
        }
    }
}

/// Stiefel–Whitney generators `w1..wN` over `Z_2`, `deg w_j = j`.
pub fn stiefel_whitney_ring(count: usize) -> Result<Ring> {
    Ok(ElementaryBasis::stiefel_whitney(count)?.ring().clone())
}

/// Pontryagin generators `p4..p_{4k}` over `Z_p`, `deg p_{4j} = 4j`.
pub fn pontryagin_ring(p: u32, count: usize) -> Result<Ring> {
    Ok(ElementaryBasis::pontryagin(p, count)?.ring().clone())
}

/// `s_{q,d}` with `d = ν - μ`, computed at the given sizes.
pub fn s_formula_at(q: u32, nu: usize, mu: usize, route: Route) -> Result<ClassFormula> {
    s_formula_impl(q, nu, mu, route, false)
}

fn s_formula_impl(q: u32, nu: usize, mu: usize, route: Route, with_a: bool) -> Result<ClassFormula> {
    let coeff = leading_coefficient(q, nu, mu, route, with_a)?;
    let degree = (q as usize - 1) * (nu - mu + 1);
    coeff.to_elementary(&ElementaryBasis::stiefel_whitney(degree)?)
}

/// Default sizes `(ν, μ)` for `s_{q,d}`.
pub fn default_sizes(q: u32, d: u32) -> (usize, usize) {
    let mu = ((q - 1) * (d + 1) + 2) as usize;
    (mu + d as usize, mu)
}

/// The leading class `s_{q,d}` for `q ∈ {2, 4}`, verified stable under
/// `(ν, μ) → (ν+1, μ+1)` and homogeneous of degree `(q-1)(d+1)`.
pub fn compute_s(q: u32, d: u32) -> Result<SqdResult> {
    compute_s_with(q, d, Route::FactorCoefficients)
}

pub fn compute_s_with(q: u32, d: u32, route: Route) -> Result<SqdResult> {
    check_q(q)?;
    let (nu, mu) = default_sizes(q, d);
    let formula = s_formula_at(q, nu, mu, route)?;
    let bigger = s_formula_at(q, nu + 1, mu + 1, route)?;
    if formula != bigger {
        return Err(Error::Unstable(format!(
            "s_{{{q},{d}}}: {formula} at (nu, mu) = ({nu}, {mu}) but {bigger} at ({}, {})",
            nu + 1,
            mu + 1
        )));
    }
    let degree = (q - 1) * (d + 1);
    if !formula.is_homogeneous_of(degree) {
        return Err(Error::Unstable(format!("s_{{{q},{d}}} = {formula} is not homogeneous of degree {degree}")));
    }
    Ok(SqdResult { q, d, nu, mu, formula, stable_at: (nu + 1, mu + 1) })
}

/// `s_{4,d}` computed with the generator `a` and the relation `ac = 0`
/// kept, for comparison with the `a = 0` computation.
pub fn compute_s4_keeping_a(d: u32, route: Route) -> Result<ClassFormula> {
    let (nu, mu) = default_sizes(4, d);
    s_formula_impl(4, nu, mu, route, true)
}

/// Sets `w_{d+2}, w_{d+3}, …` to zero.
pub fn leading_term_reduce(r: &SqdResult) -> ClassFormula {
    kill_above(&r.formula, r.d + 1)
}

/// Sets every generator of degree above `max` to zero.
pub fn kill_above(f: &ClassFormula, max: u32) -> ClassFormula {
    let ring = f.ring().clone();
    let images: Vec<GradedPoly> = ring
        .generators()
        .iter()
        .map(|g| {
            if g.degree > max {
                GradedPoly::zero(&ring)
            } else {
                GradedPoly::generator(&ring, &g.name).expect("generator of its own ring")
            }
        })
        .collect();
    f.substitute(&ring, &images).expect("endomorphism of the same ring")
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not an odd prime")))
    }
}

/// `Π_{i=1}^{k} (u^2 - e_i^{p-1})`, times `u` when `ν = 2k + 1` is odd, in
/// `Z_p[u, e_1..e_k]` with `deg u = p - 1`, `deg e_i = 2`.
pub fn euler_product_modp(p: u32, nu: usize) -> Result<GradedPoly> {
    check_odd_prime(p)?;
    let k = nu / 2;
    let mut gens = vec![Generator::new("u", p - 1)];
    gens.extend((1..=k).map(|i| Generator::new(format!("e{i}"), 2)));
    let ring = RingPresentation::free(p, gens)?;
    let mut acc = if nu % 2 == 1 { GradedPoly::generator(&ring, "u")? } else { GradedPoly::one(&ring) };
    for i in 1..=k {
        let factor = GradedPoly::parse(&ring, &format!("u^2 - e{i}^{}", p - 1))?;
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// `σ_i(t_1^{p-1}, …, t_k^{p-1})` in Pontryagin classes of `k` two-plane
/// summands. Substituting `s_j = t_j^2` turns it into `σ_i(s^{(p-1)/2})`,
/// which is rewritten in `σ_j(s) = p_{4j}`.
pub fn alpha_class(p: u32, i: u32, k: u32) -> Result<AlphaResult> {
    check_odd_prime(p)?;
    if i > k {
        return Err(Error::InvalidParameter(format!("need i <= k, got i = {i}, k = {k}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one root (k >= 1)".into()));
    }
    let roots = FormalRoots::new("s", k as usize, 4)?.ring(p)?;
    let half = (p - 1) / 2;
    let images: Vec<GradedPoly> = roots
        .generators()
        .iter()
        .map(|g| GradedPoly::generator(&roots, &g.name).map(|x| x.pow(half as u64)))
        .collect::<Result<_>>()?;
    let symmetric = elementary_symmetric(&roots, i as usize).substitute(&roots, &images)?;
    let formula = SymmetricPoly::from_poly(&symmetric)?.to_elementary(&ElementaryBasis::pontryagin(p, k as usize)?)?;
    Ok(AlphaResult { p, i, k, formula })
}

/// Smallest `k` at which `alpha_class(p, i, k)` has stabilised.
pub fn alpha_default_k(p: u32, i: u32) -> u32 {
    (i * (p - 1) / 2).max(i).max(1)
}

/// `alpha_class` at the default `k`, checked identical at `k + 1`.
pub fn alpha_class_stable(p: u32, i: u32) -> Result<AlphaResult> {
    let k = alpha_default_k(p, i);
    let res = alpha_class(p, i, k)?;
    let next = alpha_class(p, i, k + 1)?;
    if res.formula.embed_into(next.formula.ring())? != next.formula {
        return Err(Error::Unstable(format!(
            "alpha_{{{p},{i}}}: {} at k = {k} but {} at k = {}",
            res.formula,
            next.formula,
            k + 1
        )));
    }
    Ok(res)
}
