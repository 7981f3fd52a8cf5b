//! Rewriting symmetric polynomials in formal roots as polynomials in the
//! elementary symmetric functions (the splitting principle in computational
//! form).
//!
//! A symmetric polynomial in `ν` roots is determined by its coefficients on
//! dominant monomials `t^λ` (exponents non-increasing), one per partition `λ`
//! of length at most `ν`. [`SymmetricPoly`] keeps exactly those coefficients.
//! The rewrite is the classical leading-term procedure: take the
//! lexicographically largest `λ` with coefficient `c`, subtract
//! `c · e_1^{λ1-λ2} e_2^{λ2-λ3} ⋯ e_ν^{λν}`, repeat. Products of elementary
//! functions are expanded directly in dominant-monomial coordinates, so no
//! step ever materialises a full orbit sum.

use std::collections::BTreeMap;

use rand::Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gpoly::{GradedPoly, Generator, Monomial, Ring, RingPresentation};

/// Non-increasing sequence of positive parts.
pub type Partition = Vec<u32>;

/// Formal roots `t_1..t_ν`, all of the same cohomological degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalRoots {
    pub prefix: String,
    pub count: usize,
    pub degree: u32,
}

impl FormalRoots {
    pub fn new(prefix: impl Into<String>, count: usize, degree: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidRoots("at least one root is required".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidRoots("roots must have positive degree".into()));
        }
        Ok(Self { prefix: prefix.into(), count, degree })
    }

    pub fn generators(&self) -> Vec<Generator> {
        (1..=self.count).map(|i| Generator::new(format!("{}{}", self.prefix, i), self.degree)).collect()
    }

    /// The free polynomial ring `Z_p[t_1..t_ν]`.
    pub fn ring(&self, p: u32) -> Result<Ring> {
        RingPresentation::free(p, self.generators())
    }
}

/// Target ring of a rewrite: generator `j-1` stands for `e_j` and must have
/// degree `j` times the root degree.
#[derive(Debug, Clone)]
pub struct ElementaryBasis {
    ring: Ring,
}

impl ElementaryBasis {
    pub fn new(ring: Ring, root_degree: u32) -> Result<Self> {
        if !ring.is_free() {
            return Err(Error::InvalidRoots("elementary basis ring must be free".into()));
        }
        for (j, g) in ring.generators().iter().enumerate() {
            if g.degree != (j as u32 + 1) * root_degree {
                return Err(Error::InvalidRoots(format!(
                    "generator {} has degree {}, expected {}",
                    g.name,
                    g.degree,
                    (j as u32 + 1) * root_degree
                )));
            }
        }
        Ok(Self { ring })
    }

    /// `e1, e2, ...` over `Z_p`.
    pub fn standard(p: u32, count: usize, root_degree: u32) -> Result<Self> {
        Self::named(p, count, root_degree, |j| format!("e{j}"))
    }

    pub fn named(p: u32, count: usize, root_degree: u32, name: impl Fn(usize) -> String) -> Result<Self> {
        let gens = (1..=count).map(|j| Generator::new(name(j), j as u32 * root_degree)).collect();
        Self::new(RingPresentation::free(p, gens)?, root_degree)
    }

    /// Stiefel–Whitney classes `w1..wN` over `Z_2`.
    pub fn stiefel_whitney(count: usize) -> Result<Self> {
        Self::named(2, count, 1, |j| format!("w{j}"))
    }

    /// Pontryagin classes `p4, p8, ..` over `Z_p`, as elementary functions of
    /// degree-4 roots.
    pub fn pontryagin(p: u32, count: usize) -> Result<Self> {
        Self::named(p, count, 4, |j| format!("p{}", 4 * j))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.nvars() == 0
    }
}

/// A symmetric polynomial in `nvars` roots, stored by its dominant-monomial
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPoly {
    p: u32,
    nvars: usize,
    root_degree: u32,
    coeffs: BTreeMap<Partition, u32>,
}

impl SymmetricPoly {
    pub fn zero(p: u32, nvars: usize, root_degree: u32) -> Self {
        Self { p, nvars, root_degree, coeffs: BTreeMap::new() }
    }

    /// Reads a polynomial whose generators are all roots (same degree, free
    /// ring). Symmetry is verified, not assumed.
    pub fn from_poly(s: &GradedPoly) -> Result<Self> {
        let ring = s.ring();
        let gens = ring.generators();
        if gens.is_empty() {
            return Err(Error::InvalidRoots("ring has no root generators".into()));
        }
        if !ring.is_free() {
            return Err(Error::InvalidRoots("roots must generate a free polynomial ring".into()));
        }
        let degree = gens[0].degree;
        if gens.iter().any(|g| g.degree != degree) {
            return Err(Error::InvalidRoots("roots must share one degree".into()));
        }
        if !is_symmetric(s) {
            return Err(Error::NotSymmetric);
        }
        let mut out = Self::zero(ring.characteristic(), ring.nvars(), degree);
        for (m, c) in s.terms() {
            let e = m.exps();
            if e.windows(2).all(|w| w[0] >= w[1]) {
                let lam: Partition = e.iter().copied().take_while(|&x| x > 0).collect();
                out.coeffs.insert(lam, c);
            }
        }
        Ok(out)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn root_degree(&self) -> u32 {
        self.root_degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, u32> {
        &self.coeffs
    }

    pub fn coeff(&self, lam: &[u32]) -> u32 {
        self.coeffs.get(lam).copied().unwrap_or(0)
    }

    /// Adds `c · m_λ`. Partitions longer than the number of roots vanish.
    pub fn add_monomial(&mut self, lam: Partition, c: u64) {
        debug_assert!(lam.windows(2).all(|w| w[0] >= w[1]) && lam.iter().all(|&x| x > 0));
        if lam.len() > self.nvars {
            return;
        }
        add_coeff(&mut self.coeffs, lam, c, self.p);
    }

    /// Expands into an ordinary sparse polynomial over `ring`, whose
    /// generators are taken as the roots in order.
    pub fn to_poly(&self, ring: &Ring) -> Result<GradedPoly> {
        if ring.nvars() != self.nvars || ring.characteristic() != self.p {
            return Err(Error::InvalidRoots("ring does not match the root count".into()));
        }
        let mut terms = Vec::new();
        for (lam, &c) in &self.coeffs {
            let mut padded = lam.clone();
            padded.resize(self.nvars, 0);
            for perm in distinct_permutations(&padded) {
                terms.push((Monomial::new(perm), c as i64));
            }
        }
        Ok(GradedPoly::from_terms(ring, terms))
    }

    /// The leading-partition rewrite into elementary symmetric functions.
    pub fn to_elementary(&self, basis: &ElementaryBasis) -> Result<GradedPoly> {
        if basis.ring().characteristic() != self.p {
            return Err(Error::InvalidRoots("basis characteristic differs".into()));
        }
        if let Some(g) = basis.ring().generators().first() {
            if g.degree != self.root_degree {
                return Err(Error::InvalidRoots("basis degrees do not match the root degree".into()));
            }
        }
        let mut work = self.coeffs.clone();
        let mut out: Vec<(Monomial, i64)> = Vec::new();
        let mut cache: FxHashMap<Vec<u32>, BTreeMap<Partition, u32>> = FxHashMap::default();
        while let Some((lam, &c)) = work.last_key_value() {
            if lam.len() > basis.len() {
                return Err(Error::ElementaryIndex { index: lam.len(), available: basis.len() });
            }
            let lam = lam.clone();
            let mut exps = vec![0u32; basis.len()];
            for j in 0..lam.len() {
                exps[j] = lam[j] - lam.get(j + 1).copied().unwrap_or(0);
            }
            let product = cache
                .entry(exps.clone())
                .or_insert_with(|| elementary_product(&exps, self.nvars, self.p));
            debug_assert_eq!(product.last_key_value().map(|(k, v)| (k.clone(), *v)), Some((lam.clone(), 1)));
            let neg = (self.p - c) as u64;
            for (kappa, &v) in product.iter() {
                add_coeff(&mut work, kappa.clone(), v as u64 * neg, self.p);
            }
            debug_assert!(!work.contains_key(&lam));
            out.push((Monomial::new(exps), c as i64));
        }
        Ok(GradedPoly::from_terms(basis.ring(), out))
    }
}

fn add_coeff(map: &mut BTreeMap<Partition, u32>, lam: Partition, c: u64, p: u32) {
    let c = (c % p as u64) as u32;
    if c == 0 {
        return;
    }
    let slot = map.entry(lam.clone()).or_insert(0);
    *slot = (*slot + c) % p;
    if *slot == 0 {
        map.remove(&lam);
    }
}

/// Invariance under a transposition and a full cycle, which together
/// generate the symmetric group.
fn is_symmetric(s: &GradedPoly) -> bool {
    let n = s.ring().nvars();
    if n < 2 {
        return true;
    }
    let permuted = |perm: &dyn Fn(&[u32]) -> Vec<u32>| {
        s.terms().all(|(m, c)| s.coeff(&perm(m.exps())) == c)
    };
    let swap = |e: &[u32]| {
        let mut v = e.to_vec();
        v.swap(0, 1);
        v
    };
    let cycle = |e: &[u32]| {
        let mut v = e.to_vec();
        v.rotate_right(1);
        v
    };
    permuted(&swap) && permuted(&cycle)
}

fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    // Lexicographic next-permutation walk from the sorted arrangement.
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn binomial_mod(n: u32, k: u32, p: u32) -> u64 {
    if k > n {
        return 0;
    }
    // Small arguments only (multiplicities of parts), so exact u128 is safe.
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    (acc % p as u128) as u64
}

/// `m_λ · e_j` in `nvars` variables, in dominant-monomial coordinates.
///
/// Writing `n_v` for the multiplicity of the value `v` in `λ` (zeros
/// included), a result `κ` arises from raising `r_v` of the `v`-entries by
/// one, with `Σ r_v = j`. Its coefficient counts the `j`-subsets of
/// positions of `κ` whose decrement permutes back to `λ`, which is
/// `Π_w C(mult_κ(w), r_{w-1})`.
fn times_elementary(lam: &[u32], j: usize, nvars: usize, p: u32) -> Vec<(Partition, u64)> {
    if lam.len() > nvars {
        return Vec::new();
    }
    let mut groups: Vec<(u32, u32)> = Vec::new(); // (value, multiplicity), descending values
    for &x in lam {
        match groups.last_mut() {
            Some((v, n)) if *v == x => *n += 1,
            _ => groups.push((x, 1)),
        }
    }
    let zeros = (nvars - lam.len()) as u32;
    if zeros > 0 {
        groups.push((0, zeros));
    }
    let mut out = Vec::new();
    let mut raise = vec![0u32; groups.len()];
    fn rec(
        g: usize,
        left: u32,
        groups: &[(u32, u32)],
        raise: &mut Vec<u32>,
        p: u32,
        out: &mut Vec<(Partition, u64)>,
    ) {
        if g == groups.len() {
            if left > 0 {
                return;
            }
            let mut mult: BTreeMap<u32, (u32, u32)> = BTreeMap::new(); // value -> (mult in κ, raised into it)
            for (&(v, n), &r) in groups.iter().zip(raise.iter()) {
                if n > r {
                    mult.entry(v).or_default().0 += n - r;
                }
                if r > 0 {
                    let e = mult.entry(v + 1).or_default();
                    e.0 += r;
                    e.1 += r;
                }
            }
            let mut coeff = 1u64;
            let mut kappa = Vec::new();
            for (&v, &(m, r)) in mult.iter().rev() {
                coeff = coeff * binomial_mod(m, r, p) % p as u64;
                if v > 0 {
                    kappa.extend(std::iter::repeat_n(v, m as usize));
                }
            }
            if coeff != 0 {
                out.push((kappa, coeff));
            }
            return;
        }
        let n = groups[g].1;
        for r in 0..=n.min(left) {
            raise[g] = r;
            rec(g + 1, left - r, groups, raise, p, out);
        }
        raise[g] = 0;
    }
    rec(0, j as u32, &groups, &mut raise, p, &mut out);
    out
}

/// `Π e_j^{exps[j-1]}` in dominant-monomial coordinates.
fn elementary_product(exps: &[u32], nvars: usize, p: u32) -> BTreeMap<Partition, u32> {
    let mut cur: BTreeMap<Partition, u32> = BTreeMap::new();
    cur.insert(Vec::new(), 1);
    for (idx, &a) in exps.iter().enumerate() {
        for _ in 0..a {
            let mut next = BTreeMap::new();
            for (lam, &c) in &cur {
                for (kappa, v) in times_elementary(lam, idx + 1, nvars, p) {
                    add_coeff(&mut next, kappa, v * c as u64, p);
                }
            }
            cur = next;
        }
    }
    cur
}

/// Rewrites a symmetric polynomial in the roots (the generators of its ring)
/// in terms of elementary symmetric functions.
pub fn elementary_rewrite(s: &GradedPoly, basis: &ElementaryBasis) -> Result<GradedPoly> {
    SymmetricPoly::from_poly(s)?.to_elementary(basis)
}

/// The elementary symmetric polynomial `σ_j` in the generators of `roots`.
pub fn elementary_symmetric(roots: &Ring, j: usize) -> GradedPoly {
    let n = roots.nvars();
    if j > n {
        return GradedPoly::zero(roots);
    }
    let mut lam = vec![1u32; j];
    lam.resize(n, 0);
    let terms = distinct_permutations(&lam).into_iter().map(|e| (Monomial::new(e), 1));
    GradedPoly::from_terms(roots, terms)
}

fn check_elementary_indices(e: &GradedPoly, nroots: usize) -> Result<()> {
    for (m, _) in e.terms() {
        if let Some(idx) = m.exps().iter().rposition(|&x| x > 0) {
            if idx + 1 > nroots {
                return Err(Error::ElementaryIndex { index: idx + 1, available: nroots });
            }
        }
    }
    Ok(())
}

/// Substitutes `e_j = σ_j(t)` and expands.
pub fn expand_elementary(e: &GradedPoly, roots: &Ring) -> Result<GradedPoly> {
    check_elementary_indices(e, roots.nvars())?;
    let images: Vec<GradedPoly> =
        (1..=e.ring().nvars()).map(|j| elementary_symmetric(roots, j)).collect();
    e.substitute(roots, &images)
}

/// Coefficient of `t^exponents` in the expansion of `e`, computed by
/// multiplying out while discarding every partial product that does not
/// divide the target monomial. Usable where the full expansion is too large.
pub fn expanded_coefficient(e: &GradedPoly, roots: &Ring, exponents: &[u32]) -> Result<u32> {
    check_elementary_indices(e, roots.nvars())?;
    let p = e.characteristic() as u64;
    let target = Monomial::new(exponents.to_vec());
    let sigmas: Vec<Vec<Vec<u32>>> = (1..=e.ring().nvars())
        .map(|j| {
            elementary_symmetric(roots, j)
                .terms()
                .map(|(m, _)| m.exps().to_vec())
                .filter(|m| Monomial::new(m.clone()).divides(target.exps()))
                .collect()
        })
        .collect();
    let mut total = 0u64;
    for (m, c) in e.terms() {
        let mut partial: FxHashMap<Vec<u32>, u64> = FxHashMap::default();
        partial.insert(vec![0; roots.nvars()], c as u64);
        for (j, &a) in m.exps().iter().enumerate() {
            for _ in 0..a {
                let mut next: FxHashMap<Vec<u32>, u64> = FxHashMap::default();
                for (mono, v) in &partial {
                    for s in &sigmas[j] {
                        let prod: Vec<u32> = mono.iter().zip(s).map(|(x, y)| x + y).collect();
                        if prod.iter().zip(exponents).all(|(x, y)| x <= y) {
                            let slot = next.entry(prod).or_insert(0);
                            *slot = (*slot + v) % p;
                        }
                    }
                }
                partial = next;
            }
        }
        total = (total + partial.get(exponents).copied().unwrap_or(0)) % p;
    }
    Ok(total as u32)
}

/// Compares `s` and `expand_elementary(e)` at `trials` uniformly random
/// points of `(Z_p)^ν`; the elementary values are computed numerically from
/// `Π (1 + x_i z)`, so no symbolic expansion takes place.
pub fn random_eval_check<R: Rng + ?Sized>(s: &GradedPoly, e: &GradedPoly, trials: usize, rng: &mut R) -> bool {
    let p = s.characteristic();
    if e.characteristic() != p {
        return false;
    }
    let nu = s.ring().nvars();
    let ne = e.ring().nvars();
    if check_elementary_indices(e, nu).is_err() {
        return false;
    }
    for _ in 0..trials {
        let point: Vec<u32> = (0..nu).map(|_| rng.gen_range(0..p)).collect();
        // coefficients of Π (1 + x_i z)
        let mut el = vec![0u64; nu + 1];
        el[0] = 1;
        for &x in &point {
            for j in (1..=nu).rev() {
                el[j] = (el[j] + el[j - 1] * x as u64) % p as u64;
            }
        }
        let e_point: Vec<u32> = (1..=ne).map(|j| if j <= nu { el[j] as u32 } else { 0 }).collect();
        if s.evaluate(&point) != e.evaluate(&e_point) {
            return false;
        }
    }
    true
}
