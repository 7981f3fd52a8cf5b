//! Sparse graded-commutative polynomials over `Z_p`, modulo monomial ideals.
//!
//! Every ring used by this crate (truncated polynomial rings, the mod 2
//! cohomology of the dihedral group of order 8 with `ac = 0`, free polynomial
//! rings of formal roots) is a polynomial ring divided by an ideal generated
//! by monomials. The normal form of a polynomial is then obtained by deleting
//! every term divisible by a relation monomial, and no Gröbner machinery is
//! needed.
//!
//! Generators may have any positive degree. Only the polynomial (commutative)
//! structure is modelled: for `p = 2` this is exactly graded-commutativity,
//! and for odd `p` all rings used here are concentrated in even degrees.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared handle to a ring presentation.
pub type Ring = Arc<RingPresentation>;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= p as u64 {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self { name: name.into(), degree }
    }
}

/// Exponent vector over the generators of one ring, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `true` if `self` divides `other`.
    pub fn divides(&self, other: &[u32]) -> bool {
        self.0.iter().zip(other).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Borrow<[u32]> for Monomial {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

/// A polynomial ring over `Z_p` modulo an ideal generated by monomials.
#[derive(Debug, Clone)]
pub struct RingPresentation {
    id: String,
    p: u32,
    generators: Vec<Generator>,
    index: BTreeMap<String, usize>,
    relations: Vec<Monomial>,
    // Single-generator relations g^k = 0, stored as a cap per generator.
    caps: Vec<Option<u32>>,
    // Relations involving more than one generator.
    mixed: Vec<Monomial>,
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for RingPresentation {}

impl RingPresentation {
    /// Builds a ring from generators and relation monomials given as sparse
    /// `(name, exponent)` lists.
    pub fn new(p: u32, generators: Vec<Generator>, relations: &[Vec<(String, u32)>]) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::ZeroDegree(g.name.clone()));
            }
            if !valid_identifier(&g.name) {
                return Err(Error::Parse { input: g.name.clone(), reason: "not an identifier".into() });
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut rels = Vec::new();
        for rel in relations {
            let mut exps = vec![0u32; generators.len()];
            for (name, e) in rel {
                let i = *index.get(name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                exps[i] += e;
            }
            if exps.iter().all(|&e| e == 0) {
                return Err(Error::TrivialRelation);
            }
            rels.push(Monomial::new(exps));
        }
        // Keep a minimal generating set of the ideal.
        let mut minimal: Vec<Monomial> = Vec::new();
        for (i, r) in rels.iter().enumerate() {
            let redundant = rels.iter().enumerate().any(|(j, s)| {
                j != i && s.divides(r.exps()) && (s != r || j < i)
            });
            if !redundant {
                minimal.push(r.clone());
            }
        }
        let mut caps = vec![None; generators.len()];
        let mut mixed = Vec::new();
        for r in &minimal {
            let support: Vec<usize> = (0..r.0.len()).filter(|&i| r.0[i] > 0).collect();
            if support.len() == 1 {
                caps[support[0]] = Some(r.0[support[0]]);
            } else {
                mixed.push(r.clone());
            }
        }
        let mut ring = RingPresentation {
            id: String::new(),
            p,
            generators,
            index,
            relations: minimal,
            caps,
            mixed,
        };
        ring.id = ring.canonical_id();
        Ok(Arc::new(ring))
    }

    /// Convenience constructor: `ring_new(2, &[("u", 1)], &["u^3"])`.
    pub fn from_strs(p: u32, generators: &[(&str, u32)], relations: &[&str]) -> Result<Ring> {
        let gens: Vec<Generator> = generators.iter().map(|&(n, d)| Generator::new(n, d)).collect();
        let rels = relations
            .iter()
            .map(|r| parse_sparse_monomial(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, gens, &rels)
    }

    /// A free polynomial ring.
    pub fn free(p: u32, generators: Vec<Generator>) -> Result<Ring> {
        Self::new(p, generators, &[])
    }

    fn canonical_id(&self) -> String {
        let gens: Vec<String> =
            self.generators.iter().map(|g| format!("{}:{}", g.name, g.degree)).collect();
        let mut id = format!("Z{}[{}]", self.p, gens.join(","));
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.render_monomial(r)).collect();
            id.push_str(&format!("/({})", rels.join(",")));
        }
        id
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.generators).map(|(e, g)| e * g.degree).sum()
    }

    /// `true` if the monomial lies in the relation ideal.
    #[inline]
    pub fn vanishes(&self, m: &[u32]) -> bool {
        for (e, cap) in m.iter().zip(&self.caps) {
            if let Some(c) = cap {
                if e >= c {
                    return true;
                }
            }
        }
        self.mixed.iter().any(|r| r.divides(m))
    }

    /// Upper bound on the degree of a nonzero element; `None` when some
    /// generator is not nilpotent. Exact when every relation is a power of
    /// a single generator.
    pub fn degree_bound(&self) -> Option<u32> {
        let mut total = 0;
        for (cap, g) in self.caps.iter().zip(&self.generators) {
            total += (cap.as_ref()? - 1) * g.degree;
        }
        Some(total)
    }

    /// Graded-lexicographic comparison: higher degree first, then the
    /// exponent of the earliest declared generator decides.
    pub fn cmp_graded_lex(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        render_exps(&self.generators, m.exps())
    }

    /// Parses `a*b^2*c` into a monomial of this ring.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let sparse = parse_sparse_monomial(text)?;
        self.monomial(&sparse.iter().map(|(n, e)| (n.as_str(), *e)).collect::<Vec<_>>())
    }

    pub fn monomial(&self, sparse: &[(&str, u32)]) -> Result<Monomial> {
        let mut exps = vec![0u32; self.nvars()];
        for &(name, e) in sparse {
            exps[self.index_of(name)?] += e;
        }
        Ok(Monomial::new(exps))
    }

    /// The ring obtained by dropping the named generators together with every
    /// relation that involves them.
    pub fn without(&self, names: &[usize]) -> Result<Ring> {
        let drop: FxHashSet<usize> = names.iter().copied().collect();
        let keep: Vec<usize> = (0..self.nvars()).filter(|i| !drop.contains(i)).collect();
        let gens = keep.iter().map(|&i| self.generators[i].clone()).collect();
        let rels: Vec<Vec<(String, u32)>> = self
            .relations
            .iter()
            .filter(|r| drop.iter().all(|&i| r.0[i] == 0))
            .map(|r| {
                keep.iter()
                    .filter(|&&i| r.0[i] > 0)
                    .map(|&i| (self.generators[i].name.clone(), r.0[i]))
                    .collect()
            })
            .collect();
        RingPresentation::new(self.p, gens, &rels)
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// Shorthand for [`RingPresentation::from_strs`].
pub fn ring_new(p: u32, generators: &[(&str, u32)], relations: &[&str]) -> Result<Ring> {
    RingPresentation::from_strs(p, generators, relations)
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn render_exps(gens: &[Generator], exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(gens)
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn parse_sparse_monomial(text: &str) -> Result<Vec<(String, u32)>> {
    let err = |reason: &str| Error::Parse { input: text.to_string(), reason: reason.to_string() };
    let mut out = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?),
            None => (factor, 1),
        };
        if !valid_identifier(name) {
            return Err(err("expected a generator name"));
        }
        out.push((name.to_string(), exp));
    }
    Ok(out)
}

/// A polynomial in normal form: no stored term is divisible by a relation and
/// every stored coefficient lies in `1..p`.
#[derive(Clone)]
pub struct GradedPoly {
    ring: Ring,
    terms: FxHashMap<Monomial, u32>,
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly({} in {})", self, self.ring.id)
    }
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a.id == b.id
}

fn check_ring(a: &Ring, b: &Ring) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch { left: a.id.clone(), right: b.id.clone() })
    }
}

impl GradedPoly {
    pub fn zero(ring: &Ring) -> Self {
        GradedPoly { ring: ring.clone(), terms: FxHashMap::default() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.nvars()), c)])
    }

    pub fn generator(ring: &Ring, name: &str) -> Result<Self> {
        let mut exps = vec![0; ring.nvars()];
        exps[ring.index_of(name)?] = 1;
        Ok(Self::from_terms(ring, [(Monomial::new(exps), 1)]))
    }

    pub fn monomial(ring: &Ring, m: Monomial, coeff: i64) -> Self {
        Self::from_terms(ring, [(m, coeff)])
    }

    /// Builds a polynomial from raw terms, reducing coefficients mod `p` and
    /// applying the normal form.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let p = ring.p as i64;
        let mut map: FxHashMap<Monomial, u32> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.nvars(), "monomial arity does not match ring");
            if ring.vanishes(m.exps()) {
                continue;
            }
            let c = c.rem_euclid(p) as u32;
            let slot = map.entry(m).or_insert(0);
            *slot = (*slot + c) % ring.p;
        }
        map.retain(|_, c| *c != 0);
        GradedPoly { ring: ring.clone(), terms: map }
    }

    /// Parses text such as `1 + u + 2*u^2` or `w1^3 + w1*w2`.
    pub fn parse(ring: &Ring, text: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { input: text.to_string(), reason: reason.to_string() };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty polynomial"));
        }
        let mut terms = Vec::new();
        let mut sign = 1i64;
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
                pieces.push((sign, &compact[start..i]));
                sign = if b == b'-' { -1 } else { 1 };
                start = i + 1;
            } else if (b == b'+' || b == b'-') && i == 0 {
                sign = if b == b'-' { -1 } else { 1 };
                start = 1;
            }
        }
        pieces.push((sign, &compact[start..]));
        for (sign, piece) in pieces {
            if piece.is_empty() {
                return Err(err("empty term"));
            }
            let mut coeff: i64 = sign;
            let mut exps = vec![0u32; ring.nvars()];
            for factor in piece.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    let v: i64 = factor.parse().map_err(|_| err("bad coefficient"))?;
                    coeff = (coeff * (v % ring.p as i64)) % ring.p as i64;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let idx = ring.index_of(name).map_err(|_| err(&format!("unknown generator `{name}`")))?;
                exps[idx] += e;
            }
            terms.push((Monomial::new(exps), coeff));
        }
        Ok(Self::from_terms(ring, terms))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn characteristic(&self) -> u32 {
        self.ring.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coeff(&self, m: &[u32]) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    /// Terms in descending graded-lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, u32)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| self.ring.cmp_graded_lex(b.0.exps(), a.0.exps()));
        v
    }

    pub fn leading_term(&self) -> Option<(Monomial, u32)> {
        self.terms
            .iter()
            .max_by(|a, b| self.ring.cmp_graded_lex(a.0.exps(), b.0.exps()))
            .map(|(m, c)| (m.clone(), *c))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree(m.exps())).max()
    }

    /// `true` if every term has degree `k` (vacuously for zero).
    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree(m.exps()) == k)
    }

    /// Re-applies the relations. Polynomials are always kept in normal form,
    /// so this is the identity on values produced by this module.
    pub fn normal_form(&self) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| !self.ring.vanishes(m.exps()));
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_ring(&self.ring, &other.ring)?;
        let p = self.ring.p;
        let (mut acc, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            let slot = acc.terms.entry(m.clone()).or_insert(0);
            *slot = (*slot + c) % p;
            if *slot == 0 {
                acc.terms.remove(m);
            }
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        self.scale(self.ring.p as i64 - 1)
    }

    pub fn scale(&self, c: i64) -> Self {
        let p = self.ring.p;
        let c = c.rem_euclid(p as i64) as u64;
        let mut out = GradedPoly::zero(&self.ring);
        if c == 0 {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), (*v as u64 * c % p as u64) as u32)).collect();
        out
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ring = &self.ring;
        let p = ring.p as u64;
        let n = ring.nvars();
        let mut out: FxHashMap<Monomial, u32> =
            FxHashMap::with_capacity_and_hasher(self.terms.len().max(other.terms.len()), Default::default());
        let mut scratch = vec![0u32; n];
        let (a, b) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        for (ma, ca) in &a.terms {
            'inner: for (mb, cb) in &b.terms {
                for (i, slot) in scratch.iter_mut().enumerate() {
                    let e = ma.0[i] + mb.0[i];
                    if let Some(cap) = ring.caps[i] {
                        if e >= cap {
                            continue 'inner;
                        }
                    }
                    *slot = e;
                }
                if ring.mixed.iter().any(|r| r.divides(&scratch)) {
                    continue;
                }
                let c = (*ca as u64 * *cb as u64 % p) as u32;
                if let Some(v) = out.get_mut(&scratch[..]) {
                    *v = ((*v as u64 + c as u64) % p) as u32;
                } else {
                    out.insert(Monomial(scratch.clone().into_boxed_slice()), c);
                }
            }
        }
        out.retain(|_, c| *c != 0);
        GradedPoly { ring: ring.clone(), terms: out }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GradedPoly::one(&self.ring);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Sum of the terms of degree `k`.
    pub fn graded_component(&self, k: u32) -> Self {
        let mut out = GradedPoly::zero(&self.ring);
        out.terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree(m.exps()) == k)
            .map(|(m, c)| (m.clone(), *c))
            .collect();
        out
    }

    /// Drops every term of degree above `max`.
    pub fn truncate_degree(&self, max: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| self.ring.degree(m.exps()) <= max);
        out
    }

    /// Inverse of a series with constant term 1, correct through degree
    /// `trunc`. In a ring whose nonzero elements have degree at most `trunc`
    /// the product with `self` is exactly 1.
    pub fn invert_unit_series(&self, trunc: u32) -> Result<Self> {
        let c0 = self.constant_term();
        if c0 != 1 {
            return Err(Error::NotUnitSeries(c0));
        }
        // self = 1 - h with h of positive degree; the inverse is sum of h^k.
        let one = GradedPoly::one(&self.ring);
        let h = one.checked_sub(self)?;
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..trunc {
            power = power.mul_unchecked(&h).truncate_degree(trunc);
            if power.is_zero() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        Ok(acc)
    }

    /// Coefficient of the monomial given on a subset of generators. The
    /// result lives in the ring with those generators (and every relation
    /// mentioning them) removed.
    pub fn coefficient_of(&self, m: &[(&str, u32)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(m.len());
        for &(name, e) in m {
            idx.push((self.ring.index_of(name)?, e));
        }
        let drop: Vec<usize> = idx.iter().map(|&(i, _)| i).collect();
        let sub = self.ring.without(&drop)?;
        let keep: Vec<usize> = (0..self.ring.nvars()).filter(|i| !drop.contains(i)).collect();
        let mut terms = Vec::new();
        for (mono, c) in &self.terms {
            if idx.iter().all(|&(i, e)| mono.0[i] == e) {
                let rest: Vec<u32> = keep.iter().map(|&i| mono.0[i]).collect();
                terms.push((Monomial::new(rest), *c as i64));
            }
        }
        Ok(GradedPoly::from_terms(&sub, terms))
    }

    /// Ring homomorphism sending the `i`-th generator to `images[i]`.
    pub fn substitute(&self, target: &Ring, images: &[GradedPoly]) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidParameter(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        for img in images {
            check_ring(target, &img.ring)?;
        }
        if target.p != self.ring.p {
            return Err(Error::RingMismatch { left: self.ring.id.clone(), right: target.id.clone() });
        }
        let mut powers: Vec<Vec<GradedPoly>> = images.iter().map(|g| vec![GradedPoly::one(target), g.clone()]).collect();
        let mut acc: FxHashMap<Monomial, u32> = FxHashMap::default();
        let p = target.p as u64;
        for (m, c) in self.sorted_terms() {
            let mut prod = GradedPoly::constant(target, c as i64);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                prod = prod.mul_unchecked(&powers[i][e as usize]);
                if prod.is_zero() {
                    break;
                }
            }
            for (tm, tc) in prod.terms {
                let slot = acc.entry(tm).or_insert(0);
                *slot = ((*slot as u64 + tc as u64) % p) as u32;
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(GradedPoly { ring: target.clone(), terms: acc })
    }

    /// Maps generators to the equally named generators of `target`.
    pub fn embed_into(&self, target: &Ring) -> Result<Self> {
        let images = self
            .ring
            .generators
            .iter()
            .map(|g| GradedPoly::generator(target, &g.name))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(target, &images)
    }

    /// Evaluates at a point of `(Z_p)^n`, treating the polynomial as an
    /// element of the free polynomial ring on the generators.
    pub fn evaluate(&self, point: &[u32]) -> u32 {
        let p = self.ring.p as u64;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut v = *c as u64;
            for (&e, &x) in m.0.iter().zip(point) {
                v = v * pow_mod(x as u64 % p, e as u64, p) % p;
            }
            acc = (acc + v) % p;
        }
        acc as u32
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            ring: self.ring.id.clone(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    coeff: c,
                    exps: m
                        .exps()
                        .iter()
                        .zip(&self.ring.generators)
                        .filter(|(e, _)| **e > 0)
                        .map(|(e, g)| (g.name.clone(), *e))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(ring: &Ring, json: &PolyJson) -> Result<Self> {
        if json.ring != ring.id {
            return Err(Error::RingMismatch { left: ring.id.clone(), right: json.ring.clone() });
        }
        let mut terms = Vec::new();
        for t in &json.terms {
            let mut exps = vec![0u32; ring.nvars()];
            for (name, e) in &t.exps {
                exps[ring.index_of(name)?] += e;
            }
            terms.push((Monomial::new(exps), t.coeff as i64));
        }
        Ok(Self::from_terms(ring, terms))
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let mono = self.ring.render_monomial(m);
                match (c, m.is_one()) {
                    (_, true) => c.to_string(),
                    (1, false) => mono,
                    _ => format!("{c}*{mono}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// JSON form: `{"ring": id, "terms": [{"coeff": c, "exps": {"name": e}}]}`,
/// terms in descending graded-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub ring: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: u32,
    pub exps: BTreeMap<String, u32>,
}

// Operator sugar. These panic on ring mismatch; use the `checked_*` methods
// when the rings are not known to agree.

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_add(rhs).expect("ring mismatch in add")
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_sub(rhs).expect("ring mismatch in sub")
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_mul(rhs).expect("ring mismatch in mul")
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.neg_ref()
    }
}
