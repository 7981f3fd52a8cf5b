//! Verdicts: multiplicity lower bounds for maps and genus lower bounds for
//! configuration spaces, derived from nonvanishing of evaluated classes.
//!
//! Certificates are one-sided. An inconclusive certificate only says that
//! the evaluated class vanished; it never shows that coincident tuples are
//! absent or that the genus is small.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::charclass::{alpha_class_stable, compute_s, stiefel_whitney_ring, ClassFormula};
use crate::error::{Error, Result};
use crate::gpoly::{is_prime, GradedPoly, Monomial, PolyJson};
use crate::spaces::{evaluate_class, virtual_sw_rp, ClassSeries};

pub const ONE_SIDED_NOTE: &str =
    "inconclusive: the class vanishes, which does not show that no coincident tuple exists";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Multiplicity,
    Genus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub params: BTreeMap<String, i64>,
    pub evaluated: GradedPoly,
    /// Leading nonzero monomial of `evaluated`.
    pub witness: Option<Monomial>,
    /// Guaranteed multiplicity or genus lower bound; present iff conclusive.
    pub bound: Option<u64>,
    pub conclusive: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub kind: CertificateKind,
    pub params: BTreeMap<String, i64>,
    pub evaluated: PolyJson,
    pub witness: Option<PolyJson>,
    pub bound: Option<u64>,
    pub conclusive: bool,
    pub notes: Vec<String>,
}

impl Certificate {
    fn from_evaluation(
        kind: CertificateKind,
        params: BTreeMap<String, i64>,
        evaluated: GradedPoly,
        bound: u64,
        mut notes: Vec<String>,
    ) -> Self {
        let witness = evaluated.leading_term().map(|(m, _)| m);
        let conclusive = witness.is_some();
        if !conclusive {
            notes.push(ONE_SIDED_NOTE.to_string());
        }
        Certificate {
            kind,
            params,
            evaluated,
            witness,
            bound: conclusive.then_some(bound),
            conclusive,
            notes,
        }
    }

    pub fn witness_text(&self) -> Option<String> {
        self.witness.as_ref().map(|m| self.evaluated.ring().render_monomial(m))
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            kind: self.kind,
            params: self.params.clone(),
            evaluated: self.evaluated.to_json(),
            witness: self
                .witness
                .as_ref()
                .map(|m| GradedPoly::monomial(self.evaluated.ring(), m.clone(), 1).to_json()),
            bound: self.bound,
            conclusive: self.conclusive,
            notes: self.notes.clone(),
        }
    }
}

fn params(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn check_power_of_two(q: u32) -> Result<()> {
    if q >= 2 && q.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q must be a power of two >= 2, got {q}")))
    }
}

/// `true` if every component of degree above `d + 1` vanishes.
fn vanishes_above(series: &ClassSeries, max: u32) -> bool {
    series.total().terms().all(|(m, _)| series.ring().degree(m.exps()) <= max)
}

/// `w_{k}^{e}` evaluated on a series.
fn power_of_component(series: &ClassSeries, k: u32, e: u32) -> GradedPoly {
    series.component(k).pow(e as u64)
}

/// Evaluates `s_{q,d}` on `series` from the explicit formula, short-cutting
/// to zero when its degree exceeds the ring's top degree.
fn explicit_route(q: u32, d: u32, series: &ClassSeries) -> Result<(GradedPoly, Option<String>)> {
    let degree = (q - 1) * (d + 1);
    if let Some(top) = series.ring().degree_bound() {
        if degree > top {
            return Ok((
                GradedPoly::zero(series.ring()),
                Some(format!("explicit s_{{{q},{d}}} has degree {degree} > {top} and vanishes on this space")),
            ));
        }
    }
    let s = compute_s(q, d)?;
    Ok((evaluate_class(&s.formula, series)?, None))
}

/// Multiplicity of maps `RP^m → R^n` for `q` a power of two.
///
/// The leading-term route evaluates `w_{d+1}^{q-1}` whenever the series has
/// no components above degree `d + 1`; for `q ∈ {2, 4}` the explicit
/// formula is evaluated as well and must agree.
pub fn multiplicity_rp(m: u32, n: u32, q: u32) -> Result<Certificate> {
    check_power_of_two(q)?;
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("need m >= 1 and n >= 1".into()));
    }
    let series = virtual_sw_rp(m, n)?;
    let d_signed = n as i64 - m as i64;
    let mut p = params(&[("m", m as i64), ("n", n as i64), ("q", q as i64), ("d", d_signed)]);
    let mut notes = Vec::new();
    if d_signed < 0 {
        notes.push(format!("codimension d = {d_signed} < 0 is not covered by these classes"));
        return Ok(Certificate::from_evaluation(
            CertificateKind::Multiplicity,
            p,
            GradedPoly::zero(series.ring()),
            q as u64,
            notes,
        ));
    }
    let d = d_signed as u32;
    let degree = (q - 1) * (d + 1);
    p.insert("class_degree".into(), degree as i64);
    notes.push(format!(
        "evaluation condition (q-1)(d+1) <= m: {degree} <= {m} is {}",
        degree <= m
    ));
    let sum = n + 2;
    if sum.is_power_of_two() && m + d + 2 == sum {
        let l = sum.trailing_zeros();
        p.insert("l".into(), l as i64);
        notes.push(format!(
            "stated condition q(d+1) < 2^l - 1: {} < {} is {}",
            q * (d + 1),
            sum - 1,
            q * (d + 1) < sum - 1
        ));
    }

    let leading = vanishes_above(&series, d + 1).then(|| power_of_component(&series, d + 1, q - 1));
    let explicit = if q == 2 || q == 4 {
        let (value, note) = explicit_route(q, d, &series)?;
        notes.extend(note);
        Some(value)
    } else {
        None
    };
    let evaluated = match (leading, explicit) {
        (Some(a), Some(b)) => {
            if a != b {
                return Err(Error::RouteDisagreement(format!(
                    "RP^{m} -> R^{n}, q = {q}: w_{{d+1}}^{{q-1}} gives {a}, explicit s_{{q,d}} gives {b}"
                )));
            }
            notes.push("leading-term and explicit-formula routes agree".into());
            a
        }
        (Some(a), None) => a,
        (None, Some(b)) => {
            notes.push("series has components above degree d+1; explicit formula used".into());
            b
        }
        (None, None) => {
            notes.push("series has components above degree d+1 and no explicit formula exists for this q".into());
            GradedPoly::zero(series.ring())
        }
    };
    Ok(Certificate::from_evaluation(CertificateKind::Multiplicity, p, evaluated, q as u64, notes))
}

/// Multiplicity for odd primes: evaluates `α_{p,i}` for `2i >= d + 1` and
/// reports the smallest `i` whose class is nonzero.
pub fn multiplicity_modp(series: &ClassSeries, p: u32) -> Result<Certificate> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    if series.ring().characteristic() != p {
        return Err(Error::InvalidParameter(format!(
            "series is over Z_{}, expected Z_{p}",
            series.ring().characteristic()
        )));
    }
    let d = series.virtual_dim();
    let mut prm = params(&[("p", p as i64), ("d", d)]);
    let i_min = if d < 0 { 0 } else { ((d + 2) / 2) as u32 };
    // Classes with i beyond the number of Pontryagin roots vanish.
    let i_max = series.total().max_degree().unwrap_or(0) / 4;
    let top = series.ring().degree_bound();
    let mut notes = Vec::new();
    for i in i_min..=i_max {
        if let Some(top) = top {
            if 2 * (p - 1) * i > top {
                break;
            }
        }
        let alpha = alpha_class_stable(p, i)?;
        let value = evaluate_class(&alpha.formula, series)?;
        if !value.is_zero() {
            prm.insert("i".into(), i as i64);
            notes.push(format!("alpha_{{{p},{i}}} = {} is nonzero", alpha.formula));
            return Ok(Certificate::from_evaluation(CertificateKind::Multiplicity, prm, value, p as u64, notes));
        }
    }
    notes.push(format!("alpha_{{{p},i}} vanishes for every i with 2i >= d+1 in range"));
    Ok(Certificate::from_evaluation(
        CertificateKind::Multiplicity,
        prm,
        GradedPoly::zero(series.ring()),
        p as u64,
        notes,
    ))
}

/// Genus bound `(m+d)(q-1) + 1` from `w̄_{d+1}^{q-1} ≠ 0`, for a dual
/// Stiefel–Whitney series `1 + w̄_1 + ⋯ + w̄_{d+1}`.
pub fn genus_pow2(m: u32, d: u32, q: u32, dual: &ClassSeries) -> Result<Certificate> {
    check_power_of_two(q)?;
    if dual.ring().characteristic() != 2 {
        return Err(Error::InvalidParameter("dual Stiefel-Whitney series must be over Z_2".into()));
    }
    if !vanishes_above(dual, d + 1) {
        return Err(Error::HypothesisViolated(format!(
            "dual class {} has components above degree d+1 = {}",
            dual.total(),
            d + 1
        )));
    }
    let evaluated = power_of_component(dual, d + 1, q - 1);
    let bound = (m as u64 + d as u64) * (q as u64 - 1) + 1;
    let prm = params(&[("m", m as i64), ("d", d as i64), ("q", q as i64)]);
    Ok(Certificate::from_evaluation(CertificateKind::Genus, prm, evaluated, bound, Vec::new()))
}

/// [`genus_pow2`] for `M = RP^{2^l-2-d}`, also reporting the specialised
/// figure `(2^l-3)(q-1) + 1`.
pub fn genus_pow2_rp(l: u32, d: u32, q: u32) -> Result<Certificate> {
    if !(2..=30).contains(&l) || (1u32 << l) < d + 3 {
        return Err(Error::InvalidParameter(format!("need 2^l - 2 - d >= 1, got l = {l}, d = {d}")));
    }
    let m = (1u32 << l) - 2 - d;
    let dual = virtual_sw_rp(m, m + d)?;
    let mut cert = genus_pow2(m, d, q, &dual)?;
    let specialised = ((1u64 << l) - 3) * (q as u64 - 1) + 1;
    let general = (m as u64 + d as u64) * (q as u64 - 1) + 1;
    cert.params.insert("l".into(), l as i64);
    cert.params.insert("rp_specialised_bound".into(), specialised as i64);
    cert.params.insert("general_bound".into(), general as i64);
    cert.notes.push(format!(
        "stated condition q(d+1) < 2^l - 1: {} < {} is {}",
        q * (d + 1),
        (1u32 << l) - 1,
        q * (d + 1) < (1u32 << l) - 1
    ));
    cert.notes.push(format!(
        "specialised RP figure (2^l-3)(q-1)+1 = {specialised} is weaker than the general bound (m+d)(q-1)+1 = {general}"
    ));
    Ok(cert)
}

/// Genus of `K^4(M)`: `3m + 4` if `w̄_2^3 + w̄_3^2 + w̄_1w̄_2w̄_3 + w̄_2w̄_4 ≠ 0`,
/// else `3m + 1` if `w̄_1^3 + w̄_1w̄_2 ≠ 0`.
pub fn genus_four(m: u32, dual: &ClassSeries) -> Result<Certificate> {
    if dual.ring().characteristic() != 2 {
        return Err(Error::InvalidParameter("dual Stiefel-Whitney series must be over Z_2".into()));
    }
    let s40 = compute_s(4, 0)?.formula;
    let s41 = compute_s(4, 1)?.formula;
    let first = evaluate_class(&s40, dual)?;
    let second = evaluate_class(&s41, dual)?;
    let mut prm = params(&[("m", m as i64), ("q", 4)]);
    let mut notes = vec![format!("{s40} evaluates to {first}"), format!("{s41} evaluates to {second}")];
    let m = m as u64;
    if !second.is_zero() {
        prm.insert("d".into(), 1);
        return Ok(Certificate::from_evaluation(CertificateKind::Genus, prm, second, 3 * m + 4, notes));
    }
    prm.insert("d".into(), 0);
    if first.is_zero() {
        notes.push("both classes vanish".into());
    }
    Ok(Certificate::from_evaluation(CertificateKind::Genus, prm, first, 3 * m + 1, notes))
}

/// Genus of `K^p(M)` for odd `p`: `(m + 2i - 1)(p - 1) + 1` if the dual
/// class `ᾱ_{p,i}` is nonzero.
pub fn genus_oddp(m: u32, p: u32, i: u32, dual: &ClassSeries) -> Result<Certificate> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    if i == 0 {
        return Err(Error::InvalidParameter("need i >= 1".into()));
    }
    if dual.ring().characteristic() != p {
        return Err(Error::InvalidParameter(format!(
            "dual Pontryagin series is over Z_{}, expected Z_{p}",
            dual.ring().characteristic()
        )));
    }
    let alpha = alpha_class_stable(p, i)?;
    let evaluated = evaluate_class(&alpha.formula, dual)?;
    let bound = (m as u64 + 2 * i as u64 - 1) * (p as u64 - 1) + 1;
    let prm = params(&[("m", m as i64), ("p", p as i64), ("i", i as i64)]);
    let notes = vec![format!("alpha_{{{p},{i}}} = {}", alpha.formula)];
    Ok(Certificate::from_evaluation(CertificateKind::Genus, prm, evaluated, bound, notes))
}

/// Every `(q, d)` verdict for maps `RP^{2^l-2-d} → R^{2^l-2}`,
/// `q ∈ {2, 4, 8}`, `0 <= d <= 2^l - 3`.
pub fn projective_sweep(l: u32) -> Result<Vec<Certificate>> {
    if !(2..=12).contains(&l) {
        return Err(Error::InvalidParameter(format!("l must lie in 2..=12, got {l}")));
    }
    let n = (1u32 << l) - 2;
    let mut rows = Vec::new();
    for q in [2, 4, 8] {
        for d in 0..=n - 1 {
            rows.push(multiplicity_rp(n - d, n, q)?);
        }
    }
    Ok(rows)
}

/// `w_{d+1}^{q-1}` as a formula, for reporting.
pub fn leading_formula(q: u32, d: u32) -> Result<ClassFormula> {
    let ring = stiefel_whitney_ring((d + 1) as usize)?;
    Ok(GradedPoly::generator(&ring, &format!("w{}", d + 1))?.pow(q as u64 - 1))
}
