//! Cohomology models of concrete manifolds and total classes of virtual
//! bundles over them, used as evaluation targets for class formulas.

use std::path::Path;

use serde::Deserialize;

use crate::charclass::ClassFormula;
use crate::error::{Error, Result};
use crate::gpoly::{GradedPoly, Generator, Ring, RingPresentation};

/// Total characteristic class `1 + c_1 + c_2 + …` of a virtual bundle.
///
/// The virtual dimension is carried as data; a series does not determine
/// the rank of the bundle it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSeries {
    total: GradedPoly,
    virtual_dim: i64,
}

impl ClassSeries {
    pub fn new(total: GradedPoly, virtual_dim: i64) -> Result<Self> {
        let c0 = total.constant_term();
        if c0 != 1 || !total.graded_component(0).checked_sub(&GradedPoly::one(total.ring()))?.is_zero() {
            return Err(Error::NotUnitSeries(c0));
        }
        Ok(Self { total, virtual_dim })
    }

    pub fn ring(&self) -> &Ring {
        self.total.ring()
    }

    pub fn total(&self) -> &GradedPoly {
        &self.total
    }

    pub fn virtual_dim(&self) -> i64 {
        self.virtual_dim
    }

    /// Degree-`k` part of the total class.
    pub fn component(&self, k: u32) -> GradedPoly {
        self.total.graded_component(k)
    }

    /// The series of the negative virtual bundle.
    pub fn inverse(&self) -> Result<Self> {
        let trunc = self.ring().degree_bound().ok_or_else(|| {
            Error::InvalidParameter("inverting a series needs a ring with a top degree".into())
        })?;
        Ok(Self { total: self.total.invert_unit_series(trunc)?, virtual_dim: -self.virtual_dim })
    }
}

/// `H*(RP^m; Z_2) = Z_2[u]/(u^{m+1})`.
pub fn rp_ring(m: u32) -> Result<Ring> {
    if m == 0 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    RingPresentation::new(2, vec![Generator::new("u", 1)], &[vec![("u".into(), m + 1)]])
}

/// Stiefel–Whitney series of `ε^n - T RP^m`, that is `(1 + u)^{-(m+1)}`.
pub fn virtual_sw_rp(m: u32, n: u32) -> Result<ClassSeries> {
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let ring = rp_ring(m)?;
    let tangent = GradedPoly::parse(&ring, "1 + u")?.pow(m as u64 + 1);
    ClassSeries::new(tangent.invert_unit_series(m)?, n as i64 - m as i64)
}

/// `H*(CP^m; Z_p)` in even degrees: `Z_p[x]/(x^{m+1})`, `deg x = 2`.
pub fn cp_ring(m: u32, p: u32) -> Result<Ring> {
    if m == 0 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    RingPresentation::new(p, vec![Generator::new("x", 2)], &[vec![("x".into(), m + 1)]])
}

/// Pontryagin series of `ε^n - T CP^m` over `Z_p`: the inverse of
/// `(1 + x^2)^{m+1}`, with virtual dimension `n - 2m`.
pub fn cp_pontryagin_virtual(m: u32, n: u32, p: u32) -> Result<ClassSeries> {
    let ring = cp_ring(m, p)?;
    let tangent = GradedPoly::parse(&ring, "1 + x^2")?.pow(m as u64 + 1);
    ClassSeries::new(tangent.invert_unit_series(2 * m)?, n as i64 - 2 * m as i64)
}

/// Substitutes into a class formula the components of a series: each
/// generator of degree `k` (`w_k`, or `p_{4j}` with `k = 4j`) becomes the
/// degree-`k` part of the total class.
pub fn evaluate_class(formula: &ClassFormula, series: &ClassSeries) -> Result<GradedPoly> {
    if formula.characteristic() != series.ring().characteristic() {
        return Err(Error::RingMismatch {
            left: formula.ring().id().to_string(),
            right: series.ring().id().to_string(),
        });
    }
    let images: Vec<GradedPoly> =
        formula.ring().generators().iter().map(|g| series.component(g.degree)).collect();
    formula.substitute(series.ring(), &images)
}

/// Text manifest describing a user-supplied space and series.
///
/// ```toml
/// characteristic = 3
/// virtual_dim = -2
/// total = "1 + 2*x^2"
/// relations = []            # optional extra monomial relations, e.g. "a*c"
///
/// [[generators]]
/// name = "x"
/// degree = 2
/// truncate = 5              # optional: x^5 = 0
/// ```
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceManifest {
    pub characteristic: u32,
    pub virtual_dim: i64,
    pub total: String,
    pub generators: Vec<ManifestGenerator>,
    #[serde(default)]
    pub relations: Vec<String>,
    /// Dimension of the manifold, when the manifest is used for genus bounds.
    #[serde(default)]
    pub dimension: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestGenerator {
    pub name: String,
    pub degree: u32,
    pub truncate: Option<u32>,
}

impl SpaceManifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn ring(&self) -> Result<Ring> {
        let gens: Vec<Generator> = self.generators.iter().map(|g| Generator::new(&g.name, g.degree)).collect();
        let mut rels: Vec<Vec<(String, u32)>> = Vec::new();
        for g in &self.generators {
            if let Some(k) = g.truncate {
                if k == 0 {
                    return Err(Error::Manifest(format!("truncation of {} must be positive", g.name)));
                }
                rels.push(vec![(g.name.clone(), k)]);
            }
        }
        for r in &self.relations {
            let probe = RingPresentation::new(self.characteristic, gens.clone(), &[])?;
            let m = probe.parse_monomial(r)?;
            rels.push(
                m.exps()
                    .iter()
                    .zip(probe.generators())
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, g)| (g.name.clone(), *e))
                    .collect(),
            );
        }
        RingPresentation::new(self.characteristic, gens, &rels)
    }

    pub fn series(&self) -> Result<ClassSeries> {
        let ring = self.ring()?;
        ClassSeries::new(GradedPoly::parse(&ring, &self.total)?, self.virtual_dim)
    }
}
