//! JSON code artifacts: construction, descent, and recompute-and-compare
//! verification.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveBackend, CurveKind, PairedEvaluationSet, Place};
use crate::descent::{descend_subspace, DescentBasis};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Gf};
use crate::symplectic::{
    budget_relative_min_weight, exact_relative_min_weight, min_hamming_weight, CodeBasis,
    RelativeDistance, ENUMERATION_CAP_LOG2,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendDescriptor {
    pub kind: CurveKind,
    pub q: u32,
    pub gamma: u32,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub k: usize,
    pub d_lower: usize,
    pub d_exact: Option<usize>,
}

/// The code an artifact was descended from: its field and the basis α
/// (as indices in that field).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentSource {
    pub field: FieldSpec,
    pub basis: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub descended_from: Option<DescentSource>,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeArtifact {
    pub schema_version: u32,
    pub backend: BackendDescriptor,
    pub field: FieldSpec,
    /// P_1 … P_n then σP_1 … σP_n, as coordinate indices.
    pub places: Vec<Vec<u32>>,
    pub generator_g: Vec<Vec<u32>>,
    pub generator_h: Vec<Vec<u32>>,
    pub params: Params,
    pub provenance: Provenance,
}

fn to_indices(c: &CodeBasis) -> Vec<Vec<u32>> {
    c.rows()
        .iter()
        .map(|r| r.iter().map(|g| g.index()).collect())
        .collect()
}

fn exact_distance(cg: &CodeBasis, ch: &CodeBasis) -> Result<Option<usize>> {
    Ok(match exact_relative_min_weight(cg, ch)?.distance {
        RelativeDistance::Exact(d) => Some(d),
        _ => None,
    })
}

impl CodeArtifact {
    pub fn construct(backend: &CurveBackend, j: usize, exact: bool) -> Result<Self> {
        let points = backend.evaluation_points();
        let (cg, ch) = backend.build_codes_at(&points, j)?;
        let d_exact = if exact { exact_distance(&cg, &ch)? } else { None };
        Ok(CodeArtifact {
            schema_version: SCHEMA_VERSION,
            backend: BackendDescriptor {
                kind: backend.kind(),
                q: backend.q(),
                gamma: backend.gamma().index(),
                j,
            },
            field: backend.field().spec(),
            places: points.ordered().iter().map(Place::coordinates).collect(),
            generator_g: to_indices(&cg),
            generator_h: to_indices(&ch),
            params: Params {
                n: cg.n(),
                k: cg.dim() - cg.n(),
                d_lower: backend.designed_distance(j),
                d_exact,
            },
            provenance: Provenance {
                descended_from: None,
                tool_version: TOOL_VERSION.to_string(),
            },
        })
    }

    /// γ of this code over GF(2^base_degree), with the power basis.
    pub fn descend(&self, base_degree: u32, exact: bool) -> Result<Self> {
        if self.provenance.descended_from.is_some() {
            return Err(Error::Artifact("artifact is already descended".into()));
        }
        let (cg, ch) = self.codes()?;
        let small = Field::standard(base_degree)?;
        let basis = DescentBasis::powers(cg.field(), &small)?;
        let dg = crate::descent::descend_code(&cg, &basis)?;
        let dh = descend_subspace(&ch, &basis)?;
        let d_exact = if exact { exact_distance(&dg, &dh)? } else { None };
        Ok(CodeArtifact {
            field: small.spec(),
            generator_g: to_indices(&dg),
            generator_h: to_indices(&dh),
            params: Params {
                n: dg.n(),
                k: dg.dim() - dg.n(),
                d_lower: self.params.d_lower,
                d_exact,
            },
            provenance: Provenance {
                descended_from: Some(DescentSource {
                    field: self.field,
                    basis: basis.alpha().iter().map(|g| g.index()).collect(),
                }),
                tool_version: TOOL_VERSION.to_string(),
            },
            ..self.clone()
        })
    }

    pub fn field(&self) -> Result<std::sync::Arc<Field>> {
        Field::new(self.field)
    }

    pub fn is_descended(&self) -> bool {
        self.provenance.descended_from.is_some()
    }

    pub fn curve(&self) -> Result<CurveBackend> {
        CurveBackend::new(self.backend.kind, self.backend.q, Some(self.backend.gamma))
    }

    /// C_G and C_H spanned by the stored rows, as written.
    pub fn codes(&self) -> Result<(CodeBasis, CodeBasis)> {
        let f = self.field()?;
        let n = self.params.n;
        let parse = |m: &[Vec<u32>]| -> Result<CodeBasis> {
            let rows = m
                .iter()
                .map(|r| r.iter().map(|&i| f.element(i)).collect::<Result<Vec<Gf>>>())
                .collect::<Result<Vec<_>>>()?;
            CodeBasis::span(&f, n, rows)
        };
        Ok((parse(&self.generator_g)?, parse(&self.generator_h)?))
    }

    fn parsed_places(&self, backend: &CurveBackend) -> Result<PairedEvaluationSet> {
        let f = backend.field();
        let places = self
            .places
            .iter()
            .map(|c| {
                let el = |i: u32| f.element(i);
                match (backend.kind(), c.as_slice()) {
                    (CurveKind::Rational, [x]) => Ok(Place::rational(el(*x)?)),
                    (CurveKind::Hermitian, [x, z]) => Ok(Place::hermitian(el(*x)?, el(*z)?)),
                    _ => Err(Error::Artifact(format!("bad place coordinates {c:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if places.len() % 2 != 0 {
            return Err(Error::Artifact("odd number of places".into()));
        }
        let n = places.len() / 2;
        Ok(PairedEvaluationSet {
            primaries: places[..n].to_vec(),
            partners: places[n..].to_vec(),
            gamma: backend.gamma(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let a: CodeArtifact = serde_json::from_str(&fs::read_to_string(path)?)?;
        if a.schema_version != SCHEMA_VERSION {
            return Err(Error::Artifact(format!("unsupported schema version {}", a.schema_version)));
        }
        Ok(a)
    }

    pub fn verify(&self, mode: DistanceCheck) -> Result<VerifyReport> {
        verify(self, mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceCheck {
    /// Exact when the code is small enough, otherwise skipped.
    Auto,
    Exact,
    Budget(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Verified only up to a weight budget below the bound.
    Partial,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub d_exact: Option<usize>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: detail.into(),
    }
}

fn skipped(name: &'static str, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: CheckStatus::Skipped,
        detail: detail.into(),
    }
}

fn verify(a: &CodeArtifact, mode: DistanceCheck) -> Result<VerifyReport> {
    let backend = a.curve()?;
    let (cg, ch) = a.codes()?;
    let j = a.backend.j;
    let descent = match &a.provenance.descended_from {
        None => None,
        Some(src) => {
            let big = Field::new(src.field)?;
            if big.spec() != backend.field().spec() {
                return Err(Error::Artifact("descent source field does not match the backend".into()));
            }
            let alpha = src.basis.iter().map(|&i| big.element(i)).collect::<Result<Vec<_>>>()?;
            let emb = crate::field::Embedding::new(&big, &a.field()?)?;
            Some(DescentBasis::new(emb, alpha)?)
        }
    };
    let m = descent.as_ref().map_or(1, |b| b.m());
    let mut checks = Vec::new();

    let points = a.parsed_places(&backend)?;
    let expected_points = backend.evaluation_points();
    let reproduced = backend.build_codes_at(&points, j).and_then(|(g, h)| match &descent {
        None => Ok((g, h)),
        Some(b) => Ok((descend_subspace(&g, b)?, descend_subspace(&h, b)?)),
    });
    let (same_points, same_matrices) = match &reproduced {
        Ok((g, h)) => (
            points == expected_points,
            to_indices(g) == a.generator_g && to_indices(h) == a.generator_h,
        ),
        Err(_) => (false, false),
    };
    checks.push(check(
        "matrix-reproduction",
        same_points && same_matrices,
        format!("places reproduced: {same_points}; matrices reproduced: {same_matrices}"),
    ));

    let dual = cg.symplectic_dual();
    checks.push(check(
        "dual-equality",
        dual == ch,
        format!("dim C_G^⊥s = {}, dim C_H = {}", dual.dim(), ch.dim()),
    ));
    let contained = cg.contains(&ch)?;
    checks.push(check("containment", contained, "C_G ⊇ C_H"));

    let n = cg.n();
    let k = cg.dim() as i64 - n as i64;
    let k_expected = backend.k_formula(j).map(|x| x * m as i64);
    checks.push(check(
        "k-formula",
        k_expected == Some(k) && k == (m * j) as i64 && a.params.k as i64 == k && a.params.n == n,
        format!("k = {k}, formula {k_expected:?}, recorded {}", a.params.k),
    ));

    let mut d_exact = None;
    let bound = backend.designed_distance(j);
    let bound_ok = a.params.d_lower == bound;
    let enumerable = cg.size_log2() <= ENUMERATION_CAP_LOG2;
    let distance = match mode {
        _ if !contained => None,
        DistanceCheck::Auto if !enumerable => None,
        DistanceCheck::Auto | DistanceCheck::Exact => Some(exact_relative_min_weight(&cg, &ch)?),
        DistanceCheck::Budget(w) => Some(budget_relative_min_weight(&cg, &ch, w)?),
    };
    checks.push(match distance.map(|r| r.distance) {
        None if !contained => skipped("distance-bound", "C_H ⊄ C_G"),
        None => skipped("distance-bound", format!("d ≥ {bound}; code too large to enumerate")),
        Some(RelativeDistance::EmptySet) => skipped("distance-bound", "C_G∖C_H is empty (k = 0)"),
        Some(RelativeDistance::Exact(d)) => {
            d_exact = Some(d);
            let recorded_ok = a.params.d_exact.is_none_or(|r| r == d);
            check(
                "distance-bound",
                bound_ok && d >= bound && recorded_ok,
                format!("d = {d}, bound {bound}, recorded {:?}", a.params.d_exact),
            )
        }
        Some(RelativeDistance::AtLeast(x)) => Check {
            name: "distance-bound",
            status: if !bound_ok {
                CheckStatus::Fail
            } else if x >= bound {
                CheckStatus::Pass
            } else {
                CheckStatus::Partial
            },
            detail: format!("no codeword of weight < {x}; bound {bound}"),
        },
    });

    if descent.is_some() {
        checks.push(skipped("euclidean-containment", "not claimed after descent"));
        checks.push(skipped("hamming-bound", "not claimed after descent"));
    } else {
        let edual = cg.euclidean_dual();
        checks.push(check(
            "euclidean-containment",
            cg.contains(&edual)?,
            format!("dim C_G^⊥ = {}", edual.dim()),
        ));
        let lower = n as i64 - backend.genus() as i64 + 1 - j as i64;
        checks.push(if enumerable {
            match min_hamming_weight(&cg)?.distance {
                RelativeDistance::Exact(dh) => check(
                    "hamming-bound",
                    dh as i64 >= lower,
                    format!("d_H = {dh}, bound {lower}"),
                ),
                _ => skipped("hamming-bound", "zero code"),
            }
        } else {
            skipped("hamming-bound", format!("d_H ≥ {lower}; code too large to enumerate"))
        });
    }

    let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
    Ok(VerifyReport {
        checks,
        d_exact,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_roundtrip_passes() {
        let b = CurveBackend::hermitian(2).unwrap();
        let a = CodeArtifact::construct(&b, 1, true).unwrap();
        assert_eq!((a.params.n, a.params.k), (3, 1));
        let text = serde_json::to_string(&a).unwrap();
        let back: CodeArtifact = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let r = back.verify(DistanceCheck::Auto).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.checks.iter().all(|c| c.status == CheckStatus::Pass), "{r:?}");
    }

    #[test]
    fn tampering_breaks_dual_equality() {
        let b = CurveBackend::rational(8).unwrap();
        let mut a = CodeArtifact::construct(&b, 1, false).unwrap();
        let last = a.generator_g.len() - 1;
        a.generator_g[last][7] ^= 1;
        let r = a.verify(DistanceCheck::Auto).unwrap();
        assert!(!r.passed);
        assert_eq!(r.check("dual-equality").unwrap().status, CheckStatus::Fail);
        assert_eq!(r.check("matrix-reproduction").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn rational_exact_distance_recorded() {
        let b = CurveBackend::rational(8).unwrap();
        let a = CodeArtifact::construct(&b, 1, false).unwrap();
        assert_eq!((a.params.n, a.params.k), (4, 1));
        let r = a.verify(DistanceCheck::Exact).unwrap();
        assert_eq!(r.d_exact, Some(2));
        assert!(r.passed);
    }

    #[test]
    fn descended_artifact_verifies() {
        let b = CurveBackend::hermitian(2).unwrap();
        let a = CodeArtifact::construct(&b, 1, false).unwrap();
        let d = a.descend(1, true).unwrap();
        assert_eq!((d.params.n, d.params.k), (6, 2));
        assert!(d.params.d_exact.unwrap() >= d.params.d_lower);
        let r = d.verify(DistanceCheck::Auto).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(d.descend(1, false).is_err());
    }

    #[test]
    fn budget_partial_and_pass() {
        let b = CurveBackend::rational(16).unwrap();
        let a = CodeArtifact::construct(&b, 1, false).unwrap();
        let r = a.verify(DistanceCheck::Budget(1)).unwrap();
        assert_eq!(r.check("distance-bound").unwrap().status, CheckStatus::Partial);
        assert!(r.passed);
    }
}
