//! Function-field backends producing σ-paired evaluation places, the divisors
//! G = G₀ + j·P∞ and H = G₀ − j·P∞, and the codes C(G) ⊇ C(H).
//!
//! * `rational`: the genus-0 field GF(q)(x), q = 2^r, evaluated at all q
//!   finite places, with σ: x ↦ x + γ.
//! * `hermitian`: z^q + z = x^{q+1} over GF(q²), q = 2^m, evaluated at the
//!   q³ − q affine places with x ≠ 0 (the zeros of x^{q²−1} − 1), with
//!   σ: z ↦ z + γ for γ ∈ GF(q)*.
//!
//! In both cases G₀ is half the divisor of dy/y plus the evaluation places,
//! written out in closed form: G₀ = a·((x)₀ + P∞) with a = q²/2 − 1 for the
//! Hermitian curve, and G₀ = (q/2 − 1)·P∞ for the rational one. L(G) is then
//! x^{−a}·L((n + g − 1 + j)·P∞), spanned by shifted monomials x^{i−a} z^l.
//!
//! The proof sketch for the self-orthogonality step states "G + jP∞ ≥ H";
//! here that reads as G₀ + jP∞ ≥ G₀ − jP∞, which holds for every j ≥ 0.

mod place;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::symplectic::{min_hamming_weight, CodeBasis, RelativeDistance};

pub use place::{Divisor, Place};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Rational,
    Hermitian,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Rational => write!(f, "rational"),
            CurveKind::Hermitian => write!(f, "hermitian"),
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(CurveKind::Rational),
            "hermitian" => Ok(CurveKind::Hermitian),
            other => Err(Error::InvalidParameter(format!("unknown backend {other:?}"))),
        }
    }
}

/// x^{−shift} · Σ c · x^i z^l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRFunction {
    pub x_shift: u32,
    pub monomials: Vec<(u32, u32, Gf)>,
}

impl RRFunction {
    pub fn monomial(x_shift: u32, i: u32, l: u32) -> Self {
        RRFunction {
            x_shift,
            monomials: vec![(i, l, Gf::ONE)],
        }
    }

    pub fn constant_one() -> Self {
        Self::monomial(0, 0, 0)
    }

    pub fn evaluate(&self, field: &Field, place: &Place) -> Result<Gf> {
        let Place::Affine { x, z } = *place else {
            return Err(Error::Pole(format!("{self} at P∞")));
        };
        if self.x_shift > 0 && x.is_zero() {
            return Err(Error::Pole(format!("{self} at {place}")));
        }
        let z = z.unwrap_or(Gf::ZERO);
        let mut acc = Gf::ZERO;
        for &(i, l, c) in &self.monomials {
            let term = field.mul(c, field.mul(field.pow(x, i as u64), field.pow(z, l as u64)));
            acc = field.add(acc, term);
        }
        if self.x_shift > 0 {
            acc = field.div(acc, field.pow(x, self.x_shift as u64))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RRFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .monomials
            .iter()
            .map(|&(i, l, c)| {
                let coeff = if c == Gf::ONE { String::new() } else { format!("{c}·") };
                let xe = i as i64 - self.x_shift as i64;
                let mut s = coeff;
                match xe {
                    0 => {}
                    1 => s.push('x'),
                    e => s.push_str(&format!("x^{e}")),
                }
                if l > 0 {
                    s.push_str(if l == 1 { "z" } else { "z^" });
                    if l > 1 {
                        s.push_str(&l.to_string());
                    }
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// The 2n evaluation places, split into σ-orbit representatives and partners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedEvaluationSet {
    pub primaries: Vec<Place>,
    pub partners: Vec<Place>,
    pub gamma: Gf,
}

impl PairedEvaluationSet {
    /// P_1 … P_n, σP_1 … σP_n.
    pub fn ordered(&self) -> Vec<Place> {
        self.primaries
            .iter()
            .chain(&self.partners)
            .copied()
            .collect()
    }

    /// Exchanges P_i and σP_i wherever `swap[i]` is set.
    pub fn with_swapped(&self, swap: &[bool]) -> Self {
        let mut out = self.clone();
        for (i, &s) in swap.iter().enumerate().take(self.primaries.len()) {
            if s {
                std::mem::swap(&mut out.primaries[i], &mut out.partners[i]);
            }
        }
        out
    }
}

/// Dimension, distance bound and Euclidean self-orthogonality data of the
/// classical code C(G₀ + jP∞) of length N = 2n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalParams {
    pub length: usize,
    pub dim: usize,
    pub d_hamming_lower: i64,
    pub euclidean_dual_contained: bool,
    pub euclidean_dual_equals_h: bool,
}

/// An immutable curve backend.
#[derive(Clone)]
pub struct CurveBackend {
    kind: CurveKind,
    q: u32,
    field: Arc<Field>,
    gamma: Gf,
}

impl fmt::Debug for CurveBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CurveBackend({}, q={}, γ={})",
            self.kind, self.q, self.gamma
        )
    }
}

impl CurveBackend {
    /// Validates `q` for `kind`; `gamma` defaults to 1.
    pub fn new(kind: CurveKind, q: u32, gamma: Option<u32>) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "q must be a power of 2, got {q}"
            )));
        }
        let log_q = q.trailing_zeros();
        let field = match kind {
            CurveKind::Rational => {
                if !(2..=16).contains(&log_q) {
                    return Err(Error::InvalidParameter(format!(
                        "rational backend needs 4 ≤ q ≤ 2^16, got {q}"
                    )));
                }
                Field::standard(log_q)?
            }
            CurveKind::Hermitian => {
                if !(1..=8).contains(&log_q) {
                    return Err(Error::InvalidParameter(format!(
                        "hermitian backend needs 2 ≤ q ≤ 2^8, got {q}"
                    )));
                }
                Field::standard(2 * log_q)?
            }
        };
        let gamma = match gamma {
            None => Gf::ONE,
            Some(g) => {
                let g = field.element(g)?;
                let ok = !g.is_zero()
                    && match kind {
                        CurveKind::Rational => true,
                        CurveKind::Hermitian => field.pow(g, q as u64) == g,
                    };
                if !ok {
                    return Err(Error::InvalidParameter(format!(
                        "gamma {g} must be a nonzero element of GF({q})"
                    )));
                }
                g
            }
        };
        Ok(CurveBackend {
            kind,
            q,
            field,
            gamma,
        })
    }

    pub fn rational(q: u32) -> Result<Self> {
        Self::new(CurveKind::Rational, q, None)
    }

    pub fn hermitian(q: u32) -> Result<Self> {
        Self::new(CurveKind::Hermitian, q, None)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The constant field the codes live over: GF(q) or GF(q²).
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn gamma(&self) -> Gf {
        self.gamma
    }

    pub fn genus(&self) -> usize {
        match self.kind {
            CurveKind::Rational => 0,
            CurveKind::Hermitian => (self.q * (self.q - 1) / 2) as usize,
        }
    }

    /// Number of σ-pairs.
    pub fn n(&self) -> usize {
        let q = self.q as usize;
        match self.kind {
            CurveKind::Rational => q / 2,
            CurveKind::Hermitian => q * (q * q - 1) / 2,
        }
    }

    /// deg G₀ = n + g − 1.
    pub fn deg_g0(&self) -> i64 {
        (self.n() + self.genus()) as i64 - 1
    }

    /// Largest j with k = j exactly: n − g (hermitian), n (rational).
    pub fn max_j(&self) -> usize {
        self.n() - self.genus()
    }

    /// The exponent a with G₀ = a·(x)₀ + a·P∞ (hermitian), else 0.
    pub fn x_shift(&self) -> u32 {
        match self.kind {
            CurveKind::Rational => 0,
            CurveKind::Hermitian => self.q * self.q / 2 - 1,
        }
    }

    fn check_j(&self, j: usize) -> Result<()> {
        if j > self.max_j() {
            return Err(Error::InvalidParameter(format!(
                "j = {j} outside 0..={} for {self:?}",
                self.max_j()
            )));
        }
        Ok(())
    }

    fn on_curve(&self, x: Gf, z: Gf) -> bool {
        let f = &self.field;
        let q = self.q as u64;
        f.add(f.pow(z, q), z) == f.pow(x, q + 1)
    }

    /// All affine places in (x, z) index order, and P∞.
    pub fn enumerate_places(&self) -> (Vec<Place>, Place) {
        let f = &self.field;
        let affine = match self.kind {
            CurveKind::Rational => f.elements().map(Place::rational).collect(),
            CurveKind::Hermitian => f
                .elements()
                .flat_map(|x| {
                    f.elements()
                        .filter(move |&z| self.on_curve(x, z))
                        .map(move |z| Place::hermitian(x, z))
                })
                .collect(),
        };
        (affine, Place::Infinity)
    }

    /// The places where x = 0 (hermitian only).
    pub fn zeros_of_x(&self) -> Vec<Place> {
        self.enumerate_places()
            .0
            .into_iter()
            .filter(|p| p.x() == Some(Gf::ZERO))
            .collect()
    }

    /// The order-2 automorphism on places.
    pub fn sigma_apply(&self, place: &Place) -> Place {
        match *place {
            Place::Infinity => Place::Infinity,
            Place::Affine { x, z: None } => Place::rational(self.field.add(x, self.gamma)),
            Place::Affine { x, z: Some(z) } => Place::hermitian(x, self.field.add(z, self.gamma)),
        }
    }

    /// One representative per σ-orbit (the smaller by coordinate index),
    /// in increasing order, followed by their images.
    pub fn evaluation_points(&self) -> PairedEvaluationSet {
        let (affine, _) = self.enumerate_places();
        let candidates = affine.into_iter().filter(|p| match self.kind {
            CurveKind::Rational => true,
            CurveKind::Hermitian => p.x() != Some(Gf::ZERO),
        });
        let mut primaries = Vec::new();
        let mut partners = Vec::new();
        for p in candidates {
            let s = self.sigma_apply(&p);
            if p < s {
                primaries.push(p);
                partners.push(s);
            }
        }
        PairedEvaluationSet {
            primaries,
            partners,
            gamma: self.gamma,
        }
    }

    /// G₀.
    pub fn divisor_g0(&self) -> Divisor {
        match self.kind {
            CurveKind::Rational => Divisor::single(Place::Infinity, self.deg_g0()),
            CurveKind::Hermitian => {
                let a = self.x_shift() as i64;
                let mut d: Divisor = self.zeros_of_x().into_iter().map(|p| (p, a)).collect();
                d.add_place(Place::Infinity, a);
                d
            }
        }
    }

    /// (G, H) = (G₀ + jP∞, G₀ − jP∞).
    pub fn divisor_g(&self, j: usize) -> Result<(Divisor, Divisor)> {
        self.check_j(j)?;
        let g0 = self.divisor_g0();
        let shift = Divisor::single(Place::Infinity, j as i64);
        Ok((g0.plus(&shift), g0.minus(&shift)))
    }

    /// Basis of L(G₀ + offset·P∞), ordered by (z-exponent, x-exponent).
    pub fn rr_basis(&self, offset: i64) -> Vec<RRFunction> {
        let s = self.deg_g0() + offset;
        if s < 0 {
            return Vec::new();
        }
        let s = s as u32;
        match self.kind {
            CurveKind::Rational => (0..=s).map(|i| RRFunction::monomial(0, i, 0)).collect(),
            CurveKind::Hermitian => {
                let q = self.q;
                let shift = self.x_shift();
                (0..q)
                    .filter(|&l| l * (q + 1) <= s)
                    .flat_map(|l| {
                        (0..=(s - l * (q + 1)) / q).map(move |i| RRFunction::monomial(shift, i, l))
                    })
                    .collect()
            }
        }
    }

    /// Evaluation rows of `basis` at `points`.
    pub fn evaluation_matrix(&self, basis: &[RRFunction], points: &[Place]) -> Result<Vec<Vec<Gf>>> {
        basis
            .iter()
            .map(|f| {
                points
                    .iter()
                    .map(|p| f.evaluate(&self.field, p))
                    .collect()
            })
            .collect()
    }

    /// (C(G), C(H)) at the default evaluation points.
    pub fn build_codes(&self, j: usize) -> Result<(CodeBasis, CodeBasis)> {
        self.build_codes_at(&self.evaluation_points(), j)
    }

    pub fn build_codes_at(&self, points: &PairedEvaluationSet, j: usize) -> Result<(CodeBasis, CodeBasis)> {
        self.check_j(j)?;
        let order = points.ordered();
        let n = points.primaries.len();
        let g_rows = self.evaluation_matrix(&self.rr_basis(j as i64), &order)?;
        let h_rows = self.evaluation_matrix(&self.rr_basis(-(j as i64)), &order)?;
        Ok((
            CodeBasis::span(&self.field, n, g_rows)?,
            CodeBasis::span(&self.field, n, h_rows)?,
        ))
    }

    /// n − ⌊deg G / 2⌋, the lower bound on every nonzero codeword weight.
    pub fn designed_distance(&self, j: usize) -> usize {
        let deg_g = self.deg_g0() + j as i64;
        (self.n() as i64 - deg_g.div_euclid(2)).max(0) as usize
    }

    /// dim G − dim(G − ΣP − ΣσP) − n, evaluated by Riemann–Roch: the
    /// first term is the size of the one-point basis (deg G ≥ 2g − 1), the
    /// second vanishes when deg(G − D) < 0. `None` outside that regime.
    pub fn k_formula(&self, j: usize) -> Option<i64> {
        let deg_g = self.deg_g0() + j as i64;
        let g = self.genus() as i64;
        if deg_g < 2 * g - 1 {
            return None;
        }
        let dim_g = self.rr_basis(j as i64).len() as i64;
        let deg_g_minus_d = deg_g - 2 * self.n() as i64;
        let dim_g_minus_d = if deg_g_minus_d < 0 {
            0
        } else if deg_g_minus_d >= 2 * g - 1 {
            deg_g_minus_d + 1 - g
        } else {
            return None;
        };
        Some(dim_g - dim_g_minus_d - self.n() as i64)
    }

    /// The classical code C(G₀ + jP∞) as a length-2n linear code.
    pub fn classical_params(&self, j: usize) -> Result<ClassicalParams> {
        let (cg, ch) = self.build_codes(j)?;
        Ok(classical_params_of(&cg, &ch, self.genus(), j))
    }
}

/// Classical checks on a (C(G), C(H)) pair: Euclidean dual computed
/// explicitly and tested for containment.
pub fn classical_params_of(cg: &CodeBasis, ch: &CodeBasis, genus: usize, j: usize) -> ClassicalParams {
    let dual = cg.euclidean_dual();
    let n = cg.n();
    ClassicalParams {
        length: 2 * n,
        dim: cg.dim(),
        d_hamming_lower: n as i64 - genus as i64 + 1 - j as i64,
        euclidean_dual_contained: cg.contains(&dual).unwrap_or(false),
        euclidean_dual_equals_h: &dual == ch,
    }
}

/// Exact minimum Hamming distance of C(G) when enumerable.
pub fn exact_hamming_distance(cg: &CodeBasis) -> Option<usize> {
    match min_hamming_weight(cg).ok()?.distance {
        RelativeDistance::Exact(d) => Some(d),
        _ => None,
    }
}
