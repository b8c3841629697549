//! Minimum-weight syndrome decoding for stabilizer codes from C ⊇ C^⊥s.
//!
//! An error e is identified by its syndrome ⟨e, b_i⟩_s against a basis of
//! C^⊥s. Since ⟨e, b⟩_s = ⟨e′, b⟩ for e′ = swap_negate(e), a symplectic
//! error of weight w becomes a Hamming error e′ of weight ≤ 2w, and for
//! 2w + 1 ≤ n − ⌊deg G/2⌋ the minimum-Hamming-weight solution of the
//! standard-inner-product system is unique and returns e.
//!
//! The minimum-Hamming-weight solver enumerates support patterns by
//! increasing size and solves the restricted linear system on each. Ties
//! between equal-weight solutions are broken by the lexicographic order of
//! element indices.

use std::ops::ControlFlow;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::linalg::{binary_expansion, dot, gray_walk, rref, solve_affine};
use crate::symplectic::{form, swap_negate, swap_negate_inverse, weight, CodeBasis};

/// Solution spaces larger than 2^MAX_KERNEL_BITS are not walked.
const MAX_KERNEL_BITS: usize = 24;

/// The brute-force oracle handles q^{2n} ≤ 2^24.
pub const ORACLE_CAP_LOG2: u32 = 24;

#[derive(Clone, Debug)]
pub struct SyndromeProblem {
    field: Arc<Field>,
    n: usize,
    dual_basis: Vec<Vec<Gf>>,
    syndrome: Vec<Gf>,
}

impl SyndromeProblem {
    /// `dual` is C^⊥s; its rows are used as b_1…b_{n−k}.
    pub fn new(dual: &CodeBasis, syndrome: Vec<Gf>) -> Result<Self> {
        if syndrome.len() != dual.dim() {
            return Err(Error::LengthMismatch(syndrome.len(), dual.dim()));
        }
        let size = dual.field().size();
        if let Some(g) = syndrome.iter().find(|g| g.index() >= size) {
            return Err(Error::ElementOutOfRange { index: g.index(), size });
        }
        Ok(SyndromeProblem {
            field: dual.field().clone(),
            n: dual.n(),
            dual_basis: dual.rows().to_vec(),
            syndrome,
        })
    }

    /// The problem whose syndrome is that of `error`.
    pub fn for_error(dual: &CodeBasis, error: &[Gf]) -> Result<Self> {
        let s = syndrome_of(dual.field(), error, dual.rows())?;
        Self::new(dual, s)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.dual_basis.len()
    }

    pub fn dual_basis(&self) -> &[Vec<Gf>] {
        &self.dual_basis
    }

    pub fn syndrome(&self) -> &[Gf] {
        &self.syndrome
    }

    pub fn is_solution(&self, v: &[Gf]) -> bool {
        syndrome_of(&self.field, v, &self.dual_basis).is_ok_and(|s| s == self.syndrome)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeStatus {
    /// The result satisfies 2w + 1 ≤ n − ⌊deg G/2⌋ and is the unique minimum.
    UniqueGuaranteed,
    /// A minimum-weight solution found outside the guaranteed region.
    FoundMin,
    /// No solution within the search limits.
    BudgetExhausted,
}

impl std::fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DecodeStatus::UniqueGuaranteed => "unique-guaranteed",
            DecodeStatus::FoundMin => "found-min",
            DecodeStatus::BudgetExhausted => "budget-exhausted",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub error: Option<Vec<Gf>>,
    pub weight: Option<usize>,
    pub status: DecodeStatus,
}

impl DecodeResult {
    fn found(error: Vec<Gf>, status: DecodeStatus) -> Self {
        DecodeResult {
            weight: Some(weight(&error)),
            error: Some(error),
            status,
        }
    }

    fn exhausted() -> Self {
        DecodeResult {
            error: None,
            weight: None,
            status: DecodeStatus::BudgetExhausted,
        }
    }
}

/// s_i = ⟨v, b_i⟩_s.
pub fn syndrome_of(field: &Field, v: &[Gf], dual_basis: &[Vec<Gf>]) -> Result<Vec<Gf>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::OddLength(v.len()));
    }
    dual_basis
        .iter()
        .map(|b| {
            if b.len() != v.len() {
                return Err(Error::LengthMismatch(v.len(), b.len()));
            }
            Ok(form(field, v, b))
        })
        .collect()
}

/// Largest t with 2t + 1 ≤ n − ⌊deg G/2⌋, or `None` if even t = 0 fails.
pub fn guaranteed_radius(n: usize, deg_g: i64) -> Option<usize> {
    let bound = n as i64 - deg_g.div_euclid(2);
    (bound >= 1).then(|| ((bound - 1) / 2) as usize)
}

/// One unit of support: a coordinate, or a symplectic pair of coordinates.
type Unit = Vec<usize>;

enum Search {
    Found(Vec<Gf>),
    None,
    TooLarge,
}

/// Lexicographically least vector over the first support size (in units)
/// that admits a solution x of A·x = s with every chosen unit nonzero.
/// `coeff[j]` is column j of A.
fn min_support_solve(
    field: &Field,
    coeff: &[Vec<Gf>],
    s: &[Gf],
    units: &[Unit],
    max_units: usize,
) -> Search {
    let len = coeff.len();
    if s.iter().all(|g| g.is_zero()) {
        return Search::Found(vec![Gf::ZERO; len]);
    }
    let mut too_large = false;
    for w in 1..=max_units.min(units.len()) {
        let per_lead: Vec<(Option<Vec<Gf>>, bool)> = (0..units.len())
            .into_par_iter()
            .map(|lead| {
                let mut best: Option<Vec<Gf>> = None;
                let mut over = false;
                for rest in (lead + 1..units.len()).combinations(w - 1) {
                    let chosen: Vec<&Unit> = std::iter::once(&units[lead])
                        .chain(rest.iter().map(|&u| &units[u]))
                        .collect();
                    match solve_on_support(field, coeff, s, &chosen, len) {
                        Search::Found(v) => {
                            if best.as_ref().is_none_or(|b| v < *b) {
                                best = Some(v);
                            }
                        }
                        Search::TooLarge => over = true,
                        Search::None => {}
                    }
                }
                (best, over)
            })
            .collect();
        too_large |= per_lead.iter().any(|(_, o)| *o);
        if let Some(v) = per_lead.into_iter().filter_map(|(b, _)| b).min() {
            return Search::Found(v);
        }
    }
    if too_large {
        Search::TooLarge
    } else {
        Search::None
    }
}

fn solve_on_support(field: &Field, coeff: &[Vec<Gf>], s: &[Gf], chosen: &[&Unit], len: usize) -> Search {
    let cols: Vec<usize> = chosen.iter().flat_map(|u| u.iter().copied()).collect();
    let a: Vec<Vec<Gf>> = (0..s.len())
        .map(|i| cols.iter().map(|&c| coeff[c][i]).collect())
        .collect();
    let Some((particular, kernel)) = solve_affine(field, &a, s, cols.len()) else {
        return Search::None;
    };
    let gens = binary_expansion(field, &kernel);
    if gens.len() > MAX_KERNEL_BITS {
        return Search::TooLarge;
    }
    let mut offsets = Vec::with_capacity(chosen.len());
    let mut at = 0;
    for u in chosen {
        offsets.push(at..at + u.len());
        at += u.len();
    }
    let mut best: Option<Vec<Gf>> = None;
    let _ = gray_walk(&particular, &gens, |x| {
        if offsets.iter().all(|r| x[r.clone()].iter().any(|g| !g.is_zero())) {
            let mut v = vec![Gf::ZERO; len];
            for (&c, &g) in cols.iter().zip(x) {
                v[c] = g;
            }
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        ControlFlow::Continue(())
    });
    best.map_or(Search::None, Search::Found)
}

fn check_consistent(field: &Field, rows: &[Vec<Gf>], s: &[Gf]) -> Result<()> {
    let len = rows.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<Gf>> = rows
        .iter()
        .zip(s)
        .map(|(r, &si)| r.iter().copied().chain([si]).collect())
        .collect();
    if rref(field, aug, len + 1).pivots.last() == Some(&len) {
        return Err(Error::Inconsistent);
    }
    Ok(())
}

/// Minimum-Hamming-weight y with ⟨y, b_i⟩ = s_i (standard inner product),
/// if one of weight ≤ `budget` exists.
pub fn hamming_min_solve(field: &Field, basis: &[Vec<Gf>], s: &[Gf], budget: usize) -> Result<Option<Vec<Gf>>> {
    if basis.len() != s.len() {
        return Err(Error::LengthMismatch(basis.len(), s.len()));
    }
    let len = basis.first().map_or(0, |r| r.len());
    check_consistent(field, basis, s)?;
    let coeff: Vec<Vec<Gf>> = (0..len).map(|j| basis.iter().map(|b| b[j]).collect()).collect();
    let units: Vec<Unit> = (0..len).map(|j| vec![j]).collect();
    match min_support_solve(field, &coeff, s, &units, budget) {
        Search::Found(v) => Ok(Some(v)),
        _ => Ok(None),
    }
}

/// Minimum symplectic weight solution over pair supports of size ≤ `max_weight`.
pub fn symplectic_min_solve(p: &SyndromeProblem, max_weight: usize) -> Result<Option<Vec<Gf>>> {
    let f = &p.field;
    let n = p.n;
    let coeff: Vec<Vec<Gf>> = (0..2 * n)
        .map(|j| {
            let mut e = vec![Gf::ZERO; 2 * n];
            e[j] = Gf::ONE;
            p.dual_basis.iter().map(|b| form(f, &e, b)).collect()
        })
        .collect();
    let rows: Vec<Vec<Gf>> = (0..p.dual_basis.len())
        .map(|i| coeff.iter().map(|c| c[i]).collect())
        .collect();
    check_consistent(f, &rows, &p.syndrome)?;
    let units: Vec<Unit> = (0..n).map(|i| vec![i, n + i]).collect();
    match min_support_solve(f, &coeff, &p.syndrome, &units, max_weight) {
        Search::Found(v) => Ok(Some(v)),
        _ => Ok(None),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecodeOptions {
    /// Symplectic weight limit for the search used when the
    /// Hamming-weight step does not land in the guaranteed region.
    pub fallback_max_weight: usize,
}

impl DecodeOptions {
    pub fn none() -> Self {
        DecodeOptions { fallback_max_weight: 0 }
    }

    /// Fallback limited to about 2^20 pair supports.
    pub fn bounded(n: usize) -> Self {
        let mut total: u128 = 0;
        let mut w = 0;
        let mut binom: u128 = 1;
        while w < n {
            binom = binom * (n - w) as u128 / (w + 1) as u128;
            if total + binom > 1 << 20 {
                break;
            }
            total += binom;
            w += 1;
        }
        DecodeOptions { fallback_max_weight: w }
    }
}

/// Decodes with the default bounded fallback.
pub fn symplectic_decode(p: &SyndromeProblem, deg_g: i64) -> Result<DecodeResult> {
    symplectic_decode_with(p, deg_g, DecodeOptions::bounded(p.n))
}

/// Step 1: minimum-Hamming-weight e′ with budget 2·t_cap, e =
/// swap_negate⁻¹(e′); accepted as unique when w(e) ≤ t_cap. Step 2, when
/// step 1 fails: minimum-symplectic-weight search up to
/// `fallback_max_weight`, reported as [`DecodeStatus::FoundMin`].
pub fn symplectic_decode_with(p: &SyndromeProblem, deg_g: i64, opts: DecodeOptions) -> Result<DecodeResult> {
    let f = &p.field;
    if p.syndrome.iter().all(|g| g.is_zero()) {
        return Ok(DecodeResult::found(vec![Gf::ZERO; 2 * p.n], DecodeStatus::UniqueGuaranteed));
    }
    if let Some(t_cap) = guaranteed_radius(p.n, deg_g) {
        if let Some(e_prime) = hamming_min_solve(f, &p.dual_basis, &p.syndrome, 2 * t_cap)? {
            let e = swap_negate_inverse(f, &e_prime);
            debug_assert!(p.is_solution(&e));
            if weight(&e) <= t_cap {
                return Ok(DecodeResult::found(e, DecodeStatus::UniqueGuaranteed));
            }
        }
    }
    match symplectic_min_solve(p, opts.fallback_max_weight)? {
        Some(e) => Ok(DecodeResult::found(e, DecodeStatus::FoundMin)),
        None => Ok(DecodeResult::exhausted()),
    }
}

/// Per-position syndrome contributions: table[pos][value] = s(value·e_pos).
fn contribution_table(p: &SyndromeProblem) -> Vec<Vec<Vec<Gf>>> {
    let f = &p.field;
    let len = 2 * p.n;
    (0..len)
        .map(|j| {
            f.elements()
                .map(|g| {
                    let mut e = vec![Gf::ZERO; len];
                    e[j] = g;
                    p.dual_basis.iter().map(|b| form(f, &e, b)).collect()
                })
                .collect()
        })
        .collect()
}

fn xor_into(acc: &mut [Gf], add: &[Gf]) {
    for (a, b) in acc.iter_mut().zip(add) {
        a.0 ^= b.0;
    }
}

/// Exhaustive minimizer over all q^{2n} vectors. The first minimum in
/// lexicographic order wins.
pub fn brute_oracle(p: &SyndromeProblem) -> Result<DecodeResult> {
    let q = p.field.size() as u64;
    let len = 2 * p.n;
    let bits = p.field.degree() as u64 * len as u64;
    if bits > ORACLE_CAP_LOG2 as u64 {
        return Err(Error::EnumerationCap(format!("{q}^{len}")));
    }
    let table = contribution_table(p);
    let total = 1u64 << bits;
    let r = p.field.degree() as usize;
    let decode = |idx: u64| -> Vec<Gf> {
        (0..len)
            .map(|j| Gf(((idx >> ((len - 1 - j) * r)) & (q - 1)) as u16))
            .collect()
    };
    let chunk = (total / 256).max(1);
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .filter_map(|c| {
            let mut best: Option<(usize, u64)> = None;
            for idx in c * chunk..((c + 1) * chunk).min(total) {
                let v = decode(idx);
                let mut s = vec![Gf::ZERO; p.syndrome.len()];
                for (j, &g) in v.iter().enumerate() {
                    if !g.is_zero() {
                        xor_into(&mut s, &table[j][g.0 as usize]);
                    }
                }
                if s == p.syndrome {
                    let w = weight(&v);
                    if best.is_none_or(|(bw, _)| w < bw) {
                        best = Some((w, idx));
                    }
                }
            }
            best
        })
        .min();
    Ok(match best {
        Some((_, idx)) => DecodeResult::found(decode(idx), DecodeStatus::FoundMin),
        None => DecodeResult::exhausted(),
    })
}

/// Exhaustive minimizer restricted to symplectic weight ≤ `max_weight`,
/// enumerating every pair support and every nonzero pair value directly.
pub fn brute_oracle_capped(p: &SyndromeProblem, max_weight: usize) -> Result<DecodeResult> {
    let n = p.n;
    let q = p.field.size() as usize;
    let table = contribution_table(p);
    if p.syndrome.iter().all(|g| g.is_zero()) {
        return Ok(DecodeResult::found(vec![Gf::ZERO; 2 * n], DecodeStatus::FoundMin));
    }
    for w in 1..=max_weight.min(n) {
        let supports = (0..w).fold(1f64, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
        if supports * ((q * q - 1) as f64).powi(w as i32) > (1u64 << 32) as f64 {
            return Err(Error::EnumerationCap(format!("weight-{w} patterns over GF({q})")));
        }
        let found = (0..n)
            .combinations(w)
            .par_bridge()
            .filter_map(|support| {
                let mut best: Option<Vec<Gf>> = None;
                let mut digits = vec![1usize; w];
                loop {
                    let mut v = vec![Gf::ZERO; 2 * n];
                    let mut s = vec![Gf::ZERO; p.syndrome.len()];
                    for (&i, &d) in support.iter().zip(&digits) {
                        let (a, b) = ((d / q) as u16, (d % q) as u16);
                        v[i] = Gf(a);
                        v[n + i] = Gf(b);
                        xor_into(&mut s, &table[i][a as usize]);
                        xor_into(&mut s, &table[n + i][b as usize]);
                    }
                    if s == p.syndrome && best.as_ref().is_none_or(|b| v < *b) {
                        best = Some(v);
                    }
                    let mut k = 0;
                    while k < w {
                        digits[k] += 1;
                        if digits[k] < q * q {
                            break;
                        }
                        digits[k] = 1;
                        k += 1;
                    }
                    if k == w {
                        break;
                    }
                }
                best
            })
            .min();
        if let Some(v) = found {
            return Ok(DecodeResult::found(v, DecodeStatus::FoundMin));
        }
    }
    Ok(DecodeResult::exhausted())
}

/// e′ = swap_negate(e); re-exported here for the decoding pipeline.
pub fn to_hamming_form(field: &Field, e: &[Gf]) -> Vec<Gf> {
    swap_negate(field, e)
}

/// Standard inner product, the form the Hamming problem is posed in.
pub fn inner(field: &Field, x: &[Gf], y: &[Gf]) -> Gf {
    dot(field, x, y)
}
