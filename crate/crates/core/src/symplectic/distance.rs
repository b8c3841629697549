//! Minimum symplectic weight over C∖D.
//!
//! Two strategies:
//!
//! * full enumeration of C by a Gray-code walk over its F_2-expansion, used
//!   when q^{dim C} ≤ 2^[`ENUMERATION_CAP_LOG2`];
//! * a weight budget: every ambient vector of symplectic weight ≤ w is
//!   covered, support by support. For a support S the vectors of C with
//!   support inside S are the kernel of the parity constraints restricted to
//!   S, so only that kernel is walked.
//!
//! Membership in D is tested by the symplectic syndrome against a basis of
//! D^⊥s, carried along the walk as extra coordinates.

use std::ops::ControlFlow;

use itertools::Itertools;
use rayon::prelude::*;

use super::{form, hamming_weight, weight, CodeBasis};
use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::linalg;

/// Exact enumeration is allowed up to 2^24 codewords.
pub const ENUMERATION_CAP_LOG2: u64 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelativeDistance {
    Exact(usize),
    /// Budget exhausted: nothing of weight < the value lies in C∖D.
    AtLeast(usize),
    /// C = D.
    EmptySet,
}

#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub distance: RelativeDistance,
    /// A vector of C∖D attaining the distance, when one was found.
    pub witness: Option<Vec<Gf>>,
    /// Number of candidate vectors covered by the search.
    pub examined: u64,
}

fn check_pair(c: &CodeBasis, d: &CodeBasis) -> Result<()> {
    c.check_ambient(d)?;
    if !c.contains(d)? {
        return Err(Error::NotContained);
    }
    Ok(())
}

/// Exact enumeration when feasible, otherwise the weight budget.
pub fn relative_min_weight(
    c: &CodeBasis,
    d: &CodeBasis,
    budget: Option<usize>,
) -> Result<DistanceReport> {
    check_pair(c, d)?;
    if c.dim() == d.dim() {
        return Ok(empty());
    }
    if c.size_log2() <= ENUMERATION_CAP_LOG2 {
        return exact_relative_min_weight(c, d);
    }
    match budget {
        Some(w) => budget_relative_min_weight(c, d, w),
        None => Err(Error::EnumerationCap(format!("2^{}", c.size_log2()))),
    }
}

fn empty() -> DistanceReport {
    DistanceReport {
        distance: RelativeDistance::EmptySet,
        witness: None,
        examined: 0,
    }
}

/// Syndrome rows: a basis of D^⊥s, so that x ∈ D iff ⟨x, h⟩_s = 0 for all h.
fn membership_checks(d: &CodeBasis) -> Vec<Vec<Gf>> {
    d.symplectic_dual().rows().to_vec()
}

/// Each generator extended by its syndrome against `checks`.
fn extend_with_syndrome(field: &Field, gens: &[Vec<Gf>], checks: &[Vec<Gf>]) -> Vec<Vec<Gf>> {
    gens.iter()
        .map(|g| {
            let mut e = g.clone();
            e.extend(checks.iter().map(|h| form(field, g, h)));
            e
        })
        .collect()
}

fn xor_into(acc: &mut [Gf], v: &[Gf]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        a.0 ^= b.0;
    }
}

/// Walks every codeword of C; `score` maps the codeword (first 2n entries)
/// to a weight, or `None` to skip it. Returns the least score and a witness.
fn enumerate_min<S>(c: &CodeBasis, d: &CodeBasis, score: S) -> (Option<(usize, Vec<Gf>)>, u64)
where
    S: Fn(&[Gf]) -> usize + Sync,
{
    let field = c.field();
    let len = 2 * c.n();
    let gens = linalg::binary_expansion(field, c.rows());
    let checks = membership_checks(d);
    let ext = extend_with_syndrome(field, &gens, &checks);
    let total_bits = ext.len();
    let split = total_bits.min(8);
    let (low, high) = ext.split_at(total_bits - split);

    let best = (0u64..(1 << split))
        .into_par_iter()
        .map(|prefix| {
            let mut start = vec![Gf::ZERO; len + checks.len()];
            for (bit, g) in high.iter().enumerate() {
                if prefix >> bit & 1 == 1 {
                    xor_into(&mut start, g);
                }
            }
            let mut best: Option<(usize, Vec<Gf>)> = None;
            let _ = linalg::gray_walk(&start, low, |v| {
                let (word, syn) = v.split_at(len);
                if syn.iter().any(|s| !s.is_zero()) {
                    let w = score(word);
                    if best.as_ref().is_none_or(|(b, _)| w < *b) {
                        best = Some((w, word.to_vec()));
                    }
                }
                ControlFlow::Continue(())
            });
            best.map(|(w, v)| (w, prefix, v))
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => Some(if (b.0, b.1) < (a.0, a.1) { b } else { a }),
            },
        );
    (best.map(|(w, _, v)| (w, v)), 1u64 << total_bits)
}

/// Exact min symplectic weight over C∖D by walking all q^{dim C} codewords.
pub fn exact_relative_min_weight(c: &CodeBasis, d: &CodeBasis) -> Result<DistanceReport> {
    check_pair(c, d)?;
    if c.dim() == d.dim() {
        return Ok(empty());
    }
    if c.size_log2() > ENUMERATION_CAP_LOG2 {
        return Err(Error::EnumerationCap(format!("2^{}", c.size_log2())));
    }
    let (best, examined) = enumerate_min(c, d, weight);
    let (w, v) = best.expect("C strictly contains D");
    Ok(DistanceReport {
        distance: RelativeDistance::Exact(w),
        witness: Some(v),
        examined,
    })
}

/// Exact minimum Hamming weight of a nonzero codeword of C.
pub fn min_hamming_weight(c: &CodeBasis) -> Result<DistanceReport> {
    let zero = CodeBasis::zero(c.field(), c.n());
    if c.dim() == 0 {
        return Ok(empty());
    }
    if c.size_log2() > ENUMERATION_CAP_LOG2 {
        return Err(Error::EnumerationCap(format!("2^{}", c.size_log2())));
    }
    let (best, examined) = enumerate_min(c, &zero, hamming_weight);
    let (w, v) = best.expect("nonzero code");
    Ok(DistanceReport {
        distance: RelativeDistance::Exact(w),
        witness: Some(v),
        examined,
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Covers every vector of symplectic weight 1..=budget. Stops at the first
/// weight with a vector of C∖D, which is then the exact distance.
pub fn budget_relative_min_weight(
    c: &CodeBasis,
    d: &CodeBasis,
    budget: usize,
) -> Result<DistanceReport> {
    check_pair(c, d)?;
    if c.dim() == d.dim() {
        return Ok(empty());
    }
    let field = c.field();
    let n = c.n();
    let parity = c.symplectic_dual();
    let checks = membership_checks(d);
    let pair_values = (field.size() as u64).pow(2) - 1;
    let mut examined = 0u64;

    for w in 1..=budget.min(n) {
        examined = examined.saturating_add(binomial(n as u64, w as u64).saturating_mul(pair_values.saturating_pow(w as u32)));
        let hit = (0..n)
            .combinations(w)
            .par_bridge()
            .filter_map(|support| search_support(field, n, &support, parity.rows(), &checks))
            .min();
        if let Some(v) = hit {
            return Ok(DistanceReport {
                distance: RelativeDistance::Exact(w),
                witness: Some(v),
                examined,
            });
        }
    }
    Ok(DistanceReport {
        distance: RelativeDistance::AtLeast(budget.min(n) + 1),
        witness: None,
        examined,
    })
}

/// Least (lexicographic) vector of C∖D with support exactly `support`.
fn search_support(
    field: &Field,
    n: usize,
    support: &[usize],
    parity: &[Vec<Gf>],
    checks: &[Vec<Gf>],
) -> Option<Vec<Gf>> {
    let w = support.len();
    // Unknown 2t is x_{i_t}, unknown 2t+1 is x_{n+i_t}.
    let a: Vec<Vec<Gf>> = parity
        .iter()
        .map(|h| {
            support
                .iter()
                .flat_map(|&i| [h[n + i], field.neg(h[i])])
                .collect()
        })
        .collect();
    let kernel = linalg::nullspace(field, &a, 2 * w);
    if kernel.is_empty() {
        return None;
    }
    let embed = |local: &[Gf]| {
        let mut full = vec![Gf::ZERO; 2 * n];
        for (t, &i) in support.iter().enumerate() {
            full[i] = local[2 * t];
            full[n + i] = local[2 * t + 1];
        }
        full
    };
    let gens: Vec<Vec<Gf>> = linalg::binary_expansion(field, &kernel)
        .iter()
        .map(|g| {
            let full = embed(g);
            let mut e = g.clone();
            e.extend(checks.iter().map(|h| form(field, &full, h)));
            e
        })
        .collect();
    let mut best: Option<Vec<Gf>> = None;
    let _ = linalg::gray_walk(&vec![Gf::ZERO; 2 * w + checks.len()], &gens, |v| {
        let (local, syn) = v.split_at(2 * w);
        let full_support = local
            .chunks(2)
            .all(|p| !p[0].is_zero() || !p[1].is_zero());
        if full_support && syn.iter().any(|s| !s.is_zero()) {
            let full = embed(local);
            if best.as_ref().is_none_or(|b| full < *b) {
                best = Some(full);
            }
        }
        ControlFlow::Continue(())
    });
    best
}
