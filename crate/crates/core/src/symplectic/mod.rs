//! Vectors and subspaces of F_q^{2n} under the standard symplectic form
//!
//! ⟨x, y⟩_s = Σ_{i<n} x_i y_{n+i} − x_{n+i} y_i,
//!
//! with symplectic weight counting the coordinate pairs (i, n+i) that are not
//! both zero. A [`CodeBasis`] is always kept in canonical reduced row echelon
//! form (leftmost pivots), so two bases of the same subspace compare equal.

mod distance;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::linalg::{self, Rref};

pub use distance::{
    budget_relative_min_weight, exact_relative_min_weight, min_hamming_weight,
    relative_min_weight, DistanceReport, RelativeDistance, ENUMERATION_CAP_LOG2,
};

/// A vector of length 2n over one field.
#[derive(Clone)]
pub struct SymVec {
    field: Arc<Field>,
    entries: Vec<Gf>,
}

impl fmt::Debug for SymVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<u16> = self.entries.iter().map(|g| g.0).collect();
        write!(f, "SymVec{idx:?}")
    }
}

impl PartialEq for SymVec {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec() && self.entries == other.entries
    }
}

impl Eq for SymVec {}

impl SymVec {
    pub fn new(field: &Arc<Field>, entries: Vec<Gf>) -> Result<Self> {
        if !entries.len().is_multiple_of(2) {
            return Err(Error::OddLength(entries.len()));
        }
        for g in &entries {
            field.element(g.index())?;
        }
        Ok(SymVec {
            field: field.clone(),
            entries,
        })
    }

    pub fn from_indices(field: &Arc<Field>, idx: &[u32]) -> Result<Self> {
        let entries = idx
            .iter()
            .map(|&i| field.element(i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, entries)
    }

    pub fn zeros(field: &Arc<Field>, n: usize) -> Self {
        SymVec {
            field: field.clone(),
            entries: vec![Gf::ZERO; 2 * n],
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn entries(&self) -> &[Gf] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Gf> {
        self.entries
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn weight(&self) -> usize {
        weight(&self.entries)
    }

    pub fn hamming_weight(&self) -> usize {
        hamming_weight(&self.entries)
    }
}

/// ⟨x, y⟩_s on raw entry slices of equal even length.
#[inline]
pub fn form(field: &Field, x: &[Gf], y: &[Gf]) -> Gf {
    let n = x.len() / 2;
    let (xl, xr) = x.split_at(n);
    let (yl, yr) = y.split_at(n);
    let mut acc = Gf::ZERO;
    for i in 0..n {
        acc = field.add(acc, field.mul(xl[i], yr[i]));
        acc = field.sub(acc, field.mul(xr[i], yl[i]));
    }
    acc
}

/// The standard symplectic form, with length and field checks.
pub fn symplectic_form(x: &SymVec, y: &SymVec) -> Result<Gf> {
    x.field.same_as(&y.field)?;
    if x.entries.len() != y.entries.len() {
        return Err(Error::LengthMismatch(x.entries.len(), y.entries.len()));
    }
    Ok(form(&x.field, &x.entries, &y.entries))
}

/// Number of i < n with (x_i, x_{n+i}) ≠ (0, 0).
#[inline]
pub fn weight(x: &[Gf]) -> usize {
    let n = x.len() / 2;
    (0..n)
        .filter(|&i| !x[i].is_zero() || !x[n + i].is_zero())
        .count()
}

pub fn symplectic_weight(x: &SymVec) -> usize {
    weight(&x.entries)
}

#[inline]
pub fn hamming_weight(x: &[Gf]) -> usize {
    x.iter().filter(|g| !g.is_zero()).count()
}

/// (−x_{n+1}, …, −x_{2n}, x_1, …, x_n): turns the symplectic form into the
/// standard inner product, ⟨x, b⟩_s = ⟨swap_negate(x), b⟩.
pub fn swap_negate(field: &Field, x: &[Gf]) -> Vec<Gf> {
    let n = x.len() / 2;
    x[n..]
        .iter()
        .map(|&v| field.neg(v))
        .chain(x[..n].iter().copied())
        .collect()
}

/// Inverse of [`swap_negate`].
pub fn swap_negate_inverse(field: &Field, y: &[Gf]) -> Vec<Gf> {
    let n = y.len() / 2;
    y[n..]
        .iter()
        .copied()
        .chain(y[..n].iter().map(|&v| field.neg(v)))
        .collect()
}

/// A subspace of F_q^{2n}, held as its canonical rref basis.
#[derive(Clone)]
pub struct CodeBasis {
    field: Arc<Field>,
    n: usize,
    rref: Rref,
}

impl fmt::Debug for CodeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeBasis")
            .field("q", &self.field.size())
            .field("n", &self.n)
            .field("dim", &self.dim())
            .finish()
    }
}

impl PartialEq for CodeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec() && self.n == other.n && self.rref == other.rref
    }
}

impl Eq for CodeBasis {}

/// Canonical rref basis of the row space of `rows` and its rank.
pub fn row_reduce(field: &Arc<Field>, n: usize, rows: Vec<Vec<Gf>>) -> Result<(CodeBasis, usize)> {
    let c = CodeBasis::span(field, n, rows)?;
    let rank = c.dim();
    Ok((c, rank))
}

impl CodeBasis {
    pub fn span(field: &Arc<Field>, n: usize, rows: Vec<Vec<Gf>>) -> Result<Self> {
        for r in &rows {
            if r.len() != 2 * n {
                return Err(Error::LengthMismatch(r.len(), 2 * n));
            }
            for g in r {
                field.element(g.index())?;
            }
        }
        Ok(CodeBasis {
            field: field.clone(),
            n,
            rref: linalg::rref(field, rows, 2 * n),
        })
    }

    pub fn from_vectors(field: &Arc<Field>, n: usize, rows: &[SymVec]) -> Result<Self> {
        for r in rows {
            field.same_as(&r.field)?;
        }
        Self::span(field, n, rows.iter().map(|r| r.entries.clone()).collect())
    }

    pub fn zero(field: &Arc<Field>, n: usize) -> Self {
        CodeBasis {
            field: field.clone(),
            n,
            rref: Rref {
                rows: Vec::new(),
                pivots: Vec::new(),
            },
        }
    }

    pub fn full(field: &Arc<Field>, n: usize) -> Self {
        let rows = (0..2 * n)
            .map(|i| {
                let mut r = vec![Gf::ZERO; 2 * n];
                r[i] = Gf::ONE;
                r
            })
            .collect();
        CodeBasis {
            field: field.clone(),
            n,
            rref: Rref {
                rows,
                pivots: (0..2 * n).collect(),
            },
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn rows(&self) -> &[Vec<Gf>] {
        &self.rref.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.rref.pivots
    }

    /// q^dim as log2, i.e. r·dim.
    pub fn size_log2(&self) -> u64 {
        self.field.degree() as u64 * self.dim() as u64
    }

    pub fn contains_vector(&self, v: &[Gf]) -> bool {
        v.len() == 2 * self.n && self.rref.contains(&self.field, v)
    }

    fn check_ambient(&self, other: &CodeBasis) -> Result<()> {
        self.field.same_as(&other.field)?;
        if self.n != other.n {
            return Err(Error::LengthMismatch(2 * self.n, 2 * other.n));
        }
        Ok(())
    }

    /// True iff every row of `other` lies in `self`.
    pub fn contains(&self, other: &CodeBasis) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.rows().iter().all(|r| self.contains_vector(r)))
    }

    /// Basis of { x : ⟨x, c⟩_s = 0 for all c ∈ self }.
    pub fn symplectic_dual(&self) -> CodeBasis {
        let euclid = linalg::nullspace(&self.field, self.rows(), 2 * self.n);
        let rows = euclid
            .iter()
            .map(|v| swap_negate_inverse(&self.field, v))
            .collect();
        CodeBasis {
            field: self.field.clone(),
            n: self.n,
            rref: linalg::rref(&self.field, rows, 2 * self.n),
        }
    }

    /// Basis of the dual under the standard inner product.
    pub fn euclidean_dual(&self) -> CodeBasis {
        let rows = linalg::nullspace(&self.field, self.rows(), 2 * self.n);
        CodeBasis {
            field: self.field.clone(),
            n: self.n,
            rref: linalg::rref(&self.field, rows, 2 * self.n),
        }
    }

    /// The codeword Σ coeffs[i]·row_i.
    pub fn combine(&self, coeffs: &[Gf]) -> Vec<Gf> {
        let mut out = vec![Gf::ZERO; 2 * self.n];
        for (row, &c) in self.rows().iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = self.field.add(*o, self.field.mul(c, x));
            }
        }
        out
    }

    /// True iff the subspace contains its own symplectic dual.
    pub fn is_self_orthogonal_containing(&self) -> bool {
        self.contains(&self.symplectic_dual()).unwrap_or(false)
    }
}

pub fn symplectic_dual(c: &CodeBasis) -> CodeBasis {
    c.symplectic_dual()
}

pub fn contains(c: &CodeBasis, d: &CodeBasis) -> Result<bool> {
    c.contains(d)
}

/// How much work [`stabilizer_params`] spends on the distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    BoundOnly,
    Exact,
    Budget(usize),
}

/// [[n, k, d]] parameters of the stabilizer code obtained from C ⊇ C^⊥s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerParams {
    pub n: usize,
    pub k: usize,
    pub d_lower: usize,
    pub d_exact: Option<usize>,
    /// Set when k = 0: C∖C^⊥s is empty and d is undefined.
    pub empty_relative: bool,
    /// For k = 0 only: minimum nonzero weight of C, reported under the usual
    /// [[n, 0, d]] convention.
    pub min_nonzero_weight: Option<usize>,
}

impl StabilizerParams {
    pub fn d(&self) -> usize {
        self.d_exact.unwrap_or(self.d_lower)
    }

    /// Number of correctable errors ⌊(d − 1)/2⌋.
    pub fn t(&self) -> usize {
        self.d().saturating_sub(1) / 2
    }
}

/// Extracts [[n, k, d]] from C. `designed` is a known lower bound on the
/// relative distance (for instance n − ⌊deg G/2⌋ for curve codes).
pub fn stabilizer_params(
    c: &CodeBasis,
    mode: DistanceMode,
    designed: Option<usize>,
) -> Result<StabilizerParams> {
    let dual = c.symplectic_dual();
    if !c.contains(&dual)? {
        return Err(Error::NotSelfOrthogonalContaining);
    }
    let n = c.n();
    let k = c.dim() - n;
    let mut params = StabilizerParams {
        n,
        k,
        d_lower: designed.unwrap_or(1),
        d_exact: None,
        empty_relative: k == 0,
        min_nonzero_weight: None,
    };
    if mode == DistanceMode::BoundOnly {
        return Ok(params);
    }
    let budget = match mode {
        DistanceMode::Budget(w) => Some(w),
        _ => None,
    };
    if k == 0 {
        let zero = CodeBasis::zero(c.field(), n);
        let report = relative_min_weight(c, &zero, budget)?;
        if let RelativeDistance::Exact(w) = report.distance {
            params.min_nonzero_weight = Some(w);
        }
        return Ok(params);
    }
    let report = match mode {
        DistanceMode::Exact => exact_relative_min_weight(c, &dual)?,
        _ => relative_min_weight(c, &dual, budget)?,
    };
    match report.distance {
        RelativeDistance::Exact(d) => {
            if d < params.d_lower {
                return Err(Error::InvalidParameter(format!(
                    "designed distance {} exceeds the enumerated distance {d}",
                    params.d_lower
                )));
            }
            params.d_exact = Some(d);
        }
        RelativeDistance::AtLeast(d) => params.d_lower = params.d_lower.max(d),
        RelativeDistance::EmptySet => params.empty_relative = true,
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<Field> {
        Field::standard(1).unwrap()
    }

    fn f4() -> Arc<Field> {
        Field::standard(2).unwrap()
    }

    fn v(field: &Arc<Field>, idx: &[u32]) -> SymVec {
        SymVec::from_indices(field, idx).unwrap()
    }

    #[test]
    fn form_examples() {
        let f = f2();
        assert_eq!(
            symplectic_form(&v(&f, &[1, 0, 0, 0]), &v(&f, &[0, 0, 1, 0])).unwrap(),
            Gf::ONE
        );
        let f = f4();
        // ω·ω = ω²
        assert_eq!(
            symplectic_form(&v(&f, &[2, 0]), &v(&f, &[0, 2])).unwrap(),
            Gf(3)
        );
        let x = v(&f, &[2, 3, 1, 0]);
        assert_eq!(symplectic_form(&x, &x).unwrap(), Gf::ZERO);
    }

    #[test]
    fn form_rejects_mismatch() {
        let a = v(&f4(), &[1, 0]);
        let b = v(&f4(), &[1, 0, 0, 0]);
        assert!(matches!(symplectic_form(&a, &b), Err(Error::LengthMismatch(2, 4))));
        let c = v(&Field::standard(3).unwrap(), &[1, 0]);
        assert!(matches!(symplectic_form(&a, &c), Err(Error::FieldMismatch { .. })));
        assert!(matches!(SymVec::new(&f4(), vec![Gf(1)]), Err(Error::OddLength(1))));
    }

    #[test]
    fn weight_examples() {
        let f = f4();
        assert_eq!(symplectic_weight(&SymVec::zeros(&f, 3)), 0);
        assert_eq!(symplectic_weight(&v(&f2(), &[1, 0, 0, 0, 1, 0])), 2);
        assert_eq!(symplectic_weight(&v(&f, &[2, 3, 1, 0])), 2);
    }

    #[test]
    fn dual_examples() {
        let f = f2();
        let full = CodeBasis::full(&f, 1);
        assert_eq!(full.symplectic_dual().dim(), 0);
        let zero = CodeBasis::zero(&f, 1);
        assert_eq!(zero.symplectic_dual(), full);
        let c = CodeBasis::span(&f, 1, vec![vec![Gf(1), Gf(0)]]).unwrap();
        assert_eq!(c.symplectic_dual(), c);
    }

    #[test]
    fn contains_examples() {
        let f = f2();
        let c = CodeBasis::span(&f, 1, vec![vec![Gf(1), Gf(0)]]).unwrap();
        let d = CodeBasis::span(&f, 1, vec![vec![Gf(0), Gf(1)]]).unwrap();
        assert!(c.contains(&c).unwrap());
        assert!(CodeBasis::full(&f, 1).contains(&d).unwrap());
        assert!(!c.contains(&d).unwrap());
    }

    #[test]
    fn row_reduce_reports_rank() {
        let f = f4();
        let (b, r) = row_reduce(&f, 1, vec![vec![Gf(2), Gf(1)], vec![Gf(1), Gf(3)]]).unwrap();
        assert_eq!(r, 1);
        assert_eq!(b.rows(), &[vec![Gf(1), Gf(3)]]);
        let (_, r) = row_reduce(&f, 1, vec![]).unwrap();
        assert_eq!(r, 0);
    }

    #[test]
    fn params_of_full_space() {
        let f = f2();
        let p = stabilizer_params(&CodeBasis::full(&f, 1), DistanceMode::BoundOnly, None).unwrap();
        assert_eq!((p.n, p.k, p.d()), (1, 1, 1));
        assert_eq!(p.t(), 0);
        let p = stabilizer_params(&CodeBasis::full(&f, 1), DistanceMode::Exact, None).unwrap();
        assert_eq!(p.d_exact, Some(1));
    }

    #[test]
    fn params_reject_non_containing() {
        let f = f2();
        // span{(1,0 | 0,0)} has dual of dim 3, not contained in it.
        let c = CodeBasis::span(&f, 2, vec![vec![Gf(1), Gf(0), Gf(0), Gf(0)]]).unwrap();
        assert!(matches!(
            stabilizer_params(&c, DistanceMode::BoundOnly, None),
            Err(Error::NotSelfOrthogonalContaining)
        ));
    }

    #[test]
    fn k_zero_reports_empty_set() {
        let f = f2();
        let c = CodeBasis::span(&f, 1, vec![vec![Gf(1), Gf(0)]]).unwrap();
        let p = stabilizer_params(&c, DistanceMode::Exact, None).unwrap();
        assert_eq!(p.k, 0);
        assert!(p.empty_relative);
        assert_eq!(p.d_exact, None);
        assert_eq!(p.min_nonzero_weight, Some(1));
    }

    #[test]
    fn swap_negate_turns_form_into_dot() {
        let f = Field::standard(3).unwrap();
        let x = [Gf(1), Gf(5), Gf(0), Gf(7), Gf(2), Gf(3)];
        let y = [Gf(4), Gf(6), Gf(1), Gf(0), Gf(3), Gf(5)];
        let xs = swap_negate(&f, &x);
        assert_eq!(form(&f, &x, &y), linalg::dot(&f, &xs, &y));
        assert_eq!(swap_negate_inverse(&f, &xs), x.to_vec());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vec_strategy(r: u32, len: usize) -> impl Strategy<Value = Vec<Gf>> {
            let mask = (1u16 << r) - 1;
            proptest::collection::vec(any::<u16>().prop_map(move |x| Gf(x & mask)), len)
        }

        fn subspace(r: u32, n: usize) -> impl Strategy<Value = Vec<Vec<Gf>>> {
            (0..=2 * n).prop_flat_map(move |k| proptest::collection::vec(vec_strategy(r, 2 * n), k))
        }

        proptest! {
            #[test]
            fn form_is_alternating(r in 1u32..=8, x in vec_strategy(8, 8), y in vec_strategy(8, 8)) {
                let f = Field::standard(r).unwrap();
                let mask = (f.size() - 1) as u16;
                let x: Vec<Gf> = x.iter().map(|g| Gf(g.0 & mask)).collect();
                let y: Vec<Gf> = y.iter().map(|g| Gf(g.0 & mask)).collect();
                prop_assert_eq!(form(&f, &x, &x), Gf::ZERO);
                prop_assert_eq!(form(&f, &x, &y), f.neg(form(&f, &y, &x)));
            }

            #[test]
            fn weight_sandwich(x in vec_strategy(4, 10)) {
                let w = weight(&x);
                let h = hamming_weight(&x);
                prop_assert!(w <= h && h <= 2 * w);
            }

            #[test]
            fn dual_dimension_and_involution(r in 1u32..=4, rows in subspace(4, 3)) {
                let f = Field::standard(r).unwrap();
                let mask = (f.size() - 1) as u16;
                let rows: Vec<Vec<Gf>> = rows
                    .into_iter()
                    .map(|row| row.into_iter().map(|g| Gf(g.0 & mask)).collect())
                    .collect();
                let c = CodeBasis::span(&f, 3, rows).unwrap();
                let d = c.symplectic_dual();
                prop_assert_eq!(c.dim() + d.dim(), 6);
                prop_assert_eq!(d.symplectic_dual(), c.clone());
                for a in c.rows() {
                    for b in d.rows() {
                        prop_assert_eq!(form(&f, a, b), Gf::ZERO);
                    }
                }
                let accepted = stabilizer_params(&c, DistanceMode::BoundOnly, None).is_ok();
                prop_assert_eq!(accepted, c.contains(&d).unwrap());
            }
        }
    }
}
