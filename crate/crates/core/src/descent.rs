//! Descent of a symplectic code over GF(q^m) to one over GF(q).
//!
//! Left-half coordinates are expanded in a basis α_1…α_m, right-half
//! coordinates in the trace-dual basis β_l = Σ_k α_k (M⁻¹)_kl, where
//! M_ij = Tr(α_i α_j). With this pairing Tr(α_k β_l) = δ_kl, so
//! ⟨γ(u), γ(v)⟩_s = Tr ⟨u, v⟩_s and C ⊇ C^⊥s carries over to γ(C).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, Gf};
use crate::linalg::{inverse, mat_vec};
use crate::symplectic::CodeBasis;

#[derive(Clone, Debug)]
pub struct DescentBasis {
    embedding: Embedding,
    alpha: Vec<Gf>,
    gram: Vec<Vec<Gf>>,
    gram_inv: Vec<Vec<Gf>>,
    coords: Vec<Vec<Gf>>,
}

impl DescentBasis {
    pub fn new(embedding: Embedding, alpha: Vec<Gf>) -> Result<Self> {
        let coords = embedding.coordinate_table(&alpha)?;
        let gram = embedding.gram_matrix(&alpha)?;
        let gram_inv = inverse(embedding.small(), &gram).ok_or(Error::SingularGram)?;
        Ok(DescentBasis {
            embedding,
            alpha,
            gram,
            gram_inv,
            coords,
        })
    }

    /// Basis {1, g, …, g^{m−1}} for the generator g of `big`.
    pub fn powers(big: &Arc<Field>, small: &Arc<Field>) -> Result<Self> {
        let embedding = Embedding::new(big, small)?;
        let m = embedding.extension_degree() as u64;
        let alpha = (0..m).map(|i| big.exp(i)).collect();
        Self::new(embedding, alpha)
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn big(&self) -> &Arc<Field> {
        self.embedding.big()
    }

    pub fn small(&self) -> &Arc<Field> {
        self.embedding.small()
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Gf] {
        &self.alpha
    }

    pub fn gram(&self) -> &[Vec<Gf>] {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &[Vec<Gf>] {
        &self.gram_inv
    }

    /// x_1 α_1 + … + x_m α_m.
    pub fn alpha_map(&self, v: &[Gf]) -> Gf {
        let big = self.big();
        v.iter().zip(&self.alpha).fold(Gf::ZERO, |acc, (&x, &a)| {
            big.add(acc, big.mul(self.embedding.embed(x), a))
        })
    }

    pub fn alpha_inv(&self, y: Gf) -> Vec<Gf> {
        self.coords[y.0 as usize].clone()
    }

    /// (α_1, …, α_m) · M⁻¹ · x: expansion in the trace-dual basis.
    pub fn beta_map(&self, v: &[Gf]) -> Gf {
        self.alpha_map(&mat_vec(self.small(), &self.gram_inv, v))
    }

    pub fn beta_inv(&self, y: Gf) -> Vec<Gf> {
        mat_vec(self.small(), &self.gram, &self.alpha_inv(y))
    }

    /// γ of a single vector: n α-blocks then n β-blocks.
    pub fn descend_vector(&self, x: &[Gf]) -> Vec<Gf> {
        let n = x.len() / 2;
        let mut out = Vec::with_capacity(x.len() * self.m());
        for &y in &x[..n] {
            out.extend(self.alpha_inv(y));
        }
        for &y in &x[n..] {
            out.extend(self.beta_inv(y));
        }
        out
    }
}

/// γ(C) over the subfield, of length 2·m·n and dimension m·dim C.
pub fn descend_code(c: &CodeBasis, basis: &DescentBasis) -> Result<CodeBasis> {
    c.field().same_as(basis.big())?;
    if !c.is_self_orthogonal_containing() {
        return Err(Error::NotSelfOrthogonalContaining);
    }
    descend_subspace(c, basis)
}

/// γ applied to an arbitrary subspace. γ(C^⊥s) = γ(C)^⊥s.
pub fn descend_subspace(c: &CodeBasis, basis: &DescentBasis) -> Result<CodeBasis> {
    c.field().same_as(basis.big())?;
    let big = basis.big();
    let rows: Vec<Vec<Gf>> = c
        .rows()
        .iter()
        .flat_map(|row| {
            basis.alpha().iter().map(move |&a| {
                let scaled: Vec<Gf> = row.iter().map(|&x| big.mul(a, x)).collect();
                basis.descend_vector(&scaled)
            })
        })
        .collect();
    CodeBasis::span(basis.small(), c.n() * basis.m(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveBackend;
    use crate::symplectic::{exact_relative_min_weight, form, RelativeDistance};
    use proptest::prelude::*;

    const W: Gf = Gf(2);
    const W2: Gf = Gf(3);

    fn gf4_basis() -> DescentBasis {
        DescentBasis::powers(&Field::standard(2).unwrap(), &Field::standard(1).unwrap()).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let b = gf4_basis();
        assert_eq!(b.alpha(), &[Gf(1), W]);
        assert_eq!(b.alpha_map(&[Gf(1), Gf(0)]), Gf(1));
        assert_eq!(b.alpha_map(&[Gf(0), Gf(1)]), W);
        assert_eq!(b.alpha_map(&[Gf(1), Gf(1)]), W2);
        for y in 0..4 {
            assert_eq!(b.alpha_map(&b.alpha_inv(Gf(y))), Gf(y));
        }
    }

    #[test]
    fn beta_examples() {
        let b = gf4_basis();
        assert_eq!(b.gram(), &[vec![Gf(0), Gf(1)], vec![Gf(1), Gf(1)]]);
        assert_eq!(b.gram_inverse(), &[vec![Gf(1), Gf(1)], vec![Gf(1), Gf(0)]]);
        assert_eq!(b.beta_map(&[Gf(1), Gf(0)]), W2);
        assert_eq!(b.beta_map(&[Gf(0), Gf(1)]), Gf(1));
        assert_eq!(b.beta_map(&[Gf(0), Gf(0)]), Gf(0));
        for y in 0..4 {
            assert_eq!(b.beta_map(&b.beta_inv(Gf(y))), Gf(y));
        }
    }

    #[test]
    fn dual_basis_pairing() {
        for (r, s) in [(2, 1), (3, 1), (4, 2), (6, 2), (6, 3)] {
            let b = DescentBasis::powers(&Field::standard(r).unwrap(), &Field::standard(s).unwrap()).unwrap();
            let m = b.m();
            for k in 0..m {
                for l in 0..m {
                    let mut e = vec![Gf::ZERO; m];
                    e[l] = Gf::ONE;
                    let t = b.embedding().trace(b.big().mul(b.alpha()[k], b.beta_map(&e)));
                    assert_eq!(t, if k == l { Gf::ONE } else { Gf::ZERO });
                }
            }
        }
    }

    #[test]
    fn hermitian_q2_descends_to_6_2() {
        let h = CurveBackend::hermitian(2).unwrap();
        let (cg, ch) = h.build_codes(1).unwrap();
        let b = gf4_basis();
        let g = descend_code(&cg, &b).unwrap();
        assert_eq!((g.n(), g.dim()), (6, 8));
        assert!(g.is_self_orthogonal_containing());
        let gd = g.symplectic_dual();
        assert_eq!(descend_subspace(&ch, &b).unwrap(), gd);
        assert_eq!(descend_code(&ch, &b).unwrap_err().to_string(), Error::NotSelfOrthogonalContaining.to_string());
        let RelativeDistance::Exact(dq) = exact_relative_min_weight(&cg, &ch).unwrap().distance else { panic!() };
        let RelativeDistance::Exact(db) = exact_relative_min_weight(&g, &gd).unwrap().distance else { panic!() };
        assert!(db >= dq, "{db} < {dq}");
    }

    #[test]
    fn zero_and_full_codes() {
        let b = gf4_basis();
        let full = CodeBasis::full(b.big(), 2);
        let d = descend_code(&full, &b).unwrap();
        assert_eq!(d, CodeBasis::full(b.small(), 4));
        assert!(descend_code(&CodeBasis::zero(b.big(), 2), &b).is_err());
    }

    #[test]
    fn rational_codes_descend() {
        for (q, s) in [(8u32, 1u32), (16, 1), (16, 2)] {
            let r = CurveBackend::rational(q).unwrap();
            let b = DescentBasis::powers(r.field(), &Field::standard(s).unwrap()).unwrap();
            for j in 0..=2 {
                let (cg, _) = r.build_codes(j).unwrap();
                let g = descend_code(&cg, &b).unwrap();
                assert_eq!(g.dim(), b.m() * cg.dim());
                assert_eq!(g.n(), b.m() * cg.n());
                assert!(g.is_self_orthogonal_containing());
            }
        }
    }

    /// Expansion of the right half with β = α·M·x instead of α·M⁻¹·x.
    fn literal_descend(b: &DescentBasis, c: &CodeBasis) -> CodeBasis {
        let big = b.big();
        let n = c.n();
        let rows = c
            .rows()
            .iter()
            .flat_map(|row| {
                b.alpha().iter().map(move |&a| {
                    let x: Vec<Gf> = row.iter().map(|&v| big.mul(a, v)).collect();
                    let mut out = Vec::new();
                    for &y in &x[..n] {
                        out.extend(b.alpha_inv(y));
                    }
                    for &y in &x[n..] {
                        out.extend(mat_vec(b.small(), b.gram_inverse(), &b.alpha_inv(y)));
                    }
                    out
                })
            })
            .collect();
        CodeBasis::span(b.small(), n * b.m(), rows).unwrap()
    }

    #[test]
    fn gram_matrix_expansion_without_inverse_breaks_self_orthogonality() {
        let r = CurveBackend::rational(16).unwrap();
        let b = DescentBasis::powers(r.field(), &Field::standard(1).unwrap()).unwrap();
        let (cg, _) = r.build_codes(1).unwrap();
        assert!(!literal_descend(&b, &cg).is_self_orthogonal_containing());
        assert!(descend_code(&cg, &b).unwrap().is_self_orthogonal_containing());
    }

    fn arb_pair(len: usize) -> impl Strategy<Value = (Vec<u16>, Vec<u16>, u32)> {
        (1u32..=3).prop_flat_map(move |s| {
            let big = 1u16 << (2 * s);
            (
                proptest::collection::vec(0..big, len),
                proptest::collection::vec(0..big, len),
                Just(s),
            )
        })
    }

    proptest! {
        #[test]
        fn form_compatibility((u, v, s) in arb_pair(6)) {
            let big = Field::standard(2 * s).unwrap();
            let small = Field::standard(s).unwrap();
            let b = DescentBasis::powers(&big, &small).unwrap();
            let u: Vec<Gf> = u.into_iter().map(Gf).collect();
            let v: Vec<Gf> = v.into_iter().map(Gf).collect();
            let lhs = form(&small, &b.descend_vector(&u), &b.descend_vector(&v));
            let rhs = b.embedding().trace(form(&big, &u, &v));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
