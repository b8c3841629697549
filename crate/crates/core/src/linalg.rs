//! Dense linear algebra over GF(2^r): reduced row echelon form, null spaces,
//! linear solves, and F_2-span walks used by the exhaustive searches.

use std::ops::ControlFlow;

use crate::field::{Field, Gf};

/// Rows in canonical reduced row echelon form with leftmost pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rows: Vec<Vec<Gf>>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination. Zero rows are dropped; pivots are chosen
/// column by column from the left, so the result is unique for a given
/// row space.
pub fn rref(field: &Field, mut rows: Vec<Vec<Gf>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        if inv != Gf::ONE {
            for x in rows[rank][col..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, rest) = tail.split_first_mut().expect("rank < len");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let c = other[col];
            if c.is_zero() {
                continue;
            }
            for (x, &p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(*x, field.mul(c, p));
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Rref { rows, pivots }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, field: &Field, v: &[Gf]) -> Vec<Gf> {
        let mut v = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let c = v[col];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(c, r));
            }
        }
        v
    }

    pub fn contains(&self, field: &Field, v: &[Gf]) -> bool {
        self.reduce(field, v).iter().all(|x| x.is_zero())
    }

    /// Basis of { x : Σ_j row_i[j] x_j = 0 for every row }.
    pub fn nullspace(&self, field: &Field, ncols: usize) -> Vec<Vec<Gf>> {
        let mut is_pivot = vec![false; ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Gf::ZERO; ncols];
                v[free] = Gf::ONE;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = field.neg(row[free]);
                }
                v
            })
            .collect()
    }
}

/// Null space of the matrix whose rows are `rows`.
pub fn nullspace(field: &Field, rows: &[Vec<Gf>], ncols: usize) -> Vec<Vec<Gf>> {
    rref(field, rows.to_vec(), ncols).nullspace(field, ncols)
}

/// Solutions of A·x = b, with A given by columns-of-unknowns layout
/// `a[i][j]` = coefficient of unknown j in equation i. Returns a particular
/// solution and a basis of the homogeneous solutions, or `None` if the
/// system is inconsistent.
pub fn solve_affine(
    field: &Field,
    a: &[Vec<Gf>],
    b: &[Gf],
    nunknowns: usize,
) -> Option<(Vec<Gf>, Vec<Vec<Gf>>)> {
    let augmented: Vec<Vec<Gf>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let red = rref(field, augmented, nunknowns + 1);
    if red.pivots.last() == Some(&nunknowns) {
        return None;
    }
    let mut particular = vec![Gf::ZERO; nunknowns];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        particular[p] = row[nunknowns];
    }
    let coeffs = Rref {
        rows: red.rows.iter().map(|r| r[..nunknowns].to_vec()).collect(),
        pivots: red.pivots.clone(),
    };
    Some((particular, coeffs.nullspace(field, nunknowns)))
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(field: &Field, m: &[Vec<Gf>]) -> Option<Vec<Vec<Gf>>> {
    let k = m.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let augmented: Vec<Vec<Gf>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { Gf::ONE } else { Gf::ZERO }));
            r
        })
        .collect();
    let red = rref(field, augmented, 2 * k);
    if red.rank() < k || red.pivots[k - 1] != k - 1 {
        return None;
    }
    Some(red.rows.into_iter().map(|r| r[k..].to_vec()).collect())
}

pub fn mat_mul(field: &Field, a: &[Vec<Gf>], b: &[Vec<Gf>]) -> Vec<Vec<Gf>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Gf::ZERO, |acc, (&x, brow)| field.add(acc, field.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Matrix times column vector.
pub fn mat_vec(field: &Field, a: &[Vec<Gf>], v: &[Gf]) -> Vec<Gf> {
    a.iter()
        .map(|row| dot(field, row, v))
        .collect()
}

#[inline]
pub fn dot(field: &Field, x: &[Gf], y: &[Gf]) -> Gf {
    x.iter()
        .zip(y)
        .fold(Gf::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// The F_2-expansion of an F_q-span: `x^b · row` for every row and every
/// polynomial-basis bit b.
pub fn binary_expansion(field: &Field, rows: &[Vec<Gf>]) -> Vec<Vec<Gf>> {
    rows.iter()
        .flat_map(|row| {
            (0..field.degree()).map(move |b| {
                let s = Gf(1 << b);
                row.iter().map(|&x| field.mul(s, x)).collect()
            })
        })
        .collect()
}

/// Visits every vector of the F_2-span of `generators` exactly once via a
/// binary reflected Gray code (one XOR per step), starting from `start`.
/// The callback sees the zero combination first. Addition is XOR because
/// every field here has characteristic 2.
pub fn gray_walk<F>(start: &[Gf], generators: &[Vec<Gf>], mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Gf]) -> ControlFlow<()>,
{
    let mut cur = start.to_vec();
    visit(&cur)?;
    let total: u64 = 1u64 << generators.len();
    for counter in 1..total {
        let bit = counter.trailing_zeros() as usize;
        for (x, &g) in cur.iter_mut().zip(&generators[bit]) {
            x.0 ^= g.0;
        }
        visit(&cur)?;
    }
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn gf4() -> Arc<Field> {
        Field::standard(2).unwrap()
    }

    #[test]
    fn rref_duplicate_and_empty() {
        let f2 = Field::standard(1).unwrap();
        let r = rref(&f2, vec![vec![Gf(1), Gf(1)], vec![Gf(1), Gf(1)]], 2);
        assert_eq!(r.rank(), 1);
        assert_eq!(rref(&f2, vec![], 2).rank(), 0);
    }

    #[test]
    fn rref_scalar_multiple_over_gf4() {
        let f = gf4();
        // (ω, 1) and (1, ω²) = ω²·(ω, 1)
        let r = rref(&f, vec![vec![Gf(2), Gf(1)], vec![Gf(1), Gf(3)]], 2);
        assert_eq!(r.rank(), 1);
        assert_eq!(r.rows[0], vec![Gf(1), Gf(3)]);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let f = Field::standard(3).unwrap();
        let rows = vec![
            vec![Gf(1), Gf(2), Gf(3), Gf(4)],
            vec![Gf(5), Gf(0), Gf(7), Gf(1)],
        ];
        let ns = nullspace(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(dot(&f, r, v), Gf::ZERO);
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf4();
        let m = vec![vec![Gf(0), Gf(1)], vec![Gf(1), Gf(1)]];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(inv, vec![vec![Gf(1), Gf(1)], vec![Gf(1), Gf(0)]]);
        let id = mat_mul(&f, &m, &inv);
        assert_eq!(id, vec![vec![Gf(1), Gf(0)], vec![Gf(0), Gf(1)]]);
        assert!(inverse(&f, &[vec![Gf(1), Gf(2)], vec![Gf(2), Gf(3)]]).is_none());
    }

    #[test]
    fn solve_affine_consistent_and_not() {
        let f = gf4();
        let a = vec![vec![Gf(1), Gf(1)]];
        let (p, k) = solve_affine(&f, &a, &[Gf(2)], 2).unwrap();
        assert_eq!(dot(&f, &a[0], &p), Gf(2));
        assert_eq!(k.len(), 1);
        let a = vec![vec![Gf(1), Gf(0)], vec![Gf(1), Gf(0)]];
        assert!(solve_affine(&f, &a, &[Gf(1), Gf(2)], 2).is_none());
    }

    #[test]
    fn gray_walk_visits_whole_span() {
        let f = gf4();
        let rows = vec![vec![Gf(1), Gf(2), Gf(0)], vec![Gf(0), Gf(1), Gf(1)]];
        let gens = binary_expansion(&f, &rows);
        let mut seen = std::collections::HashSet::new();
        let _ = gray_walk(&[Gf(0); 3], &gens, |v| {
            seen.insert(v.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len(), 16);
    }
}
