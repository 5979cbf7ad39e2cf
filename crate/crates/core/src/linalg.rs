//! Exact linear algebra over the integers and rationals.
//!
//! Everything here is fraction-free or rational; no floating point. The
//! pieces are deliberately small: Bareiss determinants, GF(2) elimination,
//! an integer diagonalization with recorded row/column transforms (enough to
//! solve linear Diophantine systems and read off a kernel basis), and an LDL^T
//! factorization for positive definite rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Rat = BigRational;

pub(crate) fn rat(x: &BigInt) -> Rat {
    Rat::from_integer(x.clone())
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| dot(row, x)).collect()
}

/// Determinant by the Bareiss fraction-free algorithm (exact divisions only).
pub(crate) fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by Bareiss
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Solves `a x = b` over GF(2) for square invertible `a`; entries are 0/1.
pub(crate) fn solve_gf2(a: &[Vec<u8>], b: &[u8]) -> Option<Vec<u8>> {
    let n = a.len();
    let mut rows: Vec<Vec<u8>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<u8> = row.iter().map(|&x| x & 1).collect();
            r.push(rhs & 1);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| rows[i][col] == 1)?;
        rows.swap(col, pivot);
        for i in 0..n {
            if i != col && rows[i][col] == 1 {
                let (src, dst) = if i < col {
                    let (lo, hi) = rows.split_at_mut(col);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[col], &mut hi[0])
                };
                for j in col..=n {
                    dst[j] ^= src[j];
                }
            }
        }
    }
    Some(rows.iter().map(|r| r[n]).collect())
}

/// Integer diagonalization `u a v = d` with unimodular `u`, `v`.
///
/// `diag` holds the `rank` nonzero diagonal entries. This is enough to solve
/// `a x = rhs` over the integers and to produce a kernel basis; no divisibility
/// normalization of the diagonal is performed.
pub(crate) struct Diagonalization {
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
    pub rank: usize,
    rows: usize,
    cols: usize,
}

pub(crate) fn diagonalize(a: &[Vec<BigInt>]) -> Diagonalization {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        let mut dirty = false;
        for i in t + 1..rows {
            let q = div_to_rem(&m[i][t], &m[t][t]);
            if !q.is_zero() {
                for j in 0..cols {
                    let s = &q * &m[t][j];
                    m[i][j] -= s;
                }
                for j in 0..rows {
                    let s = &q * &u[t][j];
                    u[i][j] -= s;
                }
            }
            dirty |= !m[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = div_to_rem(&m[t][j], &m[t][t]);
            if !q.is_zero() {
                for i in 0..rows {
                    let s = &q * &m[i][t];
                    m[i][j] -= s;
                }
                for i in 0..cols {
                    let s = &q * &v[i][t];
                    v[i][j] -= s;
                }
            }
            dirty |= !m[t][j].is_zero();
        }
        // Any surviving remainder is strictly smaller than the pivot, so the
        // next sweep of this block makes progress; only advance once clean.
        if !dirty {
            t += 1;
        }
    }
    let diag: Vec<BigInt> = (0..t).map(|i| m[i][i].clone()).collect();
    Diagonalization {
        u,
        v,
        diag,
        rank: t,
        rows,
        cols,
    }
}

impl Diagonalization {
    /// An integer solution of `a x = rhs`, if one exists.
    pub fn solve(&self, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
        debug_assert_eq!(rhs.len(), self.rows);
        let s = mat_vec(&self.u, rhs);
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..self.rank {
            let (q, r) = s[i].div_rem(&self.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
        if s[self.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        // x = v y, with y supported on the pivot coordinates.
        Some(
            (0..self.cols)
                .map(|i| (0..self.rank).map(|j| &self.v[i][j] * &y[j]).sum())
                .collect(),
        )
    }

    /// Basis of the integer kernel of `a` (columns of `v` past the rank).
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank..self.cols)
            .map(|j| (0..self.cols).map(|i| self.v[i][j].clone()).collect())
            .collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Quotient `q` with `|x - q p| < |p|` (rounds toward the nearest multiple).
fn div_to_rem(x: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = x.div_rem(p);
    // Shrink the remainder to at most |p|/2 so reductions converge fast.
    let two_r = r.abs() * 2;
    if two_r > p.abs() {
        if (r.sign() == p.sign()) || r.is_zero() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// LDL^T factorization of a symmetric positive definite rational matrix.
pub(crate) struct Ldl {
    /// Unit lower-triangular factor, row major; only entries below the
    /// diagonal are stored meaningfully.
    pub lower: Vec<Vec<Rat>>,
    pub diag: Vec<Rat>,
}

/// Returns `None` when a pivot fails to be strictly positive (matrix not PD).
pub(crate) fn ldl(a: &[Vec<Rat>]) -> Option<Ldl> {
    let n = a.len();
    let mut lower = vec![vec![Rat::zero(); n]; n];
    let mut diag = vec![Rat::zero(); n];
    for j in 0..n {
        let mut d = a[j][j].clone();
        for m in 0..j {
            d -= &lower[j][m] * &lower[j][m] * &diag[m];
        }
        if d <= Rat::zero() {
            return None;
        }
        for i in j + 1..n {
            let mut x = a[i][j].clone();
            for m in 0..j {
                x -= &lower[i][m] * &lower[j][m] * &diag[m];
            }
            lower[i][j] = x / &d;
        }
        lower[j][j] = Rat::one();
        diag[j] = d;
    }
    Some(Ldl { lower, diag })
}

impl Ldl {
    /// Solves `a x = b` using the stored factorization.
    pub fn solve(&self, b: &[Rat]) -> Vec<Rat> {
        let n = self.diag.len();
        debug_assert_eq!(b.len(), n);
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let s = &self.lower[i][j] * &z[j];
                z[i] -= s;
            }
        }
        for i in 0..n {
            z[i] /= &self.diag[i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let s = &self.lower[j][i] * &z[j];
                z[i] -= s;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        assert_eq!(determinant(&m(&[&[1]])), BigInt::from(1));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::from(0));
    }

    #[test]
    fn gf2_solves_singular_free_systems() {
        let a = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(solve_gf2(&a, &[1, 0]), Some(vec![1, 0]));
        let h = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(solve_gf2(&h, &[1, 1]), Some(vec![1, 1]));
        let singular = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(solve_gf2(&singular, &[1, 0]), None);
    }

    #[test]
    fn diagonalization_solves_and_spans_kernel() {
        // x + 2y + 3z = 6 has solutions; kernel has rank 2.
        let a = m(&[&[1, 2, 3]]);
        let d = diagonalize(&a);
        assert_eq!(d.rank, 1);
        let sol = d.solve(&[BigInt::from(6)]).unwrap();
        assert_eq!(dot(&a[0], &sol), BigInt::from(6));
        let kernel = d.kernel_basis();
        assert_eq!(kernel.len(), 2);
        for k in &kernel {
            assert_eq!(dot(&a[0], k), BigInt::zero());
        }
        // 2x = 3 has no integer solution.
        let even = m(&[&[2]]);
        assert!(diagonalize(&even).solve(&[BigInt::from(3)]).is_none());
    }

    #[test]
    fn diagonalization_handles_dependent_rows() {
        let a = m(&[&[2, 4], &[1, 2]]);
        let d = diagonalize(&a);
        assert_eq!(d.rank, 1);
        assert!(d.solve(&[BigInt::from(2), BigInt::from(1)]).is_some());
        assert!(d.solve(&[BigInt::from(2), BigInt::from(0)]).is_none());
    }

    #[test]
    fn ldl_roundtrips_solutions() {
        let two = || Rat::from_integer(BigInt::from(2));
        let one = || Rat::one();
        let a = vec![vec![two(), one()], vec![one(), two()]];
        let f = ldl(&a).unwrap();
        let b = vec![Rat::from_integer(BigInt::from(5)), two()];
        let x = f.solve(&b);
        for i in 0..2 {
            let lhs: Rat = (0..2).map(|j| &a[i][j] * &x[j]).sum();
            assert_eq!(lhs, b[i]);
        }
        let indefinite = vec![vec![one(), two()], vec![two(), one()]];
        assert!(ldl(&indefinite).is_none());
    }
}
