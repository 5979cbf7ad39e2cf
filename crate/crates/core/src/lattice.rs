//! Unimodular integer lattices and their characteristic vectors.
//!
//! A [`Lattice`] wraps a symmetric unimodular Gram matrix — the intersection
//! form of a smooth closed oriented four-manifold on the free part of its
//! second cohomology. Classes are integer coordinate vectors in the chosen
//! basis. The module computes signatures by exact congruence diagonalization
//! and locates the characteristic coset `w + 2Λ` by solving the defining
//! parity conditions over GF(2).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;

/// A class in the lattice, written in the fixed basis of the Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector(Vec<BigInt>);

impl ClassVector {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        ClassVector(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ClassVector(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Scalar multiple `s · x`.
    pub fn scaled(&self, s: &BigInt) -> Self {
        ClassVector(self.0.iter().map(|c| c * s).collect())
    }

    /// Coordinate-wise sum; both vectors must have equal length.
    pub fn add(&self, other: &ClassVector) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ClassVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn negated(&self) -> Self {
        ClassVector(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Vec<BigInt>> for ClassVector {
    fn from(coeffs: Vec<BigInt>) -> Self {
        ClassVector(coeffs)
    }
}

/// Signature data of a nondegenerate form: `sigma = b_plus - b_minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub sigma: i64,
}

/// Symmetric unimodular bilinear form on `Z^rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<BigInt>>,
    rank: usize,
}

impl Lattice {
    /// Validates squareness, symmetry and `det = ±1`.
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 || gram.iter().any(|row| row.len() != rank) {
            return Err(Error::NotSquare);
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let det = linalg::determinant(&gram);
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Lattice { gram, rank })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Lattice::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Diagonal form `diag(d_1, …, d_n)`; each `d_i` must be `±1` for the
    /// result to pass the unimodularity check.
    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
            .collect();
        Lattice::from_i64(&rows)
    }

    /// The rank-two hyperbolic form `[[0,1],[1,0]]`.
    pub fn hyperbolic() -> Self {
        Lattice::from_i64(&[vec![0, 1], vec![1, 0]]).expect("hyperbolic form is unimodular")
    }

    /// Block sum of two forms.
    pub fn direct_sum(&self, other: &Lattice) -> Self {
        let n = self.rank + other.rank;
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                gram[self.rank + i][self.rank + j] = other.gram[i][j].clone();
            }
        }
        Lattice { gram, rank: n }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    fn check_len(&self, x: &ClassVector) -> Result<()> {
        if x.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Bilinear pairing `⟨x, y⟩ = x^T G y`.
    pub fn pairing(&self, x: &ClassVector, y: &ClassVector) -> Result<BigInt> {
        self.check_len(x)?;
        self.check_len(y)?;
        let gy = linalg::mat_vec(&self.gram, y.coeffs());
        Ok(linalg::dot(x.coeffs(), &gy))
    }

    /// Self-intersection `⟨x, x⟩`.
    pub fn square(&self, x: &ClassVector) -> Result<BigInt> {
        self.pairing(x, x)
    }

    /// `G x` as a plain vector — the dual coordinates of `x`.
    pub(crate) fn gram_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        linalg::mat_vec(&self.gram, x)
    }

    /// Signature by congruence diagonalization over the rationals.
    ///
    /// Zero diagonal pivots are repaired by mixing in a row with a nonzero
    /// off-diagonal entry (always present: the form is nondegenerate).
    pub fn signature(&self) -> Signature {
        let n = self.rank;
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(linalg::rat).collect())
            .collect();
        let mut b_plus = 0usize;
        let mut b_minus = 0usize;
        for i in 0..n {
            if a[i][i].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                    swap_symmetric(&mut a, i, j);
                } else if let Some(l) = (i + 1..n).find(|&l| !a[i][l].is_zero()) {
                    // Entire remaining diagonal vanishes; e_i += e_l gives
                    // ⟨e_i, e_i⟩ = 2⟨e_i, e_l⟩ ≠ 0.
                    add_row_col(&mut a, i, l);
                } else {
                    unreachable!("unimodular form cannot have a null vector orthogonal to the rest");
                }
            }
            let pivot = a[i][i].clone();
            if pivot.is_positive() {
                b_plus += 1;
            } else {
                b_minus += 1;
            }
            for j in i + 1..n {
                if a[j][i].is_zero() {
                    continue;
                }
                let f = &a[j][i] / &pivot;
                for l in i..n {
                    let s = &f * &a[i][l];
                    a[j][l] -= s;
                }
                for l in i..n {
                    let s = &f * &a[l][i];
                    a[l][j] -= s;
                }
            }
        }
        debug_assert_eq!(b_plus + b_minus, n);
        Signature {
            b_plus,
            b_minus,
            sigma: b_plus as i64 - b_minus as i64,
        }
    }

    /// Whether `⟨c, e_i⟩ ≡ ⟨e_i, e_i⟩ (mod 2)` for every basis vector —
    /// equivalently for every class, by bilinearity.
    pub fn is_characteristic(&self, c: &ClassVector) -> Result<bool> {
        self.check_len(c)?;
        let gc = self.gram_apply(c.coeffs());
        Ok((0..self.rank).all(|i| ((&gc[i] - &self.gram[i][i]) % 2u8).is_zero()))
    }

    /// A characteristic vector with coordinates in `{0, 1}`.
    ///
    /// Reduces the defining congruences mod 2; the Gram matrix is invertible
    /// over GF(2) because the form is unimodular, so the solution is unique
    /// in `{0,1}^rank` and every characteristic vector is `w + 2λ`.
    pub fn characteristic_basepoint(&self) -> ClassVector {
        let a: Vec<Vec<u8>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| parity(x)).collect())
            .collect();
        let b: Vec<u8> = (0..self.rank).map(|i| parity(&self.gram[i][i])).collect();
        let w = linalg::solve_gf2(&a, &b)
            .expect("gram matrix of a unimodular form is invertible mod 2");
        ClassVector(w.into_iter().map(BigInt::from).collect())
    }

    /// Excess of `⟨c, c⟩` over the square of the projection of `c` onto `s`:
    /// `⟨c,c⟩ − ⟨c,s⟩² / ⟨s,s⟩`, an exact rational.
    pub fn orthogonal_defect(&self, c: &ClassVector, s: &ClassVector) -> Result<BigRational> {
        let s_sq = self.square(s)?;
        if s_sq.is_zero() {
            return Err(Error::ZeroSquare);
        }
        let c_sq = self.square(c)?;
        let cs = self.pairing(c, s)?;
        Ok(linalg::rat(&c_sq) - linalg::rat(&(&cs * &cs)) / linalg::rat(&s_sq))
    }
}

fn parity(x: &BigInt) -> u8 {
    if x.is_odd() {
        1
    } else {
        0
    }
}

fn swap_symmetric(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_row_col(a: &mut Vec<Vec<BigRational>>, i: usize, l: usize) {
    let n = a.len();
    for col in 0..n {
        let s = a[l][col].clone();
        a[i][col] += s;
    }
    for row in 0..n {
        let s = a[row][l].clone();
        a[row][i] += s;
    }
}

/// Largest `d > 0` with `x = d·ξ` for integral `ξ`, together with that `ξ`.
pub fn divisibility(x: &ClassVector) -> Result<(BigInt, ClassVector)> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut d = BigInt::zero();
    for c in x.coeffs() {
        d = d.gcd(c);
    }
    let primitive = ClassVector(x.coeffs().iter().map(|c| c / &d).collect());
    Ok((d, primitive))
}
