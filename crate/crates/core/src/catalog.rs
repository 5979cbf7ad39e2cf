//! Closed-form bounds and exact values for the named families, plus the
//! finiteness enumeration of reduced classes of small genus.
//!
//! A class in `diag(1, −1, …, −1)` written as `(p, q₁, …, qₙ)` with `p > 0`
//! and `q₁ ≥ q₂ ≥ … ≥ 0` is *reduced* when at most nine `qᵢ` are nonzero and
//! `p ≥ q₁ + q₂ + q₃`.  For reduced classes the general engine's bound has
//! the closed form `(dξ² − 3p + Σqᵢ)·d/2 + 1`, and only finitely many
//! reduced classes fall below any given genus — this module enumerates them
//! with auditable cutoffs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bounds::{BoundReport, Hypothesis, Method};
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, Lattice};

/// A class `(p, q₁, …, qₙ)` of the blown-up form `diag(1, −1, …, −1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    p: BigInt,
    qs: Vec<BigInt>,
}

impl ReducedForm {
    /// `p > 0`, `qs` nonincreasing and nonnegative.  The name is aspirational:
    /// the constructor validates the shape, `is_reduced` checks the defining
    /// inequality.
    pub fn new(p: BigInt, qs: Vec<BigInt>) -> Result<Self> {
        if p < BigInt::one() {
            return Err(Error::precondition("p must be positive"));
        }
        if qs.iter().any(|q| q.is_negative()) {
            return Err(Error::precondition("q entries must be nonnegative"));
        }
        if qs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::precondition("q entries must be nonincreasing"));
        }
        Ok(ReducedForm { p, qs })
    }

    pub fn from_i64(p: i64, qs: &[i64]) -> Result<Self> {
        ReducedForm::new(
            BigInt::from(p),
            qs.iter().map(|&q| BigInt::from(q)).collect(),
        )
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn qs(&self) -> &[BigInt] {
        &self.qs
    }

    /// Rank of the form minus one.
    pub fn n(&self) -> usize {
        self.qs.len()
    }

    /// Number of nonzero `qᵢ`.
    pub fn m(&self) -> usize {
        self.qs.iter().filter(|q| !q.is_zero()).count()
    }

    pub fn xi_sq(&self) -> BigInt {
        &self.p * &self.p - self.qs.iter().map(|q| q * q).sum::<BigInt>()
    }

    /// `3p − Σqᵢ`, the pairing of the class with the standard characteristic
    /// vector `(3, 1, …, 1)`.
    pub fn delta(&self) -> BigInt {
        BigInt::from(3) * &self.p - self.qs.iter().sum::<BigInt>()
    }

    pub fn class_vector(&self) -> ClassVector {
        let mut coeffs = Vec::with_capacity(self.qs.len() + 1);
        coeffs.push(self.p.clone());
        coeffs.extend(self.qs.iter().cloned());
        ClassVector::new(coeffs)
    }

    pub fn lattice(&self) -> Lattice {
        let mut diag = vec![1i64];
        diag.extend(std::iter::repeat(-1).take(self.qs.len()));
        Lattice::diagonal(&diag).expect("diagonal ±1 form is unimodular")
    }

    /// The defining inequality: `m ≤ 9` and `p ≥ q₁ + q₂ + q₃` (absent
    /// entries count as zero).
    pub fn is_reduced(&self) -> bool {
        if self.m() > 9 {
            return false;
        }
        let head: BigInt = self.qs.iter().take(3).sum();
        self.p >= head
    }

    /// The family `(p, p−1, 1)` of exceptional sphere classes — the only
    /// reduced classes whose degree-one bound collapses to zero.
    pub fn is_exceptional(&self) -> bool {
        self.m() == 2
            && self.qs[0] == &self.p - BigInt::one()
            && self.qs[1] == BigInt::one()
    }
}

/// Families with a closed-form lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `diag(1)`, class `(d)`.
    Cp2 { d: BigInt },
    /// The hyperbolic form, class `(p, q)`.
    H { p: BigInt, q: BigInt },
    /// `diag(1, −1)`, class `(p, q)`.
    E { p: BigInt, q: BigInt },
    /// A reduced class taken `d` times.
    Reduced { d: BigInt, form: ReducedForm },
}

/// The closed-form lower bound for a family instance.
///
/// * `Cp2`: `g ≥ (|d|−1)(|d|−2)/2`, non-strict.
/// * `H`: `g ≥ (|p|−1)(|q|−1)` for `pq > 0`, non-strict.
/// * `E`: `g > (p²−q²−3|p|+|q|)/2` for `|p| > |q|`, reported as the strict
///   successor.
/// * `Reduced`: `g > (dξ²−3p+Σqᵢ)·d/2`, reported as the strict successor;
///   the value is zero exactly for the exceptional family at `d = 1`.
pub fn closed_form_lb(family: &Family) -> Result<BoundReport> {
    let (value, strict) = match family {
        Family::Cp2 { d } => {
            if d.is_zero() {
                return Err(Error::precondition("degree must be nonzero"));
            }
            let a = d.abs();
            (
                (&a - BigInt::one()) * (&a - BigInt::from(2)) / BigInt::from(2),
                false,
            )
        }
        Family::H { p, q } => {
            if (p * q) <= BigInt::zero() {
                return Err(Error::precondition(
                    "H bound needs positive square, i.e. pq > 0",
                ));
            }
            ((p.abs() - BigInt::one()) * (q.abs() - BigInt::one()), false)
        }
        Family::E { p, q } => {
            if p * p - q * q <= BigInt::zero() {
                return Err(Error::precondition(
                    "E bound needs positive square, i.e. |p| > |q|",
                ));
            }
            let numerator = p * p - q * q - BigInt::from(3) * p.abs() + q.abs();
            debug_assert!(numerator.is_even());
            (numerator / BigInt::from(2) + BigInt::one(), true)
        }
        Family::Reduced { d, form } => {
            if d < &BigInt::one() {
                return Err(Error::precondition("d must be at least 1"));
            }
            if !form.is_reduced() {
                return Err(Error::precondition("class is not reduced"));
            }
            let m = form.m();
            if !(2..=9).contains(&m) {
                return Err(Error::precondition(format!(
                    "reduced bound needs 2 ≤ m ≤ 9, got m = {m}"
                )));
            }
            let xi_sq = form.xi_sq();
            if xi_sq <= BigInt::zero() {
                return Err(Error::precondition("class must have positive square"));
            }
            let numerator = (d * &xi_sq - form.delta()) * d;
            debug_assert!(numerator.is_even());
            (numerator / BigInt::from(2) + BigInt::one(), true)
        }
    };
    debug_assert!(!value.is_negative(), "family bounds never go below zero");
    Ok(BoundReport {
        bound: value.clone().max(BigInt::zero()),
        unclamped: value,
        strict,
        method: Method::Catalog,
        witness: None,
        exact: false,
        hypotheses: Vec::new(),
    })
}

/// Families whose minimal genus is known exactly — under geometric
/// hypotheses the Gram matrix cannot certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactFamily {
    /// Degree-`d` classes of the genuine projective plane.
    Cp2 { d: BigInt },
    /// `(p, q)` in the hyperbolic form, basis represented by spheres.
    HSpheres { p: BigInt, q: BigInt },
    /// `(p, q)` in `diag(1, −1)`, basis represented by disjoint spheres.
    ESpheres { p: BigInt, q: BigInt },
    /// A reduced class, `d` times, in a genuine rational surface.
    RationalSurface { d: BigInt, form: ReducedForm },
}

/// Geometric hypotheses the caller asserts; `exact_genus` withholds any
/// value whose hypothesis is missing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Hypotheses {
    pub sphere_representatives: bool,
    pub rational_surface: bool,
}

/// Exact minimal-genus values for the catalog families.  `None` when the
/// required hypothesis is not asserted or the parameters fall outside the
/// family; never an error.  The same rational homology type can have a
/// strictly larger minimal genus (multiple classes in a fake projective
/// plane realize `(d+1)(d+2)/2`), which is why the flags exist.
pub fn exact_genus(family: &ExactFamily, hypotheses: &Hypotheses) -> Option<BoundReport> {
    let (value, needed) = match family {
        ExactFamily::Cp2 { d } => {
            if !hypotheses.rational_surface || d.is_zero() {
                return None;
            }
            let a = d.abs();
            (
                (&a - BigInt::one()) * (&a - BigInt::from(2)) / BigInt::from(2),
                Hypothesis::RationalSurface,
            )
        }
        ExactFamily::HSpheres { p, q } => {
            if !hypotheses.sphere_representatives {
                return None;
            }
            let value = if (p * q).is_zero() {
                BigInt::zero()
            } else if p * q > BigInt::zero() {
                (p.abs() - BigInt::one()) * (q.abs() - BigInt::one())
            } else {
                // ξ² < 0: outside the positive-square story.
                return None;
            };
            (value, Hypothesis::SphereRepresentatives)
        }
        ExactFamily::ESpheres { p, q } => {
            if !hypotheses.sphere_representatives {
                return None;
            }
            let (pa, qa) = (p.abs(), q.abs());
            let value = match pa.cmp(&qa) {
                std::cmp::Ordering::Greater => {
                    (p * p - q * q - BigInt::from(3) * &pa + &qa) / BigInt::from(2)
                        + BigInt::one()
                }
                std::cmp::Ordering::Less => {
                    (q * q - p * p - BigInt::from(3) * &qa + &pa) / BigInt::from(2)
                        + BigInt::one()
                }
                std::cmp::Ordering::Equal => BigInt::zero(),
            };
            (value, Hypothesis::SphereRepresentatives)
        }
        ExactFamily::RationalSurface { d, form } => {
            if !hypotheses.rational_surface
                || d < &BigInt::one()
                || form.n() > 9
                || !form.is_reduced()
                || form.xi_sq() <= BigInt::zero()
            {
                return None;
            }
            let numerator = (d * form.xi_sq() - form.delta()) * d;
            (numerator / BigInt::from(2) + BigInt::one(), Hypothesis::RationalSurface)
        }
    };
    debug_assert!(!value.is_negative());
    Some(BoundReport {
        bound: value.clone().max(BigInt::zero()),
        unclamped: value,
        strict: false,
        method: Method::Catalog,
        witness: None,
        exact: true,
        hypotheses: vec![needed],
    })
}

/// Result of the finiteness enumeration: every reduced class (excluding the
/// exceptional family) whose degree-one bound allows genus ≤ `g`, plus the
/// search-region cutoffs actually used, for auditing completeness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedEnumeration {
    pub classes: Vec<ReducedForm>,
    pub cutoffs: Vec<String>,
}

/// Enumerate the reduced classes `(p, q₁, …, qₙ)` with `ξ² > 0`,
/// `2 ≤ m ≤ n`, whose bound value `(ξ² − 3p + Σqᵢ)/2 + 1` is at most `g`,
/// excluding the exceptional family `(p, p−1, 1)`.  Forms come back padded
/// to `n` entries and sorted by `(p, qs)`.
///
/// Writing `F = ξ² − 3p + Σqᵢ`, the condition is `F ≤ B := 2g − 2`, and `F`
/// decomposes into independently nonnegative, monotone parts:
///
/// * `m = 2`, with `w = p − q₁ − q₂ ≥ 0`:
///   `F = 2(q₁−1)(q₂−1) − 2 + w(w + 2(q₁+q₂) − 3)`.
/// * `m ≥ 3`, with `a = q₁−q₃`, `b = q₂−q₃`, `w = p − (q₁+q₂+q₃) ≥ 0`:
///   `F = G + 2(a+b)(2q₃−1) + 2ab + w(2(q₁+q₂+q₃) + w − 3)` where
///   `G = 6(q₃²−q₃) − Σ_{i≥4}(qᵢ²−qᵢ) ≥ (9−m)(q₃²−q₃) ≥ 0`.
///
/// Each loop breaks as soon as its own part exceeds the remaining budget;
/// the recorded cutoffs state the resulting ranges.
pub fn list_reduced_classes_with_genus_le(n: usize, g: u32) -> Result<ReducedEnumeration> {
    if !(2..=9).contains(&n) {
        return Err(Error::precondition(format!(
            "n must lie in [2, 9], got {n}"
        )));
    }
    let b = 2 * i64::from(g) - 2; // F ≤ B
    let mut cutoffs = vec![format!(
        "budget: value ≤ {g} ⟺ F = ξ² − 3p + Σq ≤ B = 2g − 2 = {b}"
    )];
    let mut found: Vec<(BigInt, Vec<BigInt>)> = Vec::new();

    let consider = |p: i64, qs: &[i64], found: &mut Vec<(BigInt, Vec<BigInt>)>| {
        // Authoritative filter, independent of the loop algebra.
        let xi_sq = p * p - qs.iter().map(|q| q * q).sum::<i64>();
        if xi_sq <= 0 {
            return;
        }
        let f = xi_sq - 3 * p + qs.iter().sum::<i64>();
        if f > b {
            return;
        }
        let m = qs.iter().filter(|&&q| q != 0).count();
        if m == 2 && qs[0] == p - 1 && qs[1] == 1 {
            return; // exceptional family
        }
        let head: i64 = qs.iter().take(3).sum();
        debug_assert!(p >= head, "loops only produce reduced classes");
        let mut padded: Vec<BigInt> = qs.iter().map(|&q| BigInt::from(q)).collect();
        padded.resize(n, BigInt::zero());
        found.push((BigInt::from(p), padded));
    };

    // m = 2.  Base cost 2(q₁−1)(q₂−1) − 2 at w = 0, growing in every
    // parameter — except along q₂ = 1, where the base is flat at −2 and only
    // the exceptional w = 0 classes stay under budget, so q₁ needs its own
    // cap from the first non-exceptional excess.
    let q1_cap_at_q2_one = ((b + 2) / 2).max(0);
    cutoffs.push(format!(
        "m=2, q2=1: non-exceptional classes have w ≥ 1 and F ≥ 2q1 − 2, so q1 ≤ (B+2)/2 = {q1_cap_at_q2_one}"
    ));
    cutoffs.push(format!(
        "m=2, q2≥2: 2(q2−1)² − 2 ≤ B caps q2; 2(q1−1)(q2−1) − 2 ≤ B caps q1 per q2 (B = {b})"
    ));
    let mut q2 = 1i64;
    loop {
        if q2 >= 2 && 2 * (q2 - 1) * (q2 - 1) - 2 > b {
            break;
        }
        let mut q1 = q2;
        loop {
            if q2 == 1 && q1 > q1_cap_at_q2_one {
                break;
            }
            let base = 2 * (q1 - 1) * (q2 - 1) - 2;
            if base > b {
                break;
            }
            let mut w = 0i64;
            loop {
                let f = base + w * (w + 2 * (q1 + q2) - 3);
                if f > b {
                    break;
                }
                consider(q1 + q2 + w, &[q1, q2], &mut found);
                w += 1;
            }
            q1 += 1;
        }
        q2 += 1;
        if q2 > b + 3 {
            break; // unreachable safety stop; the break above fires first
        }
    }

    // m ≥ 3.
    for m in 3..=n {
        // q₃ range: for m ≤ 8 the tail deficit (9−m)(q₃²−q₃) ≤ F already
        // caps q₃; for m = 9 the tail can cancel G entirely, but ξ² > 0
        // forces a deviation costing at least 2q₃ − 2.
        let q3_cap = if m <= 8 {
            let mut cap = 1i64;
            while (9 - m as i64) * ((cap + 1) * (cap + 1) - (cap + 1)) <= b {
                cap += 1;
            }
            cutoffs.push(format!(
                "m={m}: (9−m)(q3²−q3) ≤ B gives q3 ≤ {cap}"
            ));
            cap
        } else {
            let cap = (b + 2) / 2;
            cutoffs.push(format!(
                "m=9: any class with ξ² > 0 deviates from (3q,(q⁹)) and pays ≥ 2q3 − 2, so q3 ≤ (B+2)/2 = {cap}"
            ));
            cap
        };
        for q3 in 1..=q3_cap {
            let g0 = 6 * (q3 * q3 - q3);
            for tail in nonincreasing_tails(m - 3, q3) {
                let g_val = g0 - tail.iter().map(|&q| q * q - q).sum::<i64>();
                debug_assert!(g_val >= (9 - m as i64) * (q3 * q3 - q3));
                if g_val > b {
                    continue;
                }
                let mut bb = 0i64;
                loop {
                    if g_val + 4 * bb * (2 * q3 - 1) + 2 * bb * bb > b {
                        break;
                    }
                    let mut a = bb;
                    loop {
                        let ab_part = 2 * (a + bb) * (2 * q3 - 1) + 2 * a * bb;
                        if g_val + ab_part > b {
                            break;
                        }
                        let s3 = (a + q3) + (bb + q3) + q3;
                        let mut w = 0i64;
                        loop {
                            let f = g_val + ab_part + w * (2 * s3 + w - 3);
                            if f > b {
                                break;
                            }
                            let mut qs = vec![a + q3, bb + q3, q3];
                            qs.extend_from_slice(&tail);
                            consider(s3 + w, &qs, &mut found);
                            w += 1;
                        }
                        a += 1;
                    }
                    bb += 1;
                }
            }
        }
    }

    found.sort();
    found.dedup();
    let classes = found
        .into_iter()
        .map(|(p, qs)| ReducedForm::new(p, qs).expect("enumerated shapes are valid"))
        .collect();
    Ok(ReducedEnumeration { classes, cutoffs })
}

/// All nonincreasing sequences of the given length with entries in
/// `[1, max]`; the empty length yields one empty sequence.
fn nonincreasing_tails(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn go(len: usize, max: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for q in (1..=max).rev() {
            current.push(q);
            go(len, q, current, out);
            current.pop();
        }
    }
    go(len, max, &mut current, &mut out);
    out
}
