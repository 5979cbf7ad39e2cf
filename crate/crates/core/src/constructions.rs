//! Upper bounds from explicit surface constructions.
//!
//! The common calculus: a configuration of `m` closed surfaces meeting in
//! `P` positive transverse points resolves to a single smooth surface of
//! genus `Σgᵢ + P − (m − 1)`, provided the configuration is connected (the
//! first `m − 1` resolved points join the pieces; each further point adds a
//! handle).  Everything in this module is that formula applied to a
//! particular configuration, so plans are evaluated symbolically; nothing
//! here builds an actual embedding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// One component type of a configuration: `multiplicity` parallel copies of
/// a genus-`genus` surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanComponent {
    pub genus: BigInt,
    pub multiplicity: BigInt,
}

/// A configuration of surfaces with prescribed pairwise intersection counts.
///
/// `intersections[i][j]` (for `i ≠ j`) counts the positive transverse points
/// between one copy from component `i` and one copy from component `j`;
/// `intersections[i][i]` counts the points between two distinct copies
/// within component `i`.  Copies never meet themselves — a diagonal entry is
/// a per-pair count, not a self-intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionPlan {
    components: Vec<PlanComponent>,
    intersections: Vec<Vec<BigInt>>,
}

impl ConstructionPlan {
    pub fn new(
        components: Vec<PlanComponent>,
        intersections: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::precondition("plan has no components"));
        }
        let n = components.len();
        for component in &components {
            if component.genus.is_negative() {
                return Err(Error::precondition("component genus must be nonnegative"));
            }
            if component.multiplicity < BigInt::one() {
                return Err(Error::precondition("component multiplicity must be positive"));
            }
        }
        if intersections.len() != n || intersections.iter().any(|row| row.len() != n) {
            return Err(Error::precondition(format!(
                "intersection matrix must be {n}×{n}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if intersections[i][j].is_negative() {
                    return Err(Error::precondition(
                        "intersection counts must be nonnegative",
                    ));
                }
                if intersections[i][j] != intersections[j][i] {
                    return Err(Error::precondition("intersection matrix must be symmetric"));
                }
            }
        }
        Ok(ConstructionPlan {
            components,
            intersections,
        })
    }

    /// Convenience constructor from machine integers: `(genus, multiplicity)`
    /// pairs plus the intersection matrix.
    pub fn from_i64(components: &[(i64, i64)], intersections: &[Vec<i64>]) -> Result<Self> {
        let components = components
            .iter()
            .map(|&(genus, multiplicity)| PlanComponent {
                genus: BigInt::from(genus),
                multiplicity: BigInt::from(multiplicity),
            })
            .collect();
        let intersections = intersections
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        ConstructionPlan::new(components, intersections)
    }

    pub fn components(&self) -> &[PlanComponent] {
        &self.components
    }

    /// Total number of expanded copies.
    pub fn copies(&self) -> BigInt {
        self.components
            .iter()
            .map(|c| c.multiplicity.clone())
            .sum()
    }

    /// Total number of intersection points after expanding multiplicities:
    /// `Σ_{i<j} mᵢmⱼ·Iᵢⱼ + Σᵢ C(mᵢ,2)·Iᵢᵢ`.
    pub fn points(&self) -> BigInt {
        let n = self.components.len();
        let mut total = BigInt::zero();
        for i in 0..n {
            let mi = &self.components[i].multiplicity;
            total += mi * (mi - BigInt::one()) / BigInt::from(2) * &self.intersections[i][i];
            for j in (i + 1)..n {
                total += mi * &self.components[j].multiplicity * &self.intersections[i][j];
            }
        }
        total
    }

    /// Whether the expanded copies form a connected configuration.
    ///
    /// Copies across components `i ≠ j` are all mutually adjacent once
    /// `Iᵢⱼ > 0`, so connectivity of the expanded graph reduces to
    /// connectivity of the component graph — except that a lone component
    /// with several copies also needs `Iᵢᵢ > 0` to tie its copies together.
    pub fn is_connected(&self) -> bool {
        let n = self.components.len();
        if n == 1 {
            return self.components[0].multiplicity.is_one()
                || self.intersections[0][0] > BigInt::zero();
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && i != j && self.intersections[i][j] > BigInt::zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Genus of the surface obtained by resolving every intersection point of a
/// connected plan: `Σ(copy genera) + P − (m − 1)`.
pub fn resolve_genus(plan: &ConstructionPlan) -> Result<BigInt> {
    if !plan.is_connected() {
        return Err(Error::precondition(
            "plan is disconnected; resolution would not yield a single surface",
        ));
    }
    let genus_sum: BigInt = plan
        .components
        .iter()
        .map(|c| &c.genus * &c.multiplicity)
        .sum();
    let genus = genus_sum + plan.points() - (plan.copies() - BigInt::one());
    debug_assert!(!genus.is_negative(), "connected plans need P ≥ m − 1");
    Ok(genus)
}

/// Genus of the standard representative of `d·ξ` built from `d` parallel
/// copies of a genus-`g1` surface of square `ξ²`:
///
/// ```text
/// d·g1 + ξ²·C(d,2) − (d − 1)
/// ```
///
/// `d = 1` is allowed and returns `g1` (the trivial one-copy plan).
pub fn multiple_class_upper_bound(xi_sq: &BigInt, g1: &BigInt, d: &BigInt) -> Result<BigInt> {
    if xi_sq <= &BigInt::zero() {
        return Err(Error::precondition("xi_sq must be positive"));
    }
    if g1.is_negative() {
        return Err(Error::precondition("g1 must be nonnegative"));
    }
    if d < &BigInt::one() {
        return Err(Error::precondition("d must be at least 1"));
    }
    let choose2 = d * (d - BigInt::one()) / BigInt::from(2);
    Ok(d * g1 + xi_sq * choose2 - (d - BigInt::one()))
}

/// Genus of the explicit representative of a reduced class
/// `p·h − Σqᵢ·eᵢ` built from lines and conic-like pieces:
///
/// ```text
/// (p² − Σqᵢ² − 3p + Σqᵢ)/2 + 1
/// ```
///
/// Returns `None` when the construction does not apply: more than nine
/// `qᵢ`, a nonpositive `qᵢ`, `Σ_{qᵢ>2} qᵢ > p`, nonpositive square, or a
/// negative value (the formula is only claimed as a genus, hence `≥ 0`).
pub fn reduced_class_construction(p: &BigInt, qs: &[BigInt]) -> Option<BigInt> {
    if qs.len() > 9 || p < &BigInt::one() {
        return None;
    }
    if qs.iter().any(|q| q < &BigInt::one()) {
        return None;
    }
    let big_qs_sum: BigInt = qs.iter().filter(|q| *q > &BigInt::from(2)).sum();
    if &big_qs_sum > p {
        return None;
    }
    let q_sum: BigInt = qs.iter().sum();
    let q_sq_sum: BigInt = qs.iter().map(|q| q * q).sum();
    let xi_sq = p * p - &q_sq_sum;
    if xi_sq <= BigInt::zero() {
        return None;
    }
    let numerator = &xi_sq - BigInt::from(3) * p + &q_sum;
    debug_assert!(numerator.is_even());
    let value = numerator / BigInt::from(2) + BigInt::one();
    if value.is_negative() {
        return None;
    }
    Some(value)
}

/// Transfer a strict bound on the `d`-fold multiple back to the primitive
/// class: from `g(dξ) > (dξ² − Δ)·d/2` one gets `g(ξ) > (ξ² − Δ)/2`.
///
/// Returns the strict witness value `(ξ² − Δ)/2` (floored when the
/// difference is odd, which only weakens the strict bound) together with the
/// strictness flag; the caller converts `g > v` to `g ≥ v + 1` and clamps.
pub fn primitive_bound_transfer(
    xi_sq: &BigInt,
    d: &BigInt,
    delta: &BigInt,
) -> Result<(BigInt, bool)> {
    if d <= &BigInt::one() {
        return Err(Error::precondition("d must exceed 1"));
    }
    Ok(((xi_sq - delta).div_floor(&BigInt::from(2)), true))
}
