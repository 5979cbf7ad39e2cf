//! Genus lower bounds: the adjunction bound, the characteristic-number set
//! with the divisible-class bound, and the moduli-dimension formula.
//!
//! Two inequality shapes appear.  The adjunction route gives a non-strict
//! `g ≥ (⟨S,S⟩ + 2 − m)/2` directly; the divisible-class route gives a strict
//! `g > k₀d/2`, which integrality converts to `g ≥ k₀d/2 + 1`.  A
//! [`BoundReport`] keeps track of which conversion produced its value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{divisibility, ClassVector, Lattice};
use crate::linalg::{rat, Rat};
use crate::search::{min_abs_pairing, CharWitness, ConstraintSystem, SearchBudget};

/// Which argument produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Direct optimization of the adjunction inequality.
    Adjunction,
    /// The characteristic-number set of the divisible-class theorem.
    KSet,
    /// A closed-form family formula.
    Catalog,
    /// An explicit surface construction (upper bounds).
    Construction,
    /// Nothing better than `g ≥ 0`.
    Trivial,
}

/// Geometric assumptions a bound is conditional on.  The Gram matrix alone
/// cannot certify these; the caller asserts them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// The basis classes used by a construction are represented by spheres.
    SphereRepresentatives,
    /// The manifold really is the rational surface with this form.
    RationalSurface,
    /// The manifold has trivial first homology.
    H1Zero,
}

/// A genus bound with its provenance.
///
/// `bound` is always clamped to be nonnegative; `unclamped` keeps the raw
/// value for diagnostics.  `strict = true` records that the bound came from a
/// strict inequality, i.e. the statement proved is `genus > bound − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub bound: BigInt,
    pub unclamped: BigInt,
    pub strict: bool,
    pub method: Method,
    pub witness: Option<CharWitness>,
    /// True only when a matching upper bound certifies equality.
    pub exact: bool,
    pub hypotheses: Vec<Hypothesis>,
}

/// The set `K` of characteristic numbers admitting an obstruction, for a
/// divisibility `d` and primitive class `xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSetResult {
    pub d: BigInt,
    pub xi: ClassVector,
    /// Members of `K`, ascending.
    pub k_values: Vec<BigInt>,
    /// `max K` when `K` is nonempty.
    pub k0: Option<BigInt>,
}

/// Parity pattern the characteristic numbers must follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KParity {
    /// `ξ²` even: every `k` is even.
    Even,
    /// `ξ²` odd: `k` has parity opposite to `d`.
    OppositeOfD,
}

/// The adjunction bound for a class of positive square: with
/// `m = min |⟨c,S⟩|` over characteristic `c` with `c² > σ`,
///
/// ```text
/// g ≥ (⟨S,S⟩ + 2 − m)/2
/// ```
///
/// clamped at zero.  The witness is the minimizing characteristic vector.
pub fn adjunction_genus_lb(
    lattice: &Lattice,
    s: &ClassVector,
    budget: &SearchBudget,
) -> Result<BoundReport> {
    let s_sq = lattice.square(s)?;
    let (m, witness) = min_abs_pairing(lattice, s, budget)?;
    let numerator = &s_sq + BigInt::from(2) - &m;
    debug_assert!(numerator.is_even(), "m and S² always share parity");
    let unclamped = numerator / BigInt::from(2);
    Ok(BoundReport {
        bound: unclamped.clone().max(BigInt::zero()),
        unclamped,
        strict: false,
        method: Method::Adjunction,
        witness: Some(witness),
        exact: false,
        hypotheses: Vec::new(),
    })
}

/// All admissible characteristic numbers in `[0, 2dξ²)` together with the
/// parity rule that defines them: every `k` is even when `ξ²` is even, and
/// has parity opposite to `d` when `ξ²` is odd.  Either way `kd` is even.
pub fn characteristic_numbers(xi_sq: &BigInt, d: &BigInt) -> Result<(KParity, Vec<BigInt>)> {
    if xi_sq <= &BigInt::zero() {
        return Err(Error::precondition("xi_sq must be positive"));
    }
    if d < &BigInt::from(1) {
        return Err(Error::precondition("d must be at least 1"));
    }
    let top = BigInt::from(2) * d * xi_sq;
    let (parity, start) = if xi_sq.is_even() {
        (KParity::Even, BigInt::zero())
    } else if d.is_even() {
        (KParity::OppositeOfD, BigInt::from(1))
    } else {
        (KParity::OppositeOfD, BigInt::zero())
    };
    let mut list = Vec::new();
    let mut k = start;
    while k < top {
        debug_assert!((&k * d).is_even());
        list.push(k.clone());
        k += BigInt::from(2);
    }
    Ok((parity, list))
}

/// The characteristic-number set
///
/// ```text
/// K = { k ∈ [0, dξ²] admissible : max{c² : ⟨c,ξ⟩ = k + dξ²} > σ + 4kd }
/// ```
///
/// for a primitive class `xi` of positive square and `d > 1`.
pub fn k_set(
    lattice: &Lattice,
    xi: &ClassVector,
    d: &BigInt,
    budget: &SearchBudget,
) -> Result<KSetResult> {
    let signature = lattice.signature();
    if signature.b_plus != 1 {
        return Err(Error::precondition(format!(
            "k_set needs b_plus = 1, got {}",
            signature.b_plus
        )));
    }
    if d <= &BigInt::from(1) {
        return Err(Error::precondition("d must exceed 1"));
    }
    let xi_sq = lattice.square(xi)?;
    if xi_sq <= BigInt::zero() {
        return Err(Error::precondition("xi must have positive square"));
    }
    let (div, _) = divisibility(xi)?;
    if div != BigInt::from(1) {
        return Err(Error::precondition("xi must be primitive"));
    }

    let system = ConstraintSystem::prepare(lattice, std::slice::from_ref(xi))?;
    let mut nodes = 0u64;
    let d_xi_sq = d * &xi_sq;
    let sigma = system.sigma().clone();
    let (_, candidates) = characteristic_numbers(&xi_sq, d)?;
    let mut k_values = Vec::new();
    for k in candidates {
        if k > d_xi_sq {
            break;
        }
        let t = &k + &d_xi_sq;
        let threshold = &sigma + BigInt::from(4) * &k * d;
        if system.square_exceeds(&[t], &threshold, budget, &mut nodes)? {
            k_values.push(k);
        }
    }
    let k0 = k_values.last().cloned();
    Ok(KSetResult {
        d: d.clone(),
        xi: xi.clone(),
        k_values,
        k0,
    })
}

/// The divisible-class bound `g > k₀d/2`, reported as `g ≥ k₀d/2 + 1` with
/// the strict flag set, and carrying a characteristic witness for `k₀`.
/// When `K` is empty the bound degenerates to the trivial `g ≥ 0`.
pub fn divisible_genus_lb(
    lattice: &Lattice,
    xi: &ClassVector,
    d: &BigInt,
    budget: &SearchBudget,
) -> Result<BoundReport> {
    let result = k_set(lattice, xi, d, budget)?;
    let Some(k0) = result.k0 else {
        return Ok(BoundReport {
            bound: BigInt::zero(),
            unclamped: BigInt::zero(),
            strict: false,
            method: Method::Trivial,
            witness: None,
            exact: false,
            hypotheses: Vec::new(),
        });
    };
    let product = &k0 * d;
    debug_assert!(product.is_even(), "k·d is even for admissible k");
    let bound = product / BigInt::from(2) + BigInt::from(1);

    // Recover a witness for the maximal characteristic number.
    let xi_sq = lattice.square(xi)?;
    let t = &k0 + d * &xi_sq;
    let system = ConstraintSystem::prepare(lattice, std::slice::from_ref(xi))?;
    let mut nodes = 0u64;
    let (_, witness) = system
        .maximize(&[t], budget, &mut nodes)?
        .expect("k0 was certified feasible");
    Ok(BoundReport {
        bound: bound.clone(),
        unclamped: bound,
        strict: true,
        method: Method::KSet,
        witness: Some(witness),
        exact: false,
        hypotheses: Vec::new(),
    })
}

/// Formal dimension of the cylindrical-end moduli space attached to a
/// characteristic `c₁`, a primitive class `xi` of positive square, and a
/// divisibility `d > 1`:
///
/// ```text
/// (⟨c₁,c₁⟩ − σ)/4 + ((k − dξ²)² − ⟨c₁,ξ⟩²)/(4ξ²)
/// ```
///
/// where `k` is the representative of `⟨c₁,ξ⟩ + dξ²  (mod 2dξ²)` in
/// `[0, 2dξ²)`.  The value is an exact rational; nothing rounds.
pub fn formal_dimension(
    lattice: &Lattice,
    c1: &ClassVector,
    xi: &ClassVector,
    d: &BigInt,
) -> Result<Rat> {
    let signature = lattice.signature();
    if signature.b_plus != 1 {
        return Err(Error::precondition(format!(
            "formal_dimension needs b_plus = 1, got {}",
            signature.b_plus
        )));
    }
    if d <= &BigInt::from(1) {
        return Err(Error::precondition("d must exceed 1"));
    }
    let xi_sq = lattice.square(xi)?;
    if xi_sq <= BigInt::zero() {
        return Err(Error::precondition("xi must have positive square"));
    }
    let (div, _) = divisibility(xi)?;
    if div != BigInt::from(1) {
        return Err(Error::precondition("xi must be primitive"));
    }
    if !lattice.is_characteristic(c1)? {
        return Err(Error::precondition("c1 must be characteristic"));
    }

    let sigma = BigInt::from(signature.sigma);
    let c1_sq = lattice.square(c1)?;
    let pairing = lattice.pairing(c1, xi)?;
    let d_xi_sq = d * &xi_sq;
    let modulus = BigInt::from(2) * &d_xi_sq;
    let k = (&pairing + &d_xi_sq).mod_floor(&modulus);

    let quarter = Rat::from_integer(BigInt::from(4));
    let first = rat(&(&c1_sq - &sigma)) / &quarter;
    let shifted = &k - &d_xi_sq;
    let second = rat(&(&shifted * &shifted - &pairing * &pairing))
        / (quarter * rat(&xi_sq));
    Ok(first + second)
}

/// The specialized bound for classes that are themselves characteristic, in
/// a form of negative signature with `H₁ = 0` asserted by the caller:
/// `g > C(d,2)·ξ²`, reported as `g ≥ C(d,2)·ξ² + 1` with the strict flag.
///
/// Inapplicable inputs — `xi` not characteristic, `σ ≥ 0`, nonpositive
/// square, `b₊ ≠ 1`, `d < 1`, or the homology hypothesis not asserted —
/// yield `None` rather than an error.
pub fn characteristic_class_bound(
    lattice: &Lattice,
    xi: &ClassVector,
    d: &BigInt,
    h1_zero: bool,
) -> Result<Option<BoundReport>> {
    let xi_sq = lattice.square(xi)?;
    let signature = lattice.signature();
    if !h1_zero
        || signature.b_plus != 1
        || signature.sigma >= 0
        || xi_sq <= BigInt::zero()
        || d < &BigInt::from(1)
        || !lattice.is_characteristic(xi)?
    {
        return Ok(None);
    }
    let choose2 = d * (d - BigInt::from(1)) / BigInt::from(2);
    let bound = choose2 * xi_sq + BigInt::from(1);
    Ok(Some(BoundReport {
        bound: bound.clone(),
        unclamped: bound,
        strict: true,
        method: Method::Catalog,
        witness: None,
        exact: false,
        hypotheses: vec![Hypothesis::H1Zero],
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(coeffs: &[i64]) -> ClassVector {
        ClassVector::from_i64(coeffs)
    }

    fn budget() -> SearchBudget {
        SearchBudget::new(1_000_000, BigInt::from(1000)).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn adjunction_thom_values() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        for d in 1..=8i64 {
            let report = adjunction_genus_lb(&cp2, &cv(&[d]), &budget()).unwrap();
            assert_eq!(report.bound, big((d - 1) * (d - 2) / 2), "degree {}", d);
            assert!(!report.strict);
            assert_eq!(report.method, Method::Adjunction);
            assert!(report.witness.is_some());
        }
    }

    #[test]
    fn adjunction_h_and_e_examples() {
        let h = Lattice::hyperbolic();
        let report = adjunction_genus_lb(&h, &cv(&[3, 2]), &budget()).unwrap();
        assert_eq!(report.bound, big(2));

        let e = Lattice::diagonal(&[1, -1]).unwrap();
        let report = adjunction_genus_lb(&e, &cv(&[2, 1]), &budget()).unwrap();
        assert_eq!(report.bound, big(0));
        assert_eq!(report.unclamped, big(0));
    }

    #[test]
    fn characteristic_numbers_examples() {
        let (parity, ks) = characteristic_numbers(&big(1), &big(5)).unwrap();
        assert_eq!(parity, KParity::OppositeOfD);
        assert_eq!(ks, vec![big(0), big(2), big(4), big(6), big(8)]);

        let (parity, ks) = characteristic_numbers(&big(2), &big(3)).unwrap();
        assert_eq!(parity, KParity::Even);
        assert_eq!(ks, (0..6).map(|i| big(2 * i)).collect::<Vec<_>>());

        let (parity, ks) = characteristic_numbers(&big(1), &big(4)).unwrap();
        assert_eq!(parity, KParity::OppositeOfD);
        assert_eq!(ks, vec![big(1), big(3), big(5), big(7)]);
    }

    #[test]
    fn k_set_cp2() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        let result = k_set(&cp2, &cv(&[1]), &big(5), &budget()).unwrap();
        assert_eq!(result.k_values, vec![big(0), big(2)]);
        assert_eq!(result.k0, Some(big(2)));

        let result = k_set(&cp2, &cv(&[1]), &big(4), &budget()).unwrap();
        assert_eq!(result.k_values, vec![big(1)]);
        assert_eq!(result.k0, Some(big(1)));
    }

    #[test]
    fn k_set_hyperbolic() {
        let h = Lattice::hyperbolic();
        let result = k_set(&h, &cv(&[1, 1]), &big(3), &budget()).unwrap();
        assert_eq!(result.k_values, vec![big(0), big(2)]);
        assert_eq!(result.k0, Some(big(2)));
    }

    #[test]
    fn k_set_rejects_non_primitive() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        assert!(matches!(
            k_set(&cp2, &cv(&[2]), &big(3), &budget()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn divisible_bound_examples() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        let report = divisible_genus_lb(&cp2, &cv(&[1]), &big(5), &budget()).unwrap();
        assert_eq!(report.bound, big(6));
        assert!(report.strict);
        assert_eq!(report.method, Method::KSet);
        assert!(report.witness.is_some());

        let report = divisible_genus_lb(&cp2, &cv(&[1]), &big(4), &budget()).unwrap();
        assert_eq!(report.bound, big(3));
    }

    #[test]
    fn divisible_bound_matches_adjunction_on_multiple() {
        let h = Lattice::hyperbolic();
        let via_k = divisible_genus_lb(&h, &cv(&[1, 1]), &big(3), &budget()).unwrap();
        assert_eq!(via_k.bound, big(4));
        let via_adjunction = adjunction_genus_lb(&h, &cv(&[3, 3]), &budget()).unwrap();
        assert_eq!(via_adjunction.bound, big(4));
    }

    #[test]
    fn k_set_identity_small_corpus() {
        // k₀ = dξ² − m̃ whenever m̃ ≤ dξ², and the two routes to a bound on
        // d·ξ agree.
        let cases: Vec<(Lattice, ClassVector)> = vec![
            (Lattice::diagonal(&[1]).unwrap(), cv(&[1])),
            (Lattice::hyperbolic(), cv(&[2, 1])),
            (Lattice::diagonal(&[1, -1]).unwrap(), cv(&[2, 1])),
            (Lattice::diagonal(&[1, -1, -1]).unwrap(), cv(&[3, 1, 1])),
        ];
        for (lattice, xi) in &cases {
            let xi_sq = lattice.square(xi).unwrap();
            let (m_tilde, _) = min_abs_pairing(lattice, xi, &budget()).unwrap();
            for d in 2..=4i64 {
                let d = big(d);
                let d_xi_sq = &d * &xi_sq;
                let result = k_set(lattice, xi, &d, &budget()).unwrap();
                if m_tilde <= d_xi_sq {
                    assert_eq!(result.k0, Some(&d_xi_sq - &m_tilde));
                } else {
                    assert_eq!(result.k0, None);
                }
                let via_k = divisible_genus_lb(lattice, xi, &d, &budget()).unwrap();
                let via_adj =
                    adjunction_genus_lb(lattice, &xi.scaled(&d), &budget()).unwrap();
                assert_eq!(via_k.bound, via_adj.bound);
            }
        }
    }

    #[test]
    fn formal_dimension_cp2() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        let dim = formal_dimension(&cp2, &cv(&[7]), &cv(&[1]), &big(5)).unwrap();
        assert_eq!(dim, Rat::from_integer(big(2)));
        // Shifting c₁ by 2d·ξ leaves the dimension alone.
        let dim = formal_dimension(&cp2, &cv(&[17]), &cv(&[1]), &big(5)).unwrap();
        assert_eq!(dim, Rat::from_integer(big(2)));
    }

    #[test]
    fn formal_dimension_hyperbolic() {
        let h = Lattice::hyperbolic();
        let dim = formal_dimension(&h, &cv(&[4, 4]), &cv(&[1, 1]), &big(3)).unwrap();
        assert_eq!(dim, Rat::from_integer(big(2)));
    }

    #[test]
    fn formal_dimension_rejects_non_characteristic() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        assert!(matches!(
            formal_dimension(&cp2, &cv(&[2]), &cv(&[1]), &big(5)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn characteristic_class_bound_gates() {
        // Negative square: inapplicable.
        let e2 = Lattice::diagonal(&[1, -1, -1]).unwrap();
        assert!(
            characteristic_class_bound(&e2, &cv(&[1, 1, 1]), &big(3), true)
                .unwrap()
                .is_none()
        );
        // Nonnegative signature: inapplicable.
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        assert!(characteristic_class_bound(&cp2, &cv(&[1]), &big(3), true)
            .unwrap()
            .is_none());
    }

    #[test]
    fn characteristic_class_bound_applies() {
        // Rank 9, σ = −7: ξ = (3,1,…,1) is characteristic of square 1.
        let l = Lattice::diagonal(&[1, -1, -1, -1, -1, -1, -1, -1, -1]).unwrap();
        let xi = cv(&[3, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert!(l.is_characteristic(&xi).unwrap());
        let d = big(3);
        let report = characteristic_class_bound(&l, &xi, &d, true)
            .unwrap()
            .expect("preconditions hold");
        assert_eq!(report.bound, big(4));
        assert!(report.strict);
        assert_eq!(report.hypotheses, vec![Hypothesis::H1Zero]);
        // Without the homology flag the bound is withheld.
        assert!(characteristic_class_bound(&l, &xi, &d, false)
            .unwrap()
            .is_none());
        // The general engine can only do better.
        let engine = divisible_genus_lb(&l, &xi, &d, &budget()).unwrap();
        assert!(engine.bound >= report.bound);
    }
}
