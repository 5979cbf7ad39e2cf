//! The optimization engine: characteristic vectors with prescribed pairings.
//!
//! Every query in this crate reduces to the same shape: fix the pairings
//! `⟨c, xᵢ⟩ = tᵢ` against a family of pairwise-orthogonal positive classes
//! that spans the positive part of the form, then optimize `c²` over the
//! remaining freedom.  That freedom lives in the sublattice orthogonal to all
//! the `xᵢ`, which is negative definite, so maximizing `c²` is a
//! closest-vector problem that exact enumeration settles.
//!
//! Concretely, a characteristic vector with the required pairings is
//! `c = c₀ + 2μ` where `c₀` is any particular solution and `μ` ranges over
//! the kernel `{μ : ⟨μ, xᵢ⟩ = 0}`.  Writing `μ = Bz` for a kernel basis `B`,
//!
//! ```text
//! −c² = zᵀ(−4BᵀGB)z − 4(Gc₀)ᵀBz − c₀²
//! ```
//!
//! has a positive definite quadratic part, so it attains a minimum, and
//! `max c² = −min(−c²)` comes with an explicit maximizer.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::enumerate::{exists_below, minimize};
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, Lattice};
use crate::linalg::{dot, ldl, rat, diagonalize, Diagonalization, Ldl, Rat};

/// Caps on how much work a search may do before giving up.
///
/// `max_nodes` limits the total number of enumeration-tree nodes visited by a
/// single operation (summed over all the enumerations it runs).
/// `max_abs_pairing` caps the outer scan over pairing values in
/// [`min_abs_pairing`].  Exhausting either produces
/// [`Error::BudgetExhausted`], never a wrong answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    max_nodes: u64,
    max_abs_pairing: BigInt,
}

impl SearchBudget {
    /// Node cap used by [`SearchBudget::default_for`].
    pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

    pub fn new(max_nodes: u64, max_abs_pairing: BigInt) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::precondition("max_nodes must be positive"));
        }
        if max_abs_pairing <= BigInt::zero() {
            return Err(Error::precondition("max_abs_pairing must be positive"));
        }
        Ok(SearchBudget {
            max_nodes,
            max_abs_pairing,
        })
    }

    /// A budget generous enough for any input on which the scan terminates:
    /// `max_abs_pairing = 4(|σ| + |⟨ξ,ξ⟩| + rank · max|gram entry|)`.
    ///
    /// Adding a large enough multiple of a dual of `ξ` to any characteristic
    /// vector pushes its square above `σ`, and this cap comfortably exceeds
    /// the pairing that multiple needs.
    pub fn default_for(lattice: &Lattice, xi: &ClassVector) -> Result<Self> {
        let sigma = BigInt::from(lattice.signature().sigma);
        let xi_sq = lattice.square(xi)?;
        let max_entry = lattice
            .gram()
            .iter()
            .flatten()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let cap =
            BigInt::from(4) * (sigma.abs() + xi_sq.abs() + BigInt::from(lattice.rank()) * max_entry);
        SearchBudget::new(Self::DEFAULT_MAX_NODES, cap.max(BigInt::from(4)))
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }

    pub fn max_abs_pairing(&self) -> &BigInt {
        &self.max_abs_pairing
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_max_abs_pairing(mut self, cap: BigInt) -> Self {
        self.max_abs_pairing = cap;
        self
    }
}

/// A characteristic vector found by a search, together with the numbers the
/// caller asked about.  Everything here recomputes from `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharWitness {
    /// The characteristic vector itself.
    pub c: ClassVector,
    /// `⟨c, c⟩`.
    pub square: BigInt,
    /// `⟨c, xᵢ⟩` for the query classes, in query order.
    pub pairings: Vec<BigInt>,
}

/// What a residue class of pairing values is known to do.
///
/// `min(−c_perp²)` — the minimized negated square of the component of `c`
/// orthogonal to all constraint classes — depends only on `tᵢ mod 2⟨xᵢ,xᵢ⟩`
/// (shifting `tᵢ` by `2⟨xᵢ,xᵢ⟩` translates the whole solution coset by
/// `2xᵢ`, which leaves the orthogonal component untouched).  So both
/// feasibility decisions and exact minima can be remembered per residue.
#[derive(Debug, Clone)]
enum CosetState {
    /// No characteristic vector has pairings in this residue class.
    Empty,
    /// Partial knowledge: `lower ≤ min(−c_perp²) ≤ upper` where known.
    Bounded {
        lower: Option<Rat>,
        upper: Option<Rat>,
    },
}

/// A prepared constraint system: everything about `(L, x₁..x_k)` that does
/// not depend on the pairing values, so a scan over many `t` vectors pays the
/// setup cost once.
pub(crate) struct ConstraintSystem<'a> {
    lattice: &'a Lattice,
    classes: Vec<ClassVector>,
    sigma: BigInt,
    /// Characteristic basepoint `w` of the lattice.
    basepoint: Vec<BigInt>,
    /// `⟨w, xᵢ⟩`, fixing the parity each `tᵢ` must have.
    w_pairings: Vec<BigInt>,
    /// `⟨xᵢ, xᵢ⟩`, all positive.
    squares: Vec<BigInt>,
    /// Diagonalized integer system with rows `(G xᵢ)ᵀ`; solving it against
    /// `(tᵢ − ⟨w,xᵢ⟩)/2` produces a particular solution.
    system: Diagonalization,
    /// Basis of the kernel `{μ : ⟨μ, xᵢ⟩ = 0 ∀i}`, as columns `μⱼ`.
    kernel: Vec<Vec<BigInt>>,
    /// LDL factorization of `−4BᵀGB`, the positive definite quadratic part.
    ldl: Ldl,
    /// Residue-class memory shared across a scan.
    cache: RefCell<HashMap<Vec<BigInt>, CosetState>>,
}

impl<'a> ConstraintSystem<'a> {
    /// Validates the preconditions and does all `t`-independent setup.
    ///
    /// The classes must be pairwise orthogonal with positive squares, and
    /// there must be exactly `b₊` of them, so that their orthogonal
    /// complement is negative definite.  (Orthogonality with positive
    /// squares already forces linear independence.)
    pub(crate) fn prepare(lattice: &'a Lattice, classes: &[ClassVector]) -> Result<Self> {
        let signature = lattice.signature();
        if classes.len() != signature.b_plus {
            return Err(Error::precondition(format!(
                "need exactly b_plus = {} constraint classes, got {}",
                signature.b_plus,
                classes.len()
            )));
        }
        let mut squares = Vec::with_capacity(classes.len());
        for (i, x) in classes.iter().enumerate() {
            let sq = lattice.square(x)?;
            if sq <= BigInt::zero() {
                return Err(Error::precondition(format!(
                    "constraint class {} must have positive square, got {}",
                    i, sq
                )));
            }
            squares.push(sq);
            for y in &classes[i + 1..] {
                if lattice.pairing(x, y)? != BigInt::zero() {
                    return Err(Error::precondition(
                        "constraint classes must be pairwise orthogonal",
                    ));
                }
            }
        }

        let basepoint = lattice.characteristic_basepoint().coeffs().to_vec();
        let w_pairings: Vec<BigInt> = classes
            .iter()
            .map(|x| dot(&lattice.gram_apply(x.coeffs()), &basepoint))
            .collect();

        // Rows of the pairing system: ⟨y, xᵢ⟩ = (G xᵢ)ᵀ y.
        let rows: Vec<Vec<BigInt>> = classes
            .iter()
            .map(|x| lattice.gram_apply(x.coeffs()))
            .collect();
        let system = diagonalize(&rows);
        let kernel = system.kernel_basis();
        let gram_kernel: Vec<Vec<BigInt>> =
            kernel.iter().map(|mu| lattice.gram_apply(mu)).collect();

        // Quadratic part of −c² on the kernel: −4 μᵢᵀ G μⱼ.
        let dim = kernel.len();
        let mut quad = vec![vec![Rat::zero(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                quad[i][j] = rat(&(BigInt::from(-4) * dot(&kernel[i], &gram_kernel[j])));
            }
        }
        let ldl = ldl(&quad).ok_or_else(|| {
            Error::precondition("constraint classes do not span the positive part of the form")
        })?;

        Ok(ConstraintSystem {
            lattice,
            classes: classes.to_vec(),
            sigma: BigInt::from(signature.sigma),
            basepoint,
            w_pairings,
            squares,
            system,
            kernel,
            ldl,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub(crate) fn sigma(&self) -> &BigInt {
        &self.sigma
    }

    /// Parity each `tᵢ` must satisfy: `tᵢ ≡ ⟨xᵢ,xᵢ⟩ (mod 2)`.
    pub(crate) fn parity_start(&self, i: usize) -> BigInt {
        self.squares[i].mod_floor(&BigInt::from(2))
    }

    /// The residue key `(tᵢ mod 2⟨xᵢ,xᵢ⟩)ᵢ` under which search results are
    /// remembered.
    fn residue_key(&self, ts: &[BigInt]) -> Vec<BigInt> {
        ts.iter()
            .zip(&self.squares)
            .map(|(t, sq)| t.mod_floor(&(BigInt::from(2) * sq)))
            .collect()
    }

    /// `Σ tᵢ²/⟨xᵢ,xᵢ⟩` — the square of the component of `c` inside the span
    /// of the constraint classes.
    fn span_square(&self, ts: &[BigInt]) -> Rat {
        ts.iter()
            .zip(&self.squares)
            .map(|(t, sq)| Rat::new(t * t, sq.clone()))
            .sum()
    }

    /// One characteristic vector with the requested pairings, or `None` when
    /// the coset is empty (parity or divisibility obstruction).
    fn particular(&self, ts: &[BigInt]) -> Option<Vec<BigInt>> {
        let two = BigInt::from(2);
        let mut rhs = Vec::with_capacity(ts.len());
        for (t, wp) in ts.iter().zip(&self.w_pairings) {
            let diff = t - wp;
            if diff.is_odd() {
                return None;
            }
            rhs.push(diff / &two);
        }
        let y = self.system.solve(&rhs)?;
        Some(
            self.basepoint
                .iter()
                .zip(&y)
                .map(|(w, yi)| w + &two * yi)
                .collect(),
        )
    }

    /// Center and constant of the enumeration problem at a particular
    /// solution `c₀`: minimizing `E(z) = (z−z*)ᵀA(z−z*)` over integer `z`
    /// recovers `min(−c²) = min E + offset`.
    fn center_and_offset(&self, c0: &[BigInt]) -> (Vec<Rat>, Rat) {
        let g_c0 = self.lattice.gram_apply(c0);
        let q_lin: Vec<BigInt> = self
            .kernel
            .iter()
            .map(|mu| BigInt::from(-4) * dot(&g_c0, mu))
            .collect();
        let rhs: Vec<Rat> = q_lin
            .iter()
            .map(|q| -rat(q) / Rat::from_integer(BigInt::from(2)))
            .collect();
        let zstar = self.ldl.solve(&rhs);
        let q0 = -rat(&dot(&g_c0, c0));
        let half_linear: Rat = q_lin
            .iter()
            .zip(&zstar)
            .map(|(q, z)| rat(q) * z)
            .sum::<Rat>()
            / Rat::from_integer(BigInt::from(2));
        (zstar, q0 + half_linear)
    }

    /// Decides `max{c² : ⟨c,xᵢ⟩ = tᵢ} > threshold` without necessarily
    /// finding the maximum, remembering what it learns per residue class.
    pub(crate) fn square_exceeds(
        &self,
        ts: &[BigInt],
        threshold: &BigInt,
        budget: &SearchBudget,
        nodes: &mut u64,
    ) -> Result<bool> {
        let key = self.residue_key(ts);
        let span_sq = self.span_square(ts);
        // max c² > Y  ⟺  min(−c_perp²) < T − Y.
        let theta = &span_sq - rat(threshold);
        if let Some(state) = self.cache.borrow().get(&key) {
            match state {
                CosetState::Empty => return Ok(false),
                CosetState::Bounded { lower, upper } => {
                    if let Some(u) = upper {
                        if *u < theta {
                            return Ok(true);
                        }
                    }
                    if let Some(l) = lower {
                        if *l >= theta {
                            return Ok(false);
                        }
                    }
                }
            }
        }

        let Some(c0) = self.particular(ts) else {
            self.cache.borrow_mut().insert(key, CosetState::Empty);
            return Ok(false);
        };
        let (zstar, offset) = self.center_and_offset(&c0);
        // E(z) < −Y − offset  ⟺  c² > Y at that z.
        let radius = -rat(threshold) - &offset;
        let found = exists_below(&self.ldl, &zstar, &radius, budget.max_nodes(), nodes)?;
        let mut cache = self.cache.borrow_mut();
        let state = cache
            .entry(key)
            .or_insert(CosetState::Bounded {
                lower: None,
                upper: None,
            });
        if let CosetState::Bounded { lower, upper } = state {
            match &found {
                Some(e_val) => {
                    let reached = e_val + &span_sq + &offset;
                    let better = match upper.as_ref() {
                        Some(u) => reached < *u,
                        None => true,
                    };
                    if better {
                        *upper = Some(reached);
                    }
                }
                None => {
                    let better = match lower.as_ref() {
                        Some(l) => theta > *l,
                        None => true,
                    };
                    if better {
                        *lower = Some(theta);
                    }
                }
            }
        }
        Ok(found.is_some())
    }

    /// The exact maximum of `c²` subject to `⟨c,xᵢ⟩ = tᵢ`, with the
    /// lexicographically smallest maximizer, or `None` for an empty coset.
    pub(crate) fn maximize(
        &self,
        ts: &[BigInt],
        budget: &SearchBudget,
        nodes: &mut u64,
    ) -> Result<Option<(BigInt, CharWitness)>> {
        let key = self.residue_key(ts);
        if let Some(CosetState::Empty) = self.cache.borrow().get(&key) {
            return Ok(None);
        }
        let Some(c0) = self.particular(ts) else {
            self.cache.borrow_mut().insert(key, CosetState::Empty);
            return Ok(None);
        };
        let (zstar, offset) = self.center_and_offset(&c0);
        let (min_e, ties) = minimize(&self.ldl, &zstar, budget.max_nodes(), nodes)?;

        // Record the now-exact residue knowledge.
        let exact = &min_e + self.span_square(ts) + &offset;
        self.cache.borrow_mut().insert(
            key,
            CosetState::Bounded {
                lower: Some(exact.clone()),
                upper: Some(exact),
            },
        );

        let max_square = -(&min_e + &offset);
        debug_assert!(max_square.is_integer());
        let max_square = max_square.to_integer();

        let two = BigInt::from(2);
        let best = ties
            .iter()
            .map(|z| {
                let mut c = c0.clone();
                for (mu, zj) in self.kernel.iter().zip(z) {
                    for (ci, mi) in c.iter_mut().zip(mu) {
                        *ci += &two * &(zj * mi);
                    }
                }
                c
            })
            .min()
            .expect("minimize always returns at least one tie");

        let witness = self.witness_for(ClassVector::new(best));
        debug_assert_eq!(witness.square, max_square);
        debug_assert_eq!(witness.pairings.as_slice(), ts);
        Ok(Some((max_square, witness)))
    }

    /// Packages a vector as a [`CharWitness`], recomputing its square and its
    /// pairings against the constraint classes.
    fn witness_for(&self, c: ClassVector) -> CharWitness {
        let square = self
            .lattice
            .square(&c)
            .expect("witness has lattice dimension");
        let pairings = self
            .classes
            .iter()
            .map(|x| self.lattice.pairing(&c, x).expect("same dimension"))
            .collect();
        CharWitness {
            c,
            square,
            pairings,
        }
    }
}

/// Maximum of `⟨c,c⟩` over characteristic `c` with `⟨c, xᵢ⟩ = tᵢ` for every
/// constraint `(xᵢ, tᵢ)`, together with one maximizer (the lexicographically
/// smallest).  Returns `None` when no characteristic vector has those
/// pairings — a parity or divisibility obstruction, not an error.
///
/// The constraint classes must be pairwise orthogonal, have positive squares,
/// and number exactly `b₊`, so the maximum exists.
pub fn max_square_with_pairings(
    lattice: &Lattice,
    constraints: &[(ClassVector, BigInt)],
    budget: &SearchBudget,
) -> Result<Option<(BigInt, CharWitness)>> {
    let classes: Vec<ClassVector> = constraints.iter().map(|(x, _)| x.clone()).collect();
    let ts: Vec<BigInt> = constraints.iter().map(|(_, t)| t.clone()).collect();
    let system = ConstraintSystem::prepare(lattice, &classes)?;
    let mut nodes = 0u64;
    system.maximize(&ts, budget, &mut nodes)
}

/// The minimal `m = |⟨c, ξ⟩|` over characteristic vectors with `c² > σ`,
/// with a witness attaining it (the maximizer of `c²` at that pairing,
/// lexicographically smallest among maximizers).
///
/// Scans `t = ξ² mod 2, +2, +4, …` — only nonnegative `t` needs checking
/// since `c ↔ −c` flips the pairing — and stops at the first feasible value.
/// Termination is mathematically guaranteed; the budget's `max_abs_pairing`
/// exists to surface an undersized cap as an error rather than a long stall.
pub fn min_abs_pairing(
    lattice: &Lattice,
    xi: &ClassVector,
    budget: &SearchBudget,
) -> Result<(BigInt, CharWitness)> {
    let signature = lattice.signature();
    if signature.b_plus != 1 {
        return Err(Error::precondition(format!(
            "min_abs_pairing needs b_plus = 1, got {}",
            signature.b_plus
        )));
    }
    let xi_sq = lattice.square(xi)?;
    if xi_sq <= BigInt::zero() {
        return Err(Error::precondition(format!(
            "class must have positive square, got {}",
            xi_sq
        )));
    }

    let system = ConstraintSystem::prepare(lattice, std::slice::from_ref(xi))?;
    let mut nodes = 0u64;
    let two = BigInt::from(2);
    let mut t = system.parity_start(0);
    while &t <= budget.max_abs_pairing() {
        if system.square_exceeds(&[t.clone()], system.sigma(), budget, &mut nodes)? {
            let (_, witness) = system
                .maximize(&[t.clone()], budget, &mut nodes)?
                .expect("feasible pairing has a nonempty coset");
            return Ok((t, witness));
        }
        t += &two;
    }
    Err(Error::BudgetExhausted {
        nodes,
        last_pairing: Some(t - &two),
    })
}

/// Independent oracle for [`min_abs_pairing`]: exhaustively scans every
/// vector with coefficients in `[−box, box]`, keeps the characteristic ones
/// with `c² > σ`, and returns the minimal `|⟨c, ξ⟩|` with the first witness
/// the scan finds (sign-normalized so the pairing is nonnegative).  `None`
/// when the box contains no admissible vector.
///
/// Cost is `(box+1)^rank` coset points; callers guard the rank.
pub fn brute_force_min_pairing(
    lattice: &Lattice,
    xi: &ClassVector,
    box_radius: u64,
) -> Result<Option<(BigInt, CharWitness)>> {
    if box_radius == 0 {
        return Err(Error::precondition("box radius must be positive"));
    }
    lattice.square(xi)?; // dimension check
    let n = lattice.rank();
    let sigma = BigInt::from(lattice.signature().sigma);
    let basepoint = lattice.characteristic_basepoint();
    let bound = BigInt::from(box_radius);

    // Characteristic vectors are exactly w + 2ℤⁿ, so step each coordinate by
    // 2 from the smallest admissible value.
    let starts: Vec<BigInt> = basepoint
        .coeffs()
        .iter()
        .map(|w| {
            let mut lo = -&bound;
            if (&lo - w).is_odd() {
                lo += 1;
            }
            lo
        })
        .collect();
    let mut current = starts.clone();
    if current.iter().any(|c| c > &bound) {
        return Ok(None);
    }

    let mut best: Option<(BigInt, Vec<BigInt>)> = None;
    let two = BigInt::from(2);
    'scan: loop {
        let c = ClassVector::new(current.clone());
        let square = lattice.square(&c)?;
        if square > sigma {
            let pairing = lattice.pairing(&c, xi)?;
            let abs = pairing.abs();
            if best.as_ref().map_or(true, |(m, _)| abs < *m) {
                best = Some((abs, current.clone()));
            }
        }
        // Odometer: last coordinate fastest.
        for i in (0..n).rev() {
            current[i] += &two;
            if current[i] <= bound {
                continue 'scan;
            }
            current[i] = starts[i].clone();
        }
        break;
    }

    Ok(best.map(|(m, coeffs)| {
        let mut c = ClassVector::new(coeffs);
        let pairing = lattice.pairing(&c, xi).expect("same dimension");
        if pairing < BigInt::zero() {
            c = c.negated();
        }
        let square = lattice.square(&c).expect("same dimension");
        let pairings = vec![lattice.pairing(&c, xi).expect("same dimension")];
        (
            m,
            CharWitness {
                c,
                square,
                pairings,
            },
        )
    }))
}

/// Over the grid `0 ≤ tᵢ ≤ tᵢ_max` (stepping by 2 from the forced parity),
/// finds the pair `(t₁, t₂)` of smallest sum — ties broken by smallest
/// `(t₁, t₂)` lexicographically — for which some characteristic `c` has
/// `⟨c, xᵢ⟩ = tᵢ` and `c² > σ`.  Returns that pair with the maximizing
/// witness, or `None` when no grid point is feasible.
pub fn min_pairing_sum_2(
    lattice: &Lattice,
    x1: &ClassVector,
    x2: &ClassVector,
    t_max: (&BigInt, &BigInt),
    budget: &SearchBudget,
) -> Result<Option<(BigInt, BigInt, CharWitness)>> {
    let signature = lattice.signature();
    if signature.b_plus != 2 {
        return Err(Error::precondition(format!(
            "min_pairing_sum_2 needs b_plus = 2, got {}",
            signature.b_plus
        )));
    }
    let system = ConstraintSystem::prepare(lattice, &[x1.clone(), x2.clone()])?;
    let mut nodes = 0u64;

    let p1 = system.parity_start(0);
    let p2 = system.parity_start(1);
    if p1 > *t_max.0 || p2 > *t_max.1 {
        return Ok(None);
    }
    let two = BigInt::from(2);

    // Walk sums in increasing order; inside a sum, increasing t₁ is exactly
    // lexicographic order on (t₁, t₂).
    let mut sum = &p1 + &p2;
    let top = t_max.0 + t_max.1;
    while sum <= top {
        let mut t1 = (&sum - t_max.1).max(p1.clone());
        if (&t1 - &p1).is_odd() {
            t1 += 1;
        }
        while t1 <= *t_max.0 && t1 <= sum {
            let t2 = &sum - &t1;
            if t2 >= p2 && t2 <= *t_max.1 {
                let ts = [t1.clone(), t2.clone()];
                if system.square_exceeds(&ts, system.sigma(), budget, &mut nodes)? {
                    let (_, witness) = system
                        .maximize(&ts, budget, &mut nodes)?
                        .expect("feasible grid point has a nonempty coset");
                    return Ok(Some((t1, t2, witness)));
                }
            }
            t1 += &two;
        }
        sum += &two;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> SearchBudget {
        SearchBudget::new(1_000_000, BigInt::from(1000)).unwrap()
    }

    fn cv(coeffs: &[i64]) -> ClassVector {
        ClassVector::from_i64(coeffs)
    }

    fn check_witness(lattice: &Lattice, w: &CharWitness, classes: &[ClassVector]) {
        assert!(lattice.is_characteristic(&w.c).unwrap());
        assert_eq!(lattice.square(&w.c).unwrap(), w.square);
        let recomputed: Vec<BigInt> = classes
            .iter()
            .map(|x| lattice.pairing(&w.c, x).unwrap())
            .collect();
        assert_eq!(recomputed, w.pairings);
    }

    #[test]
    fn max_square_rank_one() {
        let l = Lattice::diagonal(&[1]).unwrap();
        let (max, w) =
            max_square_with_pairings(&l, &[(cv(&[1]), BigInt::from(7))], &budget())
                .unwrap()
                .unwrap();
        assert_eq!(max, BigInt::from(49));
        assert_eq!(w.c, cv(&[7]));
        check_witness(&l, &w, &[cv(&[1])]);
    }

    #[test]
    fn max_square_hyperbolic() {
        let l = Lattice::hyperbolic();
        let (max, w) =
            max_square_with_pairings(&l, &[(cv(&[1, 1]), BigInt::from(8))], &budget())
                .unwrap()
                .unwrap();
        assert_eq!(max, BigInt::from(32));
        assert_eq!(w.c, cv(&[4, 4]));
    }

    #[test]
    fn max_square_indefinite_diag() {
        let l = Lattice::diagonal(&[1, -1]).unwrap();
        let (max, w) =
            max_square_with_pairings(&l, &[(cv(&[1, 0]), BigInt::from(3))], &budget())
                .unwrap()
                .unwrap();
        assert_eq!(max, BigInt::from(8));
        // Both (3, 1) and (3, −1) attain 8; the lexicographically smaller wins.
        assert_eq!(w.c, cv(&[3, -1]));
    }

    #[test]
    fn max_square_parity_obstruction() {
        let l = Lattice::hyperbolic();
        let result =
            max_square_with_pairings(&l, &[(cv(&[1, 1]), BigInt::from(7))], &budget()).unwrap();
        assert!(result.is_none());
    }

    #[test]
    fn max_square_divisibility_obstruction() {
        // ⟨c, 2ξ⟩ ≡ 2 (mod 4) for odd c, so pairing 0 against (2) is empty
        // even though its parity matches.
        let l = Lattice::diagonal(&[1]).unwrap();
        let result =
            max_square_with_pairings(&l, &[(cv(&[2]), BigInt::zero())], &budget()).unwrap();
        assert!(result.is_none());
        let some = max_square_with_pairings(&l, &[(cv(&[2]), BigInt::from(6))], &budget())
            .unwrap()
            .unwrap();
        assert_eq!(some.0, BigInt::from(9));
        assert_eq!(some.1.c, cv(&[3]));
    }

    #[test]
    fn max_square_rejects_bad_constraints() {
        let l = Lattice::hyperbolic();
        // Zero square.
        assert!(matches!(
            max_square_with_pairings(&l, &[(cv(&[1, 0]), BigInt::from(1))], &budget()),
            Err(Error::Precondition(_))
        ));
        // Wrong count for b_plus = 1.
        assert!(matches!(
            max_square_with_pairings(
                &l,
                &[
                    (cv(&[1, 1]), BigInt::from(1)),
                    (cv(&[1, 2]), BigInt::from(1))
                ],
                &budget()
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn min_abs_pairing_cp2() {
        let l = Lattice::diagonal(&[1]).unwrap();
        let (m, w) = min_abs_pairing(&l, &cv(&[1]), &budget()).unwrap();
        assert_eq!(m, BigInt::from(3));
        assert_eq!(w.c, cv(&[3]));
        check_witness(&l, &w, &[cv(&[1])]);
    }

    #[test]
    fn min_abs_pairing_hyperbolic() {
        let l = Lattice::hyperbolic();
        let (m, w) = min_abs_pairing(&l, &cv(&[3, 2]), &budget()).unwrap();
        assert_eq!(m, BigInt::from(10));
        assert_eq!(w.c, cv(&[2, 2]));
        // And the general p, q > 0 pattern m = 2(p + q) on another instance.
        let (m, w) = min_abs_pairing(&l, &cv(&[1, 1]), &budget()).unwrap();
        assert_eq!(m, BigInt::from(4));
        assert_eq!(w.c, cv(&[2, 2]));
    }

    #[test]
    fn min_abs_pairing_e_form() {
        let l = Lattice::diagonal(&[1, -1]).unwrap();
        let (m, w) = min_abs_pairing(&l, &cv(&[2, 1]), &budget()).unwrap();
        assert_eq!(m, BigInt::from(5));
        assert_eq!(w.c, cv(&[3, 1]));
        assert_eq!(w.square, BigInt::from(8));
    }

    #[test]
    fn min_abs_pairing_scales_linearly() {
        let l = Lattice::diagonal(&[1, -1, -1]).unwrap();
        let xi = cv(&[2, 1, 1]);
        let (m1, _) = min_abs_pairing(&l, &xi, &budget()).unwrap();
        for d in 2..5i64 {
            let scaled = xi.scaled(&BigInt::from(d));
            let (md, _) = min_abs_pairing(&l, &scaled, &budget()).unwrap();
            assert_eq!(md, BigInt::from(d) * &m1);
        }
    }

    #[test]
    fn min_abs_pairing_rejects_wrong_signature() {
        let l = Lattice::from_i64(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
        ])
        .unwrap();
        assert!(matches!(
            min_abs_pairing(&l, &cv(&[1, 0, 0, 0]), &budget()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn min_abs_pairing_budget_exhaustion() {
        let l = Lattice::diagonal(&[1]).unwrap();
        let tiny = SearchBudget::new(1_000_000, BigInt::from(1)).unwrap();
        match min_abs_pairing(&l, &cv(&[1]), &tiny) {
            Err(Error::BudgetExhausted { last_pairing, .. }) => {
                assert_eq!(last_pairing, Some(BigInt::from(1)));
            }
            other => panic!("expected budget exhaustion, got {:?}", other),
        }
    }

    #[test]
    fn brute_force_examples() {
        let cp2 = Lattice::diagonal(&[1]).unwrap();
        let (m, w) = brute_force_min_pairing(&cp2, &cv(&[1]), 9).unwrap().unwrap();
        assert_eq!(m, BigInt::from(3));
        assert_eq!(w.c, cv(&[3]));

        let h = Lattice::hyperbolic();
        let (m, w) = brute_force_min_pairing(&h, &cv(&[1, 1]), 9).unwrap().unwrap();
        assert_eq!(m, BigInt::from(4));
        assert_eq!(w.c, cv(&[2, 2]));

        let e = Lattice::diagonal(&[1, -1, -1]).unwrap();
        let (m, w) = brute_force_min_pairing(&e, &cv(&[1, 0, 0]), 9).unwrap().unwrap();
        assert_eq!(m, BigInt::from(3));
        assert_eq!(w.c, cv(&[3, 1, 1]));
    }

    #[test]
    fn brute_force_agrees_with_engine() {
        let lattices = [
            Lattice::diagonal(&[1, -1]).unwrap(),
            Lattice::diagonal(&[1, -1, -1]).unwrap(),
            Lattice::hyperbolic().direct_sum(&Lattice::diagonal(&[-1]).unwrap()),
        ];
        let classes: &[&[i64]] = &[&[1, 0], &[2, 1], &[1, 1, 0], &[3, 2, 1], &[1, 1, 1], &[2, 1, 0]];
        for l in &lattices {
            for coeffs in classes {
                if coeffs.len() != l.rank() {
                    continue;
                }
                let xi = cv(coeffs);
                let sq = l.square(&xi).unwrap();
                if sq <= BigInt::zero() {
                    continue;
                }
                let (engine, _) = min_abs_pairing(l, &xi, &budget()).unwrap();
                let oracle = brute_force_min_pairing(l, &xi, 9).unwrap();
                assert_eq!(oracle.unwrap().0, engine, "mismatch on {:?}", coeffs);
            }
        }
    }

    #[test]
    fn min_pairing_sum_h_plus_h() {
        let l = Lattice::hyperbolic().direct_sum(&Lattice::hyperbolic());
        let x1 = cv(&[2, 2, 0, 0]);
        let x2 = cv(&[0, 0, 2, 2]);
        let t9 = BigInt::from(9);
        let (t1, t2, w) = min_pairing_sum_2(&l, &x1, &x2, (&t9, &t9), &budget())
            .unwrap()
            .unwrap();
        assert_eq!((t1, t2), (BigInt::zero(), BigInt::from(8)));
        assert_eq!(w.c, cv(&[0, 0, 2, 2]));
        check_witness(&l, &w, &[x1.clone(), x2.clone()]);

        // With the grid cut at 7 nothing is feasible: sums 0..14 all fail.
        let t7 = BigInt::from(7);
        assert!(min_pairing_sum_2(&l, &x1, &x2, (&t7, &t7), &budget())
            .unwrap()
            .is_none());
    }

    #[test]
    fn min_pairing_sum_small_grid() {
        let l = Lattice::hyperbolic().direct_sum(&Lattice::hyperbolic());
        let x1 = cv(&[1, 1, 0, 0]);
        let x2 = cv(&[0, 0, 1, 1]);
        let one = BigInt::from(1);
        // σ = 0 and the only even grid points are (0,0): the best square at
        // pairing 0 against both classes is 0, not > σ.
        assert!(min_pairing_sum_2(&l, &x1, &x2, (&one, &one), &budget())
            .unwrap()
            .is_none());
    }

    #[test]
    fn min_pairing_sum_rejects_zero_square() {
        let l = Lattice::diagonal(&[1, 1, -1, -1]).unwrap();
        let x1 = cv(&[1, 0, 1, 0]);
        let x2 = cv(&[0, 1, 0, 1]);
        let nine = BigInt::from(9);
        assert!(matches!(
            min_pairing_sum_2(&l, &x1, &x2, (&nine, &nine), &budget()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn residue_cache_is_consistent_across_scan() {
        // Scanning twice must give identical answers (cache hits second time).
        let l = Lattice::diagonal(&[1, -1, -1, -1]).unwrap();
        let xi = cv(&[2, 1, 1, 0]);
        let (m1, w1) = min_abs_pairing(&l, &xi, &budget()).unwrap();
        let (m2, w2) = min_abs_pairing(&l, &xi, &budget()).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(w1, w2);
    }
}
