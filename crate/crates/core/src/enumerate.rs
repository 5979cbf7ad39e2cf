//! Exact minimization of a positive definite integer quadratic over `Z^k`.
//!
//! The quadratic arrives as an LDL^T factorization together with the real
//! (rational) minimizer `z*`: minimizing `E(z) = (z − z*)^T A (z − z*)` is a
//! closest-vector problem, solved by depth-first interval enumeration with
//! the candidates at each level visited in a zig-zag around the rational
//! center. All arithmetic is exact rational, so bounds never suffer from
//! rounding; every evaluated candidate counts against a node budget.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Ldl;

type Rat = BigRational;

/// Nearest integer to `c`, ties toward minus infinity (deterministic).
fn round_nearest(c: &Rat) -> BigInt {
    // ceil(c − 1/2) = ceil((2 num − den) / (2 den)); BigRational keeps
    // denominators positive, so the division is well-oriented.
    let num = c.numer() * BigInt::from(2) - c.denom();
    let den = c.denom() * BigInt::from(2);
    num.div_ceil(&den)
}

struct Search<'a> {
    ldl: &'a Ldl,
    zstar: &'a [Rat],
    max_nodes: u64,
    nodes: &'a mut u64,
    /// Current pruning bound (min mode) or fixed strict radius (exists mode).
    bound: Rat,
    exists_mode: bool,
    ties: Vec<Vec<BigInt>>,
    found: Option<Rat>,
    z: Vec<BigInt>,
    dz: Vec<Rat>,
}

impl<'a> Search<'a> {
    /// Explores level `level` with `partial` already accumulated from the
    /// levels above it. Returns `true` when the search should stop early.
    fn descend(&mut self, level: usize, partial: Rat) -> Result<bool> {
        let k = self.zstar.len();
        let mut center = self.zstar[level].clone();
        for j in level + 1..k {
            center -= &self.ldl.lower[j][level] * &self.dz[j];
        }
        let start = round_nearest(&center);
        let d = self.ldl.diag[level].clone();
        let mut up_dead = false;
        let mut down_dead = false;
        let mut step: u64 = 0;
        loop {
            if up_dead && down_dead {
                return Ok(false);
            }
            let (cand, is_up) = if step == 0 {
                (start.clone(), true)
            } else if step % 2 == 1 {
                (&start + BigInt::from((step + 1) / 2), true)
            } else {
                (&start - BigInt::from(step / 2), false)
            };
            step += 1;
            if (is_up && up_dead) || (!is_up && down_dead) {
                continue;
            }
            let diff = Rat::from_integer(cand.clone()) - &center;
            let total = partial.clone() + &d * &diff * &diff;
            // The per-level term grows monotonically away from the center,
            // so a miss kills the whole direction.
            let dead = if self.exists_mode {
                total >= self.bound
            } else {
                total > self.bound
            };
            if dead {
                if is_up {
                    up_dead = true;
                } else {
                    down_dead = true;
                }
                continue;
            }
            *self.nodes += 1;
            if *self.nodes > self.max_nodes {
                return Err(Error::BudgetExhausted {
                    nodes: *self.nodes,
                    last_pairing: None,
                });
            }
            self.dz[level] = Rat::from_integer(cand.clone()) - &self.zstar[level];
            self.z[level] = cand;
            if level == 0 {
                if self.exists_mode {
                    self.found = Some(total);
                    return Ok(true);
                }
                if total < self.bound {
                    self.bound = total;
                    self.ties.clear();
                }
                self.ties.push(self.z.clone());
            } else if self.descend(level - 1, total)? {
                return Ok(true);
            }
        }
    }
}

/// Value of `E` at the greedy (nearest-plane) rounding of `z*`; an upper
/// bound for the true minimum that seeds the enumeration radius.
fn greedy_value(ldl: &Ldl, zstar: &[Rat]) -> Rat {
    let k = zstar.len();
    let mut dz = vec![Rat::zero(); k];
    let mut total = Rat::zero();
    for level in (0..k).rev() {
        let mut center = zstar[level].clone();
        for j in level + 1..k {
            center -= &ldl.lower[j][level] * &dz[j];
        }
        let cand = round_nearest(&center);
        let diff = Rat::from_integer(cand) - &center;
        total += &ldl.diag[level] * &diff * &diff;
        dz[level] = &diff + &center - &zstar[level];
    }
    total
}

/// Exact minimum of `E` together with every minimizing `z` (the tie set).
pub(crate) fn minimize(
    ldl: &Ldl,
    zstar: &[Rat],
    max_nodes: u64,
    nodes: &mut u64,
) -> Result<(Rat, Vec<Vec<BigInt>>)> {
    let k = zstar.len();
    if k == 0 {
        return Ok((Rat::zero(), vec![vec![]]));
    }
    let bound = greedy_value(ldl, zstar);
    let mut search = Search {
        ldl,
        zstar,
        max_nodes,
        nodes,
        bound,
        exists_mode: false,
        ties: Vec::new(),
        found: None,
        z: vec![BigInt::zero(); k],
        dz: vec![Rat::zero(); k],
    };
    search.descend(k - 1, Rat::zero())?;
    debug_assert!(!search.ties.is_empty());
    Ok((search.bound, search.ties))
}

/// Finds any `z` with `E(z) < radius`, returning its value, or `None` when
/// no lattice point lies strictly inside the radius.
pub(crate) fn exists_below(
    ldl: &Ldl,
    zstar: &[Rat],
    radius: &Rat,
    max_nodes: u64,
    nodes: &mut u64,
) -> Result<Option<Rat>> {
    let k = zstar.len();
    if *radius <= Rat::zero() {
        return Ok(None);
    }
    if k == 0 {
        return Ok(Some(Rat::zero()));
    }
    let mut search = Search {
        ldl,
        zstar,
        max_nodes,
        nodes,
        bound: radius.clone(),
        exists_mode: true,
        ties: Vec::new(),
        found: None,
        z: vec![BigInt::zero(); k],
        dz: vec![Rat::zero(); k],
    };
    search.descend(k - 1, Rat::zero())?;
    Ok(search.found)
}
