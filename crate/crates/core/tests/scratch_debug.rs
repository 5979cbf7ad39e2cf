use genus_bounds::{intersection_lb, ClassVector, Lattice, SearchBudget};
use num_bigint::BigInt;

#[test]
fn debug_intersection_values() {
    let l = Lattice::hyperbolic().direct_sum(&Lattice::hyperbolic());
    let s1 = ClassVector::from_i64(&[2, 2, 0, 0]);
    let s2 = ClassVector::from_i64(&[0, 0, 2, 2]);
    let budget = SearchBudget::new(2_000_000, BigInt::from(2000)).unwrap();
    for (g1, g2) in [(0i64, 0i64), (0, 1), (1, 1), (1, 0)] {
        let r = intersection_lb(&l, &s1, &s2, &BigInt::from(g1), &BigInt::from(g2), &budget)
            .unwrap();
        println!(
            "g=({g1},{g2}): n_lb={} hyp={} pairings={:?}",
            r.n_lb,
            r.hypothesis_ok,
            r.witness.map(|w| w.pairings)
        );
    }
}
