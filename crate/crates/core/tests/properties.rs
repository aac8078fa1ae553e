//! Randomized structural checks: arithmetic laws for sparse polynomials,
//! monomial-order axioms, canonicality of reduced bases, normal-form
//! soundness, and coordinate round-trips for subspaces.

use std::sync::Arc;

use proptest::prelude::*;

use noether_core::exterior::{
    grassmann_equations, index_subsets, plucker_coordinates, same_span, subspace_from_plucker,
};
use noether_core::field::{FieldKind, Scalar};
use noether_core::groebner::{buchberger, normal_form, Ideal};
use noether_core::monomial::{Monomial, Order};
use noether_core::numpoly::{binomial, NumericalPolynomial};
use noether_core::poly::Polynomial;
use noether_core::ring::Ring;

use num_bigint::BigInt;
use num_rational::BigRational;

fn r3() -> Arc<Ring> {
    Ring::simple(FieldKind::Rationals, &["x", "y", "z"]).unwrap()
}

/// Up to five terms in three variables, exponents at most two,
/// coefficients in -5..=5 (zeros collapse away in `from_terms`).
fn arb_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(
        (-5i64..=5, 0u32..=2, 0u32..=2, 0u32..=2),
        0..5,
    )
    .prop_map(|terms| {
        let ring = r3();
        let spec: Vec<(i64, Vec<(u32, u32)>)> = terms
            .into_iter()
            .map(|(c, e0, e1, e2)| (c, vec![(0, e0), (1, e1), (2, e2)]))
            .collect();
        let borrowed: Vec<(i64, &[(u32, u32)])> =
            spec.iter().map(|(c, e)| (*c, e.as_slice())).collect();
        Polynomial::from_int_terms(&ring, &borrowed)
    })
}

fn arb_mono() -> impl Strategy<Value = Monomial> {
    (0u32..=3, 0u32..=3, 0u32..=3)
        .prop_map(|(a, b, c)| Monomial::from_pairs(&[(0, a), (1, b), (2, c)]))
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn subtraction_and_scaling_are_consistent(a in arb_poly(), k in 1i64..=7) {
        prop_assert!(a.sub(&a).is_zero());
        let c = Scalar::from_int(k);
        if !a.is_zero() {
            let monic = a.monic();
            prop_assert_eq!(a.scale(&c).monic(), monic.clone());
            prop_assert_eq!(monic.leading_coeff().unwrap(), &Scalar::from_int(1));
        }
    }

    #[test]
    fn orders_are_total_and_multiplicative(m1 in arb_mono(), m2 in arb_mono(), n in arb_mono()) {
        for order in [Order::grevlex(vec![0, 1, 2]), Order::lex(vec![0, 1, 2])] {
            let cmp = order.cmp(&m1, &m2);
            prop_assert_eq!(cmp == std::cmp::Ordering::Equal, m1 == m2);
            prop_assert_eq!(cmp, order.cmp(&m2, &m1).reverse());
            // Multiplying both sides by the same monomial never flips the order.
            prop_assert_eq!(cmp, order.cmp(&m1.mul(&n), &m2.mul(&n)));
        }
    }

    #[test]
    fn reduced_basis_ignores_generator_presentation(
        gens in proptest::collection::vec(arb_poly(), 1..4),
    ) {
        let ring = r3();
        let gb = buchberger(&ring, &gens);
        let mut rev: Vec<Polynomial> = gens.clone();
        rev.reverse();
        rev.extend(gens.iter().cloned()); // duplicates must not matter
        prop_assert_eq!(buchberger(&ring, &rev), gb.clone());
        // Idempotence: the basis is already its own reduced basis.
        prop_assert_eq!(buchberger(&ring, &gb), gb);
    }

    #[test]
    fn normal_form_vanishes_exactly_on_the_ideal(
        gens in proptest::collection::vec(arb_poly(), 1..3),
        q1 in arb_poly(),
        q2 in arb_poly(),
        f in arb_poly(),
    ) {
        let ring = r3();
        let ideal = Ideal::new(ring, gens.clone()).unwrap();
        let gb = ideal.basis().elems().to_vec();

        // Any explicit combination of generators reduces to zero.
        let mut combo = q1.mul(&gens[0]);
        if gens.len() > 1 {
            combo = combo.add(&q2.mul(&gens[1]));
        }
        prop_assert!(normal_form(&combo, &gb).is_zero());

        // f minus its remainder lies in the ideal, and the remainder is stable.
        let r = normal_form(&f, &gb);
        prop_assert!(ideal.contains(&f.sub(&r)));
        prop_assert_eq!(normal_form(&r, &gb), r);
    }

    #[test]
    fn plucker_coordinates_round_trip_planes_in_four_space(
        rows in proptest::collection::vec(
            proptest::collection::vec(-4i64..=4, 4), 2)
    ) {
        let field = FieldKind::Rationals;
        let basis: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&c| Scalar::from_int(c)).collect())
            .collect();
        // Skip degenerate samples: coordinates exist only for honest planes.
        let Ok(eta) = plucker_coordinates(&field, &basis) else {
            return Ok(());
        };

        let recovered = subspace_from_plucker(&eta).unwrap();
        prop_assert!(same_span(&field, &basis, &recovered).unwrap());

        // The point satisfies the quadratic relation cut out for Gr(2, 4).
        let eqs = grassmann_equations(field.clone(), 2, 4).unwrap();
        prop_assert!(!eqs.is_empty());
        let assignment: Vec<(u32, Scalar)> = index_subsets(2, 4)
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32, eta.multivector().coord(s)))
            .collect();
        for eq in &eqs {
            prop_assert!(eq.eval_full(&assignment).unwrap().is_zero());
        }
    }

    #[test]
    fn numerical_polynomials_evaluate_like_binomial_sums(
        coords in proptest::collection::vec(-6i64..=6, 0..4),
        t in -4i64..=8,
    ) {
        // The coordinate basis is the shifted binomial C(t+i, i).
        let q = NumericalPolynomial::from_i64_coords(&coords);
        let arg = BigInt::from(t);
        let direct: BigInt = coords
            .iter()
            .enumerate()
            .map(|(i, &c)| BigInt::from(c) * binomial(&(&arg + BigInt::from(i)), i as u32))
            .sum();
        prop_assert_eq!(q.eval(&arg), direct);
    }

    #[test]
    fn power_basis_conversion_inverts_the_binomial_expansion(
        coords in proptest::collection::vec(-6i64..=6, 0..4),
    ) {
        // Expand sum c_i * C(t+i, i) into dense power coefficients by hand,
        // then convert back; the binomial coordinates must survive intact.
        let mut power: Vec<BigRational> = vec![BigRational::from_integer(BigInt::from(0))];
        for (i, &c) in coords.iter().enumerate() {
            // C(t+i, i) = prod_{j=1..i} (t + j) / j  as a polynomial in t.
            let mut term: Vec<BigRational> = vec![BigRational::from_integer(BigInt::from(1))];
            for j in 1..=i {
                // Multiply term by (t + j)/j = 1 + t/j.
                let inv_j = BigRational::new(BigInt::from(1), BigInt::from(j));
                let mut next = vec![BigRational::from_integer(BigInt::from(0)); term.len() + 1];
                for (k, a) in term.iter().enumerate() {
                    next[k] += a;
                    next[k + 1] += a * &inv_j;
                }
                term = next;
            }
            if power.len() < term.len() {
                power.resize(term.len(), BigRational::from_integer(BigInt::from(0)));
            }
            let c = BigRational::from_integer(BigInt::from(c));
            for (k, a) in term.iter().enumerate() {
                power[k] += a * &c;
            }
        }
        let q = NumericalPolynomial::from_power_basis(&power).unwrap();
        let expected = NumericalPolynomial::from_i64_coords(&coords);
        prop_assert_eq!(q, expected);
    }
}

#[test]
fn grevlex_prefers_earlier_declared_variables() {
    let order = Order::grevlex(vec![0, 1, 2]);
    let x = Monomial::var(0);
    let y = Monomial::var(1);
    assert_eq!(order.cmp(&x, &y), std::cmp::Ordering::Greater);
}
