//! Shared test stock for the pair model: a named catalog of tuples with
//! frozen expected ranks, seeded samplers with recorded ground truth, and a
//! bounded, deterministic enumeration of candidate witness formulas.
//!
//! Everything here is deterministic given the seed, so the property and
//! acceptance suites (and the CLI's sampled reports) reproduce exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::pairs::{BaseField, OrdinalRank, PairContext, PairElement, TameFormula, ZetaBlock};
use crate::poly::Polynomial;

/// The reproducible generator used throughout the test stock.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The default pair: two small-field generators, two generic elements.
pub fn standard_context() -> PairContext {
    PairContext::new(2, 2).expect("standard pair context")
}

/// A named tuple with its base field and frozen expected rank.
pub struct RankCase {
    pub name: &'static str,
    pub tuple: Vec<PairElement>,
    pub base: BaseField,
    pub expected: OrdinalRank,
}

/// The rank catalog: generic elements have rank ω, small-field generators
/// rank 1, and a line with small-field slope through a generic point rank
/// ω+1; base extension can only lower the finite part.
pub fn rank_catalog(ctx: &PairContext) -> Result<Vec<RankCase>> {
    let e1 = ctx.e_var(0)?;
    let e2 = ctx.e_var(1)?;
    let t1 = ctx.t_var(0)?;
    let t2 = ctx.t_var(1)?;
    let q = BaseField::rationals();
    let qe1 = BaseField::with_e(vec![0]);
    let case = |name, tuple, base, omegas, finite| RankCase {
        name,
        tuple,
        base,
        expected: OrdinalRank::new(omegas, finite),
    };
    Ok(vec![
        case("generic", vec![t1.clone()], q.clone(), 1, 0),
        case("small", vec![e1.clone()], q.clone(), 0, 1),
        case("line-with-slope", vec![t1.clone(), e1.mul(&t1)], q.clone(), 1, 1),
        case("small-square", vec![e1.mul(&e1)], q.clone(), 0, 1),
        case("generic-pair", vec![t1.clone(), t2.clone()], q.clone(), 2, 0),
        case("small-pair", vec![e1.clone(), e2.clone()], q.clone(), 0, 2),
        case("rational", vec![ctx.from_int(5)], q.clone(), 0, 0),
        case("mixed-sum", vec![t1.add(&e1)], q.clone(), 1, 0),
        case("planar-curve", vec![t1.clone(), t1.mul(&t1)], q.clone(), 1, 0),
        case(
            "two-slopes",
            vec![t1.clone(), e1.mul(&t1), e2.mul(&t1)],
            q.clone(),
            1,
            2,
        ),
        case(
            "fractional-slope",
            vec![t2.clone(), e1.div(&ctx.from_int(1).sub(&e2))?.mul(&t2)],
            q,
            1,
            1,
        ),
        case("small-over-own-base", vec![e1.clone()], qe1.clone(), 0, 0),
        case(
            "line-over-slope-base",
            vec![t1.clone(), e1.mul(&t1)],
            qe1.clone(),
            1,
            0,
        ),
        case("small-pair-over-e1", vec![e1, e2], qe1, 0, 1),
    ])
}

/// A random polynomial in the small-field generators with small integer
/// coefficients; never zero.
fn random_e_poly(ctx: &PairContext, rng: &mut ChaCha8Rng) -> PairElement {
    loop {
        let mut acc = ctx.from_int(rng.gen_range(-2..=2));
        for i in 0..ctx.e_count() {
            let c = rng.gen_range(-2..=2);
            if c != 0 {
                let deg = rng.gen_range(1..=2u32);
                let gen = ctx.e_var(i).expect("e generator");
                acc = acc.add(&ctx.from_int(c).mul(&gen.pow(deg)));
            }
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

/// A random element of the small field: integers, generators, polynomials,
/// or reduced fractions of them.
pub fn sample_e_element(ctx: &PairContext, rng: &mut ChaCha8Rng) -> PairElement {
    match rng.gen_range(0..5u8) {
        0 => ctx.from_int(rng.gen_range(-3..=3)),
        1 => ctx.e_var(rng.gen_range(0..ctx.e_count())).expect("e generator"),
        2 => random_e_poly(ctx, rng),
        3 => {
            let num = random_e_poly(ctx, rng);
            let den = random_e_poly(ctx, rng);
            num.div(&den).expect("nonzero denominator")
        }
        _ => ctx.from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
    }
}

/// A random element that genuinely involves the generic part: a small-field
/// part plus a nonzero multiple of a t-monomial, over a small-field
/// denominator (so the t-support survives fraction reduction).
pub fn sample_mixed_element(ctx: &PairContext, rng: &mut ChaCha8Rng) -> PairElement {
    let e_part = if rng.gen_bool(0.5) {
        sample_e_element(ctx, rng)
    } else {
        ctx.from_int(0)
    };
    let i = rng.gen_range(0..ctx.t_count());
    let deg = rng.gen_range(1..=2u32);
    let tmono = ctx.t_var(i).expect("t generator").pow(deg);
    let coeff = match rng.gen_range(0..3u8) {
        0 => ctx.from_int(if rng.gen_bool(0.5) { 1 } else { -2 }),
        1 => ctx.e_var(rng.gen_range(0..ctx.e_count())).expect("e generator"),
        _ => ctx.from_int(rng.gen_range(1..=3)),
    };
    let num = e_part.add(&coeff.mul(&tmono));
    if rng.gen_bool(0.3) {
        num.div(&random_e_poly(ctx, rng)).expect("nonzero denominator")
    } else {
        num
    }
}

/// A random element together with the ground truth of whether it lies in
/// the small field.
pub fn sample_element_with_membership(
    ctx: &PairContext,
    rng: &mut ChaCha8Rng,
) -> (PairElement, bool) {
    if rng.gen_bool(0.5) {
        (sample_e_element(ctx, rng), true)
    } else {
        (sample_mixed_element(ctx, rng), false)
    }
}

/// A random element with no recorded ground truth.
pub fn sample_element(ctx: &PairContext, rng: &mut ChaCha8Rng) -> PairElement {
    sample_element_with_membership(ctx, rng).0
}

/// Fixed probe points with known small-field membership, for testing
/// whether a candidate formula defines the membership predicate.
pub fn membership_probes(ctx: &PairContext) -> Result<Vec<(PairElement, bool)>> {
    let e1 = ctx.e_var(0)?;
    let e2 = ctx.e_var(1)?;
    let t1 = ctx.t_var(0)?;
    let t2 = ctx.t_var(1)?;
    Ok(vec![
        (ctx.from_int(2), true),
        (e1.clone(), true),
        (e2.clone(), true),
        (e1.mul(&e2).add(&ctx.from_int(1)), true),
        (t1.clone(), false),
        (t2.clone(), false),
        (t1.add(&e1), false),
    ])
}

/// λ-instances: pairs `(a0, basis)` whose first λ-coefficient is nonzero,
/// the precondition of the parameter rewrite.
pub fn lambda_instances(
    ctx: &PairContext,
) -> Result<Vec<(PairElement, Vec<PairElement>)>> {
    let e1 = ctx.e_var(0)?;
    let e2 = ctx.e_var(1)?;
    let t1 = ctx.t_var(0)?;
    let t2 = ctx.t_var(1)?;
    let one = ctx.from_int(1);
    let frac = e1.div(&one.sub(&e2))?;
    Ok(vec![
        (e1.mul(&t1), vec![t1.clone()]),
        (e2.mul(&t2), vec![t2.clone()]),
        (e1.mul(&t1).add(&e2.mul(&t2)), vec![t1.clone(), t2.clone()]),
        (frac.mul(&t1), vec![t1.clone()]),
        (e1.clone(), vec![one.clone()]),
        (t1.add(&e1), vec![t1.clone(), one.clone()]),
        (e1.mul(&e1).mul(&t2), vec![t2.clone()]),
        (e1.mul(&t1.pow(2)), vec![t1.pow(2)]),
        (ctx.from_int(3).mul(&t1), vec![t1.clone()]),
        (e1.add(&one).mul(&t1), vec![t1.clone()]),
        (e2.mul(&t1).add(&one), vec![t1.clone(), one.clone()]),
        (frac.clone(), vec![frac]),
    ])
}

/// Conjugacy classes for the disjoin rewrite, presented by the coefficient
/// lists of their monic minimal polynomials.  Rational classes carry their
/// members for cross-checking against the direct disjunction.
pub struct ConjugacyCase {
    pub name: &'static str,
    pub coeffs: Vec<PairElement>,
    pub members: Option<Vec<PairElement>>,
}

pub fn conjugacy_classes(ctx: &PairContext) -> Result<Vec<ConjugacyCase>> {
    let e1 = ctx.e_var(0)?;
    let e2 = ctx.e_var(1)?;
    let rational = |name, members: Vec<PairElement>| -> Result<ConjugacyCase> {
        Ok(ConjugacyCase {
            name,
            coeffs: crate::pairs::conjugacy_class_poly(ctx, &members)?,
            members: Some(members),
        })
    };
    Ok(vec![
        rational("single-int", vec![ctx.from_int(2)])?,
        rational("single-e", vec![e1.clone()])?,
        rational("pair-int", vec![ctx.from_int(1), ctx.from_int(2)])?,
        rational("pair-e", vec![e1.clone(), e2.clone()])?,
        rational("triple", vec![ctx.from_int(0), ctx.from_int(1), ctx.from_int(-1)])?,
        ConjugacyCase {
            name: "sqrt-e1",
            coeffs: vec![e1.neg(), ctx.from_int(0)],
            members: None,
        },
        ConjugacyCase {
            name: "sqrt-e2-shifted",
            coeffs: vec![e2.neg(), ctx.from_int(-2)],
            members: None,
        },
        ConjugacyCase {
            name: "sqrt-rational",
            coeffs: vec![ctx.from_int(-2), ctx.from_int(0)],
            members: None,
        },
    ])
}

/// All witness formulas in one free variable `x` consisting of a single
/// projective block of the given arity and one equation
/// `Σ_j p_j(x)·z_j = 0`, with every `p_j` of degree at most `max_deg` and
/// integer coefficients in `[-bound, bound]`, not all zero.  Enumeration
/// order is deterministic; at most `cap` formulas are produced.
pub fn enumerate_witness_formulas(
    ctx: &PairContext,
    arity: usize,
    max_deg: u32,
    bound: i64,
    cap: usize,
) -> Result<Vec<TameFormula>> {
    let x_names = vec!["x".to_string()];
    let blocks = vec![ZetaBlock::projective("z", arity)];
    let ring = TameFormula::build_ring(ctx, &x_names, &blocks)?;
    let x = Polynomial::var(ring.clone(), ring.var_index("x").expect("x variable"));
    let zvars: Vec<Polynomial> = (0..arity)
        .map(|j| {
            let name = format!("z_{j}");
            Polynomial::var(ring.clone(), ring.var_index(&name).expect("z variable"))
        })
        .collect();
    let xpows: Vec<Polynomial> = (0..=max_deg).map(|d| x.pow(d)).collect();
    let slots = arity * (max_deg as usize + 1);
    let width = (2 * bound + 1) as usize;
    let mut coeffs = vec![0usize; slots];
    let mut out = Vec::new();
    'odometer: loop {
        if coeffs.iter().any(|&c| c != bound as usize) {
            let mut p = Polynomial::zero(ring.clone());
            for (slot, &ci) in coeffs.iter().enumerate() {
                let c = ci as i64 - bound;
                if c == 0 {
                    continue;
                }
                let j = slot / (max_deg as usize + 1);
                let d = slot % (max_deg as usize + 1);
                let term = Polynomial::constant(ring.clone(), crate::field::Scalar::from_int(c))
                    .mul(&xpows[d])
                    .mul(&zvars[j]);
                p = p.add(&term);
            }
            out.push(TameFormula::new(
                ctx.clone(),
                x_names.clone(),
                blocks.clone(),
                vec![p],
                vec![],
            )?);
            if out.len() >= cap {
                break;
            }
        }
        for slot in 0..slots {
            coeffs[slot] += 1;
            if coeffs[slot] < width {
                continue 'odometer;
            }
            coeffs[slot] = 0;
        }
        break;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{rm_rank, tame_eval};

    #[test]
    fn catalog_ranks_are_reproduced() {
        let ctx = standard_context();
        for case in rank_catalog(&ctx).unwrap() {
            let got = rm_rank(&ctx, &case.tuple, &case.base).unwrap();
            assert_eq!(got, case.expected, "rank mismatch for {}", case.name);
        }
    }

    #[test]
    fn samplers_are_deterministic_and_truthful() {
        let ctx = standard_context();
        let mut r1 = seeded_rng(7);
        let mut r2 = seeded_rng(7);
        for _ in 0..40 {
            let (a, in_e) = sample_element_with_membership(&ctx, &mut r1);
            let (b, in_e2) = sample_element_with_membership(&ctx, &mut r2);
            assert_eq!(a, b);
            assert_eq!(in_e, in_e2);
            assert_eq!(a.is_e_only(&ctx), in_e, "ground truth broken for {a}");
        }
    }

    #[test]
    fn lambda_instances_have_nonzero_leading_value() {
        let ctx = standard_context();
        for (a0, basis) in lambda_instances(&ctx).unwrap() {
            let lv = crate::pairs::lambda_eval(&ctx, &a0, &basis).unwrap();
            assert!(!lv[0].is_zero(), "leading λ-value vanished for {a0}");
        }
    }

    #[test]
    fn enumeration_is_exhaustive_and_valid() {
        let ctx = standard_context();
        let formulas = enumerate_witness_formulas(&ctx, 1, 2, 2, 10_000).unwrap();
        // 5^3 coefficient tuples minus the zero tuple.
        assert_eq!(formulas.len(), 124);
        for phi in &formulas {
            assert_eq!(phi.blocks().len(), 1);
            assert_eq!(phi.blocks()[0].arity, 1);
            assert_eq!(phi.polys().len(), 1);
        }
        // The same call enumerates identically.
        let again = enumerate_witness_formulas(&ctx, 1, 2, 2, 10_000).unwrap();
        assert_eq!(formulas.len(), again.len());
        assert!(formulas.iter().zip(&again).all(|(a, b)| a == b));
        // Capping truncates deterministically.
        let capped = enumerate_witness_formulas(&ctx, 1, 2, 2, 10).unwrap();
        assert_eq!(capped.len(), 10);
        assert!(capped.iter().zip(&formulas).all(|(a, b)| a == b));
    }

    #[test]
    fn probes_agree_with_membership_formula() {
        let ctx = standard_context();
        let blocks = vec![ZetaBlock::projective("z", 2)];
        let names = vec!["x".to_string()];
        let ring = TameFormula::build_ring(&ctx, &names, &blocks).unwrap();
        let x = Polynomial::var(ring.clone(), ring.var_index("x").unwrap());
        let z0 = Polynomial::var(ring.clone(), ring.var_index("z_0").unwrap());
        let z1 = Polynomial::var(ring.clone(), ring.var_index("z_1").unwrap());
        let member = TameFormula::new(
            ctx.clone(),
            names,
            blocks,
            vec![z1.sub(&x.mul(&z0))],
            vec![],
        )
        .unwrap();
        for (probe, expect) in membership_probes(&ctx).unwrap() {
            assert_eq!(tame_eval(&member, &[probe.clone()]).unwrap(), expect);
        }
    }
}
