mod common;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

use common::rat;
use siegel_core::arith::primes_up_to;
use siegel_core::bounds::{forms, form_leq, BoundInput, Evaluator, LogForm};
use siegel_core::exactnum::{lm_add, lm_leq_certified, lm_scale, ln_interval, LogMagnitude, Verdict};
use siegel_core::heights::{height_algebraic, height_rational, AlgebraicNumber};
use siegel_core::modgroup::{coset_enumeration, cusps, make_subgroup, SubgroupKind};
use siegel_core::numfield::{build_place_set, infinite_places, split_prime, NumberField};
use siegel_core::poly::IntPoly;

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1u64..u64::MAX, 1u64..u64::MAX).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn overlaps(a: &LogMagnitude, b: &LogMagnitude) -> bool {
    a.lo() <= b.hi() && b.lo() <= a.hi()
}

fn leq(a: &LogForm, b: &LogForm) -> Verdict {
    form_leq(a, b, &mut Evaluator::new(256)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ln_refines_monotonically(q in positive_rational(), k in 64u32..512) {
        let coarse = ln_interval(&q, k).unwrap();
        let fine = ln_interval(&q, 2 * k).unwrap();
        prop_assert!(fine.width() <= coarse.width());
        prop_assert!(overlaps(&coarse, &fine));
    }

    #[test]
    fn ln_of_product_is_sum_of_ln(a in positive_rational(), b in positive_rational()) {
        let lhs = ln_interval(&(&a * &b), 128).unwrap();
        let rhs = lm_add(&ln_interval(&a, 128).unwrap(), &ln_interval(&b, 128).unwrap());
        prop_assert!(overlaps(&lhs, &rhs));
    }

    #[test]
    fn ln_is_monotone(a in positive_rational(), b in positive_rational()) {
        prop_assume!(a < b);
        let v = lm_leq_certified(&ln_interval(&b, 128).unwrap(), &ln_interval(&a, 128).unwrap());
        prop_assert_ne!(v, Verdict::True);
    }

    #[test]
    fn exact_intervals_compose_exactly(r in -10_000i64..10_000, s in -10_000i64..10_000, kn in -100i64..100, kd in 1i64..100) {
        let x = LogMagnitude::exact(rat(r, 7));
        let y = LogMagnitude::exact(rat(s, 11));
        let k = rat(kn, kd);
        prop_assert_eq!(lm_add(&x, &y), LogMagnitude::exact(rat(r, 7) + rat(s, 11)));
        prop_assert_eq!(lm_scale(&x, &k), LogMagnitude::exact(rat(r, 7) * k));
    }

    #[test]
    fn rational_height_inversion_and_powers(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000, n in 1u32..=5) {
        prop_assume!(a != 0);
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let h = height_rational(&a, &b).unwrap();
        prop_assert_eq!(height_rational(&b, &a).unwrap(), h.clone());
        let hn = height_rational(&a.pow(n), &b.pow(n)).unwrap();
        prop_assert_eq!(hn.exp_height(), &h.exp_height().pow(n));
        prop_assert!(h.exp_height() >= &BigUint::one());
    }

    #[test]
    fn algebraic_heights_are_nonnegative(a in -20i64..20, b in -20i64..20) {
        let f = IntPoly::from_i64(&[b, a, 1]);
        prop_assume!(siegel_core::poly::is_irreducible(&f));
        let alpha = AlgebraicNumber::new(f).unwrap();
        let h = height_algebraic(&alpha, &rat(1, 1_000_000)).unwrap();
        prop_assert!(!h.hi().is_negative());
    }
}

fn squarefree(n: i64) -> bool {
    let m = n.unsigned_abs();
    (2..=m).take_while(|q| q * q <= m).all(|q| !m.is_multiple_of(q * q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadratic_fields_split_consistently(n in -500i64..500, qi in 0usize..25) {
        prop_assume!(n != 0 && n != 1 && squarefree(n) && n.rem_euclid(4) != 1);
        let k = NumberField::new(IntPoly::from_i64(&[-n, 0, 1]), None).unwrap();
        prop_assert_eq!(k.disc(), &BigInt::from(4 * n));
        let (r1, r2) = infinite_places(&k);
        prop_assert_eq!(r1 + 2 * r2, 2);
        let q = primes_up_to(100)[qi];
        let places = split_prime(&k, q).unwrap();
        let total: u32 = places.iter().map(|v| v.residue_degree * v.ramification_index).sum();
        prop_assert_eq!(total, 2);
        // sum over v | q of ln N(v) = (sum f_v) ln q
        let lhs = places.iter().fold(LogForm::zero(), |acc, v| acc.add(&LogForm::ln_int(&v.norm())));
        let f_sum: u64 = places.iter().map(|v| v.residue_degree as u64).sum();
        prop_assert!(lhs.sub(&LogForm::ln_u64(q).scale_int(f_sum)).is_zero());
        let s = build_place_set(&k, &[q]).unwrap();
        prop_assert_eq!(s.s, r1 + r2 + places.len());
        prop_assert_eq!(s.ell, q);
    }

    #[test]
    fn subgroups_are_closed_and_widths_fill_cosets(n in 2u64..40, which in 0usize..3, seed in any::<u64>()) {
        let kind = [SubgroupKind::Gamma0, SubgroupKind::GammaFull, SubgroupKind::Gamma1][which].clone();
        let g = make_subgroup(kind, n).unwrap();
        prop_assert!(g.check_closure(32, seed).is_ok());
        if g.contains_minus_id() {
            let c = cusps(&g).unwrap();
            prop_assert_eq!(c.width_sum(), coset_enumeration(&g).unwrap().index());
        }
    }

    #[test]
    fn tilde_closure(pi in 4usize..20, seed in any::<u64>()) {
        let p = primes_up_to(80)[pi];
        let g = make_subgroup(SubgroupKind::GammaTilde, p).unwrap();
        prop_assert!(g.check_closure(32, seed).is_ok());
    }

    #[test]
    fn bounds_grow_with_each_parameter(
        pi in 0usize..6, d in 1u64..4, s in 1u64..6, disc_i in 0usize..3, ell_i in 0usize..2, which in 0usize..5,
    ) {
        let p = [11u64, 17, 19, 23, 29, 31][pi];
        let abs_disc = [1u64, 4, 5][disc_i];
        let ell = [2u64, 3][ell_i];
        let norms = vec![ell; (s as usize).max(2) - 1];
        let base = BoundInput::new(p, d, abs_disc, s, ell, &norms);
        let mut up = base.clone();
        match which {
            0 => up.p = [17u64, 19, 23, 29, 31, 37][pi],
            1 => up.d += 1,
            2 => up.s += 1,
            3 => up.abs_disc *= 1000u32,
            _ => up.ell = 97,
        }
        for (lo, hi) in [
            (forms::main_precise(&base), forms::main_precise(&up)),
            (forms::main_simplified(&base), forms::main_simplified(&up)),
            (
                forms::delta_p(base.p, base.d, &base.abs_disc, &base.finite_norms),
                forms::delta_p(up.p, up.d, &up.abs_disc, &up.finite_norms),
            ),
        ] {
            prop_assert_eq!(leq(&lo, &hi), Verdict::True);
        }
    }

    #[test]
    fn bounds_grow_with_norms(k in 1usize..5, bump in 1u32..1000) {
        let norms: Vec<u64> = vec![3; k];
        let base = BoundInput::new(11, 2, 4, k as u64 + 1, 3, &norms);
        let mut up = base.clone();
        up.finite_norms[0] += bump;
        prop_assert_eq!(leq(&forms::main_precise(&base), &forms::main_precise(&up)), Verdict::True);
        prop_assert_eq!(leq(&forms::main_simplified(&base), &forms::main_simplified(&up)), Verdict::True);
    }
}
