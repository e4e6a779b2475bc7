use std::sync::Arc;

use kvcert::carlitz::{beta, beta_mod, gamma, gamma_mod};
use kvcert::fields::{field_from_q, FieldSpec};
use kvcert::polyring::{enumerate_monic, norm_theta, Poly, ResidueCtx, Var};
use kvcert::witt::make_witt_ctx;
use num_bigint::BigUint;
use proptest::prelude::*;

fn fields() -> Vec<Arc<FieldSpec>> {
    vec![
        field_from_q(2, None).unwrap(),
        field_from_q(3, None).unwrap(),
        field_from_q(4, Some("a^2+a+1")).unwrap(),
        field_from_q(5, None).unwrap(),
        field_from_q(9, Some("a^2+1")).unwrap(),
    ]
}

fn poly(f: &Arc<FieldSpec>, codes: &[u32], var: Var) -> Poly {
    let coeffs = codes
        .iter()
        .map(|&c| f.from_code(c % f.q()).unwrap())
        .collect();
    Poly::new(f.clone(), coeffs, var)
}

fn irreducibles(f: &Arc<FieldSpec>, d: usize) -> Vec<Poly> {
    enumerate_monic(f, d, Var::T)
        .filter(|p| p.is_irreducible().unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn divmod_reconstructs(fi in 0usize..5, a in prop::collection::vec(0u32..9, 0..14), b in prop::collection::vec(0u32..9, 1..7)) {
        let f = &fields()[fi];
        let a = poly(f, &a, Var::T);
        let b = poly(f, &b, Var::T);
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.deg() < b.deg());
    }

    #[test]
    fn display_reparses(fi in 0usize..5, a in prop::collection::vec(0u32..9, 0..10), theta in any::<bool>()) {
        let f = &fields()[fi];
        let var = if theta { Var::Theta } else { Var::T };
        let a = poly(f, &a, var);
        prop_assert_eq!(Poly::parse(&a.to_string(), f, var).unwrap(), a);
    }

    #[test]
    fn powmod_matches_repeated_product(fi in 0usize..5, a in prop::collection::vec(0u32..9, 0..8), m in prop::collection::vec(0u32..9, 1..6), e in 0u64..40) {
        let f = &fields()[fi];
        let mut m = poly(f, &m, Var::T);
        prop_assume!(m.deg() >= 1);
        m = m.make_monic();
        let a = poly(f, &a, Var::T);
        let ctx = ResidueCtx::new(&m).unwrap();
        let fast = ctx.powmod(&a, &BigUint::from(e));
        prop_assert_eq!(fast, a.pow(e).rem(&m).unwrap());
    }

    #[test]
    fn norm_is_multiplicative(fi in 0usize..5, a in prop::collection::vec(0u32..9, 0..4), b in prop::collection::vec(0u32..9, 0..4)) {
        let f = &fields()[fi];
        let a = poly(f, &a, Var::Theta);
        let b = poly(f, &b, Var::Theta);
        let nab = norm_theta(&a.mul(&b)).unwrap();
        prop_assert_eq!(nab, norm_theta(&a).unwrap().mul(&norm_theta(&b).unwrap()));
    }

    #[test]
    fn reduction_commutes_with_exact_sums(fi in 0usize..3, d in 1usize..4, pick in any::<usize>(), n in 1u64..120) {
        let f = &fields()[fi];
        let q = f.q() as u64;
        prop_assume!(n % (q - 1) != 0 || q == 2);
        let ps = irreducibles(f, d);
        let p = &ps[pick % ps.len()];
        prop_assume!(n % (q.pow(d as u32) - 1) != 0);
        let ctx = ResidueCtx::new(p).unwrap();
        let nb = BigUint::from(n);
        prop_assert_eq!(gamma_mod(&nb, &ctx).unwrap(), gamma(f, n).unwrap().rem(p).unwrap());
        if n % (q - 1) != 0 {
            prop_assert_eq!(beta_mod(&nb, &ctx).unwrap(), beta(f, n).unwrap().rem(p).unwrap());
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_section(fi in 0usize..5, pick in any::<usize>(), a in prop::collection::vec(0u32..9, 0..3), b in prop::collection::vec(0u32..9, 0..3)) {
        let f = &fields()[fi];
        let ps = irreducibles(f, 2);
        let p = &ps[pick % ps.len()];
        let w = make_witt_ctx(p, 3).unwrap();
        let a = poly(f, &a, Var::T).rem(p).unwrap();
        let b = poly(f, &b, Var::T).rem(p).unwrap();
        let ta = w.teichmuller(&a);
        prop_assert_eq!(w.reduce_mod_p(&ta), a.clone());
        let tab = w.teichmuller(&a.mul(&b));
        let prod = w.mul(&ta, &w.teichmuller(&b));
        prop_assert_eq!(tab.residues(), prod.residues());
    }
}
