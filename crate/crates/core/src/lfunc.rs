//! Values at `X = 1` of the `L`-functions attached to powers of the
//! Teichmüller character `omega_P`, as finite character sums in the
//! truncated Witt ring of `A/P`.
//!
//! For a nontrivial character the full stratum `A_d` sums to zero (its
//! elements cover each class of `A/P` exactly once), so every `L`-value here is a
//! sum over strata `m < d`, and the stratum `m = d` is summed anyway and
//! checked to vanish. The `psi`-twisted values need the stratum `m = d`
//! because `psi(i(a))` is not constant on it.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::carlitz::{beta_mod, gamma_mod, monic_low_coeffs};
use crate::error::{Error, Result};
use crate::fields::FqElem;
use crate::polyring::{monic_count, norm_exponent, norm_theta, Exponent, Poly, ResidueCtx, Var};
use crate::witt::{make_witt_ctx, CycloElem, WittCtx, WittElem};

/// Default `p`-adic precision.
pub const DEFAULT_PRECISION: u32 = 2;

/// Cap on the number of `theta`-ring monics visited by [`LContext::lvalue_tilde`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TildeBudget(pub u64);

impl Default for TildeBudget {
    fn default() -> Self {
        TildeBudget(20_000_000)
    }
}

/// Multiplicity of each residue `a^n mod P`, split by `i(a)`.
type ClassCounts = HashMap<Vec<FqElem>, Vec<u64>>;

/// `P`, the exponent `n`, and the Witt ring in which `omega_P^n` takes values.
pub struct LContext {
    residue: ResidueCtx,
    witt: WittCtx,
    n: BigUint,
    n_exp: Exponent,
    i_p: u32,
    teich: Mutex<HashMap<Vec<FqElem>, WittElem>>,
    /// `strata[m][w] = sum_{a in A_m, i(a) = w} omega_P(a)^n` for `m <= d`.
    strata: OnceLock<Vec<Vec<WittElem>>>,
}

impl std::fmt::Debug for LContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LContext")
            .field("witt", &self.witt)
            .field("n", &self.n)
            .finish()
    }
}

/// Outcome of comparing the two sides of the `pi^2`-divisibility criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prop31Report {
    /// `L(1, L/k, psi omega_P^n)` is divisible by `(zeta_p - 1)^2`.
    pub lhs: bool,
    /// `P | beta(n)` and `P | gamma(n)`.
    pub rhs: bool,
    pub agree: bool,
}

impl LContext {
    /// Requires `P` monic irreducible, `n >= 1` and `(q^d - 1) ∤ n`.
    pub fn new(prime: &Poly, n: &BigUint, k: u32) -> Result<LContext> {
        let prime = prime.clone().with_var(Var::T);
        let witt = make_witt_ctx(&prime, k)?;
        let residue = ResidueCtx::new(&prime)?;
        if n.is_zero() {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        let order = witt.q_pow_d() - 1u32;
        if (n % &order).is_zero() {
            return Err(Error::Precondition(format!(
                "q^d - 1 = {order} divides n; the character is trivial"
            )));
        }
        let i_p = prime.i_value()?;
        Ok(LContext {
            residue,
            witt,
            n: n.clone(),
            n_exp: Exponent::new(n),
            i_p,
            teich: Mutex::new(HashMap::new()),
            strata: OnceLock::new(),
        })
    }

    pub fn witt(&self) -> &WittCtx {
        &self.witt
    }

    pub fn prime(&self) -> &Poly {
        self.residue.modulus()
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn degree(&self) -> usize {
        self.residue.degree()
    }

    /// `i(P)`.
    pub fn i_p(&self) -> u32 {
        self.i_p
    }

    fn require_i_nonzero(&self) -> Result<()> {
        if self.i_p == 0 {
            return Err(Error::Precondition(format!(
                "i(P) = 0 for P = {}",
                self.prime()
            )));
        }
        Ok(())
    }

    fn teichmuller_cached(&self, r: &[FqElem]) -> WittElem {
        if let Some(w) = self.teich.lock().unwrap().get(r) {
            return w.clone();
        }
        let w = self.witt.teichmuller_residue(r);
        self.teich.lock().unwrap().insert(r.to_vec(), w.clone());
        w
    }

    /// `omega_P(a)^n = omega_P(a^n mod P)`, zero when `P | a`.
    pub fn omega_pow(&self, a: &Poly) -> WittElem {
        let r = self.residue.residue(a);
        if r.iter().all(|c| c.is_zero()) {
            return self.witt.zero();
        }
        self.teichmuller_cached(&self.residue.pow_vec(&r, &self.n_exp))
    }

    /// `sum_r count[r][w] * teich(r)` for each class `w`, filling the cache.
    fn weigh_counts(&self, counts: ClassCounts) -> Vec<WittElem> {
        let p = self.witt.p() as usize;
        let pk = self.witt.modulus();
        let missing: Vec<Vec<FqElem>> = {
            let cache = self.teich.lock().unwrap();
            counts
                .keys()
                .filter(|r| !cache.contains_key(*r))
                .cloned()
                .collect()
        };
        let fresh: Vec<(Vec<FqElem>, WittElem)> = missing
            .into_par_iter()
            .map(|r| {
                let w = self.witt.teichmuller_residue(&r);
                (r, w)
            })
            .collect();
        let mut cache = self.teich.lock().unwrap();
        cache.extend(fresh);
        let mut out = vec![self.witt.zero(); p];
        for (r, cs) in counts {
            let t = &cache[&r];
            for (w, &c) in cs.iter().enumerate() {
                if c % pk != 0 {
                    out[w] = self
                        .witt
                        .add(&out[w], &self.witt.scale_int(t, (c % pk) as i64));
                }
            }
        }
        out
    }

    /// Counts of `(a^n mod P, i(a))` over the stratum `A_m`.
    fn stratum_counts(&self, m: usize) -> ClassCounts {
        let field = self.residue.field();
        let p = field.p() as usize;
        let count = monic_count(field, m)
            .to_u64()
            .expect("stratum size fits u64");
        let merge = |mut a: ClassCounts, b: ClassCounts| {
            for (k, v) in b {
                let e = a.entry(k).or_insert_with(|| vec![0; p]);
                for (x, y) in e.iter_mut().zip(v) {
                    *x += y;
                }
            }
            a
        };
        (0..count)
            .into_par_iter()
            .fold(ClassCounts::new, |mut acc, idx| {
                let low = monic_low_coeffs(field, m, idx);
                let r = self.residue.monic_residue(&low);
                if r.iter().all(|c| c.is_zero()) {
                    return acc;
                }
                let w = if m == 0 {
                    0
                } else {
                    field.trace(low[m - 1]) as usize
                };
                let key = self.residue.pow_vec(&r, &self.n_exp);
                acc.entry(key).or_insert_with(|| vec![0; p])[w] += 1;
                acc
            })
            .reduce(ClassCounts::new, merge)
    }

    fn strata(&self) -> &Vec<Vec<WittElem>> {
        self.strata.get_or_init(|| {
            (0..=self.degree())
                .map(|m| self.weigh_counts(self.stratum_counts(m)))
                .collect()
        })
    }

    fn stratum_total(&self, classes: &[WittElem]) -> WittElem {
        classes
            .iter()
            .fold(self.witt.zero(), |acc, x| self.witt.add(&acc, x))
    }

    /// `L(1, K_P/k, omega_P^n) = sum_{m < d} sum_{a in A_m} omega_P(a)^n`.
    pub fn lvalue_base(&self) -> Result<WittElem> {
        let strata = self.strata();
        let d = self.degree();
        if !self.stratum_total(&strata[d]).is_zero() {
            return Err(Error::Invariant(format!(
                "stratum m = {d} of the omega^n sum is not zero"
            )));
        }
        Ok(strata[..d].iter().fold(self.witt.zero(), |acc, s| {
            self.witt.add(&acc, &self.stratum_total(s))
        }))
    }

    /// `sum_{m <= d} sum_{a in A_m} i(a) omega_P(a)^n`.
    pub fn gamma_witt_sum(&self) -> Result<WittElem> {
        let mut acc = self.witt.zero();
        for s in self.strata() {
            for (w, x) in s.iter().enumerate().skip(1) {
                acc = self.witt.add(&acc, &self.witt.scale_int(x, w as i64));
            }
        }
        Ok(acc)
    }

    /// Coefficients `c_m = sum_{a in A_m} psi^j(i(a)) omega_P(a)^n`, `m = 0..=d`,
    /// of the twisted `L`-polynomial in `X`.
    pub fn psi_coefficients(&self, j: u64) -> Result<Vec<CycloElem>> {
        if !j.is_multiple_of(self.witt.p()) {
            self.require_i_nonzero()?;
        }
        let w = &self.witt;
        let zetas: Vec<CycloElem> = (0..w.p()).map(|i| w.zeta_pow((i * j) as i64)).collect();
        Ok(self
            .strata()
            .iter()
            .map(|s| {
                s.iter().zip(&zetas).fold(w.cyclo_zero(), |acc, (x, z)| {
                    w.cyclo_add(&acc, &w.cyclo_scale(z, x))
                })
            })
            .collect())
    }

    /// `L(1, L/k, psi^j omega_P^n)`, `psi` sending `1` to `zeta_p`.
    pub fn lvalue_psi(&self, j: u64) -> Result<CycloElem> {
        let w = &self.witt;
        Ok(self
            .psi_coefficients(j)?
            .iter()
            .fold(w.cyclo_zero(), |acc, c| w.cyclo_add(&acc, c)))
    }

    /// `L(1, L/k~, omega~_P^n)`: the sum over `theta`-monics `a~` of degree
    /// `< pd` of `omega_P(Nm a~)^n`. The stratum `m = pd` is summed and must
    /// vanish.
    pub fn lvalue_tilde(&self, budget: TildeBudget) -> Result<WittElem> {
        self.require_i_nonzero()?;
        let field = self.residue.field();
        let top = self.witt.p() as usize * self.degree();
        let visits: BigUint = (0..=top).map(|m| monic_count(field, m)).sum();
        if visits > BigUint::from(budget.0) {
            return Err(Error::Budget(format!(
                "{visits} theta-ring monics exceed the budget {}",
                budget.0
            )));
        }
        self.check_norm_compatibility(10)?;
        let mut total = self.witt.zero();
        for m in 0..=top {
            let counts = self.tilde_stratum_counts(m)?;
            let value = self.stratum_total(&self.weigh_counts(counts));
            if m == top {
                if !value.is_zero() {
                    return Err(Error::Invariant(format!(
                        "stratum m = {top} of the theta-ring sum is not zero"
                    )));
                }
            } else {
                total = self.witt.add(&total, &value);
            }
        }
        Ok(total)
    }

    fn tilde_stratum_counts(&self, m: usize) -> Result<ClassCounts> {
        let field = self.residue.field();
        let p = field.p() as usize;
        let count = monic_count(field, m)
            .to_u64()
            .expect("stratum size fits u64");
        let merge = |a: Result<ClassCounts>, b: Result<ClassCounts>| {
            let (mut a, b) = (a?, b?);
            for (k, v) in b {
                let e = a.entry(k).or_insert_with(|| vec![0; p]);
                for (x, y) in e.iter_mut().zip(v) {
                    *x += y;
                }
            }
            Ok(a)
        };
        (0..count)
            .into_par_iter()
            .fold(
                || Ok(ClassCounts::new()),
                |acc: Result<ClassCounts>, idx| {
                    let mut acc = acc?;
                    let mut coeffs = monic_low_coeffs(field, m, idx);
                    coeffs.push(FqElem::ONE);
                    let a = Poly::new(field.clone(), coeffs, Var::Theta);
                    let r = self.residue.residue(&norm_theta(&a)?);
                    if !r.iter().all(|c| c.is_zero()) {
                        let key = self.residue.pow_vec(&r, &self.n_exp);
                        acc.entry(key).or_insert_with(|| vec![0; p])[0] += 1;
                    }
                    Ok(acc)
                },
            )
            .reduce(|| Ok(ClassCounts::new()), merge)
    }

    /// For `count` pseudo-random `a~` prime to `Q = P(theta^p - theta)`,
    /// checks that `Nm(a~) mod P`, read in `F_q[theta]/Q` through
    /// `T -> theta^p - theta`, equals `a~^((q^{pd}-1)/(q^d-1)) mod Q`.
    pub fn check_norm_compatibility(&self, count: usize) -> Result<()> {
        let field = self.residue.field();
        let p = field.p() as usize;
        let d = self.degree();
        let as_theta = Poly::artin_schreier(field, Var::Theta);
        let q_theta = self.prime().clone().with_var(Var::Theta).compose(&as_theta);
        let q_ctx = ResidueCtx::new(&q_theta)?;
        let e = norm_exponent(field, p * d, d);
        let mut rng = SplitMix64::seed_from_u64(0x6e6f726d);
        let mut checked = 0;
        while checked < count {
            let deg = (rng.next_u64() % (p * d) as u64) as usize;
            let mut coeffs: Vec<FqElem> = (0..deg)
                .map(|_| {
                    field
                        .from_code((rng.next_u64() % field.q() as u64) as u32)
                        .unwrap()
                })
                .collect();
            coeffs.push(FqElem::ONE);
            let a = Poly::new(field.clone(), coeffs, Var::Theta);
            if !a.gcd(&q_theta).is_constant() {
                continue;
            }
            let lhs = q_ctx.reduce(&self.residue.reduce(&norm_theta(&a)?).compose(&as_theta));
            let rhs = q_ctx.powmod(&a, &e);
            if lhs != rhs {
                return Err(Error::Invariant(format!(
                    "norm compatibility fails for {a}"
                )));
            }
            checked += 1;
        }
        Ok(())
    }

    /// `psi omega^n`-value minus `L(1, omega^n) + (zeta_p - 1) * gamma-sum`
    /// is divisible by `(zeta_p - 1)^2`.
    pub fn prop31_congruence(&self) -> Result<bool> {
        let w = &self.witt;
        let lhs = self.lvalue_psi(1)?;
        let pi = w.cyclo_sub(&w.zeta(), &w.cyclo_one());
        let rhs = w.cyclo_add(
            &w.cyclo_embed(&self.lvalue_base()?),
            &w.cyclo_scale(&pi, &self.gamma_witt_sum()?),
        );
        w.pi_divisible(&w.cyclo_sub(&lhs, &rhs), 2)
    }

    /// Compares `(zeta_p - 1)^2 | L(1, L/k, psi omega_P^n)` with
    /// `P | beta(n)` and `P | gamma(n)`.
    pub fn prop31_check(&self) -> Result<Prop31Report> {
        let p = self.witt.p();
        if p == 2 {
            return Err(Error::Precondition(
                "the pi-divisibility criterion needs odd p".into(),
            ));
        }
        let q1 = self.residue.field().q() as u64 - 1;
        if (&self.n % q1).is_zero() {
            return Err(Error::Precondition(format!("n is divisible by q-1 = {q1}")));
        }
        self.require_i_nonzero()?;
        let lhs = self.witt.pi_divisible(&self.lvalue_psi(1)?, 2)?;
        let rhs = beta_mod(&self.n, &self.residue)?.is_zero()
            && gamma_mod(&self.n, &self.residue)?.is_zero();
        Ok(Prop31Report {
            lhs,
            rhs,
            agree: lhs == rhs,
        })
    }

    /// `prod_{j=0}^{p-1} L(1, L/k, psi^j omega_P^n)` as an element of `W_k`.
    pub fn psi_product(&self) -> Result<WittElem> {
        let w = &self.witt;
        let mut acc = w.cyclo_one();
        for j in 0..w.p() {
            acc = w.cyclo_mul(&acc, &self.lvalue_psi(j)?);
        }
        if acc.coords[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant(
                "product over all psi-twists is not in W_k".into(),
            ));
        }
        Ok(acc.coords.swap_remove(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::{beta, gamma};
    use crate::fields::make_field;
    use crate::polyring::enumerate_monic;

    fn poly(q: (u64, u32), s: &str) -> Poly {
        Poly::parse(s, &make_field(q.0, q.1, None).unwrap(), Var::T).unwrap()
    }

    fn lctx(p: &Poly, n: u64, k: u32) -> LContext {
        LContext::new(p, &BigUint::from(n), k).unwrap()
    }

    fn irreducibles(q: (u64, u32), d: usize) -> Vec<Poly> {
        let f = make_field(q.0, q.1, None).unwrap();
        enumerate_monic(&f, d, Var::T)
            .filter(|p| p.is_irreducible().unwrap())
            .collect()
    }

    #[test]
    fn omega_pow_examples() {
        let p = poly((3, 1), "T^3-T^2+1");
        let l = lctx(&p, 5, 2);
        assert!(l.omega_pow(&p).is_zero());
        assert_eq!(l.omega_pow(&Poly::one(p.field(), Var::T)), l.witt().one());
        let f = p.field().clone();
        let mut state = 7u64;
        for _ in 0..50 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let coeffs = (0..5)
                .map(|i| f.from_int(((state >> (10 + 7 * i)) % 3) as i64))
                .collect();
            let a = Poly::new(f.clone(), coeffs, Var::T);
            let direct = l
                .witt()
                .pow(&l.witt().teichmuller(&a), &BigUint::from(5u32));
            assert_eq!(l.omega_pow(&a), direct);
        }
    }

    #[test]
    fn trivial_character_rejected() {
        let p = poly((3, 1), "T^2+1");
        assert!(matches!(
            LContext::new(&p, &BigUint::from(8u32), 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            LContext::new(&p, &BigUint::zero(), 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn worked_examples_vanish() {
        let p = poly((3, 1), "T^3-T^2+1");
        let l = lctx(&p, 13, 1);
        assert!(l.lvalue_base().unwrap().is_zero());
        assert!(l.gamma_witt_sum().unwrap().is_zero());
        assert!(l.lvalue_tilde(TildeBudget::default()).unwrap().is_zero());
        let l = lctx(&p, 13, 2);
        assert_eq!(
            l.prop31_check().unwrap(),
            Prop31Report {
                lhs: true,
                rhs: true,
                agree: true
            }
        );
    }

    #[test]
    fn char2_worked_example_divisible_by_four() {
        let p = poly((2, 2), "T^5+a^2*T^4+T^3+a*T^2+a^2");
        let l = lctx(&p, 341, 2);
        assert_eq!(l.i_p(), 1);
        assert!(l.lvalue_base().unwrap().is_zero());
    }

    #[test]
    fn reductions_match_carlitz_sums() {
        for d in 1..=3 {
            for p in irreducibles((3, 1), d) {
                let ctx = ResidueCtx::new(&p).unwrap();
                let order = 3u64.pow(d as u32) - 1;
                for n in (1..=50u64).filter(|n| n % order != 0) {
                    let l = lctx(&p, n, 2);
                    let w = l.witt();
                    let nb = BigUint::from(n);
                    assert_eq!(
                        w.reduce_mod_p(&l.lvalue_base().unwrap()),
                        beta_mod(&nb, &ctx).unwrap(),
                        "{p} {n}"
                    );
                    let g = gamma_mod(&nb, &ctx).unwrap();
                    let gw = l.gamma_witt_sum().unwrap();
                    assert_eq!(w.reduce_mod_p(&gw), g);
                    assert_eq!(
                        l.lvalue_psi(0).unwrap(),
                        w.cyclo_embed(&l.lvalue_base().unwrap())
                    );
                }
            }
        }
        // cross-check the two against the exact polynomials once
        let p = poly((3, 1), "T^2+1");
        let l = lctx(&p, 7, 2);
        let f = p.field().clone();
        assert_eq!(
            l.witt().reduce_mod_p(&l.lvalue_base().unwrap()),
            beta(&f, 7).unwrap().rem(&p).unwrap()
        );
        assert_eq!(
            l.witt().reduce_mod_p(&l.gamma_witt_sum().unwrap()),
            gamma(&f, 7).unwrap().rem(&p).unwrap()
        );
    }

    #[test]
    fn prop31_congruence_and_equivalence_quadratics() {
        for p in irreducibles((3, 1), 2)
            .into_iter()
            .filter(|p| p.i_value().unwrap() != 0)
        {
            for n in (1..=7u64).filter(|n| n % 2 != 0) {
                let l = lctx(&p, n, 2);
                assert!(l.prop31_congruence().unwrap(), "{p} {n}");
                assert!(l.prop31_check().unwrap().agree, "{p} {n}");
            }
        }
        let p = poly((3, 1), "T^3-T^2+1");
        assert!(matches!(
            lctx(&p, 2, 2).prop31_check(),
            Err(Error::Precondition(_))
        ));
        let t = poly((3, 1), "T^2+1");
        assert!(matches!(
            lctx(&t, 1, 2).prop31_check(),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn product_over_twists_matches_theta_ring() {
        let ps: Vec<Poly> = irreducibles((3, 1), 2)
            .into_iter()
            .filter(|p| p.i_value().unwrap() != 0)
            .collect();
        assert!(!ps.is_empty());
        for p in &ps {
            for n in [1u64, 2, 3, 5, 7] {
                let l = lctx(p, n, 2);
                assert_eq!(
                    l.psi_product().unwrap(),
                    l.lvalue_tilde(TildeBudget::default()).unwrap(),
                    "{p} {n}"
                );
            }
        }
    }

    #[test]
    fn tilde_budget_and_hypotheses() {
        let p = poly((3, 1), "T^3-T^2+1");
        let l = lctx(&p, 13, 2);
        assert!(matches!(
            l.lvalue_tilde(TildeBudget(100)),
            Err(Error::Budget(_))
        ));
        let t = poly((3, 1), "T^2+1");
        let l = lctx(&t, 1, 2);
        assert!(matches!(
            l.lvalue_tilde(TildeBudget::default()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(l.lvalue_psi(1), Err(Error::Precondition(_))));
        assert!(l.lvalue_psi(0).is_ok());
    }

    #[test]
    fn char2_product_identity() {
        let p = irreducibles((2, 2), 2)
            .into_iter()
            .find(|p| p.i_value().unwrap() != 0)
            .unwrap();
        for n in [1u64, 2, 4, 5] {
            let l = lctx(&p, n, 2);
            assert_eq!(
                l.psi_product().unwrap(),
                l.lvalue_tilde(TildeBudget::default()).unwrap()
            );
        }
    }
}
