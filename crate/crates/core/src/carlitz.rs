//! The arithmetic functions `i`, the power sums `S_m(n)` and their
//! `i`-weighted companions `S'_m(n)`, and the polynomials
//! `beta(n) = sum_m S_m(n)` and `gamma(n) = sum_m S'_m(n)`, both exactly in
//! `F_q[T]` and reduced modulo a prime `P`.
//!
//! Vanishing: expanding `a^n` over the free coefficients of `a in A_m` and
//! summing each over `F_q` shows `S_m(n) = 0` once `m (q-1) > l_q(n)`, where
//! `l_q(n)` is the base-`q` digit sum. The weight `i(a)` adds degree at most
//! `q/p < q - 1` in one coefficient, which shifts the bound by one.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FqElem};
use crate::polyring::{monic_count, Exponent, Poly, ResidueCtx, Var};

/// `i(a)`: trace to `F_p` of the second-highest coefficient of a monic `a`.
pub fn i_of(a: &Poly) -> Result<u32> {
    a.i_value()
}

/// Sum of the base-`q` digits of `n`.
pub fn digit_sum(n: &BigUint, q: u32) -> u64 {
    let q = BigUint::from(q);
    let mut rest = n.clone();
    let mut sum = 0u64;
    while !rest.is_zero() {
        let (quot, digit) = rest.div_rem(&q);
        sum += digit.to_u64().unwrap();
        rest = quot;
    }
    sum
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffKind {
    Exact,
    ModP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    /// `sum a^n`
    Plain,
    /// `sum i(a) a^n`
    Weighted,
}

/// Where the stratum sums are cut off.
///
/// * exact: `floor(l_q(n)/(q-1)) + 2` for `beta`, `+ 3` for `gamma`, the last
///   two strata being asserted zero;
/// * modulo `P` of degree `d`: `min(d, floor(l_q(n)/(q-1)))` for `beta`,
///   `min(d, floor(l_q(n)/(q-1)) + 1)` for `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutoffPolicy {
    pub kind: CutoffKind,
    pub sum: SumKind,
    pub digit_sum: u64,
    pub q: u32,
    pub d: Option<usize>,
    /// Number of trailing strata that must vanish (exact path only).
    pub margin: usize,
}

impl CutoffPolicy {
    pub fn exact(sum: SumKind, n: &BigUint, q: u32) -> CutoffPolicy {
        CutoffPolicy {
            kind: CutoffKind::Exact,
            sum,
            digit_sum: digit_sum(n, q),
            q,
            d: None,
            margin: 2,
        }
    }

    pub fn mod_p(sum: SumKind, n: &BigUint, q: u32, d: usize) -> CutoffPolicy {
        CutoffPolicy {
            kind: CutoffKind::ModP,
            sum,
            digit_sum: digit_sum(n, q),
            q,
            d: Some(d),
            margin: 0,
        }
    }

    /// Largest stratum `floor(l_q(n)/(q-1))` (plus one when weighted) that can
    /// be nonzero.
    pub fn vanishing_bound(&self) -> usize {
        let base = (self.digit_sum / (self.q as u64 - 1)) as usize;
        match self.sum {
            SumKind::Plain => base,
            SumKind::Weighted => base + 1,
        }
    }

    /// Last stratum index that is summed.
    pub fn bound(&self) -> usize {
        match self.kind {
            CutoffKind::Exact => self.vanishing_bound() + self.margin,
            CutoffKind::ModP => self
                .vanishing_bound()
                .min(self.d.expect("mod-P policy has a degree")),
        }
    }
}

/// Work limit for exact stratum sums, in coefficient operations
/// (roughly `q^m * m * n` per stratum).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactBudget(pub u64);

impl Default for ExactBudget {
    fn default() -> Self {
        ExactBudget(20_000_000_000)
    }
}

impl ExactBudget {
    fn check(&self, field: &FieldSpec, m: usize, n: u64) -> Result<u64> {
        let count = monic_count(field, m);
        let cost = &count * BigUint::from((m as u64).max(1) * n.max(1));
        match (count.to_u64(), cost.to_u64()) {
            (Some(c), Some(w)) if w <= self.0 => Ok(c),
            _ => Err(Error::Budget(format!(
                "stratum m = {m} with n = {n} over F_{} exceeds {}",
                field.q(),
                self.0
            ))),
        }
    }
}

/// Digits of `idx` in base `q`, i.e. the low coefficients of the `idx`-th
/// monic polynomial of degree `m` in enumeration order.
pub(crate) fn monic_low_coeffs(field: &FieldSpec, m: usize, mut idx: u64) -> Vec<FqElem> {
    let q = field.q() as u64;
    (0..m)
        .map(|_| {
            let c = (idx % q) as u32;
            idx /= q;
            field.from_code(c).unwrap()
        })
        .collect()
}

/// `(S_m(n), S'_m(n))` computed exactly.
fn exact_stratum(
    field: &Arc<FieldSpec>,
    m: usize,
    n: u64,
    budget: ExactBudget,
) -> Result<(Poly, Poly)> {
    let count = budget.check(field, m, n)?;
    let zero = || (Poly::zero(field, Var::T), Poly::zero(field, Var::T));
    let (plain, weighted) = (0..count)
        .into_par_iter()
        .fold(zero, |(plain, weighted), idx| {
            let mut coeffs = monic_low_coeffs(field, m, idx);
            coeffs.push(FqElem::ONE);
            let a = Poly::new(field.clone(), coeffs, Var::T);
            let power = a.pow(n);
            let w = a.i_value().unwrap();
            let weighted = if w == 0 {
                weighted
            } else {
                weighted.add(&power.scale(field.from_int(w as i64)))
            };
            (plain.add(&power), weighted)
        })
        .reduce(zero, |(a, b), (c, d)| (a.add(&c), b.add(&d)));
    Ok((plain, weighted))
}

/// `S_m(n) = sum_{a in A_m} a^n`.
pub fn power_sum(field: &Arc<FieldSpec>, m: usize, n: u64, budget: ExactBudget) -> Result<Poly> {
    Ok(exact_stratum(field, m, n, budget)?.0)
}

/// `S'_m(n) = sum_{a in A_m} i(a) a^n`, with `i(a)` mapped into `F_p`.
pub fn weighted_power_sum(
    field: &Arc<FieldSpec>,
    m: usize,
    n: u64,
    budget: ExactBudget,
) -> Result<Poly> {
    Ok(exact_stratum(field, m, n, budget)?.1)
}

/// An exact sum together with how far it had to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSum {
    pub value: Poly,
    /// Index of the last stratum that was summed.
    pub last_stratum: usize,
    /// True if the trailing strata were not zero at the policy bound and the
    /// sum had to be extended.
    pub extended: bool,
}

fn exact_sum(
    field: &Arc<FieldSpec>,
    n: u64,
    sum: SumKind,
    budget: ExactBudget,
) -> Result<ExactSum> {
    let policy = CutoffPolicy::exact(sum, &BigUint::from(n), field.q());
    let bound = policy.bound();
    let mut total = Poly::zero(field, Var::T);
    let mut trailing_zeros = 0;
    let mut m = 0;
    let mut extended = false;
    loop {
        let (plain, weighted) = exact_stratum(field, m, n, budget)?;
        let term = match sum {
            SumKind::Plain => plain,
            SumKind::Weighted => weighted,
        };
        trailing_zeros = if term.is_zero() {
            trailing_zeros + 1
        } else {
            0
        };
        total = total.add(&term);
        if m >= bound {
            if trailing_zeros >= policy.margin {
                break;
            }
            if !extended {
                log::warn!("stratum sum for n = {n} did not vanish at m = {bound}; extending");
                extended = true;
            }
        }
        m += 1;
    }
    Ok(ExactSum {
        value: total,
        last_stratum: m,
        extended,
    })
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(())
}

/// The Bernoulli-Goss polynomial `beta(n)`, for `n` not divisible by `q - 1`.
pub fn beta(field: &Arc<FieldSpec>, n: u64) -> Result<Poly> {
    Ok(beta_detailed(field, n, ExactBudget::default())?.value)
}

pub fn beta_detailed(field: &Arc<FieldSpec>, n: u64, budget: ExactBudget) -> Result<ExactSum> {
    check_n(n)?;
    let q1 = field.q() as u64 - 1;
    if n.is_multiple_of(q1) {
        return Err(Error::Precondition(format!(
            "n = {n} is divisible by q-1 = {q1}"
        )));
    }
    exact_sum(field, n, SumKind::Plain, budget)
}

/// `gamma(n) = sum_m sum_{a in A_m} i(a) a^n`.
pub fn gamma(field: &Arc<FieldSpec>, n: u64) -> Result<Poly> {
    Ok(gamma_detailed(field, n, ExactBudget::default())?.value)
}

pub fn gamma_detailed(field: &Arc<FieldSpec>, n: u64, budget: ExactBudget) -> Result<ExactSum> {
    check_n(n)?;
    exact_sum(field, n, SumKind::Weighted, budget)
}

/// Sum over strata `0..=bound` of `a^n mod P`, optionally weighted by `i(a)`.
/// Returns one residue sum per value of `i(a)` (index `0..p`).
pub(crate) fn residue_sums_by_i(ctx: &ResidueCtx, e: &Exponent, bound: usize) -> Vec<Vec<FqElem>> {
    let field = ctx.field();
    let p = field.p() as usize;
    let d = ctx.degree();
    let zero = || vec![vec![FqElem::ZERO; d]; p];
    let add_into = |acc: &mut Vec<FqElem>, v: &[FqElem]| {
        for (x, &y) in acc.iter_mut().zip(v) {
            *x = field.add(*x, y);
        }
    };
    let mut totals = zero();
    for m in 0..=bound {
        let count = monic_count(field, m)
            .to_u64()
            .expect("stratum size fits u64");
        let part = (0..count)
            .into_par_iter()
            .fold(zero, |mut acc, idx| {
                let low = monic_low_coeffs(field, m, idx);
                let w = if m == 0 {
                    0
                } else {
                    field.trace(low[m - 1]) as usize
                };
                let r = ctx.monic_residue(&low);
                let pw = ctx.pow_vec(&r, e);
                add_into(&mut acc[w], &pw);
                acc
            })
            .reduce(zero, |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    add_into(x, y);
                }
                a
            });
        for (x, y) in totals.iter_mut().zip(&part) {
            add_into(x, y);
        }
    }
    totals
}

fn check_mod_n(n: &BigUint, ctx: &ResidueCtx) -> Result<()> {
    if n.is_zero() {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let order = monic_count(ctx.field(), ctx.degree()) - 1u32;
    if (n % &order).is_zero() {
        return Err(Error::Precondition(format!(
            "n is a multiple of q^d - 1 = {order}; the character is trivial"
        )));
    }
    Ok(())
}

/// `beta(n) mod P`, as a polynomial of degree `< d`.
///
/// Strata with `m >= d` vanish modulo `P` (they cover `A/P` evenly and the
/// character `x -> x^n` is nontrivial), so the sum stops at `min(d, ...)`.
pub fn beta_mod(n: &BigUint, ctx: &ResidueCtx) -> Result<Poly> {
    check_mod_n(n, ctx)?;
    let policy = CutoffPolicy::mod_p(SumKind::Plain, n, ctx.field().q(), ctx.degree());
    let sums = residue_sums_by_i(ctx, &Exponent::new(n), policy.bound());
    let f = ctx.field();
    let mut total = vec![FqElem::ZERO; ctx.degree()];
    for s in &sums {
        for (x, &y) in total.iter_mut().zip(s) {
            *x = f.add(*x, y);
        }
    }
    Ok(ctx.to_poly(&total).with_var(Var::T))
}

/// `gamma(n) mod P`, as a polynomial of degree `< d`.
pub fn gamma_mod(n: &BigUint, ctx: &ResidueCtx) -> Result<Poly> {
    check_mod_n(n, ctx)?;
    let policy = CutoffPolicy::mod_p(SumKind::Weighted, n, ctx.field().q(), ctx.degree());
    let sums = residue_sums_by_i(ctx, &Exponent::new(n), policy.bound());
    let f = ctx.field();
    let mut total = vec![FqElem::ZERO; ctx.degree()];
    for (w, s) in sums.iter().enumerate().skip(1) {
        let weight = f.from_int(w as i64);
        for (x, &y) in total.iter_mut().zip(s) {
            *x = f.add(*x, f.mul(weight, y));
        }
    }
    Ok(ctx.to_poly(&total).with_var(Var::T))
}

/// `(beta(n) mod P, gamma(n) mod P)` from one pass over the strata. The plain
/// strata past the `beta` cutoff are zero, so sharing the `gamma` cutoff is
/// exact.
pub fn beta_gamma_mod(n: &BigUint, ctx: &ResidueCtx) -> Result<(Poly, Poly)> {
    check_mod_n(n, ctx)?;
    let policy = CutoffPolicy::mod_p(SumKind::Weighted, n, ctx.field().q(), ctx.degree());
    let sums = residue_sums_by_i(ctx, &Exponent::new(n), policy.bound());
    let f = ctx.field();
    let mut plain = vec![FqElem::ZERO; ctx.degree()];
    let mut weighted = vec![FqElem::ZERO; ctx.degree()];
    for (w, s) in sums.iter().enumerate() {
        let weight = f.from_int(w as i64);
        for (i, &y) in s.iter().enumerate() {
            plain[i] = f.add(plain[i], y);
            weighted[i] = f.add(weighted[i], f.mul(weight, y));
        }
    }
    Ok((
        ctx.to_poly(&plain).with_var(Var::T),
        ctx.to_poly(&weighted).with_var(Var::T),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use crate::polyring::enumerate_monic;

    fn f3() -> Arc<FieldSpec> {
        make_field(3, 1, None).unwrap()
    }

    fn t(s: &str, f: &Arc<FieldSpec>) -> Poly {
        Poly::parse(s, f, Var::T).unwrap()
    }

    const B: ExactBudget = ExactBudget(1 << 40);

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(&BigUint::from(13u32), 3), 3);
        assert_eq!(digit_sum(&BigUint::from((3u32.pow(9) - 1) / 2), 3), 9);
        assert_eq!(digit_sum(&BigUint::zero(), 7), 0);
    }

    #[test]
    fn cutoffs() {
        let n = BigUint::from(13u32);
        assert_eq!(CutoffPolicy::exact(SumKind::Plain, &n, 3).bound(), 3);
        assert_eq!(CutoffPolicy::exact(SumKind::Weighted, &n, 3).bound(), 4);
        assert_eq!(CutoffPolicy::mod_p(SumKind::Plain, &n, 3, 3).bound(), 1);
        assert_eq!(CutoffPolicy::mod_p(SumKind::Weighted, &n, 3, 3).bound(), 2);
        let n = BigUint::from((3u32.pow(9) - 1) / 2);
        assert_eq!(CutoffPolicy::mod_p(SumKind::Weighted, &n, 3, 9).bound(), 5);
        assert_eq!(CutoffPolicy::mod_p(SumKind::Weighted, &n, 3, 2).bound(), 2);
    }

    #[test]
    fn strata_for_thirteen() {
        let f = f3();
        assert_eq!(power_sum(&f, 0, 13, B).unwrap(), Poly::one(&f, Var::T));
        assert_eq!(power_sum(&f, 1, 13, B).unwrap(), t("2*T^9+2*T^3+2*T", &f));
        assert!(power_sum(&f, 2, 13, B).unwrap().is_zero());
        assert!(weighted_power_sum(&f, 0, 13, B).unwrap().is_zero());
        assert_eq!(
            weighted_power_sum(&f, 1, 13, B).unwrap(),
            t("-T^12-T^10-T^4-1", &f)
        );
        assert_eq!(
            weighted_power_sum(&f, 2, 13, B).unwrap(),
            t("T^9+T^3+T", &f)
        );
    }

    #[test]
    fn beta_gamma_thirteen() {
        let f = f3();
        let b = beta(&f, 13).unwrap();
        let g = gamma(&f, 13).unwrap();
        assert_eq!(b, t("-T^9-T^3-T+1", &f));
        assert_eq!(g, t("-T^12-T^10+T^9-T^4+T^3+T-1", &f));
        assert_eq!((b.degree(), g.degree()), (Some(9), Some(12)));
        let s1 = weighted_power_sum(&f, 1, 13, B).unwrap();
        let s2 = weighted_power_sum(&f, 2, 13, B).unwrap();
        assert_eq!(g, s1.add(&s2));
        let p = t("T^3-T^2+1", &f);
        assert!(b.rem(&p).unwrap().is_zero());
        assert!(g.rem(&p).unwrap().is_zero());
    }

    #[test]
    fn small_n() {
        let f = f3();
        assert_eq!(beta(&f, 1).unwrap(), Poly::one(&f, Var::T));
        assert_eq!(gamma(&f, 1).unwrap(), t("-1", &f));
        assert!(matches!(beta(&f, 2), Err(Error::Precondition(_))));
        assert!(matches!(beta(&f, 0), Err(Error::Precondition(_))));
        assert!(matches!(gamma(&f, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn exact_sums_never_extend() {
        for field in [
            f3(),
            make_field(2, 2, None).unwrap(),
            make_field(5, 1, None).unwrap(),
        ] {
            let q1 = field.q() as u64 - 1;
            for n in 1..60u64 {
                let g = gamma_detailed(&field, n, B).unwrap();
                assert!(!g.extended, "gamma({n}) over F_{}", field.q());
                if n % q1 != 0 {
                    assert!(!beta_detailed(&field, n, B).unwrap().extended);
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let f = f3();
        assert!(matches!(
            power_sum(&f, 30, 13, ExactBudget::default()),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            beta_detailed(&f, 13, ExactBudget(10)),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn mod_p_thirteen() {
        let f = f3();
        let ctx = ResidueCtx::new(&t("T^3-T^2+1", &f)).unwrap();
        let n = BigUint::from(13u32);
        assert!(beta_mod(&n, &ctx).unwrap().is_zero());
        assert!(gamma_mod(&n, &ctx).unwrap().is_zero());
        assert!(matches!(
            gamma_mod(&BigUint::from(26u32), &ctx),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            beta_mod(&BigUint::zero(), &ctx),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn i_is_additive_on_products() {
        for field in [
            f3(),
            make_field(2, 2, None).unwrap(),
            make_field(3, 2, None).unwrap(),
        ] {
            let monics: Vec<Poly> = (0..4)
                .flat_map(|m| enumerate_monic(&field, m, Var::T))
                .collect();
            let p = field.p();
            let mut state = 12345u64;
            for _ in 0..500 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let a = &monics[(state >> 33) as usize % monics.len()];
                let b = &monics[(state >> 13) as usize % monics.len()];
                let lhs = i_of(&a.mul(b)).unwrap();
                assert_eq!(lhs, (i_of(a).unwrap() + i_of(b).unwrap()) % p);
            }
        }
    }

    #[test]
    fn fast_path_matches_exact_small() {
        let f = f3();
        let primes: Vec<Poly> = (1..=3)
            .flat_map(|d| enumerate_monic(&f, d, Var::T))
            .filter(|p| p.is_irreducible().unwrap())
            .collect();
        for n in 1..=40u64 {
            let g = gamma(&f, n).unwrap();
            let b = (n % 2 != 0).then(|| beta(&f, n).unwrap());
            for p in &primes {
                let ctx = ResidueCtx::new(p).unwrap();
                let order = 3u64.pow(p.degree().unwrap() as u32) - 1;
                if n % order == 0 {
                    continue;
                }
                let nb = BigUint::from(n);
                assert_eq!(
                    gamma_mod(&nb, &ctx).unwrap(),
                    g.rem(p).unwrap(),
                    "gamma({n}) mod {p}"
                );
                let (bm, gm) = beta_gamma_mod(&nb, &ctx).unwrap();
                assert_eq!(gm, g.rem(p).unwrap());
                if let Some(b) = &b {
                    assert_eq!(
                        beta_mod(&nb, &ctx).unwrap(),
                        b.rem(p).unwrap(),
                        "beta({n}) mod {p}"
                    );
                    assert_eq!(bm, b.rem(p).unwrap());
                }
            }
        }
    }
}
