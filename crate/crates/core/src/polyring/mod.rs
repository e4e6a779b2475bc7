//! Dense univariate polynomials over `F_q`, in `T` or in the Artin-Schreier
//! variable `theta` (with `theta^p - theta = T`).

mod parse;
mod residue;

pub use residue::{Exponent, ResidueCtx};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FqElem};

/// Name of the polynomial variable. The tag is a label only: arithmetic
/// keeps the left operand's tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    Theta,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "T",
            Var::Theta => "theta",
        }
    }
}

/// A polynomial with ascending coefficients. The zero polynomial has no
/// coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone)]
pub struct Poly {
    field: Arc<FieldSpec>,
    coeffs: Vec<FqElem>,
    var: Var,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_poly(self))
    }
}

fn trim(v: &mut Vec<FqElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn new(field: Arc<FieldSpec>, mut coeffs: Vec<FqElem>, var: Var) -> Poly {
        trim(&mut coeffs);
        Poly { field, coeffs, var }
    }

    pub fn zero(field: &Arc<FieldSpec>, var: Var) -> Poly {
        Poly::new(field.clone(), Vec::new(), var)
    }

    pub fn one(field: &Arc<FieldSpec>, var: Var) -> Poly {
        Poly::constant(field, FqElem::ONE, var)
    }

    pub fn constant(field: &Arc<FieldSpec>, c: FqElem, var: Var) -> Poly {
        Poly::new(field.clone(), vec![c], var)
    }

    /// `c * var^e`.
    pub fn monomial(field: &Arc<FieldSpec>, c: FqElem, e: usize, var: Var) -> Poly {
        let mut coeffs = vec![FqElem::ZERO; e + 1];
        coeffs[e] = c;
        Poly::new(field.clone(), coeffs, var)
    }

    /// The variable itself.
    pub fn x(field: &Arc<FieldSpec>, var: Var) -> Poly {
        Poly::monomial(field, FqElem::ONE, 1, var)
    }

    /// `var^p - var`, the Artin-Schreier polynomial.
    pub fn artin_schreier(field: &Arc<FieldSpec>, var: Var) -> Poly {
        let p = field.p() as usize;
        let mut coeffs = vec![FqElem::ZERO; p + 1];
        coeffs[p] = FqElem::ONE;
        coeffs[1] = field.add(coeffs[1], field.neg(FqElem::ONE));
        Poly::new(field.clone(), coeffs, var)
    }

    pub fn parse(text: &str, field: &Arc<FieldSpec>, var: Var) -> Result<Poly> {
        parse::parse_poly(text, field, var)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Poly {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the conventional sentinel `-1` for zero.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FqElem::ONE
    }

    pub fn ensure_same_field(&self, other: &Poly) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn assert_same_field(&self, other: &Poly) {
        assert!(
            same_field(&self.field, &other.field),
            "operands belong to different fields"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(f.clone(), coeffs, self.var)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f.clone(),
            self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            self.var,
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        let f = &self.field;
        Poly::new(
            f.clone(),
            self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            self.var,
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field, self.var);
        }
        let f = &self.field;
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), out, self.var)
    }

    /// Exact power. Uses `a^n = prod_j (a^{q^j})^{n_j}` over the base-`q`
    /// digits `n_j` of `n`; each `a^{q^j}` is the sparse polynomial
    /// `sum c_i T^{i q^j}` because coefficients in `F_q` are fixed by the
    /// `q`-power map.
    pub fn pow(&self, n: u64) -> Poly {
        let f = &self.field;
        if n == 0 {
            return Poly::one(f, self.var);
        }
        if self.is_zero() {
            return self.clone();
        }
        let q = f.q() as u64;
        let support: Vec<(usize, FqElem)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect();
        let deg = self.coeffs.len() - 1;
        let mut acc = vec![FqElem::ONE];
        let mut rest = n;
        let mut stride = 1usize;
        while rest > 0 {
            let digit = rest % q;
            for _ in 0..digit {
                let mut next = vec![FqElem::ZERO; acc.len() + deg * stride];
                for (k, &x) in acc.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for &(i, c) in &support {
                        let idx = k + i * stride;
                        next[idx] = f.add(next[idx], f.mul(x, c));
                    }
                }
                acc = next;
            }
            rest /= q;
            if rest > 0 {
                stride = stride
                    .checked_mul(q as usize)
                    .expect("exponent too large for exact power");
            }
        }
        Poly::new(f.clone(), acc, self.var)
    }

    /// Euclidean division: `self = other * quotient + remainder`.
    pub fn divmod(&self, other: &Poly) -> Result<(Poly, Poly)> {
        self.ensure_same_field(other)?;
        let f = &self.field;
        let Some(db) = other.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = f.inv(other.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f, self.var), self.clone()));
        }
        let mut quot = vec![FqElem::ZERO; rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - db] = c;
            for (j, &b) in other.coeffs.iter().enumerate() {
                let idx = top - db + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((
            Poly::new(f.clone(), quot, self.var),
            Poly::new(f.clone(), rem, self.var),
        ))
    }

    pub fn rem(&self, other: &Poly) -> Result<Poly> {
        Ok(self.divmod(other)?.1)
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .field
            .inv(self.leading())
            .expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// `self(u)`, by Horner's rule; the result carries `u`'s variable.
    pub fn compose(&self, u: &Poly) -> Poly {
        self.assert_same_field(u);
        let mut acc = Poly::zero(&self.field, u.var);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(u).add(&Poly::constant(&self.field, c, u.var));
        }
        acc
    }

    /// Rabin's test: `f` of degree `n` is irreducible iff `T^{q^n} = T mod f`
    /// and `gcd(T^{q^{n/r}} - T, f) = 1` for every prime `r | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_constant() {
            return Err(Error::Constant);
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = self.degree().unwrap();
        let ctx = ResidueCtx::new(self)?;
        let x = Poly::x(&self.field, self.var);
        let x_red = ctx.reduce(&x);
        let q = Exponent::new(&BigUint::from(self.field.q()));
        // frob[k] = T^{q^k} mod f
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(x_red.clone());
        for k in 1..=n {
            let prev: &Poly = &frob[k - 1];
            frob.push(ctx.powmod_exp(prev, &q));
        }
        if frob[n] != x_red {
            return Ok(false);
        }
        for r in prime_divisors(n) {
            let g = frob[n / r].sub(&x).gcd(self);
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Trace of the coefficient of `var^{deg - 1}`; zero for constants.
    /// This is the function `i` on monic polynomials.
    pub fn i_value(&self) -> Result<u32> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let d = self.degree().unwrap();
        Ok(if d == 0 {
            0
        } else {
            self.field.trace(self.coeffs[d - 1])
        })
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All monic polynomials of degree `m`, the constant coefficient varying
/// fastest and each coefficient running through field codes in order.
pub fn enumerate_monic(field: &Arc<FieldSpec>, m: usize, var: Var) -> MonicIter {
    MonicIter {
        field: field.clone(),
        digits: vec![0; m],
        var,
        done: false,
    }
}

pub struct MonicIter {
    field: Arc<FieldSpec>,
    digits: Vec<u32>,
    var: Var,
    done: bool,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        let mut coeffs: Vec<FqElem> = self
            .digits
            .iter()
            .map(|&c| self.field.from_code(c).expect("digit below q"))
            .collect();
        coeffs.push(FqElem::ONE);
        let item = Poly {
            field: self.field.clone(),
            coeffs,
            var: self.var,
        };
        let q = self.field.q();
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < q {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(item)
    }
}

/// Number of monic polynomials of degree `m`, `q^m`.
pub fn monic_count(field: &FieldSpec, m: usize) -> BigUint {
    num_traits::pow(field.q_big().clone(), m)
}

/// Norm from `F_q[theta]` down to `F_q[T]` along `theta^p - theta = T`.
///
/// Forms `prod_{c in F_p} a(theta - c)` and rewrites it in base
/// `theta^p - theta`; every digit must be a constant, otherwise the product
/// was not Galois-invariant and an internal invariant error is returned.
pub fn norm_theta(a: &Poly) -> Result<Poly> {
    let f = a.field();
    let p = f.p();
    let theta = Poly::x(f, Var::Theta);
    let a = a.clone().with_var(Var::Theta);
    let mut prod = Poly::one(f, Var::Theta);
    for c in 0..p {
        let shift = theta.sub(&Poly::constant(f, f.from_int(c as i64), Var::Theta));
        prod = prod.mul(&a.compose(&shift));
    }
    let base = Poly::artin_schreier(f, Var::Theta);
    let mut digits = Vec::new();
    let mut cur = prod;
    while !cur.is_zero() {
        let (quot, rem) = cur.divmod(&base)?;
        if !rem.is_constant() {
            return Err(Error::Invariant(format!("norm digit not constant: {rem}")));
        }
        digits.push(rem.coeff(0));
        cur = quot;
    }
    Ok(Poly::new(f.clone(), digits, Var::T))
}

/// `(q^{a} - 1) / (q^{b} - 1)` for `b | a`.
pub fn norm_exponent(field: &FieldSpec, a: usize, b: usize) -> BigUint {
    let num = monic_count(field, a) - BigUint::one();
    let den = monic_count(field, b) - BigUint::one();
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn f3() -> Arc<FieldSpec> {
        make_field(3, 1, None).unwrap()
    }

    fn f4() -> Arc<FieldSpec> {
        make_field(2, 2, None).unwrap()
    }

    fn t(s: &str, f: &Arc<FieldSpec>) -> Poly {
        Poly::parse(s, f, Var::T).unwrap()
    }

    /// xorshift for test data; independent of the search module's generator.
    struct TestRng(u64);

    impl TestRng {
        fn next(&mut self) -> u64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            self.0
        }

        fn poly(&mut self, f: &Arc<FieldSpec>, max_deg: usize, var: Var) -> Poly {
            let len = (self.next() % (max_deg as u64 + 2)) as usize;
            let coeffs = (0..len)
                .map(|_| f.from_code((self.next() % f.q() as u64) as u32).unwrap())
                .collect();
            Poly::new(f.clone(), coeffs, var)
        }
    }

    #[test]
    fn divmod_examples() {
        let f = f3();
        let a = t("T^5+2*T+1", &f);
        let (qt, r) = a.divmod(&Poly::one(&f, Var::T)).unwrap();
        assert_eq!((qt, r.is_zero()), (a.clone(), true));
        let q = t("T^9-T^6-T^4-T^3-T^2+1", &f);
        let p = t("T^3-T^2+1", &f);
        assert!(!q.rem(&p).unwrap().is_zero());
        assert_eq!(
            a.divmod(&Poly::zero(&f, Var::T)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn divmod_recomposition_random() {
        let mut rng = TestRng(0x9e3779b97f4a7c15);
        for field in [f3(), f4()] {
            for _ in 0..2000 {
                let a = rng.poly(&field, 20, Var::T);
                let b = rng.poly(&field, 8, Var::T);
                if b.is_zero() {
                    continue;
                }
                let (qt, r) = a.divmod(&b).unwrap();
                assert_eq!(b.mul(&qt).add(&r), a);
                assert!(r.deg() < b.deg());
            }
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Poly::x(&f3(), Var::T);
        let b = Poly::x(&f4(), Var::T);
        assert_eq!(a.divmod(&b).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn exact_pow_matches_repeated_multiplication() {
        let mut rng = TestRng(17);
        for field in [f3(), f4(), make_field(5, 1, None).unwrap()] {
            for _ in 0..30 {
                let a = rng.poly(&field, 4, Var::T);
                let n = rng.next() % 40;
                let mut naive = Poly::one(&field, Var::T);
                for _ in 0..n {
                    naive = naive.mul(&a);
                }
                assert_eq!(a.pow(n), naive, "a = {a}, n = {n}");
            }
        }
    }

    #[test]
    fn rabin_examples() {
        let f = f3();
        assert!(t("T^3-T^2+1", &f).is_irreducible().unwrap());
        assert!(t("T^9-T^6-T^4-T^3-T^2+1", &f).is_irreducible().unwrap());
        assert!(!t("T^2", &f).is_irreducible().unwrap());
        assert_eq!(
            t("2*T^2+1", &f).is_irreducible().unwrap_err(),
            Error::NotMonic
        );
        assert_eq!(t("2", &f).is_irreducible().unwrap_err(), Error::Constant);
    }

    fn brute_irreducible(f: &Poly) -> bool {
        let n = f.degree().unwrap();
        let field = f.field();
        for m in 1..=n / 2 {
            for g in enumerate_monic(field, m, Var::T) {
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for (field, max_deg) in [(f3(), 6), (f4(), 4)] {
            for n in 1..=max_deg {
                for f in enumerate_monic(&field, n, Var::T) {
                    assert_eq!(f.is_irreducible().unwrap(), brute_irreducible(&f), "{f}");
                }
            }
        }
    }

    #[test]
    fn eight_irreducible_cubics_over_f3() {
        let count = enumerate_monic(&f3(), 3, Var::T)
            .filter(|f| f.is_irreducible().unwrap())
            .count();
        assert_eq!(count, 8);
    }

    #[test]
    fn compose_examples() {
        let f = f3();
        let p = t("T^3-T^2+1", &f);
        assert_eq!(p.compose(&Poly::x(&f, Var::T)), p);
        assert_eq!(p.compose(&t("T^3-T", &f)), t("T^9-T^6-T^4-T^3-T^2+1", &f));
    }

    #[test]
    fn compose_matches_term_expansion_over_f4() {
        let f = f4();
        let p = t("T^5+a^2*T^4+T^3+a*T^2+a^2", &f);
        let u = t("T^2-T", &f);
        let mut naive = Poly::zero(&f, Var::T);
        for (i, &c) in p.coeffs().iter().enumerate() {
            let mut term = Poly::constant(&f, c, Var::T);
            for _ in 0..i {
                term = term.mul(&u);
            }
            naive = naive.add(&term);
        }
        let q = p.compose(&u);
        assert_eq!(q, naive);
        assert_eq!(q.degree(), Some(10));
    }

    #[test]
    fn monic_enumeration() {
        let f = f3();
        let deg0: Vec<_> = enumerate_monic(&f, 0, Var::T).collect();
        assert_eq!(deg0, vec![Poly::one(&f, Var::T)]);
        let deg1: Vec<String> = enumerate_monic(&f, 1, Var::T)
            .map(|p| p.to_string())
            .collect();
        assert_eq!(deg1, ["T", "T+1", "T+2"]);
        assert_eq!(enumerate_monic(&f4(), 2, Var::T).count(), 16);
        assert_eq!(monic_count(&f4(), 2), BigUint::from(16u32));
    }

    #[test]
    fn i_value_examples() {
        let f = f3();
        assert_eq!(Poly::one(&f, Var::T).i_value().unwrap(), 0);
        assert_eq!(t("T^3-T^2+1", &f).i_value().unwrap(), 2);
        let g = f4();
        assert_eq!(t("T^5+a^2*T^4+T^3+a*T^2+a^2", &g).i_value().unwrap(), 1);
        assert_eq!(t("2*T", &f).i_value().unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn norm_theta_examples() {
        for f in [f3(), f4(), make_field(5, 1, None).unwrap()] {
            let theta = Poly::x(&f, Var::Theta);
            assert_eq!(norm_theta(&theta).unwrap(), Poly::x(&f, Var::T));
            for c in f.enumerate() {
                let n = norm_theta(&Poly::constant(&f, c, Var::Theta)).unwrap();
                assert_eq!(n, Poly::constant(&f, f.pow(c, f.p() as u64), Var::T));
            }
        }
    }

    #[test]
    fn norm_theta_is_multiplicative() {
        let f = f3();
        let mut rng = TestRng(99);
        for _ in 0..100 {
            let a = rng.poly(&f, 5, Var::Theta);
            let b = rng.poly(&f, 5, Var::Theta);
            let lhs = norm_theta(&a.mul(&b)).unwrap();
            let rhs = norm_theta(&a).unwrap().mul(&norm_theta(&b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn norm_theta_of_monic_is_monic_same_degree() {
        let f = f4();
        for a in enumerate_monic(&f, 3, Var::Theta) {
            let n = norm_theta(&a).unwrap();
            assert!(n.is_monic());
            assert_eq!(n.degree(), Some(3));
        }
    }

    /// Embedding `Nm(a) mod P` into `F_q[theta]/Q` agrees with the field norm
    /// `a^{(q^{pd}-1)/(q^d-1)} mod Q`.
    fn check_norm_compatibility(p_poly: &Poly, samples: usize, seed: u64) {
        let field = p_poly.field();
        assert!(p_poly.is_irreducible().unwrap());
        assert_ne!(p_poly.i_value().unwrap(), 0);
        let as_theta = Poly::artin_schreier(field, Var::Theta);
        let q_theta = p_poly.compose(&as_theta);
        assert!(q_theta.is_irreducible().unwrap());
        let d = p_poly.degree().unwrap();
        let pd = q_theta.degree().unwrap();
        let ctx = ResidueCtx::new(&q_theta).unwrap();
        let e = norm_exponent(field, pd, d);
        let mut rng = TestRng(seed);
        let mut checked = 0;
        while checked < samples {
            let a = rng.poly(field, pd + 2, Var::Theta);
            if a.gcd(&q_theta).degree() != Some(0) {
                continue;
            }
            let lhs = norm_theta(&a)
                .unwrap()
                .rem(p_poly)
                .unwrap()
                .compose(&as_theta);
            let lhs = ctx.reduce(&lhs);
            assert_eq!(lhs, ctx.powmod(&a, &e), "a = {a}");
            checked += 1;
        }
    }

    #[test]
    fn norm_compatibility_small_cases() {
        check_norm_compatibility(&t("T^3-T^2+1", &f3()), 30, 5);
        check_norm_compatibility(&t("T^2+T+2", &f3()), 30, 6);
        let f = f4();
        let p = enumerate_monic(&f, 2, Var::T)
            .find(|p| p.is_irreducible().unwrap() && p.i_value().unwrap() != 0)
            .unwrap();
        check_norm_compatibility(&p, 30, 7);
    }

    #[test]
    fn prime_divisor_list() {
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(prime_divisors(13), vec![13]);
        assert!(prime_divisors(1).is_empty());
    }
}
