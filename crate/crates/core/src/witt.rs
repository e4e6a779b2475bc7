//! Truncated Witt vectors of `A/P` and their extension by `zeta_p`.
//!
//! `W_k(A/P)` is realized as the quotient ring
//! `((Z/p^k)[x]/g~)[T]/P~`, where `g~` and `P~` are the coefficientwise
//! lifts (representatives in `[0, p)`) of the field modulus `g` and of `P`.
//! Any monic lift of an irreducible modulus gives the unramified ring, so the
//! choice only fixes coordinates.
//!
//! `W = W_k[z]/(1 + z + ... + z^{p-1})` adds a primitive `p`-th root of unity
//! `z`; for `p = 2` this collapses to `W_k` with `z = -1`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FqElem};
use crate::polyring::{monic_count, Exponent, Poly, Var};

static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);

/// An element of `W_k(A/P)`: `d` coefficients in `T`, each a base-ring
/// element with `s` coordinates mod `p^k`, stored flat (`c[t * s + i]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittElem {
    ctx: u64,
    c: Vec<u64>,
}

impl WittElem {
    /// Flat residues, `d * s` entries in `[0, p^k)`.
    pub fn residues(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

/// An element of `W = W_k[zeta_p]`, as `p - 1` coordinates on
/// `1, z, ..., z^{p-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElem {
    pub coords: Vec<WittElem>,
}

pub struct WittCtx {
    id: u64,
    field: Arc<FieldSpec>,
    prime: Poly,
    p: u64,
    k: u32,
    pk: u64,
    s: usize,
    d: usize,
    /// Lift of the field modulus, `s + 1` ascending entries (monic).
    g_lift: Vec<u64>,
    /// Lift of `P`, `d + 1` base-ring coefficients (the last is 1).
    p_lift: Vec<Vec<u64>>,
    qd: BigUint,
    qd_exp: Exponent,
}

impl std::fmt::Debug for WittCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WittCtx")
            .field("P", &self.prime.to_string())
            .field("p", &self.p)
            .field("k", &self.k)
            .finish()
    }
}

/// Builds the truncated Witt ring of `A/P` at precision `p^k`.
pub fn make_witt_ctx(prime: &Poly, k: u32) -> Result<WittCtx> {
    if k == 0 {
        return Err(Error::Precondition("precision k must be at least 1".into()));
    }
    if !prime.is_irreducible()? {
        return Err(Error::Reducible(prime.to_string()));
    }
    let field = prime.field().clone();
    let p = field.p() as u64;
    let pk = p.checked_pow(k).filter(|&v| v < 1 << 31).ok_or_else(|| {
        Error::Precondition(format!(
            "precision {p}^{k} too large for machine arithmetic"
        ))
    })?;
    let s = field.s() as usize;
    let g_lift: Vec<u64> = match field.modulus() {
        Some(g) => g.iter().map(|&c| c as u64).collect(),
        None => vec![0, 1],
    };
    // The reduction of g~ must be the field modulus, which must be irreducible.
    if let Some(g) = field.modulus() {
        let prime_field = crate::fields::make_field(p, 1, None)?;
        let coeffs = g.iter().map(|&c| prime_field.from_int(c as i64)).collect();
        if !Poly::new(prime_field, coeffs, Var::T).is_irreducible()? {
            return Err(Error::Invariant(
                "field modulus reduces to a reducible polynomial".into(),
            ));
        }
    }
    let p_lift = prime
        .coeffs()
        .iter()
        .map(|&c| field.coords(c).into_iter().map(u64::from).collect())
        .collect();
    let d = prime.degree().unwrap();
    let qd = monic_count(&field, d);
    Ok(WittCtx {
        id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
        field,
        prime: prime.clone(),
        p,
        k,
        pk,
        s,
        d,
        g_lift,
        p_lift,
        qd_exp: Exponent::new(&qd),
        qd,
    })
}

impl WittCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// `p^k`.
    pub fn modulus(&self) -> u64 {
        self.pk
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Total degree `s * d` of the ring over `Z/p^k`.
    pub fn total_degree(&self) -> usize {
        self.s * self.d
    }

    pub fn q_pow_d(&self) -> &BigUint {
        &self.qd
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Lift of the base modulus, ascending.
    pub fn base_lift(&self) -> &[u64] {
        &self.g_lift
    }

    /// Lift of `P`, ascending, one base-ring coordinate vector per power of `T`.
    pub fn prime_lift(&self) -> &[Vec<u64>] {
        &self.p_lift
    }

    fn check(&self, a: &WittElem) {
        assert_eq!(
            a.ctx, self.id,
            "element belongs to a different Witt context"
        );
    }

    fn elem(&self, c: Vec<u64>) -> WittElem {
        WittElem { ctx: self.id, c }
    }

    pub fn zero(&self) -> WittElem {
        self.elem(vec![0; self.d * self.s])
    }

    pub fn one(&self) -> WittElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> WittElem {
        let mut c = vec![0; self.d * self.s];
        c[0] = n.rem_euclid(self.pk as i64) as u64;
        self.elem(c)
    }

    /// Builds an element from flat residues (`d * s` entries, reduced mod `p^k`).
    pub fn from_residues(&self, residues: &[u64]) -> Result<WittElem> {
        if residues.len() != self.d * self.s {
            return Err(Error::Precondition(format!(
                "expected {} residues",
                self.d * self.s
            )));
        }
        Ok(self.elem(residues.iter().map(|&x| x % self.pk).collect()))
    }

    /// Coefficientwise lift of a residue class of `A/P` (coordinates in `[0, p)`).
    pub fn lift(&self, r: &Poly) -> WittElem {
        let r = r.rem(&self.prime).expect("prime is nonzero");
        let mut c = vec![0; self.d * self.s];
        for (t, &coef) in r.coeffs().iter().enumerate() {
            for (i, x) in self.field.coords(coef).into_iter().enumerate() {
                c[t * self.s + i] = x as u64;
            }
        }
        self.elem(c)
    }

    /// Same as [`lift`](Self::lift) for a length-`d` residue vector.
    pub fn lift_residue(&self, r: &[FqElem]) -> WittElem {
        let mut c = vec![0; self.d * self.s];
        for (t, &coef) in r.iter().enumerate() {
            for (i, x) in self.field.coords(coef).into_iter().enumerate() {
                c[t * self.s + i] = x as u64;
            }
        }
        self.elem(c)
    }

    /// Reduction `W_k(A/P) -> A/P`.
    pub fn reduce_mod_p(&self, a: &WittElem) -> Poly {
        self.check(a);
        let coeffs = (0..self.d)
            .map(|t| {
                let coords: Vec<u32> = a.c[t * self.s..(t + 1) * self.s]
                    .iter()
                    .map(|&x| (x % self.p) as u32)
                    .collect();
                self.field.from_coords(&coords).unwrap()
            })
            .collect();
        Poly::new(self.field.clone(), coeffs, Var::T)
    }

    /// Image of `a` (from a context over the same `P` at precision `>= k`)
    /// under reduction to precision `k`.
    pub fn reduce_from(&self, other: &WittCtx, a: &WittElem) -> Result<WittElem> {
        other.check(a);
        if other.prime != self.prime || other.k < self.k {
            return Err(Error::Precondition(
                "source context must share P and have higher precision".into(),
            ));
        }
        Ok(self.elem(a.c.iter().map(|&x| x % self.pk).collect()))
    }

    pub fn add(&self, a: &WittElem, b: &WittElem) -> WittElem {
        self.check(a);
        self.check(b);
        self.elem(
            a.c.iter()
                .zip(&b.c)
                .map(|(&x, &y)| (x + y) % self.pk)
                .collect(),
        )
    }

    pub fn neg(&self, a: &WittElem) -> WittElem {
        self.check(a);
        self.elem(a.c.iter().map(|&x| (self.pk - x) % self.pk).collect())
    }

    pub fn sub(&self, a: &WittElem, b: &WittElem) -> WittElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale_int(&self, a: &WittElem, n: i64) -> WittElem {
        self.check(a);
        let n = n.rem_euclid(self.pk as i64) as u64;
        self.elem(a.c.iter().map(|&x| x * n % self.pk).collect())
    }

    /// Product in the base ring `(Z/p^k)[x]/g~`, accumulated into `out`.
    fn base_mul_acc(&self, a: &[u64], b: &[u64], out: &mut [u64], negate: bool) {
        let (s, pk) = (self.s, self.pk);
        // s <= 32 since q fits in u32
        let mut buf = [0u64; 64];
        let prod = &mut buf[..2 * s - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % pk;
            }
        }
        for top in (s..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..s {
                let idx = top - s + i;
                prod[idx] = (prod[idx] + (pk - c) * self.g_lift[i]) % pk;
            }
        }
        for (o, &v) in out.iter_mut().zip(prod.iter()) {
            *o = if negate {
                (*o + pk - v) % pk
            } else {
                (*o + v) % pk
            };
        }
    }

    pub fn mul(&self, a: &WittElem, b: &WittElem) -> WittElem {
        self.check(a);
        self.check(b);
        let (s, d, pk) = (self.s, self.d, self.pk);
        let mut out = vec![0u64; (2 * d - 1) * s];
        if s == 1 {
            for (i, &x) in a.c.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.c.iter().enumerate() {
                    out[i + j] = (out[i + j] + x * y) % pk;
                }
            }
            for top in (d..2 * d - 1).rev() {
                let c = out[top];
                if c == 0 {
                    continue;
                }
                out[top] = 0;
                for (j, coef) in self.p_lift[..d].iter().enumerate() {
                    let idx = top - d + j;
                    out[idx] = (out[idx] + (pk - c) * coef[0]) % pk;
                }
            }
        } else {
            for i in 0..d {
                let x = &a.c[i * s..(i + 1) * s];
                if x.iter().all(|&v| v == 0) {
                    continue;
                }
                for j in 0..d {
                    let y = &b.c[j * s..(j + 1) * s];
                    let idx = (i + j) * s;
                    self.base_mul_acc(x, y, &mut out[idx..idx + s], false);
                }
            }
            for top in (d..2 * d - 1).rev() {
                let c: Vec<u64> = out[top * s..(top + 1) * s].to_vec();
                if c.iter().all(|&v| v == 0) {
                    continue;
                }
                out[top * s..(top + 1) * s].iter_mut().for_each(|v| *v = 0);
                for j in 0..d {
                    let idx = (top - d + j) * s;
                    self.base_mul_acc(&c, &self.p_lift[j], &mut out[idx..idx + s], true);
                }
            }
        }
        out.truncate(d * s);
        self.elem(out)
    }

    pub fn pow_exp(&self, a: &WittElem, e: &Exponent) -> WittElem {
        let mut acc = self.one();
        for i in (0..e.value().bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.value().bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow(&self, a: &WittElem, e: &BigUint) -> WittElem {
        self.pow_exp(a, &Exponent::new(e))
    }

    /// Teichmüller representative of `r in A/P`: the coefficientwise lift
    /// raised `k - 1` times to the power `q^d`. Each such power gains one
    /// `p`-adic digit.
    pub fn teichmuller(&self, r: &Poly) -> WittElem {
        self.teichmuller_of_lift(self.lift(r))
    }

    pub fn teichmuller_residue(&self, r: &[FqElem]) -> WittElem {
        self.teichmuller_of_lift(self.lift_residue(r))
    }

    fn teichmuller_of_lift(&self, mut w: WittElem) -> WittElem {
        for _ in 1..self.k {
            w = self.pow_exp(&w, &self.qd_exp);
        }
        w
    }

    /// `w` is divisible by `p^e`.
    pub fn divisible_by_p_pow(&self, w: &WittElem, e: u32) -> Result<bool> {
        self.check(w);
        if e > self.k {
            return Err(Error::Precondition(format!(
                "divisibility by p^{e} needs precision k >= {e}, have {}",
                self.k
            )));
        }
        let pe = self.p.pow(e);
        Ok(w.c.iter().all(|&x| x % pe == 0))
    }

    /// Human-readable form: a polynomial in `T` with coefficients mod `p^k`
    /// (in `a` when `s > 1`).
    pub fn format(&self, w: &WittElem) -> String {
        let mut terms = Vec::new();
        for t in (0..self.d).rev() {
            let coeffs = &w.c[t * self.s..(t + 1) * self.s];
            if coeffs.iter().all(|&x| x == 0) {
                continue;
            }
            let mut parts = Vec::new();
            for (i, &x) in coeffs.iter().enumerate().rev() {
                if x == 0 {
                    continue;
                }
                parts.push(match (i, x) {
                    (0, x) => x.to_string(),
                    (1, 1) => "a".to_string(),
                    (1, x) => format!("{x}*a"),
                    (i, 1) => format!("a^{i}"),
                    (i, x) => format!("{x}*a^{i}"),
                });
            }
            let c = parts.join("+");
            let mono = match t {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{t}"),
            };
            terms.push(match (t, c.as_str()) {
                (0, _) => c,
                (_, "1") => mono,
                _ if parts.len() > 1 => format!("({c})*{mono}"),
                _ => format!("{c}*{mono}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        };
        format!("{body} (mod {})", self.pk)
    }

    // ---- W = W_k[zeta_p] ----

    fn cyclo_len(&self) -> usize {
        (self.p - 1) as usize
    }

    /// Folds a length-`p` vector on `1, z, ..., z^{p-1}` onto the basis
    /// `1, ..., z^{p-2}` using `z^{p-1} = -(1 + ... + z^{p-2})`.
    fn fold_cyclo(&self, mut v: Vec<WittElem>) -> CycloElem {
        let top = v.pop().expect("p >= 2");
        let coords = v.iter().map(|c| self.sub(c, &top)).collect();
        CycloElem { coords }
    }

    pub fn cyclo_embed(&self, a: &WittElem) -> CycloElem {
        let mut coords = vec![self.zero(); self.cyclo_len()];
        coords[0] = a.clone();
        CycloElem { coords }
    }

    pub fn cyclo_zero(&self) -> CycloElem {
        self.cyclo_embed(&self.zero())
    }

    pub fn cyclo_one(&self) -> CycloElem {
        self.cyclo_embed(&self.one())
    }

    /// `z^j` for any integer `j`.
    pub fn zeta_pow(&self, j: i64) -> CycloElem {
        let p = self.p as usize;
        let mut v = vec![self.zero(); p];
        v[j.rem_euclid(p as i64) as usize] = self.one();
        self.fold_cyclo(v)
    }

    /// The primitive `p`-th root of unity `z`.
    pub fn zeta(&self) -> CycloElem {
        self.zeta_pow(1)
    }

    pub fn cyclo_add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.add(x, y))
                .collect(),
        }
    }

    pub fn cyclo_sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.sub(x, y))
                .collect(),
        }
    }

    pub fn cyclo_mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let p = self.p as usize;
        let mut v = vec![self.zero(); p];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                let idx = (i + j) % p;
                v[idx] = self.add(&v[idx], &self.mul(x, y));
            }
        }
        self.fold_cyclo(v)
    }

    /// `W_k`-multiple `c * x`.
    pub fn cyclo_scale(&self, x: &CycloElem, c: &WittElem) -> CycloElem {
        CycloElem {
            coords: x.coords.iter().map(|v| self.mul(v, c)).collect(),
        }
    }

    /// Galois conjugate `z -> z^j`, `j` prime to `p`.
    pub fn cyclo_conjugate(&self, x: &CycloElem, j: u64) -> CycloElem {
        let p = self.p as usize;
        let mut v = vec![self.zero(); p];
        for (i, c) in x.coords.iter().enumerate() {
            let idx = (i * j as usize) % p;
            v[idx] = self.add(&v[idx], c);
        }
        self.fold_cyclo(v)
    }

    /// `prod_{j=1}^{p-1} x(z -> z^j)`, which lies in `W_k`.
    pub fn norm_to_witt(&self, x: &CycloElem) -> Result<WittElem> {
        let mut acc = x.clone();
        for j in 2..self.p {
            acc = self.cyclo_mul(&acc, &self.cyclo_conjugate(x, j));
        }
        if acc.coords[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant(
                "norm to W_k has components above z^0".into(),
            ));
        }
        Ok(acc.coords.swap_remove(0))
    }

    /// Whether `(z - 1)^e` divides `x`. The extension is totally ramified
    /// of degree `p - 1`, so `v_{z-1}(x) = v_p(Nm x)`.
    pub fn pi_divisible(&self, x: &CycloElem, e: u32) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::Precondition(
                "(zeta_p - 1)-divisibility is only defined for odd p".into(),
            ));
        }
        if e > self.k {
            return Err(Error::Precondition(format!(
                "pi^{e}-divisibility needs precision k >= {e}, have {}",
                self.k
            )));
        }
        let norm = self.norm_to_witt(x)?;
        self.divisible_by_p_pow(&norm, e)
    }

    pub fn cyclo_is_zero(&self, x: &CycloElem) -> bool {
        x.coords.iter().all(WittElem::is_zero)
    }

    pub fn format_cyclo(&self, x: &CycloElem) -> String {
        let parts: Vec<String> = x
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let body = self.format(c);
                match i {
                    0 => format!("[{body}]"),
                    1 => format!("[{body}]*z"),
                    _ => format!("[{body}]*z^{i}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use crate::polyring::enumerate_monic;

    fn ctx(q: (u64, u32), p: &str, k: u32) -> WittCtx {
        let f = make_field(q.0, q.1, None).unwrap();
        make_witt_ctx(&Poly::parse(p, &f, Var::T).unwrap(), k).unwrap()
    }

    struct Lcg(u64);

    impl Lcg {
        fn next(&mut self) -> u64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            self.0 >> 11
        }

        fn elem(&mut self, w: &WittCtx) -> WittElem {
            let r: Vec<u64> = (0..w.total_degree())
                .map(|_| self.next() % w.modulus())
                .collect();
            w.from_residues(&r).unwrap()
        }
    }

    #[test]
    fn construction_examples() {
        let w = ctx((3, 1), "T+1", 2);
        assert_eq!((w.modulus(), w.total_degree()), (9, 1));
        let w = ctx((3, 1), "T^3-T^2+1", 2);
        assert_eq!((w.degree(), w.total_degree()), (3, 3));
        let w = ctx((2, 2), "T^5+a^2*T^4+T^3+a*T^2+a^2", 2);
        assert_eq!((w.modulus(), w.total_degree()), (4, 10));
        assert_eq!(w.base_lift(), &[1, 1, 1]);
        let f = make_field(3, 1, None).unwrap();
        assert!(matches!(
            make_witt_ctx(&Poly::parse("T^2", &f, Var::T).unwrap(), 2),
            Err(Error::Reducible(_))
        ));
    }

    #[test]
    fn teichmuller_small_values() {
        let w = ctx((3, 1), "T", 2);
        let f = w.field().clone();
        let two = Poly::constant(&f, f.from_int(2), Var::T);
        assert_eq!(w.teichmuller(&two), w.from_int(8));
        for p in ["T^3-T^2+1", "T^2+1"] {
            let w = ctx((3, 1), p, 3);
            assert_eq!(w.teichmuller(&Poly::one(&f, Var::T)), w.one());
            assert_eq!(
                w.teichmuller(&Poly::constant(&f, f.from_int(2), Var::T)),
                w.from_int(-1)
            );
        }
    }

    fn residues(w: &WittCtx) -> Vec<Poly> {
        let f = w.field().clone();
        let mut out = vec![Poly::zero(&f, Var::T)];
        for m in 0..w.degree() {
            for a in enumerate_monic(&f, m, Var::T) {
                for c in f.enumerate().skip(1) {
                    out.push(a.scale(c));
                }
            }
        }
        out
    }

    #[test]
    fn teichmuller_is_a_multiplicative_section() {
        for k in 1..=3 {
            for p in ["T+1", "T^2+1", "T^2+T+2"] {
                let w = ctx((3, 1), p, k);
                let rs = residues(&w);
                let lifts: Vec<WittElem> = rs.iter().map(|r| w.teichmuller(r)).collect();
                for (r, t) in rs.iter().zip(&lifts) {
                    assert_eq!(&w.reduce_mod_p(t), r);
                    assert_eq!(&w.pow(t, w.q_pow_d()), t);
                    if !r.is_zero() {
                        let order = w.q_pow_d() - 1u32;
                        assert_eq!(w.pow(t, &order), w.one());
                    }
                }
                for (i, r1) in rs.iter().enumerate() {
                    for (j, r2) in rs.iter().enumerate() {
                        let prod = r1.mul(r2).rem(w.prime()).unwrap();
                        assert_eq!(w.teichmuller(&prod), w.mul(&lifts[i], &lifts[j]));
                    }
                }
            }
        }
    }

    #[test]
    fn teichmuller_fixed_point_random() {
        let mut rng = Lcg(3);
        for k in 1..=3 {
            let w = ctx((2, 2), "T^3+a*T+1", k);
            let f = w.field().clone();
            for _ in 0..100 {
                let coeffs = (0..3)
                    .map(|_| f.from_code((rng.next() % 4) as u32).unwrap())
                    .collect();
                let r = Poly::new(f.clone(), coeffs, Var::T);
                let t = w.teichmuller(&r);
                assert_eq!(w.pow(&t, w.q_pow_d()), t);
            }
        }
    }

    #[test]
    fn ring_axioms_random() {
        let mut rng = Lcg(11);
        for (q, p) in [
            ((3, 1), "T^3-T^2+1"),
            ((2, 2), "T^5+a^2*T^4+T^3+a*T^2+a^2"),
            ((5, 1), "T^2+2"),
        ] {
            let w = ctx(q, p, 2);
            for _ in 0..100 {
                let (a, b, c) = (rng.elem(&w), rng.elem(&w), rng.elem(&w));
                assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
                assert_eq!(w.mul(&a, &b), w.mul(&b, &a));
                assert_eq!(
                    w.mul(&a, &w.add(&b, &c)),
                    w.add(&w.mul(&a, &b), &w.mul(&a, &c))
                );
                assert_eq!(w.mul(&a, &w.one()), a);
                let (ra, rb) = (w.reduce_mod_p(&a), w.reduce_mod_p(&b));
                assert_eq!(
                    w.reduce_mod_p(&w.mul(&a, &b)),
                    ra.mul(&rb).rem(w.prime()).unwrap()
                );
            }
        }
    }

    #[test]
    fn precision_coherence() {
        let mut rng = Lcg(29);
        let w3 = ctx((3, 1), "T^3-T^2+1", 3);
        let w2 = ctx((3, 1), "T^3-T^2+1", 2);
        for _ in 0..50 {
            // random expression tree of depth 3 over four leaves
            let leaves: Vec<WittElem> = (0..4).map(|_| rng.elem(&w3)).collect();
            let ops: Vec<u64> = (0..3).map(|_| rng.next() % 3).collect();
            let eval = |w: &WittCtx, ls: &[WittElem]| {
                let apply = |op: u64, x: &WittElem, y: &WittElem| match op {
                    0 => w.add(x, y),
                    1 => w.sub(x, y),
                    _ => w.mul(x, y),
                };
                let l = apply(ops[0], &ls[0], &ls[1]);
                let r = apply(ops[1], &ls[2], &ls[3]);
                apply(ops[2], &l, &r)
            };
            let high = eval(&w3, &leaves);
            let low_leaves: Vec<WittElem> = leaves
                .iter()
                .map(|x| w2.reduce_from(&w3, x).unwrap())
                .collect();
            assert_eq!(w2.reduce_from(&w3, &high).unwrap(), eval(&w2, &low_leaves));
        }
        let f = w3.field().clone();
        let r = Poly::parse("T^2+2", &f, Var::T).unwrap();
        assert_eq!(
            w2.reduce_from(&w3, &w3.teichmuller(&r)).unwrap(),
            w2.teichmuller(&r)
        );
    }

    #[test]
    #[should_panic(expected = "different Witt context")]
    fn mixed_contexts_panic() {
        let a = ctx((3, 1), "T+1", 2);
        let b = ctx((3, 1), "T+1", 2);
        a.add(&a.one(), &b.one());
    }

    #[test]
    fn cyclo_norm_examples() {
        let w = ctx((3, 1), "T^2+1", 2);
        assert_eq!(w.norm_to_witt(&w.cyclo_one()).unwrap(), w.one());
        let z_minus_1 = w.cyclo_sub(&w.zeta(), &w.cyclo_one());
        assert_eq!(w.norm_to_witt(&z_minus_1).unwrap(), w.from_int(3));
        assert!(w.pi_divisible(&z_minus_1, 1).unwrap());
        assert!(!w.pi_divisible(&z_minus_1, 2).unwrap());
        assert!(w.pi_divisible(&w.cyclo_embed(&w.from_int(3)), 2).unwrap());
        assert!(w.pi_divisible(&w.cyclo_zero(), 2).unwrap());
        assert!(w.pi_divisible(&w.cyclo_zero(), 3).is_err());
        // z^3 = 1, 1 + z + z^2 = 0
        let z = w.zeta();
        assert_eq!(w.cyclo_mul(&z, &w.cyclo_mul(&z, &z)), w.cyclo_one());
        assert!(w.cyclo_is_zero(&w.cyclo_add(&w.cyclo_add(&w.cyclo_one(), &z), &w.zeta_pow(2))));
    }

    #[test]
    fn cyclo_norm_multiplicative() {
        let mut rng = Lcg(5);
        for (q, p) in [((3, 1), "T^2+1"), ((5, 1), "T+2"), ((7, 1), "T+1")] {
            let w = ctx(q, p, 2);
            let rand_cyclo = |rng: &mut Lcg| CycloElem {
                coords: (0..w.p() - 1).map(|_| rng.elem(&w)).collect(),
            };
            for _ in 0..100 {
                let (x, y) = (rand_cyclo(&mut rng), rand_cyclo(&mut rng));
                let lhs = w.norm_to_witt(&w.cyclo_mul(&x, &y)).unwrap();
                let rhs = w.mul(&w.norm_to_witt(&x).unwrap(), &w.norm_to_witt(&y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn p_equals_two_collapses() {
        let w = ctx((2, 2), "T^2+T+a", 2);
        assert_eq!(w.zeta().coords, vec![w.from_int(-1)]);
        assert_eq!(
            w.norm_to_witt(&w.cyclo_embed(&w.from_int(3))).unwrap(),
            w.from_int(3)
        );
        assert!(w.pi_divisible(&w.cyclo_zero(), 1).is_err());
    }

    #[test]
    fn text_form() {
        let w = ctx((3, 1), "T^2+1", 2);
        let x = w.from_residues(&[8, 3]).unwrap();
        assert_eq!(w.format(&x), "3*T+8 (mod 9)");
        assert_eq!(w.format(&w.zero()), "0 (mod 9)");
    }
}
