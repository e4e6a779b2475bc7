//! The coefficient field `F_q = F_p[a]/(g)`.
//!
//! Elements are stored as packed power-basis coordinates: the element
//! `c_0 + c_1 a + ... + c_{s-1} a^{s-1}` is the integer code
//! `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`. Code order is therefore the
//! coordinate-lexicographic order with `c_0` varying fastest, which is the
//! order produced by [`FieldSpec::enumerate`].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::polyring::{Poly, Var};

/// Name of the generator of `F_q` over `F_p` in every text form.
pub const GENERATOR_SYMBOL: &str = "a";

/// Fields up to this size carry full addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// An element of `F_q`, packed as base-`p` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field `F_q` with `q = p^s`.
///
/// Immutable after construction; share it behind an [`Arc`].
pub struct FieldSpec {
    p: u32,
    s: u32,
    q: u32,
    q_big: BigUint,
    /// Ascending coefficients of the monic modulus `g`, `s + 1` entries.
    modulus: Option<Vec<u32>>,
    pow_p: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("s", &self.s)
            .field("modulus", &self.modulus_text())
            .finish()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, s)`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut s = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

/// Builds `F_q` from its cardinality and an optional modulus written in the
/// generator symbol (`a^2+a+1`), as accepted on the command line.
pub fn field_from_q(q: u64, modulus: Option<&str>) -> Result<Arc<FieldSpec>> {
    let (p, s) =
        prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    let Some(text) = modulus else {
        return make_field(p, s, None);
    };
    let prime = make_field(p, 1, None)?;
    let as_poly = crate::polyring::Poly::parse(
        &text.replace(GENERATOR_SYMBOL, "T"),
        &prime,
        crate::polyring::Var::T,
    )
    .map_err(|e| Error::InvalidModulus(format!("{text}: {e}")))?;
    let coeffs: Vec<u64> = as_poly.coeffs().iter().map(|c| c.code() as u64).collect();
    make_field(p, s, Some(&coeffs))
}

/// Builds `F_{p^s}`. When `modulus` is absent and `s > 1`, the modulus is the
/// monic irreducible of degree `s` whose coefficient sequence
/// `(g_0, g_1, ..., g_{s-1})` is lexicographically smallest.
pub fn make_field(p: u64, s: u32, modulus: Option<&[u64]>) -> Result<Arc<FieldSpec>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 {
        return Err(Error::InvalidField(
            "extension degree must be at least 1".into(),
        ));
    }
    let q = (p as u128).pow(s);
    if p >= 1 << 16 || q > u32::MAX as u128 {
        return Err(Error::InvalidField(format!("{p}^{s} is too large")));
    }
    let p = p as u32;
    let prime = Arc::new(FieldSpec::build(p, 1, None));
    let modulus = match (s, modulus) {
        (1, None) => None,
        (1, Some(g)) => {
            // A linear modulus is harmless but must still be x + c; it adds
            // nothing, so it is dropped after validation.
            if g.len() != 2 || g[1] != 1 || g[0] >= p as u64 {
                return Err(Error::InvalidModulus(
                    "expected a monic linear polynomial".into(),
                ));
            }
            None
        }
        (_, Some(g)) => {
            if g.len() != s as usize + 1 || g[s as usize] != 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected a monic polynomial of degree {s}"
                )));
            }
            if g.iter().any(|&c| c >= p as u64) {
                return Err(Error::InvalidModulus(format!(
                    "coefficients must lie in [0, {p})"
                )));
            }
            let g: Vec<u32> = g.iter().map(|&c| c as u32).collect();
            if !prime_poly(&prime, &g).is_irreducible()? {
                return Err(Error::InvalidModulus("modulus is reducible".into()));
            }
            Some(g)
        }
        (_, None) => Some(smallest_irreducible(&prime, s)?),
    };
    Ok(Arc::new(FieldSpec::build(p, s, modulus)))
}

fn prime_poly(prime: &Arc<FieldSpec>, coeffs: &[u32]) -> Poly {
    Poly::new(
        prime.clone(),
        coeffs.iter().map(|&c| FqElem(c)).collect(),
        Var::T,
    )
}

fn smallest_irreducible(prime: &Arc<FieldSpec>, s: u32) -> Result<Vec<u32>> {
    let p = prime.p;
    let count = p.pow(s);
    for t in 0..count {
        // g_0 is the most significant digit of t.
        let mut coeffs = vec![0u32; s as usize + 1];
        let mut rest = t;
        for i in (0..s as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[s as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if prime_poly(prime, &coeffs).is_irreducible()? {
            return Ok(coeffs);
        }
    }
    Err(Error::Invariant(format!(
        "no irreducible polynomial of degree {s} over F_{p}"
    )))
}

impl FieldSpec {
    fn build(p: u32, s: u32, modulus: Option<Vec<u32>>) -> FieldSpec {
        let q = p.pow(s);
        let pow_p = (0..=s).map(|i| p.pow(i)).collect();
        let mut field = FieldSpec {
            p,
            s,
            q,
            q_big: BigUint::from(q),
            modulus,
            pow_p,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add_slow(a, b);
                    mul[(a * q + b) as usize] = field.mul_slow(a, b);
                }
            }
            let neg = (0..q).map(|a| field.neg_slow(a)).collect();
            let mut inv = vec![0; n];
            for a in 1..q {
                inv[a as usize] = (1..q)
                    .find(|&b| mul[(a * q + b) as usize] == 1)
                    .unwrap_or(0);
            }
            field.tables = Some(Tables { add, mul, neg, inv });
        }
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Field size as a machine integer (always fits, see [`make_field`]).
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn q_big(&self) -> &BigUint {
        &self.q_big
    }

    /// Ascending modulus coefficients, `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.s == 1
    }

    /// The modulus written in the generator symbol, e.g. `a^2+a+1`.
    pub fn modulus_text(&self) -> Option<String> {
        let g = self.modulus.as_ref()?;
        Some(format_coords(g, self.p))
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// The generator `a` (equal to `0` coordinates shifted once); for a
    /// prime field there is no generator and this returns `None`.
    pub fn generator(&self) -> Option<FqElem> {
        (self.s > 1).then_some(FqElem(self.p))
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_code(&self, code: u32) -> Result<FqElem> {
        if code < self.q {
            Ok(FqElem(code))
        } else {
            Err(Error::NotInField(format!("code {code} >= q = {}", self.q)))
        }
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FqElem> {
        if coords.len() != self.s as usize {
            return Err(Error::NotInField(format!(
                "expected {} coordinates",
                self.s
            )));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.p) {
            return Err(Error::NotInField(format!(
                "coordinate {c} not reduced mod {}",
                self.p
            )));
        }
        Ok(FqElem(
            coords.iter().rev().fold(0, |acc, &c| acc * self.p + c),
        ))
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        (0..self.s)
            .map(|i| (a.0 / self.pow_p[i as usize]) % self.p)
            .collect()
    }

    /// All `q` elements in code order.
    pub fn enumerate(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.add[(a.0 * self.q + b.0) as usize]),
            None => FqElem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.neg[a.0 as usize]),
            None => FqElem(self.neg_slow(a.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.mul[(a.0 * self.q + b.0) as usize]),
            None => FqElem(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(match &self.tables {
            Some(t) => FqElem(t.inv[a.0 as usize]),
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace `a + a^p + ... + a^{p^{s-1}}`, as a residue in `[0, p)`.
    pub fn trace(&self, a: FqElem) -> u32 {
        let mut acc = FqElem::ZERO;
        let mut conj = a;
        for _ in 0..self.s {
            acc = self.add(acc, conj);
            conj = self.pow(conj, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }

    /// Canonical text form: decimal for prime-field elements, otherwise a
    /// polynomial in `a` with descending powers.
    pub fn format_elem(&self, a: FqElem) -> String {
        format_coords(&self.coords(a), self.p)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.s == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (ca, cb) = (self.coords(FqElem(a)), self.coords(FqElem(b)));
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        sum.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let c: Vec<u32> = self
            .coords(FqElem(a))
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.s == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let s = self.s as usize;
        let g = self
            .modulus
            .as_ref()
            .expect("extension field has a modulus");
        let (ca, cb) = (self.coords(FqElem(a)), self.coords(FqElem(b)));
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (s..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &gi) in g[..s].iter().enumerate() {
                let idx = top - s + i;
                prod[idx] = (prod[idx] + (p - c) * gi as u64) % p;
            }
        }
        prod[..s]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c as u32)
    }
}

/// Formats ascending `F_p` coordinates as a polynomial in `a`.
fn format_coords(coords: &[u32], _p: u32) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coords.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => GENERATOR_SYMBOL.to_string(),
            (1, c) => format!("{c}*{GENERATOR_SYMBOL}"),
            (i, 1) => format!("{GENERATOR_SYMBOL}^{i}"),
            (i, c) => format!("{c}*{GENERATOR_SYMBOL}^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
