use std::sync::Arc;

use num_bigint::BigUint;

use super::{Poly, Var};
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FqElem};

/// An exponent unpacked into its bits, most significant first, so that the
/// same exponent can drive many square-and-multiply runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponent {
    value: BigUint,
    bits: Vec<bool>,
}

impl Exponent {
    pub fn new(value: &BigUint) -> Exponent {
        let n = value.bits();
        let bits = (0..n).rev().map(|i| value.bit(i)).collect();
        Exponent {
            value: value.clone(),
            bits,
        }
    }

    pub fn from_u64(value: u64) -> Exponent {
        Exponent::new(&BigUint::from(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_empty()
    }
}

/// The residue ring `F_q[T]/(P)` for a monic `P` of degree `d >= 1`.
///
/// Residues are handled internally as length-`d` coefficient vectors. The
/// context keeps `-P_0, ..., -P_{d-1}` so that folding a coefficient above
/// degree `d - 1` is a single multiply-add row.
pub struct ResidueCtx {
    field: Arc<FieldSpec>,
    modulus: Poly,
    d: usize,
    neg_low: Vec<FqElem>,
}

impl ResidueCtx {
    pub fn new(modulus: &Poly) -> Result<ResidueCtx> {
        if modulus.is_constant() {
            return Err(Error::Constant);
        }
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        let field = modulus.field().clone();
        let d = modulus.degree().unwrap();
        let neg_low = modulus.coeffs()[..d]
            .iter()
            .map(|&c| field.neg(c))
            .collect();
        Ok(ResidueCtx {
            field,
            modulus: modulus.clone(),
            d,
            neg_low,
        })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Reduces a coefficient vector in place to exactly `d` entries.
    pub fn reduce_vec(&self, v: &mut Vec<FqElem>) {
        let f = &*self.field;
        let d = self.d;
        for top in (d..v.len()).rev() {
            let c = v[top];
            if c.is_zero() {
                continue;
            }
            let base = top - d;
            for (j, &m) in self.neg_low.iter().enumerate() {
                v[base + j] = f.add(v[base + j], f.mul(c, m));
            }
        }
        v.resize(d, FqElem::ZERO);
    }

    /// The residue of `a` as a length-`d` vector.
    pub fn residue(&self, a: &Poly) -> Vec<FqElem> {
        let mut v = a.coeffs().to_vec();
        self.reduce_vec(&mut v);
        v
    }

    pub fn to_poly(&self, v: &[FqElem]) -> Poly {
        Poly::new(self.field.clone(), v.to_vec(), self.modulus.var())
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        Poly::new(self.field.clone(), self.residue(a), a.var())
    }

    /// `out = a * b mod P` for length-`d` inputs; `out` is reused.
    pub fn mul_into(&self, a: &[FqElem], b: &[FqElem], out: &mut Vec<FqElem>) {
        let f = &*self.field;
        out.clear();
        out.resize(2 * self.d - 1, FqElem::ZERO);
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        self.reduce_vec(out);
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Vec::new();
        self.mul_into(&self.residue(a), &self.residue(b), &mut out);
        self.to_poly(&out).with_var(a.var())
    }

    /// `a^e mod P` on length-`d` residues, by left-to-right square-and-multiply.
    pub fn pow_vec(&self, a: &[FqElem], e: &Exponent) -> Vec<FqElem> {
        let mut acc = vec![FqElem::ZERO; self.d];
        acc[0] = FqElem::ONE;
        let mut tmp = Vec::with_capacity(2 * self.d);
        for &bit in &e.bits {
            self.mul_into(&acc, &acc, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
            if bit {
                self.mul_into(&acc, a, &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
        }
        acc
    }

    pub fn powmod_exp(&self, a: &Poly, e: &Exponent) -> Poly {
        self.to_poly(&self.pow_vec(&self.residue(a), e))
            .with_var(a.var())
    }

    pub fn powmod(&self, a: &Poly, e: &BigUint) -> Poly {
        self.powmod_exp(a, &Exponent::new(e))
    }

    /// Residue vector of the monic stratum element with the given low
    /// coefficients (`T^m + low`), reduced; avoids building a [`Poly`].
    pub fn monic_residue(&self, low: &[FqElem]) -> Vec<FqElem> {
        let mut v = low.to_vec();
        v.push(FqElem::ONE);
        self.reduce_vec(&mut v);
        v
    }

    pub fn var(&self) -> Var {
        self.modulus.var()
    }
}
