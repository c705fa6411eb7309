//! Dense univariate polynomials over a [`FieldCtx`].

use crate::error::{Error, Result};
use crate::ffield::{Fe, FieldCtx};

/// Little-endian coefficient vector with no trailing zeros; the zero
/// polynomial is the empty vector.
///
/// Coefficients are bare [`Fe`] encodings, so the same `Poly` value can be
/// read in any field containing them. All arithmetic takes the field
/// explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Fe::ONE)
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c·X^deg`.
    pub fn monomial(c: Fe, deg: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `X - r`.
    pub fn linear_root(r: Fe, ctx: &FieldCtx) -> Poly {
        Poly::from_coeffs(vec![ctx.neg(r), Fe::ONE])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn map_coeffs(&self, f: impl FnMut(Fe) -> Fe) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().copied().map(f).collect())
    }

    pub fn add(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| ctx.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        self.map_coeffs(|c| ctx.neg(c))
    }

    pub fn scale(&self, c: Fe, ctx: &FieldCtx) -> Poly {
        self.map_coeffs(|a| ctx.mul(a, c))
    }

    pub fn mul(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u64, ctx: &FieldCtx) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Poly, ctx: &FieldCtx) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = ctx.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = ctx.sub(rem[i + j], ctx.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        Ok(self.divmod(divisor, ctx)?.1)
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u64, modulus: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        let mut base = self.rem(modulus, ctx)?;
        let mut acc = Poly::one().rem(modulus, ctx)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx).rem(modulus, ctx)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx).rem(modulus, ctx)?;
            }
        }
        Ok(acc)
    }

    /// Scales to leading coefficient one; the zero polynomial stays zero.
    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match ctx.inv(self.leading()) {
            Ok(inv) => self.scale(inv, ctx),
            Err(_) => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, ctx).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// Formal derivative.
    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(ctx.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Fe, ctx: &FieldCtx) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    /// Divides by `X - r` once; `None` if `r` is not a root.
    pub fn deflate(&self, r: Fe, ctx: &FieldCtx) -> Option<Poly> {
        let n = self.coeffs.len();
        if n == 0 {
            return None;
        }
        let mut out = vec![Fe::ZERO; n - 1];
        let mut carry = Fe::ZERO;
        for i in (0..n).rev() {
            let v = ctx.add(self.coeffs[i], ctx.mul(carry, r));
            if i == 0 {
                return v.is_zero().then(|| Poly::from_coeffs(out));
            }
            out[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of `r` as a root (0 when not a root). The zero
    /// polynomial has no well-defined multiplicity and returns 0.
    pub fn root_multiplicity(&self, r: Fe, ctx: &FieldCtx) -> u32 {
        let mut cur = self.clone();
        let mut m = 0;
        if cur.is_zero() {
            return 0;
        }
        while let Some(next) = cur.deflate(r, ctx) {
            m += 1;
            cur = next;
        }
        m
    }

    /// All roots in `ctx` with multiplicity, by exhaustive scan in canonical
    /// element order. The zero polynomial reports no roots.
    pub fn roots_with_multiplicity(&self, ctx: &FieldCtx) -> Vec<(Fe, u32)> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        if cur.is_zero() {
            return out;
        }
        for x in ctx.elements() {
            if cur.degree().unwrap_or(0) == 0 {
                break;
            }
            let mut m = 0;
            while let Some(next) = cur.deflate(x, ctx) {
                m += 1;
                cur = next;
            }
            if m > 0 {
                out.push((x, m));
            }
        }
        out
    }

    /// Ben-Or irreducibility test over `ctx` (coefficients must lie in it).
    pub fn is_irreducible(&self, ctx: &FieldCtx) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = Poly::monomial(Fe::ONE, 1);
        let q = u64::from(ctx.size());
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.powmod(q, self, ctx).expect("nonzero modulus");
            if h.sub(&x, ctx).gcd(self, ctx) != Poly::one() {
                return false;
            }
        }
        true
    }

    /// Text form `"c0 + c1*X + c2*X^2 …"`, zero terms omitted.
    pub fn display(&self, ctx: &FieldCtx) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let c = if ctx.degree() > 1 {
                    format!("({})", ctx.format(c))
                } else {
                    ctx.format(c)
                };
                match i {
                    0 => c,
                    1 => format!("{c}*X"),
                    _ => format!("{c}*X^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// `X^2 - aX + b` has no root in `ctx`.
pub fn is_irreducible_quadratic(a: Fe, b: Fe, ctx: &FieldCtx) -> bool {
    ctx.elements().all(|x| {
        let v = ctx.add(ctx.sub(ctx.square(x), ctx.mul(a, x)), b);
        !v.is_zero()
    })
}

/// `X^2 - aX + b`.
pub fn monic_quadratic(a: Fe, b: Fe, ctx: &FieldCtx) -> Poly {
    Poly::from_coeffs(vec![b, ctx.neg(a), Fe::ONE])
}
