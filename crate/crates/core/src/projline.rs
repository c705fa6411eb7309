//! The projective line over a finite field: points, Möbius maps (PGL₂) and
//! rational self-maps with their fibers and ramification.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ffield::{Fe, FieldCtx, FieldTower};
use crate::unipoly::Poly;

/// A point of `P¹`: `(x : 1)` or the point at infinity `(1 : 0)`.
///
/// The derived order puts finite points first, in canonical element order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum P1Point {
    Finite(Fe),
    Infinity,
}

impl P1Point {
    pub fn finite(self) -> Option<Fe> {
        match self {
            P1Point::Finite(x) => Some(x),
            P1Point::Infinity => None,
        }
    }

    /// Dense index: the element encoding, or `size` for infinity.
    pub fn index(self, ctx: &FieldCtx) -> usize {
        match self {
            P1Point::Finite(x) => x.raw() as usize,
            P1Point::Infinity => ctx.size() as usize,
        }
    }

    pub fn from_index(i: usize, ctx: &FieldCtx) -> P1Point {
        if i == ctx.size() as usize {
            P1Point::Infinity
        } else {
            P1Point::Finite(Fe::from_raw(i as u32))
        }
    }

    pub fn format(self, ctx: &FieldCtx) -> String {
        match self {
            P1Point::Finite(x) => ctx.format(x),
            P1Point::Infinity => "inf".into(),
        }
    }

    pub fn parse(s: &str, ctx: &FieldCtx) -> Result<P1Point> {
        if s.trim() == "inf" {
            Ok(P1Point::Infinity)
        } else {
            Ok(P1Point::Finite(ctx.parse(s)?))
        }
    }

    pub fn embed(self, tower: &FieldTower, from: usize, to: usize) -> Result<P1Point> {
        Ok(match self {
            P1Point::Finite(x) => P1Point::Finite(tower.embed(from, to, x)?),
            P1Point::Infinity => P1Point::Infinity,
        })
    }

    /// Coordinatewise `x ↦ x^q` on a point of `P¹(F_{q^k})`.
    pub fn frobenius(self, tower: &FieldTower, k: usize) -> Result<P1Point> {
        Ok(match self {
            P1Point::Finite(x) => P1Point::Finite(tower.frobenius_q(k, x)?),
            P1Point::Infinity => P1Point::Infinity,
        })
    }
}

/// All of `P¹(ctx)`, finite points first.
pub fn all_points(ctx: &FieldCtx) -> impl Iterator<Item = P1Point> + '_ {
    ctx.elements()
        .map(P1Point::Finite)
        .chain(std::iter::once(P1Point::Infinity))
}

/// An element of `PGL₂`, `x ↦ (m0·x + m1)/(m2·x + m3)`, scaled so that the
/// first nonzero entry (row-major) is one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mobius {
    m: [Fe; 4],
}

impl Mobius {
    pub fn new(m: [Fe; 4], ctx: &FieldCtx) -> Result<Mobius> {
        let det = ctx.sub(ctx.mul(m[0], m[3]), ctx.mul(m[1], m[2]));
        if det.is_zero() {
            return Err(Error::Precondition("singular Möbius matrix".into()));
        }
        let lead = m
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .expect("nonzero determinant");
        let s = ctx.inv(lead)?;
        Ok(Mobius {
            m: m.map(|c| ctx.mul(c, s)),
        })
    }

    pub fn identity() -> Mobius {
        Mobius {
            m: [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE],
        }
    }

    /// `x ↦ c·x + d`.
    pub fn affine(c: Fe, d: Fe, ctx: &FieldCtx) -> Result<Mobius> {
        Mobius::new([c, d, Fe::ZERO, Fe::ONE], ctx)
    }

    pub fn entries(&self) -> [Fe; 4] {
        self.m
    }

    pub fn det(&self, ctx: &FieldCtx) -> Fe {
        ctx.sub(ctx.mul(self.m[0], self.m[3]), ctx.mul(self.m[1], self.m[2]))
    }

    pub fn apply(&self, p: P1Point, ctx: &FieldCtx) -> P1Point {
        let [a, b, c, d] = self.m;
        match p {
            P1Point::Finite(x) => {
                let num = ctx.add(ctx.mul(a, x), b);
                let den = ctx.add(ctx.mul(c, x), d);
                match ctx.div(num, den) {
                    Ok(v) => P1Point::Finite(v),
                    Err(_) => P1Point::Infinity,
                }
            }
            P1Point::Infinity => match ctx.div(a, c) {
                Ok(v) => P1Point::Finite(v),
                Err(_) => P1Point::Infinity,
            },
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius, ctx: &FieldCtx) -> Mobius {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let dot = |x: Fe, y: Fe, z: Fe, w: Fe| ctx.add(ctx.mul(x, y), ctx.mul(z, w));
        Mobius::new(
            [
                dot(a, e, b, g),
                dot(a, f, b, h),
                dot(c, e, d, g),
                dot(c, f, d, h),
            ],
            ctx,
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Mobius {
        let [a, b, c, d] = self.m;
        Mobius::new([d, ctx.neg(b), ctx.neg(c), a], ctx).expect("invertible")
    }

    pub fn embed(&self, tower: &FieldTower, from: usize, to: usize) -> Result<Mobius> {
        let mut m = self.m;
        for c in &mut m {
            *c = tower.embed(from, to, *c)?;
        }
        // Embeddings send 1 to 1, so the normalization is preserved.
        Ok(Mobius { m })
    }

    /// Smallest `k >= 1` with `self^k = id`.
    pub fn order(&self, ctx: &FieldCtx) -> u64 {
        let mut cur = *self;
        let mut k = 1;
        while cur != Mobius::identity() {
            cur = cur.compose(self, ctx);
            k += 1;
        }
        k
    }

    pub fn format(&self, ctx: &FieldCtx) -> [String; 4] {
        self.m.map(|c| ctx.format(c))
    }

    pub fn parse(entries: &[String], ctx: &FieldCtx) -> Result<Mobius> {
        if entries.len() != 4 {
            return Err(Error::SpecFormat("a Möbius map needs 4 entries".into()));
        }
        let mut m = [Fe::ZERO; 4];
        for (slot, s) in m.iter_mut().zip(entries) {
            *slot = ctx.parse(s)?;
        }
        Mobius::new(m, ctx)
    }
}

/// `PGL₂(ctx)` in canonical (row-major lexicographic) order.
pub fn pgl2(ctx: &FieldCtx) -> Vec<Mobius> {
    let q = ctx.size() as usize;
    let mut out = Vec::with_capacity(q * q * q - q);
    for c in ctx.elements().skip(1) {
        for d in ctx.elements() {
            out.push(Mobius {
                m: [Fe::ZERO, Fe::ONE, c, d],
            });
        }
    }
    for b in ctx.elements() {
        for c in ctx.elements() {
            for d in ctx.elements() {
                if ctx.mul(b, c) != d {
                    out.push(Mobius {
                        m: [Fe::ONE, b, c, d],
                    });
                }
            }
        }
    }
    out
}

/// All elements of `PGL₂(F_q)` satisfying every constraint `M(P) = image`,
/// where the points live in level `level` of the tower.
pub fn mobius_search(
    tower: &FieldTower,
    level: usize,
    constraints: &[(P1Point, P1Point)],
) -> Result<Vec<Mobius>> {
    let q = u128::from(tower.q());
    tower.budget().check_size(q * q * q - q)?;
    let ctx = tower.level(level)?;
    let mut out = Vec::new();
    for m in pgl2(tower.base()) {
        let lifted = m.embed(tower, 1, level)?;
        if constraints
            .iter()
            .all(|&(p, img)| lifted.apply(p, ctx) == img)
        {
            out.push(m);
        }
    }
    Ok(out)
}

/// A reduced rational map `num/den` with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMap {
    num: Poly,
    den: Poly,
}

/// Rejects ramification indices divisible by the characteristic.
pub fn assert_tame(e: u32, p: u32) -> Result<()> {
    if e > 1 && e.is_multiple_of(p) {
        return Err(Error::WildRamification(u64::from(e)));
    }
    Ok(())
}

impl RatMap {
    pub fn new(num: Poly, den: Poly, ctx: &FieldCtx) -> Result<RatMap> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den, ctx);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divmod(&g, ctx)?.0, den.divmod(&g, ctx)?.0)
        };
        let s = ctx.inv(den.leading())?;
        Ok(RatMap {
            num: num.scale(s, ctx),
            den: den.scale(s, ctx),
        })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn eval(&self, p: P1Point, ctx: &FieldCtx) -> P1Point {
        match p {
            P1Point::Finite(x) => {
                let n = self.num.eval(x, ctx);
                let d = self.den.eval(x, ctx);
                match ctx.div(n, d) {
                    Ok(v) => P1Point::Finite(v),
                    Err(_) => P1Point::Infinity,
                }
            }
            P1Point::Infinity => {
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap_or(0);
                if self.num.is_zero() || dn < dd {
                    P1Point::Finite(Fe::ZERO)
                } else if dn > dd {
                    P1Point::Infinity
                } else {
                    P1Point::Finite(
                        ctx.div(self.num.leading(), self.den.leading())
                            .expect("monic"),
                    )
                }
            }
        }
    }

    /// `x ↦ (num(x) - t·den(x))` for finite `t`, `den` for `t = ∞`.
    fn fiber_poly(&self, t: P1Point, ctx: &FieldCtx) -> Poly {
        match t {
            P1Point::Finite(t) => self.num.sub(&self.den.scale(t, ctx), ctx),
            P1Point::Infinity => self.den.clone(),
        }
    }

    /// Points of `P¹(ctx)` over `t`, with multiplicity (`∞` last). The
    /// multiplicities sum to the degree exactly when the fiber is rational
    /// over `ctx`.
    pub fn fiber(&self, t: P1Point, ctx: &FieldCtx) -> Vec<(P1Point, u32)> {
        let h = self.fiber_poly(t, ctx);
        let Some(dh) = h.degree() else {
            return Vec::new();
        };
        let mut out: Vec<(P1Point, u32)> = h
            .roots_with_multiplicity(ctx)
            .into_iter()
            .map(|(x, m)| (P1Point::Finite(x), m))
            .collect();
        let at_inf = self.degree() - dh;
        if at_inf > 0 {
            out.push((P1Point::Infinity, at_inf as u32));
        }
        out
    }

    /// Multiplicity of `p` in the fiber through `p`.
    pub fn ramification_index(&self, p: P1Point, ctx: &FieldCtx) -> u32 {
        let h = self.fiber_poly(self.eval(p, ctx), ctx);
        match p {
            P1Point::Finite(x) => h.root_multiplicity(x, ctx),
            P1Point::Infinity => (self.degree() - h.degree().unwrap_or(0)) as u32,
        }
    }

    /// Points of `P¹(ctx)` with ramification index above one.
    pub fn ramified_points(&self, ctx: &FieldCtx) -> Vec<(P1Point, u32)> {
        all_points(ctx)
            .map(|p| (p, self.ramification_index(p, ctx)))
            .filter(|&(_, e)| e > 1)
            .collect()
    }

    /// `post ∘ self ∘ pre`, reduced.
    pub fn compose_mobius(
        &self,
        pre: Option<&Mobius>,
        post: Option<&Mobius>,
        ctx: &FieldCtx,
    ) -> RatMap {
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        if let Some(m) = pre {
            let d = self.degree();
            let [a, b, c, e] = m.entries();
            let top = Poly::from_coeffs(vec![b, a]);
            let bottom = Poly::from_coeffs(vec![e, c]);
            let top_pows = powers(&top, d, ctx);
            let bottom_pows = powers(&bottom, d, ctx);
            let homogenize = |f: &Poly| {
                f.coeffs()
                    .iter()
                    .enumerate()
                    .fold(Poly::zero(), |acc, (i, &ci)| {
                        if ci.is_zero() {
                            return acc;
                        }
                        let term = top_pows[i].mul(&bottom_pows[d - i], ctx).scale(ci, ctx);
                        acc.add(&term, ctx)
                    })
            };
            num = homogenize(&self.num);
            den = homogenize(&self.den);
        }
        if let Some(m) = post {
            let [a, b, c, d] = m.entries();
            let n2 = num.scale(a, ctx).add(&den.scale(b, ctx), ctx);
            let d2 = num.scale(c, ctx).add(&den.scale(d, ctx), ctx);
            num = n2;
            den = d2;
        }
        RatMap::new(num, den, ctx).expect("Möbius composition keeps a nonzero denominator")
    }

    /// `self ∘ m = self`.
    pub fn is_galois_invariant(&self, m: &Mobius, ctx: &FieldCtx) -> bool {
        self.compose_mobius(Some(m), None, ctx) == *self
    }

    pub fn embed(&self, tower: &FieldTower, from: usize, to: usize) -> Result<RatMap> {
        Ok(RatMap {
            num: tower.lift_poly(&self.num, from, to)?,
            den: tower.lift_poly(&self.den, from, to)?,
        })
    }

    /// Human-readable form such as `(x^6 + x + 2)/(x^5 - x)`.
    pub fn pretty(&self, ctx: &FieldCtx) -> String {
        let num = pretty_poly(&self.num, ctx);
        if self.den == Poly::one() {
            return num;
        }
        format!("({num})/({})", pretty_poly(&self.den, ctx))
    }
}

fn powers(base: &Poly, d: usize, ctx: &FieldCtx) -> Vec<Poly> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(Poly::one());
    for i in 1..=d {
        out.push(out[i - 1].mul(base, ctx));
    }
    out
}

/// Descending-degree rendering in `x`; prime-field coefficients print as
/// residues except `-1`, which prints as a minus sign.
pub fn pretty_poly(poly: &Poly, ctx: &FieldCtx) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    let minus_one = ctx.neg(Fe::ONE);
    let mut s = String::new();
    for (i, &c) in poly.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c == minus_one && ctx.p() != 2;
        let first = s.is_empty();
        match (first, negative) {
            (true, true) => s.push('-'),
            (true, false) => {}
            (false, true) => s.push_str(" - "),
            (false, false) => s.push_str(" + "),
        }
        let mag = if negative { Fe::ONE } else { c };
        let coeff = if ctx.degree() > 1 && mag != Fe::ONE {
            format!("({})", ctx.format(mag))
        } else {
            ctx.format(mag)
        };
        match i {
            0 => s.push_str(&coeff),
            _ => {
                if mag != Fe::ONE {
                    s.push_str(&coeff);
                }
                s.push('x');
                if i > 1 {
                    let _ = write!(s, "^{i}");
                }
            }
        }
    }
    s
}
