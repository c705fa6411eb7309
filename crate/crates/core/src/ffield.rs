//! Finite fields `F_p ⊂ F_q ⊂ F_{q^2} ⊂ … ⊂ F_{q^k}` with exact arithmetic.
//!
//! Every field is an absolute extension of its prime field, stored as
//! `F_p[X]/(m(X))`. An element is encoded as the integer `Σ c_i p^i` of its
//! coefficient vector in the basis `1, X, …, X^{d-1}`; that integer is also
//! the canonical element order used everywhere for deterministic output.
//! Multiplication goes through discrete-log tables, which is why every
//! field is bounded by [`Budget::max_field_size`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unipoly::Poly;

pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;
pub const DEFAULT_MAX_LEVEL: usize = 6;
const HARD_FIELD_CAP: u64 = 1 << 26;

/// Size limits for exhaustive work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest field (number of elements) that may be constructed or scanned.
    pub max_field_size: u64,
    /// Deepest tower level the genus ladder computes before marking rows skipped.
    pub max_level: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_field_size: DEFAULT_FIELD_BOUND,
            max_level: DEFAULT_MAX_LEVEL,
        }
    }
}

impl Budget {
    /// Parses `"<max_field_size>"` or `"<max_field_size>,<max_level>"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("malformed budget {s:?}"));
        let mut parts = s.split(',').map(str::trim);
        let size: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let level = match parts.next() {
            Some(l) => l.parse().map_err(|_| bad())?,
            None => DEFAULT_MAX_LEVEL,
        };
        if parts.next().is_some() || !(2..=HARD_FIELD_CAP).contains(&size) {
            return Err(bad());
        }
        Ok(Budget {
            max_field_size: size,
            max_level: level,
        })
    }

    /// Reads `TOWERLAB_BUDGET`, falling back to the defaults when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var("TOWERLAB_BUDGET") {
            Ok(s) => Budget::parse(&s),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn check_size(&self, size: u128) -> Result<()> {
        if size > u128::from(self.max_field_size) {
            return Err(Error::FieldTooLarge {
                size,
                limit: self.max_field_size,
            });
        }
        Ok(())
    }
}

/// A field element in canonical integer encoding.
///
/// The encoding is context-free: `0` and `1` are zero and one in every
/// field, and `0..p` are the prime-field constants at every level.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub const fn from_raw(v: u32) -> Fe {
        Fe(v)
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Serializable description of a field: `{p, n, modulus}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

/// A single finite field `F_p[X]/(m)`.
pub struct FieldCtx {
    p: u32,
    degree: u32,
    modulus: Poly,
    size: u32,
    /// `exp[i] = g^i` for `0 <= i < 2(size-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus.coeffs())
            .finish()
    }
}

impl FieldCtx {
    /// The prime field `F_p`, with modulus `X`.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if u64::from(p) > HARD_FIELD_CAP {
            return Err(Error::FieldTooLarge {
                size: p.into(),
                limit: HARD_FIELD_CAP,
            });
        }
        let order = u64::from(p) - 1;
        let factors = prime_factors(order);
        let pm = u64::from(p);
        let powmod = |mut b: u64, mut e: u64| {
            let mut r = 1u64;
            b %= pm;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % pm;
                }
                b = b * b % pm;
                e >>= 1;
            }
            r
        };
        let g = (1..pm)
            .find(|&g| factors.iter().all(|&r| powmod(g, order / r) != 1))
            .expect("prime field has a primitive root");
        let mut ctx = FieldCtx {
            p,
            degree: 1,
            modulus: Poly::from_coeffs(vec![Fe::ZERO, Fe::ONE]),
            size: p,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.fill_tables(|x| (u64::from(x) * g % pm) as u32);
        Ok(ctx)
    }

    /// `F_p[X]/(modulus)` for a monic irreducible `modulus` over `prime`.
    pub fn extension(prime: &FieldCtx, modulus: &Poly) -> Result<Self> {
        if prime.degree != 1 {
            return Err(Error::InvalidModulus("base must be a prime field".into()));
        }
        let deg = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidModulus("degree must be positive".into()))?;
        if modulus.leading() != Fe::ONE {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.coeffs().iter().any(|c| c.raw() >= prime.p) {
            return Err(Error::InvalidModulus("coefficients must lie in F_p".into()));
        }
        if !modulus.is_irreducible(prime) {
            return Err(Error::InvalidModulus(format!(
                "{} is reducible over F_{}",
                modulus.display(prime),
                prime.p
            )));
        }
        let size = u64::from(prime.p)
            .checked_pow(deg as u32)
            .filter(|&s| s <= HARD_FIELD_CAP);
        let size = size.ok_or(Error::FieldTooLarge {
            size: u128::from(prime.p).pow(deg as u32),
            limit: HARD_FIELD_CAP,
        })? as u32;
        if deg == 1 {
            let mut ctx = FieldCtx::prime(prime.p)?;
            ctx.modulus = modulus.clone();
            return Ok(ctx);
        }
        let mut ctx = FieldCtx {
            p: prime.p,
            degree: deg as u32,
            modulus: modulus.clone(),
            size,
            exp: Vec::new(),
            log: Vec::new(),
        };
        // Smallest primitive element in canonical order.
        let order = u64::from(size) - 1;
        let factors = prime_factors(order);
        let g = (1..size)
            .map(|v| ctx.to_poly(Fe(v)))
            .find(|g| {
                factors.iter().all(|&r| {
                    let h = g
                        .powmod(order / r, modulus, prime)
                        .expect("nonzero modulus");
                    h != Poly::one()
                })
            })
            .expect("finite field has a primitive element");
        let step = |x: u32, ctx: &FieldCtx| {
            let prod = ctx.to_poly(Fe(x)).mul(&g, prime);
            let r = prod.rem(modulus, prime).expect("nonzero modulus");
            ctx.from_poly(&r).0
        };
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut cur = 1u32;
        for _ in 0..order {
            exp.push(cur);
            cur = step(cur, &ctx);
        }
        ctx.install_exp(exp);
        Ok(ctx)
    }

    fn fill_tables(&mut self, mul_by_g: impl Fn(u32) -> u32) {
        let order = self.size as usize - 1;
        let mut exp = Vec::with_capacity(2 * order);
        let mut cur = 1u32;
        for _ in 0..order {
            exp.push(cur);
            cur = mul_by_g(cur);
        }
        self.install_exp(exp);
    }

    fn install_exp(&mut self, mut exp: Vec<u32>) {
        let order = exp.len();
        let mut log = vec![0u32; self.size as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        exp.extend_from_within(..order);
        self.exp = exp;
        self.log = log;
    }

    /// The lexicographically smallest monic irreducible polynomial of the given
    /// degree over `prime`, where the order compares the lower coefficients as
    /// the integer `Σ c_i p^i` (the same order as field elements).
    pub fn smallest_irreducible(prime: &FieldCtx, degree: usize) -> Result<Poly> {
        if degree == 0 {
            return Err(Error::InvalidModulus("degree must be positive".into()));
        }
        let count = u64::from(prime.p)
            .checked_pow(degree as u32)
            .filter(|&c| c <= HARD_FIELD_CAP)
            .ok_or(Error::FieldTooLarge {
                size: u128::from(prime.p).pow(degree as u32),
                limit: HARD_FIELD_CAP,
            })?;
        for v in 0..count {
            let mut coeffs = Vec::with_capacity(degree + 1);
            let mut rest = v;
            for _ in 0..degree {
                coeffs.push(Fe((rest % u64::from(prime.p)) as u32));
                rest /= u64::from(prime.p);
            }
            coeffs.push(Fe::ONE);
            let poly = Poly::from_coeffs(coeffs);
            if poly.is_irreducible(prime) {
                return Ok(poly);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p,
            n: self.degree,
            modulus: self.modulus.coeffs().iter().map(|c| c.raw()).collect(),
        }
    }

    pub fn contains(&self, x: Fe) -> bool {
        x.0 < self.size
    }

    pub fn elem(&self, v: u64) -> Result<Fe> {
        if v < u64::from(self.size) {
            Ok(Fe(v as u32))
        } else {
            Err(Error::ForeignElement(v.min(u64::from(u32::MAX)) as u32))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(i64::from(self.p)) as u32)
    }

    /// The class of `X` (the polynomial-basis generator).
    pub fn generator(&self) -> Fe {
        if self.degree == 1 {
            // X ≡ -m_0 when the modulus is X + m_0.
            self.neg(self.modulus.coeff(0))
        } else {
            Fe(self.p)
        }
    }

    /// A fixed primitive element (generator of the multiplicative group).
    pub fn primitive(&self) -> Fe {
        Fe(self.exp[1 % self.exp.len().max(1)])
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    pub fn digits(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.degree)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// Encodes a coefficient vector; missing high coefficients are zero.
    pub fn from_digits(&self, digits: &[u32]) -> Result<Fe> {
        if digits.len() > self.degree as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::ParseElement(format!("{digits:?}")));
        }
        Ok(Fe(digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d)))
    }

    pub fn to_poly(&self, x: Fe) -> Poly {
        Poly::from_coeffs(self.digits(x).into_iter().map(Fe).collect())
    }

    /// Encodes a polynomial of degree below the field degree.
    pub fn from_poly(&self, poly: &Poly) -> Fe {
        let raw: Vec<u32> = poly.coeffs().iter().map(|c| c.0).collect();
        self.from_digits(&raw).expect("reduced polynomial")
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.degree == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            let s = (x % self.p + y % self.p) % self.p;
            out += s * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if self.degree == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Fe(self.exp[i])
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size as usize - 1;
        let l = self.log[a.0 as usize] as usize;
        Ok(Fe(self.exp[(order - l) % order.max(1)]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents go through the inverse.
    pub fn pow(&self, a: Fe, e: i64) -> Result<Fe> {
        if e == 0 {
            return Ok(Fe::ONE);
        }
        if a.0 == 0 {
            return if e > 0 {
                Ok(Fe::ZERO)
            } else {
                Err(Error::DivisionByZero)
            };
        }
        let order = i128::from(self.size - 1);
        let l = i128::from(self.log[a.0 as usize]);
        let idx = (l * i128::from(e)).rem_euclid(order);
        Ok(Fe(self.exp[idx as usize]))
    }

    /// `a^e` for a nonnegative exponent of any size.
    pub fn pow_u(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let order = u128::from(self.size - 1);
        let l = u128::from(self.log[a.0 as usize]);
        Fe(self.exp[(l * u128::from(e) % order) as usize])
    }

    /// Discrete log to the base [`FieldCtx::primitive`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Quadratic-residue test via the parity of the discrete log.
    pub fn is_square(&self, a: Fe) -> bool {
        a.0 == 0 || self.p == 2 || self.log[a.0 as usize].is_multiple_of(2)
    }

    /// Quadratic-residue test by scanning every square.
    pub fn is_square_exhaustive(&self, a: Fe) -> bool {
        self.elements().any(|y| self.square(y) == a)
    }

    /// Euler's criterion `a^((size-1)/2) = 1`; odd characteristic only.
    pub fn euler_criterion(&self, a: Fe) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic("Euler's criterion"));
        }
        Ok(a.0 == 0 || self.pow_u(a, u64::from(self.size - 1) / 2) == Fe::ONE)
    }

    /// All nonsquares in canonical order.
    pub fn nonsquares(&self) -> Result<Vec<Fe>> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic("nonsquare search"));
        }
        Ok(self.elements().filter(|&x| !self.is_square(x)).collect())
    }

    /// Canonical text form `"c0,c1,…"` (little-endian in the generator).
    pub fn format(&self, x: Fe) -> String {
        self.digits(x)
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the canonical text form; a bare (possibly negative) integer is
    /// read as a prime-field constant.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        let err = || Error::ParseElement(s.to_string());
        if !s.contains(',') {
            let v: i64 = s.parse().map_err(|_| err())?;
            if v >= 0 && v >= i64::from(self.p) {
                return Err(err());
            }
            return Ok(self.from_int(v));
        }
        let digits: Vec<u32> = s
            .split(',')
            .map(|d| d.trim().parse::<u32>().map_err(|_| err()))
            .collect::<Result<_>>()?;
        self.from_digits(&digits).map_err(|_| err())
    }
}

/// The chain `F_q, F_{q^2}, …, F_{q^{k_max}}` with compatible embeddings.
///
/// Level `k` is `F_{q^k}`. Embeddings exist for every pair `j | k` and
/// commute with each other; each sends the subfield's polynomial generator
/// to the first root (canonical order) of the subfield's modulus that is
/// compatible with the embeddings of all smaller subfields.
pub struct FieldTower {
    p: u32,
    n: u32,
    prime: FieldCtx,
    levels: Vec<FieldCtx>,
    embed: HashMap<(usize, usize), Vec<u32>>,
    restrict: HashMap<(usize, usize), Vec<u32>>,
    budget: Budget,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("levels", &self.levels)
            .finish()
    }
}

const NONE: u32 = u32::MAX;

impl FieldTower {
    /// Deterministic tower with lexicographically smallest moduli.
    pub fn new(p: u32, n: u32, k_max: usize) -> Result<Self> {
        FieldTower::build(p, n, k_max, Budget::default(), &[])
    }

    /// Builds the tower, replacing the modulus of selected levels by the
    /// given polynomials over `F_p` (e.g. a prescribed minimal polynomial).
    pub fn build(
        p: u32,
        n: u32,
        k_max: usize,
        budget: Budget,
        overrides: &[(usize, Poly)],
    ) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if n == 0 || k_max == 0 {
            return Err(Error::Precondition(
                "extension degrees must be positive".into(),
            ));
        }
        for k in 1..=k_max {
            let exp = u32::try_from(u64::from(n) * k as u64).unwrap_or(u32::MAX);
            let size = u128::from(p).checked_pow(exp).unwrap_or(u128::MAX);
            budget.check_size(size)?;
        }
        let prime = FieldCtx::prime(p)?;
        let mut levels = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let degree = n as usize * k;
            let modulus = match overrides.iter().find(|(lvl, _)| *lvl == k) {
                Some((_, m)) => {
                    if m.degree() != Some(degree) {
                        return Err(Error::InvalidModulus(format!(
                            "level {k} needs degree {degree}"
                        )));
                    }
                    m.clone()
                }
                None => FieldCtx::smallest_irreducible(&prime, degree)?,
            };
            levels.push(FieldCtx::extension(&prime, &modulus)?);
        }
        let mut tower = FieldTower {
            p,
            n,
            prime,
            levels,
            embed: HashMap::new(),
            restrict: HashMap::new(),
            budget,
        };
        for k in 2..=k_max {
            for j in (1..k).filter(|j| k % j == 0) {
                let table = tower.find_embedding(j, k)?;
                let mut inverse = vec![NONE; tower.levels[k - 1].size as usize];
                for (src, &dst) in table.iter().enumerate() {
                    inverse[dst as usize] = src as u32;
                }
                tower.embed.insert((j, k), table);
                tower.restrict.insert((k, j), inverse);
            }
        }
        Ok(tower)
    }

    fn find_embedding(&self, j: usize, k: usize) -> Result<Vec<u32>> {
        let small = &self.levels[j - 1];
        let big = &self.levels[k - 1];
        // Compatibility constraints from every proper subfield i | j.
        let checks: Vec<(Fe, Fe)> = (1..j)
            .filter(|i| j.is_multiple_of(*i))
            .filter(|&i| self.levels[i - 1].degree > 1)
            .map(|i| {
                let g = self.levels[i - 1].generator();
                let via_small = Fe(self.embed[&(i, j)][g.0 as usize]);
                let direct = Fe(self.embed[&(i, k)][g.0 as usize]);
                (via_small, direct)
            })
            .collect();
        let image = |r: Fe, x: Fe| small.to_poly(x).eval(r, big);
        let root = big
            .elements()
            .filter(|&r| small.modulus.eval(r, big).is_zero())
            .find(|&r| checks.iter().all(|&(src, dst)| image(r, src) == dst))
            .ok_or(Error::NoEmbedding { from: j, to: k })?;
        Ok(small.elements().map(|x| image(root, x).0).collect())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree of `F_q` over `F_p`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        u64::from(self.levels[0].size)
    }

    pub fn k_max(&self) -> usize {
        self.levels.len()
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn prime_field(&self) -> &FieldCtx {
        &self.prime
    }

    /// `F_{q^k}`.
    pub fn level(&self, k: usize) -> Result<&FieldCtx> {
        k.checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .ok_or(Error::MissingLevel(k))
    }

    /// `F_q`.
    pub fn base(&self) -> &FieldCtx {
        &self.levels[0]
    }

    /// `F_{q^2}`; panics if the tower was built with `k_max < 2`.
    pub fn quad(&self) -> &FieldCtx {
        &self.levels[1]
    }

    pub fn embed(&self, from: usize, to: usize, x: Fe) -> Result<Fe> {
        if from == to {
            self.level(from)?;
            return Ok(x);
        }
        let table = self
            .embed
            .get(&(from, to))
            .ok_or(Error::NoEmbedding { from, to })?;
        table
            .get(x.0 as usize)
            .map(|&v| Fe(v))
            .ok_or(Error::ForeignElement(x.0))
    }

    /// Inverse of [`FieldTower::embed`]; errors when `x` is outside the subfield.
    pub fn restrict(&self, from: usize, to: usize, x: Fe) -> Result<Fe> {
        if from == to {
            self.level(from)?;
            return Ok(x);
        }
        let table = self
            .restrict
            .get(&(from, to))
            .ok_or(Error::NoEmbedding { from: to, to: from })?;
        match table.get(x.0 as usize) {
            Some(&v) if v != NONE => Ok(Fe(v)),
            Some(_) => Err(Error::NotInSubfield(to)),
            None => Err(Error::ForeignElement(x.0)),
        }
    }

    pub fn in_subfield(&self, level: usize, sub: usize, x: Fe) -> bool {
        self.restrict(level, sub, x).is_ok()
    }

    pub fn lift_poly(&self, poly: &Poly, from: usize, to: usize) -> Result<Poly> {
        let coeffs = poly
            .coeffs()
            .iter()
            .map(|&c| self.embed(from, to, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }

    /// `x ↦ x^q` on `F_{q^k}`.
    pub fn frobenius_q(&self, k: usize, x: Fe) -> Result<Fe> {
        Ok(self.level(k)?.pow_u(x, self.q()))
    }

    /// Trace and norm of `x ∈ F_{q^2}` down to `F_q`.
    pub fn trace_norm(&self, x: Fe) -> Result<(Fe, Fe)> {
        let quad = self.level(2)?;
        if !quad.contains(x) {
            return Err(Error::ForeignElement(x.0));
        }
        let conj = self.frobenius_q(2, x)?;
        let trace = quad.add(x, conj);
        let norm = quad.mul(x, conj);
        Ok((self.restrict(2, 1, trace)?, self.restrict(2, 1, norm)?))
    }

    /// Galois conjugate over `F_q` of an element of `F_{q^2}`.
    pub fn conj(&self, x: Fe) -> Fe {
        self.quad().pow_u(x, self.q())
    }

    /// Moduli of `F_q` and `F_{q^2}`, enough to rebuild the first two levels.
    pub fn info(&self, k: usize) -> Result<FieldInfo> {
        Ok(self.level(k)?.info())
    }
}
