//! The Singer-subgroup cover `f: P¹ → P¹` of degree `q + 1` and the checks
//! that it is the quotient by the isotropy group of `Q = (θ : 1)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Fe, FieldCtx, FieldTower};
use crate::projline::{all_points, mobius_search, Mobius, P1Point, RatMap};
use crate::report::Report;
use crate::unipoly::{is_irreducible_quadratic, monic_quadratic, Poly};

/// A point `θ ∈ F_{q²} \ F_q`, its minimal polynomial `X² - aX + b`, the
/// cover `f` and a generator of the isotropy group of `Q = (θ : 1)`.
#[derive(Debug, Clone)]
pub struct SingerData {
    pub tower: Arc<FieldTower>,
    pub a: Fe,
    pub b: Fe,
    pub theta: Fe,
    pub theta_bar: Fe,
    pub generator: Mobius,
    pub f: RatMap,
    f_quad: RatMap,
}

/// `(x^{q+1} - a·x + b)/(x^q - x)` over `F_q`.
pub fn singer_map(a: Fe, b: Fe, ctx: &FieldCtx) -> RatMap {
    let q = ctx.size() as usize;
    let num = Poly::monomial(Fe::ONE, q + 1)
        .sub(&Poly::monomial(a, 1), ctx)
        .add(&Poly::constant(b), ctx);
    let den = Poly::monomial(Fe::ONE, q).sub(&Poly::monomial(Fe::ONE, 1), ctx);
    RatMap::new(num, den, ctx).expect("nonzero denominator")
}

/// First `(a, b)` in canonical order with `X² - aX + b` irreducible over `F_q`.
pub fn first_irreducible(ctx: &FieldCtx) -> (Fe, Fe) {
    ctx.elements()
        .flat_map(|a| ctx.elements().map(move |b| (a, b)))
        .find(|&(a, b)| is_irreducible_quadratic(a, b, ctx))
        .expect("an irreducible quadratic exists over every finite field")
}

/// Writes `x ∈ F_{q²}` as `u + v·θ` with `u, v ∈ F_q`.
fn coordinates(tower: &FieldTower, theta: Fe, x: Fe) -> Result<(Fe, Fe)> {
    let quad = tower.quad();
    let theta_bar = tower.conj(theta);
    let v = quad.div(quad.sub(x, tower.conj(x)), quad.sub(theta, theta_bar))?;
    let u = quad.sub(x, quad.mul(v, theta));
    Ok((tower.restrict(2, 1, u)?, tower.restrict(2, 1, v)?))
}

/// Builds the Singer data for `X² - aX + b` and runs [`verify_cover`].
pub fn build_singer(tower: Arc<FieldTower>, a: Fe, b: Fe) -> Result<SingerData> {
    let sd = build_singer_unchecked(tower, a, b)?;
    let report = verify_cover(&sd);
    if !report.passed() {
        return Err(Error::Verification(report.failures().join(", ")));
    }
    Ok(sd)
}

/// [`build_singer`] without the final verification sweep.
pub fn build_singer_unchecked(tower: Arc<FieldTower>, a: Fe, b: Fe) -> Result<SingerData> {
    let base = tower.base();
    if !base.contains(a) || !base.contains(b) {
        return Err(Error::ForeignElement(a.raw().max(b.raw())));
    }
    if !is_irreducible_quadratic(a, b, base) {
        return Err(Error::Reducible(format!(
            "X^2 - ({})X + ({})",
            base.format(a),
            base.format(b)
        )));
    }
    let quad = tower.level(2)?;
    let chi = tower.lift_poly(&monic_quadratic(a, b, base), 1, 2)?;
    let theta = chi
        .roots_with_multiplicity(quad)
        .first()
        .map(|&(r, _)| r)
        .ok_or_else(|| {
            Error::Inconsistent("irreducible quadratic without roots in F_{q^2}".into())
        })?;
    let theta_bar = tower.conj(theta);

    // Multiplication by a primitive λ = u + vθ on the basis {1, θ}, written
    // so that (θ, 1) is an eigenvector.
    let (u, v) = coordinates(&tower, theta, quad.primitive())?;
    let generator = Mobius::new(
        [base.add(u, base.mul(v, a)), base.neg(base.mul(v, b)), v, u],
        base,
    )?;
    let lifted = generator.embed(&tower, 1, 2)?;
    if lifted.apply(P1Point::Finite(theta), quad) != P1Point::Finite(theta) {
        return Err(Error::Inconsistent(
            "Singer generator does not fix Q".into(),
        ));
    }

    let f = singer_map(a, b, base);
    let f_quad = f.embed(&tower, 1, 2)?;
    Ok(SingerData {
        tower,
        a,
        b,
        theta,
        theta_bar,
        generator,
        f,
        f_quad,
    })
}

/// Singer data for the first irreducible `X² - aX + b` over `F_q`.
pub fn default_singer(tower: Arc<FieldTower>) -> Result<SingerData> {
    let (a, b) = first_irreducible(tower.base());
    build_singer(tower, a, b)
}

impl SingerData {
    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn base(&self) -> &FieldCtx {
        self.tower.base()
    }

    pub fn quad(&self) -> &FieldCtx {
        self.tower.quad()
    }

    /// `f` with coefficients embedded in `F_{q²}`.
    pub fn f_quad(&self) -> &RatMap {
        &self.f_quad
    }

    /// Replaces `f`, e.g. to exercise the checks on a deliberately wrong map.
    pub fn with_f(mut self, f: RatMap) -> Result<SingerData> {
        self.f_quad = f.embed(&self.tower, 1, 2)?;
        self.f = f;
        Ok(self)
    }

    pub fn q_point(&self) -> P1Point {
        P1Point::Finite(self.theta)
    }

    pub fn q_bar_point(&self) -> P1Point {
        P1Point::Finite(self.theta_bar)
    }

    /// Whether a point of `P¹(F_{q²})` lies in `R = P¹(F_{q²}) \ P¹(F_q)`.
    pub fn in_r(&self, p: P1Point) -> bool {
        match p {
            P1Point::Finite(x) => !self.tower.in_subfield(2, 1, x),
            P1Point::Infinity => false,
        }
    }

    /// `R`, in canonical order.
    pub fn r_points(&self) -> Vec<P1Point> {
        all_points(self.quad()).filter(|&p| self.in_r(p)).collect()
    }

    /// `S = P¹(F_q)` as points of `P¹(F_{q²})`, in canonical order.
    pub fn s_points(&self) -> Vec<P1Point> {
        all_points(self.quad()).filter(|&p| !self.in_r(p)).collect()
    }

    /// `f` evaluated at a point of `P¹(F_{q²})`.
    pub fn f_at(&self, p: P1Point) -> P1Point {
        self.f_quad.eval(p, self.quad())
    }

    /// Ramification index of `f` at a point of `P¹(F_{q²})`.
    pub fn e_f(&self, p: P1Point) -> u32 {
        self.f_quad.ramification_index(p, self.quad())
    }

    /// The isotropy group of `Q` as the powers of the generator, sorted.
    pub fn singer_group(&self) -> Vec<Mobius> {
        let base = self.base();
        let mut out = vec![Mobius::identity()];
        let mut cur = self.generator;
        while cur != Mobius::identity() {
            out.push(cur);
            cur = cur.compose(&self.generator, base);
        }
        out.sort();
        out
    }

    /// The same group by exhaustive search over `PGL₂(F_q)`.
    pub fn singer_group_brute(&self) -> Result<Vec<Mobius>> {
        mobius_search(&self.tower, 2, &[(self.q_point(), self.q_point())])
    }
}

/// Named checks that `f` is the Singer quotient map.
pub fn verify_cover(sd: &SingerData) -> Report {
    let base = sd.base();
    let quad = sd.quad();
    let q = sd.q() as u32;
    let (qp, qb) = (sd.q_point(), sd.q_bar_point());
    let mut report = Report::new();

    let g2 = sd
        .generator
        .embed(&sd.tower, 1, 2)
        .expect("generator lives over F_q");
    report.push(
        "generator_order_q_plus_1",
        sd.generator.order(base) == u64::from(q) + 1,
    );
    report.push(
        "generator_fixes_q_and_q_bar",
        g2.apply(qp, quad) == qp && g2.apply(qb, quad) == qb,
    );

    report.push(
        "fixes_q_q_bar_infinity",
        sd.f_at(qp) == qp
            && sd.f_at(qb) == qb
            && sd.f.eval(P1Point::Infinity, base) == P1Point::Infinity,
    );
    report.push(
        "q_q_bar_totally_ramified",
        sd.e_f(qp) == q + 1 && sd.e_f(qb) == q + 1,
    );

    let over_inf = sd.f.fiber(P1Point::Infinity, base);
    let expected: Vec<(P1Point, u32)> = all_points(base).map(|p| (p, 1)).collect();
    report.push("infinity_totally_split", over_inf == expected);

    let ramified = sd.f_quad.ramified_points(quad);
    let others_unramified = ramified.iter().all(|&(p, _)| p == qp || p == qb);
    let rh_total: u32 = ramified.iter().map(|&(_, e)| e - 1).sum();
    report.push(
        "no_other_ramification",
        others_unramified && rh_total == 2 * q,
    );

    report.push(
        "galois_invariant_under_generator",
        sd.f.is_galois_invariant(&sd.generator, base),
    );

    let mut orbit = BTreeSet::new();
    let mut pt = P1Point::Infinity;
    for _ in 0..=q {
        orbit.insert(pt);
        pt = sd.generator.apply(pt, base);
    }
    report.push(
        "transitive_on_rational_points",
        orbit.len() == q as usize + 1,
    );
    report
}

/// `{f(P) : P ∈ R}`.
pub fn image_of_r(sd: &SingerData) -> BTreeSet<P1Point> {
    sd.r_points().into_iter().map(|p| sd.f_at(p)).collect()
}

/// `{(γ : 1) : Tr(γ) = Tr(θ)}`.
pub fn trace_fiber(sd: &SingerData) -> BTreeSet<P1Point> {
    sd.quad()
        .elements()
        .filter(|&x| {
            sd.tower
                .trace_norm(x)
                .map(|(tr, _)| tr == sd.a)
                .unwrap_or(false)
        })
        .map(P1Point::Finite)
        .collect()
}

/// `f(R)` equals the trace fiber through `θ`, and both have `q` elements.
pub fn image_of_r_check(sd: &SingerData) -> bool {
    let image = image_of_r(sd);
    image.len() == sd.q() as usize && image == trace_fiber(sd)
}

/// Outcome of conjugating `f` by `μ: x ↦ (x - θ)/(x - θ̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuCheck {
    pub conjugate_is_norm: bool,
    pub rational_points_to_one: bool,
    pub swapped_is_norm: bool,
}

impl MuCheck {
    pub fn passed(&self) -> bool {
        self.conjugate_is_norm && self.rational_points_to_one && self.swapped_is_norm
    }
}

pub fn mu_conjugation_check(sd: &SingerData) -> MuCheck {
    let quad = sd.quad();
    let q = sd.q() as usize;
    let norm_map = RatMap::new(Poly::monomial(Fe::ONE, q + 1), Poly::one(), quad).expect("monic");
    let conjugate = |t1: Fe, t2: Fe| {
        let mu = Mobius::new([Fe::ONE, quad.neg(t1), Fe::ONE, quad.neg(t2)], quad).expect("θ ≠ θ̄");
        (
            mu,
            sd.f_quad
                .compose_mobius(Some(&mu.inverse(quad)), Some(&mu), quad),
        )
    };
    let (mu, conj) = conjugate(sd.theta, sd.theta_bar);
    let (_, swapped) = conjugate(sd.theta_bar, sd.theta);
    let one = P1Point::Finite(Fe::ONE);
    let rational_points_to_one = sd
        .s_points()
        .into_iter()
        .all(|p| norm_map.eval(mu.apply(p, quad), quad) == one);
    MuCheck {
        conjugate_is_norm: conj == norm_map,
        rational_points_to_one,
        swapped_is_norm: swapped == norm_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Budget;

    fn q5() -> SingerData {
        let chi = Poly::from_coeffs(vec![Fe::from_raw(2), Fe::ONE, Fe::ONE]);
        let tower = FieldTower::build(5, 1, 2, Budget::default(), &[(2, chi)]).unwrap();
        build_singer(Arc::new(tower), Fe::from_raw(4), Fe::from_raw(2)).unwrap()
    }

    fn plain(p: u32, n: u32, a: i64, b: i64) -> Result<SingerData> {
        let tower = Arc::new(FieldTower::new(p, n, 2).unwrap());
        let (a, b) = (tower.base().from_int(a), tower.base().from_int(b));
        build_singer(tower, a, b)
    }

    #[test]
    fn q5_map_and_theta() {
        let sd = q5();
        assert_eq!(sd.f.pretty(sd.base()), "(x^6 + x + 2)/(x^5 - x)");
        assert_eq!(sd.theta, sd.quad().generator());
        assert!(verify_cover(&sd).passed());
    }

    #[test]
    fn q7_family_map() {
        let sd = plain(7, 1, 0, 1).unwrap();
        assert_eq!(sd.f.pretty(sd.base()), "(x^8 + 1)/(x^7 - x)");
        assert!(image_of_r_check(&sd));
        assert!(image_of_r(&sd).contains(&P1Point::Finite(Fe::ZERO)));
        assert!(mu_conjugation_check(&sd).passed());
    }

    #[test]
    fn reducible_input_rejected() {
        assert!(matches!(plain(5, 1, 0, 4), Err(Error::Reducible(_))));
    }

    #[test]
    fn tampered_map_fails_fixed_points() {
        let sd = q5();
        let base = sd.base();
        let num = Poly::from_coeffs(
            [3, 1, 0, 0, 0, 0, 1]
                .iter()
                .map(|&c| Fe::from_raw(c))
                .collect(),
        );
        let bad = RatMap::new(num, sd.f.den().clone(), base).unwrap();
        let report = verify_cover(&sd.with_f(bad).unwrap());
        assert_eq!(report.get("fixes_q_q_bar_infinity"), Some(false));
    }

    #[test]
    fn characteristic_two() {
        let tower = Arc::new(FieldTower::new(2, 2, 2).unwrap());
        let (a, b) = first_irreducible(tower.base());
        assert!(!a.is_zero());
        let sd = build_singer(tower, a, b).unwrap();
        assert!(verify_cover(&sd).passed());
        assert!(image_of_r_check(&sd));
        assert!(mu_conjugation_check(&sd).passed());
    }

    #[test]
    fn image_of_r_q5_details() {
        let sd = q5();
        let image = image_of_r(&sd);
        assert_eq!(image.len(), 5);
        assert!(image.contains(&sd.q_point()));
        assert!(image.contains(&P1Point::Finite(Fe::from_raw(2))));
        assert!(image_of_r_check(&sd));
        // 2 points of R over Q and Q̄, q + 1 over each of the other q - 2.
        let r = sd.r_points();
        assert_eq!(r.len(), 20);
        for t in &image {
            let over: Vec<_> = r.iter().filter(|&&p| sd.f_at(p) == *t).collect();
            let expected = if *t == sd.q_point() || *t == sd.q_bar_point() {
                1
            } else {
                6
            };
            assert_eq!(over.len(), expected);
        }
    }

    #[test]
    fn preimage_of_image_is_r() {
        for (p, n) in [(5, 1), (7, 1), (3, 2)] {
            let sd = default_singer(Arc::new(FieldTower::new(p, n, 2).unwrap())).unwrap();
            let image = image_of_r(&sd);
            for pt in all_points(sd.quad()) {
                assert_eq!(image.contains(&sd.f_at(pt)), sd.in_r(pt));
            }
        }
    }

    #[test]
    fn generator_matches_brute_force() {
        for (p, n) in [(2, 2), (3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let sd = default_singer(Arc::new(FieldTower::new(p, n, 2).unwrap())).unwrap();
            let group = sd.singer_group();
            assert_eq!(group.len() as u64, sd.q() + 1);
            assert_eq!(group, sd.singer_group_brute().unwrap());
            for sigma in &group {
                assert!(sd.f.is_galois_invariant(sigma, sd.base()));
            }
        }
    }

    #[test]
    fn mu_conjugation_q5() {
        let m = mu_conjugation_check(&q5());
        assert!(m.conjugate_is_norm && m.rational_points_to_one && m.swapped_is_norm);
    }
}
