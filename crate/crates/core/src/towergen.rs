//! Choice of the automorphisms `φ`, `ψ`, construction of `g = φ ∘ f ∘ ψ`
//! (by composition and by closed-form coefficients) and validation of every
//! premise of the tower argument.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{Budget, Fe, FieldCtx, FieldTower};
use crate::projline::{all_points, assert_tame, mobius_search, Mobius, P1Point, RatMap};
use crate::report::Report;
use crate::singer::{build_singer, image_of_r, SingerData};
use crate::unipoly::{is_irreducible_quadratic, monic_quadratic, Poly};

/// An affine map `φ(x) = c·x + d` over `F_q`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PhiParams {
    pub c: Fe,
    pub d: Fe,
}

impl PhiParams {
    pub fn mobius(&self, ctx: &FieldCtx) -> Result<Mobius> {
        Mobius::affine(self.c, self.d, ctx)
    }
}

/// `(1 - c)·a = 2·d` with `c ≠ 0`.
pub fn trace_condition(sd: &SingerData, c: Fe, d: Fe) -> bool {
    let base = sd.base();
    let lhs = base.mul(base.sub(Fe::ONE, c), sd.a);
    !c.is_zero() && lhs == base.add(d, d)
}

/// The two affine maps sending `Q` to `Q` and to `Q̄`.
pub fn excluded_phis(sd: &SingerData) -> [PhiParams; 2] {
    let base = sd.base();
    [
        PhiParams {
            c: Fe::ONE,
            d: Fe::ZERO,
        },
        PhiParams {
            c: base.neg(Fe::ONE),
            d: sd.a,
        },
    ]
}

/// All `(c, d)` satisfying the trace condition, minus the two pairs that
/// map `Q` into `{Q, Q̄}`, in canonical order.
pub fn phi_candidates(sd: &SingerData) -> Vec<PhiParams> {
    let base = sd.base();
    let excluded = excluded_phis(sd);
    base.elements()
        .skip(1)
        .flat_map(|c| base.elements().map(move |d| PhiParams { c, d }))
        .filter(|phi| trace_condition(sd, phi.c, phi.d) && !excluded.contains(phi))
        .collect()
}

/// All invertible affine `(c, d)` that map `f(R)` onto itself, found by
/// direct evaluation.
pub fn brute_force_phi_oracle(sd: &SingerData) -> Vec<PhiParams> {
    let base = sd.base();
    let quad = sd.quad();
    let image = image_of_r(sd);
    let mut out = Vec::new();
    for c in base.elements().skip(1) {
        for d in base.elements() {
            let phi = PhiParams { c, d };
            let m = phi
                .mobius(base)
                .and_then(|m| m.embed(&sd.tower, 1, 2))
                .expect("c ≠ 0");
            let moved: BTreeSet<P1Point> = image.iter().map(|&p| m.apply(p, quad)).collect();
            if moved == image {
                out.push(phi);
            }
        }
    }
    out
}

/// For a valid `φ`: the points `T` of `f⁻¹(φ⁻¹(Q))` and, for each, every
/// `ψ ∈ PGL₂(F_q)` with `ψ(Q) = T`.
pub fn psi_candidates(sd: &SingerData, phi: &PhiParams) -> Result<Vec<(P1Point, Mobius)>> {
    if !trace_condition(sd, phi.c, phi.d) || excluded_phis(sd).contains(phi) {
        return Err(Error::Precondition("φ is not a valid candidate".into()));
    }
    let quad = sd.quad();
    let phi2 = phi.mobius(sd.base())?.embed(&sd.tower, 1, 2)?;
    let target = phi2.inverse(quad).apply(sd.q_point(), quad);
    let fiber = sd.f_quad().fiber(target, quad);
    let q = sd.q() as usize;
    if fiber.len() != q + 1 || fiber.iter().any(|&(t, m)| m != 1 || !sd.in_r(t)) {
        return Err(Error::ClosureViolation(format!(
            "f⁻¹(φ⁻¹(Q)) is not {} simple points of R",
            q + 1
        )));
    }
    let mut out = Vec::with_capacity((q + 1) * (q + 1));
    for (t, _) in fiber {
        for psi in mobius_search(&sd.tower, 2, &[(sd.q_point(), t)])? {
            out.push((t, psi));
        }
    }
    Ok(out)
}

/// `φ ∘ f ∘ ψ`, reduced.
pub fn build_g_composed(sd: &SingerData, phi: &PhiParams, psi: &Mobius) -> Result<RatMap> {
    let base = sd.base();
    Ok(sd
        .f
        .compose_mobius(Some(psi), Some(&phi.mobius(base)?), base))
}

/// Sign of the `t·a` term in the closed-form constant.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TaSign {
    Minus,
    Plus,
}

/// `c = (2b + 2n ∓ t·a)/(4b - a²)`.
pub fn closed_form_c(a: Fe, b: Fe, t: Fe, n: Fe, sign: TaSign, ctx: &FieldCtx) -> Result<Fe> {
    let two = ctx.from_int(2);
    let ta = ctx.mul(t, a);
    let base = ctx.add(ctx.mul(two, b), ctx.mul(two, n));
    let num = match sign {
        TaSign::Minus => ctx.sub(base, ta),
        TaSign::Plus => ctx.add(base, ta),
    };
    let den = ctx.sub(ctx.mul(ctx.from_int(4), b), ctx.square(a));
    ctx.div(num, den)
}

/// Coefficient matching of `g(Q) = Q` for the closed-form shape:
/// `b + n + c_q·a = 2cb`, `c_1 - c_q = -ca` and `c_q + c_1 = -t`.
#[allow(clippy::too_many_arguments)]
pub fn coefficient_oracle(
    a: Fe,
    b: Fe,
    t: Fe,
    n: Fe,
    c: Fe,
    c_q: Fe,
    c_1: Fe,
    ctx: &FieldCtx,
) -> bool {
    let lhs = ctx.add(ctx.add(b, n), ctx.mul(c_q, a));
    let rhs = ctx.mul(ctx.from_int(2), ctx.mul(c, b));
    lhs == rhs && ctx.sub(c_1, c_q) == ctx.neg(ctx.mul(c, a)) && ctx.add(c_q, c_1) == ctx.neg(t)
}

/// The closed-form `g` together with its constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub g: RatMap,
    pub c: Fe,
    pub c_q: Fe,
    pub c_1: Fe,
    /// First root of `X² - tX + n` in `F_{q²}`.
    pub rho: Fe,
    /// `g(ρ)`, the image of `Q` under the matching `φ`.
    pub nu: Fe,
}

/// `g(x) = (x^{q+1} + c_q x^q + c_1 x + n)/(c(x^q - x))` in odd characteristic.
pub fn build_g_closed_form(sd: &SingerData, t: Fe, n: Fe, sign: TaSign) -> Result<ClosedForm> {
    let base = sd.base();
    let quad = sd.quad();
    if base.p() == 2 {
        return Err(Error::EvenCharacteristic("the closed-form equations"));
    }
    if !is_irreducible_quadratic(t, n, base) {
        return Err(Error::Reducible(format!(
            "X^2 - ({})X + ({})",
            base.format(t),
            base.format(n)
        )));
    }
    let rho_poly = sd.tower.lift_poly(&monic_quadratic(t, n, base), 1, 2)?;
    let rho = rho_poly.roots_with_multiplicity(quad)[0].0;
    if rho == sd.theta || rho == sd.theta_bar {
        return Err(Error::Precondition("ρ ∈ {θ, θ̄}".into()));
    }
    let c = closed_form_c(sd.a, sd.b, t, n, sign, base)?;
    if c.is_zero() {
        return Err(Error::Precondition("c = 0".into()));
    }
    let half = base.inv(base.from_int(2))?;
    let c_q = base.mul(base.sub(base.mul(c, sd.a), t), half);
    let c_1 = base.sub(base.neg(t), c_q);
    let q = sd.q() as usize;
    let num = Poly::monomial(Fe::ONE, q + 1)
        .add(&Poly::monomial(c_q, q), base)
        .add(&Poly::monomial(c_1, 1), base)
        .add(&Poly::constant(n), base);
    let den = Poly::monomial(c, q).sub(&Poly::monomial(c, 1), base);
    let g = RatMap::new(num, den, base)?;

    let c2 = sd.tower.embed(1, 2, c)?;
    let nu = quad.div(quad.add(sd.tower.embed(1, 2, c_q)?, rho), c2)?;
    if nu == sd.theta || nu == sd.theta_bar {
        return Err(Error::Precondition("φ(Q) ∈ {Q, Q̄}".into()));
    }
    let g_quad = g.embed(&sd.tower, 1, 2)?;
    if g_quad.eval(sd.q_point(), quad) != sd.q_point() {
        return Err(Error::Verification("closed-form g does not fix Q".into()));
    }
    Ok(ClosedForm {
        g,
        c,
        c_q,
        c_1,
        rho,
        nu,
    })
}

/// The affine `φ` over `F_q` with `φ(θ) = ν`.
pub fn phi_from_nu(sd: &SingerData, nu: Fe) -> Result<PhiParams> {
    let quad = sd.quad();
    let c = quad.div(
        quad.sub(nu, sd.tower.conj(nu)),
        quad.sub(sd.theta, sd.theta_bar),
    )?;
    let d = quad.sub(nu, quad.mul(c, sd.theta));
    Ok(PhiParams {
        c: sd.tower.restrict(2, 1, c)?,
        d: sd.tower.restrict(2, 1, d)?,
    })
}

/// Where a [`TowerSpec`] came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    GenericSearch,
    ClosedForm,
    Q5Instance,
}

/// The full parameter record of one tower.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub singer: SingerData,
    pub t: Fe,
    pub n_param: Fe,
    pub phi: PhiParams,
    pub psi: Mobius,
    pub g: RatMap,
    /// `ψ⁻¹(θ)`.
    pub rho: Fe,
    /// `φ(θ)`.
    pub nu: Fe,
    pub closed_form: Option<ClosedForm>,
    pub provenance: Provenance,
    g_quad: RatMap,
}

impl TowerSpec {
    /// Derives the distinguished points and the closed-form cross-check.
    pub fn assemble(
        singer: SingerData,
        phi: PhiParams,
        psi: Mobius,
        g: RatMap,
        provenance: Provenance,
    ) -> Result<TowerSpec> {
        let base = singer.base();
        let quad = singer.quad();
        let tower = &singer.tower;
        let psi2 = psi.embed(tower, 1, 2)?;
        let phi2 = phi.mobius(base)?.embed(tower, 1, 2)?;
        let finite = |p: P1Point, what: &str| {
            p.finite()
                .ok_or_else(|| Error::Precondition(format!("{what} is the point at infinity")))
        };
        let rho = finite(psi2.inverse(quad).apply(singer.q_point(), quad), "ψ⁻¹(Q)")?;
        let nu = finite(phi2.apply(singer.q_point(), quad), "φ(Q)")?;
        let (t, n_param) = tower.trace_norm(rho)?;
        let closed_form = if base.p() != 2 {
            build_g_closed_form(&singer, t, n_param, TaSign::Minus).ok()
        } else {
            None
        };
        let g_quad = g.embed(tower, 1, 2)?;
        Ok(TowerSpec {
            singer,
            t,
            n_param,
            phi,
            psi,
            g,
            rho,
            nu,
            closed_form,
            provenance,
            g_quad,
        })
    }

    pub fn q(&self) -> u64 {
        self.singer.q()
    }

    pub fn base(&self) -> &FieldCtx {
        self.singer.base()
    }

    pub fn quad(&self) -> &FieldCtx {
        self.singer.quad()
    }

    pub fn tower(&self) -> &FieldTower {
        &self.singer.tower
    }

    /// `g` with coefficients embedded in `F_{q²}`.
    pub fn g_quad(&self) -> &RatMap {
        &self.g_quad
    }

    pub fn rho_bar(&self) -> Fe {
        self.tower().conj(self.rho)
    }

    pub fn nu_bar(&self) -> Fe {
        self.tower().conj(self.nu)
    }

    /// A tower with the same first two levels and at least `k` levels.
    pub fn tower_with_levels(&self, k: usize) -> Result<FieldTower> {
        let t = self.tower();
        if k <= t.k_max() {
            return FieldTower::build(t.p(), t.n(), t.k_max(), t.budget(), &self.overrides());
        }
        FieldTower::build(t.p(), t.n(), k, t.budget(), &self.overrides())
    }

    fn overrides(&self) -> Vec<(usize, Poly)> {
        vec![(2, self.quad().modulus().clone())]
    }

    pub fn to_doc(&self) -> SpecDoc {
        let base = self.base();
        let quad = self.quad();
        SpecDoc {
            p: base.p(),
            n: base.degree(),
            q: self.q(),
            modulus: quad.modulus().coeffs().iter().map(|c| c.raw()).collect(),
            a: base.format(self.singer.a),
            b: base.format(self.singer.b),
            t: base.format(self.t),
            n_param: base.format(self.n_param),
            c: base.format(self.phi.c),
            d: base.format(self.phi.d),
            psi: self.psi.format(base).to_vec(),
            f: MapDoc::from_map(&self.singer.f, base),
            g: MapDoc::from_map(&self.g, base),
            theta: quad.format(self.singer.theta),
            rho: quad.format(self.rho),
            nu: quad.format(self.nu),
            provenance: self.provenance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("plain data serializes")
    }

    pub fn from_json(s: &str, budget: Budget) -> Result<TowerSpec> {
        let doc: SpecDoc = serde_json::from_str(s)?;
        TowerSpec::from_doc(&doc, budget)
    }

    pub fn from_doc(doc: &SpecDoc, budget: Budget) -> Result<TowerSpec> {
        let modulus = Poly::from_coeffs(doc.modulus.iter().map(|&c| Fe::from_raw(c)).collect());
        let tower = Arc::new(FieldTower::build(doc.p, doc.n, 2, budget, &[(2, modulus)])?);
        let base = tower.base();
        if tower.q() != doc.q {
            return Err(Error::SpecFormat(format!(
                "q = {} does not match p^n",
                doc.q
            )));
        }
        let a = base.parse(&doc.a)?;
        let b = base.parse(&doc.b)?;
        let phi = PhiParams {
            c: base.parse(&doc.c)?,
            d: base.parse(&doc.d)?,
        };
        let psi = Mobius::parse(&doc.psi, base)?;
        let g = doc.g.to_map(base)?;
        let singer = build_singer(tower.clone(), a, b)?;
        if doc.f.to_map(base)? != singer.f {
            return Err(Error::SpecFormat("f does not match (a, b)".into()));
        }
        TowerSpec::assemble(singer, phi, psi, g, doc.provenance)
    }
}

/// JSON form of a rational map: coefficient arrays, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub num: Vec<String>,
    pub den: Vec<String>,
    /// Displayed form, e.g. `(x^6 + x + 2)/(x^5 - x)`; ignored when loading.
    #[serde(default)]
    pub text: String,
}

impl MapDoc {
    pub fn from_map(map: &RatMap, ctx: &FieldCtx) -> MapDoc {
        let fmt = |p: &Poly| p.coeffs().iter().map(|&c| ctx.format(c)).collect();
        MapDoc {
            num: fmt(map.num()),
            den: fmt(map.den()),
            text: map.pretty(ctx),
        }
    }

    pub fn to_map(&self, ctx: &FieldCtx) -> Result<RatMap> {
        let parse = |v: &[String]| -> Result<Poly> {
            Ok(Poly::from_coeffs(
                v.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?,
            ))
        };
        RatMap::new(parse(&self.num)?, parse(&self.den)?, ctx)
    }
}

/// JSON form of a [`TowerSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub p: u32,
    pub n: u32,
    pub q: u64,
    pub modulus: Vec<u32>,
    pub a: String,
    pub b: String,
    pub t: String,
    pub n_param: String,
    pub c: String,
    pub d: String,
    pub psi: Vec<String>,
    pub f: MapDoc,
    pub g: MapDoc,
    pub theta: String,
    pub rho: String,
    pub nu: String,
    pub provenance: Provenance,
}

/// The instance over `F_5`: `θ² + θ + 2 = 0`, `φ(x) = 2x + 3`, `ψ(x) = 1/x`.
pub fn q5_instance() -> Result<TowerSpec> {
    q5_instance_with(Budget::default())
}

pub fn q5_instance_with(budget: Budget) -> Result<TowerSpec> {
    let chi = Poly::from_coeffs(vec![Fe::from_raw(2), Fe::ONE, Fe::ONE]);
    let tower = Arc::new(FieldTower::build(5, 1, 2, budget, &[(2, chi)])?);
    let base = tower.base();
    let (a, b) = (base.from_int(-1), base.from_int(2));
    let phi = PhiParams {
        c: base.from_int(2),
        d: base.from_int(3),
    };
    let psi = Mobius::new([Fe::ZERO, Fe::ONE, Fe::ONE, Fe::ZERO], base)?;
    let singer = build_singer(tower.clone(), a, b)?;
    let g = build_g_composed(&singer, &phi, &psi)?;
    TowerSpec::assemble(singer, phi, psi, g, Provenance::Q5Instance)
}

/// Spec whose `g` is the closed form for `(t, n)`; `ψ` is the first map with
/// `ψ(ρ) = θ` and `φ` the affine map with `φ(θ) = ν`.
pub fn spec_from_closed_form(singer: SingerData, t: Fe, n: Fe) -> Result<TowerSpec> {
    let cf = build_g_closed_form(&singer, t, n, TaSign::Minus)?;
    let quad_theta = singer.q_point();
    let psi = *mobius_search(&singer.tower, 2, &[(P1Point::Finite(cf.rho), quad_theta)])?
        .first()
        .ok_or_else(|| Error::Inconsistent("no ψ over F_q with ψ(ρ) = θ".into()))?;
    let phi = phi_from_nu(&singer, cf.nu)?;
    TowerSpec::assemble(singer, phi, psi, cf.g, Provenance::ClosedForm)
}

/// Pairs `(b, n)` with `-b`, `-n` nonsquares and `n ∉ {b, -b}`, in canonical order.
pub fn family_pairs(ctx: &FieldCtx) -> Result<Vec<(Fe, Fe)>> {
    if ctx.p() == 2 {
        return Err(Error::EvenCharacteristic("the a = t = 0 family"));
    }
    let nonsq: Vec<Fe> = ctx
        .elements()
        .filter(|&x| !ctx.is_square(ctx.neg(x)))
        .collect();
    let mut out = Vec::new();
    for &b in &nonsq {
        for &n in &nonsq {
            if n != b && n != ctx.neg(b) {
                out.push((b, n));
            }
        }
    }
    Ok(out)
}

/// The `a = t = 0` family: `f = (x^{q+1} + b)/(x^q - x)` and
/// `g = 2b(x^{q+1} + n)/((b + n)(x^q - x))`.
pub fn standard_family(tower: Arc<FieldTower>, b: Fe, n: Fe) -> Result<TowerSpec> {
    let base = tower.base();
    let q = tower.q();
    if base.p() == 2 {
        return Err(Error::Parameter("q must be odd".into()));
    }
    if q <= 5 {
        return Err(Error::Parameter("q > 5 required".into()));
    }
    if !base.contains(b) || !base.contains(n) {
        return Err(Error::Parameter("b and n must lie in F_q".into()));
    }
    if base.is_square(base.neg(b)) {
        return Err(Error::Parameter("-b must be a nonsquare".into()));
    }
    if base.is_square(base.neg(n)) {
        return Err(Error::Parameter("-n must be a nonsquare".into()));
    }
    if n == b || n == base.neg(b) {
        return Err(Error::Parameter("n must differ from b and -b".into()));
    }
    let singer = build_singer(tower, Fe::ZERO, b)?;
    spec_from_closed_form(singer, Fe::ZERO, n)
}

/// Spec from the generic path: `φ`, then `T`, then `ψ`, each picked by index
/// in the deterministic candidate order.
pub fn generic_spec(
    singer: SingerData,
    phi_index: usize,
    t_index: usize,
    psi_index: usize,
) -> Result<TowerSpec> {
    let phis = phi_candidates(&singer);
    if phis.is_empty() {
        return Err(Error::Precondition(format!(
            "no valid φ: the construction fails for q = {}",
            singer.q()
        )));
    }
    let phi = *phis.get(phi_index).ok_or_else(|| {
        Error::Parameter(format!("φ index {phi_index} out of range ({})", phis.len()))
    })?;
    let cands = psi_candidates(&singer, &phi)?;
    let mut ts: Vec<P1Point> = cands.iter().map(|&(t, _)| t).collect();
    ts.dedup();
    let t = *ts.get(t_index).ok_or_else(|| {
        Error::Parameter(format!("T index {t_index} out of range ({})", ts.len()))
    })?;
    let psis: Vec<Mobius> = cands
        .iter()
        .filter(|&&(tt, _)| tt == t)
        .map(|&(_, m)| m)
        .collect();
    let psi = *psis.get(psi_index).ok_or_else(|| {
        Error::Parameter(format!("ψ index {psi_index} out of range ({})", psis.len()))
    })?;
    let g = build_g_composed(&singer, &phi, &psi)?;
    TowerSpec::assemble(singer, phi, psi, g, Provenance::GenericSearch)
}

/// Named checks of every premise of the tower argument.
pub fn validate_spec(spec: &TowerSpec) -> Report {
    let sd = &spec.singer;
    let base = sd.base();
    let quad = sd.quad();
    let tower = &sd.tower;
    let q = spec.q() as u32;
    let (qp, qb) = (sd.q_point(), sd.q_bar_point());
    let mut report = Report::new();

    let over_fq = [spec.phi.c, spec.phi.d]
        .iter()
        .chain(spec.psi.entries().iter())
        .all(|&x| base.contains(x));
    report.push("phi_psi_defined_over_fq", over_fq && !spec.phi.c.is_zero());

    let phi = spec.phi.mobius(base).unwrap_or(Mobius::identity());
    let phi2 = phi.embed(tower, 1, 2).expect("entries in F_q");
    let psi2 = spec.psi.embed(tower, 1, 2).expect("entries in F_q");
    report.push(
        "phi_fixes_infinity",
        phi.apply(P1Point::Infinity, base) == P1Point::Infinity,
    );

    let image = image_of_r(sd);
    let moved: BTreeSet<P1Point> = image.iter().map(|&p| phi2.apply(p, quad)).collect();
    report.push("phi_preserves_f_r", moved == image);
    report.push(
        "trace_condition",
        trace_condition(sd, spec.phi.c, spec.phi.d),
    );

    let r: BTreeSet<P1Point> = sd.r_points().into_iter().collect();
    let psi_r: BTreeSet<P1Point> = r.iter().map(|&p| psi2.apply(p, quad)).collect();
    let s: BTreeSet<P1Point> = sd.s_points().into_iter().collect();
    let psi_s: BTreeSet<P1Point> = s.iter().map(|&p| psi2.apply(p, quad)).collect();
    report.push("psi_preserves_r_and_s", psi_r == r && psi_s == s);

    let composed = sd.f.compose_mobius(Some(&spec.psi), Some(&phi), base);
    report.push("g_equals_composition", composed == spec.g);
    report.push("g_degree_q_plus_1", spec.g.degree() == q as usize + 1);

    let g2 = spec.g_quad();
    report.push("g_fixes_q", g2.eval(qp, quad) == qp);
    let nu = phi2.apply(qp, quad);
    report.push("phi_q_not_in_q_q_bar", nu != qp && nu != qb);
    report.push("q_unramified_for_g", g2.ramification_index(qp, quad) == 1);

    let (rho, rho_bar) = (P1Point::Finite(spec.rho), P1Point::Finite(spec.rho_bar()));
    report.push("rho_not_q_or_q_bar", rho != qp && rho != qb);
    let ramified = g2.ramified_points(quad);
    let tame = ramified
        .iter()
        .all(|&(_, e)| assert_tame(e, base.p()).is_ok());
    let mut expected = vec![(rho, q + 1), (rho_bar, q + 1)];
    expected.sort();
    report.push(
        "ramification_exactly_rho_rho_bar",
        tame && ramified == expected,
    );

    let over_inf = spec.g.fiber(P1Point::Infinity, base);
    let split: Vec<(P1Point, u32)> = all_points(base).map(|p| (p, 1)).collect();
    report.push("g_infinity_fiber_split", over_inf == split);

    let trace_nu = tower
        .trace_norm(spec.nu)
        .map(|(tr, _)| tr == sd.a)
        .unwrap_or(false);
    report.push(
        "trace_nu_equals_a",
        trace_nu && nu == P1Point::Finite(spec.nu),
    );

    if let Some(cf) = &spec.closed_form {
        report.push("closed_form_matches_composition", cf.g == composed);
    }
    report
}

/// Counts of a candidate sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub candidates: usize,
    pub valid: usize,
}

/// Walks every `(φ, T, ψ)` in deterministic order and hands each spec that
/// passes [`validate_spec`] to `emit`.
pub fn search(sd: &SingerData, mut emit: impl FnMut(&TowerSpec)) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for phi in phi_candidates(sd) {
        for (_, psi) in psi_candidates(sd, &phi)? {
            summary.candidates += 1;
            let g = build_g_composed(sd, &phi, &psi)?;
            let spec = TowerSpec::assemble(sd.clone(), phi, psi, g, Provenance::GenericSearch)?;
            if validate_spec(&spec).passed() {
                summary.valid += 1;
                emit(&spec);
            }
        }
    }
    Ok(summary)
}

/// Walks every family pair `(b, n)` and emits the specs that validate.
pub fn family_scan(
    tower: Arc<FieldTower>,
    mut emit: impl FnMut(&TowerSpec),
) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for (b, n) in family_pairs(tower.base())? {
        summary.candidates += 1;
        if let Ok(spec) = standard_family(tower.clone(), b, n) {
            if validate_spec(&spec).passed() {
                summary.valid += 1;
                emit(&spec);
            }
        }
    }
    Ok(summary)
}

/// First family pair in canonical order for which [`standard_family`] succeeds.
pub fn first_family_spec(tower: Arc<FieldTower>) -> Result<TowerSpec> {
    for (b, n) in family_pairs(tower.base())? {
        if let Ok(spec) = standard_family(tower.clone(), b, n) {
            return Ok(spec);
        }
    }
    Err(Error::Parameter(format!(
        "no family parameters for q = {}",
        tower.q()
    )))
}
