//! Per-level invariants of a tower: correspondence graphs and chain counts,
//! the exact genus ladder by tame place tracking, the `λ_m` ladder and
//! Hasse–Weil sanity checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::FieldTower;
use crate::projline::{all_points, assert_tame, P1Point};
use crate::towergen::TowerSpec;

/// Directed graph on `P¹(F_{q^k})` with an edge `x → y` whenever `g(y) = f(x)`.
#[derive(Debug, Clone)]
pub struct CorrespondenceGraph {
    pub k: usize,
    pub nodes: Vec<P1Point>,
    pub labels: Vec<String>,
    pub adj: Vec<Vec<usize>>,
    /// Node lies in `S = P¹(F_q)`.
    pub in_s: Vec<bool>,
    /// Node lies in `R = P¹(F_{q²}) \ P¹(F_q)` (never true for odd `k`).
    pub in_r: Vec<bool>,
    /// `f` ramifies at the node.
    pub ram_f: Vec<bool>,
    /// `g` ramifies at the node.
    pub ram_g: Vec<bool>,
}

fn level_tower(spec: &TowerSpec, k: usize) -> Result<Option<FieldTower>> {
    if k <= spec.tower().k_max() {
        Ok(None)
    } else {
        Ok(Some(spec.tower_with_levels(k)?))
    }
}

/// Enumerates the correspondence over `F_{q^k}`.
pub fn build_graph(spec: &TowerSpec, k: usize) -> Result<CorrespondenceGraph> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let owned = level_tower(spec, k)?;
    let tower = owned.as_ref().unwrap_or(spec.tower());
    let ctx = tower.level(k)?;
    let f = spec.singer.f.embed(tower, 1, k)?;
    let g = spec.g.embed(tower, 1, k)?;
    let nodes: Vec<P1Point> = all_points(ctx).collect();

    let mut by_g: HashMap<P1Point, Vec<usize>> = HashMap::new();
    for (i, &y) in nodes.iter().enumerate() {
        by_g.entry(g.eval(y, ctx)).or_default().push(i);
    }
    let adj = nodes
        .iter()
        .map(|&x| by_g.get(&f.eval(x, ctx)).cloned().unwrap_or_default())
        .collect();
    let in_sub = |p: P1Point, sub: usize| match p {
        P1Point::Finite(x) => tower.in_subfield(k, sub, x),
        P1Point::Infinity => true,
    };
    let in_s = nodes.iter().map(|&p| in_sub(p, 1)).collect();
    let in_r = nodes
        .iter()
        .map(|&p| k.is_multiple_of(2) && p != P1Point::Infinity && in_sub(p, 2) && !in_sub(p, 1))
        .collect();
    let ram_f = nodes
        .iter()
        .map(|&p| f.ramification_index(p, ctx) > 1)
        .collect();
    let ram_g = nodes
        .iter()
        .map(|&p| g.ramification_index(p, ctx) > 1)
        .collect();
    let labels = nodes.iter().map(|p| p.format(ctx)).collect();
    Ok(CorrespondenceGraph {
        k,
        nodes,
        labels,
        adj,
        in_s,
        in_r,
        ram_f,
        ram_g,
    })
}

impl CorrespondenceGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Counts walks of `m + 1` nodes that use only allowed nodes and edges.
    fn walks(
        &self,
        m: usize,
        node_ok: impl Fn(usize) -> bool,
        edge_ok: impl Fn(usize, usize) -> bool,
    ) -> BigUint {
        let mut v: Vec<BigUint> = (0..self.len())
            .map(|i| {
                if node_ok(i) {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            })
            .collect();
        for _ in 0..m {
            v = (0..self.len())
                .map(|x| {
                    if !node_ok(x) {
                        return BigUint::zero();
                    }
                    self.adj[x]
                        .iter()
                        .filter(|&&y| node_ok(y) && edge_ok(x, y))
                        .fold(BigUint::zero(), |acc, &y| acc + &v[y])
                })
                .collect();
        }
        v.into_iter().sum()
    }

    /// Number of chains `(P_0, …, P_m)` with `g(P_i) = f(P_{i-1})`.
    pub fn count_chains(&self, m: usize) -> BigUint {
        self.walks(m, |_| true, |_, _| true)
    }

    /// Chains with every coordinate in `S`.
    pub fn count_split_chains(&self, m: usize) -> BigUint {
        self.walks(m, |i| self.in_s[i], |_, _| true)
    }

    /// Chains at which the fiber product is smooth: no step where `f` ramifies
    /// at `P_{i-1}` and `g` ramifies at `P_i`.
    pub fn count_smooth_chains(&self, m: usize) -> BigUint {
        self.walks(m, |_| true, |x, y| !(self.ram_f[x] && self.ram_g[y]))
    }

    /// Graphviz rendering; `S` and `R` nodes carry a `locus` attribute and a
    /// distinct shape.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph correspondence_k{} {{\n", self.k);
        for (i, label) in self.labels.iter().enumerate() {
            let (locus, shape) = if self.in_s[i] {
                ("S", "box")
            } else if self.in_r[i] {
                ("R", "ellipse")
            } else {
                ("other", "point")
            };
            s.push_str(&format!(
                "  n{i} [label=\"{label}\", locus=\"{locus}\", shape={shape}];\n"
            ));
        }
        for (x, ys) in self.adj.iter().enumerate() {
            for y in ys {
                s.push_str(&format!("  n{x} -> n{y};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `(q + 1)^{m+1}`, cross-checked against the split-chain count over `F_q`.
pub fn splitting_lower_bound(spec: &TowerSpec, m: usize) -> Result<BigUint> {
    let graph = build_graph(spec, 1)?;
    splitting_bound_checked(spec, &graph, m)
}

fn splitting_bound_checked(
    spec: &TowerSpec,
    graph: &CorrespondenceGraph,
    m: usize,
) -> Result<BigUint> {
    let bound = BigUint::from(spec.q() + 1).pow(m as u32 + 1);
    let counted = graph.count_split_chains(m);
    if counted != bound {
        return Err(Error::Inconsistent(format!(
            "split chains at level {m}: counted {counted}, expected {bound}"
        )));
    }
    Ok(bound)
}

/// Genus and bookkeeping of one level of the place-tracking recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGenus {
    pub m: usize,
    pub genus: BigInt,
    /// `Σ (e - 1)` of `X_m → X_{m-1}`; zero at `m = 0`.
    pub delta: BigUint,
    /// Places where an `f`-index above one met a `g`-index above one and the
    /// step was unramified.
    pub cancellations: BigUint,
    /// Distinct `(last point, e1)` profiles.
    pub states: usize,
}

/// Exact geometric genus of `X_0, …, X_{m_max}` by tracking every place above
/// `R` through Abhyankar's lemma.
pub fn genus_ladder(spec: &TowerSpec, m_max: usize) -> Result<Vec<LevelGenus>> {
    let sd = &spec.singer;
    let quad = sd.quad();
    let p = sd.base().p();
    let q1 = spec.q() + 1;
    let g2 = spec.g_quad();

    let r_points = sd.r_points();
    let mut e_f: HashMap<P1Point, u64> = HashMap::new();
    let mut f_val: HashMap<P1Point, P1Point> = HashMap::new();
    for &x in &r_points {
        let e = sd.e_f(x);
        assert_tame(e, p)?;
        e_f.insert(x, u64::from(e));
        f_val.insert(x, sd.f_at(x));
    }
    let bottoms: BTreeSet<P1Point> = f_val.values().copied().collect();
    let mut g_fiber: HashMap<P1Point, Vec<(P1Point, u64)>> = HashMap::new();
    for &t in &bottoms {
        let fiber = g2.fiber(t, quad);
        let mass: u32 = fiber.iter().map(|&(_, m)| m).sum();
        if u64::from(mass) != q1 || fiber.iter().any(|&(y, _)| !sd.in_r(y)) {
            return Err(Error::ClosureViolation(format!(
                "g⁻¹({}) is not contained in R",
                t.format(quad)
            )));
        }
        for &(_, e) in &fiber {
            assert_tame(e, p)?;
        }
        g_fiber.insert(
            t,
            fiber.into_iter().map(|(y, e)| (y, u64::from(e))).collect(),
        );
    }

    let mut states: BTreeMap<(P1Point, u64), BigUint> = BTreeMap::new();
    for &x in &r_points {
        *states.entry((x, e_f[&x])).or_default() += 1u32;
    }
    let conserve = |states: &BTreeMap<(P1Point, u64), BigUint>, m: usize| -> Result<()> {
        let degree = BigUint::from(q1).pow(m as u32 + 1);
        let mut mass: BTreeMap<P1Point, BigUint> = BTreeMap::new();
        for ((y, e1), count) in states {
            *mass.entry(f_val[y]).or_default() += count * *e1;
        }
        if mass.len() != bottoms.len() || mass.values().any(|v| *v != degree) {
            return Err(Error::Inconsistent(format!(
                "degree not conserved at level {m}"
            )));
        }
        Ok(())
    };
    conserve(&states, 0)?;

    let mut out = vec![LevelGenus {
        m: 0,
        genus: BigInt::zero(),
        delta: BigUint::zero(),
        cancellations: BigUint::zero(),
        states: states.len(),
    }];
    let mut genus = BigInt::zero();
    for m in 1..=m_max {
        let mut next: BTreeMap<(P1Point, u64), BigUint> = BTreeMap::new();
        let mut delta = BigUint::zero();
        let mut cancellations = BigUint::zero();
        for ((x, e1), count) in &states {
            for &(y, e2) in &g_fiber[&f_val[x]] {
                let common = e1.gcd(&e2);
                let e_rel = e2 / common;
                let e_next = (e1 / common)
                    .checked_mul(e_f[&y])
                    .ok_or_else(|| Error::Inconsistent("ramification index overflow".into()))?;
                let places = count * common;
                delta += &places * (e_rel - 1);
                if *e1 > 1 && e2 > 1 && e_rel == 1 {
                    cancellations += &places;
                }
                *next.entry((y, e_next)).or_default() += places;
            }
        }
        states = next;
        conserve(&states, m)?;
        let two_g_minus_2: BigInt =
            BigInt::from(q1) * (BigInt::from(2) * &genus - 2) + BigInt::from(delta.clone());
        if two_g_minus_2.is_odd() {
            return Err(Error::NonIntegerGenus(m));
        }
        genus = (two_g_minus_2 + 2) / 2;
        out.push(LevelGenus {
            m,
            genus: genus.clone(),
            delta,
            cancellations,
            states: states.len(),
        });
    }
    Ok(out)
}

/// Genus of `X_1` from Riemann–Hurwitz for the first projection, using root
/// multiplicities of `g(y) - f(x)` over every `x ∈ P¹(F_{q²})` above a
/// branch value of `g`.
pub fn level1_genus_oracle(spec: &TowerSpec) -> Result<BigInt> {
    let sd = &spec.singer;
    let quad = sd.quad();
    let q1 = spec.q() + 1;
    let g2 = spec.g_quad();
    let branch: BTreeSet<P1Point> = g2
        .ramified_points(quad)
        .into_iter()
        .map(|(y, _)| g2.eval(y, quad))
        .collect();
    let mut delta = BigInt::zero();
    for x in all_points(quad) {
        let t = sd.f_at(x);
        if !branch.contains(&t) {
            continue;
        }
        let e1 = u64::from(sd.e_f(x));
        let fiber = g2.fiber(t, quad);
        let mass: u32 = fiber.iter().map(|&(_, m)| m).sum();
        if u64::from(mass) != q1 {
            return Err(Error::ClosureViolation(
                "incomplete fiber of g over F_{q^2}".into(),
            ));
        }
        for (_, mult) in fiber {
            let e2 = u64::from(mult);
            let common = e1.gcd(&e2);
            delta += BigInt::from(common) * BigInt::from(e2 / common - 1);
        }
    }
    let two_g_minus_2 = BigInt::from(q1) * BigInt::from(-2) + delta;
    if two_g_minus_2.is_odd() {
        return Err(Error::NonIntegerGenus(1));
    }
    Ok((two_g_minus_2 + 2) / 2)
}

/// `N ≤ q^k + 1 + 2g·√(q^k)`, decided in exact integer arithmetic.
pub fn weil_check(q: u64, k: u32, n: &BigUint, g: &BigInt) -> bool {
    let qk = BigInt::from(q).pow(k);
    let excess: BigInt = BigInt::from(n.clone()) - &qk - 1;
    if !excess.is_positive() {
        return true;
    }
    if g.is_negative() {
        return false;
    }
    &excess * &excess <= BigInt::from(4) * g * g * qk
}

/// `2/(q - 2)`.
pub fn target_limit(q: u64) -> Result<BigRational> {
    if q <= 2 {
        return Err(Error::Parameter("the limit bound needs q > 2".into()));
    }
    Ok(BigRational::new(BigInt::from(2), BigInt::from(q - 2)))
}

/// `2·#S/(#R - 2) = 2/(q - 2)` with `#S = q + 1` and `#R = q² - q`.
pub fn target_identity_holds(q: u64) -> bool {
    let (qi, s, r) = (
        BigInt::from(q),
        BigInt::from(q + 1),
        BigInt::from(q * q - q),
    );
    if r.clone() - 2 == BigInt::zero() || q <= 2 {
        return false;
    }
    BigRational::new(BigInt::from(2) * s, r - 2) == BigRational::new(BigInt::from(2), qi - 2)
}

/// One row of the limit table. Levels beyond the state budget carry only
/// `m`, `degree`, `n_lower` and `skipped = true`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub m: usize,
    pub degree: BigUint,
    pub genus: Option<BigInt>,
    pub delta: Option<BigUint>,
    pub n_lower: BigUint,
    pub lambda: Option<BigRational>,
    pub weil_k1: Option<bool>,
    pub weil_k2: Option<bool>,
    pub skipped: bool,
}

impl LevelReport {
    pub fn weil_ok(&self) -> Option<bool> {
        Some(self.weil_k1? && self.weil_k2?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub q: u64,
    pub target: BigRational,
    pub target_identity: bool,
    pub rows: Vec<LevelReport>,
}

/// Genus ladder, splitting bound, `λ_m` and Weil checks for `0 ≤ m ≤ m_max`.
pub fn limit_report(spec: &TowerSpec, m_max: usize) -> Result<LimitReport> {
    let q = spec.q();
    let computed = m_max.min(spec.tower().budget().max_level);
    let ladder = genus_ladder(spec, computed)?;
    let graph1 = build_graph(spec, 1)?;
    let graph2 = build_graph(spec, 2)?;
    let mut rows = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let degree = BigUint::from(q + 1).pow(m as u32);
        let n_lower = splitting_bound_checked(spec, &graph1, m)?;
        if m > computed {
            rows.push(LevelReport {
                m,
                degree,
                genus: None,
                delta: None,
                n_lower,
                lambda: None,
                weil_k1: None,
                weil_k2: None,
                skipped: true,
            });
            continue;
        }
        let level = &ladder[m];
        let genus = level.genus.clone();
        let lambda = (!genus.is_zero())
            .then(|| BigRational::new(BigInt::from(n_lower.clone()), genus.clone()));
        let smooth = graph2.count_smooth_chains(m);
        rows.push(LevelReport {
            m,
            degree,
            weil_k1: Some(weil_check(q, 1, &n_lower, &genus)),
            weil_k2: Some(weil_check(q, 2, &smooth, &genus)),
            genus: Some(genus),
            delta: Some(level.delta.clone()),
            n_lower,
            lambda,
            skipped: false,
        });
    }
    Ok(LimitReport {
        q,
        target: target_limit(q)?,
        target_identity: target_identity_holds(q),
        rows,
    })
}

/// Rounds half away from zero to `places` decimals.
pub fn format_decimal(x: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    format!(
        "{sign}{int}.{:0>width$}",
        frac.to_string(),
        width = places as usize
    )
}

/// Placeholder for undefined or skipped cells.
pub const UNDEFINED: &str = "—";

pub const CSV_HEADER: [&str; 11] = [
    "m",
    "degree",
    "genus",
    "delta",
    "n_lower",
    "lambda_num",
    "lambda_den",
    "lambda_decimal",
    "target_num",
    "target_den",
    "weil_ok",
];

pub fn write_csv<W: Write>(report: &LimitReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Inconsistent(format!("csv output: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for row in &report.rows {
        let genus = if row.skipped {
            "skipped".to_string()
        } else {
            opt(row.genus.as_ref().map(|g| g.to_string()))
        };
        let lambda_decimal = match (&row.lambda, row.skipped) {
            (_, true) => String::new(),
            (Some(l), false) => format_decimal(l, 6),
            (None, false) => UNDEFINED.to_string(),
        };
        w.write_record([
            row.m.to_string(),
            row.degree.to_string(),
            genus,
            opt(row.delta.as_ref().map(|d| d.to_string())),
            row.n_lower.to_string(),
            opt(row.lambda.as_ref().map(|l| l.numer().to_string())),
            opt(row.lambda.as_ref().map(|l| l.denom().to_string())),
            lambda_decimal,
            report.target.numer().to_string(),
            report.target.denom().to_string(),
            opt(row.weil_ok().map(|b| b.to_string())),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Inconsistent(format!("csv output: {e}")))?;
    Ok(())
}

pub fn report_json(report: &LimitReport) -> Value {
    let rat = |r: &BigRational| json!({"num": r.numer().to_string(), "den": r.denom().to_string()});
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            json!({
                "m": row.m,
                "degree": row.degree.to_string(),
                "genus": row.genus.as_ref().map(|g| g.to_string()),
                "delta": row.delta.as_ref().map(|d| d.to_string()),
                "n_lower": row.n_lower.to_string(),
                "lambda": row.lambda.as_ref().map(rat),
                "lambda_decimal": row.lambda.as_ref().map(|l| format_decimal(l, 6)),
                "weil_k1": row.weil_k1,
                "weil_k2": row.weil_k2,
                "skipped": row.skipped,
            })
        })
        .collect();
    json!({
        "q": report.q,
        "target": rat(&report.target),
        "target_identity": report.target_identity,
        "levels": rows,
    })
}
