//! Property tests over randomly drawn fields, maps and valid specs.

use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use towerlab::analysis::{build_graph, genus_ladder};
use towerlab::projline::{all_points, pgl2, Mobius, P1Point};
use towerlab::singer::default_singer;
use towerlab::towergen::{search, validate_spec, TowerSpec};
use towerlab::{Fe, FieldTower};

const FIELDS: [(u32, u32); 6] = [(2, 2), (3, 2), (5, 1), (7, 1), (2, 3), (11, 1)];

fn towers() -> &'static Vec<Arc<FieldTower>> {
    static TOWERS: OnceLock<Vec<Arc<FieldTower>>> = OnceLock::new();
    TOWERS.get_or_init(|| {
        FIELDS
            .iter()
            .map(|&(p, n)| Arc::new(FieldTower::new(p, n, 2).unwrap()))
            .collect()
    })
}

/// Every valid spec over `F_5` and `F_7`, in search order.
fn specs() -> &'static Vec<TowerSpec> {
    static SPECS: OnceLock<Vec<TowerSpec>> = OnceLock::new();
    SPECS.get_or_init(|| {
        let mut out = Vec::new();
        for p in [5, 7] {
            let sd = default_singer(Arc::new(FieldTower::new(p, 1, 2).unwrap())).unwrap();
            search(&sd, |s| out.push(s.clone())).unwrap();
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(which in 0..FIELDS.len(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let tower = &towers()[which];
        let ctx = tower.quad();
        let size = ctx.size();
        let (x, y, z) = (ctx.elem(u64::from(x % size)).unwrap(), ctx.elem(u64::from(y % size)).unwrap(), ctx.elem(u64::from(z % size)).unwrap());
        prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
        prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
        prop_assert_eq!(ctx.add(x, ctx.neg(x)), Fe::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn embeddings_are_ring_maps(which in 0..FIELDS.len(), x in any::<u32>(), y in any::<u32>()) {
        let tower = &towers()[which];
        let base = tower.base();
        let quad = tower.quad();
        let size = base.size();
        let (x, y) = (base.elem(u64::from(x % size)).unwrap(), base.elem(u64::from(y % size)).unwrap());
        let e = |v| tower.embed(1, 2, v).unwrap();
        prop_assert_eq!(e(base.mul(x, y)), quad.mul(e(x), e(y)));
        prop_assert_eq!(e(base.add(x, y)), quad.add(e(x), e(y)));
        prop_assert!(tower.in_subfield(2, 1, e(x)));
        prop_assert_eq!(tower.restrict(2, 1, e(x)).unwrap(), x);
        prop_assert_eq!(tower.frobenius_q(2, e(x)).unwrap(), e(x));
    }

    #[test]
    fn mobius_group_laws(which in 0..FIELDS.len(), i in any::<usize>(), j in any::<usize>(), pt in any::<usize>()) {
        let tower = &towers()[which];
        let base = tower.base();
        let group = pgl2(base);
        let (a, b) = (group[i % group.len()], group[j % group.len()]);
        let npts = base.size() as usize + 1;
        let p = P1Point::from_index(pt % npts, base);
        prop_assert_eq!(a.compose(&b, base).apply(p, base), a.apply(b.apply(p, base), base));
        prop_assert_eq!(a.compose(&a.inverse(base), base), Mobius::identity());
        let order = a.order(base);
        let group_order = u64::from(base.size()) * (u64::from(base.size()).pow(2) - 1);
        prop_assert_eq!(group_order % order, 0);
    }

    #[test]
    fn point_indices_round_trip(which in 0..FIELDS.len(), i in any::<usize>()) {
        let ctx = towers()[which].quad();
        let i = i % (ctx.size() as usize + 1);
        let p = P1Point::from_index(i, ctx);
        prop_assert_eq!(p.index(ctx), i);
        prop_assert_eq!(P1Point::parse(&p.format(ctx), ctx).unwrap(), p);
    }

    #[test]
    fn rational_fibers_are_simple_and_s_lies_over_infinity(i in any::<usize>(), pt in any::<usize>()) {
        let spec = &specs()[i % specs().len()];
        let (base, quad, tower) = (spec.base(), spec.quad(), spec.tower());
        let t = P1Point::from_index(pt % (base.size() as usize + 1), base).embed(tower, 1, 2).unwrap();
        let fiber = spec.g_quad().fiber(t, quad);
        let in_s = |y: P1Point| y == P1Point::Infinity || tower.in_subfield(2, 1, y.finite().unwrap());
        prop_assert!(fiber.iter().all(|&(_, m)| m == 1));
        if t == P1Point::Infinity {
            prop_assert_eq!(fiber.len() as u64, spec.q() + 1);
            prop_assert!(fiber.iter().all(|&(y, _)| in_s(y)));
        } else {
            prop_assert!(fiber.iter().all(|&(y, _)| !in_s(y)));
        }
    }

    #[test]
    fn fibers_partition_the_quadratic_line(i in any::<usize>()) {
        let spec = &specs()[i % specs().len()];
        let quad = spec.quad();
        let mut points = 0usize;
        for t in all_points(quad) {
            points += spec.g_quad().fiber(t, quad).len();
        }
        prop_assert_eq!(points, quad.size() as usize + 1);
    }

    #[test]
    fn valid_specs_stay_valid_through_json(i in any::<usize>()) {
        let spec = &specs()[i % specs().len()];
        let back = TowerSpec::from_json(&spec.to_json(), spec.tower().budget()).unwrap();
        prop_assert_eq!(back.to_json(), spec.to_json());
        prop_assert!(validate_spec(&back).passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn genus_ladder_invariants(i in any::<usize>()) {
        let spec = &specs()[i % specs().len()];
        let q = spec.q();
        let ladder = genus_ladder(spec, 3).unwrap();
        prop_assert_eq!(&ladder[1].genus, &BigInt::from(q * q));
        for w in ladder.windows(2) {
            let lhs = BigInt::from(2) * &w[1].genus - 2;
            let rhs = BigInt::from(q + 1) * (BigInt::from(2) * &w[0].genus - 2) + BigInt::from(w[1].delta.clone());
            prop_assert_eq!(lhs, rhs);
            prop_assert!(w[1].genus > w[0].genus);
        }
    }

    #[test]
    fn split_chains_and_frobenius(i in any::<usize>(), m in 0usize..4) {
        let spec = &specs()[i % specs().len()];
        let g1 = build_graph(spec, 1).unwrap();
        prop_assert_eq!(g1.count_split_chains(m), BigUint::from(spec.q() + 1).pow(m as u32 + 1));
        prop_assert_eq!(g1.count_chains(m), g1.count_split_chains(m));

        let g2 = build_graph(spec, 2).unwrap();
        let tower = spec.tower();
        let quad = spec.quad();
        let frob: Vec<usize> = g2.nodes.iter().map(|p| p.frobenius(tower, 2).unwrap().index(quad)).collect();
        for (x, ys) in g2.adj.iter().enumerate() {
            let mut image: Vec<usize> = ys.iter().map(|&y| frob[y]).collect();
            let mut target = g2.adj[frob[x]].clone();
            image.sort_unstable();
            target.sort_unstable();
            prop_assert_eq!(image, target);
        }
        prop_assert_eq!(all_points(quad).count(), g2.len());
    }
}
