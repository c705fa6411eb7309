//! Independent oracles and negative controls for the tower construction.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use towerlab::analysis::{build_graph, genus_ladder, level1_genus_oracle, weil_check};
use towerlab::projline::{all_points, pgl2, Mobius, P1Point};
use towerlab::singer::default_singer;
use towerlab::towergen::{
    build_g_composed, excluded_phis, first_family_spec, q5_instance, validate_spec, Provenance,
    TowerSpec,
};
use towerlab::FieldTower;

fn tower(p: u32, n: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, n, 2).unwrap())
}

/// `φ(Q) = Q` collapses `g` to `f`: the fiber product is `q + 1` copies of
/// the line, so the formal genus is `1 - (q + 1) = -q`.
#[test]
fn degenerate_phi_gives_reducible_level_one() {
    for p in [5, 7, 11] {
        let sd = default_singer(tower(p, 1)).unwrap();
        let q = sd.q();
        let phi = excluded_phis(&sd)[0];
        let g = build_g_composed(&sd, &phi, &Mobius::identity()).unwrap();
        assert_eq!(g, sd.f);
        let spec =
            TowerSpec::assemble(sd, phi, Mobius::identity(), g, Provenance::GenericSearch).unwrap();
        let report = validate_spec(&spec);
        assert_eq!(report.get("phi_q_not_in_q_q_bar"), Some(false));
        assert_eq!(report.get("q_unramified_for_g"), Some(false));
        let ladder = genus_ladder(&spec, 1).unwrap();
        let expected = -BigInt::from(q);
        assert_eq!(ladder[1].genus, expected);
        assert_eq!(level1_genus_oracle(&spec).unwrap(), expected);
        assert!(ladder[1].genus < BigInt::from(q * q));
    }
}

/// Level-one genus from the plane model: the curve `g(y) = f(x)` has
/// bidegree `(q + 1, q + 1)` and is smooth exactly when no chain point is
/// ramified for both maps; counted here by brute force over `F_{q²}`.
#[test]
fn level_one_model_is_smooth_for_valid_specs() {
    let specs = [
        q5_instance().unwrap(),
        first_family_spec(tower(7, 1)).unwrap(),
        first_family_spec(tower(3, 2)).unwrap(),
    ];
    for spec in &specs {
        let graph = build_graph(spec, 2).unwrap();
        let singular = (0..graph.len())
            .flat_map(|x| graph.adj[x].iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| graph.ram_f[x] && graph.ram_g[y])
            .count();
        assert_eq!(singular, 0, "q = {}", spec.q());
        let d = spec.q();
        assert_eq!(genus_ladder(spec, 1).unwrap()[1].genus, BigInt::from(d * d));
        assert_eq!(graph.count_smooth_chains(1), graph.count_chains(1));
    }
}

/// The ψ giving a fixed spec can be replaced by any element of its left
/// Singer coset `σ ∘ ψ` without changing `g`.
#[test]
fn g_is_invariant_under_left_singer_coset() {
    let spec = q5_instance().unwrap();
    let sd = &spec.singer;
    for sigma in sd.singer_group() {
        let psi = sigma.compose(&spec.psi, sd.base());
        assert_eq!(build_g_composed(sd, &spec.phi, &psi).unwrap(), spec.g);
    }
}

/// Singer subgroups found by brute force over `PGL₂(F_q)` have order `q + 1`
/// and are cyclic.
#[test]
fn isotropy_groups_are_cyclic_of_order_q_plus_one() {
    for (p, n) in [(2, 2), (5, 1), (7, 1), (3, 2)] {
        let sd = default_singer(tower(p, n)).unwrap();
        let q = sd.q();
        let brute = sd.singer_group_brute().unwrap();
        assert_eq!(brute.len() as u64, q + 1);
        assert!(brute.iter().any(|m| m.order(sd.base()) == q + 1));
        let mut from_generator = sd.singer_group();
        let mut sorted = brute.clone();
        from_generator.sort_by_key(|m| m.entries());
        sorted.sort_by_key(|m| m.entries());
        assert_eq!(from_generator, sorted);
        assert_eq!(pgl2(sd.base()).len() as u64, q * (q * q - 1));
    }
}

/// Chain counts over `F_{q^k}` by explicit enumeration of tuples.
#[test]
fn chain_counts_match_tuple_enumeration() {
    let spec = q5_instance().unwrap();
    let quad = spec.quad();
    let f = spec.singer.f_quad();
    let g = spec.g_quad();
    let points: Vec<P1Point> = all_points(quad).collect();
    let mut pairs = 0u64;
    for &x in &points {
        for &y in &points {
            if g.eval(y, quad) == f.eval(x, quad) {
                pairs += 1;
            }
        }
    }
    let graph = build_graph(&spec, 2).unwrap();
    assert_eq!(graph.count_chains(1), BigUint::from(pairs));
    assert_eq!(graph.edge_count() as u64, pairs);
}

#[test]
fn weil_bound_examples() {
    assert!(weil_check(5, 1, &BigUint::from(36u32), &BigInt::from(25)));
    assert!(weil_check(5, 1, &BigUint::from(6u32), &BigInt::from(0)));
    assert!(!weil_check(5, 1, &BigUint::from(7u32), &BigInt::from(0)));
    let fabricated = BigUint::from(10u32 * (25 + 1 + 2 * 25 * 5));
    assert!(!weil_check(5, 2, &fabricated, &BigInt::from(25)));
}
