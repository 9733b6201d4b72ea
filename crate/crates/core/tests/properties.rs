//! Cross-checks of the library against independent oracles: brute-force
//! thread enumeration, brute-force orbit equivalence, transporter-bond
//! containment, and the orbit/transporter correspondences.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prolim::limits::{
    act_on_thread, enumerate_threads, identity_thread, is_compatible, limit_group_inverse,
    limit_group_multiply, mediating_map, orbit_equivalent, transporter_tower, Cone,
    OrbitDecision, Thread, VerdictScope,
};
use prolim::search::{random_free_tower, random_tower, GenParams, ViolationMode};
use prolim::systems::{negation_tower, solenoid, EquivariantTower, Poset};

fn sample_towers(seed: u64, count: usize, params: &GenParams) -> Vec<EquivariantTower> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                random_free_tower(&mut rng, params)
            } else {
                random_tower(&mut rng, params)
            }
        })
        .collect()
}

#[test]
fn enumeration_matches_dfs_oracle() {
    let params = GenParams { max_carrier: 6, max_group_order: 6, depth: 3, mode: ViolationMode::None };
    for tower in sample_towers(21, 40, &params) {
        let spaces = tower.spaces();
        for depth in 0..=spaces.depth() {
            let mut found: Vec<Vec<usize>> = enumerate_threads(spaces, depth)
                .unwrap()
                .into_iter()
                .map(|t| t.entries().to_vec())
                .collect();
            found.sort();
            assert_eq!(found, common::dfs_threads(spaces, depth));
        }
    }
}

#[test]
fn surjective_bond_thread_count_equals_top_level() {
    for d in 0..=4 {
        let t = solenoid(3, d);
        let threads = enumerate_threads(t.spaces(), d).unwrap();
        assert_eq!(threads.len(), t.spaces().size(d));
    }
}

#[test]
fn orbit_classes_match_transporter_relation() {
    let params = GenParams { max_carrier: 8, max_group_order: 8, depth: 1, mode: ViolationMode::None };
    for tower in sample_towers(5, 30, &params) {
        for level in 0..=tower.depth() {
            let space = tower.action(level);
            let orbits = space.orbits();
            for x in 0..space.carrier_size() {
                for y in 0..space.carrier_size() {
                    let related = !space.transporter(x, y).is_empty();
                    assert_eq!(related, orbits.class_of(x) == orbits.class_of(y));
                }
            }
        }
    }
}

#[test]
fn freeness_iff_identity_transporters() {
    let params = GenParams { max_carrier: 8, max_group_order: 6, depth: 1, mode: ViolationMode::None };
    let mut towers = sample_towers(13, 20, &params);
    towers.push(negation_tower(3, 1));
    for tower in towers {
        for level in 0..=tower.depth() {
            let space = tower.action(level);
            let only_identity = (0..space.carrier_size())
                .all(|x| space.transporter(x, x) == vec![space.group().identity()]);
            assert_eq!(space.is_free(), only_identity);
        }
    }
}

#[test]
fn transporter_bonds_restrict_along_threads() {
    let params = GenParams { max_carrier: 6, max_group_order: 6, depth: 3, mode: ViolationMode::None };
    for tower in sample_towers(17, 25, &params) {
        let depth = tower.depth();
        let threads = enumerate_threads(tower.spaces(), depth).unwrap();
        for x in &threads {
            for y in &threads {
                let transporters = transporter_tower(&tower, x, y).unwrap();
                for k in 0..depth {
                    for &g in &transporters[k + 1] {
                        assert!(
                            transporters[k].contains(&tower.groups().bond(k).apply(g)),
                            "nu(T_{}) not contained in T_{}",
                            k + 1,
                            k
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn orbit_equivalence_matches_brute_force() {
    let params = GenParams { max_carrier: 6, max_group_order: 6, depth: 3, mode: ViolationMode::None };
    for tower in sample_towers(29, 20, &params) {
        let threads = enumerate_threads(tower.spaces(), tower.depth()).unwrap();
        for x in &threads {
            for y in &threads {
                let expected = common::brute_force_orbit_equivalent(&tower, x, y);
                match orbit_equivalent(&tower, x, y, VerdictScope::Depth).unwrap() {
                    OrbitDecision::Yes(w) | OrbitDecision::YesAtDepthOnly(w) => {
                        assert!(expected);
                        let moved = act_on_thread(&tower, &w. clone(), x).unwrap();
                        assert_eq!(&moved, y, "witness does not transport x to y");
                    }
                    OrbitDecision::No { .. } => assert!(!expected),
                }
            }
        }
    }
}

#[test]
fn nat_composites_equal_adjacent_folds() {
    let t = solenoid(5, 4);
    let spaces = t.spaces();
    for low in 0..=4 {
        for high in low..=4 {
            let composite = spaces.composite(low, high);
            for x in 0..spaces.size(high) {
                let mut y = x;
                for k in (low..high).rev() {
                    y = spaces.bond(k)[y];
                }
                assert_eq!(composite[x], y);
            }
        }
    }
}

#[test]
fn validated_directed_posets_have_greatest_elements() {
    // directedness of a finite poset forces a maximum; thread sets over such
    // posets biject with the top level, the degenerate case documented for
    // general indices
    let cases: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (1, vec![]),
        (3, vec![(0, 1), (1, 2), (0, 2)]),
        (4, vec![(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]),
        (5, vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (0, 4), (1, 3)]),
    ];
    for (size, pairs) in cases {
        if let Ok(p) = Poset::validate(size, &pairs) {
            assert!(p.greatest().is_some(), "directed finite poset must have a maximum");
        }
    }
}

#[test]
fn mediating_map_uniqueness_is_exhaustive_for_small_cones() {
    let tower = solenoid(3, 2);
    let spaces = tower.spaces();
    let depth = 2;
    // cones with |S| ≤ 6 built from arbitrary top-level choices
    for s_size in 1..=6 {
        let legs: Vec<Vec<usize>> = {
            let tops: Vec<usize> = (0..s_size).map(|s| (5 * s + 1) % spaces.size(depth)).collect();
            (0..=depth)
                .map(|k| {
                    let composite = spaces.composite(k, depth);
                    tops.iter().map(|&t| composite[t]).collect()
                })
                .collect()
        };
        let cone = Cone { size: s_size, legs: legs.clone() };
        let mediated = mediating_map(&cone, spaces, depth).unwrap();
        // exhaustively: for each point, exactly one thread has these projections
        let all = enumerate_threads(spaces, depth).unwrap();
        for s in 0..s_size {
            let matching: Vec<&Thread> = all
                .iter()
                .filter(|t| (0..=depth).all(|k| t.entry(k) == legs[k][s]))
                .collect();
            assert_eq!(matching.len(), 1);
            assert_eq!(matching[0], &mediated.threads[s]);
        }
    }
}

#[test]
fn solenoid_family_is_valid_and_free_for_small_bases() {
    for p in [3, 5, 7] {
        for d in 0..=4 {
            let t = solenoid(p, d);
            for k in 0..=d {
                assert!(t.action(k).is_free(), "p={p} level {k} not free");
            }
        }
    }
    // deeper truncations for the default base
    for d in 5..=6 {
        let t = solenoid(3, d);
        assert!(t.action(d).is_free());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // compatibility closure: componentwise action and limit-group arithmetic
    // keep the thread invariant on random towers
    #[test]
    fn action_and_products_preserve_compatibility(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = GenParams { max_carrier: 8, max_group_order: 6, depth: 4, mode: ViolationMode::None };
        let tower = if seed % 2 == 0 {
            random_free_tower(&mut rng, &params)
        } else {
            random_tower(&mut rng, &params)
        };
        let depth = tower.depth();
        let threads = enumerate_threads(tower.spaces(), depth).unwrap();
        let group_spaces = tower.groups().as_space_tower();
        let group_threads: Vec<Thread> = (0..group_spaces.size(depth))
            .map(|top| Thread::new(group_spaces.push_down(depth, top)))
            .collect();
        for g in &group_threads {
            prop_assert!(is_compatible(&group_spaces, g));
            for x in &threads {
                let moved = act_on_thread(&tower, g, x).unwrap();
                prop_assert!(is_compatible(tower.spaces(), &moved));
            }
            for h in &group_threads {
                let product = limit_group_multiply(tower.groups(), g, h).unwrap();
                prop_assert!(is_compatible(&group_spaces, &product));
            }
            let inv = limit_group_inverse(tower.groups(), g).unwrap();
            let e = limit_group_multiply(tower.groups(), g, &inv).unwrap();
            prop_assert_eq!(e, identity_thread(tower.groups(), depth));
        }
    }
}
