//! Seeded random generation of valid equivariant towers and bulk
//! verification runs.
//!
//! The general generator works top-down by quotient construction: it starts
//! from a disjoint union of coset spaces of a small permutation-image group
//! and repeatedly collapses a level along a group-congruence, which yields
//! equivariant bonds by construction. Violation modes keep equivariance but
//! break freeness (a fixed point is adjoined at every level) or break
//! ν-injectivity (a nontrivial normal subgroup is quotiented out). All
//! randomness flows through a ChaCha stream, so a seed pins the run.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteGroup, GSpace, GroupHom, UnionFind};
use crate::commutation::{stabilized_commutation_check, verify, PsiReport};
use crate::systems::{ConstantTowerSpec, EquivariantTower, Family, GroupTower, SpaceTower};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationMode {
    None,
    NotFree,
    NuNotInjective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub max_carrier: usize,
    pub max_group_order: usize,
    pub depth: usize,
    pub mode: ViolationMode,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_carrier: 8, max_group_order: 6, depth: 3, mode: ViolationMode::None }
    }
}

/// Small groups available to the generator, all of order at most
/// `max_order`: cyclic groups, products of two cyclics, and the symmetric
/// group on three letters (built from permutation composition).
pub fn group_library(max_order: usize) -> Vec<Arc<FiniteGroup>> {
    let mut out: Vec<Arc<FiniteGroup>> =
        (1..=max_order).map(|n| Arc::new(FiniteGroup::cyclic(n))).collect();
    let z2 = FiniteGroup::cyclic(2);
    if max_order >= 4 {
        out.push(Arc::new(z2.direct_product(&z2)));
    }
    if max_order >= 6 {
        let (s3, _) = FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]);
        out.push(Arc::new(s3));
        out.push(Arc::new(z2.direct_product(&FiniteGroup::cyclic(3))));
    }
    if max_order >= 8 {
        out.push(Arc::new(z2.direct_product(&FiniteGroup::cyclic(4))));
    }
    out
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Disjoint union of coset spaces G/H for randomly chosen subgroups H,
/// capped at `max_carrier` points.
fn random_coset_space(
    rng: &mut ChaCha8Rng,
    group: &Arc<FiniteGroup>,
    max_carrier: usize,
) -> GSpace {
    let subgroups = group.subgroups();
    let mut coset_of_components: Vec<Vec<usize>> = Vec::new();
    let mut carrier = 0;
    loop {
        let h = pick(rng, &subgroups);
        let component_size = group.order() / h.len();
        if carrier + component_size > max_carrier {
            if carrier > 0 {
                break;
            }
            continue; // first component must fit; retry with another subgroup
        }
        // number cosets of H within this component
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut count = 0;
        for g in group.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &n in h {
                coset_of[group.mul(g, n)] = count;
            }
            count += 1;
        }
        coset_of_components.push(coset_of);
        carrier += component_size;
        if carrier >= max_carrier || rng.gen_bool(0.4) {
            break;
        }
    }
    // global point index = component offset + coset id
    let mut offsets = vec![0usize];
    for coset_of in &coset_of_components {
        let count = coset_of.iter().max().unwrap() + 1;
        offsets.push(offsets.last().unwrap() + count);
    }
    let total = *offsets.last().unwrap();
    let mut reps = vec![usize::MAX; total];
    for (c, coset_of) in coset_of_components.iter().enumerate() {
        for g in (0..group.order()).rev() {
            reps[offsets[c] + coset_of[g]] = g;
        }
    }
    let action = group
        .elements()
        .map(|g| {
            (0..total)
                .map(|p| {
                    let c = (0..coset_of_components.len())
                        .find(|&c| p >= offsets[c] && p < offsets[c + 1])
                        .unwrap();
                    offsets[c] + coset_of_components[c][group.mul(g, reps[p])]
                })
                .collect()
        })
        .collect();
    GSpace::validate(group.clone(), total, action).expect("coset action is valid")
}

/// Collapses a level along the congruence generated by N-orbits plus a few
/// random pairs, closed under the group action. Returns the quotient level
/// and the bond down to it.
fn quotient_level(
    rng: &mut ChaCha8Rng,
    space: &GSpace,
    normal: &[usize],
    extra_pair_prob: f64,
) -> (GSpace, Vec<usize>, GroupHom) {
    let group = space.group();
    let n = space.carrier_size();
    let mut uf = UnionFind::new(n);
    for &m in normal {
        for x in 0..n {
            uf.union(x, space.apply(m, x));
        }
    }
    for x in 0..n {
        for y in (x + 1)..n {
            if rng.gen_bool(extra_pair_prob) {
                uf.union(x, y);
            }
        }
    }
    // close under the action so the quotient action is well-defined
    loop {
        let mut changed = false;
        for g in group.elements() {
            for x in 0..n {
                for y in (x + 1)..n {
                    if uf.find(x) == uf.find(y) {
                        let (gx, gy) = (space.apply(g, x), space.apply(g, y));
                        if uf.find(gx) != uf.find(gy) {
                            uf.union(gx, gy);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let partition = uf.partition();
    let (quotient_group, proj) = group.quotient(normal);
    let quotient_group = Arc::new(quotient_group);
    // action of G/N on classes via representatives; well-definedness is a
    // consequence of the closure above and is asserted by validation
    let mut coset_rep = vec![usize::MAX; quotient_group.order()];
    for g in (0..group.order()).rev() {
        coset_rep[proj[g]] = g;
    }
    let action: Vec<Vec<usize>> = (0..quotient_group.order())
        .map(|c| {
            (0..partition.class_count())
                .map(|class| {
                    partition.class_of(space.apply(coset_rep[c], partition.representative(class)))
                })
                .collect()
        })
        .collect();
    let quotient =
        GSpace::validate(quotient_group.clone(), partition.class_count(), action)
            .expect("congruence quotient carries a valid action");
    let bond = (0..n).map(|x| partition.class_of(x)).collect();
    let nu = GroupHom::validate(group.clone(), quotient_group, proj)
        .expect("coset projection is a homomorphism");
    (quotient, bond, nu)
}

/// Relabels carriers by random permutations, adjusting actions and bonds.
fn shuffle_levels(
    rng: &mut ChaCha8Rng,
    levels: &mut [GSpace],
    space_bonds: &mut [Vec<usize>],
) {
    let perms: Vec<Vec<usize>> = levels
        .iter()
        .map(|s| {
            let mut p: Vec<usize> = (0..s.carrier_size()).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    for (k, space) in levels.iter_mut().enumerate() {
        let p = &perms[k];
        let action = space
            .group()
            .elements()
            .map(|g| {
                let mut row = vec![0; space.carrier_size()];
                for x in 0..space.carrier_size() {
                    row[p[x]] = p[space.apply(g, x)];
                }
                row
            })
            .collect();
        *space = GSpace::validate(space.group().clone(), space.carrier_size(), action)
            .expect("relabeling preserves the axioms");
    }
    for (k, bond) in space_bonds.iter_mut().enumerate() {
        let (lo, hi) = (&perms[k], &perms[k + 1]);
        let mut new_bond = vec![0; bond.len()];
        for x in 0..bond.len() {
            new_bond[hi[x]] = lo[bond[x]];
        }
        *bond = new_bond;
    }
}

/// Adjoins a point fixed by every group element at every level, mapped to
/// itself by every bond. Keeps equivariance and coherence, breaks freeness.
fn adjoin_fixed_point(levels: &mut Vec<GSpace>, space_bonds: &mut [Vec<usize>]) {
    for space in levels.iter_mut() {
        let n = space.carrier_size();
        let action = space
            .group()
            .elements()
            .map(|g| (0..=n).map(|x| if x == n { n } else { space.apply(g, x) }).collect())
            .collect();
        *space = GSpace::validate(space.group().clone(), n + 1, action)
            .expect("adjoined fixed point keeps the axioms");
    }
    for (k, bond) in space_bonds.iter_mut().enumerate() {
        bond.push(levels[k].carrier_size() - 1);
    }
}

/// Random valid equivariant tower built by downward quotient construction.
pub fn random_tower(rng: &mut ChaCha8Rng, params: &GenParams) -> EquivariantTower {
    let library: Vec<Arc<FiniteGroup>> = group_library(params.max_group_order)
        .into_iter()
        .filter(|g| params.mode == ViolationMode::None || g.order() > 1)
        .collect();
    let top_group = pick(rng, &library).clone();
    let top = random_coset_space(rng, &top_group, params.max_carrier);

    // build from the top level downward, then reverse
    let mut levels_rev = vec![top];
    let mut bonds_rev: Vec<Vec<usize>> = Vec::new();
    let mut nu_rev: Vec<GroupHom> = Vec::new();
    for step in 0..params.depth {
        let current = levels_rev.last().unwrap();
        let group = current.group();
        let normals = group.normal_subgroups();
        let normal: Vec<usize> = match params.mode {
            // identity bonds on groups keep ν injective
            ViolationMode::None | ViolationMode::NotFree => {
                if params.mode == ViolationMode::None && rng.gen_bool(0.3) {
                    pick(rng, &normals).clone()
                } else {
                    vec![group.identity()]
                }
            }
            ViolationMode::NuNotInjective => {
                let nontrivial: Vec<_> =
                    normals.iter().filter(|h| h.len() > 1).cloned().collect();
                if step == 0 && !nontrivial.is_empty() {
                    pick(rng, &nontrivial).clone()
                } else if rng.gen_bool(0.3) && !nontrivial.is_empty() {
                    pick(rng, &nontrivial).clone()
                } else {
                    vec![group.identity()]
                }
            }
        };
        let (quotient, bond, nu) = quotient_level(rng, current, &normal, 0.08);
        levels_rev.push(quotient);
        bonds_rev.push(bond);
        nu_rev.push(nu);
    }
    let mut levels: Vec<GSpace> = levels_rev.into_iter().rev().collect();
    let mut space_bonds: Vec<Vec<usize>> = bonds_rev.into_iter().rev().collect();
    let group_bonds: Vec<GroupHom> = nu_rev.into_iter().rev().collect();

    if params.mode == ViolationMode::NotFree {
        adjoin_fixed_point(&mut levels, &mut space_bonds);
    }
    shuffle_levels(rng, &mut levels, &mut space_bonds);

    assemble(levels, space_bonds, group_bonds.iter().map(|h| h.map().to_vec()).collect())
}

/// Random tower on which the classical hypotheses hold: every level is a
/// disjoint union of copies of the regular action (hence free) and every
/// group bond is the identity (hence injective). Bonds send copy (i, g) to
/// (t(i), g·aᵢ), which is equivariant for any choice of t and aᵢ.
pub fn random_free_tower(rng: &mut ChaCha8Rng, params: &GenParams) -> EquivariantTower {
    let library: Vec<Arc<FiniteGroup>> = group_library(params.max_group_order)
        .into_iter()
        .filter(|g| g.order() <= params.max_carrier)
        .collect();
    let group = pick(rng, &library).clone();
    let max_copies = (params.max_carrier / group.order()).max(1);
    let copies: Vec<usize> =
        (0..=params.depth).map(|_| rng.gen_range(1..=max_copies)).collect();
    let mut levels: Vec<GSpace> = copies
        .iter()
        .map(|&c| {
            let n = c * group.order();
            let action = group
                .elements()
                .map(|g| {
                    (0..n)
                        .map(|p| {
                            let (i, x) = (p / group.order(), p % group.order());
                            i * group.order() + group.mul(g, x)
                        })
                        .collect()
                })
                .collect();
            GSpace::validate(group.clone(), n, action).expect("copies of the regular action")
        })
        .collect();
    let mut space_bonds: Vec<Vec<usize>> = (0..params.depth)
        .map(|k| {
            let targets: Vec<(usize, usize)> = (0..copies[k + 1])
                .map(|_| (rng.gen_range(0..copies[k]), rng.gen_range(0..group.order())))
                .collect();
            (0..copies[k + 1] * group.order())
                .map(|p| {
                    let (i, x) = (p / group.order(), p % group.order());
                    let (t, a) = targets[i];
                    t * group.order() + group.mul(x, a)
                })
                .collect()
        })
        .collect();
    shuffle_levels(rng, &mut levels, &mut space_bonds);
    let identity_map: Vec<usize> = group.elements().collect();
    assemble(levels, space_bonds, vec![identity_map; params.depth])
}

fn assemble(
    levels: Vec<GSpace>,
    space_bonds: Vec<Vec<usize>>,
    group_bonds: Vec<Vec<usize>>,
) -> EquivariantTower {
    let spaces = SpaceTower::validate(
        levels.iter().map(|s| s.carrier_size()).collect(),
        space_bonds,
    )
    .expect("generated bonds are in range");
    let groups = GroupTower::validate(
        levels.iter().map(|s| s.group().clone()).collect(),
        group_bonds,
    )
    .expect("generated group bonds are homomorphisms");
    EquivariantTower::validate(spaces, groups, levels, Family::Explicit)
        .expect("generator output is equivariant")
}

/// Random validated constant-tower spec, drawn from three families: affine
/// maps on cyclic carriers (with the matching ν), self-maps of disjoint
/// copies of a regular action, and arbitrary self-maps under the trivial
/// group.
pub fn random_constant_spec(
    rng: &mut ChaCha8Rng,
    max_carrier: usize,
    max_group_order: usize,
) -> ConstantTowerSpec {
    match rng.gen_range(0..3) {
        0 => {
            // X = ℤ/n, G = ℤ/m for m | n acting by x ↦ x + (n/m)g,
            // f(x) = cx + b, ν(g) = cg mod m
            let n = rng.gen_range(2..=max_carrier.max(2));
            let divisors: Vec<usize> =
                (1..=n.min(max_group_order)).filter(|m| n % m == 0).collect();
            let m = *pick(rng, &divisors);
            let c = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let group = Arc::new(FiniteGroup::cyclic(m));
            let stride = n / m;
            let action = (0..m)
                .map(|g| (0..n).map(|x| (x + stride * g) % n).collect())
                .collect();
            let space = GSpace::validate(group.clone(), n, action).expect("translation action");
            let f = (0..n).map(|x| (c * x + b) % n).collect();
            let nu = GroupHom::validate(group.clone(), group, (0..m).map(|g| c * g % m).collect())
                .expect("multiplication is an endomorphism of a cyclic group");
            ConstantTowerSpec::validate(space, f, nu).expect("affine map is ν-equivariant")
        }
        1 => {
            let library: Vec<Arc<FiniteGroup>> = group_library(max_group_order)
                .into_iter()
                .filter(|g| g.order() <= max_carrier)
                .collect();
            let group = pick(rng, &library).clone();
            let copies = rng.gen_range(1..=(max_carrier / group.order()).max(1));
            let n = copies * group.order();
            let action = group
                .elements()
                .map(|g| {
                    (0..n)
                        .map(|p| {
                            let (i, x) = (p / group.order(), p % group.order());
                            i * group.order() + group.mul(g, x)
                        })
                        .collect()
                })
                .collect();
            let space = GSpace::validate(group.clone(), n, action).expect("regular copies");
            let targets: Vec<(usize, usize)> = (0..copies)
                .map(|_| (rng.gen_range(0..copies), rng.gen_range(0..group.order())))
                .collect();
            let f = (0..n)
                .map(|p| {
                    let (i, x) = (p / group.order(), p % group.order());
                    let (t, a) = targets[i];
                    t * group.order() + group.mul(x, a)
                })
                .collect();
            ConstantTowerSpec::with_identity_endo(space, f)
                .expect("copy maps are equivariant")
        }
        _ => {
            let n = rng.gen_range(1..=max_carrier.max(1));
            let space = GSpace::trivial(Arc::new(FiniteGroup::trivial()), n);
            let f = (0..n).map(|_| rng.gen_range(0..n)).collect();
            ConstantTowerSpec::with_identity_endo(space, f)
                .expect("any self-map is equivariant for the trivial group")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub max_carrier: usize,
    pub max_group_order: usize,
    pub depth: usize,
    pub count: usize,
    pub mode: ViolationMode,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            max_carrier: 8,
            max_group_order: 6,
            depth: 3,
            count: 100,
            mode: ViolationMode::None,
        }
    }
}

/// Aggregate of a seeded search run. Identical seed and params produce an
/// identical summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSummary {
    pub seed: u64,
    pub count: usize,
    pub surjective_passes: usize,
    pub injective_passes: usize,
    pub bijective_passes: usize,
    pub hypothesis_passes: usize,
    pub unique_transporter_passes: usize,
    /// Index and report of the first tower whose ψ failed to be bijective
    /// (expected never; kept for defect diagnosis).
    pub first_psi_failure: Option<(usize, Box<PsiReport>)>,
    pub stabilized_bijective: usize,
    pub stabilized_total: usize,
}

/// Generates `count` towers (free-mode and quotient-mode alternating when
/// no violation is requested), verifies each, and also runs the stabilized
/// check on as many random constant specs.
pub fn search(seed: u64, params: &SearchParams) -> SearchSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen_params = GenParams {
        max_carrier: params.max_carrier,
        max_group_order: params.max_group_order,
        depth: params.depth,
        mode: params.mode,
    };
    let mut summary = SearchSummary {
        seed,
        count: params.count,
        surjective_passes: 0,
        injective_passes: 0,
        bijective_passes: 0,
        hypothesis_passes: 0,
        unique_transporter_passes: 0,
        first_psi_failure: None,
        stabilized_bijective: 0,
        stabilized_total: 0,
    };
    for i in 0..params.count {
        let tower = match params.mode {
            ViolationMode::None if i % 2 == 0 => random_free_tower(&mut rng, &gen_params),
            _ => random_tower(&mut rng, &gen_params),
        };
        let report = verify(&tower);
        if report.surjective.ok() {
            summary.surjective_passes += 1;
        }
        if report.injective.ok() {
            summary.injective_passes += 1;
        }
        if report.bijective() {
            summary.bijective_passes += 1;
        } else if summary.first_psi_failure.is_none() {
            summary.first_psi_failure = Some((i, Box::new(report.clone())));
        }
        if report.hypotheses.all_hold() {
            summary.hypothesis_passes += 1;
            if report.unique_transporters.as_ref().is_some_and(|r| r.ok()) {
                summary.unique_transporter_passes += 1;
            }
        }
    }
    for _ in 0..params.count {
        let spec = random_constant_spec(&mut rng, params.max_carrier, params.max_group_order);
        summary.stabilized_total += 1;
        if stabilized_commutation_check(&spec).bijective {
            summary.stabilized_bijective += 1;
        }
    }
    summary
}
