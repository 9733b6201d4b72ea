//! Inverse limits as threads: enumeration, nonemptiness, the universal
//! property, eventual images, limit-group arithmetic, the componentwise
//! action, and orbit equivalence of threads via transporter towers.
//!
//! All bonds are total functions on finite carriers, so every level-d
//! element pushes down to a unique compatible tuple. Threads are therefore
//! enumerated and canonicalized by their top entry; nonemptiness is a
//! push-down, not a search.

use thiserror::Error;

use crate::systems::{EquivariantTower, Family, GroupTower, SpaceTower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitsError {
    #[error("depth {requested} exceeds available depth {available}")]
    DepthUnavailable { requested: usize, available: usize },
    #[error("level {0} has an empty carrier")]
    EmptyLevel(usize),
    #[error("cone legs do not commute: levels ({low}, {high}) at point {point}")]
    NotACone { low: usize, high: usize, point: usize },
    #[error("thread does not belong to this tower")]
    TowerMismatch,
    #[error("threads have different depths: {0} vs {1}")]
    DepthMismatch(usize, usize),
}

/// A depth-d compatible tuple: `entries[k]` lives in the level-k carrier and
/// `entries[k] = bond_k(entries[k + 1])` for all k below the depth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Thread {
    entries: Vec<usize>,
}

impl Thread {
    pub fn new(entries: Vec<usize>) -> Self {
        assert!(!entries.is_empty());
        Thread { entries }
    }

    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, level: usize) -> usize {
        self.entries[level]
    }

    pub fn top(&self) -> usize {
        *self.entries.last().unwrap()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// Checks the defining compatibility of a thread against a space tower.
pub fn is_compatible(tower: &SpaceTower, thread: &Thread) -> bool {
    if thread.depth() > tower.depth() {
        return false;
    }
    for (k, &x) in thread.entries.iter().enumerate() {
        if x >= tower.size(k) {
            return false;
        }
    }
    (0..thread.depth()).all(|k| tower.bond(k)[thread.entry(k + 1)] == thread.entry(k))
}

fn check_member(tower: &SpaceTower, thread: &Thread, depth: usize) -> Result<(), LimitsError> {
    if thread.depth() != depth {
        return Err(LimitsError::DepthMismatch(thread.depth(), depth));
    }
    if !is_compatible(tower, thread) {
        return Err(LimitsError::TowerMismatch);
    }
    Ok(())
}

/// All compatible tuples at the given depth, ordered by top-level entry.
/// Total bonds make every tuple the push-down of its top entry.
pub fn enumerate_threads(tower: &SpaceTower, depth: usize) -> Result<Vec<Thread>, LimitsError> {
    if depth > tower.depth() {
        return Err(LimitsError::DepthUnavailable { requested: depth, available: tower.depth() });
    }
    Ok((0..tower.size(depth)).map(|top| Thread::new(tower.push_down(depth, top))).collect())
}

/// The lexicographically least thread; `EmptyLevel` when some carrier is
/// empty (finite analogue of limit nonemptiness).
pub fn find_thread(tower: &SpaceTower, depth: usize) -> Result<Thread, LimitsError> {
    if depth > tower.depth() {
        return Err(LimitsError::DepthUnavailable { requested: depth, available: tower.depth() });
    }
    if let Some(k) = (0..=depth).find(|&k| tower.size(k) == 0) {
        return Err(LimitsError::EmptyLevel(k));
    }
    Ok(Thread::new(tower.push_down(depth, 0)))
}

/// A finite set with a map into every tower level: `legs[k][s]` is ψ_k(s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub size: usize,
    pub legs: Vec<Vec<usize>>,
}

/// The mediating map of the universal property, with its uniqueness
/// certificate: each point goes to the thread of its leg values, and any
/// assignment with the same projections is pointwise equal to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediatingMap {
    pub threads: Vec<Thread>,
}

impl MediatingMap {
    /// A competing assignment agrees levelwise iff it is pointwise equal;
    /// this is the depth-d uniqueness statement made checkable.
    pub fn certifies_unique(&self, competing: &[Thread]) -> bool {
        competing == self.threads.as_slice()
    }
}

/// Validates cone compatibility (π ∘ ψ_{k+1} = ψ_k) and produces the
/// mediating map into depth-d threads.
pub fn mediating_map(
    cone: &Cone,
    tower: &SpaceTower,
    depth: usize,
) -> Result<MediatingMap, LimitsError> {
    if depth > tower.depth() || cone.legs.len() != depth + 1 {
        return Err(LimitsError::DepthUnavailable { requested: depth, available: tower.depth() });
    }
    for k in 0..depth {
        for s in 0..cone.size {
            if tower.bond(k)[cone.legs[k + 1][s]] != cone.legs[k][s] {
                return Err(LimitsError::NotACone { low: k, high: k + 1, point: s });
            }
        }
    }
    let threads = (0..cone.size)
        .map(|s| Thread::new((0..=depth).map(|k| cone.legs[k][s]).collect()))
        .collect();
    Ok(MediatingMap { threads })
}

/// The decreasing intersection of bond images at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventualImage {
    pub level: usize,
    pub elements: Vec<usize>,
    pub exact: bool,
}

/// Intersection of images of the composite bonds from levels k..=horizon
/// into level k. Exactness is only claimed when two consecutive horizons
/// agree AND the family repeats a single bond (constant or generated), where
/// the chain provably stabilizes; explicit truncations report a superset.
pub fn eventual_image(
    tower: &EquivariantTower,
    level: usize,
    horizon: usize,
) -> Result<EventualImage, LimitsError> {
    let spaces = tower.spaces();
    if level > horizon || horizon > spaces.depth() {
        return Err(LimitsError::DepthUnavailable {
            requested: horizon,
            available: spaces.depth(),
        });
    }
    let mut current: Vec<bool> = vec![true; spaces.size(level)];
    let mut stabilized = false;
    for m in level..=horizon {
        let composite = spaces.composite(level, m);
        let mut image = vec![false; spaces.size(level)];
        for &y in &composite {
            image[y] = true;
        }
        let next: Vec<bool> =
            current.iter().zip(&image).map(|(&a, &b)| a && b).collect();
        stabilized = m > level && next == current;
        current = next;
    }
    let elements = current
        .iter()
        .enumerate()
        .filter_map(|(x, &keep)| keep.then_some(x))
        .collect();
    let exact = stabilized && tower.family() != Family::Explicit;
    Ok(EventualImage { level, elements, exact })
}

/// Stable image of a self-map on `0..n`: iterate f on the full carrier until
/// the image chain stops shrinking. Always exact; the chain stabilizes
/// within n steps.
pub fn stable_image(f: &[usize]) -> Vec<usize> {
    let n = f.len();
    let mut current: Vec<bool> = vec![true; n];
    loop {
        let mut next = vec![false; n];
        for x in 0..n {
            if current[x] {
                next[f[x]] = true;
            }
        }
        if next == current {
            return (0..n).filter(|&x| current[x]).collect();
        }
        current = next;
    }
}

/// Componentwise product of two compatible group threads; bonds being
/// homomorphisms keeps the result compatible, which is re-asserted.
pub fn limit_group_multiply(
    tower: &GroupTower,
    a: &Thread,
    b: &Thread,
) -> Result<Thread, LimitsError> {
    let spaces = tower.as_space_tower();
    check_member(&spaces, a, a.depth())?;
    check_member(&spaces, b, a.depth())?;
    let entries = (0..=a.depth())
        .map(|k| tower.group(k).mul(a.entry(k), b.entry(k)))
        .collect();
    let product = Thread::new(entries);
    debug_assert!(is_compatible(&spaces, &product));
    Ok(product)
}

/// Componentwise inverse of a compatible group thread.
pub fn limit_group_inverse(tower: &GroupTower, a: &Thread) -> Result<Thread, LimitsError> {
    let spaces = tower.as_space_tower();
    check_member(&spaces, a, a.depth())?;
    let entries = (0..=a.depth()).map(|k| tower.group(k).inv(a.entry(k))).collect();
    let inverse = Thread::new(entries);
    debug_assert!(is_compatible(&spaces, &inverse));
    Ok(inverse)
}

/// The identity thread of a group tower at the given depth.
pub fn identity_thread(tower: &GroupTower, depth: usize) -> Thread {
    Thread::new((0..=depth).map(|k| tower.group(k).identity()).collect())
}

/// Componentwise action (g_k)·(x_k) = (g_k·x_k); ν-equivariance of the
/// bonds keeps the result compatible, which is re-asserted.
pub fn act_on_thread(
    tower: &EquivariantTower,
    g: &Thread,
    x: &Thread,
) -> Result<Thread, LimitsError> {
    check_member(&tower.groups().as_space_tower(), g, x.depth())?;
    check_member(tower.spaces(), x, x.depth())?;
    let entries = (0..=x.depth())
        .map(|k| tower.action(k).apply(g.entry(k), x.entry(k)))
        .collect();
    let moved = Thread::new(entries);
    debug_assert!(is_compatible(tower.spaces(), &moved));
    Ok(moved)
}

/// Per-level transporter sets T_k = { g : g·x_k = y_k } along a pair of
/// threads. The group bonds restrict to these: ν_k(T_{k+1}) ⊆ T_k.
pub fn transporter_tower(
    tower: &EquivariantTower,
    x: &Thread,
    y: &Thread,
) -> Result<Vec<Vec<usize>>, LimitsError> {
    check_member(tower.spaces(), x, x.depth())?;
    check_member(tower.spaces(), y, x.depth())?;
    Ok((0..=x.depth())
        .map(|k| tower.action(k).transporter(x.entry(k), y.entry(k)))
        .collect())
}

/// Scope of an orbit-equivalence verdict: at the stated depth only, or as a
/// claim about the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictScope {
    Depth,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitDecision {
    /// A compatible transporter thread exists; the witness is the
    /// lexicographically-from-the-top least one.
    Yes(Thread),
    /// Some level transporter is empty.
    No { level: usize },
    /// A witness exists at this depth, but the tower is an explicit
    /// truncation, so no limit-level claim is certified.
    YesAtDepthOnly(Thread),
}

/// Decides whether a compatible (g_k) with g_k·x_k = y_k exists, via the
/// transporter tower: if every T_k is nonempty, the least top transporter
/// pushes down to a witness (pushes stay in T_k by equivariance).
pub fn orbit_equivalent(
    tower: &EquivariantTower,
    x: &Thread,
    y: &Thread,
    scope: VerdictScope,
) -> Result<OrbitDecision, LimitsError> {
    let transporters = transporter_tower(tower, x, y)?;
    if let Some(level) = transporters.iter().position(|t| t.is_empty()) {
        return Ok(OrbitDecision::No { level });
    }
    let depth = x.depth();
    let top = transporters[depth][0];
    let witness = Thread::new(tower.groups().push_down(depth, top));
    for k in 0..=depth {
        debug_assert!(transporters[k].contains(&witness.entry(k)));
    }
    match scope {
        VerdictScope::Depth => Ok(OrbitDecision::Yes(witness)),
        VerdictScope::Limit => match tower.family() {
            Family::Explicit => Ok(OrbitDecision::YesAtDepthOnly(witness)),
            Family::Constant | Family::Generated => Ok(OrbitDecision::Yes(witness)),
        },
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{FiniteGroup, GSpace};
    use crate::systems::{solenoid, ConstantTowerSpec, GroupTower, SpaceTower};

    #[test]
    fn solenoid_thread_count_at_depth_two() {
        let t = solenoid(3, 2);
        let threads = enumerate_threads(t.spaces(), 2).unwrap();
        assert_eq!(threads.len(), 18);
        for th in &threads {
            assert!(is_compatible(t.spaces(), th));
        }
    }

    #[test]
    fn single_level_tower_threads() {
        let t = SpaceTower::validate(vec![4], vec![]).unwrap();
        assert_eq!(enumerate_threads(&t, 0).unwrap().len(), 4);
    }

    #[test]
    fn constant_zero_bond_forces_bottom_entry() {
        let t = SpaceTower::validate(vec![2, 2], vec![vec![0, 0]]).unwrap();
        let threads = enumerate_threads(&t, 1).unwrap();
        assert_eq!(threads.len(), 2);
        assert_eq!(threads[0].entries(), &[0, 0]);
        assert_eq!(threads[1].entries(), &[0, 1]);
    }

    #[test]
    fn find_thread_is_all_zeros_on_solenoid() {
        let t = solenoid(3, 3);
        let th = find_thread(t.spaces(), 3).unwrap();
        assert_eq!(th.entries(), &[0, 0, 0, 0]);
    }

    #[test]
    fn empty_level_is_reported() {
        let t = SpaceTower::validate(vec![0], vec![]).unwrap();
        assert_eq!(find_thread(&t, 0).unwrap_err(), LimitsError::EmptyLevel(0));
    }

    #[test]
    fn singleton_cone_mediates_to_zero_thread() {
        let t = solenoid(3, 2);
        let cone = Cone { size: 1, legs: vec![vec![0], vec![0], vec![0]] };
        let m = mediating_map(&cone, t.spaces(), 2).unwrap();
        assert_eq!(m.threads[0].entries(), &[0, 0, 0]);
    }

    #[test]
    fn tautological_cone_recovers_thread_enumeration() {
        let t = solenoid(3, 2);
        let spaces = t.spaces();
        let legs: Vec<Vec<usize>> = (0..=2).map(|k| spaces.composite(k, 2)).collect();
        let cone = Cone { size: spaces.size(2), legs };
        let m = mediating_map(&cone, spaces, 2).unwrap();
        assert_eq!(m.threads, enumerate_threads(spaces, 2).unwrap());
        assert!(m.certifies_unique(&m.threads));
    }

    #[test]
    fn mutated_cone_is_rejected() {
        let t = solenoid(3, 1);
        let spaces = t.spaces();
        let mut legs: Vec<Vec<usize>> = (0..=1).map(|k| spaces.composite(k, 1)).collect();
        legs[0][3] = (legs[0][3] + 1) % 2;
        let cone = Cone { size: spaces.size(1), legs };
        let err = mediating_map(&cone, spaces, 1).unwrap_err();
        assert_eq!(err, LimitsError::NotACone { low: 0, high: 1, point: 3 });
    }

    #[test]
    fn bijective_bond_has_full_eventual_image() {
        let z1 = Arc::new(FiniteGroup::trivial());
        let space = GSpace::trivial(z1, 5);
        let f = (0..5).map(|x| (x + 1) % 5).collect();
        let spec = ConstantTowerSpec::with_identity_endo(space, f).unwrap();
        let tower = spec.materialize(6);
        let img = eventual_image(&tower, 0, 6).unwrap();
        assert_eq!(img.elements, vec![0, 1, 2, 3, 4]);
        assert!(img.exact);
    }

    #[test]
    fn stable_image_of_collapsing_map() {
        // 0↦1, 1↦1, 2↦3, 3↦3: image stabilizes at {1, 3} after one step
        assert_eq!(stable_image(&[1, 1, 3, 3]), vec![1, 3]);
    }

    #[test]
    fn stable_image_of_times_three_mod_eighteen() {
        let f: Vec<usize> = (0..18).map(|x| (3 * x) % 18).collect();
        assert_eq!(stable_image(&f), vec![0, 9]);
    }

    #[test]
    fn explicit_tower_image_is_not_exact() {
        let bonds = vec![vec![1, 1, 3, 3], vec![1, 1, 3, 3]];
        let spaces = SpaceTower::validate(vec![4, 4, 4], bonds).unwrap();
        let z1 = Arc::new(FiniteGroup::trivial());
        let groups = GroupTower::validate(vec![z1.clone(); 3], vec![vec![0]; 2]).unwrap();
        let actions = (0..3).map(|_| GSpace::trivial(z1.clone(), 4)).collect();
        let t = crate::systems::EquivariantTower::validate(
            spaces,
            groups,
            actions,
            crate::systems::Family::Explicit,
        )
        .unwrap();
        let img = eventual_image(&t, 0, 2).unwrap();
        assert_eq!(img.elements, vec![1, 3]);
        assert!(!img.exact);
    }

    #[test]
    fn involution_threads_square_to_identity() {
        let t = solenoid(3, 2);
        let gt = t.groups();
        let one = Thread::new(vec![1, 1, 1]);
        let sq = limit_group_multiply(gt, &one, &one).unwrap();
        assert_eq!(sq, identity_thread(gt, 2));
        assert_eq!(limit_group_inverse(gt, &one).unwrap(), one);
    }

    #[test]
    fn product_in_twisted_z4_tower_stays_compatible() {
        // ℤ/4 ← ℤ/4 with ν = ×3 (an automorphism)
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let nu = vec![0, 3, 2, 1];
        let gt = GroupTower::validate(vec![z4.clone(), z4], vec![nu]).unwrap();
        let spaces = gt.as_space_tower();
        for a_top in 0..4 {
            for b_top in 0..4 {
                let a = Thread::new(spaces.push_down(1, a_top));
                let b = Thread::new(spaces.push_down(1, b_top));
                let p = limit_group_multiply(&gt, &a, &b).unwrap();
                assert!(is_compatible(&spaces, &p));
            }
        }
    }

    #[test]
    fn involution_thread_moves_zero_thread() {
        let t = solenoid(3, 2);
        let g = Thread::new(vec![1, 1, 1]);
        let x = Thread::new(vec![0, 0, 0]);
        let moved = act_on_thread(&t, &g, &x).unwrap();
        assert_eq!(moved.entries(), &[1, 3, 9]);
        let back = act_on_thread(&t, &g, &moved).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn identity_thread_acts_as_identity() {
        let t = solenoid(3, 2);
        let e = identity_thread(t.groups(), 2);
        for th in enumerate_threads(t.spaces(), 2).unwrap() {
            assert_eq!(act_on_thread(&t, &e, &th).unwrap(), th);
        }
    }

    #[test]
    fn orbit_equivalence_on_solenoid() {
        let t = solenoid(3, 2);
        let x = Thread::new(vec![0, 0, 0]);
        let y = Thread::new(vec![1, 3, 9]);
        match orbit_equivalent(&t, &x, &y, VerdictScope::Depth).unwrap() {
            OrbitDecision::Yes(w) => assert_eq!(w.entries(), &[1, 1, 1]),
            other => panic!("expected Yes, got {other:?}"),
        }
        let transporters = transporter_tower(&t, &x, &y).unwrap();
        assert!(transporters.iter().all(|t| t == &vec![1]));
    }

    #[test]
    fn orbit_equivalence_of_a_thread_with_itself() {
        let t = solenoid(3, 2);
        let x = Thread::new(vec![1, 1, 1]);
        match orbit_equivalent(&t, &x, &x, VerdictScope::Depth).unwrap() {
            OrbitDecision::Yes(w) => assert_eq!(w, identity_thread(t.groups(), 2)),
            other => panic!("expected Yes, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_orbits_give_no() {
        // two parallel ℤ/2 translation orbits on 4 points, constant tower
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let action = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]];
        let space = GSpace::validate(z2, 4, action).unwrap();
        let spec = ConstantTowerSpec::with_identity_endo(space, vec![0, 1, 2, 3]).unwrap();
        let t = spec.materialize(2);
        let x = Thread::new(vec![0, 0, 0]);
        let y = Thread::new(vec![2, 2, 2]);
        assert_eq!(
            orbit_equivalent(&t, &x, &y, VerdictScope::Depth).unwrap(),
            OrbitDecision::No { level: 0 }
        );
    }

    #[test]
    fn explicit_truncation_gets_depth_only_limit_verdict() {
        // rebuild the solenoid as an explicit tower and ask for a limit verdict
        let s = solenoid(3, 2);
        let t = crate::systems::EquivariantTower::validate(
            s.spaces().clone(),
            s.groups().clone(),
            s.actions().to_vec(),
            crate::systems::Family::Explicit,
        )
        .unwrap();
        let x = Thread::new(vec![0, 0, 0]);
        let y = Thread::new(vec![1, 3, 9]);
        assert!(matches!(
            orbit_equivalent(&t, &x, &y, VerdictScope::Limit).unwrap(),
            OrbitDecision::YesAtDepthOnly(_)
        ));
        assert!(matches!(
            orbit_equivalent(&s, &x, &y, VerdictScope::Limit).unwrap(),
            OrbitDecision::Yes(_)
        ));
    }
}
