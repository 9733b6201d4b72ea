//! Directed index sets and inverse systems of spaces, groups, and
//! equivariant actions.
//!
//! Two flavors are supported. Finite directed posets carry explicit bonds
//! for every comparable pair and are validated for full coherence; they are
//! definition-level only, since a finite directed poset has a greatest
//! element and its limit is trivial. ℕ-towers store adjacent bonds only, so
//! composites are coherent by construction; these are the nontrivial case
//! and everything downstream (limits, commutation) works with them.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteGroup, GSpace, GroupHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemsError {
    #[error("relation is not a partial order: witness pair ({0}, {1})")]
    NotPartialOrder(usize, usize),
    #[error("index is not directed: ({0}, {1}) has no upper bound")]
    NotDirected(usize, usize),
    #[error("index element out of range in relation pair ({0}, {1})")]
    IndexOutOfRange(usize, usize),
    #[error("missing bond for comparable pair ({0}, {1})")]
    MissingBond(usize, usize),
    #[error("bond at level {0} is not the identity")]
    IdentityBondMissing(usize),
    #[error("composite bonds disagree along chain ({0}, {1}, {2})")]
    CompositionMismatch(usize, usize, usize),
    #[error("bond entry out of range: bond ({low}, {high}) at element {x}")]
    BondOutOfRange { low: usize, high: usize, x: usize },
    #[error("tower shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bond {level} is not equivariant at (g={g}, x={x})")]
    NotEquivariant { level: usize, g: usize, x: usize },
    #[error("self-map is not equivariant at (g={g}, x={x})")]
    SpecNotEquivariant { g: usize, x: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A validated finite directed poset. `leq[a * size + b]` means a ≤ b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Validates a relation given as ≤-pairs. The reflexive closure is taken
    /// before checking antisymmetry, transitivity, and directedness.
    pub fn validate(size: usize, pairs: &[(usize, usize)]) -> Result<Self, SystemsError> {
        let mut leq = vec![false; size * size];
        for a in 0..size {
            leq[a * size + a] = true;
        }
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(SystemsError::IndexOutOfRange(a, b));
            }
            leq[a * size + b] = true;
        }
        for a in 0..size {
            for b in 0..size {
                if a != b && leq[a * size + b] && leq[b * size + a] {
                    return Err(SystemsError::NotPartialOrder(a, b));
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if leq[a * size + b] && leq[b * size + c] && !leq[a * size + c] {
                        return Err(SystemsError::NotPartialOrder(a, c));
                    }
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                if !(0..size).any(|c| leq[a * size + c] && leq[b * size + c]) {
                    return Err(SystemsError::NotDirected(a, b));
                }
            }
        }
        Ok(Poset { size, leq })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.leq(a, b)))
    }

    /// Every finite directed poset has one; exposed for the thread-set
    /// sanity oracle.
    pub fn greatest(&self) -> Option<usize> {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.leq(b, a)))
    }

    fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for low in 0..self.size {
            for high in 0..self.size {
                if self.leq(low, high) {
                    out.push((low, high));
                }
            }
        }
        out
    }
}

/// An inverse system of finite sets over a finite directed poset, with a
/// bond for every comparable pair (low, high) mapping level `high` to
/// level `low`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetSystem {
    index: Poset,
    sizes: Vec<usize>,
    bonds: Vec<((usize, usize), Vec<usize>)>,
}

impl PosetSystem {
    pub fn validate(
        index: Poset,
        sizes: Vec<usize>,
        bonds: Vec<((usize, usize), Vec<usize>)>,
    ) -> Result<Self, SystemsError> {
        if sizes.len() != index.size() {
            return Err(SystemsError::ShapeMismatch(format!(
                "{} levels for an index of size {}",
                sizes.len(),
                index.size()
            )));
        }
        let sys = PosetSystem { index, sizes, bonds };
        for (low, high) in sys.index.comparable_pairs() {
            let bond = sys.bond(low, high).ok_or(SystemsError::MissingBond(low, high))?;
            if bond.len() != sys.sizes[high] {
                return Err(SystemsError::ShapeMismatch(format!(
                    "bond ({low}, {high}) has {} entries for a level of size {}",
                    bond.len(),
                    sys.sizes[high]
                )));
            }
            for (x, &y) in bond.iter().enumerate() {
                if y >= sys.sizes[low] {
                    return Err(SystemsError::BondOutOfRange { low, high, x });
                }
            }
            if low == high && bond.iter().enumerate().any(|(x, &y)| x != y) {
                return Err(SystemsError::IdentityBondMissing(low));
            }
        }
        // composites along any chain α ≤ β ≤ γ agree with the direct bond
        for (low, mid) in sys.index.comparable_pairs() {
            for high in 0..sys.index.size() {
                if !sys.index.leq(mid, high) {
                    continue;
                }
                let direct = sys.bond(low, high).unwrap();
                let upper = sys.bond(mid, high).unwrap();
                let lower = sys.bond(low, mid).unwrap();
                for x in 0..sys.sizes[high] {
                    if lower[upper[x]] != direct[x] {
                        return Err(SystemsError::CompositionMismatch(low, mid, high));
                    }
                }
            }
        }
        Ok(sys)
    }

    pub fn bond(&self, low: usize, high: usize) -> Option<&Vec<usize>> {
        self.bonds.iter().find(|((a, b), _)| *a == low && *b == high).map(|(_, m)| m)
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

/// Same coherence checks with group levels; each bond must additionally be
/// a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetGroupSystem {
    groups: Vec<Arc<FiniteGroup>>,
    system: PosetSystem,
}

impl PosetGroupSystem {
    pub fn validate(
        index: Poset,
        groups: Vec<Arc<FiniteGroup>>,
        bonds: Vec<((usize, usize), Vec<usize>)>,
    ) -> Result<Self, SystemsError> {
        let sizes = groups.iter().map(|g| g.order()).collect();
        let system = PosetSystem::validate(index, sizes, bonds)?;
        for ((low, high), map) in &system.bonds {
            GroupHom::validate(groups[*high].clone(), groups[*low].clone(), map.clone())?;
        }
        Ok(PosetGroupSystem { groups, system })
    }

    pub fn groups(&self) -> &[Arc<FiniteGroup>] {
        &self.groups
    }

    pub fn system(&self) -> &PosetSystem {
        &self.system
    }
}

/// How a tower was produced. Explicit truncations carry no evidence beyond
/// their listed levels, so limit-level claims about them stay depth-only;
/// constant and generated families repeat a known rule, which is what the
/// stabilization arguments need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Explicit,
    Constant,
    Generated,
}

/// ℕ-tower of finite sets: `sizes[k]` is the level-k carrier and `bonds[k]`
/// maps level k+1 down to level k. Only adjacent bonds are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTower {
    sizes: Vec<usize>,
    bonds: Vec<Vec<usize>>,
}

impl SpaceTower {
    pub fn validate(sizes: Vec<usize>, bonds: Vec<Vec<usize>>) -> Result<Self, SystemsError> {
        if sizes.is_empty() {
            return Err(SystemsError::ShapeMismatch("tower has no levels".into()));
        }
        if bonds.len() + 1 != sizes.len() {
            return Err(SystemsError::ShapeMismatch(format!(
                "{} bonds for {} levels",
                bonds.len(),
                sizes.len()
            )));
        }
        for (k, bond) in bonds.iter().enumerate() {
            if bond.len() != sizes[k + 1] {
                return Err(SystemsError::ShapeMismatch(format!(
                    "bond {k} has {} entries for a level of size {}",
                    bond.len(),
                    sizes[k + 1]
                )));
            }
            for (x, &y) in bond.iter().enumerate() {
                if y >= sizes[k] {
                    return Err(SystemsError::BondOutOfRange { low: k, high: k + 1, x });
                }
            }
        }
        Ok(SpaceTower { sizes, bonds })
    }

    pub fn depth(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, level: usize) -> usize {
        self.sizes[level]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Adjacent bond mapping level k+1 to level k.
    pub fn bond(&self, k: usize) -> &[usize] {
        &self.bonds[k]
    }

    pub fn bonds(&self) -> &[Vec<usize>] {
        &self.bonds
    }

    /// Composite bond mapping level `high` down to level `low`.
    pub fn composite(&self, low: usize, high: usize) -> Vec<usize> {
        assert!(low <= high && high <= self.depth());
        let mut map: Vec<usize> = (0..self.sizes[high]).collect();
        for k in (low..high).rev() {
            map = map.into_iter().map(|x| self.bonds[k][x]).collect();
        }
        map
    }

    /// Entries 0..=level of the unique compatible tuple with the given top
    /// entry at `level`.
    pub fn push_down(&self, level: usize, top: usize) -> Vec<usize> {
        let mut entries = vec![0; level + 1];
        entries[level] = top;
        for k in (0..level).rev() {
            entries[k] = self.bonds[k][entries[k + 1]];
        }
        entries
    }
}

/// ℕ-tower of finite groups with homomorphism bonds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTower {
    groups: Vec<Arc<FiniteGroup>>,
    bonds: Vec<GroupHom>,
}

impl GroupTower {
    pub fn validate(
        groups: Vec<Arc<FiniteGroup>>,
        bond_maps: Vec<Vec<usize>>,
    ) -> Result<Self, SystemsError> {
        if groups.is_empty() {
            return Err(SystemsError::ShapeMismatch("tower has no levels".into()));
        }
        if bond_maps.len() + 1 != groups.len() {
            return Err(SystemsError::ShapeMismatch(format!(
                "{} bonds for {} levels",
                bond_maps.len(),
                groups.len()
            )));
        }
        let mut bonds = Vec::with_capacity(bond_maps.len());
        for (k, map) in bond_maps.into_iter().enumerate() {
            bonds.push(GroupHom::validate(groups[k + 1].clone(), groups[k].clone(), map)?);
        }
        Ok(GroupTower { groups, bonds })
    }

    pub fn depth(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, level: usize) -> &Arc<FiniteGroup> {
        &self.groups[level]
    }

    pub fn groups(&self) -> &[Arc<FiniteGroup>] {
        &self.groups
    }

    /// Adjacent bond ν_k^{k+1}.
    pub fn bond(&self, k: usize) -> &GroupHom {
        &self.bonds[k]
    }

    /// Composite homomorphism ν_low^high.
    pub fn composite(&self, low: usize, high: usize) -> GroupHom {
        assert!(low <= high && high <= self.depth());
        let mut hom = GroupHom::identity(self.groups[high].clone());
        for k in (low..high).rev() {
            hom = self.bonds[k].compose(&hom);
        }
        hom
    }

    pub fn as_space_tower(&self) -> SpaceTower {
        SpaceTower::validate(
            self.groups.iter().map(|g| g.order()).collect(),
            self.bonds.iter().map(|b| b.map().to_vec()).collect(),
        )
        .expect("group tower underlies a space tower")
    }

    pub fn push_down(&self, level: usize, top: usize) -> Vec<usize> {
        let mut entries = vec![0; level + 1];
        entries[level] = top;
        for k in (0..level).rev() {
            entries[k] = self.bonds[k].apply(entries[k + 1]);
        }
        entries
    }
}

/// Paired space and group towers with a validated action at every level;
/// each space bond is ν-equivariant for the matching group bond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantTower {
    spaces: SpaceTower,
    groups: GroupTower,
    actions: Vec<GSpace>,
    family: Family,
}

impl EquivariantTower {
    pub fn validate(
        spaces: SpaceTower,
        groups: GroupTower,
        actions: Vec<GSpace>,
        family: Family,
    ) -> Result<Self, SystemsError> {
        if groups.depth() != spaces.depth() || actions.len() != spaces.sizes().len() {
            return Err(SystemsError::ShapeMismatch("level counts differ".into()));
        }
        for (k, act) in actions.iter().enumerate() {
            if act.carrier_size() != spaces.size(k) || act.group() != groups.group(k) {
                return Err(SystemsError::ShapeMismatch(format!(
                    "action at level {k} does not match its carrier or group"
                )));
            }
        }
        // equivariance of adjacent bonds; composites inherit it
        for k in 0..spaces.depth() {
            let pi = spaces.bond(k);
            let nu = groups.bond(k);
            let upper = &actions[k + 1];
            let lower = &actions[k];
            for g in upper.group().elements() {
                for x in 0..upper.carrier_size() {
                    if pi[upper.apply(g, x)] != lower.apply(nu.apply(g), pi[x]) {
                        return Err(SystemsError::NotEquivariant { level: k, g, x });
                    }
                }
            }
        }
        Ok(EquivariantTower { spaces, groups, actions, family })
    }

    pub fn spaces(&self) -> &SpaceTower {
        &self.spaces
    }

    pub fn groups(&self) -> &GroupTower {
        &self.groups
    }

    pub fn action(&self, level: usize) -> &GSpace {
        &self.actions[level]
    }

    pub fn actions(&self) -> &[GSpace] {
        &self.actions
    }

    pub fn depth(&self) -> usize {
        self.spaces.depth()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Truncation to the first `depth + 1` levels, preserving the family tag.
    pub fn truncate(&self, depth: usize) -> EquivariantTower {
        assert!(depth <= self.depth());
        let spaces = SpaceTower::validate(
            self.spaces.sizes()[..=depth].to_vec(),
            self.spaces.bonds()[..depth].to_vec(),
        )
        .expect("truncation of a valid tower");
        let groups = GroupTower::validate(
            self.groups.groups()[..=depth].to_vec(),
            (0..depth).map(|k| self.groups.bond(k).map().to_vec()).collect(),
        )
        .expect("truncation of a valid tower");
        EquivariantTower::validate(spaces, groups, self.actions[..=depth].to_vec(), self.family)
            .expect("truncation of a valid tower")
    }
}

/// One carrier, one equivariant self-map, repeated at every stage. ν
/// defaults to the identity, which is the classical shape; a non-identity
/// group endomorphism is allowed as long as f stays ν-equivariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantTowerSpec {
    action: GSpace,
    self_map: Vec<usize>,
    group_endo: GroupHom,
}

impl ConstantTowerSpec {
    pub fn validate(
        action: GSpace,
        self_map: Vec<usize>,
        group_endo: GroupHom,
    ) -> Result<Self, SystemsError> {
        let n = action.carrier_size();
        if self_map.len() != n {
            return Err(SystemsError::ShapeMismatch(format!(
                "self-map has {} entries for a carrier of size {n}",
                self_map.len()
            )));
        }
        if let Some((x, _)) = self_map.iter().enumerate().find(|&(_, &y)| y >= n) {
            return Err(SystemsError::BondOutOfRange { low: 0, high: 0, x });
        }
        if group_endo.source() != action.group() || group_endo.target() != action.group() {
            return Err(SystemsError::ShapeMismatch(
                "group endomorphism does not match the acting group".into(),
            ));
        }
        for g in action.group().elements() {
            for x in 0..n {
                if self_map[action.apply(g, x)]
                    != action.apply(group_endo.apply(g), self_map[x])
                {
                    return Err(SystemsError::SpecNotEquivariant { g, x });
                }
            }
        }
        Ok(ConstantTowerSpec { action, self_map, group_endo })
    }

    pub fn with_identity_endo(action: GSpace, self_map: Vec<usize>) -> Result<Self, SystemsError> {
        let endo = GroupHom::identity(action.group().clone());
        Self::validate(action, self_map, endo)
    }

    pub fn action(&self) -> &GSpace {
        &self.action
    }

    pub fn self_map(&self) -> &[usize] {
        &self.self_map
    }

    pub fn group_endo(&self) -> &GroupHom {
        &self.group_endo
    }

    /// Nat tower with `depth + 1` identical levels, every adjacent space
    /// bond equal to f and every group bond equal to ν.
    pub fn materialize(&self, depth: usize) -> EquivariantTower {
        let n = self.action.carrier_size();
        let spaces = SpaceTower::validate(vec![n; depth + 1], vec![self.self_map.clone(); depth])
            .expect("constant tower bonds are in range");
        let groups = GroupTower::validate(
            vec![self.action.group().clone(); depth + 1],
            vec![self.group_endo.map().to_vec(); depth],
        )
        .expect("constant tower group bonds are homomorphisms");
        EquivariantTower::validate(
            spaces,
            groups,
            vec![self.action.clone(); depth + 1],
            Family::Constant,
        )
        .expect("spec validation covers equivariance")
    }
}

/// Finite circle analogue of the solenoid: levels ℤ/(2·pᵏ) under mod
/// reduction, with the free involution x ↦ x + pᵏ at level k.
pub fn solenoid(p: usize, depth: usize) -> EquivariantTower {
    assert!(p >= 3 && p % 2 == 1, "base must be odd and at least 3");
    let sizes: Vec<usize> = (0..=depth).map(|k| 2 * p.pow(k as u32)).collect();
    let bonds: Vec<Vec<usize>> = (0..depth)
        .map(|k| (0..sizes[k + 1]).map(|x| x % sizes[k]).collect())
        .collect();
    let spaces = SpaceTower::validate(sizes.clone(), bonds).unwrap();
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let groups =
        GroupTower::validate(vec![z2.clone(); depth + 1], vec![vec![0, 1]; depth]).unwrap();
    let actions = (0..=depth)
        .map(|k| {
            let n = sizes[k];
            let shift = p.pow(k as u32);
            let action = vec![
                (0..n).collect(),
                (0..n).map(|x| (x + shift) % n).collect(),
            ];
            GSpace::validate(z2.clone(), n, action).unwrap()
        })
        .collect();
    EquivariantTower::validate(spaces, groups, actions, Family::Generated)
        .expect("solenoid levels are equivariant")
}

/// Levels ℤ/pᵏ under mod reduction with the negation involution x ↦ −x.
/// Not free (0 is fixed), which makes it the standard exhibit that the
/// freeness hypothesis is sufficient but not necessary.
pub fn negation_tower(p: usize, depth: usize) -> EquivariantTower {
    assert!(p >= 3 && p % 2 == 1, "base must be odd and at least 3");
    let sizes: Vec<usize> = (0..=depth).map(|k| p.pow(k as u32)).collect();
    let bonds: Vec<Vec<usize>> = (0..depth)
        .map(|k| (0..sizes[k + 1]).map(|x| x % sizes[k]).collect())
        .collect();
    let spaces = SpaceTower::validate(sizes.clone(), bonds).unwrap();
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let groups =
        GroupTower::validate(vec![z2.clone(); depth + 1], vec![vec![0, 1]; depth]).unwrap();
    let actions = (0..=depth)
        .map(|k| {
            let n = sizes[k];
            let action = vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()];
            GSpace::validate(z2.clone(), n, action).unwrap()
        })
        .collect();
    EquivariantTower::validate(spaces, groups, actions, Family::Generated)
        .expect("negation commutes with reduction")
}
