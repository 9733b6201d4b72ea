//! Finite groups, homomorphisms, group actions, orbits, and transporter sets.
//!
//! Groups are multiplication tables over element indices `0..order`. The
//! identity is discovered during validation, not declared; element 0 carries
//! no special status. All axiom checks are exhaustive, and every error names
//! the first witness in lexicographic index order.

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("table is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table is not closed: entry at ({g}, {h}) is {entry}, out of range")]
    NotClosed { g: usize, h: usize, entry: usize },
    #[error("no two-sided identity element exists")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("not a homomorphism: map({g}·{h}) differs from map({g})·map({h})")]
    NotHomomorphism { g: usize, h: usize },
    #[error("hom map has wrong length or out-of-range entry at {0}")]
    BadHomMap(usize),
    #[error("action table shape mismatch at group element {0}")]
    BadActionShape(usize),
    #[error("action entry out of range at ({g}, {x})")]
    ActionOutOfRange { g: usize, x: usize },
    #[error("identity axiom fails: e·{0} != {0}")]
    IdentityAxiomFails(usize),
    #[error("compatibility fails at (g={g}, h={h}, x={x})")]
    CompatibilityFails { g: usize, h: usize, x: usize },
    #[error("action of element {0} is not a bijection of the carrier")]
    ActionNotBijective(usize),
}

/// A finite group given by its multiplication table. `table[g][h]` is the
/// index of g·h. Identity and inverses are derived by [`FiniteGroup::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a raw multiplication table: closure, a unique two-sided
    /// identity, two-sided inverses, and associativity over all triples.
    pub fn validate(table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let order = table.len();
        if order == 0 {
            return Err(AlgebraError::NoIdentity);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(AlgebraError::NotSquare { row, len: r.len(), expected: order });
            }
        }
        for g in 0..order {
            for h in 0..order {
                let entry = table[g][h];
                if entry >= order {
                    return Err(AlgebraError::NotClosed { g, h, entry });
                }
            }
        }
        let mut identity = None;
        for e in 0..order {
            if (0..order).all(|x| table[e][x] == x && table[x][e] == x) {
                identity = Some(e);
                break;
            }
        }
        let identity = identity.ok_or(AlgebraError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(order);
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(AlgebraError::NoInverse(g))?;
            inverse.push(inv);
        }
        for g in 0..order {
            for h in 0..order {
                for k in 0..order {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(AlgebraError::NotAssociative(g, h, k));
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The trivial one-element group.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group ℤ/n with addition mod n; element i is the residue i.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::validate(table).expect("cyclic table is a group")
    }

    /// Direct product; element index is `a * other.order + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let n = self.order;
        let m = other.order;
        let table = (0..n * m)
            .map(|i| {
                let (a, b) = (i / m, i % m);
                (0..n * m)
                    .map(|j| {
                        let (c, d) = (j / m, j % m);
                        self.mul(a, c) * m + other.mul(b, d)
                    })
                    .collect()
            })
            .collect();
        Self::validate(table).expect("product table is a group")
    }

    /// Closes a set of permutations of `0..degree` under composition and
    /// returns the resulting permutation group with its elements. The
    /// identity permutation is always included.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> (Self, Vec<Vec<usize>>) {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![id];
        let mut frontier = generators.to_vec();
        while let Some(p) = frontier.pop() {
            assert_eq!(p.len(), degree);
            if elems.contains(&p) {
                continue;
            }
            elems.push(p.clone());
            for q in elems.clone() {
                // (p ∘ q)(x) = p[q[x]]
                let pq: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                let qp: Vec<usize> = (0..degree).map(|x| q[p[x]]).collect();
                frontier.push(pq);
                frontier.push(qp);
            }
        }
        elems.sort();
        let table = elems
            .iter()
            .map(|p| {
                elems
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                        elems.iter().position(|r| *r == pq).expect("closed under composition")
                    })
                    .collect()
            })
            .collect();
        (Self::validate(table).expect("permutation composition is a group"), elems)
    }

    /// All subgroups, each as a sorted element list. Brute force over element
    /// subsets seeded by cyclic closure; intended for small groups only.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = vec![vec![self.identity]];
        let mut frontier = found.clone();
        while let Some(h) = frontier.pop() {
            for g in self.elements() {
                if h.contains(&g) {
                    continue;
                }
                let extended = self.closure(h.iter().copied().chain([g]));
                if !found.contains(&extended) {
                    found.push(extended.clone());
                    frontier.push(extended);
                }
            }
        }
        found.sort();
        found
    }

    /// Subgroup generated by the given elements, as a sorted element list.
    pub fn closure(&self, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut elems = vec![self.identity];
        let mut frontier: Vec<usize> = gens.into_iter().collect();
        while let Some(g) = frontier.pop() {
            if elems.contains(&g) {
                continue;
            }
            elems.push(g);
            for &h in elems.clone().iter() {
                frontier.push(self.mul(g, h));
                frontier.push(self.mul(h, g));
                frontier.push(self.inv(g));
            }
        }
        elems.sort();
        elems
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        self.elements().all(|g| {
            subgroup.iter().all(|&n| {
                let conj = self.mul(self.mul(g, n), self.inv(g));
                subgroup.contains(&conj)
            })
        })
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.subgroups().into_iter().filter(|h| self.is_normal(h)).collect()
    }

    /// Quotient by a normal subgroup. Returns the quotient group (cosets
    /// numbered by minimal representative order) and the projection map.
    pub fn quotient(&self, normal: &[usize]) -> (FiniteGroup, Vec<usize>) {
        debug_assert!(self.is_normal(normal));
        let mut coset_of = vec![usize::MAX; self.order];
        let mut count = 0;
        for g in self.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &n in normal {
                coset_of[self.mul(g, n)] = count;
            }
            count += 1;
        }
        let mut reps = vec![usize::MAX; count];
        for g in (0..self.order).rev() {
            reps[coset_of[g]] = g;
        }
        let table = (0..count)
            .map(|a| (0..count).map(|b| coset_of[self.mul(reps[a], reps[b])]).collect())
            .collect();
        let q = FiniteGroup::validate(table).expect("coset table is a group");
        (q, coset_of)
    }
}

/// A validated group homomorphism, stored with shared references to its
/// source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    /// Validates multiplicativity over all pairs; identity preservation
    /// follows but is asserted anyway.
    pub fn validate(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        if map.len() != source.order() {
            return Err(AlgebraError::BadHomMap(map.len()));
        }
        for (g, &m) in map.iter().enumerate() {
            if m >= target.order() {
                return Err(AlgebraError::BadHomMap(g));
            }
        }
        for g in source.elements() {
            for h in source.elements() {
                if map[source.mul(g, h)] != target.mul(map[g], map[h]) {
                    return Err(AlgebraError::NotHomomorphism { g, h });
                }
            }
        }
        assert_eq!(map[source.identity()], target.identity());
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = (0..group.order()).collect();
        GroupHom { source: group.clone(), target: group, map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// self ∘ other.
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        debug_assert_eq!(other.target.order(), self.source.order());
        GroupHom {
            source: other.source.clone(),
            target: self.target.clone(),
            map: other.map.iter().map(|&g| self.map[g]).collect(),
        }
    }

    /// `None` when injective, otherwise the least non-identity kernel element.
    pub fn kernel_witness(&self) -> Option<usize> {
        let e = self.source.identity();
        self.source
            .elements()
            .find(|&g| g != e && self.map[g] == self.target.identity())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_witness().is_none()
    }
}

/// A finite carrier set with a validated left action of a finite group.
/// `action[g][x]` is the index of g·x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSpace {
    group: Arc<FiniteGroup>,
    carrier_size: usize,
    action: Vec<Vec<usize>>,
}

impl GSpace {
    /// Validates both action axioms over all tuples, then asserts that each
    /// `action(g, ·)` is a bijection (derivable, checked directly).
    pub fn validate(
        group: Arc<FiniteGroup>,
        carrier_size: usize,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        if action.len() != group.order() {
            return Err(AlgebraError::BadActionShape(action.len()));
        }
        for (g, row) in action.iter().enumerate() {
            if row.len() != carrier_size {
                return Err(AlgebraError::BadActionShape(g));
            }
            for (x, &y) in row.iter().enumerate() {
                if y >= carrier_size {
                    return Err(AlgebraError::ActionOutOfRange { g, x });
                }
            }
        }
        let e = group.identity();
        for x in 0..carrier_size {
            if action[e][x] != x {
                return Err(AlgebraError::IdentityAxiomFails(x));
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                for x in 0..carrier_size {
                    if action[g][action[h][x]] != action[group.mul(g, h)][x] {
                        return Err(AlgebraError::CompatibilityFails { g, h, x });
                    }
                }
            }
        }
        for g in group.elements() {
            let mut seen = vec![false; carrier_size];
            for x in 0..carrier_size {
                seen[action[g][x]] = true;
            }
            if seen.contains(&false) {
                return Err(AlgebraError::ActionNotBijective(g));
            }
        }
        Ok(GSpace { group, carrier_size, action })
    }

    /// Trivial action of `group` on `n` points.
    pub fn trivial(group: Arc<FiniteGroup>, n: usize) -> Self {
        let action = vec![(0..n).collect(); group.order()];
        GSpace::validate(group, n, action).expect("trivial action is valid")
    }

    /// A group acting on itself by left translation.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let action = group.table().to_vec();
        GSpace::validate(group.clone(), group.order(), action)
            .expect("left translation is a valid action")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// `None` when the action is free; otherwise the first (g, x) in index
    /// order with g ≠ e and g·x = x.
    pub fn freeness_witness(&self) -> Option<(usize, usize)> {
        let e = self.group.identity();
        for g in self.group.elements() {
            if g == e {
                continue;
            }
            for x in 0..self.carrier_size {
                if self.action[g][x] == x {
                    return Some((g, x));
                }
            }
        }
        None
    }

    pub fn is_free(&self) -> bool {
        self.freeness_witness().is_none()
    }

    /// Orbit partition via union-find over all (g, x) pairs. Class ids are
    /// assigned in order of minimal representatives.
    pub fn orbits(&self) -> OrbitPartition {
        let mut uf = UnionFind::new(self.carrier_size);
        for g in self.group.elements() {
            for x in 0..self.carrier_size {
                uf.union(x, self.action[g][x]);
            }
        }
        OrbitPartition::from_union_find(&mut uf)
    }

    /// The transporter set { g : g·x = y }, in element index order.
    pub fn transporter(&self, x: usize, y: usize) -> Vec<usize> {
        self.group.elements().filter(|&g| self.action[g][x] == y).collect()
    }
}

/// Partition of a carrier into orbit classes, ids ordered by minimal
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    class_of: Vec<usize>,
    representatives: Vec<usize>,
}

impl OrbitPartition {
    fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.len();
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for x in 0..n {
            let root = uf.find(x);
            if class_of[root] == usize::MAX {
                class_of[root] = representatives.len();
                representatives.push(x);
            }
            class_of[x] = class_of[root];
        }
        OrbitPartition { class_of, representatives }
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, class: usize) -> usize {
        self.representatives[class]
    }

    pub fn carrier_size(&self) -> usize {
        self.class_of.len()
    }

    /// Members of a class, in index order.
    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len()).filter(|&x| self.class_of[x] == class).collect()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // keep the smaller root so representatives stay minimal
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[hi] = lo;
        }
    }

    pub fn partition(mut self) -> OrbitPartition {
        OrbitPartition::from_union_find(&mut self)
    }
}
