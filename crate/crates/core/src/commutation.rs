//! Orbit towers and the commutation map ψ from (limit of spaces)/(limit of
//! groups) to the limit of the orbit spaces, with machine-checkable
//! evidence in both directions.
//!
//! ψ sends the class of a thread to the thread of its levelwise classes.
//! Surjectivity is witnessed by lifting every orbit thread; injectivity is
//! decided via transporter towers, which is total, while the classical
//! certificate path (freeness at the bottom level plus injective group
//! bonds into it) is retained as `certify_hypotheses` and
//! `unique_transporter_check`. The two must agree whenever the hypotheses
//! hold.

use thiserror::Error;

use crate::algebra::{OrbitPartition, UnionFind};
use crate::limits::{
    enumerate_threads, orbit_equivalent, stable_image, transporter_tower, OrbitDecision, Thread,
    VerdictScope,
};
use crate::systems::{ConstantTowerSpec, EquivariantTower, Family, SpaceTower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommutationError {
    #[error("hypotheses not certified; run certify_hypotheses first")]
    HypothesesNotCertified,
    #[error("thread does not belong to this tower")]
    TowerMismatch,
}

/// Replayable evidence for a failed check. Feeding a witness back into the
/// corresponding validator reproduces the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    NotFree { level: usize, g: usize, x: usize },
    NotInjectiveHom { level: usize, g: usize },
    LiftFailure { orbit_thread: Thread, level: usize },
    TransporterEmpty { x: Thread, y: Thread, level: usize },
}

/// The induced inverse system of orbit spaces: per-level partitions and
/// bonds acting on class ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTower {
    partitions: Vec<OrbitPartition>,
    bonds: Vec<Vec<usize>>,
}

/// Passes an equivariant tower to orbit spaces. The induced bond
/// π̄(x̄) = π(x)-bar is well-defined because the bonds are equivariant;
/// this is asserted over every class member rather than assumed, and a
/// violation aborts since it can only mean a validation bug.
pub fn orbit_tower(tower: &EquivariantTower) -> OrbitTower {
    let partitions: Vec<OrbitPartition> =
        (0..=tower.depth()).map(|k| tower.action(k).orbits()).collect();
    let bonds = (0..tower.depth())
        .map(|k| {
            let bond = tower.spaces().bond(k);
            let upper = &partitions[k + 1];
            let lower = &partitions[k];
            (0..upper.class_count())
                .map(|class| {
                    let image = lower.class_of(bond[upper.representative(class)]);
                    for member in upper.members(class) {
                        assert_eq!(
                            lower.class_of(bond[member]),
                            image,
                            "induced bond ill-defined at level {k}, class {class}"
                        );
                    }
                    image
                })
                .collect()
        })
        .collect();
    OrbitTower { partitions, bonds }
}

impl OrbitTower {
    pub fn partition(&self, level: usize) -> &OrbitPartition {
        &self.partitions[level]
    }

    pub fn depth(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.partitions.iter().map(|p| p.class_count()).collect()
    }

    pub fn bond(&self, k: usize) -> &[usize] {
        &self.bonds[k]
    }

    /// The orbit tower as a plain tower of finite sets.
    pub fn as_space_tower(&self) -> SpaceTower {
        SpaceTower::validate(self.sizes(), self.bonds.clone())
            .expect("induced bonds are in range")
    }
}

/// ψ on representatives: the thread of levelwise orbit classes.
pub fn psi(orbits: &OrbitTower, x: &Thread) -> Result<Thread, CommutationError> {
    if x.depth() > orbits.depth() {
        return Err(CommutationError::TowerMismatch);
    }
    let entries = (0..=x.depth())
        .map(|k| {
            let p = orbits.partition(k);
            if x.entry(k) >= p.carrier_size() {
                return Err(CommutationError::TowerMismatch);
            }
            Ok(p.class_of(x.entry(k)))
        })
        .collect::<Result<_, _>>()?;
    Ok(Thread::new(entries))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityReport {
    /// One (orbit thread, lifted space thread) pair per orbit thread, in
    /// top-class order.
    pub lifts: Vec<(Thread, Thread)>,
    pub failures: Vec<Witness>,
}

impl SurjectivityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Lifts every orbit thread: pick the least member of its top class, push
/// down through the space bonds, and check that each pushed entry lands in
/// the expected class. A failure is impossible for a valid tower and is
/// reported as evidence of an internal inconsistency.
pub fn verify_surjectivity(tower: &EquivariantTower, orbits: &OrbitTower) -> SurjectivityReport {
    let depth = tower.depth();
    let orbit_spaces = orbits.as_space_tower();
    let orbit_threads = enumerate_threads(&orbit_spaces, depth).expect("depth in range");
    let mut lifts = Vec::with_capacity(orbit_threads.len());
    let mut failures = Vec::new();
    for ot in orbit_threads {
        let top = orbits.partition(depth).representative(ot.top());
        let lift = Thread::new(tower.spaces().push_down(depth, top));
        match (0..=depth).find(|&k| orbits.partition(k).class_of(lift.entry(k)) != ot.entry(k)) {
            None => lifts.push((ot, lift)),
            Some(level) => failures.push(Witness::LiftFailure { orbit_thread: ot, level }),
        }
    }
    SurjectivityReport { lifts, failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub pairs_checked: usize,
    /// Transporter witness per ψ-equal pair: (x, y, compatible group thread).
    pub witnesses: Vec<(Thread, Thread, Thread)>,
    pub failures: Vec<Witness>,
}

impl InjectivityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every pair of threads with equal ψ-image, a compatible transporter
/// thread must exist; otherwise the pair is a ψ-injectivity failure.
pub fn verify_injectivity(tower: &EquivariantTower, orbits: &OrbitTower) -> InjectivityReport {
    let depth = tower.depth();
    let threads = enumerate_threads(tower.spaces(), depth).expect("depth in range");
    let mut by_image: Vec<(Thread, Vec<&Thread>)> = Vec::new();
    for t in &threads {
        let image = psi(orbits, t).expect("thread belongs to tower");
        match by_image.iter_mut().find(|(img, _)| *img == image) {
            Some((_, class)) => class.push(t),
            None => by_image.push((image, vec![t])),
        }
    }
    let mut report =
        InjectivityReport { pairs_checked: 0, witnesses: Vec::new(), failures: Vec::new() };
    for (_, class) in &by_image {
        for i in 0..class.len() {
            for j in (i + 1)..class.len() {
                report.pairs_checked += 1;
                match orbit_equivalent(tower, class[i], class[j], VerdictScope::Depth)
                    .expect("threads belong to tower")
                {
                    OrbitDecision::Yes(w) | OrbitDecision::YesAtDepthOnly(w) => {
                        report.witnesses.push((class[i].clone(), class[j].clone(), w));
                    }
                    OrbitDecision::No { level } => report.failures.push(
                        Witness::TransporterEmpty {
                            x: class[i].clone(),
                            y: class[j].clone(),
                            level,
                        },
                    ),
                }
            }
        }
    }
    report
}

/// Outcome of checking the classical sufficient conditions: a least index
/// level, freeness of the bottom action, and injectivity of every group
/// bond into the bottom level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub least_level: usize,
    /// `None` when the bottom action is free; otherwise the first witness.
    pub freeness_witness: Option<(usize, usize)>,
    /// Per level α in 1..=depth: `None` when ν_0^α is injective, otherwise
    /// the least non-identity kernel element of the composite.
    pub nu_kernel_witnesses: Vec<Option<usize>>,
    /// Whether the injectivity checks cover every level of the family, not
    /// just the materialized depth. True for constant and generated
    /// families, where one bond repeats and injectivity of an endomorphism
    /// of a finite group forces bijectivity.
    pub exact_for_all_levels: bool,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.freeness_witness.is_none() && self.nu_kernel_witnesses.iter().all(Option::is_none)
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        if let Some((g, x)) = self.freeness_witness {
            out.push(Witness::NotFree { level: 0, g, x });
        }
        for (i, w) in self.nu_kernel_witnesses.iter().enumerate() {
            if let Some(g) = *w {
                out.push(Witness::NotInjectiveHom { level: i + 1, g });
            }
        }
        out
    }
}

/// Checks the hypotheses of the certificate path. ℕ-towers always have the
/// least element 0.
pub fn certify_hypotheses(tower: &EquivariantTower) -> HypothesisReport {
    let freeness_witness = tower.action(0).freeness_witness();
    let nu_kernel_witnesses = (1..=tower.depth())
        .map(|level| tower.groups().composite(0, level).kernel_witness())
        .collect();
    HypothesisReport {
        least_level: 0,
        freeness_witness,
        nu_kernel_witnesses,
        exact_for_all_levels: tower.family() != Family::Explicit,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueTransporterReport {
    pub pairs_checked: usize,
    /// A ψ-equal pair with two distinct compatible transporter threads, if
    /// any exists.
    pub counterexample: Option<(Thread, Thread, Thread, Thread)>,
}

impl UniqueTransporterReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Under the certified hypotheses, the transporter thread of every ψ-equal
/// pair is unique: freeness pins the bottom entry and injectivity of the
/// bonds into the bottom pins the rest. Checked directly by enumerating
/// top-level transporters, since a compatible transporter thread is the
/// push-down of its top entry.
pub fn unique_transporter_check(
    tower: &EquivariantTower,
    orbits: &OrbitTower,
) -> Result<UniqueTransporterReport, CommutationError> {
    if !certify_hypotheses(tower).all_hold() {
        return Err(CommutationError::HypothesesNotCertified);
    }
    let depth = tower.depth();
    let threads = enumerate_threads(tower.spaces(), depth).expect("depth in range");
    let mut report = UniqueTransporterReport { pairs_checked: 0, counterexample: None };
    for i in 0..threads.len() {
        for j in i..threads.len() {
            let (x, y) = (&threads[i], &threads[j]);
            if psi(orbits, x) != psi(orbits, y) {
                continue;
            }
            report.pairs_checked += 1;
            let transporters = transporter_tower(tower, x, y).expect("threads belong to tower");
            if transporters.iter().any(|t| t.is_empty()) {
                continue; // an injectivity failure, reported elsewhere
            }
            let compatible: Vec<Thread> = transporters[depth]
                .iter()
                .map(|&top| Thread::new(tower.groups().push_down(depth, top)))
                .collect();
            for w in &compatible {
                for (k, t) in transporters.iter().enumerate() {
                    assert!(t.contains(&w.entry(k)), "push-down left the transporter tower");
                }
            }
            if compatible.len() > 1 && report.counterexample.is_none() {
                report.counterexample = Some((
                    x.clone(),
                    y.clone(),
                    compatible[0].clone(),
                    compatible[1].clone(),
                ));
            }
        }
    }
    Ok(report)
}

/// What the verdict claims about the genuine limit, beyond depth d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVerdict {
    /// The classical hypotheses hold and the family repeats a known rule.
    CertifiedByHypotheses,
    /// The hypotheses fail but the transporter procedure certifies
    /// bijectivity, and the family repeats a known rule.
    CertifiedByTransporters,
    /// An explicit truncation: the finite data certifies depth d only.
    DepthOnly,
}

/// Full outcome of commutation verification at depth d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiReport {
    pub depth: usize,
    pub thread_count: usize,
    /// Number of thread classes under the limit-group action (the domain of ψ).
    pub domain_size: usize,
    /// Number of orbit threads (the codomain of ψ).
    pub codomain_size: usize,
    pub surjective: SurjectivityReport,
    pub injective: InjectivityReport,
    pub hypotheses: HypothesisReport,
    pub unique_transporters: Option<UniqueTransporterReport>,
    pub limit_verdict: LimitVerdict,
}

impl PsiReport {
    pub fn bijective(&self) -> bool {
        self.surjective.ok() && self.injective.ok() && self.domain_size == self.codomain_size
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        let mut out = self.hypotheses.witnesses();
        out.extend(self.surjective.failures.iter().cloned());
        out.extend(self.injective.failures.iter().cloned());
        out
    }
}

/// Number of thread orbits under the componentwise limit-group action,
/// via union-find over the thread list.
fn thread_orbit_count(tower: &EquivariantTower) -> usize {
    let depth = tower.depth();
    let threads = enumerate_threads(tower.spaces(), depth).expect("depth in range");
    let mut uf = UnionFind::new(threads.len());
    let group_tops = tower.groups().group(depth).order();
    for g_top in 0..group_tops {
        let g = Thread::new(tower.groups().push_down(depth, g_top));
        for (i, t) in threads.iter().enumerate() {
            let moved = crate::limits::act_on_thread(tower, &g, t).expect("valid thread");
            let j = threads.iter().position(|u| *u == moved).expect("action is closed");
            uf.union(i, j);
        }
    }
    uf.partition().class_count()
}

/// Runs the whole commutation suite on a tower.
pub fn verify(tower: &EquivariantTower) -> PsiReport {
    let orbits = orbit_tower(tower);
    let depth = tower.depth();
    let thread_count = tower.spaces().size(depth);
    let codomain_size = orbits.partition(depth).class_count();
    let surjective = verify_surjectivity(tower, &orbits);
    let injective = verify_injectivity(tower, &orbits);
    let hypotheses = certify_hypotheses(tower);
    let unique_transporters = if hypotheses.all_hold() {
        Some(unique_transporter_check(tower, &orbits).expect("hypotheses just certified"))
    } else {
        None
    };
    let domain_size = thread_orbit_count(tower);
    let bijective = surjective.ok() && injective.ok() && domain_size == codomain_size;
    let limit_verdict = match tower.family() {
        Family::Explicit => LimitVerdict::DepthOnly,
        _ if hypotheses.all_hold() => LimitVerdict::CertifiedByHypotheses,
        _ if bijective => LimitVerdict::CertifiedByTransporters,
        _ => LimitVerdict::DepthOnly,
    };
    PsiReport {
        depth,
        thread_count,
        domain_size,
        codomain_size,
        surjective,
        injective,
        hypotheses,
        unique_transporters,
        limit_verdict,
    }
}

/// Stabilized data for a constant tower: Ω is the stable image of f, Γ the
/// stable image of ν, Q the stable image of the induced map on X/G. The
/// report records whether the natural map Ω/Γ → Q is a bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizedReport {
    pub omega: Vec<usize>,
    pub gamma: Vec<usize>,
    /// Γ·Ω ⊆ Ω, checked directly.
    pub closed_under_gamma: bool,
    pub omega_class_count: usize,
    pub q_size: usize,
    /// Pairs (Ω/Γ class representative, its orbit class in Q).
    pub class_map: Vec<(usize, usize)>,
    pub bijective: bool,
}

/// Finite-carrier restatement of the constant-tower commutation statement:
/// both sides of the limit are represented by their stabilized data (f, ν,
/// and the induced map are bijections on their stable images), and the
/// natural map Ω/Γ → Q must be a bijection.
pub fn stabilized_commutation_check(spec: &ConstantTowerSpec) -> StabilizedReport {
    let action = spec.action();
    let omega = stable_image(spec.self_map());
    let gamma = stable_image(spec.group_endo().map());
    let closed_under_gamma = gamma
        .iter()
        .all(|&g| omega.iter().all(|&x| omega.contains(&action.apply(g, x))));

    // Ω/Γ via union-find over positions in Ω.
    let pos_in_omega = |x: usize| omega.iter().position(|&y| y == x);
    let mut uf = UnionFind::new(omega.len());
    for &g in &gamma {
        for (i, &x) in omega.iter().enumerate() {
            if let Some(j) = pos_in_omega(action.apply(g, x)) {
                uf.union(i, j);
            }
        }
    }
    let omega_partition = uf.partition();

    // induced self-map on X/G and its stable image Q
    let orbits = action.orbits();
    let f_bar: Vec<usize> = (0..orbits.class_count())
        .map(|c| orbits.class_of(spec.self_map()[orbits.representative(c)]))
        .collect();
    for c in 0..orbits.class_count() {
        for member in orbits.members(c) {
            assert_eq!(orbits.class_of(spec.self_map()[member]), f_bar[c]);
        }
    }
    let q = stable_image(&f_bar);

    // natural map Ω/Γ → X/G, restricted to Q on the target side
    let class_map: Vec<(usize, usize)> = (0..omega_partition.class_count())
        .map(|c| {
            let rep = omega[omega_partition.representative(c)];
            (rep, orbits.class_of(rep))
        })
        .collect();
    let into_q = class_map.iter().all(|&(_, q_class)| q.contains(&q_class));
    let injective = (0..class_map.len())
        .all(|i| (0..i).all(|j| class_map[i].1 != class_map[j].1));
    let surjective = q.iter().all(|qc| class_map.iter().any(|&(_, c)| c == *qc));
    StabilizedReport {
        omega_class_count: omega_partition.class_count(),
        q_size: q.len(),
        bijective: closed_under_gamma && into_q && injective && surjective,
        omega,
        gamma,
        closed_under_gamma,
        class_map,
    }
}
