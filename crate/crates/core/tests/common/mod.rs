//! Independent oracles for cross-checking the library: brute-force
//! enumerations and from-scratch axiom checks that deliberately avoid the
//! code paths they verify.

// each test target compiles this module separately and uses a subset
#![allow(dead_code)]

use prolim::limits::Thread;
use prolim::systems::{EquivariantTower, SpaceTower};

/// All compatible tuples by upward depth-first search from level 0,
/// independent of the top-entry push-down used by the library.
pub fn dfs_threads(tower: &SpaceTower, depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..tower.size(0)).map(|x| vec![x]).collect();
    while let Some(partial) = stack.pop() {
        let k = partial.len() - 1;
        if k == depth {
            out.push(partial);
            continue;
        }
        for x in 0..tower.size(k + 1) {
            if tower.bond(k)[x] == partial[k] {
                let mut next = partial.clone();
                next.push(x);
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

/// All compatible group threads by brute-force filtering of the full
/// product of the level groups.
pub fn all_group_threads(tower: &EquivariantTower, depth: usize) -> Vec<Thread> {
    let groups = tower.groups();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..=depth {
        let mut next = Vec::new();
        for t in &tuples {
            for g in groups.group(k).elements() {
                let mut ext = t.clone();
                ext.push(g);
                next.push(ext);
            }
        }
        tuples = next;
    }
    tuples
        .into_iter()
        .filter(|t| (0..depth).all(|k| groups.bond(k).apply(t[k + 1]) == t[k]))
        .map(Thread::new)
        .collect()
}

/// Brute-force orbit equivalence: some compatible group thread moves x to y
/// componentwise.
pub fn brute_force_orbit_equivalent(
    tower: &EquivariantTower,
    x: &Thread,
    y: &Thread,
) -> bool {
    all_group_threads(tower, x.depth()).iter().any(|g| {
        (0..=x.depth()).all(|k| tower.action(k).apply(g.entry(k), x.entry(k)) == y.entry(k))
    })
}

/// From-scratch group-table check, written independently of
/// `FiniteGroup::validate`.
pub fn table_is_group(table: &[Vec<usize>]) -> bool {
    let n = table.len();
    if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&e| e >= n)) {
        return false;
    }
    let identity = match (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) {
        Some(e) => e,
        None => return false,
    };
    let inverses_ok =
        (0..n).all(|g| (0..n).any(|h| table[g][h] == identity && table[h][g] == identity));
    let assoc_ok = (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| table[table[a][b]][c] == table[a][table[b][c]]))
    });
    inverses_ok && assoc_ok
}

/// From-scratch homomorphism check.
pub fn map_is_hom(src: &[Vec<usize>], tgt: &[Vec<usize>], map: &[usize]) -> bool {
    let n = src.len();
    map.len() == n
        && map.iter().all(|&m| m < tgt.len())
        && (0..n).all(|g| (0..n).all(|h| map[src[g][h]] == tgt[map[g]][map[h]]))
}

/// From-scratch action-axiom check.
pub fn table_is_action(group: &[Vec<usize>], carrier: usize, action: &[Vec<usize>]) -> bool {
    let order = group.len();
    if action.len() != order
        || action.iter().any(|row| row.len() != carrier || row.iter().any(|&e| e >= carrier))
    {
        return false;
    }
    let identity = match (0..order)
        .find(|&e| (0..order).all(|x| group[e][x] == x && group[x][e] == x))
    {
        Some(e) => e,
        None => return false,
    };
    (0..carrier).all(|x| action[identity][x] == x)
        && (0..order).all(|g| {
            (0..order)
                .all(|h| (0..carrier).all(|x| action[g][action[h][x]] == action[group[g][h]][x]))
        })
}

/// From-scratch equivariance check for one bond.
pub fn bond_is_equivariant(
    upper_action: &[Vec<usize>],
    lower_action: &[Vec<usize>],
    nu: &[usize],
    bond: &[usize],
    lower_size: usize,
) -> bool {
    bond.iter().all(|&y| y < lower_size)
        && (0..upper_action.len()).all(|g| {
            (0..upper_action[g].len())
                .all(|x| bond[upper_action[g][x]] == lower_action[nu[g]][bond[x]])
        })
}
