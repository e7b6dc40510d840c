//! Subgroup lattices of finite groups.
//!
//! Enumeration is a layered join search: seed with cyclic subgroups (or
//! normal closures of single elements for the normal lattice), then keep
//! joining each discovered subgroup with every seed, deduplicating on the
//! member set. The joins found along the way also give the Hasse diagram,
//! since every upper cover of `H` has the form `H ∨ seed`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::bitset::ElementSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{span_from, FiniteGroup};

/// A subgroup of a [`FiniteGroup`], stored as a member set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: u64,
    parent_order: usize,
    members: ElementSet,
}

impl Subgroup {
    pub(crate) fn from_set_unchecked(g: &FiniteGroup, members: ElementSet) -> Self {
        Subgroup {
            parent: g.fingerprint(),
            parent_order: g.order(),
            members,
        }
    }

    /// Checks closure, inverses and Lagrange before accepting `members`.
    pub fn new(g: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = ElementSet::empty(g.order());
        for m in members {
            if m >= g.order() {
                return Err(Error::invalid(format!("element {m} out of range")));
            }
            set.insert(m);
        }
        if !set.contains(0) {
            return Err(Error::invalid("subgroup must contain the identity"));
        }
        for a in set.iter() {
            if !set.contains(g.inv(a)) {
                return Err(Error::invalid(format!("inverse of {a} missing")));
            }
            for b in set.iter() {
                if !set.contains(g.mul(a, b)) {
                    return Err(Error::invalid(format!("product of {a} and {b} missing")));
                }
            }
        }
        if g.order() % set.len() != 0 {
            return Err(Error::invalid("subgroup order does not divide group order"));
        }
        Ok(Self::from_set_unchecked(g, set))
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::from_set_unchecked(g, ElementSet::from_indices(g.order(), [0]))
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_set_unchecked(g, ElementSet::full(g.order()))
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }

    pub fn belongs_to(&self, g: &FiniteGroup) -> bool {
        self.parent == g.fingerprint() && self.parent_order == g.order()
    }

    pub(crate) fn check_parent(&self, g: &FiniteGroup) -> Result<()> {
        if self.belongs_to(g) {
            Ok(())
        } else {
            Err(Error::Mismatch(format!(
                "subgroup of order {} does not belong to {}",
                self.order(),
                g.label()
            )))
        }
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            parent: self.parent,
            parent_order: self.parent_order,
            members: self.members.intersection(&other.members),
        }
    }

    /// Size of the product set `HK`, which is `|H||K| / |H ∩ K|`.
    pub fn product_size(&self, other: &Subgroup) -> usize {
        self.order() * other.order() / self.members.intersection_len(&other.members)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        normality_witness(g, self).is_none()
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members.cmp(&other.members)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn normality_witness(g: &FiniteGroup, h: &Subgroup) -> Option<(usize, usize)> {
    let gens = g.generators();
    for m in h.members().iter() {
        for &s in &gens {
            let c = g.conj(m, s);
            if !h.contains(c) {
                return Some((m, s));
            }
        }
    }
    None
}

pub(crate) fn closure_set(g: &FiniteGroup, gens: &[usize]) -> ElementSet {
    span_from(g, ElementSet::from_indices(g.order(), [0]), gens)
}

/// Smallest subgroup containing `gens`.
pub fn closure(g: &FiniteGroup, gens: &[usize]) -> Result<Subgroup> {
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(Error::invalid(format!("generator {bad} out of range")));
    }
    Ok(Subgroup::from_set_unchecked(g, closure_set(g, gens)))
}

/// Subgroup lattice (or normal-subgroup lattice) in canonical order.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    pub subgroups: Vec<Subgroup>,
    /// Covering pairs `(lower, upper)` as indices into `subgroups`, sorted.
    pub covers: Vec<(usize, usize)>,
    pub normal: Vec<bool>,
    lookup: HashMap<ElementSet, usize>,
}

impl LatticeReport {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.lookup.get(h.members()).copied()
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn lower_covers(&self, upper: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers
            .iter()
            .filter(move |&&(_, u)| u == upper)
            .map(|&(l, _)| l)
    }

    /// Graphviz rendering; nodes `n<i>` follow canonical order and carry
    /// `o=<order>` with an `N` suffix for normal subgroups.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        let _ = writeln!(out, "  rankdir=BT;");
        for (i, h) in self.subgroups.iter().enumerate() {
            let mark = if self.normal[i] { "N" } else { "" };
            let _ = writeln!(out, "  n{i} [label=\"o={}{mark}\"];", h.order());
        }
        for &(l, u) in &self.covers {
            let _ = writeln!(out, "  n{l} -> n{u};");
        }
        out.push_str("}\n");
        out
    }
}

struct Seed {
    set: ElementSet,
    gens: Vec<usize>,
}

fn enumerate_joins(g: &FiniteGroup, seeds: Vec<Seed>, normal_only: bool, budget: &Budget) -> Result<LatticeReport> {
    let n = g.order();
    let mut sets: Vec<ElementSet> = vec![ElementSet::from_indices(n, [0])];
    let mut gens: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<ElementSet, usize> = HashMap::new();
    index.insert(sets[0].clone(), 0);
    let mut upper: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        let mut found: Vec<usize> = Vec::new();
        for seed in &seeds {
            if seed.set.is_subset(&sets[i]) {
                continue;
            }
            let mut joined_gens = gens[i].clone();
            joined_gens.extend(&seed.gens);
            let joined = span_from(g, sets[i].clone(), &joined_gens);
            let j = match index.get(&joined) {
                Some(&j) => j,
                None => {
                    let j = sets.len();
                    if j >= budget.max_subgroups {
                        return Err(Error::budget(
                            "subgroup count",
                            j as u128 + 1,
                            budget.max_subgroups as u128,
                        ));
                    }
                    index.insert(joined.clone(), j);
                    sets.push(joined);
                    gens.push(joined_gens);
                    upper.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            if !found.contains(&j) {
                found.push(j);
            }
        }
        // Upper covers are the minimal joins.
        let minimal: Vec<usize> = found
            .iter()
            .copied()
            .filter(|&a| {
                !found
                    .iter()
                    .any(|&b| b != a && sets[b].len() < sets[a].len() && sets[b].is_subset(&sets[a]))
            })
            .collect();
        upper[i] = minimal;
    }

    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| sets[a].cmp(&sets[b]));
    let mut rank = vec![0usize; sets.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut covers: Vec<(usize, usize)> = upper
        .iter()
        .enumerate()
        .flat_map(|(i, ups)| ups.iter().map(move |&u| (i, u)))
        .map(|(l, u)| (rank[l], rank[u]))
        .collect();
    covers.sort_unstable();

    let mut subgroups = Vec::with_capacity(sets.len());
    let mut normal = Vec::with_capacity(sets.len());
    let mut lookup = HashMap::with_capacity(sets.len());
    let group_gens = g.generators();
    for (r, &i) in order.iter().enumerate() {
        let h = Subgroup::from_set_unchecked(g, sets[i].clone());
        let is_normal = normal_only
            || gens[i]
                .iter()
                .all(|&x| group_gens.iter().all(|&s| h.contains(g.conj(x, s))));
        lookup.insert(sets[i].clone(), r);
        subgroups.push(h);
        normal.push(is_normal);
    }
    Ok(LatticeReport {
        subgroups,
        covers,
        normal,
        lookup,
    })
}

fn cyclic_seeds(g: &FiniteGroup) -> Vec<Seed> {
    let mut seen: HashMap<ElementSet, ()> = HashMap::new();
    let mut seeds = Vec::new();
    for x in 1..g.order() {
        let set = closure_set(g, &[x]);
        if seen.insert(set.clone(), ()).is_none() {
            seeds.push(Seed { set, gens: vec![x] });
        }
    }
    seeds
}

fn conjugacy_class(g: &FiniteGroup, x: usize) -> ElementSet {
    let mut class = ElementSet::empty(g.order());
    for by in 0..g.order() {
        class.insert(g.conj(x, by));
    }
    class
}

fn greedy_generators(g: &FiniteGroup, candidates: impl IntoIterator<Item = usize>) -> (ElementSet, Vec<usize>) {
    let mut span = ElementSet::from_indices(g.order(), [0]);
    let mut gens = Vec::new();
    for c in candidates {
        if !span.contains(c) {
            gens.push(c);
            span = span_from(g, span, &gens);
        }
    }
    (span, gens)
}

fn normal_closure_seeds(g: &FiniteGroup) -> Vec<Seed> {
    let mut done = ElementSet::from_indices(g.order(), [0]);
    let mut seen: HashMap<ElementSet, ()> = HashMap::new();
    let mut seeds = Vec::new();
    for x in 1..g.order() {
        if done.contains(x) {
            continue;
        }
        let class = conjugacy_class(g, x);
        for c in class.iter() {
            done.insert(c);
        }
        let (set, gens) = greedy_generators(g, class.iter());
        if seen.insert(set.clone(), ()).is_none() {
            seeds.push(Seed { set, gens });
        }
    }
    seeds
}

/// Complete subgroup lattice with covers and normality marks.
pub fn all_subgroups(g: &FiniteGroup, budget: &Budget) -> Result<LatticeReport> {
    budget.check_lattice(g.order())?;
    enumerate_joins(g, cyclic_seeds(g), false, budget)
}

/// Lattice of normal subgroups only; allowed up to `budget.max_order`.
pub fn normal_lattice(g: &FiniteGroup, budget: &Budget) -> Result<LatticeReport> {
    budget.check_order(g.order() as u128)?;
    enumerate_joins(g, normal_closure_seeds(g), true, budget)
}

pub fn normal_subgroups(g: &FiniteGroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    Ok(normal_lattice(g, budget)?.subgroups)
}

pub fn maximal_subgroups(g: &FiniteGroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    let lat = all_subgroups(g, budget)?;
    Ok(maximal_in(&lat))
}

pub fn maximal_normal_subgroups(g: &FiniteGroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    let lat = normal_lattice(g, budget)?;
    Ok(maximal_in(&lat))
}

fn maximal_in(lat: &LatticeReport) -> Vec<Subgroup> {
    let top = lat.top();
    let mut v: Vec<Subgroup> = lat.lower_covers(top).map(|i| lat.subgroups[i].clone()).collect();
    v.sort();
    v
}

fn intersect_all(g: &FiniteGroup, subs: &[Subgroup]) -> Subgroup {
    subs.iter()
        .fold(Subgroup::whole(g), |acc, h| acc.intersect(h))
}

/// Frattini subgroup: intersection of the maximal subgroups.
pub fn frattini(g: &FiniteGroup, budget: &Budget) -> Result<Subgroup> {
    Ok(intersect_all(g, &maximal_subgroups(g, budget)?))
}

/// Intersection of the maximal normal subgroups.
pub fn psi(g: &FiniteGroup, budget: &Budget) -> Result<Subgroup> {
    Ok(intersect_all(g, &maximal_normal_subgroups(g, budget)?))
}

pub fn center(g: &FiniteGroup) -> Subgroup {
    let gens = g.generators();
    let members = (0..g.order()).filter(|&z| gens.iter().all(|&s| g.mul(z, s) == g.mul(s, z)));
    Subgroup::from_set_unchecked(g, ElementSet::from_indices(g.order(), members))
}

pub fn derived_subgroup(g: &FiniteGroup) -> Subgroup {
    let mut comms = ElementSet::empty(g.order());
    for a in 0..g.order() {
        for b in 0..g.order() {
            comms.insert(g.commutator(a, b));
        }
    }
    let (set, _) = greedy_generators(g, comms.iter());
    Subgroup::from_set_unchecked(g, set)
}

/// True when every Sylow subgroup is normal, i.e. `g` is the direct product
/// of its Sylow subgroups.
pub fn is_nilpotent(g: &FiniteGroup) -> bool {
    sylow_sets(g).is_some()
}

/// For nilpotent `g`, the unique Sylow subgroup for each prime dividing `|g|`.
pub(crate) fn sylow_sets(g: &FiniteGroup) -> Option<Vec<(u64, ElementSet)>> {
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let mut out = Vec::new();
    for (p, e) in crate::arith::factorize(g.order() as u64) {
        let p_part = p.pow(e) as usize;
        let set = ElementSet::from_indices(
            g.order(),
            (0..g.order()).filter(|&x| crate::arith::is_power_of(orders[x] as u64, p)),
        );
        if set.len() != p_part {
            return None;
        }
        out.push((p, set));
    }
    Some(out)
}

/// Number of homomorphisms `h → a` for abelian `a`.
///
/// Enumerates images of a generating set of `h`, extending each assignment
/// along a breadth-first spanning tree and checking every generator relation.
pub fn hom_count(h: &FiniteGroup, a: &FiniteGroup, budget: &Budget) -> Result<u64> {
    if !a.is_abelian() {
        return Err(Error::invalid("hom_count requires an abelian target"));
    }
    budget.check_order(h.order() as u128 * a.order() as u128)?;
    let gens = h.generators();
    // spanning tree: tree[x] = (parent, generator slot) with x = parent * gens[slot]
    let mut tree: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); h.order()];
    let mut bfs = vec![0usize];
    let mut seen = ElementSet::from_indices(h.order(), [0]);
    let mut head = 0;
    while head < bfs.len() {
        let x = bfs[head];
        head += 1;
        for (slot, &s) in gens.iter().enumerate() {
            let y = h.mul(x, s);
            if seen.insert(y) {
                tree[y] = (x, slot);
                bfs.push(y);
            }
        }
    }
    let k = gens.len();
    let total = (a.order() as u128).pow(k as u32);
    if total > 1u128 << 32 {
        return Err(Error::budget("generator image assignments", total, 1u128 << 32));
    }
    let mut images = vec![0usize; k];
    let mut phi = vec![0usize; h.order()];
    let mut count = 0u64;
    for code in 0..total as u64 {
        let mut c = code;
        for img in images.iter_mut() {
            *img = (c % a.order() as u64) as usize;
            c /= a.order() as u64;
        }
        for &x in &bfs[1..] {
            let (p, slot) = tree[x];
            phi[x] = a.mul(phi[p], images[slot]);
        }
        let ok = (0..h.order()).all(|x| {
            gens.iter()
                .enumerate()
                .all(|(slot, &s)| phi[h.mul(x, s)] == a.mul(phi[x], images[slot]))
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// All complements of the normal subgroup `n`: subgroups `K` with
/// `K·n = g` and `K ∩ n = 1`.
pub fn complements(g: &FiniteGroup, n: &Subgroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    n.check_parent(g)?;
    if let Some((member, by)) = normality_witness(g, n) {
        return Err(Error::NotNormal { member, by });
    }
    let target = g.order() / n.order();
    let lat = all_subgroups(g, budget)?;
    Ok(lat
        .subgroups
        .into_iter()
        .filter(|k| k.order() == target && k.members().intersection_len(n.members()) == 1)
        .collect())
}
