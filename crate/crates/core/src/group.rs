//! Finite groups as explicit Cayley tables, with constructors, homomorphisms
//! and quotients.
//!
//! Element `0` is always the identity. Every constructor documents how it
//! numbers elements so that exported tables are reproducible.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::Subgroup;

/// Seed for sampled associativity checks on tables above
/// [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`].
pub const DEFAULT_SEED: u64 = 0x5EED_0FC0_FFEE;
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
pub const ASSOCIATIVITY_SAMPLES: usize = 100_000;

pub type GroupRef = Arc<FiniteGroup>;

/// A finite group given by its multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    label: String,
    fingerprint: u64,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

fn fingerprint(order: usize, table: &[u32]) -> u64 {
    // FNV-1a; stable across runs and platforms.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(order as u64);
    for &x in table {
        feed(x as u64);
    }
    h
}

impl FiniteGroup {
    /// Builds a group from a table already known to be valid.
    pub(crate) fn from_trusted(order: usize, table: Vec<u32>, label: String) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&x| x == 0).expect("row contains identity");
            inverse[a] = b as u32;
        }
        let fingerprint = fingerprint(order, &table);
        FiniteGroup {
            order,
            table,
            inverse,
            label,
            fingerprint,
        }
    }

    /// Validates a row-major Cayley table: identity at index 0, Latin square,
    /// associativity (exhaustive up to order 256, sampled with `seed` above).
    pub fn from_rows(rows: &[Vec<u32>], label: impl Into<String>, seed: u64) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::invalid("group table is empty"));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::invalid(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            table.extend_from_slice(row);
        }
        Self::from_table(order, table, label, seed)
    }

    pub fn from_table(order: usize, table: Vec<u32>, label: impl Into<String>, seed: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("group order must be positive"));
        }
        if table.len() != order * order {
            return Err(Error::invalid(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(Error::invalid(format!("table entry {bad} out of range 0..{order}")));
        }
        for x in 0..order {
            if table[x] as usize != x || table[x * order] as usize != x {
                return Err(Error::invalid(format!("element 0 is not an identity (fails at {x})")));
            }
        }
        check_latin(order, &table)?;
        check_associative(order, &table, seed)?;
        Ok(Self::from_trusted(order, table, label.into()))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Table-derived identity; two groups with equal fingerprints and tables are the same group.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn conj(&self, x: usize, by: usize) -> usize {
        // by * x * by^-1
        self.mul(self.mul(by, x), self.inv(by))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, mut e: usize) -> usize {
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn to_json_table(&self) -> CayleyTable {
        CayleyTable {
            order: self.order,
            table: self.rows(),
            label: self.label.clone(),
        }
    }

    /// Runs the Latin-square and associativity checks on this table.
    pub fn validate(&self, seed: u64) -> Result<()> {
        check_latin(self.order, &self.table)?;
        check_associative(self.order, &self.table, seed)
    }

    /// Multiset of element orders, sorted; a cheap structural fingerprint.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// A small generating set found greedily: repeatedly add an element of
    /// largest order outside the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let orders: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        let mut gens = Vec::new();
        let mut span = ElementSet::from_indices(self.order, [0]);
        while span.len() < self.order {
            let next = (0..self.order)
                .filter(|x| !span.contains(*x))
                .max_by_key(|&x| (orders[x], std::cmp::Reverse(x)))
                .expect("span is proper");
            gens.push(next);
            span = crate::lattice::closure_set(self, &gens);
        }
        gens
    }

    /// Restricts the operation to `sub`, renumbering its members in increasing
    /// index order. Returns the new group and the embedding into `self`.
    pub fn subgroup_as_group(&self, sub: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let members = sub.members().to_vec();
        let mut position = vec![u32::MAX; self.order];
        for (i, &m) in members.iter().enumerate() {
            position[m] = i as u32;
        }
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(position[self.mul(a, b)]);
            }
        }
        let label = format!("{}|sub{}", self.label, n);
        (FiniteGroup::from_trusted(n, table, label), members)
    }
}

fn check_latin(order: usize, table: &[u32]) -> Result<()> {
    let mut seen = vec![usize::MAX; order];
    for r in 0..order {
        for c in 0..order {
            let v = table[r * order + c] as usize;
            if seen[v] == r {
                return Err(Error::invalid(format!("row {r} repeats element {v}")));
            }
            seen[v] = r;
        }
    }
    let mut seen = vec![usize::MAX; order];
    for c in 0..order {
        for r in 0..order {
            let v = table[r * order + c] as usize;
            if seen[v] == c {
                return Err(Error::invalid(format!("column {c} repeats element {v}")));
            }
            seen[v] = c;
        }
    }
    Ok(())
}

fn check_associative(order: usize, table: &[u32], seed: u64) -> Result<()> {
    let m = |a: usize, b: usize| table[a * order + b] as usize;
    let fail = |a, b, c| Err(Error::invalid(format!("associativity fails at ({a}, {b}, {c})")));
    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..order {
            for b in 0..order {
                let ab = m(a, b);
                for c in 0..order {
                    if m(ab, c) != m(a, m(b, c)) {
                        return fail(a, b, c);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ASSOCIATIVITY_SAMPLES {
            let (a, b, c) = (rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order));
            if m(m(a, b), c) != m(a, m(b, c)) {
                return fail(a, b, c);
            }
        }
    }
    Ok(())
}

/// JSON shape for Cayley tables: row-major, entries in `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CayleyTable {
    pub order: usize,
    pub table: Vec<Vec<u32>>,
    #[serde(default)]
    pub label: String,
}

impl CayleyTable {
    pub fn into_group(self, seed: u64) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::invalid(format!(
                "declared order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_rows(&self.table, self.label, seed)
    }
}

/// The cyclic group `C_n`; element `i` is the residue `i mod n`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::invalid("cyclic group size must be at least 1"));
    }
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(((a + b) % n) as u32);
        }
    }
    Ok(FiniteGroup::from_trusted(n, table, format!("C{n}")))
}

/// `g × h`, pair `(a, b)` stored at index `a·|h| + b`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, budget: &Budget) -> Result<FiniteGroup> {
    let (ng, nh) = (g.order(), h.order());
    budget.check_order(ng as u128 * nh as u128)?;
    let n = ng * nh;
    let mut table = Vec::with_capacity(n * n);
    for a1 in 0..ng {
        for b1 in 0..nh {
            for a2 in 0..ng {
                let a = g.mul(a1, a2) * nh;
                for b2 in 0..nh {
                    table.push((a + h.mul(b1, b2)) as u32);
                }
            }
        }
    }
    Ok(FiniteGroup::from_trusted(n, table, format!("{}x{}", g.label(), h.label())))
}

/// `n ⋊ h` with `action[y]` the automorphism of `n` by which `y` acts.
///
/// Pairs `(x, y)` are stored at `x·|h| + y` and multiply as
/// `(x1, y1)(x2, y2) = (x1·action[y1](x2), y1·y2)`, so a trivial action
/// reproduces [`direct_product`] exactly.
pub fn semidirect(n: &FiniteGroup, h: &FiniteGroup, action: &[Vec<u32>], budget: &Budget) -> Result<FiniteGroup> {
    let (nn, nh) = (n.order(), h.order());
    budget.check_order(nn as u128 * nh as u128)?;
    if action.len() != nh {
        return Err(Error::invalid(format!(
            "action lists {} automorphisms, acting group has order {nh}",
            action.len()
        )));
    }
    for (y, aut) in action.iter().enumerate() {
        if aut.len() != nn {
            return Err(Error::invalid(format!("automorphism for {y} has wrong length")));
        }
        let mut hit = vec![false; nn];
        for &v in aut {
            let v = v as usize;
            if v >= nn || std::mem::replace(&mut hit[v], true) {
                return Err(Error::invalid(format!("image of {y} is not a bijection")));
            }
        }
        for a in 0..nn {
            for b in 0..nn {
                if aut[n.mul(a, b)] as usize != n.mul(aut[a] as usize, aut[b] as usize) {
                    return Err(Error::invalid(format!("image of {y} is not an endomorphism")));
                }
            }
        }
    }
    for y1 in 0..nh {
        for y2 in 0..nh {
            let composite = &action[h.mul(y1, y2)];
            for x in 0..nn {
                if composite[x] != action[y1][action[y2][x] as usize] {
                    return Err(Error::invalid(format!(
                        "action is not a homomorphism at ({y1}, {y2})"
                    )));
                }
            }
        }
    }
    let total = nn * nh;
    let mut table = Vec::with_capacity(total * total);
    for x1 in 0..nn {
        for y1 in 0..nh {
            let act = &action[y1];
            for x2 in 0..nn {
                let x = n.mul(x1, act[x2] as usize) * nh;
                for y2 in 0..nh {
                    table.push((x + h.mul(y1, y2)) as u32);
                }
            }
        }
    }
    Ok(FiniteGroup::from_trusted(total, table, format!("{}:{}", n.label(), h.label())))
}

/// Action of the cyclic group `h` (generator at index 1, as built by
/// [`make_cyclic`]) in which the generator acts by `aut`.
pub fn cyclic_action(n: &FiniteGroup, h: &FiniteGroup, aut: &[u32]) -> Result<Vec<Vec<u32>>> {
    if aut.len() != n.order() {
        return Err(Error::invalid("automorphism has wrong length"));
    }
    let mut action = vec![(0..n.order() as u32).collect::<Vec<u32>>()];
    let mut current = action[0].clone();
    let mut y = 0;
    for _ in 1..h.order() {
        y = h.mul(y, 1);
        current = current.iter().map(|&x| aut[x as usize]).collect();
        if y != action.len() {
            return Err(Error::invalid("acting group is not cyclic with generator 1"));
        }
        action.push(current.clone());
    }
    Ok(action)
}

/// Dihedral group of order `2n` as `C_n ⋊ C_2` with inversion.
pub fn make_dihedral(n: usize, budget: &Budget) -> Result<FiniteGroup> {
    let cn = make_cyclic(n)?;
    let c2 = make_cyclic(2)?;
    let inversion: Vec<u32> = (0..n).map(|x| ((n - x) % n) as u32).collect();
    let action = cyclic_action(&cn, &c2, &inversion)?;
    Ok(semidirect(&cn, &c2, &action, budget)?.with_label(format!("D{}", 2 * n)))
}

/// Group homomorphism between two tables.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: GroupRef,
    target: GroupRef,
    map: Vec<u32>,
    surjective: bool,
}

impl Homomorphism {
    pub fn new(source: GroupRef, target: GroupRef, map: Vec<u32>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::invalid(format!(
                "map has length {}, source order {}",
                map.len(),
                source.order()
            )));
        }
        if map.iter().any(|&x| x as usize >= target.order()) {
            return Err(Error::invalid("map value out of target range"));
        }
        if map[0] != 0 {
            return Err(Error::invalid("identity must map to identity"));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] as usize != target.mul(map[a] as usize, map[b] as usize) {
                    return Err(Error::invalid(format!("map is not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(Self::from_trusted(source, target, map))
    }

    pub(crate) fn from_trusted(source: GroupRef, target: GroupRef, map: Vec<u32>) -> Self {
        let mut hit = ElementSet::empty(target.order());
        for &x in &map {
            hit.insert(x as usize);
        }
        let surjective = hit.len() == target.order();
        Homomorphism {
            source,
            target,
            map,
            surjective,
        }
    }

    pub fn identity(g: GroupRef) -> Self {
        let map = (0..g.order() as u32).collect();
        Self::from_trusted(g.clone(), g, map)
    }

    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn kernel(&self) -> Subgroup {
        let members = (0..self.source.order()).filter(|&x| self.map[x] == 0);
        Subgroup::from_set_unchecked(&self.source, ElementSet::from_indices(self.source.order(), members))
    }
}

/// `outer ∘ inner`: applies `inner` first.
pub fn hom_compose(outer: &Homomorphism, inner: &Homomorphism) -> Result<Homomorphism> {
    if inner.target.as_ref() != outer.source.as_ref() {
        return Err(Error::Mismatch(format!(
            "cannot compose: inner target {} is not outer source {}",
            inner.target.label(),
            outer.source.label()
        )));
    }
    let map = inner.map.iter().map(|&x| outer.map[x as usize]).collect();
    Ok(Homomorphism::from_trusted(inner.source.clone(), outer.target.clone(), map))
}

/// Image of a subgroup of the source.
pub fn hom_image(f: &Homomorphism, h: &Subgroup) -> Result<Subgroup> {
    h.check_parent(&f.source)?;
    let set = ElementSet::from_indices(f.target.order(), h.members().iter().map(|x| f.apply(x)));
    Ok(Subgroup::from_set_unchecked(&f.target, set))
}

/// Preimage of a subgroup of the target.
pub fn hom_preimage(f: &Homomorphism, h: &Subgroup) -> Result<Subgroup> {
    h.check_parent(&f.target)?;
    let set = ElementSet::from_indices(
        f.source.order(),
        (0..f.source.order()).filter(|&x| h.contains(f.apply(x))),
    );
    Ok(Subgroup::from_set_unchecked(&f.source, set))
}

/// `g / n` with cosets numbered by increasing minimum representative, plus
/// the canonical surjection.
pub fn quotient(g: &GroupRef, n: &Subgroup) -> Result<(GroupRef, Homomorphism)> {
    n.check_parent(g)?;
    for m in n.members().iter() {
        for by in 0..g.order() {
            if !n.contains(g.conj(m, by)) {
                return Err(Error::NotNormal { member: m, by });
            }
        }
    }
    let order = g.order();
    let mut coset_of = vec![u32::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if coset_of[x] != u32::MAX {
            continue;
        }
        let idx = reps.len() as u32;
        reps.push(x);
        for m in n.members().iter() {
            coset_of[g.mul(x, m)] = idx;
        }
    }
    let q = reps.len();
    let mut table = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            table.push(coset_of[g.mul(a, b)]);
        }
    }
    let label = format!("{}/{}", g.label(), n.order());
    let target = Arc::new(FiniteGroup::from_trusted(q, table, label));
    let hom = Homomorphism::from_trusted(g.clone(), target.clone(), coset_of);
    Ok((target, hom))
}

/// Breadth-first orbit of the identity under right multiplication by `gens`.
pub(crate) fn span_from(g: &FiniteGroup, start: ElementSet, gens: &[usize]) -> ElementSet {
    let mut set = start;
    let mut queue: VecDeque<usize> = set.iter().collect();
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push_back(y);
            }
        }
    }
    set
}
