//! Profinite groups presented as inverse sequences of finite groups.
//!
//! A [`Tower`] produces its levels on demand and memoizes them. Built-in
//! constructors attach [`Certificates`] describing the limit group; custom
//! towers carry none, and everything downstream treats them heuristically.
//!
//! A split extension `T^(5n) ⋊ A_5` of powers of a finite simple group `T`
//! by `A_5`, with `A_5` permuting coordinates, gives a group with a unique
//! maximal open normal subgroup. It can be assembled as a custom tower from
//! [`crate::group::semidirect`] levels, but its level orders `60·|T|^(5n)`
//! exceed the default budgets after the first level, so no built-in is
//! provided.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::arith;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{direct_product, hom_compose, make_cyclic, FiniteGroup, GroupRef, Homomorphism};
use crate::lattice::{is_nilpotent, sylow_sets, Subgroup};

/// Exponent of a prime in a supernatural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// Order of a profinite group as a formal product of prime powers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SupernaturalOrder {
    pub exponents: BTreeMap<u64, Exponent>,
}

impl SupernaturalOrder {
    pub fn of_finite(n: u64) -> Self {
        SupernaturalOrder {
            exponents: arith::factorize(n)
                .into_iter()
                .map(|(p, e)| (p, Exponent::Finite(e)))
                .collect(),
        }
    }

    pub fn infinite_at(primes: impl IntoIterator<Item = u64>) -> Self {
        SupernaturalOrder {
            exponents: primes.into_iter().map(|p| (p, Exponent::Infinite)).collect(),
        }
    }

    /// Order of a direct product; infinite exponents absorb.
    pub fn merge(&self, other: &SupernaturalOrder) -> SupernaturalOrder {
        let mut exponents = self.exponents.clone();
        for (&p, &e) in &other.exponents {
            exponents
                .entry(p)
                .and_modify(|x| *x = x.add(e))
                .or_insert(e);
        }
        SupernaturalOrder { exponents }
    }

    pub fn primes(&self) -> Vec<u64> {
        self.exponents.keys().copied().collect()
    }

    pub fn infinite_primes(&self) -> Vec<u64> {
        self.exponents
            .iter()
            .filter(|(_, &e)| e == Exponent::Infinite)
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.infinite_primes().is_empty()
    }
}

impl fmt::Display for SupernaturalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.exponents.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Declared structure of the limit group. Only built-in constructors set these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificates {
    pub abelian: bool,
    pub pro_p: Option<u64>,
    pub supernatural: SupernaturalOrder,
    /// Window-based fiber verdicts are exact at every depth ≥ 1: a point whose
    /// ball classes stay singletons is isolated, and one whose ball classes
    /// keep at least two members contains a non-open subgroup.
    pub fiber_stable: bool,
    pub finitely_generated_bound: Option<u32>,
    pub virtually_pronilpotent: bool,
    pub pronilpotent: bool,
    pub eventually_central_kernels: bool,
    /// There is an open central subgroup isomorphic to a direct sum of one
    /// copy of `Z_p` for each prime with infinite exponent.
    pub central_padic_core: bool,
}

#[derive(Clone)]
enum Kind {
    Trivial,
    Padic(u64),
    Product(Tower, Tower),
    FiniteTimes(GroupRef, Tower),
    Torsion(GroupRef),
    Custom(Vec<GroupRef>, Vec<Homomorphism>),
}

struct Level {
    group: GroupRef,
    bonding: Option<Homomorphism>,
}

struct Inner {
    kind: Kind,
    label: String,
    certificates: Option<Certificates>,
    cache: Mutex<Vec<Level>>,
}

/// Inverse sequence of finite groups with surjective bonding maps.
/// Level 0 of every built-in tower except [`Tower::finite_times`] is trivial.
#[derive(Clone)]
pub struct Tower {
    inner: Arc<Inner>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower").field("label", &self.inner.label).finish()
    }
}

fn derived_pro_p(s: &SupernaturalOrder) -> Option<u64> {
    match s.primes().as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().all(|p| !b.contains(p))
}

impl Tower {
    fn build(kind: Kind, label: String, certificates: Option<Certificates>) -> Tower {
        Tower {
            inner: Arc::new(Inner {
                kind,
                label,
                certificates,
                cache: Mutex::new(Vec::new()),
            }),
        }
    }

    /// The constant trivial tower.
    pub fn trivial() -> Tower {
        let certs = Certificates {
            abelian: true,
            pro_p: None,
            supernatural: SupernaturalOrder::default(),
            fiber_stable: true,
            finitely_generated_bound: Some(0),
            virtually_pronilpotent: true,
            pronilpotent: true,
            eventually_central_kernels: true,
            central_padic_core: false,
        };
        Self::build(Kind::Trivial, "1".into(), Some(certs))
    }

    /// `Z_p` as `C_{p^n}` with reduction maps.
    pub fn padic(p: u64) -> Result<Tower> {
        if !arith::is_prime(p) {
            return Err(Error::invalid(format!("p must be prime, got {p}")));
        }
        let certs = Certificates {
            abelian: true,
            pro_p: Some(p),
            supernatural: SupernaturalOrder::infinite_at([p]),
            fiber_stable: true,
            finitely_generated_bound: Some(1),
            virtually_pronilpotent: true,
            pronilpotent: true,
            eventually_central_kernels: true,
            central_padic_core: true,
        };
        Ok(Self::build(Kind::Padic(p), format!("Z_{p}"), Some(certs)))
    }

    /// Levelwise direct product.
    pub fn product(a: &Tower, b: &Tower) -> Tower {
        let certs = match (a.certificates(), b.certificates()) {
            (Some(x), Some(y)) => {
                let supernatural = x.supernatural.merge(&y.supernatural);
                let coprime = disjoint(&x.supernatural.primes(), &y.supernatural.primes());
                Some(Certificates {
                    abelian: x.abelian && y.abelian,
                    pro_p: derived_pro_p(&supernatural),
                    fiber_stable: x.fiber_stable && y.fiber_stable && coprime,
                    finitely_generated_bound: x
                        .finitely_generated_bound
                        .zip(y.finitely_generated_bound)
                        .map(|(m, n)| m + n),
                    virtually_pronilpotent: x.virtually_pronilpotent && y.virtually_pronilpotent,
                    pronilpotent: x.pronilpotent && y.pronilpotent,
                    eventually_central_kernels: x.eventually_central_kernels && y.eventually_central_kernels,
                    central_padic_core: x.central_padic_core
                        && y.central_padic_core
                        && disjoint(&x.supernatural.infinite_primes(), &y.supernatural.infinite_primes()),
                    supernatural,
                })
            }
            _ => None,
        };
        let label = format!("({})x({})", a.label(), b.label());
        Self::build(Kind::Product(a.clone(), b.clone()), label, certs)
    }

    /// `f × t`, with the finite factor carried unchanged through the bondings.
    /// Level 0 is `f` itself.
    pub fn finite_times(f: &FiniteGroup, t: &Tower) -> Tower {
        let certs = t.certificates().map(|c| {
            let supernatural = c.supernatural.merge(&SupernaturalOrder::of_finite(f.order() as u64));
            let f_primes = arith::primes_of(f.order() as u64);
            let t_primes = c.supernatural.primes();
            let elementary_same_prime = match (f_primes.as_slice(), t_primes.as_slice()) {
                ([p], [q]) => p == q && (1..f.order()).all(|x| f.element_order(x) as u64 == *p) && f.is_abelian(),
                ([], _) => true,
                _ => false,
            };
            Certificates {
                abelian: c.abelian && f.is_abelian(),
                pro_p: derived_pro_p(&supernatural),
                fiber_stable: c.fiber_stable && (disjoint(&f_primes, &t_primes) || elementary_same_prime),
                finitely_generated_bound: c
                    .finitely_generated_bound
                    .map(|n| n + f.generators().len() as u32),
                virtually_pronilpotent: c.virtually_pronilpotent,
                pronilpotent: c.pronilpotent && is_nilpotent(f),
                eventually_central_kernels: c.eventually_central_kernels,
                central_padic_core: c.central_padic_core,
                supernatural,
            }
        });
        let label = format!("{}x({})", f.label(), t.label());
        Self::build(Kind::FiniteTimes(Arc::new(f.clone()), t.clone()), label, certs)
    }

    /// `c^n` at level `n`, bonding maps forget the last coordinate.
    pub fn torsion(c: &FiniteGroup) -> Result<Tower> {
        if c.order() < 2 {
            return Err(Error::invalid("torsion tower needs a non-trivial group"));
        }
        let nilpotent = is_nilpotent(c);
        let certs = Certificates {
            abelian: c.is_abelian(),
            pro_p: derived_pro_p(&SupernaturalOrder::of_finite(c.order() as u64)),
            supernatural: SupernaturalOrder::infinite_at(arith::primes_of(c.order() as u64)),
            fiber_stable: false,
            finitely_generated_bound: None,
            virtually_pronilpotent: nilpotent,
            pronilpotent: nilpotent,
            eventually_central_kernels: c.is_abelian(),
            central_padic_core: false,
        };
        Ok(Self::build(
            Kind::Torsion(Arc::new(c.clone())),
            format!("{}^N", c.label()),
            Some(certs),
        ))
    }

    /// Finite tower from user data; `maps[i]` goes from `levels[i + 1]` to `levels[i]`.
    pub fn custom(levels: Vec<FiniteGroup>, maps: Vec<Vec<u32>>) -> Result<Tower> {
        if levels.is_empty() {
            return Err(Error::invalid("custom tower needs at least one level"));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::invalid(format!(
                "{} levels need {} maps, got {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        let levels: Vec<GroupRef> = levels.into_iter().map(Arc::new).collect();
        let mut homs = Vec::with_capacity(maps.len());
        for (i, map) in maps.into_iter().enumerate() {
            let hom = Homomorphism::new(levels[i + 1].clone(), levels[i].clone(), map)
                .map_err(|e| Error::invalid(format!("map {i}: {e}")))?;
            if !hom.is_surjective() {
                return Err(Error::NotSurjective { index: i });
            }
            homs.push(hom);
        }
        let label = format!("custom[{}]", levels.len());
        Ok(Self::build(Kind::Custom(levels, homs), label, None))
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn certificates(&self) -> Option<&Certificates> {
        self.inner.certificates.as_ref()
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.inner.kind, Kind::Custom(..))
    }

    /// Deepest available level; `None` for infinite towers.
    pub fn max_depth(&self) -> Option<usize> {
        match &self.inner.kind {
            Kind::Custom(levels, _) => Some(levels.len() - 1),
            _ => None,
        }
    }

    /// Order of level `n` without building it, saturating at `u128::MAX`.
    pub fn level_order(&self, n: usize) -> Result<u128> {
        if let Some(max) = self.max_depth() {
            if n > max {
                return Err(Error::invalid(format!("custom tower has no level {n} (deepest is {max})")));
            }
        }
        Ok(match &self.inner.kind {
            Kind::Trivial => 1,
            Kind::Padic(p) => (*p as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
            Kind::Product(a, b) => a.level_order(n)?.saturating_mul(b.level_order(n)?),
            Kind::FiniteTimes(f, t) => (f.order() as u128).saturating_mul(t.level_order(n)?),
            Kind::Torsion(c) => (c.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
            Kind::Custom(levels, _) => levels[n].order() as u128,
        })
    }

    fn realize(&self, n: usize, budget: &Budget) -> Result<()> {
        let order = self.level_order(n)?;
        budget.check_order(order)?;
        let mut cache = self.inner.cache.lock().expect("tower cache poisoned");
        while cache.len() <= n {
            let k = cache.len();
            let level = self.make_level(k, cache.last(), budget)?;
            if let Some(b) = &level.bonding {
                if !b.is_surjective() {
                    return Err(Error::NotSurjective { index: k - 1 });
                }
            }
            cache.push(level);
        }
        Ok(())
    }

    fn make_level(&self, k: usize, prev: Option<&Level>, budget: &Budget) -> Result<Level> {
        let group: GroupRef = match &self.inner.kind {
            Kind::Trivial => Arc::new(make_cyclic(1)?),
            Kind::Padic(p) => Arc::new(make_cyclic(p.pow(k as u32) as usize)?),
            Kind::Product(a, b) => Arc::new(direct_product(&*a.level(k, budget)?, &*b.level(k, budget)?, budget)?),
            Kind::FiniteTimes(f, t) => Arc::new(direct_product(f, &*t.level(k, budget)?, budget)?),
            Kind::Torsion(c) => match prev {
                None => Arc::new(make_cyclic(1)?.with_label("1")),
                Some(prev) => Arc::new(
                    direct_product(&prev.group, c, budget)?.with_label(format!("{}^{k}", c.label())),
                ),
            },
            Kind::Custom(levels, _) => levels[k].clone(),
        };
        let bonding = match prev {
            None => None,
            Some(prev) => {
                let map: Vec<u32> = match &self.inner.kind {
                    Kind::Trivial => vec![0],
                    Kind::Padic(p) => {
                        let m = p.pow(k as u32 - 1) as usize;
                        (0..group.order()).map(|x| (x % m) as u32).collect()
                    }
                    Kind::Product(a, b) => {
                        let fa = a.bonding(k, budget)?;
                        let fb = b.bonding(k, budget)?;
                        let (nb, nb_prev) = (fb.source().order(), fb.target().order());
                        (0..group.order())
                            .map(|x| (fa.apply(x / nb) * nb_prev + fb.apply(x % nb)) as u32)
                            .collect()
                    }
                    Kind::FiniteTimes(_, t) => {
                        let ft = t.bonding(k, budget)?;
                        let (nt, nt_prev) = (ft.source().order(), ft.target().order());
                        (0..group.order())
                            .map(|x| ((x / nt) * nt_prev + ft.apply(x % nt)) as u32)
                            .collect()
                    }
                    Kind::Torsion(c) => (0..group.order()).map(|x| (x / c.order()) as u32).collect(),
                    Kind::Custom(_, maps) => maps[k - 1].map().to_vec(),
                };
                Some(Homomorphism::from_trusted(group.clone(), prev.group.clone(), map))
            }
        };
        Ok(Level { group, bonding })
    }

    /// Level `n`, generated on first use.
    pub fn level(&self, n: usize, budget: &Budget) -> Result<GroupRef> {
        self.realize(n, budget)?;
        Ok(self.inner.cache.lock().expect("tower cache poisoned")[n].group.clone())
    }

    /// Bonding map from level `n` to level `n − 1`.
    pub fn bonding(&self, n: usize, budget: &Budget) -> Result<Homomorphism> {
        if n == 0 {
            return Err(Error::invalid("level 0 has no bonding map"));
        }
        self.realize(n, budget)?;
        Ok(self.inner.cache.lock().expect("tower cache poisoned")[n]
            .bonding
            .clone()
            .expect("levels above 0 carry a bonding"))
    }

    /// Composite map from level `from` down to level `to`.
    pub fn bonding_between(&self, from: usize, to: usize, budget: &Budget) -> Result<Homomorphism> {
        if to > from {
            return Err(Error::invalid(format!("cannot map level {from} up to level {to}")));
        }
        let mut acc = Homomorphism::identity(self.level(from, budget)?);
        for k in (to + 1..=from).rev() {
            acc = hom_compose(&self.bonding(k, budget)?, &acc)?;
        }
        Ok(acc)
    }

    /// Kernel of the map from level `from` to level `to`.
    pub fn kernel_between(&self, from: usize, to: usize, budget: &Budget) -> Result<Subgroup> {
        Ok(self.bonding_between(from, to, budget)?.kernel())
    }

    /// Decomposition of a pronilpotent built-in tower into pro-p factors,
    /// one per prime dividing the order, in increasing prime order.
    pub fn sylow_factors(&self, budget: &Budget) -> Result<Option<Vec<(u64, Tower)>>> {
        let certs = match self.certificates() {
            Some(c) if c.pronilpotent => c,
            _ => return Ok(None),
        };
        let primes = certs.supernatural.primes();
        if primes.len() <= 1 {
            return Ok(Some(primes.into_iter().map(|p| (p, self.clone())).collect()));
        }
        let mut out: BTreeMap<u64, Tower> = BTreeMap::new();
        let mut absorb = |p: u64, t: Tower| {
            let merged = match out.remove(&p) {
                Some(prev) => Tower::product(&prev, &t),
                None => t,
            };
            out.insert(p, merged);
        };
        match &self.inner.kind {
            Kind::Trivial | Kind::Padic(_) | Kind::Custom(..) => unreachable!("single-prime or uncertified"),
            Kind::Product(a, b) => {
                for side in [a, b] {
                    for (p, t) in side.sylow_factors(budget)?.expect("factors of pronilpotent product") {
                        absorb(p, t);
                    }
                }
            }
            Kind::FiniteTimes(f, t) => {
                let t_factors: BTreeMap<u64, Tower> =
                    t.sylow_factors(budget)?.expect("factors of pronilpotent tower").into_iter().collect();
                let f_sylows = sylow_sets(f).expect("nilpotent finite factor");
                let mut f_parts: BTreeMap<u64, FiniteGroup> = BTreeMap::new();
                for (p, set) in f_sylows {
                    let (sub, _) = f.subgroup_as_group(&Subgroup::from_set_unchecked(f, set));
                    f_parts.insert(p, sub.with_label(format!("{}_{p}", f.label())));
                }
                for p in primes {
                    let tower_part = t_factors.get(&p).cloned().unwrap_or_else(Tower::trivial);
                    let factor = match f_parts.get(&p) {
                        Some(fp) => Tower::finite_times(fp, &tower_part),
                        None => tower_part,
                    };
                    absorb(p, factor);
                }
            }
            Kind::Torsion(c) => {
                for (p, set) in sylow_sets(c).expect("nilpotent torsion base") {
                    let (sub, _) = c.subgroup_as_group(&Subgroup::from_set_unchecked(c, set));
                    absorb(p, Tower::torsion(&sub.with_label(format!("{}_{p}", c.label())))?);
                }
            }
        }
        Ok(Some(out.into_iter().collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::all_subgroups;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn padic_levels() {
        let t = Tower::padic(2).unwrap();
        assert_eq!(t.level(3, &b()).unwrap().order(), 8);
        assert_eq!(t.kernel_between(4, 3, &b()).unwrap().order(), 2);
        let t3 = Tower::padic(3).unwrap();
        assert_eq!(t3.level(2, &b()).unwrap().order(), 9);
        assert_eq!(t3.bonding(2, &b()).unwrap().apply(1), 1);
        assert!(Tower::padic(4).is_err());
    }

    #[test]
    fn product_levels_and_certificates() {
        let t = Tower::product(&Tower::padic(2).unwrap(), &Tower::padic(3).unwrap());
        assert_eq!(t.level(2, &b()).unwrap().order(), 36);
        let c = t.certificates().unwrap();
        assert_eq!(c.supernatural.infinite_primes(), vec![2, 3]);
        assert!(c.central_padic_core && c.pro_p.is_none());
        let same = Tower::product(&Tower::padic(2).unwrap(), &Tower::padic(2).unwrap());
        assert!(!same.certificates().unwrap().central_padic_core);
        let with_trivial = Tower::product(&Tower::padic(2).unwrap(), &Tower::trivial());
        let p = Tower::padic(2).unwrap();
        for n in 0..5 {
            assert_eq!(
                with_trivial.level(n, &b()).unwrap().order_profile(),
                p.level(n, &b()).unwrap().order_profile()
            );
        }
    }

    #[test]
    fn finite_times_levels() {
        let c2 = make_cyclic(2).unwrap();
        let t = Tower::finite_times(&c2, &Tower::padic(2).unwrap());
        assert_eq!(t.level(3, &b()).unwrap().order(), 16);
        let s = &t.certificates().unwrap().supernatural;
        assert_eq!(s.exponents.get(&2), Some(&Exponent::Infinite));
        assert_eq!(s.exponents.len(), 1);
        let trivial = make_cyclic(1).unwrap();
        let same = Tower::finite_times(&trivial, &Tower::padic(3).unwrap());
        assert_eq!(same.level(2, &b()).unwrap().order(), 9);
    }

    #[test]
    fn torsion_levels() {
        let c2 = make_cyclic(2).unwrap();
        let t = Tower::torsion(&c2).unwrap();
        assert_eq!(t.level(0, &b()).unwrap().order(), 1);
        assert_eq!(t.level(3, &b()).unwrap().order(), 8);
        // (a, b, c) at index 4a + 2b + c maps to (a, b) at 2a + b
        let f = t.bonding(3, &b()).unwrap();
        for x in 0..8 {
            assert_eq!(f.apply(x), x / 2);
        }
        assert!(t.certificates().unwrap().finitely_generated_bound.is_none());
        assert!(t.level(20, &b()).unwrap_err().is_budget());
    }

    #[test]
    fn custom_towers() {
        let p = Tower::padic(2).unwrap();
        let levels: Vec<FiniteGroup> = (0..4).map(|n| (*p.level(n, &b()).unwrap()).clone()).collect();
        let maps: Vec<Vec<u32>> = (1..4).map(|n| p.bonding(n, &b()).unwrap().map().to_vec()).collect();
        let t = Tower::custom(levels, maps).unwrap();
        assert_eq!(t.max_depth(), Some(3));
        assert!(t.certificates().is_none());

        let c4 = make_cyclic(4).unwrap();
        let doubling: Vec<u32> = (0..4).map(|x| (2 * x % 4) as u32).collect();
        assert!(matches!(
            Tower::custom(vec![c4.clone(), c4], vec![doubling]),
            Err(Error::NotSurjective { index: 0 })
        ));
        assert!(Tower::custom(vec![], vec![]).is_err());
    }

    #[test]
    fn sylow_factorization() {
        let t = Tower::product(&Tower::padic(2).unwrap(), &Tower::padic(3).unwrap());
        let f = t.sylow_factors(&b()).unwrap().unwrap();
        assert_eq!(f.iter().map(|(p, _)| *p).collect::<Vec<_>>(), vec![2, 3]);
        let c6 = make_cyclic(6).unwrap();
        let ft = Tower::finite_times(&c6, &Tower::padic(2).unwrap());
        let f = ft.sylow_factors(&b()).unwrap().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].1.level(2, &b()).unwrap().order(), 8);
        assert_eq!(f[1].1.level(2, &b()).unwrap().order(), 3);
        let s3 = crate::group::make_dihedral(3, &b()).unwrap();
        assert!(Tower::finite_times(&s3, &Tower::padic(2).unwrap())
            .sylow_factors(&b())
            .unwrap()
            .is_none());
    }

    #[test]
    fn kernels_multiply_out() {
        let towers = [
            Tower::padic(3).unwrap(),
            Tower::torsion(&make_cyclic(2).unwrap()).unwrap(),
            Tower::finite_times(&make_cyclic(2).unwrap(), &Tower::padic(2).unwrap()),
        ];
        for t in &towers {
            for n in 1..5 {
                let k = t.kernel_between(n, n - 1, &b()).unwrap();
                assert_eq!(
                    k.order() * t.level(n - 1, &b()).unwrap().order(),
                    t.level(n, &b()).unwrap().order()
                );
            }
        }
        let _ = all_subgroups(&towers[0].level(2, &b()).unwrap(), &b()).unwrap();
    }
}
