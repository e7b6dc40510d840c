//! Verdicts on the limit spaces `S(G)` and `N(G)`.
//!
//! The ladder is: finite, countable of type `ω^k·n+1`, Cantor set, and
//! otherwise uncountable but not perfect. A verdict is certified only when
//! every step rests on tower certificates or exact finite computation.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{center, derived_subgroup, frattini, psi};
use crate::ordinal::OrdinalSignature;
use crate::subspace::{SpaceChain, Tri};
use crate::tower::{Certificates, Tower};

/// Which subgroup space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// All closed subgroups.
    S,
    /// Closed normal subgroups.
    N,
}

impl SpaceKind {
    pub fn normal_only(self) -> bool {
        self == SpaceKind::N
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::S => "S",
            SpaceKind::N => "N",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Finite { count: u64 },
    Countable { signature: OrdinalSignature, k: u32, n: u64 },
    Cantor,
    ContinuumMixed,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Finite { .. } => "FINITE",
            Verdict::Countable { .. } => "COUNTABLE",
            Verdict::Cantor => "CANTOR",
            Verdict::ContinuumMixed => "CONTINUUM_MIXED",
        }
    }

    /// Signature of a scattered verdict: `ω^0·count` for finite spaces.
    pub fn signature(&self) -> Option<OrdinalSignature> {
        match self {
            Verdict::Finite { count } => OrdinalSignature::new(0, *count).ok(),
            Verdict::Countable { signature, .. } => Some(signature.clone()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub space: SpaceKind,
    pub verdict: Verdict,
    pub certified: bool,
    pub evidence: Vec<String>,
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (k, n) = match &self.verdict {
            Verdict::Finite { count } => (Some(0), Some(*count)),
            Verdict::Countable { k, n, .. } => (Some(*k), Some(*n)),
            _ => (None, None),
        };
        let mut st = s.serialize_struct("Classification", 7)?;
        st.serialize_field("space", &self.space.to_string())?;
        st.serialize_field("verdict", self.verdict.name())?;
        st.serialize_field("k", &k)?;
        st.serialize_field("n", &n)?;
        st.serialize_field("signature", &self.verdict.signature().map(|x| x.to_string()))?;
        st.serialize_field("certified", &self.certified)?;
        st.serialize_field("evidence", &self.evidence)?;
        st.end()
    }
}

/// Perfectness verdict with its justification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Perfectness {
    pub value: Tri,
    pub certified: bool,
    pub evidence: Vec<String>,
}

/// Rejects certificate sets no profinite group can satisfy.
pub fn check_certificates(c: &Certificates) -> Result<()> {
    let primes = c.supernatural.primes();
    if let Some(p) = c.pro_p {
        if primes.iter().any(|&q| q != p) {
            return Err(Error::Certificates(format!("pro-{p} group with order {}", c.supernatural)));
        }
    }
    if c.abelian && !c.pronilpotent {
        return Err(Error::Certificates("abelian but not pronilpotent".into()));
    }
    if c.pronilpotent && !c.virtually_pronilpotent {
        return Err(Error::Certificates("pronilpotent but not virtually pronilpotent".into()));
    }
    if c.abelian && !c.eventually_central_kernels {
        return Err(Error::Certificates("abelian but kernels not central".into()));
    }
    if c.supernatural.is_finite() && c.finitely_generated_bound.is_none() {
        return Err(Error::Certificates("finite group declared not finitely generated".into()));
    }
    if c.central_padic_core && !c.eventually_central_kernels {
        return Err(Error::Certificates("open central core but kernels not central".into()));
    }
    Ok(())
}

fn certificates(t: &Tower) -> Result<Option<&Certificates>> {
    match t.certificates() {
        Some(c) => {
            check_certificates(c)?;
            Ok(Some(c))
        }
        None => Ok(None),
    }
}

/// Depth range `d0..=depth` examined by window-based steps.
fn analysis_start(depth: usize, window: usize) -> Result<usize> {
    if depth == 0 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    Ok(depth.saturating_sub(window).max(1).min(depth - 1))
}

fn index_sequence(t: &Tower, from: usize, to: usize, normal: bool, budget: &Budget) -> Result<Vec<usize>> {
    (from..=to)
        .map(|d| {
            let g = t.level(d, budget)?;
            let inner = if normal { psi(&g, budget)? } else { frattini(&g, budget)? };
            Ok(inner.index())
        })
        .collect()
}

fn perfectness_s(t: &Tower, depth: usize, window: usize, budget: &Budget) -> Result<Perfectness> {
    let _ = analysis_start(depth, window)?;
    match certificates(t)? {
        Some(c) => {
            let primes = c.supernatural.primes();
            match c.finitely_generated_bound {
                None => Ok(Perfectness {
                    value: Tri::Yes,
                    certified: true,
                    evidence: vec!["not finitely generated: no open subgroup is isolated".into()],
                }),
                Some(b) if c.virtually_pronilpotent => Ok(Perfectness {
                    value: Tri::No,
                    certified: true,
                    evidence: vec![format!(
                        "topologically generated by at most {b} elements, virtually pronilpotent, primes {primes:?}: an open subgroup is isolated"
                    )],
                }),
                Some(_) => Ok(Perfectness {
                    value: Tri::Unknown,
                    certified: false,
                    evidence: vec!["finitely generated but not certified virtually pronilpotent".into()],
                }),
            }
        }
        None => {
            let from = depth.saturating_sub(window);
            let seq = index_sequence(t, from, depth, false, budget)?;
            Ok(Perfectness {
                value: Tri::Unknown,
                certified: false,
                evidence: vec![format!("uncertified tower; |G_d:Phi(G_d)| for d={from}..={depth}: {seq:?}")],
            })
        }
    }
}

/// Whether `S(G)` (or `N(G)`) has no isolated points.
pub fn perfectness(t: &Tower, space: SpaceKind, depth: usize, window: usize, budget: &Budget) -> Result<Perfectness> {
    let s = perfectness_s(t, depth, window, budget)?;
    if space == SpaceKind::S {
        return Ok(s);
    }
    let c = certificates(t)?;
    if s.value == Tri::No {
        let mut evidence = s.evidence.clone();
        evidence.push("a perfect N(G) forces a perfect S(G), so N(G) is not perfect".into());
        return Ok(Perfectness {
            value: Tri::No,
            certified: s.certified,
            evidence,
        });
    }
    if let Some(c) = c {
        if c.pronilpotent {
            let mut evidence = s.evidence.clone();
            evidence.push("pronilpotent: S(G) perfect implies N(G) perfect".into());
            return Ok(Perfectness {
                value: s.value,
                certified: s.certified,
                evidence,
            });
        }
    }
    let from = depth.saturating_sub(window);
    let seq = index_sequence(t, from, depth, true, budget)?;
    Ok(Perfectness {
        value: Tri::Unknown,
        certified: false,
        evidence: vec![format!("|G_d:Psi(G_d)| for d={from}..={depth}: {seq:?}")],
    })
}

struct Count {
    n: u64,
    certified: bool,
    evidence: Vec<String>,
}

/// Number of depth-`d0` points whose ball classes keep at least two members
/// through `depth`; with `growing`, the class must also get larger across
/// the window, which discards balls holding a fixed finite set of points.
fn split_count(chain: &mut SpaceChain, d0: usize, depth: usize, growing: bool) -> Result<u64> {
    let len = chain.level(d0)?.len();
    let mut n = 0;
    for p in 0..len {
        let sizes = (d0 + 1..=depth)
            .map(|e| chain.ball_class(d0, p, e).map(|b| b.len()))
            .collect::<Result<Vec<_>>>()?;
        let split = sizes.iter().all(|&s| s >= 2);
        let grows = sizes.len() < 2 || sizes.last() > sizes.first();
        if split && (!growing || grows) {
            n += 1;
        }
    }
    Ok(n)
}

fn top_count(t: &Tower, space: SpaceKind, depth: usize, window: usize, budget: &Budget) -> Result<Count> {
    let c = certificates(t)?.expect("countable branch needs certificates").clone();
    let primes = c.supernatural.primes();
    if primes.len() > 1 {
        if let Some(factors) = t.sylow_factors(budget)? {
            let mut evidence = vec![format!("pronilpotent: factored into Sylow towers at primes {primes:?}")];
            let mut signature = OrdinalSignature::new(0, 1)?;
            let mut certified = true;
            for (p, f) in factors {
                let sub = classify_space(&f, space, depth, window, budget)?;
                let sig = sub.verdict.signature().ok_or_else(|| {
                    Error::Certificates(format!("Sylow factor at {p} of a countable space is {}", sub.verdict.name()))
                })?;
                evidence.push(format!("factor at {p}: {} ({sig})", sub.verdict.name()));
                certified &= sub.certified;
                signature = signature.product(&sig)?;
            }
            return Ok(Count {
                n: signature.coefficient(),
                certified,
                evidence,
            });
        }
    }
    let d0 = analysis_start(depth, window)?;
    let mut chain = SpaceChain::new(t, space.normal_only(), budget);
    let exact = c.fiber_stable && (space == SpaceKind::S || c.abelian);
    let n = split_count(&mut chain, d0, depth, !exact)?;
    let persistent = chain.persistent_finite_points(d0, depth - d0)?.len();
    let mut evidence = vec![if exact {
        format!("{n} points at depth {d0} keep ball classes of size >= 2 through depth {depth}")
    } else {
        format!("{n} points at depth {d0} keep growing ball classes of size >= 2 through depth {depth}")
    }];
    evidence.push(format!("{persistent} points at depth {d0} lift with constant order through depth {depth}"));
    if exact {
        evidence.push("fiber-stable certificate: count is exact".into());
    } else {
        evidence.push("window estimate: no fiber-stable certificate".into());
    }
    if n == 0 {
        return Err(Error::Certificates("countable space with no non-open point".into()));
    }
    Ok(Count {
        n,
        certified: exact,
        evidence,
    })
}

/// Classify `S(G)` or `N(G)` from the levels up to `depth`; window-based
/// steps look back `window` levels from `depth`.
pub fn classify_space(
    t: &Tower,
    space: SpaceKind,
    depth: usize,
    window: usize,
    budget: &Budget,
) -> Result<Classification> {
    let d0 = analysis_start(depth, window)?;
    if let Some(max) = t.max_depth() {
        if depth > max {
            return Err(Error::invalid(format!("tower has no level {depth} (deepest is {max})")));
        }
    }
    let certs = certificates(t)?.cloned();
    let normal = space.normal_only();

    if let Some(c) = &certs {
        // (a) finite
        if c.supernatural.is_finite() {
            let mut chain = SpaceChain::new(t, normal, budget);
            let count = chain.level(d0)?.len() as u64;
            return Ok(Classification {
                space,
                verdict: Verdict::Finite { count },
                certified: true,
                evidence: vec![
                    format!("finite order {}: the tower is eventually constant", c.supernatural),
                    format!("{count} points at depth {d0}"),
                ],
            });
        }
        // (b) countable
        let inf = c.supernatural.infinite_primes();
        if c.central_padic_core && c.eventually_central_kernels && !inf.is_empty() {
            let k = inf.len() as u32;
            let count = top_count(t, space, depth, window, budget)?;
            let mut evidence = vec![format!(
                "open central subgroup is a product of Z_p over p in {inf:?}; finitely many primes: countable"
            )];
            evidence.push(format!("k = {k} primes with infinite exponent"));
            evidence.extend(count.evidence);
            return Ok(Classification {
                space,
                verdict: Verdict::Countable {
                    signature: OrdinalSignature::new(k, count.n)?,
                    k,
                    n: count.n,
                },
                certified: count.certified,
                evidence,
            });
        }
    } else if let Some(v) = finite_by_window(t, normal, d0, depth, budget)? {
        return Ok(v.with_space(space));
    }

    // (c) Cantor
    let perfect = perfectness(t, space, depth, window, budget)?;
    if perfect.value == Tri::Yes {
        let mut evidence = perfect.evidence;
        evidence.push("perfect and countably based: homeomorphic to the Cantor set".into());
        return Ok(Classification {
            space,
            verdict: Verdict::Cantor,
            certified: perfect.certified,
            evidence,
        });
    }

    // (d) everything else
    let mut evidence = perfect.evidence.clone();
    let mut certified = false;
    if let Some(c) = &certs {
        evidence.push(format!(
            "no open central Z_p-core with distinct primes (order {}): uncountable, of size 2^w(G)",
            c.supernatural
        ));
        certified = perfect.certified;
    } else {
        let mut chain = SpaceChain::new(t, normal, budget);
        let growth = chain.growth_sequence(depth)?;
        let increasing = growth[d0..].windows(2).all(|w| w[1] > w[0]);
        evidence.push(format!("growth sequence {growth:?}"));
        evidence.push(if increasing {
            "level spaces keep growing: either countable or of size 2^w(G); not decided from finite data".into()
        } else {
            "growth not strictly increasing over the window; verdict is a default".into()
        });
    }
    evidence.push(format!("perfectness {:?}: not a Cantor set", perfect.value));
    Ok(Classification {
        space,
        verdict: Verdict::ContinuumMixed,
        certified,
        evidence,
    })
}

impl Classification {
    fn with_space(mut self, space: SpaceKind) -> Self {
        self.space = space;
        self
    }
}

/// Finite verdict for an uncertified tower whose levels stopped changing.
fn finite_by_window(t: &Tower, normal: bool, d0: usize, depth: usize, budget: &Budget) -> Result<Option<Classification>> {
    let mut chain = SpaceChain::new(t, normal, budget);
    let g0 = t.level(d0, budget)?;
    for d in d0 + 1..=depth {
        let g = t.level(d, budget)?;
        if g.order() != g0.order() || chain.level(d)?.len() != chain.level(d0)?.len() {
            return Ok(None);
        }
        let n = chain.level(d - 1)?.len();
        for p in 0..n {
            if chain.fiber(d - 1, p)?.len() != 1 {
                return Ok(None);
            }
        }
    }
    let count = chain.level(depth)?.len() as u64;
    Ok(Some(Classification {
        space: SpaceKind::S,
        verdict: Verdict::Finite { count },
        certified: false,
        evidence: vec![format!(
            "levels {d0}..={depth} have equal order and lattices with singleton fibers; no certificate"
        )],
    }))
}

/// Per-depth structural indices and where they stop changing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TcountReport {
    pub center_index: Vec<usize>,
    pub derived_order: Vec<usize>,
    pub frattini_index: Vec<usize>,
    pub psi_index: Vec<usize>,
    pub abelianization_order: Vec<usize>,
    pub summary: TcountSummary,
}

/// Final value of each sequence when its last three entries agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TcountSummary {
    pub center_index: Option<usize>,
    pub derived_order: Option<usize>,
    pub frattini_index: Option<usize>,
    pub psi_index: Option<usize>,
}

fn stable_tail(seq: &[usize]) -> Option<usize> {
    let tail = &seq[seq.len().saturating_sub(3)..];
    match tail {
        [first, rest @ ..] if rest.iter().all(|x| x == first) && tail.len() >= 2 => Some(*first),
        _ => None,
    }
}

/// `|G_d : Z(G_d)|`, `|G_d'|`, `|G_d : Φ(G_d)|` and `|G_d : Ψ(G_d)|` for `d = 0..=depth`.
pub fn tcount_report(t: &Tower, depth: usize, budget: &Budget) -> Result<TcountReport> {
    let mut r = TcountReport {
        center_index: Vec::new(),
        derived_order: Vec::new(),
        frattini_index: Vec::new(),
        psi_index: Vec::new(),
        abelianization_order: Vec::new(),
        summary: TcountSummary {
            center_index: None,
            derived_order: None,
            frattini_index: None,
            psi_index: None,
        },
    };
    for d in 0..=depth {
        let g = t.level(d, budget)?;
        r.center_index.push(center(&g).index());
        let derived = derived_subgroup(&g);
        r.derived_order.push(derived.order());
        r.abelianization_order.push(derived.index());
        r.frattini_index.push(frattini(&g, budget)?.index());
        r.psi_index.push(psi(&g, budget)?.index());
    }
    r.summary = TcountSummary {
        center_index: stable_tail(&r.center_index),
        derived_order: stable_tail(&r.derived_order),
        frattini_index: stable_tail(&r.frattini_index),
        psi_index: stable_tail(&r.psi_index),
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_cyclic;

    fn b() -> Budget {
        Budget::default()
    }

    fn countable(c: &Classification) -> (u32, u64) {
        match &c.verdict {
            Verdict::Countable { k, n, .. } => (*k, *n),
            v => panic!("expected countable, got {v:?}"),
        }
    }

    #[test]
    fn padic_is_omega_plus_one() {
        let c = classify_space(&Tower::padic(2).unwrap(), SpaceKind::S, 6, 3, &b()).unwrap();
        assert_eq!(countable(&c), (1, 1));
        assert!(c.certified);
        assert_eq!(c.verdict.signature().unwrap().to_string(), "w^1*1+1");
    }

    #[test]
    fn product_is_omega_squared() {
        let t = Tower::product(&Tower::padic(2).unwrap(), &Tower::padic(3).unwrap());
        let c = classify_space(&t, SpaceKind::S, 4, 3, &b()).unwrap();
        assert_eq!(countable(&c), (2, 1));
        assert!(c.certified);
    }

    #[test]
    fn finite_times_has_two_top_points() {
        let t = Tower::finite_times(&make_cyclic(2).unwrap(), &Tower::padic(2).unwrap());
        let c = classify_space(&t, SpaceKind::S, 6, 3, &b()).unwrap();
        assert_eq!(countable(&c), (1, 2));
        assert!(c.certified);
        let t3 = Tower::finite_times(&make_cyclic(3).unwrap(), &Tower::padic(2).unwrap());
        let c3 = classify_space(&t3, SpaceKind::S, 6, 3, &b()).unwrap();
        assert_eq!(countable(&c3), (1, 2));
        assert!(c3.certified);
    }

    #[test]
    fn torsion_is_cantor() {
        let t = Tower::torsion(&make_cyclic(2).unwrap()).unwrap();
        let c = classify_space(&t, SpaceKind::S, 4, 3, &b()).unwrap();
        assert_eq!(c.verdict, Verdict::Cantor);
        assert!(c.certified);
        let p = perfectness(&t, SpaceKind::S, 4, 3, &b()).unwrap();
        assert_eq!(p.value, Tri::Yes);
    }

    #[test]
    fn z2_squared_is_mixed() {
        let t = Tower::product(&Tower::padic(2).unwrap(), &Tower::padic(2).unwrap());
        let c = classify_space(&t, SpaceKind::S, 3, 2, &b()).unwrap();
        assert_eq!(c.verdict, Verdict::ContinuumMixed);
    }

    #[test]
    fn finite_tower() {
        let t = Tower::finite_times(&make_cyclic(6).unwrap(), &Tower::trivial());
        let c = classify_space(&t, SpaceKind::S, 3, 2, &b()).unwrap();
        assert_eq!(c.verdict, Verdict::Finite { count: 4 });
        assert!(c.certified);
    }

    #[test]
    fn json_field_order() {
        let c = classify_space(&Tower::padic(3).unwrap(), SpaceKind::S, 4, 2, &b()).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let keys = ["\"space\"", "\"verdict\"", "\"k\"", "\"n\"", "\"signature\"", "\"certified\"", "\"evidence\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
    }

    #[test]
    fn contradictory_certificates() {
        let mut c = Tower::padic(2).unwrap().certificates().unwrap().clone();
        c.pro_p = Some(3);
        assert!(matches!(check_certificates(&c), Err(Error::Certificates(_))));
        let mut c = Tower::padic(2).unwrap().certificates().unwrap().clone();
        c.pronilpotent = false;
        assert!(check_certificates(&c).is_err());
    }

    #[test]
    fn tcount() {
        let t = Tower::finite_times(&make_cyclic(2).unwrap(), &Tower::padic(2).unwrap());
        let r = tcount_report(&t, 5, &b()).unwrap();
        assert_eq!(r.summary.frattini_index, Some(4));
        assert!(r.center_index.iter().all(|&x| x == 1));
        let tor = Tower::torsion(&make_cyclic(2).unwrap()).unwrap();
        let r = tcount_report(&tor, 4, &b()).unwrap();
        assert_eq!(r.frattini_index, vec![1, 2, 4, 8, 16]);
        assert_eq!(r.summary.frattini_index, None);
    }
}
