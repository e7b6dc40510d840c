//! Finite levels of the subgroup spaces `S(G)` and `N(G)`.
//!
//! The points at depth `d` are the subgroups (or normal subgroups) of level
//! `d`. Each point sends to its image one level up, and the set of depth-`e`
//! points lying over a depth-`d` point is the finite trace of the basic
//! neighbourhood `{K : K·ker = H·ker}` with `ker` the kernel down to level
//! `d`. A thread is identified with its depth-`d` point; its behaviour is
//! read off from how these ball classes evolve over a window of levels.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::hom_image;
use crate::lattice::{all_subgroups, frattini, normal_lattice, psi, LatticeReport, Subgroup};
use crate::tower::Tower;

/// Three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// Subgroups of one tower level, with their images one level up.
#[derive(Debug, Clone)]
pub struct LevelSpace {
    pub depth: usize,
    pub normal_only: bool,
    pub points: Arc<LatticeReport>,
    /// `down_map[i]` is the index at depth − 1 of the image of point `i`;
    /// empty at depth 0.
    pub down_map: Vec<usize>,
}

impl LevelSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Memoized sequence of level spaces for one tower.
pub struct SpaceChain {
    tower: Tower,
    normal_only: bool,
    budget: Budget,
    levels: Vec<LevelSpace>,
}

impl SpaceChain {
    pub fn new(tower: &Tower, normal_only: bool, budget: &Budget) -> Self {
        SpaceChain {
            tower: tower.clone(),
            normal_only,
            budget: *budget,
            levels: Vec::new(),
        }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn normal_only(&self) -> bool {
        self.normal_only
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    fn lattice(&self, d: usize) -> Result<LatticeReport> {
        let g = self.tower.level(d, &self.budget)?;
        if self.normal_only {
            normal_lattice(&g, &self.budget)
        } else {
            all_subgroups(&g, &self.budget)
        }
    }

    /// Fails early when level `d` is beyond the budget for enumeration.
    pub fn check_depth(&self, d: usize) -> Result<()> {
        let order = self.tower.level_order(d)?;
        self.budget.check_order(order)?;
        let limit = if self.normal_only {
            self.budget.max_order
        } else {
            self.budget.max_lattice_order
        };
        if order > limit as u128 {
            return Err(Error::budget("level order for subgroup enumeration", order, limit as u128));
        }
        Ok(())
    }

    /// Level space at depth `d`, building shallower ones as needed.
    pub fn level(&mut self, d: usize) -> Result<&LevelSpace> {
        if self.levels.len() <= d {
            self.check_depth(d)?;
        }
        while self.levels.len() <= d {
            let k = self.levels.len();
            let points = Arc::new(self.lattice(k)?);
            let down_map = if k == 0 {
                Vec::new()
            } else {
                let bonding = self.tower.bonding(k, &self.budget)?;
                let upper = &self.levels[k - 1].points;
                let map: Vec<usize> = points
                    .subgroups
                    .iter()
                    .map(|h| {
                        let img = hom_image(&bonding, h)?;
                        upper
                            .index_of(&img)
                            .ok_or_else(|| Error::invalid(format!("image of a point at depth {k} is not a point")))
                    })
                    .collect::<Result<_>>()?;
                let mut hit = vec![false; upper.len()];
                for &j in &map {
                    hit[j] = true;
                }
                if let Some(missed) = hit.iter().position(|&x| !x) {
                    return Err(Error::invalid(format!(
                        "point {missed} at depth {} has no preimage at depth {k}",
                        k - 1
                    )));
                }
                map
            };
            self.levels.push(LevelSpace {
                depth: k,
                normal_only: self.normal_only,
                points,
                down_map,
            });
        }
        Ok(&self.levels[d])
    }

    fn check_point(&mut self, d: usize, point: usize) -> Result<()> {
        let n = self.level(d)?.len();
        if point >= n {
            return Err(Error::invalid(format!("no point {point} at depth {d} ({n} points)")));
        }
        Ok(())
    }

    /// Depth `d + 1` points lying over `point`.
    pub fn fiber(&mut self, d: usize, point: usize) -> Result<Vec<usize>> {
        self.check_point(d, point)?;
        let next = self.level(d + 1)?;
        Ok(next
            .down_map
            .iter()
            .enumerate()
            .filter(|&(_, &j)| j == point)
            .map(|(i, _)| i)
            .collect())
    }

    /// Depth `e` points whose image at depth `d` is `point`.
    pub fn ball_class(&mut self, d: usize, point: usize, e: usize) -> Result<Vec<usize>> {
        if e < d {
            return Err(Error::invalid(format!("ball class depth {e} is above {d}")));
        }
        self.check_point(d, point)?;
        self.level(e)?;
        let mut current = vec![point];
        for k in d + 1..=e {
            let map = &self.levels[k].down_map;
            current = (0..map.len()).filter(|i| current.contains(&map[*i])).collect();
        }
        Ok(current)
    }

    pub fn point(&mut self, d: usize, i: usize) -> Result<Subgroup> {
        self.check_point(d, i)?;
        Ok(self.levels[d].points.subgroups[i].clone())
    }

    pub fn index_of(&mut self, d: usize, h: &Subgroup) -> Result<usize> {
        let g = self.tower.level(d, &self.budget)?;
        if !h.belongs_to(&g) {
            return Err(Error::Mismatch(format!("point does not belong to level {d}")));
        }
        self.level(d)?
            .points
            .index_of(h)
            .ok_or_else(|| Error::invalid(format!("subgroup is not a point at depth {d}")))
    }

    /// Thread through `point` that picks the smallest lift at every deeper
    /// level; returns the point indices at depths `d..=d + window`.
    pub fn minimal_thread(&mut self, d: usize, point: usize, window: usize) -> Result<Vec<usize>> {
        let mut thread = vec![point];
        for k in d..d + window {
            let fib = self.fiber(k, *thread.last().expect("non-empty"))?;
            // canonical order sorts by order first, so the smallest index is a smallest lift
            thread.push(*fib.iter().min().expect("down map is surjective"));
        }
        Ok(thread)
    }

    /// `|H : Φ(H)|` (or `|H : Ψ(H)|` on the normal space) for a point.
    pub fn frattini_index(&mut self, d: usize, point: usize) -> Result<usize> {
        let h = self.point(d, point)?;
        let g = self.tower.level(d, &self.budget)?;
        let (sub, _) = g.subgroup_as_group(&h);
        let inner = if self.normal_only {
            psi(&sub, &self.budget)?
        } else {
            frattini(&sub, &self.budget)?
        };
        Ok(sub.order() / inner.order())
    }

    /// Graphviz rendering of the map from depth `d + 1` onto depth `d`.
    pub fn fiber_dot(&mut self, d: usize) -> Result<String> {
        self.level(d + 1)?;
        let upper = &self.levels[d];
        let lower = &self.levels[d + 1];
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"fibers_{d}_{}\" {{", d + 1);
        for (i, h) in upper.points.subgroups.iter().enumerate() {
            let _ = writeln!(out, "  a{i} [label=\"d{d}:o={}\"];", h.order());
        }
        for (i, h) in lower.points.subgroups.iter().enumerate() {
            let _ = writeln!(out, "  b{i} [label=\"d{}:o={}\"];", d + 1, h.order());
        }
        for (i, &j) in lower.down_map.iter().enumerate() {
            let _ = writeln!(out, "  b{i} -> a{j};");
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// Isolation verdict for the thread through one depth-`d` point.
#[derive(Debug, Clone, Serialize)]
pub struct ThreadVerdict {
    pub point_index: usize,
    pub order: usize,
    pub open_thread: Tri,
    pub isolated: Tri,
    pub evidence: String,
    #[serde(skip)]
    pub point: Option<Subgroup>,
    /// Ball-class sizes at depths `d + 1 ..= d + window`.
    #[serde(skip)]
    pub ball_sizes: Vec<usize>,
    /// Indices `|G_e : K_e|` along the minimal thread, depths `d ..= d + window`.
    #[serde(skip)]
    pub thread_indices: Vec<usize>,
    /// `|K_e : Φ(K_e)|` along the minimal thread, when computed.
    #[serde(skip)]
    pub frattini_indices: Vec<usize>,
}

impl ThreadVerdict {
    /// Fiber-singleton reading: every ball class in the window is a singleton.
    pub fn fiber_singleton(&self) -> bool {
        self.ball_sizes.iter().all(|&s| s == 1)
    }

    /// Frattini-openness reading: `|K : Φ(K)|` constant along the window.
    pub fn frattini_bounded(&self) -> Option<bool> {
        if self.frattini_indices.is_empty() {
            None
        } else {
            Some(self.frattini_indices.windows(2).all(|w| w[0] == w[1]))
        }
    }
}

fn index_trend(indices: &[usize]) -> Tri {
    if indices.windows(2).all(|w| w[0] == w[1]) {
        Tri::Yes
    } else if indices.windows(2).all(|w| w[1] > w[0]) {
        Tri::No
    } else {
        Tri::Unknown
    }
}

impl SpaceChain {
    /// Verdicts for every point at depth `d`, looking `window` levels deeper.
    pub fn isolation_verdicts(&mut self, d: usize, window: usize) -> Result<Vec<ThreadVerdict>> {
        if window == 0 {
            return Err(Error::invalid("window must be at least 1"));
        }
        self.check_depth(d + window)?;
        self.level(d + window)?;
        let certs = self.tower.certificates().cloned();
        // Certificates describe S(G); on the normal space they apply only when every subgroup is normal.
        let certs = certs.filter(|c| !self.normal_only || c.abelian);
        let fiber_stable = certs.as_ref().is_some_and(|c| c.fiber_stable) && d >= 1;
        let certified_perfect = certs
            .as_ref()
            .is_some_and(|c| c.finitely_generated_bound.is_none());
        let n = self.level(d)?.len();
        let mut out = Vec::with_capacity(n);
        for p in 0..n {
            let ball_sizes: Vec<usize> = (d + 1..=d + window)
                .map(|e| self.ball_class(d, p, e).map(|b| b.len()))
                .collect::<Result<_>>()?;
            let thread = self.minimal_thread(d, p, window)?;
            let thread_indices: Vec<usize> = thread
                .iter()
                .enumerate()
                .map(|(k, &i)| self.levels[d + k].points.subgroups[i].index())
                .collect();
            let open_thread = index_trend(&thread_indices);
            let singleton = ball_sizes.iter().all(|&s| s == 1);
            let split = ball_sizes.iter().all(|&s| s >= 2);
            let mut frattini_indices = Vec::new();
            if open_thread == Tri::Yes {
                for (k, &i) in thread.iter().enumerate() {
                    frattini_indices.push(self.frattini_index(d + k, i)?);
                }
            }
            let phi_bounded = !frattini_indices.is_empty() && frattini_indices.windows(2).all(|w| w[0] == w[1]);
            let phi_name = if self.normal_only { "Psi" } else { "Phi" };
            let (isolated, evidence) = if singleton && open_thread == Tri::Yes {
                if fiber_stable {
                    (Tri::Yes, format!("ball classes singleton over {window} levels; fiber-stable certificate"))
                } else if phi_bounded {
                    (
                        Tri::Yes,
                        format!("ball classes singleton over {window} levels; {phi_name} index constant at {}", frattini_indices[0]),
                    )
                } else {
                    (Tri::Unknown, format!("ball classes singleton but {phi_name} index varies: {frattini_indices:?}"))
                }
            } else if split && fiber_stable {
                (Tri::No, format!("ball class sizes {ball_sizes:?}; fiber-stable certificate"))
            } else if split && certified_perfect {
                (
                    Tri::No,
                    format!("ball class sizes {ball_sizes:?}; not finitely generated, so the space is perfect"),
                )
            } else {
                (Tri::Unknown, format!("ball class sizes {ball_sizes:?}; window inconclusive"))
            };
            out.push(ThreadVerdict {
                point_index: p,
                order: self.levels[d].points.subgroups[p].order(),
                open_thread,
                isolated,
                evidence,
                point: Some(self.levels[d].points.subgroups[p].clone()),
                ball_sizes,
                thread_indices,
                frattini_indices,
            });
        }
        Ok(out)
    }

    /// Number of points at depths `0..=dmax`.
    pub fn growth_sequence(&mut self, dmax: usize) -> Result<Vec<usize>> {
        self.check_depth(dmax)?;
        (0..=dmax).map(|d| self.level(d).map(|l| l.len())).collect()
    }

    /// Depth-`d` points that lift to a subgroup of the same order at every
    /// level through `d + window`: the traces of finite closed subgroups.
    pub fn persistent_finite_points(&mut self, d: usize, window: usize) -> Result<Vec<usize>> {
        self.level(d + window)?;
        let n = self.levels[d].len();
        let mut out = Vec::new();
        for p in 0..n {
            let order = self.levels[d].points.subgroups[p].order();
            let mut frontier = vec![p];
            for k in d..d + window {
                let lower = &self.levels[k + 1];
                frontier = (0..lower.len())
                    .filter(|&i| frontier.contains(&lower.down_map[i]) && lower.points.subgroups[i].order() == order)
                    .collect();
            }
            if !frontier.is_empty() {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// Level space of `t` at depth `d`.
pub fn level_space(t: &Tower, d: usize, normal_only: bool, budget: &Budget) -> Result<LevelSpace> {
    let mut chain = SpaceChain::new(t, normal_only, budget);
    Ok(chain.level(d)?.clone())
}

/// Subgroups of level `d + 1` mapping onto `point`, a subgroup of level `d`.
pub fn fiber(t: &Tower, d: usize, point: &Subgroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    ball_class(t, d, point, d + 1, budget)
}

/// Subgroups of level `e` whose image at level `d` is `point`.
pub fn ball_class(t: &Tower, d: usize, point: &Subgroup, e: usize, budget: &Budget) -> Result<Vec<Subgroup>> {
    let mut chain = SpaceChain::new(t, false, budget);
    let i = chain.index_of(d, point)?;
    let members = chain.ball_class(d, i, e)?;
    members.into_iter().map(|j| chain.point(e, j)).collect()
}

pub fn isolation_verdicts(t: &Tower, d: usize, window: usize, budget: &Budget) -> Result<Vec<ThreadVerdict>> {
    SpaceChain::new(t, false, budget).isolation_verdicts(d, window)
}

pub fn growth_sequence(t: &Tower, dmax: usize, normal_only: bool, budget: &Budget) -> Result<Vec<usize>> {
    SpaceChain::new(t, normal_only, budget).growth_sequence(dmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_cyclic;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn padic_level_space_is_chain() {
        let t = Tower::padic(2).unwrap();
        let s = level_space(&t, 3, false, &b()).unwrap();
        assert_eq!(s.len(), 4);
        for w in s.points.subgroups.windows(2) {
            assert!(w[0].is_subgroup_of(&w[1]));
        }
        assert_eq!(level_space(&t, 3, true, &b()).unwrap().len(), 4);
        let tor = Tower::torsion(&make_cyclic(2).unwrap()).unwrap();
        assert_eq!(level_space(&tor, 2, false, &b()).unwrap().len(), 5);
    }

    #[test]
    fn padic_fibers() {
        let t = Tower::padic(2).unwrap();
        let mut chain = SpaceChain::new(&t, false, &b());
        for d in 1..6 {
            assert_eq!(chain.fiber(d, 0).unwrap().len(), 2, "trivial point at depth {d}");
            for p in 1..=d {
                assert_eq!(chain.fiber(d, p).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn ball_classes() {
        let t = Tower::padic(2).unwrap();
        let c4 = t.level(2, &b()).unwrap();
        let trivial = Subgroup::trivial(&c4);
        let ball = ball_class(&t, 2, &trivial, 4, &b()).unwrap();
        let orders: Vec<usize> = ball.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
        let same = ball_class(&t, 2, &trivial, 2, &b()).unwrap();
        assert_eq!(same, vec![trivial.clone()]);
        let c8 = t.level(3, &b()).unwrap();
        assert!(fiber(&t, 2, &Subgroup::trivial(&c8), &b()).is_err());
    }

    #[test]
    fn growth() {
        let t = Tower::padic(2).unwrap();
        assert_eq!(growth_sequence(&t, 4, false, &b()).unwrap(), vec![1, 2, 3, 4, 5]);
        let tor = Tower::torsion(&make_cyclic(2).unwrap()).unwrap();
        assert_eq!(growth_sequence(&tor, 4, false, &b()).unwrap(), vec![1, 2, 5, 16, 67]);
        let prod = Tower::product(&Tower::padic(2).unwrap(), &Tower::padic(3).unwrap());
        assert_eq!(growth_sequence(&prod, 2, false, &b()).unwrap(), vec![1, 4, 9]);
    }

    #[test]
    fn padic_isolation() {
        let t = Tower::padic(2).unwrap();
        let v = isolation_verdicts(&t, 4, 3, &b()).unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0].isolated, Tri::No);
        assert_eq!(v[0].open_thread, Tri::No);
        for x in &v[1..] {
            assert_eq!(x.isolated, Tri::Yes);
            assert_eq!(x.open_thread, Tri::Yes);
        }
    }

    #[test]
    fn torsion_isolation_never_yes() {
        let t = Tower::torsion(&make_cyclic(2).unwrap()).unwrap();
        let v = isolation_verdicts(&t, 2, 2, &b()).unwrap();
        assert_eq!(v.len(), 5);
        assert!(v.iter().all(|x| x.isolated != Tri::Yes));
    }

    #[test]
    fn finite_times_isolation() {
        let t = Tower::finite_times(&make_cyclic(2).unwrap(), &Tower::padic(2).unwrap());
        let v = isolation_verdicts(&t, 4, 1, &b()).unwrap();
        let no: Vec<usize> = v.iter().filter(|x| x.isolated == Tri::No).map(|x| x.order).collect();
        assert_eq!(no, vec![1, 2]);
        assert!(v.iter().all(|x| x.isolated != Tri::Unknown));
    }

    #[test]
    fn fiber_dot_has_one_edge_per_lower_point() {
        let t = Tower::padic(3).unwrap();
        let mut chain = SpaceChain::new(&t, false, &b());
        let dot = chain.fiber_dot(2).unwrap();
        assert_eq!(dot.matches("->").count(), 4);
    }
}
