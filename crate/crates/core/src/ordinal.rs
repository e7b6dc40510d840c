//! Countable compact scattered spaces.
//!
//! [`OrdinalSignature`] is the classification currency: the pair `(h, n)`
//! names the space of scattered height `h + 1` with exactly `n` points of
//! top rank, which for `h ≥ 1` is the ordinal `ω^h·n+1` with the order
//! topology and for `h = 0` is a discrete space of `n` points.
//!
//! [`ConcreteSpace`] is an inductive encoding built from single points,
//! finite disjoint sums and one-point compactifications of countably many
//! copies. Its Cantor–Bendixson derivative is computed by rewriting, which
//! makes it an independent check on signature arithmetic.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `Σ ω^e·c (+1)` with strictly descending exponents and positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinalSignature {
    terms: Vec<(u32, u64)>,
}

impl OrdinalSignature {
    /// The single-term signature `ω^height·count`.
    pub fn new(height: u32, count: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("signature coefficient must be positive"));
        }
        Ok(OrdinalSignature {
            terms: vec![(height, count)],
        })
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("signature needs at least one term"));
        }
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::invalid("signature coefficients must be positive"));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::invalid("signature exponents must be strictly descending"));
        }
        Ok(OrdinalSignature { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    fn single(&self) -> Result<(u32, u64)> {
        match self.terms.as_slice() {
            [t] => Ok(*t),
            _ => Err(Error::invalid(format!("{self} is not a single-term signature"))),
        }
    }

    /// Exponent `h` of a single-term signature (scattered height minus one).
    pub fn exponent(&self) -> u32 {
        self.terms[0].0
    }

    /// Coefficient of the leading term: the number of top-rank points.
    pub fn coefficient(&self) -> u64 {
        self.terms[0].1
    }

    pub fn scattered_height(&self) -> u32 {
        self.terms[0].0 + 1
    }

    /// Product of spaces: ranks add pointwise, so the top stratum of the
    /// product is the product of the top strata.
    pub fn product(&self, other: &OrdinalSignature) -> Result<OrdinalSignature> {
        let (ha, na) = self.single()?;
        let (hb, nb) = other.single()?;
        OrdinalSignature::new(ha + hb, na * nb)
    }

    pub fn homeomorphic(&self, other: &OrdinalSignature) -> Result<bool> {
        Ok(self.single()? == other.single()?)
    }
}

impl fmt::Display for OrdinalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [(0, n)] = self.terms.as_slice() {
            return write!(f, "w^0*{n}");
        }
        for (e, c) in &self.terms {
            write!(f, "w^{e}*{c}+")?;
        }
        write!(f, "1")
    }
}

impl FromStr for OrdinalSignature {
    type Err = Error;

    /// Accepts `w^k*n+1` for `k ≥ 1`, sums such as `w^2*3+w^1*1+1`, and
    /// `w^0*n` for finite discrete spaces.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse signature {s:?}"));
        let parts: Vec<&str> = s.trim().split('+').map(str::trim).collect();
        let (body, plus_one) = match parts.split_last() {
            Some((&"1", rest)) if !rest.is_empty() => (rest, true),
            _ => (parts.as_slice(), false),
        };
        let mut terms = Vec::new();
        for term in body {
            let rest = term.strip_prefix("w^").ok_or_else(bad)?;
            let (e, c) = rest.split_once('*').ok_or_else(bad)?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            let c: u64 = c.parse().map_err(|_| bad())?;
            terms.push((e, c));
        }
        let sig = OrdinalSignature::from_terms(terms)?;
        let finite = matches!(sig.terms.as_slice(), [(0, _)]);
        if finite == plus_one {
            return Err(Error::invalid(format!(
                "{s:?}: finite spaces are written w^0*n, infinite ones end in +1"
            )));
        }
        Ok(sig)
    }
}

/// Compact countable scattered space built inductively.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConcreteSpace {
    Point,
    /// Finite disjoint union; never empty.
    Sum(Vec<ConcreteSpace>),
    /// One-point compactification of countably many disjoint copies of the body.
    SeqLim(Box<ConcreteSpace>),
}

impl ConcreteSpace {
    pub fn sum(parts: Vec<ConcreteSpace>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("sum of no spaces"));
        }
        Ok(ConcreteSpace::Sum(parts))
    }

    pub fn seq_lim(body: ConcreteSpace) -> Self {
        ConcreteSpace::SeqLim(Box::new(body))
    }

    /// `SeqLim` applied `h` times to a point.
    pub fn tower_of(h: u32) -> Self {
        (0..h).fold(ConcreteSpace::Point, |acc, _| ConcreteSpace::seq_lim(acc))
    }

    /// Set of limit points; `None` stands for the empty space.
    pub fn derivative(&self) -> Option<ConcreteSpace> {
        match self {
            ConcreteSpace::Point => None,
            ConcreteSpace::Sum(parts) => {
                let kept: Vec<ConcreteSpace> = parts.iter().filter_map(|p| p.derivative()).collect();
                if kept.is_empty() {
                    None
                } else {
                    Some(ConcreteSpace::Sum(kept))
                }
            }
            ConcreteSpace::SeqLim(body) => Some(match body.derivative() {
                None => ConcreteSpace::Point,
                Some(d) => ConcreteSpace::seq_lim(d),
            }),
        }
    }

    /// `k`-th derivative.
    pub fn derivative_n(&self, k: u32) -> Option<ConcreteSpace> {
        let mut cur = Some(self.clone());
        for _ in 0..k {
            cur = cur.and_then(|x| x.derivative());
        }
        cur
    }

    /// Least `k` with empty `k`-th derivative.
    pub fn height(&self) -> u32 {
        let mut k = 0;
        let mut cur = Some(self.clone());
        while let Some(x) = cur {
            cur = x.derivative();
            k += 1;
        }
        k
    }

    /// Number of points in the last non-empty derivative.
    pub fn top_count(&self) -> u64 {
        let last = self
            .derivative_n(self.height() - 1)
            .expect("derivative below the height is non-empty");
        last.finite_size().expect("last derivative is finite")
    }

    pub fn is_finite(&self) -> bool {
        self.finite_size().is_some()
    }

    /// Number of points when finite.
    pub fn finite_size(&self) -> Option<u64> {
        match self {
            ConcreteSpace::Point => Some(1),
            ConcreteSpace::Sum(parts) => parts.iter().map(|p| p.finite_size()).sum(),
            ConcreteSpace::SeqLim(_) => None,
        }
    }

    /// Point counts per Cantor–Bendixson rank, `None` meaning countably infinite.
    pub fn rank_profile(&self) -> Vec<Option<u64>> {
        (0..self.height())
            .map(|r| {
                self.derivative_n(r)
                    .expect("below height")
                    .finite_size()
            })
            .collect()
    }

    /// Flattens nested sums and sorts summands.
    pub fn normalize(&self) -> ConcreteSpace {
        match self {
            ConcreteSpace::Point => ConcreteSpace::Point,
            ConcreteSpace::SeqLim(b) => ConcreteSpace::seq_lim(b.normalize()),
            ConcreteSpace::Sum(_) => {
                let mut parts = self.summands();
                parts.sort();
                if parts.len() == 1 {
                    parts.pop().expect("one part")
                } else {
                    ConcreteSpace::Sum(parts)
                }
            }
        }
    }

    /// Normalized clopen pieces of a disjoint sum (the space itself otherwise).
    pub fn summands(&self) -> Vec<ConcreteSpace> {
        match self {
            ConcreteSpace::Sum(parts) => parts.iter().flat_map(|p| p.summands()).collect(),
            other => vec![other.normalize()],
        }
    }

    /// True when `self` is a sub-sum of `other`, i.e. a union of some of its
    /// summands, counted with multiplicity.
    pub fn embeds_as_clopen(&self, other: &ConcreteSpace) -> bool {
        let mut pool = other.summands();
        for piece in self.summands() {
            match pool.iter().position(|x| *x == piece) {
                Some(i) => {
                    pool.swap_remove(i);
                }
                None => return false,
            }
        }
        true
    }
}

/// Signature `ω^(height−1)·top_count`.
pub fn signature_of(x: &ConcreteSpace) -> OrdinalSignature {
    OrdinalSignature::new(x.height() - 1, x.top_count()).expect("top count is positive")
}

/// `n` disjoint copies of `SeqLim^h(Point)`.
pub fn concrete_of(sig: &OrdinalSignature) -> Result<ConcreteSpace> {
    let (h, n) = sig.single()?;
    let piece = ConcreteSpace::tower_of(h);
    Ok(if n == 1 {
        piece
    } else {
        ConcreteSpace::Sum(vec![piece; n as usize])
    })
}
