//! Order-theoretic set representations over markings.
//!
//! Upward-closed sets are kept as finite antichains of minimal elements,
//! downward-closed sets as finite unions of ideals (markings with omega
//! coordinates). Both representations are canonical: sorted, deduplicated,
//! and free of dominated elements, so equal sets compare equal.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::net::{Marking, PlaceId, ResetNet, TransId};

/// A natural number extended with omega. Omega compares above every finite
/// value and absorbs addition and subtraction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OmegaNat {
    Fin(u64),
    Omega,
}

impl OmegaNat {
    pub fn is_omega(self) -> bool {
        matches!(self, OmegaNat::Omega)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            OmegaNat::Fin(n) => Some(n),
            OmegaNat::Omega => None,
        }
    }

    pub fn min(self, other: OmegaNat) -> OmegaNat {
        std::cmp::min(self, other)
    }
}

impl From<u64> for OmegaNat {
    fn from(n: u64) -> Self {
        OmegaNat::Fin(n)
    }
}

impl fmt::Display for OmegaNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaNat::Fin(n) => write!(f, "{n}"),
            OmegaNat::Omega => write!(f, "w"),
        }
    }
}

/// A marking over `OmegaNat`, used both for ideals and for accelerated
/// exploration nodes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OmegaMarking(Vec<OmegaNat>);

impl OmegaMarking {
    pub fn new(counts: Vec<OmegaNat>) -> Self {
        OmegaMarking(counts)
    }

    pub fn all_omega(dim: usize) -> Self {
        OmegaMarking(vec![OmegaNat::Omega; dim])
    }

    pub fn from_marking(m: &Marking) -> Self {
        OmegaMarking(m.counts().iter().map(|&n| OmegaNat::Fin(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, p: PlaceId) -> OmegaNat {
        self.0[p.0]
    }

    pub fn set(&mut self, p: PlaceId, v: OmegaNat) {
        self.0[p.0] = v;
    }

    pub fn counts(&self) -> &[OmegaNat] {
        &self.0
    }

    pub fn has_omega(&self) -> bool {
        self.0.iter().any(|v| v.is_omega())
    }

    /// Exact marking, if no coordinate is omega.
    pub fn to_marking(&self) -> Option<Marking> {
        self.0
            .iter()
            .map(|v| v.finite())
            .collect::<Option<Vec<u64>>>()
            .map(Marking::new)
    }

    pub fn leq(&self, other: &OmegaMarking) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Does the ideal rooted at `self` contain the plain marking `m`?
    pub fn covers_marking(&self, m: &Marking) -> bool {
        debug_assert_eq!(self.dim(), m.dim());
        self.0
            .iter()
            .zip(m.counts())
            .all(|(v, &n)| *v >= OmegaNat::Fin(n))
    }

    pub fn pointwise_min(&self, other: &OmegaMarking) -> OmegaMarking {
        debug_assert_eq!(self.dim(), other.dim());
        OmegaMarking(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }
}

fn lex_cmp(a: &Marking, b: &Marking) -> Ordering {
    a.counts().cmp(b.counts())
}

/// An upward-closed set of markings, stored as the antichain of its minimal
/// elements, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UpSet {
    dim: usize,
    basis: Vec<Marking>,
}

impl UpSet {
    /// The empty upward-closed set.
    pub fn empty(dim: usize) -> Self {
        UpSet { dim, basis: Vec::new() }
    }

    /// The upward closure of a single marking.
    pub fn above(m: Marking) -> Self {
        UpSet { dim: m.dim(), basis: vec![m] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Marking] {
        &self.basis
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, m: &Marking) -> bool {
        self.basis.iter().any(|b| b.leq(m))
    }

    /// Inserts `m` unless it is already covered; drops elements `m` covers.
    /// Returns whether the set grew.
    pub fn insert(&mut self, m: Marking) -> bool {
        debug_assert_eq!(m.dim(), self.dim);
        if self.contains(&m) {
            return false;
        }
        self.basis.retain(|b| !m.leq(b));
        let at = self
            .basis
            .binary_search_by(|b| lex_cmp(b, &m))
            .unwrap_err();
        self.basis.insert(at, m);
        true
    }
}

/// Keeps only the minimal markings, deduplicated and sorted.
pub fn minimize(dim: usize, markings: impl IntoIterator<Item = Marking>) -> UpSet {
    let mut set = UpSet::empty(dim);
    for m in markings {
        set.insert(m);
    }
    set
}

/// A downward-closed set of markings, stored as the maximal ideals of a
/// finite cover, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DownSet {
    dim: usize,
    ideals: Vec<OmegaMarking>,
}

impl DownSet {
    pub fn empty(dim: usize) -> Self {
        DownSet { dim, ideals: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ideals(&self) -> &[OmegaMarking] {
        &self.ideals
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn contains(&self, m: &Marking) -> bool {
        self.ideals.iter().any(|d| d.covers_marking(m))
    }

    fn from_ideals(dim: usize, ideals: Vec<OmegaMarking>) -> DownSet {
        let mut maximal: Vec<OmegaMarking> = Vec::new();
        for d in ideals {
            if maximal.iter().any(|e| d.leq(e)) {
                continue;
            }
            maximal.retain(|e| !e.leq(&d));
            maximal.push(d);
        }
        maximal.sort_unstable();
        DownSet { dim, ideals: maximal }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("ideal count exceeded the cap of {cap}")]
pub struct IdealBudgetError {
    pub cap: usize,
}

pub const DEFAULT_IDEAL_CAP: usize = 100_000;

/// Complement of an upward-closed set as a downward-closed set.
///
/// The complement of a single cone above `b` is the union, over the places
/// where `b` is positive, of the ideals capping that place at `b(p) - 1`.
/// The complement of the union is the intersection of those, computed by
/// pointwise minima and re-maximized after every step. The intermediate
/// ideal count is capped.
pub fn complement_up_to_down(u: &UpSet, cap: usize) -> Result<DownSet, IdealBudgetError> {
    let dim = u.dim();
    let mut acc = vec![OmegaMarking::all_omega(dim)];
    for b in u.basis() {
        let mut cone_compl = Vec::new();
        for p in b.support() {
            let mut ideal = OmegaMarking::all_omega(dim);
            ideal.set(p, OmegaNat::Fin(b.get(p) - 1));
            cone_compl.push(ideal);
        }
        // b with empty support is the zero marking: its cone is everything
        // and the complement collapses to the empty set.
        let mut next = Vec::new();
        for lhs in &acc {
            for rhs in &cone_compl {
                next.push(lhs.pointwise_min(rhs));
            }
        }
        if next.len() > cap {
            return Err(IdealBudgetError { cap });
        }
        acc = DownSet::from_ideals(dim, next).ideals;
        if acc.is_empty() {
            break;
        }
    }
    Ok(DownSet::from_ideals(dim, acc))
}

/// Per-place constraint of a mixed target atom.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bound {
    AtLeast(u64),
    AtMost(OmegaNat),
}

impl Bound {
    pub fn none() -> Bound {
        Bound::AtMost(OmegaNat::Omega)
    }

    pub fn satisfied_by(self, n: u64) -> bool {
        match self {
            Bound::AtLeast(l) => n >= l,
            Bound::AtMost(b) => OmegaNat::Fin(n) <= b,
        }
    }
}

/// A conjunction of per-place bounds; one bound per place.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom(Vec<Bound>);

impl Atom {
    pub fn unconstrained(dim: usize) -> Atom {
        Atom(vec![Bound::none(); dim])
    }

    pub fn new(bounds: Vec<Bound>) -> Atom {
        Atom(bounds)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn bound(&self, p: PlaceId) -> Bound {
        self.0[p.0]
    }

    pub fn set(&mut self, p: PlaceId, b: Bound) {
        self.0[p.0] = b;
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.0
    }

    pub fn satisfied_by(&self, m: &Marking) -> bool {
        debug_assert_eq!(self.dim(), m.dim());
        self.0
            .iter()
            .zip(m.counts())
            .all(|(b, &n)| b.satisfied_by(n))
    }
}

/// A finite union of atoms. A marking is in the target iff some atom holds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedTarget {
    dim: usize,
    atoms: Vec<Atom>,
}

impl MixedTarget {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> MixedTarget {
        debug_assert!(atoms.iter().all(|a| a.dim() == dim));
        MixedTarget { dim, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains(&self, m: &Marking) -> bool {
        self.atoms.iter().any(|a| a.satisfied_by(m))
    }
}

pub fn mixed_contains(target: &MixedTarget, m: &Marking) -> bool {
    target.contains(m)
}

/// The minimal marking from which firing `t` covers `b`, or None when a
/// reset place of `t` holds more in `b` than `t` produces (firing `t` can
/// then never match `b`).
///
/// The minimal predecessor needs `pre` on reset places and
/// `max(pre, b + pre - post)` elsewhere.
pub fn pred_of(net: &ResetNet, t: TransId, b: &Marking) -> Option<Marking> {
    let tr = net.transition(t);
    let mut m = Marking::zero(b.dim());
    for p in net.places() {
        if tr.resets(p) {
            if b.get(p) > tr.post(p) {
                return None;
            }
            m.set(p, tr.pre(p));
        } else {
            let needed = (b.get(p) + tr.pre(p)).saturating_sub(tr.post(p));
            m.set(p, needed.max(tr.pre(p)));
        }
    }
    Some(m)
}

/// Minimal markings from which firing `t` lands in the upward closure of
/// `u`.
pub fn pred_basis(net: &ResetNet, t: TransId, u: &UpSet) -> UpSet {
    let dim = net.place_count();
    debug_assert_eq!(u.dim(), dim);
    let mut out = UpSet::empty(dim);
    for b in u.basis() {
        if let Some(m) = pred_of(net, t, b) {
            out.insert(m);
        }
    }
    out
}
