//! Geometric K-homology cycles and their charges.
//!
//! A cycle `[M, E, phi]` carries the homological Chern character
//! `phi_*((ch(E) · Td(TM)) ∩ [M])`. The moves generating the equivalence
//! relation on cycles leave this class unchanged, which is what the tests
//! and the reduction in [`tachyon_reduce`] verify.

use std::fmt;

use crate::bundle::BundleExpr;
use crate::error::{Error, Result};
use crate::ktheory::KClass;
use crate::ring::{GradedClass, HomologyClass, MapKind, ModelMap, ModelSpace, Rational};

/// Grading of a cycle by the parity of `dim M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BraneType {
    /// Even-dimensional worldvolume, `K_0`.
    IIBEven,
    /// Odd-dimensional worldvolume, `K_1`.
    IIAOdd,
}

impl BraneType {
    pub fn of_dimension(d: u32) -> Self {
        if d % 2 == 0 { BraneType::IIBEven } else { BraneType::IIAOdd }
    }
}

impl fmt::Display for BraneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BraneType::IIBEven => "IIB_even",
            BraneType::IIAOdd => "IIA_odd",
        })
    }
}

/// A K-cycle `[M, E, phi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCycle {
    class: KClass,
    map: ModelMap,
}

fn cycle_mismatch(what: &'static str, left: impl ToString, right: impl ToString) -> Error {
    Error::CycleMismatch { what, left: left.to_string(), right: right.to_string() }
}

impl KCycle {
    pub fn new(class: KClass, map: ModelMap) -> Result<Self> {
        if class.space() != map.source() {
            return Err(Error::SpaceMismatch {
                left: class.space().to_string(),
                right: map.source().to_string(),
            });
        }
        if !map.source().is_spinc() {
            return Err(Error::InvalidSpace(format!("{} is not spin^c", map.source())));
        }
        Ok(Self { class, map })
    }

    /// `[M, [E], phi]` for a single bundle.
    pub fn from_bundle(bundle: BundleExpr, map: ModelMap) -> Result<Self> {
        Self::new(KClass::from_bundle(bundle)?, map)
    }

    pub fn manifold(&self) -> &ModelSpace {
        self.map.source()
    }

    pub fn target(&self) -> &ModelSpace {
        self.map.target()
    }

    pub fn class(&self) -> &KClass {
        &self.class
    }

    pub fn map(&self) -> &ModelMap {
        &self.map
    }

    pub fn parity_type(&self) -> BraneType {
        BraneType::of_dimension(self.manifold().dimension())
    }

    /// `ch(E) · Td(TM)` on `M`.
    pub fn charge_density(&self) -> Result<GradedClass> {
        let td = BundleExpr::tangent(self.manifold()).evaluate()?;
        let td = crate::charclass::todd_class(&td.total_chern)?;
        self.class.ch_image().cup(&td)
    }

    /// `phi_*((ch(E) · Td(TM)) ∩ [M])`.
    pub fn hom_chern(&self) -> Result<HomologyClass> {
        self.map.pushforward(&self.charge_density()?.poincare_dual())
    }

    /// `[M, E_1 (+) E_2, phi]`.
    pub fn direct_sum_move(&self, other: &KCycle) -> Result<KCycle> {
        self.same_base(other)?;
        Self::new(self.class.add(&other.class)?, self.map.clone())
    }

    fn same_base(&self, other: &KCycle) -> Result<()> {
        if self.manifold() != other.manifold() {
            return Err(cycle_mismatch("manifold", self.manifold(), other.manifold()));
        }
        if self.map != other.map {
            return Err(cycle_mismatch("map", &self.map, &other.map));
        }
        Ok(())
    }

    /// Modification along the trivial rank-`2k` bundle: the cycle
    /// `[M × S(2k), clutch(k) ⊠ E, phi ∘ pr_M]`.
    pub fn vb_modification(&self, k: u32) -> Result<KCycle> {
        let m = self.manifold();
        let sphere = BundleExpr::clutched(k)?.space();
        let hat = ModelSpace::product(vec![m.clone(), sphere])?;
        let nm = m.factor_count();
        let pr_m = ModelMap::projection(&hat, (0..nm).collect())?;
        let pr_s = ModelMap::projection(&hat, vec![nm])?;
        let h = KClass::from_bundle(BundleExpr::pullback(&pr_s, BundleExpr::clutched(k)?)?)?;
        let class = h.tensor(&self.class.pullback(&pr_m)?)?;
        Self::new(class, pr_m.then(&self.map)?)
    }

    /// `f_*[M, E, phi] = [M, E, f ∘ phi]`.
    pub fn push_forward(&self, f: &ModelMap) -> Result<KCycle> {
        Self::new(self.class.clone(), self.map.then(f)?)
    }

    /// The isomorphic cycle `[M', h^* E, phi ∘ h]` for a homeomorphism
    /// `h: M' -> M`.
    pub fn relabel(&self, h: &ModelMap) -> Result<KCycle> {
        if !matches!(h.kind(), MapKind::Identity | MapKind::Identification) {
            return Err(Error::InvalidMap {
                map: h.to_string(),
                reason: "relabelling needs an identification".into(),
            });
        }
        Self::new(self.class.pullback(h)?, h.then(&self.map)?)
    }

    /// `-[M, E, phi]`, the cycle with reversed orientation.
    pub fn negate(&self) -> KCycleSum {
        KCycleSum { target: self.target().clone(), terms: vec![(-1, self.clone())] }
    }
}

impl fmt::Display for KCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ; {} ; {}]", self.manifold(), self.class, self.map)
    }
}

/// A formal integer combination of cycles into one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCycleSum {
    target: ModelSpace,
    terms: Vec<(i64, KCycle)>,
}

impl KCycleSum {
    pub fn zero(target: &ModelSpace) -> Self {
        Self { target: target.clone(), terms: vec![] }
    }

    pub fn single(c: KCycle) -> Self {
        Self { target: c.target().clone(), terms: vec![(1, c)] }
    }

    pub fn target(&self) -> &ModelSpace {
        &self.target
    }

    pub fn terms(&self) -> &[(i64, KCycle)] {
        &self.terms
    }

    pub fn negate(&self) -> Self {
        Self {
            target: self.target.clone(),
            terms: self.terms.iter().map(|(n, c)| (-n, c.clone())).collect(),
        }
    }

    /// `self ⊔ other`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.target != other.target {
            return Err(cycle_mismatch("target", &self.target, &other.target));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { target: self.target.clone(), terms })
    }

    pub fn hom_chern(&self) -> Result<HomologyClass> {
        let mut acc = HomologyClass::zero(&self.target);
        for (n, c) in &self.terms {
            acc = acc.try_add(&c.hom_chern()?.scale(&Rational::from_integer((*n).into())))?;
        }
        Ok(acc)
    }

    /// Common grading of the summands.
    pub fn parity_type(&self) -> Result<BraneType> {
        let mut types = self.terms.iter().map(|(_, c)| c.parity_type());
        let first = types.next().ok_or(Error::EmptyCycleSum)?;
        if types.all(|t| t == first) { Ok(first) } else { Err(Error::MixedParity) }
    }

    /// Merges summands sharing `(M, phi)` into one cycle whose class is the
    /// signed sum: `[X ⊔ X, V ⊔ W, id]` with opposite orientations becomes
    /// `[X, V - W, id]`. Summands whose merged class vanishes are dropped.
    pub fn consolidate(&self) -> Result<Self> {
        let mut groups: Vec<(ModelMap, KClass)> = Vec::new();
        for (n, c) in &self.terms {
            let scaled = c.class().scale(*n)?;
            match groups.iter_mut().find(|(m, _)| m == c.map()) {
                Some((_, k)) => *k = k.add(&scaled)?,
                None => groups.push((c.map().clone(), scaled)),
            }
        }
        let mut terms = Vec::new();
        for (map, class) in groups {
            let class = class.simplified();
            if class.plus().is_empty() && class.minus().is_empty() {
                continue;
            }
            terms.push((1, KCycle::new(class, map)?));
        }
        Ok(Self { target: self.target.clone(), terms })
    }
}

impl fmt::Display for KCycleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            let sep = match (i, *n < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let m = n.unsigned_abs();
            if m == 1 { write!(f, "{sep}{c}")? } else { write!(f, "{sep}{m}*{c}")? }
        }
        Ok(())
    }
}

/// `incl_!(ch(a) · Td(N)^{-1})`: the Chern-character image of the Thom
/// pushforward of `a` along an embedding of even codimension.
pub fn thom_pushforward(a: &KClass, incl: &ModelMap) -> Result<GradedClass> {
    if a.space() != incl.source() {
        return Err(Error::SpaceMismatch {
            left: a.space().to_string(),
            right: incl.source().to_string(),
        });
    }
    let normal = BundleExpr::normal(incl)?.evaluate()?;
    let td_n = crate::charclass::todd_class(&normal.total_chern)?;
    incl.gysin(&a.ch_image().cup(&td_n.inverse()?)?)
}

/// Outcome of [`tachyon_reduce`]: the spacetime-filling cycle and the two
/// charges that were checked equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TachyonReduction {
    pub cycle: KCycle,
    pub before: HomologyClass,
    pub after: HomologyClass,
}

/// Rewrites `[M, E, phi]` for an embedding `phi: M -> X` as `[X, V - W, id]`
/// with `ch(V - W)` the Thom pushforward of `E`, and checks that the
/// charges agree. A disagreement is an error, never a silent result.
pub fn tachyon_reduce(c: &KCycle) -> Result<TachyonReduction> {
    let before = c.hom_chern()?;
    let x = c.target().clone();
    let cycle = if matches!(c.map().kind(), MapKind::Identity) {
        c.clone()
    } else {
        let ch = thom_pushforward(c.class(), c.map())?;
        KCycle::new(KClass::realize(&x, &ch)?, ModelMap::identity(&x))?
    };
    let after = cycle.hom_chern()?;
    if before != after {
        return Err(Error::ChargeMismatch { before: before.to_string(), after: after.to_string() });
    }
    Ok(TachyonReduction { cycle, before, after })
}
