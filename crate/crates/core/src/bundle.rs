//! Symbolic vector-bundle expressions.
//!
//! A [`BundleExpr`] lives over one catalog space and evaluates to its rank
//! and total Chern class. Tangent bundles of spheres and tori evaluate to
//! trivial Chern data; they are stably trivial and the rational invariants
//! used downstream cannot see the difference.

use std::fmt;

use crate::charclass::{chern_from_character, tensor_chern};
use crate::error::{Error, Result};
use crate::ring::{GradedClass, MapKind, ModelMap, ModelSpace, Rational, SpaceKind};

/// A vector bundle written as an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BundleExpr {
    /// Line bundle with the given first Chern class.
    Line(GradedClass),
    /// `O(k)` on a projective space (the trivial line bundle on the point).
    Tautological { space: ModelSpace, k: i64 },
    Trivial { space: ModelSpace, rank: u32 },
    Tangent(ModelSpace),
    /// Normal bundle of an embedding, over its source.
    Normal(ModelMap),
    /// Bundle on `S(2k)` of rank `2^(k-1)` with `ch = 2^(k-1) + y`, clutched
    /// from the spinor bundles of `R^(2k)`.
    Clutched { half_dim: u32 },
    Dual(Box<BundleExpr>),
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    /// `f^* e`, with `e` over the target of `f`.
    Pullback(ModelMap, Box<BundleExpr>),
}

/// Rank and total Chern class of an evaluated expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluatedBundle {
    pub rank: u32,
    pub total_chern: GradedClass,
}

fn rank_overflow() -> Error {
    Error::InvalidBundle("rank does not fit in 32 bits".into())
}

fn mismatch(a: &ModelSpace, b: &ModelSpace) -> Error {
    Error::SpaceMismatch { left: a.to_string(), right: b.to_string() }
}

impl BundleExpr {
    /// Line bundle from a degree-2 class.
    pub fn line(c1: GradedClass) -> Result<Self> {
        if !c1.is_zero() && c1.support_degrees() != [2] {
            return Err(Error::InvalidBundle(format!(
                "first Chern class {c1} is not of degree 2"
            )));
        }
        Ok(BundleExpr::Line(c1))
    }

    pub fn tautological(space: &ModelSpace, k: i64) -> Result<Self> {
        match space.kind() {
            SpaceKind::ComplexProjective(_) | SpaceKind::Point => {
                Ok(BundleExpr::Tautological { space: space.clone(), k })
            }
            _ => Err(Error::InvalidBundle(format!("O({k}) needs a projective space, got {space}"))),
        }
    }

    pub fn trivial(space: &ModelSpace, rank: u32) -> Self {
        BundleExpr::Trivial { space: space.clone(), rank }
    }

    pub fn tangent(space: &ModelSpace) -> Self {
        BundleExpr::Tangent(space.clone())
    }

    /// Normal bundle of an embedding with even codimension.
    pub fn normal(embedding: &ModelMap) -> Result<Self> {
        check_embedding(embedding)?;
        if embedding.codimension() % 2 != 0 {
            return Err(Error::OddCodimension(embedding.to_string()));
        }
        Ok(BundleExpr::Normal(embedding.clone()))
    }

    pub fn clutched(half_dim: u32) -> Result<Self> {
        if half_dim == 0 || 2 * half_dim > crate::ring::MAX_DIMENSION {
            return Err(Error::InvalidBundle(format!("clutch({half_dim}) is out of range")));
        }
        Ok(BundleExpr::Clutched { half_dim })
    }

    pub fn dual(e: BundleExpr) -> Self {
        BundleExpr::Dual(Box::new(e))
    }

    pub fn sum(a: BundleExpr, b: BundleExpr) -> Result<Self> {
        let (sa, sb) = (a.space(), b.space());
        if sa != sb {
            return Err(mismatch(&sa, &sb));
        }
        Ok(BundleExpr::Sum(Box::new(a), Box::new(b)))
    }

    pub fn tensor(a: BundleExpr, b: BundleExpr) -> Result<Self> {
        let (sa, sb) = (a.space(), b.space());
        if sa != sb {
            return Err(mismatch(&sa, &sb));
        }
        Ok(BundleExpr::Tensor(Box::new(a), Box::new(b)))
    }

    pub fn pullback(f: &ModelMap, e: BundleExpr) -> Result<Self> {
        let s = e.space();
        if &s != f.target() {
            return Err(mismatch(&s, f.target()));
        }
        Ok(BundleExpr::Pullback(f.clone(), Box::new(e)))
    }

    /// The base space.
    pub fn space(&self) -> ModelSpace {
        match self {
            BundleExpr::Line(c) => c.space().clone(),
            BundleExpr::Tautological { space, .. }
            | BundleExpr::Trivial { space, .. }
            | BundleExpr::Tangent(space) => space.clone(),
            BundleExpr::Normal(f) | BundleExpr::Pullback(f, _) => f.source().clone(),
            BundleExpr::Clutched { half_dim } => {
                ModelSpace::sphere(2 * half_dim).expect("validated at construction")
            }
            BundleExpr::Dual(e) => e.space(),
            BundleExpr::Sum(a, _) | BundleExpr::Tensor(a, _) => a.space(),
        }
    }

    pub fn rank(&self) -> Result<u32> {
        Ok(self.evaluate()?.rank)
    }

    pub fn total_chern(&self) -> Result<GradedClass> {
        Ok(self.evaluate()?.total_chern)
    }

    pub fn evaluate(&self) -> Result<EvaluatedBundle> {
        let done = |rank: u32, total_chern: GradedClass| Ok(EvaluatedBundle { rank, total_chern });
        match self {
            BundleExpr::Line(c1) => {
                let s = c1.space();
                done(1, &GradedClass::one(s) + c1)
            }
            BundleExpr::Tautological { space, k } => {
                let mut c = GradedClass::one(space);
                if !space.is_point() {
                    c = &c + &GradedClass::generator(space, 0)?.scale(&Rational::from_integer((*k).into()));
                }
                done(1, c)
            }
            BundleExpr::Trivial { space, rank } => done(*rank, GradedClass::one(space)),
            BundleExpr::Tangent(space) => tangent(space),
            BundleExpr::Normal(f) => normal(f),
            BundleExpr::Clutched { half_dim } => {
                let s = self.space();
                let rank = 1u32 << (half_dim - 1);
                let ch = &GradedClass::from_integer(&s, rank.into()) + &GradedClass::generator(&s, 0)?;
                done(rank, chern_from_character(&ch)?)
            }
            BundleExpr::Dual(e) => {
                let v = e.evaluate()?;
                done(v.rank, v.total_chern.conjugate())
            }
            BundleExpr::Sum(a, b) => {
                let (va, vb) = (a.evaluate()?, b.evaluate()?);
                let rank = va.rank.checked_add(vb.rank).ok_or_else(rank_overflow)?;
                done(rank, va.total_chern.cup(&vb.total_chern)?)
            }
            BundleExpr::Tensor(a, b) => {
                let (va, vb) = (a.evaluate()?, b.evaluate()?);
                let rank = va.rank.checked_mul(vb.rank).ok_or_else(rank_overflow)?;
                let c = tensor_chern(va.rank.into(), &va.total_chern, vb.rank.into(), &vb.total_chern)?;
                done(rank, c)
            }
            BundleExpr::Pullback(f, e) => {
                let v = e.evaluate()?;
                done(v.rank, f.pullback(&v.total_chern)?)
            }
        }
    }
}

// Tangent data: (1+x)^(n+1) on CP(n), trivial on spheres and tori, summed
// over the factors of a product.
fn tangent(space: &ModelSpace) -> Result<EvaluatedBundle> {
    match space.kind() {
        SpaceKind::Point => Ok(EvaluatedBundle { rank: 0, total_chern: GradedClass::one(space) }),
        SpaceKind::Sphere(n) | SpaceKind::Torus(n) => {
            Ok(EvaluatedBundle { rank: *n, total_chern: GradedClass::one(space) })
        }
        SpaceKind::ComplexProjective(n) => {
            let x = GradedClass::generator(space, 0)?;
            let c = (&GradedClass::one(space) + &x).pow(n + 1);
            Ok(EvaluatedBundle { rank: *n, total_chern: c })
        }
        SpaceKind::Product(factors) => {
            let mut rank = 0;
            let mut c = GradedClass::one(space);
            for i in 0..factors.len() {
                let pr = ModelMap::projection(space, vec![i])?;
                let t = tangent(pr.target())?;
                rank += t.rank;
                c = c.cup(&pr.pullback(&t.total_chern)?)?;
            }
            Ok(EvaluatedBundle { rank, total_chern: c })
        }
    }
}

fn check_embedding(f: &ModelMap) -> Result<()> {
    let reject = |reason: &str| {
        Err(Error::NotAnEmbedding { map: f.to_string(), reason: reason.to_string() })
    };
    match f.kind() {
        MapKind::Identity
        | MapKind::LinearInclusion
        | MapKind::SliceInclusion(_)
        | MapKind::Identification => Ok(()),
        MapKind::ConstToBasepoint if f.source().is_point() => Ok(()),
        MapKind::ConstToBasepoint => reject("constant map from a positive-dimensional space"),
        MapKind::SphereDegree(d) if d.abs() == 1 => Ok(()),
        MapKind::SphereDegree(_) => reject("degree other than 1 or -1"),
        MapKind::Projection(_) => {
            if f.source() == f.target() { Ok(()) } else { reject("projection onto a proper factor") }
        }
        MapKind::Compose(maps) => maps.iter().try_for_each(check_embedding),
    }
}

// c(N) = f^* c(T target) / c(T source); rank is half the codimension.
fn normal(f: &ModelMap) -> Result<EvaluatedBundle> {
    let codim = f.codimension();
    if codim % 2 != 0 || codim < 0 {
        return Err(Error::OddCodimension(f.to_string()));
    }
    let ts = tangent(f.source())?;
    let tt = tangent(f.target())?;
    let c = f.pullback(&tt.total_chern)?.cup(&ts.total_chern.inverse()?)?;
    let rank = (codim / 2) as u32;
    if c.support_degrees().last().is_some_and(|d| *d > 2 * rank) {
        return Err(Error::NotAnEmbedding {
            map: f.to_string(),
            reason: format!("normal data {c} exceeds rank {rank}"),
        });
    }
    Ok(EvaluatedBundle { rank, total_chern: c })
}

/// Checks `c(T CP(n)) · c(eps^1) = c(O(1))^(n+1)` from the tangent table.
pub fn tangent_euler_sequence_check(n: u32) -> bool {
    let Ok(space) = ModelSpace::complex_projective(n) else { return false };
    match tangent(&space) {
        Ok(t) => euler_sequence_holds(&space, &t.total_chern),
        Err(_) => false,
    }
}

/// The Euler-sequence identity against a supplied tangent Chern class.
pub fn euler_sequence_holds(space: &ModelSpace, tangent_chern: &GradedClass) -> bool {
    let Ok(n) = (match space.kind() {
        SpaceKind::ComplexProjective(n) => Ok(*n),
        _ => Err(()),
    }) else {
        return false;
    };
    let Ok(o1) = BundleExpr::tautological(space, 1).and_then(|e| e.total_chern()) else {
        return false;
    };
    let trivial = GradedClass::one(space);
    tangent_chern.space() == space && &(tangent_chern * &trivial) == &o1.pow(n + 1)
}

fn needs_parens_in_tensor(e: &BundleExpr) -> bool {
    matches!(e, BundleExpr::Sum(..) | BundleExpr::Tensor(..))
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Line(c) => write!(f, "line({c})"),
            BundleExpr::Tautological { k, .. } => write!(f, "O({k})"),
            BundleExpr::Trivial { rank, .. } => write!(f, "eps({rank})"),
            BundleExpr::Tangent(s) => write!(f, "T({s})"),
            BundleExpr::Normal(m) => write!(f, "N({m})"),
            BundleExpr::Clutched { half_dim } => write!(f, "clutch({half_dim})"),
            BundleExpr::Dual(e) => write!(f, "dual({e})"),
            BundleExpr::Sum(a, b) => {
                if matches!(**b, BundleExpr::Sum(..)) {
                    write!(f, "{a} (+) ({b})")
                } else {
                    write!(f, "{a} (+) {b}")
                }
            }
            BundleExpr::Tensor(a, b) => {
                let left = if matches!(**a, BundleExpr::Sum(..)) { format!("({a})") } else { a.to_string() };
                let right = if needs_parens_in_tensor(b) { format!("({b})") } else { b.to_string() };
                write!(f, "{left} (x) {right}")
            }
            BundleExpr::Pullback(m, e) => write!(f, "pull({m}, {e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn cp(n: u32) -> ModelSpace {
        ModelSpace::complex_projective(n).unwrap()
    }

    #[test]
    fn trivial_bundle_has_trivial_chern_class() {
        let e = BundleExpr::trivial(&cp(2), 7).evaluate().unwrap();
        assert_eq!(e.rank, 7);
        assert_eq!(e.total_chern.to_string(), "1");
    }

    #[test]
    fn line_sum_on_projective_line() {
        let s = cp(1);
        let e = BundleExpr::sum(
            BundleExpr::tautological(&s, 1).unwrap(),
            BundleExpr::tautological(&s, -1).unwrap(),
        )
        .unwrap()
        .evaluate()
        .unwrap();
        assert_eq!((e.rank, e.total_chern.to_string()), (2, "1".to_string()));
    }

    #[test]
    fn euler_numbers_of_projective_spaces() {
        for n in 1..=4 {
            let s = cp(n);
            let t = BundleExpr::tangent(&s).evaluate().unwrap();
            assert_eq!(t.rank, n);
            assert_eq!(t.total_chern.component(2 * n).integrate(), q(i64::from(n) + 1));
        }
    }

    #[test]
    fn euler_sequence_gate() {
        for n in 1..=6 {
            assert!(tangent_euler_sequence_check(n));
        }
        let s = cp(3);
        let x = GradedClass::generator(&s, 0).unwrap();
        let corrupted = (&GradedClass::one(&s) + &x).pow(3);
        assert!(!euler_sequence_holds(&s, &corrupted));
    }

    #[test]
    fn normal_bundle_of_linear_inclusion() {
        let f = ModelMap::linear_inclusion(&cp(1), &cp(3)).unwrap();
        let n = BundleExpr::normal(&f).unwrap().evaluate().unwrap();
        assert_eq!(n.rank, 2);
        assert_eq!(n.total_chern.to_string(), "1 + 2*x");
        let g = ModelMap::identity(&cp(2));
        assert_eq!(BundleExpr::normal(&g).unwrap().rank().unwrap(), 0);
    }

    #[test]
    fn normal_rejects_non_embeddings() {
        let s3 = ModelSpace::sphere(3).unwrap();
        let f = ModelMap::constant(&s3, &cp(2));
        assert!(matches!(BundleExpr::normal(&f), Err(Error::NotAnEmbedding { .. })));
        let pt = ModelSpace::point();
        let g = ModelMap::constant(&pt, &s3);
        assert!(matches!(BundleExpr::normal(&g), Err(Error::OddCodimension(_))));
    }

    #[test]
    fn clutched_bundles() {
        let h1 = BundleExpr::clutched(1).unwrap().evaluate().unwrap();
        assert_eq!((h1.rank, h1.total_chern.to_string()), (1, "1 + y".to_string()));
        let h2 = BundleExpr::clutched(2).unwrap().evaluate().unwrap();
        assert_eq!((h2.rank, h2.total_chern.to_string()), (2, "1 - y".to_string()));
    }

    #[test]
    fn dual_and_pullback() {
        let s = cp(2);
        let o2 = BundleExpr::tautological(&s, 2).unwrap();
        let d = BundleExpr::dual(o2.clone()).evaluate().unwrap();
        assert_eq!(d.total_chern.to_string(), "1 - 2*x");
        let f = ModelMap::linear_inclusion(&cp(1), &s).unwrap();
        let p = BundleExpr::pullback(&f, o2).unwrap();
        assert_eq!(p.space(), cp(1));
        assert_eq!(p.total_chern().unwrap().to_string(), "1 + 2*x");
        assert!(BundleExpr::pullback(&f, BundleExpr::trivial(&cp(1), 1)).is_err());
    }

    #[test]
    fn tensor_ranks_multiply() {
        let s = cp(3);
        let t = BundleExpr::tangent(&s);
        let e = BundleExpr::tensor(t.clone(), BundleExpr::tautological(&s, -1).unwrap()).unwrap();
        let v = e.evaluate().unwrap();
        assert_eq!(v.rank, 3);
        // T CP(3) ⊗ O(-1) = 4 O(0) - O(-1): c = (1 - x)^{-1} truncated
        assert_eq!(v.total_chern.to_string(), "1 + x + x^2 + x^3");
        assert_eq!(e.to_string(), "T(CP(3)) (x) O(-1)");
    }

    #[test]
    fn product_tangent_and_display() {
        let p = ModelSpace::product(vec![cp(1), ModelSpace::sphere(2).unwrap()]).unwrap();
        let t = BundleExpr::tangent(&p).evaluate().unwrap();
        assert_eq!((t.rank, t.total_chern.to_string()), (3, "1 + 2*x".to_string()));
        let s = cp(1);
        let a = BundleExpr::tautological(&s, 1).unwrap();
        let sum = BundleExpr::sum(a.clone(), a.clone()).unwrap();
        let e = BundleExpr::tensor(sum.clone(), BundleExpr::dual(a.clone())).unwrap();
        assert_eq!(e.to_string(), "(O(1) (+) O(1)) (x) dual(O(1))");
        let nested = BundleExpr::sum(a.clone(), sum).unwrap();
        assert_eq!(nested.to_string(), "O(1) (+) (O(1) (+) O(1))");
    }
}
