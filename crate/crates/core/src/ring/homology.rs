use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::{text, GradedClass, ModelSpace, Monomial, Rational};

/// A rational homology class, written on the Poincaré-dual basis: the basis
/// element indexed by the cohomology monomial `m` is `m ∩ [M]`, of grade
/// `dim M - deg m`.
///
/// The pairing used throughout is `<b, a ∩ [M]> = ∫ b·a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    space: ModelSpace,
    terms: BTreeMap<Monomial, Rational>,
}

impl HomologyClass {
    pub fn zero(space: &ModelSpace) -> Self {
        Self { space: space.clone(), terms: BTreeMap::new() }
    }

    /// `[M]`, the dual of the unit.
    pub fn fundamental_cycle(space: &ModelSpace) -> Self {
        GradedClass::one(space).poincare_dual()
    }

    /// The class of a point, dual to the fundamental monomial.
    pub fn point_class(space: &ModelSpace) -> Self {
        GradedClass::monomial(space, space.fundamental_monomial(), Rational::one())
            .poincare_dual()
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the point class.
    pub fn point_coefficient(&self) -> Rational {
        self.coefficient(&self.space.fundamental_monomial())
    }

    /// Coefficient of the fundamental cycle.
    pub fn fundamental_coefficient(&self) -> Rational {
        self.coefficient(&self.space.unit_monomial())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grade_of(&self, m: &Monomial) -> u32 {
        self.space.dimension() - self.space.degree_of(m)
    }

    /// Grades carrying a nonzero term, ascending.
    pub fn support_grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.terms.keys().map(|m| self.grade_of(m)).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Component of grade `k`.
    pub fn component(&self, k: u32) -> Self {
        Self {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.grade_of(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Inverse Poincaré duality.
    pub fn to_cohomology(&self) -> GradedClass {
        GradedClass::from_terms(
            &self.space,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub(crate) fn from_terms(
        space: &ModelSpace,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { space: space.clone(), terms }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: other.space.to_string(),
            });
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let s = terms.get(m).cloned().unwrap_or_else(Rational::zero) + c;
            if s.is_zero() {
                terms.remove(m);
            } else {
                terms.insert(m.clone(), s);
            }
        }
        Ok(Self { space: self.space.clone(), terms })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(&self.space, self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    /// Kronecker pairing with a cohomology class.
    pub fn pair(&self, b: &GradedClass) -> Result<Rational> {
        let a = self.to_cohomology();
        Ok(b.cup(&a)?.integrate())
    }
}

impl GradedClass {
    /// `self ∩ [M]`: coefficient-preserving on the monomial basis.
    pub fn poincare_dual(&self) -> HomologyClass {
        HomologyClass::from_terms(
            self.space(),
            self.terms().iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = self
            .terms
            .iter()
            .map(|(m, c)| (format!("PD({})", m.render(&self.space)), c));
        f.write_str(&text::format_terms(rendered))
    }
}

impl fmt::Debug for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomologyClass[{}]({self})", self.space)
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        self.try_add(rhs).expect("adding homology classes on different spaces")
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        self.scale(&-Rational::one())
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self + &-rhs
    }
}
