use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::{text, ModelSpace, Rational};

/// Exponent vector, one entry per generator of the ambient space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Canonical text, e.g. `x^2*y`; the unit monomial is `1`.
    pub fn render(&self, space: &ModelSpace) -> String {
        let mut parts = Vec::new();
        for (e, g) in self.0.iter().zip(space.generators()) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Reduced product of two monomials: `None` when a nilpotency relation kills
/// it, otherwise the Koszul sign and the product monomial.
pub(crate) fn multiply_monomials(
    space: &ModelSpace,
    a: &Monomial,
    b: &Monomial,
) -> Option<(bool, Monomial)> {
    let gens = space.generators();
    let mut exps = Vec::with_capacity(gens.len());
    for ((x, y), g) in a.0.iter().zip(&b.0).zip(gens) {
        let e = x + y;
        if e > g.max_exponent {
            return None;
        }
        exps.push(e);
    }
    // Moving b's odd generator j left past a's odd generators i > j.
    let mut odd_in_a_after = 0u32;
    let mut negative = false;
    for j in (0..gens.len()).rev() {
        let odd = gens[j].is_odd();
        if odd && b.0[j] % 2 == 1 && odd_in_a_after % 2 == 1 {
            negative = !negative;
        }
        if odd && a.0[j] % 2 == 1 {
            odd_in_a_after += 1;
        }
    }
    Some((negative, Monomial(exps)))
}

/// An element of the rational cohomology ring of a model space, stored on the
/// reduced monomial basis with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedClass {
    space: ModelSpace,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedClass {
    pub fn zero(space: &ModelSpace) -> Self {
        Self { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn one(space: &ModelSpace) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn constant(space: &ModelSpace, c: Rational) -> Self {
        let mut out = Self::zero(space);
        out.add_term(space.unit_monomial(), c);
        out
    }

    pub fn from_integer(space: &ModelSpace, n: i64) -> Self {
        Self::constant(space, Rational::from_integer(n.into()))
    }

    /// The `index`-th generator as a class.
    pub fn generator(space: &ModelSpace, index: usize) -> Result<Self> {
        let n = space.generators().len();
        if index >= n {
            return Err(Error::MalformedClass(format!("{space} has no generator #{index}")));
        }
        let mut e = vec![0; n];
        e[index] = 1;
        Ok(Self::monomial(space, Monomial::new(e), Rational::one()))
    }

    pub fn generator_named(space: &ModelSpace, name: &str) -> Result<Self> {
        let i = space
            .generator_index(name)
            .ok_or_else(|| Error::MalformedClass(format!("{space} has no generator `{name}`")))?;
        Self::generator(space, i)
    }

    /// `coeff * m`, or zero when `m` violates a relation.
    pub fn monomial(space: &ModelSpace, m: Monomial, coeff: Rational) -> Self {
        let mut out = Self::zero(space);
        let in_range = m.0.len() == space.generators().len()
            && m.0.iter().zip(space.generators()).all(|(e, g)| *e <= g.max_exponent);
        if in_range {
            out.add_term(m, coeff);
        }
        out
    }

    /// Builds a class from arbitrary terms, reducing and summing duplicates.
    pub fn from_terms(
        space: &ModelSpace,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut out = Self::zero(space);
        for (m, c) in terms {
            out = &out + &Self::monomial(space, m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
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

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&self.space.unit_monomial())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: other.space.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// Graded-commutative cup product.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = Self::zero(&self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = multiply_monomials(&self.space, ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.space);
        }
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.space);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Degree of each term's monomial.
    pub fn degree_of(&self, m: &Monomial) -> u32 {
        self.space.degree_of(m)
    }

    /// Homogeneous component of degree `k`.
    pub fn component(&self, k: u32) -> Self {
        Self {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.space.degree_of(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `k`.
    pub fn truncate(&self, k: u32) -> Self {
        Self {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.space.degree_of(m) <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degrees carrying a nonzero term, ascending.
    pub fn support_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| self.space.degree_of(m)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.support_degrees().len() <= 1
    }

    /// Applies `(-1)^i` to the degree-`2i` component; odd-degree terms are
    /// left alone. On a total Chern class this gives the conjugate bundle.
    pub fn conjugate(&self) -> Self {
        Self {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let d = self.space.degree_of(m);
                    let flip = d % 4 == 2;
                    (m.clone(), if flip { -c } else { c.clone() })
                })
                .collect(),
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let inv0 = c0.recip();
        // self = c0 (1 - u) with u nilpotent.
        let u = &Self::one(&self.space) - &self.scale(&inv0);
        let mut sum = Self::one(&self.space);
        let mut power = Self::one(&self.space);
        for _ in 0..self.space.dimension() {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&inv0))
    }

    /// `exp` of a class without constant term (a finite sum, by nilpotency).
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::MalformedClass(format!(
                "exp needs a nilpotent argument, got {self}"
            )));
        }
        let mut sum = Self::one(&self.space);
        let mut power = Self::one(&self.space);
        let mut k = 0i64;
        loop {
            k += 1;
            power = (&power * self).scale(&Rational::new(1.into(), k.into()));
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum)
    }

    /// Evaluation against the fundamental class.
    pub fn integrate(&self) -> Rational {
        self.coefficient(&self.space.fundamental_monomial())
    }

    /// Moves the class to a space with identical generator signature.
    pub fn transport(&self, to: &ModelSpace) -> Result<Self> {
        if self.space.signature() != to.signature() {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: to.to_string(),
            });
        }
        Ok(Self { space: to.clone(), terms: self.terms.clone() })
    }

    /// True when every term has even degree.
    pub fn is_even(&self) -> bool {
        self.support_degrees().iter().all(|d| d % 2 == 0)
    }

    /// Parses the canonical text format (also accepts unreduced input).
    pub fn parse(space: &ModelSpace, text: &str) -> Result<Self> {
        text::parse_class(space, text)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = self.terms.iter().map(|(m, c)| (m.render(&self.space), c));
        f.write_str(&text::format_terms(rendered))
    }
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedClass[{}]({self})", self.space)
    }
}

// Operator impls panic on a space mismatch; the `try_*` / `cup` methods are
// the fallible entry points.

impl Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.try_add(rhs).expect("adding classes on different spaces")
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self.try_sub(rhs).expect("subtracting classes on different spaces")
    }
}

impl Mul for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        self.cup(rhs).expect("multiplying classes on different spaces")
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        GradedClass {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: GradedClass) -> GradedClass {
        &self + &rhs
    }
}

impl Sub for GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: GradedClass) -> GradedClass {
        &self - &rhs
    }
}

impl Mul for GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: GradedClass) -> GradedClass {
        &self * &rhs
    }
}

impl Neg for GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        -&self
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
    fn cup_on_projective_plane() {
        let s = cp(2);
        let x = GradedClass::generator(&s, 0).unwrap();
        assert_eq!((&x * &x).to_string(), "x^2");
        assert!((&(&x * &x) * &x).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let t = ModelSpace::torus(2).unwrap();
        let t1 = GradedClass::generator(&t, 0).unwrap();
        let t2 = GradedClass::generator(&t, 1).unwrap();
        assert_eq!((&t1 * &t2).to_string(), "t1*t2");
        assert_eq!((&t2 * &t1).to_string(), "-t1*t2");
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn integrate_reads_top_coefficient() {
        let s = cp(1);
        let x = GradedClass::generator(&s, 0).unwrap();
        assert_eq!((&GradedClass::one(&s) + &x).integrate(), q(1));
        let s3 = ModelSpace::sphere(3).unwrap();
        assert_eq!(GradedClass::from_integer(&s3, 5).integrate(), q(0));
        let s2 = cp(2);
        let x = GradedClass::generator(&s2, 0).unwrap();
        assert_eq!((&x * &x).scale(&q(3)).integrate(), q(3));
    }

    #[test]
    fn inverse_and_exp_are_exact() {
        let s = cp(3);
        let x = GradedClass::generator(&s, 0).unwrap();
        let a = &GradedClass::from_integer(&s, 2) + &x;
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, GradedClass::one(&s));
        let e = x.exp().unwrap();
        let e_neg = (-&x).exp().unwrap();
        assert_eq!(&e * &e_neg, GradedClass::one(&s));
        assert_eq!(e.to_string(), "1 + x + 1/2*x^2 + 1/6*x^3");
        assert!(GradedClass::zero(&s).inverse().is_err());
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let a = GradedClass::one(&cp(1));
        let b = GradedClass::one(&cp(2));
        assert!(matches!(a.cup(&b), Err(Error::SpaceMismatch { .. })));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn out_of_range_monomials_vanish() {
        let s = cp(1);
        let m = GradedClass::monomial(&s, Monomial::new(vec![2]), q(4));
        assert!(m.is_zero());
    }
}
