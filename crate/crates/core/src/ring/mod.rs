//! Exact rational cohomology of the catalog manifolds.
//!
//! Every catalog space has torsion-free integral cohomology, so the rational
//! ring computed here carries all of its information. Arithmetic silently
//! truncates above the space dimension, which is also what the nilpotency
//! relations force.

mod class;
mod homology;
mod map;
mod space;
pub mod text;

pub use class::{GradedClass, Monomial};
pub use homology::HomologyClass;
pub use map::{MapKind, ModelMap};
pub use space::{Generator, ModelSpace, SpaceKind, MAX_BASIS, MAX_DIMENSION};

use crate::error::Result;

/// Exact rational numbers used for every coefficient.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// External product `a ⊠ b = pr_1^* a · pr_2^* b` on `X × Y`.
pub fn kunneth(a: &GradedClass, b: &GradedClass) -> Result<GradedClass> {
    let x = a.space();
    let y = b.space();
    let product = ModelSpace::product(vec![x.clone(), y.clone()])?;
    let kx = x.factor_count();
    let ky = y.factor_count();
    let pr1 = ModelMap::projection(&product, (0..kx).collect())?;
    let pr2 = ModelMap::projection(&product, (kx..kx + ky).collect())?;
    pr1.pullback(a)?.cup(&pr2.pullback(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kunneth_concatenates_bases() {
        let cp1 = ModelSpace::complex_projective(1).unwrap();
        let s2 = ModelSpace::sphere(2).unwrap();
        let x = GradedClass::generator(&cp1, 0).unwrap();
        let y = GradedClass::generator(&s2, 0).unwrap();
        let xy = kunneth(&x, &y).unwrap();
        assert_eq!(xy.to_string(), "x*y");
        assert_eq!(xy.integrate(), q(1));
        let one = kunneth(&GradedClass::one(&cp1), &GradedClass::one(&s2)).unwrap();
        assert_eq!(one.to_string(), "1");
    }

    // T1 x T1 has the same ring table as T2 under the identification.
    #[test]
    fn kunneth_of_circles_matches_two_torus() {
        let t1 = ModelSpace::torus(1).unwrap();
        let t2 = ModelSpace::torus(2).unwrap();
        let a = GradedClass::generator(&t1, 0).unwrap();
        let prod = kunneth(&a, &a).unwrap();
        let theta12 = GradedClass::parse(&t2, "t1*t2").unwrap();
        assert_eq!(prod.transport(&t2).unwrap(), theta12);

        let p = prod.space().clone();
        for m in p.basis() {
            for n in p.basis() {
                let l = GradedClass::monomial(&p, m.clone(), q(1));
                let r = GradedClass::monomial(&p, n.clone(), q(1));
                let lt = l.transport(&t2).unwrap();
                let rt = r.transport(&t2).unwrap();
                assert_eq!((&l * &r).transport(&t2).unwrap(), &lt * &rt);
            }
        }
    }
}
