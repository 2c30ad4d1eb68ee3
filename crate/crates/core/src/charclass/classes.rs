use num_traits::One;

use crate::error::{Error, Result};
use crate::ring::{GradedClass, ModelSpace, Rational};

use super::genus::{
    a_hat_polynomials, chern_from_power_sums, power_sums_from_chern, todd_polynomials,
};
use super::UnivariateSeries;

/// Largest complex degree served from the cached universal tables; beyond it
/// genera are evaluated straight from power sums in the ring.
pub const TABLE_LIMIT: usize = 12;

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

/// Splits a total Chern class into `c_1..c_{dim/2}`.
pub fn chern_classes(total: &GradedClass) -> Result<Vec<GradedClass>> {
    if !total.constant_term().is_one() {
        return Err(Error::MalformedChernClass(format!(
            "constant term of {total} is not 1"
        )));
    }
    if !total.is_even() {
        return Err(Error::MalformedChernClass(format!(
            "{total} has odd-degree terms"
        )));
    }
    let n = total.space().dimension() / 2;
    Ok((1..=n).map(|k| total.component(2 * k)).collect())
}

/// Power sums `s_1..s_{dim/2}` of the Chern roots.
pub fn power_sums(total: &GradedClass) -> Result<Vec<GradedClass>> {
    let c = chern_classes(total)?;
    let n = c.len();
    Ok(power_sums_from_chern(total, &c, n))
}

/// `ch(E) = rank + Σ s_k / k!`.
pub fn chern_character(rank: i64, total: &GradedClass) -> Result<GradedClass> {
    let s = power_sums(total)?;
    let mut ch = GradedClass::from_integer(total.space(), rank);
    for (i, sk) in s.iter().enumerate() {
        ch = &ch + &sk.scale(&factorial(i + 1).recip());
    }
    Ok(ch)
}

/// Recovers the total Chern class from a Chern character (the constant
/// term, the rank, is ignored).
pub fn chern_from_character(ch: &GradedClass) -> Result<GradedClass> {
    if !ch.is_even() {
        return Err(Error::MalformedClass(format!(
            "Chern character {ch} has odd-degree terms"
        )));
    }
    let n = (ch.space().dimension() / 2) as usize;
    let s: Vec<GradedClass> =
        (1..=n).map(|k| ch.component(2 * k as u32).scale(&factorial(k))).collect();
    let e = chern_from_power_sums(ch, &s, n);
    Ok(e.iter().fold(GradedClass::one(ch.space()), |acc, c| &acc + c))
}

/// Total Chern class of `E ⊗ F` from rank and Chern data of both factors.
pub fn tensor_chern(
    rank_a: i64,
    total_a: &GradedClass,
    rank_b: i64,
    total_b: &GradedClass,
) -> Result<GradedClass> {
    let space = total_a.space();
    if space != total_b.space() {
        return Err(Error::SpaceMismatch {
            left: space.to_string(),
            right: total_b.space().to_string(),
        });
    }
    let sa = power_sums(total_a)?;
    let sb = power_sums(total_b)?;
    let n = sa.len();
    let at = |s: &[GradedClass], r: i64, k: usize| {
        if k == 0 { GradedClass::from_integer(space, r) } else { s[k - 1].clone() }
    };
    let mut binom = vec![Rational::one()];
    let mut s = Vec::with_capacity(n);
    for k in 1..=n {
        let mut next = vec![Rational::one(); k + 1];
        for a in 1..k {
            next[a] = &binom[a - 1] + &binom[a];
        }
        binom = next;
        let mut acc = GradedClass::zero(space);
        for a in 0..=k {
            let t = &at(&sa, rank_a, a) * &at(&sb, rank_b, k - a);
            acc = &acc + &t.scale(&binom[a]);
        }
        s.push(acc);
    }
    let e = chern_from_power_sums(total_a, &s, n);
    Ok(e.iter().fold(GradedClass::one(space), |acc, c| &acc + c))
}

// exp(Σ b_m s_m) with b = log f; the direct route for large spaces.
fn genus_from_sums(f: &UnivariateSeries, sums: &[GradedClass], space: &ModelSpace) -> Result<GradedClass> {
    let log = f.with_order(sums.len()).log()?;
    let mut q = GradedClass::zero(space);
    for (i, s) in sums.iter().enumerate() {
        q = &q + &s.scale(&log.coefficient(i + 1));
    }
    q.exp()
}

/// `Td(E)` from the total Chern class.
pub fn todd_class(total: &GradedClass) -> Result<GradedClass> {
    let c = chern_classes(total)?;
    let n = c.len();
    if n <= TABLE_LIMIT {
        return Ok(todd_polynomials(n).evaluate(total, &c));
    }
    let s = power_sums_from_chern(total, &c, n);
    genus_from_sums(&UnivariateSeries::todd(n), &s, total.space())
}

/// Total Chern class of `E ⊗ ℂ`: `c(E) · c(Ē)`.
pub fn complexified_chern(total: &GradedClass) -> Result<GradedClass> {
    chern_classes(total)?;
    Ok(total * &total.conjugate())
}

/// `p_i(E) = (-1)^i c_{2i}(E ⊗ ℂ)` for `i = 1..min(rank, dim/4)`.
pub fn pontryagin_classes(total: &GradedClass, rank: usize) -> Result<Vec<GradedClass>> {
    let cc = complexified_chern(total)?;
    let n = (total.space().dimension() / 4) as usize;
    Ok((1..=n.min(rank))
        .map(|i| {
            let p = cc.component(4 * i as u32);
            if i % 2 == 1 { p.scale(&-Rational::one()) } else { p }
        })
        .collect())
}

/// `1 + p_1 + p_2 + ...`.
pub fn total_pontryagin(space: &ModelSpace, p: &[GradedClass]) -> GradedClass {
    p.iter().fold(GradedClass::one(space), |acc, c| &acc + c)
}

/// `Â` from Pontryagin classes `p_1, p_2, ...` on `space`.
pub fn a_hat_class(space: &ModelSpace, pontryagin: &[GradedClass]) -> Result<GradedClass> {
    for p in pontryagin {
        if p.space() != space {
            return Err(Error::SpaceMismatch {
                left: space.to_string(),
                right: p.space().to_string(),
            });
        }
    }
    let n = (space.dimension() / 4) as usize;
    let one = GradedClass::one(space);
    let p: Vec<GradedClass> = pontryagin.iter().take(n).cloned().collect();
    if n <= TABLE_LIMIT {
        return Ok(a_hat_polynomials(n).evaluate(&one, &p));
    }
    // power sums of the squared roots, against log of g(u) = f(√u)
    let s = power_sums_from_chern(&one, &p, n);
    let wide = UnivariateSeries::a_hat(2 * n);
    let g = UnivariateSeries::new((0..=n).map(|k| wide.coefficient(2 * k)).collect());
    genus_from_sums(&g, &s, space)
}

/// `Â(E)` straight from a complex bundle's total Chern class.
pub fn a_hat_from_chern(total: &GradedClass, rank: usize) -> Result<GradedClass> {
    a_hat_class(total.space(), &pontryagin_classes(total, rank)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn cp(n: u32) -> ModelSpace {
        ModelSpace::complex_projective(n).unwrap()
    }

    fn parse(s: &ModelSpace, t: &str) -> GradedClass {
        GradedClass::parse(s, t).unwrap()
    }

    #[test]
    fn character_of_hyperplane_bundle() {
        let s = cp(1);
        assert_eq!(chern_character(1, &parse(&s, "1 + x")).unwrap().to_string(), "1 + x");
        let s3 = cp(3);
        let ch = chern_character(1, &parse(&s3, "1 + x")).unwrap();
        assert_eq!(ch.to_string(), "1 + x + 1/2*x^2 + 1/6*x^3");
        assert_eq!(chern_character(4, &GradedClass::one(&s3)).unwrap(), GradedClass::from_integer(&s3, 4));
    }

    #[test]
    fn character_round_trips() {
        let s = cp(4);
        let c = parse(&s, "1 + 3*x + 2*x^2 - x^4");
        let ch = chern_character(3, &c).unwrap();
        assert_eq!(chern_from_character(&ch).unwrap(), c);
    }

    #[test]
    fn malformed_chern_data() {
        let s = cp(2);
        assert!(matches!(chern_character(1, &parse(&s, "2 + x")), Err(Error::MalformedChernClass(_))));
        let t = ModelSpace::torus(2).unwrap();
        assert!(chern_character(1, &parse(&t, "1 + t1")).is_err());
    }

    #[test]
    fn todd_of_projective_tangent() {
        assert_eq!(todd_class(&parse(&cp(1), "1 + 2*x")).unwrap().to_string(), "1 + x");
        for n in 1..=4 {
            let s = cp(n);
            let x = GradedClass::generator(&s, 0).unwrap();
            let c = (&GradedClass::one(&s) + &x).pow(n + 1);
            assert_eq!(todd_class(&c).unwrap().integrate(), q(1));
        }
    }

    #[test]
    fn pontryagin_of_cp2() {
        let s = cp(2);
        let c = parse(&s, "1 + 3*x + 3*x^2");
        let p = pontryagin_classes(&c, 2).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].to_string(), "3*x^2");
        let a = a_hat_class(&s, &p).unwrap();
        assert_eq!(a.to_string(), "1 - 1/8*x^2");
        let line = pontryagin_classes(&parse(&s, "1 + x"), 1).unwrap();
        assert_eq!(line[0].to_string(), "x^2");
    }

    #[test]
    fn tensor_of_line_bundles_adds_first_chern() {
        let s = cp(3);
        let c = tensor_chern(1, &parse(&s, "1 + x"), 1, &parse(&s, "1 + 2*x")).unwrap();
        assert_eq!(c.to_string(), "1 + 3*x");
        let c = tensor_chern(2, &parse(&s, "1 + 2*x + x^2"), 1, &parse(&s, "1 - x")).unwrap();
        assert_eq!(c, GradedClass::one(&s));
    }

    #[test]
    fn direct_route_matches_tables() {
        let s = cp(5);
        let x = GradedClass::generator(&s, 0).unwrap();
        let c = (&GradedClass::one(&s) + &x).pow(6);
        let chern = chern_classes(&c).unwrap();
        let sums = power_sums_from_chern(&c, &chern, 5);
        let direct = genus_from_sums(&UnivariateSeries::todd(5), &sums, &s).unwrap();
        assert_eq!(direct, todd_class(&c).unwrap());
        assert_eq!(direct.integrate(), q(1));
    }
}
