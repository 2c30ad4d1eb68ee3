use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{text, Rational};

use super::{ClassAlgebra, FormalPoly, UnivariateSeries};

/// Power sums `s_1..s_n` from elementary symmetric data `c_1, c_2, ...`
/// (entries beyond `chern.len()` are zero), via Newton's identities
/// `s_k = c_1 s_{k-1} - c_2 s_{k-2} + ... + (-1)^{k-1} k c_k`.
pub fn power_sums_from_chern<A: ClassAlgebra>(template: &A, chern: &[A], n: usize) -> Vec<A> {
    let zero = template.zero_like();
    let c = |i: usize| chern.get(i - 1).unwrap_or(&zero);
    let mut s: Vec<A> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = c(k).scaled(&Rational::from_integer(k.into()));
        if k % 2 == 0 {
            acc = acc.scaled(&-Rational::one());
        }
        for i in 1..k {
            let t = c(i).times(&s[k - i - 1]);
            acc = if i % 2 == 1 { acc.plus(&t) } else { acc.minus(&t) };
        }
        s.push(acc);
    }
    s
}

/// Elementary symmetric data `e_1..e_n` from power sums (inverse Newton:
/// `k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} s_i`).
pub fn chern_from_power_sums<A: ClassAlgebra>(template: &A, sums: &[A], n: usize) -> Vec<A> {
    let zero = template.zero_like();
    let s = |i: usize| sums.get(i - 1).unwrap_or(&zero);
    let mut e: Vec<A> = vec![template.one_like()];
    for k in 1..=n {
        let mut acc = template.zero_like();
        for i in 1..=k {
            let t = e[k - i].times(s(i));
            acc = if i % 2 == 1 { acc.plus(&t) } else { acc.minus(&t) };
        }
        e.push(acc.scaled(&Rational::new(1.into(), (k as i64).into())));
    }
    e.remove(0);
    e
}

/// Which formal variables a genus is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VariableType {
    /// Elementary symmetric functions `c_k` of the roots `x_i`.
    Chern,
    /// Elementary symmetric functions `p_k` of the squares `x_i^2`.
    Pontryagin,
}

impl VariableType {
    pub fn prefix(self) -> &'static str {
        match self {
            VariableType::Chern => "c",
            VariableType::Pontryagin => "p",
        }
    }
}

/// Universal polynomials of a multiplicative genus `∏ f(x_i)`, one per
/// degree up to the truncation order. Degrees count variable weight:
/// `c_k` and `p_k` both have weight `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusPolynomials {
    variable_type: VariableType,
    poly: FormalPoly,
}

impl GenusPolynomials {
    pub fn variable_type(&self) -> VariableType {
        self.variable_type
    }

    pub fn order(&self) -> usize {
        self.poly.order()
    }

    /// Whole polynomial, all degrees summed.
    pub fn polynomial(&self) -> &FormalPoly {
        &self.poly
    }

    pub fn degree(&self, k: usize) -> FormalPoly {
        self.poly.homogeneous(k)
    }

    /// Substitutes class data for `c_k` (or `p_k`).
    pub fn evaluate<A: ClassAlgebra>(&self, template: &A, vars: &[A]) -> A {
        self.poly.evaluate(template, vars)
    }

    /// Adds `delta` to the coefficient of one monomial; mutation testing aid.
    pub fn perturbed(&self, exps: Vec<u32>, delta: Rational) -> Self {
        let mut out = self.clone();
        out.poly.perturb(exps, delta);
        out
    }
}

impl fmt::Display for GenusPolynomials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..=self.order() {
            writeln!(f, "{k}: {}", self.degree(k).render(self.variable_type.prefix()))?;
        }
        Ok(())
    }
}

/// Expands `∏_i f(x_i)` in elementary symmetric functions through weight
/// `order`. Stored coefficients of `f` beyond its length count as zero.
///
/// With `log f = Σ b_m x^m`, the product is `exp(Σ b_m s_m)` where `s_m` are
/// the power sums, written in the elementary functions by Newton's
/// identities. For the Pontryagin type `f` must be even and is expanded in
/// `u = x^2`.
pub fn expand_genus(
    f: &UnivariateSeries,
    order: usize,
    variable_type: VariableType,
) -> Result<GenusPolynomials> {
    if !f.coefficient(0).is_one() {
        return Err(Error::ConstantTermNotOne(text::format_rational(&f.coefficient(0))));
    }
    let base = match variable_type {
        VariableType::Chern => f.with_order(order),
        VariableType::Pontryagin => {
            let wide = f.with_order(2 * order);
            if !wide.is_even() {
                return Err(Error::SeriesNotEven(f.to_string()));
            }
            UnivariateSeries::new((0..=order).map(|k| wide.coefficient(2 * k)).collect())
        }
    };
    let log = base.log()?;
    let unit = FormalPoly::one(order);
    let vars: Vec<FormalPoly> = (1..=order).map(|i| FormalPoly::var(order, i)).collect();
    let sums = power_sums_from_chern(&unit, &vars, order);

    // weight-m part of Q = Σ b_m s_m is b_m s_m itself
    let q_parts: Vec<FormalPoly> = (1..=order)
        .map(|m| sums[m - 1].scaled(&log.coefficient(m)))
        .collect();
    // exp via k F_k = Σ_j j Q_j F_{k-j}
    let mut parts: Vec<FormalPoly> = vec![unit.clone()];
    for k in 1..=order {
        let mut acc = FormalPoly::zero(order);
        for j in 1..=k {
            let t = q_parts[j - 1].times(&parts[k - j]);
            acc = acc.plus(&t.scaled(&Rational::from_integer(j.into())));
        }
        parts.push(acc.scaled(&Rational::new(1.into(), (k as i64).into())));
    }
    let poly = parts.iter().fold(FormalPoly::zero(order), |acc, p| acc.plus(p));
    Ok(GenusPolynomials { variable_type, poly })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Table {
    Todd,
    AHat,
}

fn cached(table: Table, order: usize) -> Arc<GenusPolynomials> {
    static CACHE: OnceLock<Mutex<HashMap<(Table, usize), Arc<GenusPolynomials>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("genus cache poisoned").get(&(table, order)) {
        return g.clone();
    }
    let g = match table {
        Table::Todd => expand_genus(&UnivariateSeries::todd(order), order, VariableType::Chern),
        Table::AHat => {
            expand_genus(&UnivariateSeries::a_hat(2 * order), order, VariableType::Pontryagin)
        }
    }
    .expect("standard series have constant term 1");
    let g = Arc::new(g);
    cache.lock().expect("genus cache poisoned").insert((table, order), g.clone());
    g
}

/// Todd polynomials in `c_1..c_order`.
pub fn todd_polynomials(order: usize) -> Arc<GenusPolynomials> {
    cached(Table::Todd, order)
}

/// Â polynomials in `p_1..p_order`.
pub fn a_hat_polynomials(order: usize) -> Arc<GenusPolynomials> {
    cached(Table::AHat, order)
}

/// Checks `Td = e^{c_1/2} Â` between universal polynomials through degree
/// `order` with `roots` formal roots (`c_k = 0` for `k > roots`), Â being
/// re-expressed in Chern variables through `p_k = (-1)^k c_{2k}(E ⊕ Ē)`.
pub fn todd_identity_holds(
    todd: &GenusPolynomials,
    a_hat: &GenusPolynomials,
    order: usize,
    roots: usize,
) -> bool {
    if todd.variable_type() != VariableType::Chern
        || a_hat.variable_type() != VariableType::Pontryagin
        || todd.order() < order
        || 2 * a_hat.order() < order
    {
        return false;
    }
    let unit = FormalPoly::one(order);
    let c = |i: usize| FormalPoly::var(order, i);
    // p_k = (-1)^k Σ_{i+j=2k} (-1)^j c_i c_j, with c_0 = 1
    let p: Vec<FormalPoly> = (1..=order / 2)
        .map(|k| {
            let mut acc = FormalPoly::zero(order);
            for i in 0..=2 * k {
                let j = 2 * k - i;
                let ci = if i == 0 { unit.clone() } else { c(i) };
                let cj = if j == 0 { unit.clone() } else { c(j) };
                let t = ci.times(&cj);
                acc = if j % 2 == 0 { acc.plus(&t) } else { acc.minus(&t) };
            }
            if k % 2 == 1 { acc.scaled(&-Rational::one()) } else { acc }
        })
        .collect();
    let a_hat_in_c = a_hat.evaluate(&unit, &p);

    let half_c1 = c(1).scaled(&Rational::new(1.into(), 2.into()));
    let mut exp_half = unit.clone();
    let mut power = unit.clone();
    for m in 1..=order {
        power = power.times(&half_c1).scaled(&Rational::new(1.into(), (m as i64).into()));
        exp_half = exp_half.plus(&power);
    }
    let rhs = exp_half.times(&a_hat_in_c).restrict(roots);
    let lhs = todd.evaluate(&unit, &(1..=order).map(c).collect::<Vec<_>>()).restrict(roots);
    let agree = (0..=order).all(|k| lhs.homogeneous(k) == rhs.homogeneous(k));
    agree && !lhs.terms().values().any(Zero::is_zero)
}

/// `Td = e^{c_1/2} Â` through degree `order` with `roots` formal roots, on
/// freshly expanded tables.
pub fn todd_identity_check(order: usize, roots: usize) -> bool {
    todd_identity_holds(&todd_polynomials(order), &a_hat_polynomials(order), order, roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{frac, q};

    #[test]
    fn todd_low_degrees() {
        let t = expand_genus(&UnivariateSeries::todd(2), 2, VariableType::Chern).unwrap();
        assert_eq!(t.degree(0).render("c"), "1");
        assert_eq!(t.degree(1).render("c"), "1/2*c1");
        assert_eq!(t.degree(2).render("c"), "1/12*c2 + 1/12*c1^2");
    }

    #[test]
    fn a_hat_first_degree() {
        let a = expand_genus(&UnivariateSeries::a_hat(2), 1, VariableType::Pontryagin).unwrap();
        assert_eq!(a.degree(1).render("p"), "-1/24*p1");
        let a2 = a_hat_polynomials(2);
        assert_eq!(a2.degree(2).render("p"), "-1/1440*p2 + 7/5760*p1^2");
    }

    #[test]
    fn constant_series_gives_trivial_genus() {
        let g = expand_genus(&UnivariateSeries::one(5), 5, VariableType::Chern).unwrap();
        assert_eq!(g.polynomial(), &FormalPoly::one(5));
    }

    #[test]
    fn rejects_bad_series() {
        let bad = UnivariateSeries::new(vec![q(2), q(1)]);
        assert!(matches!(
            expand_genus(&bad, 3, VariableType::Chern),
            Err(Error::ConstantTermNotOne(_))
        ));
        let odd = UnivariateSeries::new(vec![q(1), q(1)]);
        assert!(matches!(
            expand_genus(&odd, 2, VariableType::Pontryagin),
            Err(Error::SeriesNotEven(_))
        ));
    }

    #[test]
    fn newton_single_root() {
        let unit = FormalPoly::one(4);
        let c1 = FormalPoly::var(4, 1);
        let s = power_sums_from_chern(&unit, &[c1.clone()], 2);
        assert_eq!(s[1], c1.times(&c1));
        let zero = power_sums_from_chern(&unit, &[], 4);
        assert!(zero.iter().all(FormalPoly::is_zero));
    }

    #[test]
    fn newton_round_trip_is_identity() {
        let n = 6;
        let unit = FormalPoly::one(n);
        let e: Vec<FormalPoly> = (1..=n).map(|i| FormalPoly::var(n, i)).collect();
        let s = power_sums_from_chern(&unit, &e, n);
        assert_eq!(chern_from_power_sums(&unit, &s, n), e);
    }

    #[test]
    fn identity_check_small_cases() {
        assert!(todd_identity_check(1, 1));
        assert!(todd_identity_check(4, 4));
        let bad = a_hat_polynomials(2).perturbed(vec![2, 0], frac(1, 720));
        assert!(!todd_identity_holds(&todd_polynomials(4), &bad, 4, 4));
    }
}
