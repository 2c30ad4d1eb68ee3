use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ring::{text, GradedClass, Rational};

/// Commutative algebra operations shared by cohomology classes and formal
/// polynomials, so Newton's identities and genus substitution run on both.
pub trait ClassAlgebra: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, k: &Rational) -> Self;
}

impl ClassAlgebra for GradedClass {
    fn zero_like(&self) -> Self {
        GradedClass::zero(self.space())
    }
    fn one_like(&self) -> Self {
        GradedClass::one(self.space())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, k: &Rational) -> Self {
        self.scale(k)
    }
}

/// Polynomial in formal class variables `v_1..v_n` with `weight(v_i) = i`,
/// truncated above weight `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalPoly {
    order: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl FormalPoly {
    pub fn zero(order: usize) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut p = Self::zero(order);
        if !c.is_zero() {
            p.terms.insert(vec![0; order], c);
        }
        p
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Rational::one())
    }

    /// The variable `v_i` (1-based); zero when `i > order`.
    pub fn var(order: usize, i: usize) -> Self {
        assert!(i >= 1, "variables are 1-based");
        let mut p = Self::zero(order);
        if i <= order {
            let mut e = vec![0; order];
            e[i - 1] = 1;
            p.terms.insert(e, Rational::one());
        }
        p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn weight(exps: &[u32]) -> usize {
        exps.iter().enumerate().map(|(i, e)| (i + 1) * *e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Weight-`k` part.
    pub fn homogeneous(&self, k: usize) -> Self {
        Self {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Self::weight(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets `v_i = 0` for every `i > r`.
    pub fn restrict(&self, r: usize) -> Self {
        Self {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().skip(r).all(|e| *e == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `delta` to one coefficient.
    pub fn perturb(&mut self, exps: Vec<u32>, delta: Rational) {
        self.insert(exps, delta);
    }

    /// Substitutes `vars[i]` for `v_{i+1}` (missing entries are zero).
    pub fn evaluate<A: ClassAlgebra>(&self, template: &A, vars: &[A]) -> A {
        let mut out = template.zero_like();
        let mut powers: BTreeMap<(usize, u32), A> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = template.one_like().scaled(c);
            let mut vanished = false;
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let Some(v) = vars.get(i) else {
                    vanished = true;
                    break;
                };
                let p = powers.entry((i, e)).or_insert_with(|| {
                    let mut acc = v.one_like();
                    for _ in 0..e {
                        acc = acc.times(v);
                    }
                    acc
                });
                term = term.times(p);
            }
            if !vanished {
                out = out.plus(&term);
            }
        }
        out
    }

    /// Canonical text with variables named `{prefix}1, {prefix}2, ...`.
    pub fn render(&self, prefix: &str) -> String {
        let mono = |m: &Vec<u32>| {
            let parts: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if *e == 1 {
                        format!("{prefix}{}", i + 1)
                    } else {
                        format!("{prefix}{}^{e}", i + 1)
                    }
                })
                .collect();
            if parts.is_empty() { "1".to_string() } else { parts.join("*") }
        };
        text::format_terms(self.terms.iter().map(|(m, c)| (mono(m), c)))
    }
}

impl ClassAlgebra for FormalPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.order)
    }
    fn one_like(&self) -> Self {
        Self::one(self.order)
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-Rational::one()))
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for (a, ca) in &self.terms {
            let wa = Self::weight(a);
            for (b, cb) in &other.terms {
                if wa + Self::weight(b) > self.order {
                    continue;
                }
                let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.insert(m, ca * cb);
            }
        }
        out
    }
    fn scaled(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.order);
        }
        Self {
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }
}
