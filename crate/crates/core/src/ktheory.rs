//! Topological K-theory of the catalog spaces.
//!
//! K-classes are formal differences of bundle expressions. Every catalog
//! space has torsion-free K-theory, so a class is determined by its virtual
//! rank and its Chern character; [`KClass::equal_mod_stable`] decides
//! equality that way and is only meaningful on such spaces.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::bundle::BundleExpr;
use crate::charclass::{a_hat_from_chern, chern_character, todd_class};
use crate::error::{Error, Result};
use crate::ring::{GradedClass, MapKind, ModelMap, ModelSpace, Monomial, Rational, SpaceKind};

/// An element `V - W` of `K^0(X)`, kept as lists of summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    space: ModelSpace,
    plus: Vec<BundleExpr>,
    minus: Vec<BundleExpr>,
    virtual_rank: i64,
    ch_image: GradedClass,
}

fn rank_overflow() -> Error {
    Error::InvalidBundle("virtual rank overflow".into())
}

fn mismatch(a: &ModelSpace, b: &ModelSpace) -> Error {
    Error::SpaceMismatch { left: a.to_string(), right: b.to_string() }
}

impl KClass {
    pub fn new(space: &ModelSpace, plus: Vec<BundleExpr>, minus: Vec<BundleExpr>) -> Result<Self> {
        let mut virtual_rank = 0i64;
        let mut ch_image = GradedClass::zero(space);
        for (sign, e) in plus.iter().map(|e| (1, e)).chain(minus.iter().map(|e| (-1, e))) {
            let s = e.space();
            if &s != space {
                return Err(mismatch(space, &s));
            }
            let v = e.evaluate()?;
            let ch = chern_character(v.rank.into(), &v.total_chern)?;
            virtual_rank += sign * i64::from(v.rank);
            ch_image = if sign > 0 { &ch_image + &ch } else { &ch_image - &ch };
        }
        Ok(Self { space: space.clone(), plus, minus, virtual_rank, ch_image })
    }

    pub fn zero(space: &ModelSpace) -> Self {
        Self::new(space, vec![], vec![]).expect("empty class")
    }

    /// `[E]`.
    pub fn from_bundle(e: BundleExpr) -> Result<Self> {
        Self::new(&e.space(), vec![e], vec![])
    }

    /// `[V] - [W]`.
    pub fn difference(v: BundleExpr, w: BundleExpr) -> Result<Self> {
        Self::new(&v.space(), vec![v], vec![w])
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn plus(&self) -> &[BundleExpr] {
        &self.plus
    }

    pub fn minus(&self) -> &[BundleExpr] {
        &self.minus
    }

    pub fn virtual_rank(&self) -> i64 {
        self.virtual_rank
    }

    /// `ch(V) - ch(W)`.
    pub fn ch_image(&self) -> &GradedClass {
        &self.ch_image
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(mismatch(&self.space, &other.space));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut plus = self.plus.clone();
        plus.extend(other.plus.iter().cloned());
        let mut minus = self.minus.clone();
        minus.extend(other.minus.iter().cloned());
        Ok(Self {
            space: self.space.clone(),
            plus,
            minus,
            virtual_rank: self
                .virtual_rank
                .checked_add(other.virtual_rank)
                .ok_or_else(|| rank_overflow())?,
            ch_image: &self.ch_image + &other.ch_image,
        })
    }

    pub fn negate(&self) -> Self {
        Self {
            space: self.space.clone(),
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            virtual_rank: -self.virtual_rank,
            ch_image: -&self.ch_image,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    /// `n · self`: repeated summands for small `|n|`, otherwise a tensor
    /// product with `eps(|n|)`.
    pub fn scale(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.negate() } else { self.clone() };
        let m = n.unsigned_abs();
        if m > 16 {
            let r = u32::try_from(m).map_err(|_| rank_overflow())?;
            return Self::from_bundle(BundleExpr::trivial(&self.space, r))?.tensor(&base);
        }
        let mut out = Self::zero(&self.space);
        for _ in 0..m {
            out = out.add(&base)?;
        }
        Ok(out)
    }

    /// `(V - W)(V' - W') = VV' + WW' - VW' - WV'`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let pairs = |a: &[BundleExpr], b: &[BundleExpr]| -> Result<Vec<BundleExpr>> {
            let mut out = Vec::with_capacity(a.len() * b.len());
            for x in a {
                for y in b {
                    out.push(BundleExpr::tensor(x.clone(), y.clone())?);
                }
            }
            Ok(out)
        };
        let mut plus = pairs(&self.plus, &other.plus)?;
        plus.extend(pairs(&self.minus, &other.minus)?);
        let mut minus = pairs(&self.plus, &other.minus)?;
        minus.extend(pairs(&self.minus, &other.plus)?);
        Ok(Self {
            space: self.space.clone(),
            plus,
            minus,
            virtual_rank: self
                .virtual_rank
                .checked_mul(other.virtual_rank)
                .ok_or_else(|| rank_overflow())?,
            ch_image: self.ch_image.cup(&other.ch_image)?,
        })
    }

    pub fn dual(&self) -> Self {
        Self {
            space: self.space.clone(),
            plus: self.plus.iter().cloned().map(BundleExpr::dual).collect(),
            minus: self.minus.iter().cloned().map(BundleExpr::dual).collect(),
            virtual_rank: self.virtual_rank,
            ch_image: self.ch_image.conjugate(),
        }
    }

    pub fn pullback(&self, f: &ModelMap) -> Result<Self> {
        if f.target() != &self.space {
            return Err(mismatch(f.target(), &self.space));
        }
        let pull = |v: &[BundleExpr]| -> Result<Vec<BundleExpr>> {
            v.iter().map(|e| BundleExpr::pullback(f, e.clone())).collect()
        };
        Ok(Self {
            space: f.source().clone(),
            plus: pull(&self.plus)?,
            minus: pull(&self.minus)?,
            virtual_rank: self.virtual_rank,
            ch_image: f.pullback(&self.ch_image)?,
        })
    }

    /// Equality of virtual rank and Chern character. On the catalog spaces
    /// this is equality in `K^0`.
    pub fn equal_mod_stable(&self, other: &Self) -> bool {
        self.space == other.space
            && self.virtual_rank == other.virtual_rank
            && self.ch_image == other.ch_image
    }

    /// `c(V) c(W)^{-1}`.
    pub fn total_chern(&self) -> Result<GradedClass> {
        let mut c = GradedClass::one(&self.space);
        for e in &self.plus {
            c = c.cup(&e.total_chern()?)?;
        }
        for e in &self.minus {
            c = c.cup(&e.total_chern()?.inverse()?)?;
        }
        Ok(c)
    }

    /// `Td(V) / Td(W)`.
    pub fn todd(&self) -> Result<GradedClass> {
        todd_class(&self.total_chern()?)
    }

    /// `Â(V) / Â(W)`.
    pub fn a_hat(&self) -> Result<GradedClass> {
        let mut a = GradedClass::one(&self.space);
        for e in &self.plus {
            let v = e.evaluate()?;
            a = a.cup(&a_hat_from_chern(&v.total_chern, v.rank as usize)?)?;
        }
        for e in &self.minus {
            let v = e.evaluate()?;
            a = a.cup(&a_hat_from_chern(&v.total_chern, v.rank as usize)?.inverse()?)?;
        }
        Ok(a)
    }

    /// Parity of the Chern character; always even for classes built from
    /// complex bundles.
    pub fn parity(&self) -> Result<Parity> {
        chern_parity(&self.ch_image)
    }

    /// A class with the given Chern character, assembled from integer
    /// combinations of standard generators: `O(1) - 1` on projective
    /// factors, `clutch(k) - 2^(k-1)` on `S(2k)` factors and `line(a*b) - 1`
    /// for pairs of degree-1 generators.
    pub fn realize(space: &ModelSpace, ch: &GradedClass) -> Result<Self> {
        if ch.space() != space {
            return Err(mismatch(space, ch.space()));
        }
        let unrealizable = |reason: String| Error::Unrealizable {
            class: ch.to_string(),
            space: space.to_string(),
            reason,
        };
        if !ch.is_even() {
            return Err(unrealizable("odd-degree components".into()));
        }
        let mut basis: Vec<Monomial> = space
            .basis()
            .into_iter()
            .filter(|m| space.degree_of(m) % 2 == 0)
            .collect();
        basis.sort_by_key(|m| space.degree_of(m));
        let mut rest = ch.clone();
        let mut out = Self::zero(space);
        for m in basis {
            let a = rest.coefficient(&m);
            if a.is_zero() {
                continue;
            }
            if !a.is_integer() {
                return Err(unrealizable(format!(
                    "coefficient {} of {} is not an integer",
                    crate::ring::text::format_rational(&a),
                    m.render(space)
                )));
            }
            let g = generator_class(space, &m).map_err(|e| match e {
                Error::Unrealizable { reason, .. } => unrealizable(reason),
                other => other,
            })?;
            debug_assert_eq!(g.ch_image.coefficient(&m), Rational::one());
            let n = a.to_integer().to_i64().ok_or_else(|| unrealizable("coefficient too large".into()))?;
            let term = g.scale(n)?;
            rest = &rest - &term.ch_image;
            out = out.add(&term)?;
        }
        debug_assert!(rest.is_zero());
        Ok(out.simplified())
    }

    /// Same class with cancelled summands, merged trivial bundles and
    /// `O(a) (x) O(b)` rewritten as `O(a+b)`.
    pub fn simplified(&self) -> Self {
        let mut plus: Vec<BundleExpr> = self.plus.iter().map(simplify).collect();
        let mut minus: Vec<BundleExpr> = self.minus.iter().map(simplify).collect();
        let take_trivial = |v: &mut Vec<BundleExpr>| {
            let mut n = 0;
            v.retain(|e| match e {
                BundleExpr::Trivial { rank, .. } => {
                    n += rank;
                    false
                }
                _ => true,
            });
            n
        };
        let tp = take_trivial(&mut plus);
        let tm = take_trivial(&mut minus);
        let mut i = 0;
        while i < plus.len() {
            if let Some(j) = minus.iter().position(|w| w == &plus[i]) {
                minus.remove(j);
                plus.remove(i);
            } else {
                i += 1;
            }
        }
        plus.sort_by_cached_key(|e| e.to_string());
        minus.sort_by_cached_key(|e| e.to_string());
        if tp > tm {
            plus.push(BundleExpr::trivial(&self.space, tp - tm));
        } else if tm > tp {
            minus.push(BundleExpr::trivial(&self.space, tm - tp));
        }
        Self {
            space: self.space.clone(),
            plus,
            minus,
            virtual_rank: self.virtual_rank,
            ch_image: self.ch_image.clone(),
        }
    }
}

fn simplify(e: &BundleExpr) -> BundleExpr {
    match e {
        BundleExpr::Dual(inner) => match simplify(inner) {
            BundleExpr::Tautological { space, k } => BundleExpr::Tautological { space, k: -k },
            t @ BundleExpr::Trivial { .. } => t,
            BundleExpr::Dual(x) => *x,
            other => BundleExpr::Dual(Box::new(other)),
        },
        BundleExpr::Tensor(a, b) => match (simplify(a), simplify(b)) {
            (BundleExpr::Tautological { space, k }, BundleExpr::Tautological { k: l, .. }) => {
                BundleExpr::Tautological { space, k: k + l }
            }
            (BundleExpr::Trivial { rank: 1, .. }, x) | (x, BundleExpr::Trivial { rank: 1, .. }) => x,
            (BundleExpr::Trivial { space, rank: a }, BundleExpr::Trivial { rank: b, .. })
                if a.checked_mul(b).is_some() =>
            {
                BundleExpr::Trivial { space, rank: a * b }
            }
            (x, y) => BundleExpr::Tensor(Box::new(x), Box::new(y)),
        },
        BundleExpr::Sum(a, b) => BundleExpr::Sum(Box::new(simplify(a)), Box::new(simplify(b))),
        BundleExpr::Pullback(f, inner) => {
            let inner = simplify(inner);
            match (f.kind(), &inner) {
                (MapKind::Identity, _) => inner,
                (_, BundleExpr::Trivial { rank, .. }) => BundleExpr::trivial(f.source(), *rank),
                _ => BundleExpr::Pullback(f.clone(), Box::new(inner)),
            }
        }
        other => other.clone(),
    }
}

// Unitriangular generator whose Chern character is `m` plus higher terms.
fn generator_class(space: &ModelSpace, m: &Monomial) -> Result<KClass> {
    if m.is_unit() {
        return KClass::from_bundle(BundleExpr::trivial(space, 1));
    }
    let factors = space.factors();
    let single = factors.len() == 1;
    let gens = space.generators();
    let mut out = KClass::from_bundle(BundleExpr::trivial(space, 1))?;
    let mut odd: Vec<usize> = Vec::new();
    for (fi, factor) in factors.iter().enumerate() {
        let off = space.factor_offset(fi);
        let lift = |e: BundleExpr| -> Result<BundleExpr> {
            if single {
                Ok(e)
            } else {
                BundleExpr::pullback(&ModelMap::projection(space, vec![fi])?, e)
            }
        };
        match factor.kind() {
            SpaceKind::ComplexProjective(_) => {
                let e = m.exponents()[off];
                let one = KClass::from_bundle(lift(BundleExpr::trivial(factor, 1))?)?;
                let g = KClass::from_bundle(lift(BundleExpr::tautological(factor, 1)?)?)?.sub(&one)?;
                for _ in 0..e {
                    out = out.tensor(&g)?;
                }
            }
            SpaceKind::Sphere(n) if n % 2 == 0 && m.exponents()[off] == 1 => {
                let h = lift(BundleExpr::clutched(n / 2)?)?;
                let rank = 1u32 << (n / 2 - 1);
                let g = KClass::difference(h, lift(BundleExpr::trivial(factor, rank))?)?;
                out = out.tensor(&g)?;
            }
            _ => {
                for (i, g) in gens.iter().enumerate().skip(off).take(factor.generators().len()) {
                    if m.exponents()[i] == 1 && g.is_odd() {
                        odd.push(i);
                    }
                }
            }
        }
    }
    for pair in odd.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        if gens[a].degree != 1 || gens[b].degree != 1 {
            return Err(Error::Unrealizable {
                class: m.render(space),
                space: space.to_string(),
                reason: "no standard generator for products of odd spheres".into(),
            });
        }
        let c1 = GradedClass::generator(space, a)?.cup(&GradedClass::generator(space, b)?)?;
        let g = KClass::difference(BundleExpr::line(c1)?, BundleExpr::trivial(space, 1))?;
        out = out.tensor(&g)?;
    }
    Ok(out.simplified())
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BundleExpr]| {
            v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" (+) ")
        };
        let left = if self.plus.is_empty() { "eps(0)".to_string() } else { join(&self.plus) };
        if self.minus.is_empty() {
            f.write_str(&left)
        } else {
            write!(f, "{left} - {}", join(&self.minus))
        }
    }
}

/// Parity of a Chern-character image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(degree: i64) -> Self {
        if degree.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Even or odd support; the zero class counts as even.
pub fn chern_parity(class: &GradedClass) -> Result<Parity> {
    let degrees = class.support_degrees();
    if degrees.iter().all(|d| d % 2 == 0) {
        Ok(Parity::Even)
    } else if degrees.iter().all(|d| d % 2 == 1) {
        Ok(Parity::Odd)
    } else {
        Err(Error::ParityViolation(class.to_string()))
    }
}

/// A finitely generated abelian group `Z^r (+) Z/d_1 (+) ... (+) Z/d_k`
/// with `d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FGAbelianGroup {
    free_rank: u64,
    torsion: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl FGAbelianGroup {
    /// Canonical form from any list of cyclic orders (entries 0 and 1 are
    /// dropped; 0 is not a finite order).
    pub fn new(free_rank: u64, cyclic: &[u64]) -> Self {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &n in cyclic.iter().filter(|&&n| n > 1) {
            for (p, q) in prime_powers(n) {
                by_prime.entry(p).or_default().push(q);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable();
            // largest powers go to the last invariant factors
            for (slot, q) in torsion.iter_mut().rev().zip(powers.iter().rev()) {
                *slot *= q;
            }
        }
        debug_assert!(torsion.windows(2).all(|w| w[1] % w[0] == 0));
        Self { free_rank, torsion }
    }

    pub fn free(rank: u64) -> Self {
        Self { free_rank: rank, torsion: vec![] }
    }

    pub fn free_rank(&self) -> u64 {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend(&other.torsion);
        Self::new(self.free_rank + other.free_rank, &t)
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" (+) "))
        }
    }
}

// (rank K^0, rank K^1)
fn k_ranks(space: &ModelSpace) -> (u64, u64) {
    match space.kind() {
        SpaceKind::Point => (1, 0),
        SpaceKind::Sphere(n) if n % 2 == 0 => (2, 0),
        SpaceKind::Sphere(_) => (1, 1),
        SpaceKind::ComplexProjective(n) => (u64::from(*n) + 1, 0),
        SpaceKind::Torus(n) => (1 << (n - 1), 1 << (n - 1)),
        SpaceKind::Product(factors) => factors.iter().fold((1, 0), |(a0, a1), f| {
            let (b0, b1) = k_ranks(f);
            (a0 * b0 + a1 * b1, a0 * b1 + a1 * b0)
        }),
    }
}

/// `K^degree(X)`; depends only on `degree mod 2`.
pub fn k_group(space: &ModelSpace, degree: i64) -> FGAbelianGroup {
    let (k0, k1) = k_ranks(space);
    FGAbelianGroup::free(if degree.rem_euclid(2) == 0 { k0 } else { k1 })
}

/// Reduced `K^degree(X)`: one copy of `Z` fewer in even degree.
pub fn reduced_k_group(space: &ModelSpace, degree: i64) -> FGAbelianGroup {
    let g = k_group(space, degree);
    if degree.rem_euclid(2) == 0 {
        FGAbelianGroup::new(g.free_rank - 1, &g.torsion)
    } else {
        g
    }
}

/// Whether an integer-coefficient class is integral on every monomial.
pub fn is_integral(class: &GradedClass) -> bool {
    class.terms().values().all(|c| c.is_integer())
}
