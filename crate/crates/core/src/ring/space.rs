use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::Monomial;

/// Largest real dimension accepted for a model space.
pub const MAX_DIMENSION: u32 = 64;
/// Largest number of cohomology basis monomials accepted for a model space.
pub const MAX_BASIS: usize = 4096;

/// The shape of a catalog manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Point,
    Sphere(u32),
    ComplexProjective(u32),
    Torus(u32),
    /// Flattened: no factor is itself a product.
    Product(Vec<ModelSpace>),
}

/// A ring generator of a model space's rational cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Largest nonzero power; the generator to the next power vanishes.
    pub max_exponent: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct SpaceData {
    kind: SpaceKind,
    generators: Vec<Generator>,
    dimension: u32,
    /// Generator offset of each factor (a single entry for non-products).
    offsets: Vec<usize>,
}

/// A closed, oriented, spin^c catalog manifold together with its presented
/// cohomology ring.
///
/// Every catalog space has torsion-free integral cohomology, so working with
/// rational coefficients loses no information. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelSpace(Arc<SpaceData>);

impl ModelSpace {
    pub fn point() -> Self {
        Self::build(SpaceKind::Point).expect("the point is always valid")
    }

    pub fn sphere(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("S(0) is not connected; spheres need n >= 1".into()));
        }
        Self::build(SpaceKind::Sphere(n))
    }

    pub fn complex_projective(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("use `point` instead of CP(0)".into()));
        }
        Self::build(SpaceKind::ComplexProjective(n))
    }

    pub fn torus(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("use `point` instead of T(0)".into()));
        }
        Self::build(SpaceKind::Torus(n))
    }

    /// Cartesian product; nested products are flattened and a single factor
    /// is returned unchanged. The empty product is the point.
    pub fn product(factors: Vec<ModelSpace>) -> Result<Self> {
        let mut flat = Vec::new();
        for f in factors {
            match f.kind() {
                SpaceKind::Product(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(f),
            }
        }
        match flat.len() {
            0 => Ok(Self::point()),
            1 => Ok(flat.pop().unwrap()),
            _ => Self::build(SpaceKind::Product(flat)),
        }
    }

    fn build(kind: SpaceKind) -> Result<Self> {
        let (generators, offsets) = match &kind {
            SpaceKind::Point => (Vec::new(), vec![0]),
            SpaceKind::Sphere(n) => (
                vec![Generator { name: "y".into(), degree: *n, max_exponent: 1 }],
                vec![0],
            ),
            SpaceKind::ComplexProjective(n) => (
                vec![Generator { name: "x".into(), degree: 2, max_exponent: *n }],
                vec![0],
            ),
            SpaceKind::Torus(n) => (
                (1..=*n)
                    .map(|i| Generator { name: format!("t{i}"), degree: 1, max_exponent: 1 })
                    .collect(),
                vec![0],
            ),
            SpaceKind::Product(factors) => {
                let mut offsets = Vec::with_capacity(factors.len());
                let mut gens: Vec<Generator> = Vec::new();
                for f in factors {
                    offsets.push(gens.len());
                    gens.extend(f.generators().iter().cloned());
                }
                let mut names: Vec<&str> = gens.iter().map(|g| g.name.as_str()).collect();
                names.sort_unstable();
                let clash = names.windows(2).any(|w| w[0] == w[1]);
                if clash {
                    for (i, f) in factors.iter().enumerate() {
                        let start = offsets[i];
                        for j in 0..f.generators().len() {
                            let g = &mut gens[start + j];
                            g.name = format!("{}_{}", g.name, i + 1);
                        }
                    }
                }
                (gens, offsets)
            }
        };
        let dimension: u64 = generators
            .iter()
            .map(|g| u64::from(g.degree) * u64::from(g.max_exponent))
            .sum();
        if dimension > u64::from(MAX_DIMENSION) {
            return Err(Error::SpaceTooLarge(format!(
                "dimension {dimension} exceeds {MAX_DIMENSION}"
            )));
        }
        let mut basis: usize = 1;
        for g in &generators {
            basis = basis.saturating_mul(g.max_exponent as usize + 1);
        }
        if basis > MAX_BASIS {
            return Err(Error::SpaceTooLarge(format!(
                "{basis} basis monomials exceeds {MAX_BASIS}"
            )));
        }
        Ok(Self(Arc::new(SpaceData {
            kind,
            generators,
            dimension: dimension as u32,
            offsets,
        })))
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.0.kind
    }

    /// Real dimension.
    pub fn dimension(&self) -> u32 {
        self.0.dimension
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.generators
    }

    /// Always true: every catalog space carries a spin^c structure.
    pub fn is_spinc(&self) -> bool {
        true
    }

    pub fn is_point(&self) -> bool {
        matches!(self.kind(), SpaceKind::Point)
    }

    /// Factors of a product, or the space itself.
    pub fn factors(&self) -> Vec<ModelSpace> {
        match self.kind() {
            SpaceKind::Product(f) => f.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn factor_count(&self) -> usize {
        self.0.offsets.len()
    }

    /// Index of the first generator belonging to factor `i`.
    pub fn factor_offset(&self, i: usize) -> usize {
        self.0.offsets[i]
    }

    /// Product of the selected factors (in the given order).
    pub fn sub_product(&self, factors: &[usize]) -> Result<ModelSpace> {
        let all = self.factors();
        let mut picked = Vec::with_capacity(factors.len());
        for &i in factors {
            let f = all.get(i).ok_or_else(|| {
                Error::InvalidSpace(format!("{self} has no factor {}", i + 1))
            })?;
            picked.push(f.clone());
        }
        ModelSpace::product(picked)
    }

    /// Position of a generator by name.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators().iter().position(|g| g.name == name)
    }

    /// Degree and truncation pattern of the generators, used to decide
    /// whether two spaces may be identified.
    pub fn signature(&self) -> Vec<(u32, u32)> {
        self.generators().iter().map(|g| (g.degree, g.max_exponent)).collect()
    }

    /// Top-degree monomial whose coefficient defines integration.
    pub fn fundamental_monomial(&self) -> Monomial {
        Monomial::new(self.generators().iter().map(|g| g.max_exponent).collect())
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial::new(vec![0; self.generators().len()])
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(self.generators())
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// All reduced monomials, in canonical (lexicographic) order.
    pub fn basis(&self) -> Vec<Monomial> {
        let gens = self.generators();
        let mut out = vec![Vec::with_capacity(gens.len())];
        for g in gens {
            let mut next = Vec::with_capacity(out.len() * (g.max_exponent as usize + 1));
            for prefix in &out {
                for e in 0..=g.max_exponent {
                    let mut v = prefix.clone();
                    v.push(e);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(Monomial::new).collect()
    }

    /// Complementary monomial: the one whose product with `m` is ± the
    /// fundamental monomial.
    pub fn complement(&self, m: &Monomial) -> Monomial {
        Monomial::new(
            m.exponents()
                .iter()
                .zip(self.generators())
                .map(|(e, g)| g.max_exponent - e)
                .collect(),
        )
    }

    /// Rational Betti numbers b_0..b_dim.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let mut b = vec![0; self.dimension() as usize + 1];
        for m in self.basis() {
            b[self.degree_of(&m) as usize] += 1;
        }
        b
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SpaceKind::Point => f.write_str("point"),
            SpaceKind::Sphere(n) => write!(f, "S({n})"),
            SpaceKind::ComplexProjective(n) => write!(f, "CP({n})"),
            SpaceKind::Torus(n) => write!(f, "T({n})"),
            SpaceKind::Product(factors) => {
                for (i, s) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelSpace({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_matches_fundamental_monomial() {
        let spaces = [
            ModelSpace::point(),
            ModelSpace::sphere(3).unwrap(),
            ModelSpace::complex_projective(4).unwrap(),
            ModelSpace::torus(3).unwrap(),
            ModelSpace::product(vec![
                ModelSpace::complex_projective(1).unwrap(),
                ModelSpace::sphere(2).unwrap(),
            ])
            .unwrap(),
        ];
        for s in spaces {
            assert_eq!(s.degree_of(&s.fundamental_monomial()), s.dimension(), "{s}");
            assert!(s.is_spinc());
        }
    }

    #[test]
    fn products_flatten_and_rename_clashes() {
        let t1 = ModelSpace::torus(1).unwrap();
        let p = ModelSpace::product(vec![t1.clone(), t1.clone()]).unwrap();
        let names: Vec<_> = p.generators().iter().map(|g| g.name.clone()).collect();
        assert_eq!(names, ["t1_1", "t1_2"]);

        let cp1 = ModelSpace::complex_projective(1).unwrap();
        let s2 = ModelSpace::sphere(2).unwrap();
        let q = ModelSpace::product(vec![cp1.clone(), s2.clone()]).unwrap();
        let nested = ModelSpace::product(vec![q.clone(), s2.clone()]).unwrap();
        assert_eq!(nested.factor_count(), 3);
        assert_eq!(nested.to_string(), "CP(1)*S(2)*S(2)");
        assert_eq!(q.generators()[0].name, "x");
        assert_eq!(q.generators()[1].name, "y");
        assert_eq!(ModelSpace::product(vec![cp1.clone()]).unwrap(), cp1);
    }

    #[test]
    fn rejects_degenerate_and_oversized_spaces() {
        assert!(ModelSpace::sphere(0).is_err());
        assert!(ModelSpace::complex_projective(0).is_err());
        assert!(ModelSpace::complex_projective(1000).is_err());
        assert!(ModelSpace::torus(40).is_err());
    }

    #[test]
    fn betti_numbers_of_catalog_spaces() {
        assert_eq!(ModelSpace::torus(2).unwrap().betti_numbers(), [1, 2, 1]);
        assert_eq!(
            ModelSpace::complex_projective(2).unwrap().betti_numbers(),
            [1, 0, 1, 0, 1]
        );
        assert_eq!(ModelSpace::sphere(3).unwrap().betti_numbers(), [1, 0, 0, 1]);
    }
}
