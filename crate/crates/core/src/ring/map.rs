use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::{GradedClass, HomologyClass, ModelSpace, Rational, SpaceKind};

/// The kind of a catalog map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Identity,
    /// Constant map onto the canonical basepoint of the target.
    ConstToBasepoint,
    /// Degree-`d` self-map of a sphere.
    SphereDegree(i64),
    /// Linear inclusion `CP(m) -> CP(n)`, `m <= n`.
    LinearInclusion,
    /// Inclusion of the selected factors (0-based) into a product, the
    /// remaining coordinates sitting at their basepoints.
    SliceInclusion(Vec<usize>),
    /// Projection of a product onto the selected factors (0-based).
    Projection(Vec<usize>),
    /// Homeomorphism between spaces with the same generator signature that
    /// sends each generator to the generator in the same position,
    /// e.g. `T(1)*T(1) -> T(2)`.
    Identification,
    /// Maps in application order: the first entry is applied first.
    Compose(Vec<ModelMap>),
}

/// A continuous map between catalog spaces, known through its action on
/// cohomology generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelMap {
    source: ModelSpace,
    target: ModelSpace,
    kind: MapKind,
}

fn invalid(kind: &MapKind, reason: impl Into<String>) -> Error {
    Error::InvalidMap { map: kind_text(kind), reason: reason.into() }
}

fn kind_text(kind: &MapKind) -> String {
    let list = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
    match kind {
        MapKind::Identity => "id".into(),
        MapKind::ConstToBasepoint => "const".into(),
        MapKind::SphereDegree(d) => format!("deg({d})"),
        MapKind::LinearInclusion => "incl".into(),
        MapKind::SliceInclusion(f) => format!("slice({})", list(f)),
        MapKind::Projection(f) => format!("proj({})", list(f)),
        MapKind::Identification => "ident".into(),
        MapKind::Compose(maps) => maps
            .iter()
            .rev()
            .map(|m| {
                let t = m.to_string();
                if matches!(m.kind, MapKind::Compose(_)) { format!("({t})") } else { t }
            })
            .collect::<Vec<_>>()
            .join(" . "),
    }
}

impl ModelMap {
    pub fn identity(space: &ModelSpace) -> Self {
        Self { source: space.clone(), target: space.clone(), kind: MapKind::Identity }
    }

    pub fn constant(source: &ModelSpace, target: &ModelSpace) -> Self {
        Self { source: source.clone(), target: target.clone(), kind: MapKind::ConstToBasepoint }
    }

    pub fn sphere_degree(sphere: &ModelSpace, degree: i64) -> Result<Self> {
        let kind = MapKind::SphereDegree(degree);
        if !matches!(sphere.kind(), SpaceKind::Sphere(_)) {
            return Err(invalid(&kind, format!("{sphere} is not a sphere")));
        }
        Ok(Self { source: sphere.clone(), target: sphere.clone(), kind })
    }

    pub fn linear_inclusion(source: &ModelSpace, target: &ModelSpace) -> Result<Self> {
        let kind = MapKind::LinearInclusion;
        match (source.kind(), target.kind()) {
            (SpaceKind::ComplexProjective(m), SpaceKind::ComplexProjective(n)) if m <= n => {
                Ok(Self { source: source.clone(), target: target.clone(), kind })
            }
            _ => Err(invalid(
                &kind,
                format!("needs CP(m) -> CP(n) with m <= n, got {source} -> {target}"),
            )),
        }
    }

    /// `factors` are 0-based positions in `product`.
    pub fn slice_inclusion(product: &ModelSpace, factors: Vec<usize>) -> Result<Self> {
        let kind = MapKind::SliceInclusion(factors.clone());
        Self::check_factor_list(product, &factors, &kind)?;
        let source = product.sub_product(&factors)?;
        Ok(Self { source, target: product.clone(), kind })
    }

    /// `factors` are 0-based positions in `product`.
    pub fn projection(product: &ModelSpace, factors: Vec<usize>) -> Result<Self> {
        let kind = MapKind::Projection(factors.clone());
        Self::check_factor_list(product, &factors, &kind)?;
        let target = product.sub_product(&factors)?;
        Ok(Self { source: product.clone(), target, kind })
    }

    fn check_factor_list(product: &ModelSpace, factors: &[usize], kind: &MapKind) -> Result<()> {
        let n = product.factor_count();
        if factors.iter().any(|&i| i >= n) {
            return Err(invalid(kind, format!("{product} has only {n} factor(s)")));
        }
        let mut sorted = factors.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != factors.len() || sorted != factors {
            return Err(invalid(kind, "factor positions must be strictly increasing"));
        }
        Ok(())
    }

    pub fn identification(source: &ModelSpace, target: &ModelSpace) -> Result<Self> {
        let kind = MapKind::Identification;
        if source.signature() != target.signature() {
            return Err(invalid(
                &kind,
                format!("{source} and {target} have different cohomology generators"),
            ));
        }
        Ok(Self { source: source.clone(), target: target.clone(), kind })
    }

    /// Composite in application order: `maps[0]` first.
    pub fn compose(maps: Vec<ModelMap>) -> Result<Self> {
        let kind = MapKind::Compose(maps.clone());
        let (first, last) = match (maps.first(), maps.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(invalid(&kind, "empty composition")),
        };
        for w in maps.windows(2) {
            if w[0].target != w[1].source {
                return Err(invalid(
                    &kind,
                    format!("{} ends at {} but {} starts at {}", w[0], w[0].target, w[1], w[1].source),
                ));
            }
        }
        if maps.len() == 1 {
            return Ok(first.clone());
        }
        Ok(Self { source: first.source.clone(), target: last.target.clone(), kind })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ModelMap) -> Result<Self> {
        Self::compose(vec![self.clone(), next.clone()])
    }

    pub fn source(&self) -> &ModelSpace {
        &self.source
    }

    pub fn target(&self) -> &ModelSpace {
        &self.target
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    /// Images of the target's generators in the source's cohomology.
    pub fn generator_images(&self) -> Vec<GradedClass> {
        let src = &self.source;
        let ntarget = self.target.generators().len();
        let gen = |i: usize| GradedClass::generator(src, i).expect("generator index in range");
        match &self.kind {
            MapKind::Identity | MapKind::Identification | MapKind::LinearInclusion => {
                (0..ntarget).map(gen).collect()
            }
            MapKind::ConstToBasepoint => vec![GradedClass::zero(src); ntarget],
            MapKind::SphereDegree(d) => {
                vec![gen(0).scale(&Rational::from_integer((*d).into()))]
            }
            MapKind::SliceInclusion(factors) => {
                let mut images = vec![GradedClass::zero(src); ntarget];
                let mut next = 0;
                for &f in factors {
                    let start = self.target.factor_offset(f);
                    let len = self.target.factors()[f].generators().len();
                    for j in 0..len {
                        images[start + j] = gen(next);
                        next += 1;
                    }
                }
                images
            }
            MapKind::Projection(factors) => {
                let mut images = Vec::with_capacity(ntarget);
                for &f in factors {
                    let start = self.source.factor_offset(f);
                    let len = self.source.factors()[f].generators().len();
                    images.extend((start..start + len).map(gen));
                }
                images
            }
            MapKind::Compose(maps) => {
                let (last, rest) = maps.split_last().expect("nonempty composition");
                let mut images = last.generator_images();
                for m in rest.iter().rev() {
                    images = images.iter().map(|c| m.pull_back_unchecked(c)).collect();
                }
                images
            }
        }
    }

    fn pull_back_unchecked(&self, class: &GradedClass) -> GradedClass {
        let images = self.generator_images();
        let mut out = GradedClass::zero(&self.source);
        for (m, c) in class.terms() {
            let mut term = GradedClass::constant(&self.source, c.clone());
            for (e, img) in m.exponents().iter().zip(&images) {
                for _ in 0..*e {
                    term = &term * img;
                }
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Ring homomorphism `f^*: H*(target) -> H*(source)`.
    pub fn pullback(&self, class: &GradedClass) -> Result<GradedClass> {
        if class.space() != &self.target {
            return Err(Error::SpaceMismatch {
                left: class.space().to_string(),
                right: self.target.to_string(),
            });
        }
        Ok(self.pull_back_unchecked(class))
    }

    /// Induced map on rational homology, the transpose of the pullback under
    /// the Kronecker pairing.
    pub fn pushforward(&self, h: &HomologyClass) -> Result<HomologyClass> {
        if h.space() != &self.source {
            return Err(Error::SpaceMismatch {
                left: h.space().to_string(),
                right: self.source.to_string(),
            });
        }
        let x = &self.target;
        let mut terms = Vec::new();
        if h.is_zero() {
            return Ok(HomologyClass::zero(x));
        }
        let a = h.to_cohomology();
        for nu in x.basis() {
            let comp = x.complement(&nu);
            let comp_class = GradedClass::monomial(x, comp, Rational::one());
            let pulled = self.pull_back_unchecked(&comp_class);
            let value = (&pulled * &a).integrate();
            if value.is_zero() {
                continue;
            }
            let norm = (&comp_class * &GradedClass::monomial(x, nu.clone(), Rational::one()))
                .integrate();
            terms.push((nu, value / norm));
        }
        Ok(HomologyClass::from_terms(x, terms))
    }

    /// Gysin map `PD^-1 ∘ f_* ∘ PD` on cohomology.
    pub fn gysin(&self, class: &GradedClass) -> Result<GradedClass> {
        Ok(self.pushforward(&class.poincare_dual())?.to_cohomology())
    }

    /// Real codimension `dim target - dim source` (may be negative).
    pub fn codimension(&self) -> i64 {
        i64::from(self.target.dimension()) - i64::from(self.source.dimension())
    }

    /// Matrix of the pushforward on full homology bases, rows indexed by the
    /// target basis and columns by the source basis.
    pub fn pushforward_matrix(&self) -> Vec<Vec<Rational>> {
        let src_basis = self.source.basis();
        let tgt_basis = self.target.basis();
        let mut cols = Vec::with_capacity(src_basis.len());
        for m in &src_basis {
            let h = GradedClass::monomial(&self.source, m.clone(), Rational::one()).poincare_dual();
            let img = self.pushforward(&h).expect("source matches");
            cols.push(tgt_basis.iter().map(|n| img.coefficient(n)).collect::<Vec<_>>());
        }
        (0..tgt_basis.len())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect()
    }
}

impl fmt::Display for ModelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&kind_text(&self.kind))
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
    fn degree_map_scales_fundamental_cycle() {
        let s2 = ModelSpace::sphere(2).unwrap();
        let f = ModelMap::sphere_degree(&s2, 3).unwrap();
        let fund = HomologyClass::fundamental_cycle(&s2);
        assert_eq!(f.pushforward(&fund).unwrap(), fund.scale(&q(3)));
        let pt = HomologyClass::point_class(&s2);
        assert_eq!(f.pushforward(&pt).unwrap(), pt);
    }

    #[test]
    fn constant_map_keeps_only_points() {
        let f = ModelMap::constant(&cp(2), &cp(3));
        let pt = HomologyClass::point_class(&cp(2));
        assert_eq!(f.pushforward(&pt).unwrap(), HomologyClass::point_class(&cp(3)));
        for m in cp(2).basis() {
            if m != cp(2).fundamental_monomial() {
                let h = GradedClass::monomial(&cp(2), m, q(1)).poincare_dual();
                assert!(f.pushforward(&h).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn linear_inclusion_shifts_dual_basis() {
        let f = ModelMap::linear_inclusion(&cp(1), &cp(3)).unwrap();
        let x1 = GradedClass::generator(&cp(1), 0).unwrap();
        let x3 = GradedClass::generator(&cp(3), 0).unwrap();
        // [CP1] -> dual of x^2, point -> dual of x^3
        let fund = HomologyClass::fundamental_cycle(&cp(1));
        assert_eq!(f.pushforward(&fund).unwrap(), x3.pow(2).poincare_dual());
        assert_eq!(f.pushforward(&x1.poincare_dual()).unwrap(), x3.pow(3).poincare_dual());
        assert_eq!(f.pullback(&x3.pow(2)).unwrap(), GradedClass::zero(&cp(1)));
        assert!(ModelMap::linear_inclusion(&cp(3), &cp(1)).is_err());
    }

    #[test]
    fn slice_and_projection_are_kunneth_bookkeeping() {
        let cp1 = cp(1);
        let s2 = ModelSpace::sphere(2).unwrap();
        let p = ModelSpace::product(vec![cp1.clone(), s2.clone()]).unwrap();
        let proj = ModelMap::projection(&p, vec![1]).unwrap();
        assert_eq!(proj.target(), &s2);
        let slice = ModelMap::slice_inclusion(&p, vec![0]).unwrap();
        assert_eq!(slice.source(), &cp1);
        let round = slice.then(&proj).unwrap();
        // CP1 -> CP1 x pt -> pt factor is null on positive degrees.
        let y = GradedClass::generator(&s2, 0).unwrap();
        assert!(round.pullback(&y).unwrap().is_zero());
        let xy = GradedClass::parse(&p, "x*y").unwrap();
        let fund = HomologyClass::fundamental_cycle(&p);
        // pushing [CP1 x S2] to S2 is zero (fibre has positive dimension)
        assert!(proj.pushforward(&fund).unwrap().is_zero());
        assert_eq!(
            proj.pushforward(&GradedClass::parse(&p, "x").unwrap().poincare_dual()).unwrap(),
            HomologyClass::fundamental_cycle(&s2)
        );
        assert_eq!(xy.poincare_dual().support_grades(), [0]);
        assert!(ModelMap::projection(&p, vec![1, 0]).is_err());
        assert!(ModelMap::projection(&p, vec![2]).is_err());
    }

    #[test]
    fn composition_checks_chain() {
        let f = ModelMap::linear_inclusion(&cp(1), &cp(2)).unwrap();
        let g = ModelMap::linear_inclusion(&cp(2), &cp(3)).unwrap();
        assert!(f.then(&g).is_ok());
        assert!(g.then(&f).is_err());
        assert_eq!(f.then(&g).unwrap().to_string(), "incl . incl");
        assert!(ModelMap::compose(vec![]).is_err());
    }

    #[test]
    fn identification_requires_matching_generators() {
        let t1 = ModelSpace::torus(1).unwrap();
        let t11 = ModelSpace::product(vec![t1.clone(), t1]).unwrap();
        let t2 = ModelSpace::torus(2).unwrap();
        assert!(ModelMap::identification(&t11, &t2).is_ok());
        assert!(ModelMap::identification(&t2, &cp(1)).is_err());
        let s2 = ModelSpace::sphere(2).unwrap();
        assert!(ModelMap::identification(&s2, &cp(1)).is_ok());
    }

    #[test]
    fn pushforward_rejects_wrong_space() {
        let f = ModelMap::identity(&cp(2));
        assert!(f.pushforward(&HomologyClass::fundamental_cycle(&cp(1))).is_err());
        let m = f.pushforward_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { q(1) } else { q(0) });
            }
        }
    }
}
