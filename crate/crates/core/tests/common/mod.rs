#![allow(dead_code)]

pub mod dslgen;

use kcharge::bundle::BundleExpr;
use kcharge::khomology::KCycle;
use kcharge::ktheory::KClass;
use kcharge::ring::{GradedClass, ModelMap, ModelSpace};

pub fn cp(n: u32) -> ModelSpace {
    ModelSpace::complex_projective(n).unwrap()
}

pub fn sphere(n: u32) -> ModelSpace {
    ModelSpace::sphere(n).unwrap()
}

pub fn torus(n: u32) -> ModelSpace {
    ModelSpace::torus(n).unwrap()
}

pub fn product(f: Vec<ModelSpace>) -> ModelSpace {
    ModelSpace::product(f).unwrap()
}

pub fn line(x: &ModelSpace, c1: &str) -> BundleExpr {
    BundleExpr::line(GradedClass::parse(x, c1).unwrap()).unwrap()
}

pub fn o(x: &ModelSpace, k: i64) -> BundleExpr {
    BundleExpr::tautological(x, k).unwrap()
}

pub fn eps(x: &ModelSpace, n: u32) -> BundleExpr {
    BundleExpr::trivial(x, n)
}

pub fn sum(a: BundleExpr, b: BundleExpr) -> BundleExpr {
    BundleExpr::sum(a, b).unwrap()
}

pub fn cycle(e: BundleExpr, f: ModelMap) -> KCycle {
    KCycle::from_bundle(e, f).unwrap()
}

/// Manifolds point, CP(1), CP(2), T(2), S(3) mapped into CP(2), CP(3), T(3)
/// and CP(1)*S(2).
pub fn cycle_suite() -> Vec<KCycle> {
    let pt = ModelSpace::point();
    let y = product(vec![cp(1), sphere(2)]);
    let incl = |m, n| ModelMap::linear_inclusion(&cp(m), &cp(n)).unwrap();
    let konst = |a: &ModelSpace, b: &ModelSpace| ModelMap::constant(a, b);
    vec![
        cycle(eps(&pt, 1), konst(&pt, &cp(2))),
        cycle(eps(&pt, 3), konst(&pt, &cp(3))),
        cycle(o(&cp(1), 1), incl(1, 2)),
        cycle(sum(o(&cp(1), -1), eps(&cp(1), 1)), incl(1, 3)),
        cycle(o(&cp(2), 2), incl(2, 3)),
        cycle(BundleExpr::tangent(&cp(2)), incl(2, 3)),
        cycle(o(&cp(2), -1), ModelMap::identity(&cp(2))),
        cycle(line(&torus(2), "t1*t2"), konst(&torus(2), &torus(3))),
        cycle(eps(&torus(2), 2), konst(&torus(2), &y)),
        cycle(eps(&sphere(3), 1), konst(&sphere(3), &torus(3))),
        cycle(eps(&sphere(3), 2), konst(&sphere(3), &y)),
        cycle(o(&cp(1), 3), ModelMap::slice_inclusion(&y, vec![0]).unwrap()),
        cycle(eps(&pt, 1), konst(&pt, &y)),
        cycle(o(&cp(1), 2), ModelMap::constant(&cp(1), &cp(2))),
    ]
}

/// Second bundle on the same manifold, for direct-sum moves.
pub fn partner(c: &KCycle) -> BundleExpr {
    let m = c.manifold();
    match m.kind() {
        kcharge::ring::SpaceKind::ComplexProjective(_) => o(m, -2),
        kcharge::ring::SpaceKind::Torus(_) => line(m, "-t1*t2"),
        _ => eps(m, 2),
    }
}

/// Catalog maps out of each target used by the suite.
pub fn post_maps(x: &ModelSpace) -> Vec<ModelMap> {
    let mut maps = vec![ModelMap::identity(x), ModelMap::constant(x, &ModelSpace::point())];
    match x.kind() {
        kcharge::ring::SpaceKind::ComplexProjective(n) => {
            maps.push(ModelMap::linear_inclusion(x, &cp(n + 1)).unwrap());
            maps.push(ModelMap::constant(x, &cp(1)));
        }
        kcharge::ring::SpaceKind::Product(_) => {
            maps.push(ModelMap::projection(x, vec![0]).unwrap());
            let to_s2 = ModelMap::projection(x, vec![1]).unwrap();
            for d in [-2, 3] {
                maps.push(to_s2.then(&ModelMap::sphere_degree(&sphere(2), d).unwrap()).unwrap());
            }
        }
        _ => {}
    }
    maps
}

pub fn kclass(e: BundleExpr) -> KClass {
    KClass::from_bundle(e).unwrap()
}

/// Every kind of catalog map, including composites.
pub fn catalog_maps() -> Vec<ModelMap> {
    let cp = |n| ModelSpace::complex_projective(n).unwrap();
    let s2 = ModelSpace::sphere(2).unwrap();
    let pt = ModelSpace::point();
    let y = ModelSpace::product(vec![cp(1), s2.clone()]).unwrap();
    let t3 = ModelSpace::torus(3).unwrap();
    let t3s2 = ModelSpace::product(vec![t3.clone(), s2.clone()]).unwrap();
    let incl12 = ModelMap::linear_inclusion(&cp(1), &cp(2)).unwrap();
    let incl23 = ModelMap::linear_inclusion(&cp(2), &cp(3)).unwrap();
    vec![
        ModelMap::identity(&cp(2)),
        ModelMap::constant(&cp(2), &cp(3)),
        ModelMap::constant(&pt, &y),
        ModelMap::constant(&s2, &t3),
        incl12.clone(),
        incl12.then(&incl23).unwrap(),
        ModelMap::slice_inclusion(&y, vec![0]).unwrap(),
        ModelMap::slice_inclusion(&y, vec![1]).unwrap(),
        ModelMap::slice_inclusion(&t3s2, vec![0]).unwrap(),
        ModelMap::projection(&y, vec![0]).unwrap(),
        ModelMap::projection(&y, vec![1]).unwrap(),
        ModelMap::projection(&t3s2, vec![1]).unwrap(),
        ModelMap::sphere_degree(&s2, 3).unwrap(),
        ModelMap::sphere_degree(&s2, -2).unwrap(),
        ModelMap::identification(&cp(1), &s2).unwrap(),
        ModelMap::identification(&cp(1), &s2).unwrap().then(&ModelMap::sphere_degree(&s2, 2).unwrap()).unwrap(),
    ]
}

/// Random bundle expression on `x` built from line, trivial, tautological
/// and tangent leaves.
pub fn random_bundle(x: &ModelSpace, rng: &mut impl rand::Rng, depth: u32) -> BundleExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        let is_cp = matches!(x.kind(), kcharge::ring::SpaceKind::ComplexProjective(_));
        return match rng.gen_range(0..4) {
            0 => eps(x, rng.gen_range(0..=2)),
            1 if is_cp => o(x, rng.gen_range(-3..=3)),
            2 if is_cp => BundleExpr::tangent(x),
            _ => {
                let mut c = GradedClass::zero(x);
                for m in x.basis().into_iter().filter(|m| x.degree_of(m) == 2) {
                    c = &c + &GradedClass::monomial(x, m, kcharge::ring::q(rng.gen_range(-2..=2)));
                }
                BundleExpr::line(c).unwrap()
            }
        };
    }
    let a = random_bundle(x, rng, depth - 1);
    match rng.gen_range(0..3) {
        0 => sum(a, random_bundle(x, rng, depth - 1)),
        1 => BundleExpr::tensor(a, random_bundle(x, rng, depth - 1)).unwrap(),
        _ => BundleExpr::dual(a),
    }
}
