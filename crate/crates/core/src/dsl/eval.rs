use std::collections::HashMap;

use serde::Serialize;

use super::ast::*;
use super::diagnostic::Diagnostic;
use crate::bundle::BundleExpr;
use crate::charclass::complexified_chern;
use crate::error::Error;
use crate::khomology::{tachyon_reduce, BraneType, KCycle};
use crate::ktheory::{k_group, FGAbelianGroup, KClass, Parity};
use crate::ring::text::format_rational;
use crate::ring::{GradedClass, HomologyClass, ModelMap, ModelSpace, Rational};

/// Evaluation settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Complex degree above which printed classes are truncated.
    pub degree_cap: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { degree_cap: 10 }
    }
}

/// One printed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Output {
    /// 1-based statement position.
    pub index: usize,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    pub value: String,
}

/// Outputs produced before the run stopped, and the failure if any.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunResult {
    pub outputs: Vec<Output>,
    pub error: Option<Diagnostic>,
}

impl RunResult {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// One value per line.
pub fn render_human(outputs: &[Output]) -> String {
    outputs.iter().map(|o| format!("{}\n", o.value)).collect()
}

/// One JSON record per line.
pub fn render_json(outputs: &[Output]) -> String {
    outputs
        .iter()
        .map(|o| format!("{}\n", serde_json::to_string(o).expect("plain record")))
        .collect()
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Rational),
    Class(GradedClass),
    Homology(HomologyClass),
    Group(FGAbelianGroup),
    Parity(Parity),
    Brane(BraneType),
    Space(ModelSpace),
    Map(ModelMap),
    Bundle(KClass),
    Cycle(KCycle),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Class(_) => "class",
            Value::Homology(_) => "homology",
            Value::Group(_) => "group",
            Value::Parity(_) => "parity",
            Value::Brane(_) => "brane",
            Value::Space(_) => "space",
            Value::Map(_) => "map",
            Value::Bundle(_) => "kclass",
            Value::Cycle(_) => "kcycle",
        }
    }

    fn space(&self) -> Option<String> {
        match self {
            Value::Class(c) => Some(c.space().to_string()),
            Value::Homology(h) => Some(h.space().to_string()),
            Value::Bundle(k) => Some(k.space().to_string()),
            Value::Cycle(c) => Some(c.target().to_string()),
            _ => None,
        }
    }

    fn text(&self) -> String {
        match self {
            Value::Scalar(q) => format_rational(q),
            Value::Class(c) => c.to_string(),
            Value::Homology(h) => h.to_string(),
            Value::Group(g) => g.to_string(),
            Value::Parity(p) => p.to_string(),
            Value::Brane(b) => b.to_string(),
            Value::Space(s) => s.to_string(),
            Value::Map(m) => format!("{m} : {} -> {}", m.source(), m.target()),
            Value::Bundle(k) => k.to_string(),
            Value::Cycle(c) => c.to_string(),
        }
    }
}

type EResult<T> = Result<T, Diagnostic>;

/// Parses and evaluates `source`, stopping at the first failure.
pub fn run(source: &str, options: RunOptions) -> RunResult {
    let script = match super::parser::parse(source) {
        Ok(s) => s,
        Err(e) => return RunResult { outputs: Vec::new(), error: Some(e) },
    };
    let mut ev = Evaluator { source, options, env: HashMap::new(), last_space: None };
    let mut outputs = Vec::new();
    for (i, s) in script.statements.iter().enumerate() {
        match ev.statement(s) {
            Ok(Some(v)) => outputs.push(Output {
                index: i + 1,
                kind: v.kind(),
                space: v.space(),
                value: v.text(),
            }),
            Ok(None) => {}
            Err(e) => return RunResult { outputs, error: Some(e) },
        }
    }
    RunResult { outputs, error: None }
}

struct Evaluator<'a> {
    source: &'a str,
    options: RunOptions,
    env: HashMap<String, Value>,
    /// Base for bundle expressions that name no space of their own.
    last_space: Option<ModelSpace>,
}

impl Evaluator<'_> {
    fn diag(&self, span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.source, span, message)
    }

    fn lift<T>(&self, span: Span, r: crate::Result<T>) -> EResult<T> {
        r.map_err(|e| self.diag(span, e.to_string()))
    }

    fn bind(&mut self, name: &Name, v: Value) -> EResult<()> {
        if self.env.contains_key(&name.text) {
            return Err(self.diag(name.span, format!("`{}` is already declared", name.text)));
        }
        self.env.insert(name.text.clone(), v);
        Ok(())
    }

    fn lookup(&self, name: &str, span: Span) -> EResult<&Value> {
        self.env.get(name).ok_or_else(|| self.diag(span, format!("undeclared name `{name}`")))
    }

    fn wrong_kind(&self, name: &str, span: Span, v: &Value, wanted: &str) -> Diagnostic {
        self.diag(span, format!("`{name}` is a {}, expected a {wanted}", v.kind()))
    }

    fn statement(&mut self, s: &Statement) -> EResult<Option<Value>> {
        match &s.kind {
            StatementKind::Space { name, value } => {
                let v = self.space(value)?;
                self.bind(name, Value::Space(v.clone()))?;
                self.last_space = Some(v);
            }
            StatementKind::Map { name, source, target, value } => {
                let src = self.space(source)?;
                let tgt = self.space(target)?;
                let m = self.map(value, Some(&src), Some(&tgt))?;
                self.bind(name, Value::Map(m))?;
            }
            StatementKind::Bundle { name, base, value } => {
                let b = self.space(base)?;
                let k = self.bundle(value, Some(&b))?;
                self.bind(name, Value::Bundle(k))?;
            }
            StatementKind::KCycle { name, manifold, class, map } => {
                let m = self.space(manifold)?;
                let k = self.bundle(class, Some(&m))?;
                let f = self.map(map, Some(&m), None)?;
                let c = self.lift(s.span, KCycle::new(k, f))?;
                self.bind(name, Value::Cycle(c))?;
            }
            StatementKind::Print(e) => return self.expr(e).map(Some),
            StatementKind::Assert(a, b) => {
                let (l, r) = (self.expr(a)?.text(), self.expr(b)?.text());
                if l != r {
                    return Err(self.diag(
                        s.span,
                        format!("assertion failed: left is `{l}`, right is `{r}`"),
                    ));
                }
            }
        }
        Ok(None)
    }

    fn space(&self, s: &SpaceExpr) -> EResult<ModelSpace> {
        let r = match &s.kind {
            SpaceAst::Point => Ok(ModelSpace::point()),
            SpaceAst::Sphere(n) => ModelSpace::sphere(*n),
            SpaceAst::ComplexProjective(n) => ModelSpace::complex_projective(*n),
            SpaceAst::Torus(n) => ModelSpace::torus(*n),
            SpaceAst::Name(n) => {
                return match self.lookup(n, s.span)? {
                    Value::Space(x) => Ok(x.clone()),
                    v => Err(self.wrong_kind(n, s.span, v, "space")),
                }
            }
            SpaceAst::Product(a, b) => {
                let (a, b) = (self.space(a)?, self.space(b)?);
                ModelSpace::product(vec![a, b])
            }
        };
        self.lift(s.span, r)
    }

    fn named_map(&self, name: &str, span: Span) -> EResult<ModelMap> {
        match self.lookup(name, span)? {
            Value::Map(m) => Ok(m.clone()),
            v => Err(self.wrong_kind(name, span, v, "map")),
        }
    }

    fn target_hint(&self, m: &MapExpr, source: Option<&ModelSpace>) -> Option<ModelSpace> {
        match &m.kind {
            MapAst::Id | MapAst::Deg(_) => source.cloned(),
            MapAst::Proj(v) => source?.sub_product(&zero_based(v)).ok(),
            MapAst::Name(n) => match self.env.get(n) {
                Some(Value::Map(f)) => Some(f.target().clone()),
                _ => None,
            },
            MapAst::Compose(g, f) => {
                let mid = self.target_hint(f, source);
                self.target_hint(g, mid.as_ref())
            }
            _ => None,
        }
    }

    fn source_hint(&self, m: &MapExpr, target: Option<&ModelSpace>) -> Option<ModelSpace> {
        match &m.kind {
            MapAst::Id | MapAst::Deg(_) => target.cloned(),
            MapAst::Slice(v) => target?.sub_product(&zero_based(v)).ok(),
            MapAst::Name(n) => match self.env.get(n) {
                Some(Value::Map(f)) => Some(f.source().clone()),
                _ => None,
            },
            MapAst::Compose(g, f) => {
                let mid = self.source_hint(g, target);
                self.source_hint(f, mid.as_ref())
            }
            _ => None,
        }
    }

    fn map(
        &self,
        m: &MapExpr,
        source: Option<&ModelSpace>,
        target: Option<&ModelSpace>,
    ) -> EResult<ModelMap> {
        let need = |s: Option<&ModelSpace>, what: &str| {
            s.cloned().ok_or_else(|| {
                self.diag(m.span, format!("cannot infer the {what} space of this map; declare it with `map`"))
            })
        };
        let either = || source.or(target).cloned();
        let r = match &m.kind {
            MapAst::Id => Ok(ModelMap::identity(&need(either().as_ref(), "source")?)),
            MapAst::Const => Ok(ModelMap::constant(&need(source, "source")?, &need(target, "target")?)),
            MapAst::Deg(d) => ModelMap::sphere_degree(&need(either().as_ref(), "source")?, *d),
            MapAst::Incl => ModelMap::linear_inclusion(&need(source, "source")?, &need(target, "target")?),
            MapAst::Slice(v) => ModelMap::slice_inclusion(&need(target, "target")?, zero_based(v)),
            MapAst::Proj(v) => ModelMap::projection(&need(source, "source")?, zero_based(v)),
            MapAst::Ident => ModelMap::identification(&need(source, "source")?, &need(target, "target")?),
            MapAst::Name(n) => Ok(self.named_map(n, m.span)?),
            MapAst::Compose(g, f) => {
                let mid = self.target_hint(f, source).or_else(|| self.source_hint(g, target));
                let Some(mid) = mid else {
                    return Err(self.diag(m.span, "cannot infer the middle space of this composition"));
                };
                let f = self.map(f, source, Some(&mid))?;
                let g = self.map(g, Some(&mid), target)?;
                f.then(&g)
            }
        };
        let map = self.lift(m.span, r)?;
        for (want, got, end) in [(source, map.source(), "source"), (target, map.target(), "target")] {
            if let Some(want) = want {
                if want != got {
                    return Err(self.diag(m.span, format!("map {end} is {got}, expected {want}")));
                }
            }
        }
        Ok(map)
    }

    fn infer_base(&self, b: &BundleAst) -> EResult<Option<ModelSpace>> {
        let s = match &b.kind {
            BundleKind::O(_) | BundleKind::Eps(_) | BundleKind::Line(_) => None,
            BundleKind::Tangent(s) => Some(self.space(s)?),
            BundleKind::Normal(f) => Some(self.named_map(&f.text, f.span)?.source().clone()),
            BundleKind::Clutch(k) => Some(self.lift(b.span, BundleExpr::clutched(*k))?.space()),
            BundleKind::Name(n) => match self.lookup(n, b.span)? {
                Value::Bundle(k) => Some(k.space().clone()),
                v => return Err(self.wrong_kind(n, b.span, v, "bundle")),
            },
            BundleKind::Pull(f, _) => Some(self.named_map(&f.text, f.span)?.source().clone()),
            BundleKind::Dual(e) => self.infer_base(e)?,
            BundleKind::Sum(x, y) | BundleKind::Tensor(x, y) | BundleKind::Diff(x, y) => {
                match self.infer_base(x)? {
                    Some(s) if !s.is_point() => Some(s),
                    other => self.infer_base(y)?.or(other),
                }
            }
        };
        Ok(s)
    }

    // Evaluates on `base` when given, pulling point classes back along the
    // constant map.
    fn bundle(&self, b: &BundleAst, base: Option<&ModelSpace>) -> EResult<KClass> {
        let inferred;
        let base = match base {
            Some(s) => Some(s),
            None => {
                inferred = self.infer_base(b)?.or_else(|| self.last_space.clone());
                inferred.as_ref()
            }
        };
        let need = || {
            base.cloned().ok_or_else(|| {
                self.diag(b.span, "cannot infer the base space of this bundle; declare a space first")
            })
        };
        let single = |r: crate::Result<BundleExpr>| self.lift(b.span, r.and_then(KClass::from_bundle));
        let k = match &b.kind {
            BundleKind::O(k) => single(BundleExpr::tautological(&need()?, *k))?,
            BundleKind::Eps(n) => {
                let s = base.cloned().unwrap_or_else(ModelSpace::point);
                single(Ok(BundleExpr::trivial(&s, *n)))?
            }
            BundleKind::Tangent(s) => single(Ok(BundleExpr::tangent(&self.space(s)?)))?,
            BundleKind::Normal(f) => single(BundleExpr::normal(&self.named_map(&f.text, f.span)?))?,
            BundleKind::Clutch(k) => single(BundleExpr::clutched(*k))?,
            BundleKind::Line(text) => {
                let s = need()?;
                single(GradedClass::parse(&s, text).and_then(BundleExpr::line))?
            }
            BundleKind::Name(n) => match self.lookup(n, b.span)? {
                Value::Bundle(k) => k.clone(),
                v => return Err(self.wrong_kind(n, b.span, v, "bundle")),
            },
            BundleKind::Dual(e) => self.bundle(e, base)?.dual(),
            BundleKind::Pull(f, e) => {
                let f = self.named_map(&f.text, f.span)?;
                let inner = self.bundle(e, Some(f.target()))?;
                self.lift(b.span, inner.pullback(&f))?
            }
            BundleKind::Sum(x, y) => {
                let (x, y) = (self.bundle(x, base)?, self.bundle(y, base)?);
                self.lift(b.span, x.add(&y))?
            }
            BundleKind::Tensor(x, y) => {
                let (x, y) = (self.bundle(x, base)?, self.bundle(y, base)?);
                self.lift(b.span, x.tensor(&y))?
            }
            BundleKind::Diff(x, y) => {
                let (x, y) = (self.bundle(x, base)?, self.bundle(y, base)?);
                self.lift(b.span, x.sub(&y))?
            }
        };
        match base {
            Some(s) if k.space() != s => {
                if k.space().is_point() {
                    let c = ModelMap::constant(s, k.space());
                    Ok(self.lift(b.span, k.pullback(&c))?.simplified())
                } else {
                    Err(self.lift::<()>(
                        b.span,
                        Err(Error::SpaceMismatch { left: k.space().to_string(), right: s.to_string() }),
                    )
                    .unwrap_err())
                }
            }
            _ => Ok(k),
        }
    }

    fn capped(&self, c: GradedClass) -> Value {
        Value::Class(c.truncate(self.options.degree_cap.saturating_mul(2)))
    }

    fn named(&self, n: &Name) -> EResult<&Value> {
        self.lookup(&n.text, n.span)
    }

    fn expr(&self, e: &Expr) -> EResult<Value> {
        let sp = e.span;
        let v = match &e.kind {
            ExprKind::Number(p, q) => Value::Scalar(Rational::new(p.clone(), q.clone())),
            ExprKind::Name(n) => self.lookup(n, sp)?.clone(),
            ExprKind::Ch(b) => self.capped(self.bundle(b, None)?.ch_image().clone()),
            ExprKind::Td(b) => {
                let k = self.bundle(b, None)?;
                self.capped(self.lift(sp, k.todd())?)
            }
            ExprKind::Ahat(b) => {
                let k = self.bundle(b, None)?;
                self.capped(self.lift(sp, k.a_hat())?)
            }
            ExprKind::Chern(i, b) => {
                let k = self.bundle(b, None)?;
                let c = self.lift(sp, k.total_chern())?;
                self.capped(c.component(i.saturating_mul(2)))
            }
            ExprKind::Pontryagin(i, b) => {
                let k = self.bundle(b, None)?;
                let c = self.lift(sp, k.total_chern().and_then(|c| complexified_chern(&c)))?;
                let p = c.component(i.saturating_mul(4));
                self.capped(if i % 2 == 1 { -p } else { p })
            }
            ExprKind::Integrate(x) => match self.expr(x)? {
                Value::Scalar(q) => Value::Scalar(q),
                Value::Class(c) => Value::Scalar(c.integrate()),
                v => return Err(self.diag(x.span, format!("cannot integrate a {}", v.kind()))),
            },
            ExprKind::HomChern(n) => match self.named(n)? {
                Value::Cycle(c) => Value::Homology(self.lift(sp, c.hom_chern())?),
                v => return Err(self.wrong_kind(&n.text, n.span, v, "kcycle")),
            },
            ExprKind::KGroup(n, d) => match self.named(n)? {
                Value::Space(s) => Value::Group(k_group(s, *d)),
                v => return Err(self.wrong_kind(&n.text, n.span, v, "space")),
            },
            ExprKind::Parity(n) => match self.named(n)? {
                Value::Cycle(c) => Value::Brane(c.parity_type()),
                Value::Bundle(k) => Value::Parity(self.lift(sp, k.parity())?),
                v => return Err(self.wrong_kind(&n.text, n.span, v, "kcycle or bundle")),
            },
            ExprKind::Tachyon(n) => match self.named(n)? {
                Value::Cycle(c) => Value::Cycle(self.lift(sp, tachyon_reduce(c))?.cycle),
                v => return Err(self.wrong_kind(&n.text, n.span, v, "kcycle")),
            },
            ExprKind::Neg(x) => match self.expr(x)? {
                Value::Scalar(q) => Value::Scalar(-q),
                Value::Class(c) => Value::Class(-c),
                Value::Homology(h) => Value::Homology(-&h),
                v => return Err(self.diag(sp, format!("cannot negate a {}", v.kind()))),
            },
            ExprKind::Mul(a, b) => self.arith(sp, Op::Mul, self.expr(a)?, self.expr(b)?)?,
            ExprKind::Add(a, b) => self.arith(sp, Op::Add, self.expr(a)?, self.expr(b)?)?,
            ExprKind::Sub(a, b) => self.arith(sp, Op::Sub, self.expr(a)?, self.expr(b)?)?,
        };
        Ok(v)
    }

    fn arith(&self, sp: Span, op: Op, a: Value, b: Value) -> EResult<Value> {
        use Value::*;
        let v = match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
            }),
            (Class(x), Scalar(y)) => {
                let y = GradedClass::constant(x.space(), y);
                self.class_op(sp, op, x, y)?
            }
            (Scalar(x), Class(y)) => {
                let x = GradedClass::constant(y.space(), x);
                self.class_op(sp, op, x, y)?
            }
            (Class(x), Class(y)) => {
                let (x, y) = match (x.space().is_point(), y.space().is_point()) {
                    (true, false) => (GradedClass::constant(y.space(), x.constant_term()), y),
                    (false, true) => {
                        let y = GradedClass::constant(x.space(), y.constant_term());
                        (x, y)
                    }
                    _ => (x, y),
                };
                self.class_op(sp, op, x, y)?
            }
            (Homology(h), Homology(g)) if op != Op::Mul => {
                let g = if op == Op::Sub { -&g } else { g };
                Homology(self.lift(sp, h.try_add(&g))?)
            }
            (Scalar(q), Homology(h)) | (Homology(h), Scalar(q)) if op == Op::Mul => {
                Homology(h.scale(&q))
            }
            (a, b) => {
                return Err(self.diag(
                    sp,
                    format!("cannot {} a {} and a {}", op.verb(), a.kind(), b.kind()),
                ))
            }
        };
        Ok(v)
    }

    fn class_op(&self, sp: Span, op: Op, x: GradedClass, y: GradedClass) -> EResult<Value> {
        let r = match op {
            Op::Add => x.try_add(&y),
            Op::Sub => x.try_sub(&y),
            Op::Mul => x.cup(&y),
        };
        Ok(self.capped(self.lift(sp, r)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl Op {
    fn verb(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "subtract",
            Op::Mul => "multiply",
        }
    }
}

fn zero_based(v: &[u32]) -> Vec<usize> {
    v.iter().map(|&i| i.saturating_sub(1) as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(src: &str) -> Vec<String> {
        let r = run(src, RunOptions::default());
        assert!(r.is_ok(), "{}", r.error.unwrap());
        r.outputs.into_iter().map(|o| o.value).collect()
    }

    fn failure(src: &str) -> Diagnostic {
        run(src, RunOptions::default()).error.expect("should fail")
    }

    #[test]
    fn riemann_roch_on_the_line() {
        let v = values("space X = CP(1); bundle E on X = O(1); print integrate(ch(E)*td(T(X)));");
        assert_eq!(v, ["2"]);
    }

    #[test]
    fn odd_sphere_k_group() {
        assert_eq!(values("space X = S(3); print kgroup(X, 0);"), ["Z"]);
    }

    #[test]
    fn brane_parity() {
        let v = values(
            "space M = CP(1); space X = CP(2); map f : M -> X = incl;\
             kcycle C = [M; O(1); f]; print parity(C);",
        );
        assert_eq!(v, ["IIB_even"]);
    }

    #[test]
    fn todd_genus_inline() {
        assert_eq!(values("print integrate(td(T(CP(3))));"), ["1"]);
    }

    #[test]
    fn failed_assert_names_both_sides() {
        let d = failure("assert ch(eps(2)) == ch(eps(3));");
        assert!(d.message.contains("`2`") && d.message.contains("`3`"), "{}", d.message);
    }

    #[test]
    fn errors_carry_positions() {
        let d = failure("space X = CP(1);\nprint ch(F);");
        assert_eq!((d.line, d.column), (2, 10));
        assert!(d.message.contains("undeclared"));
        let d = failure("space X = CP(1);\nspace X = S(2);");
        assert_eq!(d.line, 2);
        assert!(failure("print ch(O(1));").message.contains("base space"));
        assert_eq!(values("space X = CP(2); print ch(O(1));"), ["1 + x + 1/2*x^2"]);
    }

    #[test]
    fn scalars_promote_into_classes() {
        let v = values("space X = CP(2); bundle L on X = O(1); print ch(L) - 1; print 1/2 * c(1, L) * c(1, L);");
        assert_eq!(v, ["x + 1/2*x^2", "1/2*x^2"]);
    }

    #[test]
    fn tachyon_statement() {
        let v = values(
            "space M = CP(1); space X = CP(2); map i : M -> X = incl;\
             kcycle C = [M ; O(1) ; i]; print homchern(C); print tachyon(C);",
        );
        assert_eq!(v[1], "[CP(2) ; O(1) - eps(1) ; id]");
    }

    #[test]
    fn inline_composition_infers_middle() {
        let v = values(
            "space Y = CP(1) * S(2); map s : S(2) -> Y = slice(2);\
             kcycle C = [S(2) ; eps(1) ; s . id]; print homchern(C);",
        );
        assert_eq!(v.len(), 1);
        assert!(failure("space Y = S(2); map f : Y -> Y = incl . incl;").message.contains("middle"));
    }

    #[test]
    fn json_records() {
        let r = run("space X = CP(1); bundle E on X = O(1) (+) eps(1) - eps(0); print ch(E);", RunOptions::default());
        let out = render_json(&r.outputs);
        assert_eq!(out, "{\"index\":3,\"kind\":\"class\",\"space\":\"CP(1)\",\"value\":\"2 + x\"}\n");
    }
}
