use std::fmt::Write;

use super::ast::*;

/// Canonical source text: one statement per line, minimal parentheses.
pub fn print(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.statements {
        out.push_str(&statement(s));
        out.push('\n');
    }
    out
}

pub fn statement(s: &Statement) -> String {
    match &s.kind {
        StatementKind::Space { name, value } => format!("space {} = {};", name.text, space(value)),
        StatementKind::Map { name, source, target, value } => format!(
            "map {} : {} -> {} = {};",
            name.text,
            space(source),
            space(target),
            map(value)
        ),
        StatementKind::Bundle { name, base, value } => {
            format!("bundle {} on {} = {};", name.text, space(base), bundle(value))
        }
        StatementKind::KCycle { name, manifold, class, map: m } => format!(
            "kcycle {} = [{} ; {} ; {}];",
            name.text,
            space(manifold),
            bundle(class),
            map(m)
        ),
        StatementKind::Print(e) => format!("print {};", expr(e)),
        StatementKind::Assert(a, b) => format!("assert {} == {};", expr(a), expr(b)),
    }
}

pub fn space(s: &SpaceExpr) -> String {
    match &s.kind {
        SpaceAst::Point => "point".into(),
        SpaceAst::Sphere(n) => format!("S({n})"),
        SpaceAst::ComplexProjective(n) => format!("CP({n})"),
        SpaceAst::Torus(n) => format!("T({n})"),
        SpaceAst::Name(n) => n.clone(),
        SpaceAst::Product(a, b) => {
            let right = space(b);
            if matches!(b.kind, SpaceAst::Product(..)) {
                format!("{} * ({right})", space(a))
            } else {
                format!("{} * {right}", space(a))
            }
        }
    }
}

fn indices(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn map(m: &MapExpr) -> String {
    match &m.kind {
        MapAst::Id => "id".into(),
        MapAst::Const => "const".into(),
        MapAst::Deg(d) => format!("deg({d})"),
        MapAst::Incl => "incl".into(),
        MapAst::Slice(v) => format!("slice({})", indices(v)),
        MapAst::Proj(v) => format!("proj({})", indices(v)),
        MapAst::Ident => "ident".into(),
        MapAst::Name(n) => n.clone(),
        MapAst::Compose(g, f) => {
            let inner = map(f);
            if matches!(f.kind, MapAst::Compose(..)) {
                format!("{} . ({inner})", map(g))
            } else {
                format!("{} . {inner}", map(g))
            }
        }
    }
}

fn bundle_prec(b: &BundleAst) -> u8 {
    match b.kind {
        BundleKind::Diff(..) => 0,
        BundleKind::Sum(..) => 1,
        BundleKind::Tensor(..) => 2,
        _ => 3,
    }
}

fn bundle_operand(b: &BundleAst, min: u8) -> String {
    if bundle_prec(b) < min {
        format!("({})", bundle(b))
    } else {
        bundle(b)
    }
}

pub fn bundle(b: &BundleAst) -> String {
    let binary = |a: &BundleAst, c: &BundleAst, op: &str, p: u8| {
        format!("{} {op} {}", bundle_operand(a, p), bundle_operand(c, p + 1))
    };
    match &b.kind {
        BundleKind::O(k) => format!("O({k})"),
        BundleKind::Eps(n) => format!("eps({n})"),
        BundleKind::Tangent(s) => format!("T({})", space(s)),
        BundleKind::Normal(f) => format!("N({})", f.text),
        BundleKind::Clutch(k) => format!("clutch({k})"),
        BundleKind::Line(c) => format!("line({c})"),
        BundleKind::Name(n) => n.clone(),
        BundleKind::Dual(e) => format!("dual({})", bundle(e)),
        BundleKind::Pull(f, e) => format!("pull({}, {})", f.text, bundle(e)),
        BundleKind::Diff(a, c) => binary(a, c, "-", 0),
        BundleKind::Sum(a, c) => binary(a, c, "(+)", 1),
        BundleKind::Tensor(a, c) => binary(a, c, "(x)", 2),
    }
}

fn expr_prec(e: &Expr) -> u8 {
    match e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => 0,
        ExprKind::Mul(..) => 1,
        ExprKind::Neg(..) => 2,
        _ => 3,
    }
}

fn expr_operand(e: &Expr, min: u8) -> String {
    if expr_prec(e) < min {
        format!("({})", expr(e))
    } else {
        expr(e)
    }
}

pub fn expr(e: &Expr) -> String {
    let mut out = String::new();
    match &e.kind {
        ExprKind::Number(p, q) => {
            write!(out, "{p}").unwrap();
            if *q != 1.into() {
                write!(out, "/{q}").unwrap();
            }
        }
        ExprKind::Name(n) => out.push_str(n),
        ExprKind::Ch(b) => write!(out, "ch({})", bundle(b)).unwrap(),
        ExprKind::Td(b) => write!(out, "td({})", bundle(b)).unwrap(),
        ExprKind::Ahat(b) => write!(out, "ahat({})", bundle(b)).unwrap(),
        ExprKind::Chern(k, b) => write!(out, "c({k}, {})", bundle(b)).unwrap(),
        ExprKind::Pontryagin(k, b) => write!(out, "p({k}, {})", bundle(b)).unwrap(),
        ExprKind::Integrate(x) => write!(out, "integrate({})", expr(x)).unwrap(),
        ExprKind::HomChern(n) => write!(out, "homchern({})", n.text).unwrap(),
        ExprKind::KGroup(n, d) => write!(out, "kgroup({}, {d})", n.text).unwrap(),
        ExprKind::Parity(n) => write!(out, "parity({})", n.text).unwrap(),
        ExprKind::Tachyon(n) => write!(out, "tachyon({})", n.text).unwrap(),
        ExprKind::Neg(x) => write!(out, "-{}", expr_operand(x, 2)).unwrap(),
        ExprKind::Mul(a, b) => write!(out, "{} * {}", expr_operand(a, 1), expr_operand(b, 2)).unwrap(),
        ExprKind::Add(a, b) => write!(out, "{} + {}", expr_operand(a, 0), expr_operand(b, 1)).unwrap(),
        ExprKind::Sub(a, b) => write!(out, "{} - {}", expr_operand(a, 0), expr_operand(b, 1)).unwrap(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse;
    use super::*;

    #[test]
    fn canonical_text_reparses() {
        let src = "space X=CP(2)*(S(2)*T(1)); map f:point->X=slice(1).const;\
                   bundle E on X=(O(1)(+)eps(1))(x)dual(O(-2)) - (T(X) - pull(f,eps(1)));\
                   print -(1/2 - 3)*ch(E)+-4/6; kcycle K=[point;eps(1);f]; assert homchern(K)==homchern(K);";
        let a = parse(src).unwrap();
        let text = print(&a);
        assert_eq!(parse(&text).unwrap(), a);
        assert!(text.contains("(O(1) (+) eps(1)) (x) dual(O(-2)) - (T(X) - pull(f, eps(1)))"), "{text}");
        assert!(text.contains("-(1/2 - 3) * ch(E) + -2/3"), "{text}");
        assert!(text.contains("CP(2) * (S(2) * T(1))"), "{text}");
    }
}
