use num_bigint::BigInt;

/// Byte range in the source. Spans never take part in equality, so ASTs
/// parsed from differently formatted text compare equal.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementKind {
    Space { name: Name, value: SpaceExpr },
    Map { name: Name, source: SpaceExpr, target: SpaceExpr, value: MapExpr },
    Bundle { name: Name, base: SpaceExpr, value: BundleAst },
    KCycle { name: Name, manifold: SpaceExpr, class: BundleAst, map: MapExpr },
    Print(Expr),
    Assert(Expr, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceExpr {
    pub kind: SpaceAst,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceAst {
    Point,
    Sphere(u32),
    ComplexProjective(u32),
    Torus(u32),
    Name(String),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapExpr {
    pub kind: MapAst,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapAst {
    Id,
    Const,
    Deg(i64),
    Incl,
    /// 1-based factor positions.
    Slice(Vec<u32>),
    Proj(Vec<u32>),
    Ident,
    Name(String),
    /// `outer . inner`: `inner` is applied first.
    Compose(Box<MapExpr>, Box<MapExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleAst {
    pub kind: BundleKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleKind {
    O(i64),
    Eps(u32),
    Tangent(SpaceExpr),
    Normal(Name),
    Clutch(u32),
    /// Line bundle from first-Chern-class text, kept verbatim in normalized
    /// spacing and resolved against the base space at evaluation.
    Line(String),
    Name(String),
    Dual(Box<BundleAst>),
    Pull(Name, Box<BundleAst>),
    Sum(Box<BundleAst>, Box<BundleAst>),
    Tensor(Box<BundleAst>, Box<BundleAst>),
    Diff(Box<BundleAst>, Box<BundleAst>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    /// Nonnegative rational literal `p` or `p/q`.
    Number(BigInt, BigInt),
    Name(String),
    Ch(BundleAst),
    Td(BundleAst),
    Ahat(BundleAst),
    Chern(u32, BundleAst),
    Pontryagin(u32, BundleAst),
    Integrate(Box<Expr>),
    HomChern(Name),
    KGroup(Name, i64),
    Parity(Name),
    Tachyon(Name),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}
