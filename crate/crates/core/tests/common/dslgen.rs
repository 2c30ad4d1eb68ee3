use std::fs;
use std::path::{Path, PathBuf};

use kcharge::dsl::*;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn scripts() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ks"))
        .collect();
    v.sort();
    v
}

/// What the command line prints in human mode, stderr appended.
pub fn human_transcript(r: &RunResult) -> String {
    let mut s = render_human(&r.outputs);
    if let Some(d) = &r.error {
        s.push_str("--- stderr\n");
        s.push_str(&d.to_string());
        s.push('\n');
    }
    s
}

pub fn corpus() -> String {
    let mut s = String::new();
    for ks in scripts() {
        let src = fs::read_to_string(&ks).unwrap();
        if parse(&src).is_ok() {
            s.push_str(&src);
        }
    }
    s
}

pub struct AstGen {
    pub rng: ChaCha8Rng,
}

const NAMES: &[&str] = &["X", "Y", "E", "F2", "f", "g_1", "C", "x", "a"];

impl AstGen {
    fn pick<T: Clone>(&mut self, v: &[T]) -> T {
        v.choose(&mut self.rng).unwrap().clone()
    }

    fn name(&mut self) -> Name {
        Name { text: self.pick(NAMES).to_string(), span: Span::default() }
    }

    fn space(&mut self, depth: u32) -> SpaceExpr {
        let n = self.rng.gen_range(0..5);
        let kind = match self.rng.gen_range(0..if depth == 0 { 5 } else { 7 }) {
            0 => SpaceAst::Point,
            1 => SpaceAst::Sphere(n),
            2 => SpaceAst::ComplexProjective(n),
            3 => SpaceAst::Torus(n),
            4 => SpaceAst::Name(self.name().text),
            _ => SpaceAst::Product(Box::new(self.space(depth - 1)), Box::new(self.space(depth - 1))),
        };
        SpaceExpr { kind, span: Span::default() }
    }

    fn indices(&mut self) -> Vec<u32> {
        (0..self.rng.gen_range(1..4)).map(|_| self.rng.gen_range(1..5)).collect()
    }

    fn map(&mut self, depth: u32) -> MapExpr {
        let kind = match self.rng.gen_range(0..if depth == 0 { 8 } else { 10 }) {
            0 => MapAst::Id,
            1 => MapAst::Const,
            2 => MapAst::Deg(self.rng.gen_range(-4..5)),
            3 => MapAst::Incl,
            4 => MapAst::Slice(self.indices()),
            5 => MapAst::Proj(self.indices()),
            6 => MapAst::Ident,
            7 => MapAst::Name(self.name().text),
            _ => MapAst::Compose(Box::new(self.map(depth - 1)), Box::new(self.map(depth - 1))),
        };
        MapExpr { kind, span: Span::default() }
    }

    fn class_text(&mut self) -> String {
        self.pick(&["x", "-x", "x + 1/2*x^2", "t1*t2 - 3*t3*t4", "2*x_1 + y"]).to_string()
    }

    fn bundle(&mut self, depth: u32) -> BundleAst {
        let d = depth.saturating_sub(1);
        let kind = match self.rng.gen_range(0..if depth == 0 { 7 } else { 12 }) {
            0 => BundleKind::O(self.rng.gen_range(-3..4)),
            1 => BundleKind::Eps(self.rng.gen_range(0..4)),
            2 => BundleKind::Tangent(self.space(1)),
            3 => BundleKind::Normal(self.name()),
            4 => BundleKind::Clutch(self.rng.gen_range(1..4)),
            5 => BundleKind::Line(self.class_text()),
            6 => BundleKind::Name(self.name().text),
            7 => BundleKind::Dual(Box::new(self.bundle(d))),
            8 => BundleKind::Pull(self.name(), Box::new(self.bundle(d))),
            9 => BundleKind::Sum(Box::new(self.bundle(d)), Box::new(self.bundle(d))),
            10 => BundleKind::Tensor(Box::new(self.bundle(d)), Box::new(self.bundle(d))),
            _ => BundleKind::Diff(Box::new(self.bundle(d)), Box::new(self.bundle(d))),
        };
        BundleAst { kind, span: Span::default() }
    }

    fn expr(&mut self, depth: u32) -> Expr {
        let d = depth.saturating_sub(1);
        let kind = match self.rng.gen_range(0..if depth == 0 { 12 } else { 17 }) {
            0 => {
                let p: i64 = self.rng.gen_range(0..20);
                let q: i64 = self.rng.gen_range(1..7);
                let g = num_integer_gcd(p, q);
                ExprKind::Number(BigInt::from(p / g), BigInt::from(q / g))
            }
            1 => ExprKind::Name(self.name().text),
            2 => ExprKind::Ch(self.bundle(2)),
            3 => ExprKind::Td(self.bundle(2)),
            4 => ExprKind::Ahat(self.bundle(2)),
            5 => ExprKind::Chern(self.rng.gen_range(0..4), self.bundle(2)),
            6 => ExprKind::Pontryagin(self.rng.gen_range(0..4), self.bundle(2)),
            7 => ExprKind::HomChern(self.name()),
            8 => ExprKind::KGroup(self.name(), self.rng.gen_range(-3..4)),
            9 => ExprKind::Parity(self.name()),
            10 => ExprKind::Tachyon(self.name()),
            11 => ExprKind::Integrate(Box::new(self.expr(d))),
            12 => ExprKind::Neg(Box::new(self.expr(d))),
            13 => ExprKind::Mul(Box::new(self.expr(d)), Box::new(self.expr(d))),
            14 => ExprKind::Add(Box::new(self.expr(d)), Box::new(self.expr(d))),
            _ => ExprKind::Sub(Box::new(self.expr(d)), Box::new(self.expr(d))),
        };
        Expr { kind, span: Span::default() }
    }

    pub fn statement(&mut self) -> Statement {
        let kind = match self.rng.gen_range(0..6) {
            0 => StatementKind::Space { name: self.name(), value: self.space(3) },
            1 => StatementKind::Map {
                name: self.name(),
                source: self.space(2),
                target: self.space(2),
                value: self.map(3),
            },
            2 => StatementKind::Bundle { name: self.name(), base: self.space(2), value: self.bundle(3) },
            3 => StatementKind::KCycle {
                name: self.name(),
                manifold: self.space(2),
                class: self.bundle(3),
                map: self.map(2),
            },
            4 => StatementKind::Print(self.expr(3)),
            _ => StatementKind::Assert(self.expr(2), self.expr(2)),
        };
        Statement { kind, span: Span::default() }
    }
}

pub fn num_integer_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs().max(1) } else { num_integer_gcd(b, a % b) }
}

pub const VOCAB: &[&str] = &[
    "space", "map", "bundle", "kcycle", "print", "assert", "on", "point", "S", "CP", "T", "O",
    "eps", "N", "clutch", "line", "dual", "pull", "ch", "td", "ahat", "c", "p", "integrate",
    "homchern", "kgroup", "parity", "tachyon", "id", "const", "deg", "incl", "slice", "proj",
    "ident", "X", "Y", "E", "f", "x", "t1", "0", "1", "2", "3", "7", "(", ")", "[", "]", ";",
    ",", ":", "->", "=", "==", "+", "-", "*", "/", "^", ".", "(+)", "(x)", "#", "\n", "é", "@",
];

pub fn fuzz_input(rng: &mut ChaCha8Rng, seeds: &[String]) -> String {
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(0..40);
            (0..n).map(|_| rng.gen_range(0u8..128) as char).collect()
        }
        1 => {
            let n = rng.gen_range(0..60);
            (0..n).map(|_| *VOCAB.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
        }
        _ => {
            let mut toks: Vec<String> = seeds.choose(rng).unwrap().split_whitespace().map(String::from).collect();
            for _ in 0..rng.gen_range(1..5) {
                let i = rng.gen_range(0..=toks.len());
                match rng.gen_range(0..3) {
                    0 if i < toks.len() => {
                        toks.remove(i);
                    }
                    1 => toks.insert(i, VOCAB.choose(rng).unwrap().to_string()),
                    _ if i < toks.len() => {
                        let j = rng.gen_range(0..toks.len());
                        toks.swap(i, j);
                    }
                    _ => {}
                }
            }
            toks.join(" ")
        }
    }
}

