//! Random program text rendered in one of two internally consistent styles.

use proptest::prelude::*;

#[derive(Debug, Clone)]
pub enum Stmt {
    Assign(Expr, Expr),
    Call(String, Vec<Expr>),
    If(Expr, Vec<Stmt>, Vec<Stmt>),
    While(Expr, Vec<Stmt>),
    For(String, Expr, Vec<Stmt>),
    Return(Expr),
}

#[derive(Debug, Clone)]
pub enum Expr {
    Var(String),
    Num(u32),
    Bin(Box<Expr>, &'static str, Box<Expr>),
    Unary(&'static str, Box<Expr>),
    Index(String, Box<Expr>),
    Member(String, &'static str, String),
}

#[derive(Clone, Copy, Debug)]
pub struct Style {
    /// Spaces around binary operators, after keywords, after `;` in for headers.
    pub spaced: bool,
    /// Opening braces of blocks go on their own line.
    pub gnu_braces: bool,
}

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "cnt", "len", "p", "q"]).prop_map(str::to_owned)
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        name().prop_map(Expr::Var),
        (0u32..100).prop_map(Expr::Num),
        (name(), prop::sample::select(vec![".", "->"]), name())
            .prop_map(|(a, op, b)| Expr::Member(a, op, b)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "<", "==", "&&", "&", "/"]), inner.clone())
                .prop_map(|(a, op, b)| Expr::Bin(Box::new(a), op, Box::new(b))),
            (prop::sample::select(vec!["-", "!", "~", "*", "&"]), inner.clone())
                .prop_map(|(op, e)| Expr::Unary(op, Box::new(e))),
            (name(), inner).prop_map(|(a, e)| Expr::Index(a, Box::new(e))),
        ]
    })
}

pub fn stmts() -> impl Strategy<Value = Vec<Stmt>> {
    let leaf = prop_oneof![
        (name(), expr()).prop_map(|(n, e)| Stmt::Assign(Expr::Var(n), e)),
        (name(), expr(), expr()).prop_map(|(n, i, e)| Stmt::Assign(Expr::Index(n, Box::new(i)), e)),
        (name(), prop::collection::vec(expr(), 0..3)).prop_map(|(n, a)| Stmt::Call(n, a)),
        expr().prop_map(Stmt::Return),
    ];
    let stmt = leaf.prop_recursive(3, 20, 3, |inner| {
        let block = prop::collection::vec(inner, 1..3);
        prop_oneof![
            (expr(), block.clone(), prop::collection::vec(Just(()), 0..2), block.clone())
                .prop_map(|(c, t, has_else, e)| Stmt::If(c, t, if has_else.is_empty() { vec![] } else { e })),
            (expr(), block.clone()).prop_map(|(c, b)| Stmt::While(c, b)),
            (name(), expr(), block).prop_map(|(v, n, b)| Stmt::For(v, n, b)),
        ]
    });
    prop::collection::vec(stmt, 1..6)
}

fn render_expr(e: &Expr, s: Style) -> String {
    let sp = if s.spaced { " " } else { "" };
    match e {
        Expr::Var(v) => v.clone(),
        Expr::Num(n) => n.to_string(),
        Expr::Bin(a, op, b) => format!("({}{sp}{op}{sp}{})", render_expr(a, s), render_expr(b, s)),
        Expr::Unary(op, a) => format!("{op}({})", render_expr(a, s)),
        Expr::Index(a, i) => format!("{a}[{}]", render_expr(i, s)),
        Expr::Member(a, op, b) => format!("{a}{op}{b}"),
    }
}

fn open(out: &mut String, s: Style, indent: usize) {
    if s.gnu_braces {
        out.push('\n');
        out.push_str(&"  ".repeat(indent));
        out.push_str("{\n");
    } else {
        out.push_str(if s.spaced { " {\n" } else { "{\n" });
    }
}

fn render_block(out: &mut String, body: &[Stmt], s: Style, indent: usize) {
    for st in body {
        render_stmt(out, st, s, indent + 1);
    }
    out.push_str(&"  ".repeat(indent));
    out.push('}');
}

fn render_stmt(out: &mut String, st: &Stmt, s: Style, indent: usize) {
    let sp = if s.spaced { " " } else { "" };
    let pad = "  ".repeat(indent);
    out.push_str(&pad);
    match st {
        Stmt::Assign(l, r) => out.push_str(&format!("{}{sp}={sp}{};", render_expr(l, s), render_expr(r, s))),
        Stmt::Call(f, args) => {
            let args: Vec<String> = args.iter().map(|a| render_expr(a, s)).collect();
            out.push_str(&format!("{f}({});", args.join(", ")));
        }
        Stmt::Return(e) => {
            let e = render_expr(e, s);
            let gap = if e.starts_with('(') { sp } else { " " };
            out.push_str(&format!("return{gap}{e};"));
        }
        Stmt::If(c, t, e) => {
            out.push_str(&format!("if{sp}({})", render_expr(c, s)));
            open(out, s, indent);
            render_block(out, t, s, indent);
            if !e.is_empty() {
                if s.gnu_braces {
                    out.push('\n');
                    out.push_str(&pad);
                    out.push_str("else");
                } else {
                    out.push_str(&format!("{sp}else"));
                }
                open(out, s, indent);
                render_block(out, e, s, indent);
            }
        }
        Stmt::While(c, b) => {
            out.push_str(&format!("while{sp}({})", render_expr(c, s)));
            open(out, s, indent);
            render_block(out, b, s, indent);
        }
        Stmt::For(v, n, b) => {
            out.push_str(&format!(
                "for{sp}({v}{sp}={sp}0;{sp}{v}{sp}<{sp}{};{sp}{v}++)",
                render_expr(n, s)
            ));
            open(out, s, indent);
            render_block(out, b, s, indent);
        }
    }
    out.push('\n');
}

pub fn render(body: &[Stmt], s: Style) -> String {
    let mut out = String::from("int\nf(int a, int b)");
    open(&mut out, Style { gnu_braces: true, ..s }, 0);
    render_block(&mut out, body, s, 0);
    out.push('\n');
    out
}
