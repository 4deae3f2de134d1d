//! Rudimentary parsing over the token stream: function detection, statement
//! counting and block nesting.

use crate::lexer::{Lexed, Token, TokenKind};

/// Keywords that each count as one statement.
const FLOW_KEYWORDS: &[&[u8]] = &[
    b"if", b"else", b"while", b"for", b"do", b"switch", b"case", b"default",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Definition,
    /// Function-like preprocessor macro.
    Macro,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpan {
    pub kind: FunctionKind,
    pub name: Option<String>,
    /// Offset of the body's opening brace, or of the `#` of a macro.
    pub start: usize,
    /// Offset one past the closing brace, or of the macro's terminating newline.
    pub end: usize,
    pub start_line: u32,
    /// Global brace depth outside the body. Always 0 for definitions, since
    /// bodies are only recognised at file scope.
    pub base_depth: u32,
    /// Body was still open at end of input.
    pub unterminated: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Braces left open at end of input.
    pub unclosed_braces: u64,
    /// Closing braces with no matching opener.
    pub unmatched_closes: u64,
    pub stray_bytes: u64,
}

#[derive(Debug, Clone, Default)]
pub struct Structure {
    pub functions: Vec<FunctionSpan>,
    pub n_statements: u64,
    pub n_gotos: u64,
    pub sum_nesting: u64,
    pub n_nested_lines: u64,
    pub diagnostics: Diagnostics,
}

#[derive(Default)]
struct Candidate {
    /// One entry per open `(` at file scope: was it preceded by an identifier or `)`?
    parens: Vec<bool>,
    last_close_qualifies: bool,
    saw_assignment: bool,
    name: Option<String>,
}

/// Function spans in source order: definitions and function-like macros.
pub fn extract_functions(lexed: &Lexed, src: &[u8]) -> Vec<FunctionSpan> {
    scan(lexed, src).functions
}

pub fn scan(lexed: &Lexed, src: &[u8]) -> Structure {
    let mut st = Structure::default();
    let mut depth: u32 = 0;
    let mut paren_depth: u32 = 0;
    let mut body: Option<FunctionSpan> = None;
    let mut cand = Candidate::default();
    let mut for_pending = false;
    let mut for_header: Option<u32> = None;
    let mut last_line = 0u32;
    let mut prev: Option<&Token> = None;

    for tok in lexed
        .tokens
        .iter()
        .filter(|t| !t.in_directive && !t.kind.is_comment() && t.kind != TokenKind::Unknown)
    {
        let text = tok.text(src);
        let is = |p: &str| tok.kind == TokenKind::Punct && text == p.as_bytes();

        if tok.line != last_line {
            last_line = tok.line;
            if body.is_some() {
                let effective = depth - u32::from(is("}"));
                if effective >= 1 {
                    st.n_nested_lines += 1;
                    st.sum_nesting += u64::from(effective - 1);
                }
            }
        }

        match tok.kind {
            TokenKind::Keyword => {
                if FLOW_KEYWORDS.contains(&text) {
                    st.n_statements += 1;
                    if text == b"for" {
                        for_pending = true;
                    }
                } else if text == b"goto" {
                    st.n_gotos += 1;
                }
            }
            TokenKind::Punct => {
                if is(";") {
                    if for_header.is_none() {
                        st.n_statements += 1;
                    }
                    if depth == 0 && for_header.is_none() {
                        cand = Candidate::default();
                    }
                } else if is("(") {
                    paren_depth += 1;
                    if for_pending {
                        for_header = Some(paren_depth);
                        for_pending = false;
                    }
                    if depth == 0 {
                        let after_ident = prev.filter(|p| p.kind == TokenKind::Ident);
                        if let (Some(p), None) = (after_ident, &cand.name) {
                            cand.name = Some(String::from_utf8_lossy(p.text(src)).into_owned());
                        }
                        let qualifies =
                            after_ident.is_some() || prev.is_some_and(|p| p.is_punct(src, ")"));
                        cand.parens.push(qualifies);
                    }
                } else if is(")") {
                    if for_header == Some(paren_depth) {
                        for_header = None;
                    }
                    paren_depth = paren_depth.saturating_sub(1);
                    if depth == 0 {
                        cand.last_close_qualifies = cand.parens.pop().unwrap_or(false);
                    }
                } else if is("{") {
                    if depth == 0 {
                        let is_function = paren_depth == 0
                            && !cand.saw_assignment
                            && cand.last_close_qualifies
                            && prev.is_some_and(|p| p.is_punct(src, ")"));
                        if is_function {
                            body = Some(FunctionSpan {
                                kind: FunctionKind::Definition,
                                name: cand.name.take(),
                                start: tok.start,
                                end: tok.end,
                                start_line: tok.line,
                                base_depth: 0,
                                unterminated: false,
                            });
                        }
                        cand = Candidate::default();
                    }
                    depth += 1;
                } else if is("}") {
                    if depth == 0 {
                        st.diagnostics.unmatched_closes += 1;
                    } else {
                        depth -= 1;
                        if depth == 0 {
                            if let Some(mut span) = body.take() {
                                span.end = tok.end;
                                st.functions.push(span);
                            }
                            cand = Candidate::default();
                        }
                    }
                } else if is("=") && depth == 0 && paren_depth == 0 {
                    cand.saw_assignment = true;
                }
            }
            _ => {}
        }
        prev = Some(tok);
    }

    st.diagnostics.unclosed_braces = u64::from(depth);
    if let Some(mut span) = body.take() {
        span.end = src.len();
        span.unterminated = true;
        st.functions.push(span);
    }

    for d in lexed.directives.iter().filter(|d| d.function_like_macro) {
        // `#`, `define`, then the macro name.
        let at = lexed.tokens.partition_point(|t| t.start < d.start);
        let name = lexed.tokens[at..]
            .iter()
            .take_while(|t| t.start < d.end)
            .find(|t| matches!(t.kind, TokenKind::Ident | TokenKind::Keyword))
            .map(|t| String::from_utf8_lossy(t.text(src)).into_owned());
        st.functions.push(FunctionSpan {
            kind: FunctionKind::Macro,
            name,
            start: d.start,
            end: d.end,
            start_line: d.line,
            base_depth: 0,
            unterminated: false,
        });
    }
    st.functions.sort_by_key(|f| f.start);
    st.diagnostics.stray_bytes = lexed.stray_bytes;
    st
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::lex;

    fn functions(src: &str) -> Vec<FunctionSpan> {
        extract_functions(&lex(src.as_bytes()), src.as_bytes())
    }

    fn structure(src: &str) -> Structure {
        scan(&lex(src.as_bytes()), src.as_bytes())
    }

    #[test]
    fn two_definitions() {
        let f = functions("int f(){} int g(){}");
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].name.as_deref(), Some("f"));
        assert_eq!(f[1].name.as_deref(), Some("g"));
        assert_eq!((f[0].start, f[0].end), (7, 9));
    }

    #[test]
    fn function_like_macro_is_a_function() {
        let f = functions("#define MAX(a,b) ((a)>(b)?(a):(b))");
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, FunctionKind::Macro);
        assert_eq!(f[0].name.as_deref(), Some("MAX"));
    }

    #[test]
    fn object_like_macro_is_not() {
        assert!(functions("#define MAX (a)\n#define N 3\n").is_empty());
    }

    #[test]
    fn declaration_is_not_a_function() {
        assert!(functions("int x;").is_empty());
        assert!(functions("int f(void);").is_empty());
    }

    #[test]
    fn aggregates_are_not_functions() {
        assert!(functions("struct s { int a; };").is_empty());
        assert!(functions("int a[] = { 1, 2 };").is_empty());
        assert!(functions("struct __attribute__((packed)) s { int a; };").is_empty());
        assert!(functions("int (*fp)(int) = { 0 };").is_empty());
    }

    #[test]
    fn attributes_and_pointer_declarators() {
        assert_eq!(functions("void f(void) __attribute__((noreturn)) { }").len(), 1);
        assert_eq!(functions("int (*get(int k))(int) { return 0; }").len(), 1);
        let f = functions("static struct s *mk(void)\n{\n}\n");
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].name.as_deref(), Some("mk"));
        assert_eq!(functions("int (*get(int k))(int) { return 0; }")[0].name.as_deref(), Some("get"));
    }

    #[test]
    fn unbalanced_body_closes_at_eof() {
        let src = "int f() { if (x) {";
        let s = structure(src);
        assert_eq!(s.functions.len(), 1);
        assert!(s.functions[0].unterminated);
        assert_eq!(s.functions[0].end, src.len());
        assert_eq!(s.diagnostics.unclosed_braces, 2);
        assert_eq!(structure("}").diagnostics.unmatched_closes, 1);
    }

    #[test]
    fn statements_exclude_for_header() {
        let s = structure("void f() { for (i = 0; i < n; i++) x++; }");
        // for + one semicolon
        assert_eq!(s.n_statements, 2);
        let s = structure("void f() { do { a; } while (b); if (c) d; else e; }");
        // do, a;, while, b;, if, d;, else, e;
        assert_eq!(s.n_statements, 8);
    }

    #[test]
    fn directive_content_is_not_code() {
        let s = structure("#define FAIL goto out;\n");
        assert_eq!((s.n_statements, s.n_gotos), (0, 0));
        let s = structure("void f() { goto out; out: ; }");
        assert_eq!((s.n_statements, s.n_gotos), (2, 1));
    }

    #[test]
    fn nesting_counts_from_function_body() {
        let src = "int f(void)\n{\n\twhile (x) {\n\t\tif (y) {\n\t\t\tz();\n\t\t}\n\t}\n}\n";
        let s = structure(src);
        // while line 0, if line 1, z 2, closing brace of if 1, of while 0
        assert_eq!(s.n_nested_lines, 5);
        assert_eq!(s.sum_nesting, 4);
    }

    #[test]
    fn lines_outside_functions_are_not_nested() {
        let s = structure("struct s {\n\tint a;\n};\nint v[] = {\n\t1,\n};\n");
        assert_eq!((s.n_nested_lines, s.sum_nesting), (0, 0));
    }
}
