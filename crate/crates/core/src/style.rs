//! Formatting-consistency counters.
//!
//! Each of the twenty rules looks at one side of one kind of token and
//! records whether whitespace was present (`a`) or absent (`b`). Contexts
//! where no choice exists are skipped: the neighbour is on another line,
//! the neighbour is a comment, or the pairing is one that styles treat
//! specially (empty `()`, `[]`, `{}`).

use std::fmt;
use std::str::FromStr;

use crate::lexer::{Lexed, Token, TokenKind};

/// Keywords whose surrounding spacing is checked.
pub const SPACED_KEYWORDS: &[&[u8]] = &[
    b"if", b"while", b"for", b"switch", b"return", b"do", b"sizeof",
];

const BINARY_OPERATORS: &[&[u8]] = &[
    b"+", b"-", b"*", b"/", b"%", b"==", b"!=", b"<", b">", b"<=", b">=", b"&&", b"||", b"&",
    b"|", b"^", b"<<", b">>", b"=", b"+=", b"-=", b"*=", b"/=", b"%=", b"&=", b"|=", b"^=",
    b"<<=", b">>=",
];

/// The twenty rules, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StyleRule {
    BinaryOpBefore,
    BinaryOpAfter,
    ClosingBraceBefore,
    ClosingBraceAfter,
    CommaBefore,
    CommaAfter,
    KeywordBefore,
    KeywordAfter,
    OpeningBraceBefore,
    OpeningBraceAfter,
    OpeningSquareBefore,
    OpeningSquareAfter,
    SemicolonBefore,
    SemicolonAfter,
    StructAccessBefore,
    StructAccessAfter,
    ClosingParenBefore,
    UnaryOpAfter,
    ClosingSquareBefore,
    LineEnd,
}

impl StyleRule {
    pub const COUNT: usize = 20;

    pub const ALL: [StyleRule; Self::COUNT] = [
        StyleRule::BinaryOpBefore,
        StyleRule::BinaryOpAfter,
        StyleRule::ClosingBraceBefore,
        StyleRule::ClosingBraceAfter,
        StyleRule::CommaBefore,
        StyleRule::CommaAfter,
        StyleRule::KeywordBefore,
        StyleRule::KeywordAfter,
        StyleRule::OpeningBraceBefore,
        StyleRule::OpeningBraceAfter,
        StyleRule::OpeningSquareBefore,
        StyleRule::OpeningSquareAfter,
        StyleRule::SemicolonBefore,
        StyleRule::SemicolonAfter,
        StyleRule::StructAccessBefore,
        StyleRule::StructAccessAfter,
        StyleRule::ClosingParenBefore,
        StyleRule::UnaryOpAfter,
        StyleRule::ClosingSquareBefore,
        StyleRule::LineEnd,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            StyleRule::BinaryOpBefore => "binary_op_before",
            StyleRule::BinaryOpAfter => "binary_op_after",
            StyleRule::ClosingBraceBefore => "closing_brace_before",
            StyleRule::ClosingBraceAfter => "closing_brace_after",
            StyleRule::CommaBefore => "comma_before",
            StyleRule::CommaAfter => "comma_after",
            StyleRule::KeywordBefore => "keyword_before",
            StyleRule::KeywordAfter => "keyword_after",
            StyleRule::OpeningBraceBefore => "opening_brace_before",
            StyleRule::OpeningBraceAfter => "opening_brace_after",
            StyleRule::OpeningSquareBefore => "opening_square_before",
            StyleRule::OpeningSquareAfter => "opening_square_after",
            StyleRule::SemicolonBefore => "semicolon_before",
            StyleRule::SemicolonAfter => "semicolon_after",
            StyleRule::StructAccessBefore => "struct_access_before",
            StyleRule::StructAccessAfter => "struct_access_after",
            StyleRule::ClosingParenBefore => "closing_paren_before",
            StyleRule::UnaryOpAfter => "unary_op_after",
            StyleRule::ClosingSquareBefore => "closing_square_before",
            StyleRule::LineEnd => "line_end",
        }
    }
}

impl fmt::Display for StyleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StyleRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StyleRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown style rule `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleCount {
    /// Occurrences formatted with whitespace.
    pub a: u64,
    /// Occurrences formatted without.
    pub b: u64,
}

/// Per-rule `(a, b)` counts for one file, indexed by [`StyleRule::index`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StyleCounts {
    pub rules: [RuleCount; StyleRule::COUNT],
}

impl StyleCounts {
    pub fn get(&self, rule: StyleRule) -> RuleCount {
        self.rules[rule.index()]
    }

    pub fn set(&mut self, rule: StyleRule, a: u64, b: u64) {
        self.rules[rule.index()] = RuleCount { a, b };
    }

    fn record(&mut self, rule: StyleRule, spaced: bool) {
        let c = &mut self.rules[rule.index()];
        if spaced {
            c.a += 1;
        } else {
            c.b += 1;
        }
    }

    /// Column names, two per rule: `<rule>_a`, `<rule>_b`.
    pub fn column_names() -> Vec<String> {
        StyleRule::ALL
            .iter()
            .flat_map(|r| [format!("{r}_a"), format!("{r}_b")])
            .collect()
    }

    /// Values in [`Self::column_names`] order.
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.rules.iter().flat_map(|c| [c.a, c.b])
    }

    pub fn from_values(values: &[u64]) -> Option<Self> {
        if values.len() != 2 * StyleRule::COUNT {
            return None;
        }
        let mut counts = StyleCounts::default();
        for (c, pair) in counts.rules.iter_mut().zip(values.chunks_exact(2)) {
            *c = RuleCount {
                a: pair[0],
                b: pair[1],
            };
        }
        Some(counts)
    }
}

/// Percentage of formatting decisions that go against the file's majority
/// choice: `100 * sum(min(a, b)) / sum(a + b)`, or 0 when nothing was counted.
pub fn style_inconsistency(counts: &StyleCounts) -> f64 {
    let (minority, total) = counts
        .rules
        .iter()
        .fold((0u64, 0u64), |(m, t), c| (m + c.a.min(c.b), t + c.a + c.b));
    if total == 0 {
        0.0
    } else {
        100.0 * minority as f64 / total as f64
    }
}

/// How an adjacent token relates to the one under inspection.
enum Gap {
    Spaced,
    Tight,
    /// Different line, comment, or no neighbour at all.
    NoChoice,
}

struct Ctx<'a> {
    src: &'a [u8],
}

impl Ctx<'_> {
    fn gap(&self, left: Option<&Token>, right: Option<&Token>) -> Gap {
        let (Some(l), Some(r)) = (left, right) else {
            return Gap::NoChoice;
        };
        if l.kind.is_comment() || r.kind.is_comment() {
            return Gap::NoChoice;
        }
        let between = &self.src[l.end..r.start];
        if between.contains(&b'\n') {
            Gap::NoChoice
        } else if between.is_empty() {
            Gap::Tight
        } else {
            Gap::Spaced
        }
    }

    fn is(&self, tok: Option<&Token>, p: &str) -> bool {
        tok.is_some_and(|t| t.is_punct(self.src, p))
    }

    fn is_any(&self, tok: Option<&Token>, ps: &[&str]) -> bool {
        ps.iter().any(|p| self.is(tok, p))
    }

    /// Does `tok` end an operand, making a following `*`/`&`/`+`/`-` binary?
    fn ends_operand(&self, tok: Option<&Token>) -> bool {
        tok.is_some_and(|t| {
            matches!(
                t.kind,
                TokenKind::Ident | TokenKind::Number | TokenKind::Str | TokenKind::Char
            ) || t.is_punct(self.src, ")")
                || t.is_punct(self.src, "]")
        })
    }
}

/// Counts the twenty formatting rules over a lexed file.
pub fn count_style(lexed: &Lexed, src: &[u8]) -> StyleCounts {
    let mut counts = StyleCounts::default();
    let ctx = Ctx { src };
    let toks = &lexed.tokens;

    let mut prev_code: Option<&Token> = None;
    for (i, tok) in toks.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &toks[j]);
        let next = toks.get(i + 1);
        let text = tok.text(src);
        let mut check = |rule: StyleRule, gap: Gap| match gap {
            Gap::Spaced => counts.record(rule, true),
            Gap::Tight => counts.record(rule, false),
            Gap::NoChoice => {}
        };
        let before = || ctx.gap(prev, Some(tok));
        let after = || ctx.gap(Some(tok), next);

        match tok.kind {
            TokenKind::Keyword if SPACED_KEYWORDS.contains(&text) => {
                if ctx.is_any(prev, &["}", ")", ";"]) {
                    check(StyleRule::KeywordBefore, before());
                }
                if ctx.is_any(next, &["(", "{"]) {
                    check(StyleRule::KeywordAfter, after());
                }
            }
            TokenKind::Punct => {
                // The replacement list of a macro starts an expression.
                let operand_before = !tok.expr_start
                    && ctx.ends_operand(prev_code.filter(|p| p.in_directive == tok.in_directive));
                match text {
                    b"}" => {
                        if !ctx.is(prev, "{") {
                            check(StyleRule::ClosingBraceBefore, before());
                        }
                        if !ctx.is_any(next, &[";", ",", ")", "}", "]"]) {
                            check(StyleRule::ClosingBraceAfter, after());
                        }
                    }
                    b"{" => {
                        check(StyleRule::OpeningBraceBefore, before());
                        if !ctx.is(next, "}") {
                            check(StyleRule::OpeningBraceAfter, after());
                        }
                    }
                    b"," => {
                        check(StyleRule::CommaBefore, before());
                        check(StyleRule::CommaAfter, after());
                    }
                    b"[" => {
                        check(StyleRule::OpeningSquareBefore, before());
                        if !ctx.is(next, "]") {
                            check(StyleRule::OpeningSquareAfter, after());
                        }
                    }
                    b"]" => {
                        if !ctx.is(prev, "[") {
                            check(StyleRule::ClosingSquareBefore, before());
                        }
                    }
                    b")" => {
                        if !ctx.is(prev, "(") {
                            check(StyleRule::ClosingParenBefore, before());
                        }
                    }
                    b";" => {
                        check(StyleRule::SemicolonBefore, before());
                        if !ctx.is_any(next, &[";", ")"]) {
                            check(StyleRule::SemicolonAfter, after());
                        }
                    }
                    b"." | b"->" => {
                        // Designated initializers (`.x = 1`) are not member access.
                        if operand_before {
                            check(StyleRule::StructAccessBefore, before());
                            check(StyleRule::StructAccessAfter, after());
                        }
                    }
                    b"!" | b"~" => check(StyleRule::UnaryOpAfter, after()),
                    b"++" | b"--" => {
                        if !operand_before {
                            check(StyleRule::UnaryOpAfter, after());
                        }
                    }
                    b"*" | b"&" | b"+" | b"-" if !operand_before => {
                        check(StyleRule::UnaryOpAfter, after());
                    }
                    op if BINARY_OPERATORS.contains(&op) => {
                        check(StyleRule::BinaryOpBefore, before());
                        check(StyleRule::BinaryOpAfter, after());
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        if !tok.kind.is_comment() {
            prev_code = Some(tok);
        }
    }

    let line_end = count_line_end_spaces(src);
    counts.rules[StyleRule::LineEnd.index()].a = line_end;
    counts
}

/// Lines whose last byte before the newline (or end of input) is a space or tab.
pub fn count_line_end_spaces(src: &[u8]) -> u64 {
    src.split(|&b| b == b'\n')
        .map(|line| line.strip_suffix(b"\r").unwrap_or(line))
        .filter(|line| matches!(line.last(), Some(b' ' | b'\t')))
        .count() as u64
}
