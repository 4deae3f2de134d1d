//! Size, structure and quality metrics of a single C source text.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::lexer::{lex, TokenKind};
use crate::structure::{self, Diagnostics};
use crate::style::{count_style, style_inconsistency, StyleCounts};

/// Words that may indicate problems in the code, matched whole-word and
/// case-insensitively.
pub const QUESTIONABLE_WORDS: &[&str] = &[
    "bugbug", "buggy", "bullshit", "crap", "crash", "damn", "damned", "doom", "doomed", "fixme",
    "fuck", "fucker", "fucking", "hack", "hacked", "hackery", "hacks", "hell", "kludge",
    "kludges", "lame", "lameness", "poop", "screwed", "screws", "shit", "shits", "suck", "sucks",
    "todo", "xxx",
];

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SourceMetrics {
    pub n_statements: u64,
    pub n_chars: u64,
    pub n_comment_chars: u64,
    pub n_comments: u64,
    pub n_functions: u64,
    pub n_lines: u64,
    pub n_gotos: u64,
    pub n_questionable_words: u64,
    pub n_identifiers_unique: u64,
    pub sum_unique_identifier_len: u64,
    pub sum_nesting: u64,
    pub n_nested_lines: u64,
    /// Comment density: comments per 100 statements.
    pub cd: f64,
    /// Comment size: characters per comment.
    pub cs: f64,
    /// Function size: statements per function.
    pub fs: f64,
    /// Goto density: gotos per 100 statements.
    pub gd: f64,
    /// Mean length of the distinct identifiers.
    pub il: f64,
    /// Mean line length.
    pub ll: f64,
    /// Questionable words per 100 lines.
    pub qd: f64,
    /// Mean nesting of lines inside function bodies.
    pub sn: f64,
    /// Style inconsistency percentage.
    pub si: f64,
}

/// Column names of [`SourceMetrics`], in field order.
pub const METRIC_COLUMNS: [&str; 21] = [
    "n_statements",
    "n_chars",
    "n_comment_chars",
    "n_comments",
    "n_functions",
    "n_lines",
    "n_gotos",
    "n_questionable_words",
    "n_identifiers_unique",
    "sum_unique_identifier_len",
    "sum_nesting",
    "n_nested_lines",
    "cd",
    "cs",
    "fs",
    "gd",
    "il",
    "ll",
    "qd",
    "sn",
    "si",
];

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn percent(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

impl SourceMetrics {
    /// Fills the derived ratios from the raw counts. `si` is left untouched.
    pub fn derive(&mut self) {
        self.cd = percent(self.n_comments, self.n_statements);
        self.cs = ratio(self.n_comment_chars, self.n_comments);
        self.fs = ratio(self.n_statements, self.n_functions);
        self.gd = percent(self.n_gotos, self.n_statements);
        self.il = ratio(self.sum_unique_identifier_len, self.n_identifiers_unique);
        self.ll = ratio(self.n_chars, self.n_lines);
        self.qd = percent(self.n_questionable_words, self.n_lines);
        self.sn = ratio(self.sum_nesting, self.n_nested_lines);
    }

    pub fn counts(&self) -> [u64; 12] {
        [
            self.n_statements,
            self.n_chars,
            self.n_comment_chars,
            self.n_comments,
            self.n_functions,
            self.n_lines,
            self.n_gotos,
            self.n_questionable_words,
            self.n_identifiers_unique,
            self.sum_unique_identifier_len,
            self.sum_nesting,
            self.n_nested_lines,
        ]
    }

    pub fn ratios(&self) -> [f64; 9] {
        [
            self.cd, self.cs, self.fs, self.gd, self.il, self.ll, self.qd, self.sn, self.si,
        ]
    }

    /// Record whose ratios are all derived from `counts` and `style`.
    pub fn from_counts(counts: [u64; 12], style: &StyleCounts) -> Self {
        let mut m = Self::from_parts(counts, [0.0; 9]);
        m.derive();
        m.si = style_inconsistency(style);
        m
    }

    /// Rebuilds a record from [`METRIC_COLUMNS`]-ordered counts and ratios.
    pub fn from_parts(counts: [u64; 12], ratios: [f64; 9]) -> Self {
        let [n_statements, n_chars, n_comment_chars, n_comments, n_functions, n_lines, n_gotos, n_questionable_words, n_identifiers_unique, sum_unique_identifier_len, sum_nesting, n_nested_lines] =
            counts;
        let [cd, cs, fs, gd, il, ll, qd, sn, si] = ratios;
        SourceMetrics {
            n_statements,
            n_chars,
            n_comment_chars,
            n_comments,
            n_functions,
            n_lines,
            n_gotos,
            n_questionable_words,
            n_identifiers_unique,
            sum_unique_identifier_len,
            sum_nesting,
            n_nested_lines,
            cd,
            cs,
            fs,
            gd,
            il,
            ll,
            qd,
            sn,
            si,
        }
    }

    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Cd => self.cd,
            Metric::Cs => self.cs,
            Metric::Fn => self.n_functions as f64,
            Metric::Fs => self.fs,
            Metric::Gd => self.gd,
            Metric::Il => self.il,
            Metric::Ll => self.ll,
            Metric::Ln => self.n_lines as f64,
            Metric::Qd => self.qd,
            Metric::Si => self.si,
            Metric::Sn => self.sn,
        }
    }
}

/// The eleven quality metrics used by the history analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Cd,
    Cs,
    Fn,
    Fs,
    Gd,
    Il,
    Ll,
    Ln,
    Qd,
    Si,
    Sn,
}

impl Metric {
    pub const COUNT: usize = 11;

    pub const ALL: [Metric; Self::COUNT] = [
        Metric::Cd,
        Metric::Cs,
        Metric::Fn,
        Metric::Fs,
        Metric::Gd,
        Metric::Il,
        Metric::Ll,
        Metric::Ln,
        Metric::Qd,
        Metric::Si,
        Metric::Sn,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Upper-case initials, as used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Cd => "CD",
            Metric::Cs => "CS",
            Metric::Fn => "FN",
            Metric::Fs => "FS",
            Metric::Gd => "GD",
            Metric::Il => "IL",
            Metric::Ll => "LL",
            Metric::Ln => "LN",
            Metric::Qd => "QD",
            Metric::Si => "SI",
            Metric::Sn => "SN",
        }
    }

    /// Timeline column holding the metric.
    pub fn column(self) -> &'static str {
        match self {
            Metric::Cd => "cd",
            Metric::Cs => "cs",
            Metric::Fn => "n_functions",
            Metric::Fs => "fs",
            Metric::Gd => "gd",
            Metric::Il => "il",
            Metric::Ll => "ll",
            Metric::Ln => "n_lines",
            Metric::Qd => "qd",
            Metric::Si => "si",
            Metric::Sn => "sn",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(s) || m.column() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Full analysis of one source text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Measurement {
    pub metrics: SourceMetrics,
    pub style: StyleCounts,
    pub diagnostics: Diagnostics,
}

/// Lexes and measures `src`. Never fails; malformed input degrades to
/// whatever the lexer could recognise.
pub fn measure(src: &[u8]) -> Measurement {
    let lexed = lex(src);
    let structure = structure::scan(&lexed, src);
    let style = count_style(&lexed, src);

    let mut m = SourceMetrics {
        n_statements: structure.n_statements,
        n_chars: src.len() as u64,
        n_functions: structure.functions.len() as u64,
        n_lines: count_lines(src),
        n_gotos: structure.n_gotos,
        n_questionable_words: count_questionable_words(src),
        sum_nesting: structure.sum_nesting,
        n_nested_lines: structure.n_nested_lines,
        ..SourceMetrics::default()
    };

    let mut identifiers: HashSet<&[u8]> = HashSet::new();
    for tok in &lexed.tokens {
        match tok.kind {
            TokenKind::BlockComment => {
                m.n_comments += 1;
                let len = tok.end - tok.start;
                let closed = tok.text(src).ends_with(b"*/") && len >= 4;
                m.n_comment_chars += (len - if closed { 4 } else { 2 }) as u64;
            }
            TokenKind::LineComment => {
                m.n_comments += 1;
                m.n_comment_chars += (tok.end - tok.start - 2) as u64;
            }
            TokenKind::Ident => {
                identifiers.insert(tok.text(src));
            }
            _ => {}
        }
    }
    m.n_identifiers_unique = identifiers.len() as u64;
    m.sum_unique_identifier_len = identifiers.iter().map(|i| i.len() as u64).sum();
    m.derive();
    m.si = style_inconsistency(&style);

    Measurement {
        metrics: m,
        style,
        diagnostics: structure.diagnostics,
    }
}

pub fn compute_metrics(src: &[u8]) -> SourceMetrics {
    measure(src).metrics
}

/// Newline-delimited lines; a final unterminated line counts.
pub fn count_lines(src: &[u8]) -> u64 {
    let newlines = src.iter().filter(|&&b| b == b'\n').count() as u64;
    newlines + u64::from(src.last().is_some_and(|&b| b != b'\n'))
}

/// Whole-word, case-insensitive matches of [`QUESTIONABLE_WORDS`] anywhere
/// in the text. Words are maximal runs of ASCII alphanumerics and `_`.
pub fn count_questionable_words(src: &[u8]) -> u64 {
    src.split(|b| !(b.is_ascii_alphanumeric() || *b == b'_'))
        .filter(|w| (3..=9).contains(&w.len()))
        .filter(|w| QUESTIONABLE_WORDS.iter().any(|q| q.as_bytes().eq_ignore_ascii_case(w)))
        .count() as u64
}
