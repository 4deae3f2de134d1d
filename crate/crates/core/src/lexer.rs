//! Byte-oriented lexer for a superset of C.
//!
//! The lexer never fails: bytes it cannot classify become single-byte
//! [`TokenKind::Unknown`] tokens and scanning resumes at the next byte.
//! Preprocessor directives are recognised at line starts; their tokens are
//! flagged with [`Token::in_directive`] so later passes can keep them apart
//! from code proper.

/// C11 keywords. Identifiers in this set lex as [`TokenKind::Keyword`].
pub const KEYWORDS: &[&str] = &[
    "auto",
    "break",
    "case",
    "char",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extern",
    "float",
    "for",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "register",
    "restrict",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "struct",
    "switch",
    "typedef",
    "union",
    "unsigned",
    "void",
    "volatile",
    "while",
    "_Alignas",
    "_Alignof",
    "_Atomic",
    "_Bool",
    "_Complex",
    "_Generic",
    "_Imaginary",
    "_Noreturn",
    "_Static_assert",
    "_Thread_local",
];

// Longest match first.
const PUNCTUATORS: &[&str] = &[
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "*=",
    "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##", "[", "]", "(", ")", "{", "}", ".", "&", "*",
    "+", "-", "~", "!", "/", "%", "<", ">", "^", "|", "?", ":", ";", "=", ",", "#",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    Number,
    Str,
    Char,
    Punct,
    /// `<...>` operand of `#include`.
    HeaderName,
    /// The name following `#` in a directive (`define`, `if`, ...).
    DirectiveName,
    LineComment,
    BlockComment,
    Unknown,
}

impl TokenKind {
    pub fn is_comment(self) -> bool {
        matches!(self, TokenKind::LineComment | TokenKind::BlockComment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first byte.
    pub start: usize,
    /// Byte offset one past the last byte.
    pub end: usize,
    /// 1-based line on which the token starts.
    pub line: u32,
    pub in_directive: bool,
    /// First token of a `#define` replacement list.
    pub expr_start: bool,
}

impl Token {
    pub fn text<'a>(&self, src: &'a [u8]) -> &'a [u8] {
        &src[self.start..self.end]
    }

    pub fn is_punct(&self, src: &[u8], p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text(src) == p.as_bytes()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    /// Offset of the introducing `#`.
    pub start: usize,
    /// Offset of the terminating newline, or end of input.
    pub end: usize,
    pub line: u32,
    pub name: String,
    /// `#define NAME(` with no whitespace before the parenthesis.
    pub function_like_macro: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub directives: Vec<Directive>,
    /// Bytes that could not start any token.
    pub stray_bytes: u64,
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b == b'$'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$'
}

fn is_hspace(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\r' | 0x0b | 0x0c)
}

pub fn is_keyword(word: &[u8]) -> bool {
    KEYWORDS.iter().any(|k| k.as_bytes() == word)
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    at_line_start: bool,
    directive: Option<usize>,
    mark_expr_start: bool,
    out: Lexed,
}

impl<'a> Lexer<'a> {
    fn peek(&self, off: usize) -> Option<u8> {
        self.src.get(self.pos + off).copied()
    }

    /// Length of a backslash-newline splice starting at `at`, if any.
    fn splice_len(&self, at: usize) -> Option<usize> {
        if self.src.get(at) != Some(&b'\\') {
            return None;
        }
        match self.src.get(at + 1) {
            Some(b'\n') => Some(2),
            Some(b'\r') if self.src.get(at + 2) == Some(&b'\n') => Some(3),
            _ => None,
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize, line: u32) {
        let expr_start = self.mark_expr_start && !kind.is_comment();
        if expr_start {
            self.mark_expr_start = false;
        }
        self.out.tokens.push(Token {
            kind,
            start,
            end: self.pos,
            line,
            in_directive: self.directive.is_some(),
            expr_start,
        });
    }

    fn end_directive(&mut self, end: usize) {
        self.mark_expr_start = false;
        if let Some(idx) = self.directive.take() {
            self.out.directives[idx].end = end;
        }
    }

    fn run(mut self) -> Lexed {
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b == b'\n' {
                let at = self.pos;
                self.end_directive(at);
                self.pos += 1;
                self.line += 1;
                self.at_line_start = true;
                continue;
            }
            if is_hspace(b) {
                self.pos += 1;
                continue;
            }
            if let Some(n) = self.splice_len(self.pos) {
                self.pos += n;
                self.line += 1;
                continue;
            }
            let start = self.pos;
            let line = self.line;
            match b {
                b'/' if self.peek(1) == Some(b'*') => {
                    self.block_comment();
                    self.push(TokenKind::BlockComment, start, line);
                }
                b'/' if self.peek(1) == Some(b'/') => {
                    self.line_comment();
                    self.push(TokenKind::LineComment, start, line);
                }
                b'#' if self.at_line_start => {
                    self.at_line_start = false;
                    self.pos += 1;
                    self.out.directives.push(Directive {
                        start,
                        end: self.src.len(),
                        line,
                        name: String::new(),
                        function_like_macro: false,
                    });
                    self.directive = Some(self.out.directives.len() - 1);
                    self.push(TokenKind::Punct, start, line);
                    self.directive_head();
                }
                _ => {
                    self.at_line_start = false;
                    self.token(start, line);
                }
            }
        }
        let len = self.src.len();
        self.end_directive(len);
        self.out
    }

    fn token(&mut self, start: usize, line: u32) {
        let b = self.src[self.pos];
        if is_ident_start(b) {
            while self.pos < self.src.len() && is_ident_continue(self.src[self.pos]) {
                self.pos += 1;
            }
            let word = &self.src[start..self.pos];
            let prefix = matches!(word, b"L" | b"u" | b"U" | b"u8");
            match self.src.get(self.pos) {
                Some(b'"') if prefix => {
                    self.quoted(b'"');
                    self.push(TokenKind::Str, start, line);
                }
                Some(b'\'') if prefix => {
                    self.quoted(b'\'');
                    self.push(TokenKind::Char, start, line);
                }
                _ => {
                    let kind = if is_keyword(word) {
                        TokenKind::Keyword
                    } else {
                        TokenKind::Ident
                    };
                    self.push(kind, start, line);
                }
            }
        } else if b.is_ascii_digit()
            || (b == b'.' && self.peek(1).is_some_and(|c| c.is_ascii_digit()))
        {
            self.number();
            self.push(TokenKind::Number, start, line);
        } else if b == b'"' || b == b'\'' {
            self.quoted(b);
            let kind = if b == b'"' {
                TokenKind::Str
            } else {
                TokenKind::Char
            };
            self.push(kind, start, line);
        } else if let Some(p) = PUNCTUATORS
            .iter()
            .find(|p| self.src[self.pos..].starts_with(p.as_bytes()))
        {
            self.pos += p.len();
            self.push(TokenKind::Punct, start, line);
        } else {
            self.pos += 1;
            self.out.stray_bytes += 1;
            self.push(TokenKind::Unknown, start, line);
        }
    }

    fn number(&mut self) {
        self.pos += 1;
        while let Some(c) = self.peek(0) {
            let prev = self.src[self.pos - 1];
            let exponent_sign = matches!(c, b'+' | b'-') && matches!(prev, b'e' | b'E' | b'p' | b'P');
            if is_ident_continue(c) || c == b'.' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Consumes a string or character literal starting at the opening quote.
    /// An unescaped newline terminates an unterminated literal.
    fn quoted(&mut self, quote: u8) {
        self.pos += 1;
        while self.pos < self.src.len() {
            if let Some(n) = self.splice_len(self.pos) {
                self.pos += n;
                self.line += 1;
                continue;
            }
            match self.src[self.pos] {
                b'\\' => self.pos = (self.pos + 2).min(self.src.len()),
                b'\n' => return,
                c => {
                    self.pos += 1;
                    if c == quote {
                        return;
                    }
                }
            }
        }
    }

    fn block_comment(&mut self) {
        self.pos += 2;
        while self.pos < self.src.len() {
            if self.src[self.pos..].starts_with(b"*/") {
                self.pos += 2;
                return;
            }
            if self.src[self.pos] == b'\n' {
                self.line += 1;
            }
            self.pos += 1;
        }
    }

    fn line_comment(&mut self) {
        self.pos += 2;
        while self.pos < self.src.len() {
            if let Some(n) = self.splice_len(self.pos) {
                self.pos += n;
                self.line += 1;
                continue;
            }
            if self.src[self.pos] == b'\n' {
                return;
            }
            self.pos += 1;
        }
    }

    fn skip_hspace(&mut self) {
        loop {
            if let Some(n) = self.splice_len(self.pos) {
                self.pos += n;
                self.line += 1;
            } else if self.peek(0).is_some_and(is_hspace) {
                self.pos += 1;
            } else {
                return;
            }
        }
    }

    /// Lexes the directive name and, where relevant, the header name or the
    /// macro name of a `#define`.
    fn directive_head(&mut self) {
        self.skip_hspace();
        let start = self.pos;
        let line = self.line;
        if !self.peek(0).is_some_and(is_ident_start) {
            return;
        }
        while self.peek(0).is_some_and(is_ident_continue) {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        self.push(TokenKind::DirectiveName, start, line);
        let idx = self.directive.expect("inside directive");
        self.out.directives[idx].name = name.clone();
        match name.as_str() {
            "include" | "include_next" | "import" => {
                self.skip_hspace();
                if self.peek(0) == Some(b'<') {
                    let start = self.pos;
                    let line = self.line;
                    while let Some(c) = self.peek(0) {
                        if c == b'\n' {
                            break;
                        }
                        self.pos += 1;
                        if c == b'>' {
                            break;
                        }
                    }
                    self.push(TokenKind::HeaderName, start, line);
                }
            }
            "define" => self.define_head(idx),
            _ => {}
        }
    }

    fn define_head(&mut self, idx: usize) {
        self.skip_hspace();
        let start = self.pos;
        let line = self.line;
        if !self.peek(0).is_some_and(is_ident_start) {
            return;
        }
        while self.peek(0).is_some_and(is_ident_continue) {
            self.pos += 1;
        }
        let kind = if is_keyword(&self.src[start..self.pos]) {
            TokenKind::Keyword
        } else {
            TokenKind::Ident
        };
        self.push(kind, start, line);
        let function_like = self.peek(0) == Some(b'(');
        self.out.directives[idx].function_like_macro = function_like;
        if function_like {
            // Parameter list: lex normally up to the closing parenthesis.
            while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                self.skip_hspace();
                if self.pos >= self.src.len() || self.src[self.pos] == b'\n' {
                    break;
                }
                let (s, l) = (self.pos, self.line);
                self.token(s, l);
                if self.out.tokens.last().is_some_and(|t| t.is_punct(self.src, ")")) {
                    break;
                }
            }
        }
        self.mark_expr_start = true;
    }
}

/// Lexes `src` into tokens, comments included.
pub fn lex(src: &[u8]) -> Lexed {
    let lexer = Lexer {
        src,
        pos: 0,
        line: 1,
        at_line_start: true,
        directive: None,
        mark_expr_start: false,
        out: Lexed::default(),
    };
    lexer.run()
}
