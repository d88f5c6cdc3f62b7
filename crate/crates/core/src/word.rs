//! Alphabets, plain words and run-length encoded words.
//!
//! Word syntax: whitespace-separated letter names, `^n` repetition and
//! parenthesised groups, e.g. `(a b a^20 b)^81`. A token that is not itself a
//! letter name is split into characters when every character is a
//! one-character letter, so `aab` reads as `a a b`. The empty string is the
//! empty word.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Letter = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || "()^".contains(c)) {
                return Err(Error::InvalidAutomaton(format!("invalid letter name `{n}`")));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate letter `{n}`")));
            }
        }
        Ok(Alphabet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.names.len()
    }

    /// True when both alphabets contain the same letter names (in any order).
    pub fn same_letters(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.names.iter().all(|n| other.index.contains_key(n))
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|&a| self.name(a))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a word in the run-length syntax described in the module docs.
    pub fn parse_word(&self, input: &str) -> Result<RleWord> {
        let tokens = tokenize(input)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            alphabet: self,
        };
        let w = parser.word()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("unexpected `{}`", parser.tokens[parser.pos])));
        }
        Ok(w)
    }
}

/// A finite word, as letter indices into an [`Alphabet`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RleNode {
    Letter(Letter),
    Concat(Vec<RleWord>),
    Power(RleWord, u64),
}

/// A word kept as a shared expression tree of concatenations and powers.
/// Counterexample words grow polynomially in their parameter, so they are
/// built and evaluated in this form and only expanded on request.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RleWord(Arc<RleNode>);

impl RleWord {
    pub fn empty() -> Self {
        RleWord(Arc::new(RleNode::Concat(Vec::new())))
    }

    pub fn letter(a: Letter) -> Self {
        RleWord(Arc::new(RleNode::Letter(a)))
    }

    pub fn from_word(w: &Word) -> Self {
        if w.len() == 1 {
            return Self::letter(w.0[0]);
        }
        RleWord(Arc::new(RleNode::Concat(
            w.0.iter().map(|&a| Self::letter(a)).collect(),
        )))
    }

    pub fn concat(parts: Vec<RleWord>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p.node() {
                RleNode::Concat(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(p),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        RleWord(Arc::new(RleNode::Concat(flat)))
    }

    pub fn power(base: RleWord, k: u64) -> Self {
        match k {
            0 => Self::empty(),
            1 => base,
            _ => RleWord(Arc::new(RleNode::Power(base, k))),
        }
    }

    pub fn node(&self) -> &RleNode {
        &self.0
    }

    /// Identity of the shared node, used as a memoisation key.
    pub fn ptr(&self) -> *const RleNode {
        Arc::as_ptr(&self.0)
    }

    /// Number of letters, or `None` on overflow.
    pub fn len(&self) -> Option<u128> {
        let mut memo = HashMap::new();
        self.len_memo(&mut memo)
    }

    fn len_memo(&self, memo: &mut HashMap<*const RleNode, Option<u128>>) -> Option<u128> {
        if let Some(v) = memo.get(&self.ptr()) {
            return *v;
        }
        let v = match self.node() {
            RleNode::Letter(_) => Some(1),
            RleNode::Concat(parts) => parts
                .iter()
                .try_fold(0u128, |acc, p| acc.checked_add(p.len_memo(memo)?)),
            RleNode::Power(base, k) => base.len_memo(memo)?.checked_mul(*k as u128),
        };
        memo.insert(self.ptr(), v);
        v
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Expands to a plain word, failing if it would exceed `cap` letters.
    pub fn expand(&self, cap: usize) -> Result<Word> {
        match self.len() {
            Some(n) if n <= cap as u128 => {}
            _ => {
                return Err(Error::CapExceeded {
                    what: "expanded word length",
                    cap,
                })
            }
        }
        let mut out = Vec::new();
        self.expand_into(&mut out);
        Ok(Word(out))
    }

    fn expand_into(&self, out: &mut Vec<Letter>) {
        match self.node() {
            RleNode::Letter(a) => out.push(*a),
            RleNode::Concat(parts) => parts.iter().for_each(|p| p.expand_into(out)),
            RleNode::Power(base, k) => {
                let start = out.len();
                base.expand_into(out);
                let end = out.len();
                for _ in 1..*k {
                    out.extend_from_within(start..end);
                }
            }
        }
    }

    pub fn map_letters<F: Fn(Letter) -> Letter>(&self, f: &F) -> RleWord {
        let mut memo = HashMap::new();
        self.map_memo(f, &mut memo)
    }

    fn map_memo<F: Fn(Letter) -> Letter>(
        &self,
        f: &F,
        memo: &mut HashMap<*const RleNode, RleWord>,
    ) -> RleWord {
        if let Some(w) = memo.get(&self.ptr()) {
            return w.clone();
        }
        let w = match self.node() {
            RleNode::Letter(a) => RleWord::letter(f(*a)),
            RleNode::Concat(parts) => RleWord(Arc::new(RleNode::Concat(
                parts.iter().map(|p| p.map_memo(f, memo)).collect(),
            ))),
            RleNode::Power(base, k) => RleWord(Arc::new(RleNode::Power(base.map_memo(f, memo), *k))),
        };
        memo.insert(self.ptr(), w.clone());
        w
    }

    pub fn max_letter(&self) -> Option<Letter> {
        match self.node() {
            RleNode::Letter(a) => Some(*a),
            RleNode::Concat(parts) => parts.iter().filter_map(RleWord::max_letter).max(),
            RleNode::Power(base, _) => base.max_letter(),
        }
    }

    /// Renders in the parseable run-length syntax; the empty word renders as `""`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> RleDisplay<'a> {
        RleDisplay { word: self, alphabet }
    }
}

pub struct RleDisplay<'a> {
    word: &'a RleWord,
    alphabet: &'a Alphabet,
}

impl fmt::Display for RleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rle(self.word, self.alphabet, f)
    }
}

fn write_rle(w: &RleWord, alphabet: &Alphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match w.node() {
        RleNode::Concat(parts) => {
            // Runs of structurally equal neighbours are written as powers.
            let mut i = 0;
            while i < parts.len() {
                let mut j = i + 1;
                while j < parts.len() && parts[j] == parts[i] {
                    j += 1;
                }
                if i > 0 {
                    f.write_str(" ")?;
                }
                if j - i == 1 {
                    write_item(&parts[i], alphabet, f)?;
                } else {
                    write_atom(&parts[i], alphabet, f)?;
                    write!(f, "^{}", j - i)?;
                }
                i = j;
            }
            Ok(())
        }
        _ => write_item(w, alphabet, f),
    }
}

/// One element of a concatenation: a letter, a power, or a parenthesised group.
fn write_item(w: &RleWord, alphabet: &Alphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match w.node() {
        RleNode::Power(base, k) => {
            write_atom(base, alphabet, f)?;
            write!(f, "^{k}")
        }
        _ => write_atom(w, alphabet, f),
    }
}

/// Something that can carry a `^n` suffix.
fn write_atom(w: &RleWord, alphabet: &Alphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match w.node() {
        RleNode::Letter(a) => f.write_str(alphabet.name(*a)),
        _ => {
            f.write_str("(")?;
            write_rle(w, alphabet, f)?;
            f.write_str(")")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Caret,
    Number(u64),
    Name(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Open => f.write_str("("),
            Token::Close => f.write_str(")"),
            Token::Caret => f.write_str("^"),
            Token::Number(n) => write!(f, "{n}"),
            Token::Name(s) => f.write_str(s),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
                let mut digits = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    chars.next();
                }
                let n = digits
                    .parse::<u64>()
                    .map_err(|_| Error::Parse("expected a number after `^`".into()))?;
                tokens.push(Token::Number(n));
            }
            _ => {
                let mut name = String::new();
                while let Some(&d) = chars
                    .peek()
                    .filter(|d| !d.is_whitespace() && !"()^".contains(**d))
                {
                    name.push(d);
                    chars.next();
                }
                tokens.push(Token::Name(name));
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn word(&mut self) -> Result<RleWord> {
        let mut items = Vec::new();
        while let Some(tok) = self.peek() {
            if *tok == Token::Close {
                break;
            }
            items.push(self.item()?);
        }
        Ok(RleWord::concat(items))
    }

    fn item(&mut self) -> Result<RleWord> {
        let mut atom = self.atom()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(Token::Number(n)) => {
                    let n = *n;
                    self.pos += 1;
                    atom = RleWord::power(atom, n);
                }
                _ => return Err(Error::Parse("expected a number after `^`".into())),
            }
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<RleWord> {
        match self.peek().cloned() {
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.word()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::Parse("unbalanced `(`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Name(name)) => {
                self.pos += 1;
                self.letter_or_split(&name)
            }
            Some(tok) => Err(Error::Parse(format!("unexpected `{tok}`"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn letter_or_split(&self, name: &str) -> Result<RleWord> {
        if let Ok(a) = self.alphabet.letter(name) {
            return Ok(RleWord::letter(a));
        }
        let split: Option<Vec<RleWord>> = name
            .chars()
            .map(|c| self.alphabet.letter(&c.to_string()).ok().map(RleWord::letter))
            .collect();
        match split {
            Some(letters) if name.chars().count() > 1 => {
                Ok(RleWord(Arc::new(RleNode::Concat(letters))))
            }
            _ => Err(Error::UnknownLetter(name.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn parse_and_expand() {
        let al = ab();
        let w = al.parse_word("(a^2 b)^3").unwrap();
        assert_eq!(w.expand(100).unwrap(), Word(vec![0, 0, 1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(w.len(), Some(9));
        assert_eq!(al.parse_word("").unwrap().expand(10).unwrap(), Word::empty());
        assert_eq!(al.parse_word("aab").unwrap().expand(10).unwrap(), Word(vec![0, 0, 1]));
        assert_eq!(al.parse_word("(a b)").unwrap().expand(10).unwrap(), Word(vec![0, 1]));
    }

    #[test]
    fn parse_errors() {
        let al = ab();
        assert!(matches!(al.parse_word("c"), Err(Error::UnknownLetter(_))));
        assert!(matches!(al.parse_word("(a b"), Err(Error::Parse(_))));
        assert!(matches!(al.parse_word("a^"), Err(Error::Parse(_))));
        assert!(matches!(al.parse_word("a)"), Err(Error::Parse(_))));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let al = ab();
        for src in ["(a b a^20 b)^81", "a", "a^3 b", "((a b)^2 a)^4 b^7", ""] {
            let w = al.parse_word(src).unwrap();
            let shown = w.display(&al).to_string();
            let again = al.parse_word(&shown).unwrap();
            assert_eq!(
                w.expand(10_000).unwrap(),
                again.expand(10_000).unwrap(),
                "{src} -> {shown}"
            );
        }
        let w = al.parse_word("(a b a^20 b)^81").unwrap();
        assert_eq!(w.display(&al).to_string(), "(a b a^20 b)^81");
    }

    #[test]
    fn expand_cap() {
        let w = ab().parse_word("a^1000").unwrap();
        assert!(w.expand(999).is_err());
        assert_eq!(w.expand(1000).unwrap().len(), 1000);
    }

    #[test]
    fn huge_lengths_are_counted_without_expansion() {
        let w = ab().parse_word("((a^1000000)^1000000)^1000000").unwrap();
        assert_eq!(w.len(), Some(1_000_000_000_000_000_000));
    }
}
