//! Text format for presentations.
//!
//! ```text
//! gens: a b
//! lambda: 1/6
//! a b a b^2 a b^3
//! (ab)^3 A B
//! ```
//!
//! Generator names are matched greedily (longest first). A single lowercase
//! letter name `x` also accepts `X` for its inverse; `^k` raises an atom or
//! a parenthesized group to an integer power. `#` starts a comment.

use super::{Letter, Presentation, Word};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, q};

struct Lexicon {
    /// (spelling, letter), longest spelling first.
    entries: Vec<(String, Letter)>,
}

impl Lexicon {
    fn new(alphabet: &[String]) -> Result<Lexicon> {
        let mut entries = Vec::new();
        for (g, name) in alphabet.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || "^()*#,".contains(c)) {
                return Err(Error::Parse(format!("bad generator name {name:?}")));
            }
            if alphabet[..g].contains(name) {
                return Err(Error::Parse(format!("duplicate generator {name}")));
            }
            entries.push((name.clone(), Letter::pos(g)));
        }
        for (g, name) in alphabet.iter().enumerate() {
            let mut cs = name.chars();
            if let (Some(c), None) = (cs.next(), cs.next()) {
                let up = c.to_ascii_uppercase().to_string();
                if c.is_ascii_lowercase() && !alphabet.contains(&up) {
                    entries.push((up, Letter::neg(g)));
                }
            }
        }
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
        Ok(Lexicon { entries })
    }

    fn inverse_spelling(&self, g: usize) -> Option<&str> {
        self.entries.iter().find(|(_, l)| *l == Letter::neg(g)).map(|(s, _)| s.as_str())
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
    lex: &'a Lexicon,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.s[self.pos..].chars().next() {
            if c.is_whitespace() || c == '*' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at column {} of {:?}", self.pos + 1, self.s))
    }

    fn sequence(&mut self, nested: bool) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None if nested => return Err(self.err("unclosed parenthesis")),
                None => return Ok(out),
                Some(')') if nested => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(')') => return Err(self.err("unmatched ')'")),
                _ => {}
            }
            let atom = self.atom()?;
            let k = self.power()?;
            let w = Word::new(atom).pow(k);
            out.extend_from_slice(w.letters());
        }
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        if self.peek() == Some('(') {
            self.pos += 1;
            return self.sequence(true);
        }
        let rest = &self.s[self.pos..];
        if rest.starts_with('1') && !self.lex.entries.iter().any(|(n, _)| rest.starts_with(n.as_str())) {
            self.pos += 1;
            return Ok(Vec::new());
        }
        for (name, l) in &self.lex.entries {
            if rest.starts_with(name.as_str()) {
                self.pos += name.len();
                return Ok(vec![*l]);
            }
        }
        Err(self.err("unknown generator"))
    }

    fn power(&mut self) -> Result<i64> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos].parse().map_err(|_| self.err("bad exponent"))
    }
}

/// Parses a word over `alphabet`; the result is freely reduced.
pub fn parse_word(s: &str, alphabet: &[String]) -> Result<Word> {
    let lex = Lexicon::new(alphabet)?;
    parse_with(s, &lex)
}

fn parse_with(s: &str, lex: &Lexicon) -> Result<Word> {
    let mut p = Parser { s, pos: 0, lex };
    Ok(Word::new(p.sequence(false)?))
}

/// Parses the presentation text format. `lambda:` defaults to 1/6.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut alphabet: Option<Vec<String>> = None;
    let mut lambda = q(1, 6);
    let mut lines = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("gens:") {
            if alphabet.is_some() {
                return Err(Error::Parse("repeated gens: line".into()));
            }
            alphabet = Some(rest.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(String::from).collect());
        } else if let Some(rest) = line.strip_prefix("lambda:") {
            lambda = parse_rational(rest.trim())?;
        } else {
            lines.push(line.to_string());
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::Parse("missing gens: line".into()))?;
    let lex = Lexicon::new(&alphabet)?;
    let relators = lines.iter().map(|l| parse_with(l, &lex)).collect::<Result<Vec<_>>>()?;
    Presentation::new(alphabet, relators, lambda)
}

/// Formats a word as space-separated tokens, collapsing runs into powers.
pub fn format_word(w: &Word, alphabet: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let lex = Lexicon::new(alphabet).ok();
    let mut tokens = Vec::new();
    let ls = w.letters();
    let mut i = 0;
    while i < ls.len() {
        let mut j = i;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        let (g, run) = (ls[i].generator(), j - i);
        let name = &alphabet[g];
        let tok = if !ls[i].is_inverse() {
            if run == 1 { name.clone() } else { format!("{name}^{run}") }
        } else if let Some(inv) = lex.as_ref().and_then(|l| l.inverse_spelling(g)) {
            if run == 1 { inv.to_string() } else { format!("{inv}^{run}") }
        } else {
            format!("{name}^-{run}")
        };
        tokens.push(tok);
        i = j;
    }
    tokens.join(" ")
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Presentation> {
        parse_presentation(text)
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        parse_word(s, self.alphabet())
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word(w, self.alphabet())
    }

    /// The presentation in the text format, one relator class per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("gens: {}\nlambda: {}\n", self.alphabet().join(" "), crate::rational::fmt_exact(self.lambda()));
        for c in self.classes() {
            s.push_str(&self.format_word(&c.word));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn word_syntax() {
        let w = parse_word("a b^2 A (ab)^-1", &ab()).unwrap();
        assert_eq!(format!("{w:?}"), "abbABA");
        assert_eq!(parse_word("aA", &ab()).unwrap(), Word::empty());
        assert_eq!(parse_word("1", &ab()).unwrap(), Word::empty());
        assert!(parse_word("ac", &ab()).is_err());
        assert!(parse_word("(ab", &ab()).is_err());
        assert!(parse_word("a^x", &ab()).is_err());
    }

    #[test]
    fn greedy_multichar_names() {
        let names: Vec<String> = vec!["x".into(), "x1".into(), "x10".into()];
        let w = parse_word("x10x1x x1^-2", &names).unwrap();
        let gens: Vec<usize> = w.letters().iter().map(|l| l.generator()).collect();
        assert_eq!(gens, vec![2, 1, 0, 1, 1]);
        assert_eq!(format_word(&w, &names), "x10 x1 x x1^-2");
        assert_eq!(parse_word(&format_word(&w, &names), &names).unwrap(), w);
    }

    #[test]
    fn format_round_trip() {
        for s in ["abAB", "a^5 B^3 a", "b", "ABab^7"] {
            let w = parse_word(s, &ab()).unwrap();
            assert_eq!(parse_word(&format_word(&w, &ab()), &ab()).unwrap(), w);
        }
        assert_eq!(format_word(&parse_word("aaaB", &ab()).unwrap(), &ab()), "a^3 B");
    }

    #[test]
    fn presentation_text() {
        let p = parse_presentation("# demo\ngens: a b\nlambda: 1/8\n\na b A B  # commutator\n").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(*p.lambda(), q(1, 8));
        let again = parse_presentation(&p.to_text()).unwrap();
        assert_eq!(again.relators(), p.relators());
        assert!(parse_presentation("lambda: 1/6\nab\n").is_err());
        assert!(matches!(parse_presentation("gens: a\naA\n"), Err(Error::EmptyRelator)));
    }
}
