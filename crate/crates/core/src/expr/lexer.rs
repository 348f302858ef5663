use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Union,
    Inter,
    Plus,
    Minus,
    Star,
    Diamond,
    Tilde,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Union => "`\\/`".into(),
            Tok::Inter => "`/\\`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// Token plus the byte offset where it starts.
pub(crate) type Spanned = (usize, Tok);

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = bytes.get(i + 1).copied();
        let tok = match (c, two) {
            (b'\\', Some(b'/')) => {
                i += 2;
                Tok::Union
            }
            (b'/', Some(b'\\')) => {
                i += 2;
                Tok::Inter
            }
            (b'<', Some(b'>')) => {
                i += 2;
                Tok::Diamond
            }
            (b'+', _) => single(&mut i, Tok::Plus),
            (b'-', _) => single(&mut i, Tok::Minus),
            (b'*', _) => single(&mut i, Tok::Star),
            (b'~', _) => single(&mut i, Tok::Tilde),
            (b'(', _) => single(&mut i, Tok::LParen),
            (b')', _) => single(&mut i, Tok::RParen),
            (c, _) if c.is_ascii_digit() || c == b'.' => {
                i = scan_number(bytes, i);
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    expected: "a number".into(),
                    found: format!("`{text}`"),
                })?;
                Tok::Num(v)
            }
            (c, _) if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    expected: "an operator, operand or parenthesis".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

fn single(i: &mut usize, t: Tok) -> Tok {
    *i += 1;
    t
}

/// digits [. digits] [(e|E) [+|-] digits]
fn scan_number(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_offsets() {
        let toks = tokenize("f \\/ g /\\ 2.5e-1<>h~").unwrap();
        let kinds: Vec<_> = toks.iter().map(|(_, t)| t.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("f".into()),
                Tok::Union,
                Tok::Ident("g".into()),
                Tok::Inter,
                Tok::Num(0.25),
                Tok::Diamond,
                Tok::Ident("h".into()),
                Tok::Tilde,
                Tok::Eof
            ]
        );
        assert_eq!(toks[1].0, 2);
        assert_eq!(toks[4].0, 10);
    }

    #[test]
    fn stray_character() {
        match tokenize("f $ g").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 2),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn lone_dot_is_rejected() {
        assert!(tokenize(".").is_err());
    }
}
