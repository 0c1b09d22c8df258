//! Position-annotated s-expression reader.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(v, _) => Some(v),
            SExpr::Atom(..) => None,
        }
    }
}

fn symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '?' | ':' | '.' | '=')
}

/// Read exactly one top-level expression (plus trailing whitespace and
/// comments). Symbols are lower-cased.
pub fn read(text: &str) -> Result<SExpr, ParseError> {
    let mut stack: Vec<(Vec<SExpr>, Pos)> = Vec::new();
    let mut done: Option<SExpr> = None;
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let here = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == ';' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        if done.is_some() {
            return Err(ParseError::lexical(here, "trailing input after the top-level expression"));
        }
        match c {
            '(' => {
                chars.next();
                col += 1;
                stack.push((Vec::new(), here));
            }
            ')' => {
                chars.next();
                col += 1;
                let Some((items, start)) = stack.pop() else {
                    return Err(ParseError::lexical(here, "unbalanced ')'"));
                };
                let list = SExpr::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => done = Some(list),
                }
            }
            c if symbol_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !symbol_char(c) {
                        break;
                    }
                    s.push(c.to_ascii_lowercase());
                    chars.next();
                    col += 1;
                }
                let atom = SExpr::Atom(s, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => return Err(ParseError::lexical(here, "expected '(' at top level")),
                }
            }
            other => {
                return Err(ParseError::lexical(here, &alloc::format!("unexpected character {other:?}")));
            }
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(ParseError::lexical(*start, "unclosed '('"));
    }
    done.ok_or_else(|| ParseError::lexical(Pos { line, col }, &"empty input".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let e = read("; c\n(a (B c)\n  d)").unwrap();
        let items = e.as_list().unwrap();
        assert_eq!(items[0].as_atom(), Some("a"));
        assert_eq!(items[1].as_list().unwrap()[0].as_atom(), Some("b"));
        assert_eq!(items[2].pos(), Pos { line: 3, col: 3 });
    }

    #[test]
    fn reports_lexical_positions() {
        match read("(a\n  #)") {
            Err(ParseError::Lexical { line: 2, col: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(read("(a"), Err(ParseError::Lexical { .. })));
        assert!(matches!(read("(a))"), Err(ParseError::Lexical { .. })));
        assert!(matches!(read(""), Err(ParseError::Lexical { .. })));
    }
}
