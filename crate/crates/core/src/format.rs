//! Plain-text hypergraph files.
//!
//! ```text
//! r n m
//! v1 v2 ... vr          (m lines, unoriented)
//! tail | h1 ... h(r-1)  (m lines, oriented)
//! ```
//!
//! Writers emit canonical (sorted) vertex lists separated by single spaces
//! with a trailing newline, so `write(read(s)) == s` for any canonical file.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, OrientedHypergraph, Vertex};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Either flavour of hypergraph, as detected from the file body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyHypergraph {
    Unoriented(Hypergraph),
    Oriented(OrientedHypergraph),
}

impl AnyHypergraph {
    pub fn into_unoriented(self) -> Hypergraph {
        match self {
            AnyHypergraph::Unoriented(h) => h,
            AnyHypergraph::Oriented(o) => o.unoriented(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyHypergraph::Unoriented(h) => write_hypergraph(h),
            AnyHypergraph::Oriented(o) => write_oriented(o),
        }
    }
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut s = String::with_capacity(16 + h.m() * h.r() * 4);
    writeln!(s, "{} {} {}", h.r(), h.n(), h.m()).unwrap();
    for e in h.edges() {
        push_ids(&mut s, e);
        s.push('\n');
    }
    s
}

pub fn write_oriented(h: &OrientedHypergraph) -> String {
    let mut s = String::with_capacity(16 + h.m() * h.r() * 4);
    writeln!(s, "{} {} {}", h.r(), h.n(), h.m()).unwrap();
    for e in h.edges() {
        write!(s, "{} |", e.tail).unwrap();
        for v in e.heads {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    s
}

fn push_ids(s: &mut String, ids: &[Vertex]) {
    for (i, v) in ids.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{v}").unwrap();
    }
}

fn parse_ids(line_no: usize, text: &str) -> Result<Vec<Vertex>, FormatError> {
    text.split_ascii_whitespace()
        .map(|t| {
            t.parse::<Vertex>()
                .map_err(|_| syntax(line_no, format!("bad vertex id {t:?}")))
        })
        .collect()
}

struct Header {
    r: usize,
    n: usize,
    m: usize,
}

type NumberedLines<'a> = Vec<(usize, &'a str)>;

fn parse_header(text: &str) -> Result<(Header, NumberedLines<'_>), FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (no, head) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let fields: Vec<usize> = head
        .split_ascii_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(no, format!("bad header field {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [r, n, m] = fields[..] else {
        return Err(syntax(no, "header must be `r n m`"));
    };
    let body: Vec<_> = lines.collect();
    if body.len() != m {
        return Err(syntax(no, format!("header declares {m} edges, found {}", body.len())));
    }
    Ok((Header { r, n, m }, body))
}

pub fn read_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    match read_any(text)? {
        AnyHypergraph::Unoriented(h) => Ok(h),
        AnyHypergraph::Oriented(_) => Err(syntax(2, "expected an unoriented hypergraph")),
    }
}

pub fn read_oriented(text: &str) -> Result<OrientedHypergraph, FormatError> {
    match read_any(text)? {
        AnyHypergraph::Oriented(h) => Ok(h),
        AnyHypergraph::Unoriented(h) if h.m() == 0 => Ok(OrientedHypergraph::empty(h.n(), h.r())?),
        AnyHypergraph::Unoriented(_) => Err(syntax(2, "expected an oriented hypergraph")),
    }
}

/// Reads either flavour; a `|` on the first edge line marks an oriented file.
pub fn read_any(text: &str) -> Result<AnyHypergraph, FormatError> {
    let (header, body) = parse_header(text)?;
    let oriented = body.first().is_some_and(|(_, l)| l.contains('|'));
    if oriented {
        let mut edges = Vec::with_capacity(header.m);
        for (no, line) in body {
            let (tail, heads) = line
                .split_once('|')
                .ok_or_else(|| syntax(no, "oriented edge needs `tail | heads`"))?;
            let tail = parse_ids(no, tail)?;
            let [tail] = tail[..] else {
                return Err(syntax(no, "exactly one tail expected"));
            };
            edges.push((tail, parse_ids(no, heads)?));
        }
        Ok(AnyHypergraph::Oriented(OrientedHypergraph::from_edges(
            header.n, header.r, edges,
        )?))
    } else {
        let mut edges = Vec::with_capacity(header.m);
        for (no, line) in body {
            if line.contains('|') {
                return Err(syntax(no, "mixed oriented and unoriented edges"));
            }
            edges.push(parse_ids(no, line)?);
        }
        Ok(AnyHypergraph::Unoriented(Hypergraph::from_edges(
            header.n, header.r, edges,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_text_roundtrip() {
        let text = "3 6 2\n0 1 2\n3 4 5\n";
        let h = read_hypergraph(text).unwrap();
        assert_eq!(write_hypergraph(&h), text);

        let otext = "3 5 2\n4 | 0 1\n0 | 2 3\n";
        let o = read_oriented(otext).unwrap();
        assert_eq!(o.edge(0).tail, 4);
        assert_eq!(write_oriented(&o), otext);
    }

    #[test]
    fn empty_and_errors() {
        let h = read_hypergraph("3 4 0\n").unwrap();
        assert_eq!(h.m(), 0);
        assert_eq!(write_hypergraph(&h), "3 4 0\n");
        assert!(read_hypergraph("3 4 1\n").is_err());
        assert!(read_hypergraph("3 4 1\n0 1 x\n").is_err());
        assert!(read_hypergraph("3 4 1\n0 1 4\n").is_err());
        assert!(read_hypergraph("3 4\n").is_err());
        assert!(read_oriented("3 4 1\n0 1 | 2\n").is_err());
    }

    proptest! {
        #[test]
        fn written_files_reparse_identically(
            n in 3usize..10,
            picks in proptest::collection::vec((any::<u32>(), any::<u32>(), any::<u32>()), 0..10),
        ) {
            let edges: Vec<Vec<Vertex>> = picks.iter().filter_map(|&(a, b, c)| {
                let mut v = vec![a % n as u32, b % n as u32, c % n as u32];
                v.sort_unstable();
                v.dedup();
                (v.len() == 3).then_some(v)
            }).collect();
            let h = Hypergraph::from_edges(n, 3, edges).unwrap();
            let text = write_hypergraph(&h);
            let back = read_hypergraph(&text).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(write_hypergraph(&back), text);
        }
    }
}
