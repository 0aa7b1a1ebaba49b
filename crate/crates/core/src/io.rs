//! Arc-list text format and small argument parsers.
//!
//! The format is a header line `n m` followed by `m` lines `u v` with
//! 0-based ids. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub fn write_arc_list(d: &Digraph) -> String {
    let mut s = String::with_capacity(16 + d.arc_count() * 10);
    let _ = writeln!(s, "{} {}", d.n(), d.arc_count());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{what} {tok:?} is not a non-negative integer"),
    })
}

/// Parses the arc-list format, rejecting loops, duplicate arcs,
/// out-of-range ids and a wrong arc count.
pub fn read_arc_list(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header \"n m\"".into(),
    })?;
    let mut it = header.split_whitespace();
    let n = parse_usize(it.next(), hl, "vertex count")?;
    let m = parse_usize(it.next(), hl, "arc count")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: hl,
            msg: "header has extra fields".into(),
        });
    }
    let mut d = Digraph::new(n);
    let mut seen = 0;
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        let u = parse_usize(it.next(), ln, "tail")?;
        let v = parse_usize(it.next(), ln, "head")?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: ln,
                msg: "arc line has extra fields".into(),
            });
        }
        d.try_add_arc(u, v).map_err(|e| Error::Parse {
            line: ln,
            msg: e.to_string(),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hl,
            msg: format!("header announces {m} arcs, found {seen}"),
        });
    }
    Ok(d)
}

pub fn read_arc_list_file(path: impl AsRef<FsPath>) -> Result<Digraph> {
    read_arc_list(&std::fs::read_to_string(path)?)
}

pub fn write_arc_list_file(d: &Digraph, path: impl AsRef<FsPath>) -> Result<()> {
    std::fs::write(path, write_arc_list(d))?;
    Ok(())
}

/// Parses `"x1:y1,x2:y2,..."`.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("pair {t:?} is not of the form x:y")))?;
            let p = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad vertex id {x:?}")))
            };
            Ok((p(a)?, p(b)?))
        })
        .collect()
}

/// Parses `"a,b,c"`.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad vertex id {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_tournament;

    #[test]
    fn round_trip() {
        let d = random_tournament(17, 3);
        assert_eq!(read_arc_list(&write_arc_list(&d)).unwrap(), d);
        let e = read_arc_list("# comment\n3 0\n\n").unwrap();
        assert_eq!(e.n(), 3);
        assert_eq!(e.arc_count(), 0);
    }

    #[test]
    fn rejects_malformed() {
        for (text, line) in [
            ("", 1),
            ("2 1\n0 0\n", 2),
            ("2 2\n0 1\n0 1\n", 3),
            ("2 1\n0 2\n", 2),
            ("2 2\n0 1\n", 1),
            ("2 1\n0 x\n", 2),
            ("2 1 5\n0 1\n", 1),
        ] {
            match read_arc_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_pairs("0:5, 2:7").unwrap(), vec![(0, 5), (2, 7)]);
        assert!(parse_pairs("0-5").is_err());
        assert_eq!(parse_list("1,2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_list("1,a").is_err());
    }
}
