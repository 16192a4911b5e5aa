//! PACE-style text formats. External ids are 1-based, internal ids 0-based.
//!
//! Graph:        `c ...` comments, `p st <n> <m>`, then `e <u> <v>` lines.
//! Orientation:  `a <tail> <head>` lines, one per edge, any order.
//! Decomposition: `s td <bags> <max_bag_size> <n>`, `b <id> <v>...`, `<b1> <b2>`.

use std::fmt::Write as _;

use crate::error::FormatError;
use crate::graph::{Orientation, UndirectedGraph, VertexId};
use crate::treedecomp::TreeDecomposition;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn parse_num(tok: &str, line: usize) -> Result<i64, FormatError> {
    tok.parse::<i64>().map_err(|_| FormatError::MalformedLine {
        line,
        msg: format!("expected an integer, got `{tok}`"),
    })
}

fn parse_vertex(tok: &str, line: usize, n: usize) -> Result<VertexId, FormatError> {
    let id = parse_num(tok, line)?;
    if id < 1 || id as usize > n {
        return Err(FormatError::VertexOutOfRange { line, id, n });
    }
    Ok(id as usize - 1)
}

pub fn parse_graph(text: &str) -> Result<UndirectedGraph, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    if header.len() != 4 || header[0] != "p" || header[1] != "st" {
        return Err(FormatError::MalformedHeader {
            line: hline,
            msg: "expected `p st <n> <m>`".into(),
        });
    }
    let count = |tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| FormatError::MalformedHeader {
                line: hline,
                msg: format!("bad count `{tok}`"),
            })
    };
    let n = count(header[2])?;
    let m = count(header[3])?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashMap::new();
    for (line, toks) in lines {
        if toks[0] != "e" || toks.len() != 3 {
            return Err(FormatError::MalformedLine {
                line,
                msg: "expected `e <u> <v>`".into(),
            });
        }
        let u = parse_vertex(toks[1], line, n)?;
        let v = parse_vertex(toks[2], line, n)?;
        if u == v {
            return Err(FormatError::SelfLoop { line, id: u + 1 });
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key, line).is_some() {
            return Err(FormatError::DuplicateEdge {
                line,
                u: u + 1,
                v: v + 1,
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(FormatError::CountMismatch {
            what: "edges",
            expected: m,
            found: edges.len(),
        });
    }
    Ok(UndirectedGraph::new(n, edges)?)
}

/// Canonical form: header, then edges `u < v` in lexicographic order.
pub fn serialize_graph(g: &UndirectedGraph) -> String {
    let mut out = format!("p st {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Reads `c s <id>` / `c t <id>` designation comments, if present.
pub fn parse_designated_terminals(text: &str) -> (Option<VertexId>, Option<VertexId>) {
    let mut s = None;
    let mut t = None;
    for line in text.lines() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if let ["c", which, id] = toks.as_slice() {
            if let Ok(id) = id.parse::<usize>() {
                match *which {
                    "s" if id >= 1 => s = Some(id - 1),
                    "t" if id >= 1 => t = Some(id - 1),
                    _ => {}
                }
            }
        }
    }
    (s, t)
}

pub fn parse_orientation(text: &str, g: &UndirectedGraph) -> Result<Orientation, FormatError> {
    let n = g.vertex_count();
    let mut arcs = Vec::new();
    for (line, toks) in content_lines(text) {
        if toks[0] != "a" || toks.len() != 3 {
            return Err(FormatError::MalformedLine {
                line,
                msg: "expected `a <tail> <head>`".into(),
            });
        }
        arcs.push((
            parse_vertex(toks[1], line, n)?,
            parse_vertex(toks[2], line, n)?,
        ));
    }
    Ok(Orientation::from_arcs(g, arcs)?)
}

/// One `a <tail> <head>` line per edge, in canonical edge order.
pub fn serialize_orientation(g: &UndirectedGraph, o: &Orientation) -> String {
    let mut out = String::new();
    for (u, v) in o.arcs(g) {
        writeln!(out, "a {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn parse_td(text: &str, n_expected: Option<usize>) -> Result<TreeDecomposition, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    if header.len() != 5 || header[0] != "s" || header[1] != "td" {
        return Err(FormatError::MalformedHeader {
            line: hline,
            msg: "expected `s td <bags> <max_bag_size> <n>`".into(),
        });
    }
    let count = |tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| FormatError::MalformedHeader {
                line: hline,
                msg: format!("bad count `{tok}`"),
            })
    };
    let nb = count(header[2])?;
    let max_bag = count(header[3])?;
    let n = count(header[4])?;
    if let Some(expected) = n_expected {
        if expected != n {
            return Err(FormatError::CountMismatch {
                what: "vertices in decomposition header",
                expected,
                found: n,
            });
        }
    }
    let mut bags: Vec<Option<Vec<VertexId>>> = vec![None; nb];
    let mut tree_edges = Vec::new();
    let bag_id = |tok: &str, line: usize| -> Result<usize, FormatError> {
        let id = parse_num(tok, line)?;
        if id < 1 || id as usize > nb {
            return Err(FormatError::BagOutOfRange {
                line,
                id,
                count: nb,
            });
        }
        Ok(id as usize - 1)
    };
    for (line, toks) in lines {
        if toks[0] == "b" {
            if toks.len() < 2 {
                return Err(FormatError::MalformedLine {
                    line,
                    msg: "bag line without id".into(),
                });
            }
            let id = bag_id(toks[1], line)?;
            if bags[id].is_some() {
                return Err(FormatError::MalformedLine {
                    line,
                    msg: format!("bag {} defined twice", id + 1),
                });
            }
            let mut bag = toks[2..]
                .iter()
                .map(|t| parse_vertex(t, line, n))
                .collect::<Result<Vec<_>, _>>()?;
            bag.sort_unstable();
            bag.dedup();
            bags[id] = Some(bag);
        } else if toks.len() == 2 {
            tree_edges.push((bag_id(toks[0], line)?, bag_id(toks[1], line)?));
        } else {
            return Err(FormatError::MalformedLine {
                line,
                msg: "expected a bag line or a tree edge `<b1> <b2>`".into(),
            });
        }
    }
    let defined = bags.iter().filter(|b| b.is_some()).count();
    if defined != nb {
        return Err(FormatError::CountMismatch {
            what: "bags",
            expected: nb,
            found: defined,
        });
    }
    let bags: Vec<Vec<VertexId>> = bags.into_iter().map(Option::unwrap).collect();
    let actual_max = bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual_max > max_bag {
        return Err(FormatError::CountMismatch {
            what: "max bag size",
            expected: max_bag,
            found: actual_max,
        });
    }
    Ok(TreeDecomposition::new(n, bags, tree_edges))
}

pub fn serialize_td(td: &TreeDecomposition) -> String {
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!(
        "s td {} {} {}\n",
        td.bags().len(),
        max_bag,
        td.vertex_count()
    );
    for (i, bag) in td.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p3() {
        let g = parse_graph("c path\np st 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn canonical_round_trip() {
        let text = "p st 4 3\ne 4 1\ne 3 2\ne 2 1\n";
        let g = parse_graph(text).unwrap();
        let canon = serialize_graph(&g);
        assert_eq!(canon, "p st 4 3\ne 1 2\ne 1 4\ne 2 3\n");
        assert_eq!(serialize_graph(&parse_graph(&canon).unwrap()), canon);
    }

    #[test]
    fn distinct_diagnostics() {
        assert!(matches!(
            parse_graph("p st 2 1\ne 1 1\n"),
            Err(FormatError::SelfLoop { line: 2, id: 1 })
        ));
        assert!(matches!(
            parse_graph("p sp 2 1\ne 1 2\n"),
            Err(FormatError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_graph("p st 2 1\ne 1 3\n"),
            Err(FormatError::VertexOutOfRange { id: 3, .. })
        ));
        assert!(matches!(
            parse_graph("p st 2 2\ne 1 2\ne 2 1\n"),
            Err(FormatError::DuplicateEdge { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("c only\n"),
            Err(FormatError::MissingHeader)
        ));
        assert!(matches!(
            parse_graph("p st 3 2\ne 1 2\n"),
            Err(FormatError::CountMismatch { .. })
        ));
    }

    #[test]
    fn orientation_round_trip() {
        let g = parse_graph("p st 3 2\ne 1 2\ne 2 3\n").unwrap();
        let o = parse_orientation("a 3 2\na 1 2\n", &g).unwrap();
        let text = serialize_orientation(&g, &o);
        assert_eq!(text, "a 1 2\na 3 2\n");
        assert!(parse_orientation("a 1 2\n", &g).is_err());
        assert!(parse_orientation("a 1 3\na 1 2\na 2 3\n", &g).is_err());
    }

    #[test]
    fn designated_terminals() {
        let (s, t) = parse_designated_terminals("c s 3\nc t 1\np st 3 0\n");
        assert_eq!((s, t), (Some(2), Some(0)));
    }

    #[test]
    fn td_round_trip() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = parse_td(text, Some(3)).unwrap();
        assert_eq!(td.bags(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(serialize_td(&td), text);
        assert!(parse_td("s td 1 1 3\nb 1 1 2\n", None).is_err());
        assert!(parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 3\n", None).is_err());
    }
}
