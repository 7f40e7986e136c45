//! graph6, DOT and adjacency-list JSON.

use std::fmt::Write as _;

use super::{End, Graph, Multipole};
use crate::error::{Error, Result};

fn encode_size(n: usize, out: &mut String) {
    let push6 = |out: &mut String, x: usize| out.push((63 + (x & 63) as u8) as char);
    if n <= 62 {
        push6(out, n);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            push6(out, n >> shift);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            push6(out, n >> shift);
        }
    }
}

/// graph6 string (no header, no newline). Only simple graphs are encodable.
pub fn emit_graph6(g: &Graph) -> Result<String> {
    if !g.is_simple() {
        return Err(Error::MalformedInput("graph6 cannot encode loops or parallel edges".into()));
    }
    let n = g.n();
    let mut adj = vec![false; n * n];
    for &(a, b) in g.edges() {
        adj[a * n + b] = true;
        adj[b * n + a] = true;
    }
    let mut out = String::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
            nbits += 1;
            if nbits == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(((acc << (6 - nbits)) + 63) as char);
    }
    Ok(out)
}

/// Parses one graph6 line; an optional `>>graph6<<` header is skipped.
/// Edges come out sorted by `(j, i)` with `i < j`, matching the bit order.
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bad = |why: &str| Error::MalformedInput(format!("graph6: {why}"));
    if s.is_empty() {
        return Err(bad("empty input"));
    }
    let bytes: Vec<u8> = s.bytes().collect();
    if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(bad(&format!("byte {b} out of range")));
    }
    let vals: Vec<usize> = bytes.iter().map(|&b| (b - 63) as usize).collect();
    let (n, rest) = if vals[0] < 63 {
        (vals[0], &vals[1..])
    } else if vals.len() >= 4 && vals[1] < 63 {
        (vals[1] << 12 | vals[2] << 6 | vals[3], &vals[4..])
    } else if vals.len() >= 8 && vals[1] == 63 {
        (vals[2..8].iter().fold(0, |acc, &v| acc << 6 | v), &vals[8..])
    } else {
        return Err(bad("truncated size"));
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(bad(&format!("expected {} data bytes for {n} vertices, got {}", nbits.div_ceil(6), rest.len())));
    }
    let bit = |k: usize| (rest[k / 6] >> (5 - k % 6)) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::new(n, edges)
}

pub fn emit_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

/// DOT drawing of a multipole; semiedges become small labelled nodes named
/// after their connector (`I`, `O`, `C2`, …) or `R` for residual ones.
pub fn multipole_dot(m: &Multipole) -> String {
    let mut out = String::from("graph M {\n");
    for v in 0..m.n() {
        let _ = writeln!(out, "  {v};");
    }
    let mut label = std::collections::HashMap::new();
    for (c, conn) in m.connectors().iter().enumerate() {
        let name = match (m.connectors().len(), c) {
            (2, 0) => "I".to_string(),
            (2, 1) => "O".to_string(),
            _ => format!("C{c}"),
        };
        for (i, s) in conn.iter().enumerate() {
            label.insert(*s, format!("{name}{i}"));
        }
    }
    for (i, s) in m.residual().iter().enumerate() {
        label.insert(*s, format!("R{i}"));
    }
    for (e, ends) in m.edges().iter().enumerate() {
        let names: Vec<String> = ends
            .iter()
            .enumerate()
            .map(|(side, end)| match end {
                End::Vertex(v) => v.to_string(),
                End::Free => {
                    let l = &label[&super::Semiedge { edge: e, side }];
                    let _ = writeln!(out, "  \"{l}\" [shape=point, xlabel=\"{l}\"];");
                    format!("\"{l}\"")
                }
            })
            .collect();
        let _ = writeln!(out, "  {} -- {};", names[0], names[1]);
    }
    out.push_str("}\n");
    out
}

/// `{"n":…,"edges":[[a,b],…]}`
pub fn emit_json(g: &Graph) -> String {
    serde_json::to_string(g).expect("graphs always serialise")
}

pub fn parse_json(s: &str) -> Result<Graph> {
    #[derive(serde::Deserialize)]
    struct Raw {
        n: usize,
        edges: Vec<(usize, usize)>,
    }
    let raw: Raw = serde_json::from_str(s).map_err(|e| Error::MalformedInput(format!("json: {e}")))?;
    Graph::new(raw.n, raw.edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{heawood, k4, petersen};

    #[test]
    fn k4_is_c_tilde() {
        assert_eq!(emit_graph6(&k4()).unwrap(), "C~");
    }

    #[test]
    fn roundtrip() {
        for g in [petersen(), heawood(), k4()] {
            let s = emit_graph6(&g).unwrap();
            let h = parse_graph6(&s).unwrap();
            assert!(h.same_labelled(&g));
        }
        let p = parse_graph6(&emit_graph6(&petersen()).unwrap()).unwrap();
        assert_eq!((p.n(), p.edge_count()), (10, 15));
    }

    #[test]
    fn large_size_prefix() {
        let n = 70;
        let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap();
        let s = emit_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        assert!(parse_graph6(&s).unwrap().same_labelled(&g));
    }

    #[test]
    fn malformed() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("C\u{1}").is_err());
        let multi = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(emit_graph6(&multi).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let s = emit_json(&k4());
        assert!(s.starts_with("{\"n\":4,\"edges\":[[0,1]"));
        assert_eq!(parse_json(&s).unwrap(), k4());
        assert!(parse_json("{\"n\":2,\"edges\":[[0,5]]}").is_err());
    }

    #[test]
    fn dot_output() {
        let d = emit_dot(&k4());
        assert!(d.contains("0 -- 1;"));
        let m = Multipole::remove_path(&petersen(), &[0, 1]).unwrap();
        let md = multipole_dot(&m);
        assert!(md.contains("\"I0\"") && md.contains("\"O1\""));
    }
}
