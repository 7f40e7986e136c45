use std::path::Path;

use anyhow::{bail, Context, Result};

use snarkforge_core::families::HalinFragment;
use snarkforge_core::multipole::{named_graph, parse_graph6, parse_json};
use snarkforge_core::Graph;

/// A graph from `name:<key>`, a `.json` file, or a graph6 file (first
/// non-empty line).
pub fn load_graph(spec: &str) -> Result<Graph> {
    if let Some(key) = spec.strip_prefix("name:") {
        return Ok(named_graph(key)?);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {spec}"))?;
    let g = if path.extension().is_some_and(|e| e == "json") {
        parse_json(&text)?
    } else {
        let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
        parse_graph6(line)?
    };
    Ok(g)
}

pub fn parse_path(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad vertex {t:?} in path")))
        .collect()
}

/// Splits on commas that are not inside parentheses, so `block=gp(8,3)`
/// stays whole.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub fn parse_fragments(s: &str) -> Result<Vec<HalinFragment>> {
    split_top(s)
        .into_iter()
        .map(|t| match t.to_ascii_lowercase().as_str() {
            "petersen" | "ps" => Ok(HalinFragment::petersen()),
            "heawood" | "hw" => Ok(HalinFragment::petersen_with_block(&named_graph("heawood")?)?),
            other => match other.strip_prefix("block=") {
                Some(key) => Ok(HalinFragment::petersen_with_block(&named_graph(key)?)?),
                None => bail!("unknown fragment {t:?} (petersen, heawood or block=<graph>)"),
            },
        })
        .collect()
}
