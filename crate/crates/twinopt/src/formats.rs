//! Plain-text instance formats.
//!
//! Every format is line based; blank lines and lines starting with `#` are
//! ignored except for the `# key value...` headers listed per format.
//!
//! * graph: optional `# nodes N directed|undirected`, then `u v [w]` (w defaults to 1)
//! * partition: optional `# parts H`, then `element part` for every element
//! * RR-sets: optional `# nodes N` and `# seed S`, then one set of node ids per line
//! * costs: `node cost` for every node

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use twinopt_core::objectives::{Edge, RRSetCollection, WeightedGraph};

use crate::error::{CliError, CliResult};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads input files and remembers their content hashes for manifests.
#[derive(Debug, Default, Clone)]
pub struct InputFiles {
    hashes: BTreeMap<String, String>,
}

impl InputFiles {
    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.hashes
            .insert(path.display().to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    pub fn hashes(&self) -> &BTreeMap<String, String> {
        &self.hashes
    }
}

/// Writes `contents` to `path` and returns its SHA-256.
pub fn write_file(path: &Path, contents: &str) -> CliResult<String> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(contents.as_bytes()))
}

fn format_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Format {
        path: PathBuf::from(path),
        line,
        message: message.into(),
    }
}

/// `# key rest` headers by key, with their 1-based line numbers.
type Headers = BTreeMap<String, (usize, String)>;

/// Non-comment lines with their 1-based numbers, plus the headers.
fn lines(text: &str) -> (Vec<(usize, &str)>, Headers) {
    let mut body = Vec::new();
    let mut headers = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let mut words = rest.split_whitespace();
            if let Some(key) = words.next() {
                let value = words.collect::<Vec<_>>().join(" ");
                headers.insert(key.to_string(), (i + 1, value));
            }
        } else if !line.is_empty() {
            body.push((i + 1, line));
        }
    }
    (body, headers)
}

fn parse_num<T: std::str::FromStr>(
    path: &Path,
    line: usize,
    word: &str,
    what: &str,
) -> CliResult<T> {
    word.parse()
        .map_err(|_| format_error(path, line, format!("invalid {what} {word:?}")))
}

pub fn parse_graph(text: &str, path: &Path) -> CliResult<WeightedGraph> {
    let (body, headers) = lines(text);
    let mut edges = Vec::with_capacity(body.len());
    for (no, line) in body {
        let words: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&words.len()) {
            return Err(format_error(path, no, "expected `u v [w]`"));
        }
        let u = parse_num(path, no, words[0], "node")?;
        let v = parse_num(path, no, words[1], "node")?;
        let w = match words.get(2) {
            Some(word) => parse_num(path, no, word, "weight")?,
            None => 1.0,
        };
        edges.push(Edge { u, v, w });
    }
    let (n, directed) = match headers.get("nodes") {
        Some((no, value)) => {
            let words: Vec<&str> = value.split_whitespace().collect();
            let n = parse_num(
                path,
                *no,
                words.first().copied().unwrap_or(""),
                "node count",
            )?;
            let directed = match words.get(1).copied() {
                None | Some("undirected") => false,
                Some("directed") => true,
                Some(other) => {
                    return Err(format_error(
                        path,
                        *no,
                        format!("unknown graph kind {other:?}"),
                    ))
                }
            };
            (n, directed)
        }
        None => (
            edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0),
            false,
        ),
    };
    WeightedGraph::new(n, directed, edges).map_err(|e| format_error(path, 0, e.to_string()))
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let kind = if g.is_directed() {
        "directed"
    } else {
        "undirected"
    };
    let mut out = format!("# nodes {} {kind}\n", g.n_nodes());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}

/// Returns `(part_of, parts)`.
pub fn parse_partition(text: &str, path: &Path) -> CliResult<(Vec<usize>, usize)> {
    let (body, headers) = lines(text);
    let mut part_of = vec![None; body.len()];
    for (no, line) in body {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != 2 {
            return Err(format_error(path, no, "expected `element part`"));
        }
        let e: usize = parse_num(path, no, words[0], "element")?;
        let part: usize = parse_num(path, no, words[1], "part")?;
        match part_of.get_mut(e) {
            Some(slot @ None) => *slot = Some(part),
            Some(Some(_)) => {
                return Err(format_error(path, no, format!("element {e} listed twice")))
            }
            None => {
                return Err(format_error(
                    path,
                    no,
                    format!("element {e} out of range: ids must be 0..{}", part_of.len()),
                ))
            }
        }
    }
    let part_of: Vec<usize> = part_of
        .into_iter()
        .map(|p| p.expect("every slot filled"))
        .collect();
    let used = part_of.iter().map(|p| p + 1).max().unwrap_or(0);
    let parts = match headers.get("parts") {
        Some((no, value)) => {
            let parts = parse_num(path, *no, value, "part count")?;
            if parts < used {
                return Err(format_error(
                    path,
                    *no,
                    format!("{used} parts used, header says {parts}"),
                ));
            }
            parts
        }
        None => used,
    };
    Ok((part_of, parts))
}

pub fn write_partition(part_of: &[usize], parts: usize) -> String {
    let mut out = format!("# parts {parts}\n");
    for (e, p) in part_of.iter().enumerate() {
        let _ = writeln!(out, "{e} {p}");
    }
    out
}

pub fn parse_rrsets(text: &str, path: &Path) -> CliResult<RRSetCollection> {
    let (body, headers) = lines(text);
    let mut sets = Vec::with_capacity(body.len());
    for (no, line) in body {
        let set = line
            .split_whitespace()
            .map(|w| parse_num(path, no, w, "node"))
            .collect::<CliResult<Vec<usize>>>()?;
        sets.push(set);
    }
    let n = match headers.get("nodes") {
        Some((no, value)) => parse_num(path, *no, value, "node count")?,
        None => sets.iter().flatten().map(|v| v + 1).max().unwrap_or(0),
    };
    let seed = match headers.get("seed") {
        Some((no, value)) => Some(parse_num(path, *no, value, "seed")?),
        None => None,
    };
    RRSetCollection::new(n, sets, seed).map_err(|e| format_error(path, 0, e.to_string()))
}

pub fn write_rrsets(z: &RRSetCollection) -> String {
    let mut out = format!("# nodes {}\n", z.n_nodes());
    if let Some(seed) = z.seed() {
        let _ = writeln!(out, "# seed {seed}");
    }
    for set in z.sets() {
        let words: Vec<String> = set.iter().map(usize::to_string).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_costs(text: &str, path: &Path) -> CliResult<Vec<f64>> {
    let (body, _) = lines(text);
    let mut costs = vec![None; body.len()];
    for (no, line) in body {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != 2 {
            return Err(format_error(path, no, "expected `node cost`"));
        }
        let u: usize = parse_num(path, no, words[0], "node")?;
        let c: f64 = parse_num(path, no, words[1], "cost")?;
        match costs.get_mut(u) {
            Some(slot @ None) => *slot = Some(c),
            _ => {
                return Err(format_error(
                    path,
                    no,
                    format!("node {u} repeated or out of range"),
                ))
            }
        }
    }
    Ok(costs
        .into_iter()
        .map(|c| c.expect("every slot filled"))
        .collect())
}

pub fn write_costs(costs: &[f64]) -> String {
    let mut out = String::new();
    for (u, c) in costs.iter().enumerate() {
        let _ = writeln!(out, "{u} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn graph_round_trip() {
        let g = WeightedGraph::directed(4, vec![(0, 1, 0.5), (2, 3, 1.25)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text, p()).unwrap(), g);
        let bare = parse_graph("0 1\n# comment\n1 2 3.5\n", p()).unwrap();
        assert_eq!(bare.n_nodes(), 3);
        assert!(!bare.is_directed());
        assert_eq!(bare.edges()[0].w, 1.0);
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        match parse_graph("0 1 1\n0 x 1\n", p()) {
            Err(CliError::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_graph("# nodes 2\n0 5 1\n", p()).is_err());
    }

    #[test]
    fn partition_round_trip() {
        let text = write_partition(&[1, 0, 1], 3);
        assert_eq!(parse_partition(&text, p()).unwrap(), (vec![1, 0, 1], 3));
        assert!(parse_partition("0 0\n0 1\n", p()).is_err());
        assert!(parse_partition("0 0\n2 1\n", p()).is_err());
    }

    #[test]
    fn rrsets_round_trip() {
        let z = RRSetCollection::new(5, vec![vec![3, 1], vec![4]], Some(9)).unwrap();
        let back = parse_rrsets(&write_rrsets(&z), p()).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn costs_round_trip() {
        let c = vec![0.2, 0.5, 0.125];
        assert_eq!(parse_costs(&write_costs(&c), p()).unwrap(), c);
        assert!(parse_costs("0 1\n0 2\n", p()).is_err());
    }
}
