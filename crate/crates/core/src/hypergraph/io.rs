//! Text format.
//!
//! ```text
//! HGR <r> <p> <n_1> ... <n_p>
//! <v_1> <v_2> ... <v_r>
//! ...
//! ```
//!
//! One edge per line, strictly increasing ids, lines in lexicographic order
//! of the id sequences, `\n` line endings and no trailing whitespace.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{Hypergraph, HypergraphError, Vertex};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: HypergraphError,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<u64>, ParseError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| syntax(line_no, format!("expected a non-negative integer, got {tok:?}")))
        })
        .collect()
}

impl Hypergraph {
    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("HGR") {
            return Err(syntax(1, "header must start with HGR"));
        }
        let rest: Vec<&str> = tokens.collect();
        let nums = parse_numbers(1, &rest.join(" "))?;
        if nums.len() < 2 {
            return Err(syntax(1, "header needs r and p"));
        }
        let r = nums[0] as usize;
        let p = nums[1] as usize;
        if nums.len() != 2 + p {
            return Err(syntax(
                1,
                format!("header declares {p} parts but lists {}", nums.len() - 2),
            ));
        }
        let part_sizes: Vec<usize> = nums[2..].iter().map(|&n| n as usize).collect();
        let shell =
            Hypergraph::empty(r, part_sizes.clone()).map_err(|source| ParseError::Invalid { line: 1, source })?;

        let mut edges: Vec<(usize, Vec<Vertex>)> = Vec::new();
        for (line_no, line) in lines {
            if line.trim().is_empty() {
                return Err(syntax(line_no, "blank line"));
            }
            let ids = parse_numbers(line_no, line)?;
            if ids.len() != r {
                return Err(ParseError::Invalid {
                    line: line_no,
                    source: HypergraphError::WrongArity {
                        edge: ids.iter().map(|&v| v as Vertex).collect(),
                        got: ids.len(),
                        expected: r,
                    },
                });
            }
            if ids.windows(2).any(|w| w[0] >= w[1]) {
                return Err(syntax(line_no, "edge ids must be strictly increasing"));
            }
            if let Some(&v) = ids.iter().find(|&&v| v >= shell.order() as u64) {
                return Err(ParseError::Invalid {
                    line: line_no,
                    source: HypergraphError::VertexOutOfRange {
                        vertex: v.min(Vertex::MAX as u64) as Vertex,
                        order: shell.order(),
                    },
                });
            }
            edges.push((line_no, ids.into_iter().map(|v| v as Vertex).collect()));
        }
        // validate edge-by-edge first so errors point at a line
        for (line_no, e) in &edges {
            Hypergraph::new(r, part_sizes.clone(), [e]).map_err(|source| ParseError::Invalid {
                line: *line_no,
                source,
            })?;
        }
        let mut sorted = edges.clone();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));
        if let Some(w) = sorted.windows(2).find(|w| w[0].1 == w[1].1) {
            return Err(ParseError::Invalid {
                line: w[0].0.max(w[1].0),
                source: HypergraphError::DuplicateEdge(w[0].1.clone()),
            });
        }
        Hypergraph::new(r, part_sizes, edges.into_iter().map(|(_, e)| e))
            .map_err(|source| ParseError::Invalid { line: 1, source })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write!(out, "HGR {} {}", self.r, self.part_sizes.len()).unwrap();
        for n in &self.part_sizes {
            write!(out, " {n}").unwrap();
        }
        out.push('\n');
        for e in &self.edges {
            let line = e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_single_edge() {
        let g = Hypergraph::from_text("HGR 3 3 2 2 2\n0 2 4\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.part_sizes(), &[2, 2, 2]);
    }

    #[test]
    fn canonical_text_round_trips_byte_for_byte() {
        let text = "HGR 3 1 7\n0 1 2\n0 1 3\n0 2 10\n";
        // 10 is out of range for 7 vertices
        assert!(Hypergraph::from_text(text).is_err());
        let text = "HGR 3 1 12\n0 1 2\n0 1 3\n0 2 10\n1 5 6\n";
        let g = Hypergraph::from_text(text).unwrap();
        assert_eq!(g.to_text(), text);
    }

    #[test]
    fn malformed_arity_reports_line() {
        let err = Hypergraph::from_text("HGR 3 3 2 2 2\n0 2 4\n0 2\n").unwrap_err();
        match err {
            ParseError::Invalid { line, source } => {
                assert_eq!(line, 3);
                assert!(matches!(source, HypergraphError::WrongArity { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_parse_errors() {
        assert!(matches!(
            Hypergraph::from_text("HGX 3 1 5\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            Hypergraph::from_text("HGR 3 2 5\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            Hypergraph::from_text("HGR 3 1 5\n2 1 0\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            Hypergraph::from_text("HGR 3 1 5\n0 1 2\n0 1 x\n"),
            Err(ParseError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            Hypergraph::from_text("HGR 3 3 2 2 2\n0 1 4\n"),
            Err(ParseError::Invalid {
                line: 2,
                source: HypergraphError::NonTransversalEdge(_)
            })
        ));
        assert!(matches!(
            Hypergraph::from_text("HGR 3 1 5\n0 1 2\n0 1 2\n"),
            Err(ParseError::Invalid {
                line: 3,
                source: HypergraphError::DuplicateEdge(_)
            })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.hgr");
        let g = Hypergraph::complete_partite(vec![2, 2, 2]).unwrap();
        g.write_file(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(Hypergraph::read_file(&path).unwrap(), g);
        assert_eq!(Hypergraph::read_file(&path).unwrap().to_text(), text);
    }
}
