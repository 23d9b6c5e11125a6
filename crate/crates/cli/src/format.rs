//! Text graph formats.
//!
//! LAD: the first token is the order `n`, followed by one line per vertex
//! holding its degree `d` and then `d` neighbour indices (0-based).
//!
//! Edge list: a header line `n m` followed by `m` lines `a b`. Endpoints are
//! either all integers in `0..n`, or arbitrary names that get interned to
//! dense ids in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use anyhow::Context;
use mcis_core::Graph;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected a non-negative integer, found `{0}`")]
    BadToken(String),
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    OutOfRange { vertex: usize, order: usize },
    #[error("unexpected end of input")]
    Truncated,
    #[error("self-loop on `{0}` but loops are not allowed")]
    LoopNotAllowed(String),
    #[error("more than {0} distinct vertex names")]
    TooManyNames(usize),
    #[error("trailing data `{0}`")]
    Trailing(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Lad,
    EdgeList,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lad" => Ok(Format::Lad),
            "edgelist" => Ok(Format::EdgeList),
            other => Err(format!("unknown format `{other}` (expected lad or edgelist)")),
        }
    }
}

/// How to read an input file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InputOptions {
    pub format: Format,
    pub directed: bool,
    pub allow_loops: bool,
}

/// A graph together with the display name of every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGraph {
    pub graph: Graph,
    pub names: Vec<String>,
}

impl NamedGraph {
    /// Vertices named by their ids.
    pub fn numbered(graph: Graph) -> Self {
        let names = (0..graph.order()).map(|v| v.to_string()).collect();
        NamedGraph { graph, names }
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }
}

/// Whitespace-separated tokens tagged with their 1-based line numbers.
struct Tokens<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| line.split_whitespace().map(move |t| (i + 1, t)));
        Tokens { inner: Box::new(inner), last_line: text.lines().count().max(1) }
    }

    fn next_token(&mut self) -> Result<(usize, &'a str), ParseError> {
        self.inner.next().ok_or(err(self.last_line, ParseErrorKind::Truncated))
    }

    fn next_usize(&mut self) -> Result<(usize, usize), ParseError> {
        let (line, token) = self.next_token()?;
        let value = token.parse().map_err(|_| err(line, ParseErrorKind::BadToken(token.into())))?;
        Ok((line, value))
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.inner.next() {
            Some((line, token)) => Err(err(line, ParseErrorKind::Trailing(token.into()))),
            None => Ok(()),
        }
    }
}

/// Parses LAD text. Each listed neighbour `b` of vertex `a` adds the edge
/// `{a, b}` (or the arc `a -> b` when `directed`); a vertex listing itself
/// gets a loop, which is an error unless `allow_loops`.
pub fn parse_lad(text: &str, directed: bool, allow_loops: bool) -> Result<Graph, ParseError> {
    let mut tokens = Tokens::new(text);
    let (_, n) = tokens.next_usize()?;
    let mut g = Graph::new(n, directed);
    for a in 0..n {
        let (_, degree) = tokens.next_usize()?;
        for _ in 0..degree {
            let (line, b) = tokens.next_usize()?;
            if b >= n {
                return Err(err(line, ParseErrorKind::OutOfRange { vertex: b, order: n }));
            }
            if a == b && !allow_loops {
                return Err(err(line, ParseErrorKind::LoopNotAllowed(a.to_string())));
            }
            g.add_edge(a, b).expect("range checked");
        }
    }
    tokens.finish()?;
    Ok(g)
}

/// Parses an edge list. With integer endpoints, names are the ids; with
/// named endpoints, ids follow first appearance and vertices never mentioned
/// keep their id as name.
pub fn parse_edgelist(text: &str, directed: bool, allow_loops: bool) -> Result<NamedGraph, ParseError> {
    let mut tokens = Tokens::new(text);
    let (_, n) = tokens.next_usize()?;
    let (_, m) = tokens.next_usize()?;
    let mut raw = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, a) = tokens.next_token()?;
        let (_, b) = tokens.next_token()?;
        raw.push((line, a, b));
    }
    tokens.finish()?;

    let numeric = raw.iter().all(|(_, a, b)| a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok());
    let mut names = Interner::default();
    let mut g = Graph::new(n, directed);
    for &(line, a, b) in &raw {
        let (x, y) = if numeric {
            (numeric_id(a, n, line)?, numeric_id(b, n, line)?)
        } else {
            (names.id(a, n, line)?, names.id(b, n, line)?)
        };
        if x == y && !allow_loops {
            return Err(err(line, ParseErrorKind::LoopNotAllowed(a.to_string())));
        }
        g.add_edge(x, y).expect("range checked");
    }
    if numeric {
        return Ok(NamedGraph::numbered(g));
    }
    let mut names = names.names;
    for v in names.len()..n {
        names.push(v.to_string());
    }
    Ok(NamedGraph { graph: g, names })
}

fn numeric_id(token: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    let v: usize = token.parse().expect("checked numeric");
    if v < n {
        Ok(v)
    } else {
        Err(err(line, ParseErrorKind::OutOfRange { vertex: v, order: n }))
    }
}

#[derive(Default)]
struct Interner<'a> {
    ids: HashMap<&'a str, usize>,
    names: Vec<String>,
}

impl<'a> Interner<'a> {
    fn id(&mut self, token: &'a str, limit: usize, line: usize) -> Result<usize, ParseError> {
        if let Some(&v) = self.ids.get(token) {
            return Ok(v);
        }
        if self.names.len() == limit {
            return Err(err(line, ParseErrorKind::TooManyNames(limit)));
        }
        self.ids.insert(token, self.names.len());
        self.names.push(token.to_string());
        Ok(self.names.len() - 1)
    }
}

/// LAD text for `g`. Undirected graphs list every neighbour on both
/// endpoints; a loop lists the vertex itself.
pub fn write_lad(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for a in 0..g.order() {
        let row: Vec<usize> = (0..g.order()).filter(|&b| g.has_edge(a, b)).collect();
        write!(out, "{}", row.len()).unwrap();
        for b in row {
            write!(out, " {b}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Edge-list text for `g`, one line per edge in ascending order. With `names`
/// the endpoints are written by name.
pub fn write_edgelist(g: &Graph, names: Option<&[String]>) -> String {
    let mut out = format!("{} {}\n", g.order(), g.edge_count());
    for (a, b) in g.edges() {
        match names {
            Some(names) => writeln!(out, "{} {}", names[a], names[b]).unwrap(),
            None => writeln!(out, "{a} {b}").unwrap(),
        }
    }
    out
}

pub fn parse(text: &str, options: InputOptions) -> Result<NamedGraph, ParseError> {
    match options.format {
        Format::Lad => parse_lad(text, options.directed, options.allow_loops).map(NamedGraph::numbered),
        Format::EdgeList => parse_edgelist(text, options.directed, options.allow_loops),
    }
}

pub fn read_graph(path: &Path, options: InputOptions) -> anyhow::Result<NamedGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text, options).with_context(|| format!("parsing {}", path.display()))
}
