//! Plain-text graph files.
//!
//! One record per line: `U<tab>user<tab>item<tab>rating` for training edges,
//! `H<tab>user<tab>item<tab>rating` for holdout edges. Lines starting with
//! `#` are comments; a `# params <key=value ...>` line carries the generator
//! parameters. Ids are dense non-negative integers, with users and items in
//! separate id spaces.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Bigraph, RatedEdge};
use crate::params::GeneratorParams;

const PARAMS_PREFIX: &str = "# params ";

/// Renders a graph into the text format.
pub fn write_graph_string(graph: &Bigraph) -> String {
    let mut out = String::new();
    if let Some(params) = graph.params() {
        out.push_str(PARAMS_PREFIX);
        out.push_str(&params.header_string());
        out.push('\n');
    }
    for edge in graph.edges() {
        out.push_str(&format!("U\t{}\t{}\t{}\n", edge.user, edge.item, edge.rating));
    }
    for edge in graph.holdout_edges() {
        out.push_str(&format!("H\t{}\t{}\t{}\n", edge.user, edge.item, edge.rating));
    }
    out
}

pub fn write_graph(graph: &Bigraph, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    writer.write_all(write_graph_string(graph).as_bytes())?;
    writer.flush()?;
    Ok(())
}

/// Parses the text format. Requires at least one training edge and rejects
/// duplicate (user, item) pairs.
pub fn parse_graph(input: &str) -> Result<Bigraph> {
    let mut params: Option<GeneratorParams> = None;
    let mut edges: Vec<RatedEdge> = Vec::new();
    let mut holdout: Vec<RatedEdge> = Vec::new();
    let mut max_user: Option<u32> = None;
    let mut max_item: Option<u32> = None;
    let mut seen: HashSet<(u32, u32)> = HashSet::new();

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix(PARAMS_PREFIX) {
            params = Some(
                GeneratorParams::from_header_string(rest)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?,
            );
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split('\t');
        let tag = fields.next().unwrap_or("");
        let user: u32 = parse_field(fields.next(), lineno, "user id")?;
        let item: u32 = parse_field(fields.next(), lineno, "item id")?;
        let rating: i32 = parse_field(fields.next(), lineno, "rating")?;
        if fields.next().is_some() {
            return Err(Error::parse(lineno, "trailing fields"));
        }
        if !seen.insert((user, item)) {
            return Err(Error::parse(
                lineno,
                format!("duplicate edge ({user}, {item})"),
            ));
        }
        max_user = Some(max_user.map_or(user, |m| m.max(user)));
        max_item = Some(max_item.map_or(item, |m| m.max(item)));
        match tag {
            "U" => edges.push(RatedEdge::new(user, item, rating)),
            "H" => holdout.push(RatedEdge::new(user, item, rating)),
            other => {
                return Err(Error::parse(lineno, format!("unknown record tag `{other}`")));
            }
        }
    }

    if edges.is_empty() {
        return Err(Error::parse(0, "graph has no training edges"));
    }
    let n_users = max_user.unwrap() as usize + 1;
    let n_items = max_item.unwrap() as usize + 1;
    Ok(Bigraph::from_parts(params, n_users, n_items, edges, holdout))
}

pub fn read_graph(path: &Path) -> Result<Bigraph> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut contents = String::new();
    reader.read_to_string(&mut contents)?;
    parse_graph(&contents)
}

/// Streaming variant kept for parity with `read_graph`; both validate the
/// same way, this one avoids holding the raw text.
pub fn read_graph_buffered(path: &Path) -> Result<Bigraph> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut contents = String::new();
    for line in reader.lines() {
        contents.push_str(&line?);
        contents.push('\n');
    }
    parse_graph(&contents)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, lineno: usize, what: &str) -> Result<T> {
    let raw = field.ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| Error::parse(lineno, format!("malformed {what} `{raw}`")))
}
