use std::io::{BufRead, Write};

use super::Network;
use crate::error::{Error, Result};

/// Write the edge-list text format: a header `n <count> directed <0|1>`
/// followed by one `src dst` pair per line, zero-based.
pub fn write_edge_list<W: Write>(net: &Network, mut out: W) -> Result<()> {
    let io_err = |e: std::io::Error| Error::invalid(format!("edge-list write failed: {e}"));
    writeln!(
        out,
        "n {} directed {}",
        net.n(),
        if net.directed() { 1 } else { 0 }
    )
    .map_err(io_err)?;
    for &(s, t) in net.edges() {
        writeln!(out, "{s} {t}").map_err(io_err)?;
    }
    Ok(())
}

/// Parse the edge-list text format produced by [`write_edge_list`].
///
/// Round-trips exactly: reading what was written yields the same n, edge
/// sequence, and directedness. Construction seeds are not part of the format.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Network> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::invalid("edge list is empty"))?;
    let header = header.map_err(|e| Error::invalid(format!("edge-list read failed: {e}")))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "n" || fields[2] != "directed" {
        return Err(Error::invalid(format!(
            "bad edge-list header {header:?}, expected `n <count> directed <0|1>`"
        )));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| Error::invalid(format!("bad node count {:?}", fields[1])))?;
    let directed = match fields[3] {
        "0" => false,
        "1" => true,
        other => {
            return Err(Error::invalid(format!(
                "bad directed flag {other:?}, expected 0 or 1"
            )))
        }
    };

    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::invalid(format!("edge-list read failed: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::invalid(format!("line {}: expected `src dst`", lineno + 1)))?
                .parse()
                .map_err(|_| Error::invalid(format!("line {}: bad node index", lineno + 1)))
        };
        let s = parse(it.next())?;
        let t = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::invalid(format!(
                "line {}: trailing tokens after `src dst`",
                lineno + 1
            )));
        }
        edges.push((s, t));
    }
    Network::new(n, edges, directed, None)
}
