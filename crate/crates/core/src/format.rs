//! Line-based text format for graphs, marked points, tangent vectors, rose
//! maps and paths. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! vertices p q
//! edge u p p 1/10       # name, tail, head, length (length omitted for bare graphs)
//! edge w p q 4/5
//! edge v q q 1/10
//! base p                # image of the rose vertex (default: first vertex)
//! in a : u              # marking R_n -> graph, one line per petal
//! in b : w v w'
//! out u : a             # marking graph -> R_n, one line per edge (may be empty)
//! out w :
//! out v : b
//! ```
//!
//! Without `in`/`out` lines the graph must be a rose with the identity marking.
//! Tangent vectors are one line `tau w1 w2 …` in edge order. Rose maps are
//! `rose n` followed by `image a : …` lines. A path file is a point followed by
//! steps:
//!
//! ```text
//! linear 1/2 : 1/6 -1/6 0   # duration, then direction weights
//! collapse w
//! blowup o p w : a b'       # split o, moving these half-edges to new vertex p
//! expand                    # general expansion: the bigger graph and its forest
//! vertices o p
//! edge a o o
//! …
//! forest w
//! end
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::collapse::{blow_up, ForestCollapse};
use crate::error::{Error, Result};
use crate::graph::{DirEdge, Edge, Graph};
use crate::map::GraphMap;
use crate::marked::MarkedPoint;
use crate::metric::{Metric, TangentVector};
use crate::paths::{PLPath, PathStep};
use crate::rational::{parse_q_line, Q};

struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
    /// Text after the first `:`, if any.
    rest: Option<&'a str>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                return None;
            }
            let (head, rest) = match body.split_once(':') {
                Some((h, r)) => (h, Some(r.trim())),
                None => (body, None),
            };
            Some(Line { number: i + 1, words: head.split_whitespace().collect(), rest })
        })
        .collect()
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_word(graph: &Graph, text: &str, line: usize) -> Result<Vec<DirEdge>> {
    text.split_whitespace()
        .map(|t| graph.parse_dir_token(t).ok_or_else(|| err(line, format!("unknown edge token {t:?}"))))
        .collect()
}

fn parse_q_list(words: &[&str], line: usize) -> Result<Vec<Q>> {
    words.iter().map(|w| parse_q_line(w, line)).collect()
}

/// Reads `vertices` and `edge` lines from the front of `ls`.
fn take_graph(ls: &[Line], pos: &mut usize, with_lengths: bool) -> Result<(Graph, Vec<Q>)> {
    let first = ls.get(*pos).ok_or_else(|| err(0, "missing graph"))?;
    if first.words.first() != Some(&"vertices") {
        return Err(err(first.number, "expected `vertices`"));
    }
    let vertices: Vec<String> = first.words[1..].iter().map(|s| s.to_string()).collect();
    *pos += 1;
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    while let Some(l) = ls.get(*pos) {
        if l.words.first() != Some(&"edge") {
            break;
        }
        let want = if with_lengths { 5 } else { 4 };
        if l.words.len() != want {
            return Err(err(l.number, format!("`edge` takes {} fields", want - 1)));
        }
        let find = |n: &str| {
            vertices.iter().position(|v| v == n).ok_or_else(|| err(l.number, format!("unknown vertex {n:?}")))
        };
        edges.push(Edge { name: l.words[1].to_string(), tail: find(l.words[2])?, head: find(l.words[3])? });
        if with_lengths {
            lengths.push(parse_q_line(l.words[4], l.number)?);
        }
        *pos += 1;
    }
    let graph = Graph::new(vertices, edges).map_err(|e| err(first.number, e.to_string()))?;
    Ok((graph, lengths))
}

fn take_point(ls: &[Line], pos: &mut usize) -> Result<MarkedPoint> {
    let start_line = ls.get(*pos).map_or(0, |l| l.number);
    let (graph, lengths) = take_graph(ls, pos, true)?;
    let graph = Arc::new(graph);
    let rose = Arc::new(Graph::rose(graph.rank().max(2)));
    let mut base = 0;
    let mut ins: Vec<Option<Vec<DirEdge>>> = vec![None; rose.num_edges()];
    let mut outs: Vec<Option<Vec<DirEdge>>> = vec![None; graph.num_edges()];
    let mut any_marking = false;
    while let Some(l) = ls.get(*pos) {
        match l.words.as_slice() {
            ["base", v] => {
                base = graph.find_vertex(v).ok_or_else(|| err(l.number, format!("unknown vertex {v:?}")))?;
            }
            ["in", petal] => {
                let p = rose.find_edge(petal).ok_or_else(|| err(l.number, format!("unknown petal {petal:?}")))?;
                ins[p] = Some(parse_word(&graph, l.rest.ok_or_else(|| err(l.number, "missing `:`"))?, l.number)?);
                any_marking = true;
            }
            ["out", e] => {
                let e = graph.find_edge(e).ok_or_else(|| err(l.number, format!("unknown edge {e:?}")))?;
                outs[e] = Some(parse_word(&rose, l.rest.ok_or_else(|| err(l.number, "missing `:`"))?, l.number)?);
                any_marking = true;
            }
            _ => break,
        }
        *pos += 1;
    }
    let metric = Metric::new(&graph, lengths).map_err(|e| err(start_line, e.to_string()))?;
    if !any_marking {
        if graph.num_vertices() != 1 {
            return Err(err(start_line, "a point on a graph other than a rose needs `in`/`out` lines"));
        }
        let id = GraphMap::identity(graph.clone());
        return MarkedPoint::new(metric, id.clone(), id).map_err(|e| err(start_line, e.to_string()));
    }
    let ins = ins
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(start_line, format!("missing `in {}`", rose.edge_name(i)))))
        .collect::<Result<Vec<_>>>()?;
    let outs = outs
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(start_line, format!("missing `out {}`", graph.edge_name(i)))))
        .collect::<Result<Vec<_>>>()?;
    let m_in = GraphMap::new(rose.clone(), graph.clone(), vec![base], ins).map_err(|e| err(start_line, e.to_string()))?;
    let m_out = GraphMap::new(graph.clone(), rose, vec![0; graph.num_vertices()], outs)
        .map_err(|e| err(start_line, e.to_string()))?;
    MarkedPoint::new(metric, m_in, m_out).map_err(|e| err(start_line, e.to_string()))
}

fn finish(ls: &[Line], pos: usize) -> Result<()> {
    match ls.get(pos) {
        Some(l) => Err(err(l.number, format!("unexpected `{}`", l.words.first().copied().unwrap_or(":")))),
        None => Ok(()),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let ls = lines(text);
    let mut pos = 0;
    let (g, _) = take_graph(&ls, &mut pos, false)?;
    finish(&ls, pos)?;
    Ok(g)
}

pub fn parse_point(text: &str) -> Result<MarkedPoint> {
    let ls = lines(text);
    let mut pos = 0;
    let x = take_point(&ls, &mut pos)?;
    finish(&ls, pos)?;
    Ok(x)
}

pub fn parse_tangent(text: &str, graph: &Graph) -> Result<TangentVector> {
    let ls = lines(text);
    let l = ls.first().ok_or_else(|| err(0, "empty tangent file"))?;
    if l.words.first() != Some(&"tau") {
        return Err(err(l.number, "expected `tau`"));
    }
    let w = parse_q_list(&l.words[1..], l.number)?;
    finish(&ls, 1)?;
    TangentVector::new(graph, w).map_err(|e| err(l.number, e.to_string()))
}

pub fn parse_rose_map(text: &str) -> Result<GraphMap> {
    let ls = lines(text);
    let l = ls.first().ok_or_else(|| err(0, "empty map file"))?;
    let rank: usize = match l.words.as_slice() {
        ["rose", n] => n.parse().map_err(|_| err(l.number, "bad rank"))?,
        _ => return Err(err(l.number, "expected `rose n`")),
    };
    if !(2..=26).contains(&rank) {
        return Err(err(l.number, "rank out of range"));
    }
    let rose = Arc::new(Graph::rose(rank));
    let mut images: Vec<Option<Vec<DirEdge>>> = vec![None; rank];
    for l in &ls[1..] {
        match l.words.as_slice() {
            ["image", p] => {
                let e = rose.find_edge(p).ok_or_else(|| err(l.number, format!("unknown petal {p:?}")))?;
                images[e] = Some(parse_word(&rose, l.rest.ok_or_else(|| err(l.number, "missing `:`"))?, l.number)?);
            }
            _ => return Err(err(l.number, "expected `image`")),
        }
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(l.number, format!("missing image of {}", rose.edge_name(i)))))
        .collect::<Result<Vec<_>>>()?;
    GraphMap::new(rose.clone(), rose, vec![0], images).map_err(|e| err(l.number, e.to_string()))
}

pub fn parse_path(text: &str) -> Result<PLPath> {
    let ls = lines(text);
    let mut pos = 0;
    let start = take_point(&ls, &mut pos)?;
    let mut cur = start.graph().clone();
    let mut steps = Vec::new();
    while let Some(l) = ls.get(pos) {
        pos += 1;
        let step = match l.words.as_slice() {
            ["linear", d] => {
                let duration = parse_q_line(d, l.number)?;
                let rest = l.rest.ok_or_else(|| err(l.number, "missing `:`"))?;
                let w = parse_q_list(&rest.split_whitespace().collect::<Vec<_>>(), l.number)?;
                let direction = TangentVector::new(&cur, w).map_err(|e| err(l.number, e.to_string()))?;
                PathStep::Linear { direction, duration }
            }
            ["collapse", names @ ..] => {
                let forest = names
                    .iter()
                    .map(|n| cur.find_edge(n).ok_or_else(|| err(l.number, format!("unknown edge {n:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                let c = ForestCollapse::new(cur.clone(), &forest).map_err(|e| err(l.number, e.to_string()))?;
                cur = c.quotient().clone();
                PathStep::Collapse { forest }
            }
            ["blowup", v, nv, ne] => {
                let v = cur.find_vertex(v).ok_or_else(|| err(l.number, format!("unknown vertex {v:?}")))?;
                let moved = parse_word(&cur, l.rest.ok_or_else(|| err(l.number, "missing `:`"))?, l.number)?;
                let big = Arc::new(blow_up(&cur, v, &moved, nv, ne).map_err(|e| err(l.number, e.to_string()))?);
                let forest = [big.num_edges() - 1];
                let collapse = ForestCollapse::new(big.clone(), &forest).map_err(|e| err(l.number, e.to_string()))?;
                cur = big;
                PathStep::Expand { collapse }
            }
            ["expand"] => {
                let (big, _) = take_graph(&ls, &mut pos, false)?;
                let big = Arc::new(big);
                let fl = ls.get(pos).ok_or_else(|| err(l.number, "missing `forest`"))?;
                let forest = match fl.words.as_slice() {
                    ["forest", names @ ..] => names
                        .iter()
                        .map(|n| big.find_edge(n).ok_or_else(|| err(fl.number, format!("unknown edge {n:?}"))))
                        .collect::<Result<Vec<_>>>()?,
                    _ => return Err(err(fl.number, "expected `forest`")),
                };
                pos += 1;
                match ls.get(pos) {
                    Some(e) if e.words.as_slice() == ["end"] => pos += 1,
                    _ => return Err(err(fl.number, "expected `end`")),
                }
                let collapse = ForestCollapse::new(big.clone(), &forest).map_err(|e| err(l.number, e.to_string()))?;
                cur = big;
                PathStep::Expand { collapse }
            }
            _ => return Err(err(l.number, "expected a path step")),
        };
        steps.push(step);
    }
    PLPath::new(start, steps).map_err(|e| err(0, e.to_string()))
}

fn write_graph_lines(out: &mut String, graph: &Graph, lengths: Option<&[Q]>) {
    let _ = writeln!(out, "vertices {}", graph.vertex_names().join(" "));
    for (i, e) in graph.edges().iter().enumerate() {
        let _ = write!(out, "edge {} {} {}", e.name, graph.vertex_name(e.tail), graph.vertex_name(e.head));
        if let Some(l) = lengths {
            let _ = write!(out, " {}", l[i]);
        }
        out.push('\n');
    }
}

fn word_suffix(word: &str) -> String {
    if word.is_empty() {
        ":".to_string()
    } else {
        format!(": {word}")
    }
}

pub fn write_graph(graph: &Graph) -> String {
    let mut out = String::new();
    write_graph_lines(&mut out, graph, None);
    out
}

pub fn write_point(x: &MarkedPoint) -> String {
    let mut out = String::new();
    write_graph_lines(&mut out, x.graph(), Some(x.metric().lengths()));
    let m_in = x.marking_in();
    let _ = writeln!(out, "base {}", x.graph().vertex_name(m_in.vertex_image(0)));
    let rose = m_in.source();
    for p in 0..rose.num_edges() {
        let _ = writeln!(out, "in {} {}", rose.edge_name(p), word_suffix(&m_in.image_text(p)));
    }
    for e in 0..x.graph().num_edges() {
        let _ = writeln!(out, "out {} {}", x.graph().edge_name(e), word_suffix(&x.marking_out().image_text(e)));
    }
    out
}

fn join_q(values: &[Q]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_tangent(tau: &TangentVector) -> String {
    format!("tau {}\n", join_q(tau.weights()))
}

pub fn write_rose_map(phi: &GraphMap) -> String {
    let mut out = format!("rose {}\n", phi.source().num_edges());
    for p in 0..phi.source().num_edges() {
        let _ = writeln!(out, "image {} {}", phi.source().edge_name(p), word_suffix(&phi.image_text(p)));
    }
    out
}

pub fn write_path(path: &PLPath) -> String {
    let mut out = write_point(path.start());
    let states = path.states();
    for (i, step) in path.steps().iter().enumerate() {
        match step {
            PathStep::Linear { direction, duration } => {
                let _ = writeln!(out, "linear {duration} : {}", join_q(direction.weights()));
            }
            PathStep::Collapse { forest } => {
                let g = &states[i].0;
                let names: Vec<&str> = forest.iter().map(|&e| g.edge_name(e)).collect();
                let _ = writeln!(out, "collapse {}", names.join(" "));
            }
            PathStep::Expand { collapse } => {
                out.push_str("expand\n");
                write_graph_lines(&mut out, collapse.source(), None);
                let names: Vec<&str> = collapse.forest().iter().map(|&e| collapse.source().edge_name(e)).collect();
                let _ = writeln!(out, "forest {}\nend", names.join(" "));
            }
        }
    }
    out
}
