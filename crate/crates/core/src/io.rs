use std::fmt::Write as _;

use thiserror::Error;

use crate::grid::{BoundaryWord, Placement, Polyomino, Region, RegionKind};
use crate::kl::{LabeledPieceSet, MatchingGraph};
use crate::validate::{Tiling, ValidationReport};
use crate::wang::{EncodedPieceSet, WangAssignment, WangTile, WangTileSet};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedWord {
    pub name: String,
    pub word: BoundaryWord,
}

pub fn parse_poly(text: &str) -> Result<Vec<NamedWord>, ParseError> {
    let mut out: Vec<NamedWord> = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (ln, toks) in lines(text) {
        match toks[0] {
            "poly" => {
                if let Some((pl, name)) = pending.take() {
                    return Err(err(pl, format!("piece `{name}` has no word")));
                }
                if toks.len() != 2 {
                    return Err(err(ln, "expected `poly <name>`"));
                }
                if out.iter().any(|p| p.name == toks[1]) {
                    return Err(err(ln, format!("duplicate piece `{}`", toks[1])));
                }
                pending = Some((ln, toks[1].to_string()));
            }
            "word" => {
                let (_, name) = pending
                    .take()
                    .ok_or_else(|| err(ln, "`word` before `poly`"))?;
                let word = BoundaryWord::parse(&toks[1..].join(" "))
                    .map_err(|e| err(ln, e.to_string()))?;
                out.push(NamedWord { name, word });
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    if let Some((pl, name)) = pending {
        return Err(err(pl, format!("piece `{name}` has no word")));
    }
    Ok(out)
}

pub fn emit_poly(pieces: &[NamedWord]) -> String {
    let mut s = String::new();
    for p in pieces {
        let _ = writeln!(s, "poly {}\nword {}", p.name, p.word.emit());
    }
    s
}

/// Parsed pieces filled to polyominoes, in file order.
pub fn fill_pieces(words: &[NamedWord]) -> Result<Vec<Polyomino>, ParseError> {
    words
        .iter()
        .map(|p| {
            Polyomino::from_word(&p.word).map_err(|e| err(0, format!("piece `{}`: {e}", p.name)))
        })
        .collect()
}

pub fn labeled_poly(set: &LabeledPieceSet) -> Vec<NamedWord> {
    let mut out = vec![NamedWord {
        name: "tooth".into(),
        word: BoundaryWord::parse(crate::grid::TOOTH_WORD).unwrap(),
    }];
    out.extend(set.pieces.iter().map(|p| NamedWord {
        name: p.name.clone(),
        word: p.word.clone(),
    }));
    out
}

pub fn encoded_poly(set: &EncodedPieceSet) -> Vec<NamedWord> {
    set.pieces
        .iter()
        .map(|p| {
            let word = match p.name.as_str() {
                "tooth" => BoundaryWord::parse(crate::grid::TOOTH_WORD).unwrap(),
                "blade" => set.blade_word.rotated_ccw(p.rot),
                _ => set.rod_word.rotated_ccw(p.rot),
            };
            NamedWord {
                name: p.name.clone(),
                word,
            }
        })
        .collect()
}

/// Pieces are written by name when names are given, and read by name or index.
pub fn parse_tiling(text: &str, names: &[String]) -> Result<Tiling, ParseError> {
    let mut region = None;
    let mut placements = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "region" => {
                if region.is_some() {
                    return Err(err(ln, "second `region` line"));
                }
                if toks.len() != 4 {
                    return Err(err(ln, "expected `region torus|rect <W> <H>`"));
                }
                let (w, h): (i64, i64) = (num(ln, toks[2], "width")?, num(ln, toks[3], "height")?);
                if w <= 0 || h <= 0 {
                    return Err(err(ln, "region sides must be positive"));
                }
                region = Some(match toks[1] {
                    "torus" => Region::torus(w, h),
                    "rect" => Region::rect(w, h),
                    k => return Err(err(ln, format!("unknown region kind `{k}`"))),
                });
            }
            "place" => {
                if region.is_none() {
                    return Err(err(ln, "`place` before `region`"));
                }
                if toks.len() != 5 {
                    return Err(err(ln, "expected `place <piece> <orient> <dx> <dy>`"));
                }
                let piece = match names.iter().position(|n| n == toks[1]) {
                    Some(i) => i as u32,
                    None => num(ln, toks[1], "piece")?,
                };
                let rot: u8 = num(ln, toks[2], "orientation")?;
                if rot > 3 {
                    return Err(err(ln, format!("orientation {rot} not in 0..3")));
                }
                placements.push(Placement {
                    piece,
                    rot,
                    dx: num(ln, toks[3], "dx")?,
                    dy: num(ln, toks[4], "dy")?,
                });
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let region = region.ok_or_else(|| err(0, "missing `region` line"))?;
    Ok(Tiling { region, placements })
}

pub fn emit_tiling(t: &Tiling, names: &[String]) -> String {
    let kind = match t.region.kind {
        RegionKind::Torus => "torus",
        RegionKind::Rect => "rect",
    };
    let mut s = format!("region {kind} {} {}\n", t.region.width, t.region.height);
    for p in &t.placements {
        let piece = names
            .get(p.piece as usize)
            .cloned()
            .unwrap_or_else(|| p.piece.to_string());
        let _ = writeln!(s, "place {piece} {} {} {}", p.rot, p.dx, p.dy);
    }
    s
}

pub fn parse_wang(text: &str) -> Result<WangTileSet, ParseError> {
    let mut it = lines(text);
    let (ln, head) = it.next().ok_or_else(|| err(0, "empty file"))?;
    if head.len() != 3 || head[0] != "wang" {
        return Err(err(ln, "expected `wang <n> <m>`"));
    }
    let (n, m): (usize, u32) = (
        num(ln, head[1], "tile count")?,
        num(ln, head[2], "color count")?,
    );
    let mut tiles: Vec<Option<WangTile>> = vec![None; n];
    for (ln, toks) in it {
        if toks[0] != "tile" || toks.len() != 6 {
            return Err(err(ln, "expected `tile <id> N=<c> E=<c> S=<c> W=<c>`"));
        }
        let id: usize = num(ln, toks[1], "tile id")?;
        if id >= n {
            return Err(err(ln, format!("tile id {id} out of range for {n} tiles")));
        }
        if tiles[id].is_some() {
            return Err(err(ln, format!("tile {id} defined twice")));
        }
        let mut c = [0u32; 4];
        for (k, side) in ["N", "E", "S", "W"].iter().enumerate() {
            let v = toks[2 + k]
                .strip_prefix(side)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| err(ln, format!("expected `{side}=<c>`, got `{}`", toks[2 + k])))?;
            c[k] = num(ln, v, "color")?;
        }
        tiles[id] = Some(WangTile::new(c[0], c[1], c[2], c[3]));
    }
    let tiles: Vec<WangTile> = tiles
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| err(0, format!("tile {i} missing"))))
        .collect::<Result<_, _>>()?;
    WangTileSet::new(m, tiles).map_err(|e| err(ln, e.to_string()))
}

pub fn emit_wang(wts: &WangTileSet) -> String {
    let mut s = format!("wang {} {}\n", wts.tiles.len(), wts.m);
    for (i, t) in wts.tiles.iter().enumerate() {
        let _ = writeln!(s, "tile {i} N={} E={} S={} W={}", t.n, t.e, t.s, t.w);
    }
    s
}

/// `torus <w> <h>` then tile ids, row 0 (the bottom row) first.
pub fn parse_assignment(text: &str) -> Result<WangAssignment, ParseError> {
    let mut it = lines(text);
    let (ln, head) = it.next().ok_or_else(|| err(0, "empty file"))?;
    if head.len() != 3 || head[0] != "torus" {
        return Err(err(ln, "expected `torus <w> <h>`"));
    }
    let (w, h): (usize, usize) = (num(ln, head[1], "width")?, num(ln, head[2], "height")?);
    if w == 0 || h == 0 {
        return Err(err(ln, "torus sides must be positive"));
    }
    let mut tiles = Vec::with_capacity(w * h);
    let mut last = ln;
    for (ln, toks) in it {
        last = ln;
        for t in toks {
            tiles.push(num(ln, t, "tile id")?);
        }
    }
    if tiles.len() != w * h {
        return Err(err(
            last,
            format!("expected {} tile ids, found {}", w * h, tiles.len()),
        ));
    }
    Ok(WangAssignment::new(w, h, tiles))
}

pub fn emit_assignment(a: &WangAssignment) -> String {
    let mut s = format!("torus {} {}\n", a.w, a.h);
    for row in a.tiles.chunks(a.w) {
        let line: Vec<String> = row.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn parse_graph(text: &str) -> Result<MatchingGraph, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    for (ln, toks) in lines(text) {
        match (toks[0], toks.len()) {
            ("node", 2) => {
                if !edges.is_empty() {
                    return Err(err(ln, "`node` after `edge`"));
                }
                if names.iter().any(|n| n == toks[1]) {
                    return Err(err(ln, format!("duplicate node `{}`", toks[1])));
                }
                names.push(toks[1].to_string());
            }
            ("edge", 3) => edges.push((ln, toks[1].to_string(), toks[2].to_string())),
            _ => return Err(err(ln, "expected `node <name>` or `edge <a> <b>`")),
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut g = MatchingGraph::new(&refs);
    for (ln, a, b) in edges {
        g.add_edge(&a, &b).map_err(|e| err(ln, e.to_string()))?;
    }
    Ok(g)
}

pub fn emit_graph(g: &MatchingGraph) -> String {
    let mut s = String::new();
    for n in &g.nodes {
        let _ = writeln!(s, "node {n}");
    }
    for (a, b) in &g.edges {
        let _ = writeln!(s, "edge {} {}", g.nodes[*a], g.nodes[*b]);
    }
    s
}

pub fn report_text(r: &ValidationReport) -> String {
    let mut s = format!(
        "region {} placed {} overlaps {} holes {} outside {}\n",
        r.region_cells, r.placed_cells, r.overlap_cells, r.hole_cells, r.outside_cells
    );
    for c in &r.overlaps {
        let _ = writeln!(s, "overlap {} {}", c.x, c.y);
    }
    for c in &r.holes {
        let _ = writeln!(s, "hole {} {}", c.x, c.y);
    }
    s.push_str(if r.is_valid() { "valid\n" } else { "invalid\n" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn poly_round_trip() {
        let text = "# pieces\npoly tooth\nword r2 d2 r u2 r2 u l2 u2 l d2 l2 d\n\npoly sq\nword r3u3 l3 d3  # square\n";
        let p = parse_poly(text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].word.emit(), "r3 u3 l3 d3");
        assert_eq!(parse_poly(&emit_poly(&p)).unwrap(), p);
        assert_eq!(fill_pieces(&p).unwrap()[0].area(), 9);
    }

    #[test]
    fn poly_errors_carry_lines() {
        assert_eq!(parse_poly("poly a\n\nword r q\n").unwrap_err().line, 3);
        assert_eq!(parse_poly("word r\n").unwrap_err().line, 1);
        assert_eq!(parse_poly("poly a\npoly b\nword r\n").unwrap_err().line, 1);
    }

    #[test]
    fn tiling_round_trip() {
        let names = vec!["tooth".to_string(), "rod".to_string()];
        let t = Tiling {
            region: Region::torus(10, 4),
            placements: vec![
                Placement {
                    piece: 1,
                    rot: 2,
                    dx: -3,
                    dy: 7,
                },
                Placement {
                    piece: 0,
                    rot: 0,
                    dx: 0,
                    dy: 0,
                },
            ],
        };
        let s = emit_tiling(&t, &names);
        assert!(s.contains("place rod 2 -3 7"));
        assert_eq!(parse_tiling(&s, &names).unwrap(), t);
        assert_eq!(parse_tiling(&emit_tiling(&t, &[]), &[]).unwrap(), t);
        assert_eq!(
            parse_tiling("region torus 2 2\nplace 0 4 0 0\n", &[])
                .unwrap_err()
                .line,
            2
        );
        assert_eq!(parse_tiling("place 0 0 0 0\n", &[]).unwrap_err().line, 1);
    }

    #[test]
    fn wang_round_trip() {
        let text = "wang 2 2\ntile 1 N=2 E=2 S=1 W=1\ntile 0 N=1 E=1 S=2 W=2\n";
        let w = parse_wang(text).unwrap();
        assert_eq!(w.tiles[0], WangTile::new(1, 1, 2, 2));
        assert_eq!(parse_wang(&emit_wang(&w)).unwrap(), w);
        assert_eq!(
            parse_wang("wang 1 1\ntile 0 N=1 E=1 S=1 X=1\n")
                .unwrap_err()
                .line,
            2
        );
        assert!(parse_wang("wang 1 1\ntile 0 N=1 E=1 S=1 W=3\n").is_err());
    }

    #[test]
    fn assignment_round_trip() {
        let a = WangAssignment::new(2, 2, vec![0, 1, 1, 0]);
        assert_eq!(parse_assignment(&emit_assignment(&a)).unwrap(), a);
        assert_eq!(parse_assignment("torus 2 1\n0\n").unwrap_err().line, 2);
    }

    #[test]
    fn graph_round_trip() {
        let text = "node N\nnode E\nnode S\nnode W\nedge N S\nedge E W\nedge N N\n";
        let g = parse_graph(text).unwrap();
        assert!(g.adjacent(0, 2) && g.adjacent(0, 0) && !g.adjacent(0, 1));
        let g2 = parse_graph(&emit_graph(&g)).unwrap();
        assert_eq!(
            (g2.nodes.clone(), g2.edges.clone()),
            (g.nodes.clone(), g.edges.clone())
        );
        assert_eq!(parse_graph("node a\nedge a b\n").unwrap_err().line, 2);
    }

    #[test]
    fn encoded_words_fill_to_pieces() {
        let wts = WangTileSet::new(1, vec![WangTile::new(1, 1, 1, 1)]).unwrap();
        let set = crate::wang::encode(&wts, crate::wang::Mode::Translation).unwrap();
        let words = encoded_poly(&set);
        let polys = fill_pieces(&words).unwrap();
        for (p, e) in polys.iter().zip(&set.pieces) {
            assert_eq!(p, &e.poly, "{}", e.name);
        }
    }

    proptest! {
        #[test]
        fn tiling_text_round_trip(ps in prop::collection::vec((0u32..5, 0u8..4, -50i64..50, -50i64..50), 0..20)) {
            let t = Tiling {
                region: Region::rect(7, 9),
                placements: ps.into_iter().map(|(piece, rot, dx, dy)| Placement { piece, rot, dx, dy }).collect(),
            };
            prop_assert_eq!(parse_tiling(&emit_tiling(&t, &[]), &[]).unwrap(), t);
        }
    }
}
