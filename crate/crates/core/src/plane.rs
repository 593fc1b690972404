use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::catalog::{matches, Label};
use crate::grid::{Polyomino, Side};
use crate::kl::make_tooth;
use crate::wang::{rod_labels_for, LabelShape, WangError, WangTile, WangTileSet};

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error("refutation needs at least one seed piece")]
    NoSeed,
    #[error("radius {0} is below the minimum of 3 tooth widths")]
    RadiusTooSmall(u32),
    #[error("seed placements overlap or mismatch")]
    BadSeed,
    #[error(transparent)]
    Wang(#[from] WangError),
}

/// A piece in one fixed orientation; `edges` carries labels for label-resolution pieces and is empty for teeth.
#[derive(Clone, Debug)]
pub struct PlaneShape {
    pub name: &'static str,
    pub rot: u8,
    pub cells: Vec<(i64, i64)>,
    pub edges: Vec<((i64, i64), Side, Label)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub shape: usize,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub depth: usize,
    pub cell: (i64, i64),
    pub options: Vec<Move>,
    /// For a cell with no options: labels facing it from each occupied neighbour.
    pub blocked_by: Vec<(Side, Option<Label>)>,
    /// Placements that fit the free cells but put a label against one it does not match.
    pub rejected: Vec<(Move, Label, Option<Label>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every branch reached an uncoverable cell inside the window.
    Dead,
    /// Some branch covered the whole window; the window is too small to decide.
    Inconclusive,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct Refutation {
    pub verdict: Verdict,
    pub nodes: u64,
    pub shapes: Vec<PlaneShape>,
    pub seeds: Vec<Move>,
    pub log: Vec<LogEntry>,
}

impl Refutation {
    /// Options at the first branching point after the seed.
    pub fn first_expansion(&self) -> &[Move] {
        self.log
            .first()
            .map(|e| e.options.as_slice())
            .unwrap_or(&[])
    }

    /// Label pairs that ruled out placements anywhere in the search, with counts.
    pub fn rejections(&self) -> std::collections::BTreeMap<(Label, Option<Label>), usize> {
        let mut out = std::collections::BTreeMap::new();
        for e in &self.log {
            for &(_, a, b) in &e.rejected {
                *out.entry((a, b)).or_default() += 1;
            }
        }
        out
    }

    /// Cells where a branch died, with the labels that blocked them.
    pub fn dead_ends(&self) -> impl Iterator<Item = &LogEntry> {
        self.log.iter().filter(|e| e.options.is_empty())
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict {:?} after {} nodes", self.verdict, self.nodes)?;
        for e in &self.log {
            write!(f, "{:indent$}{:?}:", "", e.cell, indent = 2 * e.depth)?;
            if e.options.is_empty() {
                write!(f, " dead")?;
                for (s, l) in &e.blocked_by {
                    write!(f, " {:?}={}", s, l.map_or("-", |l| l.name()))?;
                }
            }
            for m in &e.options {
                let s = &self.shapes[m.shape];
                write!(f, " {}@r{}({},{})", s.name, s.rot, m.x, m.y)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fit {
    Ok,
    Overlap,
    Mismatch(Label, Option<Label>),
}

/// A move that failed, with the own label and the neighbour label that clashed.
type Rejected = (Move, Label, Option<Label>);

struct Board<'a> {
    shapes: &'a [PlaneShape],
    window: (i64, i64, i64, i64),
    occ: HashMap<(i64, i64), usize>,
    labels: HashMap<((i64, i64), Side), Label>,
    placed: Vec<Move>,
}

impl Board<'_> {
    fn fits(&self, m: Move) -> bool {
        self.check(m) == Fit::Ok
    }

    fn check(&self, m: Move) -> Fit {
        let s = &self.shapes[m.shape];
        if s.cells
            .iter()
            .any(|&(x, y)| self.occ.contains_key(&(x + m.x, y + m.y)))
        {
            return Fit::Overlap;
        }
        for &((x, y), side, l) in &s.edges {
            let (dx, dy) = side.delta();
            let nb = (x + m.x + dx, y + m.y + dy);
            if !self.occ.contains_key(&nb) {
                continue;
            }
            match self.labels.get(&(nb, side.opposite())) {
                Some(&o) if matches(l, o) => {}
                other => return Fit::Mismatch(l, other.copied()),
            }
        }
        Fit::Ok
    }

    fn place(&mut self, m: Move) {
        let s = &self.shapes[m.shape];
        let id = self.placed.len();
        for &(x, y) in &s.cells {
            self.occ.insert((x + m.x, y + m.y), id);
        }
        for &((x, y), side, l) in &s.edges {
            self.labels.insert(((x + m.x, y + m.y), side), l);
        }
        self.placed.push(m);
    }

    fn unplace(&mut self) {
        let m = self.placed.pop().expect("nothing placed");
        let s = &self.shapes[m.shape];
        for &(x, y) in &s.cells {
            self.occ.remove(&(x + m.x, y + m.y));
        }
        for &((x, y), side, _) in &s.edges {
            self.labels.remove(&((x + m.x, y + m.y), side));
        }
    }

    fn options(&self, c: (i64, i64)) -> Vec<Move> {
        self.options_with_rejects(c).0
    }

    fn options_with_rejects(&self, c: (i64, i64)) -> (Vec<Move>, Vec<Rejected>) {
        let (mut ok, mut bad) = (Vec::new(), Vec::new());
        for (i, s) in self.shapes.iter().enumerate() {
            for &(x, y) in &s.cells {
                let m = Move {
                    shape: i,
                    x: c.0 - x,
                    y: c.1 - y,
                };
                match self.check(m) {
                    Fit::Ok => ok.push(m),
                    Fit::Mismatch(a, b) => bad.push((m, a, b)),
                    Fit::Overlap => {}
                }
            }
        }
        (ok, bad)
    }

    fn frontier(&self) -> Vec<(i64, i64)> {
        let (x0, y0, x1, y1) = self.window;
        let mut fr: Vec<(i64, i64)> = self
            .occ
            .keys()
            .flat_map(|&(x, y)| [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)])
            .filter(|c| {
                !self.occ.contains_key(c) && (x0..x1).contains(&c.0) && (y0..y1).contains(&c.1)
            })
            .collect();
        fr.sort_unstable();
        fr.dedup();
        fr
    }

    fn blocked_by(&self, c: (i64, i64)) -> Vec<(Side, Option<Label>)> {
        [Side::E, Side::N, Side::W, Side::S]
            .into_iter()
            .filter_map(|s| {
                let (dx, dy) = s.delta();
                let nb = (c.0 + dx, c.1 + dy);
                self.occ
                    .contains_key(&nb)
                    .then(|| (s, self.labels.get(&(nb, s.opposite())).copied()))
            })
            .collect()
    }
}

struct Run<'a> {
    board: Board<'a>,
    nodes: u64,
    budget: u64,
    log: Vec<LogEntry>,
}

enum Halt {
    Survived,
    Budget,
}

impl Run<'_> {
    fn go(&mut self, depth: usize, forced: Option<(i64, i64)>) -> Result<(), Halt> {
        let (cell, options) = match forced {
            Some(c) => (c, self.board.options(c)),
            None => {
                let fr = self.board.frontier();
                if fr.is_empty() {
                    return Err(Halt::Survived);
                }
                let mut best: Option<((i64, i64), Vec<Move>)> = None;
                for c in fr {
                    let o = self.board.options(c);
                    let empty = o.is_empty();
                    if best.as_ref().is_none_or(|b| o.len() < b.1.len()) {
                        best = Some((c, o));
                    }
                    if empty {
                        break;
                    }
                }
                best.expect("frontier is not empty")
            }
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Halt::Budget);
        }
        let blocked_by = if options.is_empty() {
            self.board.blocked_by(cell)
        } else {
            Vec::new()
        };
        let (_, rejected) = self.board.options_with_rejects(cell);
        self.log.push(LogEntry {
            depth,
            cell,
            options: options.clone(),
            blocked_by,
            rejected,
        });
        for m in options {
            self.board.place(m);
            let r = self.go(depth + 1, None);
            self.board.unplace();
            r?;
        }
        Ok(())
    }
}

/// Exhaustive search for a partial tiling of the window extending the seeds, with every
/// branch explored until a window cell can no longer be covered.
pub fn refute(
    shapes: Vec<PlaneShape>,
    seeds: &[Move],
    window: (i64, i64, i64, i64),
    first: Option<(i64, i64)>,
    budget: u64,
) -> Result<Refutation, PlaneError> {
    if seeds.is_empty() {
        return Err(PlaneError::NoSeed);
    }
    let mut board = Board {
        shapes: &shapes,
        window,
        occ: HashMap::new(),
        labels: HashMap::new(),
        placed: Vec::new(),
    };
    for &s in seeds {
        if !board.fits(s) {
            return Err(PlaneError::BadSeed);
        }
        board.place(s);
    }
    let mut run = Run {
        board,
        nodes: 0,
        budget,
        log: Vec::new(),
    };
    let verdict = match run.go(0, first) {
        Ok(()) => Verdict::Dead,
        Err(Halt::Survived) => Verdict::Inconclusive,
        Err(Halt::Budget) => Verdict::BudgetExhausted,
    };
    let (nodes, log) = (run.nodes, run.log);
    Ok(Refutation {
        verdict,
        nodes,
        shapes,
        seeds: seeds.to_vec(),
        log,
    })
}

pub fn tooth_shape() -> PlaneShape {
    let t: Polyomino = make_tooth();
    PlaneShape {
        name: "tooth",
        rot: 0,
        cells: t.cells().map(|c| (c.x, c.y)).collect(),
        edges: Vec::new(),
    }
}

/// The cell next to both arms at the lower left of the tooth placed at the origin.
pub const INWARD_CORNER: (i64, i64) = (1, 1);

/// Teeth-only completion around the seed teeth, covering the inward corner first, inside a window
/// `radius` tooth widths around the origin.
pub fn teeth_only_from(
    seeds: &[(i64, i64)],
    radius: u32,
    budget: u64,
) -> Result<Refutation, PlaneError> {
    if radius < 3 {
        return Err(PlaneError::RadiusTooSmall(radius));
    }
    if seeds.is_empty() {
        return Err(PlaneError::NoSeed);
    }
    let r = 5 * radius as i64;
    let moves: Vec<Move> = seeds
        .iter()
        .map(|&(x, y)| Move { shape: 0, x, y })
        .collect();
    let (cx, cy) = seeds[0];
    let corner = (cx + INWARD_CORNER.0, cy + INWARD_CORNER.1);
    refute(
        vec![tooth_shape()],
        &moves,
        (cx - r, cy - r, cx + 5 + r, cy + 5 + r),
        Some(corner),
        budget,
    )
}

pub fn teeth_only_refutation(radius: u32) -> Result<Refutation, PlaneError> {
    teeth_only_from(&[(0, 0)], radius, 10_000_000)
}

/// Rod shapes in all four orientations at label resolution. Abutting label pairs are legal exactly when
/// they match, which is where teeth could complete the gap.
pub fn rod_shapes(wts: &WangTileSet, m: u32) -> Result<Vec<PlaneShape>, PlaneError> {
    let rod = LabelShape::trace(&rod_labels_for(wts, m)?)?;
    Ok((0..4)
        .map(|k| {
            let (s, _) = rod.rotate(k);
            PlaneShape {
                name: "rod",
                rot: k,
                cells: s.cells,
                edges: s.edges,
            }
        })
        .collect())
}

/// Rods and teeth without blades, n = 1, m = 1: one rod at the origin, then every forced completion inside
/// a window `window` label units around it.
pub fn rods_and_teeth_refutation(window: i64) -> Result<Refutation, PlaneError> {
    let wts = WangTileSet::new(1, vec![WangTile::new(1, 1, 1, 1)])?;
    let shapes = rod_shapes(&wts, 1)?;
    let w = shapes[0].cells.iter().map(|c| c.0).max().unwrap_or(0) + 1;
    let seed = Move {
        shape: 0,
        x: 0,
        y: -2,
    };
    refute(
        shapes,
        &[seed],
        (-window, -2 - window, w + window, window),
        None,
        5_000_000,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teeth_only_dies() {
        let r = teeth_only_refutation(4).unwrap();
        assert_eq!(r.verdict, Verdict::Dead);
        assert_eq!(r.first_expansion().len(), 2);
        assert!(r.dead_ends().count() >= 2);
    }

    #[test]
    fn teeth_misuse() {
        assert!(matches!(
            teeth_only_from(&[], 4, 100),
            Err(PlaneError::NoSeed)
        ));
        assert!(matches!(
            teeth_only_from(&[(0, 0)], 2, 100),
            Err(PlaneError::RadiusTooSmall(2))
        ));
    }

    #[test]
    fn rods_only_dies() {
        let r = rods_and_teeth_refutation(12).unwrap();
        assert_eq!(r.verdict, Verdict::Dead, "{r}");
        assert!(r.log.iter().take(6).all(|e| e.options.len() == 1));
        let short = [Label::Zero, Label::One, Label::N];
        for e in r.dead_ends() {
            assert!(
                e.blocked_by
                    .iter()
                    .all(|(_, l)| l.is_some_and(|l| short.contains(&l))),
                "{e:?}"
            );
        }
        assert!(r.rejections().contains_key(&(Label::Y, Some(Label::J0N))));
    }

    #[test]
    fn rods_small_window_inconclusive() {
        let r = rods_and_teeth_refutation(0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
