use std::collections::BTreeSet;

use thiserror::Error;

use crate::catalog::Label;
use crate::grid::{BoundaryWord, Dir, GridError, Polyomino, Side};
use crate::kl::make_tooth;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WangError {
    #[error("tile set is empty")]
    Empty,
    #[error("color count must be positive")]
    NoColors,
    #[error("tile {tile} has color {color} outside 1..={m}")]
    ColorOutOfRange { tile: usize, color: u32, m: u32 },
    #[error("color {0} outside 1..={1}")]
    BadColor(u32, u32),
    #[error("expected {expected} information labels, got {got}")]
    InfoLength { expected: usize, got: usize },
    #[error("structure uses {rods} rod and {blades} blade orientations")]
    Census { rods: usize, blades: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WangTile {
    pub n: u32,
    pub e: u32,
    pub s: u32,
    pub w: u32,
}

impl WangTile {
    pub fn new(n: u32, e: u32, s: u32, w: u32) -> Self {
        WangTile { n, e, s, w }
    }

    pub fn color(&self, side: Side) -> u32 {
        match side {
            Side::N => self.n,
            Side::E => self.e,
            Side::S => self.s,
            Side::W => self.w,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WangTileSet {
    pub m: u32,
    pub tiles: Vec<WangTile>,
}

impl WangTileSet {
    pub fn new(m: u32, tiles: Vec<WangTile>) -> Result<Self, WangError> {
        if tiles.is_empty() {
            return Err(WangError::Empty);
        }
        if m == 0 {
            return Err(WangError::NoColors);
        }
        for (i, t) in tiles.iter().enumerate() {
            for c in [t.n, t.e, t.s, t.w] {
                if c == 0 || c > m {
                    return Err(WangError::ColorOutOfRange {
                        tile: i,
                        color: c,
                        m,
                    });
                }
            }
        }
        Ok(WangTileSet { m, tiles })
    }

    pub fn n(&self) -> u32 {
        self.tiles.len() as u32
    }
}

/// Tile indices on a w x h torus, row-major with row 0 at the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WangAssignment {
    pub w: usize,
    pub h: usize,
    pub tiles: Vec<usize>,
}

impl WangAssignment {
    pub fn new(w: usize, h: usize, tiles: Vec<usize>) -> Self {
        assert_eq!(tiles.len(), w * h, "assignment size");
        WangAssignment { w, h, tiles }
    }

    pub fn get(&self, i: i64, j: i64) -> usize {
        let i = i.rem_euclid(self.w as i64) as usize;
        let j = j.rem_euclid(self.h as i64) as usize;
        self.tiles[j * self.w + i]
    }

    /// Cells whose east or north neighbour disagrees on the shared color, or whose tile index is out of range.
    pub fn defects(&self, wts: &WangTileSet) -> Vec<(usize, usize)> {
        let n = wts.tiles.len();
        let mut out = Vec::new();
        for j in 0..self.h {
            for i in 0..self.w {
                let t = self.tiles[j * self.w + i];
                let (e, nn) = (
                    self.get(i as i64 + 1, j as i64),
                    self.get(i as i64, j as i64 + 1),
                );
                if t >= n || e >= n || nn >= n {
                    out.push((i, j));
                    continue;
                }
                let tile = &wts.tiles[t];
                if tile.e != wts.tiles[e].w || tile.n != wts.tiles[nn].s {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_valid(&self, wts: &WangTileSet) -> bool {
        self.defects(wts).is_empty()
    }

    /// True iff shifting by (di, dj) maps the assignment onto itself.
    pub fn has_period(&self, di: i64, dj: i64) -> bool {
        (0..self.h as i64)
            .all(|j| (0..self.w as i64).all(|i| self.get(i + di, j + dj) == self.get(i, j)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionSide {
    I,
    J,
}

/// Unary code of color `i` as m-1 information labels, nearest the section start first.
pub fn color_section(i: u32, m: u32, side: SectionSide) -> Result<Vec<Label>, WangError> {
    if i == 0 || i > m {
        return Err(WangError::BadColor(i, m));
    }
    let (lo, hi) = match side {
        SectionSide::I => (Label::I1N, Label::I0N),
        SectionSide::J => (Label::J0N, Label::J1N),
    };
    let mut v = vec![lo; (i - 1) as usize];
    v.extend(std::iter::repeat_n(hi, (m - i) as usize));
    Ok(v)
}

/// Piece dimensions in label units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub n: i64,
    pub m: i64,
    /// Rod length and blade rectangle width.
    pub w: i64,
    /// Blade rectangle height.
    pub h: i64,
    /// Spine offset, (2n-2)m.
    pub a: i64,
    /// Vertical blade period.
    pub py: i64,
}

pub fn params(n: u32, m: u32) -> Params {
    let (n, m) = (n as i64, m as i64);
    let w = (6 * n - 2) * m + 6;
    let h = (4 * n - 4) * m + 6;
    let a = (2 * n - 2) * m;
    Params {
        n,
        m,
        w,
        h,
        a,
        py: 2 + a + w,
    }
}

/// Which tile side each rod section carries. Top sections are read left to right,
/// bottom sections left to right in the plane (the word walks them right to left).
pub const TOP_SECTIONS: [Side; 2] = [Side::W, Side::N];
pub const BOTTOM_SECTIONS: [Side; 2] = [Side::S, Side::E];

/// Information labels of the rod for a tile set: top in left-to-right order,
/// bottom in word order.
pub fn rod_info(wts: &WangTileSet, m: u32) -> Result<(Vec<Label>, Vec<Label>), WangError> {
    let mut top = Vec::new();
    for side in TOP_SECTIONS {
        for t in &wts.tiles {
            top.extend(color_section(t.color(side), m, SectionSide::I)?);
        }
    }
    let mut bot = Vec::new();
    for side in BOTTOM_SECTIONS {
        for t in &wts.tiles {
            bot.extend(color_section(t.color(side), m, SectionSide::J)?);
        }
    }
    bot.reverse();
    Ok((top, bot))
}

pub type LabelSteps = Vec<(Dir, Label)>;

/// Rod boundary as one label per unit step, clockwise from the top-left corner.
pub fn rod_labels(
    n: u32,
    m: u32,
    top_info: &[Label],
    bottom_info: &[Label],
) -> Result<LabelSteps, WangError> {
    let p = params(n, m);
    let info = (2 * n * (m - 1)) as usize;
    for v in [top_info, bottom_info] {
        if v.len() != info {
            return Err(WangError::InfoLength {
                expected: info,
                got: v.len(),
            });
        }
    }
    let half = |mark: Label,
                spacer: Label,
                close: Label,
                info: &mut dyn Iterator<Item = Label>,
                out: &mut Vec<Label>| {
        for _ in 0..n {
            out.push(mark);
            for _ in 1..m {
                out.push(info.next().unwrap());
                out.push(spacer);
            }
            out.push(close);
        }
        out.push(mark);
        out.push(close);
    };
    let side = |mark, spacer, close, mid, info: &[Label]| {
        let mut it = info.iter().copied();
        let mut out = Vec::new();
        half(mark, spacer, close, &mut it, &mut out);
        out.extend(std::iter::repeat_n(mid, (p.a + 2) as usize));
        half(mark, spacer, close, &mut it, &mut out);
        out
    };
    let top = side(Label::X01, Label::XA, Label::I0N, Label::MA, top_info);
    let bot = side(Label::Y, Label::YA, Label::J0N, Label::M, bottom_info);
    debug_assert_eq!(top.len() as i64, p.w);
    let mut s: LabelSteps = top.into_iter().map(|l| (Dir::R, l)).collect();
    s.push((Dir::D, Label::N));
    s.push((Dir::D, Label::One));
    s.extend(bot.into_iter().map(|l| (Dir::L, l)));
    s.push((Dir::U, Label::N));
    s.push((Dir::U, Label::Zero));
    Ok(s)
}

pub fn rod_labels_for(wts: &WangTileSet, m: u32) -> Result<LabelSteps, WangError> {
    let (top, bot) = rod_info(wts, m)?;
    rod_labels(wts.n(), m, &top, &bot)
}

/// Blade boundary, clockwise from the top-left corner of the left rectangle.
pub fn blade_labels(n: u32, m: u32) -> LabelSteps {
    use Dir::{D, R, U};
    use Label::*;
    const W: Dir = Dir::L;
    let p = params(n, m);
    let (w, a, h3) = (p.w as usize, p.a as usize, (p.h - 3) as usize);
    let runs: [(Dir, Label, usize); 24] = [
        (R, L, w),
        (D, XP, 1),
        (D, LA, a),
        (R, LA, w),
        (U, LA, a + 1),
        (U, YP, 1),
        (U, LA, 1),
        (R, L, w),
        (D, XP, 1),
        (D, L, h3),
        (D, XP, 1),
        (D, L, 1),
        (W, L, w),
        (U, YP, 1),
        (U, LA, a),
        (W, LA, w),
        (D, LA, a + 1),
        (D, XP, 1),
        (D, LA, 1),
        (W, L, w),
        (U, YP, 1),
        (U, L, h3),
        (U, YP, 1),
        (U, L, 1),
    ];
    runs.iter()
        .flat_map(|&(d, l, k)| std::iter::repeat_n((d, l), k))
        .collect()
}

fn turns_to(d: Dir) -> u8 {
    match d {
        Dir::R => 0,
        Dir::D => 1,
        Dir::L => 2,
        Dir::U => 3,
    }
}

/// Expands label steps into a cell-level boundary word.
pub fn expand(steps: &[(Dir, Label)]) -> BoundaryWord {
    let mut w = BoundaryWord::new();
    for &(d, l) in steps {
        w.extend(&l.word().rotated_cw(turns_to(d)));
    }
    w.normalized()
}

pub fn rod_word(wts: &WangTileSet) -> Result<BoundaryWord, WangError> {
    Ok(expand(&rod_labels_for(wts, wts.m)?))
}

pub fn blade_word(n: u32, m: u32) -> BoundaryWord {
    expand(&blade_labels(n, m))
}

/// A piece at label resolution: unit cells plus the label on each boundary side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelShape {
    pub cells: Vec<(i64, i64)>,
    pub edges: Vec<((i64, i64), Side, Label)>,
}

impl LabelShape {
    /// Traces label steps from the origin; the path must be clockwise.
    pub fn trace(steps: &[(Dir, Label)]) -> Result<Self, WangError> {
        let (mut x, mut y) = (0i64, 0i64);
        let mut edges = Vec::with_capacity(steps.len());
        let mut word = BoundaryWord::new();
        for &(d, l) in steps {
            let e = match d {
                Dir::R => ((x, y - 1), Side::N),
                Dir::D => ((x - 1, y - 1), Side::E),
                Dir::L => ((x - 1, y), Side::S),
                Dir::U => ((x, y), Side::W),
            };
            edges.push((e.0, e.1, l));
            word.push(d, 1);
            let (dx, dy) = d.delta();
            x += dx;
            y += dy;
        }
        let poly = Polyomino::fill_word(&word)?;
        if word.signed_area2() >= 0 {
            return Err(WangError::Grid(GridError::Open(x, y)));
        }
        let cells = poly.cells().map(|c| (c.x, c.y)).collect();
        Ok(LabelShape { cells, edges })
    }

    /// Counter-clockwise quarter turns, (x, y) -> (-y - 1, x), renormalised to the min corner.
    pub fn rotate(&self, k: u8) -> (LabelShape, (i64, i64)) {
        let rot = |(x, y): (i64, i64)| {
            let (mut x, mut y) = (x, y);
            for _ in 0..k % 4 {
                (x, y) = (-y - 1, x);
            }
            (x, y)
        };
        let cells: Vec<(i64, i64)> = self.cells.iter().map(|&c| rot(c)).collect();
        let mx = cells.iter().map(|c| c.0).min().unwrap();
        let my = cells.iter().map(|c| c.1).min().unwrap();
        let shape = LabelShape {
            cells: cells.iter().map(|&(x, y)| (x - mx, y - my)).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(c, s, l)| {
                    let (x, y) = rot(c);
                    ((x - mx, y - my), s.ccw(k), l)
                })
                .collect(),
        };
        (shape, (mx, my))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Rotation,
    Translation,
}

#[derive(Clone, Debug)]
pub struct EncodedPiece {
    pub name: String,
    pub rot: u8,
    pub poly: Polyomino,
    /// Min corner of the piece rotated about the word origin; canonical = raw rotation minus this.
    pub frame_min: (i64, i64),
}

/// Bounds of a raw counter-clockwise rotation, from the unrotated bounds.
pub fn rotated_bounds(b: (i64, i64, i64, i64), k: u8) -> (i64, i64, i64, i64) {
    let mut b = b;
    for _ in 0..k % 4 {
        b = (-b.3, b.0, -b.1, b.2);
    }
    b
}

#[derive(Clone, Debug)]
pub struct EncodedPieceSet {
    pub mode: Mode,
    pub wts: WangTileSet,
    /// Color count used for the rod sections; at least 2.
    pub m_eff: u32,
    pub rod_word: BoundaryWord,
    pub blade_word: BoundaryWord,
    pub pieces: Vec<EncodedPiece>,
    /// Orientations the structures of this tile set actually use.
    pub census: Census,
}

/// Section width used when laying out the structure. With a single color the rod
/// has no information labels and blade walls in one column abut with L against L,
/// which never matches, so one padding color is added.
pub fn effective_colors(m: u32) -> u32 {
    m.max(2)
}

/// Rod orientations of the translation-only set: upright wire, meat, and the half-turned filler and wire.
pub const ROD_ROTATIONS: [u8; 3] = [0, 1, 2];

pub fn rod_name(rot: u8) -> &'static str {
    match rot % 4 {
        0 => "rod",
        1 => "rod90",
        2 => "rod180",
        _ => "rod270",
    }
}

pub fn encode(wts: &WangTileSet, mode: Mode) -> Result<EncodedPieceSet, WangError> {
    let m_eff = effective_colors(wts.m);
    let rod_word = expand(&rod_labels_for(wts, m_eff)?);
    let blade_word = blade_word(wts.n(), m_eff);
    let census = crate::structure::orientation_census(wts, m_eff)?;
    if !census.rods.iter().all(|r| ROD_ROTATIONS.contains(r))
        || census.blades.iter().any(|&b| b != 0)
    {
        return Err(WangError::Census {
            rods: census.rods.len(),
            blades: census.blades.len(),
        });
    }
    let rod_raw = Polyomino::fill_word(&rod_word)?;
    let blade_raw = Polyomino::fill_word(&blade_word)?;
    let (rb, bb) = (rod_raw.bounds(), blade_raw.bounds());
    let rod = rod_raw.normalized();
    let blade = blade_raw.normalized();
    let piece = |name: &str, rot: u8, base: &Polyomino, b| {
        let r = rotated_bounds(b, rot);
        EncodedPiece {
            name: name.into(),
            rot,
            poly: base.rotate(rot),
            frame_min: (r.0, r.1),
        }
    };
    let mut pieces = vec![EncodedPiece {
        name: "tooth".into(),
        rot: 0,
        poly: make_tooth(),
        frame_min: (0, 0),
    }];
    match mode {
        Mode::Rotation => {
            pieces.push(piece("rod", 0, &rod, rb));
            pieces.push(piece("blade", 0, &blade, bb));
        }
        Mode::Translation => {
            for &r in &ROD_ROTATIONS {
                pieces.push(piece(rod_name(r), r, &rod, rb));
            }
            pieces.push(piece("blade", 0, &blade, bb));
        }
    }
    Ok(EncodedPieceSet {
        mode,
        wts: wts.clone(),
        m_eff,
        rod_word,
        blade_word,
        pieces,
        census,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub rods: BTreeSet<u8>,
    pub blades: BTreeSet<u8>,
}
