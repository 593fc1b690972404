use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::catalog::{matches, Label, LABEL_LENGTH, LABEL_SCALE};
use crate::grid::{Placement, Polyomino, Region, Side};
use crate::kl::{edge_residual, teeth_fill, KlError};
use crate::validate::Tiling;
use crate::wang::{
    blade_labels, color_section, effective_colors, encode, params, rod_labels_for, Census,
    EncodedPieceSet, LabelShape, Mode, Params, SectionSide, WangAssignment, WangError, WangTileSet,
};

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("assignment is not a valid Wang tiling: {0} defective cells")]
    InvalidAssignment(usize),
    #[error("tile index {0} out of range for {1} tiles")]
    BadTile(usize, u32),
    #[error("label layout has {overlaps} overlaps, {holes} holes, {mismatches} mismatched edges")]
    Labels {
        overlaps: usize,
        holes: usize,
        mismatches: usize,
    },
    #[error("labels {0} and {1} collide where they abut")]
    Collision(&'static str, &'static str),
    #[error("gap between labels {0} and {1} cannot be filled with teeth")]
    TeethFill(&'static str, &'static str),
    #[error(transparent)]
    Wang(#[from] WangError),
    #[error(transparent)]
    Kl(#[from] KlError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Rod,
    Blade,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Blade,
    Meat,
    Filler,
    Wire,
    Tooth,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Blade => "blade",
            Role::Meat => "meat",
            Role::Filler => "filler",
            Role::Wire => "wire",
            Role::Tooth => "tooth",
        }
    }
}

/// A piece placed at label resolution; (x, y) is the min corner of its rotated label cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelPlacement {
    pub kind: Kind,
    pub rot: u8,
    pub x: i64,
    pub y: i64,
    pub role: Role,
}

#[derive(Clone, Debug)]
pub struct StructureLayout {
    pub params: Params,
    pub m_eff: u32,
    /// Torus size in label units.
    pub width: i64,
    pub height: i64,
    pub placements: Vec<LabelPlacement>,
}

/// Wire rods for one section: label I_1N wants label 0 on its side, which the unrotated rod shows.
pub fn wire_layout(section: &[Label], x: i64, y0: i64) -> Vec<LabelPlacement> {
    section
        .iter()
        .enumerate()
        .map(|(j, &l)| LabelPlacement {
            kind: Kind::Rod,
            rot: if matches!(l, Label::I1N | Label::J0N) {
                0
            } else {
                2
            },
            x,
            y: y0 + 2 * j as i64,
            role: Role::Wire,
        })
        .collect()
}

/// Fillers and meat in the space column of the blade at (bx, by); tile t puts (n-1-t)m fillers below the meat.
pub fn block_layout(
    t: usize,
    p: &Params,
    bx: i64,
    by: i64,
) -> Result<Vec<LabelPlacement>, StructureError> {
    if t as i64 >= p.n {
        return Err(StructureError::BadTile(t, p.n as u32));
    }
    let rod = |rot, x, y, role| LabelPlacement {
        kind: Kind::Rod,
        rot,
        x,
        y,
        role,
    };
    let mut out = Vec::new();
    let below = (p.n - 1 - t as i64) * p.m;
    let y = by + p.h - 1 - p.a;
    for j in 0..below {
        out.push(rod(0, bx + p.w, y + 2 * j, Role::Filler));
    }
    let y0 = y + 2 * below;
    for c in 0..p.w / 2 {
        out.push(rod(1, bx + p.w + 2 * c, y0, Role::Meat));
    }
    for j in 0..t as i64 * p.m {
        out.push(rod(2, bx + p.w, y0 + p.w + 2 * j, Role::Filler));
    }
    Ok(out)
}

/// Smallest rectangular torus, in label units, on which the structure repeats, given
/// which Wang shifts (di, dj) are symmetries of the assignment.
pub fn domain_with(p: &Params, period: impl Fn(i64, i64) -> bool) -> (i64, i64) {
    let g = gcd(p.h + 2 * p.m, p.py);
    let (ua, ub) = ((p.h + 2 * p.m) / g, p.py / g);
    let mut s = 1;
    let beta = loop {
        let (alpha, beta) = (-ua * s, ub * s);
        if period(alpha + beta, alpha) {
            break beta;
        }
        s += 1;
    };
    let mut gamma = 1;
    while !period(gamma, gamma) {
        gamma += 1;
    }
    (2 * p.w * beta, p.py * gamma)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Torus size in cells for any assignment on a w x h Wang torus.
pub fn fundamental_domain(n: u32, m: u32, w: usize, h: usize) -> (i64, i64) {
    let p = params(n, effective_colors(m));
    let (w, h) = (w as i64, h as i64);
    let (x, y) = domain_with(&p, |di, dj| di.rem_euclid(w) == 0 && dj.rem_euclid(h) == 0);
    (x * LABEL_SCALE, y * LABEL_SCALE)
}

/// Blade lattice e1 = (0, py), e2 = (2w, h + 2m). Wang tile (i, j) sits at i*e2 + j*(e1 - e2).
pub fn layout(wts: &WangTileSet, asg: &WangAssignment) -> Result<StructureLayout, StructureError> {
    let defects = asg.defects(wts);
    if !defects.is_empty() {
        return Err(StructureError::InvalidAssignment(defects.len()));
    }
    let m = effective_colors(wts.m);
    let p = params(wts.n(), m);
    let (width, height) = domain_with(&p, |di, dj| asg.has_period(di, dj));
    let mut placements = Vec::new();
    for v in 0..width / (2 * p.w) {
        for u in 0..height / p.py {
            let (bx, by) = (v * 2 * p.w, u * p.py + v * (p.h + 2 * m as i64));
            let (i, j) = (u + v, u);
            let t = asg.get(i, j);
            let tile = wts.tiles[t];
            placements.push(LabelPlacement {
                kind: Kind::Blade,
                rot: 0,
                x: bx,
                y: by,
                role: Role::Blade,
            });
            let west = color_section(tile.w, m, SectionSide::I)?;
            placements.extend(wire_layout(&west, bx, by + p.h));
            let below = wts.tiles[asg.get(i - 1, j - 1)];
            let north = color_section(below.n, m, SectionSide::I)?;
            placements.extend(wire_layout(&north, bx, by - 2 * m as i64 + 2));
            placements.extend(block_layout(t, &p, bx, by)?);
        }
    }
    for pl in &mut placements {
        pl.x = pl.x.rem_euclid(width);
        pl.y = pl.y.rem_euclid(height);
    }
    Ok(StructureLayout {
        params: p,
        m_eff: m,
        width,
        height,
        placements,
    })
}

/// Rod and blade label shapes for every rotation the layout uses, with their rotation offsets.
pub struct ShapeBook {
    pub shapes: HashMap<(Kind, u8), (LabelShape, (i64, i64))>,
}

impl ShapeBook {
    pub fn new(wts: &WangTileSet, m: u32) -> Result<Self, StructureError> {
        let rod = LabelShape::trace(&rod_labels_for(wts, m)?)?;
        let blade = LabelShape::trace(&blade_labels(wts.n(), m))?;
        let mut shapes = HashMap::new();
        for r in 0..4 {
            shapes.insert((Kind::Rod, r), rod.rotate(r));
            shapes.insert((Kind::Blade, r), blade.rotate(r));
        }
        Ok(ShapeBook { shapes })
    }

    pub fn get(&self, kind: Kind, rot: u8) -> &(LabelShape, (i64, i64)) {
        &self.shapes[&(kind, rot % 4)]
    }
}

/// (cell, side, own label, neighbour label or None)
pub type Mismatch = ((i64, i64), Side, Label, Option<Label>);

#[derive(Clone, Debug, Default)]
pub struct LabelAuditReport {
    pub overlaps: usize,
    pub holes: usize,
    pub mismatches: Vec<Mismatch>,
    /// I/J labels facing 0 or 1, which makes their bit readable.
    pub info_read: usize,
    /// Reads where the 0 or 1 does not belong to a wire rod.
    pub stray_reads: usize,
    /// Neighbour labels seen by I/J labels.
    pub info_neighbours: BTreeMap<&'static str, usize>,
}

impl LabelAuditReport {
    pub fn ok(&self) -> bool {
        self.overlaps == 0 && self.holes == 0 && self.mismatches.is_empty()
    }
}

type LabelMap = HashMap<(i64, i64, Side), (Label, usize)>;

fn label_map(
    lay: &StructureLayout,
    book: &ShapeBook,
) -> (LabelMap, HashMap<(i64, i64), usize>, usize) {
    let (w, h) = (lay.width, lay.height);
    let mut occ: HashMap<(i64, i64), usize> = HashMap::new();
    let mut overlaps = 0;
    let mut labels = HashMap::new();
    for (pi, pl) in lay.placements.iter().enumerate() {
        let (shape, _) = book.get(pl.kind, pl.rot);
        for &(x, y) in &shape.cells {
            if occ
                .insert(((x + pl.x).rem_euclid(w), (y + pl.y).rem_euclid(h)), pi)
                .is_some()
            {
                overlaps += 1;
            }
        }
        for &((x, y), s, l) in &shape.edges {
            labels.insert(
                ((x + pl.x).rem_euclid(w), (y + pl.y).rem_euclid(h), s),
                (l, pi),
            );
        }
    }
    (labels, occ, overlaps)
}

fn is_info(l: Label) -> bool {
    matches!(l, Label::I0N | Label::I1N | Label::J0N | Label::J1N)
}

/// Label-resolution check of a layout: cover, matching on every abutting edge, and where bits are read.
pub fn label_audit(lay: &StructureLayout, book: &ShapeBook) -> LabelAuditReport {
    let (labels, occ, overlaps) = label_map(lay, book);
    let (w, h) = (lay.width, lay.height);
    let mut rep = LabelAuditReport {
        overlaps,
        holes: (w * h) as usize - occ.len(),
        ..Default::default()
    };
    let mut keys: Vec<_> = labels.keys().copied().collect();
    keys.sort_unstable();
    for (x, y, s) in keys {
        let (l, _) = labels[&(x, y, s)];
        let (dx, dy) = s.delta();
        let nb = ((x + dx).rem_euclid(w), (y + dy).rem_euclid(h), s.opposite());
        let other = labels.get(&nb).copied();
        match other {
            Some((o, _)) if matches(l, o) => {}
            _ => rep.mismatches.push(((x, y), s, l, other.map(|o| o.0))),
        }
        if let (true, Some((o, owner))) = (is_info(l), other) {
            *rep.info_neighbours.entry(o.name()).or_default() += 1;
            if matches!(o, Label::Zero | Label::One) {
                rep.info_read += 1;
                if lay.placements[owner].role != Role::Wire {
                    rep.stray_reads += 1;
                }
            }
        }
    }
    rep
}

/// Rod and blade orientations the layout uses, over every tile of the set.
pub fn orientation_census(wts: &WangTileSet, m: u32) -> Result<Census, WangError> {
    let p = params(wts.n(), m);
    let mut c = Census::default();
    c.blades.insert(0);
    for (t, tile) in wts.tiles.iter().enumerate() {
        let block = block_layout(t, &p, 0, 0).map_err(|_| WangError::Empty)?;
        let mut all = block;
        all.extend(wire_layout(
            &color_section(tile.w, m, SectionSide::I)?,
            0,
            0,
        ));
        all.extend(wire_layout(
            &color_section(tile.n, m, SectionSide::I)?,
            0,
            0,
        ));
        for pl in all {
            c.rods.insert(pl.rot);
        }
    }
    Ok(c)
}

pub fn census_of(lay: &StructureLayout) -> Census {
    let mut c = Census::default();
    for pl in &lay.placements {
        match pl.kind {
            Kind::Rod => c.rods.insert(pl.rot),
            Kind::Blade => c.blades.insert(pl.rot),
        };
    }
    c
}

#[derive(Clone, Debug)]
pub struct BuiltStructure {
    pub layout: StructureLayout,
    pub encoded: EncodedPieceSet,
    pub tiling: Tiling,
    pub roles: Vec<Role>,
    /// Index into `layout.placements` for rod and blade placements.
    pub source: Vec<Option<usize>>,
    pub census: Census,
    pub teeth: usize,
}

impl BuiltStructure {
    pub fn pieces(&self) -> Vec<Polyomino> {
        self.encoded.pieces.iter().map(|p| p.poly.clone()).collect()
    }

    pub fn piece_names(&self) -> Vec<String> {
        self.encoded.pieces.iter().map(|p| p.name.clone()).collect()
    }

    /// Cell placement of a label placement, or None if the set has no piece for that rotation.
    pub fn cell_placement(&self, pl: &LabelPlacement) -> Option<Placement> {
        cell_placement(&self.encoded, &self.book_offsets(), pl, self.tiling.region)
    }

    fn book_offsets(&self) -> Offsets {
        offsets(&self.encoded).unwrap_or_default()
    }
}

type Offsets = HashMap<(Kind, u8), (i64, i64)>;

fn offsets(enc: &EncodedPieceSet) -> Result<Offsets, StructureError> {
    let book = ShapeBook::new(&enc.wts, enc.m_eff)?;
    Ok(book.shapes.iter().map(|(&k, (_, off))| (k, *off)).collect())
}

fn cell_placement(
    enc: &EncodedPieceSet,
    offs: &Offsets,
    pl: &LabelPlacement,
    region: Region,
) -> Option<Placement> {
    let name = match pl.kind {
        Kind::Rod => crate::wang::rod_name(pl.rot),
        Kind::Blade => "blade",
    };
    let (idx, piece) = enc
        .pieces
        .iter()
        .enumerate()
        .find(|(_, p)| p.name == name && p.rot == pl.rot % 4)?;
    let (mx, my) = offs[&(pl.kind, pl.rot % 4)];
    let dx = LABEL_SCALE * (pl.x - mx) + piece.frame_min.0;
    let dy = LABEL_SCALE * (pl.y - my) + piece.frame_min.1;
    Some(Placement {
        piece: idx as u32,
        rot: 0,
        dx: dx.rem_euclid(region.width),
        dy: dy.rem_euclid(region.height),
    })
}

fn residual_depth() -> i64 {
    6 * LABEL_LENGTH as i64 + 4
}

/// Teeth offsets filling the gap between label `a` (lower piece) and `b` (upper piece), in the edge frame of `a`.
pub fn pair_teeth(a: Label, b: Label) -> Result<Vec<(i64, i64)>, StructureError> {
    let res = edge_residual(residual_depth(), &a.word(), &b.word())?
        .ok_or(StructureError::Collision(a.name(), b.name()))?;
    teeth_fill(&res).ok_or(StructureError::TeethFill(a.name(), b.name()))
}

/// Full cell-level structure: rods, blades and every tooth, on the torus of the layout.
pub fn build_structure(
    wts: &WangTileSet,
    asg: &WangAssignment,
) -> Result<BuiltStructure, StructureError> {
    let lay = layout(wts, asg)?;
    build_from_layout(wts, lay)
}

pub fn build_from_layout(
    wts: &WangTileSet,
    lay: StructureLayout,
) -> Result<BuiltStructure, StructureError> {
    let book = ShapeBook::new(wts, lay.m_eff)?;
    let audit = label_audit(&lay, &book);
    if !audit.ok() {
        return Err(StructureError::Labels {
            overlaps: audit.overlaps,
            holes: audit.holes,
            mismatches: audit.mismatches.len(),
        });
    }
    let enc = encode(wts, Mode::Translation)?;
    let census = census_of(&lay);
    let offs: Offsets = book.shapes.iter().map(|(&k, (_, off))| (k, *off)).collect();
    let region = Region::torus(lay.width * LABEL_SCALE, lay.height * LABEL_SCALE);
    let mut placements = Vec::new();
    let mut roles = Vec::new();
    let mut source = Vec::new();
    for (i, pl) in lay.placements.iter().enumerate() {
        let cp = cell_placement(&enc, &offs, pl, region).ok_or(WangError::Census {
            rods: census.rods.len(),
            blades: census.blades.len(),
        })?;
        placements.push(cp);
        roles.push(pl.role);
        source.push(Some(i));
    }
    let (labels, _, _) = label_map(&lay, &book);
    let mut keys: Vec<_> = labels
        .keys()
        .copied()
        .filter(|k| matches!(k.2, Side::N | Side::E))
        .collect();
    keys.sort_unstable();
    let mut cache: HashMap<(Label, Label), Vec<(i64, i64)>> = HashMap::new();
    let (w, h) = (lay.width, lay.height);
    let s = LABEL_SCALE;
    let tooth_idx = enc
        .pieces
        .iter()
        .position(|p| p.name == "tooth")
        .expect("tooth piece") as u32;
    let mut teeth = 0;
    for (x, y, side) in keys {
        let (a, _) = labels[&(x, y, side)];
        let (dx, dy) = side.delta();
        let (b, _) = labels[&(
            (x + dx).rem_euclid(w),
            (y + dy).rem_euclid(h),
            side.opposite(),
        )];
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry((a, b)) {
            e.insert(pair_teeth(a, b)?);
        }
        for &(ox, oy) in &cache[&(a, b)] {
            let (cx, cy) = (ox + 2, oy + 2);
            let (wx, wy) = match side {
                Side::N => (s * x + cx, s * (y + 1) + cy),
                _ => (s * (x + 1) + cy, s * (y + 1) - cx - 1),
            };
            placements.push(Placement {
                piece: tooth_idx,
                rot: 0,
                dx: (wx - 2).rem_euclid(region.width),
                dy: (wy - 2).rem_euclid(region.height),
            });
            roles.push(Role::Tooth);
            source.push(None);
            teeth += 1;
        }
    }
    Ok(BuiltStructure {
        layout: lay,
        encoded: enc,
        tiling: Tiling { region, placements },
        roles,
        source,
        census,
        teeth,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Turn the first wire rod around.
    FlipWire,
    /// Move the first rectangle's meat rods up by one slot (m filler heights).
    ShiftMeat,
    /// Move the first blade one cell to the right.
    ShiftBlade,
}

/// Applies a mutation to a built structure's placements; teeth stay where they were.
pub fn mutate(b: &BuiltStructure, m: Mutation) -> Tiling {
    let mut t = b.tiling.clone();
    let region = t.region;
    match m {
        Mutation::FlipWire => {
            let i = b
                .roles
                .iter()
                .position(|&r| r == Role::Wire)
                .expect("structure has wire rods");
            let mut pl = b.layout.placements[b.source[i].unwrap()];
            pl.rot = (pl.rot + 2) % 4;
            t.placements[i] = b.cell_placement(&pl).expect("rod rotation available");
        }
        Mutation::ShiftMeat => {
            let slot = 2 * b.layout.params.m * LABEL_SCALE;
            let first = b
                .roles
                .iter()
                .position(|&r| r == Role::Meat)
                .expect("structure has meat rods");
            let block = (b.layout.params.w / 2) as usize;
            for p in &mut t.placements[first..first + block] {
                p.dy = (p.dy + slot).rem_euclid(region.height);
            }
        }
        Mutation::ShiftBlade => {
            let i = b
                .roles
                .iter()
                .position(|&r| r == Role::Blade)
                .expect("structure has blades");
            t.placements[i].dx = (t.placements[i].dx + 1).rem_euclid(region.width);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::WangTile;

    fn single(c: u32) -> WangTileSet {
        WangTileSet::new(c, vec![WangTile::new(c, c, c, c)]).unwrap()
    }

    fn checkerboard() -> (WangTileSet, WangAssignment) {
        let wts = WangTileSet::new(
            2,
            vec![WangTile::new(1, 1, 2, 2), WangTile::new(2, 2, 1, 1)],
        )
        .unwrap();
        (wts, WangAssignment::new(2, 2, vec![0, 1, 1, 0]))
    }

    #[test]
    fn arrangements_distinct() {
        for (n, m) in [(1u32, 1u32), (2, 2), (4, 3)] {
            let p = params(n, m);
            let arr: std::collections::HashSet<Vec<(i64, i64, u8)>> = (0..n as usize)
                .map(|t| {
                    block_layout(t, &p, 0, 0)
                        .unwrap()
                        .iter()
                        .map(|q| (q.x, q.y, q.rot))
                        .collect()
                })
                .collect();
            assert_eq!(arr.len(), n as usize);
        }
        assert!(block_layout(2, &params(2, 2), 0, 0).is_err());
    }

    #[test]
    fn single_tile_layout_audits() {
        for m in 1..=3 {
            let wts = single(m);
            let lay = layout(&wts, &WangAssignment::new(1, 1, vec![0])).unwrap();
            let book = ShapeBook::new(&wts, lay.m_eff).unwrap();
            let a = label_audit(&lay, &book);
            assert!(a.ok(), "m={m}: {:?}", a.mismatches.len());
        }
    }

    #[test]
    fn checkerboard_layout_audits() {
        let (wts, asg) = checkerboard();
        let lay = layout(&wts, &asg).unwrap();
        assert_eq!((lay.width, lay.height), (832, 32));
        let book = ShapeBook::new(&wts, lay.m_eff).unwrap();
        assert!(label_audit(&lay, &book).ok());
    }

    #[test]
    fn wrong_orientation_mismatches() {
        let (wts, asg) = checkerboard();
        let mut lay = layout(&wts, &asg).unwrap();
        let book = ShapeBook::new(&wts, lay.m_eff).unwrap();
        let i = lay
            .placements
            .iter()
            .position(|p| p.role == Role::Wire)
            .unwrap();
        lay.placements[i].rot = (lay.placements[i].rot + 2) % 4;
        assert!(!label_audit(&lay, &book).mismatches.is_empty());
    }

    #[test]
    fn invalid_assignment_rejected() {
        let (wts, _) = checkerboard();
        let bad = WangAssignment::new(2, 1, vec![0, 0]);
        assert!(matches!(
            layout(&wts, &bad),
            Err(StructureError::InvalidAssignment(_))
        ));
    }

    #[test]
    fn domain_doubles() {
        let a = fundamental_domain(1, 1, 1, 1);
        let b = fundamental_domain(1, 1, 2, 2);
        assert_eq!((b.0, b.1), (2 * a.0, 2 * a.1));
    }

    #[test]
    fn census_three_rods_one_blade() {
        let (wts, _) = checkerboard();
        let c = orientation_census(&wts, 2).unwrap();
        assert_eq!(c.rods.into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(c.blades.len(), 1);
    }
}
