use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::grid::{BoundaryWord, Cell, Dir, GridError, Polyomino, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlError {
    #[error("key index {k} outside 1..={l}")]
    InvalidKey { l: u32, k: u32 },
    #[error("lock index {x} outside 1..={l}")]
    InvalidLock { l: u32, x: u32 },
    #[error("empty lock index set")]
    EmptyLockSet,
    #[error("label length must be positive")]
    ZeroLength,
    #[error("key length {0} differs from lock length {1}")]
    LengthMismatch(u32, u32),
    #[error("scale {alpha} below minimum {min} for labels of length {l}")]
    ScaleTooSmall { alpha: u64, min: u64, l: u32 },
    #[error("{nodes} labels do not fit in length {l}")]
    TooManyLabels { nodes: usize, l: u32 },
    #[error("key index {0} used twice")]
    DuplicateKey(u32),
    #[error("key indices must cover 1..={0}")]
    KeyRange(usize),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("edge ({x}, {y}) {side:?} of piece '{piece}' has no node")]
    MissingEdge {
        piece: String,
        x: i64,
        y: i64,
        side: Side,
    },
    #[error("piece '{0}' boundary is not a single simple loop")]
    NotSimplyConnected(String),
    #[error("cannot decode label word: {0}")]
    Decode(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Cells of the cross, bottom tip first.
pub const TOOTH_CELLS: [(i64, i64); 9] = [
    (2, 0),
    (2, 1),
    (0, 2),
    (1, 2),
    (2, 2),
    (3, 2),
    (4, 2),
    (2, 3),
    (2, 4),
];

pub fn make_tooth() -> Polyomino {
    Polyomino::from_cells(TOOTH_CELLS.iter().map(|&(x, y)| Cell::new(x, y)))
        .expect("cross is connected")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KeySpec {
    pub l: u32,
    pub k: u32,
}

impl KeySpec {
    pub fn new(l: u32, k: u32) -> Result<Self, KlError> {
        if l == 0 {
            return Err(KlError::ZeroLength);
        }
        if k == 0 || k > l {
            return Err(KlError::InvalidKey { l, k });
        }
        Ok(KeySpec { l, k })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LockSpec {
    pub l: u32,
    pub set: Vec<u32>,
}

impl LockSpec {
    pub fn new(l: u32, set: &[u32]) -> Result<Self, KlError> {
        if l == 0 {
            return Err(KlError::ZeroLength);
        }
        if set.is_empty() {
            return Err(KlError::EmptyLockSet);
        }
        check_lock_range(l, set)?;
        let set: BTreeSet<u32> = set.iter().copied().collect();
        Ok(LockSpec {
            l,
            set: set.into_iter().collect(),
        })
    }
}

fn check_lock_range(l: u32, set: &[u32]) -> Result<(), KlError> {
    match set.iter().find(|&&x| x == 0 || x > l) {
        Some(&x) => Err(KlError::InvalidLock { l, x }),
        None => Ok(()),
    }
}

pub fn min_scale(l: u32) -> u64 {
    12 * l as u64 + 3
}

fn dent_depth(l: u32) -> u32 {
    6 * l - 2
}

fn lock_wall(l: u32, set: &[u32]) -> BoundaryWord {
    let h = dent_depth(l);
    let tooth = BoundaryWord::parse("t").unwrap();
    let mut xs: Vec<u32> = set.to_vec();
    xs.sort_unstable_by(|a, b| b.cmp(a));
    xs.dedup();
    let mut w = BoundaryWord::new();
    let mut cur = 0;
    for x in xs {
        let s = 6 * l + 1 - 6 * x;
        w.push(Dir::U, s - 1 - cur);
        w.extend(&tooth);
        cur = s;
    }
    w.push(Dir::U, h - cur);
    w
}

fn key_column(l: u32, k: u32) -> BoundaryWord {
    let h = dent_depth(l);
    let a = 6 * k - 3;
    let mut w = BoundaryWord::new();
    w.push(Dir::U, a);
    w.extend(&BoundaryWord::parse("T").unwrap());
    w.push(Dir::U, h - a - 1);
    w
}

/// Open edge segment of width 12l+3, key pointing up, lock first.
/// `lock = Some(&[])` gives a bare dent that no key fits; `None` leaves that part flat.
pub fn label_word(l: u32, key: Option<u32>, lock: Option<&[u32]>) -> BoundaryWord {
    let h = dent_depth(l);
    let mut w = BoundaryWord::new();
    match lock {
        Some(set) => {
            w.push(Dir::R, h);
            w.push(Dir::D, h);
            w.push(Dir::R, 1);
            w.extend(&lock_wall(l, set));
        }
        None => w.push(Dir::R, h + 1),
    }
    w.push(Dir::R, 5);
    match key {
        Some(k) => {
            w.extend(&key_column(l, k));
            w.push(Dir::R, 1);
            w.push(Dir::D, h);
            w.push(Dir::R, h);
        }
        None => w.push(Dir::R, h + 1),
    }
    w
}

/// `label_word` padded with flat runs to a total width of `alpha`, centred.
pub fn edge_word(
    l: u32,
    alpha: u64,
    key: Option<u32>,
    lock: Option<&[u32]>,
) -> Result<BoundaryWord, KlError> {
    let min = min_scale(l);
    if alpha < min {
        return Err(KlError::ScaleTooSmall { alpha, min, l });
    }
    let pad = alpha - min;
    let mut w = BoundaryWord::new();
    w.push(Dir::R, (pad / 2) as u32);
    w.extend(&label_word(l, key, lock));
    w.push(Dir::R, (pad - pad / 2) as u32);
    Ok(w.normalized())
}

pub fn make_key(spec: KeySpec) -> Result<Polyomino, KlError> {
    let spec = KeySpec::new(spec.l, spec.k)?;
    let mut w = key_column(spec.l, spec.k);
    w.push(Dir::R, 1);
    w.push(Dir::D, dent_depth(spec.l));
    w.push(Dir::L, 1);
    Ok(Polyomino::from_word(&w)?)
}

pub fn make_lock(spec: &LockSpec) -> Result<Polyomino, KlError> {
    let spec = LockSpec::new(spec.l, &spec.set)?;
    let mut w = BoundaryWord::new();
    w.push(Dir::D, dent_depth(spec.l));
    w.push(Dir::R, 1);
    w.extend(&lock_wall(spec.l, &spec.set));
    w.push(Dir::L, 1);
    Ok(Polyomino::from_word(&w)?)
}

pub fn key_lock_match_rule(k: KeySpec, s: &LockSpec) -> Result<bool, KlError> {
    if k.l != s.l {
        return Err(KlError::LengthMismatch(k.l, s.l));
    }
    Ok(s.set.contains(&k.k))
}

/// Cells left between two abutting labelled edges, in the frame of the lower edge `wa`
/// (traversed left to right, piece below). `wb` is the upper piece's word in its own frame.
/// Returns `None` when the two pieces overlap.
pub fn edge_residual(
    depth: i64,
    wa: &BoundaryWord,
    wb: &BoundaryWord,
) -> Result<Option<Vec<Cell>>, KlError> {
    let (wd, dy) = wa.displacement();
    if dy != 0 || wb.displacement() != (wd, 0) || wd <= 0 {
        return Err(KlError::Decode(
            "edge words must share a horizontal displacement".into(),
        ));
    }
    let mut pa = wa.clone();
    pa.push(Dir::D, depth as u32);
    pa.push(Dir::L, wd as u32);
    pa.push(Dir::U, depth as u32);
    let p = Polyomino::fill_word(&pa)?;
    let mut qb = wb.rotated_cw(2);
    qb.push(Dir::U, depth as u32);
    qb.push(Dir::R, wd as u32);
    qb.push(Dir::D, depth as u32);
    let q = Polyomino::fill_word(&qb)?.translate(wd, 0);
    let mut out = Vec::new();
    for y in -depth..depth {
        for x in 0..wd {
            match (p.contains(x, y), q.contains(x, y)) {
                (true, true) => return Ok(None),
                (false, false) => out.push(Cell::new(x, y)),
                _ => {}
            }
        }
    }
    Ok(Some(out))
}

/// Exact cover of `cells` by teeth. The lowest cell (by row, then column) of any cover
/// must be the bottom tip of a tooth, so the search never branches.
/// Returns the tooth offsets (translations of `make_tooth()`).
pub fn teeth_fill(cells: &[Cell]) -> Option<Vec<(i64, i64)>> {
    let mut set: BTreeSet<(i64, i64)> = cells.iter().map(|c| (c.y, c.x)).collect();
    let mut out = Vec::new();
    while let Some(&(y, x)) = set.iter().next() {
        let (ox, oy) = (x - TOOTH_CELLS[0].0, y - TOOTH_CELLS[0].1);
        for &(tx, ty) in &TOOTH_CELLS {
            if !set.remove(&(oy + ty, ox + tx)) {
                return None;
            }
        }
        out.push((ox, oy));
    }
    Some(out)
}

fn oracle_depth(l: u32) -> i64 {
    6 * l as i64 + 4
}

/// Geometric decision: push the key into the lock and try to fill what is left with teeth.
pub fn key_lock_match_oracle(k: KeySpec, s: &LockSpec) -> Result<bool, KlError> {
    if k.l != s.l {
        return Err(KlError::LengthMismatch(k.l, s.l));
    }
    let k = KeySpec::new(k.l, k.k)?;
    let s = LockSpec::new(s.l, &s.set)?;
    let lower = label_word(s.l, None, Some(&s.set));
    let upper = label_word(k.l, Some(k.k), None);
    Ok(match edge_residual(oracle_depth(k.l), &lower, &upper)? {
        None => false,
        Some(res) => teeth_fill(&res).is_some(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelDecode {
    pub l: u32,
    pub key: u32,
    pub lock: Vec<u32>,
    pub dent_area: u64,
    pub bump_area: u64,
}

impl LabelDecode {
    pub fn cavities(&self) -> usize {
        let extra = self.dent_area.saturating_sub(dent_depth(self.l) as u64);
        if !extra.is_multiple_of(9) {
            usize::MAX
        } else {
            (extra / 9) as usize
        }
    }
}

/// Reads key index and lock index set off the geometry of a label word.
pub fn decode_label_word(w: &BoundaryWord, l: u32) -> Result<LabelDecode, KlError> {
    let wd = min_scale(l) as i64;
    if w.displacement() != (wd, 0) {
        return Err(KlError::Decode(format!(
            "displacement {:?}, expected ({wd}, 0)",
            w.displacement()
        )));
    }
    if !w.is_self_avoiding() {
        return Err(KlError::Decode("word revisits a vertex".into()));
    }
    let depth = oracle_depth(l);
    let mut c = w.clone();
    c.push(Dir::D, depth as u32);
    c.push(Dir::L, wd as u32);
    c.push(Dir::U, depth as u32);
    let p = Polyomino::fill_word(&c)?;
    let mut below = 0u64;
    let mut above = 0u64;
    for r in p.rows() {
        let a: u64 = r.spans.iter().map(|&(s, e)| (e - s) as u64).sum();
        if r.y < 0 {
            below += a;
        } else {
            above += a;
        }
    }
    let dent_area = (wd * depth) as u64 - below;
    let l6 = 6 * l as i64;
    let lock: Vec<u32> = (1..=l)
        .filter(|&x| !p.contains(l6 + 3, -(6 * x as i64 - 2)))
        .collect();
    let keys: Vec<u32> = (1..=l)
        .filter(|&x| p.contains(l6 - 1, 6 * x as i64 - 3))
        .collect();
    if keys.len() != 1 {
        return Err(KlError::Decode(format!("found {} key teeth", keys.len())));
    }
    Ok(LabelDecode {
        l,
        key: keys[0],
        lock,
        dent_area,
        bump_area: above,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchingGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl MatchingGraph {
    pub fn new(nodes: &[&str]) -> Self {
        MatchingGraph {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: Vec::new(),
        }
    }

    pub fn node(&self, name: &str) -> Result<usize, KlError> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| KlError::UnknownNode(name.to_string()))
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), KlError> {
        let (a, b) = (self.node(a)?, self.node(b)?);
        self.edges.push((a, b));
        Ok(())
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }
}

/// Lock set of each node = keys of its neighbours (a self-loop adds its own key).
pub fn derive_index_sets(g: &MatchingGraph, keys: &[u32]) -> Result<Vec<Vec<u32>>, KlError> {
    if keys.len() != g.nodes.len() {
        return Err(KlError::KeyRange(g.nodes.len()));
    }
    let mut seen = BTreeSet::new();
    for &k in keys {
        if !seen.insert(k) {
            return Err(KlError::DuplicateKey(k));
        }
        if k == 0 || k as usize > keys.len() {
            return Err(KlError::KeyRange(keys.len()));
        }
    }
    let mut sets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); g.nodes.len()];
    for &(a, b) in &g.edges {
        sets[a].insert(keys[b]);
        sets[b].insert(keys[a]);
    }
    Ok(sets.into_iter().map(|s| s.into_iter().collect()).collect())
}

fn side_dir(s: Side) -> Dir {
    match s {
        Side::N => Dir::R,
        Side::E => Dir::D,
        Side::S => Dir::L,
        Side::W => Dir::U,
    }
}

/// Clockwise quarter turns taking a north edge word onto side `s`.
pub fn side_turns(s: Side) -> u8 {
    match s {
        Side::N => 0,
        Side::E => 1,
        Side::S => 2,
        Side::W => 3,
    }
}

type OutEdges = HashMap<(i64, i64), Vec<(Dir, Cell, Side)>>;

/// Unit boundary edges in clockwise order, starting with the north edge of the
/// leftmost cell of the top row.
pub fn unit_edges(p: &Polyomino) -> Option<Vec<(Cell, Side)>> {
    let mut out_edges: OutEdges = HashMap::new();
    let mut total = 0;
    for c in p.cells() {
        for s in Side::ALL {
            let (dx, dy) = s.delta();
            if p.contains(c.x + dx, c.y + dy) {
                continue;
            }
            let start = match s {
                Side::N => (c.x, c.y + 1),
                Side::E => (c.x + 1, c.y + 1),
                Side::S => (c.x + 1, c.y),
                Side::W => (c.x, c.y),
            };
            out_edges
                .entry(start)
                .or_default()
                .push((side_dir(s), c, s));
            total += 1;
        }
    }
    let top = p.rows().last()?;
    let first = Cell::new(top.spans[0].0, top.y);
    let mut order = vec![(first, Side::N)];
    let mut used: BTreeSet<(i64, i64, usize)> = BTreeSet::new();
    used.insert((first.x, first.y, Side::N.index()));
    let mut pos = (first.x + 1, first.y + 1);
    let mut dir = Dir::R;
    let start = (first.x, first.y + 1);
    while pos != start {
        let cands = out_edges.get(&pos)?;
        let pick = [dir.cw(1), dir, dir.ccw(1)].iter().find_map(|&d| {
            cands
                .iter()
                .find(|e| e.0 == d && !used.contains(&(e.1.x, e.1.y, e.2.index())))
        })?;
        let (d, c, s) = *pick;
        used.insert((c.x, c.y, s.index()));
        order.push((c, s));
        let (dx, dy) = d.delta();
        pos = (pos.0 + dx, pos.1 + dy);
        dir = d;
    }
    if order.len() != total {
        return None;
    }
    Some(order)
}

#[derive(Clone, Debug)]
pub struct PieceInput {
    pub name: String,
    pub poly: Polyomino,
    /// Node of the matching graph for each unit boundary edge.
    pub edge_nodes: Vec<((Cell, Side), usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabel {
    pub cell: Cell,
    pub side: Side,
    pub node: usize,
    pub key: u32,
    pub lock: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct LabeledPiece {
    pub name: String,
    pub word: BoundaryWord,
    /// Canonical (origin-normalised) labelled polyomino.
    pub poly: Polyomino,
    /// Canonical coordinates of the scaled unlabelled origin: scaled cell (x, y) sits at (x, y) + origin.
    pub origin: (i64, i64),
    pub edges: Vec<EdgeLabel>,
}

#[derive(Clone, Debug)]
pub struct LabeledPieceSet {
    pub l: u32,
    pub alpha: u64,
    pub keys: Vec<u32>,
    pub locks: Vec<Vec<u32>>,
    pub pieces: Vec<LabeledPiece>,
    pub tooth: Polyomino,
}

/// Scale every piece by `alpha` and put one key and one lock on each unit edge.
/// Node i gets key i+1. An empty lock set becomes a bare dent.
pub fn kl_label(
    pieces: &[PieceInput],
    g: &MatchingGraph,
    l: u32,
    alpha: u64,
) -> Result<LabeledPieceSet, KlError> {
    if l == 0 {
        return Err(KlError::ZeroLength);
    }
    if g.nodes.len() > l as usize {
        return Err(KlError::TooManyLabels {
            nodes: g.nodes.len(),
            l,
        });
    }
    let min = min_scale(l);
    if alpha < min {
        return Err(KlError::ScaleTooSmall { alpha, min, l });
    }
    let keys: Vec<u32> = (1..=g.nodes.len() as u32).collect();
    let locks = derive_index_sets(g, &keys)?;
    let a = alpha as i64;
    let mut out = Vec::new();
    for pi in pieces {
        let nodes: HashMap<(i64, i64, Side), usize> = pi
            .edge_nodes
            .iter()
            .map(|&((c, s), n)| ((c.x, c.y, s), n))
            .collect();
        let edges =
            unit_edges(&pi.poly).ok_or_else(|| KlError::NotSimplyConnected(pi.name.clone()))?;
        let mut word = BoundaryWord::new();
        let mut labels = Vec::new();
        for &(c, s) in &edges {
            let node = *nodes
                .get(&(c.x, c.y, s))
                .ok_or_else(|| KlError::MissingEdge {
                    piece: pi.name.clone(),
                    x: c.x,
                    y: c.y,
                    side: s,
                })?;
            let ew = edge_word(l, alpha, Some(keys[node]), Some(&locks[node]))?;
            word.extend(&ew.rotated_cw(side_turns(s)));
            labels.push(EdgeLabel {
                cell: c,
                side: s,
                node,
                key: keys[node],
                lock: locks[node].clone(),
            });
        }
        let word = word.normalized();
        let framed = Polyomino::fill_word(&word)?;
        let (fx, fy, _, _) = framed.bounds();
        let (c0, _) = edges[0];
        // word starts at scaled vertex (a*c0.x, a*(c0.y+1))
        let origin = (-a * c0.x - fx, -a * (c0.y + 1) - fy);
        out.push(LabeledPiece {
            name: pi.name.clone(),
            word,
            poly: framed.normalized(),
            origin,
            edges: labels,
        });
    }
    Ok(LabeledPieceSet {
        l,
        alpha,
        keys,
        locks,
        pieces: out,
        tooth: make_tooth(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cross_at(ox: i64, oy: i64) -> Vec<(i64, i64)> {
        TOOTH_CELLS.iter().map(|&(x, y)| (x + ox, y + oy)).collect()
    }

    #[test]
    fn tooth_is_symmetric_cross() {
        let t = make_tooth();
        assert_eq!(t.area(), 9);
        for k in 0..4 {
            assert_eq!(t.rotate(k), t);
        }
        let w = BoundaryWord::parse(crate::grid::TOOTH_WORD).unwrap();
        assert_eq!(Polyomino::from_word(&w).unwrap(), t);
    }

    #[test]
    fn key_areas() {
        assert_eq!(make_key(KeySpec { l: 3, k: 2 }).unwrap().area(), 25);
        assert_eq!(make_key(KeySpec { l: 1, k: 1 }).unwrap().area(), 13);
        assert_eq!(KeySpec::new(3, 4), Err(KlError::InvalidKey { l: 3, k: 4 }));
    }

    #[test]
    fn lock_areas() {
        assert_eq!(
            make_lock(&LockSpec::new(3, &[2, 3]).unwrap())
                .unwrap()
                .area(),
            34
        );
        assert_eq!(
            make_lock(&LockSpec::new(3, &[1, 2, 3]).unwrap())
                .unwrap()
                .area(),
            43
        );
        assert_eq!(LockSpec::new(3, &[]), Err(KlError::EmptyLockSet));
        assert_eq!(
            LockSpec::new(3, &[4]),
            Err(KlError::InvalidLock { l: 3, x: 4 })
        );
    }

    // Constructive shapes, independent of the word machinery.
    fn key_cells(l: u32, k: u32) -> HashSet<(i64, i64)> {
        let h = 6 * l as i64 - 2;
        let mut s: HashSet<_> = (0..h).map(|y| (0, y)).collect();
        let row = 6 * k as i64 - 3;
        s.extend(cross_at(-5, row - 2));
        s
    }

    fn lock_cells(l: u32, set: &[u32]) -> HashSet<(i64, i64)> {
        let h = 6 * l as i64 - 2;
        let mut s: HashSet<_> = (1..=h).map(|y| (0, -y)).collect();
        for &x in set {
            s.extend(cross_at(1, -(6 * x as i64 - 2) - 2));
        }
        s
    }

    fn norm(s: &HashSet<(i64, i64)>) -> HashSet<(i64, i64)> {
        let mx = s.iter().map(|p| p.0).min().unwrap();
        let my = s.iter().map(|p| p.1).min().unwrap();
        s.iter().map(|&(x, y)| (x - mx, y - my)).collect()
    }

    #[test]
    fn key_and_lock_match_constructive_shapes() {
        for l in 1..=4 {
            for k in 1..=l {
                let p = make_key(KeySpec { l, k }).unwrap();
                let got: HashSet<_> = p.cells().map(|c| (c.x, c.y)).collect();
                assert_eq!(got, norm(&key_cells(l, k)), "key l={l} k={k}");
            }
            for mask in 1u32..(1 << l) {
                let set: Vec<u32> = (1..=l).filter(|x| mask >> (x - 1) & 1 == 1).collect();
                let p = make_lock(&LockSpec::new(l, &set).unwrap()).unwrap();
                let got: HashSet<_> = p.cells().map(|c| (c.x, c.y)).collect();
                assert_eq!(got, norm(&lock_cells(l, &set)), "lock l={l} {set:?}");
            }
        }
    }

    #[test]
    fn rule_examples() {
        let s = LockSpec::new(3, &[2, 3]).unwrap();
        assert!(key_lock_match_rule(KeySpec { l: 3, k: 2 }, &s).unwrap());
        assert!(!key_lock_match_rule(KeySpec { l: 3, k: 1 }, &s).unwrap());
        let s1 = LockSpec::new(3, &[1]).unwrap();
        assert_eq!(
            key_lock_match_rule(KeySpec { l: 2, k: 1 }, &s1),
            Err(KlError::LengthMismatch(2, 3))
        );
    }

    #[test]
    fn oracle_examples() {
        let s = LockSpec::new(3, &[2, 3]).unwrap();
        assert!(key_lock_match_oracle(KeySpec { l: 3, k: 2 }, &s).unwrap());
        let s2 = LockSpec::new(2, &[2]).unwrap();
        assert!(!key_lock_match_oracle(KeySpec { l: 2, k: 1 }, &s2).unwrap());
        let lower = label_word(3, None, Some(&[2, 3]));
        let upper = label_word(3, Some(2), None);
        let res = edge_residual(22, &lower, &upper).unwrap().unwrap();
        assert_eq!(teeth_fill(&res).unwrap().len(), 1);
    }

    #[test]
    fn min_scale_values() {
        assert_eq!(min_scale(17), 207);
        assert_eq!(min_scale(1), 15);
        assert_eq!(min_scale(4), 51);
    }

    #[test]
    fn generic_words_decode() {
        for l in 1..=4 {
            for k in 1..=l {
                for mask in 1u32..(1 << l) {
                    let set: Vec<u32> = (1..=l).filter(|x| mask >> (x - 1) & 1 == 1).collect();
                    let w = label_word(l, Some(k), Some(&set));
                    assert_eq!(w.displacement(), (min_scale(l) as i64, 0));
                    let d = decode_label_word(&w, l).unwrap();
                    assert_eq!((d.key, &d.lock), (k, &set));
                    assert_eq!(d.cavities(), set.len());
                }
            }
        }
    }

    #[test]
    fn generic_generator_reproduces_catalog() {
        use crate::catalog::Label;
        for lab in Label::ALL {
            let w = label_word(17, Some(lab.key()), Some(&lab.lock_keys()));
            assert_eq!(w.normalized(), lab.word().normalized(), "{}", lab.name());
        }
    }

    fn fig3() -> MatchingGraph {
        let mut g = MatchingGraph::new(&["e1", "e2", "e3"]);
        g.add_edge("e1", "e1").unwrap();
        g.add_edge("e1", "e3").unwrap();
        g.add_edge("e2", "e3").unwrap();
        g
    }

    #[test]
    fn index_sets_from_graph() {
        let s = derive_index_sets(&fig3(), &[1, 2, 3]).unwrap();
        assert_eq!(s, vec![vec![1, 3], vec![3], vec![1, 2]]);
        let empty = MatchingGraph::new(&["a", "b"]);
        assert_eq!(
            derive_index_sets(&empty, &[1, 2]).unwrap(),
            vec![Vec::<u32>::new(), vec![]]
        );
        let mut k4 = MatchingGraph::new(&["a", "b", "c", "d"]);
        for a in ["a", "b", "c", "d"] {
            for b in ["a", "b", "c", "d"] {
                if a <= b {
                    k4.add_edge(a, b).unwrap();
                }
            }
        }
        for s in derive_index_sets(&k4, &[1, 2, 3, 4]).unwrap() {
            assert_eq!(s, vec![1, 2, 3, 4]);
        }
        assert_eq!(
            derive_index_sets(&fig3(), &[1, 1, 3]),
            Err(KlError::DuplicateKey(1))
        );
    }

    #[test]
    fn unit_edges_of_l_tromino() {
        let p = Polyomino::from_cells([Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)]).unwrap();
        let e = unit_edges(&p).unwrap();
        assert_eq!(e.len(), 8);
        assert_eq!(e[0], (Cell::new(0, 1), Side::N));
        assert_eq!(e[1], (Cell::new(0, 1), Side::E));
    }

    pub(crate) fn monomino_input() -> (PieceInput, MatchingGraph) {
        let g = {
            let mut g = MatchingGraph::new(&["N", "E", "S", "W"]);
            g.add_edge("N", "S").unwrap();
            g.add_edge("E", "W").unwrap();
            g
        };
        let c = Cell::new(0, 0);
        let pi = PieceInput {
            name: "sq".into(),
            poly: Polyomino::from_cells([c]).unwrap(),
            edge_nodes: vec![
                ((c, Side::N), 0),
                ((c, Side::E), 1),
                ((c, Side::S), 2),
                ((c, Side::W), 3),
            ],
        };
        (pi, g)
    }

    #[test]
    fn monomino_labeling_area() {
        let (pi, g) = monomino_input();
        let set = kl_label(&[pi], &g, 4, 51).unwrap();
        assert_eq!(set.pieces.len(), 1);
        let key = make_key(KeySpec { l: 4, k: 1 }).unwrap().area();
        let lock = make_lock(&LockSpec::new(4, &[3]).unwrap()).unwrap().area();
        assert_eq!(set.pieces[0].poly.area(), 51 * 51 + 4 * key - 4 * lock);
        let (ox, oy) = set.pieces[0].origin;
        assert!(set.pieces[0].poly.contains(ox + 25, oy + 25));
        assert!(matches!(
            kl_label(&[monomino_input().0], &g, 4, 50),
            Err(KlError::ScaleTooSmall { .. })
        ));
    }

    #[test]
    fn figure_eight_single_edge() {
        let w = label_word(3, Some(2), Some(&[2, 3]));
        let d = decode_label_word(&w, 3).unwrap();
        assert_eq!(d.key, 2);
        assert_eq!(d.lock, vec![2, 3]);
    }
}
