use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("empty word")]
    Empty,
    #[error("unknown letter '{0}' at offset {1}")]
    UnknownLetter(char, usize),
    #[error("zero repeat count at offset {0}")]
    ZeroCount(usize),
    #[error("word does not close: displacement ({0}, {1})")]
    Open(i64, i64),
    #[error("word revisits vertex ({0}, {1})")]
    SelfIntersecting(i64, i64),
    #[error("cell set is not edge-connected")]
    Disconnected,
    #[error("empty cell set")]
    NoCells,
}

/// Unit step direction, y pointing up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    R,
    U,
    L,
    D,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::R, Dir::U, Dir::L, Dir::D];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::R => (1, 0),
            Dir::U => (0, 1),
            Dir::L => (-1, 0),
            Dir::D => (0, -1),
        }
    }

    fn index(self) -> u8 {
        self as u8
    }

    fn from_index(i: u8) -> Dir {
        Dir::ALL[(i % 4) as usize]
    }

    pub fn ccw(self, k: u8) -> Dir {
        Dir::from_index(self.index() + k % 4)
    }

    /// r -> d -> l -> u -> r
    pub fn cw(self, k: u8) -> Dir {
        Dir::from_index(self.index() + 4 - k % 4)
    }

    pub fn reverse(self) -> Dir {
        self.ccw(2)
    }

    pub fn letter(self) -> char {
        match self {
            Dir::R => 'r',
            Dir::U => 'u',
            Dir::L => 'l',
            Dir::D => 'd',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        match c {
            'r' => Some(Dir::R),
            'u' => Some(Dir::U),
            'l' => Some(Dir::L),
            'd' => Some(Dir::D),
            _ => None,
        }
    }
}

/// Side of a cell. Same numbering as `Dir`: the side a step in that direction exits through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    E,
    N,
    W,
    S,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::E, Side::N, Side::W, Side::S];

    pub fn delta(self) -> (i64, i64) {
        self.dir().delta()
    }

    pub fn dir(self) -> Dir {
        Dir::ALL[self as usize]
    }

    pub fn opposite(self) -> Side {
        Side::ALL[(self as usize + 2) % 4]
    }

    pub fn ccw(self, k: u8) -> Side {
        Side::ALL[(self as usize + k as usize) % 4]
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

pub const TOOTH_T: &str = "r2 d2 r u2 r2 u l2 u2 l d2 l2";
pub const TOOTH_TBAR: &str = "l2 d2 l u2 l2 u r2 u2 r d2 r2";
pub const TOOTH_WORD: &str = "r2 d2 r u2 r2 u l2 u2 l d2 l2 d";

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BoundaryWord {
    pub steps: Vec<(Dir, u32)>,
}

impl BoundaryWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<(Dir, u32)>) -> Self {
        BoundaryWord { steps }
    }

    pub fn parse(text: &str) -> Result<Self, GridError> {
        let mut w = BoundaryWord::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            i += 1;
            let mut count: Option<u64> = None;
            while i < chars.len() && chars[i].is_ascii_digit() {
                let d = chars[i].to_digit(10).unwrap() as u64;
                count = Some(count.unwrap_or(0).saturating_mul(10).saturating_add(d));
                i += 1;
            }
            let n = count.unwrap_or(1);
            if n == 0 {
                return Err(GridError::ZeroCount(start));
            }
            let n = n.min(u32::MAX as u64) as u32;
            match c {
                't' | 'T' => {
                    let mac = if c == 't' { TOOTH_T } else { TOOTH_TBAR };
                    let m = BoundaryWord::parse(mac)?;
                    for _ in 0..n {
                        w.steps.extend_from_slice(&m.steps);
                    }
                }
                _ => match Dir::from_letter(c) {
                    Some(d) => w.steps.push((d, n)),
                    None => return Err(GridError::UnknownLetter(c, start)),
                },
            }
        }
        if w.steps.is_empty() {
            return Err(GridError::Empty);
        }
        Ok(w)
    }

    pub fn push(&mut self, d: Dir, n: u32) {
        if n > 0 {
            self.steps.push((d, n));
        }
    }

    pub fn extend(&mut self, other: &BoundaryWord) {
        self.steps.extend_from_slice(&other.steps);
    }

    pub fn normalized(&self) -> BoundaryWord {
        let mut out: Vec<(Dir, u32)> = Vec::with_capacity(self.steps.len());
        for &(d, n) in &self.steps {
            if n == 0 {
                continue;
            }
            match out.last_mut() {
                Some((ld, ln)) if *ld == d => *ln += n,
                _ => out.push((d, n)),
            }
        }
        BoundaryWord { steps: out }
    }

    pub fn emit(&self) -> String {
        let w = self.normalized();
        let mut s = String::new();
        for (i, &(d, n)) in w.steps.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push(d.letter());
            if n != 1 {
                s.push_str(&n.to_string());
            }
        }
        s
    }

    pub fn unit_len(&self) -> u64 {
        self.steps.iter().map(|&(_, n)| n as u64).sum()
    }

    pub fn displacement(&self) -> (i64, i64) {
        self.steps.iter().fold((0, 0), |(x, y), &(d, n)| {
            let (dx, dy) = d.delta();
            (x + dx * n as i64, y + dy * n as i64)
        })
    }

    pub fn is_closed(&self) -> bool {
        self.displacement() == (0, 0)
    }

    /// Same path walked backwards.
    pub fn reversed(&self) -> BoundaryWord {
        BoundaryWord {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|&(d, n)| (d.reverse(), n))
                .collect(),
        }
    }

    pub fn rotated_cw(&self, k: u8) -> BoundaryWord {
        BoundaryWord {
            steps: self.steps.iter().map(|&(d, n)| (d.cw(k), n)).collect(),
        }
    }

    pub fn rotated_ccw(&self, k: u8) -> BoundaryWord {
        BoundaryWord {
            steps: self.steps.iter().map(|&(d, n)| (d.ccw(k), n)).collect(),
        }
    }

    /// Lattice vertices visited, starting at the origin (start vertex included once).
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::with_capacity(self.unit_len() as usize + 1);
        let (mut x, mut y) = (0i64, 0i64);
        v.push((x, y));
        for &(d, n) in &self.steps {
            let (dx, dy) = d.delta();
            for _ in 0..n {
                x += dx;
                y += dy;
                v.push((x, y));
            }
        }
        v
    }

    /// True iff no vertex is visited twice, apart from start = end.
    pub fn is_simple(&self) -> Result<bool, GridError> {
        let (dx, dy) = self.displacement();
        if (dx, dy) != (0, 0) {
            return Err(GridError::Open(dx, dy));
        }
        Ok(self.first_revisit().is_none())
    }

    /// Open-path variant: no vertex visited twice at all, except a closing return to the start.
    pub fn is_self_avoiding(&self) -> bool {
        self.first_revisit().is_none()
    }

    fn first_revisit(&self) -> Option<(i64, i64)> {
        let v = self.vertices();
        let mut seen: HashSet<(i64, i64)> = HashSet::with_capacity(v.len());
        v[..v.len() - 1].iter().find(|&&p| !seen.insert(p)).copied()
    }

    /// Twice the signed shoelace area; positive for counter-clockwise paths.
    pub fn signed_area2(&self) -> i64 {
        let (mut x, mut y) = (0i64, 0i64);
        let mut a = 0i64;
        for &(d, n) in &self.steps {
            let (dx, dy) = d.delta();
            let (nx, ny) = (x + dx * n as i64, y + dy * n as i64);
            a += x * ny - nx * y;
            x = nx;
            y = ny;
        }
        a
    }
}

impl fmt::Display for BoundaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub y: i64,
    /// Half-open, sorted, disjoint, non-adjacent.
    pub spans: Vec<(i64, i64)>,
}

/// Cell set stored as per-row x-intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polyomino {
    rows: Vec<Row>,
}

fn merge_spans(mut v: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    v.retain(|&(a, b)| a < b);
    v.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn span_diff(a: &[(i64, i64)], b: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut j = 0;
    for &(s, e) in a {
        let mut cur = s;
        while j < b.len() && b[j].1 <= cur {
            j += 1;
        }
        let mut k = j;
        while cur < e {
            if k >= b.len() || b[k].0 >= e {
                out.push((cur, e));
                break;
            }
            let (bs, be) = b[k];
            if bs > cur {
                out.push((cur, bs));
            }
            cur = cur.max(be);
            k += 1;
        }
    }
    out
}

impl Polyomino {
    /// Builds from rows without the connectivity check; rows are merged and sorted.
    pub fn from_rows_unchecked(rows: impl IntoIterator<Item = (i64, Vec<(i64, i64)>)>) -> Self {
        let mut map: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
        for (y, spans) in rows {
            map.entry(y).or_default().extend(spans);
        }
        let rows = map
            .into_iter()
            .map(|(y, s)| Row {
                y,
                spans: merge_spans(s),
            })
            .filter(|r| !r.spans.is_empty())
            .collect();
        Polyomino { rows }
    }

    pub fn from_rows(
        rows: impl IntoIterator<Item = (i64, Vec<(i64, i64)>)>,
    ) -> Result<Self, GridError> {
        let p = Self::from_rows_unchecked(rows);
        p.check_connected()?;
        Ok(p)
    }

    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Result<Self, GridError> {
        let mut map: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
        for c in cells {
            map.entry(c.y).or_default().push((c.x, c.x + 1));
        }
        Self::from_rows(map)
    }

    /// Scanline parity fill of a closed simple word, in the word's own frame (start at origin).
    pub fn fill_word(w: &BoundaryWord) -> Result<Self, GridError> {
        let (dx, dy) = w.displacement();
        if (dx, dy) != (0, 0) {
            return Err(GridError::Open(dx, dy));
        }
        if let Some((x, y)) = w.first_revisit() {
            return Err(GridError::SelfIntersecting(x, y));
        }
        let mut cross: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let (mut x, mut y) = (0i64, 0i64);
        for &(d, n) in &w.steps {
            let n = n as i64;
            match d {
                Dir::U => {
                    for k in 0..n {
                        cross.entry(y + k).or_default().push(x);
                    }
                    y += n;
                }
                Dir::D => {
                    for k in 1..=n {
                        cross.entry(y - k).or_default().push(x);
                    }
                    y -= n;
                }
                Dir::R => x += n,
                Dir::L => x -= n,
            }
        }
        let rows = cross.into_iter().map(|(y, mut xs)| {
            xs.sort_unstable();
            let spans = xs.chunks(2).map(|c| (c[0], c[1])).collect();
            (y, spans)
        });
        let p = Self::from_rows_unchecked(rows);
        if p.rows.is_empty() {
            return Err(GridError::NoCells);
        }
        p.check_connected()?;
        Ok(p)
    }

    /// Fill, canonicalised to the origin.
    pub fn from_word(w: &BoundaryWord) -> Result<Self, GridError> {
        Ok(Self::fill_word(w)?.normalized())
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn area(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|r| r.spans.iter())
            .map(|&(a, b)| (b - a) as u64)
            .sum()
    }

    pub fn span_count(&self) -> usize {
        self.rows.iter().map(|r| r.spans.len()).sum()
    }

    /// (min_x, min_y, max_x, max_y), max exclusive.
    pub fn bounds(&self) -> (i64, i64, i64, i64) {
        if self.rows.is_empty() {
            return (0, 0, 0, 0);
        }
        let min_y = self.rows[0].y;
        let max_y = self.rows[self.rows.len() - 1].y + 1;
        let min_x = self.rows.iter().map(|r| r.spans[0].0).min().unwrap();
        let max_x = self
            .rows
            .iter()
            .map(|r| r.spans[r.spans.len() - 1].1)
            .max()
            .unwrap();
        (min_x, min_y, max_x, max_y)
    }

    pub fn bbox(&self) -> (i64, i64) {
        let (x0, y0, x1, y1) = self.bounds();
        (x1 - x0, y1 - y0)
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Polyomino {
        Polyomino {
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    y: r.y + dy,
                    spans: r.spans.iter().map(|&(a, b)| (a + dx, b + dx)).collect(),
                })
                .collect(),
        }
    }

    pub fn normalized(&self) -> Polyomino {
        let (x0, y0, _, _) = self.bounds();
        self.translate(-x0, -y0)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        match self.rows.binary_search_by_key(&y, |r| r.y) {
            Ok(i) => {
                let s = &self.rows[i].spans;
                let k = s.partition_point(|&(_, b)| b <= x);
                k < s.len() && s[k].0 <= x
            }
            Err(_) => false,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().flat_map(|r| {
            r.spans
                .iter()
                .flat_map(move |&(a, b)| (a..b).map(move |x| Cell::new(x, r.y)))
        })
    }

    /// (x, y) -> (y, x), cost proportional to the boundary length.
    pub fn transposed(&self) -> Polyomino {
        let mut cols: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
        let mut starts: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let empty: Vec<(i64, i64)> = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let prev = if i > 0 && self.rows[i - 1].y == r.y - 1 {
                &self.rows[i - 1].spans
            } else {
                &empty
            };
            let next = if i + 1 < self.rows.len() && self.rows[i + 1].y == r.y + 1 {
                &self.rows[i + 1].spans
            } else {
                &empty
            };
            for (a, b) in span_diff(&r.spans, prev) {
                for x in a..b {
                    starts.entry(x).or_default().push(r.y);
                }
            }
            for (a, b) in span_diff(&r.spans, next) {
                for x in a..b {
                    let s = starts.get_mut(&x).expect("run end without start");
                    let y0 = s.remove(0);
                    cols.entry(x).or_default().push((y0, r.y + 1));
                }
            }
        }
        Polyomino::from_rows_unchecked(cols)
    }

    /// x -> -x - 1
    pub fn mirrored_x(&self) -> Polyomino {
        Polyomino {
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    y: r.y,
                    spans: r.spans.iter().rev().map(|&(a, b)| (-b, -a)).collect(),
                })
                .collect(),
        }
    }

    /// Counter-clockwise quarter turns about the origin, (x, y) -> (-y - 1, x), not renormalised.
    pub fn rotated_raw(&self, k: u8) -> Polyomino {
        let mut p = self.clone();
        for _ in 0..k % 4 {
            p = p.transposed().mirrored_x();
        }
        p
    }

    /// Counter-clockwise quarter turns, canonicalised to the origin.
    pub fn rotate(&self, k: u8) -> Polyomino {
        self.rotated_raw(k).normalized()
    }

    pub fn congruent_by_translation(&self, other: &Polyomino) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn check_connected(&self) -> Result<(), GridError> {
        if self.rows.is_empty() {
            return Err(GridError::NoCells);
        }
        let mut base = Vec::with_capacity(self.rows.len());
        let mut total = 0usize;
        for r in &self.rows {
            base.push(total);
            total += r.spans.len();
        }
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 1..self.rows.len() {
            if self.rows[i].y != self.rows[i - 1].y + 1 {
                continue;
            }
            let (a, b) = (&self.rows[i - 1].spans, &self.rows[i].spans);
            let (mut p, mut q) = (0, 0);
            while p < a.len() && q < b.len() {
                if a[p].0 < b[q].1 && b[q].0 < a[p].1 {
                    let (x, y) = (
                        find(&mut parent, base[i - 1] + p),
                        find(&mut parent, base[i] + q),
                    );
                    parent[x] = y;
                }
                if a[p].1 < b[q].1 {
                    p += 1;
                } else {
                    q += 1;
                }
            }
        }
        let root = find(&mut parent, 0);
        for i in 1..total {
            if find(&mut parent, i) != root {
                return Err(GridError::Disconnected);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionKind {
    Rect,
    Torus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    pub kind: RegionKind,
    pub width: i64,
    pub height: i64,
}

impl Region {
    pub fn torus(width: i64, height: i64) -> Self {
        assert!(width > 0 && height > 0, "region must be non-empty");
        Region {
            kind: RegionKind::Torus,
            width,
            height,
        }
    }

    pub fn rect(width: i64, height: i64) -> Self {
        assert!(width > 0 && height > 0, "region must be non-empty");
        Region {
            kind: RegionKind::Rect,
            width,
            height,
        }
    }

    pub fn area(&self) -> u64 {
        (self.width * self.height) as u64
    }
}

/// Rotation is in counter-clockwise quarter turns, applied to the canonical piece before translating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub piece: u32,
    pub rot: u8,
    pub dx: i64,
    pub dy: i64,
}
