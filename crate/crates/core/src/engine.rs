use crate::grid::{Placement, Polyomino, Region, RegionKind};
use crate::validate::Tiling;
use crate::wang::{WangAssignment, WangTileSet};

/// One legal placement with the region cells it covers, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub placement: Placement,
    pub cells: Vec<u32>,
}

/// Every legal placement of a piece set in a finite region.
#[derive(Clone, Debug)]
pub struct Universe {
    pub region: Region,
    pub candidates: Vec<Candidate>,
}

impl Universe {
    /// Placements of each piece in each allowed rotation; rotations that repeat an earlier shape are skipped.
    pub fn new(region: Region, pieces: &[Polyomino], translation_only: bool) -> Self {
        let rots: &[u8] = if translation_only {
            &[0]
        } else {
            &[0, 1, 2, 3]
        };
        let mut candidates = Vec::new();
        let (w, h) = (region.width, region.height);
        for (pi, piece) in pieces.iter().enumerate() {
            let mut shapes: Vec<Polyomino> = Vec::new();
            for &r in rots {
                let poly = piece.rotate(r);
                if shapes.contains(&poly) {
                    continue;
                }
                shapes.push(poly.clone());
                let (bw, bh) = poly.bbox();
                let (xs, ys) = match region.kind {
                    RegionKind::Torus => (w, h),
                    RegionKind::Rect => (w - bw + 1, h - bh + 1),
                };
                let base: Vec<(i64, i64)> = poly.cells().map(|c| (c.x, c.y)).collect();
                for dy in 0..ys.max(0) {
                    for dx in 0..xs.max(0) {
                        let mut cells: Vec<u32> = base
                            .iter()
                            .map(|&(x, y)| {
                                ((y + dy).rem_euclid(h) * w + (x + dx).rem_euclid(w)) as u32
                            })
                            .collect();
                        cells.sort_unstable();
                        let n = cells.len();
                        cells.dedup();
                        if cells.len() != n {
                            continue;
                        }
                        let placement = Placement {
                            piece: pi as u32,
                            rot: r,
                            dx,
                            dy,
                        };
                        candidates.push(Candidate { placement, cells });
                    }
                }
            }
        }
        Universe { region, candidates }
    }

    pub fn retain(&mut self, f: impl Fn(&Candidate) -> bool) {
        self.candidates.retain(|c| f(c));
    }

    pub fn cell_count(&self) -> usize {
        self.region.area() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Tiling),
    None,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumOutcome {
    /// Every tiling of the universe.
    Complete(Vec<Tiling>),
    /// More than `cap` tilings exist; the first `cap` are returned.
    CapExceeded(Vec<Tiling>),
    BudgetExhausted(Vec<Tiling>),
}

impl EnumOutcome {
    pub fn tilings(&self) -> &[Tiling] {
        match self {
            EnumOutcome::Complete(t)
            | EnumOutcome::CapExceeded(t)
            | EnumOutcome::BudgetExhausted(t) => t,
        }
    }
}

/// Toroidal doubly linked exact-cover matrix (dancing links).
struct Links {
    l: Vec<u32>,
    r: Vec<u32>,
    u: Vec<u32>,
    d: Vec<u32>,
    col: Vec<u32>,
    row: Vec<u32>,
    size: Vec<u32>,
}

impl Links {
    fn new(cols: usize, rows: &[Candidate]) -> Self {
        let n = cols + 1 + rows.iter().map(|c| c.cells.len()).sum::<usize>();
        let mut s = Links {
            l: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            d: Vec::with_capacity(n),
            col: Vec::with_capacity(n),
            row: Vec::with_capacity(n),
            size: vec![0; cols + 1],
        };
        for i in 0..=cols as u32 {
            s.l.push(if i == 0 { cols as u32 } else { i - 1 });
            s.r.push(if i as usize == cols { 0 } else { i + 1 });
            s.u.push(i);
            s.d.push(i);
            s.col.push(i);
            s.row.push(u32::MAX);
        }
        for (ri, cand) in rows.iter().enumerate() {
            let first = s.l.len() as u32;
            let k = cand.cells.len() as u32;
            for (j, &cell) in cand.cells.iter().enumerate() {
                let c = cell + 1;
                let x = s.l.len() as u32;
                let j = j as u32;
                s.l.push(if j == 0 { first + k - 1 } else { x - 1 });
                s.r.push(if j + 1 == k { first } else { x + 1 });
                let up = s.u[c as usize];
                s.u.push(up);
                s.d.push(c);
                s.d[up as usize] = x;
                s.u[c as usize] = x;
                s.col.push(c);
                s.row.push(ri as u32);
                s.size[c as usize] += 1;
            }
        }
        s
    }

    fn cover(&mut self, c: u32) {
        let (l, r) = (self.l[c as usize], self.r[c as usize]);
        self.r[l as usize] = r;
        self.l[r as usize] = l;
        let mut i = self.d[c as usize];
        while i != c {
            let mut j = self.r[i as usize];
            while j != i {
                let (u, d) = (self.u[j as usize], self.d[j as usize]);
                self.d[u as usize] = d;
                self.u[d as usize] = u;
                self.size[self.col[j as usize] as usize] -= 1;
                j = self.r[j as usize];
            }
            i = self.d[i as usize];
        }
    }

    fn uncover(&mut self, c: u32) {
        let mut i = self.u[c as usize];
        while i != c {
            let mut j = self.l[i as usize];
            while j != i {
                let (u, d) = (self.u[j as usize], self.d[j as usize]);
                self.d[u as usize] = j;
                self.u[d as usize] = j;
                self.size[self.col[j as usize] as usize] += 1;
                j = self.l[j as usize];
            }
            i = self.u[i as usize];
        }
        let (l, r) = (self.l[c as usize], self.r[c as usize]);
        self.r[l as usize] = c;
        self.l[r as usize] = c;
    }

    /// Uncovered column with the fewest rows, lowest index on ties.
    fn choose(&self) -> Option<u32> {
        let mut c = self.r[0];
        if c == 0 {
            return None;
        }
        let mut best = c;
        while c != 0 {
            if self.size[c as usize] < self.size[best as usize] {
                best = c;
                if self.size[c as usize] == 0 {
                    break;
                }
            }
            c = self.r[c as usize];
        }
        Some(best)
    }
}

enum Stop {
    Cap,
    Budget,
}

struct Search<'a> {
    uni: &'a Universe,
    links: Links,
    stack: Vec<u32>,
    nodes: u64,
    budget: u64,
    cap: usize,
    first_only: bool,
    found: Vec<Tiling>,
}

impl Search<'_> {
    fn run(&mut self) -> Result<(), Stop> {
        let Some(c) = self.links.choose() else {
            if self.found.len() == self.cap {
                return Err(Stop::Cap);
            }
            let placements = self
                .stack
                .iter()
                .map(|&r| self.uni.candidates[r as usize].placement)
                .collect();
            self.found.push(Tiling {
                region: self.uni.region,
                placements,
            });
            return if self.first_only {
                Err(Stop::Cap)
            } else {
                Ok(())
            };
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Stop::Budget);
        }
        self.links.cover(c);
        let mut r = self.links.d[c as usize];
        let mut out = Ok(());
        while r != c {
            self.stack.push(self.links.row[r as usize]);
            let mut j = self.links.r[r as usize];
            while j != r {
                self.links.cover(self.links.col[j as usize]);
                j = self.links.r[j as usize];
            }
            out = self.run();
            let mut j = self.links.l[r as usize];
            while j != r {
                self.links.uncover(self.links.col[j as usize]);
                j = self.links.l[j as usize];
            }
            self.stack.pop();
            if out.is_err() {
                break;
            }
            r = self.links.d[r as usize];
        }
        self.links.uncover(c);
        out
    }
}

fn search(
    uni: &Universe,
    cap: usize,
    first_only: bool,
    budget: u64,
) -> (Vec<Tiling>, Option<Stop>, u64) {
    let mut s = Search {
        uni,
        links: Links::new(uni.cell_count(), &uni.candidates),
        stack: Vec::new(),
        nodes: 0,
        budget,
        cap,
        first_only,
        found: Vec::new(),
    };
    let stop = s.run().err();
    (s.found, stop, s.nodes)
}

/// First exact cover in deterministic search order.
pub fn solve(uni: &Universe, budget: u64) -> SolveOutcome {
    match search(uni, 1, true, budget) {
        (mut f, _, _) if !f.is_empty() => SolveOutcome::Found(f.remove(0)),
        (_, Some(Stop::Budget), _) => SolveOutcome::BudgetExhausted,
        _ => SolveOutcome::None,
    }
}

/// All exact covers, up to `cap`.
pub fn enumerate(uni: &Universe, cap: usize, budget: u64) -> EnumOutcome {
    match search(uni, cap, false, budget) {
        (f, None, _) => EnumOutcome::Complete(f),
        (f, Some(Stop::Cap), _) => EnumOutcome::CapExceeded(f),
        (f, Some(Stop::Budget), _) => EnumOutcome::BudgetExhausted(f),
    }
}

/// Search nodes used by an exhaustive enumeration, with the outcome.
pub fn enumerate_counted(uni: &Universe, cap: usize, budget: u64) -> (EnumOutcome, u64) {
    let (f, stop, nodes) = search(uni, cap, false, budget);
    let out = match stop {
        None => EnumOutcome::Complete(f),
        Some(Stop::Cap) => EnumOutcome::CapExceeded(f),
        Some(Stop::Budget) => EnumOutcome::BudgetExhausted(f),
    };
    (out, nodes)
}

/// Backtracking over cells in row-major order with wraparound constraints.
pub fn wang_solve_torus(wts: &WangTileSet, w: usize, h: usize) -> Option<WangAssignment> {
    if w == 0 || h == 0 || wts.tiles.is_empty() {
        return None;
    }
    let mut grid = vec![usize::MAX; w * h];
    fn fits(wts: &WangTileSet, grid: &[usize], w: usize, h: usize, k: usize, t: usize) -> bool {
        let (i, j) = (k % w, k / w);
        let tile = &wts.tiles[t];
        let at = |i: usize, j: usize| if j * w + i == k { t } else { grid[j * w + i] };
        let west = at((i + w - 1) % w, j);
        let south = at(i, (j + h - 1) % h);
        let east = at((i + 1) % w, j);
        let north = at(i, (j + 1) % h);
        (west == usize::MAX || wts.tiles[west].e == tile.w)
            && (south == usize::MAX || wts.tiles[south].n == tile.s)
            && (east == usize::MAX || wts.tiles[east].w == tile.e)
            && (north == usize::MAX || wts.tiles[north].s == tile.n)
    }
    fn go(wts: &WangTileSet, grid: &mut Vec<usize>, w: usize, h: usize, k: usize) -> bool {
        if k == grid.len() {
            return true;
        }
        for t in 0..wts.tiles.len() {
            if fits(wts, grid, w, h, k, t) {
                grid[k] = t;
                if go(wts, grid, w, h, k + 1) {
                    return true;
                }
                grid[k] = usize::MAX;
            }
        }
        false
    }
    go(wts, &mut grid, w, h, 0).then(|| WangAssignment::new(w, h, grid))
}

/// Smallest torus (by area, then width) up to `max` on a side that the set tiles.
pub fn wang_smallest_torus(wts: &WangTileSet, max: usize) -> Option<WangAssignment> {
    let mut dims: Vec<(usize, usize)> = (1..=max)
        .flat_map(|w| (1..=max).map(move |h| (w, h)))
        .collect();
    dims.sort_by_key(|&(w, h)| (w * h, w));
    dims.into_iter()
        .find_map(|(w, h)| wang_solve_torus(wts, w, h))
}
