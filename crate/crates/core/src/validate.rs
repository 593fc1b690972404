use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::grid::{Cell, Placement, Polyomino, Region, RegionKind};

pub const REPORT_LIMIT: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidateError {
    #[error("placement {index} references unknown piece {piece}")]
    UnknownPiece { index: usize, piece: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub region: Region,
    pub placements: Vec<Placement>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub region_cells: u64,
    pub placed_cells: u64,
    pub overlap_cells: u64,
    pub hole_cells: u64,
    pub outside_cells: u64,
    /// First offending cells, row-major.
    pub overlaps: Vec<Cell>,
    pub holes: Vec<Cell>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.overlap_cells == 0 && self.hole_cells == 0 && self.outside_cells == 0
    }
}

/// Rotated copies of pieces, shared between calls.
#[derive(Default)]
pub struct RotationCache {
    map: HashMap<(u32, u8), Polyomino>,
}

impl RotationCache {
    pub fn get<'a>(&'a mut self, pieces: &[Polyomino], piece: u32, rot: u8) -> &'a Polyomino {
        self.map
            .entry((piece, rot % 4))
            .or_insert_with(|| pieces[piece as usize].rotate(rot))
    }
}

fn push_span(row: &mut Vec<(i64, i64)>, a: i64, b: i64, region: &Region, outside: &mut u64) {
    let w = region.width;
    match region.kind {
        RegionKind::Rect => {
            let (ca, cb) = (a.max(0), b.min(w));
            if cb > ca {
                row.push((ca, cb));
            }
            *outside += (b - a - (cb - ca).max(0)) as u64;
        }
        RegionKind::Torus => {
            let mut s = a.rem_euclid(w);
            let mut len = b - a;
            while len > 0 {
                let seg = len.min(w - s);
                row.push((s, s + seg));
                len -= seg;
                s = 0;
            }
        }
    }
}

/// Exact-cover check by per-row interval sweep.
pub fn validate(
    region: Region,
    pieces: &[Polyomino],
    placements: &[Placement],
) -> Result<ValidationReport, ValidateError> {
    for (index, p) in placements.iter().enumerate() {
        if p.piece as usize >= pieces.len() {
            return Err(ValidateError::UnknownPiece {
                index,
                piece: p.piece,
            });
        }
    }
    let mut cache = RotationCache::default();
    let mut rows: Vec<Vec<(i64, i64)>> = vec![Vec::new(); region.height as usize];
    let mut outside = 0u64;
    let mut placed = 0u64;
    for p in placements {
        let poly = cache.get(pieces, p.piece, p.rot);
        placed += poly.area();
        for r in poly.rows() {
            let y = r.y + p.dy;
            let yi = match region.kind {
                RegionKind::Torus => y.rem_euclid(region.height),
                RegionKind::Rect => {
                    if y < 0 || y >= region.height {
                        outside += r.spans.iter().map(|&(a, b)| (b - a) as u64).sum::<u64>();
                        continue;
                    }
                    y
                }
            };
            let row = &mut rows[yi as usize];
            for &(a, b) in &r.spans {
                push_span(row, a + p.dx, b + p.dx, &region, &mut outside);
            }
        }
    }
    let w = region.width;
    let per_row: Vec<(u64, u64, Vec<Cell>, Vec<Cell>)> = rows
        .par_iter_mut()
        .enumerate()
        .map(|(y, row)| {
            row.sort_unstable();
            let (mut ov, mut ho) = (0u64, 0u64);
            let (mut ovl, mut hol) = (Vec::new(), Vec::new());
            let mut cur = 0i64;
            let y = y as i64;
            for &(a, b) in row.iter() {
                if a < cur {
                    let e = b.min(cur);
                    ov += (e - a) as u64;
                    for x in a..e {
                        if ovl.len() >= REPORT_LIMIT {
                            break;
                        }
                        ovl.push(Cell::new(x, y));
                    }
                } else if a > cur {
                    ho += (a - cur) as u64;
                    for x in cur..a {
                        if hol.len() >= REPORT_LIMIT {
                            break;
                        }
                        hol.push(Cell::new(x, y));
                    }
                }
                cur = cur.max(b);
            }
            if cur < w {
                ho += (w - cur) as u64;
                for x in cur..w {
                    if hol.len() >= REPORT_LIMIT {
                        break;
                    }
                    hol.push(Cell::new(x, y));
                }
            }
            (ov, ho, ovl, hol)
        })
        .collect();
    let mut rep = ValidationReport {
        region_cells: region.area(),
        placed_cells: placed,
        outside_cells: outside,
        ..Default::default()
    };
    for (ov, ho, ovl, hol) in per_row {
        rep.overlap_cells += ov;
        rep.hole_cells += ho;
        let room = REPORT_LIMIT - rep.overlaps.len();
        rep.overlaps.extend(ovl.into_iter().take(room));
        let room = REPORT_LIMIT - rep.holes.len();
        rep.holes.extend(hol.into_iter().take(room));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono() -> Vec<Polyomino> {
        vec![Polyomino::from_cells([Cell::new(0, 0)]).unwrap()]
    }

    fn place(dx: i64, dy: i64) -> Placement {
        Placement {
            piece: 0,
            rot: 0,
            dx,
            dy,
        }
    }

    #[test]
    fn valid_toy() {
        let pl: Vec<_> = (0..2)
            .flat_map(|x| (0..2).map(move |y| place(x, y)))
            .collect();
        let r = validate(Region::rect(2, 2), &mono(), &pl).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.placed_cells, 4);
    }

    #[test]
    fn duplicate_overlaps() {
        let mut pl: Vec<_> = (0..2)
            .flat_map(|x| (0..2).map(move |y| place(x, y)))
            .collect();
        pl.push(place(1, 1));
        let r = validate(Region::rect(2, 2), &mono(), &pl).unwrap();
        assert_eq!(r.overlap_cells, 1);
        assert_eq!(r.overlaps, vec![Cell::new(1, 1)]);
    }

    #[test]
    fn holes_and_outside() {
        let r = validate(Region::rect(2, 1), &mono(), &[place(0, 0), place(5, 0)]).unwrap();
        assert_eq!(r.hole_cells, 1);
        assert_eq!(r.outside_cells, 1);
        assert_eq!(r.holes, vec![Cell::new(1, 0)]);
    }

    #[test]
    fn torus_wrap() {
        let bar = vec![Polyomino::from_rows(vec![(0, vec![(0, 3)])]).unwrap()];
        let pl = [Placement {
            piece: 0,
            rot: 0,
            dx: 2,
            dy: 5,
        }];
        assert!(validate(Region::torus(3, 1), &bar, &pl).unwrap().is_valid());
        let r = validate(Region::torus(2, 1), &bar, &pl).unwrap();
        assert_eq!(r.overlap_cells, 1);
    }

    #[test]
    fn rotation_applied() {
        let bar = vec![Polyomino::from_rows(vec![(0, vec![(0, 2)])]).unwrap()];
        let pl = [Placement {
            piece: 0,
            rot: 1,
            dx: 0,
            dy: 0,
        }];
        assert!(validate(Region::rect(1, 2), &bar, &pl).unwrap().is_valid());
    }

    #[test]
    fn unknown_piece() {
        let pl = [Placement {
            piece: 3,
            rot: 0,
            dx: 0,
            dy: 0,
        }];
        assert_eq!(
            validate(Region::rect(1, 1), &mono(), &pl),
            Err(ValidateError::UnknownPiece { index: 0, piece: 3 })
        );
    }
}
