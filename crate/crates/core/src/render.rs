use std::fmt::Write as _;

use crate::grid::{Polyomino, RegionKind};
use crate::structure::Role;
use crate::validate::Tiling;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorBy {
    Piece,
    Role,
    Orientation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderSpec {
    /// Pixels per cell.
    pub cell: f64,
    pub color_by: ColorBy,
    /// Cell window (x0, y0, x1, y1), max exclusive.
    pub clip: Option<(i64, i64, i64, i64)>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell: 10.0,
            color_by: ColorBy::Piece,
            clip: None,
        }
    }
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

fn role_color(r: Role) -> &'static str {
    match r {
        Role::Blade => "#4e79a7",
        Role::Meat => "#e15759",
        Role::Filler => "#bab0ac",
        Role::Wire => "#59a14f",
        Role::Tooth => "#edc948",
    }
}

/// Rectangles (x0, y0, x1, y1) covering the piece, merging rows with identical spans.
pub fn rectangles(p: &Polyomino) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    let mut open: Vec<(i64, i64, i64)> = Vec::new();
    let mut last_y = None;
    for r in p.rows() {
        let contiguous = last_y == Some(r.y - 1);
        let mut next = Vec::new();
        for &(a, b) in &r.spans {
            match open
                .iter()
                .position(|&(oa, ob, _)| contiguous && oa == a && ob == b)
            {
                Some(i) => next.push(open.swap_remove(i)),
                None => next.push((a, b, r.y)),
            }
        }
        let y = last_y.unwrap_or(0) + 1;
        out.extend(open.drain(..).map(|(a, b, y0)| (a, y0, b, y)));
        open = next;
        last_y = Some(r.y);
    }
    if let Some(y) = last_y {
        out.extend(open.drain(..).map(|(a, b, y0)| (a, y0, b, y + 1)));
    }
    out
}

type Rects = Vec<(i64, i64, i64, i64)>;
type ShapeCache = Vec<Vec<Option<(Rects, (i64, i64))>>>;

struct Canvas {
    spec: RenderSpec,
    view: (i64, i64, i64, i64),
    body: String,
}

impl Canvas {
    fn new(spec: RenderSpec, view: (i64, i64, i64, i64)) -> Self {
        Canvas {
            spec,
            view,
            body: String::new(),
        }
    }

    fn rect(&mut self, r: (i64, i64, i64, i64), fill: &str) {
        let (vx0, vy0, vx1, vy1) = self.view;
        let (x0, y0, x1, y1) = (r.0.max(vx0), r.1.max(vy0), r.2.min(vx1), r.3.min(vy1));
        if x0 >= x1 || y0 >= y1 {
            return;
        }
        let c = self.spec.cell;
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            (x0 - vx0) as f64 * c,
            (vy1 - y1) as f64 * c,
            (x1 - x0) as f64 * c,
            (y1 - y0) as f64 * c,
        );
    }

    fn finish(self) -> String {
        let (x0, y0, x1, y1) = self.view;
        let c = self.spec.cell;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" shape-rendering=\"crispEdges\">\n{}</svg>\n",
            (x1 - x0) as f64 * c,
            (y1 - y0) as f64 * c,
            self.body
        )
    }
}

/// Pieces side by side along the x axis, one cell apart.
pub fn render_pieces(pieces: &[Polyomino], spec: RenderSpec) -> String {
    let mut x = 0;
    let mut placed = Vec::new();
    for p in pieces {
        let p = p.normalized();
        let (w, _) = p.bbox();
        placed.push((x, p));
        x += w + 1;
    }
    let h = placed.iter().map(|(_, p)| p.bbox().1).max().unwrap_or(0);
    let view = spec.clip.unwrap_or((0, 0, (x - 1).max(1), h.max(1)));
    let mut cv = Canvas::new(spec, view);
    for (i, (dx, p)) in placed.iter().enumerate() {
        for r in rectangles(p) {
            cv.rect((r.0 + dx, r.1, r.2 + dx, r.3), PALETTE[i % PALETTE.len()]);
        }
    }
    cv.finish()
}

/// The tiling inside the clip window (default: the whole region); torus pieces are drawn wrapped.
pub fn render_tiling(
    t: &Tiling,
    pieces: &[Polyomino],
    roles: Option<&[Role]>,
    spec: RenderSpec,
) -> String {
    let (w, h) = (t.region.width, t.region.height);
    let view = spec.clip.unwrap_or((0, 0, w, h));
    let mut cv = Canvas::new(spec, view);
    let mut shapes: ShapeCache = vec![vec![None; 4]; pieces.len()];
    let shifts: Vec<(i64, i64)> = match t.region.kind {
        RegionKind::Torus => (-1..=1)
            .flat_map(|a| (-1..=1).map(move |b| (a * w, b * h)))
            .collect(),
        RegionKind::Rect => vec![(0, 0)],
    };
    for (i, p) in t.placements.iter().enumerate() {
        let Some(piece) = pieces.get(p.piece as usize) else {
            continue;
        };
        let slot = &mut shapes[p.piece as usize][(p.rot % 4) as usize];
        let (rects, bbox) = slot.get_or_insert_with(|| {
            let q = piece.rotate(p.rot);
            (rectangles(&q), q.bbox())
        });
        let fill = match (spec.color_by, roles) {
            (ColorBy::Role, Some(r)) => r.get(i).map_or(PALETTE[0], |&r| role_color(r)),
            (ColorBy::Orientation, _) => PALETTE[(p.rot % 4) as usize],
            _ => PALETTE[p.piece as usize % PALETTE.len()],
        };
        let (bx, by) = (p.dx.rem_euclid(w.max(1)), p.dy.rem_euclid(h.max(1)));
        let (bx, by) = match t.region.kind {
            RegionKind::Torus => (bx, by),
            RegionKind::Rect => (p.dx, p.dy),
        };
        for &(sx, sy) in &shifts {
            let (ox, oy) = (bx + sx, by + sy);
            if ox >= view.2 || oy >= view.3 || ox + bbox.0 <= view.0 || oy + bbox.1 <= view.1 {
                continue;
            }
            for r in rects.iter() {
                let r = (r.0 + ox, r.1 + oy, r.2 + ox, r.3 + oy);
                let r = match t.region.kind {
                    RegionKind::Torus => (r.0.max(0), r.1.max(0), r.2.min(w), r.3.min(h)),
                    RegionKind::Rect => r,
                };
                cv.rect(r, fill);
            }
        }
    }
    cv.finish()
}
