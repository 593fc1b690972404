use std::process::ExitCode;
use std::time::{Duration, Instant};

use kltile::catalog::{audit_catalog, Label, LABEL_SCALE};
use kltile::engine::{
    enumerate_counted, wang_smallest_torus, wang_solve_torus, EnumOutcome, Universe,
};
use kltile::grid::TOOTH_WORD;
use kltile::kl::{key_lock_match_oracle, kl_label, KeySpec, LockSpec, MatchingGraph, PieceInput};
use kltile::plane::{rods_and_teeth_refutation, teeth_only_refutation, Verdict};
use kltile::structure::{build_structure, mutate, BuiltStructure, Mutation};
use kltile::validate::validate;
use kltile::wang::{
    blade_word, encode, params, rod_word, Mode, WangAssignment, WangTile, WangTileSet,
};
use kltile::{BoundaryWord, Cell, Polyomino, Region, Side};

const SECOND: Duration = Duration::from_secs(1);
const LIMIT_1: Duration = SECOND;
const LIMIT_2: Duration = SECOND;
const LIMIT_3: Duration = Duration::from_secs(30);
const LIMIT_4: Duration = Duration::from_secs(10);
const LIMIT_5: Duration = Duration::from_secs(600);
const LIMIT_6: Duration = Duration::from_secs(60);
const LIMIT_7: Duration = Duration::from_secs(300);
const LIMIT_8: Duration = Duration::from_secs(300);
const LIMIT_9: Duration = SECOND;
const LIMIT_10: Duration = Duration::from_secs(120);

/// Node budget for each exhaustive search of criterion 5.
const TOY_BUDGET: u64 = 50_000_000;
/// Window of criterion 10, in label units around the seed rod.
const ROD_WINDOW: i64 = 12;
/// Cells in the fundamental domain of the n=1, m=1 structure (224 x 16 labels of 207 x 207 cells).
const SINGLE_DOMAIN_CELLS: u64 = 224 * 16 * 207 * 207;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn crit1() -> Outcome {
    let rep = audit_catalog();
    check(rep.audits.len() == 17, "catalog does not have 17 labels")?;
    for a in &rep.audits {
        check(
            a.displacement == (LABEL_SCALE, 0),
            format!("{} displacement {:?}", a.label.name(), a.displacement),
        )?;
        check(
            a.simple,
            format!("{} is not a simple segment", a.label.name()),
        )?;
        check(
            a.decoded_lock == a.label.lock_keys(),
            format!("{} lock {:?}", a.label.name(), a.decoded_lock),
        )?;
    }
    let mut keys: Vec<u32> = rep.audits.iter().map(|a| a.decoded_key).collect();
    keys.sort_unstable();
    check(
        keys == (1..=17).collect::<Vec<_>>(),
        "decoded keys are not a bijection onto 1..17",
    )?;
    let mut pairs = 0;
    for a in &rep.audits {
        for b in &rep.audits {
            pairs += 1;
            check(
                a.decoded_lock.contains(&b.decoded_key) == b.decoded_lock.contains(&a.decoded_key),
                format!("asymmetric pair {} {}", a.label.name(), b.label.name()),
            )?;
        }
    }
    check(rep.ok(), format!("{:?}", rep.errors))?;
    Ok(format!(
        "17 words at (207,0), keys 1..17, locks equal table, {pairs} pairs symmetric"
    ))
}

fn crit2() -> Outcome {
    let cross: Vec<Cell> = [
        (2, 0),
        (2, 1),
        (0, 2),
        (1, 2),
        (2, 2),
        (3, 2),
        (4, 2),
        (2, 3),
        (2, 4),
    ]
    .iter()
    .map(|&(x, y)| Cell::new(x, y))
    .collect();
    let oracle = Polyomino::from_cells(cross).map_err(|e| e.to_string())?;
    let tooth = kltile::kl::make_tooth();
    check(tooth.area() == 9, "area is not 9")?;
    for k in 0..4 {
        check(
            tooth.rotate(k) == tooth,
            format!("not invariant under rotation {k}"),
        )?;
    }
    let filled = Polyomino::from_word(&BoundaryWord::parse(TOOTH_WORD).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    check(
        filled == oracle && tooth == oracle,
        "tooth differs from the cross or the word fill",
    )?;
    Ok("area 9, 4-fold symmetric, equals word fill".into())
}

fn crit3() -> Outcome {
    let mut pairs = 0;
    let mut disagreements = 0;
    for l in [2u32, 3] {
        for k in 1..=l {
            for mask in 1u32..1 << l {
                let set: Vec<u32> = (1..=l).filter(|x| mask >> (x - 1) & 1 == 1).collect();
                let spec = LockSpec::new(l, &set).map_err(|e| e.to_string())?;
                let geometric =
                    key_lock_match_oracle(KeySpec::new(l, k).map_err(|e| e.to_string())?, &spec)
                        .map_err(|e| e.to_string())?;
                pairs += 1;
                if geometric != set.contains(&k) {
                    disagreements += 1;
                }
            }
        }
    }
    check(pairs == 27, format!("{pairs} pairs, expected 27"))?;
    check(disagreements == 0, format!("{disagreements} disagreements"))?;
    Ok("27 key/lock pairs, 0 disagreements with k in S".into())
}

fn crit4() -> Outcome {
    let r = teeth_only_refutation(4).map_err(|e| e.to_string())?;
    check(
        r.verdict == Verdict::Dead,
        format!("verdict {:?}", r.verdict),
    )?;
    check(
        r.first_expansion().len() == 2,
        format!("{} depth-1 branches, expected 2", r.first_expansion().len()),
    )?;
    Ok(format!(
        "all branches dead after {} nodes, 2 depth-1 cases",
        r.nodes
    ))
}

fn monomino_toy(with_ew: bool, translation_only: bool) -> Result<(Vec<Polyomino>, u64), String> {
    let mut g = MatchingGraph::new(&["N", "E", "S", "W"]);
    g.add_edge("N", "S").map_err(|e| e.to_string())?;
    if with_ew {
        g.add_edge("E", "W").map_err(|e| e.to_string())?;
    }
    let c = Cell::new(0, 0);
    let input = PieceInput {
        name: "sq".into(),
        poly: Polyomino::from_cells([c]).map_err(|e| e.to_string())?,
        edge_nodes: vec![
            ((c, Side::N), 0),
            ((c, Side::E), 1),
            ((c, Side::S), 2),
            ((c, Side::W), 3),
        ],
    };
    let set = kl_label(std::slice::from_ref(&input), &g, 4, 51).map_err(|e| e.to_string())?;
    // P_G on the 1x1 torus: the square, in each allowed orientation, abuts itself N to S and E to W.
    let node = |s: Side| input.edge_nodes.iter().find(|e| e.0 .1 == s).unwrap().1;
    let rots: &[u8] = if translation_only {
        &[0]
    } else {
        &[0, 1, 2, 3]
    };
    let pg = rots
        .iter()
        .filter(|&&r| {
            let back = |s: Side| node(s.ccw(4 - r));
            g.adjacent(back(Side::N), back(Side::S)) && g.adjacent(back(Side::E), back(Side::W))
        })
        .count() as u64;
    Ok((vec![set.pieces[0].poly.clone(), set.tooth.clone()], pg))
}

fn crit5() -> Outcome {
    let mut lines = Vec::new();
    for (positive, translation_only, name) in [
        (true, true, "positive"),
        (false, true, "negative"),
        (true, false, "positive with rotations"),
        (false, false, "negative with rotations"),
    ] {
        let t = Instant::now();
        let (pieces, pg_count) = monomino_toy(positive, translation_only)?;
        let uni = Universe::new(Region::torus(51, 51), &pieces, translation_only);
        let (out, nodes) = enumerate_counted(&uni, usize::MAX, TOY_BUDGET);
        let tilings = match out {
            EnumOutcome::Complete(t) => t,
            EnumOutcome::BudgetExhausted(_) => {
                return Err(format!("{name}: node budget {TOY_BUDGET} exhausted"))
            }
            EnumOutcome::CapExceeded(_) => unreachable!("no cap"),
        };
        check(
            t.elapsed() <= LIMIT_5,
            format!("{name} took {:?}", t.elapsed()),
        )?;
        let area = pieces[0].area();
        for til in &tilings {
            let labeled: Vec<_> = til.placements.iter().filter(|p| p.piece == 0).collect();
            check(
                labeled.len() == 1,
                format!("{name}: {} labelled pieces on the 51-torus", labeled.len()),
            )?;
            let teeth = til.placements.len() as u64 - 1;
            check(
                area + 9 * teeth == 51 * 51,
                format!("{name}: area does not telescope"),
            )?;
            check(
                validate(til.region, &pieces, &til.placements)
                    .map_err(|e| e.to_string())?
                    .is_valid(),
                "invalid tiling",
            )?;
        }
        check(
            tilings.len() as u64 == 51 * 51 * pg_count,
            format!(
                "{name}: {} tilings, P_G has {pg_count} (expected {} translates)",
                tilings.len(),
                51 * 51 * pg_count
            ),
        )?;
        if positive {
            check(!tilings.is_empty(), "positive graph has no tiling")?;
        } else {
            check(tilings.is_empty(), "negative graph tiles")?;
        }
        lines.push(format!("{name} {} tilings ({nodes} nodes)", tilings.len()));
    }
    Ok(lines.join(", "))
}

fn synthetic_set(n: u32, m: u32) -> WangTileSet {
    let tiles = (0..n).map(|i| {
        let c = i % m + 1;
        WangTile::new(c, (c % m) + 1, c, (c % m) + 1)
    });
    WangTileSet::new(m, tiles.collect()).unwrap()
}

fn crit6() -> Outcome {
    for n in 1..=3u32 {
        for m in 1..=3u32 {
            let p = params(n, m);
            let rod = rod_word(&synthetic_set(n, m)).map_err(|e| e.to_string())?;
            let blade = blade_word(n, m);
            for (name, w) in [("rod", &rod), ("blade", &blade)] {
                check(w.is_closed(), format!("{name} n={n} m={m} not closed"))?;
                check(
                    w.is_simple() == Ok(true),
                    format!("{name} n={n} m={m} not simple"),
                )?;
                let poly = Polyomino::fill_word(w).map_err(|e| e.to_string())?;
                poly.check_connected()
                    .map_err(|e| format!("{name} n={n} m={m}: {e}"))?;
            }
            // The row between the rod's two label rows is untouched by any key or lock.
            let poly = Polyomino::fill_word(&rod).map_err(|e| e.to_string())?;
            let row = poly
                .rows()
                .iter()
                .find(|r| r.y == -LABEL_SCALE)
                .ok_or("rod has no middle row")?;
            let width: i64 = row.spans.iter().map(|(a, b)| b - a).sum();
            check(
                row.spans.len() == 1 && width == LABEL_SCALE * p.w,
                format!(
                    "rod n={n} m={m} base width {width}, expected {}",
                    LABEL_SCALE * p.w
                ),
            )?;
        }
    }
    Ok("9 (n,m) pairs: rod and blade closed, simple, connected, rod base 207((6n-2)m+6)".into())
}

fn single() -> WangTileSet {
    WangTileSet::new(1, vec![WangTile::new(1, 1, 1, 1)]).unwrap()
}

fn checkerboard() -> WangTileSet {
    WangTileSet::new(
        2,
        vec![WangTile::new(1, 1, 2, 2), WangTile::new(2, 2, 1, 1)],
    )
    .unwrap()
}

fn built(wts: &WangTileSet, asg: &WangAssignment) -> Result<BuiltStructure, String> {
    build_structure(wts, asg).map_err(|e| e.to_string())
}

fn crit7(cache: &mut Vec<BuiltStructure>) -> Outcome {
    let t = Instant::now();
    let wts = single();
    let asg = wang_solve_torus(&wts, 1, 1).ok_or("no 1x1 assignment")?;
    let b = built(&wts, &asg)?;
    let r =
        validate(b.tiling.region, &b.pieces(), &b.tiling.placements).map_err(|e| e.to_string())?;
    check(
        r.is_valid(),
        format!(
            "n=1 m=1: {} overlaps, {} holes",
            r.overlap_cells, r.hole_cells
        ),
    )?;
    check(
        r.region_cells == SINGLE_DOMAIN_CELLS,
        format!("domain {} cells", r.region_cells),
    )?;
    let cb = checkerboard();
    let asg2 = wang_smallest_torus(&cb, 4).ok_or("checkerboard has no small torus")?;
    check(
        (asg2.w, asg2.h) == (2, 2),
        "checkerboard minimal torus is not 2x2",
    )?;
    let b2 = built(&cb, &asg2)?;
    let r2 = validate(b2.tiling.region, &b2.pieces(), &b2.tiling.placements)
        .map_err(|e| e.to_string())?;
    check(
        r2.is_valid(),
        format!(
            "checkerboard: {} overlaps, {} holes",
            r2.overlap_cells, r2.hole_cells
        ),
    )?;
    check(t.elapsed() <= LIMIT_7, format!("took {:?}", t.elapsed()))?;
    let msg = format!(
        "n=1 m=1 valid on {} cells ({} teeth); checkerboard 2x2 valid on {} cells",
        r.region_cells, b.teeth, r2.region_cells
    );
    cache.push(b);
    cache.push(b2);
    Ok(msg)
}

fn crit8(cache: &[BuiltStructure]) -> Outcome {
    let b = cache.first().ok_or("criterion 7 produced no structure")?;
    let mut parts = Vec::new();
    for m in [
        Mutation::FlipWire,
        Mutation::ShiftMeat,
        Mutation::ShiftBlade,
    ] {
        let t = mutate(b, m);
        let r = validate(t.region, &b.pieces(), &t.placements).map_err(|e| e.to_string())?;
        check(!r.is_valid(), format!("{m:?} left the tiling valid"))?;
        parts.push(format!("{m:?} {}", r.overlap_cells + r.hole_cells));
    }
    Ok(format!("defect cells: {}", parts.join(", ")))
}

fn crit9(cache: &[BuiltStructure]) -> Outcome {
    check(cache.len() == 2, "criterion 7 produced no structures")?;
    for b in cache {
        check(
            b.census.blades.len() == 1,
            format!("{} blade orientations", b.census.blades.len()),
        )?;
        check(
            b.census.rods.len() <= 3,
            format!("{} rod orientations", b.census.rods.len()),
        )?;
    }
    let set = encode(&single(), Mode::Translation).map_err(|e| e.to_string())?;
    let names: Vec<&str> = set.pieces.iter().map(|p| p.name.as_str()).collect();
    check(
        names == ["tooth", "rod", "rod90", "rod180", "blade"],
        format!("pieces {names:?}"),
    )?;
    Ok(format!(
        "blades {:?}, rods {:?} and {:?}; translation set {}",
        cache[1].census.blades,
        cache[0].census.rods,
        cache[1].census.rods,
        names.join(" ")
    ))
}

fn crit10() -> Outcome {
    let r = rods_and_teeth_refutation(ROD_WINDOW).map_err(|e| e.to_string())?;
    check(
        r.verdict == Verdict::Dead,
        format!("verdict {:?}", r.verdict),
    )?;
    check(
        r.log.iter().take(6).all(|e| e.options.len() == 1),
        "opening moves are not forced",
    )?;
    let short = [Label::Zero, Label::One, Label::N];
    for e in r.dead_ends() {
        check(
            !e.blocked_by.is_empty()
                && e.blocked_by
                    .iter()
                    .all(|(_, l)| l.is_some_and(|l| short.contains(&l))),
            format!(
                "dead end at {:?} not against a short side: {:?}",
                e.cell, e.blocked_by
            ),
        )?;
    }
    let rej = r.rejections();
    check(
        rej.contains_key(&(Label::Y, Some(Label::J0N)))
            || rej.contains_key(&(Label::Y, Some(Label::J1N))),
        "no placement rejected for putting Y against J",
    )?;
    let small = rods_and_teeth_refutation(0).map_err(|e| e.to_string())?;
    check(
        small.verdict == Verdict::Inconclusive,
        "empty window not reported inconclusive",
    )?;
    Ok(format!(
        "dead after {} nodes, {} dead ends all at short-side dents",
        r.nodes,
        r.dead_ends().count()
    ))
}

fn main() -> ExitCode {
    let mut cache = Vec::new();
    let mut failed = 0;
    let mut run = |n: usize, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let mut out = f();
        let dt = t.elapsed();
        if out.is_ok() && dt > limit {
            out = Err(format!("runtime {dt:.2?} over limit {limit:?}"));
        }
        match out {
            Ok(msg) => println!("criterion {n:>2}: PASS ({dt:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL ({dt:.2?}) {msg}");
            }
        }
    };
    run(1, LIMIT_1, &mut crit1);
    run(2, LIMIT_2, &mut crit2);
    run(3, LIMIT_3, &mut crit3);
    run(4, LIMIT_4, &mut crit4);
    run(5, LIMIT_5 * 4, &mut crit5);
    run(6, LIMIT_6, &mut crit6);
    run(7, LIMIT_7, &mut || crit7(&mut cache));
    run(8, LIMIT_8, &mut || crit8(&cache));
    run(9, LIMIT_9, &mut || crit9(&cache));
    run(10, LIMIT_10, &mut crit10);
    if failed == 0 {
        println!("acceptance: 10/10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
