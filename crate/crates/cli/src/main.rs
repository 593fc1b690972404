use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use kltile::catalog::{audit_words, Label};
use kltile::engine::{solve, wang_smallest_torus, wang_solve_torus, SolveOutcome, Universe};
use kltile::io::{self, NamedWord};
use kltile::render::{render_pieces, render_tiling, ColorBy, RenderSpec};
use kltile::structure::{build_structure, mutate, Mutation};
use kltile::validate::validate;
use kltile::wang::{encode, Mode};
use kltile::{BoundaryWord, Region};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "kltile",
    version,
    about = "Polyomino tilings from Wang tiles via key/lock labels"
)]
struct Cli {
    /// Worker threads for validation.
    #[arg(long, global = true, env = "KLTILE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Audit the 17-label catalog and optionally write it as a .poly file.
    Labels {
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Audit these words instead of the built-in catalog (pieces named after labels).
        #[arg(long)]
        words: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Encode a Wang set as tooth, rod and blade pieces.
    Encode {
        wang: PathBuf,
        #[arg(long, value_enum, default_value = "translation")]
        mode: ModeArg,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Find a valid assignment on a torus (smallest one up to --max when --torus is absent).
    WangSolve {
        wang: PathBuf,
        #[arg(long, value_parser = parse_dims)]
        torus: Option<(usize, usize)>,
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Build the full structure for a Wang assignment and validate it.
    Build {
        wang: PathBuf,
        assignment: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the pieces the tiling refers to.
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Apply one defect after building.
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
        /// Render the structure colored by role.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_parser = parse_clip)]
        clip: Option<(i64, i64, i64, i64)>,
    },
    /// Check that a tiling covers its region exactly.
    Verify { pieces: PathBuf, tiling: PathBuf },
    /// Exact-cover search for a tiling of a torus or rectangle.
    Solve {
        pieces: PathBuf,
        #[arg(long, value_parser = parse_dims, conflicts_with = "rect", required_unless_present = "rect")]
        torus: Option<(usize, usize)>,
        #[arg(long, value_parser = parse_dims)]
        rect: Option<(usize, usize)>,
        #[arg(long)]
        translation_only: bool,
        /// Search node budget.
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw pieces, or a tiling of them, as SVG.
    Render {
        pieces: PathBuf,
        tiling: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        cell: f64,
        #[arg(long, value_enum, default_value = "piece")]
        color_by: ColorArg,
        #[arg(long, value_parser = parse_clip)]
        clip: Option<(i64, i64, i64, i64)>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rotation,
    Translation,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    FlipWire,
    ShiftMeat,
    ShiftBlade,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorArg {
    Piece,
    Orientation,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected WxH")?;
    let (w, h) = (
        a.parse().map_err(|_| "bad width")?,
        b.parse().map_err(|_| "bad height")?,
    );
    if w == 0 || h == 0 {
        return Err("sides must be positive".into());
    }
    Ok((w, h))
}

fn parse_clip(s: &str) -> Result<(i64, i64, i64, i64), String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad number `{t}`")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] if x1 > x0 && y1 > y0 => Ok((x0, y0, x1, y1)),
        _ => Err("expected x0,y0,x1,y1 with x1>x0 and y1>y0".into()),
    }
}

/// Failure with its exit status: 1 usage or parse, 2 semantic, 3 budget exhausted.
struct Fail(u8, String);

type Res = Result<(), Fail>;

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail(1, e.to_string())
}

fn semantic(e: impl std::fmt::Display) -> Fail {
    Fail(2, e.to_string())
}

fn read(p: &Path) -> Result<String, Fail> {
    fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn write(p: &Path, s: &str) -> Res {
    fs::write(p, s).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn parse_in<T>(p: &Path, f: impl Fn(&str) -> Result<T, io::ParseError>) -> Result<T, Fail> {
    f(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn load_pieces(p: &Path) -> Result<(Vec<NamedWord>, Vec<kltile::Polyomino>), Fail> {
    let words = parse_in(p, io::parse_poly)?;
    let polys =
        io::fill_pieces(&words).map_err(|e| usage(format!("{}: {}", p.display(), e.msg)))?;
    Ok((words, polys))
}

fn names(words: &[NamedWord]) -> Vec<String> {
    words.iter().map(|w| w.name.clone()).collect()
}

fn cmd_labels(out: Option<PathBuf>, words: Option<PathBuf>, as_json: bool) -> Res {
    let source: Vec<(Label, BoundaryWord)> = match &words {
        Some(p) => {
            let ws = parse_in(p, io::parse_poly)?;
            Label::ALL
                .iter()
                .map(|&l| {
                    ws.iter()
                        .find(|w| w.name == l.name())
                        .map(|w| (l, w.word.clone()))
                        .ok_or_else(|| {
                            usage(format!("{}: no word for label {}", p.display(), l.name()))
                        })
                })
                .collect::<Result<_, _>>()?
        }
        None => Label::ALL.iter().map(|&l| (l, l.word())).collect(),
    };
    let rep = audit_words(|l| {
        source
            .iter()
            .find(|(k, _)| *k == l)
            .map(|(_, w)| w.clone())
            .unwrap()
    });
    if as_json {
        let labels: Vec<_> = rep
            .audits
            .iter()
            .map(|a| {
                json!({
                    "label": a.label.name(),
                    "key": a.decoded_key,
                    "lock": a.decoded_lock,
                    "displacement": [a.displacement.0, a.displacement.1],
                    "simple": a.simple,
                    "ok": a.ok(),
                })
            })
            .collect();
        let doc = json!({
            "labels": labels,
            "key_bijection": rep.key_bijection,
            "symmetric": rep.symmetric,
            "variant_rule": rep.variant_rule,
            "errors": rep.errors,
            "ok": rep.ok(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for a in &rep.audits {
            println!(
                "label {:<5} key {:>2} lock {:?} displacement ({},{}) {}",
                a.label.name(),
                a.decoded_key,
                a.decoded_lock,
                a.displacement.0,
                a.displacement.1,
                if a.ok() { "ok" } else { "FAIL" }
            );
        }
        println!(
            "key bijection {} symmetric {} variant rule {}",
            rep.key_bijection, rep.symmetric, rep.variant_rule
        );
        for e in &rep.errors {
            println!("error {e}");
        }
    }
    if let Some(o) = out {
        let ws: Vec<NamedWord> = source
            .into_iter()
            .map(|(l, w)| NamedWord {
                name: l.name().into(),
                word: w,
            })
            .collect();
        write(&o, &io::emit_poly(&ws))?;
    }
    if rep.ok() {
        Ok(())
    } else {
        Err(semantic("catalog audit failed"))
    }
}

fn cmd_encode(wang: &Path, mode: ModeArg, out: &Path) -> Res {
    let wts = parse_in(wang, io::parse_wang)?;
    let mode = match mode {
        ModeArg::Rotation => Mode::Rotation,
        ModeArg::Translation => Mode::Translation,
    };
    let set = encode(&wts, mode).map_err(semantic)?;
    for p in &set.pieces {
        let (w, h) = p.poly.bbox();
        println!("piece {} area {} bbox {}x{}", p.name, p.poly.area(), w, h);
    }
    write(out, &io::emit_poly(&io::encoded_poly(&set)))
}

fn cmd_wang_solve(wang: &Path, torus: Option<(usize, usize)>, max: usize, out: &Path) -> Res {
    let wts = parse_in(wang, io::parse_wang)?;
    let found = match torus {
        Some((w, h)) => wang_solve_torus(&wts, w, h),
        None => wang_smallest_torus(&wts, max),
    };
    let a = found.ok_or_else(|| semantic("no assignment on the requested torus"))?;
    println!("assignment {}x{}", a.w, a.h);
    write(out, &io::emit_assignment(&a))
}

#[allow(clippy::too_many_arguments)]
fn cmd_build(
    wang: &Path,
    assignment: &Path,
    out: &Path,
    poly: Option<PathBuf>,
    mutation: Option<MutationArg>,
    svg: Option<PathBuf>,
    clip: Option<(i64, i64, i64, i64)>,
) -> Res {
    let wts = parse_in(wang, io::parse_wang)?;
    let asg = parse_in(assignment, io::parse_assignment)?;
    let t0 = Instant::now();
    let b = build_structure(&wts, &asg).map_err(semantic)?;
    let tiling = match mutation {
        None => b.tiling.clone(),
        Some(MutationArg::FlipWire) => mutate(&b, Mutation::FlipWire),
        Some(MutationArg::ShiftMeat) => mutate(&b, Mutation::ShiftMeat),
        Some(MutationArg::ShiftBlade) => mutate(&b, Mutation::ShiftBlade),
    };
    let r = b.tiling.region;
    println!(
        "structure {}x{} labels, region {}x{} cells, {} placements ({} teeth)",
        b.layout.width,
        b.layout.height,
        r.width,
        r.height,
        tiling.placements.len(),
        b.teeth
    );
    println!(
        "census rods {:?} blades {:?}",
        b.census.rods, b.census.blades
    );
    let pieces = b.pieces();
    let names = b.piece_names();
    let rep = validate(tiling.region, &pieces, &tiling.placements).map_err(semantic)?;
    print!("{}", io::report_text(&rep));
    println!("time {:.3}s", t0.elapsed().as_secs_f64());
    write(out, &io::emit_tiling(&tiling, &names))?;
    if let Some(p) = poly {
        write(&p, &io::emit_poly(&io::encoded_poly(&b.encoded)))?;
    }
    if let Some(p) = svg {
        let spec = RenderSpec {
            cell: 1.0,
            color_by: ColorBy::Role,
            clip: Some(clip.unwrap_or((0, 0, r.width.min(4000), r.height.min(4000)))),
        };
        write(&p, &render_tiling(&tiling, &pieces, Some(&b.roles), spec))?;
    }
    if rep.is_valid() {
        Ok(())
    } else {
        Err(semantic("structure has defects"))
    }
}

fn cmd_verify(pieces: &Path, tiling: &Path) -> Res {
    let (words, polys) = load_pieces(pieces)?;
    let names = names(&words);
    let t = parse_in(tiling, |s| io::parse_tiling(s, &names))?;
    let rep = validate(t.region, &polys, &t.placements).map_err(semantic)?;
    print!("{}", io::report_text(&rep));
    if rep.is_valid() {
        Ok(())
    } else {
        Err(semantic("tiling has defects"))
    }
}

fn cmd_solve(
    pieces: &Path,
    torus: Option<(usize, usize)>,
    rect: Option<(usize, usize)>,
    translation_only: bool,
    limit: u64,
    out: Option<PathBuf>,
) -> Res {
    let (words, polys) = load_pieces(pieces)?;
    let region = match (torus, rect) {
        (Some((w, h)), _) => Region::torus(w as i64, h as i64),
        (_, Some((w, h))) => Region::rect(w as i64, h as i64),
        _ => return Err(usage("one of --torus or --rect is required")),
    };
    let uni = Universe::new(region, &polys, translation_only);
    println!(
        "{} candidate placements over {} cells",
        uni.candidates.len(),
        region.area()
    );
    match solve(&uni, limit) {
        SolveOutcome::Found(t) => {
            println!("found tiling with {} placements", t.placements.len());
            let text = io::emit_tiling(&t, &names(&words));
            match out {
                Some(p) => write(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        SolveOutcome::None => Err(semantic("no tiling exists")),
        SolveOutcome::BudgetExhausted => Err(Fail(3, format!("node budget {limit} exhausted"))),
    }
}

fn cmd_render(
    pieces: &Path,
    tiling: Option<PathBuf>,
    svg: &Path,
    cell: f64,
    color: ColorArg,
    clip: Option<(i64, i64, i64, i64)>,
) -> Res {
    if cell <= 0.0 || !cell.is_finite() {
        return Err(usage("--cell must be positive"));
    }
    let (words, polys) = load_pieces(pieces)?;
    let color_by = match color {
        ColorArg::Piece => ColorBy::Piece,
        ColorArg::Orientation => ColorBy::Orientation,
    };
    let spec = RenderSpec {
        cell,
        color_by,
        clip,
    };
    let text = match tiling {
        None => render_pieces(&polys, spec),
        Some(tp) => {
            let t = parse_in(&tp, |s| io::parse_tiling(s, &names(&words)))?;
            render_tiling(&t, &polys, None, spec)
        }
    };
    write(svg, &text)
}

fn run(cli: Cli) -> Res {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(usage)?;
    }
    match cli.cmd {
        Cmd::Labels { out, words, json } => cmd_labels(out, words, json),
        Cmd::Encode { wang, mode, out } => cmd_encode(&wang, mode, &out),
        Cmd::WangSolve {
            wang,
            torus,
            max,
            out,
        } => cmd_wang_solve(&wang, torus, max, &out),
        Cmd::Build {
            wang,
            assignment,
            out,
            poly,
            mutate,
            svg,
            clip,
        } => cmd_build(&wang, &assignment, &out, poly, mutate, svg, clip),
        Cmd::Verify { pieces, tiling } => cmd_verify(&pieces, &tiling),
        Cmd::Solve {
            pieces,
            torus,
            rect,
            translation_only,
            limit,
            out,
        } => cmd_solve(&pieces, torus, rect, translation_only, limit, out),
        Cmd::Render {
            pieces,
            tiling,
            svg,
            cell,
            color_by,
            clip,
        } => cmd_render(&pieces, tiling, &svg, cell, color_by, clip),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
