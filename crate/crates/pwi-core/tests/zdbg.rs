// Scratch diagnostics for plan transcription; not part of the shipped tests.
#![allow(dead_code)]
use pwi_core::algebra::{ParamInterval, QSqrt2, SPoly};
use pwi_core::dynamics::{prototype, put, rhombus_map, same_tile, DressedDomain, PlanDest, PlanParent, TilingPlan};
use pwi_core::geometry::{catalogue, Direction, ShapeKind, SPoint, Tile};
use pwi_core::isometry::{place_tile, Isometry};
use std::path::PathBuf;

fn plans_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../plans")
}

fn fv(t: &Tile, s: &QSqrt2) -> String {
    let vs: Vec<String> = t
        .vertices()
        .iter()
        .map(|p| {
            let (x, y) = p.eval(s);
            format!("({:.5},{:.5})", x.to_f64(), y.to_f64())
        })
        .collect();
    vs.join(" ")
}

fn shape_axis(shape: ShapeKind) -> Option<i64> {
    match shape {
        ShapeKind::Q(1) | ShapeKind::Q(2) | ShapeKind::Q(4) => Some(4),
        ShapeKind::Q(6) => Some(0),
        ShapeKind::Arrowhead => Some(5),
        _ => None,
    }
}

struct Ctx {
    plan: TilingPlan,
    parent: DressedDomain,
    j: ParamInterval,
    s: QSqrt2,
    dom_spans: Vec<(String, Vec<Tile>, Option<Isometry>)>,
    sources: Vec<Tile>,
    expected: Vec<Option<Tile>>,
}

fn load(name: &str, collapse: bool) -> Ctx {
    let text = std::fs::read_to_string(plans_dir().join(name)).unwrap();
    let mut plan: TilingPlan = text.parse().unwrap();
    if collapse {
        // DBG_POINT=n picks lo + (hi-lo)/n instead of the midpoint.
        let pt = match std::env::var("DBG_POINT").unwrap().parse::<i64>() {
            Ok(n) if n > 1 => {
                let w = &plan.interval.hi - &plan.interval.lo;
                &plan.interval.lo + &(&w / &QSqrt2::from_int(n))
            }
            _ => plan.interval.sample(),
        };
        plan.interval = ParamInterval::point(pt);
    }
    let j = plan.interval.clone();
    let s = j.sample();
    let parent = match &plan.parent {
        PlanParent::Rhombus => rhombus_map(&j).unwrap(),
        PlanParent::Prototype { kind, l, h } => prototype(*kind, l, h, &j).unwrap(),
    };
    let mut dom_spans = Vec::new();
    for d in &plan.domains {
        let tiles = catalogue(d.shape, &d.params, &j).unwrap();
        let span: Vec<Tile> = tiles
            .iter()
            .map(|t| place_tile(t, d.rot, &d.trans.0, &d.trans.1).unwrap())
            .collect();
        let mirror = shape_axis(d.shape).map(|base| {
            Isometry::reflection_about(
                Direction::from_doubled((base + 2 * d.rot).rem_euclid(16)),
                &SPoint::new(d.trans.0.clone(), d.trans.1.clone()),
            )
        });
        dom_spans.push((d.name.clone(), span, mirror));
    }
    let sources: Vec<Tile> = plan
        .rows
        .iter()
        .map(|r| put(r.q_kind, &r.params, r.rot, &r.trans.0, &r.trans.1, &j).unwrap())
        .collect();
    let mut expected = Vec::new();
    for (row, src) in plan.rows.iter().zip(&sources) {
        let exp = match &row.dest {
            PlanDest::Periodic => None,
            PlanDest::Whole { domain } => {
                let d = dom_spans.iter().find(|d| d.0 == *domain).unwrap();
                Some(d.1[0].clone())
            }
            PlanDest::Mirror { tile, domain } => {
                let d = dom_spans.iter().find(|d| d.0 == *domain).unwrap();
                let inside = d.1.iter().any(|outer| !src.disjoint(outer, &j));
                let base = if inside {
                    src.clone()
                } else {
                    let i = plan.rows.iter().position(|r| r.name == *tile).unwrap();
                    sources[i].clone()
                };
                Some(d.2.as_ref().unwrap().apply_tile(&base).unwrap())
            }
        };
        expected.push(exp);
    }
    Ctx {
        plan,
        parent,
        j,
        s,
        dom_spans,
        sources,
        expected,
    }
}

fn layout(c: &Ctx) {
    println!("parameter s = {} ~ {:.6}", c.s, c.s.to_f64());
    for (i, t) in c.parent.span().tiles.iter().enumerate() {
        println!("span[{i}]: {}", fv(t, &c.s));
    }
    for (lbl, t) in c.parent.labels().iter().zip(c.parent.atoms()) {
        println!("atom {lbl}: {}", fv(t, &c.s));
    }
    for (name, span, _) in &c.dom_spans {
        for t in span {
            println!("domain {name}: {}", fv(t, &c.s));
        }
    }
}

fn trace(c: &Ctx, row_name: &str, max: usize) {
    let i = c.plan.rows.iter().position(|r| r.name == row_name).unwrap();
    let row = &c.plan.rows[i];
    let src = &c.sources[i];
    println!("--- row {row_name} (dest {:?} R{})", row.dest, row.dest_rot);
    println!("src: {}", fv(src, &c.s));
    if let Some(e) = &c.expected[i] {
        println!("exp: {}", fv(e, &c.s));
    }
    let inside = c
        .parent
        .span()
        .tiles
        .iter()
        .any(|outer| src.inside(outer, &c.j));
    println!("inside parent span: {inside}");
    let mut cur = src.clone();
    let mut net = Isometry::identity();
    for step in 0..max {
        if step > 0 {
            if let Some(e) = &c.expected[i] {
                if same_tile(&cur, e) {
                    println!("step {step}: EXACT match, net rot R{} refl {}", net.rot(), net.is_reflecting());
                    return;
                }
                if cur.inside(e, &c.j) {
                    println!("step {step}: inside expected (not exact), net rot R{} refl {}", net.rot(), net.is_reflecting());
                    println!("cur: {}", fv(&cur, &c.s));
                    return;
                }
            }
            if matches!(row.dest, PlanDest::Periodic) && same_tile(&cur, src) {
                println!("step {step}: periodic return, net rot R{} refl {}", net.rot(), net.is_reflecting());
                return;
            }
            // Report any overlap with domain spans or expected tiles.
            for (name, span, _) in &c.dom_spans {
                for t in span {
                    if !cur.disjoint(t, &c.j) && !cur.inside(t, &c.j) {
                        println!("step {step}: partially overlaps domain {name}");
                    }
                }
            }
        }
        match c.parent.step(&cur, &c.j) {
            Ok((a, img)) => {
                println!(
                    "step {}: atom {} -> {}",
                    step + 1,
                    c.parent.labels()[a],
                    fv(&img, &c.s)
                );
                net = c.parent.maps()[a].as_ref().unwrap().compose(&net);
                cur = img;
            }
            Err(e) => {
                println!("step {}: ERROR {e}", step + 1);
                println!("cur: {}", fv(&cur, &c.s));
                return;
            }
        }
    }
    println!("gave up after {max} steps, net rot R{}", net.rot());
}

fn back(c: &Ctx, dom_name: &str, max: usize) {
    let d = c.dom_spans.iter().find(|d| d.0 == dom_name).unwrap();
    let mut cur = d.1[0].clone();
    let mut chain = vec![cur.clone()];
    println!("--- backward from domain {dom_name}");
    println!("start: {}", fv(&cur, &c.s));
    for step in 0..max {
        let mut found = false;
        for (a, atom) in c.parent.atoms().iter().enumerate() {
            let map = match c.parent.maps()[a].as_ref() {
                Some(m) => m,
                None => continue,
            };
            let img = map.apply_tile(atom).unwrap();
            if cur.inside(&img, &c.j) {
                cur = map.inverse().apply_tile(&cur).unwrap();
                println!("pre {}: via atom {} -> {}", step + 1, c.parent.labels()[a], fv(&cur, &c.s));
                for v in cur.vertices() {
                    println!("      exact ({}, {})", v.x, v.y);
                }
                for (i, e) in c.expected.iter().enumerate() {
                    if let Some(e) = e {
                        if cur.inside(e, &c.j) {
                            println!(
                                "      inside destination of row {} (exact: {})",
                                c.plan.rows[i].name,
                                same_tile(&cur, e)
                            );
                        }
                    }
                }
                found = true;
                break;
            }
        }
        if !found {
            println!("pre {}: no atom image contains the tile", step + 1);
            break;
        }
        chain.push(cur.clone());
    }
    if let Ok(out) = std::env::var("DBG_CHAINOUT") {
        let mut text = String::new();
        for (i, t) in chain.iter().enumerate() {
            text.push_str(&format!("pre {i}"));
            for v in t.vertices() {
                let (x, y) = v.eval(&c.s);
                text.push_str(&format!(" {} {}", x.to_f64(), y.to_f64()));
            }
            text.push('\n');
        }
        std::fs::write(&out, text).unwrap();
    }
    // Mirror pairs along the chain: pre_j equal to the mirror of pre_i
    // marks a destination/source pair of one tower.
    for (name, _, mirror) in &c.dom_spans {
        let m = match mirror {
            Some(m) => m,
            None => continue,
        };
        for i in 1..chain.len() {
            let mi = m.apply_tile(&chain[i]).unwrap();
            for (j, tj) in chain.iter().enumerate().take(i) {
                if same_tile(&mi, tj) {
                    println!("pair: U_{name}(pre {i}) == pre {j}");
                }
            }
        }
    }
    // Try to express the last preimage as a placed catalogue tile.
    if let Ok(spec) = std::env::var("DBG_FIT") {
        let mut it = spec.split(':');
        let kinds: Vec<u8> = it
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        let params: Vec<pwi_core::algebra::SPoly> = it
            .next()
            .unwrap()
            .split('|')
            .map(|v| v.parse().unwrap())
            .collect();
        for k in kinds {
            for rot in 0..8 {
                let t0 = match put(k, &params, rot, &SPoly::zero(), &SPoly::zero(), &c.j) {
                    Ok(t) => t,
                    Err(_) => continue,
                };
                for w in t0.vertices() {
                    let dx = &cur.vertices()[0].x - &w.x;
                    let dy = &cur.vertices()[0].y - &w.y;
                    let moved = Isometry::translation(dx.clone(), dy.clone())
                        .apply_tile(&t0)
                        .unwrap();
                    if same_tile(&moved, &cur) {
                        println!("fit: Q{k} R{rot} trans ({dx}, {dy})");
                    }
                }
            }
        }
    }
}

// Invoke explicitly, e.g.:
//   cargo test -p pwi-core --test zdbg -- dbg_run --nocapture
#[test]
fn dbg_run() {
    let name = std::env::var("DBG_PLAN").unwrap_or_default();
    if name.is_empty() {
        return;
    }
    let collapse = std::env::var("DBG_POINT").is_ok();
    let c = load(&name, collapse);
    if std::env::var("DBG_LAYOUT").is_ok() {
        layout(&c);
    }
    // DBG_DUMP=row:steps,row:steps,...  writes orbit tiles 0..steps-1 of each
    // listed row to the file named by DBG_OUT as float polygons.
    if let Ok(spec) = std::env::var("DBG_DUMP") {
        let out = std::env::var("DBG_OUT").unwrap_or("/tmp/towers.txt".into());
        let mut text = String::new();
        for part in spec.split(',') {
            let (name, steps) = part.split_once(':').unwrap();
            let steps: usize = steps.parse().unwrap();
            let i = c.plan.rows.iter().position(|r| r.name == name).unwrap();
            let mut cur = c.sources[i].clone();
            for jstep in 0..steps {
                text.push_str(&format!("{name} {jstep}"));
                for v in cur.vertices() {
                    let (x, y) = v.eval(&c.s);
                    text.push_str(&format!(" {} {}", x.to_f64(), y.to_f64()));
                }
                text.push('\n');
                let (_, img) = c.parent.step(&cur, &c.j).unwrap();
                cur = img;
            }
        }
        // Parent span too, for the complement.
        for (tag, tiles) in [("PARENT", c.parent.span().tiles.clone())] {
            for t in &tiles {
                text.push_str(tag);
                for v in t.vertices() {
                    let (x, y) = v.eval(&c.s);
                    text.push_str(&format!(" {} {}", x.to_f64(), y.to_f64()));
                }
                text.push('\n');
            }
        }
        std::fs::write(&out, text).unwrap();
        println!("dumped to {out}");
        return;
    }
    // DBG_PROBE='Qk|p0;p1|rot|dx|dy|fwd|back'  traces an arbitrary placed
    // tile forward and backward under the parent map, printing floats.
    if let Ok(spec) = std::env::var("DBG_PROBE") {
        let parts: Vec<&str> = spec.split('|').collect();
        let k: u8 = parts[0].trim_start_matches('Q').parse().unwrap();
        let params: Vec<SPoly> = if parts[1].is_empty() {
            vec![]
        } else {
            parts[1].split('~').map(|v| v.parse().unwrap()).collect()
        };
        let rot: i64 = parts[2].parse().unwrap();
        let dx: SPoly = parts[3].parse().unwrap();
        let dy: SPoly = parts[4].parse().unwrap();
        let fwd: usize = parts[5].parse().unwrap();
        let bwd: usize = parts[6].parse().unwrap();
        let t = put(k, &params, rot, &dx, &dy, &c.j).unwrap();
        println!("probe: {}", fv(&t, &c.s));
        let mut dump = String::new();
        let mut rec = |tag: &str, i: usize, tile: &Tile| {
            dump.push_str(&format!("{tag} {i}"));
            for v in tile.vertices() {
                let (x, y) = v.eval(&c.s);
                dump.push_str(&format!(" {} {}", x.to_f64(), y.to_f64()));
            }
            dump.push('\n');
        };
        rec("seed", 0, &t);
        let mut cur = t.clone();
        let mut net = Isometry::identity();
        for step in 0..fwd {
            match c.parent.step(&cur, &c.j) {
                Ok((a, img)) => {
                    net = c.parent.maps()[a].as_ref().unwrap().compose(&net);
                    cur = img;
                    println!("fwd {}: atom {} R{} -> {}", step + 1, c.parent.labels()[a], net.rot(), fv(&cur, &c.s));
                    rec("fwd", step + 1, &cur);
                    if same_tile(&cur, &t) {
                        println!("fwd {}: periodic return", step + 1);
                        break;
                    }
                }
                Err(e) => {
                    println!("fwd {}: ERROR {e}", step + 1);
                    break;
                }
            }
        }
        cur = t.clone();
        'outer: for step in 0..bwd {
            let mut found = false;
            for (a, atom) in c.parent.atoms().iter().enumerate() {
                let map = match c.parent.maps()[a].as_ref() {
                    Some(m) => m,
                    None => continue,
                };
                let img = map.apply_tile(atom).unwrap();
                if cur.inside(&img, &c.j) {
                    cur = map.inverse().apply_tile(&cur).unwrap();
                    println!("back {}: via atom {} -> {}", step + 1, c.parent.labels()[a], fv(&cur, &c.s));
                    for v in cur.vertices() {
                        println!("      exact ({}, {})", v.x, v.y);
                    }
                    rec("back", step + 1, &cur);
                    found = true;
                    break;
                }
            }
            if !found {
                println!("back {}: no atom image contains the tile", step + 1);
                break 'outer;
            }
        }
        drop(rec);
        if let Ok(out) = std::env::var("DBG_OUT") {
            std::fs::write(&out, dump).unwrap();
            println!("probe dumped to {out}");
        }
        return;
    }
    // DBG_MIRROR=other.plan:row,row  mirrors the named rows of the other
    // plan about the x axis and fits catalogue placements to the images of
    // both the source and the expected tile.
    if let Ok(spec) = std::env::var("DBG_MIRROR") {
        let (other, rows) = spec.split_once(':').unwrap();
        let oc = load(other, collapse);
        let flip = Isometry::reflection_about(
            Direction::from_doubled(0),
            &SPoint::new(SPoly::zero(), SPoly::zero()),
        );
        for rname in rows.split(',') {
            let i = oc.plan.rows.iter().position(|r| r.name == rname).unwrap();
            let row = &oc.plan.rows[i];
            let mut cands = vec![row.params.clone()];
            if row.params.len() == 2 {
                cands.push(vec![row.params[1].clone(), row.params[0].clone()]);
            }
            let mut tiles = vec![("src", flip.apply_tile(&oc.sources[i]).unwrap())];
            if let Some(e) = &oc.expected[i] {
                tiles.push(("exp", flip.apply_tile(e).unwrap()));
            }
            for (tag, target) in &tiles {
                println!("--- mirror of {other} {rname} {tag}: {}", fv(target, &oc.s));
                for params in &cands {
                    for k in [1u8, 2, 3, 4, 5, 7, 10, 12, 13] {
                        if usize::from(ShapeKind::Q(k).arity()) != params.len() {
                            continue;
                        }
                        for rot in 0..8 {
                            let t0 = match put(k, params, rot, &SPoly::zero(), &SPoly::zero(), &oc.j) {
                                Ok(t) => t,
                                Err(_) => continue,
                            };
                            for w in t0.vertices() {
                                let dx = &target.vertices()[0].x - &w.x;
                                let dy = &target.vertices()[0].y - &w.y;
                                let moved = Isometry::translation(dx.clone(), dy.clone())
                                    .apply_tile(&t0)
                                    .unwrap();
                                if same_tile(&moved, target) {
                                    println!("  fit: Q{k} {params:?} R{rot} trans ({dx}, {dy})");
                                }
                            }
                        }
                    }
                }
            }
        }
        return;
    }
    if let Ok(row) = std::env::var("DBG_BACKROW") {
        let max = std::env::var("DBG_MAX")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(6);
        let i = c.plan.rows.iter().position(|r| r.name == row).unwrap();
        let start = c.expected[i].clone().unwrap();
        let mut cc = Ctx { ..c };
        cc.dom_spans.insert(0, ("_start".into(), vec![start], None));
        back(&cc, "_start", max);
        return;
    }
    if let Ok(dom) = std::env::var("DBG_BACK") {
        let max = std::env::var("DBG_MAX")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(6);
        back(&c, &dom, max);
    }
    if let Ok(rows) = std::env::var("DBG_ROWS") {
        let max = std::env::var("DBG_MAX")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(40);
        for r in rows.split(',') {
            trace(&c, r, max);
        }
    }
}
