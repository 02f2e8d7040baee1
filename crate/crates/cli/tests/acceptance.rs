//! Acceptance suite. Run with
//! `cargo test -p guardwalk-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use guardwalk::gen::{comb, random_polygon, ring_of_holes, square, square_with_hole, two_hole_example};
use guardwalk::geometry::{vertex_limited_vp, visibility_polygon, Point, PolygonWithHoles};
use guardwalk::guards::{add_leaf, compute_cover, cooperative_guards, remove_leaf, TripletCover};
use guardwalk::io::polygon_to_string;
use guardwalk::proximity::{look_view, proximity_explore};
use guardwalk::sim::small_memory::MEMORY_BUDGET;
use guardwalk::sim::warmup::FOLLOWER_BUDGET;
use guardwalk::sim::{model_check, simulate_small_memory, simulate_warmup, SimConfig, SimOutcome};
use guardwalk::triangulation::{build_dual, triangulate, RootedTree};
use guardwalk::verify::{sample_points, verify_guards};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SAMPLES: usize = 10_000;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn holes_for(n: usize) -> usize {
    n / 16
}

/// Instances used by several criteria.
fn suite() -> Vec<(String, PolygonWithHoles)> {
    let mut v = vec![
        ("square".to_string(), square()),
        ("square-with-hole".to_string(), square_with_hole()),
        ("two-hole".to_string(), two_hole_example()),
        ("comb-4".to_string(), comb(4).unwrap()),
        ("comb-9".to_string(), comb(9).unwrap()),
        ("ring-3".to_string(), ring_of_holes(3).unwrap()),
    ];
    for (i, n) in [16, 32, 64, 128].into_iter().enumerate() {
        v.push((format!("random-{n}"), random_polygon(n, holes_for(n), 900 + i as u64).unwrap()));
    }
    v
}

fn warmup(p: &PolygonWithHoles, seed: u64) -> guardwalk::Result<SimOutcome> {
    simulate_warmup(p, &SimConfig { agents: p.guard_bound().max(1), start: p.vertex(0), seed })
}

fn small_memory(p: &PolygonWithHoles, seed: u64) -> guardwalk::Result<SimOutcome> {
    simulate_small_memory(p, &SimConfig { agents: p.triangle_count().div_ceil(2), start: p.vertex(0), seed })
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut max_n = 0;
    for i in 0..200u64 {
        let h = rng.random_range(0..=6usize);
        let n = rng.random_range((3 * h + 8).max(12)..=200usize);
        let p = random_polygon(n, h, 10_000 + i).map_err(|e| e.to_string())?;
        let t = triangulate(&p).map_err(|e| e.to_string())?;
        let d = build_dual(&t);
        let (n, h) = (p.n(), p.h());
        ensure(t.len() == n + 2 * h - 2, || format!("instance {i}: {} triangles for n={n} h={h}", t.len()))?;
        ensure(d.edge_count() == n + 3 * h - 3, || format!("instance {i}: {} dual edges for n={n} h={h}", d.edge_count()))?;
        max_n = max_n.max(n);
    }
    Ok(format!("200 instances, n up to {max_n}"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for (name, p) in suite() {
        let g = cooperative_guards(&p).map_err(|e| e.to_string())?;
        ensure(g.len() <= p.guard_bound(), || format!("{name}: {} guards over bound {}", g.len(), p.guard_bound()))?;
        worst = worst.max(g.len() as f64 / p.guard_bound().max(1) as f64);
    }
    let fig = two_hole_example();
    ensure((fig.n(), fig.h(), fig.guard_bound()) == (14, 2, 8), || format!("figure instance bound {}", fig.guard_bound()))?;
    Ok(format!("figure bound 8, largest guards/bound ratio {worst:.2}"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (name, p) in suite() {
        let mut sets: Vec<(&str, Vec<Point>)> = vec![
            ("solver", cooperative_guards(&p).map_err(|e| e.to_string())?.points(&p)),
            ("warmup", warmup(&p, 3).map_err(|e| format!("{name} warmup: {e}"))?.guards.points(&p)),
            ("small-memory", small_memory(&p, 3).map_err(|e| format!("{name} small-memory: {e}"))?.guards.points(&p)),
        ];
        if p.n() <= 64 {
            sets.push(("proximity", proximity_explore(&p).map_err(|e| format!("{name} proximity: {e}"))?.guards.points(&p)));
        }
        for (who, g) in sets {
            let r = verify_guards(&p, &g, SAMPLES, 42).map_err(|e| e.to_string())?;
            ensure(r.coverage.is_complete(), || format!("{name}/{who}: coverage {}", r.coverage.fraction()))?;
            ensure(r.connectivity.connected, || format!("{name}/{who}: guards not connected"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} guard sets, coverage 1.0 and connected"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut updates = 0usize;
    for seq in 0..1000 {
        let mut tree = RootedTree::single(0);
        let mut cover = compute_cover(&tree);
        let mut next_id = 1;
        for _ in 0..rng.random_range(1..=120) {
            let ids: Vec<usize> = tree.node_ids().collect();
            let leaves: Vec<usize> = ids.iter().copied().filter(|&v| v != 0 && tree.is_leaf(v)).collect();
            let open: Vec<usize> = ids.iter().copied().filter(|&v| tree.children(v).len() < 2).collect();
            let grow = tree.len() < 64 && (leaves.is_empty() || rng.random_bool(0.6));
            let (v, calls) = if grow {
                let v = open[rng.random_range(0..open.len())];
                let calls = add_leaf(&mut tree, &mut cover, v, next_id).map_err(|e| e.to_string())?;
                next_id += 1;
                (v, calls)
            } else {
                let l = leaves[rng.random_range(0..leaves.len())];
                let v = tree.parent(l);
                (v, remove_leaf(&mut tree, &mut cover, v, l).map_err(|e| e.to_string())?)
            };
            updates += 1;
            ensure(calls <= tree.depth(v) + 1, || format!("sequence {seq}: {calls} calls at depth {}", tree.depth(v)))?;
            let fresh: TripletCover = compute_cover(&tree);
            ensure(cover.normalized() == fresh.normalized(), || format!("sequence {seq}: cover differs from recomputation"))?;
        }
    }
    Ok(format!("1000 sequences, {updates} updates"))
}

/// Sums a metric over three instances per size and returns the per-size
/// totals.
fn doubling<F>(sizes: &[usize], mut metric: F) -> Result<Vec<[f64; 2]>, String>
where
    F: FnMut(&PolygonWithHoles) -> Result<[f64; 2], String>,
{
    let mut out = Vec::new();
    for &n in sizes {
        let mut acc = [0.0; 2];
        for s in 0..3u64 {
            let p = random_polygon(n, holes_for(n), 5000 + 10 * n as u64 + s).map_err(|e| e.to_string())?;
            let m = metric(&p)?;
            acc[0] += m[0];
            acc[1] += m[1];
        }
        out.push(acc);
    }
    Ok(out)
}

fn max_ratio(v: &[[f64; 2]], k: usize) -> f64 {
    v.windows(2).map(|w| w[1][k] / w[0][k]).fold(0.0, f64::max)
}

fn criterion_5() -> Outcome {
    let sizes = [16, 32, 64, 128];
    let w = doubling(&sizes, |p| {
        let o = warmup(p, 5).map_err(|e| e.to_string())?;
        Ok([o.trace.total_rounds as f64, o.trace.total_broadcasts as f64])
    })?;
    let s = doubling(&sizes, |p| {
        let o = small_memory(p, 5).map_err(|e| e.to_string())?;
        Ok([o.trace.total_rounds as f64, o.trace.total_broadcasts as f64])
    })?;
    let (wr, wb, sb) = (max_ratio(&w, 0), max_ratio(&w, 1), max_ratio(&s, 1));
    let n = 3.0 * 128.0;
    let fit = format!(
        "warmup rounds/n {:.2} broadcasts/n {:.2}, small-memory broadcasts/n^2 {:.3} rounds/n^2 {:.3}",
        w[3][0] / n,
        w[3][1] / n,
        s[3][1] / (n * 128.0),
        s[3][0] / (n * 128.0)
    );
    ensure(wr <= 3.0 && wb <= 3.0 && sb <= 5.0, || {
        format!("ratios warmup rounds {wr:.2} broadcasts {wb:.2}, small-memory broadcasts {sb:.2}")
    })?;
    Ok(format!("max ratios {wr:.2}/{wb:.2}/{sb:.2}; {fit}"))
}

/// Smallest hop diameter over vertex guard sets within the bound that cover
/// every sample and have a connected visibility graph.
fn min_guard_diameter(p: &PolygonWithHoles) -> Option<usize> {
    let n = p.n();
    let fine = p.scaled(guardwalk::verify::SAMPLE_SCALE);
    let samples = sample_points(p, 4000, 6);
    let words = samples.len().div_ceil(64);
    let sees: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut b = vec![0u64; words];
            for (i, s) in samples.iter().enumerate() {
                if fine.sees(fine.vertex(v), s.0) {
                    b[i / 64] |= 1 << (i % 64);
                }
            }
            b
        })
        .collect();
    let adj: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a != b && p.sees(p.vertex(a), p.vertex(b))).collect()).collect();
    let full: Vec<u64> = (0..words)
        .map(|w| if (w + 1) * 64 <= samples.len() { u64::MAX } else { (1u64 << (samples.len() % 64)) - 1 })
        .collect();
    let mut best: Option<usize> = None;
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > p.guard_bound() {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let covered = (0..words).all(|w| set.iter().fold(0u64, |acc, &v| acc | sees[v][w]) == full[w]);
        if !covered {
            continue;
        }
        let mut diam = 0;
        let mut connected = true;
        for &s in &set {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(a) = q.pop_front() {
                for &b in &set {
                    if adj[a][b] && dist[b] == usize::MAX {
                        dist[b] = dist[a] + 1;
                        q.push_back(b);
                    }
                }
            }
            for &t in &set {
                if dist[t] == usize::MAX {
                    connected = false;
                } else {
                    diam = diam.max(dist[t]);
                }
            }
        }
        if connected {
            best = Some(best.map_or(diam, |b: usize| b.min(diam)));
        }
    }
    best
}

fn criterion_6() -> Outcome {
    let mut min_slack = f64::MAX;
    for k in 4..=64 {
        let p = comb(k).map_err(|e| e.to_string())?;
        let o = warmup(&p, 6).map_err(|e| format!("comb {k}: {e}"))?;
        let r = o.trace.total_rounds;
        ensure(2 * r >= k, || format!("comb {k}: {r} rounds"))?;
        min_slack = min_slack.min(r as f64 / k as f64);
    }
    let mut diams = Vec::new();
    for k in 2..=6 {
        let p = comb(k).map_err(|e| e.to_string())?;
        let d = min_guard_diameter(&p).ok_or_else(|| format!("comb {k}: no guard set within the bound"))?;
        ensure(2 * d >= k, || format!("comb {k}: guard set of diameter {d}"))?;
        diams.push(format!("{k}:{d}"));
    }
    Ok(format!("min rounds/k {min_slack:.2}; min guard diameters {}", diams.join(" ")))
}

fn criterion_7() -> Outcome {
    let mut leader = Vec::new();
    let mut follower_max = 0;
    let mut small_max = 0;
    for (name, p) in suite() {
        let o = warmup(&p, 7).map_err(|e| e.to_string())?;
        model_check(&o.trace, &p).map_err(|e| format!("{name} warmup: {e}"))?;
        follower_max = follower_max.max(o.trace.max_follower_peak());
        leader.push((p.n(), o.trace.leader_peak()));
        let s = small_memory(&p, 7).map_err(|e| e.to_string())?;
        model_check(&s.trace, &p).map_err(|e| format!("{name} small-memory: {e}"))?;
        small_max = small_max.max(s.trace.max_peak());
    }
    ensure(follower_max <= FOLLOWER_BUDGET, || format!("warmup follower peak {follower_max}"))?;
    ensure(small_max <= MEMORY_BUDGET, || format!("small-memory peak {small_max}"))?;
    leader.sort_unstable();
    let (small, large) = (leader[0], leader[leader.len() - 1]);
    ensure(large.1 > small.1, || format!("leader peak does not grow: {leader:?}"))?;
    Ok(format!(
        "warmup followers <= {follower_max} words, leader {} words at n={} to {} at n={}; small-memory <= {small_max} of {MEMORY_BUDGET}",
        small.1, small.0, large.1, large.0
    ))
}

/// Angle of `v` in [0, 2pi).
fn angle(v: Point) -> f64 {
    let a = (v.y as f64).atan2(v.x as f64);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

fn oracle_sorted(o: Point, pts: &[Point]) -> bool {
    pts.windows(2).all(|w| {
        let (a, b) = (w[0].sub(o), w[1].sub(o));
        let (ta, tb) = (angle(a), angle(b));
        if (ta - tb).abs() < 1e-12 {
            a.norm2() <= b.norm2()
        } else {
            ta < tb
        }
    })
}

fn criterion_8() -> Outcome {
    let mut observers = 0;
    for i in 0..10u64 {
        let n = 12 + 6 * i as usize;
        let p = random_polygon(n, (i % 4) as usize, 300 + i).map_err(|e| e.to_string())?;
        let fine = p.scaled(guardwalk::verify::SAMPLE_SCALE);
        let pts = sample_points(&p, 100, 77 + i);
        let agents: Vec<(u64, Point)> = sample_points(&p, 6, 99 + i).iter().enumerate().map(|(k, s)| (k as u64 + 1, s.0)).collect();
        for s in &pts {
            let o = s.0;
            let view = look_view(&fine, o, &agents).map_err(|e| e.to_string())?;
            let mut got = view.vertex_seq.clone();
            got.sort_unstable();
            let mut want = vertex_limited_vp(&fine, o).map_err(|e| e.to_string())?;
            want.retain(|&v| fine.vertex(v) != o);
            want.sort_unstable();
            ensure(got == want, || format!("polygon {i}, observer {o}: vertex sets differ"))?;
            let seq: Vec<Point> = view.vertex_seq.iter().map(|&v| fine.vertex(v)).collect();
            ensure(oracle_sorted(o, &seq), || format!("polygon {i}, observer {o}: vertex order"))?;
            let vp = visibility_polygon(&fine, o).map_err(|e| e.to_string())?;
            let mut want_agents: Vec<(u64, Point)> = agents.iter().copied().filter(|a| vp.contains(a.1)).collect();
            let mut got_agents = view.agent_seq.clone();
            got_agents.sort_unstable();
            want_agents.sort_unstable();
            ensure(got_agents == want_agents.iter().map(|a| a.0).collect::<Vec<_>>(), || {
                format!("polygon {i}, observer {o}: agent sets differ")
            })?;
            let apts: Vec<Point> = view.agent_seq.iter().map(|id| agents[*id as usize - 1].1).filter(|&a| a != o).collect();
            ensure(oracle_sorted(o, &apts), || format!("polygon {i}, observer {o}: agent order"))?;
            observers += 1;
        }
    }
    let sizes = [8, 16, 32, 64];
    let r = doubling(&sizes, |p| {
        let run = proximity_explore(p).map_err(|e| e.to_string())?;
        ensure(run.triangulation.len() == p.triangle_count(), || "triangle count".to_string())?;
        ensure(build_dual(&run.triangulation).edge_count() == p.dual_edge_count(), || "dual edge count".to_string())?;
        ensure(run.guards.len() <= p.guard_bound(), || "guard bound".to_string())?;
        Ok([run.cost.total_estimated_rounds as f64, 0.0])
    })?;
    let ratio = max_ratio(&r, 0);
    ensure(ratio <= 17.0, || format!("proximity rounds grow {ratio:.2}x per doubling"))?;
    let fit = r[3][0] / (3.0 * 64f64.powi(4));
    Ok(format!("{observers} observers exact; proximity max ratio {ratio:.2}, rounds/n^4 {fit:.4}"))
}

fn gw(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_gw"))
        .args(args)
        .current_dir(dir)
        .env_remove("GW_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("gw {}: {}", args.join(" "), String::from_utf8_lossy(&o.stderr)));
    }
    let mut out = o.stdout;
    for f in ["trace", "guards", "svg"] {
        if let Ok(b) = fs::read(dir.join(f)) {
            out.extend(b);
            let _ = fs::remove_file(dir.join(f));
        }
    }
    Ok(out)
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    fs::write(d.join("p"), polygon_to_string(&two_hole_example())).map_err(|e| e.to_string())?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "random", "--n", "60", "--holes", "3", "--seed", "9"],
        vec!["gen", "comb", "--teeth", "6"],
        vec!["guards", "p", "--svg", "svg"],
        vec!["simulate", "p", "--mode", "warmup", "--seed", "9", "--trace", "trace", "--guards-out", "guards"],
        vec!["simulate", "p", "--mode", "small-memory", "--seed", "9", "--trace", "trace", "--guards-out", "guards"],
        vec!["simulate", "p", "--model", "proximity", "--trace", "trace", "--guards-out", "guards"],
        vec!["verify", "p", "guards-fixed", "--samples", "2000", "--seed", "9"],
        vec!["render", "p", "--dual", "--guards", "guards-fixed", "--trace", "trace-fixed", "-o", "svg"],
    ];
    gw(d, &["guards", "p", "-o", "guards-fixed"])?;
    gw(d, &["simulate", "p", "--trace", "trace-fixed"])?;
    for c in &commands {
        let a = gw(d, c)?;
        let b = gw(d, c)?;
        ensure(a == b, || format!("gw {} differs between runs", c.join(" ")))?;
    }
    Ok(format!("{} commands byte-identical across runs", commands.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("dual-graph identities", criterion_1),
        ("guard bound", criterion_2),
        ("validity", criterion_3),
        ("update-oracle equivalence", criterion_4),
        ("round/broadcast scaling", criterion_5),
        ("lower-bound family", criterion_6),
        ("memory budgets", criterion_7),
        ("proximity fidelity", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match &r {
            Ok(detail) => println!("criterion {} {name}: PASS ({secs:.1}s) {detail}", i + 1),
            Err(why) => {
                println!("criterion {} {name}: FAIL ({secs:.1}s) {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
