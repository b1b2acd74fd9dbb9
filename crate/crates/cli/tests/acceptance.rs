//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a gating criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oberwolfach::difference::SideVertex;
use oberwolfach::format;
use oberwolfach::starter::{build_paths, build_starter, factorize_k2m_plus_i};
use oberwolfach::{verify_factorization, Certificate, Cycle, Edge, Vertex};

const BIN: &str = env!("CARGO_BIN_EXE_opplus");

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("run opplus")
}

fn run_env(args: &[&str], key: &str, value: &Path) -> Output {
    Command::new(BIN).args(args).env(key, value).output().expect("run opplus")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn read_cert(path: &Path) -> Result<Certificate, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    format::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for m in (5..=199).step_by(2) {
        let cert = factorize_k2m_plus_i(m).map_err(|e| format!("m={m}: {e}"))?;
        ensure(cert.factors.len() == m as usize, format!("m={m}: {} factors", cert.factors.len()))?;
        let report = verify_factorization(&cert);
        ensure(report.is_accepted(), format!("m={m}: {report}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, format!("took {secs:.1}s"))?;
    Ok(format!("98 starters for odd m in 5..=199 accepted in {secs:.2}s"))
}

/// Equal up to rotation and reflection.
fn same_cycle(a: &[Vertex], b: &[Vertex]) -> bool {
    Cycle::new(a.to_vec()).canonical() == Cycle::new(b.to_vec()).canonical()
}

fn criterion_2() -> Check {
    let m = 5;
    let x = |i| SideVertex::x(i, m).id(m);
    let y = |i| SideVertex::y(i, m).id(m);
    let s = build_starter(m).map_err(|e| e.to_string())?;
    let f = s.to_two_factor();
    let c = [x(0), y(1), y(-1), x(-1), x(-2)];
    let c_prime = [y(0), x(1), y(-2), y(2), x(2)];
    let cycles = f.cycles();
    let matches = (same_cycle(cycles[0].vertices(), &c) && same_cycle(cycles[1].vertices(), &c_prime))
        || (same_cycle(cycles[1].vertices(), &c) && same_cycle(cycles[0].vertices(), &c_prime));
    ensure(matches, "m=5 starter differs from the printed cycles")?;

    let sv = |m: u32, seq: &[(char, i64)]| -> Vec<SideVertex> {
        seq.iter()
            .map(|&(side, i)| if side == 'x' { SideVertex::x(i, m) } else { SideVertex::y(i, m) })
            .collect()
    };
    let p11 = build_paths(11).map_err(|e| e.to_string())?;
    let want = sv(11, &[('y', 1), ('x', -1), ('y', 2), ('x', -2), ('y', 4), ('x', 3), ('y', 5)]);
    ensure(p11.p_prime.vertices == want, "m=11 P' differs")?;
    let want = sv(11, &[('y', 5), ('y', -4), ('y', -5), ('y', 3), ('y', -3), ('y', 1)]);
    ensure(p11.q_prime.vertices == want, "m=11 Q' differs")?;
    let p9 = build_paths(9).map_err(|e| e.to_string())?;
    let want = sv(9, &[('y', 1), ('x', -1), ('y', 2), ('x', -2), ('x', -4), ('y', 3)]);
    ensure(p9.p_prime.vertices == want, "m=9 P' differs")?;
    let want = sv(9, &[('x', -3), ('x', 3), ('x', 4), ('x', 0)]);
    ensure(p9.q.vertices == want, "m=9 Q differs")?;

    // (m, duplicated mixed difference as a signed value)
    let mut expected: Vec<(u32, i64)> = vec![(5, 0), (9, -2), (11, 2)];
    expected.extend((7..=199).step_by(4).filter(|&m| m != 11).map(|m| (m, 0)));
    expected.extend((13..=197).step_by(4).map(|m| (m, -1)));
    for (m, d) in expected {
        let got = build_starter(m).map_err(|e| e.to_string())?.duplicated_mixed.value as i64;
        ensure(got == d.rem_euclid(m as i64), format!("m={m}: duplicated difference {got}, expected {d}"))?;
    }
    Ok("m=5 cycles, m=9 and m=11 paths and all duplicated differences match".into())
}

/// Independent difference count: `L`/`R` for same-side pairs by
/// `min(d, m-d)`, `M` for `x_i y_j` by `j - i mod m`.
fn census(edges: impl Iterator<Item = Edge>, m: u32) -> BTreeMap<(char, u32), usize> {
    let mut out = BTreeMap::new();
    for e in edges {
        let (a, b) = (e.lo(), e.hi());
        let key = match (a < m, b < m) {
            (true, true) => ('L', (b - a).min(m - (b - a))),
            (false, false) => ('R', (b - a).min(m - (b - a))),
            _ => ('M', ((b - m) + m - a) % m),
        };
        *out.entry(key).or_default() += 1;
    }
    out
}

fn criterion_3() -> Check {
    for m in (5..=199).step_by(2) {
        let f = build_starter(m).map_err(|e| e.to_string())?.to_two_factor();
        let c = census(f.edges(), m);
        let half = (m - 1) / 2;
        for d in 1..=half {
            ensure(c.get(&('L', d)) == Some(&1), format!("m={m}: pure left {d}"))?;
            ensure(c.get(&('R', d)) == Some(&1), format!("m={m}: pure right {d}"))?;
        }
        let doubles = (0..m).filter(|&d| c.get(&('M', d)) == Some(&2)).count();
        let singles = (0..m).filter(|&d| c.get(&('M', d)) == Some(&1)).count();
        ensure(doubles == 1 && singles == m as usize - 1, format!("m={m}: mixed census"))?;
        ensure(c.values().sum::<usize>() == 2 * m as usize, format!("m={m}: edge total"))?;
    }
    Ok("census shape exact for odd m in 5..=199".into())
}

fn criterion_4(tmp: &Path) -> Check {
    let cache = tmp.join("cache");
    fs::create_dir_all(&cache).map_err(|e| e.to_string())?;
    let name = "equipartite-a3-k10-l5.cert";
    fs::copy(fixtures().join(name), cache.join(name)).map_err(|e| e.to_string())?;
    let out = tmp.join("n30.cert");
    let o = run_env(
        &["solve", "--n", "30", "--m", "5", "--max-seconds", "600", "--out", out.to_str().unwrap()],
        "OPCERT_CACHE_DIR",
        &cache,
    );
    ensure(o.status.code() == Some(0), format!("solve exit {:?}: {}", o.status.code(), stdout(&o)))?;
    let cert = read_cert(&out)?;
    let (m, t) = (5, 6);
    ensure(cert.factors.len() == 15 && m + (t / 2 - 1) * m == 30 / 2, "factor count")?;
    let report = verify_factorization(&cert);
    ensure(report.is_accepted(), report.to_string())?;
    let v = run(&["verify", out.to_str().unwrap(), "--spec", "n=30,m=5"]);
    ensure(v.status.code() == Some(0), "opplus verify rejected")?;
    Ok("solve --n 30 --m 5 with cached K_3[10] certificate: 15 factors, accepted".into())
}

fn criterion_5(tmp: &Path) -> Check {
    let out = tmp.join("lift10.cert");
    let start = Instant::now();
    let o = run(&["solve", "--n", "10", "--lengths", "4,6", "--max-seconds", "300", "--out", out.to_str().unwrap()]);
    ensure(o.status.code() == Some(0), format!("solve 4,6 exit {:?}", o.status.code()))?;
    let cert = read_cert(&out)?;
    ensure(cert.factors.len() == 5, "expected 5 factors")?;
    ensure(verify_factorization(&cert).is_accepted(), "4,6 certificate rejected")?;
    let dup: Vec<String> = cert.matching.iter().map(|e| e.to_string()).collect();
    ensure(dup.join(" ") == "0-3 1-2 4-9 5-6 7-8", format!("duplicated matching {dup:?}"))?;
    let lift_secs = start.elapsed().as_secs_f64();

    let out6 = tmp.join("lift6.cert");
    let start = Instant::now();
    let o = run(&["solve", "--n", "6", "--lengths", "6", "--out", out6.to_str().unwrap()]);
    let secs = start.elapsed().as_secs_f64();
    ensure(o.status.code() == Some(0), "solve --n 6 --lengths 6 failed")?;
    let cert = read_cert(&out6)?;
    ensure(cert.factors.len() == 3 && verify_factorization(&cert).is_accepted(), "n=6 certificate")?;
    ensure(secs < 10.0, format!("n=6 took {secs:.1}s"))?;
    Ok(format!("(4,6): 5 factors, DUP = alternation ({lift_secs:.1}s); (6): 3 factors ({secs:.2}s)"))
}

/// Odd difference values for the `Z_{2m}` labeling of `K_{4m}`, by
/// enumerating every pair.
fn odd_differences_direct(m: u32) -> u32 {
    let h = 2 * m;
    let mut left = std::collections::BTreeSet::new();
    let mut mixed = std::collections::BTreeSet::new();
    for i in 0..h {
        for j in 0..h {
            if i != j {
                let d = (j + h - i) % h;
                left.insert(d.min(h - d));
            }
            mixed.insert((j + h - i) % h);
        }
    }
    let odd = |s: &std::collections::BTreeSet<u32>| s.iter().filter(|d| *d % 2 == 1).count() as u32;
    2 * odd(&left) + odd(&mixed)
}

fn criterion_6() -> Check {
    for m in (3..=199).step_by(2) {
        let o = run(&["obstruct", "--m", &m.to_string()]);
        ensure(o.status.code() == Some(0), format!("m={m}: exit {:?}", o.status.code()))?;
        let text = stdout(&o);
        let total: u32 = text
            .lines()
            .find_map(|l| l.strip_prefix("total_odd="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("m={m}: no total_odd line"))?;
        ensure(total == 2 * m + 1, format!("m={m}: total_odd={total}"))?;
        ensure(total == odd_differences_direct(m), format!("m={m}: direct count disagrees"))?;
        ensure(text.contains("conclusion=RotationalStarterImpossible"), format!("m={m}: conclusion"))?;
    }
    Ok("total_odd = 2m+1 for odd m in 3..=199, matches direct enumeration".into())
}

/// Moves one endpoint of one cycle edge: swaps a vertex of the edge with
/// another vertex inside the same factor.
fn tamper(cert: &Certificate, rng: &mut ChaCha8Rng) -> Certificate {
    let n = cert.spec.n as Vertex;
    loop {
        let fi = rng.gen_range(0..cert.factors.len());
        let edges: Vec<Edge> = cert.factors[fi].edges().collect();
        let e = edges[rng.gen_range(0..edges.len())];
        let a = if rng.gen_bool(0.5) { e.lo() } else { e.hi() };
        let b = rng.gen_range(0..n);
        if b == a {
            continue;
        }
        let mut bad = cert.clone();
        bad.factors[fi] = bad.factors[fi].relabel(|v| if v == a { b } else if v == b { a } else { v });
        let mut before: Vec<Edge> = cert.factors[fi].edges().collect();
        let mut after: Vec<Edge> = bad.factors[fi].edges().collect();
        before.sort();
        after.sort();
        if before != after {
            return bad;
        }
    }
}

fn criterion_7(tmp: &Path) -> Check {
    let start = Instant::now();
    let o = run(&["search", "--variant", "opplus", "--n", "6", "--m", "3", "--mode", "exhaustive"]);
    ensure(o.status.code() == Some(2), format!("exhaustive OP+(6;3) exit {:?}", o.status.code()))?;
    ensure(stdout(&o).contains("PROVED NONE"), "no PROVED NONE line")?;

    let good = factorize_k2m_plus_i(7).map_err(|e| e.to_string())?;
    let path = tmp.join("tamper.cert");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let bad = tamper(&good, &mut rng);
        ensure(!verify_factorization(&bad).is_accepted(), format!("tamper {i} accepted by the library"))?;
        fs::write(&path, format::to_text(&bad)).map_err(|e| e.to_string())?;
        let v = run(&["verify", path.to_str().unwrap()]);
        ensure(v.status.code() == Some(1), format!("tamper {i}: verify exit {:?}", v.status.code()))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("OP+(6;3) proved none; 100/100 tampers rejected ({secs:.1}s)"))
}

/// Not gating: a witness for the smallest open case, if the budget allows.
fn criterion_8(tmp: &Path) -> Check {
    let out = tmp.join("op20.cert");
    let o = run(&[
        "search", "--variant", "opplus", "--n", "20", "--m", "5", "--mode", "hillclimb", "--seed", "0",
        "--max-seconds", "120", "--out", out.to_str().unwrap(),
    ]);
    match o.status.code() {
        Some(0) => {
            let cert = read_cert(&out)?;
            let report = verify_factorization(&cert);
            ensure(report.is_accepted(), format!("witness rejected: {report}"))?;
            Ok("hill climb found a verified OP+(20;5) witness".into())
        }
        Some(3) => Ok("hill climb found nothing within 120s (no claim)".into()),
        other => Err(format!("search exit {other:?}")),
    }
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let checks: Vec<(u8, &str, bool, Box<dyn Fn() -> Check>)> = vec![
        (1, "starter suite", true, Box::new(criterion_1)),
        (2, "printed-instance fidelity", true, Box::new(criterion_2)),
        (3, "census property", true, Box::new(criterion_3)),
        (4, "composition n=30 m=5", true, Box::new(|| criterion_4(tmp.path()))),
        (5, "even lift", true, Box::new(|| criterion_5(tmp.path()))),
        (6, "4m obstruction", true, Box::new(criterion_6)),
        (7, "exhaustive negative and tampering", true, Box::new(|| criterion_7(tmp.path()))),
        (8, "OP+(20;5) hill climb (not gating)", false, Box::new(|| criterion_8(tmp.path()))),
    ];
    let mut failed = 0;
    for (id, name, gating, check) in checks {
        match check() {
            Ok(detail) => println!("PASS criterion {id} {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {id} {name}: {why}");
                if gating {
                    failed += 1;
                }
            }
        }
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        std::process::exit(1);
    }
}
