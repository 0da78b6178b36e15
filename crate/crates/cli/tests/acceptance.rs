//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tribilliard_core::analysis::{witness_constants, ConstantsConfig};
use tribilliard_core::enumeration::{brute_force_diagonals, enumerate_diagonals, PrecisionConfig};
use tribilliard_core::geometry::{unfold_sequence, Combinatorics, KiteVertex};
use tribilliard_core::measure::{sublevel_fraction, SamplerConfig};
use tribilliard_core::partitions::{
    build_partition_sequence, find_close_good_triple, find_good_triples, random_process_sequence,
    verify_lemma_2_1, PartitionError, PartitionSequence,
};
use tribilliard_core::trigpoly::{
    area_polynomial, good_triple_area, symbolic_point, symbolic_unfold_sequence, TrigPoly,
};
use tribilliard_core::{make_triangle, AngleSpec, TriangleShape, Vertex};

const SEED: u64 = 1729;

type Outcome = Result<String, String>;
type Check<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn shapes() -> Vec<(String, TriangleShape)> {
    let pi = |n, d| AngleSpec::pi_fraction(n, d);
    let mut out = vec![
        (
            "equilateral".to_string(),
            TriangleShape::new(pi(1, 3), pi(1, 3), 0.01).unwrap(),
        ),
        (
            "right-isosceles".to_string(),
            TriangleShape::new(pi(1, 2), pi(1, 4), 0.01).unwrap(),
        ),
        (
            "pi/5".to_string(),
            TriangleShape::new(pi(1, 5), pi(1, 5), 0.01).unwrap(),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while out.len() < 5 {
        let a = rng.random_range(0.2..1.4);
        let b = rng.random_range(0.2..1.4);
        if let Ok(t) = make_triangle(a, b, 0.15) {
            out.push((format!("irrational({a:.4},{b:.4})"), t));
        }
    }
    out
}

fn cli(cache: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tribilliard"))
        .args(args)
        .env("TRIBILLIARD_CACHE", cache)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_json(cache: &Path, args: &[&str]) -> Result<Value, String> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, stdout) = cli(cache, &full);
    if code != 0 {
        return Err(format!("{args:?} exited with {code}"));
    }
    serde_json::from_slice(&stdout).map_err(|e| format!("{args:?}: {e}"))
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn enumeration_oracle() -> Outcome {
    let cfg = PrecisionConfig::default();
    let mut compared = 0;
    for (name, t) in shapes() {
        for v in Vertex::ALL {
            let fast = enumerate_diagonals(&t, v, 8, &cfg)
                .map_err(|e| e.to_string())?
                .records;
            let slow = brute_force_diagonals(&t, v, 8).map_err(|e| e.to_string())?;
            ensure(
                fast.len() == slow.len(),
                format!("{name} {v}: {} vs {} records", fast.len(), slow.len()),
            )?;
            for (f, s) in fast.iter().zip(&slow) {
                ensure(
                    f.end_vertex == s.end_vertex
                        && f.reflections == s.reflections
                        && f.edges == s.edges
                        && (f.direction - s.direction).abs() < 1e-10,
                    format!("{name} {v}: {f:?} vs {s:?}"),
                )?;
            }
            compared += fast.len();
        }
    }
    Ok(format!("{compared} records identical across 5 shapes"))
}

fn rational_growth(cache: &Path) -> Outcome {
    let mut found = Vec::new();
    for (alpha, beta) in [("1/3pi", "1/3pi"), ("1/2pi", "1/4pi")] {
        let v = cli_json(
            cache,
            &[
                "--alpha", alpha, "--beta", beta, "--n-max", "40", "report", "--fit-lo", "10",
                "--fit-hi", "40",
            ],
        )?;
        let e = v["result"]["growth"]["exponent"]
            .as_f64()
            .ok_or("report has no growth exponent")?;
        ensure(
            (1.6..=2.4).contains(&e),
            format!("({alpha}, {beta}): exponent {e}"),
        )?;
        found.push(format!("{e:.3}"));
    }
    Ok(format!("exponents {}", found.join(", ")))
}

fn random_shape(rng: &mut ChaCha8Rng) -> TriangleShape {
    loop {
        let a = rng.random_range(0.02..PI);
        let b = rng.random_range(0.02..PI);
        if let Ok(t) = make_triangle(a, b, 0.01) {
            return t;
        }
    }
}

fn symbolic_degrees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut plain, mut side, mut worst) = (0, 0, 0f64);
    let total = 1000;
    for _ in 0..total {
        let comb = Combinatorics::random(rng.random_range(0..=11), &mut rng);
        let sym = symbolic_unfold_sequence(&comb);
        for (i, kite) in sym.iter().enumerate() {
            let n = i as u32 + 1;
            for v in KiteVertex::ALL {
                let p = kite.vertex(v);
                plain += [&p.x, &p.y]
                    .iter()
                    .filter(|c| c.degree().unwrap_or(0) > 2 * n - 2)
                    .count();
                if let Some((m, l)) = p.side {
                    side += usize::from(m.unsigned_abs() + l.unsigned_abs() > 2 * n - 1);
                }
            }
        }
        for _ in 0..5 {
            let shape = random_shape(&mut rng);
            let (a, b) = (shape.alpha(), shape.beta());
            for (frame, kite) in unfold_sequence(&shape, &comb).iter().zip(&sym) {
                for v in KiteVertex::ALL {
                    let x = frame.vertex(v);
                    let y = kite.vertex(v).eval(a, b);
                    worst = worst.max((x[0] - y[0]).abs().max((x[1] - y[1]).abs()));
                }
            }
        }
    }
    ensure(
        plain == 0 && side == 0,
        format!("{plain} plain and {side} side degree violations"),
    )?;
    ensure(worst <= 1e-9, format!("symbolic/numeric gap {worst:e}"))?;
    Ok(format!("{total} combinatorics, largest gap {worst:.1e}"))
}

fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

fn measured_sequences(
    n: usize,
) -> Vec<(
    String,
    TriangleShape,
    Vec<tribilliard_core::enumeration::DiagonalRecord>,
    PartitionSequence,
)> {
    let cfg = PrecisionConfig::default();
    let mut out = Vec::new();
    for (name, t) in shapes() {
        for v in Vertex::ALL {
            let e = enumerate_diagonals(&t, v, n, &cfg).unwrap();
            let s = build_partition_sequence(&t, &e.records, v, n, 1e-12).unwrap();
            out.push((format!("{name} {v}"), t, e.records, s));
        }
    }
    out
}

fn area_polynomials() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst, mut over) = (0f64, 0);
    let samples = 250;
    for _ in 0..samples {
        let shape = random_shape(&mut rng);
        let pts: Vec<(Combinatorics, KiteVertex)> = (0..3)
            .map(|_| {
                let comb = Combinatorics::random(rng.random_range(0..=3), &mut rng);
                (comb, KiteVertex::ALL[rng.random_range(0..4)])
            })
            .collect();
        let sym: Vec<_> = pts.iter().map(|(c, v)| symbolic_point(c, *v)).collect();
        let poly = area_polynomial(&sym[0], &sym[1], &sym[2]);
        let c = pts.iter().map(|(comb, _)| comb.kite_count()).max().unwrap();
        over += usize::from(poly.degree().is_some_and(|d| d > 4 * c as u32));
        let num: Vec<[f64; 2]> = pts
            .iter()
            .map(|(comb, v)| unfold_sequence(&shape, comb).last().unwrap().vertex(*v))
            .collect();
        let (a, b) = (shape.alpha(), shape.beta());
        let area = poly.eval(a, b) / (a + b).sin().powi(2);
        worst = worst.max((area - signed_area(num[0], num[1], num[2])).abs());
    }
    ensure(over == 0, format!("{over} degree violations"))?;
    ensure(worst <= 1e-9, format!("area mismatch {worst:e}"))?;
    let mut triples = 0;
    for (name, shape, records, seq) in measured_sequences(14) {
        for t in find_good_triples(&seq, 1..=14) {
            let area = good_triple_area(&shape, &records, &t).map_err(|e| e.to_string())?;
            ensure(
                !area.polynomial.is_zero() && area.value.abs() > 0.0,
                format!("{name}: vanishing area for {t:?}"),
            )?;
            triples += 1;
        }
    }
    ensure(triples > 0, "no good triples on measured data")?;
    Ok(format!(
        "{samples} sampled triples (gap {worst:.1e}), {triples} measured good triples with nonzero area"
    ))
}

fn good_triple_threshold(cache: &Path) -> Outcome {
    let v = cli_json(cache, &["verify-lemma21"])?;
    ensure(
        v["result"]["passed"] == Value::Bool(true),
        "CLI reports failure",
    )?;
    for c in 1..=3 {
        let r = verify_lemma_2_1(c).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("c = {c}: {r:?}"))?;
        let w = r.seeded_start.witness.as_ref().ok_or("no witness")?;
        ensure(
            w.len() == 3 + 2 * c,
            format!("c = {c}: witness of {} points", w.len()),
        )?;
    }
    Ok("c = 1, 2, 3 hold with witnesses of 3 + 2c points".into())
}

fn close_triples() -> Outcome {
    let (mut applied, mut skipped) = (0, 0);
    let mut check =
        |seq: &PartitionSequence, n: usize, c: usize, label: &str| -> Result<(), String> {
            match find_close_good_triple(seq, &seq.table(), n, c) {
                Ok(found) => {
                    ensure(
                        found.triple.verify(seq),
                        format!("{label}: triple fails re-check"),
                    )?;
                    ensure(
                        found.pairwise.iter().all(|&d| d <= found.bound),
                        format!("{label}: {:?} exceeds {}", found.pairwise, found.bound),
                    )?;
                    applied += 1;
                }
                Err(PartitionError::HypothesisNotMet(_)) => skipped += 1,
                Err(e) => return Err(format!("{label}: {e}")),
            }
            Ok(())
        };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..300 {
        let fill = rng.random_range(0.85..1.0);
        let c = rng.random_range(4..=5);
        let (seq, n) = random_process_sequence(SEED + i, 60, 0.6, c, fill);
        check(&seq, n, c, &format!("fixture {i}"))?;
    }
    for (name, _, _, seq) in measured_sequences(30) {
        for c in 4..=8 {
            for n in 1..=30 - c {
                check(&seq, n, c, &name)?;
            }
        }
    }
    ensure(applied > 0, "hypotheses never held")?;
    Ok(format!(
        "{applied} cases meeting the hypotheses all certified, {skipped} not applicable"
    ))
}

fn constants(cache: &Path) -> Outcome {
    let v = cli_json(cache, &["constants"])?;
    let mu = v["result"]["mu_star"].as_f64().ok_or("no mu_star")?;
    ensure(
        (mu - (3f64.sqrt() - 1.0)).abs() <= 1e-12,
        format!("mu* = {mu}"),
    )?;
    let cases = [
        ((0.8, 0.3, 1.0), true),
        ((0.9, 0.2, 1.0), true),
        ((0.7, 0.3, 1.0), false),
        ((0.8, 0.45, 1.0), false),
        ((0.8, 0.3, 1.1), false),
        ((0.8, 0.15, 1.0), false),
    ];
    for ((mu, epsilon, gamma), expect) in cases {
        let cfg = ConstantsConfig { mu, epsilon, gamma };
        ensure(
            cfg.is_feasible() == expect,
            format!("{cfg:?} should be feasible = {expect}"),
        )?;
    }
    ensure(
        witness_constants(mu).is_err(),
        "threshold itself admits constants",
    )?;
    ensure(
        witness_constants(0.75).is_ok_and(|c| c.is_feasible()),
        "no constants just above the threshold",
    )?;
    Ok(format!(
        "mu* = {mu}, {} feasibility cases agree",
        cases.len()
    ))
}

fn measure_decay(cache: &Path) -> Outcome {
    let seed = SEED.to_string();
    let v = cli_json(
        cache,
        &[
            "--seed",
            &seed,
            "measure-decay",
            "--degrees",
            "4,8,16",
            "--samples",
            "100000",
            "--family-size",
            "50",
            "--vertex-choice",
            "all",
        ],
    )?;
    let rows: Vec<f64> = v["result"]["table"]["rows"]
        .as_array()
        .ok_or("no rows")?
        .iter()
        .map(|r| r["worst_fraction"].as_f64().unwrap_or(f64::NAN))
        .collect();
    ensure(
        rows.windows(2).all(|w| w[1] <= w[0]),
        format!("fractions {rows:?} increase"),
    )?;
    let eps: f64 = 0.01;
    let truth = 4.0 * eps.asin() / TAU;
    let e = sublevel_fraction(
        &TrigPoly::cos(1, 0),
        eps,
        &SamplerConfig::random(SEED, 100_000),
    )
    .map_err(|e| e.to_string())?;
    ensure(
        (e.fraction - truth).abs() <= 3.0 * e.standard_error,
        format!(
            "cos(α): {} vs {truth} (se {})",
            e.fraction, e.standard_error
        ),
    )?;
    Ok(format!(
        "worst fractions {rows:?}, cos(α) {:.5} vs {truth:.5}",
        e.fraction
    ))
}

fn bound_reports(cache: &Path) -> Outcome {
    let mut lines = Vec::new();
    for (name, shape) in shapes() {
        let (alpha, beta) = (
            shape.alpha_spec().canonical(),
            shape.beta_spec().canonical(),
        );
        let delta = shape.delta().to_string();
        let v = cli_json(
            cache,
            &[
                "--alpha",
                &alpha,
                "--beta",
                &beta,
                "--delta",
                &delta,
                "--n-max",
                "30",
                "report",
                "--epsilon",
                "0.05",
            ],
        )?;
        let c = v["result"]["bounds"]["implied_c"]
            .as_f64()
            .ok_or(format!("{name}: no implied C"))?;
        ensure(c.is_finite(), format!("{name}: implied C = {c}"))?;
        lines.push(format!("{name} C={c:.3}"));
    }
    Ok(lines.join(", "))
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir.join("artifacts"))
        .map(|rd| {
            rd.filter_map(Result::ok)
                .map(|e| {
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        fs::read(e.path()).unwrap(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    out.sort();
    out
}

fn reproducibility() -> Outcome {
    let runs: [&[&str]; 6] = [
        &[
            "--alpha",
            "0.8",
            "--beta",
            "1.1",
            "--n-max",
            "16",
            "enumerate",
        ],
        &[
            "--alpha",
            "0.8",
            "--beta",
            "1.1",
            "--n-max",
            "16",
            "good-triples",
        ],
        &["--n-max", "20", "report", "--format", "csv"],
        &["symbolic-check", "--count", "50"],
        &["measure-decay", "--samples", "5000", "--family-size", "10"],
        &["verify-lemma21", "--c", "2"],
    ];
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for dir in &dirs {
        for args in runs {
            let (code, _) = cli(dir.path(), args);
            ensure(code == 0, format!("{args:?} exited with {code}"))?;
        }
    }
    // a third pass over warm caches
    for args in runs {
        cli(dirs[0].path(), args);
    }
    let a = artifacts(dirs[0].path());
    let b = artifacts(dirs[1].path());
    ensure(!a.is_empty() && a == b, "artifact sets differ")?;
    Ok(format!(
        "{} artifacts byte-identical across cold and warm caches",
        a.len()
    ))
}

fn main() -> ExitCode {
    let cache = tempfile::tempdir().unwrap();
    let dir = cache.path();
    let checks: Vec<Check> = vec![
        (
            "pruned enumeration equals brute force",
            Box::new(enumeration_oracle),
        ),
        (
            "quadratic growth for rational shapes",
            Box::new(|| rational_growth(dir)),
        ),
        (
            "symbolic unfolding degrees and agreement",
            Box::new(symbolic_degrees),
        ),
        (
            "area polynomial exactness and degree",
            Box::new(area_polynomials),
        ),
        (
            "good-triple threshold, exhaustive",
            Box::new(|| good_triple_threshold(dir)),
        ),
        (
            "close good triples under the hypotheses",
            Box::new(close_triples),
        ),
        (
            "threshold exponent and feasibility",
            Box::new(|| constants(dir)),
        ),
        ("sublevel measure decay", Box::new(|| measure_decay(dir))),
        (
            "bound report for measured tables",
            Box::new(|| bound_reports(dir)),
        ),
        ("byte-identical artifacts", Box::new(reproducibility)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
