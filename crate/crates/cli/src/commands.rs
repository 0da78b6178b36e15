use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use tribilliard_core::analysis::{
    bound_report, format_float, gap_sequence, growth_exponent, solve_constants, witness_constants,
    ConstantsConfig,
};
use tribilliard_core::enumeration::{
    complexity_table, per_vertex_table, ComplexityTable, Enumeration,
};
use tribilliard_core::geometry::{unfold_sequence, Combinatorics, KiteVertex};
use tribilliard_core::measure::{
    decay_experiment, Domain, FamilyTemplate, SamplerConfig, SamplingMode,
};
use tribilliard_core::partitions::{
    build_partition_sequence, find_close_good_triple, find_good_triples, verify_lemma_2_1,
    PartitionError, PartitionSequence,
};
use tribilliard_core::trigpoly::{
    area_polynomial, family_generate, family_size_exponent, good_triple_area, symbolic_numeric_gap,
    symbolic_point, symbolic_unfold_sequence, FamilyConfig, SymbolicPoint, TrigPoly, VertexChoice,
};
use tribilliard_core::{make_triangle, TriangleShape, Vertex};

use crate::args::{ChoiceArg, Cli, Command, DomainArg, Format, RunConfig};
use crate::error::CliError;
use crate::store::{Store, CODE_VERSION, SCHEMA_VERSION};

/// Tolerance for merging cutting points that coincide numerically.
const MERGE_TOLERANCE: f64 = 1e-12;
/// Largest accepted difference between symbolic and numeric evaluations.
const AGREEMENT: f64 = 1e-9;

pub struct Outcome {
    pub counterexample: bool,
}

struct Output {
    result: Value,
    csv: Vec<u8>,
    text: String,
    counterexample: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let run = &cli.run;
    if run.n_max == 0 {
        return Err(CliError::Invalid("--n-max must be at least 1".into()));
    }
    let store = Store::new(run.cache_dir.clone());
    let out = match &cli.command {
        Command::Enumerate { vertex } => enumerate(run, &store, *vertex)?,
        Command::Partitions { vertex } => partitions(run, &store, *vertex)?,
        Command::GoodTriples {
            vertex,
            lo,
            hi,
            close_n,
            close_c,
        } => good_triples(
            run,
            &store,
            *vertex,
            *lo,
            hi.unwrap_or(run.n_max),
            *close_n,
            *close_c,
        )?,
        Command::SymbolicCheck {
            count,
            max_moves,
            angle_pairs,
        } => symbolic_check(run, *count, *max_moves, *angle_pairs)?,
        Command::AreaPoly {
            points,
            kites,
            count,
        } => area_poly(run, points, *kites, *count)?,
        Command::MeasureDecay {
            degrees,
            r,
            samples,
            family_size,
            c_ref,
            vertex_choice,
            domain,
            stratified,
        } => {
            let sampler = SamplerConfig {
                seed: run.seed,
                sample_count: *samples,
                domain: match domain {
                    DomainArg::Full => Domain::FullTorus,
                    DomainArg::Admissible => Domain::Admissible { delta: run.delta },
                },
                mode: if *stratified {
                    SamplingMode::Stratified
                } else {
                    SamplingMode::Random
                },
            };
            let family = FamilyTemplate {
                count: *family_size,
                seed: run.seed,
                vertex_choice: choice(*vertex_choice),
            };
            measure_decay(degrees, *r, &family, &sampler, *c_ref)?
        }
        Command::Constants { mu, epsilon, gamma } => constants(*mu, *epsilon, *gamma)?,
        Command::Report {
            mu,
            epsilon,
            fit_lo,
            fit_hi,
            vertex,
        } => report(
            run,
            &store,
            mu.unwrap_or(solve_constants().mu_star),
            *epsilon,
            *fit_lo,
            fit_hi.unwrap_or(run.n_max),
            *vertex,
        )?,
        Command::VerifyLemma21 { c } => lemma21(c.map_or(vec![1, 2, 3], |c| vec![c]))?,
    };
    emit(run, &store, &cli.command, out)
}

fn emit(
    run: &RunConfig,
    store: &Store,
    command: &Command,
    out: Output,
) -> Result<Outcome, CliError> {
    let kind = command.kind();
    let artifact = json!({
        "schema_version": SCHEMA_VERSION,
        "code_version": CODE_VERSION,
        "kind": kind,
        "config": { "run": run, "command": command },
        "counterexample": out.counterexample,
        "result": out.result,
    });
    let mut bytes = serde_json::to_vec_pretty(&artifact)?;
    bytes.push(b'\n');
    let path = store.artifact(kind, "json", &bytes)?;
    eprintln!("artifact: {}", path.display());
    match run.format {
        Format::Json => print!("{}", String::from_utf8_lossy(&bytes)),
        Format::Csv => {
            let path = store.artifact(kind, "csv", &out.csv)?;
            eprintln!("artifact: {}", path.display());
            print!("{}", String::from_utf8_lossy(&out.csv));
        }
        Format::Text => println!("{}", out.text.trim_end()),
    }
    if out.counterexample {
        eprintln!("counterexample found; see artifact");
    }
    Ok(Outcome {
        counterexample: out.counterexample,
    })
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn choice(c: ChoiceArg) -> VertexChoice {
    match c {
        ChoiceArg::All => VertexChoice::All,
        ChoiceArg::DiagonalEndpoints => VertexChoice::DiagonalEndpoints,
    }
}

fn enumerations(
    run: &RunConfig,
    store: &Store,
    shape: &TriangleShape,
    vertices: &[Vertex],
) -> Result<Vec<Enumeration>, CliError> {
    let precision = run.precision();
    vertices
        .iter()
        .map(|&v| store.enumeration(shape, v, run.n_max, &precision))
        .collect()
}

fn enumerate(run: &RunConfig, store: &Store, vertex: Option<Vertex>) -> Result<Output, CliError> {
    let shape = run.shape()?;
    let vertices = vertex.map_or(Vertex::ALL.to_vec(), |v| vec![v]);
    let enums = enumerations(run, store, &shape, &vertices)?;
    let n = run.n_max;
    let tables: Vec<ComplexityTable> = enums
        .iter()
        .map(|e| per_vertex_table(&e.records, e.start_vertex, n))
        .collect();
    let global =
        (vertex.is_none()).then(|| complexity_table(enums.iter().map(|e| e.records.as_slice()), n));
    let in_bound = tables
        .iter()
        .chain(global.as_ref())
        .all(ComplexityTable::within_trivial_bound);
    let warnings: usize = enums
        .iter()
        .map(|e| e.records.iter().filter(|r| r.precision_warning).count())
        .sum();
    let ambiguities: Vec<_> = enums.iter().flat_map(|e| e.ambiguities.iter()).collect();

    let mut text = format!("shape {}\n", shape.canonical());
    if let Some(g) = &global {
        text += &format!("P_n (undirected): {:?}\n", g.counts());
    }
    for t in &tables {
        text += &format!("{:?}: {:?}\n", t.convention(), t.counts());
    }
    text += &format!(
        "ambiguous branches: {}, precision warnings: {warnings}\n",
        ambiguities.len()
    );
    if !in_bound {
        text += "trivial bound P_n <= k 3^n violated\n";
    }

    let mut header = vec!["n".to_string()];
    if global.is_some() {
        header.push("p_n".into());
    }
    header.extend(vertices.iter().map(|v| format!("p_n_{v}")));
    let rows = (0..=n).map(|i| {
        global
            .iter()
            .chain(&tables)
            .map(|t| t.counts()[i].to_string())
            .fold(vec![i.to_string()], |mut acc, x| {
                acc.push(x);
                acc
            })
    });
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let csv = csv_bytes(&header, rows)?;

    let per_vertex: BTreeMap<String, &[u64]> = enums
        .iter()
        .zip(&tables)
        .map(|(e, t)| (e.start_vertex.to_string(), t.counts()))
        .collect();
    let diagonals: BTreeMap<String, usize> = enums
        .iter()
        .map(|e| (e.start_vertex.to_string(), e.records.len()))
        .collect();
    Ok(Output {
        result: json!({
            "shape": shape.canonical(),
            "table": global.as_ref().map(|g| g.counts()),
            "per_vertex": per_vertex,
            "diagonals": diagonals,
            "nodes_visited": enums.iter().map(|e| e.nodes_visited).sum::<u64>(),
            "ambiguities": ambiguities,
            "precision_warnings": warnings,
            "within_trivial_bound": in_bound,
        }),
        csv,
        text,
        counterexample: !in_bound,
    })
}

fn sequence(
    run: &RunConfig,
    store: &Store,
    vertex: Vertex,
) -> Result<(TriangleShape, Enumeration, PartitionSequence), CliError> {
    let shape = run.shape()?;
    let e = enumerations(run, store, &shape, &[vertex])?.remove(0);
    let seq = build_partition_sequence(&shape, &e.records, vertex, run.n_max, MERGE_TOLERANCE)?;
    Ok((shape, e, seq))
}

fn partitions(run: &RunConfig, store: &Store, vertex: Vertex) -> Result<Output, CliError> {
    let (_, _, seq) = sequence(run, store, vertex)?;
    let violations = seq.property_one_violations();
    let levels: Vec<_> = (0..=run.n_max)
        .map(|n| (n, seq.count(n), seq.max_interval_length(n)))
        .collect();
    let mut text = format!(
        "vertex {vertex}, sector ({}, {})\n",
        format_float(seq.sector().0),
        format_float(seq.sector().1)
    );
    for (n, count, gap) in &levels {
        text += &format!(
            "n = {n:>3}: {count} cutting points, longest interval {}\n",
            format_float(*gap)
        );
    }
    text += &format!("merged duplicates: {}\n", seq.duplicates().len());
    text += &format!("refinement violations: {}\n", violations.len());
    let csv = csv_bytes(
        &["n", "count", "max_interval"],
        levels
            .iter()
            .map(|(n, c, g)| [n.to_string(), c.to_string(), format_float(*g)]),
    )?;
    Ok(Output {
        result: json!({
            "vertex": vertex,
            "sector": seq.sector(),
            "points": seq.points(),
            "duplicates": seq.duplicates(),
            "levels": levels.iter().map(|(n, c, g)| json!({"n": n, "count": c, "max_interval": g})).collect::<Vec<_>>(),
            "violations": violations,
        }),
        csv,
        text,
        counterexample: !violations.is_empty(),
    })
}

#[allow(clippy::too_many_arguments)]
fn good_triples(
    run: &RunConfig,
    store: &Store,
    vertex: Vertex,
    lo: usize,
    hi: usize,
    close_n: Option<usize>,
    close_c: usize,
) -> Result<Output, CliError> {
    if lo > hi || hi > run.n_max {
        return Err(CliError::Invalid(format!(
            "index range {lo}..={hi} is outside 0..={}",
            run.n_max
        )));
    }
    let (shape, e, seq) = sequence(run, store, vertex)?;
    let triples = find_good_triples(&seq, lo..=hi);
    let areas = triples
        .iter()
        .map(|t| good_triple_area(&shape, &e.records, t))
        .collect::<Result<Vec<_>, _>>()?;
    let unverified = triples.iter().filter(|t| !t.verify(&seq)).count();
    let zero_area = areas.iter().filter(|a| a.polynomial.is_zero()).count();
    let mut counterexample = unverified > 0 || zero_area > 0;
    let mut text = format!(
        "{} good triples with indices in {lo}..={hi}\n",
        triples.len()
    );
    text += &format!("failed re-check: {unverified}, zero area polynomial: {zero_area}\n");

    let close = match close_n {
        None => Value::Null,
        Some(n) => match find_close_good_triple(&seq, &seq.table(), n, close_c) {
            Ok(ct) => {
                text += &format!(
                    "close triple ({}, {}, {}) with span {} <= {}\n",
                    ct.triple.p,
                    ct.triple.q,
                    ct.triple.r,
                    format_float(ct.pairwise[0]),
                    format_float(ct.bound)
                );
                json!({ "found": ct })
            }
            Err(PartitionError::HypothesisNotMet(why)) => {
                text += &format!("close-triple search not applicable: {why}\n");
                json!({ "hypothesis_not_met": why })
            }
            Err(err @ PartitionError::SearchFailed { .. }) => {
                counterexample = true;
                text += &format!("close-triple search failed: {err}\n");
                json!({ "failed": err.to_string() })
            }
            Err(err) => return Err(err.into()),
        },
    };

    let csv = csv_bytes(
        &[
            "p",
            "q",
            "r",
            "x_p",
            "x_q",
            "x_r",
            "area_value",
            "area_degree",
        ],
        areas.iter().map(|a| {
            let t = a.triple;
            [
                t.p.to_string(),
                t.q.to_string(),
                t.r.to_string(),
                format_float(t.x_p),
                format_float(t.x_q),
                format_float(t.x_r),
                format_float(a.value),
                a.polynomial
                    .degree()
                    .map_or(String::new(), |d| d.to_string()),
            ]
        }),
    )?;
    Ok(Output {
        result: json!({
            "vertex": vertex,
            "range": [lo, hi],
            "triples": areas.iter().map(|a| json!({
                "triple": a.triple,
                "kites": a.kites,
                "area": a.polynomial.to_string(),
                "area_terms": a.polynomial,
                "area_value": a.value,
                "numeric_area": a.numeric,
            })).collect::<Vec<_>>(),
            "unverified": unverified,
            "zero_area": zero_area,
            "close": close,
        }),
        csv,
        text,
        counterexample,
    })
}

/// Degree-bound excess of one unfolding: every kite `n` (1-based) must have
/// plain coordinates of degree at most `2n − 2` and side frequencies with
/// `|m| + |l| <= 2n − 1`.
#[derive(Debug, Default, Clone, Copy, Serialize)]
struct DegreeAudit {
    plain_violations: usize,
    side_violations: usize,
    max_degree: u32,
}

fn degree_audit(comb: &Combinatorics) -> DegreeAudit {
    let mut audit = DegreeAudit::default();
    for (i, kite) in symbolic_unfold_sequence(comb).iter().enumerate() {
        let n = i as u32 + 1;
        for v in KiteVertex::ALL {
            let p = kite.vertex(v);
            for c in [&p.x, &p.y] {
                let d = c.degree().unwrap_or(0);
                audit.max_degree = audit.max_degree.max(d);
                if d > 2 * n - 2 {
                    audit.plain_violations += 1;
                }
            }
            if let Some((m, l)) = p.side {
                if m.unsigned_abs() + l.unsigned_abs() > 2 * n - 1 {
                    audit.side_violations += 1;
                }
            }
        }
    }
    audit
}

fn dyadic_histogram<'a>(
    polys: impl IntoIterator<Item = &'a TrigPoly>,
    hist: &mut BTreeMap<String, usize>,
) {
    for p in polys {
        let key = p
            .dyadic_exponent()
            .map_or("non-dyadic".to_string(), |e| format!("2^-{e}"));
        *hist.entry(key).or_default() += 1;
    }
}

fn random_admissible(rng: &mut ChaCha8Rng, delta: f64) -> Result<TriangleShape, CliError> {
    let margin = delta + 1e-9;
    if 3.0 * margin >= PI {
        return Err(CliError::Invalid(format!(
            "no admissible angles for delta {delta}"
        )));
    }
    let alpha = rng.random_range(margin..PI - 2.0 * margin);
    let beta = rng.random_range(margin..PI - margin - alpha);
    Ok(make_triangle(alpha, beta, delta)?)
}

fn symbolic_check(
    run: &RunConfig,
    count: usize,
    max_moves: usize,
    angle_pairs: usize,
) -> Result<Output, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let mut rows = Vec::with_capacity(count);
    let mut hist = BTreeMap::new();
    let mut totals = DegreeAudit::default();
    let mut worst_gap: f64 = 0.0;
    for _ in 0..count {
        let len = rng.random_range(0..=max_moves);
        let comb = Combinatorics::random(len, &mut rng);
        let audit = degree_audit(&comb);
        for kite in symbolic_unfold_sequence(&comb) {
            for v in KiteVertex::ALL {
                let p = kite.vertex(v);
                dyadic_histogram([&p.x, &p.y], &mut hist);
            }
        }
        let mut gap: f64 = 0.0;
        for _ in 0..angle_pairs {
            let shape = random_admissible(&mut rng, run.delta)?;
            gap = gap.max(symbolic_numeric_gap(&shape, &comb));
        }
        worst_gap = worst_gap.max(gap);
        totals.plain_violations += audit.plain_violations;
        totals.side_violations += audit.side_violations;
        totals.max_degree = totals.max_degree.max(audit.max_degree);
        rows.push((comb, audit, gap));
    }
    let agree = worst_gap <= AGREEMENT;
    let text = format!(
        "{count} combinatorics of up to {max_moves} moves, {angle_pairs} angle pairs each\n\
         degree violations: {} plain, {} side\n\
         largest symbolic/numeric gap: {:e}\n\
         coefficient denominators: {hist:?}\n",
        totals.plain_violations, totals.side_violations, worst_gap
    );
    let csv = csv_bytes(
        &["combinatorics", "kites", "max_degree", "violations", "gap"],
        rows.iter().map(|(c, a, g)| {
            [
                c.to_string(),
                c.kite_count().to_string(),
                a.max_degree.to_string(),
                (a.plain_violations + a.side_violations).to_string(),
                format!("{g:e}"),
            ]
        }),
    )?;
    Ok(Output {
        result: json!({
            "count": count,
            "max_moves": max_moves,
            "angle_pairs": angle_pairs,
            "plain_violations": totals.plain_violations,
            "side_violations": totals.side_violations,
            "max_degree": totals.max_degree,
            "max_gap": worst_gap,
            "agreement": agree,
            "denominators": hist,
            "failures": rows.iter().filter(|(_, a, g)| a.plain_violations + a.side_violations > 0 || *g > AGREEMENT)
                .map(|(c, a, g)| json!({"combinatorics": c, "audit": a, "gap": g})).collect::<Vec<_>>(),
        }),
        csv,
        text,
        counterexample: totals.plain_violations + totals.side_violations > 0 || !agree,
    })
}

fn parse_point(s: &str) -> Result<(Combinatorics, KiteVertex), CliError> {
    let (moves, vertex) = s
        .rsplit_once(':')
        .ok_or_else(|| CliError::Invalid(format!("point {s:?} is not MOVES:VERTEX")))?;
    Ok((moves.parse()?, vertex.parse()?))
}

fn area_poly(
    run: &RunConfig,
    points: &[String],
    kites: usize,
    count: usize,
) -> Result<Output, CliError> {
    match points.len() {
        0 => area_family(run, kites, count),
        3 => {
            let shape = run.shape()?;
            let parsed = points
                .iter()
                .map(|p| parse_point(p))
                .collect::<Result<Vec<_>, _>>()?;
            let sym: Vec<SymbolicPoint> =
                parsed.iter().map(|(c, v)| symbolic_point(c, *v)).collect();
            let num: Vec<[f64; 2]> = parsed
                .iter()
                .map(|(c, v)| {
                    unfold_sequence(&shape, c)
                        .last()
                        .expect("at least one kite")
                        .vertex(*v)
                })
                .collect();
            let poly = area_polynomial(&sym[0], &sym[1], &sym[2]);
            let c = sym.iter().map(|p| p.kites).max().unwrap_or(1);
            let (a, b) = (shape.alpha(), shape.beta());
            let value = poly.eval(a, b);
            let numeric = 0.5
                * ((num[1][0] - num[0][0]) * (num[2][1] - num[0][1])
                    - (num[1][1] - num[0][1]) * (num[2][0] - num[0][0]))
                * (a + b).sin().powi(2);
            let degree = poly.degree();
            let bound = 4 * c as u32;
            let over = degree.is_some_and(|d| d > bound);
            let gap = (value - numeric).abs();
            let text = format!(
                "A(α, β) = {poly}\ndegree {} (bound {bound}), value {} vs numeric {}\n",
                degree.map_or("-".to_string(), |d| d.to_string()),
                format_float(value),
                format_float(numeric)
            );
            let csv = csv_bytes(
                &["m", "l", "cos", "sin"],
                poly.terms().map(|((m, l), c, s)| {
                    [m.to_string(), l.to_string(), c.to_string(), s.to_string()]
                }),
            )?;
            Ok(Output {
                result: json!({
                    "points": points,
                    "polynomial": poly,
                    "display": poly.to_string(),
                    "degree": degree,
                    "kites": c,
                    "degree_bound": bound,
                    "value": value,
                    "numeric": numeric,
                }),
                csv,
                text,
                counterexample: over || gap > AGREEMENT,
            })
        }
        n => Err(CliError::Invalid(format!(
            "give zero or three --point values, got {n}"
        ))),
    }
}

fn area_family(run: &RunConfig, kites: usize, count: usize) -> Result<Output, CliError> {
    if kites == 0 {
        return Err(CliError::Invalid("--kites must be at least 1".into()));
    }
    let bound = 4 * kites as u32;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut violations = 0;
    for vc in [VertexChoice::All, VertexChoice::DiagonalEndpoints] {
        let polys = family_generate(&FamilyConfig {
            kites,
            count,
            seed: run.seed,
            vertex_choice: vc,
        });
        let nonzero = polys.iter().filter(|p| !p.is_zero()).count();
        let max_degree = polys.iter().filter_map(TrigPoly::degree).max();
        let over = polys
            .iter()
            .filter(|p| p.degree().is_some_and(|d| d > bound))
            .count();
        violations += over;
        let mut hist = BTreeMap::new();
        dyadic_histogram(&polys, &mut hist);
        let exponent = family_size_exponent(polys.len(), kites);
        text += &format!(
            "{vc:?}: {} distinct polynomials ({nonzero} nonzero), size exponent {}, max degree {} (bound {bound})\n",
            polys.len(),
            format_float(exponent),
            max_degree.map_or("-".to_string(), |d| d.to_string())
        );
        rows.push(json!({
            "vertex_choice": vc,
            "distinct": polys.len(),
            "nonzero": nonzero,
            "size_exponent": exponent,
            "max_degree": max_degree,
            "degree_violations": over,
            "denominators": hist,
        }));
    }
    let csv = csv_bytes(
        &[
            "vertex_choice",
            "distinct",
            "nonzero",
            "size_exponent",
            "max_degree",
        ],
        rows.iter().map(|r| {
            [
                "vertex_choice",
                "distinct",
                "nonzero",
                "size_exponent",
                "max_degree",
            ]
            .map(|k| match &r[k] {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.as_f64().map_or(n.to_string(), |x| {
                    if n.is_f64() {
                        format_float(x)
                    } else {
                        n.to_string()
                    }
                }),
                other => other.to_string(),
            })
        }),
    )?;
    Ok(Output {
        result: json!({ "kites": kites, "count": count, "degree_bound": bound, "families": rows }),
        csv,
        text,
        counterexample: violations > 0,
    })
}

fn measure_decay(
    degrees: &[usize],
    r: f64,
    family: &FamilyTemplate,
    sampler: &SamplerConfig,
    c_ref: f64,
) -> Result<Output, CliError> {
    let table = decay_experiment(degrees, r, family, sampler, c_ref)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    let mut text = format!(
        "R = {}, {} samples per polynomial\n",
        format_float(r),
        table.sample_count
    );
    for row in &table.rows {
        text += &format!(
            "m = {:>3}: eps = {:e}, worst fraction {} ± {} over {} polynomials\n",
            row.degree,
            row.eps,
            format_float(row.worst_fraction),
            format_float(row.standard_error),
            row.family_size
        );
    }
    let nonincreasing = table.is_nonincreasing();
    if !nonincreasing {
        log::warn!("worst fractions are not nonincreasing in m");
        text += "worst fractions are not nonincreasing in m\n";
    }
    Ok(Output {
        result: json!({ "table": table, "nonincreasing": nonincreasing }),
        csv,
        text,
        counterexample: false,
    })
}

fn constants(mu: Option<f64>, epsilon: Option<f64>, gamma: f64) -> Result<Output, CliError> {
    let sol = solve_constants();
    let mut text = format!("mu* = {}\n", format_float(sol.mu_star));
    let mut result = json!({ "mu_star": sol.mu_star, "residual": sol.residual });
    let cfg = match (mu, epsilon) {
        (Some(mu), Some(epsilon)) => Some(ConstantsConfig { mu, epsilon, gamma }),
        (Some(mu), None) => Some(witness_constants(mu)?),
        _ => None,
    };
    if let Some(cfg) = cfg {
        let f = cfg.feasibility();
        let ok = cfg.is_feasible();
        text += &format!(
            "mu = {}, epsilon = {}, gamma = {}: {}\n",
            format_float(cfg.mu),
            format_float(cfg.epsilon),
            format_float(cfg.gamma),
            if ok { "feasible" } else { "infeasible" }
        );
        result["config"] = json!(cfg);
        result["feasibility"] = json!(f);
        result["feasible"] = json!(ok);
    }
    let mut csv_rows = vec![vec!["mu_star".to_string(), format_float(sol.mu_star)]];
    if let Some(cfg) = cfg {
        csv_rows.push(vec!["mu".into(), format_float(cfg.mu)]);
        csv_rows.push(vec!["epsilon".into(), format_float(cfg.epsilon)]);
        csv_rows.push(vec!["gamma".into(), format_float(cfg.gamma)]);
        csv_rows.push(vec!["feasible".into(), cfg.is_feasible().to_string()]);
    }
    Ok(Output {
        result,
        csv: csv_bytes(&["name", "value"], csv_rows)?,
        text,
        counterexample: false,
    })
}

fn report(
    run: &RunConfig,
    store: &Store,
    mu: f64,
    epsilon: f64,
    fit_lo: usize,
    fit_hi: usize,
    vertex: Option<Vertex>,
) -> Result<Output, CliError> {
    let shape = run.shape()?;
    let vertices = vertex.map_or(Vertex::ALL.to_vec(), |v| vec![v]);
    let enums = enumerations(run, store, &shape, &vertices)?;
    let table = match vertex {
        Some(v) => per_vertex_table(&enums[0].records, v, run.n_max),
        None => complexity_table(enums.iter().map(|e| e.records.as_slice()), run.n_max),
    };
    let fit = growth_exponent(&table, fit_lo, fit_hi);
    let gaps = gap_sequence(&table, mu);
    let long = gaps.long_gaps(epsilon);
    let bounds = bound_report(&table, mu, epsilon);
    let mut csv = Vec::new();
    bounds.write_csv(&mut csv)?;
    let mut text = format!(
        "shape {}, table {:?}\n",
        shape.canonical(),
        table.convention()
    );
    match &fit {
        Ok(f) => {
            text += &format!(
                "growth exponent {} over n = {}..={} (rms residual {})\n",
                format_float(f.exponent),
                f.n_lo,
                f.n_hi,
                format_float(f.residual)
            )
        }
        Err(e) => text += &format!("growth fit unavailable: {e}\n"),
    }
    text += &format!("times with P_n < e^(n^mu): {:?}\n", gaps.times);
    text += &format!("{}\n", bounds.summary());
    Ok(Output {
        result: json!({
            "shape": shape.canonical(),
            "table": table,
            "growth": fit.as_ref().ok(),
            "growth_error": fit.as_ref().err().map(ToString::to_string),
            "gaps": gaps,
            "long_gaps": long,
            "bounds": bounds,
        }),
        csv,
        text,
        counterexample: false,
    })
}

fn lemma21(cs: Vec<usize>) -> Result<Output, CliError> {
    let reports = cs
        .iter()
        .map(|&c| verify_lemma_2_1(c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        text += &format!(
            "c = {}: threshold {}; empty start at most {} points without a triple; seeded start at most {}; {}\n",
            r.c,
            r.threshold,
            r.empty_start.max_triple_free,
            r.seeded_start.max_triple_free,
            if r.passed() { "holds" } else { "FAILS" }
        );
        for v in [&r.empty_start, &r.seeded_start] {
            rows.push([
                r.c.to_string(),
                format!("{:?}", v.variant).to_lowercase(),
                v.start_configurations.to_string(),
                v.states_explored.to_string(),
                v.max_triple_free.to_string(),
                v.claim_holds.to_string(),
            ]);
        }
    }
    Ok(Output {
        result: json!({ "reports": reports, "passed": reports.iter().all(|r| r.passed()) }),
        csv: csv_bytes(
            &[
                "c",
                "variant",
                "starts",
                "states",
                "max_triple_free",
                "claim_holds",
            ],
            rows,
        )?,
        text,
        counterexample: !reports.iter().all(|r| r.passed()),
    })
}
