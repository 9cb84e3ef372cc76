//! The `topograph` command line. Every subcommand prints one JSON document
//! (the `dot` subcommand prints Graphviz text); diagnostics go to standard
//! error. Exit codes: 0 success, 1 domain error, 2 usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::exact::Farey;
use crate::forms::{self, QuadForm, ReducedTuple};
use crate::master::{self, Cluster, MasterParams, Perm, Seed, Var};
use crate::painleve::{self as pvi, Branch, LocalData, MonodromyPoint, Theta};
use crate::snake::{self, Word, MAX_BRUTE_FORCE_TILES};
use crate::topograph;

/// Largest accepted magnitude of a form coefficient or cluster entry.
pub const MAX_INPUT: i128 = 1 << 60;

#[derive(Parser, Debug)]
#[command(name = "topograph", version, about = "Cluster mutations, topograph reduction and rattlesnakes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a binary quadratic form to its reduced vertices.
    Reduce {
        #[command(flatten)]
        form: FormArg,
        /// Cap on walk letters and river steps.
        #[arg(long, default_value_t = forms::DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Decide (strict) equivalence of two forms.
    Equiv {
        /// Coefficients a,b,c or a cluster w:n:e.
        #[arg(long, value_parser = parse_form_any)]
        form1: QuadForm,
        #[arg(long, value_parser = parse_form_any)]
        form2: QuadForm,
        /// Also decide SL2(Z)-equivalence.
        #[arg(long)]
        strict: bool,
    },
    /// Enumerate Markov triples around (1,1,1).
    Markov {
        #[arg(long)]
        depth: usize,
    },
    /// Mutate the initial seed symbolically and report Laurent certificates.
    LaurentCheck {
        /// markov | conway | disc:D | generic:S | pvi:t1,t2,t3,t4 | custom:d1,d2,d3,s1,s2,s3,zeta,tau
        #[arg(long, value_parser = parse_params)]
        params: MasterParams<BigInt>,
        /// Comma-separated mutation indices and transpositions, e.g. "2,(23),3".
        #[arg(long, value_parser = parse_sequence)]
        sequence: Sequence,
        /// Initial integers to evaluate the entries at.
        #[arg(long, value_parser = parse_triple)]
        at: Option<[i128; 3]>,
    },
    /// Snake graph counts for a word or a fraction.
    Snake {
        #[arg(long, conflicts_with = "fraction", required_unless_present = "fraction")]
        word: Option<Word>,
        #[arg(long, allow_hyphen_values = true)]
        fraction: Option<Farey>,
    },
    /// PVI monodromy: relation checks or an orbit.
    Pvi {
        #[arg(long, value_parser = parse_complex4, allow_hyphen_values = true)]
        theta: Option<[Complex64; 4]>,
        #[arg(long, value_parser = parse_complex4, allow_hyphen_values = true)]
        kappa: Option<[Complex64; 4]>,
        /// Local data a1,a2,a3,a_inf.
        #[arg(long, value_parser = parse_complex4, allow_hyphen_values = true)]
        a: Option<[Complex64; 4]>,
        #[arg(long, value_enum, default_value_t = PviCheck::Relations)]
        check: PviCheck,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generations of the orbit search.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Graphviz text for the topograph around a form.
    Dot {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FormArg {
    /// Coefficients a,b,c of ax² + bxy + cy².
    #[arg(long, value_parser = parse_coefficients, allow_hyphen_values = true)]
    form: Option<QuadForm>,
    /// Cluster w:n:e.
    #[arg(long, value_parser = parse_cluster, allow_hyphen_values = true)]
    cluster: Option<QuadForm>,
}

impl FormArg {
    fn get(&self) -> QuadForm {
        self.form.or(self.cluster).expect("clap enforces one of the group")
    }
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PviCheck {
    Relations,
    Orbit,
}

#[derive(Debug, Clone)]
enum SeqOp {
    Mutate(Var),
    Swap(Var, Var),
}

#[derive(Debug, Clone)]
struct Sequence(Vec<SeqOp>);

fn int_list(s: &str, sep: char, n: usize) -> std::result::Result<Vec<i128>, String> {
    let v: Vec<i128> = s
        .split(sep)
        .map(|t| t.trim().parse::<i128>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} integers separated by '{sep}'"));
    }
    if v.iter().any(|x| x.abs() > MAX_INPUT) {
        return Err("entries must be at most 2^60 in absolute value".into());
    }
    Ok(v)
}

fn parse_coefficients(s: &str) -> std::result::Result<QuadForm, String> {
    let v = int_list(s, ',', 3)?;
    Ok(QuadForm::from_coefficients(v[0], v[1], v[2]))
}

fn parse_cluster(s: &str) -> std::result::Result<QuadForm, String> {
    let v = int_list(s, ':', 3)?;
    Ok(QuadForm::from_cluster(v[0], v[1], v[2]))
}

fn parse_form_any(s: &str) -> std::result::Result<QuadForm, String> {
    if s.contains(':') {
        parse_cluster(s)
    } else {
        parse_coefficients(s)
    }
}

fn parse_triple(s: &str) -> std::result::Result<[i128; 3], String> {
    let v = int_list(s, ',', 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_params(s: &str) -> std::result::Result<MasterParams<BigInt>, String> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let nums = |n: usize| -> std::result::Result<Vec<BigInt>, String> {
        Ok(int_list(rest, ',', n)?.into_iter().map(BigInt::from).collect())
    };
    Ok(match name {
        "markov" => MasterParams::markov(),
        "conway" => MasterParams::conway(),
        "disc" => MasterParams::discriminant(nums(1)?.remove(0)),
        "generic" => MasterParams::genericity(nums(1)?.remove(0)),
        "pvi" => {
            let v = nums(4)?;
            MasterParams::pvi(&[v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
        }
        "custom" => {
            let v = nums(8)?;
            MasterParams::new(
                [v[0].clone(), v[1].clone(), v[2].clone()],
                [v[3].clone(), v[4].clone(), v[5].clone()],
                v[6].clone(),
                v[7].clone(),
            )
        }
        _ => return Err(format!("unknown parameter family {name:?}")),
    })
}

fn parse_var(c: char) -> std::result::Result<Var, String> {
    c.to_digit(10)
        .and_then(|d| Var::from_index(d as usize))
        .ok_or_else(|| format!("{c:?} is not an index in 1..3"))
}

fn parse_sequence(s: &str) -> std::result::Result<Sequence, String> {
    let mut ops = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let tok = tok.trim_start_matches("mu");
        if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let cs: Vec<char> = inner.chars().collect();
            if cs.len() != 2 || cs[0] == cs[1] {
                return Err(format!("bad transposition ({inner})"));
            }
            ops.push(SeqOp::Swap(parse_var(cs[0])?, parse_var(cs[1])?));
        } else {
            let cs: Vec<char> = tok.chars().collect();
            if cs.len() != 1 {
                return Err(format!("bad mutation index {tok:?}"));
            }
            ops.push(SeqOp::Mutate(parse_var(cs[0])?));
        }
    }
    Ok(Sequence(ops))
}

fn parse_complex4(s: &str) -> std::result::Result<[Complex64; 4], String> {
    let v: Vec<Complex64> = s
        .split(',')
        .map(|t| t.trim().parse::<Complex64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| "expected 4 complex numbers".to_string())
}

#[derive(Serialize)]
struct ReduceReport {
    discriminant: i128,
    form: [i128; 3],
    cluster: [i128; 3],
    root: String,
    word: String,
    word_complete: bool,
    mutations: Vec<usize>,
    clusters: Vec<[i128; 3]>,
    hops: Vec<usize>,
    tuple: ReducedTuple,
    canonical: Vec<[i128; 3]>,
}

#[derive(Serialize)]
struct EquivReport {
    form1: [i128; 3],
    form2: [i128; 3],
    discriminant1: i128,
    discriminant2: i128,
    equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_equivalent: Option<bool>,
}

#[derive(Serialize)]
struct MarkovReport {
    depth: usize,
    values: Vec<i128>,
    triples: Vec<[i128; 3]>,
    clusters: usize,
}

#[derive(Serialize)]
struct LaurentStep {
    step: usize,
    op: String,
    entries: [String; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<[String; 3]>,
}

#[derive(Serialize)]
struct LaurentReport {
    ok: bool,
    steps: Vec<LaurentStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// A JSON number when it fits, otherwise a decimal string.
fn count_json(n: &BigInt) -> serde_json::Value {
    match u64::try_from(n) {
        Ok(v) => v.into(),
        Err(_) => n.to_string().into(),
    }
}

#[derive(Serialize)]
struct SnakeReport {
    word: String,
    fraction: String,
    tiles: usize,
    total: serde_json::Value,
    rattle: serde_json::Value,
    method: &'static str,
    rattle_position: snake::NorthSouth,
    rattle_side: snake::EastWest,
    roundtrip: String,
    roundtrip_ok: bool,
}

#[derive(Serialize)]
struct RelationRow {
    relation: &'static str,
    max_error: f64,
    passed: bool,
}

#[derive(Serialize)]
struct PviReport {
    theta: Vec<[f64; 2]>,
    samples: usize,
    tolerance: f64,
    checks: Vec<RelationRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    orbit: Vec<OrbitPoint>,
}

#[derive(Serialize)]
struct OrbitPoint {
    depth: usize,
    x: Vec<[f64; 2]>,
}

enum Failure {
    Domain(Error),
    /// A report was printed but describes a failure.
    Reported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the exit code.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Reported(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, v: &T) -> std::result::Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).expect("reports serialize");
    writeln!(out, "{s}").map_err(|e| Failure::Reported(e.to_string()))
}

fn complex_pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Reduce { form, max_steps } => {
            let q = form.get();
            let (tuple, log) = forms::reduce_with_limit(&q, max_steps)?;
            let report = ReduceReport {
                discriminant: q.discriminant(),
                form: q.coefficients(),
                cluster: q.cluster,
                root: forms::root(&q).to_string(),
                word: log.word.to_string(),
                word_complete: log.word_complete,
                mutations: log.mutations().iter().map(|v| v.index()).collect(),
                clusters: log.clusters(),
                hops: log.hops(),
                canonical: forms::canonical_reduced_cluster(&tuple),
                tuple,
            };
            emit(out, &report)
        }
        Command::Equiv {
            form1,
            form2,
            strict,
        } => {
            let report = EquivReport {
                form1: form1.coefficients(),
                form2: form2.coefficients(),
                discriminant1: form1.discriminant(),
                discriminant2: form2.discriminant(),
                equivalent: forms::equivalent(&form1, &form2)?,
                strict_equivalent: if strict {
                    Some(forms::strict_equivalent(&form1, &form2)?)
                } else {
                    None
                },
            };
            emit(out, &report)
        }
        Command::Markov { depth } => {
            let r = topograph::bfs(&MasterParams::<i128>::markov(), &Cluster([1, 1, 1]), depth);
            let report = MarkovReport {
                depth,
                values: r.values().into_iter().collect(),
                triples: r.vertices().into_iter().collect(),
                clusters: r.nodes.len(),
            };
            emit(out, &report)
        }
        Command::LaurentCheck {
            params,
            sequence,
            at,
        } => laurent_check(params, &sequence, at, out),
        Command::Snake { word, fraction } => {
            let (word, rs) = match (word, fraction) {
                (Some(w), _) => (w.clone(), snake::build_graph(&w)),
                (None, Some(q)) => {
                    let rs = snake::fraction_to_rattlesnake(&q);
                    let w: Word = if rs.word.is_empty() {
                        Word::default()
                    } else {
                        rs.word.parse()?
                    };
                    (w, rs)
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let fraction = if word.body.is_empty() && !word.has_s && rs.word.is_empty() {
                snake::rattlesnake_to_fraction(&rs)?
            } else {
                snake::word_to_fraction(&word)
            };
            let tiles = rs.graph.tile_count();
            let (total, rattle, method, roundtrip) = if tiles <= MAX_BRUTE_FORCE_TILES {
                (
                    snake::count_matchings(&rs.graph)?,
                    snake::count_matchings_with_rattle(&rs)?,
                    "brute_force",
                    snake::rattlesnake_to_fraction(&rs)?,
                )
            } else {
                let (t, r) = snake::counts_fast(&word);
                (t, r, "continued_fraction", fraction.clone())
            };
            let report = SnakeReport {
                word: word.to_string(),
                fraction: fraction.to_string(),
                tiles,
                total: count_json(&total),
                rattle: count_json(&rattle),
                method,
                rattle_position: rs.ns,
                rattle_side: rs.ew,
                roundtrip_ok: roundtrip == fraction,
                roundtrip: roundtrip.to_string(),
            };
            emit(out, &report)
        }
        Command::Pvi {
            theta,
            kappa,
            a,
            check,
            samples,
            seed,
            depth,
        } => {
            let local = match (a, kappa) {
                (Some(a), _) => Some(LocalData::new(a)),
                (None, Some(k)) => Some(pvi::a_from_kappa(&k)),
                _ => None,
            };
            let th = match (theta, &local) {
                (Some(t), _) => Theta(t),
                (None, Some(l)) => l.theta(),
                (None, None) => {
                    return Err(Failure::Reported(
                        "pvi needs --theta, --kappa or --a".into(),
                    ))
                }
            };
            pvi_report(th, local, check, samples, seed, depth, out)
        }
        Command::Dot { form, depth } => {
            let q = form.get();
            let r = topograph::bfs(&q.params(), &Cluster(q.cluster), depth);
            write!(out, "{}", topograph::to_dot(&r)).map_err(|e| Failure::Reported(e.to_string()))
        }
    }
}

fn laurent_check(
    params: MasterParams<BigInt>,
    sequence: &Sequence,
    at: Option<[i128; 3]>,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let at = at.map(|c| Cluster(c.map(|x| BigRational::from_integer(BigInt::from(x)))));
    let mut seed = Seed::identity(params);
    let mut steps = Vec::new();
    for (n, op) in sequence.0.iter().enumerate() {
        let (next, label) = match op {
            SeqOp::Mutate(v) => (master::mutate_seed(&seed, *v), format!("mu{v}")),
            SeqOp::Swap(i, j) => (Ok(seed.permute(Perm::swap(*i, *j))), format!("({i}{j})")),
        };
        match next {
            Ok(s) => seed = s,
            Err(e) => {
                let report = LaurentReport {
                    ok: false,
                    steps,
                    failing_step: Some(n + 1),
                    error: Some(e.name().to_string()),
                };
                emit(out, &report)?;
                return Err(Failure::Reported(format!("step {} ({label}): {e}", n + 1)));
            }
        }
        let values = match &at {
            Some(c) => {
                let v = seed.eval(c)?;
                Some(v.0.map(|x| x.to_string()))
            }
            None => None,
        };
        steps.push(LaurentStep {
            step: n + 1,
            op: label,
            entries: seed.cluster.clone().map(|p| p.to_string()),
            values,
        });
    }
    emit(
        out,
        &LaurentReport {
            ok: true,
            steps,
            failing_step: None,
            error: None,
        },
    )
}

const PVI_TOL: f64 = 1e-9;

fn pvi_report(
    th: Theta,
    local: Option<LocalData>,
    check: PviCheck,
    samples: usize,
    seed: u64,
    depth: usize,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disk = move || loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() < 1.0 {
            return z;
        }
    };
    let mut points = Vec::with_capacity(samples);
    for n in 0..samples {
        let branch = if n % 2 == 0 { Branch::Plus } else { Branch::Minus };
        points.push(pvi::sample_point(&th, disk(), disk(), branch));
    }
    let dist = |x: &MonodromyPoint, y: &MonodromyPoint| -> f64 {
        x.0.iter()
            .zip(&y.0)
            .map(|(a, b)| (a - b).norm() / 1f64.max(a.norm()).max(b.norm()))
            .fold(0.0, f64::max)
    };
    let mut rows = Vec::new();
    let mut row = |relation: &'static str, f: &dyn Fn(&MonodromyPoint) -> f64| {
        let e = points.iter().map(f).fold(0.0, f64::max);
        rows.push(RelationRow {
            relation,
            max_error: e,
            passed: e <= PVI_TOL,
        });
    };
    use Var::{X1, X2, X3};
    row("residual", &|x| pvi::residual(x, &th).norm() / pvi::residual_scale(x, &th));
    row("mu12 mu23 mu31 = id", &|x| {
        dist(
            x,
            &pvi::mu_pair(X1, X2, &pvi::mu_pair(X2, X3, &pvi::mu_pair(X3, X1, x, &th), &th), &th),
        )
    });
    row("mu_i mu_i = id", &|x| {
        Var::ALL
            .iter()
            .map(|&i| dist(x, &pvi::mutate(i, &pvi::mutate(i, x, &th), &th)))
            .fold(0.0, f64::max)
    });
    row("mu_ij preserves the manifold", &|x| {
        pvi::MU_PAIRS
            .iter()
            .map(|&(i, j)| {
                let y = pvi::mu_pair(i, j, x, &th);
                pvi::residual(&y, &th).norm() / pvi::residual_scale(&y, &th)
            })
            .fold(0.0, f64::max)
    });
    if let Some(a) = local {
        row("b3^2 b1^2 b2^2 = id", &|x| {
            let y = pvi::braid_squared(X3, &pvi::braid_squared(X1, &pvi::braid_squared(X2, x, &a), &a), &a);
            dist(x, &y)
        });
        row("mu_j = (ij) b_k", &|x| {
            Var::ALL
                .iter()
                .map(|&k| {
                    let i = k.next();
                    let j = i.next();
                    let (b, ab) = pvi::braid(k, x, &a);
                    let (t, _) = pvi::transpose(i, j, &b, &ab);
                    dist(&t, &pvi::mutate(j, x, &a.theta()))
                })
                .fold(0.0, f64::max)
        });
        row("braids preserve the manifold", &|x| {
            Var::ALL
                .iter()
                .map(|&k| {
                    let (y, b) = pvi::braid(k, x, &a);
                    let t = b.theta();
                    pvi::residual(&y, &t).norm() / pvi::residual_scale(&y, &t)
                })
                .fold(0.0, f64::max)
        });
    }
    let orbit = if check == PviCheck::Orbit {
        let start = points.first().copied().unwrap_or(MonodromyPoint([Complex64::new(0.0, 0.0); 3]));
        pvi::orbit(&start, &th, depth, 10_000, 1e-7)
            .into_iter()
            .map(|(p, d)| OrbitPoint {
                depth: d,
                x: complex_pairs(&p.0),
            })
            .collect()
    } else {
        Vec::new()
    };
    let failed = rows.iter().any(|r| !r.passed);
    let report = PviReport {
        theta: complex_pairs(&th.0),
        samples,
        tolerance: PVI_TOL,
        checks: rows,
        orbit,
    };
    emit(out, &report)?;
    if failed {
        return Err(Failure::Reported("a relation check exceeded the tolerance".into()));
    }
    Ok(())
}
