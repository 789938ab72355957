use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use steinharm_core::apartment;
use steinharm_core::building::{self, ChamberBall, DEFAULT_MAX_CHAMBERS};
use steinharm_core::field::{is_prime, Field, PrimeField, Rationals};
use steinharm_core::flagmodel::{self, FlagSpace};
use steinharm_core::harmonic;
use steinharm_core::rootdata::{CartanType, Family, RootDatum};
use steinharm_core::weyl::{self, AffineWeylElement, FiniteWeylElement};
use steinharm_core::Error;

use crate::report::{Check, CommandReport};
use crate::verify::{self, Options};

pub const MAX_CHAMBERS_ENV: &str = "STEINHARM_MAX_CHAMBERS";

#[derive(Parser, Debug)]
#[command(name = "steinharm", version, about = "Exact checks on root data, affine Weyl groups and buildings of PGL_n")]
struct Cli {
    /// Append a plain-text table of the checks after the JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cartan matrix, roots, marks, J and i_0.
    Rootdata {
        #[arg(long = "type", value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        rank: usize,
    },
    /// Lengths and reduced words in the affine Weyl group.
    Weyl {
        #[arg(long = "type", value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum)]
        op: WeylOp,
        /// Word in the affine generators 0..=rank, comma separated.
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
        /// For `longest`: omit this simple reflection (w_i instead of w_0).
        #[arg(long)]
        omit: Option<usize>,
    },
    /// sign(σ_i) against the parity of l(w_i w_0) for every i in J.
    LemmaTec {
        #[arg(long = "type", value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        rank: usize,
    },
    /// Chamber ball around the base chamber of the building of PGL_n.
    Ball {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Harmonic cochains on a ball and their pairings with the generators.
    Harmonic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        radius: usize,
        /// `Q` or `Fl:<prime>`.
        #[arg(long, value_parser = parse_coeff, default_value = "Q")]
        coeff: Coeff,
        #[arg(long)]
        verify_relations: bool,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Locally constant functions on the flag variety at level k.
    Flags {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, value_enum)]
        op: FlagOp,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random inputs for `bwp`.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// The full acceptance suite.
    VerifyAll {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeylOp {
    Length,
    Word,
    Longest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlagOp {
    Dim,
    Partition,
    Bwp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coeff {
    Q,
    F(u64),
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::Q => write!(f, "Q"),
            Coeff::F(l) => write!(f, "Fl:{l}"),
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

pub fn parse_coeff(s: &str) -> Result<Coeff, String> {
    if s == "Q" {
        return Ok(Coeff::Q);
    }
    let digits = s.strip_prefix("Fl:").or_else(|| s.strip_prefix("F")).ok_or_else(|| format!("expected Q or Fl:<prime>, got `{s}`"))?;
    let l: u64 = digits.parse().map_err(|_| format!("expected Q or Fl:<prime>, got `{s}`"))?;
    if !is_prime(l) {
        return Err(format!("{l} is not prime"));
    }
    Ok(Coeff::F(l))
}

/// Everything a command produced: the process writes `stdout`, `stderr`
/// and exits with `code`.
#[derive(Clone, Debug, Default)]
pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Exit code for an error from the core library: 3 for resource bounds, 2 for
/// bad parameters, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BallTooLarge { .. } | Error::Margin { .. } | Error::LevelTooLow { .. } => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn max_chambers() -> Result<usize, Error> {
    match std::env::var(MAX_CHAMBERS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::InvalidParameters(format!("{MAX_CHAMBERS_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_CHAMBERS),
    }
}

pub fn run<I, S>(argv: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Run { stdout: text, ..Run::default() } } else { Run { stderr: text, code, ..Run::default() } };
        }
    };
    let start = Instant::now();
    match dispatch(&cli.command) {
        Ok(mut report) => {
            if cli.timing {
                report.wall_time_ms = Some(start.elapsed().as_millis());
            }
            let mut stdout = report.to_json();
            stdout.push('\n');
            if cli.human {
                stdout.push_str(&report.table());
            }
            Run { stdout, stderr: String::new(), code: if report.all_pass() { 0 } else { 1 } }
        }
        Err(CommandError::Core(e)) => Run { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
        Err(CommandError::Io(e)) => Run { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}

enum CommandError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

impl From<std::io::Error> for CommandError {
    fn from(e: std::io::Error) -> Self {
        CommandError::Io(e)
    }
}

type CmdResult = Result<CommandReport, CommandError>;

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Rootdata { family, rank } => rootdata(*family, *rank),
        Command::Weyl { family, rank, op, word, omit } => weyl_cmd(*family, *rank, *op, word, *omit),
        Command::LemmaTec { family, rank } => lemma_tec(*family, *rank),
        Command::Ball { n, p, radius, dump } => ball(*n, *p, *radius, dump.as_ref()),
        Command::Harmonic { n, p, radius, coeff, verify_relations, dump } => match coeff {
            Coeff::Q => harmonic_cmd(&Rationals, *coeff, *n, *p, *radius, *verify_relations, dump.as_ref()),
            Coeff::F(l) => {
                let field = PrimeField::new(*l).ok_or_else(|| Error::InvalidParameters(format!("{l} is not prime")))?;
                harmonic_cmd(&field, *coeff, *n, *p, *radius, *verify_relations, dump.as_ref())
            }
        },
        Command::Flags { n, p, level, op, seed, count } => flags(*n, *p, *level, *op, *seed, *count),
        Command::VerifyAll { quick, seed } => verify_all(*quick, *seed),
    }
}

fn type_params(family: Family, rank: usize) -> Map<String, Value> {
    params(&[("type", json!(family.letter().to_string())), ("rank", json!(rank))])
}

fn rootdata(family: Family, rank: usize) -> CmdResult {
    let t = CartanType::new(family, rank)?;
    let rd = RootDatum::new(t);
    let mut report = CommandReport::new("rootdata", type_params(family, rank));
    let i0 = rd.cominuscule_index()?;
    report.result = json!({
        "type": t.to_string(),
        "cartan_matrix": rd.cartan_matrix(),
        "positive_roots": rd.positive_roots(),
        "highest_root": rd.highest_root(),
        "marks": rd.marks(),
        "highest_coroot": rd.highest_coroot(),
        "special_set": rd.special_set(),
        "cominuscule_index": i0,
    });
    report.push(Check::new("positive root count", verify::positive_root_count(t), rd.positive_roots().len()));
    report.push(Check::new("marks are the highest root", rd.highest_root(), rd.marks()));
    if let Some(i0) = i0 {
        report.push(Check::holds("i_0 outside J", !rd.special_set().contains(&i0)));
    }
    Ok(report)
}

fn check_labels(word: &[usize], max: usize) -> Result<(), Error> {
    match word.iter().find(|&&s| s > max) {
        Some(&label) => Err(Error::LabelOutOfRange { label, max }),
        None => Ok(()),
    }
}

fn weyl_cmd(family: Family, rank: usize, op: WeylOp, word: &[usize], omit: Option<usize>) -> CmdResult {
    let t = CartanType::new(family, rank)?;
    let rd = RootDatum::new(t);
    let mut p = type_params(family, rank);
    let op_name = match op {
        WeylOp::Length => "length",
        WeylOp::Word => "word",
        WeylOp::Longest => "longest",
    };
    p.insert("op".into(), json!(op_name));
    match op {
        WeylOp::Length | WeylOp::Word => {
            check_labels(word, rank)?;
            p.insert("word".into(), json!(word));
            let mut report = CommandReport::new("weyl", p);
            let w = AffineWeylElement::from_word(&rd, word);
            let length = weyl::length(&rd, &w)?;
            let reduced = weyl::reduced_word(&rd, &w)?;
            report.result = json!({
                "length": length,
                "reduced_word": reduced,
                "is_reduced": length == word.len(),
            });
            report.push(Check::new("reduced word has the length", length, reduced.len()));
            report.push(Check::holds("reduced word multiplies back", AffineWeylElement::from_word(&rd, &reduced) == w));
            report.push(Check::new("parity", word.len() % 2, length % 2));
            Ok(report)
        }
        WeylOp::Longest => {
            if let Some(i) = omit {
                if i == 0 || i > rank {
                    return Err(Error::LabelOutOfRange { label: i, max: rank }.into());
                }
                p.insert("omit".into(), json!(i));
            }
            let mut report = CommandReport::new("weyl", p);
            let w = weyl::longest_element(&rd, omit);
            let reduced = weyl::reduced_word(&rd, &AffineWeylElement::from_linear(w.clone()))?;
            report.result = json!({
                "length": w.length(&rd),
                "reduced_word": reduced,
                "determinant": w.determinant(),
            });
            report.push(Check::new("determinant is (-1)^length", weyl::sign_of_length(w.length(&rd)), w.determinant()));
            report.push(Check::holds("involution", w.compose(&w).is_identity()));
            if omit.is_none() {
                report.push(Check::new("length is the number of positive roots", rd.positive_roots().len(), w.length(&rd)));
            }
            Ok(report)
        }
    }
}

fn lemma_tec(family: Family, rank: usize) -> CmdResult {
    let rd = RootDatum::new(CartanType::new(family, rank)?);
    let mut report = CommandReport::new("lemma-tec", type_params(family, rank));
    let rows = apartment::verify_lemma_tec(&rd)?;
    report.result = json!({
        "special_set": rd.special_set(),
        "rows": rows.iter().map(|r| json!({
            "i": r.label,
            "sigma": r.sigma.0,
            "sign_sigma": r.sign_sigma,
            "length_wi_w0": r.length,
            "parity": r.length_sign,
        })).collect::<Vec<_>>(),
    });
    for r in &rows {
        report.push(Check::new(format!("i={}", r.label), r.length_sign, r.sign_sigma));
    }
    Ok(report)
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn build(n: usize, p: u64, radius: usize) -> Result<ChamberBall, Error> {
    building::build_ball_with_limit(n, p, radius, max_chambers()?)
}

fn ball(n: usize, p: u64, radius: usize, dump: Option<&PathBuf>) -> CmdResult {
    let b = build(n, p, radius)?;
    let rd = b.root_datum().clone();
    let mut report = CommandReport::new("ball", params(&[("n", json!(n)), ("p", json!(p)), ("radius", json!(radius))]));
    let mut by_distance = vec![0usize; radius + 1];
    for &d in b.distances() {
        by_distance[d] += 1;
    }
    let interior = b.interior_panels().count();
    report.result = json!({
        "chambers": b.len(),
        "chambers_by_distance": by_distance,
        "panels": b.panels().len(),
        "interior_panels": interior,
    });
    let inner: Vec<_> = b.panels().iter().filter(|panel| panel.members.iter().any(|&c| b.distance(c) < radius)).collect();
    report.push(Check::new("inner panels with p+1 chambers", inner.len(), inner.iter().filter(|q| q.members.len() as u64 == p + 1).count()));
    let mut lengths_match = 0;
    for id in 0..b.len() {
        if weyl::length(&rd, b.weyl_distance(id))? == b.distance(id) {
            lengths_match += 1;
        }
    }
    report.push(Check::new("Weyl distance length equals gallery distance", b.len(), lengths_match));
    if let Some(path) = dump {
        let mut chambers = vec![];
        for id in 0..b.len() {
            chambers.push(json!({
                "id": id,
                "matrix": b.chamber(id).rows().iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "distance": b.distance(id),
                "weyl_word": weyl::reduced_word(&rd, b.weyl_distance(id))?,
                "panels": (0..n).map(|label| b.panel_of(id, label)).collect::<Vec<_>>(),
            }));
        }
        let panels: Vec<Value> = b
            .panels()
            .iter()
            .map(|q| json!({"label": q.label, "members": q.members, "interior": q.interior}))
            .collect();
        let doc = json!({"n": n, "p": p, "radius": radius, "chambers": chambers, "panels": panels});
        std::fs::write(path, serde_json::to_string_pretty(&doc).expect("serializable") + "\n")?;
    }
    Ok(report)
}

fn rat_json(x: &BigRational) -> Value {
    if x.is_integer() {
        int_json(x.numer())
    } else {
        json!(x.to_string())
    }
}

/// Field elements as JSON: integers where possible, `a/b` strings otherwise.
trait ElemJson {
    fn to_json(&self) -> Value;
}

impl ElemJson for BigRational {
    fn to_json(&self) -> Value {
        rat_json(self)
    }
}

impl ElemJson for u64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

fn harmonic_cmd<F: Field>(
    field: &F,
    coeff: Coeff,
    n: usize,
    p: u64,
    radius: usize,
    verify_relations: bool,
    dump: Option<&PathBuf>,
) -> CmdResult
where
    F::Elem: ElemJson,
{
    let b = build(n, p, radius)?;
    let mut report = CommandReport::new(
        "harmonic",
        params(&[
            ("n", json!(n)),
            ("p", json!(p)),
            ("radius", json!(radius)),
            ("coeff", json!(coeff.to_string())),
            ("verify_relations", json!(verify_relations)),
        ]),
    );
    let basis = harmonic::solve_harmonic(field, &b);
    let parahoric = harmonic::all_parahoric_generators(&b);
    let hc2 = basis.iter().filter(|h| harmonic::check_hc2(field, &b, h).is_empty()).count();
    report.push(Check::new("basis satisfies HC2", basis.len(), hc2));
    let zeros = |gens: &[harmonic::IwahoriFunction]| {
        basis.iter().map(|h| gens.iter().filter(|f| field.is_zero(&harmonic::pair(field, &b, h, f))).count()).sum::<usize>()
    };
    report.push(Check::new("parahoric pairings vanish", basis.len() * parahoric.len(), zeros(&parahoric)));
    let mut relation_count = Value::Null;
    if verify_relations {
        let relations = harmonic::all_relation_generators(&b)?;
        relation_count = json!(relations.len());
        report.push(Check::new("relation pairings vanish", basis.len() * relations.len(), zeros(&relations)));
    }
    report.result = json!({
        "chambers": b.len(),
        "interior_panels": b.interior_panels().count(),
        "dimension": basis.len(),
        "parahoric_generators": parahoric.len(),
        "relation_generators": relation_count,
    });
    if let Some(path) = dump {
        let doc = json!({
            "coeff": coeff.to_string(),
            "chambers": b.len(),
            "basis": basis.iter().map(|h| h.values().iter().map(ElemJson::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc).expect("serializable") + "\n")?;
    }
    Ok(report)
}

fn flags(n: usize, p: u64, level: u32, op: FlagOp, seed: u64, count: usize) -> CmdResult {
    let op_name = match op {
        FlagOp::Dim => "dim",
        FlagOp::Partition => "partition",
        FlagOp::Bwp => "bwp",
    };
    let mut pp = params(&[("n", json!(n)), ("p", json!(p)), ("level", json!(level)), ("op", json!(op_name))]);
    match op {
        FlagOp::Dim => {
            if level != 1 {
                return Err(Error::InvalidParameters("the Steinberg quotient is computed at level 1".into()).into());
            }
            let mut report = CommandReport::new("flags", pp);
            let flags = flagmodel::flag_count(n, p, 1);
            let dim = flagmodel::steinberg_dimension_level1(n, p)?;
            report.result = json!({"flags": flags, "steinberg_dimension": dim});
            report.push(Check::new("p^(n(n-1)/2)", p.pow((n * (n - 1) / 2) as u32), dim as u64));
            Ok(report)
        }
        FlagOp::Partition => {
            let mut report = CommandReport::new("flags", pp);
            let space = FlagSpace::new(n, p, level)?;
            let mut rows = vec![];
            for i in 1..n {
                let ok = flagmodel::verify_partition_bip(n, p, level, i)?;
                rows.push(json!({"i": i, "holds": ok}));
                report.push(Check::holds(format!("i={i}"), ok));
            }
            report.result = json!({"flags": space.len(), "partitions": rows});
            Ok(report)
        }
        FlagOp::Bwp => {
            pp.insert("seed".into(), json!(seed));
            pp.insert("count".into(), json!(count));
            let mut report = CommandReport::new("flags", pp);
            let rd = RootDatum::build(Family::A, n - 1)?;
            let space = FlagSpace::new(n, p, level)?;
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let mut witnesses = vec![];
            for k in 0..count {
                use rand::Rng;
                let g = verify::random_integral(&mut rng, n, p);
                let len = rng.random_range(0..=3);
                let word: Vec<usize> = (0..len).map(|_| rng.random_range(1..n)).collect();
                let w = word.iter().fold(FiniteWeylElement::identity(n - 1), |acc, &s| acc.compose(&FiniteWeylElement::simple(&rd, s)));
                let ok = flagmodel::verify_lemma_bwp(&space, &rd, &g, &w)?;
                witnesses.push(json!({
                    "g": g.entries().iter().map(rat_json).collect::<Vec<_>>(),
                    "w": word,
                    "holds": ok,
                }));
                report.push(Check::holds(format!("input {k}"), ok));
            }
            report.result = json!({"flags": space.len(), "inputs": witnesses});
            Ok(report)
        }
    }
}

fn verify_all(quick: bool, seed: u64) -> CmdResult {
    let opts = Options { quick, seed, max_chambers: max_chambers()? };
    let mut report = CommandReport::new("verify-all", params(&[("quick", json!(quick)), ("seed", json!(seed))]));
    let outcomes = verify::verify_all(&opts)?;
    report.result = json!(outcomes
        .iter()
        .map(|o| json!({"criterion": o.id, "title": o.title, "checks": o.checks.len(), "pass": o.pass()}))
        .collect::<Vec<_>>());
    for o in outcomes {
        let empty = o.checks.is_empty();
        report.extend(o.checks.into_iter().map(|mut c| {
            c.name = format!("{}: {}", o.id, c.name);
            c
        }));
        if empty {
            report.push(Check::holds(format!("{}: has checks", o.id), false));
        }
    }
    Ok(report)
}
