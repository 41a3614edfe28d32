use std::fs;
use std::path::{Path, PathBuf};

use mapseek_core::combinatorics::{enumerate_nc, enumerate_pp, Nc3};
use mapseek_core::formula::{parse, read_formula_file, Expr, FormulaError, Notation};
use mapseek_core::functional::{
    self_train, ConstantScorer, FunctionalError, LinearScorer, OracleScorer, Scorer, SelfTrainConfig,
};
use mapseek_core::narayana::{incremental, qt_narayana, verify_pairing, NarayanaError};
use mapseek_core::slurp::{SlurpError, SlurpInstance};
use mapseek_core::statistics::{exchange_skip_leap, leap, skip, StatError, StatisticFn};
use mapseek_core::symbolic::{
    cem_run, evaluate_population, ga_run, preset, presets, CemConfig, GaConfig, GenConfig, SearchError,
};

use crate::{Command, Failure, Method, Objects};

impl From<SlurpError> for Failure {
    fn from(e: SlurpError) -> Self {
        match e {
            SlurpError::Io(_) | SlurpError::Malformed(_) | SlurpError::Csv(_) | SlurpError::Consistency(_) => {
                Failure::io(e)
            }
            _ => Failure::usage(e),
        }
    }
}

impl From<StatError> for Failure {
    fn from(e: StatError) -> Self {
        Failure::usage(e)
    }
}

impl From<NarayanaError> for Failure {
    fn from(e: NarayanaError) -> Self {
        Failure::usage(e)
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        Failure::usage(e)
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Slurp(inner) => inner.into(),
            other => Failure::usage(other),
        }
    }
}

impl From<FunctionalError> for Failure {
    fn from(e: FunctionalError) -> Self {
        match e {
            FunctionalError::Io(_) | FunctionalError::Csv(_) => Failure::io(e),
            FunctionalError::Slurp(inner) => inner.into(),
            other => Failure::usage(other),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn read_instance(path: &Path) -> Result<SlurpInstance, Failure> {
    SlurpInstance::read(path).map_err(|e| {
        let f = Failure::from(e);
        Failure { message: format!("{}: {}", path.display(), f.message), ..f }
    })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

pub fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Enumerate { n, k, objects, out } => enumerate(n, k, objects, out.as_deref()),
        Command::Stat { stat, n, k, out } => stat_csv(&stat, n, k, out.as_deref()),
        Command::Narayana { n, k, incremental: inc } => {
            let poly = if inc { incremental(n, k)? } else { (*qt_narayana(n, k)).clone() };
            println!("{poly}");
            Ok(())
        }
        Command::VerifyPairing { s1, s2, n, k } => {
            let report = verify_pairing(&StatisticFn::builtin(&s1)?, &StatisticFn::builtin(&s2)?, n, k)?;
            print!("{}", json_text(&report));
            if report.matches {
                eprintln!("({s1}, {s2}) matches N_{{{n},{k}}}(q,t)");
                Ok(())
            } else {
                Err(Failure::mismatch(format!("({s1}, {s2}) does not match N_{{{n},{k}}}(q,t)")))
            }
        }
        Command::GenDataset { n, k, refined, out, csv } => {
            let inst = SlurpInstance::build(n, k, refined)?;
            emit(out.as_deref(), &inst.to_json_string())?;
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                inst.write_csv(file)?;
            }
            eprintln!("{} objects, {} bags", inst.len(), inst.bags().len());
            Ok(())
        }
        Command::EvalFormula { formula, file, instance, notation } => {
            eval_formula(formula.as_deref(), file.as_deref(), &instance, &notation)
        }
        Command::Search { method, instance, preset, seed, budget, population, notation, out, trace } => {
            search(method, &instance, &preset, seed, budget, population, notation.as_deref(), out, trace)
        }
        Command::Selftrain { instance, scorer, val_frac, h, seed, max_iters, out, labels_csv } => {
            let inst = read_instance(&instance)?;
            let cfg = SelfTrainConfig { max_iters, val_frac, h, seed };
            let mut scorer = make_scorer(&scorer, &inst)?;
            let result = self_train(&inst, scorer.as_mut(), &cfg)?;
            emit(out.as_deref(), &json_text(&result.to_json(&inst, &cfg)))?;
            if let Some(path) = labels_csv {
                let file = fs::File::create(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                result.write_csv(&inst, file)?;
            }
            let cost = result.costs.last().copied().unwrap_or(0.0);
            let verdict = if result.success { "converged" } else { "did not converge" };
            eprintln!("{verdict} after {} iterations, final cost {cost}", result.iterations);
            Ok(())
        }
        Command::Bijection { n, check } => bijection(n, check),
    }
}

fn enumerate(n: u32, k: u32, objects: Objects, out: Option<&Path>) -> Result<(), Failure> {
    let lines: Vec<String> = match objects {
        Objects::Nc => enumerate_nc(n, k).map_err(Failure::usage)?.iter().map(|p| p.to_string()).collect(),
        Objects::Pp => enumerate_pp(n, k).map_err(Failure::usage)?.iter().map(|p| p.serialize()).collect(),
    };
    let mut text = lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    emit(out, &text)?;
    eprintln!("{} objects", lines.len());
    Ok(())
}

fn stat_csv(name: &str, n: u32, k: u32, out: Option<&Path>) -> Result<(), Failure> {
    let stat = StatisticFn::builtin(name)?;
    let mut text = String::from("partition,value\n");
    for p in enumerate_nc(n, k).map_err(Failure::usage)? {
        text.push_str(&format!("{},{}\n", csv_field(&p.to_string()), stat.eval(&p)?));
    }
    emit(out, &text)
}

fn eval_formula(formula: Option<&str>, file: Option<&Path>, instance: &Path, notation: &str) -> Result<(), Failure> {
    let inst = read_instance(instance)?;
    let formulas: Vec<Expr> = match (formula, file) {
        (Some(text), _) => vec![parse(text, notation.parse::<Notation>()?)?],
        (None, Some(path)) => read_formula_file(&read_text(path)?).map_err(Failure::io)?.1,
        (None, None) => return Err(Failure::usage("give --formula or --file")),
    };
    let scored = evaluate_population(&formulas, &inst)?;
    let rows: Vec<serde_json::Value> =
        scored.iter().map(|c| serde_json::json!({ "formula": c.text, "distance": c.distance.finite() })).collect();
    print!("{}", json_text(&rows));
    for c in &scored {
        eprintln!("{}: delta={}", c.text, c.distance);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn search(
    method: Method,
    instance: &Path,
    names: &[String],
    seed: u64,
    budget: Option<usize>,
    population: Option<usize>,
    notation: Option<&str>,
    out: Option<PathBuf>,
    trace: Option<PathBuf>,
) -> Result<(), Failure> {
    let inst = read_instance(instance)?;
    let gens: Vec<GenConfig> = if names.is_empty() {
        presets().to_vec()
    } else {
        names.iter().map(|n| preset(n).cloned()).collect::<Result<_, _>>()?
    };
    let report = match method {
        Method::Cem => {
            let mut cfg = CemConfig { seed, ..CemConfig::default() };
            if let Some(b) = budget {
                cfg.iterations = b;
            }
            if let Some(p) = population {
                cfg.population = p;
            }
            if let Some(nt) = notation {
                cfg.notation = nt.parse()?;
            }
            cem_run(&inst, &cfg, &gens)?
        }
        Method::Ga => {
            let mut cfg = GaConfig { seed, ..GaConfig::default() };
            if let Some(b) = budget {
                cfg.generations = b;
            }
            if let Some(p) = population {
                cfg.population = p;
            }
            ga_run(&inst, &cfg, &gens)?
        }
    };
    emit(out.as_deref(), &json_text(&report))?;
    if let Some(path) = trace {
        emit(Some(&path), &report.trace_csv()?)?;
    }
    let best = report.best_distance.map_or("invalid".to_string(), |d| d.to_string());
    eprintln!("best distance {best} after {} iterations: {}", report.iterations.len(), report.best_formula);
    Ok(())
}

fn make_scorer(choice: &str, inst: &SlurpInstance) -> Result<Box<dyn Scorer>, Failure> {
    if choice == "baseline" {
        return Ok(Box::new(LinearScorer::new(inst)?));
    }
    if let Some(name) = choice.strip_prefix("oracle:") {
        return Ok(Box::new(OracleScorer::from_statistic(inst, &StatisticFn::builtin(name)?)?));
    }
    if let Some(v) = choice.strip_prefix("constant:") {
        let v: f64 = v.parse().map_err(|_| Failure::usage(format!("bad constant {v:?}")))?;
        return Ok(Box::new(ConstantScorer(v)));
    }
    Err(Failure::usage(format!("unknown scorer {choice:?}; use baseline, oracle:STAT or constant:VALUE")))
}

fn bijection(n: u32, check: bool) -> Result<(), Failure> {
    if n < 3 {
        return Err(Failure::usage("the bijection acts on NC(n, 3) with n >= 3"));
    }
    let mut text = String::from("partition\tskip\tleap\timage\timage_skip\timage_leap\torbit\n");
    let (mut fixed, mut swaps, mut bad) = (0, 0, Vec::new());
    for p in enumerate_nc(n, 3).map_err(Failure::usage)? {
        let e = Nc3::from_partition(&p).map_err(Failure::usage)?;
        let img = exchange_skip_leap(&e);
        let q = img.to_partition();
        let orbit = if q == p { "fixed" } else { "swap" };
        if q == p {
            fixed += 1;
        } else {
            swaps += 1;
        }
        let (s, l, s2, l2) = (skip(&p), leap(&e), skip(&q), leap(&img));
        if exchange_skip_leap(&img) != e || s2 != l || l2 != s {
            bad.push(p.to_string());
        }
        text.push_str(&format!("{p}\t{s}\t{l}\t{q}\t{s2}\t{l2}\t{orbit}\n"));
    }
    print!("{text}");
    eprintln!("{fixed} fixed points, {} two-cycles", swaps / 2);
    if check && !bad.is_empty() {
        return Err(Failure::mismatch(format!("exchange fails on {}", bad.join(" "))));
    }
    if check {
        eprintln!("involution and skip/leap exchange hold on all of NC({n}, 3)");
    }
    Ok(())
}
