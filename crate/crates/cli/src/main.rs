use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use sstkit::analysis::{Evidence, VerdictKind};
use sstkit::decompose::{check_equivalence_bounded, decompose_selectors, semantic_cover, Equivalence};
use sstkit::delay::run_delay;
use sstkit::skeleton::DEFAULT_MONOID_CAP;
use sstkit::sst::{inputs_up_to, DEFAULT_NODE_BUDGET};
use sstkit::{
    ambiguity_oracle, analyze_valuedness, enumerate_runs, find_dumbbell, is_simply_divergent,
    outputs, parse_sst, valuedness_oracle, AnalysisBudget, Run, Sst,
};

#[derive(Parser, Debug)]
#[command(name = "sstkit", version, about = "Analyses for copyless streaming string transducers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit a key-sorted JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Maximum input length for oracles, tables and equivalence checks.
    #[arg(long = "max-len", global = true, default_value_t = 6)]
    max_len: usize,

    /// Node budget for run enumeration and search expansions.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,

    /// Cut parameter for delays and covers.
    #[arg(long = "C", global = true, default_value_t = 2)]
    c: usize,

    /// Delay threshold for covers.
    #[arg(long = "D", global = true, default_value_t = 10)]
    d: usize,

    /// Number of selectors.
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,

    /// Maximum length of each W-pattern component run.
    #[arg(long = "component-len", global = true, default_value_t = 4)]
    component_len: usize,

    /// Maximum number of W-pattern candidates examined.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    candidates: u64,

    /// Echoed in reports for replaying randomized runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate an SST file.
    Validate { file: PathBuf },
    /// List the distinct outputs on an input.
    Eval {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// List the accepting runs on an input in run order.
    Runs {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Decide finite ambiguity.
    Ambiguity { file: PathBuf },
    /// Analyze finite valuedness.
    Valuedness { file: PathBuf },
    /// Delay between two accepting runs on an input.
    Delay {
        file: PathBuf,
        #[arg(long)]
        input: String,
        /// Indices of the two runs, as listed by `runs`.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Vec<usize>,
    },
    /// Selector table over all inputs up to the maximum length.
    Decompose { file: PathBuf },
    /// Compare the output sets of two SSTs on all short inputs.
    Equiv { left: PathBuf, right: PathBuf },
    /// Brute-force valuedness and ambiguity readings.
    Oracle { file: PathBuf },
}

/// Exit status of a completed command.
#[derive(Debug, Clone, Copy)]
enum Status {
    Ok,
    Negative,
    Unknown,
}

struct Outcome {
    status: Status,
    text: String,
    result: Value,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<Outcome, Failure>;

struct Loaded {
    digests: Vec<Value>,
}

impl Loaded {
    fn load(&mut self, path: &Path) -> Result<Sst, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        self.digests.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(&bytes)),
        }));
        let text = String::from_utf8(bytes).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        parse_sst(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let mut files = Loaded { digests: Vec::new() };
    let outcome = run(&cli, &mut files);
    let wall = start.elapsed().as_secs_f64();

    let (code, text, result) = match outcome {
        Ok(o) => {
            let code = match o.status {
                Status::Ok => 0,
                Status::Negative => 1,
                Status::Unknown => 2,
            };
            (code, o.text, o.result)
        }
        Err(Failure(msg)) => (2, String::new(), json!({ "error": msg })),
    };

    if cli.json {
        let report = json!({
            "command": args,
            "files": files.digests,
            "budgets": budgets_json(&cli),
            "seed": cli.seed,
            "result": result,
            "exit_code": code,
            "wall_time_s": wall,
        });
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else if let Some(msg) = result.get("error").and_then(Value::as_str) {
        eprintln!("error: {msg}");
    } else {
        let _ = std::io::stdout().write_all(text.as_bytes());
    }
    ExitCode::from(code)
}

fn budgets_json(cli: &Cli) -> Value {
    json!({
        "max_len": cli.max_len,
        "node_budget": cli.budget,
        "monoid_cap": DEFAULT_MONOID_CAP,
        "C": cli.c,
        "D": cli.d,
        "k": cli.k,
        "component_len": cli.component_len,
        "max_candidates": cli.candidates,
    })
}

fn run(cli: &Cli, files: &mut Loaded) -> CmdResult {
    match &cli.command {
        Command::Validate { file } => validate(&files.load(file)?),
        Command::Eval { file, input } => eval(cli, &files.load(file)?, input),
        Command::Runs { file, input } => runs(cli, &files.load(file)?, input),
        Command::Ambiguity { file } => ambiguity(cli, &files.load(file)?),
        Command::Valuedness { file } => valuedness(cli, &files.load(file)?),
        Command::Delay { file, input, pair } => delay(cli, &files.load(file)?, input, pair),
        Command::Decompose { file } => decompose(cli, &files.load(file)?),
        Command::Equiv { left, right } => {
            let a = files.load(left)?;
            let b = files.load(right)?;
            equiv(cli, &a, &b)
        }
        Command::Oracle { file } => oracle(cli, &files.load(file)?),
    }
}

fn describe_run(sst: &Sst, run: &Run) -> Result<Value, Failure> {
    let states: Vec<&str> = sst.states_along(run)?.into_iter().map(|q| sst.state_name(q)).collect();
    Ok(json!({
        "states": states,
        "transitions": run.steps,
        "input": sst.input_of(run)?,
    }))
}

fn run_line(sst: &Sst, run: &Run) -> Result<String, Failure> {
    let states: Vec<&str> = sst.states_along(run)?.into_iter().map(|q| sst.state_name(q)).collect();
    Ok(format!("{} on {:?}", states.join(" -> "), sst.input_of(run)?))
}

fn validate(sst: &Sst) -> CmdResult {
    let alphabet: String = sst.alphabet().iter().collect();
    let result = json!({
        "valid": true,
        "alphabet": alphabet,
        "states": sst.states(),
        "vars": sst.vars(),
        "transitions": sst.transitions().len(),
    });
    let text = format!(
        "valid: {} states, {} variables, {} transitions over {{{}}}\n",
        sst.num_states(),
        sst.num_vars(),
        sst.transitions().len(),
        sst.alphabet().iter().map(char::to_string).collect::<Vec<_>>().join(", "),
    );
    Ok(Outcome { status: Status::Ok, text, result })
}

fn eval(cli: &Cli, sst: &Sst, input: &str) -> CmdResult {
    let outs = outputs(sst, input, cli.budget)?;
    let mut text = format!("{} output(s) on {input:?}\n", outs.len());
    for o in &outs {
        let _ = writeln!(text, "  {o:?}");
    }
    Ok(Outcome {
        status: Status::Ok,
        text,
        result: json!({ "input": input, "outputs": outs }),
    })
}

fn runs(cli: &Cli, sst: &Sst, input: &str) -> CmdResult {
    let runs = enumerate_runs(sst, input, cli.budget)?;
    let mut text = format!("{} accepting run(s) on {input:?}\n", runs.len());
    let mut listed = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let output = sst.output_of(run)?;
        let states: Vec<&str> = sst.states_along(run)?.into_iter().map(|q| sst.state_name(q)).collect();
        let _ = writeln!(text, "  [{i}] {} via {:?}  => {output:?}", states.join(" -> "), run.steps);
        let mut v = describe_run(sst, run)?;
        v["index"] = json!(i);
        v["output"] = json!(output);
        listed.push(v);
    }
    Ok(Outcome {
        status: Status::Ok,
        text,
        result: json!({ "input": input, "runs": listed }),
    })
}

fn ambiguity(cli: &Cli, sst: &Sst) -> CmdResult {
    match find_dumbbell(sst, DEFAULT_MONOID_CAP, cli.budget) {
        Ok(None) => Ok(Outcome {
            status: Status::Ok,
            text: "Finite: finitely ambiguous (no dumbbell)\n".into(),
            result: json!({ "kind": "Finite", "evidence": { "type": "no_dumbbell" } }),
        }),
        Ok(Some(d)) => {
            d.check(sst)?;
            let mut text = format!(
                "Infinite: dumbbell between {} and {}\n",
                sst.state_name(d.q1),
                sst.state_name(d.q2)
            );
            for (name, r) in [("rho0", &d.rho0), ("rho1", &d.rho1), ("rho2", &d.rho2), ("rho3", &d.rho3), ("rho4", &d.rho4)] {
                let _ = writeln!(text, "  {name}: {}", run_line(sst, r)?);
            }
            Ok(Outcome {
                status: Status::Negative,
                text,
                result: json!({ "kind": "Infinite", "evidence": { "type": "dumbbell", "dumbbell": d } }),
            })
        }
        Err(sstkit::Error::BudgetExceeded { what, limit }) => Ok(Outcome {
            status: Status::Unknown,
            text: format!("Unknown: {what} limit {limit} reached\n"),
            result: json!({
                "kind": "Unknown",
                "evidence": { "type": "inconclusive", "reason": format!("{what} limit {limit} reached") },
            }),
        }),
        Err(e) => Err(e.into()),
    }
}

fn valuedness(cli: &Cli, sst: &Sst) -> CmdResult {
    let budget = AnalysisBudget {
        monoid_cap: DEFAULT_MONOID_CAP,
        node_budget: cli.budget,
        component_len: cli.component_len,
        max_candidates: cli.candidates,
        max_expansions: cli.budget,
        oracle_lens: [2, 4, cli.max_len],
    };
    let v = analyze_valuedness(sst, &budget)?;
    let mut text = String::new();
    match &v.evidence {
        Evidence::NoDumbbell { monoid_size } => {
            let _ = writeln!(text, "Finite: finitely ambiguous (skeleton monoid of size {monoid_size})");
        }
        Evidence::Divergent { pattern, divergence, .. } => {
            pattern.check(sst)?;
            if is_simply_divergent(sst, pattern)?.as_ref() != Some(divergence) {
                return Err(Failure("witness failed re-verification".into()));
            }
            let outs = outputs(sst, &divergence.input, cli.budget)?;
            if !outs.contains(&divergence.output_mark4) || !outs.contains(&divergence.output_mark2) {
                return Err(Failure("witness outputs failed re-verification".into()));
            }
            let _ = writeln!(text, "Infinite: simply divergent W-pattern");
            let _ = writeln!(text, "  tuple {:?} on input {:?}", divergence.tuple, divergence.input);
            let _ = writeln!(text, "  outputs {:?} and {:?}", divergence.output_mark4, divergence.output_mark2);
        }
        Evidence::Inconclusive { reason, .. } => {
            let _ = writeln!(text, "Unknown: {reason}");
        }
    }
    for r in &v.oracle_readings {
        let _ = writeln!(text, "  oracle up to length {}: {} output(s) on {:?}", r.max_len, r.max, r.witness);
    }
    let status = match v.kind {
        VerdictKind::Finite => Status::Ok,
        VerdictKind::Infinite => Status::Negative,
        VerdictKind::Unknown => Status::Unknown,
    };
    Ok(Outcome { status, text, result: serde_json::to_value(&v)? })
}

fn delay(cli: &Cli, sst: &Sst, input: &str, pair: &[usize]) -> CmdResult {
    let runs = enumerate_runs(sst, input, cli.budget)?;
    let pick = |i: usize| {
        runs.get(i)
            .ok_or_else(|| Failure(format!("run index {i} out of range ({} runs)", runs.len())))
    };
    let (a, b) = (pick(pair[0])?, pick(pair[1])?);
    let rep = run_delay(sst, a, b, cli.c)?;
    let mut text = format!("C = {}, cuts {:?}, delay {}", rep.c, rep.cuts, rep.delay);
    if let Some((t, j)) = rep.argmax {
        let _ = write!(text, " at step {t}, cut {j}");
    }
    text.push('\n');
    let header: Vec<String> = rep.cuts.iter().map(|j| format!("{j:>6}")).collect();
    let _ = writeln!(text, "{:>4}  {}  |{}", "t", header.join(""), header.join(""));
    for (t, (l, r)) in rep.weights_left.iter().zip(&rep.weights_right).enumerate() {
        let row = |w: &Vec<usize>| w.iter().map(|x| format!("{x:>6}")).collect::<String>();
        let _ = writeln!(text, "{t:>4}  {}  |{}", row(l), row(r));
    }
    Ok(Outcome {
        status: Status::Ok,
        text,
        result: json!({ "input": input, "pair": pair, "report": rep }),
    })
}

fn decompose(cli: &Cli, sst: &Sst) -> CmdResult {
    let selectors = decompose_selectors(sst, cli.k, cli.budget);
    let mut rows = Vec::new();
    let mut text = String::new();
    let heads: Vec<String> = (1..=cli.k).map(|i| format!("f{i}")).collect();
    let _ = writeln!(text, "input\t{}\tcover\tcomplete", heads.join("\t"));
    let mut all_complete = true;
    for input in inputs_up_to(sst.alphabet(), cli.max_len) {
        let all = outputs(sst, &input, cli.budget)?;
        let picked: Vec<Option<String>> =
            selectors.iter().map(|s| s.eval(&input)).collect::<Result<_, _>>()?;
        let union: BTreeSet<&String> = picked.iter().flatten().collect();
        let complete = union.len() == all.len();
        all_complete &= complete;
        let cover = semantic_cover(sst, &input, cli.c, cli.d, cli.budget)?;
        let cells: Vec<String> = picked
            .iter()
            .map(|o| o.as_ref().map_or("-".into(), |s| format!("{s:?}")))
            .collect();
        let _ = writeln!(text, "{input:?}\t{}\t{}\t{complete}", cells.join("\t"), cover.len());
        rows.push(json!({
            "input": input,
            "selected": picked,
            "outputs": all.len(),
            "cover_runs": cover.len(),
            "complete": complete,
        }));
    }
    let _ = writeln!(
        text,
        "{} selector(s) {} the relation on inputs up to length {}",
        cli.k,
        if all_complete { "cover" } else { "do not cover" },
        cli.max_len
    );
    Ok(Outcome {
        status: Status::Ok,
        text,
        result: json!({ "complete": all_complete, "rows": rows }),
    })
}

fn equiv(cli: &Cli, a: &Sst, b: &Sst) -> CmdResult {
    let res = check_equivalence_bounded(a, b, cli.max_len, cli.budget)?;
    let (status, text) = match &res {
        Equivalence::Equal { inputs_checked } => (
            Status::Ok,
            format!("equal on all {inputs_checked} inputs up to length {}\n", cli.max_len),
        ),
        Equivalence::Counterexample { input, left, right } => {
            if &outputs(a, input, cli.budget)? != left || &outputs(b, input, cli.budget)? != right || left == right {
                return Err(Failure("counterexample failed re-verification".into()));
            }
            (
                Status::Negative,
                format!("counterexample {input:?}\n  left:  {left:?}\n  right: {right:?}\n"),
            )
        }
    };
    Ok(Outcome { status, text, result: serde_json::to_value(&res)? })
}

fn oracle(cli: &Cli, sst: &Sst) -> CmdResult {
    let v = valuedness_oracle(sst, cli.max_len, cli.budget)?;
    let a = ambiguity_oracle(sst, cli.max_len, cli.budget)?;
    let text = format!(
        "up to length {}: max {} output(s) on {:?}, max {} run(s) on {:?}\n",
        cli.max_len, v.max, v.witness, a.max, a.witness
    );
    Ok(Outcome {
        status: Status::Ok,
        text,
        result: json!({ "valuedness": v, "ambiguity": a }),
    })
}
