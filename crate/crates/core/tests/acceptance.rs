//! Acceptance criteria, one line of output per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sstkit::analysis::{Evidence, VerdictKind};
use sstkit::decompose::{check_equivalence_bounded, decompose_selectors, semantic_cover, Equivalence};
use sstkit::delay::run_delay;
use sstkit::skeleton::{instantiate_pumped, LoopSet, DEFAULT_MONOID_CAP};
use sstkit::sst::{inputs_up_to, AnnotatedRun, Produced, Sym, DEFAULT_NODE_BUDGET};
use sstkit::wordcomb::nonsolutions_single;
use sstkit::{
    analyze_valuedness, cuts, delay, find_dumbbell, fixtures, idempotent_power_words,
    is_simply_divergent, outputs, pump, pumped_output_expr, valuedness_oracle, AnalysisBudget,
    Inequality, ParamWord, Sst,
};

use common::*;

const B: u64 = DEFAULT_NODE_BUDGET;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn annotated(input: &str, word: &str, steps: &[usize]) -> AnnotatedRun {
    AnnotatedRun {
        input: input.into(),
        len: input.chars().count(),
        output: word
            .chars()
            .zip(steps)
            .map(|(letter, &step)| Produced { letter, step })
            .collect(),
    }
}

fn worked_delay_example() -> Check {
    let c = cuts("abcccbb", 2);
    ensure!(c == vec![2, 5, 7], "cuts {c:?}");
    let r = annotated("xy", "abcccbb", &[1, 1, 1, 2, 2, 1, 1]);
    let s = annotated("xy", "abcccbb", &[2, 2, 2, 1, 2, 1, 1]);
    let rep = delay(&r, &s, 2).map_err(|e| e.to_string())?;
    ensure!(rep.delay == 2, "delay {}", rep.delay);
    Ok(format!("cuts {c:?}, delay {}", rep.delay))
}

fn two_sided_count_is_two_valued() -> Check {
    let r = valuedness_oracle(&fixtures::tsc(), 6, B).map_err(|e| e.to_string())?;
    ensure!(r.max == 2, "oracle max {}", r.max);
    Ok(format!("max {} over {} inputs", r.max, r.inputs_checked))
}

fn seeded_count_diverges() -> Check {
    let sst = fixtures::tsc1();
    for n in 0..=5 {
        let input = "0".repeat(n);
        let got = outputs(&sst, &input, B).map_err(|e| e.to_string())?;
        let expected: BTreeSet<String> =
            (0..=n).map(|i| format!("{}1{}", "0".repeat(i), "0".repeat(n - i))).collect();
        ensure!(got == expected, "outputs on 0^{n}: {got:?}");
    }
    let v = analyze_valuedness(&sst, &AnalysisBudget::default()).map_err(|e| e.to_string())?;
    ensure!(v.kind == VerdictKind::Infinite, "verdict {:?}", v.kind);
    let Evidence::Divergent { pattern, divergence, .. } = &v.evidence else {
        return Err("no divergent pattern in evidence".into());
    };
    pattern.check(&sst).map_err(|e| e.to_string())?;
    let again = is_simply_divergent(&sst, pattern).map_err(|e| e.to_string())?;
    ensure!(again.as_ref() == Some(divergence), "divergence does not re-verify");
    let all = outputs(&sst, &divergence.input, B).map_err(|e| e.to_string())?;
    ensure!(
        divergence.output_mark4 != divergence.output_mark2
            && all.contains(&divergence.output_mark4)
            && all.contains(&divergence.output_mark2),
        "witness outputs not confirmed"
    );
    Ok(format!(
        "Infinite; tuple {:?} on {:?}: {:?} vs {:?}",
        divergence.tuple, divergence.input, divergence.output_mark4, divergence.output_mark2
    ))
}

fn block_selector_bound() -> Check {
    let sst = fixtures::r2();
    let got = outputs(&sst, "001011", B).map_err(|e| e.to_string())?;
    let expected: BTreeSet<String> = ["00", "10", "11"].iter().map(|s| s.to_string()).collect();
    ensure!(got == expected, "outputs {got:?}");
    let r = valuedness_oracle(&sst, 6, B).map_err(|e| e.to_string())?;
    ensure!(r.max <= 4, "oracle max {}", r.max);
    Ok(format!("outputs {got:?}, max {} on {:?}", r.max, r.witness))
}

fn power_words_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut checks = 0;
    for case in 0..200 {
        let vars = rng.gen_range(1..=3);
        let u = random_idempotent_update(&mut rng, vars, 6);
        for x in 0..vars {
            let (left, right) = idempotent_power_words(&u, x).map_err(|e| e.to_string())?;
            for n in 1..=5 {
                let mut expected: Vec<Sym> = left.repeat(n - 1).chars().map(Sym::Letter).collect();
                expected.extend_from_slice(u.image(x));
                expected.extend(right.repeat(n - 1).chars().map(Sym::Letter));
                ensure!(u.power(n).image(x) == expected.as_slice(), "case {case}, x {x}, n {n}");
                checks += 1;
            }
        }
    }
    Ok(format!("200 updates, {checks} exact checks"))
}

fn pumping_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut cases = 0;
    let mut with_loops = 0;
    let mut checks = 0;
    while cases < 100 {
        let sst = random_sst(&mut rng);
        let Some(run) = random_accepting_run(&mut rng, &sst, 6) else { continue };
        let chosen = random_disjoint_loops(&mut rng, &sst, &run, 2);
        let loops = LoopSet::new(&sst, &run, &chosen).map_err(|e| e.to_string())?;
        let expr = pumped_output_expr(&sst, &run, &loops).map_err(|e| e.to_string())?;
        for counts in tuples(loops.len(), 3) {
            let pumped = pump(&sst, &run, &loops, &counts).map_err(|e| e.to_string())?;
            let want = sst.output_of(&pumped).map_err(|e| e.to_string())?;
            let got = instantiate_pumped(&expr, &counts).map_err(|e| e.to_string())?;
            ensure!(got == want, "case {cases}, counts {counts:?}: {got:?} vs {want:?}");
            checks += 1;
        }
        if !loops.is_empty() {
            with_loops += 1;
        }
        cases += 1;
    }
    Ok(format!("100 runs ({with_loops} with loops), {checks} exact checks"))
}

fn random_side(rng: &mut ChaCha8Rng, factors: usize) -> ParamWord {
    let word = |rng: &mut ChaCha8Rng, max: usize| {
        let n = rng.gen_range(0..=max);
        (0..n).map(|_| *['a', 'b'].choose(rng).unwrap()).collect::<String>()
    };
    let constants = (0..=factors).map(|_| word(rng, 3)).collect();
    let bases = (0..factors)
        .map(|_| {
            let mut b = word(rng, 2);
            if b.is_empty() {
                b.push('a');
            }
            (b, 0)
        })
        .collect();
    ParamWord::new(constants, bases).unwrap()
}

fn cofiniteness_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut cases = 0;
    let mut worst = 0;
    while cases < 100 {
        let (m, n) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        if m + n == 0 {
            continue;
        }
        let e = Inequality::new(random_side(&mut rng, m), random_side(&mut rng, n));
        let bad = nonsolutions_single(&e, 50).map_err(|err| err.to_string())?;
        if bad.len() == 51 {
            continue; // no solution in range
        }
        ensure!(bad.len() <= m + n, "{e}: {} non-solutions > {}", bad.len(), m + n);
        worst = worst.max(bad.len());
        cases += 1;
    }
    Ok(format!("100 inequalities, at most {worst} non-solutions"))
}

fn ambiguity_exactness() -> Check {
    let none = find_dumbbell(&fixtures::id(), DEFAULT_MONOID_CAP, B).map_err(|e| e.to_string())?;
    ensure!(none.is_none(), "id has a dumbbell");
    for name in ["amb", "tsc", "tsc1", "r2"] {
        let sst = fixtures::by_name(name).unwrap();
        let d = find_dumbbell(&sst, DEFAULT_MONOID_CAP, B).map_err(|e| e.to_string())?;
        let d = d.ok_or_else(|| format!("{name} has no dumbbell"))?;
        d.check(&sst).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("id finite-ambiguous; amb, tsc, tsc1, r2 have checked dumbbells".into())
}

fn selectors_cover(sst: &Sst, k: usize) -> Result<usize, String> {
    let sel = decompose_selectors(sst, k, B);
    let mut inputs = 0;
    for input in inputs_up_to(sst.alphabet(), 6) {
        let all = outputs(sst, &input, B).map_err(|e| e.to_string())?;
        let picked: Vec<String> = sel
            .iter()
            .map(|s| s.eval(&input))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .flatten()
            .collect();
        let union: BTreeSet<String> = picked.iter().cloned().collect();
        ensure!(union.len() == picked.len(), "selectors overlap on {input:?}");
        ensure!(union == all, "union differs on {input:?}");

        let cover = semantic_cover(sst, &input, 1, 100, B).map_err(|e| e.to_string())?;
        let outs: Vec<String> = cover
            .iter()
            .map(|r| sst.output_of(r))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure!(outs.iter().cloned().collect::<BTreeSet<_>>() == all, "cover loses outputs on {input:?}");
        for i in 0..cover.len() {
            for j in i + 1..cover.len() {
                if outs[i] == outs[j] {
                    let d = run_delay(sst, &cover[i], &cover[j], 1).map_err(|e| e.to_string())?;
                    ensure!(d.delay > 100, "cover pair within delay on {input:?}");
                }
            }
        }
        inputs += 1;
    }
    Ok(inputs)
}

fn decomposition() -> Check {
    let a = selectors_cover(&fixtures::tsc(), 2)?;
    let b = selectors_cover(&fixtures::r2(), 4)?;
    Ok(format!("tsc k=2 on {a} inputs, r2 k=4 on {b} inputs"))
}

fn equivalence_oracle() -> Check {
    match check_equivalence_bounded(&fixtures::tsc(), &fixtures::tsc1(), 4, B) {
        Ok(Equivalence::Counterexample { input, .. }) if input == "0" => Ok("counterexample \"0\"".into()),
        other => Err(format!("{other:?}")),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked delay example", worked_delay_example, Some(Duration::from_secs(1))),
        ("two-sided count is 2-valued", two_sided_count_is_two_valued, Some(Duration::from_secs(30))),
        ("seeded count diverges", seeded_count_diverges, Some(Duration::from_secs(60))),
        ("block selector outputs and bound", block_selector_bound, None),
        ("idempotent power words", power_words_suite, None),
        ("pumped output expressions", pumping_suite, None),
        ("single-parameter co-finiteness bound", cofiniteness_suite, None),
        ("ambiguity exactness", ambiguity_exactness, None),
        ("selector decomposition and cover", decomposition, None),
        ("bounded equivalence", equivalence_oracle, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if took > *limit => Err(format!("took {took:?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
