use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use ltflab::chow::{chow_vector, enumerate_ltfs, is_ltf, ltf_line, LtfDecision};
use ltflab::circuit::{Circuit, CircuitBuilder, GateOp, TruthTable};
use ltflab::codes::{bias_of, build_biased_matrix, correlation_profile, BFunction, Search};
use ltflab::constructions::{
    andreev_ltf2_parts, andreev_mod3mod2, andreev_pdt, andreev_tc03_circuit, parity,
    parity_approx_circuit, AndreevLayout, ParityDecisionTree, PdtNode, LTF2_MAX_GATES,
};
use ltflab::experiments::{
    agreement, approx_majority_margin, estimate_not_single_input, lo_probe,
    majority_forcing_grid, majority_gate, restriction_survival, write_csv, write_survival_csv,
    BoolFunction, FnFunction, Mode,
};
use ltflab::restrictions::{trial_rng, Partition};
use rand::RngCore;

use crate::args::*;
use crate::CliError;

type Res = Result<(), CliError>;

pub fn dispatch(command: Command, seed: u64) -> Res {
    match command {
        Command::Build(a) => build(a),
        Command::Eval(a) => eval(a),
        Command::Restrict(a) => restrict(a, seed),
        Command::Forcing(a) => forcing(a, seed),
        Command::Lo(a) => lo(a, seed),
        Command::Agree(a) => agree(a, seed),
        Command::EnumerateLtf(a) => enumerate(a),
        Command::Chow(a) => chow(a),
        Command::Biased(a) => biased(a, seed),
        Command::BEval(a) => b_eval(a),
    }
}

fn emit(out: Option<&Path>, content: &[u8]) -> Res {
    match out {
        Some(p) => std::fs::write(p, content)?,
        None => std::io::stdout().lock().write_all(content)?,
    }
    Ok(())
}

fn bits(s: &str) -> Result<Vec<bool>, CliError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::Usage(format!("bit string contains {other:?}"))),
        })
        .collect()
}

fn majority_circuit(n: usize) -> Result<Circuit, CliError> {
    let mut b = CircuitBuilder::new(format!("maj{n}"), n);
    let g = b.add(GateOp::Maj(majority_gate(n)?))?;
    Ok(b.finish(g)?)
}

/// A selected function, as a circuit where one exists.
enum Selected {
    Circuit(Circuit),
    Tree(ParityDecisionTree),
    Parity(usize),
    Andreev(AndreevLayout),
}

impl Selected {
    fn function(&self) -> Box<dyn BoolFunction + '_> {
        match self {
            Selected::Circuit(c) => Box::new(c.clone()),
            Selected::Tree(t) => Box::new(t.clone()),
            Selected::Parity(n) => Box::new(FnFunction::new(*n, parity)),
            Selected::Andreev(l) => Box::new(FnFunction::new(l.n(), move |x: &[bool]| {
                l.eval(x).expect("length checked")
            })),
        }
    }

    fn circuit(self) -> Result<Circuit, CliError> {
        match self {
            Selected::Circuit(c) => Ok(c),
            _ => Err(CliError::Usage("this command needs a circuit".into())),
        }
    }
}

fn select_func(func: Func, n: usize, c: u64, max_gates: u64) -> Result<Selected, CliError> {
    Ok(match func {
        Func::Parity => Selected::Parity(n),
        Func::Majority => Selected::Circuit(majority_circuit(n)?),
        Func::Andreev => Selected::Andreev(AndreevLayout::new(n)?),
        Func::ParityApprox => Selected::Circuit(parity_approx_circuit(n, c)?),
        Func::Tc03 => Selected::Circuit(andreev_tc03_circuit(n)?),
        Func::Ltf2 => Selected::Circuit(andreev_ltf2_parts(n, max_gates)?.circuit),
        Func::Mod3mod2 => Selected::Circuit(andreev_mod3mod2(n)?),
        Func::Pdt => Selected::Tree(andreev_pdt(n)?),
    })
}

fn select(s: &FuncSelect) -> Result<Selected, CliError> {
    if let Some(path) = &s.circuit {
        let text = std::fs::read_to_string(path)?;
        return Ok(Selected::Circuit(Circuit::parse(&text)?));
    }
    let func = s
        .func
        .ok_or_else(|| CliError::Usage("give --func or --circuit".into()))?;
    let n = s
        .n
        .ok_or_else(|| CliError::Usage("--n is required with --func".into()))?;
    select_func(func, n, s.c, LTF2_MAX_GATES)
}

fn tree_text(t: &ParityDecisionTree) -> String {
    let mut s = format!("pdt inputs={} depth={}\n", t.num_inputs(), t.depth());
    for (i, node) in t.nodes().iter().enumerate() {
        match node {
            PdtNode::Leaf(b) => writeln!(s, "node {i} leaf {}", u8::from(*b)),
            PdtNode::Query { subset, zero, one } => {
                let q: Vec<String> = subset.iter().map(|j| format!("x{j}")).collect();
                writeln!(s, "node {i} query {} zero={zero} one={one}", q.join(","))
            }
        }
        .unwrap();
    }
    s
}

fn build(a: BuildArgs) -> Res {
    let selected = select_func(a.func, a.n, a.c, a.max_gates)?;
    let (text, metrics) = match &selected {
        Selected::Circuit(c) => {
            let (g, w) = c.size_metrics();
            (c.to_string(), format!("gates={g} wires={w}"))
        }
        Selected::Tree(t) => (tree_text(t), format!("depth={} nodes={}", t.depth(), t.nodes().len())),
        _ => return Err(CliError::Usage("parity and andreev are evaluators, not constructions".into())),
    };
    match &a.out {
        Some(path) => {
            emit(Some(path), text.as_bytes())?;
            println!("{metrics}");
        }
        None => emit(None, format!("# {metrics}\n{text}").as_bytes())?,
    }
    Ok(())
}

fn eval(a: EvalArgs) -> Res {
    let selected = select(&a.select)?;
    let f = selected.function();
    if a.table {
        println!("{}", f.truth_table()?.to_hex());
        return Ok(());
    }
    let input = a
        .input
        .ok_or_else(|| CliError::Usage("give --input or --table".into()))?;
    let x = bits(&input)?;
    if x.len() != f.arity() {
        return Err(CliError::Usage(format!("input has {} bits, expected {}", x.len(), f.arity())));
    }
    println!("{}", u8::from(f.eval(&x)));
    Ok(())
}

fn restrict(a: RestrictArgs, seed: u64) -> Res {
    let circuit = select(&a.select)?.circuit()?;
    let partition = Partition::equal(circuit.num_inputs(), a.parts)?;
    let summary = restriction_survival(&circuit, &partition, a.trials, seed)?;
    let mut buf = Vec::new();
    write_survival_csv(&[summary], &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn forcing(a: ForcingArgs, seed: u64) -> Res {
    let rows = if a.single_input {
        let mut rows = Vec::new();
        for &n in &a.n {
            let gate = majority_gate(n)?;
            for &p in &a.parts {
                let mut row = estimate_not_single_input(&gate, &Partition::equal(n, p)?, a.trials, seed)?;
                row.label = format!("maj{n}_not_single_input");
                rows.push(row);
            }
        }
        rows
    } else {
        majority_forcing_grid(&a.n, &a.parts, a.trials, seed)?
    };
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn mode(exact: bool, trials: u64, seed: u64) -> Mode {
    if exact {
        Mode::Exact
    } else {
        Mode::Trials { trials, seed }
    }
}

fn lo(a: LoArgs, seed: u64) -> Res {
    let weights = match a.uniform {
        Some(n) => vec![1; n],
        None if a.weights.is_empty() => {
            return Err(CliError::Usage("give --weights or --uniform".into()))
        }
        None => a.weights,
    };
    let row = lo_probe(&weights, a.lo, a.hi, mode(a.exact, a.trials, seed))?;
    let mut buf = Vec::new();
    write_csv(&[row], &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn agree(a: AgreeArgs, seed: u64) -> Res {
    let m = mode(a.exact, a.trials, seed);
    let f_sel = select_func(a.f, a.n, a.c, LTF2_MAX_GATES)?;
    let f = f_sel.function();
    if let Some(g) = a.g {
        let g_sel = select_func(g, a.n, a.c, LTF2_MAX_GATES)?;
        let row = agreement(f.as_ref(), g_sel.function().as_ref(), m)?;
        if a.exact {
            println!("estimate={:?}", row.estimate);
        } else {
            println!("estimate={:?} stderr={:?} trials={}", row.estimate, row.stderr, row.trials);
        }
        return Ok(());
    }
    let circuits = a
        .circuits
        .iter()
        .map(|p: &PathBuf| Ok(Circuit::parse(&std::fs::read_to_string(p)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let margin = approx_majority_margin(&circuits, f.as_ref(), m)?;
    println!("margin={margin:?}");
    Ok(())
}

fn enumerate(a: EnumerateArgs) -> Res {
    let mut text = String::new();
    for (t, g) in enumerate_ltfs(a.n)? {
        text.push_str(&ltf_line(&t, &g));
        text.push('\n');
    }
    emit(a.out.as_deref(), text.as_bytes())
}

fn chow(a: ChowArgs) -> Res {
    let table = match &a.hex {
        Some(hex) => {
            let n = a
                .select
                .n
                .ok_or_else(|| CliError::Usage("--n is required with --hex".into()))?;
            TruthTable::from_hex(n, hex)?
        }
        None => select(&a.select)?.function().truth_table()?,
    };
    let v = chow_vector(&table)?;
    let scaled: Vec<String> = v.scaled.iter().map(i64::to_string).collect();
    println!("chow={}", scaled.join(" "));
    if table.num_inputs() <= ltflab::chow::MAX_LTF_INPUTS {
        match is_ltf(&table)? {
            LtfDecision::Realized(g) => println!("ltf=yes {}", ltf_line(&table, &g)),
            LtfDecision::NotLtf(_) => println!("ltf=no"),
        }
    }
    Ok(())
}

fn biased(a: BiasedArgs, seed: u64) -> Res {
    match a.action {
        BiasedAction::Build { params, out } => {
            let m = build_biased_matrix(params.t, params.r)?;
            let mut buf = Vec::new();
            m.write(&mut buf)?;
            emit(out.as_deref(), &buf)
        }
        BiasedAction::Bias { params, sampled } => {
            let m = build_biased_matrix(params.t, params.r)?;
            let search = match sampled {
                Some(count) => Search::Sampled { count, seed },
                None => Search::Exhaustive,
            };
            let b = bias_of(&m, search)?;
            println!(
                "bias={} witness={:x} bound={} m={}",
                b.value,
                b.witness,
                m.epsilon(),
                m.m()
            );
            Ok(())
        }
        BiasedAction::Profile {
            params,
            theta,
            targets,
            sampled,
        } => {
            let m = build_biased_matrix(params.t, params.r)?;
            let words = (m.m() as usize).div_ceil(64);
            println!("target,exceeders,examined,total");
            for i in 0..targets {
                let mut rng = trial_rng(seed, i);
                let mut target: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
                if m.m() < 64 {
                    target[0] &= (1u64 << m.m()) - 1;
                }
                let search = match sampled {
                    Some(count) => Search::Sampled { count, seed: seed ^ i },
                    None => Search::Exhaustive,
                };
                let p = correlation_profile(&m, &target, theta, search)?;
                println!("{i},{},{},{}", p.exceeders, p.examined, p.total);
            }
            Ok(())
        }
    }
}

fn b_eval(a: BEvalArgs) -> Res {
    let b = BFunction::new(a.n, a.k)?;
    if a.table {
        let n = a.n;
        let t = TruthTable::from_fn(2 * n, |row| {
            let x: Vec<bool> = (0..n).map(|j| (row >> j) & 1 == 1).collect();
            let y: Vec<bool> = (0..n).map(|j| (row >> (n + j)) & 1 == 1).collect();
            b.eval(&x, &y).expect("lengths fixed")
        })?;
        println!("{}", t.to_hex());
        return Ok(());
    }
    let x = bits(a.x.as_deref().unwrap_or_default())?;
    let y = bits(a.a.as_deref().unwrap_or_default())?;
    println!("{}", u8::from(b.eval(&x, &y)?));
    Ok(())
}

