use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use labs_core::brute::brute_force_optimum;
use labs_core::cd::{CdClosedForm, FieldConfig, Schedule, ScheduleKind};
use labs_core::hamiltonian::{build_hamiltonian, term_counts};
use labs_core::landscape::{
    labs_landscape, landscape_report, median_sk_f_lo, sk_instance_seed, sk_landscape, LandscapeStats, Model,
    SKInstance,
};
use labs_core::objective::autocorrelations;
use labs_core::optima::KnownOptimaTable;
use labs_core::orchestrate::{orchestrate, OrchestrateConfig, SamplerConfig, SearchTemplate};
use labs_core::search::Method;
use labs_core::sequence::SpinSequence;
use labs_core::sim::{build_circuit, mean_energy, resource_count, sample, simulate, GateMethod, ShotSet};
use labs_core::stats::{analyze, write_csv_bundle, AnalysisConfig, CensoringPolicy, CrossoverSpec, TTSDataset};

use crate::args::*;
use crate::ranges;
use crate::target::resolve_target;
use crate::UsageError;

const TOOL_VERSION: &str = concat!("labs ", env!("CARGO_PKG_VERSION"));

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow::Error::new(UsageError(e.to_string()))
}

fn resolve_seed(seed: &mut Option<u64>) -> u64 {
    *seed.get_or_insert_with(|| {
        let s: u64 = rand::random();
        eprintln!("generated seed: {s} (pass --seed {s} to reproduce)");
        s
    })
}

fn init_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(j) = jobs {
        if j == 0 {
            bail!(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring worker threads")?;
    }
    Ok(())
}

fn echo(command: &str, args: &impl Serialize) -> Value {
    json!({"command": command, "tool_version": TOOL_VERSION, "args": args})
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_text<T: Serialize>(comment: &Value, rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut buf = format!("# {}\n", serde_json::to_string(comment)?).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(buf)?)
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Energy(a) => energy(a),
        Command::Brute(a) => brute(a),
        Command::Hamiltonian(a) => hamiltonian(a),
        Command::Cd(a) => cd(a),
        Command::Gates(a) => gates(a),
        Command::DcqoSample(a) => dcqo_sample(a),
        Command::Solve(a) => solve(a),
        Command::Landscape(a) => landscape(a),
        Command::Analyze(a) => analyze_cmd(a),
    }
}

fn energy(a: EnergyArgs) -> Result<()> {
    let seq: SpinSequence = a.seq.parse().map_err(usage)?;
    let profile = autocorrelations(&seq);
    if a.json {
        let v = json!({"sequence": seq, "energy": profile.energy(), "correlations": profile.correlations()});
        print!("{}", pretty(&v)?);
    } else {
        println!("{}", profile.energy());
    }
    Ok(())
}

fn brute(a: BruteArgs) -> Result<()> {
    let result = brute_force_optimum(a.n).map_err(usage)?;
    let mut v = serde_json::to_value(&result)?;
    v["tool_version"] = json!(TOOL_VERSION);
    print!("{}", pretty(&v)?);
    Ok(())
}

fn hamiltonian(a: HamiltonianArgs) -> Result<()> {
    let h = build_hamiltonian(a.n).map_err(usage)?;
    let (n_two, n_four) = term_counts(a.n)?;
    let v = json!({
        "config": echo("hamiltonian", &a),
        "n": a.n,
        "offset": h.offset,
        "n_two": n_two,
        "n_four": n_four,
        "terms": h.operator.to_terms(),
    });
    emit(a.out.as_deref(), &pretty(&v)?)
}

#[derive(Serialize)]
struct CdRow {
    lambda: f64,
    gamma1: f64,
    gamma2: f64,
    alpha1: f64,
}

fn cd(a: CdArgs) -> Result<()> {
    if a.points == 0 {
        bail!(usage("--points must be at least 1"));
    }
    let fields = FieldConfig::with_transverse(vec![a.h_x; a.n]);
    let closed = CdClosedForm::new(a.n, &fields).map_err(usage)?;
    let rows = (0..a.points)
        .map(|i| {
            let lambda = if a.points == 1 { 0.0 } else { i as f64 / (a.points - 1) as f64 };
            let c = closed.alpha1(lambda)?;
            Ok(CdRow { lambda, gamma1: c.gamma1, gamma2: c.gamma2, alpha1: c.alpha1 })
        })
        .collect::<labs_core::Result<Vec<_>>>()?;
    emit(a.out.as_deref(), &csv_text(&echo("cd", &a), rows)?)
}

fn gates(a: GatesArgs) -> Result<()> {
    let method = match a.method {
        GateMethodArg::Dcqo => GateMethod::Dcqo,
        GateMethodArg::Qaoa => GateMethod::Qaoa,
    };
    let reps = a.layers.or(a.steps).unwrap_or(1);
    let count = resource_count(a.n, method, reps).map_err(usage)?;
    let mut v = serde_json::to_value(count)?;
    v["tool_version"] = json!(TOOL_VERSION);
    print!("{}", pretty(&v)?);
    Ok(())
}

fn schedule(s: &SamplerArgs) -> Result<Schedule> {
    let kind: ScheduleKind = s.schedule.parse().map_err(usage)?;
    Schedule::new(kind, s.total_time).map_err(usage)
}

fn dcqo_sample(mut a: SampleArgs) -> Result<()> {
    let seed = resolve_seed(&mut a.seed);
    let sched = schedule(&a.sampler)?;
    let plan = build_circuit(a.n, &sched, a.sampler.trotter, &FieldConfig::uniform(a.n)).map_err(usage)?;
    let state = simulate(&plan)?;
    let shots = sample(&state, a.sampler.shots, seed).map_err(usage)?;
    let mean = mean_energy(&state)?;
    let header = json!({
        "kind": "config",
        "tool_version": TOOL_VERSION,
        "config": echo("dcqo-sample", &a),
        "seed": seed,
        "n": a.n,
        "exact_mean_energy": mean,
    });
    let mut w = BufWriter::new(File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?);
    shots.write_jsonl(&mut w, &header)?;
    w.flush()?;
    let best = shots.best_index().map(|i| shots.energies[i]).unwrap_or_default();
    eprintln!("N = {}: {} shots, best energy {best}, exact mean {mean:.3}", a.n, shots.len());
    Ok(())
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Mts => Method::Mts,
        MethodArg::Qemts => Method::Qemts,
        MethodArg::QemtsMultirun => Method::QemtsMultirun,
    }
}

fn shot_files_by_length(paths: &[PathBuf]) -> Result<BTreeMap<usize, Vec<PathBuf>>> {
    let mut out: BTreeMap<usize, Vec<PathBuf>> = BTreeMap::new();
    for p in paths {
        let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
        let (_, set): (_, ShotSet) = ShotSet::read_jsonl(BufReader::new(f)).with_context(|| format!("reading {}", p.display()))?;
        out.entry(set.n).or_default().push(p.clone());
    }
    Ok(out)
}

fn solve(mut a: SolveArgs) -> Result<()> {
    let lengths = ranges::lengths(&a.n).map_err(usage)?;
    if a.target.is_some() && lengths.len() > 1 {
        bail!(usage("--target applies to a single N; use the table or --target-auto for ranges"));
    }
    let table = KnownOptimaTable::bundled();
    let mut targets = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for &n in &lengths {
        let t = resolve_target(n, a.target, a.target_auto, &table).map_err(usage)?;
        if let Some(w) = &t.warning {
            eprintln!("warning: {w}");
        }
        targets.insert(n, t.energy);
        provenance.insert(n.to_string(), t);
    }
    let seed = resolve_seed(&mut a.seed);
    let config = OrchestrateConfig {
        lengths: lengths.clone(),
        methods: a.method.iter().map(|&m| method(m)).collect(),
        replicates: ranges::half_open(&a.replicates, "replicate").map_err(usage)?,
        seeds: ranges::half_open(&a.seeds, "seed").map_err(usage)?,
        master_seed: seed,
        search: SearchTemplate {
            population_size: a.k,
            p_comb: a.p_comb,
            p_mut: a.p_mut,
            tournament_size: a.tournament,
            max_generations: a.gmax,
            max_evaluations: a.max_evals,
        },
        targets,
        sampler: SamplerConfig {
            shots: a.sampler.shots,
            n_trot: a.sampler.trotter,
            schedule: schedule(&a.sampler)?,
            runs: a.sampler_runs,
        },
        shot_files: shot_files_by_length(&a.shots_file)?,
        record_wall_clock: !a.no_wall_clock,
    };
    config.validate().map_err(usage)?;
    init_jobs(a.jobs)?;
    let mut echo = echo("solve", &a);
    echo["targets"] = serde_json::to_value(&provenance)?;
    let dataset = orchestrate(&config, &a.out, &echo)?;

    let mut summary: BTreeMap<(usize, Method), (usize, usize)> = BTreeMap::new();
    for r in dataset.records() {
        let e = summary.entry((r.n, r.method)).or_default();
        e.0 += r.found_optimum as usize;
        e.1 += 1;
    }
    for ((n, m), (ok, total)) in summary {
        eprintln!("N = {n:>3} {m:<15} solved {ok}/{total}");
    }
    Ok(())
}

#[derive(Serialize)]
struct LandscapeRow {
    n: usize,
    model: Model,
    instance: Option<usize>,
    f_lo: f64,
    minima_count: u64,
}

fn landscape(mut a: LandscapeArgs) -> Result<()> {
    let lengths = ranges::lengths(&a.n_range).map_err(usage)?;
    let seed = resolve_seed(&mut a.seed);
    init_jobs(a.jobs)?;
    let rows: Vec<LandscapeStats> = match a.model {
        ModelArg::Both => landscape_report(&lengths, a.instances, seed).map_err(usage)?,
        ModelArg::Labs => lengths.iter().map(|&n| labs_landscape(n)).collect::<labs_core::Result<_>>().map_err(usage)?,
        ModelArg::Sk => {
            let mut rows = Vec::new();
            for &n in &lengths {
                for i in 0..a.instances {
                    let inst = SKInstance::generate(n, sk_instance_seed(seed, n, i)).map_err(usage)?;
                    rows.push(sk_landscape(&inst, i).map_err(usage)?);
                }
            }
            rows
        }
    };
    let text = csv_text(
        &echo("landscape", &a),
        rows.iter().map(|r| LandscapeRow {
            n: r.n,
            model: r.model,
            instance: r.instance,
            f_lo: r.f_lo,
            minima_count: r.minima_count,
        }),
    )?;
    emit(Some(&a.out), &text)?;
    for &n in &lengths {
        let labs = rows.iter().find(|r| r.n == n && r.model == Model::Labs).map(|r| r.f_lo);
        let sk = median_sk_f_lo(&rows, n);
        let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
        eprintln!("N = {n:>2}: labs f_lo {}  median sk f_lo {}", show(labs), show(sk));
    }
    Ok(())
}

fn analyze_cmd(mut a: AnalyzeArgs) -> Result<()> {
    let seed = resolve_seed(&mut a.seed);
    let [p_a, p_b] = a.crossover_quantiles[..] else {
        bail!(usage("--crossover-quantiles takes two values: seeded method, then MTS"));
    };
    let fit_range = a.fit_range.as_deref().map(ranges::inclusive).transpose().map_err(usage)?;
    if !(0.0..=1.0).contains(&a.max_censored) {
        bail!(usage("--max-censored must lie in [0, 1]"));
    }
    let cfg = AnalysisConfig {
        quantiles: a.quantiles.clone(),
        bootstrap: a.bootstrap,
        fit_range,
        crossover: CrossoverSpec { method_a: Method::Qemts, p_a, method_b: Method::Mts, p_b },
        seed,
        censoring: CensoringPolicy { max_censored_fraction: a.max_censored },
    };
    init_jobs(a.jobs)?;
    let f = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let (headers, dataset) = TTSDataset::read_jsonl(BufReader::new(f))?;
    let mut echo = echo("analyze", &a);
    echo["inputs"] = Value::Array(headers);
    let report = analyze(&dataset, &cfg, echo.clone()).map_err(|e| anyhow!(e))?;
    emit(Some(&a.out), &pretty(&report)?)?;
    if let Some(dir) = &a.csv_dir {
        write_csv_bundle(&report, dir, &serde_json::to_string(&echo)?)?;
    }
    println!("{:<15} {:>5} {:>9} {:>21} {:>7}", "method", "p", "kappa", "95% CI", "R2");
    for f in &report.fits {
        println!(
            "{:<15} {:>5.2} {:>9.4} [{:>8.4}, {:>8.4}] {:>7.4}",
            f.method.as_str(),
            f.p,
            f.point.kappa,
            f.kappa.lower,
            f.kappa.upper,
            f.point.r_squared
        );
    }
    if let Some(c) = report.crossover.as_ref().and_then(|c| c.interval.as_ref()) {
        println!("crossover N: median {:.3}, 95% CI [{:.3}, {:.3}]", c.median, c.lower, c.upper);
    }
    Ok(())
}
