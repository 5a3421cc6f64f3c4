use std::path::Path;

use fsdepth_core::fs::cache::{CacheError, ComplexityCache};
use fsdepth_core::fs::concat::concat_sweep;
use fsdepth_core::fs::deepgen::{run_pack, ScalePack};
use fsdepth_core::fs::depth::depth_profile;
use fsdepth_core::fs::dimension::dimension_estimate;
use fsdepth_core::fs::sgl::{alignment, sgl_experiment, SglConfig};
use fsdepth_core::fs::transfer::{measure_shift, Direction};
use fsdepth_core::fs::{ComplexityTable, Engine};
use fsdepth_core::fst::construct::compose_after;
use fsdepth_core::fst::invert::invert;
use fsdepth_core::fst::lossless::{delay_bound, is_information_lossless, IlVerdict};
use fsdepth_core::fst::{library, text};
use fsdepth_core::pt::he::{toy_he, toy_machines};
use fsdepth_core::pt::pom::depth_ratio_profile;
use fsdepth_core::pt::predictor::predictor_corpus;
use fsdepth_core::pt::reduction::{pair, validate_reduction};
use fsdepth_core::pt::strings::string_at;
use fsdepth_core::pt::transport::pt_sgl_demo;
use fsdepth_core::pt::{Language, LanguagePrefix, Predictor, Reduction};
use fsdepth_core::toolkit::files::{builtin_language, parse_language, parse_predictors};
use fsdepth_core::toolkit::report::{cell_f64, cell_opt};
use fsdepth_core::toolkit::{generate, parse_grid, Report, RunConfig, SequenceSpec, ToolkitError};
use fsdepth_core::{BitString, Fst};

use crate::{Command, Common};

type Result<T> = std::result::Result<T, ToolkitError>;

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| ToolkitError::Input(format!("{}: {e}", path.display())))
}

fn config(c: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(k) = c.k {
        cfg.kmin = k;
        cfg.kmax = k;
    }
    cfg.kmin = c.kmin.unwrap_or(cfg.kmin);
    cfg.kmax = c.kmax.unwrap_or(cfg.kmax.max(cfg.kmin));
    if let Some(g) = &c.ngrid {
        cfg.ngrid = parse_grid(g)?;
    } else if let Some(n) = c.n {
        cfg.ngrid = vec![n];
    }
    cfg.lmax = c.lmax;
    cfg.workers = c.workers;
    cfg.cache = c.cache.clone();
    if let Some(p) = &c.scale_pack {
        cfg.scale_pack = serde_json::from_str::<ScalePack>(&read_file(p)?)
            .map_err(|e| ToolkitError::Input(format!("{}: {e}", p.display())))?;
    }
    cfg.format = c.format.parse()?;
    if let Some(b) = c.budget_ceiling {
        cfg.budget_ceiling = b;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn machine_from(spec: &str) -> Result<Fst> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return library::by_name(name).ok_or_else(|| ToolkitError::Input(format!("unknown builtin machine {name:?}")));
    }
    Ok(text::parse(&read_file(Path::new(spec))?)?)
}

fn machine(c: &Common) -> Result<Fst> {
    machine_from(c.machine.as_deref().ok_or_else(|| ToolkitError::Usage("--machine is required".into()))?)
}

fn language(spec: &str) -> Result<Language> {
    match builtin_language(spec) {
        Some(l) => Ok(l),
        None => parse_language(&read_file(Path::new(spec))?),
    }
}

fn predictors(path: &Option<std::path::PathBuf>) -> Result<Vec<Predictor>> {
    match path {
        Some(p) => parse_predictors(&read_file(p)?),
        None => Ok(predictor_corpus()),
    }
}

fn reduction(spec: &str) -> Result<Reduction> {
    let r = match spec.split_once(':') {
        None if spec == "identity" => Reduction::identity(),
        None if spec == "append-one" => Reduction::append_one(),
        None if spec == "doubling" => Reduction::doubling(),
        Some(("pad", i)) => {
            let i: usize = i.parse().map_err(|_| ToolkitError::Usage(format!("bad pad index {i:?}")))?;
            Reduction::pad(i, fsdepth_core::pt::he::pad_exponent(i))
        }
        _ => return Err(ToolkitError::Usage(format!("unknown reduction {spec:?}"))),
    };
    Ok(r)
}

fn sequence(c: &Common, default: &str) -> Result<SequenceSpec> {
    c.input.as_deref().unwrap_or(default).parse()
}

fn emit(c: &Common, cfg: &RunConfig, report: &Report) -> Result<()> {
    let text = report.render(cfg.format);
    match &c.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cache_error(e: CacheError) -> ToolkitError {
    match e {
        CacheError::Io(e) => ToolkitError::Io(e),
        CacheError::Conflict { .. } => ToolkitError::Contract(e.to_string()),
        other => ToolkitError::Input(other.to_string()),
    }
}

/// Records the table in the configured cache and refuses to continue if the
/// cache disagrees with it or holds non-monotone values.
fn sync_cache(cfg: &RunConfig, engine: &Engine, table: &ComplexityTable, ks: &[usize]) -> Result<()> {
    let Some(path) = &cfg.cache else { return Ok(()) };
    let mut cache = ComplexityCache::open(path, cfg.lmax).map_err(cache_error)?;
    cache.record_table(engine, table, ks).map_err(cache_error)?;
    let bad = cache.monotonicity_violations();
    if let Some(v) = bad.first() {
        return Err(ToolkitError::Contract(format!(
            "{} cached values grow with the budget, first at x={} k={}",
            bad.len(),
            v.x,
            v.k
        )));
    }
    cache.commit(path).map_err(cache_error)
}

fn machine_rows(report: &mut Report, m: &Fst) {
    for q in 0..m.state_count() {
        for b in 0..2u8 {
            let out = m.output(q, b);
            let out = if out.is_empty() { "-".to_string() } else { out.to_string() };
            report.row(vec![q.to_string(), b.to_string(), m.next_state(q, b).to_string(), out]);
        }
    }
}

const MACHINE_COLUMNS: [&str; 4] = ["state", "bit", "next_state", "output"];

pub fn run(c: &Common, command: &Command) -> Result<()> {
    let cfg = config(c)?;
    let engine = Engine::new(cfg.lmax, cfg.workers);
    let mut report;
    match command {
        Command::IlCheck => {
            let m = machine(c)?;
            report = Report::new("il-check", &cfg, &["verdict", "input_a", "input_b", "shared_output", "final_state"]);
            report.param("machine", c.machine.as_deref().unwrap_or_default());
            report.summarize("size", m.size()).summarize("states", m.state_count());
            match is_information_lossless(&m) {
                IlVerdict::Yes => {
                    report.row(vec!["yes".into(), String::new(), String::new(), String::new(), String::new()]);
                    report.summarize("delay_bound", cell_opt(delay_bound(&m)));
                }
                IlVerdict::No(w) => report.row(vec![
                    "no".into(),
                    w.input_a.to_string(),
                    w.input_b.to_string(),
                    w.shared_output.to_string(),
                    w.shared_final_state.to_string(),
                ]),
            }
        }
        Command::Invert { emit_machine } => {
            let m = machine(c)?;
            let inv = invert(&m)?;
            report = Report::new("invert", &cfg, &MACHINE_COLUMNS);
            report.param("machine", c.machine.as_deref().unwrap_or_default());
            report.summarize("lag", inv.lag).summarize("size", inv.machine.size());
            machine_rows(&mut report, &inv.machine);
            if let Some(p) = emit_machine {
                std::fs::write(p, text::render(&inv.machine))?;
            }
        }
        Command::Compose { outer, emit_machine } => {
            let a = machine(c)?;
            let m = machine_from(outer)?;
            let built = compose_after(&a, &m);
            report = Report::new("compose", &cfg, &MACHINE_COLUMNS);
            report.param("machine", c.machine.as_deref().unwrap_or_default()).param("outer", outer);
            report.summarize("size", built.size()).summarize("growth", built.size() as i64 - a.size() as i64);
            machine_rows(&mut report, &built);
            if let Some(p) = emit_machine {
                std::fs::write(p, text::render(&built))?;
            }
        }
        Command::Complexity => {
            let spec = sequence(c, "zeros")?;
            let s = generate(&spec, cfg.max_n(), &cfg.scale_pack, &engine)?;
            let prefixes: Vec<BitString> = cfg.ngrid.iter().map(|&n| s.prefix(n)).collect();
            let table = engine.table(prefixes.iter(), cfg.kmax);
            sync_cache(&cfg, &engine, &table, &cfg.ks())?;
            report = Report::new("complexity", &cfg, &["n", "k", "dk", "witness_machine", "witness_program_len"]);
            report.param("input", &spec);
            for x in &prefixes {
                for k in cfg.ks() {
                    let v = table.complexity(&engine, k, x);
                    let (wm, wp) = match &v.witness {
                        Some(w) => (w.machine.to_string(), w.program.len().to_string()),
                        None => (String::new(), String::new()),
                    };
                    report.row(vec![x.len().to_string(), k.to_string(), v.value.to_string(), wm, wp]);
                }
            }
        }
        Command::Dimension => {
            let spec = sequence(c, "champernowne")?;
            let s = generate(&spec, cfg.max_n(), &cfg.scale_pack, &engine)?;
            let d = dimension_estimate(&engine, &spec.to_string(), &s, &cfg.ks(), &cfg.ngrid);
            report = Report::new("dimension", &cfg, &["k", "n", "dk", "ratio"]);
            report.param("input", &spec);
            for r in &d.rows {
                report.row(vec![r.k.to_string(), r.n.to_string(), r.dk.to_string(), cell_opt(r.ratio.map(cell_f64))]);
            }
            for sm in &d.summary {
                report.summarize(&format!("k{}_liminf_proxy", sm.k), cell_opt(sm.liminf_proxy.map(cell_f64)));
                report.summarize(&format!("k{}_limsup_proxy", sm.k), cell_opt(sm.limsup_proxy.map(cell_f64)));
            }
        }
        Command::DepthProfile { kprime } => {
            let spec = sequence(c, "zeros")?;
            for &kp in kprime {
                cfg.check_budget(kp)?;
            }
            let pairs: Vec<(usize, usize)> =
                cfg.ks().into_iter().flat_map(|k| kprime.iter().map(move |&kp| (k, kp))).filter(|(k, kp)| k < kp).collect();
            if pairs.is_empty() {
                return Err(ToolkitError::Usage("no pair with k < k'".into()));
            }
            let s = generate(&spec, cfg.max_n(), &cfg.scale_pack, &engine)?;
            let prof = depth_profile(&engine, &spec.to_string(), &s, &pairs, &cfg.ngrid);
            report = Report::new("depth-profile", &cfg, &["k", "kprime", "n", "dk", "dkprime", "gap", "gap_over_n"]);
            report.param("input", &spec);
            for r in &prof.rows {
                report.row(vec![
                    r.k.to_string(),
                    r.kprime.to_string(),
                    r.n.to_string(),
                    r.dk.to_string(),
                    r.dkprime.to_string(),
                    cell_opt(r.gap),
                    cell_opt(r.gap_over_n.map(cell_f64)),
                ]);
            }
            for p in &prof.pairs {
                report.summarize(&format!("pair_{}_{}_max", p.k, p.kprime), cell_opt(p.max_gap_over_n.map(cell_f64)));
                report.summarize(&format!("pair_{}_{}_tail_max", p.k, p.kprime), cell_opt(p.tail_max_gap_over_n.map(cell_f64)));
            }
            report.summarize("uniform_alpha", cell_f64(prof.readings.uniform_alpha));
            report.summarize("every_k_positive", prof.readings.every_k_positive);
        }
        Command::Deepgen { emit: emit_path } => {
            let state = run_pack(cfg.scale_pack.clone(), &engine)?;
            report = Report::new(
                "deepgen",
                &cfg,
                &["j", "k", "kprime", "r", "dk_r", "r_threshold", "copies", "t", "dk_prefix", "upper_budget", "upper_bound", "gap", "gap_over_n", "meets_target"],
            );
            for s in &state.stages {
                report.row(vec![
                    s.j.to_string(),
                    s.k.to_string(),
                    s.kprime.to_string(),
                    s.r.to_string(),
                    s.dk_r.to_string(),
                    s.r_threshold.to_string(),
                    s.copies.to_string(),
                    s.t.to_string(),
                    s.dk_prefix.to_string(),
                    s.upper_budget.to_string(),
                    s.upper_bound.to_string(),
                    s.gap.to_string(),
                    cell_f64(s.gap_over_n),
                    s.meets_target.to_string(),
                ]);
            }
            if let Some(p) = emit_path {
                std::fs::write(p, format!("{}\n", state.prefix))?;
            }
            if let Some(bad) = state.stages.iter().find(|s| !s.meets_target || !s.r_passes) {
                emit(c, &cfg, &report)?;
                return Err(ToolkitError::Contract(format!("stage {} misses its certificate", bad.j)));
            }
        }
        Command::Sgl { l, kprime, cap, c: shift, source_len } => {
            let cap = cap.unwrap_or(*kprime);
            cfg.check_budget(cap)?;
            let spec = sequence(c, "deepgen")?;
            let m = match &c.machine {
                Some(s) => machine_from(s)?,
                None => library::doubler(),
            };
            let shift = match shift {
                Some(v) => *v,
                None => {
                    let ks = [*l, l + 1, l + 2];
                    let mut worst = 0;
                    for dir in [Direction::Forward, Direction::Backward] {
                        let r = measure_shift(&engine, "machine", &m, dir, &ks, 6, 12)?;
                        worst = worst.max(r.shift.ok_or_else(|| {
                            ToolkitError::Contract(format!("no shift up to 12 works in the {dir:?} direction"))
                        })?);
                    }
                    worst
                }
            };
            let s = generate(&spec, *source_len, &cfg.scale_pack, &engine)?;
            let grid = if c.ngrid.is_some() || c.n.is_some() {
                cfg.ngrid.clone()
            } else {
                let align = alignment(&m, &s);
                (1..align.len()).filter(|&n| align[n].is_some()).collect()
            };
            let config = SglConfig { l: *l, kprime: *kprime, c: shift, cap, grid };
            let r = sgl_experiment(&engine, &spec.to_string(), &s, &m, &config)?;
            report = Report::new("sgl", &cfg, &["n", "m_n", "dl", "dlprime_upper", "dk", "dkprime", "lhs_lower", "rhs", "holds"]);
            report.param("input", &spec).param("l", l).param("kprime", kprime).param("cap", cap).param("c", shift);
            report.summarize("k", r.k).summarize("lprime", r.lprime).summarize("lprime_exact", r.lprime_exact);
            report.summarize("beta_asymptotic", cell_f64(r.beta_asymptotic)).summarize("beta_uniform", cell_f64(r.beta_uniform));
            report.summarize("positive_rhs", r.positive_rhs).summarize("violations", r.violations);
            for row in &r.rows {
                report.row(vec![
                    row.n.to_string(),
                    row.m_n.to_string(),
                    row.dl.to_string(),
                    row.dlprime_upper.to_string(),
                    row.dk.to_string(),
                    row.dkprime.to_string(),
                    cell_opt(row.lhs_lower),
                    cell_opt(row.rhs),
                    row.holds.to_string(),
                ]);
            }
            if r.violations > 0 {
                emit(c, &cfg, &report)?;
                return Err(ToolkitError::Contract(format!("{} grid points violate the inequality", r.violations)));
            }
        }
        Command::ConcatCheck { ls, max_len, cap } => {
            cfg.check_budget(*cap)?;
            let sweep = concat_sweep(&engine, ls, *max_len, *cap);
            report = Report::new(
                "concat-check",
                &cfg,
                &["kind", "l", "c", "x", "y", "dl_xy", "dl_x", "dl_y", "lower_rhs", "upper_lhs", "upper_rhs", "upper_method"],
            );
            report.param("ls", format!("{ls:?}")).param("max_len", max_len).param("cap", cap);
            report.summarize("checks", sweep.checks);
            report.summarize("overhead", format!("{:?}", sweep.overhead));
            report.summarize("min_lower_margin", cell_opt(sweep.min_lower_margin));
            report.summarize("lower_violations", sweep.lower_violations.len());
            report.summarize("upper_violations", sweep.upper_violations.len());
            for (kind, list) in [("lower", &sweep.lower_violations), ("upper", &sweep.upper_violations)] {
                for v in list {
                    report.row(vec![
                        kind.into(),
                        v.l.to_string(),
                        v.c.to_string(),
                        v.x.to_string(),
                        v.y.to_string(),
                        v.dl_xy.to_string(),
                        v.dl_x.to_string(),
                        v.dl_y.to_string(),
                        cell_opt(v.lower_rhs),
                        v.upper_lhs.to_string(),
                        v.upper_rhs.to_string(),
                        format!("{:?}", v.upper_method).to_lowercase(),
                    ]);
                }
            }
            if !report.rows.is_empty() {
                emit(c, &cfg, &report)?;
                return Err(ToolkitError::Contract(format!("{} bound violations", report.rows.len())));
            }
        }
        Command::PtProfile { language: lang, predictors: pfile, base, a } => {
            if *a <= 0.0 {
                return Err(ToolkitError::Usage("--a must be positive".into()));
            }
            let lang = language(lang)?;
            let corpus = predictors(pfile)?;
            let p = corpus
                .iter()
                .find(|p| p.name() == base)
                .cloned()
                .ok_or_else(|| ToolkitError::Usage(format!("no predictor named {base:?} in the corpus")))?;
            let l = LanguagePrefix::new(lang.clone(), cfg.max_n())
                .ok_or_else(|| ToolkitError::Input(format!("language {} is undecided below n = {}", lang.name(), cfg.max_n())))?;
            report = Report::new("pt-profile", &cfg, &["p_prime", "n", "log_ratio", "threshold", "pass"]);
            report.param("language", lang.name()).param("base", base).param("a", a);
            report.summarize("note", "finite-grid evidence only");
            for q in &corpus {
                let prof = depth_ratio_profile(&p, q, &l, *a, &cfg.ngrid);
                report.summarize(&format!("passes_{}", q.name()), prof.passes);
                for r in &prof.rows {
                    report.row(vec![q.name().into(), r.n.to_string(), cell_f64(r.log_ratio), cell_f64(r.threshold), r.pass.to_string()]);
                }
            }
        }
        Command::PtSgl { language: lang, reduction: rspec, c: cover, predictors: pfile, a, nmax } => {
            let lang = language(lang)?;
            let mut r = reduction(rspec)?;
            if let Some(v) = cover {
                r.c = *v;
            }
            let corpus = predictors(pfile)?;
            let rep = pt_sgl_demo(&lang, &r, &corpus, *a, *nmax).map_err(|e| ToolkitError::Contract(e.to_string()))?;
            report = Report::new(
                "pt-sgl",
                &cfg,
                &["p2", "n", "m_n", "log_ratio_source", "log_ratio_image", "equal", "threshold_source", "threshold_image", "bound_ok", "implication_ok"],
            );
            report.param("language", lang.name()).param("reduction", rspec).param("c", r.c).param("a", a).param("nmax", nmax);
            report.summarize("a_over_c", cell_f64(rep.a_over_c));
            for inst in &rep.instances {
                report.summarize(&format!("chain_{}", inst.p2), inst.chain_holds);
                for row in &inst.rows {
                    report.row(vec![
                        inst.p2.clone(),
                        row.n.to_string(),
                        row.m_n.to_string(),
                        cell_f64(row.log_ratio_source),
                        cell_f64(row.log_ratio_image),
                        row.equal.to_string(),
                        cell_f64(row.threshold_source),
                        cell_f64(row.threshold_image),
                        row.bound_ok.to_string(),
                        row.implication_ok.to_string(),
                    ]);
                }
            }
            if !rep.holds() {
                emit(c, &cfg, &report)?;
                return Err(ToolkitError::Contract("ratio chain or threshold transfer failed".into()));
            }
        }
        Command::ToyHe { queries } => {
            let machines = toy_machines();
            let he = toy_he(&machines);
            let mut indices: Vec<usize> = machines.iter().map(|m| m.index).collect();
            indices.push(machines.len() + 1);
            let mut agree = 0u64;
            for q in 0..*queries {
                let i = indices[q as usize % indices.len()];
                let x = string_at(q / indices.len() as u64);
                let expected = machines.iter().find(|m| m.index == i).is_some_and(|m| (m.decider)(&x));
                agree += (he.language.decide(&pair(&BitString::zeros(i), &x)) == Some(expected)) as u64;
            }
            report = Report::new("toy-he", &cfg, &["i", "machine", "c", "monotone", "injective", "index_bound", "length_bound", "max_m_n"]);
            report.param("queries", queries);
            report.summarize("agreeing_queries", agree);
            let mut all_valid = true;
            for ((i, r), m) in he.reductions.iter().zip(&machines) {
                let v = validate_reduction(r, 2..1024);
                all_valid &= v.valid;
                report.row(vec![
                    i.to_string(),
                    m.name.clone(),
                    r.c.to_string(),
                    v.monotone_violation.is_none().to_string(),
                    v.collision.is_none().to_string(),
                    v.index_violation.is_none().to_string(),
                    v.length_violation.is_none().to_string(),
                    v.max_m_n.to_string(),
                ]);
            }
            if agree != *queries || !all_valid {
                emit(c, &cfg, &report)?;
                return Err(ToolkitError::Contract(format!("{agree}/{queries} queries agree, reductions valid: {all_valid}")));
            }
        }
    }
    emit(c, &cfg, &report)
}
