//! Command-line front end: `simulate`, `predict`, `preset` and
//! `validate-model`.

pub mod config;
pub mod csvio;
pub mod plan;
pub mod predict;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::connmodel::{ConnectionModel, TabulatedProfile};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Metric;
use config::Config;
use csvio::CsvSink;
use plan::{
    grid, preset_plans, run_plan_with, ApproxFormula, Coupling, ExperimentPlan, ModelKind, Preset,
    TruncationSetting,
};

#[derive(Debug, Parser)]
#[command(
    name = "rgg-faultnet",
    version,
    about = "Breakdown probability of random geometric graphs with node faults"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo estimate of the breakdown probability over a sweep.
    Simulate(CommonArgs),
    /// Thresholds and approximation values without simulation.
    Predict(CommonArgs),
    /// Reproduce one of the reference experiments.
    Preset {
        #[arg(value_enum)]
        name: PresetName,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Check a connection function against the model assumptions.
    ValidateModel(CommonArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetName {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    HardDisk,
    Rayleigh,
    Table,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Connection function.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Node count(s); repeatable, also as comma lists or `2^k`.
    #[arg(long)]
    pub n: Vec<String>,
    /// Path-loss exponent(s).
    #[arg(long)]
    pub eta: Vec<String>,
    /// Rayleigh `beta`.
    #[arg(long)]
    pub beta: Option<String>,
    /// Scale factor(s) `beta / beta_c*`; `a:b:step` ranges accepted.
    #[arg(long)]
    pub delta: Vec<String>,
    /// Node fault probability; repeatable or `a:b:step`.
    #[arg(long)]
    pub epsilon: Vec<String>,
    /// Hard-disk range or table scale.
    #[arg(long)]
    pub range: Option<String>,
    /// Tabulated profile file (`r g(r)` per line).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Scaling constant `d` for the `1/d` fault threshold (predict).
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// `square` or `torus`.
    #[arg(long)]
    pub metric: Option<String>,
    /// `auto`, `exact` or a missed-edge budget per graph.
    #[arg(long)]
    pub truncation: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Run trials on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

/// Flag values merged with the config file, flags taking precedence.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    cfg: Config,
    args: CommonArgs,
}

fn one(v: &Option<String>) -> Vec<String> {
    v.iter().cloned().collect()
}

impl Settings {
    pub fn new(args: CommonArgs) -> Result<Self> {
        let cfg = match &args.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        Ok(Settings { cfg, args })
    }

    fn raw(&self, key: &'static str) -> Vec<String> {
        let a = &self.args;
        let from_args = match key {
            "model" => a
                .model
                .map(|m| m.to_possible_value().unwrap().get_name().to_string())
                .into_iter()
                .collect(),
            "n" => a.n.clone(),
            "eta" => a.eta.clone(),
            "beta" => one(&a.beta),
            "delta" => a.delta.clone(),
            "epsilon" => a.epsilon.clone(),
            "range" => one(&a.range),
            "table" => a.table.iter().map(|p| p.display().to_string()).collect(),
            "d" => one(&a.d),
            "trials" => one(&a.trials),
            "seed" => one(&a.seed),
            "metric" => one(&a.metric),
            "truncation" => one(&a.truncation),
            "out" => a.out.iter().map(|p| p.display().to_string()).collect(),
            _ => unreachable!("unknown key {key}"),
        };
        if from_args.is_empty() {
            self.cfg.get(key).to_vec()
        } else {
            from_args
        }
    }

    pub fn reals(&self, key: &'static str) -> Result<Vec<f64>> {
        parse_reals(key, &self.raw(key))
    }

    fn real(&self, key: &'static str) -> Result<Option<f64>> {
        let values = self.reals(key)?;
        match values.as_slice() {
            [] => Ok(None),
            [v] => Ok(Some(*v)),
            _ => Err(Error::plan(key, "expects a single value")),
        }
    }

    fn integer(&self, key: &'static str) -> Result<Option<u64>> {
        match self.raw(key).last() {
            None => Ok(None),
            Some(s) => s
                .trim()
                .parse()
                .map(Some)
                .map_err(|e| Error::plan(key, format!("`{s}`: {e}"))),
        }
    }

    pub fn counts(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for raw in self.raw("n") {
            for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                out.push(
                    parse_count(item)
                        .ok_or_else(|| Error::plan("n", format!("`{item}` is not a node count")))?,
                );
            }
        }
        Ok(out)
    }

    fn metric(&self) -> Result<Option<Metric>> {
        self.raw("metric")
            .last()
            .map(|s| {
                s.parse::<Metric>()
                    .map_err(|e| Error::plan("metric", e.to_string()))
            })
            .transpose()
    }

    fn truncation(&self) -> Result<Option<TruncationSetting>> {
        self.raw("truncation")
            .last()
            .map(|s| match s.trim() {
                "auto" => Ok(TruncationSetting::Auto),
                "exact" | "0" => Ok(TruncationSetting::Exact),
                other => other
                    .parse::<f64>()
                    .ok()
                    .filter(|t| *t >= 0.0)
                    .map(TruncationSetting::Tau)
                    .ok_or_else(|| {
                        Error::plan(
                            "truncation",
                            format!("`{other}`: expected auto, exact or a nonnegative number"),
                        )
                    }),
            })
            .transpose()
    }

    fn model_kind(&self) -> Result<ModelKind> {
        let name = self
            .raw("model")
            .last()
            .cloned()
            .unwrap_or_else(|| "rayleigh".into());
        match name.trim() {
            "rayleigh" => Ok(ModelKind::Rayleigh),
            "hard-disk" => Ok(ModelKind::HardDisk),
            "table" => match self.raw("table").last() {
                Some(path) => Ok(ModelKind::Table(PathBuf::from(path))),
                None => Err(Error::plan(
                    "table",
                    "the table model needs `--table <path>`",
                )),
            },
            other => Err(Error::plan("model", format!("unknown model `{other}`"))),
        }
    }

    fn execution(&self) -> Execution {
        if self.args.sequential {
            Execution::Sequential
        } else if let Some(w) = self.args.workers {
            Execution::Workers(w)
        } else {
            Execution::Parallel
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.raw("out").last().map(PathBuf::from)
    }

    fn apply_common(&self, plan: &mut ExperimentPlan) -> Result<()> {
        if let Some(t) = self.integer("trials")? {
            plan.trials = t;
        }
        if let Some(s) = self.integer("seed")? {
            plan.seed = s;
        }
        if let Some(m) = self.metric()? {
            plan.metric = m;
        }
        if let Some(t) = self.truncation()? {
            plan.truncation = t;
        }
        plan.execution = self.execution();
        Ok(())
    }

    /// Plan for `simulate` / `predict`.
    pub fn plan(&self) -> Result<ExperimentPlan> {
        let mut plan = ExperimentPlan {
            model: self.model_kind()?,
            beta: self.real("beta")?,
            range: self.real("range")?,
            ..Default::default()
        };
        let n = self.counts()?;
        if !n.is_empty() {
            plan.n_list = n;
        }
        let eta = self.reals("eta")?;
        if !eta.is_empty() {
            plan.eta_list = eta;
        }
        let eps = self.reals("epsilon")?;
        if !eps.is_empty() {
            plan.epsilon_list = eps;
        }
        plan.delta_list = self.reals("delta")?;
        if !plan.delta_list.is_empty() {
            if plan.beta.is_some() {
                return Err(Error::plan(
                    "delta",
                    "give either `beta` or `delta`, not both",
                ));
            }
            plan.coupling = Coupling::Delta;
        }
        self.apply_common(&mut plan)?;
        plan.validate()?;
        Ok(plan)
    }

    /// Plans for a preset with flag overrides applied.
    pub fn preset(&self, preset: Preset) -> Result<Vec<ExperimentPlan>> {
        let mut plans = preset_plans(preset);
        let counts = self.counts()?;
        let eps = self.reals("epsilon")?;
        let delta = self.reals("delta")?;
        let eta = self.reals("eta")?;
        match preset {
            Preset::Fig1 => {
                if !eta.is_empty() {
                    plans[0].eta_list = eta;
                }
                if !counts.is_empty() {
                    plans[0].n_list = counts;
                }
            }
            Preset::Fig2 => {
                if !counts.is_empty() {
                    let template = plans[0].clone();
                    plans = counts
                        .iter()
                        .map(|&n| ExperimentPlan {
                            n_list: vec![n],
                            trials: if n <= 1024 { 10_000 } else { 1000 },
                            ..template.clone()
                        })
                        .collect();
                }
                if !eps.is_empty() {
                    plans.iter_mut().for_each(|p| p.epsilon_list = eps.clone());
                }
            }
            Preset::Fig3 => {
                if !eps.is_empty() {
                    let template = plans[0].clone();
                    plans = eps
                        .iter()
                        .map(|&e| ExperimentPlan {
                            epsilon_list: vec![e],
                            ..template.clone()
                        })
                        .collect();
                }
                for p in &mut plans {
                    if !delta.is_empty() {
                        p.delta_list = delta.clone();
                    }
                    if !counts.is_empty() {
                        p.n_list = counts.clone();
                    }
                }
            }
        }
        for p in &mut plans {
            self.apply_common(p)?;
            p.validate()?;
        }
        Ok(plans)
    }

    /// Connection model described by the flags, for `validate-model`.
    pub fn model(&self) -> Result<ConnectionModel> {
        let eta = self.reals("eta")?.first().copied().unwrap_or(2.0);
        match self.model_kind()? {
            ModelKind::Rayleigh => {
                let beta = match (self.real("beta")?, self.real("delta")?) {
                    (Some(b), _) => b,
                    (None, Some(d)) => {
                        let n = *self
                            .counts()?
                            .first()
                            .ok_or_else(|| Error::plan("n", "`delta` needs `n`"))?;
                        d * crate::analytics::critical_beta(n as f64, eta)
                    }
                    (None, None) => {
                        return Err(Error::plan(
                            "beta",
                            "Rayleigh model needs `beta` or `delta`",
                        ))
                    }
                };
                ConnectionModel::rayleigh(beta, eta)
            }
            ModelKind::HardDisk => ConnectionModel::hard_disk(
                self.real("range")?
                    .ok_or_else(|| Error::plan("range", "missing"))?,
            ),
            ModelKind::Table(path) => ConnectionModel::rescaled(
                TabulatedProfile::from_file(path)?,
                self.real("range")?.unwrap_or(1.0),
            ),
        }
    }

    pub fn d(&self) -> Result<Option<f64>> {
        self.real("d")
    }
}

/// Node count: plain integer or `2^k`.
fn parse_count(s: &str) -> Option<usize> {
    if let Some((base, exp)) = s.split_once('^') {
        let base: usize = base.trim().parse().ok()?;
        let exp: u32 = exp.trim().parse().ok()?;
        return base.checked_pow(exp);
    }
    s.parse().ok()
}

/// Reals from repeated values or comma lists; `a:b:step` is an inclusive range.
pub fn parse_reals(key: &'static str, raw: &[String]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::plan(key, format!("`{s}`: {e}")))
    };
    for value in raw {
        for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            match parts.as_slice() {
                [v] => out.push(num(v)?),
                [a, b, step] => {
                    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                    if !(step > 0.0) || b < a {
                        return Err(Error::plan(key, format!("bad range `{item}`")));
                    }
                    out.extend(grid(a, b, step));
                }
                _ => {
                    return Err(Error::plan(
                        key,
                        format!("`{item}`: expected a number or a:b:step"),
                    ))
                }
            }
        }
    }
    Ok(out)
}

fn open_output(path: Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run_plans(plans: &[ExperimentPlan], out: Option<PathBuf>) -> Result<()> {
    let seed = plans.first().map(|p| p.seed).unwrap_or_default();
    let mut sink = CsvSink::new(open_output(out)?, seed)?;
    for plan in plans {
        run_plan_with(plan, |row| sink.push(&row))?;
    }
    sink.finish()?;
    Ok(())
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Simulate(args) => {
            let settings = Settings::new(args)?;
            run_plans(&[settings.plan()?], settings.out())?;
            Ok(0)
        }
        Command::Preset { name, args } => {
            let settings = Settings::new(args)?;
            let preset = match name {
                PresetName::Fig1 => Preset::Fig1,
                PresetName::Fig2 => Preset::Fig2,
                PresetName::Fig3 => Preset::Fig3,
            };
            run_plans(&settings.preset(preset)?, settings.out())?;
            Ok(0)
        }
        Command::Predict(args) => {
            let settings = Settings::new(args)?;
            let mut plan = settings.plan_for_prediction()?;
            plan.simulate = false;
            let predictions = predict::predict_plan(&plan, settings.d()?)?;
            let mut stdout = io::stdout().lock();
            for p in &predictions {
                writeln!(stdout, "{p}")?;
            }
            if let Some(out) = settings.out() {
                let rows: Vec<_> = predictions.iter().map(|p| p.row.clone()).collect();
                csvio::write_rows(BufWriter::new(File::create(out)?), plan.seed, &rows)?;
            }
            Ok(0)
        }
        Command::ValidateModel(args) => {
            let settings = Settings::new(args)?;
            let model = settings.model()?;
            let report = model.validate_conditions();
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "model      {model}")?;
            write!(stdout, "{report}")?;
            if let Ok(m) = model.moments() {
                writeln!(stdout, "H0         {}", m.h0)?;
                writeln!(stdout, "H1         {}", m.h1)?;
                writeln!(stdout, "C          {}", m.c)?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

impl Settings {
    /// Like [`plan`](Self::plan) but without requiring a simulation budget;
    /// the approximation column uses the general formula.
    fn plan_for_prediction(&self) -> Result<ExperimentPlan> {
        let mut plan = self.plan()?;
        plan.approx = ApproxFormula::General;
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(args: &[&str]) -> Settings {
        let mut full = vec!["rgg-faultnet", "simulate"];
        full.extend_from_slice(args);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Simulate(a) => Settings::new(a).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn list_syntax() {
        let s = settings(&[
            "--epsilon",
            "0:0.2:0.1",
            "--epsilon",
            "0.5,0.55",
            "--n",
            "2^8",
            "--n",
            "1000",
        ]);
        assert_eq!(s.reals("epsilon").unwrap(), vec![0.0, 0.1, 0.2, 0.5, 0.55]);
        assert_eq!(s.counts().unwrap(), vec![256, 1000]);
        assert!(parse_reals("epsilon", &["0.1:x:0.1".into()]).is_err());
        assert!(parse_reals("epsilon", &["1:0:0.1".into()]).is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        std::fs::write(&cfg, "beta = 100\ntrials = 77\nseed = 5\nmetric = square\n").unwrap();
        let s = settings(&["--config", cfg.to_str().unwrap(), "--seed", "9"]);
        let plan = s.plan().unwrap();
        assert_eq!(plan.trials, 77);
        assert_eq!(plan.seed, 9);
        assert_eq!(plan.beta, Some(100.0));
        assert_eq!(plan.metric, Metric::PlanarSquare);
    }

    #[test]
    fn plan_errors_name_the_key() {
        let err = settings(&["--beta", "10", "--trials", "0"])
            .plan()
            .unwrap_err();
        assert!(
            matches!(err, Error::Plan { ref key, .. } if key == "trials"),
            "{err}"
        );
        let err = settings(&["--beta", "10", "--metric", "sphere"])
            .plan()
            .unwrap_err();
        assert!(
            matches!(err, Error::Plan { ref key, .. } if key == "metric"),
            "{err}"
        );
        let err = settings(&["--beta", "10", "--delta", "1"])
            .plan()
            .unwrap_err();
        assert!(
            matches!(err, Error::Plan { ref key, .. } if key == "delta"),
            "{err}"
        );
    }

    #[test]
    fn preset_overrides() {
        let s = settings(&["--n", "256", "--trials", "20", "--epsilon", "0.1,0.2"]);
        let plans = s.preset(Preset::Fig2).unwrap();
        assert_eq!(plans.len(), 1);
        assert_eq!(plans[0].n_list, vec![256]);
        assert_eq!(plans[0].trials, 20);
        assert_eq!(plans[0].epsilon_list, vec![0.1, 0.2]);
        let plans = settings(&["--epsilon", "0.3"])
            .preset(Preset::Fig3)
            .unwrap();
        assert_eq!(plans.len(), 1);
        assert_eq!(plans[0].delta_list.len(), 16);
    }
}
