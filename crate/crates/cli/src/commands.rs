use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qaoa_landscape::io::{
    aggregate_csv, config_hash, quality_csv, read_residual_layers, write_atomic, write_landscape_csv,
    LayerRecord, ScanSidecar,
};
use qaoa_landscape::landscape::{scan_energies, OptimizerSummary, ScanObserver};
use qaoa_landscape::metrics::InstanceCurve;
use qaoa_landscape::problems::{Instance, ProblemKind};
use qaoa_landscape::strategies::{run_sequential_energies, RampConvention};
use qaoa_landscape::{
    aggregate as aggregate_layers, gen_3cnf, gen_regular_graph, linear_ramp, quality_curve, DiagonalEnergies,
    Error, GridSpec, LandscapeLayer, OptimizerConfig, RampSpec, ScanConfig, Strategy,
};
use serde::{Deserialize, Serialize};

use crate::manifest::RunManifest;
use crate::{AggregateArgs, ConventionArg, GenArgs, InitArg, KindArg, ScanArgs, SpectrumArgs, StrategyArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Resource(_)) => 3,
            CliError::Core(Error::Io { .. }) => 4,
            CliError::Core(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(Error::Parameter(_)) => "parameter",
            CliError::Core(Error::Resource(_)) => "resource",
            CliError::Core(Error::Contract(_)) => "contract",
            CliError::Core(Error::Io { .. }) => "io",
            CliError::Core(Error::Format { .. }) => "format",
        }
    }

    fn message(&self) -> String {
        let raw = match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        };
        raw.replace(['\n', '\r'], " ")
    }
}

pub fn report(e: &CliError) -> ExitCode {
    eprintln!("error kind={} code={}: {}", e.kind(), e.exit_code(), e.message());
    ExitCode::from(e.exit_code())
}

type CliResult<T> = Result<T, CliError>;

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source }.into())
}

/// Runs `body`, then writes the manifest whether or not it succeeded.
fn with_manifest(
    dir: &Path,
    argv: &[String],
    body: impl FnOnce(&mut RunManifest) -> CliResult<()>,
) -> CliResult<()> {
    create_dir(dir)?;
    let mut manifest = RunManifest::start(argv);
    match body(&mut manifest) {
        Ok(()) => Ok(manifest.finish(dir, None)?),
        Err(e) => {
            // the original error matters more than a failed failure manifest
            let _ = manifest.finish(dir, Some(e.message()));
            Err(e)
        }
    }
}

pub fn gen(args: &GenArgs, argv: &[String]) -> CliResult<()> {
    with_manifest(&args.out_dir, argv, |manifest| {
        if args.kind == KindArg::Max3sat && args.alpha.is_none() {
            return Err(CliError::Usage("max3sat generation requires --alpha".into()));
        }
        for k in 0..args.count {
            let seed = args.seed.checked_add(k).ok_or_else(|| CliError::Usage("seed overflow".into()))?;
            let instance = match args.kind {
                KindArg::Maxcut => Instance::Maxcut(gen_regular_graph(args.n, args.degree, seed)?),
                KindArg::Vertexcover => Instance::Vertexcover(gen_regular_graph(args.n, args.degree, seed)?),
                KindArg::Max3sat => {
                    Instance::Max3sat(gen_3cnf(args.n, args.alpha.unwrap_or_default(), seed)?)
                }
            };
            let path = args.out_dir.join(format!("{}_n{}_s{}.json", instance.kind(), args.n, seed));
            let mut text = instance.to_json();
            text.push('\n');
            write_atomic(&path, text.as_bytes())?;
            manifest.instance_hashes.push(instance.hash());
            manifest.outputs.push(path);
        }
        Ok(())
    })
}

#[derive(Serialize, Deserialize)]
struct StoredLayer {
    instance_hash: String,
    config_hash: String,
    layer: LandscapeLayer,
}

#[derive(Serialize, Deserialize)]
struct StoredOptimizer {
    instance_hash: String,
    config_hash: String,
    summary: OptimizerSummary,
}

/// Streams every finished layer to `<out>/layers/` and, when resuming,
/// serves layers whose key `(instance hash, config hash, p)` matches.
struct LayerStream {
    dir: PathBuf,
    instance_hash: String,
    config_hash: String,
    resume: bool,
}

impl LayerStream {
    fn layer_path(&self, p: usize) -> PathBuf {
        self.dir.join(format!("p{p:03}.json"))
    }

    fn optimizer_path(&self) -> PathBuf {
        self.dir.join("optimizer.json")
    }

    fn read<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> Option<T> {
        if !self.resume {
            return None;
        }
        let text = std::fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn write<T: Serialize>(&self, path: &Path, value: &T) -> qaoa_landscape::Result<()> {
        write_atomic(path, serde_json::to_string(value).expect("layer serialises").as_bytes())
    }

    fn matches(&self, instance_hash: &str, config_hash: &str) -> bool {
        instance_hash == self.instance_hash && config_hash == self.config_hash
    }
}

impl ScanObserver for LayerStream {
    fn cached_optimizer(&mut self) -> Option<OptimizerSummary> {
        let stored: StoredOptimizer = self.read(&self.optimizer_path())?;
        self.matches(&stored.instance_hash, &stored.config_hash).then_some(stored.summary)
    }

    fn optimizer_done(&mut self, summary: &OptimizerSummary) -> qaoa_landscape::Result<()> {
        let stored = StoredOptimizer {
            instance_hash: self.instance_hash.clone(),
            config_hash: self.config_hash.clone(),
            summary: summary.clone(),
        };
        self.write(&self.optimizer_path(), &stored)
    }

    fn cached_layer(&mut self, p: usize) -> Option<LandscapeLayer> {
        let stored: StoredLayer = self.read(&self.layer_path(p))?;
        (self.matches(&stored.instance_hash, &stored.config_hash) && stored.layer.p == p)
            .then_some(stored.layer)
    }

    fn layer_done(&mut self, layer: &LandscapeLayer) -> qaoa_landscape::Result<()> {
        let stored = StoredLayer {
            instance_hash: self.instance_hash.clone(),
            config_hash: self.config_hash.clone(),
            layer: layer.clone(),
        };
        self.write(&self.layer_path(layer.p), &stored)
    }
}

fn grid_for(args: &ScanArgs, kind: ProblemKind) -> CliResult<GridSpec> {
    let mut grid = GridSpec::for_kind(kind, args.resolution);
    if let Some(v) = args.beta_lower {
        grid.beta_bounds.0 = v;
    }
    if let Some(v) = args.beta_upper {
        grid.beta_bounds.1 = v;
    }
    if let Some(v) = args.gamma_lower {
        grid.gamma_bounds.0 = v;
    }
    if let Some(v) = args.gamma_upper {
        grid.gamma_bounds.1 = v;
    }
    grid.validate()?;
    Ok(grid)
}

fn ramp_spec(delta_beta: f64, delta_gamma: f64, p: usize, convention: ConventionArg) -> RampSpec {
    RampSpec {
        convention: match convention {
            ConventionArg::Endpoint => RampConvention::Endpoint,
            ConventionArg::HalfStep => RampConvention::HalfStep,
        },
        ..RampSpec::new(delta_beta, delta_gamma, p)
    }
}

fn strategy_for(
    args: &ScanArgs,
    kind: ProblemKind,
    energies: &DiagonalEnergies,
    grid: &GridSpec,
) -> CliResult<Strategy> {
    let p = args.p_target;
    Ok(match args.strategy {
        StrategyArg::Sequential => Strategy::Sequential,
        StrategyArg::Ramp => {
            let (Some(db), Some(dg)) = (args.delta_beta, args.delta_gamma) else {
                return Err(CliError::Usage(
                    "--strategy ramp requires --delta-beta and --delta-gamma".into(),
                ));
            };
            Strategy::Ramp(ramp_spec(db, dg, p, args.ramp_convention))
        }
        StrategyArg::Optimized => {
            let init_kind = args.init.unwrap_or(match kind {
                ProblemKind::Maxcut => InitArg::Sequential,
                ProblemKind::Vertexcover => InitArg::RampMinus,
                ProblemKind::Max3sat => InitArg::RampPlus,
            });
            let magnitude =
                args.delta_beta.map(f64::abs).unwrap_or(qaoa_landscape::strategies::DEFAULT_DELTA_BETA);
            let dg = args.delta_gamma.unwrap_or(qaoa_landscape::strategies::DEFAULT_DELTA_GAMMA);
            let init = match init_kind {
                InitArg::Sequential => run_sequential_energies(energies, grid, p, 1)?.params,
                InitArg::RampPlus => linear_ramp(&ramp_spec(magnitude, dg, p, args.ramp_convention))?,
                InitArg::RampMinus => linear_ramp(&ramp_spec(-magnitude, dg, p, args.ramp_convention))?,
            };
            let config = OptimizerConfig {
                max_evaluations: args.max_evaluations.unwrap_or(1000 * p),
                initial_step: args.initial_step,
                tolerance: args.tolerance,
            };
            Strategy::Optimized { init, config }
        }
    })
}

pub fn scan(args: &ScanArgs, argv: &[String]) -> CliResult<()> {
    with_manifest(&args.out_dir, argv, |manifest| {
        let instance = Instance::load(&args.instance)?;
        let kind = instance.kind();
        let instance_hash = instance.hash();
        manifest.instance_hashes.push(instance_hash.clone());

        let h = instance.to_ising(args.penalty)?;
        let energies = DiagonalEnergies::with_cap(&h, args.max_qubits)?;
        let bounds = energies.bounds();
        let grid = grid_for(args, kind)?;
        if args.p_start == 0 || args.p_step == 0 || args.p_target < args.p_start {
            return Err(CliError::Usage(
                "depth schedule needs 1 <= p_start <= p_target and p_step >= 1".into(),
            ));
        }
        let strategy = strategy_for(args, kind, &energies, &grid)?;
        let cfg = ScanConfig {
            p_start: args.p_start,
            p_target: args.p_target,
            p_step: args.p_step,
            strategy,
            grid,
        };
        cfg.validate()?;
        manifest.config = Some(cfg.clone());
        let cfg_hash = config_hash(&cfg, args.penalty);

        let layer_dir = args.out_dir.join("layers");
        create_dir(&layer_dir)?;
        let mut stream = LayerStream {
            dir: layer_dir.clone(),
            instance_hash: instance_hash.clone(),
            config_hash: cfg_hash.clone(),
            resume: args.resume,
        };
        let result = scan_energies(&energies, &cfg, &mut stream)?;
        manifest.optimizer_evaluations = result.optimizer.as_ref().map(|o| o.evaluations_used);

        let csv_path = args.out_dir.join("landscape.csv");
        write_landscape_csv(&csv_path, &result.layers, &bounds)?;
        let sidecar = ScanSidecar {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            instance_hash,
            config_hash: cfg_hash,
            problem: kind,
            n_qubits: h.n_qubits(),
            penalty: args.penalty,
            config: cfg,
            spectrum: bounds,
            optimizer: result.optimizer.clone(),
            layers: result
                .layers
                .iter()
                .map(|l| LayerRecord::from_layer(l, &bounds))
                .collect::<qaoa_landscape::Result<_>>()?,
            grid_evaluations: result.grid_evaluations,
            wall_time_seconds: manifest.elapsed(),
        };
        let sidecar_path = args.out_dir.join("landscape.json");
        sidecar.save(&sidecar_path)?;
        manifest.outputs.extend([csv_path, sidecar_path, layer_dir]);
        Ok(())
    })
}

/// Name of the first schedule or grid setting on which two scans disagree.
fn first_difference(a: &ScanSidecar, b: &ScanSidecar) -> Option<&'static str> {
    let (ca, cb) = (&a.config, &b.config);
    let strategy_params_differ = match (&ca.strategy, &cb.strategy) {
        (Strategy::Ramp(x), Strategy::Ramp(y)) => x != y,
        (Strategy::Optimized { config: x, .. }, Strategy::Optimized { config: y, .. }) => x != y,
        _ => false,
    };
    [
        ("problem", a.problem != b.problem),
        ("strategy", ca.strategy.name() != cb.strategy.name()),
        ("strategy parameters", strategy_params_differ),
        ("grid.resolution", ca.grid.resolution != cb.grid.resolution),
        ("grid.beta_bounds", ca.grid.beta_bounds != cb.grid.beta_bounds),
        ("grid.gamma_bounds", ca.grid.gamma_bounds != cb.grid.gamma_bounds),
        ("p_start", ca.p_start != cb.p_start),
        ("p_target", ca.p_target != cb.p_target),
        ("p_step", ca.p_step != cb.p_step),
    ]
    .into_iter()
    .find_map(|(name, differs)| differs.then_some(name))
}

pub fn aggregate(args: &AggregateArgs, argv: &[String]) -> CliResult<()> {
    with_manifest(&args.out_dir, argv, |manifest| {
        let mut sidecars = Vec::with_capacity(args.scan_dirs.len());
        let mut grids = Vec::with_capacity(args.scan_dirs.len());
        for dir in &args.scan_dirs {
            let sidecar = ScanSidecar::load(&dir.join("landscape.json"))?;
            let layers = read_residual_layers(&dir.join("landscape.csv"))?;
            if let Some(first) = sidecars.first() {
                if let Some(field) = first_difference(first, &sidecar) {
                    return Err(CliError::Usage(format!(
                        "scan {} differs from {} in {field}",
                        dir.display(),
                        args.scan_dirs[0].display()
                    )));
                }
            }
            manifest.instance_hashes.push(sidecar.instance_hash.clone());
            sidecars.push(sidecar);
            grids.push(layers);
        }
        let reference = &sidecars[0];
        manifest.config = Some(reference.config.clone());

        let depths: Vec<usize> = grids[0].iter().map(|l| l.p).collect();
        let mut aggregates = Vec::with_capacity(depths.len());
        for (k, &p) in depths.iter().enumerate() {
            let at_p: Vec<_> =
                grids
                    .iter()
                    .zip(&args.scan_dirs)
                    .map(|(layers, dir)| {
                        layers.get(k).filter(|l| l.p == p).cloned().ok_or_else(|| {
                            CliError::Usage(format!("scan {} has no layer p={p}", dir.display()))
                        })
                    })
                    .collect::<CliResult<_>>()?;
            aggregates.push(aggregate_layers(&at_p)?);
        }

        let curves: Vec<InstanceCurve> = sidecars
            .iter()
            .zip(&args.scan_dirs)
            .map(|(s, dir)| InstanceCurve {
                instance: dir.display().to_string(),
                points: s.layers.iter().map(|l| (l.p, l.chosen_residual)).collect(),
            })
            .collect();
        let quality = quality_curve(&curves)?;

        let agg_path = args.out_dir.join("aggregate.csv");
        write_atomic(&agg_path, &aggregate_csv(&aggregates, &reference.config.grid))?;
        let quality_path = args.out_dir.join("quality.csv");
        write_atomic(&quality_path, &quality_csv(reference.config.strategy.name(), &quality))?;
        manifest.outputs.extend([agg_path, quality_path]);
        Ok(())
    })
}

#[derive(Serialize)]
struct SpectrumReport {
    problem: ProblemKind,
    n_qubits: usize,
    e0: f64,
    emax: f64,
}

pub fn spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let instance = Instance::load(&args.instance)?;
    let h = instance.to_ising(args.penalty)?;
    let b = qaoa_landscape::problems::spectrum_bounds_with_cap(&h, args.max_qubits)?;
    let report = SpectrumReport { problem: instance.kind(), n_qubits: h.n_qubits(), e0: b.e0, emax: b.emax };
    println!("{}", serde_json::to_string(&report).expect("report serialises"));
    Ok(())
}
