use cavent_core::analytic::{self, AnalyticSnapshot};
use cavent_core::liouville::fock::DEFAULT_TRUNC_TOL;
use cavent_core::liouville::{
    default_nmax, run_oracle, verify_disentangling, FockConfig, OracleOptions, OracleSummary, ProjectorAssignment,
    HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
use cavent_core::model::{
    derive_params, dispersive_validity, DerivedParams, DispersiveValidity, ModelParams, DEFAULT_VALIDITY_THRESHOLD,
};
use cavent_core::Error;
use rayon::prelude::*;

use crate::config::{parameter_metadata, Axis, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, CsvTable};

/// Fock cutoff of the disentangling stage of `verify`.
pub const VERIFY_DISENTANGLING_NMAX: usize = 6;
pub const VERIFY_DISENTANGLING_TIMES: [f64; 3] = [10.0, 100.0, 500.0];
/// Reference `(Ω, k)` always exercised by the disentangling stage.
pub const VERIFY_REFERENCE_POINT: (f64, f64) = (1e-3, 1e-3);
/// Largest accepted gap between integrated and closed-form observables.
pub const INTEGRATOR_THRESHOLD: f64 = 1e-6;

/// What a command produced, before it is written anywhere.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub text: Vec<String>,
    /// `(file stem, table)` pairs.
    pub tables: Vec<(String, CsvTable)>,
    pub warnings: Vec<String>,
    /// Set when a verification check failed.
    pub failure: Option<String>,
}

impl Report {
    fn table(name: &str, table: CsvTable) -> Self {
        Self { tables: vec![(name.to_string(), table)], ..Self::default() }
    }
}

fn validity_warning(v: &DispersiveValidity) -> Option<String> {
    (!v.is_valid()).then(|| {
        format!(
            "dispersive approximation questionable: sqrt(n+1)*g'/|delta2| = {:.3e} exceeds {} at n = {}",
            v.ratio, v.threshold, v.n
        )
    })
}

fn fock_config(cfg: &RunConfig) -> CliResult<FockConfig> {
    let nmax = cfg.nmax.unwrap_or_else(|| default_nmax(cfg.params.alpha));
    Ok(FockConfig::new(nmax, DEFAULT_TRUNC_TOL)?)
}

fn metadata(table: &mut CsvTable, p: &ModelParams, d: &DerivedParams) {
    for (k, v) in parameter_metadata(p) {
        table.meta(k, v);
    }
    table.meta("theta", format_float(d.theta));
    table.meta("g_prime", format_float(d.g_prime));
    table.meta("delta2", format_float(d.delta2));
    table.meta("omega_eff", format_float(d.omega_eff));
}

pub fn params(cfg: &RunConfig) -> CliResult<Report> {
    let d = derive_params(&cfg.params)?;
    let v = dispersive_validity(&cfg.params, &d, DEFAULT_VALIDITY_THRESHOLD)?;
    let mut text: Vec<String> = parameter_metadata(&cfg.params).into_iter().map(|(k, v)| format!("{k} = {v}")).collect();
    for (k, x) in [
        ("delta1", d.delta1),
        ("omega1", d.omega1),
        ("theta", d.theta),
        ("g_prime", d.g_prime),
        ("omega_prime", d.omega_prime),
        ("delta2", d.delta2),
        ("omega_eff", d.omega_eff),
        ("dispersive_ratio", v.ratio),
    ] {
        text.push(format!("{k} = {}", format_float(x)));
    }
    text.push(format!("dispersive_n = {}", v.n));
    text.push(format!("dispersive_valid = {}", v.is_valid()));
    Ok(Report { text, warnings: validity_warning(&v).into_iter().collect(), ..Report::default() })
}

fn snapshot_row(p: &ModelParams, s: &AnalyticSnapshot) -> [f64; 5] {
    [
        analytic::concurrence_analytic(s),
        analytic::linear_entropy_analytic(s),
        analytic::photon_number(p, s.t),
        s.abs_f(),
        s.abs_tau(),
    ]
}

pub fn timeseries(cfg: &RunConfig) -> CliResult<Report> {
    let p = &cfg.params;
    let d = derive_params(p)?;
    let v = dispersive_validity(p, &d, DEFAULT_VALIDITY_THRESHOLD)?;
    let times = cfg.times();
    let mut header = vec!["t", "concurrence", "linear_entropy", "photon_number", "abs_f", "abs_tau"];
    let numeric = if cfg.oracle {
        header.extend(["concurrence_numeric", "trace_error"]);
        let opts = OracleOptions { tol: cfg.tol, ..OracleOptions::default() };
        Some(run_oracle(p, &d, &fock_config(cfg)?, &times, &opts)?)
    } else {
        None
    };

    let mut table = CsvTable::new(header);
    metadata(&mut table, p, &d);
    table.meta("dispersive_ratio", format_float(v.ratio));
    if let Some(samples) = &numeric {
        table.meta("nmax", fock_config(cfg)?.nmax.to_string());
        table.meta("tol", format_float(cfg.tol));
        let worst = OracleSummary::from_samples(samples);
        table.meta("max_concurrence_deviation", format_float(worst.concurrence));
    }
    for (i, &t) in times.iter().enumerate() {
        let s = analytic::evolve(p, &d, t);
        let mut row = vec![t];
        row.extend(snapshot_row(p, &s));
        if let Some(samples) = &numeric {
            row.extend([samples[i].concurrence_numeric, samples[i].trace_error]);
        }
        table.push(row);
    }
    let mut report = Report::table("timeseries", table);
    report.warnings.extend(validity_warning(&v));
    Ok(report)
}

/// Analytic concurrence over a 2-D parameter grid at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis1: Axis,
    pub axis2: Axis,
    pub time: f64,
    /// Row-major: `values[i * n2 + j]` belongs to `(axis1[i], axis2[j])`.
    pub values: Vec<f64>,
    pub degenerate: usize,
    pub questionable: usize,
}

enum PointOutcome {
    Value(f64, bool),
    Degenerate,
}

fn sweep_point(base: &ModelParams, axes: (&Axis, &Axis), v: (f64, f64), t: f64) -> CliResult<PointOutcome> {
    let mut p = *base;
    axes.0.name.set(&mut p, v.0);
    axes.1.name.set(&mut p, v.1);
    p.validate().map_err(|e| CliError::Invalid(format!("sweep point {}={}, {}={}: {e}", axes.0.name, v.0, axes.1.name, v.1)))?;
    match derive_params(&p) {
        Ok(d) => {
            let valid = dispersive_validity(&p, &d, DEFAULT_VALIDITY_THRESHOLD)?.is_valid();
            Ok(PointOutcome::Value(analytic::concurrence_analytic(&analytic::evolve(&p, &d, t)), valid))
        }
        Err(Error::DegenerateDispersive { .. }) => Ok(PointOutcome::Degenerate),
        Err(e) => Err(e.into()),
    }
}

pub fn run_sweep(base: &ModelParams, axis1: Axis, axis2: Axis, n: (usize, usize), time: f64, threads: Option<usize>) -> CliResult<Sweep> {
    let (v1, v2) = (axis1.values(n.0), axis2.values(n.1));
    let eval = || -> CliResult<Vec<PointOutcome>> {
        (0..n.0 * n.1)
            .into_par_iter()
            .map(|k| sweep_point(base, (&axis1, &axis2), (v1[k / n.1], v2[k % n.1]), time))
            .collect()
    };
    let outcomes = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?
            .install(eval)?,
        None => eval()?,
    };
    let mut sweep = Sweep { axis1, axis2, time, values: Vec::with_capacity(outcomes.len()), degenerate: 0, questionable: 0 };
    for o in outcomes {
        match o {
            PointOutcome::Value(c, valid) => {
                sweep.values.push(c);
                sweep.questionable += usize::from(!valid);
            }
            PointOutcome::Degenerate => {
                sweep.values.push(f64::NAN);
                sweep.degenerate += 1;
            }
        }
    }
    Ok(sweep)
}

fn sweep_table(base: &ModelParams, s: &Sweep, n: (usize, usize)) -> CsvTable {
    let mut table = CsvTable::new([s.axis1.name.as_str(), s.axis2.name.as_str(), "concurrence"]);
    for (k, v) in parameter_metadata(base) {
        table.meta(k, v);
    }
    table.meta("axis1", s.axis1.to_string());
    table.meta("axis2", s.axis2.to_string());
    table.meta("grid", format!("{}x{}", n.0, n.1));
    table.meta("time", format_float(s.time));
    table.meta("degenerate_points", s.degenerate.to_string());
    table.meta("dispersive_questionable_points", s.questionable.to_string());
    let (v1, v2) = (s.axis1.values(n.0), s.axis2.values(n.1));
    for (k, &c) in s.values.iter().enumerate() {
        table.push(vec![v1[k / n.1], v2[k % n.1], c]);
    }
    table
}

fn sweep_warnings(s: &Sweep) -> Vec<String> {
    let mut w = Vec::new();
    if s.degenerate > 0 {
        w.push(format!("{} sweep points hit delta2 = 0 and were written as nan", s.degenerate));
    }
    if s.questionable > 0 {
        w.push(format!("{} sweep points are outside the dispersive regime", s.questionable));
    }
    w
}

pub fn sweep2d(cfg: &RunConfig) -> CliResult<Report> {
    let (Some(a1), Some(a2)) = (cfg.axis1, cfg.axis2) else {
        return Err(CliError::Invalid("sweep2d needs --axis1 and --axis2 (name:min:max)".into()));
    };
    if a1.name == a2.name {
        return Err(CliError::Invalid("sweep axes must name different parameters".into()));
    }
    let n = (cfg.grid.0, cfg.grid.1);
    let time = cfg.time.unwrap_or(1.0 / cfg.params.g);
    let s = run_sweep(&cfg.params, a1, a2, n, time, cfg.threads)?;
    let mut report = Report::table("sweep2d", sweep_table(&cfg.params, &s, n));
    report.warnings = sweep_warnings(&s);
    Ok(report)
}

pub mod figures {
    use super::*;
    use crate::config::ParamName;

    pub const FIG1_LAMBDA: (f64, f64) = (0.0, 1.0);
    pub const FIG1_KAPPA: (f64, f64) = (0.0, 5e-3);
    pub const FIG2_UPPER_KAPPAS: [f64; 3] = [0.0, 1e-4, 1e-3];
    pub const FIG2_LOWER_DRIVES: [f64; 2] = [0.0, 0.2];
    pub const FIG3_KAPPAS: [f64; 2] = [1e-4, 1e-3];
    pub const FIG4_DRIVES: [f64; 2] = [0.0, 0.5];
    pub const FIG_KAPPA: f64 = 1e-3;

    /// `0`, `0.2`, `1e-4`: plain notation down to 10⁻², scientific below.
    pub fn label(v: f64) -> String {
        if v == 0.0 || v.abs() >= 1e-2 { format!("{v}") } else { format!("{v:e}") }
    }

    /// Concurrence over `λ × k` at `t = 1/g`.
    pub fn fig1(cfg: &RunConfig) -> CliResult<Report> {
        let a1 = cfg.axis1.unwrap_or(Axis { name: ParamName::Lambda, min: FIG1_LAMBDA.0, max: FIG1_LAMBDA.1 });
        let a2 = cfg.axis2.unwrap_or(Axis { name: ParamName::Kappa, min: FIG1_KAPPA.0, max: FIG1_KAPPA.1 });
        let n = (cfg.grid.0, cfg.grid.1);
        let time = cfg.time.unwrap_or(1.0 / cfg.params.g);
        let s = run_sweep(&cfg.params, a1, a2, n, time, cfg.threads)?;
        let mut table = sweep_table(&cfg.params, &s, n);
        table.comment("concurrence over driving strength and decay rate at fixed time");
        let mut report = Report::table("fig1", table);
        report.warnings = sweep_warnings(&s);
        Ok(report)
    }

    /// One analytic column per parameter variant, sampled on the config time grid.
    fn series(
        cfg: &RunConfig,
        variants: &[(String, ModelParams)],
        observable: impl Fn(&ModelParams, &AnalyticSnapshot) -> f64,
    ) -> CliResult<(CsvTable, Vec<String>)> {
        let mut header = vec!["t".to_string()];
        let mut derived = Vec::with_capacity(variants.len());
        let mut warnings = Vec::new();
        for (name, p) in variants {
            let d = derive_params(p)?;
            warnings.extend(validity_warning(&dispersive_validity(p, &d, DEFAULT_VALIDITY_THRESHOLD)?).map(|w| format!("{name}: {w}")));
            header.push(name.clone());
            derived.push(d);
        }
        let mut table = CsvTable::new(header);
        for (k, v) in parameter_metadata(&cfg.params) {
            table.meta(k, v);
        }
        for ((name, p), d) in variants.iter().zip(&derived) {
            table.meta(format!("{name}.kappa"), format_float(p.kappa));
            table.meta(format!("{name}.lambda"), format_float(p.lam));
            table.meta(format!("{name}.omega_c"), format_float(p.omega_c));
            table.meta(format!("{name}.omega_eff"), format_float(d.omega_eff));
        }
        for t in cfg.times() {
            let mut row = vec![t];
            for ((_, p), d) in variants.iter().zip(&derived) {
                row.push(observable(p, &analytic::evolve(p, d, t)));
            }
            table.push(row);
        }
        Ok((table, warnings))
    }

    fn concurrence(_: &ModelParams, s: &AnalyticSnapshot) -> f64 {
        analytic::concurrence_analytic(s)
    }

    fn entropy(_: &ModelParams, s: &AnalyticSnapshot) -> f64 {
        analytic::linear_entropy_analytic(s)
    }

    fn with_kappa(base: &ModelParams, kappa: f64) -> ModelParams {
        ModelParams { omega_c: 0.0, lam: 0.0, kappa, ..*base }
    }

    fn with_drive(base: &ModelParams, drive: f64) -> ModelParams {
        ModelParams { omega_c: drive, lam: drive, kappa: FIG_KAPPA, ..*base }
    }

    /// Upper panel: concurrence for several `k` without drive. Lower panel:
    /// `k = 10⁻³` with and without the drive `ωc = λ`.
    pub fn fig2(cfg: &RunConfig) -> CliResult<Report> {
        let upper: Vec<_> = FIG2_UPPER_KAPPAS
            .iter()
            .map(|&k| (format!("concurrence_kappa_{}", label(k)), with_kappa(&cfg.params, k)))
            .collect();
        let lower: Vec<_> = FIG2_LOWER_DRIVES
            .iter()
            .map(|&l| (format!("concurrence_lambda_{}", label(l)), with_drive(&cfg.params, l)))
            .collect();
        let (mut up, mut warnings) = series(cfg, &upper, concurrence)?;
        up.comment("upper panel: concurrence without classical drive for several decay rates");
        let (mut low, w) = series(cfg, &lower, concurrence)?;
        low.comment("lower panel: concurrence at kappa = 1e-3 with omega_c = lambda");
        warnings.extend(w);
        Ok(Report { tables: vec![("fig2_upper".into(), up), ("fig2_lower".into(), low)], warnings, ..Report::default() })
    }

    /// Mean photon number for two decay rates, with integrated columns when
    /// the oracle is requested.
    pub fn fig3(cfg: &RunConfig) -> CliResult<Report> {
        let variants: Vec<_> = FIG3_KAPPAS
            .iter()
            .map(|&k| (format!("photon_number_kappa_{}", label(k)), with_kappa(&cfg.params, k)))
            .collect();
        let (mut table, warnings) = series(cfg, &variants, |p, s| analytic::photon_number(p, s.t))?;
        table.comment("mean cavity photon number");
        if cfg.oracle {
            let fock = fock_config(cfg)?;
            let times = cfg.times();
            let opts = OracleOptions { tol: cfg.tol, ..OracleOptions::default() };
            table.meta("nmax", fock.nmax.to_string());
            table.meta("tol", format_float(cfg.tol));
            for (name, p) in &variants {
                let samples = run_oracle(p, &derive_params(p)?, &fock, &times, &opts)?;
                table.header.push(format!("{name}_numeric"));
                for (row, s) in table.rows.iter_mut().zip(&samples) {
                    row.push(s.photon_numeric);
                }
            }
        }
        Ok(Report { tables: vec![("fig3".into(), table)], warnings, ..Report::default() })
    }

    /// Linear entropy with and without the drive. The figure's caption names
    /// concurrence, but the accompanying discussion plots the linear entropy.
    pub fn fig4(cfg: &RunConfig) -> CliResult<Report> {
        let variants: Vec<_> = FIG4_DRIVES
            .iter()
            .map(|&l| (format!("linear_entropy_lambda_{}", label(l)), with_drive(&cfg.params, l)))
            .collect();
        let (mut table, warnings) = series(cfg, &variants, entropy)?;
        table.comment("linear entropy S = 1 - Tr(rho^2) with and without classical drive");
        table.comment("the original figure caption says concurrence; its discussion describes linear entropy, which is emitted here");
        Ok(Report { tables: vec![("fig4".into(), table)], warnings, ..Report::default() })
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} {} {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Disentangling checks at the reference point and at the config's own
/// `(Ω, k)`, then the integrator-versus-closed-form comparison.
pub fn verify_checks(cfg: &RunConfig, assignment: ProjectorAssignment) -> CliResult<Vec<Check>> {
    let p = &cfg.params;
    let d = derive_params(p)?;
    let mut checks = Vec::new();

    let small = FockConfig::new(VERIFY_DISENTANGLING_NMAX, DEFAULT_TRUNC_TOL)?;
    let mut points = vec![VERIFY_REFERENCE_POINT];
    if (d.omega_eff, p.kappa) != VERIFY_REFERENCE_POINT {
        points.push((d.omega_eff, p.kappa));
    }
    for (omega, kappa) in points {
        for t in VERIFY_DISENTANGLING_TIMES {
            let r = verify_disentangling(omega, kappa, t, &small)?;
            let m = r.checks.iter().map(|c| c.m_deviation()).fold(0.0, f64::max);
            checks.push(Check {
                name: format!("disentangling omega={omega:e} kappa={kappa:e} t={t}"),
                passed: r.passed(),
                detail: format!(
                    "pairwise={:.3e} m_fit={:.3e} dyad={:.3e} (nmax {}, dyad nmax {})",
                    r.max_pairwise(),
                    m,
                    r.max_dyad_deviation(),
                    r.nmax,
                    r.dyad_nmax
                ),
            });
        }
    }

    let fock = fock_config(cfg)?;
    let opts = OracleOptions { tol: cfg.tol, assignment, check_positivity: true };
    let samples = run_oracle(p, &d, &fock, &cfg.times(), &opts)?;
    let s = OracleSummary::from_samples(&samples);
    let entropy_max = samples.iter().map(|x| x.entropy_analytic).fold(0.0, f64::max);
    let within = |x: f64| x < INTEGRATOR_THRESHOLD;
    let grid = format!("t in [{}, {}], {} samples, nmax {}, tol {:e}", cfg.t_start, cfg.t_end, cfg.steps, fock.nmax, cfg.tol);
    checks.push(Check {
        name: "integrator concurrence".into(),
        passed: within(s.concurrence),
        detail: format!("max_dev={:.3e} ({grid})", s.concurrence),
    });
    checks.push(Check {
        name: "integrator entropy".into(),
        passed: within(s.entropy),
        detail: format!("max_dev={:.3e} analytic_max={}", s.entropy, format_float(entropy_max)),
    });
    checks.push(Check {
        name: "integrator photon_number".into(),
        passed: within(s.photon),
        detail: format!("max_dev={:.3e}", s.photon),
    });
    checks.push(Check {
        name: "integrator state".into(),
        passed: s.trace < TRACE_TOL && s.hermiticity < HERMITICITY_TOL && s.min_eigenvalue >= -POSITIVITY_TOL,
        detail: format!("trace_err={:.3e} herm_err={:.3e} min_eig={:.3e}", s.trace, s.hermiticity, s.min_eigenvalue),
    });
    Ok(checks)
}

pub fn verify(cfg: &RunConfig, assignment: ProjectorAssignment) -> CliResult<Report> {
    let checks = verify_checks(cfg, assignment)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    Ok(Report {
        text: checks.iter().map(Check::line).collect(),
        failure: (!failed.is_empty()).then(|| failed.join("; ")),
        ..Report::default()
    })
}
