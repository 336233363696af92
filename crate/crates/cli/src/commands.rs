//! The five subcommands. Each returns a report; files are written by the caller
//! except for snapshots and tables, which are written here.

use std::collections::BTreeMap;
use std::path::Path;

use halfspace::besov::{aniso_norm, besov_st_norm, lp_norm, lp_norm_at};
use halfspace::core::{BoundaryField, Domain, HalfSpaceGrid, IterationStep, TensorField, VectorField};
use halfspace::navier_stokes::{nonlinear_flux, picard_iterate, standard_family, weak_ns_gaps, PicardStatus, WeakGap};
use halfspace::potentials::heat_trace;
use halfspace::stokes::{PartNorms, StokesSolver};
use halfspace::transforms::extend_solenoidal;
use halfspace::verify::{
    manufactured_stokes, operator_ratio_study, oracle_suite, random_boundary, random_solenoidal, random_tensor,
    scaling_invariance_check, stokes_residual_suite, BandSpec, OracleComparison, RatioStudy, ScalingReport,
};
use halfspace::BesovIndex;
use serde::Serialize;

use crate::config::{BoundarySpec, Config, ForceSpec, InitialSpec, NormSpec};
use crate::error::CliError;
use crate::snapshot::{read_vector, write_pairs_csv, write_records, write_slice_csv, write_vector};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub div: Option<f64>,
    pub boundary: Option<f64>,
    pub initial: Option<f64>,
    pub compat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_gap: Option<f64>,
    /// Largest weak-form gap in units of its quadrature tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_gap_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub config: Config,
    pub version: String,
    pub diagnostics: Diagnostics,
    pub norms: BTreeMap<String, f64>,
    pub trace: Vec<IterationStep>,
    pub ratio_studies: Vec<RatioStudy>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub oracles: Vec<OracleComparison>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub weak_gaps: Vec<WeakGap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingReport>,
    pub warnings: Vec<String>,
}

impl Report {
    fn new(command: &str, cfg: &Config) -> Self {
        Self {
            command: command.into(),
            status: "ok".into(),
            config: cfg.clone(),
            version: halfspace::VERSION.into(),
            diagnostics: Diagnostics::default(),
            norms: BTreeMap::new(),
            trace: Vec::new(),
            ratio_studies: Vec::new(),
            oracles: Vec::new(),
            weak_gaps: Vec::new(),
            scaling: None,
            warnings: Vec::new(),
        }
    }
}

/// A finished command: its report and the failure to signal, if any.
pub struct Outcome {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, failure: None }
    }
}

fn rt(e: halfspace::Error) -> CliError {
    CliError::runtime(e)
}

struct Data {
    h: VectorField,
    g: BoundaryField,
    force: Option<TensorField>,
    exact: Option<VectorField>,
}

fn band(b: &BandSpec, vanish: bool) -> BandSpec {
    BandSpec {
        vanish_at_start: b.vanish_at_start || vanish,
        ..*b
    }
}

fn vortex(grid: &HalfSpaceGrid, amp: f64) -> VectorField {
    let n = grid.n();
    VectorField::stationary(grid, Domain::HalfSpace, |x| {
        let z = x[n - 1];
        let e = (-z * z).exp();
        let mut v = [0.0; 3];
        v[0] = amp * x[0].cos() * (2.0 * z - 2.0 * z * z * z) * e;
        v[n - 1] = amp * x[0].sin() * z * z * e;
        v
    })
}

fn build_data(cfg: &Config, grid: &HalfSpaceGrid) -> Result<Data, CliError> {
    if cfg.data.manufactured {
        let m = manufactured_stokes(grid).map_err(CliError::config)?;
        return Ok(Data {
            h: m.h,
            g: m.g,
            force: Some(m.force),
            exact: Some(m.exact),
        });
    }
    let n = grid.n();
    let h = match &cfg.data.initial {
        InitialSpec::Zero => VectorField::zeros(grid, Domain::HalfSpace),
        InitialSpec::Vortex { amp } => vortex(grid, *amp),
        InitialSpec::Random { amp, band: b } => random_solenoidal(grid, b, cfg.seed).scaled(*amp),
    };
    let g = match &cfg.data.boundary {
        BoundarySpec::Zero => BoundaryField::zeros(grid, n),
        BoundarySpec::Pulse { amp } => {
            let tf = grid.t_final();
            BoundaryField::from_fn(grid, n, |x, t| [amp * (std::f64::consts::PI * t / tf).sin() * x[0].cos(), 0.0, 0.0])
        }
        BoundarySpec::Random { amp, band: b } => random_boundary(grid, n, &band(b, true), cfg.seed.wrapping_add(1)).scaled(*amp),
        BoundarySpec::HeatTrace => {
            let ext = extend_solenoidal(&h).map_err(rt)?;
            heat_trace(&ext.field).map_err(rt)?
        }
    };
    let force = match &cfg.data.force {
        ForceSpec::Zero => None,
        ForceSpec::Random { amp, band: b } => {
            Some(random_tensor(grid, Domain::HalfSpace, b, cfg.seed.wrapping_add(2)).scaled(*amp))
        }
    };
    Ok(Data { h, g, force, exact: None })
}

fn part_norms(norms: &mut BTreeMap<String, f64>, p: &PartNorms) {
    for (k, v) in [
        ("u", p.u),
        ("v", p.v),
        ("vol", p.vol),
        ("grad_phi", p.grad_phi),
        ("w", p.w),
        ("g_corr", p.g_corr),
        ("data_initial", p.data.initial),
        ("data_boundary", p.data.boundary),
        ("data_normal_time", p.data.normal_time),
        ("data_normal_space", p.data.normal_space),
        ("data_total", p.data.total),
    ] {
        norms.insert(k.into(), v);
    }
    if let Some(f) = p.force {
        norms.insert("force".into(), f);
    }
}

fn write_norms_csv(out: &Path, norms: &BTreeMap<String, f64>) -> Result<(), CliError> {
    write_pairs_csv(&out.join("norms.csv"), ["name", "value"], norms.iter().map(|(k, v)| (k.as_str(), *v)))
}

fn weak_summary(gaps: &[WeakGap]) -> (f64, f64) {
    let gap = gaps.iter().map(|g| g.gap).fold(0.0, f64::max);
    let ratio = gaps
        .iter()
        .map(|g| if g.gap == 0.0 { 0.0 } else { g.gap / g.tolerance })
        .fold(0.0, f64::max);
    (gap, ratio)
}

fn snapshot(cfg: &Config, u: &VectorField, out: &Path) -> Result<(), CliError> {
    if cfg.output.snapshots {
        write_vector(u, &out.join("u.bin"))?;
        write_slice_csv(u, u.grid().nt() - 1, &out.join("u_final.csv"))?;
    }
    Ok(())
}

pub fn solve_stokes(cfg: &Config, out: &Path) -> Result<Outcome, CliError> {
    let grid = cfg.grid.build()?;
    let index = cfg.index.build(grid.n())?;
    let data = build_data(cfg, &grid)?;
    let solver = StokesSolver::new(&grid).map_err(CliError::config)?;
    let sol = solver.solve(&data.h, &data.g, data.force.as_ref(), &index).map_err(rt)?;
    let mut rep = Report::new("solve-stokes", cfg);
    let d = &sol.diagnostics;
    rep.diagnostics.div = Some(d.divergence);
    rep.diagnostics.boundary = Some(d.boundary);
    rep.diagnostics.initial = Some(d.initial);
    rep.diagnostics.compat = Some(d.compat);
    rep.warnings.extend(d.warnings.iter().cloned());
    if let Some(p) = &d.norms {
        part_norms(&mut rep.norms, p);
    }
    match stokes_residual_suite(&sol, &data.h, &data.g, data.force.as_ref(), &standard_family(&grid)) {
        Ok(r) => {
            rep.diagnostics.weak_gap = Some(r.max_gap);
            rep.diagnostics.weak_gap_ratio = Some(r.max_gap_ratio);
            rep.weak_gaps = r.gaps;
        }
        Err(e) => rep.warnings.push(format!("weak-form residual skipped: {e}")),
    }
    if let Some(exact) = &data.exact {
        let err = sol.u.sub(exact).map_err(rt)?;
        rep.norms.insert("error_l2".into(), err.lq_norm(2.0));
        rep.norms.insert("error_rel_l2".into(), err.lq_norm(2.0) / exact.lq_norm(2.0));
        rep.norms.insert("error_max".into(), err.max_abs());
    }
    write_norms_csv(out, &rep.norms)?;
    snapshot(cfg, &sol.u, out)?;
    Ok(Outcome::ok(rep))
}

pub fn solve_ns(cfg: &Config, out: &Path) -> Result<Outcome, CliError> {
    let grid = cfg.grid.build()?;
    let index = cfg.index.build(grid.n())?;
    if !index.is_critical() {
        return Err(CliError::Config(format!(
            "solve-ns needs the critical exponent q = {}",
            (grid.n() as f64 + 2.0) / (index.alpha + 1.0)
        )));
    }
    let data = build_data(cfg, &grid)?;
    if data.force.is_some() {
        return Err(CliError::Config("solve-ns takes no external force".into()));
    }
    let mut solver = StokesSolver::new(&grid).map_err(CliError::config)?;
    solver.part_norms = false;
    let res = picard_iterate(&solver, &data.h, &data.g, &index, cfg.picard_options()).map_err(rt)?;
    let mut rep = Report::new("solve-ns", cfg);
    rep.trace = res.trace.steps.clone();
    rep.norms.insert("data_total".into(), res.trace.data_norm);
    rep.norms.insert("beta".into(), res.trace.beta);
    rep.norms.insert("p".into(), res.trace.p);
    rep.norms.insert("max_solution".into(), res.trace.max_solution_norm());
    if let Some(s) = res.trace.steps.last() {
        rep.norms.insert("solution".into(), s.solution_norm);
        rep.norms.insert("increment".into(), s.increment_norm);
    }
    write_records(&out.join("trace.csv"), &rep.trace)?;
    let failure = match res.status {
        PicardStatus::Diverged => {
            rep.status = "diverged".into();
            let last = res.trace.ratios().last().copied().unwrap_or(f64::NAN);
            Some(CliError::Diverged(format!(
                "Picard iteration stopped contracting after {} steps (last ratio {last:.3})",
                res.trace.steps.len()
            )))
        }
        PicardStatus::MaxIter => {
            rep.status = "max_iter".into();
            rep.warnings.push(format!("no convergence within {} iterations", cfg.tolerances.max_iter));
            None
        }
        PicardStatus::Converged => {
            rep.status = "converged".into();
            let fixed = solver
                .solve(&data.h, &data.g, Some(&nonlinear_flux(&res.u)), &index)
                .map_err(rt)?
                .u;
            let un = aniso_norm(&res.u, index.alpha, index.q).map_err(rt)?;
            let diff = fixed.sub(&res.u).map_err(rt)?;
            let r = if un > 0.0 && diff.max_abs() > 0.0 {
                aniso_norm(&diff, index.alpha, index.q).map_err(rt)? / un
            } else {
                0.0
            };
            rep.diagnostics.fixed_point_residual = Some(r);
            None
        }
    };
    match weak_ns_gaps(&res.u, &data.h, &data.g, &standard_family(&grid)) {
        Ok(gaps) => {
            let (g, r) = weak_summary(&gaps);
            rep.diagnostics.weak_gap = Some(g);
            rep.diagnostics.weak_gap_ratio = Some(r);
            rep.weak_gaps = gaps;
        }
        Err(e) => rep.warnings.push(format!("weak-form residual skipped: {e}")),
    }
    write_norms_csv(out, &rep.norms)?;
    snapshot(cfg, &res.u, out)?;
    Ok(Outcome { report: rep, failure })
}

#[derive(Serialize)]
struct RatioRow<'a> {
    target: &'a str,
    level: usize,
    n_tan: usize,
    n_vert: usize,
    n_time: usize,
    samples: usize,
    skipped: usize,
    max_ratio: f64,
    drift: f64,
}

/// Coarse copy of `grid` within the oracle limits.
fn oracle_grid(grid: &HalfSpaceGrid) -> Result<HalfSpaceGrid, CliError> {
    use halfspace::verify::{ORACLE_MAX_MODES, ORACLE_MAX_STEPS, ORACLE_MAX_VERTICAL};
    HalfSpaceGrid::new(
        2,
        grid.period(),
        grid.n_tan().min(ORACLE_MAX_MODES),
        grid.height(),
        grid.n_vert().min(ORACLE_MAX_VERTICAL),
        halfspace::core::Grading::Uniform,
        grid.t_final(),
        grid.n_time().min(ORACLE_MAX_STEPS),
    )
    .map_err(CliError::config)
}

pub fn verify_ops(cfg: &Config, out: &Path) -> Result<Outcome, CliError> {
    let grid = cfg.grid.build()?;
    let index = cfg.index.build(grid.n())?;
    let v = &cfg.verify;
    let scale = cfg.tolerance_scale();
    let mut rep = Report::new("verify-ops", cfg);
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for target in v.targets()? {
        let study = operator_ratio_study(target, &grid, &index, &v.band, cfg.seed, v.samples, v.refinements).map_err(rt)?;
        for (l, lev) in study.levels.iter().enumerate() {
            rows.push(RatioRow {
                target: target.name(),
                level: l,
                n_tan: lev.n_tan,
                n_vert: lev.n_vert,
                n_time: lev.n_time,
                samples: lev.ratios.len(),
                skipped: lev.skipped.len(),
                max_ratio: lev.max_ratio,
                drift: study.drift,
            });
        }
        if !(study.drift < cfg.tolerances.drift * scale) {
            failures.push(format!("{}: drift {:.3} exceeds {:.3}", target.name(), study.drift, cfg.tolerances.drift * scale));
        }
        rep.norms.insert(format!("{}_max_ratio", target.name()), study.levels.last().map_or(0.0, |l| l.max_ratio));
        rep.norms.insert(format!("{}_drift", target.name()), study.drift);
        rep.ratio_studies.push(study);
    }
    write_records(&out.join("ratios.csv"), &rows)?;
    if v.oracles {
        if grid.n() != 2 {
            rep.warnings.push("oracle comparisons are two-dimensional and were skipped".into());
        } else {
            let coarse = oracle_grid(&grid)?;
            let cmp = oracle_suite(&coarse, &v.band, cfg.seed, v.oracle_samples).map_err(rt)?;
            for c in &cmp {
                if !(c.rel_gap <= cfg.tolerances.oracle * scale) {
                    failures.push(format!("oracle {:?} seed {}: gap {:.3e}", c.kind, c.seed, c.rel_gap));
                }
            }
            let worst = cmp.iter().map(|c| c.rel_gap).fold(0.0, f64::max);
            rep.norms.insert("oracle_max_gap".into(), worst);
            write_records(&out.join("oracles.csv"), &cmp)?;
            rep.oracles = cmp;
        }
    }
    write_norms_csv(out, &rep.norms)?;
    Ok(finish(rep, failures))
}

fn finish(mut rep: Report, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Outcome::ok(rep)
    } else {
        rep.status = "verification_failed".into();
        rep.warnings.extend(failures.iter().cloned());
        Outcome {
            report: rep,
            failure: Some(CliError::Verification(failures.join("; "))),
        }
    }
}

fn norm_key(spec: &NormSpec) -> String {
    match spec {
        NormSpec::Lq { q } => format!("lq(q={q})"),
        NormSpec::Space { s, q } => format!("space(s={s},q={q})"),
        NormSpec::SpaceTime { s, q } => format!("space_time(s={s},q={q})"),
        NormSpec::Slice { s, q, k } => format!("slice(s={s},q={q},k={k})"),
    }
}

fn eval_norm(u: &VectorField, spec: &NormSpec) -> Result<f64, CliError> {
    match *spec {
        NormSpec::Lq { q } => {
            if !(q >= 1.0) {
                return Err(CliError::Config(format!("L^q needs q >= 1, got {q}")));
            }
            Ok(u.lq_norm(q))
        }
        NormSpec::Space { s, q } => lp_norm(u, s, q, None).map_err(CliError::config),
        NormSpec::SpaceTime { s, q } => besov_st_norm(u, s, q).map_err(CliError::config),
        NormSpec::Slice { s, q, k } => lp_norm_at(u, k, s, q, None).map_err(CliError::config),
    }
}

pub fn norms(cfg: &Config, out: &Path) -> Result<Outcome, CliError> {
    let path = cfg
        .norms
        .field
        .as_ref()
        .ok_or_else(|| CliError::Config("norms.field must name a snapshot".into()))?;
    let u = read_vector(path)?;
    let mut rep = Report::new("norms", cfg);
    let list = if cfg.norms.list.is_empty() {
        let idx: BesovIndex = cfg.index.build(u.grid().n())?;
        vec![NormSpec::Lq { q: idx.q }, NormSpec::SpaceTime { s: idx.alpha, q: idx.q }]
    } else {
        cfg.norms.list.clone()
    };
    for spec in &list {
        rep.norms.insert(norm_key(spec), eval_norm(&u, spec)?);
    }
    write_norms_csv(out, &rep.norms)?;
    Ok(Outcome::ok(rep))
}

pub fn scaling(cfg: &Config, out: &Path) -> Result<Outcome, CliError> {
    let grid = cfg.grid.build()?;
    let index = cfg.index.build(grid.n())?;
    if !index.is_critical() {
        return Err(CliError::Config("scaling needs the critical exponent (leave index.q unset)".into()));
    }
    let data = build_data(cfg, &grid)?;
    let r = scaling_invariance_check(&data.h, &data.g, &index, &cfg.scaling.lambdas).map_err(rt)?;
    let scale = cfg.tolerance_scale();
    let mut rep = Report::new("scaling", cfg);
    rep.norms.insert("data_total".into(), r.data_norm);
    rep.norms.insert("solution".into(), r.solution_norm);
    rep.norms.insert("max_data_deviation".into(), r.max_data_deviation());
    rep.norms.insert("max_solution_deviation".into(), r.max_solution_deviation());
    write_records(&out.join("scaling.csv"), &r.rows)?;
    write_norms_csv(out, &rep.norms)?;
    let mut failures = Vec::new();
    if !(r.max_data_deviation() <= cfg.tolerances.scaling_data * scale) {
        failures.push(format!("data norm deviation {:.3e}", r.max_data_deviation()));
    }
    if !(r.max_solution_deviation() <= cfg.tolerances.scaling_solution * scale) {
        failures.push(format!("solution norm deviation {:.3e}", r.max_solution_deviation()));
    }
    rep.scaling = Some(r);
    Ok(finish(rep, failures))
}
