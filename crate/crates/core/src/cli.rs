//! Run configurations: a flat, serializable description of one invocation,
//! its static validation, and the dispatcher that writes the artifacts.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::annulus::{annulus_radial_minimizer, scan_g, small_l_interior_bound, AnnulusRegime};
use crate::crosstie::{
    build_crosstie, crossing_from_rows, crosstie_energy_per_length, crosstie_sweep, write_sweep_csv,
};
use crate::disc::{
    build_deg_minus_one, deg_minus_one_field_eval, hedgehog_energy, hedgehog_field, hedgehog_solution,
    tangential_solution,
};
use crate::energy::{criticality_residuals, eval_E0_piecewise_with, eval_E_eps, QuadSpec};
use crate::error::{Error, Result};
use crate::field::{sample_analytic, Field2D};
use crate::gradflow::{
    contours, diagnostics, diagonal_jump_offsets, perturb, random_field, run_continuation, run_with_callback,
    write_contours_csv, BcKind, BoundaryCondition, FlowOptions, FlowState, RunSummary, Stage,
};
use crate::grid::Grid2D;
use crate::params::Params;
use crate::rect1d::{min_energy_1d, minimizer_profile, solve_M};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    DiscTangential,
    DiscHedgehog,
    DiscDegMinusOne,
    Annulus,
    #[serde(rename = "rect-1d")]
    Rect1d,
    Crosstie,
    CrosstieSweep,
    Gradflow,
    EnergyEval,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::DiscTangential => "disc-tangential",
            Command::DiscHedgehog => "disc-hedgehog",
            Command::DiscDegMinusOne => "disc-deg-minus-one",
            Command::Annulus => "annulus",
            Command::Rect1d => "rect-1d",
            Command::Crosstie => "crosstie",
            Command::CrosstieSweep => "crosstie-sweep",
            Command::Gradflow => "gradflow",
            Command::EnergyEval => "energy-eval",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Rect,
    Disc,
    Annulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcChoice {
    Strip,
    Tangential,
    Radial,
    DegMinusOne,
    Annulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitChoice {
    /// Unit vectors with i.i.d. uniform angles.
    Random,
    /// The boundary data extended inward (the 1D minimizer on rectangles).
    Extension,
    /// The cross-tie of the current L/H; the period T is taken from it.
    Crosstie,
}

/// Everything one run needs. Serialized as flat JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: Command,
    pub l: f64,
    pub eps: f64,
    pub h: f64,
    pub t: f64,
    pub r: f64,
    pub a: f64,
    /// Hedgehog branch, +1 or −1.
    pub sign: f64,
    pub nx: usize,
    pub ny: usize,
    pub domain: Domain,
    pub bc: BcChoice,
    pub init: InitChoice,
    /// Rotation amplitude (radians) of the seeded perturbation of the initial field.
    pub perturb: f64,
    pub dt: Option<f64>,
    pub dt_max_factor: f64,
    pub growth: f64,
    pub tol: f64,
    pub max_time: f64,
    /// Start of the ε ladder; none runs at ε directly.
    pub eps_start: Option<f64>,
    pub checkpoints: usize,
    pub div_levels: Vec<f64>,
    pub angle_levels: Vec<f64>,
    pub seed: u64,
    pub lmin: f64,
    pub lmax: f64,
    pub step: f64,
    pub panels: usize,
    pub order: usize,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            subcommand: Command::Rect1d,
            l: 1.0,
            eps: 0.01,
            h: 1.0,
            t: 1.0,
            r: 1.0,
            a: 0.0,
            sign: 1.0,
            nx: 64,
            ny: 128,
            domain: Domain::Rect,
            bc: BcChoice::Strip,
            init: InitChoice::Random,
            perturb: 0.0,
            dt: None,
            dt_max_factor: 16.0,
            growth: 1.2,
            tol: 1e-3,
            max_time: 10.0,
            eps_start: None,
            checkpoints: 4,
            div_levels: vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
            angle_levels: (-7..=7).map(|k| k as f64 * PI / 8.0).collect(),
            seed: 0,
            lmin: 0.5,
            lmax: 3.0,
            step: 0.01,
            panels: 64,
            order: 8,
            input: None,
            out: PathBuf::from("out"),
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

impl RunConfig {
    pub fn for_command(subcommand: Command) -> Self {
        RunConfig {
            subcommand,
            ..Default::default()
        }
    }

    pub fn params(&self) -> Params {
        Params {
            l: self.l,
            eps: self.eps,
            h: self.h,
            t: self.t,
            r: self.r,
            a: self.a,
        }
    }

    pub fn quad(&self) -> QuadSpec {
        QuadSpec {
            s_panels: self.panels,
            t_panels: self.panels,
            order: self.order,
            wall_panels: self.panels,
            wall_order: self.order,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Every violated range constraint. Never runs a solver.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = self.params().violations();
        if self.nx < 4 || self.ny < 4 {
            errs.push(format!("nx, ny >= 4 (got {}, {})", self.nx, self.ny));
        }
        if self.sign != 1.0 && self.sign != -1.0 {
            errs.push(format!("sign ∈ {{−1, 1}} (got {})", self.sign));
        }
        if !(self.tol > 0.0) {
            errs.push(format!("tol > 0 (got {})", self.tol));
        }
        if self.panels == 0 || !(1..=64).contains(&self.order) {
            errs.push(format!("panels >= 1 and order ∈ [1, 64] (got {}, {})", self.panels, self.order));
        }
        match self.subcommand {
            Command::CrosstieSweep => {
                if !(self.lmin > 0.0 && self.lmax > self.lmin) {
                    errs.push(format!("0 < lmin < lmax (got {}, {})", self.lmin, self.lmax));
                }
                if !(self.step > 0.0) {
                    errs.push(format!("step > 0 (got {})", self.step));
                }
            }
            Command::Gradflow => {
                let ok = matches!(
                    (self.domain, self.bc),
                    (Domain::Rect, BcChoice::Strip)
                        | (Domain::Disc, BcChoice::Tangential | BcChoice::Radial | BcChoice::DegMinusOne)
                        | (Domain::Annulus, BcChoice::Annulus)
                );
                if !ok {
                    errs.push(format!("bc {:?} does not apply to domain {:?}", self.bc, self.domain));
                }
                if self.domain == Domain::Annulus && !(self.r > 1.0) {
                    errs.push(format!("annulus needs R > 1 (got {})", self.r));
                }
                if self.init == InitChoice::Crosstie && self.domain != Domain::Rect {
                    errs.push("init crosstie needs domain rect".into());
                }
                if let Some(dt) = self.dt {
                    if !(dt > 0.0) {
                        errs.push(format!("dt > 0 (got {dt})"));
                    }
                }
                if let Some(e0) = self.eps_start {
                    if !(e0 >= self.eps) {
                        errs.push(format!("eps_start >= eps (got {e0} < {})", self.eps));
                    }
                }
                if !(self.max_time > 0.0) {
                    errs.push(format!("max_time > 0 (got {})", self.max_time));
                }
                if !(self.perturb >= 0.0) {
                    errs.push(format!("perturb >= 0 (got {})", self.perturb));
                }
                if !(self.dt_max_factor >= 1.0 && self.growth >= 1.0) {
                    errs.push(format!(
                        "dt_max_factor, growth >= 1 (got {}, {})",
                        self.dt_max_factor, self.growth
                    ));
                }
            }
            Command::EnergyEval => {
                if self.input.is_none() {
                    errs.push("energy-eval needs an input field".into());
                }
                if self.domain == Domain::Annulus && !(self.r > 1.0) {
                    errs.push(format!("annulus needs R > 1 (got {})", self.r));
                }
            }
            _ => {}
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Validate, create the output directory, write the resolved config
    /// and the subcommand's artifacts.
    pub fn dispatch(&self) -> Result<RunOutput> {
        self.validate().map_err(|e| Error::InvalidParameter(e.join("; ")))?;
        fs::create_dir_all(&self.out)?;
        let mut run = Run {
            cfg: self.clone(),
            files: Vec::new(),
        };
        let summary = match self.subcommand {
            Command::DiscTangential => run.disc_tangential(),
            Command::DiscHedgehog => run.disc_hedgehog(),
            Command::DiscDegMinusOne => run.disc_deg_minus_one(),
            Command::Annulus => run.annulus(),
            Command::Rect1d => run.rect_1d(),
            Command::Crosstie => run.crosstie(),
            Command::CrosstieSweep => run.crosstie_sweep(),
            Command::Gradflow => run.gradflow(),
            Command::EnergyEval => run.energy_eval(),
        }?;
        let cfg_path = self.out.join("config.json");
        fs::write(&cfg_path, run.cfg.to_json()?)?;
        run.files.push(cfg_path);
        run.write_json("summary.json", &summary)?;
        Ok(RunOutput {
            files: run.files,
            summary,
        })
    }
}

struct Run {
    /// The resolved configuration (may differ from the input, e.g. T for
    /// cross-tie seeded flows).
    cfg: RunConfig,
    files: Vec<PathBuf>,
}

impl Run {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.cfg.out.join(name);
        let f = BufWriter::new(File::create(&path)?);
        self.files.push(path);
        Ok(f)
    }

    fn write_json(&mut self, name: &str, v: &Value) -> Result<()> {
        let mut f = self.create(name)?;
        serde_json::to_writer_pretty(&mut f, v)?;
        writeln!(f)?;
        Ok(())
    }

    fn save_field(&mut self, name: &str, field: &Field2D) -> Result<()> {
        let f = self.create(name)?;
        field.write_csv(f)
    }

    fn disc_tangential(&mut self) -> Result<Value> {
        let c = &self.cfg;
        let sol = tangential_solution(c.r)?;
        let e = eval_E0_piecewise_with(&sol, &c.params(), c.quad())?;
        let grid = Grid2D::disc(c.r, c.nx, c.ny)?;
        let field = sample_analytic(&grid, |x, y| {
            let q = x.hypot(y);
            [-y / q, x / q]
        })?;
        self.save_field("field.csv", &field)?;
        Ok(json!({ "energy": e, "closed_form": 0.0 }))
    }

    fn disc_hedgehog(&mut self) -> Result<Value> {
        let c = &self.cfg;
        let sol = hedgehog_solution(c.sign)?;
        let e = eval_E0_piecewise_with(&sol, &c.params(), c.quad())?;
        let closed = hedgehog_energy(c.l);
        let grid = Grid2D::disc(1.0, c.nx, c.ny)?;
        let sign = c.sign;
        let field = sample_analytic(&grid, |x, y| hedgehog_field(sign, x, y))?;
        self.save_field("field.csv", &field)?;
        Ok(json!({
            "sign": sign,
            "closed_form": closed,
            "quadrature": e,
            "difference": (e.total - closed).abs(),
        }))
    }

    fn disc_deg_minus_one(&mut self) -> Result<Value> {
        let c = self.cfg.clone();
        let p = c.params();
        let sol = build_deg_minus_one(c.r, c.l)?;
        let pw = sol.as_piecewise();
        let e = eval_E0_piecewise_with(&pw, &p, c.quad())?;
        let crit = criticality_residuals(&pw, &p)?;
        for (name, fam) in [
            ("region1.csv", &sol.region1),
            ("region2.csv", &sol.region2),
            ("region3.csv", &sol.region3),
        ] {
            let f = self.create(name)?;
            fam.write_csv(c.nx, c.ny, f)?;
        }
        let grid = Grid2D::disc(c.r, c.nx, c.ny)?;
        let values = grid
            .nodes()
            .into_iter()
            .map(|q| {
                let k = if q[0].hypot(q[1]) >= c.r * (1.0 - 1e-12) { 1.0 - 1e-12 } else { 1.0 };
                deg_minus_one_field_eval(&sol, k * q[0], k * q[1]).map(|v| v.u)
            })
            .collect::<Result<Vec<_>>>()?;
        self.save_field("field.csv", &Field2D::new(grid, values)?)?;
        Ok(json!({ "s0": sol.s0, "energy": e, "criticality": crit }))
    }

    fn annulus(&mut self) -> Result<Value> {
        let c = self.cfg.clone();
        let sol = annulus_radial_minimizer(c.r, c.l)?;
        let scan = scan_g(c.r, c.l)?;
        if let Some(profile) = sol.profile() {
            let f = self.create("profile.csv")?;
            profile.write_csv(c.ny.max(2), f)?;
        }
        Ok(json!({
            "regime": sol.regime(),
            "interior": sol.regime() == AnnulusRegime::InteriorWall,
            "solution": sol,
            "roots_z": scan.roots,
            "small_l_bound": small_l_interior_bound(c.r),
            "boundary_wall_energy": 8.0 * PI / 3.0,
        }))
    }

    fn rect_1d(&mut self) -> Result<Value> {
        let c = self.cfg.clone();
        let m = solve_M(c.l, c.h, c.a)?;
        let energy = min_energy_1d(c.l / c.h, c.a)?;
        let profile = minimizer_profile(c.l, c.h, c.a)?;
        let mut f = self.create("profile.csv")?;
        writeln!(f, "y,u1,u2")?;
        for k in 0..=c.ny {
            let y = -c.h + 2.0 * c.h * k as f64 / c.ny as f64;
            let u = profile.u_at(y);
            writeln!(f, "{:.16e},{:.16e},{:.16e}", y, u[0], u[1])?;
        }
        Ok(json!({
            "l_over_h": c.l / c.h,
            "a": c.a,
            "M": m,
            "energy": energy,
            "jumps": profile.jumps(),
        }))
    }

    fn crosstie(&mut self) -> Result<Value> {
        let c = self.cfg.clone();
        let sol = build_crosstie(c.l, c.h)?;
        let checks = sol.checks(c.panels.max(8))?;
        let cell = sol.cell_energy(c.quad())?;
        let per_length = crosstie_energy_per_length(&sol, c.quad())?;
        let e1 = min_energy_1d(sol.l_over_h, 0.0)?;
        let f = self.create("quarter.csv")?;
        sol.write_quarter_csv(c.nx, c.ny, f)?;
        Ok(json!({
            "l_over_h": sol.l_over_h,
            "t_tilde": sol.t_tilde,
            "T": sol.t,
            "alpha": sol.alpha,
            "t1_star": sol.t1_star,
            "cell_energy": cell,
            "energy_per_length": per_length,
            "energy_1d": e1,
            "beats_1d": per_length < e1,
            "checks": checks,
        }))
    }

    fn crosstie_sweep(&mut self) -> Result<Value> {
        let c = self.cfg.clone();
        let rows = crosstie_sweep(c.lmin, c.lmax, c.step, c.quad())?;
        let f = self.create("sweep.csv")?;
        write_sweep_csv(&rows, f)?;
        let crossing = crossing_from_rows(&rows, 1e-6, c.quad())?;
        Ok(json!({ "rows": rows.len(), "crossing": crossing }))
    }

    fn flow_grid(&self) -> Result<Grid2D> {
        let c = &self.cfg;
        match c.domain {
            Domain::Rect => Grid2D::rectangle(c.t, c.h, c.nx, c.ny, true),
            Domain::Disc => Grid2D::disc(c.r, c.nx, c.ny),
            Domain::Annulus => Grid2D::polar(1.0, c.r, c.nx, c.ny),
        }
    }

    fn gradflow(&mut self) -> Result<Value> {
        let crosstie = if self.cfg.init == InitChoice::Crosstie {
            let sol = build_crosstie(self.cfg.l, self.cfg.h)?;
            self.cfg.t = sol.t;
            Some(sol)
        } else {
            None
        };
        let c = self.cfg.clone();
        let p = c.params();
        let grid = self.flow_grid()?;
        let kind = match c.bc {
            BcChoice::Strip => BcKind::RectStrip { a: c.a },
            BcChoice::Tangential => BcKind::DiscTangential,
            BcChoice::Radial => BcKind::DiscRadial,
            BcChoice::DegMinusOne => BcKind::DiscDegMinusOne,
            BcChoice::Annulus => BcKind::Annulus,
        };
        let bc = BoundaryCondition::new(kind, &grid)?;
        let mut init = match (c.init, &crosstie) {
            (InitChoice::Random, _) => random_field(&grid, c.seed),
            (InitChoice::Crosstie, Some(sol)) => sol.sample_on_grid(&grid)?,
            (InitChoice::Extension, _) if c.domain == Domain::Rect => {
                let prof = minimizer_profile(c.l, c.h, c.a)?;
                sample_analytic(&grid, |_, y| prof.u_at(y))?
            }
            _ => {
                let (r_in, r_out) = (grid.x0, grid.x1);
                sample_analytic(&grid, |x, y| {
                    let r = x.hypot(y);
                    let outer = c.domain != Domain::Annulus || r - r_in > r_out - r;
                    kind.value(x, y, outer)
                })?
            }
        };
        if c.perturb > 0.0 {
            perturb(&mut init, c.perturb, c.seed);
        }
        let opts = FlowOptions {
            dt: c.dt,
            dt_max_factor: c.dt_max_factor,
            growth: c.growth,
            ..Default::default()
        };
        self.save_field("initial.csv", &init)?;

        let (state, summary, stages): (FlowState, RunSummary, Vec<Stage>) = match c.eps_start {
            Some(e0) if e0 > c.eps => {
                let (state, stages) =
                    run_continuation(init, &bc, &p, &opts, e0, c.tol, c.max_time / c.eps)?;
                let summary = stages.last().expect("at least one stage").summary;
                (state, summary, stages)
            }
            _ => {
                let mut state = FlowState::new(init, bc, &p, &opts)?;
                let every = c.max_time / c.checkpoints.max(1) as f64;
                let mut next = every;
                let mut snaps: Vec<(usize, Field2D)> = Vec::new();
                let summary = run_with_callback(&mut state, &p, &opts, c.tol, c.max_time, |s| {
                    if c.checkpoints > 0 && s.time >= next {
                        snaps.push((snaps.len() + 1, s.field.clone()));
                        next += every;
                    }
                    Ok(())
                })?;
                for (k, f) in &snaps {
                    self.save_field(&format!("snapshot_{k:03}.csv"), f)?;
                }
                (state, summary, Vec::new())
            }
        };
        self.save_field("field.csv", &state.field)?;
        let f = self.create("trace.csv")?;
        state.write_trace_csv(f)?;
        let d = diagnostics(&state.field);
        let f = self.create("contours_div.csv")?;
        write_contours_csv(&contours(&state.field, &d.divergence, &c.div_levels), f)?;
        let f = self.create("contours_angle.csv")?;
        write_contours_csv(&contours(&state.field, &d.angle, &c.angle_levels), f)?;

        let e = state.energy();
        let mut out = json!({
            "energy": e,
            "run": summary,
            "stages": stages,
            "steps": state.steps,
            "rejected": state.rejected,
        });
        if c.domain == Domain::Rect {
            out["energy_per_length"] = json!(e.total / (2.0 * c.t));
            out["energy_1d"] = json!(min_energy_1d(c.l / c.h, c.a)?);
        }
        if c.bc == BcChoice::DegMinusOne {
            let js = diagonal_jump_offsets(&state.field, 0.1 * c.r, 0.9 * c.r);
            let worst = js.iter().map(|j| j.offset_cells()).fold(0.0, f64::max);
            out["diagonal_jump_max_offset_cells"] = json!(worst);
        }
        Ok(out)
    }

    fn energy_eval(&mut self) -> Result<Value> {
        let c = self.cfg.clone();
        let grid = self.flow_grid()?;
        let path = c.input.as_ref().expect("validated");
        let field = Field2D::read_csv(&grid, BufReader::new(File::open(path)?))?;
        let e = eval_E_eps(&field, &c.params())?;
        Ok(json!({ "energy": e.report(&c.params()), "nodes": grid.len() }))
    }
}
