use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    json, CommonArgs, FiguresArgs, Format, RunConfig, SampleArgs, SimulateArgs, SweepArgs,
    SweepParam, VerifyArgs, EXIT_OK, EXIT_VERIFY_FAILED,
};
use crate::elliptic::Modulus;
use crate::model::{PhysicalParams, ProfileCoeffs, SampleGrid, SystemKind, WaveParams};
use crate::simulate::{dt_convergence, run_propagation, SpectralConfig};
use crate::solutions::{
    cnoidal_params, evaluate_fields, evaluate_profiles, figure_set, semi_trivial_catalog,
    solitary_limit, validity, AsTravelingWave, RSign, SolitaryBranch, TravelingWave,
    FIGURE_MODULUS,
};
use crate::verify::{
    verification_window, verify_coefficients, verify_ode, verify_pde, verify_ratio, ResidualReport,
    Tolerances,
};

/// The JSON record written by `params` and read back by `verify --from`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub system: SystemKind,
    #[serde(rename = "B")]
    pub shift: f64,
    pub omega: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub m: f64,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub d: [f64; 3],
    pub h: [f64; 3],
    pub ratio_check: bool,
    pub phys: PhysicalParams,
}

impl ParamsRecord {
    fn new(tw: &TravelingWave, r: Option<f64>, tol: &Tolerances) -> Self {
        let p = tw.prof;
        let ratio_check = verify_ratio(tw, tol.ratio)
            .map(|rep| rep.passed)
            .unwrap_or(false);
        Self {
            system: tw.kind,
            shift: tw.wave.shift,
            omega: tw.wave.omega,
            sigma: tw.wave.sigma,
            lambda: tw.wave.lambda,
            m: tw.wave.m.value(),
            r,
            d: [p.d0, p.d1, p.d2],
            h: [p.h0, p.h1, p.h2],
            ratio_check,
            phys: tw.phys,
        }
    }

    pub fn traveling_wave(&self) -> crate::Result<TravelingWave> {
        self.phys.validate()?;
        Ok(TravelingWave {
            kind: self.system,
            phys: self.phys,
            wave: WaveParams {
                shift: self.shift,
                omega: self.omega,
                sigma: self.sigma,
                lambda: self.lambda,
                m: Modulus::new(self.m)?,
            },
            prof: ProfileCoeffs {
                d0: self.d[0],
                d1: self.d[1],
                d2: self.d[2],
                h0: self.h[0],
                h1: self.h[1],
                h2: self.h[2],
            },
        })
    }
}

/// A resolved solution with a label and its `R`, when it has one.
struct Resolved {
    label: String,
    wave: TravelingWave,
    r: Option<f64>,
}

fn resolve(cfg: &RunConfig) -> Result<Vec<Resolved>> {
    if let Some(family) = cfg.family {
        let sol = crate::solutions::semi_trivial(cfg.system, &cfg.phys, &cfg.free, family)?;
        return Ok(vec![Resolved {
            label: format!("{} family {family}", cfg.system),
            wave: sol.traveling_wave(),
            r: None,
        }]);
    }
    let mut out = Vec::new();
    let mut first_err = None;
    for &sign in &cfg.signs {
        let built = if cfg.m.value() >= 1.0 {
            solitary_limit(cfg.system, &cfg.phys, cfg.sigma, SolitaryBranch::from(sign))
                .map(|s| (s.traveling_wave(), sign.value()))
        } else {
            cnoidal_params(cfg.system, &cfg.phys, cfg.sigma, cfg.m, sign)
                .map(|s| (s.traveling_wave(), s.r))
        };
        match built {
            Ok((wave, r)) => out.push(Resolved {
                label: format!("{} R{sign}", cfg.system),
                wave,
                r: Some(r),
            }),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (out.is_empty(), first_err) {
        (true, Some(e)) => Err(e.into()),
        _ => Ok(out),
    }
}

fn resolve_one(cfg: &RunConfig) -> Result<Resolved> {
    let mut all = resolve(cfg)?;
    if all.len() != 1 {
        return Err(crate::Error::Config(
            "choose a single R branch with --sign + or --sign -".into(),
        )
        .into());
    }
    Ok(all.remove(0))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize + ?Sized>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = open_output(path)?;
    writeln!(out, "{}", json::to_string(value)?)?;
    out.flush()?;
    Ok(())
}

pub fn params(args: &CommonArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(args)?;
    let records: Vec<ParamsRecord> = resolve(&cfg)?
        .iter()
        .map(|r| ParamsRecord::new(&r.wave, r.r, &cfg.tolerances))
        .collect();
    if cfg.format == Format::Csv {
        let mut out = open_output(cfg.output.as_deref())?;
        writeln!(
            out,
            "system,B,omega,sigma,lambda,m,R,d0,d1,d2,h0,h1,h2,ratio_check"
        )?;
        for r in &records {
            let rr = r.r.map(|v| format!("{v:.16e}")).unwrap_or_default();
            write!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{rr}",
                r.system, r.shift, r.omega, r.sigma, r.lambda, r.m
            )?;
            for v in r.d.iter().chain(&r.h) {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out, ",{}", r.ratio_check)?;
        }
        out.flush()?;
    } else if records.len() == 1 {
        write_json(cfg.output.as_deref(), &records[0])?;
    } else {
        write_json(cfg.output.as_deref(), &records)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyOutput {
    solution: String,
    reports: Vec<ResidualReport>,
}

fn read_records(path: &Path) -> Result<Vec<ParamsRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| crate::Error::Config(format!("{}: {e}", path.display())))?;
    let records = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|r| vec![r])
    }
    .map_err(|e| crate::Error::Config(format!("{}: {e}", path.display())))?;
    Ok(records)
}

fn perturb(tw: &mut TravelingWave, spec: &str) -> Result<()> {
    let (key, eps) = spec
        .split_once('=')
        .ok_or_else(|| crate::Error::Config(format!("--perturb expects KEY=EPS, got {spec:?}")))?;
    let eps: f64 = eps
        .trim()
        .parse()
        .map_err(|_| crate::Error::Config(format!("--perturb value {eps:?}")))?;
    let slot = match key.trim() {
        "d0" => &mut tw.prof.d0,
        "d1" => &mut tw.prof.d1,
        "d2" => &mut tw.prof.d2,
        "h0" => &mut tw.prof.h0,
        "h1" => &mut tw.prof.h1,
        "h2" => &mut tw.prof.h2,
        "B" | "shift" => &mut tw.wave.shift,
        "omega" => &mut tw.wave.omega,
        "sigma" => &mut tw.wave.sigma,
        "lambda" => &mut tw.wave.lambda,
        other => return Err(crate::Error::Config(format!("cannot perturb {other:?}")).into()),
    };
    *slot += eps;
    Ok(())
}

/// Coefficient, ODE, ratio and optional PDE reports for one solution.
fn battery(
    tw: &TravelingWave,
    tol: &Tolerances,
    points: usize,
    pde_h: Option<f64>,
) -> Result<Vec<ResidualReport>> {
    let mut reports = vec![
        verify_coefficients(tw, tol.coefficients),
        verify_ode(tw, points, tol.ode)?,
    ];
    if tw.prof.d2 != 0.0 {
        reports.push(verify_ratio(tw, tol.ratio)?);
    }
    if let Some(h) = pde_h {
        let xi = verification_window(tw, 9);
        let t = 0.37;
        let x: Vec<f64> = xi.iter().map(|v| v + tw.wave.sigma * t).collect();
        let grid = SampleGrid::new(x, t, tw.wave.sigma)?;
        let rep = verify_pde(tw, &grid, h, tol)?;
        let mut residual = rep.residual.clone();
        residual.passed = rep.passed();
        reports.push(residual);
    }
    Ok(reports)
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let mut solutions: Vec<(String, TravelingWave)> = match &args.from {
        Some(path) => read_records(path)?
            .iter()
            .map(|r| Ok((format!("{} (from file)", r.system), r.traveling_wave()?)))
            .collect::<Result<_>>()?,
        None => resolve(&cfg)?
            .into_iter()
            .map(|r| (r.label, r.wave))
            .collect(),
    };
    for (_, tw) in &mut solutions {
        for spec in &args.perturb {
            perturb(tw, spec)?;
        }
    }
    let pde_h = args.pde.then_some(args.h);
    let mut outputs = Vec::new();
    let mut all_passed = true;
    for (label, tw) in &solutions {
        let reports = battery(tw, &cfg.tolerances, args.points, pde_h)?;
        all_passed &= reports.iter().all(|r| r.passed);
        outputs.push(VerifyOutput {
            solution: label.clone(),
            reports,
        });
    }
    write_json(cfg.output.as_deref(), &outputs)?;
    Ok(if all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// Writes `xi,f,g,u_re,u_im,v` over the verification window at time `t`.
pub fn write_samples<W: Write>(tw: &TravelingWave, n: usize, t: f64, mut out: W) -> Result<()> {
    writeln!(out, "xi,f,g,u_re,u_im,v")?;
    for xi in verification_window(tw, n) {
        let (f, g) = evaluate_profiles(tw, xi)?;
        let (u, v) = evaluate_fields(tw, xi + tw.wave.sigma * t, t)?;
        writeln!(
            out,
            "{xi:.16e},{f:.16e},{g:.16e},{:.16e},{:.16e},{v:.16e}",
            u.re, u.im
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn sample(args: &SampleArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    if args.n < 2 {
        return Err(crate::Error::Config(format!("--n must be at least 2, got {}", args.n)).into());
    }
    let sol = resolve_one(&cfg)?;
    write_samples(
        &sol.wave,
        args.n,
        args.t,
        open_output(cfg.output.as_deref())?,
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct FigureOutput {
    system: SystemKind,
    file: String,
    reports: Vec<ResidualReport>,
}

pub fn figures(args: &FiguresArgs) -> Result<u8> {
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let tol = Tolerances::from_env()?;
    let mut summary = Vec::new();
    for kind in SystemKind::ALL {
        let (phys, sigma) = figure_set(kind);
        let modulus = Modulus::new(FIGURE_MODULUS)?;
        let report = validity(kind, &phys, sigma);
        let sol = match cnoidal_params(kind, &phys, sigma, modulus, RSign::Plus) {
            Ok(sol) if report.valid => sol,
            Ok(_) => bail!("built-in {kind} figure set violates {}", report.constraint),
            Err(e) => bail!("built-in {kind} figure set is infeasible: {e}"),
        };
        let tw = sol.traveling_wave();
        let path = args.out_dir.join(format!("figure_{}.csv", kind.slug()));
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_samples(&tw, args.n.max(2), 0.0, BufWriter::new(file))?;
        let reports = battery(&tw, &tol, 257, None)?;
        if let Some(bad) = reports.iter().find(|r| !r.passed) {
            bail!(
                "built-in {kind} figure set fails the {} check: {:e}",
                bad.check,
                bad.max_abs
            );
        }
        summary.push(FigureOutput {
            system: kind,
            file: path.display().to_string(),
            reports,
        });
    }
    write_json(None, &summary)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CatalogOutput {
    system: SystemKind,
    family: usize,
    ok: bool,
    error: Option<String>,
    free: Option<std::collections::BTreeMap<String, f64>>,
    derived: Option<std::collections::BTreeMap<String, f64>>,
    wave: Option<WaveParams>,
    profile: Option<ProfileCoeffs>,
    ode: Option<ResidualReport>,
}

pub fn catalog(args: &CommonArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(args)?;
    let mut out = Vec::new();
    for entry in semi_trivial_catalog(cfg.system, &cfg.phys, &cfg.free) {
        let row = match entry.outcome {
            Ok(sol) => CatalogOutput {
                system: cfg.system,
                family: entry.family,
                ok: true,
                error: None,
                ode: Some(verify_ode(&sol, 257, cfg.tolerances.ode)?),
                free: Some(sol.free),
                derived: Some(sol.derived),
                wave: Some(sol.wave),
                profile: Some(sol.prof),
            },
            Err(e) => CatalogOutput {
                system: cfg.system,
                family: entry.family,
                ok: false,
                error: Some(e.to_string()),
                free: None,
                derived: None,
                wave: None,
                profile: None,
                ode: None,
            },
        };
        out.push(row);
    }
    write_json(cfg.output.as_deref(), &out)?;
    Ok(EXIT_OK)
}

pub fn simulate(args: &SimulateArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let sol = resolve_one(&cfg)?;
    let tw = sol.wave;
    let period = tw.period().ok_or_else(|| {
        crate::Error::Config("solitary profiles cannot be simulated on a periodic domain".into())
    })?;
    let t_end = args.t_end.unwrap_or(if tw.wave.sigma != 0.0 {
        period / tw.wave.sigma.abs()
    } else {
        1.0
    });
    let mut spec = SpectralConfig::for_solution(&tw, args.modes, args.dt, t_end)?;
    spec.dealias = !args.no_dealias;
    spec.outputs = args.outputs;
    let report = run_propagation(&tw, &spec)?;
    report.write_csv(open_output(cfg.output.as_deref())?)?;
    eprintln!(
        "{}: linf_error_u={:e} linf_error_v={:e} mass_drift={:e} steps={} integrating_factor={}",
        sol.label,
        report.linf_error_u,
        report.linf_error_v,
        report.conserved_drift,
        report.steps,
        report.integrating_factor
    );
    if args.dt_study {
        let conv = dt_convergence(&tw, &spec, 4)?;
        eprintln!(
            "dt-halving slope: {:.3} (differences {:?})",
            conv.slope(),
            conv.differences
        );
    }
    Ok(EXIT_OK)
}

#[derive(Debug)]
struct SweepRow {
    value: f64,
    sign: RSign,
    status: String,
    max_coeff: f64,
    max_ode: f64,
    ratio_err: f64,
    /// `None` when the branch is infeasible at this point.
    passed: Option<bool>,
}

pub fn sweep(args: &SweepArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    if args.steps < 2 {
        return Err(crate::Error::Config("--steps must be at least 2".into()).into());
    }
    let values: Vec<f64> = (0..args.steps)
        .map(|i| args.from + (args.to - args.from) * i as f64 / (args.steps - 1) as f64)
        .collect();
    let jobs: Vec<(f64, RSign)> = values
        .iter()
        .flat_map(|&v| RSign::BOTH.map(|s| (v, s)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(value, sign)| {
            let (sigma, m) = match args.param {
                SweepParam::Sigma => (value, cfg.m.value()),
                SweepParam::M => (cfg.sigma, value),
            };
            let built =
                Modulus::new(m).and_then(|m| cnoidal_params(cfg.system, &cfg.phys, sigma, m, sign));
            match built {
                Ok(sol) => {
                    let c = verify_coefficients(&sol, cfg.tolerances.coefficients);
                    let o = verify_ode(&sol, 257, cfg.tolerances.ode);
                    let r = verify_ratio(&sol, cfg.tolerances.ratio);
                    let (o_max, o_ok) = o
                        .map(|o| (o.max_abs, o.passed))
                        .unwrap_or((f64::NAN, false));
                    let (r_max, r_ok) = r
                        .map(|r| (r.max_abs, r.passed))
                        .unwrap_or((f64::NAN, false));
                    SweepRow {
                        value,
                        sign,
                        status: "ok".into(),
                        max_coeff: c.max_abs,
                        max_ode: o_max,
                        ratio_err: r_max,
                        passed: Some(c.passed && o_ok && r_ok),
                    }
                }
                Err(e) => SweepRow {
                    value,
                    sign,
                    status: format!("{e}").replace([',', '"', '\n'], " "),
                    max_coeff: f64::NAN,
                    max_ode: f64::NAN,
                    ratio_err: f64::NAN,
                    passed: None,
                },
            }
        })
        .collect();
    let mut out = open_output(cfg.output.as_deref())?;
    let param = match args.param {
        SweepParam::Sigma => "sigma",
        SweepParam::M => "m",
    };
    writeln!(
        out,
        "{param},sign,status,max_coeff,max_ode,ratio_err,passed"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e},{}",
            r.value,
            r.sign,
            r.status,
            r.max_coeff,
            r.max_ode,
            r.ratio_err,
            r.passed.map_or(String::new(), |p| p.to_string())
        )?;
    }
    out.flush()?;
    Ok(if rows.iter().any(|r| r.passed == Some(false)) {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    })
}
