use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use uncertain_extent::deterministic::{
    algorithm2_kvariate, algorithm2_quantization, brute_force_cdf, brute_force_kcdf, build_afn_samples, perturb,
    validate_general_position, AfnOptions, SampleFamily, MASS_TOL,
};
use uncertain_extent::experiment::{run_cylinder, CylinderConfig};
use uncertain_extent::kernel::build_eps_alpha_kernel;
use uncertain_extent::model::parse_model;
use uncertain_extent::quantization::{build_kvariate, build_univariate, reduce_univariate};
use uncertain_extent::sip::{build_sip, center_point, grid_and_isolines, DEFAULT_LEVELS};
use uncertain_extent::{Aabb, KernelParams, Point, QuantizationParams, SipParams, Statistic, UncertainPointSet};

use crate::{CenterArgs, Common, CylinderArgs, ExactArgs, KernelArgs, QuantizeArgs, SipArgs};

/// Tolerance for the oracle comparison of `exact`.
const ORACLE_TOL: f64 = 1e-9;

fn load_model(path: &Path) -> Result<UncertainPointSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_model(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header(command: &str, c: &Common, model: &UncertainPointSet, m: usize) -> Vec<(&'static str, String)> {
    vec![
        ("command", command.to_string()),
        ("epsilon", c.eps.to_string()),
        ("delta", c.delta.to_string()),
        ("m", m.to_string()),
        ("seed", c.seed.to_string()),
        ("model", model.fingerprint()),
    ]
}

pub fn quantize(a: QuantizeArgs) -> Result<()> {
    let c = &a.common;
    let model = load_model(&c.model)?;
    let mut params = QuantizationParams::new(c.eps, c.delta)?;
    params.trials = c.trials;
    if let Some(sc) = c.sample_constant {
        params.sample_constant = sc;
    }
    params.reduce = !a.no_reduce;
    let k = a.stat.arity(model.dim());
    let m = if k == 1 { params.univariate_trials() } else { params.kvariate_trials(k) };
    let mut h = header("quantize", c, &model, m);
    h.push(("statistic", a.stat.to_string()));
    let csv = if k == 1 {
        build_univariate(&model, &a.stat, &params, c.seed)?.to_csv(&h)
    } else {
        build_kvariate(&model, &a.stat, &params, c.seed)?.to_csv(&h)
    };
    emit(a.out.as_deref(), &csv)
}

pub fn kernel(a: KernelArgs) -> Result<()> {
    let c = &a.common;
    let model = load_model(&c.model)?;
    let mut params = KernelParams::new(c.eps, a.alpha, c.delta)?;
    params.trials = c.trials;
    if let Some(sc) = c.sample_constant {
        params.sample_constant = sc;
    }
    params.cap = a.cap;
    let kernels = build_eps_alpha_kernel(&model, &params, c.seed)?;
    let mut h = header("kernel", c, &model, kernels.len());
    h.push(("alpha", kernels.alpha().to_string()));
    if let Some(cap) = a.cap {
        h.push(("cap", cap.to_string()));
    }
    h.push(("kernel_points", kernels.total_points().to_string()));
    let csv = match (&a.direction, &a.stat) {
        (Some(u), _) => {
            h.push(("statistic", Statistic::DirectionalWidth(u.clone()).to_string()));
            let q = kernels.width_quantization(u)?;
            reduce_univariate(q.values(), c.eps)?.to_csv(&h)
        }
        (None, Some(stat)) => {
            h.push(("statistic", stat.to_string()));
            let q = kernels.function_quantization(stat)?;
            if q.k() == 1 {
                reduce_univariate(q.marginal(0)?.values(), c.eps)?.to_csv(&h)
            } else {
                q.to_csv(&h)
            }
        }
        (None, None) => unreachable!("clap requires a query"),
    };
    if let Some(p) = &a.json {
        fs::write(p, kernels.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    emit(a.out.as_deref(), &csv)
}

pub fn sip(a: SipArgs) -> Result<()> {
    let c = &a.common;
    let model = load_model(&c.model)?;
    if model.dim() != 2 {
        bail!("sip grids need a planar model, got dimension {}", model.dim());
    }
    let mut params = SipParams::new(c.eps, c.delta)?;
    params.trials = c.trials;
    if let Some(sc) = c.sample_constant {
        params.sample_constant = sc;
    }
    let shapes = build_sip(&model, a.family, &params, c.seed)?;
    let bbox = match a.bbox {
        Some([x0, y0, x1, y1]) => Aabb {
            lo: Point::from([x0, y0]),
            hi: Point::from([x1, y1]),
        },
        None => {
            let b = model.bulk_bounds(3.0);
            let w = b.widths();
            let pad = 0.1 * w[0].max(w[1]).max(1e-9);
            Aabb {
                lo: Point::from([b.lo[0] - pad, b.lo[1] - pad]),
                hi: Point::from([b.hi[0] + pad, b.hi[1] + pad]),
            }
        }
    };
    let levels = a.levels.clone().unwrap_or_else(|| DEFAULT_LEVELS.to_vec());
    let iso = grid_and_isolines(&shapes, &bbox, a.resolution, &levels)?;
    let mut h = header("sip", c, &model, shapes.len());
    h.push(("family", a.family.to_string()));
    h.push(("resolution", a.resolution.to_string()));
    if a.grid_out.is_none() && a.svg_out.is_none() {
        bail!("nothing to write: pass --grid-out and/or --svg-out");
    }
    if let Some(p) = &a.grid_out {
        fs::write(p, iso.grid.to_csv(&h)).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &a.svg_out {
        fs::write(p, iso.to_svg(&h)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

pub fn exact(a: ExactArgs) -> Result<()> {
    let stat = &a.family;
    let mut h: Vec<(&str, String)> = vec![("command", "exact".into()), ("statistic", stat.to_string())];
    let family = if let Some(path) = &a.samples {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let family = SampleFamily::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
        if validate_general_position(&family, stat).is_ok() {
            family
        } else {
            eprintln!("note: samples are not in general position; perturbing");
            let moved = perturb(&family);
            validate_general_position(&moved, stat).into_result()?;
            moved
        }
    } else {
        let path = a.model.as_ref().expect("clap requires an input");
        let model = load_model(path)?;
        let eps = a.eps.expect("clap requires --eps with --model");
        h.push(("epsilon", eps.to_string()));
        h.push(("seed", a.seed.to_string()));
        h.push(("model", model.fingerprint()));
        let options = AfnOptions {
            truncate_sigma: a.truncate_sigma,
            seed: a.seed,
        };
        build_afn_samples(&model, stat, eps, &options)?
    };
    h.push(("points", family.total_points().to_string()));
    if let Some(p) = &a.samples_out {
        fs::write(p, family.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    let (csv, matched) = if matches!(stat, Statistic::AabbWidths) && family.dim() > 1 {
        let cdf = algorithm2_kvariate(&family, stat)?;
        let matched = if a.oracle {
            Some(cdf.matches(&brute_force_kcdf(&family, stat)?, ORACLE_TOL))
        } else {
            None
        };
        (cdf.to_csv(&h), matched)
    } else {
        let cdf = algorithm2_quantization(&family, stat)?;
        let matched = if a.oracle {
            Some(cdf.matches(&brute_force_cdf(&family, stat)?, ORACLE_TOL))
        } else {
            None
        };
        (cdf.to_csv(&h), matched)
    };
    emit(a.out.as_deref(), &csv)?;
    match matched {
        Some(true) => println!("oracle match"),
        Some(false) => bail!("oracle mismatch beyond {ORACLE_TOL} (mass tolerance {MASS_TOL})"),
        None => {}
    }
    Ok(())
}

pub fn experiment_cylinder(a: CylinderArgs) -> Result<()> {
    let config = CylinderConfig {
        n: a.n,
        sigma: a.sigma,
        epsilon: a.eps,
        trials: a.trials,
        cap: a.cap,
        seed: a.seed,
        ..CylinderConfig::default()
    };
    let r = run_cylinder(&config)?;
    fs::write(&a.out_full, r.to_csv(false)).with_context(|| format!("writing {}", a.out_full.display()))?;
    fs::write(&a.out_kernel, r.to_csv(true)).with_context(|| format!("writing {}", a.out_kernel.display()))?;
    println!("kernel points: {} (alpha {:.4})", r.total_kernel_points, r.alpha);
    Ok(())
}

pub fn center(a: CenterArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let c = center_point(&model, a.seed)?;
    let coords: Vec<String> = c.point.coords().iter().map(|v| v.to_string()).collect();
    println!("{}", coords.join(","));
    Ok(())
}
