use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use powergen::cubic::{THETA_MAX, THETA_MIN, Z_CRITICAL};
use powergen::curve::curve_check_hm;
use powergen::density::{density_report, limiting_density, limiting_density_offset};
use powergen::integral::{
    asymptotic_ratio, dominance_check, integrate_a_scaled, integrate_b_direct, integrate_b_watson, log_upper_bound_a,
    reconstruct_pm,
};
use powergen::poly::PolynomialZ;
use powergen::quad::QuadratureSpec;
use powergen::roots::pm_real_roots;
use powergen::series::{derivative_identity_residual, eval_recurrence, hm_coeffs, pm_coeffs};
use powergen::winding::hm_arg_sweep;

use crate::config::{Check, Params};
use crate::output::{csv_float, to_json, Table};

/// What a command produced: a JSON document, optionally a CSV rendering,
/// and whether every check passed and every solve converged.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub ok: bool,
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

pub fn coeffs(p: &Params) -> Result<Report> {
    let alpha = p.alpha()?;
    let m = p.m()?;
    let (a, b) = (p.poly('A')?, p.poly('B')?);
    if a.is_none() && b.is_none() {
        let c = pm_coeffs(alpha, m)?;
        let mut table = Table::new(vec!["k", "coeff"]);
        for (k, &x) in c.coeffs.iter().enumerate() {
            table.push(vec![k.to_string(), csv_float(x)]);
        }
        let json = json!({
            "command": "coeffs",
            "family": "P",
            "alpha": num(alpha),
            "m": m,
            "degree": c.degree(),
            "coeffs": nums(&c.coeffs),
            "leading_coeff_sign": c.leading_coeff_sign(),
            "end_sign": c.end_sign(),
            "ok": true,
        });
        return Ok(Report { json, table: Some(table), ok: true });
    }
    // only one of A, B given: the other defaults to the P family's choice
    let a = a.unwrap_or_else(PolynomialZ::z);
    let b = b.unwrap_or_else(PolynomialZ::one);
    let series = hm_coeffs(alpha, &a, &b, m)?;
    let h = series.term(m);
    let re: Vec<f64> = h.coeffs().iter().map(|c| c.re).collect();
    let im: Vec<f64> = h.coeffs().iter().map(|c| c.im).collect();
    let mut table = Table::new(vec!["k", "re", "im"]);
    for k in 0..re.len() {
        table.push(vec![k.to_string(), csv_float(re[k]), csv_float(im[k])]);
    }
    let json = json!({
        "command": "coeffs",
        "family": "H",
        "alpha": num(alpha),
        "m": m,
        "A": a.to_string(),
        "B": b.to_string(),
        "degree": h.degree(),
        "coeffs": nums(&re),
        "coeffs_im": nums(&im),
        "ok": true,
    });
    Ok(Report { json, table: Some(table), ok: true })
}

struct OrderRoots {
    m: usize,
    degree: usize,
    roots: Vec<f64>,
    thetas: Vec<f64>,
    residuals: Vec<f64>,
    all_below_critical: bool,
    brackets_verified: bool,
    complete: bool,
}

fn roots_for(alpha: f64, m: usize) -> Result<OrderRoots> {
    if m < 3 {
        // a nonzero constant
        pm_coeffs(alpha, m)?;
        return Ok(OrderRoots {
            m,
            degree: 0,
            roots: vec![],
            thetas: vec![],
            residuals: vec![],
            all_below_critical: true,
            brackets_verified: true,
            complete: true,
        });
    }
    let r = pm_real_roots(alpha, m)?;
    Ok(OrderRoots {
        m,
        degree: r.degree,
        complete: r.complete(),
        roots: r.roots,
        thetas: r.thetas,
        residuals: r.residuals,
        all_below_critical: r.all_below_critical,
        brackets_verified: r.brackets_verified,
    })
}

fn roots_over(alpha: f64, orders: &[usize]) -> Result<Vec<OrderRoots>> {
    orders.par_iter().map(|&m| roots_for(alpha, m)).collect()
}

pub fn roots(p: &Params) -> Result<Report> {
    let alpha = p.alpha()?;
    let found = roots_over(alpha, &p.orders(None)?)?;
    let mut table = Table::new(vec!["m", "index", "root", "theta", "residual"]);
    let mut results = Vec::new();
    for r in &found {
        for i in 0..r.roots.len() {
            table.push(vec![
                r.m.to_string(),
                i.to_string(),
                csv_float(r.roots[i]),
                csv_float(r.thetas[i]),
                csv_float(r.residuals[i]),
            ]);
        }
        results.push(json!({
            "m": r.m,
            "degree": r.degree,
            "count": r.roots.len(),
            "roots": nums(&r.roots),
            "thetas": nums(&r.thetas),
            "residuals": nums(&r.residuals),
            "all_below_critical": r.all_below_critical,
            "brackets_verified": r.brackets_verified,
            "complete": r.complete,
        }));
    }
    let ok = found.iter().all(|r| r.complete);
    let json = json!({
        "command": "roots",
        "alpha": num(alpha),
        "all_real_below_critical": ok,
        "results": results,
        "ok": ok,
    });
    Ok(Report { json, table: Some(table), ok })
}

pub fn density(p: &Params) -> Result<Report> {
    let alpha = p.alpha()?;
    let m = p.m()?;
    let r = density_report(alpha, m, p.grid.unwrap_or(64))?;
    let mut table = Table::new(vec!["z", "density", "empirical_cdf", "model_cdf"]);
    for j in 0..r.z_grid.len() {
        table.push(vec![
            csv_float(r.z_grid[j]),
            csv_float(r.density[j]),
            csv_float(r.empirical_cdf[j]),
            csv_float(r.model_cdf[j]),
        ]);
    }
    let ok = r.roots_complete;
    let mut json = object(serde_json::to_value(&r)?);
    json.insert("command".into(), json!("density"));
    json.insert("ok".into(), json!(ok));
    Ok(Report { json: Value::Object(json), table: Some(table), ok })
}

pub fn curve(p: &Params) -> Result<Report> {
    let alpha = p.alpha()?;
    let m = p.m()?;
    let (Some(a), Some(b)) = (p.poly('A')?, p.poly('B')?) else {
        bail!("curve needs both --A and --B");
    };
    let r = curve_check_hm(alpha, &a, &b, m)?;
    let mut table = Table::new(vec!["kind", "z_re", "z_im", "w_re", "w_im", "on_curve"]);
    for pt in &r.points {
        table.push(vec![
            "mapped".into(),
            csv_float(pt.z.re),
            csv_float(pt.z.im),
            csv_float(pt.w.re),
            csv_float(pt.w.im),
            pt.on_curve.to_string(),
        ]);
    }
    for (kind, zs) in [("a_vanishing", &r.excluded_roots), ("b_zero", &r.b_zero_roots)] {
        for z in zs {
            table.push(vec![kind.into(), csv_float(z.re), csv_float(z.im), String::new(), String::new(), String::new()]);
        }
    }
    let satisfied = r.satisfied();
    let ok = satisfied && r.roots_converged;
    let mut json = object(serde_json::to_value(&r)?);
    json.insert("command".into(), json!("curve"));
    json.insert("A".into(), json!(a.to_string()));
    json.insert("B".into(), json!(b.to_string()));
    json.insert("satisfied".into(), json!(satisfied));
    json.insert("ok".into(), json!(ok));
    Ok(Report { json: Value::Object(json), table: Some(table), ok })
}

/// `n` equally spaced angles on `[2π/3 + 0.01, π - 0.01]`.
fn interior_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = (THETA_MIN + 0.01, THETA_MAX - 0.01);
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

struct CheckOutcome {
    pass: bool,
    measured: f64,
    tolerance: f64,
    points: Vec<Value>,
}

fn check_integral_rep(p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<CheckOutcome> {
    let zs = p.zs(&[-0.5, -2.0, -10.0])?;
    let rows: Vec<(f64, f64, bool, Value)> = zs
        .par_iter()
        .map(|&z| {
            let r = reconstruct_pm(z, alpha, m, spec)?;
            let reference = eval_recurrence(alpha, m, z);
            // compared in logs so that large m cannot overflow
            let err = if r.scaled.sign == reference.sign {
                (r.scaled.log_magnitude - reference.log_magnitude).exp_m1().abs()
            } else {
                f64::INFINITY
            };
            let point = json!({
                "z": num(z),
                "reconstructed": num(r.value),
                "reference": num(reference.value()),
                "rel_err": num(err),
                "converged": r.converged,
            });
            Ok((z, err, r.converged, point))
        })
        .collect::<Result<_>>()?;
    let measured = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let converged = rows.iter().all(|r| r.2);
    Ok(CheckOutcome {
        pass: measured <= 1e-6 && converged,
        measured,
        tolerance: 1e-6,
        points: rows.into_iter().map(|r| r.3).collect(),
    })
}

fn check_watson(p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<CheckOutcome> {
    let thetas = p.thetas(vec![13.0 * PI / 18.0, 3.0 * PI / 4.0, 5.0 * PI / 6.0]);
    let rows: Vec<(f64, bool, Value)> = thetas
        .par_iter()
        .map(|&theta| {
            let d = integrate_b_direct(theta, alpha, m, spec)?;
            let w = integrate_b_watson(theta, alpha, m, spec)?;
            let err = (d.value - w.value).norm() / w.value.norm();
            let converged = d.converged && w.converged;
            Ok((err, converged, json!({"theta": num(theta), "rel_diff": num(err), "converged": converged})))
        })
        .collect::<Result<_>>()?;
    let measured = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    Ok(CheckOutcome {
        pass: measured <= 1e-6 && rows.iter().all(|r| r.1),
        measured,
        tolerance: 1e-6,
        points: rows.into_iter().map(|r| r.2).collect(),
    })
}

fn check_upper_bound(p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<CheckOutcome> {
    let thetas = p.thetas(interior_grid(50));
    let rows: Vec<(f64, bool, Value)> = thetas
        .par_iter()
        .map(|&theta| {
            let a = integrate_a_scaled(theta, alpha, m, spec)?;
            let log_a = a.log_value().re;
            let log_bound = log_upper_bound_a(theta, alpha, m)?;
            let ratio = (log_a - log_bound).exp();
            let ok = log_a < log_bound && a.converged();
            Ok((ratio, ok, json!({"theta": num(theta), "ratio": num(ratio), "holds": ok})))
        })
        .collect::<Result<_>>()?;
    let measured = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    Ok(CheckOutcome {
        pass: rows.iter().all(|r| r.1) && measured < 1.0,
        measured,
        tolerance: 1.0,
        points: rows.into_iter().map(|r| r.2).collect(),
    })
}

fn check_asymptotic(p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<CheckOutcome> {
    let thetas = p.thetas(vec![13.0 * PI / 18.0, 5.0 * PI / 6.0]);
    let rows: Vec<(f64, bool, Value)> = thetas
        .par_iter()
        .map(|&theta| {
            let r = asymptotic_ratio(theta, alpha, m, spec)?;
            let gap = (r.ratio - 1.0).abs();
            Ok((gap, r.converged, json!({"theta": num(theta), "ratio": num(r.ratio), "converged": r.converged})))
        })
        .collect::<Result<_>>()?;
    let measured = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    Ok(CheckOutcome {
        pass: measured <= 0.05 && rows.iter().all(|r| r.1),
        measured,
        tolerance: 0.05,
        points: rows.into_iter().map(|r| r.2).collect(),
    })
}

fn check_dominance(p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<CheckOutcome> {
    let thetas = p.thetas(interior_grid(50));
    let rows: Vec<(f64, bool, Value)> = thetas
        .par_iter()
        .map(|&theta| {
            let d = dominance_check(theta, alpha, m, spec)?;
            let gap = d.log_abs_b - d.log_a;
            let ok = d.holds && d.converged;
            Ok((gap, ok, json!({"theta": num(theta), "log_a": num(d.log_a), "log_abs_b": num(d.log_abs_b), "holds": ok})))
        })
        .collect::<Result<_>>()?;
    // smallest ln(|∫B| / ∫A); dominance needs it positive
    let measured = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    Ok(CheckOutcome {
        pass: rows.iter().all(|r| r.1),
        measured,
        tolerance: 0.0,
        points: rows.into_iter().map(|r| r.2).collect(),
    })
}

fn check_winding(p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<CheckOutcome> {
    let sweep = hm_arg_sweep(alpha, m, p.grid.unwrap_or(200), spec)?;
    let brackets = sweep.brackets();
    let roots = pm_real_roots(alpha, m)?;
    let points: Vec<Value> = brackets
        .iter()
        .map(|b| {
            let inside = roots.thetas.iter().filter(|&&t| t > b.lo && t < b.hi).count();
            json!({"theta_lo": num(b.lo), "theta_hi": num(b.hi), "roots_inside": inside})
        })
        .collect();
    let each_one = points.iter().all(|v| v["roots_inside"] == 1);
    Ok(CheckOutcome {
        pass: brackets.len() >= m / 3 && each_one && sweep.converged && !sweep.refinement_failed,
        measured: brackets.len() as f64,
        tolerance: (m / 3) as f64,
        points,
    })
}

fn check_derivative(alpha: f64, m: usize) -> Result<CheckOutcome> {
    let residual = derivative_identity_residual(alpha, m)?;
    Ok(CheckOutcome { pass: residual <= 1e-12, measured: residual, tolerance: 1e-12, points: vec![] })
}

fn run_check(check: Check, p: &Params, alpha: f64, m: usize, spec: &QuadratureSpec) -> Value {
    let result = match check {
        Check::IntegralRep => check_integral_rep(p, alpha, m, spec),
        Check::Watson => check_watson(p, alpha, m, spec),
        Check::UpperBound => check_upper_bound(p, alpha, m, spec),
        Check::Asymptotic => check_asymptotic(p, alpha, m, spec),
        Check::Dominance => check_dominance(p, alpha, m, spec),
        Check::Winding => check_winding(p, alpha, m, spec),
        Check::Derivative => check_derivative(alpha, m),
        Check::All => unreachable!("expanded by Params::checks"),
    };
    match result {
        Ok(o) => json!({
            "check": check.name(),
            "pass": o.pass,
            "measured": num(o.measured),
            "tolerance": num(o.tolerance),
            "points": o.points,
        }),
        Err(e) => json!({"check": check.name(), "pass": false, "error": format!("{e:#}")}),
    }
}

pub fn verify(p: &Params) -> Result<Report> {
    let alpha = p.alpha()?;
    let m = p.m()?;
    let spec = p.quadrature()?;
    let checks: Vec<Value> = p.checks()?.into_iter().map(|c| run_check(c, p, alpha, m, &spec)).collect();
    let ok = checks.iter().all(|c| c["pass"] == true);
    let mut table = Table::new(vec!["check", "pass", "measured", "tolerance", "error"]);
    for c in &checks {
        let field = |k: &str| c[k].as_f64().map(csv_float).unwrap_or_default();
        table.push(vec![
            c["check"].as_str().unwrap_or_default().into(),
            c["pass"].to_string(),
            field("measured"),
            field("tolerance"),
            c["error"].as_str().unwrap_or_default().into(),
        ]);
    }
    let json = json!({"command": "verify", "alpha": num(alpha), "m": m, "checks": checks, "ok": ok});
    Ok(Report { json, table: Some(table), ok })
}

/// Sample abscissae for the density figure: `-4, -3.99, ..., -0.15`, then
/// `-4/27 - 10^-k` for `k = 3..9` approaching the edge of the support.
fn density_samples() -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for j in 0..=385 {
        let z = -f64::from(400 - j) / 100.0;
        out.push((z, limiting_density(z)?));
    }
    for k in 3..=9 {
        let s = 10f64.powi(-k);
        out.push((Z_CRITICAL - s, limiting_density_offset(s)?));
    }
    Ok(out)
}

pub fn figures(p: &Params) -> Result<Report> {
    let alpha = p.alpha.unwrap_or(7.5);
    let orders = p.orders(Some((1, 50)))?;
    let dir = p.output.clone().unwrap_or_else(|| ".".into());
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let found = roots_over(alpha, &orders)?;
    let mut fig1 = Table::new(vec!["m", "root"]);
    let mut counts = Vec::new();
    for r in &found {
        for &z in &r.roots {
            fig1.push(vec![r.m.to_string(), csv_float(z)]);
        }
        counts.push(json!({"m": r.m, "count": r.roots.len(), "complete": r.complete}));
    }
    let fig1_ok = found.iter().all(|r| r.complete);

    let samples = density_samples()?;
    let mut fig2 = Table::new(vec!["kind", "z", "density"]);
    for &(z, d) in &samples {
        fig2.push(vec!["sample".into(), csv_float(z), csv_float(d)]);
    }
    fig2.push(vec!["marker".into(), csv_float(Z_CRITICAL), String::new()]);

    let write = |name: &str, t: &Table| -> Result<String> {
        let path = Path::new(&dir).join(name);
        fs::write(&path, t.to_csv()?).with_context(|| format!("writing {}", path.display()))?;
        Ok(path.display().to_string())
    };
    let json = json!({
        "command": "figures",
        "alpha": num(alpha),
        "fig1": {"path": write("fig1.csv", &fig1)?, "rows": fig1.rows.len(), "counts": counts},
        "fig2": {"path": write("fig2.csv", &fig2)?, "rows": fig2.rows.len(), "marker": num(Z_CRITICAL)},
        "ok": fig1_ok,
    });
    Ok(Report { json, table: None, ok: fig1_ok })
}

pub fn render(report: &Report, csv: bool) -> Result<String> {
    match (&report.table, csv) {
        (Some(t), true) => t.to_csv(),
        _ => Ok(to_json(&report.json)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_samples_hit_minus_two_and_blow_up() {
        let s = density_samples().unwrap();
        let at_two = s.iter().find(|(z, _)| *z == -2.0).unwrap().1;
        assert!((at_two / (3.0 / (20.0 * PI)) - 1.0).abs() < 1e-10);
        let tail = &s[s.len() - 10..];
        assert!(tail.windows(2).all(|w| w[1].1 > w[0].1 && w[1].0 > w[0].0));
    }

    #[test]
    fn interior_grid_ends() {
        let g = interior_grid(50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], THETA_MIN + 0.01);
        assert!((g[49] - (THETA_MAX - 0.01)).abs() < 1e-15);
    }

}
