//! One function per subcommand. Each validates its parameters first and
//! returns `None` on a dry run.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use riemann_core::diophantine::{
    cf_expand, convergents, farey_enumerate, gamma_limsup, make_rational, CFExpansion, CfInput,
};
use riemann_core::geometry::{
    corner_check, direction_cluster, lemma_constant_estimate, spiral_profile, DirectionProfile, GeometryConfig,
    HSchedule, Side,
};
use riemann_core::measure::{
    box_count_seeded, build_cover, cone_tangent_ratio, content_partial_sum, content_totient_sum, diameter,
    spectrum_bound, verify_cover, ConeScan, Polyline, SumVerdict,
};
use riemann_core::series::TimePoint;
use riemann_core::{ComplexPoint, Evaluator};
use serde_json::{json, Value};

use crate::config::*;
use crate::error::CliError;
use crate::output::{Artifact, Table};
use crate::{fft, row, sampling, suite};

pub type Outcome = Result<Option<Artifact>, CliError>;

pub fn cx(z: ComplexPoint) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Dispatches a configuration (replay is resolved by the caller).
pub fn execute(cfg: &RunConfig, dry: bool) -> Outcome {
    match &cfg.command {
        Command::Eval(a) => eval(a, dry),
        Command::Trace(a) => trace(a, dry),
        Command::Cf(a) => cf(a, dry),
        Command::Farey(a) => farey(a, dry),
        Command::Corner(a) => corner(a, dry),
        Command::Spiral(a) => spiral(a, dry),
        Command::Cluster(a) => cluster(a, dry),
        Command::LemmaC(a) => lemma(a, dry),
        Command::Cover(a) => cover(a, cfg.seed, dry),
        Command::ContentSum(a) => content(a, dry),
        Command::Boxdim(a) => boxdim(a, cfg.seed, dry),
        Command::ConeScan(a) => cone(a, dry),
        Command::Report(a) => report(a, cfg.seed, dry),
        Command::Replay(_) => Err(usage("a replayed configuration cannot itself be a replay")),
    }
}

fn time_point(real: &RealSpec) -> Result<TimePoint, CliError> {
    Ok(match real {
        RealSpec::Exact(r) => {
            let (p, q) = r
                .to_small()
                .ok_or_else(|| usage("invalid --x: numerator and denominator must fit in 64 bits"))?;
            TimePoint::rational(p, q)?
        }
        other => TimePoint::from_x(other.to_f64()),
    })
}

fn eval(a: &EvalArgs, dry: bool) -> Outcome {
    let ev = Evaluator::default();
    let x = a.x.as_deref().map(|s| parse_real("x", s)).transpose()?;
    let arg = match (a.function, a.t, &x) {
        (Function::Phi, Some(t), None) => TimePoint::new(t),
        (Function::Phi, None, Some(x)) => time_point(x)?,
        (Function::PhiD, Some(t), None) => TimePoint::new(t),
        (Function::R, None, Some(x)) => TimePoint::from_x(x.to_f64()),
        (Function::R, ..) => return Err(usage("R takes --x")),
        _ => return Err(usage("give exactly one of --t and --x (φ_D takes --t)")),
    };
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("invalid --tol: must be positive"));
    }
    if dry {
        return Ok(None);
    }
    let (value, n, tail) = match a.function {
        Function::Phi => {
            let r = ev.phi(arg, a.tol)?;
            (r.value, r.truncation_n, r.tail_bound)
        }
        Function::PhiD => {
            let r = ev.phi_d(arg.t(), a.tol)?;
            (r.value, r.truncation_n, r.tail_bound)
        }
        Function::R => {
            let r = ev.r(x.as_ref().map_or(0.0, RealSpec::to_f64), a.tol)?;
            (ComplexPoint::new(r.value, 0.0), r.truncation_n, r.tail_bound)
        }
    };
    let mut t = Table::new(&["re", "im", "truncation_n", "tail_bound"]);
    t.push(row![value.re, value.im, n, tail]);
    let result = json!({"re": value.re, "im": value.im, "truncation_n": n, "tail_bound": tail});
    Artifact::new(result, t).map(Some)
}

fn trace(a: &TraceArgs, dry: bool) -> Outcome {
    if !(0.0 <= a.x_lo && a.x_lo < a.x_hi && a.x_hi <= 1.0) {
        return Err(usage("need 0 <= --x-lo < --x-hi <= 1"));
    }
    if a.n < 2 {
        return Err(usage("invalid --n: at least 2 samples"));
    }
    if !(a.tol > 0.0) {
        return Err(usage("invalid --tol: must be positive"));
    }
    if dry {
        return Ok(None);
    }
    let poly = match a.method {
        TraceMethod::Auto => fft::trace(a.x_lo, a.x_hi, a.n, a.tol)?,
        TraceMethod::Direct => fft::trace_direct(a.x_lo, a.x_hi, a.n, a.tol)?,
    };
    let s = poly.samples();
    let diff = s[s.len() - 1].1 - s[0].1;
    let mut t = Table::new(&["x", "re", "im"]);
    for (x, z) in s {
        t.push(row![*x, z.re, z.im]);
    }
    let result = json!({
        "n": poly.len(),
        "certified_tol": poly.certified_tol(),
        "endpoint_difference": cx(diff),
        "samples": s.iter().map(|(x, z)| json!({"x": x, "re": z.re, "im": z.im})).collect::<Vec<_>>(),
    });
    Artifact::new(result, t).map(Some)
}

fn expansion(real: RealSpec, budget: f64, depth: usize) -> Result<CFExpansion, CliError> {
    Ok(match real {
        RealSpec::Exact(r) => cf_expand(&CfInput::Exact(r), depth.max(1))?,
        RealSpec::Decimal(x) => cf_expand(&CfInput::Floating { x, budget }, depth.max(1))?,
        RealSpec::Expansion(cf) => cf,
    })
}

fn cf(a: &CfArgs, dry: bool) -> Outcome {
    if !(a.budget >= 0.0 && a.budget.is_finite()) {
        return Err(usage("invalid --budget: must be non-negative"));
    }
    if a.depth == 0 {
        return Err(usage("invalid --depth: must be positive"));
    }
    let cf = expansion(parse_real("value", &a.value)?, a.budget, a.depth)?;
    if dry {
        return Ok(None);
    }
    let depth = match cf.available() {
        Some(n) if cf.is_terminated() => a.depth.min(n + 1),
        Some(n) => a.depth.min(n),
        None => a.depth,
    };
    let conv = convergents(&cf, depth)?;
    let mut t = Table::new(&["n", "a", "p", "q", "sign", "error_lo", "error_hi", "gamma_n"]);
    let mut rows = Vec::new();
    for c in &conv {
        let a_n = if c.n == 0 { cf.a0().clone() } else { cf.quotient(c.n - 1).unwrap_or_default() };
        let (lo, hi) = (c.error.0.to_f64().unwrap_or(f64::NAN), c.error.1.to_f64().unwrap_or(f64::NAN));
        let g = c.gamma_n.unwrap_or(f64::NAN);
        t.push(row![c.n, a_n.to_string(), c.frac.p().to_string(), c.frac.q().to_string(), c.sign as i64, lo, hi, g]);
        rows.push(json!({
            "n": c.n, "a": a_n.to_string(), "p": c.frac.p().to_string(), "q": c.frac.q().to_string(),
            "sign": c.sign, "error_lo": lo, "error_hi": hi, "gamma_n": c.gamma_n,
        }));
    }
    let gamma = if cf.is_terminated() {
        Value::Null
    } else {
        match gamma_limsup(&cf, depth) {
            Ok(g) => json!({"value": g.value, "raw": g.raw, "witness": g.witness, "window": [g.window.0, g.window.1]}),
            Err(e) => json!({"error": e.to_string()}),
        }
    };
    let result = json!({
        "a0": cf.a0().to_string(),
        "terminated": cf.is_terminated(),
        "value": cf.to_f64(),
        "convergents": rows,
        "gamma": gamma,
    });
    Artifact::new(result, t).map(Some)
}

fn farey(a: &FareyArgs, dry: bool) -> Outcome {
    if a.q_min < 2 || a.q_min > a.q_max {
        return Err(usage("need 2 <= --q-min <= --q-max"));
    }
    if dry {
        return Ok(None);
    }
    let fr = farey_enumerate(a.q_min, a.q_max)?;
    let mut t = Table::new(&["p", "q"]);
    let mut list = Vec::with_capacity(fr.len());
    for r in &fr {
        t.push(row![r.p().to_string(), r.q().to_string()]);
        list.push(json!([r.p().to_string(), r.q().to_string()]));
    }
    Artifact::new(json!({"count": fr.len(), "fractions": list}), t).map(Some)
}

fn schedule(q: u64, h_max: Option<f64>, h_min: f64, ratio: f64) -> Result<HSchedule, CliError> {
    let cap = 1.0 / (q as f64 * q as f64);
    let h_max = h_max.unwrap_or(1e-2f64.min(cap));
    let s = HSchedule::spanning(h_max, h_min, ratio, Side::Both)?;
    s.check_max(cap)?;
    s.check_floor(GeometryConfig::default().floor_x())?;
    Ok(s)
}

fn direction_rows(t: &mut Table, samples: impl Iterator<Item = (f64, ComplexPoint)>) -> Vec<Value> {
    samples
        .map(|(h, d)| {
            t.push(row![h, d.re, d.im, d.arg()]);
            json!({"h": h, "dir_re": d.re, "dir_im": d.im, "arg": d.arg()})
        })
        .collect()
}

fn profile_json(p: &DirectionProfile) -> Value {
    json!({
        "limit_estimate": p.limit_estimate.map(cx),
        "dispersion": p.dispersion,
        "tail_start": p.tail_start,
    })
}

fn corner(a: &CornerArgs, dry: bool) -> Outcome {
    let pq = make_rational(a.p, a.q)?;
    if pq.mod4() == 2 {
        return Err(usage("q ≡ 2 (mod 4): use `spiral`"));
    }
    let sched = schedule(a.q, a.h_max, a.h_min, a.ratio)?;
    if dry {
        return Ok(None);
    }
    let r = corner_check(&pq, &sched, &GeometryConfig::default())?;
    let mut t = Table::new(&["h", "dir_re", "dir_im", "arg"]);
    let samples = r.right.samples.iter().chain(&r.left.samples).map(|s| (s.h, s.dir));
    let rows = direction_rows(&mut t, samples);
    let result = json!({
        "p": a.p, "q": a.q,
        "ratio_right_over_left": cx(r.ratio_right_over_left),
        "ratio_distance_to_i": r.ratio_distance_to_i,
        "nearest_eighth_root_distance": r.nearest_eighth_root_distance,
        "e_pq_estimate": cx(r.e_pq_estimate),
        "limits_exist": r.limits_exist(),
        "right": profile_json(&r.right),
        "left": profile_json(&r.left),
        "ratio_trace": r.ratio_trace.iter().map(|(h, d)| json!([h, d])).collect::<Vec<_>>(),
        "samples": rows,
    });
    Artifact::new(result, t).map(Some)
}

fn spiral(a: &SpiralArgs, dry: bool) -> Outcome {
    let pq = make_rational(a.p, a.q)?;
    if pq.mod4() != 2 {
        return Err(usage("q ≢ 2 (mod 4): use `corner`"));
    }
    let sched = schedule(a.q, a.h_max, a.h_min, a.ratio)?;
    if dry {
        return Ok(None);
    }
    let r = spiral_profile(&pq, &sched, &GeometryConfig::default())?;
    let mut t = Table::new(&["h", "dir_re", "dir_im", "arg"]);
    let rows = direction_rows(&mut t, r.samples.iter().map(|c| (c.h, c.direction())));
    let result = json!({
        "p": a.p, "q": a.q,
        "winding_total": r.winding_total,
        "direction_gaps": r.direction_gaps,
        "direction_gaps_deg": r.direction_gaps.to_degrees(),
        "dense": r.dense,
        "speed_monotone": r.speed_monotone,
        "resolved_min_h": r.resolved_min_h,
        "unresolved": r.unresolved,
        "samples": rows,
    });
    Artifact::new(result, t).map(Some)
}

fn cluster(a: &ClusterArgs, dry: bool) -> Outcome {
    let rho = match parse_real("rho", &a.rho)? {
        RealSpec::Expansion(cf) => cf,
        _ => return Err(usage("invalid --rho: give `golden`, `sqrt:N` or `cf:a0;a1,...`")),
    };
    let sched = HSchedule::spanning(a.h_max, a.h_min, 0.5, Side::Both)?;
    sched.check_floor(GeometryConfig::default().floor_x())?;
    if dry {
        return Ok(None);
    }
    let r = direction_cluster(&rho, &sched, &GeometryConfig::default())?;
    let mut t = Table::new(&["h", "dir_re", "dir_im", "arg"]);
    let rows = direction_rows(&mut t, r.profile.samples.iter().map(|s| (s.h, s.dir)));
    let result = json!({
        "rho": rho.to_f64(),
        "angular_spread": r.angular_spread,
        "angular_spread_deg": r.angular_spread.to_degrees(),
        "verdict": format!("{:?}", r.verdict),
        "skipped": r.skipped,
        "samples": rows,
    });
    Artifact::new(result, t).map(Some)
}

fn lemma(a: &LemmaArgs, dry: bool) -> Outcome {
    if a.q_max < 2 || a.h_per_q < 4 {
        return Err(usage("need --q-max >= 2 and --h-per-q >= 4"));
    }
    if dry {
        return Ok(None);
    }
    let e = lemma_constant_estimate(a.q_max, a.h_per_q)?;
    let (p, q, h) = e.witness;
    let mut t = Table::new(&["c_hat", "p", "q", "h", "samples"]);
    t.push(row![e.c_hat, p, q, h, e.samples]);
    let result = json!({"c_hat": e.c_hat, "witness": {"p": p, "q": q, "h": h}, "samples": e.samples});
    Artifact::new(result, t).map(Some)
}

fn cover(a: &CoverArgs, seed: u64, dry: bool) -> Outcome {
    if let Some(c) = a.c_used {
        build_cover(a.q0, a.qmax, c, a.exponent)?;
    } else {
        build_cover(a.q0, a.qmax, 1.0, a.exponent)?;
    }
    if dry {
        return Ok(None);
    }
    let c_used = match a.c_used {
        Some(c) => c,
        None => 2.0 * lemma_constant_estimate(suite::LEMMA_Q_MAX, suite::LEMMA_H_PER_Q)?.c_hat,
    };
    let set = build_cover(a.q0, a.qmax, c_used, a.exponent)?;
    let mut result = json!({
        "q0": a.q0, "qmax": a.qmax, "c_used": c_used, "exponent": a.exponent,
        "ball_count": set.len(),
        "radius_max": set.radius(a.q0), "radius_min": set.radius(a.qmax),
    });
    let mut table = Table::new(&["q0", "qmax", "c_used", "exponent", "ball_count"]);
    table.push(row![a.q0, a.qmax, c_used, a.exponent, set.len()]);
    if a.verify > 0 {
        let mut rng = sampling::rng(seed, suite::STREAM_COVER);
        let rhos: Vec<CFExpansion> = (0..a.verify).map(|_| sampling::random_irrational(&mut rng)).collect();
        let rep = verify_cover(&set, &rhos)?;
        let mut t = Table::new(&["rho", "p", "q", "h", "distance", "bound", "radius", "covered"]);
        let entries: Vec<Value> = rep
            .entries
            .iter()
            .map(|e| {
                t.push(row![e.rho, e.p, e.q, e.h, e.distance, e.bound, e.radius, e.covered]);
                json!({"rho": e.rho, "p": e.p, "q": e.q, "h": e.h, "distance": e.distance,
                       "bound": e.bound, "radius": e.radius, "covered": e.covered})
            })
            .collect();
        result["coverage"] = json!({"passed": rep.passed, "failed": rep.failed, "entries": entries});
        table = t;
    }
    if a.balls {
        let fr: Vec<(u64, u64)> = set.fractions().collect();
        let balls = fr
            .par_iter()
            .map(|&(p, q)| set.ball(p, q))
            .collect::<Result<Vec<_>, _>>()?;
        let mut t = Table::new(&["p", "q", "center_re", "center_im", "radius"]);
        let list: Vec<Value> = fr
            .iter()
            .zip(&balls)
            .map(|(&(p, q), b)| {
                t.push(row![p, q, b.center.re, b.center.im, b.radius]);
                json!({"p": p, "q": q, "center_re": b.center.re, "center_im": b.center.im, "radius": b.radius})
            })
            .collect();
        result["balls"] = Value::Array(list);
        table = t;
    }
    Artifact::new(result, table).map(Some)
}

fn content(a: &ContentArgs, dry: bool) -> Outcome {
    content_partial_sum(a.alpha, a.q0, a.qmax, a.c_used)?;
    if dry {
        return Ok(None);
    }
    let s = content_partial_sum(a.alpha, a.q0, a.qmax, a.c_used)?;
    let exact = content_totient_sum(a.alpha, a.q0, a.qmax, a.c_used)?;
    let verdict = match s.verdict {
        SumVerdict::Convergent => "convergent",
        SumVerdict::Divergent => "divergent",
    };
    let mut t = Table::new(&["alpha", "q0", "qmax", "partial", "tail_bound", "totient_sum", "verdict"]);
    t.push(row![a.alpha, a.q0, a.qmax, s.partial, s.tail_bound, exact, verdict]);
    let result = json!({
        "alpha": a.alpha, "q0": a.q0, "qmax": a.qmax, "c_used": a.c_used,
        "partial": s.partial,
        "tail_bound": if s.tail_bound.is_finite() { json!(s.tail_bound) } else { Value::Null },
        "totient_sum": exact,
        "verdict": verdict,
        "spectrum_bound": spectrum_bound(a.alpha).ok(),
    });
    Artifact::new(result, t).map(Some)
}

/// Control curves with `2^log2_n + 1` samples.
pub fn control_curve(curve: Curve, log2_n: u32, tol: f64) -> Result<Polyline, CliError> {
    let n = 1usize << log2_n;
    Ok(match curve {
        Curve::Phi => fft::trace(0.0, 1.0, n + 1, tol)?,
        Curve::Smooth => {
            let samples = (0..=n)
                .map(|k| {
                    let s = k as f64 / n as f64;
                    (s, ComplexPoint::new(s, 0.5 * s * s))
                })
                .collect();
            Polyline::new(samples, 0.0)?
        }
        Curve::Square => {
            // Boustrophedon raster of ~√n rows.
            let rows = (n as f64).sqrt().round().max(2.0) as usize;
            let per = n / rows;
            let mut samples = Vec::with_capacity(rows * per);
            for r in 0..rows {
                for c in 0..per {
                    let u = c as f64 / (per - 1) as f64;
                    let u = if r % 2 == 0 { u } else { 1.0 - u };
                    let k = samples.len() as f64;
                    samples.push((k, ComplexPoint::new(u, r as f64 / (rows - 1) as f64)));
                }
            }
            Polyline::new(samples, 0.0)?
        }
    })
}

/// `count` halving scales starting at `top · diameter`.
pub fn halving_scales(poly: &Polyline, top: f64, count: usize) -> Vec<f64> {
    let pts: Vec<ComplexPoint> = poly.points().collect();
    let d = diameter(&pts) * top;
    (0..count).map(|k| d / (1u64 << k) as f64).collect()
}

fn boxdim(a: &BoxdimArgs, seed: u64, dry: bool) -> Outcome {
    if !(4..=24).contains(&a.log2_n) {
        return Err(usage("invalid --log2-n: must lie in [4, 24]"));
    }
    if a.scales < 3 || a.scales > 40 || !(a.top > 0.0 && a.top <= 1.0) {
        return Err(usage("need 3 <= --scales <= 40 and 0 < --top <= 1"));
    }
    if dry {
        return Ok(None);
    }
    let poly = control_curve(a.curve, a.log2_n, a.tol)?;
    let scales = halving_scales(&poly, a.top, a.scales);
    let b = box_count_seeded(&poly, &scales, seed)?;
    let mut t = Table::new(&["scale", "count"]);
    for (s, c) in b.scales.iter().zip(&b.counts) {
        t.push(row![*s, *c]);
    }
    let result = json!({
        "scales": b.scales, "counts": b.counts, "slope": b.slope, "fit_r2": b.fit_r2,
        "offset_slopes": b.offset_slopes, "offset_spread": b.offset_spread,
    });
    Artifact::new(result, t).map(Some)
}

/// Cone scans at `x0` over `count` directions spread over a half turn.
pub fn cone_scans(
    x0: f64,
    count: usize,
    opening: f64,
    h_list: &[f64],
    poly: &Polyline,
) -> Result<Vec<(f64, ConeScan)>, CliError> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let angle = PI * k as f64 / count as f64;
            let s = cone_tangent_ratio(x0, ComplexPoint::from_polar(1.0, angle), opening, h_list, poly)?;
            Ok((angle, s))
        })
        .collect()
}

fn cone(a: &ConeArgs, dry: bool) -> Outcome {
    let x0 = parse_real("x0", &a.x0)?.to_f64();
    let x0 = x0 - x0.floor();
    let h_list = parse_list("h-list", &a.h_list)?;
    if a.directions == 0 || !(a.opening_deg > 0.0 && a.opening_deg < 180.0) {
        return Err(usage("need --directions >= 1 and 0 < --opening-deg < 180"));
    }
    if h_list.is_empty() || h_list.iter().any(|h| !(*h > 0.0)) || h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(usage("invalid --h-list: positive and strictly decreasing"));
    }
    if !(8..=24).contains(&a.log2_n) {
        return Err(usage("invalid --log2-n: must lie in [8, 24]"));
    }
    if dry {
        return Ok(None);
    }
    let poly = control_curve(Curve::Phi, a.log2_n, a.tol)?;
    let scans = cone_scans(x0, a.directions, a.opening_deg.to_radians(), &h_list, &poly)?;
    let mut t = Table::new(&["direction_deg", "h", "ratio"]);
    let mut list = Vec::new();
    for (angle, s) in &scans {
        for (h, r) in &s.ratios {
            t.push(row![angle.to_degrees(), *h, *r]);
        }
        list.push(json!({
            "direction_deg": angle.to_degrees(),
            "ratios": s.ratios.iter().map(|(h, r)| json!({"h": h, "ratio": r})).collect::<Vec<_>>(),
            "terminal": s.terminal(),
            "rejected": s.rejected,
        }));
    }
    let min_terminal = scans.iter().map(|(_, s)| s.terminal()).fold(f64::INFINITY, f64::min);
    let result = json!({
        "x0": x0,
        "center_tol": poly.certified_tol().max(1e-12),
        "opening_deg": a.opening_deg,
        "min_terminal_ratio": min_terminal,
        "all_rejected": scans.iter().all(|(_, s)| s.rejected),
        "directions": list,
    });
    Artifact::new(result, t).map(Some)
}

fn report(a: &ReportArgs, seed: u64, dry: bool) -> Outcome {
    let ids = suite::parse_ids(a.only.as_deref())?;
    if dry {
        return Ok(None);
    }
    let results = suite::run(&ids, seed);
    let mut t = Table::new(&["id", "name", "pass", "summary"]);
    for r in &results {
        t.push(row![r.id as u64, r.name, r.pass, r.summary.clone()]);
    }
    let result = json!({
        "all_pass": results.iter().all(|r| r.pass),
        "criteria": results,
    });
    Artifact::new(result, t).map(Some)
}
