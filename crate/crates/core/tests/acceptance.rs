//! Acceptance suite: one PASS/FAIL line per criterion, at full scale.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when a criterion outside `KNOWN_RED` fails, or when any
//! criterion cannot be evaluated at all.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand_distr::Exp1;

use hypercut::density::{normal_cover_requirement, EigenvalueBudget, GrowthFunction};
use hypercut::geometry::{ball_volume, inverse_ball_radius};
use hypercut::RadialGrid;
use hypercut::mixing::{
    concentration_fit, cutoff_locator, distance_histogram, histogram_geometry, tv_profile, TvConfig, DEFAULT_START,
};
use hypercut::modular::{closed_form_order, coset_index, CosetModQ, QuotientGeometry, QuotientPoint};
use hypercut::rng::{walker_rng, with_workers};
use hypercut::spectral::heat::tail_fit;
use hypercut::spectral::helgason::smooth_bump;
use hypercut::spectral::{
    clt_constants, heat_radial_density, helgason_measure, plancherel_check, radial_mixture,
    spherical_complementary, spherical_principal, two_step_cdf, LowerEnvelope,
};
use hypercut::stats::{ks_statistic, sorted};
use hypercut::torus::{fourier_density, no_cutoff_profile, theta_density, torus_row, TorusConfig};
use hypercut::walk::{clt_check, step_discrete, WalkConfig};
use hypercut::{distance, PointH, Result};

/// Criteria whose desk-scale numbers miss the stated target; the analysis
/// lives in the decisions ledger. They are still run and reported.
const KNOWN_RED: &[u32] = &[9, 10, 12];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn c1_harish_chandra() -> Result<Outcome> {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for r in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let bound = (r + 1.0) * (-r / 2.0f64).exp();
        for i in 0..=800 {
            let v = spherical_principal(i as f64 * 0.05, r)?.abs();
            worst = worst.max(v / bound);
            if v > bound + 1e-6 {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("violations={violations} max |φ|/bound={worst:.4}"))
}

fn c2_lp_sandwich() -> Result<Outcome> {
    let coarse: Vec<f64> = (0..=23).map(|i| 0.5 + 0.5 * i as f64).collect();
    let fine: Vec<f64> = (0..=1150).map(|i| 0.5 + 0.01 * i as f64).collect();
    let mut violations = 0;
    let mut consts = Vec::new();
    for p in [2.5, 3.0, 4.0, 8.0] {
        // the constant is fitted on a coarse grid, violations counted on a fine one
        let env = LowerEnvelope::fit(p, 0.1, &coarse, 0.999)?;
        consts.push(env.c);
        for &r in &fine {
            let v = spherical_complementary(p, r)?;
            if v > (r + 1.0) * (-r / p).exp() || v < env.eval(r) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0 && consts.iter().all(|c| *c > 0.0), format!("violations={violations} C={consts:.4?}"))
}

fn c3_clt() -> Result<Outcome> {
    let rep = clt_check(&WalkConfig::new(1.0, 200, 100_000, 2024))?;
    let mut bounds_ok = true;
    for r1 in [0.5, 1.0, 2.0, 5.0] {
        let c = clt_constants(r1)?;
        bounds_ok &= c.alpha > 0.0 && c.alpha < 1.0 && c.sigma2 <= 4.0;
    }
    let a = rep.constants.alpha;
    outcome(
        rep.mean_ok && rep.variance_ok && bounds_ok,
        format!(
            "|mean - α|={:.2e} (tol {:.2e}), var={:.4} vs σ²={:.4}, corollary bounds {bounds_ok}",
            (rep.mean_per_step - a).abs(),
            rep.mean_tolerance,
            rep.scaled_variance,
            rep.constants.sigma2
        ),
    )
}

fn c4_two_step() -> Result<Outcome> {
    let o = PointH::i();
    let mut gaps = Vec::new();
    for (j, r1) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let mut rng = walker_rng(2024, j as u64);
        let d: Vec<f64> = (0..100_000)
            .map(|_| distance(&o, &step_discrete(&step_discrete(&o, r1, &mut rng), r1, &mut rng)))
            .collect();
        gaps.push(ks_statistic(&sorted(&d), |x| two_step_cdf(x, r1)));
    }
    outcome(gaps.iter().all(|g| *g <= 0.01), format!("sup CDF gaps {gaps:.4?}"))
}

fn c5_heat() -> Result<Outcome> {
    let lambdas = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let law = heat_radial_density(t, None)?;
        let fit = tail_fit(&law, &lambdas)?;
        ok &= law.raw_defect <= 1e-6 && fit.slope < 0.0 && fit.r2 >= 0.9;
        parts.push(format!("t={t}: {:.1e}/{:.3}/{:.3}", law.raw_defect, fit.slope, fit.r2));
    }
    outcome(ok, format!("defect/slope/R² {}", parts.join(", ")))
}

fn c6_plancherel() -> Result<Outcome> {
    let rep = plancherel_check(&smooth_bump(2.0, 2000)?, 40.0)?;
    let r1 = 1.0;
    let ss: Vec<f64> = (0..=100).map(|i| 0.1 * i as f64).collect();
    let mut worst_l2 = 0.0f64;
    let mut worst_pt = 0.0f64;
    for k in 1..=5 {
        let m = if k == 1 {
            // one step is the atom at r1: a single cell of 2001 on [0, 2r1] centred there
            let mut masses = vec![0.0; 2001];
            masses[1000] = 1.0;
            RadialGrid::from_masses(0.0, 2.0 * r1, masses)?
        } else {
            radial_mixture(k, r1, None)?
        };
        let (mut num, mut den) = (0.0, 0.0);
        for &s in &ss {
            let lhs = helgason_measure(&m, s)?;
            let rhs = spherical_principal(s, r1)?.powi(k as i32);
            num += (lhs - rhs).powi(2);
            den += rhs * rhs;
            if rhs.abs() > 1e-3 {
                worst_pt = worst_pt.max((lhs - rhs).abs() / rhs.abs());
            }
        }
        worst_l2 = worst_l2.max((num / den).sqrt());
    }
    outcome(
        (0.98..=1.02).contains(&rep.ratio) && worst_l2 <= 0.01 && worst_pt <= 0.01,
        format!("energy ratio {:.5}, power law L² err {worst_l2:.2e}, pointwise {worst_pt:.2e}", rep.ratio),
    )
}

fn c7_torus() -> Result<Outcome> {
    let lambdas = [1.0, 10.0, 100.0];
    let mut inside = true;
    let mut agree = 0.0f64;
    for &l in &lambdas {
        for a in [0.5, 1.0, 2.0, 5.0] {
            let cfg = TorusConfig::new(l, a * l)?;
            let row = torus_row(&cfg)?;
            inside &= row.lower < row.l1 && row.l1 < row.upper;
            for i in 0..=200 {
                let x = -0.5 + i as f64 / 200.0;
                agree = agree.max((theta_density(&cfg, x) - fourier_density(&cfg, x)).abs());
            }
        }
    }
    let nc = no_cutoff_profile(&lambdas, &[1.0, 2.0, 4.0, 8.0])?;
    outcome(
        inside && agree <= 1e-10 && nc.spread <= 3.0,
        format!("strictly inside {inside}, theta/Fourier {agree:.1e}, ratio spread {:.3}", nc.spread),
    )
}

fn c8_quotient() -> Result<Outcome> {
    let mut index_ok = true;
    for q in 2..=7 {
        index_ok &= coset_index(q)?.len() as u64 == closed_form_order(q);
    }
    let r_max = 8.0;
    let (mut asym, mut tri, mut deck) = (0usize, 0usize, 0usize);
    for q in [2, 3, 5] {
        let geo = QuotientGeometry::new(q, r_max, 3.0)?;
        let mut rng = walker_rng(2024, q as u64);
        for _ in 0..1000 {
            let a = geo.sample_uniform(3.0, &mut rng);
            let b = geo.sample_uniform(3.0, &mut rng);
            let c = geo.sample_uniform(3.0, &mut rng);
            let h = geo.table().element(rng.random_range(0..geo.degree()));
            let d = |x: &QuotientPoint, y: &QuotientPoint| geo.distance(x, y, r_max);
            let (ab, ba, bc, ac) = (d(&a, &b)?, d(&b, &a)?, d(&b, &c)?, d(&a, &c)?);
            if ab != ba {
                asym += 1;
            }
            if let (Some(ab), Some(bc)) = (ab, bc) {
                match ac {
                    Some(ac) if ac <= ab + bc + 1e-9 => {}
                    None if ab + bc > r_max => {}
                    _ => tri += 1,
                }
            }
            if d(&a.deck(&h), &b.deck(&h))? != ab {
                deck += 1;
            }
        }
    }
    outcome(
        index_ok && asym == 0 && tri == 0 && deck == 0,
        format!("index {index_ok}, asymmetric {asym}, triangle failures {tri}, deck mismatches {deck}"),
    )
}

fn c9_lower_tail() -> Result<Outcome> {
    let q = 5;
    let r_max = 8.0;
    let geo = histogram_geometry(q, &DEFAULT_START, r_max)?;
    let x0 = QuotientPoint::from_lift(&DEFAULT_START, CosetModQ::identity(q))?;
    let inj = geo.injectivity_radius(&x0, r_max)?.radius;
    // embedded balls only: past the injectivity radius the ball overlaps itself
    let radii: Vec<f64> = [0.5, 0.75, 1.0, 1.25, 1.5].into_iter().filter(|r| *r <= inj).collect();
    let h = distance_histogram(&geo, &x0, 10_000, r_max, &[0.5, 1.0, 2.0], &radii, 2024)?;
    let checked: Vec<_> = h.volume.iter().filter(|v| v.ball_fraction >= 1e-2).collect();
    let worst = checked.iter().map(|v| v.rel_err).fold(0.0, f64::max);
    let scaled: Vec<f64> = h.gammas.iter().map(|g| g.scaled_below).collect();
    // the same statistic for an exact hyperbolic ball of the cut-off radius
    let r_x = inverse_ball_radius(geo.area())?;
    let model: Vec<f64> = h
        .gammas
        .iter()
        .map(|g| Ok((ball_volume(g.below_radius)? / geo.area()).min(1.0) * r_x.powf(g.gamma)))
        .collect::<Result<_>>()?;
    let model_spread = model.iter().cloned().fold(0.0, f64::max) / model.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        !checked.is_empty() && worst <= 0.1 && h.scaled_spread <= 2.0,
        format!(
            "inj={inj:.3}, {} radii, worst rel err {worst:.4}; scaled {scaled:.4?} spread {:.3}; exact-ball model {model:.4?} spread {model_spread:.3}",
            checked.len(),
            h.scaled_spread
        ),
    )
}

fn c10_cutoff() -> Result<Outcome> {
    let r1 = 1.0;
    let alpha = clt_constants(r1)?.alpha;
    let mut early_ok = true;
    let mut late_ok = true;
    let mut widths = Vec::new();
    let mut lines = Vec::new();
    for q in [2u32, 3, 5] {
        let r_x = inverse_ball_radius(closed_form_order(q) as f64 * std::f64::consts::PI / 3.0)?;
        let scale = r_x / (alpha * r1);
        let k_max = (3.0 * scale).ceil() as usize + 2;
        let start = Instant::now();
        let prof = tv_profile(&TvConfig::new(q, r1, k_max, 1_000_000, 2024))?;
        let early: Vec<f64> =
            prof.points.iter().filter(|p| p.k as f64 <= 0.5 * scale).map(|p| p.tv).collect();
        let late: Vec<f64> = prof.points.iter().filter(|p| p.k as f64 >= 3.0 * scale).map(|p| p.tv).collect();
        let e_min = early.iter().cloned().fold(f64::INFINITY, f64::min);
        let l_max = late.iter().cloned().fold(0.0, f64::max);
        early_ok &= e_min >= 1.5;
        late_ok &= !late.is_empty() && l_max <= 0.5;
        let w = cutoff_locator(&prof.tv(), alpha * r1, r_x).map(|c| c.width).ok();
        widths.push(w);
        let tvs: Vec<String> = prof.points.iter().map(|p| format!("{:.3}", p.tv)).collect();
        lines.push(format!(
            "q={q} R_X={r_x:.3} early(k≤{:.2}) min {e_min:.3} late(k≥{:.2}) max {l_max:.3} width {w:.3?} [{:.0}s] tv=[{}]",
            0.5 * scale,
            3.0 * scale,
            start.elapsed().as_secs_f64(),
            tvs.join(" ")
        ));
    }
    let width_ok = widths.iter().all(|w| w.is_some())
        && widths.windows(2).all(|w| w[1].unwrap_or(f64::INFINITY) <= w[0].unwrap_or(0.0));
    for l in &lines {
        println!("      {l}");
    }
    outcome(
        early_ok && late_ok && width_ok,
        format!("early ≥ 1.5: {early_ok}, late ≤ 0.5: {late_ok}, width non-increasing: {width_ok}"),
    )
}

fn c11_concentration() -> Result<Outcome> {
    let q = 5;
    let r_max = 8.0;
    let geo = histogram_geometry(q, &DEFAULT_START, r_max)?;
    let x0 = QuotientPoint::from_lift(&DEFAULT_START, CosetModQ::identity(q))?;
    let h = distance_histogram(&geo, &x0, 20_000, r_max, &[], &[], 2025)?;
    let rep = concentration_fit(&h.values(), 0.25, Some(h.r_x))?;
    let mut rng = walker_rng(2024, 0);
    let synth: Vec<f64> = (0..100_000)
        .map(|_| {
            let e: f64 = rng.sample(Exp1);
            if rng.random::<bool>() { 5.0 + e } else { 5.0 - e }
        })
        .collect();
    let s = concentration_fit(&synth, 0.25, None)?;
    outcome(
        rep.a > 1.0 && rep.r2 >= 0.7 && (s.slope + 1.0).abs() <= 0.05,
        format!("q=5: a={:.3} R²={:.3}; synthetic slope {:.4}", rep.a, rep.r2, s.slope),
    )
}

fn c12_density() -> Result<Outcome> {
    let ps = [2.5, 3.0, 4.0, 6.0, 8.0];
    let ns = [1e3, 1e4, 1e5, 1e6];
    let a1 = ns.iter().map(|&n| EigenvalueBudget::synthetic_a1(n, &ps)).collect::<Result<Vec<_>>>()?;
    let good = normal_cover_requirement(&a1, &GrowthFunction::linear(1.2))?;
    let uni = ns.iter().map(|&n| EigenvalueBudget::uniform(n, &ps)).collect::<Result<Vec<_>>>()?;
    let bad = normal_cover_requirement(&uni, &GrowthFunction { s: 1.0, delta: 3.0, c: 0.0 })?;
    let col = |f: fn(&hypercut::density::RequirementRow) -> f64| -> String {
        let v: Vec<String> = good.rows.iter().map(|r| format!("{:.3e}", f(r))).collect();
        v.join(" ")
    };
    outcome(
        good.pass && !bad.pass,
        format!(
            "A=1: req0 [{}] {} | integral [{}] {} | limit [{}] {}; uniform fails: {}",
            col(|r| r.req0),
            good.req0_vanishing,
            col(|r| r.req_integral),
            good.integral_vanishing,
            col(|r| r.req_limit),
            good.limit_vanishing,
            !bad.pass
        ),
    )
}

fn csv_bodies(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .expect("output dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.display().to_string(), fs::read(&p).expect("csv")))
        .map(|(n, b)| (n.rsplit('/').next().unwrap_or_default().to_string(), b))
        .collect();
    v.sort();
    v
}

fn c13_determinism() -> Result<Outcome> {
    let runs: [&[&str]; 9] = [
        &["walk", "--k", "50", "--n-walkers", "20000", "--record", "5"],
        &["tv", "--q", "3", "--k-max", "10", "--n-walkers", "20000"],
        &["distances", "--q", "5", "--n-samples", "10000"],
        &["concentration", "--q", "5", "--n-samples", "10000"],
        &["isoperimetry", "--n-mc", "5000"],
        &["cover", "--q", "4", "--k-max", "8", "--n-walkers", "20000"],
        &["cover", "--random", "8", "--k-max", "8", "--n-walkers", "20000"],
        &["heat", "--t", "2"],
        &["mixture", "--k", "3"],
    ];
    let tmp = std::env::temp_dir().join(format!("hypercut-acceptance-{}", std::process::id()));
    let mut mismatched = Vec::new();
    for (i, cmd) in runs.iter().enumerate() {
        let mut bodies = Vec::new();
        for w in ["1", "4", "1"] {
            let out = tmp.join(format!("{i}-{w}-{}", bodies.len()));
            let mut argv = vec!["hypercut", "--workers", w, "--seed", "77", "--out", out.to_str().unwrap_or(".")];
            argv.extend_from_slice(cmd);
            if hypercut::cli::run_quiet(argv) != 0 {
                return Err(hypercut::Error::Config(format!("{cmd:?} failed")));
            }
            bodies.push(csv_bodies(&out));
        }
        if bodies[0] != bodies[1] || bodies[0] != bodies[2] {
            mismatched.push(cmd[0]);
        }
    }
    // the library path too, outside the CLI
    let cfg = TvConfig::new(2, 1.0, 6, 30_000, 5);
    let csv_at = |w: usize| -> Result<Vec<u8>> {
        let p = with_workers(w, || tv_profile(&cfg))??;
        let mut b = Vec::new();
        p.write_csv(&mut b)?;
        Ok(b)
    };
    let lib_same = csv_at(1)? == csv_at(4)?;
    let _ = fs::remove_dir_all(&tmp);
    outcome(
        mismatched.is_empty() && lib_same,
        format!("{} commands at 1/4/1 workers, mismatches {mismatched:?}, library tv {lib_same}", runs.len()),
    )
}

fn main() {
    // `cargo test -- <filter>` passes arguments; a filter that does not
    // match "acceptance" skips the suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let suite: [(u32, &str, fn() -> Result<Outcome>); 13] = [
        (1, "spherical bound", c1_harish_chandra),
        (2, "L^p sandwich", c2_lp_sandwich),
        (3, "CLT constants", c3_clt),
        (4, "two-step radial law", c4_two_step),
        (5, "Brownian kernel", c5_heat),
        (6, "Plancherel and power law", c6_plancherel),
        (7, "flat torus", c7_torus),
        (8, "quotient geometry", c8_quotient),
        (9, "lower tail of distances", c9_lower_tail),
        (10, "cutoff trend", c10_cutoff),
        (11, "concentration", c11_concentration),
        (12, "density checker", c12_density),
        (13, "determinism", c13_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in suite {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(o) => {
                let tag = if o.pass { "PASS" } else { "FAIL" };
                let note = match (o.pass, KNOWN_RED.contains(&id)) {
                    (false, true) => " (known red)",
                    (true, true) => " (known red now passing)",
                    _ => "",
                };
                println!("[{id:02}] {tag} {name}{note} [{secs:.1}s]: {}", o.detail);
                if !o.pass && !KNOWN_RED.contains(&id) {
                    unexpected.push(id);
                }
            }
            Err(e) => {
                println!("[{id:02}] FAIL {name} [{secs:.1}s]: error: {e}");
                unexpected.push(id);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
