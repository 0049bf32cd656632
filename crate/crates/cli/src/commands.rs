//! One function per subcommand. Every command writes its artifacts under
//! the configured output directory and prints a short summary; numerical
//! failures exit 2, configuration problems exit 3.

use rayon::prelude::*;

use spinlim::acceptance;
use spinlim::dicke::husimi_density;
use spinlim::extrema::{extrema, range};
use spinlim::models::{model_symbol, symbol_correction_fit};
use spinlim::poly::SpherePolynomial;
use spinlim::quantize::quantize;
use spinlim::semiclassics::{
    convergence_study, dgr_calibrate, dgr_defect, forbidden_region_mass, limit_state_prediction,
    product_defect, ssb_report, StudyTarget,
};
use spinlim::spectral::{eigenpair_near, eigh, ground_state, spectrum_distance};
use spinlim::sphere::SpherePoint;

use crate::cache::Cache;
use crate::config::{MatrixFormat, RunConfig};
use crate::output::{fmt_f64, plot_data, sanitize, Csv, JsonLines, JsonValue, OutDir};

pub struct AppError {
    pub code: i32,
    pub message: String,
}

impl AppError {
    fn config(msg: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: msg.into(),
        }
    }

    fn invariant(msg: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: msg.into(),
        }
    }
}

impl From<spinlim::Error> for AppError {
    fn from(e: spinlim::Error) -> Self {
        use spinlim::Error::*;
        match e {
            DegreeCap { .. } | Parse(_) | Precondition(_) | Format(_) => {
                AppError::config(e.to_string())
            }
            NoConvergence(_) | RankDeficient(_) | Invariant(_) => {
                AppError::invariant(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::config(format!("i/o: {e}"))
    }
}

impl From<crate::config::ConfigError> for AppError {
    fn from(e: crate::config::ConfigError) -> Self {
        AppError::config(e.to_string())
    }
}

type CmdResult = Result<(), AppError>;

fn out_dir(cfg: &RunConfig) -> Result<OutDir, AppError> {
    Ok(OutDir::create(&cfg.out_dir)?)
}

fn cache_for(cfg: &RunConfig) -> Cache {
    Cache::new(Cache::resolve_dir(
        cfg.cache_enabled,
        cfg.cache_dir.clone(),
        &cfg.out_dir,
    ))
}

/// `axioms`: the quantization-axiom property suite at the configured seed.
pub fn cmd_axioms(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let result = acceptance::criterion_1_axiom_suite(cfg.seed)?;
    let mut log = String::new();
    log.push_str(&result.summary_line());
    log.push('\n');
    for line in &result.details {
        log.push_str(line);
        log.push('\n');
    }
    out.write("axioms.log", &log)?;
    println!("{}", result.summary_line());
    println!("details: {}", out.path("axioms.log").display());
    if !result.pass {
        return Err(AppError::invariant("axiom suite failed; see axioms.log"));
    }
    Ok(())
}

/// `quantize`: emit the matrix of Q(f) at a single N.
pub fn cmd_quantize(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    if cfg.observables.len() != 1 {
        return Err(AppError::config(
            "quantize needs exactly one f=<polynomial>",
        ));
    }
    let grid = cfg.require_grid()?;
    if grid.len() != 1 {
        return Err(AppError::config("quantize needs a single N"));
    }
    let n = grid[0];
    let f = cfg.observables[0].reduce_mod_sphere();
    let q = quantize(&f, n)?;
    let base = format!("quantize_N{n}");
    let mut written = Vec::new();
    if matches!(cfg.matrix_format, MatrixFormat::Text | MatrixFormat::Both) {
        written.push(out.write(&format!("{base}.txt"), &q.to_text())?);
    }
    if matches!(cfg.matrix_format, MatrixFormat::Binary | MatrixFormat::Both) {
        written.push(out.write_bytes(&format!("{base}.bin"), &q.to_binary())?);
    }
    println!(
        "Q({f}) at N={n}: dim {}, halfband {}, max-entry {:.6e}",
        q.dim(),
        q.halfband(),
        q.max_abs()
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

/// `spectrum`: dist(ran h₀, σ(H_N)) curve plus the raw spectra.
pub fn cmd_spectrum(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let spec = cfg.require_model()?;
    let grid = cfg.require_grid()?.to_vec();
    let cache = cache_for(cfg);
    let h0 = model_symbol(spec).principal;
    let ran = range(&h0);

    let mut rows: Vec<(usize, f64, spinlim::spectral::Spectrum)> = grid
        .par_iter()
        .map(|&n| -> Result<_, spinlim::Error> {
            let h = cache.operator(spec, n, || spec.hamiltonian(n))?;
            let s = cache.spectrum(spec, n, || eigh(&h))?;
            let d = spectrum_distance(&ran, &s);
            Ok((n, d, s))
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|(n, _, _)| *n);

    let mut dist_csv = Csv::new(&["N", "dist"]);
    let mut spectra_csv = Csv::new(&["N", "index", "eigenvalue"]);
    let mut plot = Vec::new();
    println!("range of principal symbol: [{}, {}]", ran.lo, ran.hi);
    for (n, d, s) in &rows {
        dist_csv.row(&[n.to_string(), fmt_f64(*d)]);
        for (i, v) in s.eigenvalues().iter().enumerate() {
            spectra_csv.row(&[n.to_string(), i.to_string(), fmt_f64(*v)]);
        }
        plot.push((*n as f64, *d));
        println!("N={n:6}  dist = {d:.6e}");
    }
    out.write("dist.csv", &dist_csv.finish())?;
    out.write("spectra.csv", &spectra_csv.finish())?;
    out.write("plot_dist.dat", &plot_data(&plot))?;
    println!(
        "wrote {}, {}, {}",
        out.path("dist.csv").display(),
        out.path("spectra.csv").display(),
        out.path("plot_dist.dat").display()
    );
    Ok(())
}

/// `limit`: convergence of ⟨ψ_N, Q(f) ψ_N⟩ toward the predicted limit state.
pub fn cmd_limit(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let spec = cfg.require_model()?;
    let grid = cfg.require_grid()?;
    let observables = if cfg.observables.is_empty() {
        vec![SpherePolynomial::x()]
    } else {
        cfg.observables.clone()
    };
    let target = match cfg.target_energy {
        None => StudyTarget::Ground,
        Some(e) => StudyTarget::Energy(e),
    };
    if !cfg.observable_strings.is_empty() {
        println!("observables: {}", cfg.observable_strings.join("; "));
    }
    let report = convergence_study(spec, target, &observables, grid)?;

    let mut csv = Csv::new(&["N", "f", "value", "target", "residual"]);
    let mut jsonl = JsonLines::new();
    for trace in &report.traces {
        for (n, value, residual) in &trace.rows {
            csv.row(&[
                n.to_string(),
                trace.observable.clone(),
                fmt_f64(*value),
                fmt_f64(trace.target),
                fmt_f64(*residual),
            ]);
            jsonl.record(&[
                ("n", JsonValue::Int(*n as u64)),
                ("f", JsonValue::Str(trace.observable.clone())),
                ("value", JsonValue::Num(*value)),
                ("target", JsonValue::Num(trace.target)),
                ("residual", JsonValue::Num(*residual)),
            ]);
        }
        let plot: Vec<(f64, f64)> = trace.rows.iter().map(|(n, _, r)| (*n as f64, *r)).collect();
        out.write(
            &format!("plot_limit_{}.dat", sanitize(&trace.observable)),
            &plot_data(&plot),
        )?;
        let exponent = trace
            .fitted_exponent
            .map(|e| format!("{e:.3}"))
            .unwrap_or_else(|| "n/a".into());
        println!(
            "f = {:<16} target = {:+.6}  final residual = {:.3e}  exponent = {}  verdict: {}",
            trace.observable,
            trace.target,
            trace.rows.last().map(|r| r.2).unwrap_or(f64::NAN),
            exponent,
            trace.verdict
        );
    }
    for (n, why) in &report.failures {
        println!("note: N={n} could not be tracked: {why}");
    }
    out.write("limit.csv", &csv.finish())?;
    out.write("limit.jsonl", &jsonl.finish())?;
    println!(
        "target energy {} with {} limit points; wrote {}, {}",
        fmt_f64(report.target_energy),
        report.limit.support_size(),
        out.path("limit.csv").display(),
        out.path("limit.jsonl").display()
    );
    Ok(())
}

/// `dgr`: convention calibration plus commutator and product defect curves.
pub fn cmd_dgr(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let grid = if cfg.n_grid.is_empty() {
        vec![64, 128, 256, 512]
    } else {
        cfg.n_grid.clone()
    };
    let cal = dgr_calibrate(cfg.n_small)?;
    println!("calibrated convention: {}", cal.chosen);
    for conv in &cal.exact_on_probe {
        println!("  (probe-exact, set aside for rate measurement: {conv})");
    }
    let x = SpherePolynomial::x();
    let y = SpherePolynomial::y();
    let z = SpherePolynomial::z();
    let pairs: Vec<(&str, &SpherePolynomial, &SpherePolynomial)> =
        vec![("x,y", &x, &y), ("x,z", &x, &z)];
    let mut csv = Csv::new(&["N", "kind", "pair", "defect"]);
    for (name, f, g) in &pairs {
        let mut plot = Vec::new();
        for &n in &grid {
            let d = dgr_defect(f, g, n, cal.chosen)?;
            csv.row(&[
                n.to_string(),
                "commutator".into(),
                (*name).into(),
                fmt_f64(d),
            ]);
            plot.push((n as f64, d));
            println!("commutator ({name}) N={n:5}: defect = {d:.6e}");
        }
        out.write(
            &format!("plot_dgr_{}.dat", sanitize(name)),
            &plot_data(&plot),
        )?;
    }
    let product_pairs: Vec<(&str, &SpherePolynomial, &SpherePolynomial)> =
        vec![("z,z", &z, &z), ("x,y", &x, &y)];
    for (name, f, g) in &product_pairs {
        let mut plot = Vec::new();
        for &n in &grid {
            let d = product_defect(f, g, n)?;
            csv.row(&[n.to_string(), "product".into(), (*name).into(), fmt_f64(d)]);
            plot.push((n as f64, d));
            println!("product    ({name}) N={n:5}: defect = {d:.6e}");
        }
        out.write(
            &format!("plot_product_{}.dat", sanitize(name)),
            &plot_data(&plot),
        )?;
    }
    out.write("dgr.csv", &csv.finish())?;
    println!("wrote {}", out.path("dgr.csv").display());
    Ok(())
}

/// `husimi`: density grid plus cap and forbidden-region masses for the
/// tracked eigenstate at a single N.
pub fn cmd_husimi(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let spec = cfg.require_model()?;
    let grid = cfg.require_grid()?;
    if grid.len() != 1 {
        return Err(AppError::config("husimi needs a single N"));
    }
    let n = grid[0];
    let h = spec.hamiltonian(n)?;
    let h0 = model_symbol(spec).principal;
    let (pair, energy_label) = match cfg.target_energy {
        None => {
            let g = ground_state(&h)?;
            (g.pair, "ground".to_string())
        }
        Some(e) => (eigenpair_near(&h, e)?, format!("nearest to {e}")),
    };
    println!(
        "state: {} eigenpair at N={n}, eigenvalue {:.8}, residual {:.2e}",
        energy_label, pair.value, pair.residual
    );

    // plot-ready equal-angle density grid
    let theta_steps = 121usize;
    let phi_steps = 241usize;
    let mut csv = Csv::new(&["theta", "phi", "density"]);
    for it in 0..theta_steps {
        let theta = std::f64::consts::PI * it as f64 / (theta_steps - 1) as f64;
        for ip in 0..phi_steps {
            let phi = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * ip as f64 / (phi_steps - 1) as f64;
            let pt = SpherePoint::from_angles(theta, phi);
            let b = husimi_density(&pair.vector, &pt);
            csv.row(&[fmt_f64(theta), fmt_f64(phi), fmt_f64(b)]);
        }
    }
    out.write(&format!("husimi_density_N{n}.csv"), &csv.finish())?;

    let target_energy = cfg.target_energy.unwrap_or_else(|| extrema(&h0).min);
    match limit_state_prediction(&h0, target_energy) {
        Ok(limit) => {
            let mut total = 0.0;
            for (i, (center, _)) in limit.points().iter().enumerate() {
                let mass = spinlim::quantize::husimi_mass(&pair.vector, |pt: &SpherePoint| {
                    pt.geodesic_distance(center) <= cfg.cap_radius
                });
                total += mass;
                println!(
                    "cap {} at ({:+.4}, {:+.4}, {:+.4}), radius {}: mass = {:.6}",
                    i + 1,
                    center.x(),
                    center.y(),
                    center.z(),
                    cfg.cap_radius,
                    mass
                );
            }
            println!("total cap mass: {total:.6}");
        }
        Err(e) => println!("cap masses skipped: {e}"),
    }
    let fm = forbidden_region_mass(&pair.vector, &h0, target_energy, cfg.margin)?;
    println!(
        "forbidden-region mass (|h0 - E| ≥ {}): {:.6e}",
        cfg.margin, fm
    );
    println!(
        "wrote {}",
        out.path(&format!("husimi_density_N{n}.csv")).display()
    );
    Ok(())
}

/// `ssb`: the symmetry-breaking study along the N grid.
pub fn cmd_ssb(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let spec = cfg.require_model()?;
    let grid = cfg.require_grid()?;
    let report = ssb_report(spec, grid, cfg.cap_radius)?;

    let mut csv = Csv::new(&[
        "N",
        "ground_energy",
        "gap",
        "degenerate",
        "purity",
        "sector_defect",
        "husimi_asymmetry",
        "cap_total",
    ]);
    let mut caps_csv = Csv::new(&["N", "cap_index", "mass"]);
    for row in &report.rows {
        csv.row(&[
            row.n_sites.to_string(),
            fmt_f64(row.ground_energy),
            fmt_f64(row.gap),
            row.degenerate.to_string(),
            fmt_f64(row.purity),
            fmt_f64(row.z2.sector_defect()),
            fmt_f64(row.z2.husimi_asymmetry),
            fmt_f64(row.cap_total),
        ]);
        for (i, m) in row.cap_masses.iter().enumerate() {
            caps_csv.row(&[row.n_sites.to_string(), (i + 1).to_string(), fmt_f64(*m)]);
        }
        println!(
            "N={:5}: E0 = {:+.6}, gap = {:.2e}, Z2 defect = {:.2e}, asym = {:.2e}, caps = {:?}, total = {:.4}",
            row.n_sites,
            row.ground_energy,
            row.gap,
            row.z2.sector_defect(),
            row.z2.husimi_asymmetry,
            row.cap_masses.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>(),
            row.cap_total
        );
    }
    let mut limit_csv = Csv::new(&["x", "y", "z", "weight"]);
    for (p, w) in report.limit.points() {
        limit_csv.row(&[fmt_f64(p.x()), fmt_f64(p.y()), fmt_f64(p.z()), fmt_f64(*w)]);
    }
    out.write("ssb.csv", &csv.finish())?;
    out.write("ssb_caps.csv", &caps_csv.finish())?;
    out.write("ssb_limit.csv", &limit_csv.finish())?;
    println!(
        "limit state: {} points, entropy {:.12} (ln 2 = {:.12})",
        report.limit.support_size(),
        report.limit_entropy,
        std::f64::consts::LN_2
    );
    println!(
        "wrote {}, {}, {}",
        out.path("ssb.csv").display(),
        out.path("ssb_caps.csv").display(),
        out.path("ssb_limit.csv").display()
    );
    Ok(())
}

/// `fit-symbol`: measure the 1/N symbol correction.
pub fn cmd_fit_symbol(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let spec = cfg.require_model()?;
    let grid = cfg.require_grid()?;
    let fit = symbol_correction_fit(spec, grid)?;
    println!("fitted h1 = {}", fit.fitted);
    match (fit.agrees_with_nominal, fit.nominal_distance) {
        (Some(agree), Some(d)) => {
            println!(
                "nominal comparison: {} (coefficient distance {:.3e})",
                if agree { "agree" } else { "disagree" },
                d
            );
        }
        _ => println!("no nominal correction available for this model"),
    }
    let mut csv = Csv::new(&["N", "residual", "n2_residual"]);
    for (n, r) in &fit.residuals {
        csv.row(&[
            n.to_string(),
            fmt_f64(*r),
            fmt_f64(*r * (*n as f64) * (*n as f64)),
        ]);
        println!(
            "N={n:5}: residual = {r:.3e}, N²·residual = {:.3e}",
            r * (*n as f64).powi(2)
        );
    }
    out.write("fit.csv", &csv.finish())?;
    println!("wrote {}", out.path("fit.csv").display());
    Ok(())
}

/// `repro`: the full acceptance suite with a summary table.
pub fn cmd_repro(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let results = acceptance::run_all(cfg.seed)?;
    let mut summary = String::new();
    let mut log = String::new();
    let mut all_pass = true;
    for r in &results {
        let line = r.summary_line();
        println!("{line}");
        summary.push_str(&line);
        summary.push('\n');
        log.push_str(&line);
        log.push('\n');
        for d in &r.details {
            log.push_str("    ");
            log.push_str(d);
            log.push('\n');
        }
        all_pass &= r.pass;
    }
    out.write("acceptance_summary.txt", &summary)?;
    out.write("acceptance_details.log", &log)?;
    println!(
        "wrote {} and {}",
        out.path("acceptance_summary.txt").display(),
        out.path("acceptance_details.log").display()
    );
    if !all_pass {
        return Err(AppError::invariant("acceptance suite has failures"));
    }
    println!("all criteria pass");
    Ok(())
}
