//! One function per subcommand.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use multicrit::fredholm::S_RANGE;
use multicrit::limit_shape::compare_density;
use multicrit::sampler::{empirical_edge_cdf, sample_in_window, default_window};
use multicrit::toeplitz::{haar_expectation_mc, verify_gessel};
use multicrit::verify::{check_names, report_json, run_suite, VerifyConfig};
use multicrit::{
    cdf_range, normalized_toeplitz_det, parse_decimal, toeplitz_det, DensityProfile, EdgeScaling,
    Family, KappaTable, MeasureKind, MulticriticalParams, ScalingConvention, Statistic,
    ToeplitzSpec, TracyWidom,
};

use crate::output::{emit, header, Format, Payload};
use crate::{parse_convention, parse_stat, CliError, MeasureArgs};

pub struct Io {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl Io {
    fn write(self, command: &str, config: &impl Serialize, scaling: Option<&str>, payload: Payload, default: Format) -> Result<(), CliError> {
        let h = header(command, config, scaling);
        emit(&h, &payload, self.format.unwrap_or(default), self.out, command)
    }
}

impl MeasureArgs {
    fn params(&self) -> Result<MulticriticalParams, CliError> {
        let theta = parse_decimal(&self.theta).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(MulticriticalParams::with_exact_theta(self.kind, self.n, theta)?)
    }
}

fn check_range(from: f64, to: f64, what: &str) -> Result<(), CliError> {
    if to < from || !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage(format!("{what}: need finite from <= to, got [{from}, {to}]")));
    }
    Ok(())
}

fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    check_range(from, to, "grid")?;
    if !(step > 0.0) {
        return Err(CliError::Usage(format!("step must be positive, got {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

pub fn params(a: MeasureArgs, io: Io) -> Result<(), CliError> {
    let p = a.params()?;
    io.write("params", &a, None, Payload::Document(p.to_json()), Format::Json)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    measure: MeasureArgs,
    /// `lambda1` (gap probability) or `length`.
    #[arg(long, default_value = "lambda1", value_parser = parse_stat)]
    stat: Statistic,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    from: i64,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    to: i64,
}

pub fn gap(a: GapArgs, io: Io) -> Result<(), CliError> {
    check_range(a.from as f64, a.to as f64, "l range")?;
    let p = a.measure.params()?;
    let rows = cdf_range(p.spec(), a.stat, a.from, a.to)?
        .into_iter()
        .map(|g| vec![json!(g.l), json!(g.value), json!(g.impossible), json!(g.psd_violation)])
        .collect();
    let payload = Payload::Table {
        columns: vec!["l", "cdf", "impossible", "psd_violation"],
        rows,
    };
    io.write("gap", &a, None, payload, Format::Csv)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CdfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value = "lambda1", value_parser = parse_stat)]
    stat: Statistic,
    /// Fluctuation scale: `derived`, `theta-times-d` or `theta-over-d`.
    #[arg(long, default_value = "derived", value_parser = parse_convention)]
    convention: ScalingConvention,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    s_from: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    s_to: f64,
    #[arg(long, default_value_t = 0.5)]
    step: f64,
}

pub fn cdf(a: CdfArgs, io: Io) -> Result<(), CliError> {
    let s = grid(a.s_from, a.s_to, a.step)?;
    let p = a.measure.params()?;
    if p.spec().is_zero() {
        return Err(CliError::Library(multicrit::Error::InvalidInput(
            "edge scaling needs theta > 0".into(),
        )));
    }
    let sc = EdgeScaling::new(&p, a.stat, a.convention)?;
    let vals = multicrit::kernel::edge_scaled_cdf_grid(&p, a.stat, &s, a.convention)?;
    let tw = TracyWidom::new(sc.order)?;
    let mut rows = Vec::with_capacity(vals.len());
    for (x, g) in vals {
        let limit = if (S_RANGE.0..=S_RANGE.1).contains(&x) {
            json!(tw.cdf(x)?.value)
        } else {
            Value::Null
        };
        rows.push(vec![json!(x), json!(g.l), json!(g.value), limit]);
    }
    let payload = Payload::Table {
        columns: vec!["s", "l", "cdf", "limit"],
        rows,
    };
    let conv = a.convention.to_string();
    io.write("cdf", &json!({"args": a, "scaling": sc}), Some(&conv), payload, Format::Csv)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistTableArgs {
    /// Odd order 2n+1 >= 3.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    s_from: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    s_to: f64,
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    /// Quadrature nodes of the coarse scheme (the fine one doubles them).
    #[arg(long, default_value_t = multicrit::fredholm::DEFAULT_NODES)]
    nodes: usize,
}

pub fn dist_table(a: DistTableArgs, io: Io) -> Result<(), CliError> {
    let s = grid(a.s_from, a.s_to, a.step)?;
    let tw = TracyWidom::with_nodes(a.order, a.nodes)?;
    let rows = tw
        .table(s[0], *s.last().unwrap(), a.step)?
        .into_iter()
        .map(|v| vec![json!(v.s), json!(v.value), json!(v.self_convergence)])
        .collect();
    let payload = Payload::Table {
        columns: vec!["s", "F", "self_convergence"],
        rows,
    };
    io.write("dist-table", &a, None, payload, Format::Csv)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitShapeArgs {
    #[arg(long, default_value = "odd", value_parser = crate::parse_kind)]
    kind: MeasureKind,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// Append the kernel diagonal K(m, m), m = ⌊θu⌋, at this θ.
    #[arg(long)]
    compare_theta: Option<f64>,
}

pub fn limit_shape(a: LimitShapeArgs, io: Io) -> Result<(), CliError> {
    if !(a.grid_step > 0.0) {
        return Err(CliError::Usage("grid step must be positive".into()));
    }
    let profile = DensityProfile::new(a.kind, a.n, a.grid_step)?;
    let mut columns = vec!["u", "rho", "omega"];
    let mut rows: Vec<Vec<Value>> = profile
        .points
        .iter()
        .map(|&(u, r, o)| vec![json!(u), json!(r), json!(o)])
        .collect();
    if let Some(theta) = a.compare_theta {
        let p = MulticriticalParams::new(a.kind, a.n, theta)?;
        let us: Vec<f64> = profile.points.iter().map(|x| x.0).collect();
        let cmp = compare_density(&p, theta, &us)?;
        columns.extend(["site", "kernel_diagonal", "difference"]);
        for (row, c) in rows.iter_mut().zip(cmp) {
            row.extend([json!(c.site), json!(c.kernel_diagonal), json!(c.difference)]);
        }
    }
    let payload = Payload::Table { columns, rows };
    io.write(
        "limit-shape",
        &json!({"args": a, "left_edge": profile.left_edge, "right_edge": profile.right_edge}),
        None,
        payload,
        Format::Csv,
    )
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ToeplitzCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = 0)]
    from: usize,
    #[arg(long, default_value_t = 5)]
    to: usize,
    /// Enumeration cap |λ| <= cap for the Gessel sum.
    #[arg(long, default_value_t = 30)]
    enum_cap: usize,
    /// Haar Monte Carlo samples per size (0 skips the Monte Carlo route).
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn toeplitz_check(a: ToeplitzCheckArgs, io: Io) -> Result<(), CliError> {
    check_range(a.from as f64, a.to as f64, "size range")?;
    let p = a.measure.params()?;
    let spec = p.spec();
    let kt = KappaTable::new(spec)?;
    let conj = spec.omega();
    let conj_kt = KappaTable::new(&conj)?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for l in a.from..=a.to {
        let f = ToeplitzSpec::new(spec, Family::F, l)?;
        let g = ToeplitzSpec::new(spec, Family::G, l)?;
        let (f_det, g_det) = (toeplitz_det(&f)?, toeplitz_det(&g)?);
        let (f_norm, g_norm) = (normalized_toeplitz_det(&f)?, normalized_toeplitz_det(&g)?);
        let gap = kt.gap_probability(l as i64).value;
        let length = conj_kt.gap_probability(l as i64).value;
        let gessel = verify_gessel(spec, l as i64, a.enum_cap)?;
        let mc = if a.samples > 0 && l > 0 {
            Some(haar_expectation_mc(spec, l, a.samples, a.seed)?)
        } else {
            None
        };
        let diffs = json!({
            "g_vs_gap": (g_norm - gap).abs(),
            "f_vs_length": (f_norm - length).abs(),
            "gessel": gessel.difference,
        });
        worst = worst
            .max((g_norm - gap).abs())
            .max((f_norm - length).abs())
            .max(gessel.difference - gessel.tail_estimate);
        rows.push(json!({
            "l": l,
            "toeplitz_f": f_det, "toeplitz_g": g_det,
            "normalized_f": f_norm, "normalized_g": g_norm,
            "gap_lambda1": gap, "length_cdf": length,
            "gessel": gessel, "monte_carlo": mc,
            "differences": diffs,
        }));
    }
    let doc = json!({"rows": rows, "max_difference": worst, "log_normalizer": spec.log_normalizer()});
    io.write("toeplitz-check", &a, None, Payload::Document(doc), Format::Json)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the rescaled empirical CDF of this statistic instead of samples.
    #[arg(long, value_parser = parse_stat)]
    stat: Option<Statistic>,
    #[arg(long, default_value = "derived", value_parser = parse_convention)]
    convention: ScalingConvention,
    /// Include the full partitions.
    #[arg(long)]
    partitions: bool,
    /// Window low end (default: from the edge scalings).
    #[arg(long, allow_negative_numbers = true)]
    window_lo: Option<i64>,
    #[arg(long)]
    window_hi: Option<i64>,
}

pub fn sample(a: SampleArgs, io: Io) -> Result<(), CliError> {
    if a.count == 0 {
        return Err(CliError::Usage("count must be positive".into()));
    }
    let p = a.measure.params()?;
    let (dlo, dhi) = default_window(&p)?;
    let (lo, hi) = (a.window_lo.unwrap_or(dlo), a.window_hi.unwrap_or(dhi));
    let batch = sample_in_window(p.spec(), p.theta(), lo, hi, a.count, a.seed)?;
    let conv = a.convention.to_string();
    let config = json!({"args": a, "window": batch.window, "diagnostics": batch.diagnostics});
    let payload = match a.stat {
        Some(stat) => {
            let ecdf = empirical_edge_cdf(&batch, &p, stat, a.convention)?;
            Payload::Table {
                columns: vec!["s", "empirical_cdf"],
                rows: ecdf.into_iter().map(|(s, f)| vec![json!(s), json!(f)]).collect(),
            }
        }
        None => {
            let mut columns = vec!["index", "lambda1", "length", "size"];
            if a.partitions {
                columns.push("partition");
            }
            let rows = batch
                .samples
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut r = vec![json!(i), json!(s.first_part()), json!(s.length()), json!(s.size())];
                    if a.partitions {
                        r.push(json!(s.to_string()));
                    }
                    r
                })
                .collect();
            Payload::Table { columns, rows }
        }
    };
    io.write("sample", &config, Some(&conv), payload, Format::Csv)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Run only these checks (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Overrides for parametrized checks.
    #[arg(long, value_parser = crate::parse_kind)]
    kind: Option<MeasureKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

pub fn verify(a: VerifyArgs, io: Io) -> Result<(), CliError> {
    let known = check_names();
    if let Some(bad) = a.only.iter().find(|o| !known.contains(&o.as_str())) {
        return Err(CliError::Usage(format!("unknown check {bad:?}; known: {}", known.join(", "))));
    }
    let config = VerifyConfig {
        kind: a.kind,
        n: a.n,
        theta: a.theta,
        seed: a.seed,
    };
    let results = run_suite(&a.only, &config);
    let failed = results.iter().filter(|r| !r.passed).count();
    let scaling = ScalingConvention::default().to_string();
    let payload = match io.format {
        Some(Format::Csv) => Payload::Table {
            columns: vec!["check", "criterion", "passed", "seconds", "summary"],
            rows: results
                .iter()
                .map(|r| vec![json!(r.name), json!(r.criterion), json!(r.passed), json!(r.seconds), json!(r.summary)])
                .collect(),
        },
        _ => Payload::Document(report_json(&results)),
    };
    io.write("verify", &a, Some(&scaling), payload, Format::Json)?;
    for r in &results {
        eprintln!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.summary);
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}
