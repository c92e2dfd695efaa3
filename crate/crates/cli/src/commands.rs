use num_complex::Complex64;

use kohn_spectrum::coefficients::{self, CoefficientEstimate, Method, ReconcileOptions};
use kohn_spectrum::continuation::{self, StripPoint};
use kohn_spectrum::heat_trace::{self, HeatTraceOptions};
use kohn_spectrum::spectrum;
use kohn_spectrum::Error;

use crate::args::{CoeffArgs, ConvergeArgs, CountArgs, HeatArgs, MethodChoice, StantonArgs};
use crate::report::{Cell, Report};

/// How a command ended, beyond library errors.
#[derive(Debug)]
pub enum Failure {
    Library(Error),
    /// The computation finished but a cross-check did not hold.
    Check(Report, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

pub type Outcome = Result<Report, Failure>;

/// Whether a subcommand prefers CSV over the aligned table.
pub fn prefers_csv(command: &crate::args::Command) -> bool {
    use crate::args::Command;
    match command {
        Command::Count(a) => a.modes,
        Command::Stanton(a) => a.grid.is_some(),
        _ => false,
    }
}

fn estimate_row(e: &CoefficientEstimate) -> Vec<Cell> {
    vec![
        Cell::from(e.method.as_str()),
        Cell::from(e.value),
        Cell::from(e.error_bound),
        Cell::from(e.work),
        Cell::from(e.exact_form.as_ref().map(|f| f.to_string())),
    ]
}

pub fn coeff(args: &CoeffArgs) -> Outcome {
    let columns = vec!["method", "value", "error_bound", "work", "exact_form"];
    let mut report = Report::new("coeff", columns);
    report.meta("n", args.n);
    let single = match args.method {
        MethodChoice::SeriesDirect => Some(Method::SeriesDirect),
        MethodChoice::SeriesZeta => Some(Method::SeriesZeta),
        MethodChoice::Integral => Some(Method::Integral),
        MethodChoice::Intermediate => Some(Method::IntegralIntermediate),
        MethodChoice::All => None,
    };
    if let Some(method) = single {
        let e = coefficients::estimate(args.n, method, args.tol, args.terms)?;
        report.row(estimate_row(&e));
        return Ok(report);
    }

    let opts = ReconcileOptions { tol: args.tol, direct_terms: args.terms };
    let rec = coefficients::reconcile_with(args.n, &opts);
    if let Some((_, err)) = rec.failures.first() {
        return Err(Failure::Library(err.clone()));
    }
    for e in &rec.estimates {
        report.row(estimate_row(e));
    }
    report.meta("max_pairwise_difference", rec.max_difference());
    report.meta("reconciled", rec.passed());
    if rec.passed() {
        Ok(report)
    } else {
        let bad: Vec<String> = rec
            .pairs
            .iter()
            .filter(|p| !p.passed())
            .map(|p| format!("{} vs {}: {:e} > {:e}", p.first, p.second, p.difference, p.allowed))
            .collect();
        Err(Failure::Check(report, format!("methods disagree beyond their error bounds: {}", bad.join("; "))))
    }
}

pub fn count(args: &CountArgs) -> Outcome {
    let n = spectrum::count_capped(args.n, args.lambda, args.line_cap)?;
    let ratio = if args.lambda > 0.0 { Some(spectrum::counting_ratio_capped(args.n, args.lambda, args.line_cap)?) } else { None };
    if args.modes {
        let mut report = Report::new("count", vec!["p", "q", "eigenvalue", "multiplicity"]);
        report.meta("n", args.n);
        report.meta("lambda", args.lambda);
        report.meta("count", n);
        report.meta("ratio", ratio);
        for line in spectrum::enumerate_modes_capped(args.n, args.lambda, args.line_cap)? {
            report.row(vec![
                Cell::from(line.mode.p()),
                Cell::from(line.mode.q()),
                Cell::from(line.eigenvalue),
                Cell::from(line.multiplicity),
            ]);
        }
        return Ok(report);
    }
    let mut report = Report::new("count", vec!["n", "lambda", "count", "ratio"]);
    report.row(vec![Cell::from(args.n), Cell::from(args.lambda), Cell::from(n), Cell::from(ratio)]);
    Ok(report)
}

pub fn heat(args: &HeatArgs) -> Outcome {
    let opts = HeatTraceOptions { term_cap: args.term_cap, min_t: args.min_t, ..Default::default() };
    let mut columns = vec!["t", "g", "scaled_trace", "truncation_bound", "terms_used"];
    if args.verify {
        columns.extend(["g_direct", "direct_bound", "difference", "verified"]);
    }
    let mut report = Report::new("heat", columns);
    report.meta("n", args.n);
    let mut failed = Vec::new();
    for &t in &args.t {
        let g = heat_trace::heat_trace_with(args.n, t, &opts)?;
        let mut row = vec![
            Cell::from(t),
            Cell::from(g.value),
            Cell::from(t.powi(args.n as i32) * g.value),
            Cell::from(g.truncation_bound),
            Cell::from(g.terms_used),
        ];
        if args.verify {
            let d = heat_trace::g_direct_with(args.n, t, &opts)?;
            let diff = (d.value - g.value).abs();
            let ok = diff <= d.truncation_bound + g.truncation_bound;
            if !ok {
                failed.push(t);
            }
            row.extend([Cell::from(d.value), Cell::from(d.truncation_bound), Cell::from(diff), Cell::from(ok)]);
        }
        report.row(row);
    }
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(Failure::Check(report, format!("direct sum disagrees beyond truncation bounds at t = {failed:?}")))
    }
}

pub fn converge(args: &ConvergeArgs) -> Outcome {
    if args.lambdas.is_empty() {
        return Err(Error::InvalidArgument("at least one lambda is required".into()).into());
    }
    let c = coefficients::series_zeta(args.n)?.value;
    let mut report = Report::new("converge", vec!["lambda", "count", "ratio", "error"]);
    report.meta("n", args.n);
    report.meta("weyl_coefficient", c);
    for &lambda in &args.lambdas {
        let count = spectrum::count_capped(args.n, lambda, args.line_cap)?;
        let ratio = spectrum::counting_ratio_capped(args.n, lambda, args.line_cap)?;
        report.row(vec![Cell::from(lambda), Cell::from(count), Cell::from(ratio), Cell::from(ratio - c)]);
    }
    Ok(report)
}

fn split(z: Option<Complex64>) -> [Cell; 2] {
    match z {
        Some(z) => [Cell::from(z.re), Cell::from(z.im)],
        None => [Cell::Empty, Cell::Empty],
    }
}

fn stanton_row(n: u32, q: Complex64, tol: f64) -> Result<Vec<Cell>, Error> {
    let point = StripPoint::new(n, q)?;
    if !point.in_g_strip() {
        return Err(Error::OutOfStrip { re: q.re, im: q.im, lo: -1.0, hi: point.m() as f64 });
    }
    let g = continuation::g_cont(&point, tol)?;
    let f = match continuation::f_st(&point, tol) {
        Ok(f) => Some(f),
        Err(Error::OutOfStrip { .. }) | Err(Error::InvalidArgument(_)) => None,
        Err(e) => return Err(e),
    };
    let pole = match continuation::pole_term(&point) {
        Ok(p) => Some(p),
        Err(Error::Pole(_)) => None,
        Err(e) => return Err(e),
    };
    let residual = match (f, pole) {
        (Some(f), Some(p)) => Some((f - g - p).norm()),
        _ => None,
    };
    let status = if f.is_some() { "ok" } else { "out-of-domain" };
    let mut row = vec![Cell::from(q.re), Cell::from(q.im), Cell::from(status)];
    row.extend(split(f));
    row.extend(split(Some(g)));
    row.extend(split(pole));
    row.push(Cell::from(residual));
    Ok(row)
}

pub fn stanton(args: &StantonArgs) -> Outcome {
    let columns = vec!["q_re", "q_im", "f_status", "f_re", "f_im", "g_re", "g_im", "pole_re", "pole_im", "residual"];
    let mut report = Report::new("stanton", columns);
    report.meta("n", args.n);
    StripPoint::new(args.n, Complex64::new(0.0, 0.0))?;
    let points = match (&args.grid, args.q) {
        (Some(grid), _) => grid.points(),
        (None, Some(q)) => vec![q],
        (None, None) => return Err(Error::InvalidArgument("either --q or --grid is required".into()).into()),
    };
    for q in &points {
        report.row(stanton_row(args.n, *q, args.tol)?);
    }
    if let (None, Some(q)) = (&args.grid, args.q) {
        if q.norm() == 0.0 {
            let c = coefficients::series_zeta(args.n)?.value;
            let g = continuation::g_cont(&StripPoint::new(args.n, q)?, args.tol)?;
            report.meta("weyl_coefficient", c);
            report.meta("g0_minus_weyl", (g - Complex64::new(c, 0.0)).norm());
        }
    }
    Ok(report)
}
