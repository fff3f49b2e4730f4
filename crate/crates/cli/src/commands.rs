//! The five batch commands. Each turns a validated [`RunConfig`] into a
//! CSV table plus a report; nothing is written here.

use num_complex::Complex64;
use rayon::prelude::*;

use helmholtz_bie::distcalc::{build_dtn, DensityPair};
use helmholtz_bie::geometry::{area_quadrature, make_boundary, Boundary, BoundarySpec, Location, Point};
use helmholtz_bie::layerpot::Side;
use helmholtz_bie::solver::{
    eigen_scan, exterior_second_green_form, find_dips, green_identity_residual, radiation_check, second_green_residual,
    solve_neumann, NeumannProblem, PointSample, SolveReport, Traces, RADIATION_GROWTH,
};
use helmholtz_bie::specfun::FundamentalSolution;
use helmholtz_bie::Error;

use crate::config::{Command, ConfigError, CurveConfig, DataConfig, GridConfig, RunConfig, SideName};
use crate::output::{Cell, Check, Report, Table};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Incompatible(Error),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::IncompatibleData { .. } => RunError::Incompatible(e),
            _ => RunError::Numerical(e),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Incompatible(_) => 3,
            RunError::Numerical(_) | RunError::Io(_) => 4,
        }
    }
}

pub struct Outcome {
    pub table: Table,
    pub report: Report,
}

type ClosedFn = Box<dyn Fn(Point) -> PointSample + Sync>;

pub fn execute(cfg: &RunConfig) -> Result<Outcome, RunError> {
    match cfg.command() {
        Command::SolveInterior => solve(cfg, Side::Interior),
        Command::SolveExterior => solve(cfg, Side::Exterior),
        Command::EigScan => scan(cfg),
        Command::Verify => verify(cfg),
        Command::Converge => converge(cfg),
    }
}

fn side_of(cfg: &RunConfig, default: Side) -> Side {
    match cfg.side {
        Some(SideName::Interior) => Side::Interior,
        Some(SideName::Exterior) => Side::Exterior,
        None => default,
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Interior => "interior",
        Side::Exterior => "exterior",
    }
}

fn boundary(cfg: &RunConfig, n: usize) -> Result<Boundary, RunError> {
    let spec = match cfg.curve.clone() {
        CurveConfig::Circle { center, radius } => BoundarySpec::Circle { center, radius },
        CurveConfig::Ellipse { center, semi_x, semi_y } => BoundarySpec::Ellipse { center, semi_x, semi_y },
        CurveConfig::Kite { center, scale } => BoundarySpec::Kite { center, scale },
        CurveConfig::Annulus { center, r_in, r_out } => BoundarySpec::Annulus { center, r_in, r_out },
        CurveConfig::Star { center, r0, cos, sin } => BoundarySpec::Star { center, r0, cos, sin },
    };
    make_boundary(&spec, n).map_err(|e| cfg.error_at(Some("curve"), "kind", e.to_string()).into())
}

fn wavenumber(cfg: &RunConfig) -> Complex64 {
    let (re, im) = cfg.k.expect("validated").parts();
    Complex64::new(re, im)
}

/// The closed-form field whose normal derivative is the data, checked to
/// solve the problem on `side`.
fn closed_form(cfg: &RunConfig, b: &Boundary, k: Complex64, side: Side) -> Result<Option<ClosedFn>, RunError> {
    match cfg.data.as_ref().expect("validated") {
        DataConfig::PointSource { source } => {
            let z = *source;
            let wanted = match side {
                Side::Interior => Location::Exterior,
                Side::Exterior => Location::Interior,
            };
            // The exclusion band only matters where the field is evaluated.
            if b.side_of(z) != wanted || b.min_node_distance(z) == 0.0 {
                return Err(cfg
                    .error_at(
                        Some("data"),
                        "source",
                        format!("a point source for the {} problem must lie strictly on the other side", side_name(side)),
                    )
                    .into());
            }
            let fs = FundamentalSolution::radiating(2, k).map_err(|e| cfg.error_at(None, "k", e.to_string()))?;
            Ok(Some(Box::new(move |x: Point| {
                let d = [x[0] - z[0], x[1] - z[1]];
                let r = d[0].hypot(d[1]);
                let value = fs.radial_value(r).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                let dr = fs.radial_derivative(r).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                PointSample { value, gradient: [dr * d[0] / r, dr * d[1] / r], laplacian: -k * k * value }
            })))
        }
        DataConfig::PlaneWave { direction } => {
            if side == Side::Exterior {
                return Err(cfg
                    .error_at(Some("data"), "kind", "a plane wave does not radiate; use it for interior problems")
                    .into());
            }
            let d = *direction;
            Ok(Some(Box::new(move |x: Point| {
                let value = (Complex64::i() * k * (d[0] * x[0] + d[1] * x[1])).exp();
                let g = Complex64::i() * k * value;
                PointSample { value, gradient: [g * d[0], g * d[1]], laplacian: -k * k * value }
            })))
        }
        DataConfig::File { .. } => Ok(None),
    }
}

fn normal_trace(b: &Boundary, u: &ClosedFn) -> Vec<Complex64> {
    b.points
        .iter()
        .zip(&b.normals)
        .map(|(&p, nu)| {
            let s = u(p);
            s.gradient[0] * nu[0] + s.gradient[1] * nu[1]
        })
        .collect()
}

/// Node data from a CSV file with columns `mu0_re, mu0_im` and optionally
/// `mu1_re, mu1_im`; `#` lines are comments.
fn read_data_file(cfg: &RunConfig, b: &Boundary) -> Result<DensityPair, RunError> {
    let Some(DataConfig::File { path }) = &cfg.data else { unreachable!("caller checked") };
    let path = cfg.resolve(path);
    let fail = |m: String| -> RunError { cfg.error_at(Some("data"), "path", format!("{}: {m}", path.display())).into() };
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(&path)
        .map_err(|e| fail(e.to_string()))?;
    let headers = rd.headers().map_err(|e| fail(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(r0), Some(i0)) = (col("mu0_re"), col("mu0_im")) else {
        return Err(fail("needs columns mu0_re and mu0_im".into()));
    };
    let second = match (col("mu1_re"), col("mu1_im")) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(fail("mu1_re and mu1_im must appear together".into())),
    };
    let (mut mu0, mut mu1) = (vec![], vec![]);
    for (row, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| fail(e.to_string()))?;
        let num = |c: usize| -> Result<f64, RunError> {
            rec.get(c)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| fail(format!("data row {}: column {} is not a number", row + 1, &headers[c])))
        };
        mu0.push(Complex64::new(num(r0)?, num(i0)?));
        mu1.push(match second {
            Some((a, c)) => Complex64::new(num(a)?, num(c)?),
            None => Complex64::from(0.0),
        });
    }
    if mu0.len() != b.len() {
        return Err(fail(format!("{} rows for {} boundary nodes", mu0.len(), b.len())));
    }
    DensityPair::new(mu0, mu1).map_err(|e| fail(e.to_string()))
}

fn problem_data(cfg: &RunConfig, b: &Boundary, exact: Option<&ClosedFn>) -> Result<DensityPair, RunError> {
    match exact {
        Some(u) => Ok(DensityPair::classical(normal_trace(b, u))),
        None => read_data_file(cfg, b),
    }
}

fn checked_probes(cfg: &RunConfig, b: &Boundary, side: Side) -> Result<Vec<Point>, RunError> {
    for p in &cfg.probes {
        if b.locate(*p) != side.location() {
            return Err(cfg
                .error_at(
                    None,
                    "probes",
                    format!(
                        "probe ({}, {}) is not in the {} domain at least one grid spacing from the boundary",
                        p[0],
                        p[1],
                        side_name(side)
                    ),
                )
                .into());
        }
    }
    Ok(cfg.probes.clone())
}

/// Grid points on the problem's side, clear of the boundary band.
fn grid_points(cfg: &RunConfig, b: &Boundary, side: Side) -> Vec<Point> {
    let pts: Vec<Point> = match &cfg.grid {
        None => vec![],
        Some(GridConfig::Polar { center, radii, angles }) => radii
            .iter()
            .flat_map(|&r| {
                (0..*angles).map(move |j| {
                    let t = 2.0 * std::f64::consts::PI * j as f64 / *angles as f64;
                    [center[0] + r * t.cos(), center[1] + r * t.sin()]
                })
            })
            .collect(),
        Some(GridConfig::Cartesian { bbox, nx, ny }) => (0..*ny)
            .flat_map(|j| {
                (0..*nx).map(move |i| {
                    [
                        bbox[0] + (bbox[1] - bbox[0]) * i as f64 / (*nx - 1) as f64,
                        bbox[2] + (bbox[3] - bbox[2]) * j as f64 / (*ny - 1) as f64,
                    ]
                })
            })
            .collect(),
    };
    pts.into_iter().filter(|p| b.locate(*p) == side.location()).collect()
}

fn max_error(rep: &SolveReport, u: &ClosedFn, points: &[Point]) -> Result<f64, RunError> {
    let errs = points
        .par_iter()
        .map(|&x| Ok((rep.field.eval(x)? - u(x).value).norm()))
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

fn describe_solve(report: &mut Report, rep: &SolveReport, cfg: &RunConfig, b: &Boundary, k: Complex64, side: Side) {
    report.note(format!("problem: {} Neumann, k = {} + {}i", side_name(side), k.re, k.im));
    report.note(format!("curve nodes: {} ({} per component)", b.len(), b.nodes_per_component()));
    report.note(format!(
        "sigma_min = {:.6e}, sigma_max = {:.6e}, relative {:.3e}",
        rep.sigma_min,
        rep.sigma_max,
        rep.sigma_min / rep.sigma_max
    ));
    if rep.least_squares {
        report.note(format!(
            "system numerically singular: least-squares solution, compatibility defect {:.3e}",
            rep.compatibility_defect
        ));
    }
    report.note(format!("boundary residual max|A phi - g| = {:.3e}", rep.residual_boundary));
    report.check(Check::at_most("boundary residual", rep.residual_boundary, cfg.tolerances.residual));
}

fn radiation_rows(report: &mut Report, name: &str, r: &helmholtz_bie::solver::RadiationReport) {
    let rows: Vec<String> = r.rows.iter().map(|(radius, q)| format!("q({radius}) = {q:.3e}")).collect();
    report.note(format!("{name}: {}", rows.join(", ")));
    if !r.beyond_safety_radius {
        report.note(format!("{name}: some radii lie inside the safety radius; the ratios may be pre-asymptotic"));
    }
}

fn max_ratio(r: &helmholtz_bie::solver::RadiationReport) -> f64 {
    r.ratios.iter().cloned().fold(0.0, f64::max)
}

fn solve(cfg: &RunConfig, side: Side) -> Result<Outcome, RunError> {
    let k = wavenumber(cfg);
    let b = boundary(cfg, cfg.n)?;
    let exact = closed_form(cfg, &b, k, side)?;
    let probes = checked_probes(cfg, &b, side)?;
    let data = problem_data(cfg, &b, exact.as_ref())?;
    let rep = solve_neumann(&NeumannProblem { side, k, boundary: b.clone(), data })?;

    let mut report = Report::default();
    describe_solve(&mut report, &rep, cfg, &b, k, side);

    let mut points = probes;
    points.extend(grid_points(cfg, &b, side));
    let values = points.par_iter().map(|&x| rep.field.eval(x)).collect::<Result<Vec<_>, Error>>()?;
    let mut table = Table::new(&["x", "y", "re_u", "im_u", "re_exact", "im_exact", "abs_error"]);
    let mut worst: f64 = 0.0;
    for (x, u) in points.iter().zip(&values) {
        let mut row: Vec<Cell> = vec![x[0].into(), x[1].into(), u.re.into(), u.im.into()];
        match &exact {
            Some(f) => {
                let e = f(*x).value;
                worst = worst.max((u - e).norm());
                row.extend([e.re.into(), e.im.into(), (u - e).norm().into()]);
            }
            None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty]),
        }
        table.push(row);
    }
    report.note(format!("field samples: {}", points.len()));
    if exact.is_some() && !points.is_empty() {
        report.note(format!("max error against the closed-form field: {worst:.3e}"));
        report.check(Check::at_most("field error", worst, cfg.tolerances.field));
    }
    if side == Side::Exterior {
        let rad = &cfg.radiation;
        let field = &rep.field;
        let f = |x: Point| field.eval_with_gradient(x);
        let r = radiation_check(&f, k, &rad.radii, rad.directions, Some(b.max_radius()), rad.floor)?;
        radiation_rows(&mut report, "radiation (solution)", &r);
        report.check(Check::at_most("radiation growth (solution)", max_ratio(&r), RADIATION_GROWTH));
    }
    Ok(Outcome { table, report })
}

fn verify(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let side = side_of(cfg, Side::Exterior);
    let k = wavenumber(cfg);
    let b = boundary(cfg, cfg.n)?;
    let u = closed_form(cfg, &b, k, side)?.expect("validated closed form");
    let probes = checked_probes(cfg, &b, side)?;
    let rep = solve_neumann(&NeumannProblem { side, k, boundary: b.clone(), data: problem_data(cfg, &b, Some(&u))? })?;
    let tol = &cfg.tolerances;

    let mut report = Report::default();
    describe_solve(&mut report, &rep, cfg, &b, k, side);
    report.check(Check::at_most("field error at probes", max_error(&rep, &u, &probes)?, tol.field));

    let exact = |x: Point| Ok(u(x).value);
    let max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    let closed = green_identity_residual(&Traces::from_closed_form(&b, &*u), &exact, &b, k, side, &probes)?;
    report.check(Check::at_most("third Green identity (closed-form traces)", max(closed), tol.green));
    let solved = green_identity_residual(&Traces::from_field(&rep.field)?, &exact, &b, k, side, &probes)?;
    report.check(Check::at_most("third Green identity (solution traces)", max(solved), tol.green));

    match side {
        Side::Exterior => {
            let rad = &cfg.radiation;
            let field = &rep.field;
            let g = |x: Point| field.eval_with_gradient(x);
            let r = radiation_check(&g, k, &rad.radii, rad.directions, Some(b.max_radius()), rad.floor)?;
            radiation_rows(&mut report, "radiation (solution)", &r);
            report.check(Check::at_most("radiation growth (solution)", max_ratio(&r), RADIATION_GROWTH));
            let f = |x: Point| {
                let s = u(x);
                Ok((s.value, s.gradient))
            };
            let r = radiation_check(&f, k, &rad.radii, rad.directions, Some(b.max_radius()), rad.floor)?;
            report.check(Check::at_most("radiation growth (closed form)", max_ratio(&r), RADIATION_GROWTH));
            if k.im == 0.0 {
                // The conjugate field is an incoming wave; the diagnostic must flag it.
                let h = |x: Point| {
                    let s = u(x);
                    Ok((s.value.conj(), [s.gradient[0].conj(), s.gradient[1].conj()]))
                };
                let r = radiation_check(&h, k, &rad.radii, rad.directions, None, rad.floor)?;
                let min = r.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                report.check(Check::at_least("incoming wave flagged (min growth ratio)", min, 1.5 * RADIATION_GROWTH));
            }
            if let Some(DataConfig::PointSource { source }) = &cfg.data {
                // Pair the data field with a second radiating source at the
                // node centroid, when that lies inside the body too.
                let m = b.len() as f64;
                let z2 = [
                    b.points.iter().map(|p| p[0]).sum::<f64>() / m,
                    b.points.iter().map(|p| p[1]).sum::<f64>() / m,
                ];
                if b.locate(z2) == Location::Interior && (z2[0] - source[0]).hypot(z2[1] - source[1]) > 1e-3 {
                    let fs = FundamentalSolution::radiating(2, k)?;
                    let v = move |x: Point| {
                        let d = [x[0] - z2[0], x[1] - z2[1]];
                        let r = d[0].hypot(d[1]);
                        let value = fs.radial_value(r).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        let dr = fs.radial_derivative(r).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        PointSample { value, gradient: [dr * d[0] / r, dr * d[1] / r], laplacian: -k * k * value }
                    };
                    let form = exterior_second_green_form(&*u, &v, &b);
                    report.check(Check::at_most("exterior second Green form", form, tol.green));
                }
            }
        }
        Side::Interior => match area_quadrature(&b, None, 20, 2 * b.nodes_per_component()) {
            Ok(aq) => {
                let dtn = build_dtn(&b)?;
                let x1 = |p: Point| PointSample {
                    value: Complex64::from(p[0]),
                    gradient: [Complex64::from(1.0), Complex64::from(0.0)],
                    laplacian: Complex64::from(0.0),
                };
                let res = second_green_residual(&*u, &x1, &dtn, &aq)?;
                report.check(Check::at_most("distributional second Green identity", res, tol.second_green));
            }
            Err(Error::UnsupportedDomain(why)) => {
                report.note(format!("second Green identity skipped: {why}"));
            }
            Err(e) => return Err(e.into()),
        },
    }

    let mut table = Table::new(&["check", "value", "threshold", "status"]);
    for c in &report.checks {
        table.push(vec![
            c.name.as_str().into(),
            c.value.into(),
            c.threshold.into(),
            if c.pass { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    Ok(Outcome { table, report })
}

fn converge(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let side = side_of(cfg, Side::Exterior);
    let k = wavenumber(cfg);
    let conv = &cfg.converge;
    let mut report = Report::default();
    let mut table = Table::new(&["n", "max_error", "reduction"]);
    let mut errors = vec![];
    for &n in &conv.n {
        let b = boundary(cfg, n)?;
        let u = closed_form(cfg, &b, k, side)?.expect("validated closed form");
        let probes = checked_probes(cfg, &b, side)?;
        let data = problem_data(cfg, &b, Some(&u))?;
        let rep = solve_neumann(&NeumannProblem { side, k, boundary: b, data })?;
        let e = max_error(&rep, &u, &probes)?;
        let reduction = errors.last().map(|prev: &f64| prev / e);
        table.push(vec![n.into(), e.into(), reduction.map_or(Cell::Empty, Cell::Float)]);
        report.note(format!("N = {n}: max probe error {e:.3e}"));
        errors.push(e);
    }
    for (w, levels) in errors.windows(2).zip(conv.n.windows(2)) {
        let name = format!("error reduction N={}->{}", levels[0], levels[1]);
        if w[1] < conv.floor {
            report.note(format!("{name}: error below floor {:.1e}", conv.floor));
            report.check(Check { name, value: w[0] / w[1].max(f64::MIN_POSITIVE), threshold: conv.min_factor, pass: true });
        } else {
            report.check(Check::at_least(name, w[0] / w[1], conv.min_factor));
        }
    }
    report.check(Check::at_most("finest-level field error", *errors.last().expect("two levels"), cfg.tolerances.field));
    Ok(Outcome { table, report })
}

fn scan(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let side = side_of(cfg, Side::Interior);
    let s = cfg.scan.as_ref().expect("validated");
    let b = boundary(cfg, cfg.n)?;
    let samples = eigen_scan(&b, side, s.k_min, s.k_max, s.samples)?;
    let dips = find_dips(&b, side, &samples)?;

    let mut table = Table::new(&["kind", "k", "sigma_min", "sigma_max", "sigma_rel"]);
    for (kind, list) in [("sample", &samples), ("dip", &dips)] {
        for p in list.iter() {
            table.push(vec![kind.into(), p.k.into(), p.sigma_min.into(), p.sigma_max.into(), p.relative().into()]);
        }
    }
    let mut report = Report::default();
    report.note(format!(
        "{} scan of k in [{}, {}], {} samples, {} nodes",
        side_name(side),
        s.k_min,
        s.k_max,
        s.samples,
        b.len()
    ));
    for d in &dips {
        report.note(format!("dip at k = {:.10} (relative sigma_min {:.3e})", d.k, d.relative()));
    }
    if dips.is_empty() {
        report.note("no dips found");
    }
    for &e in &s.expect {
        let dist = dips.iter().map(|d| (d.k - e).abs()).fold(f64::INFINITY, f64::min);
        report.check(Check::at_most(format!("dip near k = {e}"), dist, s.tolerance));
    }
    Ok(Outcome { table, report })
}
