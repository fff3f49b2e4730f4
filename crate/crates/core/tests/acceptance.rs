//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::*;
use helmholtz_bie::distcalc::{build_dtn, dist_normal_derivative, DensityPair, SchauderMinusOne};
use helmholtz_bie::geometry::{area_quadrature, Boundary, Point};
use helmholtz_bie::layerpot::{assemble, jump_check, OperatorKind, Representation, Side, SolutionField};
use helmholtz_bie::solver::*;
use helmholtz_bie::specfun::FundamentalSolution;
use helmholtz_bie::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String)>;

fn random_point(n: usize, rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            let r = rng.gen_range(rmin..rmax);
            return v.iter().map(|a| a / norm * r).collect();
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut agree: f64 = 0.0;
    for n in [2, 3, 4] {
        for k in [c(1.0), Complex64::new(2.0, 0.5)] {
            let fs = FundamentalSolution::radiating(n, k)?;
            for _ in 0..100 {
                let x = random_point(n, &mut rng, 0.05, 10.0);
                agree = agree.max(rel(fs.value_series(&x)?, fs.value_hankel(&x)?));
            }
        }
    }
    let mut closed: f64 = 0.0;
    for k in [c(1.0), Complex64::new(2.0, 0.5)] {
        let fs = FundamentalSolution::radiating(3, k)?;
        for _ in 0..100 {
            let x = random_point(3, &mut rng, 0.05, 10.0);
            let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let want = -(Complex64::i() * k * r).exp() / (4.0 * PI * r);
            closed = closed.max(rel(fs.value(&x)?, want));
        }
    }
    Ok((agree < 1e-10 && closed < 1e-12, format!("series/Hankel {agree:.1e}, n=3 closed form {closed:.1e}")))
}

fn pde_residual() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4] {
        for k in [c(1.0), Complex64::new(2.0, 0.5)] {
            let fs = FundamentalSolution::radiating(n, k)?;
            for _ in 0..20 {
                let x = random_point(n, &mut rng, 0.5, 3.0);
                let h = 1e-4;
                let u = fs.value(&x)?;
                let mut lap = -2.0 * n as f64 * u;
                let mut y = x.clone();
                for d in 0..n {
                    y[d] = x[d] + h;
                    lap += fs.value(&y)?;
                    y[d] = x[d] - h;
                    lap += fs.value(&y)?;
                    y[d] = x[d];
                }
                lap /= h * h;
                worst = worst.max((lap + k * k * u).norm() / (k * k * u).norm());
            }
        }
    }
    Ok((worst < 1e-5, format!("max relative residual {worst:.1e}")))
}

fn jump_relations() -> Outcome {
    let fs = FundamentalSolution::radiating(2, c(1.0))?;
    let density = |p: &Point| Complex64::new((p[0] + 0.5 * p[1]).cos(), p[1] * p[0]);
    let mut ok = true;
    let mut detail = vec![];
    for (name, make) in [("circle", circle as fn(usize) -> Boundary), ("kite", kite)] {
        let mut errs = vec![];
        for n in [32, 64, 128] {
            let b = make(n);
            let w = assemble(OperatorKind::Double, &fs, &b)?;
            let mu: Vec<Complex64> = b.points.iter().map(density).collect();
            let nodes: Vec<usize> = (0..b.len()).step_by(b.len() / 8).collect();
            let e = jump_check(&w, &mu, &nodes)?.iter().map(|j| j.err_plus.max(j.err_minus)).fold(0.0, f64::max);
            errs.push(e);
        }
        let ratios_ok = errs.windows(2).all(|w| w[1] <= 0.25 * w[0] || w[1] < 1e-10);
        ok &= errs[2] < 1e-6 && ratios_ok;
        detail.push(format!("{name} {:.1e}/{:.1e}/{:.1e}", errs[0], errs[1], errs[2]));
    }
    Ok((ok, format!("max jump error at N=32/64/128: {}", detail.join(", "))))
}

fn gauss_sanity() -> Outcome {
    let lap = FundamentalSolution::laplace(2)?;
    let mut w1: f64 = 0.0;
    let mut dl: f64 = 0.0;
    for b in [circle(64), kite(128)] {
        let ones = vec![c(1.0); b.len()];
        let w = assemble(OperatorKind::Double, &lap, &b)?.apply(&ones)?;
        w1 = w1.max(w.iter().map(|z| (z - 0.5).norm()).fold(0.0, f64::max));
        let inside = SolutionField::new(lap, b.clone(), Representation::DoubleLayer, ones.clone(), Side::Interior)?;
        let outside = SolutionField::new(lap, b.clone(), Representation::DoubleLayer, ones, Side::Exterior)?;
        for x in [[0.0, 0.0], [-0.4, 0.3]] {
            dl = dl.max((inside.eval(x)? - 1.0).norm());
        }
        for x in [[3.0, 0.0], [-2.0, 2.5]] {
            dl = dl.max(outside.eval(x)?.norm());
        }
    }
    Ok((w1 < 1e-10 && dl < 1e-10, format!("|W·1 − ½| {w1:.1e}, |w[1] − 1_Ω| {dl:.1e}")))
}

fn dtn_spectrum() -> Outcome {
    let n = 64;
    let b = circle(n);
    let dtn = build_dtn(&b)?;
    let mut spec: f64 = 0.0;
    for m in -(n as i32 / 4)..=(n as i32 / 4) {
        let e: Vec<Complex64> = b.points.iter().map(|p| Complex64::from_polar(1.0, m as f64 * p[1].atan2(p[0]))).collect();
        let out = dtn.apply(&e)?;
        spec = spec.max(out.iter().zip(&e).map(|(a, x)| (a - x * m.abs() as f64).norm()).fold(0.0, f64::max));
    }
    let ones = vec![c(1.0); b.len()];
    let kernel = dtn.apply(&ones)?.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut asym, mut neg): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let u: Vec<Complex64> = (0..b.len()).map(|_| c(rng.gen_range(-1.0..1.0))).collect();
        let v: Vec<Complex64> = (0..b.len()).map(|_| c(rng.gen_range(-1.0..1.0))).collect();
        let (du, dv) = (dtn.apply(&u)?, dtn.apply(&v)?);
        let form = |a: &[Complex64], d: &[Complex64]| -> Complex64 { (0..b.len()).map(|i| b.weights[i] * a[i] * d[i]).sum() };
        asym = asym.max((form(&u, &dv) - form(&v, &du)).norm());
        neg = neg.max(-form(&v, &dv).re);
    }
    Ok((
        spec < 1e-8 && kernel < 1e-8 && asym < 1e-8 && neg <= 1e-8,
        format!("symbol {spec:.1e}, DtN·1 {kernel:.1e}, asymmetry {asym:.1e}, min energy {:.1e}", -neg),
    ))
}

fn distributional_pairings() -> Outcome {
    let b = circle(128);
    let dtn = build_dtn(&b)?;
    let aq = area_quadrature(&b, None, 20, 128)?;
    let classical = |grad: &dyn Fn(Point) -> [Complex64; 2], v: &[Complex64]| -> Complex64 {
        (0..b.len())
            .map(|i| {
                let g = grad(b.points[i]);
                let nu = b.normals[i];
                b.weights[i] * (g[0] * nu[0] + g[1] * nu[1]) * v[i]
            })
            .sum()
    };
    let v: Vec<Complex64> = b
        .points
        .iter()
        .map(|p| {
            let t = p[1].atan2(p[0]);
            Complex64::new(t.cos() - 0.4 * (2.0 * t).cos() + 0.7, 0.2 * (5.0 * t).sin())
        })
        .collect();
    let zero = SchauderMinusOne::function(&aq, &b, |_| c(0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_h: f64 = 0.0;
    for _ in 0..20 {
        let deg = rng.gen_range(1..=5usize);
        let alpha: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let beta: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u: Vec<Complex64> = b
            .points
            .iter()
            .map(|p| {
                let z = Complex64::new(p[0], p[1]);
                (0..=deg).map(|m| c(alpha[m] * z.powu(m as u32).re + beta[m] * z.powu(m as u32).im)).sum()
            })
            .collect();
        let grad = |p: Point| {
            let z = Complex64::new(p[0], p[1]);
            let mut g = [c(0.0), c(0.0)];
            for m in 1..=deg {
                let dz = m as f64 * z.powu(m as u32 - 1);
                g[0] += alpha[m] * dz.re + beta[m] * dz.im;
                g[1] += -alpha[m] * dz.im + beta[m] * dz.re;
            }
            g
        };
        worst_h = worst_h.max((dist_normal_derivative(&u, &zero, &v, &dtn, &aq)? - classical(&grad, &v)).norm());
    }
    let mut worst_p: f64 = 0.0;
    for (k, d) in [(1.0, [0.6, 0.8]), (2.0, [1.0, 0.0]), (3.0, [-0.28, 0.96])] {
        let pw = plane_wave(c(k), d);
        let u: Vec<Complex64> = b.points.iter().map(|&p| pw(p).value).collect();
        let lap = SchauderMinusOne::function(&aq, &b, |p| pw(p).laplacian);
        let grad = |p: Point| pw(p).gradient;
        worst_p = worst_p.max((dist_normal_derivative(&u, &lap, &v, &dtn, &aq)? - classical(&grad, &v)).norm());
    }
    Ok((worst_h < 1e-6 && worst_p < 1e-6, format!("harmonic polynomials {worst_h:.1e}, plane waves {worst_p:.1e}")))
}

fn solve(side: Side, k: Complex64, b: &Boundary, g: Vec<Complex64>) -> Result<SolveReport> {
    solve_neumann(&NeumannProblem { side, k, boundary: b.clone(), data: DensityPair::classical(g) })
}

fn exterior_manufactured() -> Outcome {
    let k = c(1.0);
    let probes = [[3.0, 1.0], [-2.0, 2.5], [0.0, -4.0]];
    let mut ok = true;
    let mut detail = vec![];
    for (name, make, z) in [("circle", circle as fn(usize) -> Boundary, [0.2, 0.0]), ("kite", kite, [0.2, 0.1])] {
        let u = point_source(k, z);
        let mut errs = vec![];
        for n in [32, 64, 128, 256] {
            let b = make(n);
            let rep = solve(Side::Exterior, k, &b, normal_trace(&b, &u))?;
            let mut e: f64 = 0.0;
            for x in probes {
                e = e.max((rep.field.eval(x)? - u(x).value).norm());
            }
            errs.push(e);
        }
        let factor_ok = errs.windows(2).all(|w| 10.0 * w[1] <= w[0] || w[1] < 1e-12);
        ok &= errs[3] < 1e-8 && factor_ok;
        detail.push(format!("{name} {}", errs.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join("/")));
    }
    Ok((ok, format!("probe error N=32..256: {}", detail.join(", "))))
}

fn interior_manufactured() -> Outcome {
    let k = c(1.0);
    let b = circle(256);
    let u = plane_wave(k, [0.6, 0.8]);
    let rep = solve(Side::Interior, k, &b, normal_trace(&b, &u))?;
    let mut e: f64 = 0.0;
    for x in [[0.0, 0.0], [0.3, -0.5], [-0.6, 0.2], [0.1, 0.7]] {
        e = e.max((rep.field.eval(x)? - u(x).value).norm());
    }
    Ok((e < 1e-8, format!("max interior error {e:.1e} (sigma_min {:.2e})", rep.sigma_min)))
}

fn eigen_scans() -> Outcome {
    let b = circle(64);
    let int = find_dips(&b, Side::Interior, &eigen_scan(&b, Side::Interior, 0.5, 4.0, 176)?)?;
    let ext = find_dips(&b, Side::Exterior, &eigen_scan(&b, Side::Exterior, 0.5, 4.0, 176)?)?;
    let expected = [1.84118, 3.05424, 3.83171];
    let int_k: Vec<f64> = int.iter().map(|s| s.k).collect();
    let ext_k: Vec<f64> = ext.iter().map(|s| s.k).collect();
    let int_ok = int_k.len() == expected.len() && int_k.iter().zip(expected).all(|(a, e)| (a - e).abs() < 1e-3);
    let ext_ok = ext_k.iter().any(|a| (a - 2.40483).abs() < 1e-3);
    Ok((int_ok && ext_ok, format!("interior dips {int_k:.5?}, exterior dips {ext_k:.5?}")))
}

fn eigenfunction() -> Outcome {
    let k = 1.841_183_781_340_659;
    let b = circle(64);
    let ef = neumann_eigenfunction(&b, k, Side::Interior)?;
    let u = |x: Point| ef.field.eval(x).unwrap();
    let mut fd: f64 = 0.0;
    for x in [[0.1, 0.2], [-0.4, 0.3], [0.5, -0.5], [0.0, -0.6]] {
        fd = fd.max(fd_helmholtz_residual(&u, c(k), x, 1e-3));
    }
    let dn = ef.max_normal_derivative()?;
    let other = ef.max_opposite_trace()?;
    Ok((
        fd < 1e-5 && dn < 1e-4 && other < 1e-6,
        format!("FD residual {fd:.1e}, max |∂_ν u| {dn:.1e}, exterior trace {other:.1e} (multiplicity {})", ef.multiplicity),
    ))
}

fn green_identities() -> Outcome {
    let k = c(1.0);
    let b = circle(256);
    let pw = plane_wave(k, [0.6, 0.8]);
    let pw_exact = |x: Point| Ok(pw(x).value);
    let tr = Traces::from_closed_form(&b, &pw);
    let inside = green_identity_residual(&tr, &pw_exact, &b, k, Side::Interior, &[[0.0, 0.0], [0.3, 0.4], [-0.5, -0.2]])?;
    let outside = green_identity_residual(&tr, &pw_exact, &b, k, Side::Interior, &[[2.0, 0.0], [-1.5, 2.0]])?;
    let ps = point_source(k, [0.1, -0.2]);
    let ps_exact = |x: Point| Ok(ps(x).value);
    let tr = Traces::from_closed_form(&b, &ps);
    let ext = green_identity_residual(&tr, &ps_exact, &b, k, Side::Exterior, &[[2.0, 0.0], [-1.5, 2.0], [0.0, 5.0]])?;
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);

    let b128 = circle(128);
    let dtn = build_dtn(&b128)?;
    let aq = area_quadrature(&b128, None, 20, 128)?;
    let x1 = |p: Point| PointSample { value: c(p[0]), gradient: [c(1.0), c(0.0)], laplacian: c(0.0) };
    let second = second_green_residual(&pw, &x1, &dtn, &aq)?;
    let u = point_source(k, [0.1, 0.2]);
    let v = point_source(k, [-0.3, 0.0]);
    let pair = exterior_second_green_form(&u, &v, &b128);
    let (a, o, e) = (max(&inside), max(&outside), max(&ext));
    Ok((
        a < 1e-8 && o < 1e-8 && e < 1e-8 && second < 1e-6 && pair < 1e-8,
        format!("third: inside {a:.1e}, outside {o:.1e}, exterior {e:.1e}; second {second:.1e}; radiating pair {pair:.1e}"),
    ))
}

fn radiation() -> Outcome {
    let radii = [5.0, 10.0, 20.0, 40.0];
    let k = c(1.0);
    let ps = point_source(k, [0.2, 0.0]);
    let f = |x: Point| {
        let s = ps(x);
        Ok((s.value, s.gradient))
    };
    let fund = radiation_check(&f, k, &radii, 32, Some(1.0), 1e-12)?;
    let b = kite(128);
    let rep = solve(Side::Exterior, k, &b, normal_trace(&b, &ps))?;
    let field = &rep.field;
    let g = |x: Point| field.eval_with_gradient(x);
    let solved = radiation_check(&g, k, &radii, 32, Some(b.max_radius()), 1e-12)?;
    let inc = incoming_source(1.0, [0.2, 0.0]);
    let h = |x: Point| {
        let s = inc(x);
        Ok((s.value, s.gradient))
    };
    let incoming = radiation_check(&h, k, &radii, 32, None, 1e-12)?;
    let min_ratio = incoming.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        fund.pass && solved.pass && !incoming.pass && min_ratio >= 1.8,
        format!(
            "fundamental solution ratios {:.3?}, solver output {:.3?}, incoming min ratio {min_ratio:.3}",
            fund.ratios, solved.ratios
        ),
    ))
}

fn multiply_connected() -> Outcome {
    let k = c(1.0);
    let b = annulus(128);
    let ps = point_source(k, [0.75, 0.0]);
    let ext = solve(Side::Exterior, k, &b, normal_trace(&b, &ps))?;
    let mut e_ext: f64 = 0.0;
    for x in [[0.0, 0.0], [0.1, -0.1], [2.0, 1.0]] {
        e_ext = e_ext.max((ext.field.eval(x)? - ps(x).value).norm());
    }
    let pw = plane_wave(k, [0.6, 0.8]);
    let int = solve(Side::Interior, k, &b, normal_trace(&b, &pw))?;
    let mut e_int: f64 = 0.0;
    for x in [[0.75, 0.0], [0.0, -0.7]] {
        e_int = e_int.max((int.field.eval(x)? - pw(x).value).norm());
    }
    let coarse = annulus(64);
    let dips: Vec<f64> =
        find_dips(&coarse, Side::Exterior, &eigen_scan(&coarse, Side::Exterior, 6.0, 7.0, 101)?)?.iter().map(|s| s.k).collect();
    let dirichlet = [6.246_061_839, 6.393_156_762, 6.813_842_853];
    let found = dirichlet.iter().all(|e| dips.iter().any(|d| (d - e).abs() < 1e-3));
    Ok((
        found && e_ext < 1e-8 && e_int < 1e-8,
        format!("exterior solve error {e_ext:.1e}, interior {e_int:.1e}; exterior dips in [6,7] {dips:.5?}"),
    ))
}

/// Runs without the libtest harness so the verdict lines are never captured.
fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("special-function consistency", special_functions),
        ("PDE residual", pde_residual),
        ("jump relations", jump_relations),
        ("Gauss/Laplace sanity", gauss_sanity),
        ("DtN spectral test", dtn_spectrum),
        ("distributional pairings", distributional_pairings),
        ("manufactured exterior Neumann solve", exterior_manufactured),
        ("manufactured interior Neumann solve", interior_manufactured),
        ("eigen-scan", eigen_scans),
        ("eigenfunction reconstruction", eigenfunction),
        ("Green identities", green_identities),
        ("radiation diagnostic", radiation),
        ("multiply connected domain", multiply_connected),
    ];
    let mut failed = vec![];
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(Ok(r)) => r,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        println!("[{}] {:>2}. {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
        if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria PASS", criteria.len());
    } else {
        eprintln!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
