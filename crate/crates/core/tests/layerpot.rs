use std::f64::consts::PI;

use helmholtz_bie::geometry::{make_boundary, Boundary, BoundarySpec};
use helmholtz_bie::layerpot::*;
use helmholtz_bie::specfun::{hankel1, bessel_j, FundamentalSolution};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

fn circle(n: usize) -> Boundary {
    make_boundary(&BoundarySpec::Circle { center: [0.0, 0.0], radius: 1.0 }, n).unwrap()
}

fn kite(n: usize) -> Boundary {
    make_boundary(&BoundarySpec::Kite { center: [0.0, 0.0], scale: 1.0 }, n).unwrap()
}

fn annulus(n: usize) -> Boundary {
    make_boundary(&BoundarySpec::Annulus { center: [0.0, 0.0], r_in: 0.5, r_out: 1.0 }, n).unwrap()
}

fn angle(p: [f64; 2]) -> f64 {
    p[1].atan2(p[0])
}

fn mode(b: &Boundary, m: i32) -> Vec<Complex64> {
    b.points.iter().map(|p| Complex64::from_polar(1.0, m as f64 * angle(*p))).collect()
}

#[test]
fn log_weights_integrate_trigonometric_modes() {
    // ∫ ln(4 sin²(t/2)) cos(m t) dt = −2π/|m| (m ≠ 0), 0 for m = 0
    let n = 32;
    let r = log_weights(n);
    for m in 0..n / 2 {
        let q: f64 = (0..n).map(|d| r[d] * (m as f64 * 2.0 * PI * d as f64 / n as f64).cos()).sum();
        let exact = if m == 0 { 0.0 } else { -2.0 * PI / m as f64 };
        assert!((q - exact).abs() < 1e-13, "m={m}: {q} vs {exact}");
    }
}

#[test]
fn laplace_double_layer_of_one_is_half() {
    let fs = FundamentalSolution::laplace(2).unwrap();
    for b in [
        circle(64),
        kite(128),
        make_boundary(&BoundarySpec::Ellipse { center: [0.2, -0.1], semi_x: 2.0, semi_y: 0.7 }, 128).unwrap(),
        annulus(64),
    ] {
        let w = assemble(OperatorKind::Double, &fs, &b).unwrap();
        let out = w.apply(&vec![c(1.0); b.len()]).unwrap();
        let err = out.iter().map(|z| (z - 0.5).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "W·1 error {err:e}");
    }
}

#[test]
fn laplace_single_layer_circle_spectrum() {
    let b = circle(64);
    let fs = FundamentalSolution::laplace(2).unwrap();
    let v = assemble(OperatorKind::Single, &fs, &b).unwrap();
    for m in 0..=16 {
        let e = mode(&b, m);
        let ve = v.apply(&e).unwrap();
        let lambda = if m == 0 { 0.0 } else { -1.0 / (2.0 * m as f64) };
        let err = ve.iter().zip(&e).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "m={m}: {err:e}");
    }
}

fn hankel_derivative(m: i32, z: Complex64) -> Complex64 {
    let mf = m as f64;
    if m == 0 {
        -hankel1(1.0, z).unwrap()
    } else {
        hankel1(mf - 1.0, z).unwrap() - mf / z * hankel1(mf, z).unwrap()
    }
}

#[test]
fn helmholtz_circle_spectra() {
    // Graf's addition theorem on the unit circle:
    //   V e^{imθ} = (π/2i) J_m(k) H_m(k) e^{imθ}
    //   W e^{imθ} = ((πk/2i) J_m(k) H_m′(k) − ½) e^{imθ}
    let b = circle(64);
    for k in [c(1.0), Complex64::new(2.5, 0.3)] {
        let fs = FundamentalSolution::radiating(2, k).unwrap();
        let v = assemble(OperatorKind::Single, &fs, &b).unwrap();
        let w = assemble(OperatorKind::Double, &fs, &b).unwrap();
        let wt = assemble(OperatorKind::AdjointDouble, &fs, &b).unwrap();
        let half_pi_over_i = Complex64::new(0.0, -PI / 2.0);
        for m in 0..8 {
            let jm = bessel_j(m as f64, k).unwrap();
            let lv = half_pi_over_i * jm * hankel1(m as f64, k).unwrap();
            let lw = half_pi_over_i * k * jm * hankel_derivative(m, k) - 0.5;
            let e = mode(&b, m);
            for (op, lambda) in [(&v, lv), (&w, lw), (&wt, lw)] {
                let out = op.apply(&e).unwrap();
                let err = out.iter().zip(&e).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max);
                assert!(err < 1e-10, "k={k} m={m} {:?}: {err:e}", op.kind);
            }
        }
    }
}

#[test]
fn helmholtz_matrices_are_finite() {
    let fs = FundamentalSolution::radiating(2, c(1.0)).unwrap();
    for kind in [OperatorKind::Single, OperatorKind::Double, OperatorKind::AdjointDouble] {
        let op = assemble(kind, &fs, &circle(32)).unwrap();
        assert!(op.matrix.iter().all(|z| z.is_finite()));
    }
}

#[test]
fn discrete_duality_of_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for b in [kite(64), annulus(32)] {
        let fs = FundamentalSolution::radiating(2, Complex64::new(1.7, 0.1)).unwrap();
        let w = assemble(OperatorKind::Double, &fs, &b).unwrap();
        let wt = assemble(OperatorKind::AdjointDouble, &fs, &b).unwrap();
        for _ in 0..5 {
            let mu: Vec<Complex64> = (0..b.len()).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
            let v: Vec<Complex64> = (0..b.len()).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
            let wtm = wt.apply(&mu).unwrap();
            let wv = w.apply(&v).unwrap();
            let lhs: Complex64 = (0..b.len()).map(|i| b.weights[i] * wtm[i] * v[i]).sum();
            let rhs: Complex64 = (0..b.len()).map(|i| b.weights[i] * mu[i] * wv[i]).sum();
            assert!((lhs - rhs).norm() < 1e-13 * lhs.norm().max(1.0));
        }
    }
}

#[test]
fn helmholtz_minus_laplace_double_layer_stays_bounded() {
    let lap = FundamentalSolution::laplace(2).unwrap();
    let hel = FundamentalSolution::radiating(2, c(2.0)).unwrap();
    let mut prev = None;
    for n in [32, 64, 128] {
        let b = kite(n);
        let a = assemble(OperatorKind::Double, &hel, &b).unwrap();
        let l = assemble(OperatorKind::Double, &lap, &b).unwrap();
        // divide out the quadrature weight to compare kernel values
        let mut max = 0.0f64;
        for i in 0..b.len() {
            for j in 0..b.len() {
                max = max.max(((a.matrix[(i, j)] - l.matrix[(i, j)]) / b.weights[j]).norm());
            }
        }
        if let Some(p) = prev {
            assert!(max < 2.0 * p + 1.0, "n={n}: {max} after {p}");
        }
        prev = Some(max);
    }
}

#[test]
fn field_evaluation_examples() {
    let b = circle(64);
    let lap = FundamentalSolution::laplace(2).unwrap();
    let ones = vec![c(1.0); b.len()];
    let sl = SolutionField::new(lap, b.clone(), Representation::SingleLayer, ones.clone(), Side::Interior).unwrap();
    assert!(sl.eval([0.0, 0.0]).unwrap().norm() < 1e-14);

    let dl_in = SolutionField::new(lap, b.clone(), Representation::DoubleLayer, ones.clone(), Side::Interior).unwrap();
    let dl_out = SolutionField::new(lap, b.clone(), Representation::DoubleLayer, ones, Side::Exterior).unwrap();
    for p in [[0.0, 0.0], [0.3, -0.4], [-0.5, 0.2]] {
        assert!((dl_in.eval(p).unwrap() - 1.0).norm() < 1e-10);
    }
    for p in [[2.0, 0.0], [1.5, 1.5], [0.0, -3.0]] {
        assert!(dl_out.eval(p).unwrap().norm() < 1e-10);
    }
    // refusals
    assert!(matches!(dl_in.eval([0.999, 0.0]), Err(helmholtz_bie::Error::TooClose(..))));
    assert!(dl_in.eval([2.0, 0.0]).is_err());
}

#[test]
fn gradient_matches_finite_differences() {
    let b = kite(64);
    let fs = FundamentalSolution::radiating(2, Complex64::new(1.2, 0.2)).unwrap();
    let mu: Vec<Complex64> = b.points.iter().map(|p| Complex64::new(p[0].cos(), p[1])).collect();
    for rep in [Representation::SingleLayer, Representation::DoubleLayer] {
        for x in [[0.1, 0.2], [2.5, 1.0]] {
            let (_, g) = evaluate_layer(&fs, &b, rep, &mu, x).unwrap();
            let h = 1e-5;
            let f = |p: [f64; 2]| evaluate_layer(&fs, &b, rep, &mu, p).unwrap().0;
            let gx = (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])) / (2.0 * h);
            let gy = (f([x[0], x[1] + h]) - f([x[0], x[1] - h])) / (2.0 * h);
            assert!((gx - g[0]).norm() < 1e-7 * g[0].norm().max(1.0), "{rep:?} {x:?}");
            assert!((gy - g[1]).norm() < 1e-7 * g[1].norm().max(1.0), "{rep:?} {x:?}");
        }
    }
}

#[test]
fn helmholtz_single_layer_self_convergence() {
    // point-like density concentrated near θ = 0, evaluated away from ∂Ω
    let fs = FundamentalSolution::radiating(2, c(3.0)).unwrap();
    let x = [0.2, 0.1];
    let mut vals = vec![];
    for n in [32, 64, 128, 256] {
        let b = circle(n);
        let mu: Vec<Complex64> = b.points.iter().map(|p| c((-60.0 * (1.0 - p[0])).exp())).collect();
        vals.push(evaluate_layer(&fs, &b, Representation::SingleLayer, &mu, x).unwrap().0);
    }
    let d: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    assert!(d[1] < 0.1 * d[0] && d[2] < 1e-12, "{d:?}");
}

#[test]
fn near_evaluation_matches_closed_form() {
    // V[cos θ] = −r cos θ/2 inside, −cos θ/(2r) outside the unit circle
    let b = circle(64);
    let lap = FundamentalSolution::laplace(2).unwrap();
    let mu: Vec<Complex64> = b.points.iter().map(|p| c(p[0])).collect();
    let near = NearEvaluator::new(&lap, &b, Representation::SingleLayer, &mu).unwrap();
    for d in [0.3, 0.05, 1e-2, 2e-3, 1e-4] {
        for th in [0.0, 0.37, 2.0] {
            for (r, exact, dr) in [
                (1.0 - d, -(1.0 - d) * f64::cos(th) / 2.0, -f64::cos(th) / 2.0),
                (1.0 + d, -f64::cos(th) / (2.0 * (1.0 + d)), f64::cos(th) / (2.0 * (1.0 + d).powi(2))),
            ] {
                let x = [r * th.cos(), r * th.sin()];
                let (v, g) = near.eval(x).unwrap();
                assert!((v - exact).norm() < 1e-10, "d={d} th={th} r={r}: {v} vs {exact}");
                let radial = g[0] * th.cos() + g[1] * th.sin();
                assert!((radial - dr).norm() < 1e-8, "d={d} th={th} r={r}: {radial} vs {dr}");
            }
        }
    }
}

fn max_jump_error(fs: &FundamentalSolution, b: &Boundary, density: impl Fn([f64; 2]) -> Complex64) -> f64 {
    let w = assemble(OperatorKind::Double, fs, b).unwrap();
    let mu: Vec<Complex64> = b.points.iter().map(|p| density(*p)).collect();
    let nodes: Vec<usize> = (0..b.len()).step_by(b.len() / 8).collect();
    jump_check(&w, &mu, &nodes).unwrap().iter().map(|j| j.err_plus.max(j.err_minus)).fold(0.0, f64::max)
}

#[test]
fn jump_relation_examples() {
    let b = circle(64);
    let lap = FundamentalSolution::laplace(2).unwrap();
    let w = assemble(OperatorKind::Double, &lap, &b).unwrap();
    let ones = vec![c(1.0); b.len()];
    for j in jump_check(&w, &ones, &[0, 5, 17]).unwrap() {
        assert!((j.w_plus - 1.0).norm() < 1e-9 && j.w_minus.norm() < 1e-9 && (j.w_on - 0.5).norm() < 1e-10);
    }
    let zeros = vec![c(0.0); b.len()];
    for j in jump_check(&w, &zeros, &[3]).unwrap() {
        assert_eq!((j.w_plus, j.w_minus, j.w_on), (c(0.0), c(0.0), c(0.0)));
    }
}

#[test]
fn jump_relations_converge() {
    let fs = FundamentalSolution::radiating(2, c(1.0)).unwrap();
    let density = |p: [f64; 2]| Complex64::new((p[0] + 0.5 * p[1]).cos(), p[1] * p[0]);
    for make in [circle as fn(usize) -> Boundary, kite] {
        let errs: Vec<f64> = [32, 64, 128].iter().map(|&n| max_jump_error(&fs, &make(n), density)).collect();
        println!("jump errors {errs:?}");
        assert!(errs[2] < 1e-6);
        for w in errs.windows(2) {
            assert!(w[1] <= 0.25 * w[0] || w[1] < 1e-10, "{errs:?}");
        }
    }
}
