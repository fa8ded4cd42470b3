//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p burgers-core --test acceptance -- --nocapture` to see them.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use burgers_core::dqm::{first_derivative_matrix, higher_derivative_matrix};
use burgers_core::exact::{exact_coupled, fourier_exact, wood_exact, FourierSeriesParams};
use burgers_core::grid::chebyshev_gauss_lobatto;
use burgers_core::linalg::{inf_norm, LuFactor};
use burgers_core::metrics::{point_table, solution_errors, Component};
use burgers_core::stability::{spectrum, spectrum_of, stability_sweep, sweep_operator};
use burgers_core::{
    problem_factory, CaseId, CaseParams, ExactOracle, FrozenPolicy, Interval, MarchOptions, Solution,
    SweepModel, TimeConfig,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict}: {name}: {detail}");
    assert!(ok, "criterion {id} failed: {detail}");
}

struct Run {
    solution: Solution,
    oracle: ExactOracle,
    elapsed: Duration,
}

fn run(case: CaseId, params: CaseParams, dt: f64, t_final: f64, every: usize) -> Run {
    let oracle = ExactOracle::for_case(case, &params).unwrap();
    let problem = problem_factory(case, &params).unwrap();
    let cfg = TimeConfig::new(dt, t_final).unwrap();
    let start = Instant::now();
    let solution = problem.march(&cfg, &MarchOptions::every(every)).unwrap();
    Run {
        solution,
        oracle,
        elapsed: start.elapsed(),
    }
}

fn wood(nu: f64, sigma: f64, nodes: usize) -> CaseParams {
    CaseParams {
        sigma: Some(sigma),
        nu: Some(nu),
        nodes,
        ..Default::default()
    }
}

fn reynolds(re: f64, nodes: usize) -> CaseParams {
    CaseParams {
        reynolds: Some(re),
        nodes,
        ..Default::default()
    }
}

fn linf_at(r: &Run, t: f64) -> f64 {
    solution_errors(&r.solution, &r.oracle, t, false).unwrap().0.linf
}

fn l2_at(r: &Run, t: f64) -> f64 {
    solution_errors(&r.solution, &r.oracle, t, false).unwrap().0.l2
}

#[test]
fn criterion_01_table1() {
    // exact column of the published table at x = 0.1 .. 0.9
    let exact_col = [
        0.653545, 1.305534, 1.949364, 2.565927, 3.110739, 3.492871, 3.549594, 3.050130, 1.816658,
    ];
    let points: Vec<Vec<f64>> = (1..=9).map(|i| vec![i as f64 / 10.0]).collect();

    let re1 = run(CaseId::Wood1d, wood(1.0, 2.0, 40), 1e-4, 1e-3, 10);
    let rows = point_table(&re1.solution, &re1.oracle, Component::U, &points, 1e-3).unwrap();
    let point_dev = rows
        .iter()
        .zip(exact_col)
        .map(|(r, e)| (r.computed - e).abs())
        .fold(0.0, f64::max);
    let linf1 = linf_at(&re1, 1e-3);

    let re10 = run(CaseId::Wood1d, wood(0.1, 2.0, 40), 1e-4, 1e-3, 10);
    let linf10 = linf_at(&re10, 1e-3);
    let elapsed = re1.elapsed + re10.elapsed;

    report(
        1,
        "Table 1 (sigma=2, M=40, dt=1e-4, T=1e-3)",
        point_dev <= 2e-5 && linf1 <= 5e-5 && linf10 <= 1e-7 && elapsed < Duration::from_secs(1),
        format!(
            "max |u - exact column| = {point_dev:.3e} (<= 2e-5), Re=1 Linf = {linf1:.3e} (<= 5e-5), \
             Re=10 Linf = {linf10:.3e} (<= 1e-7), runtime {elapsed:.2?} (< 1 s)"
        ),
    );
}

#[test]
fn criterion_02_table2() {
    let r100 = run(CaseId::Wood1d, wood(1.0 / 100.0, 100.0, 10), 0.01, 1.0, 100);
    let r200 = run(CaseId::Wood1d, wood(1.0 / 200.0, 100.0, 10), 0.01, 1.0, 100);
    let (l2_100, li_100, l2_200) = (l2_at(&r100, 1.0), linf_at(&r100, 1.0), l2_at(&r200, 1.0));
    let elapsed = r100.elapsed + r200.elapsed;
    report(
        2,
        "Table 2 (sigma=100, N=10, dt=0.01, T=1)",
        l2_100 <= 2.4e-9 && li_100 <= 4e-9 && l2_200 <= 3.2e-10 && elapsed < Duration::from_secs(1),
        format!(
            "Re=100 L2 = {l2_100:.3e} (<= 2.4e-9), Linf = {li_100:.3e} (<= 4e-9); \
             Re=200 L2 = {l2_200:.3e} (<= 3.2e-10); runtime {elapsed:.2?} (< 1 s)"
        ),
    );
}

#[test]
fn criterion_03_table4() {
    let params = CaseParams {
        reynolds: Some(100.0),
        nodes: 80,
        ..Default::default()
    };
    let r = run(CaseId::Fourier1d, params, 1e-3, 0.6, 100);
    let a = point_table(&r.solution, &r.oracle, Component::U, &[vec![0.5]], 0.4).unwrap()[0].abs_error;
    let b = point_table(&r.solution, &r.oracle, Component::U, &[vec![0.75]], 0.6).unwrap()[0].abs_error;
    report(
        3,
        "Table 4 (case 2, Re=100, N=80, dt=1e-3)",
        a <= 5e-6 && b <= 5e-6 && r.elapsed < Duration::from_secs(30),
        format!(
            "|err|(0.5, 0.4) = {a:.3e}, |err|(0.75, 0.6) = {b:.3e} (<= 5e-6), runtime {:.2?} (< 30 s)",
            r.elapsed
        ),
    );
}

#[test]
fn criterion_04_table8() {
    let r10 = run(CaseId::Burgers2d, reynolds(10.0, 16), 5e-4, 3.0, 2000);
    let r100 = run(CaseId::Burgers2d, reynolds(100.0, 16), 5e-4, 3.0, 2000);
    let (a, b) = (l2_at(&r10, 3.0), l2_at(&r100, 3.0));
    let elapsed = r10.elapsed + r100.elapsed;
    report(
        4,
        "Table 8 (2D, 16x16, dt=5e-4, T=3)",
        a <= 1e-7 && b <= 1e-4 && elapsed < Duration::from_secs(600),
        format!("Re=10 L2 = {a:.3e} (<= 1e-7), Re=100 L2 = {b:.3e} (<= 1e-4), runtime {elapsed:.2?} (< 10 min)"),
    );
}

fn coupled_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run(CaseId::Coupled, reynolds(100.0, 20), 1e-3, 2.0, 100))
}

#[test]
fn criterion_05_tables10_11() {
    let r = coupled_run();
    let at = |c, x: f64, y: f64, t| point_table(&r.solution, &r.oracle, c, &[vec![x, y]], t).unwrap()[0].computed;
    let u_mid = at(Component::U, 0.5, 0.5, 0.5);
    let v_mid = at(Component::V, 0.5, 0.5, 0.5);
    let u_late = at(Component::U, 0.1, 0.5, 2.0);
    let ok = (u_mid - 0.54332).abs() <= 5e-4
        && (v_mid - 0.95668).abs() <= 5e-4
        && (u_late - 0.55568).abs() <= 5e-4
        && r.elapsed < Duration::from_secs(300);
    report(
        5,
        "Tables 10-11 (coupled, Re=100, 20x20, dt=1e-3)",
        ok,
        format!(
            "u(0.5,0.5,0.5) = {u_mid:.5}, v(0.5,0.5,0.5) = {v_mid:.5}, u(0.1,0.5,2) = {u_late:.5} \
             (each within 5e-4), runtime {:.2?} (< 5 min)",
            r.elapsed
        ),
    );
}

#[test]
fn criterion_06_bdf2_order() {
    let coarse = run(CaseId::Wood1d, wood(0.1, 2.0, 40), 4e-3, 0.1, 1000);
    let fine = run(CaseId::Wood1d, wood(0.1, 2.0, 40), 2e-3, 0.1, 1000);
    let ratio = linf_at(&coarse, 0.1) / linf_at(&fine, 0.1);
    report(
        6,
        "BDF2 temporal order (sigma=2, nu=0.1, M=40, T=0.1)",
        (3.0..=5.0).contains(&ratio),
        format!("Linf(dt=4e-3) / Linf(dt=2e-3) = {ratio:.3} (in [3, 5])"),
    );
}

#[test]
fn criterion_07_dq_exactness() {
    let mut worst_rel = 0.0f64;
    let mut worst_row = 0.0f64;
    let mut rows_ok = true;
    for m in [4usize, 8, 12, 20] {
        let g = chebyshev_gauss_lobatto(Interval::unit(), m).unwrap();
        let a1 = first_derivative_matrix(&g).unwrap();
        let a2 = higher_derivative_matrix(&a1, 2).unwrap();
        let row_sum = a1.max_row_sum().max(a2.max_row_sum());
        worst_row = worst_row.max(row_sum / m as f64);
        rows_ok &= row_sum <= 1e-10 * m as f64;
        for k in 0..m as i32 {
            let f: Vec<f64> = g.nodes().iter().map(|x| x.powi(k)).collect();
            let kf = k as f64;
            let d1: Vec<f64> = g.nodes().iter().map(|x| if k >= 1 { kf * x.powi(k - 1) } else { 0.0 }).collect();
            let d2: Vec<f64> = g
                .nodes()
                .iter()
                .map(|x| if k >= 2 { kf * (kf - 1.0) * x.powi(k - 2) } else { 0.0 })
                .collect();
            for (d, want) in [(&a1, d1), (&a2, d2)] {
                let got = d.entries() * nalgebra::DVector::from_column_slice(&f);
                let scale = want.iter().fold(1.0f64, |s, w| s.max(w.abs()));
                for (gv, wv) in got.iter().zip(&want) {
                    worst_rel = worst_rel.max((gv - wv).abs() / scale);
                }
            }
        }
    }
    report(
        7,
        "DQ polynomial exactness (M in {4, 8, 12, 20})",
        worst_rel <= 1e-9 && rows_ok,
        format!("max relative derivative error {worst_rel:.3e} (<= 1e-9), max row sum / M {worst_row:.3e} (<= 1e-10)"),
    );
}

#[test]
fn criterion_08_coupled_sum() {
    let r = coupled_run();
    let v = r.solution.v.as_ref().unwrap();
    let worst = r
        .solution
        .u
        .iter()
        .zip(v)
        .flat_map(|(u, v)| u.iter().zip(v).map(|(a, b)| (a + b - 1.5).abs()))
        .fold(0.0, f64::max);
    let through = *r.solution.times.last().unwrap();
    report(
        8,
        "coupled sum invariant (Re=100, 20x20, dt=1e-3)",
        worst <= 1e-9 && (through - 2.0).abs() < 1e-12,
        format!(
            "max |u + v - 3/2| = {worst:.3e} (<= 1e-9) over {} snapshots through T = {through}",
            r.solution.times.len()
        ),
    );
}

fn same_spectrum(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; b.len()];
    a.len() == b.len()
        && a.iter().all(|z| {
            let best = (0..b.len())
                .filter(|&j| !used[j])
                .min_by(|&i, &j| (b[i] - z).norm().total_cmp(&(b[j] - z).norm()));
            match best {
                Some(j) if (b[j] - z).norm() <= tol => {
                    used[j] = true;
                    true
                }
                _ => false,
            }
        })
}

#[test]
fn criterion_09_stability() {
    let sweep = stability_sweep(SweepModel::Burgers1d, &[10, 17, 24, 31], 1.0, &FrozenPolicy::Zero).unwrap();
    let p_ok = sweep.iter().all(|e| e.report.verdict);
    let p_worst = sweep
        .iter()
        .map(|e| e.report.max_real_part)
        .fold(f64::NEG_INFINITY, f64::max);

    // 8x8 interior nodes
    let r_op = sweep_operator(SweepModel::Coupled, 10, 100.0, &FrozenPolicy::InitialCondition).unwrap();
    let r_rep = spectrum(&r_op).unwrap();

    let mut invariants = true;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for op in [
        sweep_operator(SweepModel::Burgers1d, 17, 0.05, &FrozenPolicy::InitialCondition).unwrap(),
        sweep_operator(SweepModel::Coupled, 5, 100.0, &FrozenPolicy::InitialCondition).unwrap(),
    ] {
        let a = op.matrix;
        let n = a.nrows();
        let eig = spectrum_of(&a, 0.0).unwrap().eigenvalues;
        let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let conj: Vec<Complex64> = eig.iter().map(|z| z.conj()).collect();
        invariants &= same_spectrum(&eig, &conj, 1e-8 * scale);
        let sum: Complex64 = eig.iter().sum();
        invariants &= (sum.re - a.trace()).abs() <= 1e-6 * a.trace().abs().max(1.0);
        if n <= 50 {
            let prod: Complex64 = eig.iter().product();
            let det = LuFactor::factor(a.clone()).unwrap().determinant();
            invariants &= (prod.norm() - det.abs()).abs() <= 1e-4 * det.abs();
        }
        if n <= 20 {
            let mut s = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.3..0.3));
            for i in 0..n {
                s[(i, i)] += 2.0;
            }
            let b = s.clone().try_inverse().unwrap() * &a * &s;
            let eb = spectrum_of(&b, 0.0).unwrap().eigenvalues;
            invariants &= same_spectrum(&eig, &eb, 1e-6 * scale);
        }
    }

    report(
        9,
        "stability of P and R",
        p_ok && r_rep.verdict && invariants,
        format!(
            "P (M = 10, 17, 24, 31, nu=1) max Re(lambda) = {p_worst:.3e}; R (8x8 interior, Re=100) \
             max Re(lambda) = {:.3e} <= {:.3e} = 1e-8 |R|inf ({}); invariants {}",
            r_rep.max_real_part,
            1e-8 * inf_norm(&r_op.matrix),
            r_op.dim(),
            if invariants { "hold" } else { "violated" }
        ),
    );
}

#[test]
fn criterion_10_oracles() {
    let base = FourierSeriesParams::new(0.01);
    let fine = FourierSeriesParams {
        nu: 0.01,
        n_terms: 2 * base.n_terms,
        quad_panels: 2 * base.quad_panels,
    };
    let doubling = (fourier_exact(0.5, 0.4, &base).unwrap() - fourier_exact(0.5, 0.4, &fine).unwrap()).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sum_dev = (0..10_000)
        .map(|_| {
            let (u, v) = exact_coupled(
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..5.0),
                rng.gen_range(1.0..1000.0),
            );
            (u + v - 1.5).abs()
        })
        .fold(0.0, f64::max);

    let wood = wood_exact(0.5, 0.001, 1.0, 2.0).unwrap();
    report(
        10,
        "oracle self-consistency",
        doubling < 1e-10 && sum_dev <= 1e-14 && (wood - 3.110739).abs() <= 1e-6,
        format!(
            "Fourier doubling change {doubling:.3e} (< 1e-10), max |u + v - 3/2| {sum_dev:.3e} (<= 1e-14), \
             wood(0.5, 0.001) = {wood:.7} (3.110739 +- 1e-6)"
        ),
    );
}
