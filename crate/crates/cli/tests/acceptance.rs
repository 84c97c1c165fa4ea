//! Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned
//! below. Exits nonzero if any criterion fails.

use dpp_palm::analysis::{mc_validate_coupling, moment_quadrature, Window};
use dpp_palm::finite::{
    coupling_feasible, dilate, palm_eigenvector, palm_matrix, sample_coupled_many, sample_exact_many, sites_to_mask,
    subset_law, xi_law,
};
use dpp_palm::kernel::repulsiveness_p;
use dpp_palm::models::{
    diagonal_kernel, ginibre_kernel, jinc_kernel, multiquadric, multiquadric_comparison, multiquadric_k0,
    sphere_kernel, sphere_model, sphere_p, thin_rescale, CoefficientTail,
};
use dpp_palm::numerics::integrate;
use dpp_palm::{CMatrix, FiniteDpp, GinibreParams, Kernel, Point, QuadratureSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

// Criterion 1
const FLOW_TOL: f64 = 1e-8;
const XI_TOL: f64 = 1e-8;
const MIN_ANCHOR_INTENSITY: f64 = 1e-6;
// Criterion 2
const DILATION_TOL: f64 = 1e-8;
// Criterion 3
const GINIBRE_P_TOL: f64 = 1e-6;
const GINIBRE_DENSITY_TOL: f64 = 1e-8;
// Criterion 4
const MOMENT_REL_TOL: f64 = 1e-3;
const MOMENT_ZERO_TOL: f64 = 1e-6;
// Criterion 5
const JINC_P_TOL: f64 = 1e-4;
// Criterion 6
const SPHERE_P_TOL: f64 = 1e-8;
const SPHERE_KERNEL_TOL: f64 = 1e-8;
const DISCREPANCY_TOL: f64 = 1e-6;
// Criterion 7
const CONTRACTION_SLACK: f64 = 1e-6;
// Criterion 8
const DRAWS: usize = 100_000;
const SIGMAS: f64 = 3.0;
// Criterion 9
const GINIBRE_PROFILE_TOL: f64 = 1e-10;
const JINC_PROFILE_TOL: f64 = 1e-8;
const NORMALIZATION_TOL: f64 = 1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `U diag(lambda) U*` with `U` from Gram-Schmidt on a random complex matrix;
/// `ones` eigenvalues are exactly 1.
fn random_kernel(rng: &mut ChaCha8Rng, n: usize, ones: usize) -> FiniteDpp {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        for b in &cols {
            let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= proj * bi);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
    }
    let lambda: Vec<f64> = (0..n)
        .map(|i| if i < ones { 1.0 } else { rng.random::<f64>() })
        .collect();
    let m = CMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| cols[k][i] * cols[k][j].conj() * lambda[k]).sum()
    });
    FiniteDpp::validate(m).expect("random kernel is valid")
}

fn random_anchor(rng: &mut ChaCha8Rng, k: &FiniteDpp) -> Option<usize> {
    let ok: Vec<usize> = (1..=k.n())
        .filter(|&u| k.matrix()[(u - 1, u - 1)].re > MIN_ANCHOR_INTENSITY)
        .collect();
    (!ok.is_empty()).then(|| ok[rng.random_range(0..ok.len())])
}

/// `K - K e_u e_u* K / K_uu`, written out entrywise.
fn palm_oracle(k: &CMatrix, u: usize) -> CMatrix {
    let i = u - 1;
    let kuu = k[(i, i)].re;
    CMatrix::from_fn(k.nrows(), k.ncols(), |a, b| k[(a, b)] - k[(a, i)] * k[(i, b)] / kuu)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_FFEE);
    let (mut worst_flow, mut worst_p, mut worst_f) = (0.0f64, 0.0f64, 0.0f64);
    let mut done = 0;
    let mut with_ones = 0;
    while done < 1000 {
        let n = rng.random_range(2..=8);
        let ones = if rng.random::<f64>() < 0.3 { rng.random_range(1..=n) } else { 0 };
        let k = random_kernel(&mut rng, n, ones);
        let Some(u) = random_anchor(&mut rng, &k) else { continue };
        let m = k.matrix();
        let i = u - 1;
        let row: Vec<f64> = (0..n).map(|v| m[(i, v)].norm_sqr()).collect();
        let row_sum: f64 = row.iter().sum();
        let p_oracle = row_sum / m[(i, i)].re;

        let palm = palm_matrix(&k, u).unwrap();
        let (flow, table) = coupling_feasible(&subset_law(&k).unwrap(), &subset_law(&palm).unwrap(), u).unwrap();
        worst_flow = worst_flow.max((flow - 1.0).abs());
        let Some(table) = table else {
            return check(false, format!("infeasible coupling, flow {flow}, n={n}, u={u}"));
        };
        let xi = xi_law(&table, &k, u).unwrap();
        worst_p = worst_p.max((xi.p - p_oracle).abs());
        for v in 0..n {
            worst_f = worst_f.max((xi.density[v] - row[v] / row_sum).abs());
        }
        with_ones += usize::from(ones > 0);
        done += 1;
    }
    check(
        worst_flow <= FLOW_TOL && worst_p <= XI_TOL && worst_f <= XI_TOL,
        format!(
            "1000 kernels ({with_ones} with unit eigenvalues): max |flow-1| {worst_flow:.2e}, max |p_u err| {worst_p:.2e}, max |f_u err| {worst_f:.2e}"
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD11A7E);
    let (mut idem, mut eig, mut block) = (0.0f64, 0.0f64, 0.0f64);
    let mut done = 0;
    while done < 500 {
        let n = rng.random_range(2..=8);
        let ones = if rng.random::<f64>() < 0.3 { rng.random_range(1..=n) } else { 0 };
        let k = random_kernel(&mut rng, n, ones);
        let Some(u) = random_anchor(&mut rng, &k) else { continue };
        let q = dilate(&k).unwrap();
        idem = idem.max((&q * &q - &q).iter().map(|z| z.norm()).fold(0.0, f64::max));
        let pair = palm_eigenvector(&k, u).unwrap();
        let r = &pair.q * &pair.psi_u - &pair.psi_u;
        eig = eig.max(r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        let oracle = palm_oracle(k.matrix(), u);
        let comp = pair.compression();
        block = block.max((comp - oracle).iter().map(|z| z.norm()).fold(0.0, f64::max));
        done += 1;
    }
    check(
        idem <= DILATION_TOL && eig <= DILATION_TOL && block <= DILATION_TOL,
        format!("500 kernels: ||Q^2-Q||max {idem:.2e}, ||Q psi-psi|| {eig:.2e}, Palm block {block:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut worst_p = 0.0f64;
    let mut worst_f = 0.0f64;
    let anchors = [vec![0.0, 0.0], vec![0.7, -1.2]];
    for (alpha, beta) in [(1.0, 1.0), (0.5, 1.5), (1.0 / PI, 1.0)] {
        let k = ginibre_kernel(GinibreParams::new(alpha, beta).unwrap()).unwrap();
        for a in &anchors {
            let u = Point::Euclidean(a.clone());
            let r = repulsiveness_p(&k, &u, &spec).unwrap();
            worst_p = worst_p.max((r.p_u - alpha * beta).abs());
            // f_u at 20 points along and off the ray
            for j in 0..20 {
                let rad = 0.2 * j as f64;
                let ang = 0.3 * j as f64;
                let v = Point::Euclidean(vec![a[0] + rad * ang.cos(), a[1] + rad * ang.sin()]);
                let f = k.eval(&u, &v).norm_sqr() / r.norm_sq;
                let want = (-rad * rad / beta).exp() / (PI * beta);
                worst_f = worst_f.max((f - want).abs());
            }
        }
    }
    check(
        worst_p <= GINIBRE_P_TOL && worst_f <= GINIBRE_DENSITY_TOL,
        format!("max |p_u - alpha beta| {worst_p:.2e}, max |f_u - N_C(u, beta)| {worst_f:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let k = jinc_kernel(2).unwrap();
    let spec = QuadratureSpec::default();
    let o = Point::Euclidean(vec![0.0, 0.0]);
    let mut pass = true;
    let mut parts = Vec::new();
    for order in [-1.5, -1.0, -0.5, 0.5, 0.9] {
        let m = moment_quadrature(&k, &o, order, &spec).unwrap();
        let closed = m.closed_form.unwrap();
        let rel = m.quadrature.map_or(f64::INFINITY, |q| (q - closed).abs() / closed);
        pass &= rel <= MOMENT_REL_TOL;
        parts.push(format!("k={order}: rel {rel:.1e} (tail {:.1e})", m.tail_estimate));
    }
    let m0 = moment_quadrature(&k, &o, 0.0, &spec).unwrap();
    let e0 = m0.quadrature.map_or(f64::INFINITY, |q| (q - 1.0).abs());
    pass &= e0 <= MOMENT_ZERO_TOL;
    parts.push(format!("k=0: err {e0:.1e}"));
    for order in [1.0, 1.5] {
        let m = moment_quadrature(&k, &o, order, &spec).unwrap();
        pass &= m.diverged() && m.closed_form == Some(f64::INFINITY);
        parts.push(format!("k={order}: divergent={}", m.diverged()));
    }
    check(pass, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [1, 2] {
        let k = jinc_kernel(d).unwrap();
        let r = repulsiveness_p(&k, &Point::Euclidean(vec![0.0; d]), &spec).unwrap();
        let err = (r.p_u - 1.0).abs();
        pass &= err <= JINC_P_TOL;
        parts.push(format!("d={d}: |p_u-1| {err:.1e} (tail {:.1e})", r.tail_estimate));
    }
    check(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let spec = QuadratureSpec::default().with_relative_tolerance(1e-13);
    let mut pass = true;
    let mut parts = Vec::new();
    for delta in [0.1, 0.5, 0.9] {
        let rho = 1.0 / (4.0 * PI * (1.0 - delta));
        let (model, kernel) = multiquadric(delta, rho).unwrap();
        let series = sphere_p(&model);
        let k0 = |t: f64| rho * (1.0 - delta) / (1.0 + delta * delta - 2.0 * delta * t).sqrt();
        let oracle = 2.0 * PI * integrate(|t| k0(t) * k0(t), -1.0, 1.0, &spec).unwrap().value / k0(1.0);
        let err = (series.value - oracle).abs();

        let cmp = multiquadric_comparison(delta, rho).unwrap();
        let multiplicity_free = 4.0 * PI * rho * (1.0 - delta) / (1.0 + delta);
        let flagged = cmp.discrepancy == ((multiplicity_free - series.value).abs() > DISCREPANCY_TOL)
            && (cmp.without_multiplicity - multiplicity_free).abs() < 1e-14;

        let series_kernel = sphere_kernel(&model);
        let u = Point::Sphere(vec![0.0, 0.0, 1.0]);
        let mut kerr = 0.0f64;
        for i in 0..1000 {
            let t = -1.0 + 2.0 * i as f64 / 999.0;
            let v = Point::Sphere(vec![(1.0 - t * t).max(0.0).sqrt(), 0.0, t]);
            kerr = kerr.max((series_kernel.eval(&u, &v).re - k0(t)).abs());
            kerr = kerr.max((kernel.eval(&u, &v).re - multiquadric_k0(delta, rho, t)).abs());
        }
        pass &= err <= SPHERE_P_TOL && kerr <= SPHERE_KERNEL_TOL && flagged;
        parts.push(format!(
            "delta={delta}: series {:.6} vs oracle err {err:.1e}, 4 pi rho(1-d)/(1+d) = {multiplicity_free:.6} flagged={}, kernel err {kerr:.1e}",
            series.value, cmp.discrepancy
        ));
    }
    check(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let spec = QuadratureSpec::default();
    let o2 = Point::Euclidean(vec![0.0, 0.0]);
    let mut zoo: Vec<(String, Kernel, Point)> = Vec::new();
    for (a, b) in [(1.0, 1.0), (0.5, 1.5), (1.0 / PI, 1.0), (2.0, 0.5)] {
        zoo.push((
            format!("ginibre({a:.3},{b})"),
            ginibre_kernel(GinibreParams::new(a, b).unwrap()).unwrap(),
            Point::Euclidean(vec![0.3, -0.4]),
        ));
    }
    zoo.push(("sinc".into(), jinc_kernel(1).unwrap(), Point::Euclidean(vec![0.0])));
    zoo.push(("jinc".into(), jinc_kernel(2).unwrap(), o2.clone()));
    for (a, b) in [(1.0, 0.5), (2.0, 0.5), (0.5, 0.25)] {
        zoo.push((
            format!("thinned-jinc({a},{b})"),
            thin_rescale(&jinc_kernel(2).unwrap(), a, b).unwrap(),
            o2.clone(),
        ));
    }
    let north = Point::Sphere(vec![0.0, 0.0, 1.0]);
    for delta in [0.1, 0.5, 0.9] {
        let rho = 1.0 / (4.0 * PI * (1.0 - delta));
        zoo.push((format!("multiquadric({delta})"), multiquadric(delta, rho).unwrap().1, north.clone()));
    }
    let coeffs = sphere_model(2, 0.1, vec![0.5, 0.3, 0.2], CoefficientTail::None).unwrap();
    zoo.push(("sphere-coefficients".into(), sphere_kernel(&coeffs), north.clone()));
    let circle = sphere_model(1, 0.2, vec![0.4, 0.3, 0.3], CoefficientTail::None).unwrap();
    zoo.push(("circle-coefficients".into(), sphere_kernel(&circle), Point::Sphere(vec![1.0, 0.0])));
    zoo.push(("diagonal".into(), diagonal_kernel(&[0.2, 1.0, 0.0, 0.6]).unwrap(), Point::Site(2)));

    let mut worst = (String::new(), f64::NEG_INFINITY);
    for (name, k, u) in &zoo {
        let p = repulsiveness_p(k, u, &spec).unwrap().p_u;
        if p > worst.1 {
            worst = (name.clone(), p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0_0D);
    let mut worst_finite = f64::NEG_INFINITY;
    let mut count = 0;
    while count < 100 {
        let n = rng.random_range(2..=10);
        let ones = if rng.random::<f64>() < 0.3 { rng.random_range(1..=n) } else { 0 };
        let k = random_kernel(&mut rng, n, ones);
        let Some(u) = random_anchor(&mut rng, &k) else { continue };
        worst_finite = worst_finite.max(repulsiveness_p(&k.kernel(), &Point::Site(u), &spec).unwrap().p_u);
        count += 1;
    }
    check(
        worst.1 <= 1.0 + CONTRACTION_SLACK && worst_finite <= 1.0 + CONTRACTION_SLACK,
        format!(
            "{} zoo models, max p_u {:.9} ({}); 100 finite kernels, max p_u {worst_finite:.12}",
            zoo.len(),
            worst.1,
            worst.0
        ),
    )
}

fn within_sigmas(freq: &[f64], law: &[f64], draws: usize) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (f, p) in freq.iter().zip(law) {
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        let dev = (f - p).abs();
        ok &= dev <= SIGMAS * sigma + 1e-12;
        if sigma > 0.0 {
            worst = worst.max(dev / sigma);
        }
    }
    (ok, worst)
}

fn fixed_kernels() -> Vec<(&'static str, FiniteDpp)> {
    let m = |rows: &[&[f64]]| CMatrix::from_fn(rows.len(), rows.len(), |i, j| c(rows[i][j]));
    let diag = FiniteDpp::validate(m(&[&[0.3, 0.0], &[0.0, 0.7]])).unwrap();
    let (a, b, t) = (5.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0);
    let rank_two = FiniteDpp::validate(m(&[&[a, b, t], &[b, a, t], &[t, t, t]])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let random = random_kernel(&mut rng, 4, 1);
    vec![("diag(0.3,0.7)", diag), ("rank-2", rank_two), ("random n=4", random)]
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (seed, (name, k)) in fixed_kernels().into_iter().enumerate() {
        let law = subset_law(&k).unwrap();
        let mut freq = vec![0.0; 1 << k.n()];
        for d in sample_exact_many(&k, DRAWS, 100 + seed as u64) {
            freq[sites_to_mask(&d)] += 1.0 / DRAWS as f64;
        }
        let (ok_exact, z_exact) = within_sigmas(&freq, law.probabilities(), DRAWS);

        let u = 1;
        let palm_law = subset_law(&palm_matrix(&k, u).unwrap()).unwrap();
        let (_, table) = coupling_feasible(&law, &palm_law, u).unwrap();
        let table = table.expect("feasible coupling");
        let mut rows = vec![0.0; 1 << k.n()];
        let mut cols = vec![0.0; 1 << k.n()];
        for (s, t) in sample_coupled_many(&table, DRAWS, 200 + seed as u64) {
            rows[s] += 1.0 / DRAWS as f64;
            cols[t] += 1.0 / DRAWS as f64;
        }
        let (ok_rows, z_rows) = within_sigmas(&rows, law.probabilities(), DRAWS);
        let (ok_cols, z_cols) = within_sigmas(&cols, palm_law.probabilities(), DRAWS);
        pass &= ok_exact && ok_rows && ok_cols;
        parts.push(format!(
            "{name}: max z exact {z_exact:.2}, coupled X {z_rows:.2}, coupled Palm {z_cols:.2}"
        ));
    }
    let g = ginibre_kernel(GinibreParams::standard()).unwrap();
    let r = mc_validate_coupling(&g, &Point::Euclidean(vec![0.0, 0.0]), &Window::square(-1.5, 1.5), 3, DRAWS, 7)
        .unwrap();
    pass &= r.chi_square_pass() && (r.max_flow - 1.0).abs() <= FLOW_TOL;
    parts.push(format!(
        "grid Ginibre 3x3: chi2 {:.2} on {} dof (critical {:.2}), p_hat {:.4} vs {:.4}",
        r.chi_square, r.degrees_of_freedom, r.chi_square_critical, r.p_hat, r.p_exact
    ));
    check(pass, parts.join("; "))
}

/// `J_1(x) = (1/pi) int_0^pi cos(t - x sin t) dt` by the trapezoid rule, which
/// converges geometrically for this periodic integrand.
fn j1_oracle(x: f64) -> f64 {
    let n = 400;
    let h = PI / n as f64;
    let f = |t: f64| (t - x * t.sin()).cos();
    let inner: f64 = (1..n).map(|i| f(i as f64 * h)).sum();
    (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
}

fn criterion_9() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = dpp_palm_cli::run(["dpp-palm", "profile", "--beta", "1"], &mut out, &mut err);
    if code != 0 {
        return check(false, format!("profile exited {code}: {}", String::from_utf8_lossy(&err)));
    }
    let report = dpp_palm_cli::csv::Report::parse(&String::from_utf8(out).unwrap());
    let grid = report.block_with("density_jinc").unwrap();
    let r = grid.values("r").unwrap();
    let g = grid.values("density_ginibre").unwrap();
    let j = grid.values("density_jinc").unwrap();
    let (mut eg, mut ej) = (0.0f64, 0.0f64);
    let mut dominated = true;
    for i in 0..r.len() {
        eg = eg.max((g[i] - 2.0 * r[i] * (-r[i] * r[i]).exp()).abs());
        let want = if r[i] == 0.0 { 0.0 } else { 2.0 * j1_oracle(2.0 * r[i]).powi(2) / r[i] };
        ej = ej.max((j[i] - want).abs());
        if r[i] >= 4.0 {
            dominated &= j[i] > g[i];
        }
    }
    let totals = report.block_with("total").unwrap();
    let tg = totals.value(0, "total").unwrap();
    let tj = totals.value(1, "total").unwrap();
    let norm_ok = (tg - 1.0).abs() <= NORMALIZATION_TOL && (tj - 1.0).abs() <= NORMALIZATION_TOL;
    check(
        eg <= GINIBRE_PROFILE_TOL && ej <= JINC_PROFILE_TOL && dominated && norm_ok,
        format!(
            "{} radii: ginibre err {eg:.1e}, jinc err {ej:.1e}, jinc dominates for r>=4: {dominated}, masses {tg:.6} / {tj:.6}",
            r.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("finite coupling: flow and xi law", criterion_1, Duration::from_secs(120)),
        ("dilation identities", criterion_2, Duration::from_secs(30)),
        ("Ginibre p_u and f_u", criterion_3, Duration::from_secs(10)),
        ("jinc displacement moments", criterion_4, Duration::from_secs(30)),
        ("jinc/sinc p_u = 1", criterion_5, Duration::from_secs(20)),
        ("sphere multiquadric", criterion_6, Duration::from_secs(30)),
        ("repulsiveness bound", criterion_7, Duration::from_secs(30)),
        ("sampler statistics", criterion_8, Duration::from_secs(180)),
        ("radial profiles, beta = 1", criterion_9, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *budget;
        failures += usize::from(!pass);
        println!(
            "criterion {}: {} - {name} [{:.2}s of {}s] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            outcome.detail
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
