//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wavepacket_rabi::observables::{conservation_residuals, ObservableRecord};
use wavepacket_rabi::oracle::{oracle_matrix, OdeSettings};
use wavepacket_rabi::output::write_series;
use wavepacket_rabi::propagator::{
    dressed_spectrum, evolve, family_matrix, generalized_detuning, generalized_rabi, Matrix2,
};
use wavepacket_rabi::scenario::{self, parse_scenario, Scenario};
use wavepacket_rabi::{presets, Complex64 as C64, MomentumGrid, SimParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn preset(name: &str) -> Scenario {
    presets::find(name).unwrap().scenario().unwrap()
}

fn preset_records(name: &str) -> Vec<ObservableRecord> {
    scenario::run(&preset(name)).unwrap().records
}

/// 1. analytic propagator vs RK4 oracle on 100 random families
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = rng.gen_range(-10.0..10.0);
        let params = SimParams::new(rng.gen_range(0.0..50.0), rng.gen_range(-20.0..20.0)).unwrap();
        let tau = rng.gen_range(0.0..100.0);
        let beta = generalized_rabi(generalized_detuning(p, &params), &params);
        let step = if beta > 0.0 { (0.004 / beta).min(0.001) } else { 0.001 };
        let oracle = oracle_matrix(p, tau, &params, &OdeSettings::Fixed { step })
            .map_err(|e| e.to_string())?;
        worst = worst.max(oracle.max_abs_diff(&family_matrix(p, tau, &params)));
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-9 && secs < 10.0,
        format!("max amplitude deviation {worst:.2e} (<= 1e-9), runtime {secs:.2} s (< 10 s)"),
    )
}

/// 2. norm and momentum conservation on fig2 and fig7 at 500 sample times
fn conservation() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["fig2", "fig7"] {
        let sc = preset(name);
        let s0 = sc.initial_state().unwrap();
        let tau_max = sc.file.schedule.tau_max;
        let (mut pop, mut mom): (f64, f64) = (0.0, 0.0);
        for k in 0..500 {
            let s = evolve(&s0, tau_max * k as f64 / 499.0, &sc.params);
            let r = ObservableRecord::from_state(&s);
            pop = pop.max((r.n_g + r.n_e - 1.0).abs());
            let res = conservation_residuals(&s, &s0).unwrap();
            mom = mom.max(res.momentum_drift);
        }
        ok &= pop <= 1e-10 && mom <= 1e-9;
        lines.push(format!("{name}: |n_g+n_e-1| {pop:.1e}, momentum drift {mom:.1e}"));
    }
    check(ok, lines.join("; "))
}

/// 3. definite-momentum Rabi formula and constant normalized momenta
fn definite_momentum() -> Outcome {
    let mut worst_ne: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for (rabi, detuning, p) in [(20.0, 0.0, 0.0), (10.0, 7.5, 1.3), (5.0, -3.0, -2.25)] {
        let text = format!(
            "[params]\nrabi = {rabi}\ndetuning = {detuning}\n\
             [grid]\ncenter = {p}\nhalf_width = 0.0\nn_points = 1\n\
             [ground]\nkind = \"definite\"\n\
             [schedule]\ntau_max = {}\nn_samples = 1000\n",
            40.0 * PI / rabi
        );
        let sc = parse_scenario(&text, std::path::Path::new(".")).unwrap();
        let params = sc.params;
        let beta = generalized_rabi(generalized_detuning(p, &params), &params);
        for r in scenario::run(&sc).unwrap().records {
            let expect = (rabi / beta).powi(2) * (0.5 * beta * r.tau).sin().powi(2);
            worst_ne = worst_ne.max((r.n_e - expect).abs());
            if let Some(pg) = r.p_norm_g {
                worst_p = worst_p.max((pg - p).abs());
            }
            if let Some(pe) = r.p_norm_e {
                worst_p = worst_p.max((pe - (p + 1.0)).abs());
            }
        }
    }
    check(
        worst_ne <= 1e-10 && worst_p <= 1e-12,
        format!("max |n_e - formula| {worst_ne:.1e} (<= 1e-10), max p_norm deviation {worst_p:.1e}"),
    )
}

fn span(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = xs
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// ∫|a₀|² Ω²/(2β̃²) dp̃ for the fig2 packet, by adaptive quadrature on the continuum.
const FIG2_ASYMPTOTIC_NE: f64 = 0.481_005_710_480_619_13;

/// 4. damped flopping on fig2
fn damped_flopping() -> Outcome {
    let recs = preset_records("fig2");
    let period = 2.0 * PI / presets::RABI;
    let first = span(recs.iter().filter(|r| r.tau <= period).map(|r| r.n_e));
    let q = recs.len() * 3 / 4;
    let tail = &recs[q..];
    let last = span(tail.iter().map(|r| r.n_e));
    let mean = tail.iter().map(|r| r.n_e).sum::<f64>() / tail.len() as f64;
    let rel = (mean - FIG2_ASYMPTOTIC_NE).abs() / FIG2_ASYMPTOTIC_NE;
    check(
        last <= 0.25 * first && rel <= 0.02,
        format!(
            "last-quarter amplitude {last:.3} / first flop {first:.3} = {:.3} (<= 0.25); \
             mean {mean:.4} vs {FIG2_ASYMPTOTIC_NE:.4} ({:.2}% <= 2%)",
            last / first,
            100.0 * rel
        ),
    )
}

/// 5. one-photon bound on fig6
fn one_photon_bound() -> Outcome {
    let recs = preset_records("fig6");
    let pg0 = recs[0].p_norm_g.unwrap();
    let pe_ref = pg0 + 1.0;
    let dg = recs.iter().filter_map(|r| r.p_norm_g).map(|x| (x - pg0).abs()).fold(0.0, f64::max);
    let de = recs.iter().filter_map(|r| r.p_norm_e).map(|x| (x - pe_ref).abs()).fold(0.0, f64::max);
    check(
        dg <= 1.0 + 1e-9 && de <= 1.0 + 1e-9,
        format!("sup |dp_norm_g| {dg:.4}, sup |dp_norm_e| {de:.4} (<= 1 + 1e-9)"),
    )
}

/// 6. coherent momentum accumulation on fig7
fn camel() -> Outcome {
    let recs = preset_records("fig7");
    let q = recs.len() * 3 / 4;
    let pg0 = recs[0].p_norm_g.unwrap();
    let pg_end = recs.last().unwrap().p_norm_g.unwrap();
    let shift = (pg_end - pg0).abs();
    let mut ok = shift > 1.0;
    let mut parts = vec![format!("|p_norm_g(end) - p_norm_g(0)| = {shift:.3} (> 1)")];
    for (name, get) in [
        ("p_norm_g", (|r: &ObservableRecord| r.p_norm_g) as fn(&ObservableRecord) -> Option<f64>),
        ("p_norm_e", |r: &ObservableRecord| r.p_norm_e),
    ] {
        let total = span(recs.iter().filter_map(get));
        let tail = span(recs[q..].iter().filter_map(get));
        ok &= tail <= 0.1 * total;
        parts.push(format!("{name} settles {:.3} (<= 0.10)", tail / total));
    }
    check(ok, parts.join("; "))
}

/// Printed four-exponential coefficients of the general solution.
fn four_exponential_matrix(p: f64, tau: f64, params: &SimParams) -> Matrix2 {
    let grid = MomentumGrid::new(p, 0.0, 1).unwrap();
    let s = dressed_spectrum(&grid, params);
    let (alpha, beta, rabi) = (s.alpha[0], s.beta[0], params.rabi);
    let e = |w: f64| C64::from_polar(1.0, -w * tau);
    let (eg, egp, ee, eep) =
        (e(s.omega_g(0)), e(s.omega_g_prime(0)), e(s.omega_e(0)), e(s.omega_e_prime(0)));
    let c_minus = (alpha - beta) / (2.0 * beta);
    let c_plus = (alpha + beta) / (2.0 * beta);
    let c_rabi = rabi / (2.0 * beta);
    // columns: images of a(p,0) = 1 and b(p+1,0) = 1
    let a_from_a = -c_minus * eg + c_plus * egp;
    let a_from_b = -c_rabi * eg + c_rabi * egp;
    let b_from_a = -c_rabi * ee + c_rabi * eep;
    let b_from_b = c_plus * ee - c_minus * eep;
    Matrix2([[a_from_a, a_from_b], [b_from_a, b_from_b]])
}

/// 7. semigroup composition and equivalence with the four-exponential form
fn semigroup_and_forms() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let sc = preset("fig2");
    let s0 = sc.initial_state().unwrap();
    let mut worst_comp: f64 = 0.0;
    for _ in 0..5 {
        let mut cuts: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
        let total = rng.gen_range(1.0..32.0);
        let mut s = s0.clone();
        let mut prev = 0.0;
        for c in cuts {
            s = evolve(&s, total * (c - prev), &sc.params);
            prev = c;
        }
        let direct = evolve(&s0, total, &sc.params);
        for j in 0..s.a.len() {
            worst_comp = worst_comp
                .max((s.a[j] - direct.a[j]).norm())
                .max((s.b[j] - direct.b[j]).norm());
        }
    }
    let mut worst_form: f64 = 0.0;
    for _ in 0..100 {
        let p = rng.gen_range(-10.0..10.0);
        let params = SimParams::new(rng.gen_range(0.1..50.0), rng.gen_range(-20.0..20.0)).unwrap();
        let tau = rng.gen_range(0.0..10.0);
        let d = four_exponential_matrix(p, tau, &params).max_abs_diff(&family_matrix(p, tau, &params));
        worst_form = worst_form.max(d);
    }
    check(
        worst_comp <= 1e-10 && worst_form <= 1e-12,
        format!("7-piece composition {worst_comp:.1e} (<= 1e-10), four-exponential form {worst_form:.1e} (<= 1e-12)"),
    )
}

/// 8. fig7 CSV is byte-identical for different thread counts
fn determinism() -> Outcome {
    let sc = preset("fig7");
    let csv = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let out = pool.install(|| scenario::run(&sc)).unwrap();
        let mut buf = Vec::new();
        write_series(&mut buf, &out.records).unwrap();
        buf
    };
    let (one, four) = (csv(1), csv(4));
    check(one == four, format!("1 vs 4 threads: {} bytes, identical = {}", one.len(), one == four))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 unitarity and conservation", conservation),
        ("3 definite-momentum Rabi formula", definite_momentum),
        ("4 damped flopping", damped_flopping),
        ("5 one-photon bound", one_photon_bound),
        ("6 coherent momentum accumulation", camel),
        ("7 semigroup and solution forms", semigroup_and_forms),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
