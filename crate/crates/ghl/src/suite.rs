//! The acceptance suite: ten numbered criteria covering exact hierarchy
//! generation, dispersion/velocity extraction, residual certificates for all
//! closed forms, the universal stationary equation, the quadratic bilinear
//! identity, conservation under evolution, the critical-point expansion, the
//! low-regularity separation trend, the elliptic layer, and the degeneration
//! chains.
//!
//! Each criterion returns a [`CriterionReport`] with one line per executed
//! check; the `acceptance` integration test and the `ghl suite` subcommand
//! both drive these functions. Tolerances are pinned here, not configurable.

use crate::closedform::{
    commensurability_solve, periodic_velocities, BreatherParams, MkdvBreatherParams,
    PeriodicBreatherParams, SolitonParams, Solution,
};
use crate::diffpoly::DiffPoly;
use crate::elliptic::{elliptic_k, jacobi};
use crate::evolve::{conservation_drift, evolve, EvolveConfig};
use crate::functionals::{
    critical_point_expansion, energy, higher_energy, lyapunov, mass, miura_residual_at,
    miura_residual_perturbed, ode_residual, pde_residual, soliton_ode_residual, DerivativeRoute,
    DispersionPower, SpectralCoefficients,
};
use crate::hierarchy::{gardner_rhs, lenard, mkdv_rhs, mkdv_velocities, velocity_pair};
use crate::illposed::{separation_margin, sweep, IllposedConfig};
use crate::numerics::{sample_solution, Grid, GridFunction};
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

struct Checker {
    pass: bool,
    details: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details
            .push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }

    fn finish(self, id: u32, name: &'static str, started: Instant) -> CriterionReport {
        CriterionReport {
            id,
            name,
            pass: self.pass,
            details: self.details,
            seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// Deterministic parameter draws for the randomized checks.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }
}

fn golden(text: &str, var: char) -> DiffPoly {
    DiffPoly::parse(text, var).expect("embedded golden transcription must parse")
}

const GOLD_GARDNER3: &str = include_str!("../tests/golden/gardner3.txt");
const GOLD_GARDNER5: &str = include_str!("../tests/golden/gardner5.txt");
const GOLD_GARDNER7: &str = include_str!("../tests/golden/gardner7.txt");
const GOLD_GARDNER9: &str = include_str!("../tests/golden/gardner9.txt");
const GOLD_GARDNER11: &str = include_str!("../tests/golden/gardner11.txt");
const GOLD_MKDV9: &str = include_str!("../tests/golden/mkdv9.txt");
const GOLD_MKDV11: &str = include_str!("../tests/golden/mkdv11.txt");

/// Criterion 1: the generated recursion operators and flows match the
/// reference transcriptions exactly (documented diffs where the listings
/// carry typos or the removed transport monomial).
pub fn criterion_1() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();

    let expected_low = [
        "+1/2",
        "+v",
        "+v2x +3*v^2",
        "+v4x +10*v*v2x +5*v1x^2 +10*v^3",
        "+v6x +14*v*v4x +28*v1x*v3x +21*v2x^2 +70*v^2*v2x +70*v*v1x^2 +35*v^4",
    ];
    for (n, text) in expected_low.iter().enumerate() {
        let ln = lenard(n as u32).unwrap();
        c.check(
            ln == golden(text, 'v'),
            format!("recursion operator {n} matches its listing exactly"),
        );
    }

    let g1 = gardner_rhs(1).unwrap();
    c.check(
        golden(GOLD_GARDNER3, 'u').total_derivative() == g1.rhs.neg(),
        "order-3 flow matches the listing exactly".into(),
    );
    c.check(
        golden(GOLD_GARDNER5, 'u') == gardner_rhs(2).unwrap().rhs.neg(),
        "order-5 flow matches the listing exactly".into(),
    );
    c.check(
        golden(GOLD_GARDNER7, 'u') == gardner_rhs(3).unwrap().rhs.neg(),
        "order-7 flow matches the listing exactly".into(),
    );
    for (n, text) in [(4u32, GOLD_MKDV9), (5, GOLD_MKDV11)] {
        let eq = mkdv_rhs(n).unwrap();
        c.check(
            golden(text, 'u').total_derivative() == eq.rhs.neg(),
            format!("order-{} mKdV flow matches the listing exactly", 2 * n + 1),
        );
    }

    // order-9/11 flows: the listings differ from the generated moving-frame
    // flows by exactly the restored transport monomial (and one known
    // misprinted factor at order 9); the diff is pinned, not tolerated.
    let g4_inside = gardner_rhs(4).unwrap().rhs.neg().formal_integral().unwrap();
    let diff9 = golden(GOLD_GARDNER9, 'u').sub(&g4_inside);
    let expected9 = golden(
        "+630*mu^8*u +70*mu^9 \
         -1008*mu^3*u1x*u3x -3024*mu^2*u*u1x*u3x -3024*mu*u^2*u1x*u3x",
        'u',
    );
    c.check(
        diff9 == expected9,
        "order-9 flow matches its listing up to the documented diff \
         (transport monomial + one misprinted (mu+u)^3 factor)"
            .into(),
    );
    let g5_inside = gardner_rhs(5).unwrap().rhs.neg().formal_integral().unwrap();
    let diff11 = golden(GOLD_GARDNER11, 'u').sub(&g5_inside);
    c.check(
        diff11 == golden("+2772*mu^10*u +252*mu^11", 'u'),
        "order-11 flow matches its listing up to the transport monomial".into(),
    );

    // fifth recursion operator: the listing is inhomogeneous (known typos);
    // the generated one passes grading and the defining recursion.
    let l4 = lenard(4).unwrap();
    let l5 = lenard(5).unwrap();
    c.check(l5.weight_check(2, 10), "generated L5 is weight-10 homogeneous".into());
    let image = l4
        .total_derivative()
        .total_derivative()
        .total_derivative()
        .add(&DiffPoly::variable(0).mul(&l4.total_derivative()).scale(&crate::coeff::Coeff::from_int(4)))
        .add(&DiffPoly::variable(1).mul(&l4).scale(&crate::coeff::Coeff::from_int(2)));
    c.check(
        l5.total_derivative() == image,
        "generated L5 satisfies the defining recursion exactly".into(),
    );

    c.finish(1, "hierarchy generation, exact", started)
}

/// Transcription of the printed order-9 breather velocity closed forms.
fn printed_order9_velocities(a: f64, b: f64, m: f64) -> (f64, f64) {
    let delta = a
        * (a.powi(8) - 18.0 * a.powi(6) * (2.0 * b * b + m * m)
            + 126.0 * a.powi(4) * (b.powi(4) + 3.0 * b * b * m * m + m.powi(4))
            - 42.0
                * a
                * a
                * (2.0 * b.powi(6)
                    + 15.0 * b.powi(4) * m * m
                    + 30.0 * b * b * m.powi(4)
                    + 10.0 * m.powi(6))
            + 9.0
                * (b.powi(8)
                    + 14.0 * b.powi(6) * m * m
                    + 70.0 * b.powi(4) * m.powi(4)
                    + 140.0 * b * b * m.powi(6)
                    + 70.0 * m.powi(8)));
    let gamma = -b
        * (9.0 * a.powi(8) - 42.0 * a.powi(6) * (2.0 * b * b + 3.0 * m * m)
            + 126.0 * a.powi(4) * (b.powi(4) + 5.0 * b * b * m * m + 5.0 * m.powi(4))
            - 18.0
                * a
                * a
                * (2.0 * b.powi(6)
                    + 21.0 * b.powi(4) * m * m
                    + 70.0 * b * b * m.powi(4)
                    + 70.0 * m.powi(6))
            + b.powi(8)
            + 18.0 * b.powi(6) * m * m
            + 126.0 * b.powi(4) * m.powi(4)
            + 420.0 * b * b * m.powi(6)
            + 630.0 * m.powi(8));
    (delta, gamma)
}

/// Transcription of the printed order-11 breather velocity closed forms.
fn printed_order11_velocities(a: f64, b: f64, m: f64) -> (f64, f64) {
    let delta = a
        * (a.powi(10) - 11.0 * a.powi(8) * (5.0 * b * b + 2.0 * m * m)
            + 66.0 * a.powi(6) * (5.0 * b.powi(4) + 12.0 * b * b * m * m + 3.0 * m.powi(4))
            - 462.0
                * a.powi(4)
                * (b.powi(6) + 6.0 * b.powi(4) * m * m + 9.0 * b * b * m.powi(4) + 2.0 * m.powi(6))
            + 33.0
                * a
                * a
                * (5.0 * b.powi(8)
                    + 56.0 * b.powi(6) * m * m
                    + 210.0 * b.powi(4) * m.powi(4)
                    + 280.0 * b * b * m.powi(6)
                    + 70.0 * m.powi(8))
            - 11.0
                * (b.powi(10)
                    + 18.0 * b.powi(8) * m * m
                    + 126.0 * b.powi(6) * m.powi(4)
                    + 420.0 * b.powi(4) * m.powi(6)
                    + 630.0 * b * b * m.powi(8)
                    + 252.0 * m.powi(10)));
    let gamma = -b
        * (-11.0 * a.powi(10) + 33.0 * a.powi(8) * (5.0 * b * b + 6.0 * m * m)
            - 462.0 * a.powi(6) * (b.powi(4) + 4.0 * b * b * m * m + 3.0 * m.powi(4))
            + 66.0
                * a.powi(4)
                * (5.0 * b.powi(6)
                    + 42.0 * b.powi(4) * m * m
                    + 105.0 * b * b * m.powi(4)
                    + 70.0 * m.powi(6))
            - 11.0
                * a
                * a
                * (5.0 * b.powi(8)
                    + 72.0 * b.powi(6) * m * m
                    + 378.0 * b.powi(4) * m.powi(4)
                    + 840.0 * b * b * m.powi(6)
                    + 630.0 * m.powi(8))
            + b.powi(10)
            + 22.0 * b.powi(8) * m * m
            + 198.0 * b.powi(6) * m.powi(4)
            + 924.0 * b.powi(4) * m.powi(6)
            + 2310.0 * b * b * m.powi(8)
            + 2772.0 * m.powi(10));
    (delta, gamma)
}

/// Criterion 2: dispersion coefficients and breather velocities.
///
/// The printed order-9/11 velocity listings are written for the flows with
/// their transport monomial still present, and carry overall `-alpha` /
/// `+beta` factors (sign alternating with the order on the `delta` side).
/// The check therefore pins the algebraic relation
/// `listed = (+/-) alpha_or_beta * (velocity - a0 mu^{2n})` to 1e-12 over
/// random admissible parameters; at `mu = 0` the usual closed forms are
/// recovered verbatim.
pub fn criterion_2() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();

    let a2: Vec<i64> = gardner_rhs(2)
        .unwrap()
        .dispersion
        .iter()
        .map(|v| v.to_string().parse().unwrap())
        .collect();
    c.check(a2 == [10, 1], format!("order-5 dispersion coefficients = {a2:?}"));
    let a3: Vec<i64> = gardner_rhs(3)
        .unwrap()
        .dispersion
        .iter()
        .map(|v| v.to_string().parse().unwrap())
        .collect();
    c.check(a3 == [70, 14, 1], format!("order-7 dispersion coefficients = {a3:?}"));

    let t4 = gardner_rhs(4).unwrap().transport.to_string();
    let t5 = gardner_rhs(5).unwrap().transport.to_string();
    c.check(t4 == "630" && t5 == "2772", format!("transport coefficients {t4}, {t5}"));

    let mut rng = SplitMix64(0x51eeded);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let alpha = rng.uniform(0.3, 2.0);
        let beta = rng.uniform(0.3, 2.0);
        let mu_max = 0.49 * (alpha * alpha + beta * beta).sqrt();
        let mu = rng.uniform(0.0, mu_max);
        let (d4, g4) = velocity_pair(4, alpha, beta, mu).unwrap();
        let (p9d, p9g) = printed_order9_velocities(alpha, beta, mu);
        let s4 = 630.0 * mu.powi(8);
        let r = ((p9d - (-alpha * (d4 - s4))) / p9d.abs().max(1.0)).abs();
        worst = worst.max(r);
        let r = ((p9g - beta * (g4 - s4)) / p9g.abs().max(1.0)).abs();
        worst = worst.max(r);
        let (d5, g5) = velocity_pair(5, alpha, beta, mu).unwrap();
        let (p11d, p11g) = printed_order11_velocities(alpha, beta, mu);
        let s5 = 2772.0 * mu.powi(10);
        let r = ((p11d - alpha * (d5 - s5)) / p11d.abs().max(1.0)).abs();
        worst = worst.max(r);
        let r = ((p11g - beta * (g5 - s5)) / p11g.abs().max(1.0)).abs();
        worst = worst.max(r);
    }
    c.check(
        worst < 1e-12,
        format!("order-9/11 velocity listings matched over 100 draws (worst rel {worst:.2e})"),
    );

    let mut worst0: f64 = 0.0;
    let mut rng = SplitMix64(0xfeed);
    for n in 1..=6u32 {
        for _ in 0..20 {
            let alpha = rng.uniform(0.3, 2.0);
            let beta = rng.uniform(0.3, 2.0);
            let (d, g) = velocity_pair(n, alpha, beta, 0.0).unwrap();
            let (d0, g0) = mkdv_velocities(n, alpha, beta);
            worst0 = worst0.max(((d - d0) / d0.abs().max(1.0)).abs());
            worst0 = worst0.max(((g - g0) / g0.abs().max(1.0)).abs());
        }
    }
    c.check(
        worst0 < 1e-12,
        format!("mu = 0 velocities equal the direct power expansion through order 13 (worst {worst0:.2e})"),
    );

    c.finish(2, "dispersion coefficients and velocities", started)
}

/// Criterion 3: flow residuals of every closed form.
pub fn criterion_3() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let grid = Grid::new(40.0, 2048).unwrap();
    let tol = 1e-6;

    let mut rng = SplitMix64(0x5011709);
    for n in 1..=5u32 {
        let eq = gardner_rhs(n).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let cc = rng.uniform(0.9, 1.5);
            let mu = rng.uniform(0.0, 0.5);
            let sol = Solution::Soliton(SolitonParams::new(n, cc, mu).unwrap());
            for &t in &[0.0, 0.3] {
                let r = pde_residual(&eq, &sol, t, grid, mu, DerivativeRoute::Analytic);
                worst = worst.max(r.relative());
            }
        }
        c.check(
            worst < tol,
            format!("solitons, order {}: worst relative residual {worst:.2e}", 2 * n + 1),
        );
    }

    let mut rng = SplitMix64(0xb4ea7);
    for n in 1..=4u32 {
        let eq = gardner_rhs(n).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let alpha = rng.uniform(0.8, 1.3);
            let beta = rng.uniform(0.8, 1.3);
            let mu = rng.uniform(0.05, 0.45);
            let p = BreatherParams::new(n, alpha, beta, mu, 0.0, 0.0).unwrap();
            let sol = Solution::Breather(p);
            for &t in &[0.0, 0.3] {
                let r = pde_residual(&eq, &sol, t, grid, mu, DerivativeRoute::Analytic);
                worst = worst.max(r.relative());
            }
        }
        c.check(
            worst < tol,
            format!("breathers, order {}: worst relative residual {worst:.2e}", 2 * n + 1),
        );
    }

    // the soliton's second-order stationary equation, with the dispersion
    // power arbitrated numerically: the sampled profile annihilates the c^2
    // variant and visibly fails the linear-in-c variant
    let q = SolitonParams::new(3, 1.3, 0.4).unwrap();
    let qs = sample_solution(&Solution::Soliton(q), 0.0, grid, 0.0);
    let good = soliton_ode_residual(&qs, 1.3, 0.4, DispersionPower::CSquared);
    let bad = soliton_ode_residual(&qs, 1.3, 0.4, DispersionPower::CLinear);
    c.check(
        good.relative() < 1e-9 && bad.relative() > 1e-3,
        format!(
            "soliton stationary equation carries the squared dispersion coefficient              ({:.2e} vs {:.2e} for the linear variant)",
            good.relative(),
            bad.relative()
        ),
    );

    // spectral route cross-check where its roundoff floor allows
    let mut worst_s: f64 = 0.0;
    for n in 1..=2u32 {
        let eq = gardner_rhs(n).unwrap();
        let p = BreatherParams::new(n, 1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
        let sol = Solution::Breather(p);
        let r = pde_residual(&eq, &sol, 0.3, grid, p.mu, DerivativeRoute::Spectral);
        worst_s = worst_s.max(r.relative());
    }
    c.check(
        worst_s < tol,
        format!("spectral-derivative route agrees at orders 3 and 5 ({worst_s:.2e})"),
    );

    // periodic breathers on one exact period
    for order in [5u32, 7] {
        let p = PeriodicBreatherParams::new(order, 1.0, 1.0 / 17.0, 0.0, 0.0).unwrap();
        let eq = mkdv_rhs((order - 1) / 2).unwrap();
        let pgrid = Grid::new(p.period / 2.0, 1024).unwrap();
        let sol = Solution::Periodic(p);
        let r = pde_residual(&eq, &sol, 0.2, pgrid, 0.0, DerivativeRoute::Analytic);
        c.check(
            r.relative() < tol,
            format!("periodic breather, order {order}: relative residual {:.2e}", r.relative()),
        );
    }

    c.finish(3, "closed-form flow residuals", started)
}


/// Criterion 4: one stationary fourth-order equation annihilates the
/// breathers of every tested order, at fixed `(alpha, beta, mu)`.
pub fn criterion_4() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let grid = Grid::new(40.0, 2048).unwrap();
    let (alpha, beta, mu) = (1.0, 1.1, 0.3);
    let t = 0.35;
    for n in 1..=4u32 {
        let p = BreatherParams::new(n, alpha, beta, mu, 0.0, 0.0).unwrap();
        let sol = Solution::Breather(p);
        let b = sample_solution(&sol, t, grid, sol.envelope_center(t));
        let r = ode_residual(&b, mu, alpha, beta);
        c.check(
            r.relative() < 1e-7,
            format!(
                "order-{} breather satisfies the universal equation ({:.2e} of scale {:.2e})",
                2 * n + 1,
                r.relative(),
                r.scale
            ),
        );
    }
    for n in 1..=4u32 {
        let p = MkdvBreatherParams::new(n, alpha, beta, 0.0, 0.0).unwrap();
        let sol = Solution::MkdvBreather(p);
        let b = sample_solution(&sol, t, grid, sol.envelope_center(t));
        let r = ode_residual(&b, 0.0, alpha, beta);
        c.check(
            r.relative() < 1e-7,
            format!(
                "order-{} mKdV breather satisfies the mu = 0 equation ({:.2e})",
                2 * n + 1,
                r.relative()
            ),
        );
    }
    c.finish(4, "universal fourth-order stationary equation", started)
}

/// Criterion 5: the quadratic numerator/denominator identity.
pub fn criterion_5() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let mut rng = SplitMix64(0x1dfee1);
    for n in 1..=4u32 {
        let p = BreatherParams::new(
            n,
            rng.uniform(0.8, 1.2),
            rng.uniform(0.8, 1.2),
            rng.uniform(0.1, 0.4),
            rng.uniform(-0.5, 0.5),
            rng.uniform(-0.5, 0.5),
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let t = rng.uniform(-1.0, 1.0);
            let x = rng.uniform(-20.0, 20.0);
            worst = worst.max(miura_residual_at(&p, t, x).abs());
        }
        c.check(
            worst < 1e-9,
            format!("order-{} breather identity residual {worst:.2e} over 1000 points", 2 * n + 1),
        );
        let g = Grid::new(30.0, 256).unwrap();
        let bad = miura_residual_perturbed(&p, 0.3, g, 0.1);
        c.check(
            bad > 1e-2,
            format!("perturbed profile is rejected (residual {bad:.2e})"),
        );
    }
    c.finish(5, "quadratic bilinear identity", started)
}

/// Criterion 6: conservation, statically on the exact breather and
/// dynamically under pseudospectral evolution at orders 3 and 5.
pub fn criterion_6() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();

    // static: five sampling times of the exact order-3 breather
    let grid = Grid::new(40.0, 2048).unwrap();
    let p = BreatherParams::new(1, 1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
    let w = SpectralCoefficients::new(p.alpha, p.beta);
    let sol = Solution::Breather(p);
    let mut series: [Vec<f64>; 4] = Default::default();
    for &t in &[0.0, 0.11, 0.23, 0.37, 0.5] {
        let b = sample_solution(&sol, t, grid, sol.envelope_center(t));
        series[0].push(mass(&b));
        series[1].push(energy(&b, p.mu));
        series[2].push(higher_energy(&b, p.mu));
        series[3].push(lyapunov(&b, p.mu, w));
    }
    for (name, s) in ["mass", "energy", "higher energy", "lyapunov"]
        .iter()
        .zip(&series)
    {
        let drift = s
            .iter()
            .map(|v| (v - s[0]).abs() / s[0].abs().max(1.0))
            .fold(0.0, f64::max);
        c.check(
            drift < 1e-8,
            format!("{name} constant across 5 times (drift {drift:.2e})"),
        );
    }

    // dynamic: orders 3 and 5
    // The order-5 run uses a small-amplitude breather: the flow's nonlinear
    // stiffness grows like xi_max^3 while the profile's analyticity strip
    // (hence the resolvable xi range) narrows with amplitude and mu, so mild
    // parameters are what keep an accurate T = 1 run affordable.
    let runs = [
        (1u32, 1.0, 0.9, 0.3, 25.0, 1024usize),
        (2, 0.45, 0.3, 0.04, 90.0, 1024),
    ];
    for (n, alpha, beta, mu, half_width, npts) in runs {
        let eq = gardner_rhs(n).unwrap();
        let p = BreatherParams::new(n, alpha, beta, mu, 0.0, 0.0).unwrap();
        let g = Grid::new(half_width, npts).unwrap();
        let sol = Solution::Breather(p);
        let u0 = sample_solution(&sol, 0.0, g, 0.0);
        let amp = 1.25 * u0.max_abs();
        let dt = EvolveConfig::default_dt(&eq, mu, g, amp);
        let cfg = EvolveConfig::new(eq, mu, g, dt, 1.0, true, amp).unwrap();
        let traj = evolve(&cfg, &u0).unwrap();
        let exact = sample_solution(&sol, 1.0, g, 0.0);
        let err = traj.final_state().sub(&exact).max_abs();
        c.check(
            err < 1e-6,
            format!("order-{} evolution reproduces the breather at T = 1 ({err:.2e}, dt = {dt:.2e})", 2 * n + 1),
        );
        let drift = conservation_drift(&traj, mu, SpectralCoefficients::new(alpha, beta));
        c.check(
            drift.max() < 1e-8,
            format!("order-{} evolution conserves all four functionals (drift {:.2e})", 2 * n + 1, drift.max()),
        );
    }

    c.finish(6, "conservation, static and dynamic", started)
}

fn random_direction(grid: Grid, rng: &mut SplitMix64) -> GridFunction {
    let c1 = rng.uniform(-1.0, 1.0);
    let c2 = rng.uniform(-1.0, 1.0);
    let x1 = rng.uniform(-3.0, 3.0);
    let x2 = rng.uniform(-3.0, 3.0);
    let w1 = rng.uniform(2.0, 6.0);
    let w2 = rng.uniform(2.0, 6.0);
    let k = rng.uniform(0.4, 1.5);
    let z = GridFunction::from_fn(grid, |x| {
        c1 * (-(x - x1) * (x - x1) / w1).exp() + c2 * (k * x).sin() * (-(x - x2) * (x - x2) / w2).exp()
    });
    let norm = z.sobolev_norm(2.0);
    z.scale(1.0 / norm)
}

/// Criterion 7: the breather is a critical point of the Lyapunov functional;
/// the remainder beyond the quadratic term is cubic.
pub fn criterion_7() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let grid = Grid::new(40.0, 2048).unwrap();
    let p = BreatherParams::new(1, 1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
    let w = SpectralCoefficients::new(p.alpha, p.beta);
    let sol = Solution::Breather(p);
    let b = sample_solution(&sol, 0.0, grid, 0.0);
    let eps: Vec<f64> = (0..9).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect();
    let mut rng = SplitMix64(0xc7171ca1);
    for i in 0..5 {
        let z = random_direction(grid, &mut rng);
        let rep = critical_point_expansion(&b, &z, p.mu, w, &eps);
        c.check(
            rep.first_variation.abs() < 1e-6 * rep.z_norm,
            format!(
                "direction {i}: first variation {:.2e} (direction norm {:.2})",
                rep.first_variation, rep.z_norm
            ),
        );
        c.check(
            (rep.slope - 3.0).abs() <= 0.1,
            format!("direction {i}: remainder slope {:.3}", rep.slope),
        );
    }
    // negative control
    let mut rng = SplitMix64(0xc7171ca1);
    let z = random_direction(grid, &mut rng);
    let bad = b.map(|v| v + 0.05 * (1.0 + v));
    let rep = critical_point_expansion(&bad, &z, p.mu, w, &eps);
    c.check(
        rep.first_variation.abs() > 1e-2 * rep.z_norm,
        format!("non-solution profile shows order-one first variation ({:.2e})", rep.first_variation),
    );
    c.finish(7, "critical-point expansion", started)
}

/// Criterion 8: the norm-separation trend under carrier growth.
///
/// The asymptotic statement (separation for arbitrarily large carriers) is
/// not reproducible at desk scale; it is accepted through the monotone trend
/// of the separation ratio over `alpha in {20, 40, 80}`, which every report
/// states explicitly.
pub fn criterion_8() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let base = IllposedConfig {
        n: 2,
        s: 0.5,
        alpha: 20.0,
        delta_sep: 0.1,
        mu: 0.5,
        t_final: None,
    };
    let alphas = [20.0, 40.0, 80.0];
    let reports: Vec<_> = sweep(&base, &alphas)
        .into_iter()
        .collect::<Result<_, _>>()
        .unwrap();
    let mut prev_ratio = 0.0;
    let mut monotone = true;
    for r in &reports {
        c.check(
            r.d_initial <= 0.5,
            format!("alpha = {}: initial distance {:.3} <= 0.5", r.alpha, r.d_initial),
        );
        c.check(
            r.ratio >= 10.0,
            format!("alpha = {}: separation ratio {:.4} >= 10", r.alpha, r.ratio),
        );
        // with the per-alpha waiting time the supports are fully disjoint at
        // every tested alpha, so the ratio sits at its ceiling; non-decreasing
        // is checked up to 1% of that plateau
        monotone &= r.ratio >= prev_ratio * 0.99;
        prev_ratio = r.ratio;
    }
    c.check(monotone, "separation ratio is non-decreasing in alpha (1% slack at the ceiling)".into());
    // at a fixed observation time the separation margin itself grows with
    // alpha below the threshold index: the growth mechanism in the raw
    let t_fixed = 0.1;
    let margins: Vec<f64> = alphas
        .iter()
        .map(|&alpha| separation_margin(&IllposedConfig { alpha, ..base }, t_fixed).unwrap())
        .collect();
    c.check(
        margins.windows(2).all(|w| w[1] > 1.8 * w[0]),
        format!("fixed-T separation margins grow with alpha: {margins:?}"),
    );
    let n0 = reports[0].norm1_initial;
    let stable = reports
        .iter()
        .all(|r| r.norm1_initial / n0 < 2.0 && n0 / r.norm1_initial < 2.0);
    c.check(stable, "individual norms stay within 2x as alpha doubles".into());

    // threshold direction at the same (delta, T): margin collapses above
    // s = (2n-1)/4
    let t = base.default_time();
    let below = separation_margin(&base, t).unwrap();
    let above = separation_margin(&IllposedConfig { s: 1.0, ..base }, t).unwrap();
    c.check(
        below > 10.0 && above < 1.0,
        format!("support-separation margin {below:.1} below threshold vs {above:.2e} above"),
    );

    // mu = 0 member runs identically
    let mkdv = IllposedConfig { mu: 0.0, ..base };
    let r = crate::illposed::run_experiment(&mkdv).unwrap();
    c.check(
        r.ratio >= 10.0,
        format!("mu = 0 variant separates as well (ratio {:.1})", r.ratio),
    );
    c.check(
        reports[0].note.contains("monotone"),
        "reports state the trend-based acceptance explicitly".into(),
    );
    c.finish(8, "low-regularity separation trend", started)
}

/// Criterion 9: elliptic layer.
pub fn criterion_9() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let k0 = elliptic_k(0.0).unwrap();
    c.check(
        (k0 - std::f64::consts::FRAC_PI_2).abs() < 1e-14,
        format!("K(0) = {k0}"),
    );
    let mut rng = SplitMix64(0xe111e71c);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let u = rng.uniform(-20.0, 20.0);
        let m = rng.uniform(0.0, 1.0);
        let (sn, cn, dn, _) = jacobi(u, m);
        worst = worst.max((sn * sn + cn * cn - 1.0).abs());
        worst = worst.max((dn * dn + m * sn * sn - 1.0).abs());
    }
    c.check(worst < 1e-12, format!("elliptic identities hold to {worst:.2e}"));
    let (alpha, m, period) = commensurability_solve(1.0, 1.0 / 17.0).unwrap();
    c.check(
        (alpha - 2.0).abs() < 1e-12 && (m - 1.0 / 17.0).abs() < 1e-12,
        format!("commensurability solve returns alpha = {alpha}, m = {m}"),
    );
    let l1 = 4.0 / alpha * elliptic_k(1.0 / 17.0).unwrap();
    let l2 = 2.0 / 1.0 * elliptic_k(m).unwrap();
    c.check(
        (l1 - period).abs() < 1e-12 && (l2 - period).abs() < 1e-12,
        format!("both period expressions agree: {l1:.15} vs {l2:.15}"),
    );
    c.finish(9, "elliptic layer", started)
}


/// Criterion 10: degeneration chains.
pub fn criterion_10() -> CriterionReport {
    let started = Instant::now();
    let mut c = Checker::new();
    let mut rng = SplitMix64(0xdecade);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let alpha = rng.uniform(0.4, 2.0);
        let beta = rng.uniform(0.4, 2.0);
        // both routes are degree-(2n) polynomials; differences are measured
        // against the natural monomial scale (alpha^2+beta^2)^n, which is
        // what 1e-14 can mean near the polynomials' cancellation points
        let s2 = alpha * alpha + beta * beta;
        let (d5, g5) = periodic_velocities(5, alpha, beta, 0.0, 1.0);
        let (d5n, g5n) = mkdv_velocities(2, alpha, beta);
        worst = worst.max((d5 - d5n).abs() / s2.powi(2));
        worst = worst.max((g5 - g5n).abs() / s2.powi(2));
        let (d7, g7) = periodic_velocities(7, alpha, beta, 0.0, 1.0);
        let (d7n, g7n) = mkdv_velocities(3, alpha, beta);
        worst = worst.max((d7 - d7n).abs() / s2.powi(3));
        worst = worst.max((g7 - g7n).abs() / s2.powi(3));
    }
    c.check(
        worst < 1e-14,
        format!("periodic velocities at (k, m) = (0, 1) equal the open-line forms ({worst:.2e})"),
    );

    let b = BreatherParams::new(2, 1.0, 1.0, 1e-6, 0.2, -0.3).unwrap();
    let m = MkdvBreatherParams::new(2, 1.0, 1.0, 0.2, -0.3).unwrap();
    let sb = Solution::Breather(b);
    let sm = Solution::MkdvBreather(m);
    let mut gap: f64 = 0.0;
    for i in 0..=400 {
        let x = -20.0 + 0.1 * i as f64;
        gap = gap.max((sb.eval(0.4, x) - sm.eval(0.4, x)).abs());
    }
    c.check(
        gap < 1e-4,
        format!("mu -> 0 limit is uniform on [-20, 20] (gap {gap:.2e} at mu = 1e-6)"),
    );
    c.finish(10, "degeneration chains", started)
}

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

pub fn run_one(id: u32) -> Option<CriterionReport> {
    match id {
        1 => Some(criterion_1()),
        2 => Some(criterion_2()),
        3 => Some(criterion_3()),
        4 => Some(criterion_4()),
        5 => Some(criterion_5()),
        6 => Some(criterion_6()),
        7 => Some(criterion_7()),
        8 => Some(criterion_8()),
        9 => Some(criterion_9()),
        10 => Some(criterion_10()),
        _ => None,
    }
}
