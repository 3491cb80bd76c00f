//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use stargraph_transport::dirac::DiracSystem;
use stargraph_transport::numerics::special::{exp_integral_i, polylog};
use stargraph_transport::reservoir::{DiracReservoirBank, ReservoirBank, Statistics};
use stargraph_transport::schrodinger::{
    friedel_oscillation_closed_form, shot_noise, steady_current_limits,
    thermal_noise_bounds_two_lead, SchrodingerSystem,
};
use stargraph_transport::vertex::{
    Coupling, GaugePhases, TwoLeadParams, UnitaryMatrix, VertexCoupling,
};

// ---------------------------------------------------------------------------
// Ensemble helpers.

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Haar-like unitary from Gram-Schmidt on a complex Gaussian matrix.
fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        // Box-Muller pairs.
                        let u1: f64 = rng.gen_range(1e-12..1.0);
                        let u2: f64 = rng.gen_range(0.0..1.0);
                        let r = (-2.0 * u1.ln()).sqrt();
                        c(r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin())
                    })
                    .collect()
            })
            .collect();
        let mut ok = true;
        for i in 0..n {
            for j in 0..i {
                let proj: Complex64 = (0..n).map(|r| cols[j][r].conj() * cols[i][r]).sum();
                for r in 0..n {
                    let prev = cols[j][r];
                    cols[i][r] -= proj * prev;
                }
            }
            let norm: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for r in 0..n {
                cols[i][r] /= norm;
            }
        }
        if !ok {
            continue;
        }
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|r| (0..n).map(|i| cols[i][r]).collect())
            .collect();
        if let Ok(u) = UnitaryMatrix::new(&rows) {
            return u;
        }
    }
}

/// Random boundary coupling built spectrally; eigenphases in [lo, hi] so the
/// channel parameters eta = lambda tan(alpha) have controlled sign.
fn random_coupling(
    n: usize,
    rng: &mut ChaCha8Rng,
    alpha_range: (f64, f64),
    lambda_range: (f64, f64),
) -> VertexCoupling {
    let basis = random_unitary(n, rng);
    let alphas: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(alpha_range.0..alpha_range.1))
        .collect();
    let lambda = rng.gen_range(lambda_range.0..lambda_range.1);
    VertexCoupling::from_spectral(basis, &alphas, lambda).expect("spectral construction")
}

/// Bound-state-free coupling: lambda > 0 with non-positive eigenphases.
fn random_safe_coupling(n: usize, rng: &mut ChaCha8Rng) -> VertexCoupling {
    random_coupling(n, rng, (-1.45, 0.0), (0.1, 2.0))
}

fn fermi_bank(n: usize, rng: &mut ChaCha8Rng, mu_min: f64) -> ReservoirBank {
    let beta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
    let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(mu_min..3.0)).collect();
    ReservoirBank::new(beta, mu, Statistics::Fermi).unwrap()
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-14)
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_smatrix_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst_unit = 0.0f64;
    let mut worst_ha = 0.0f64;
    let mut worst_at_lambda = 0.0f64;
    for trial in 0..200 {
        let n = 2 + trial % 3;
        let coupling = random_coupling(n, &mut rng, (-1.5, 1.5), (0.1, 2.0));
        let u = coupling.boundary_matrix().clone();
        for idx in 0..50 {
            let k = 0.01 * (100.0f64 / 0.01).powf(idx as f64 / 49.0);
            let s = coupling.smatrix(k);
            worst_unit = worst_unit.max(s.unitarity_defect().0);
            worst_ha = worst_ha.max(s.adjoint().max_abs_diff(&coupling.smatrix(-k)));
        }
        worst_at_lambda =
            worst_at_lambda.max(coupling.smatrix(coupling.lambda()).max_abs_diff(u.matrix()));
        worst_at_lambda = worst_at_lambda.max(
            coupling
                .smatrix(-coupling.lambda())
                .max_abs_diff(&u.inverse()),
        );
    }
    assert!(worst_unit <= 1e-10, "unitarity defect {worst_unit:.3e}");
    assert!(
        worst_ha <= 1e-10,
        "hermitian analyticity defect {worst_ha:.3e}"
    );
    assert!(
        worst_at_lambda <= 1e-10,
        "S(lambda) = U defect {worst_at_lambda:.3e}"
    );
    println!(
        "[PASS] criterion 1: S-matrix laws over 200 couplings x 50 momenta \
         (unitarity {worst_unit:.2e}, analyticity {worst_ha:.2e}, S(lambda)=U {worst_at_lambda:.2e})"
    );
}

#[test]
fn criterion_02_kirchhoff_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let tol_ok = |sum: f64, scale: f64| sum <= (1e-9 * scale).max(1e-14);

    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = 2 + trial % 3;
        let coupling = random_safe_coupling(n, &mut rng);
        let bank = fermi_bank(n, &mut rng, 0.1);
        let sys =
            SchrodingerSystem::new(1.0, 1.0, Coupling::Spectral(coupling), bank, None).unwrap();
        let j = sys.steady_current().unwrap();
        assert!(tol_ok(j.kirchhoff_residual(), j.max_abs()), "current sum");
        let t = sys.heat_current().unwrap();
        assert!(tol_ok(t.kirchhoff_residual(), t.max_abs()), "heat sum");
        let g = sys.conductance().unwrap();
        assert!(
            tol_ok(g.column_kirchhoff_residual(), g.max_abs()),
            "conductance columns"
        );
        let p = sys.noise_zero_freq().unwrap();
        assert!(
            tol_ok(p.row_kirchhoff_residual(), p.max_abs())
                && tol_ok(p.column_kirchhoff_residual(), p.max_abs()),
            "noise sums"
        );
        worst = worst
            .max(j.kirchhoff_residual() / j.max_abs().max(1e-14))
            .max(p.row_kirchhoff_residual() / p.max_abs().max(1e-14));
    }

    for trial in 0..100 {
        let n = 2 + trial % 3;
        let u = random_unitary(n, &mut rng);
        let beta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let mu: Vec<f64> = (0..n)
            .map(|_| {
                let m: f64 = rng.gen_range(0.1..2.0);
                if rng.gen_bool(0.5) {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let mu_tilde: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let sys = DiracSystem::new(
            1.0,
            u,
            DiracReservoirBank::new(beta, mu, mu_tilde).unwrap(),
            None,
        )
        .unwrap();
        let j = sys.current().unwrap();
        assert!(tol_ok(j.kirchhoff_residual(), j.max_abs()));
        let t = sys.heat_current().unwrap();
        assert!(tol_ok(t.kirchhoff_residual(), t.max_abs()));
        let g = sys.conductance().unwrap();
        assert!(tol_ok(g.column_kirchhoff_residual(), g.max_abs()));
        let p = sys.noise_zero_freq().unwrap();
        assert!(
            tol_ok(p.row_kirchhoff_residual(), p.max_abs())
                && tol_ok(p.column_kirchhoff_residual(), p.max_abs())
        );
    }
    println!(
        "[PASS] criterion 2: Kirchhoff sums over 100 Schrödinger + 100 Dirac systems \
         (worst relative residual {worst:.2e})"
    );
}

#[test]
fn criterion_03_equilibrium_null() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let n = 2 + trial % 3;
        let coupling = random_safe_coupling(n, &mut rng);
        let beta = rng.gen_range(0.3..5.0);
        let mu = rng.gen_range(0.1..2.0);
        let bank = ReservoirBank::new(vec![beta; n], vec![mu; n], Statistics::Fermi).unwrap();
        let sys =
            SchrodingerSystem::new(1.0, 1.0, Coupling::Spectral(coupling), bank, None).unwrap();
        let j = sys.steady_current().unwrap();
        let t = sys.heat_current().unwrap();
        let rho = sys.charge_density_profile(0, 0.9).unwrap();
        assert!(
            j.max_abs() <= 1e-10,
            "equilibrium current {:.3e}",
            j.max_abs()
        );
        assert!(t.max_abs() <= 1e-10, "equilibrium heat {:.3e}", t.max_abs());
        assert!(
            rho.nonequilibrium_shift.abs() <= 1e-10,
            "equilibrium density shift {:.3e}",
            rho.nonequilibrium_shift
        );
        worst = worst
            .max(j.max_abs())
            .max(t.max_abs())
            .max(rho.nonequilibrium_shift.abs());

        // Isolated leads: every noise component vanishes, whatever the
        // reservoirs do.
        let isolated = TwoLeadParams::new(
            rng.gen_range(-2.0..-0.1),
            rng.gen_range(-2.0..-0.1),
            0.0,
            0.0,
        )
        .unwrap();
        let bank2 = ReservoirBank::new(
            vec![rng.gen_range(0.3..5.0), rng.gen_range(0.3..5.0)],
            vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)],
            Statistics::Fermi,
        )
        .unwrap();
        let iso_sys =
            SchrodingerSystem::new(1.0, 1.0, Coupling::TwoLead(isolated), bank2, None).unwrap();
        let p = iso_sys.noise_zero_freq().unwrap();
        assert!(
            p.max_abs() <= 1e-10,
            "isolated-lead noise {:.3e}",
            p.max_abs()
        );
        worst = worst.max(p.max_abs());
    }
    println!(
        "[PASS] criterion 3: equilibrium null (J, T, rho_neq) and isolated-lead noise \
         over 20 couplings (worst {worst:.2e})"
    );
}

#[test]
fn criterion_04_critical_closed_forms_vs_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let n = 2 + trial % 3;
        let u = random_unitary(n, &mut rng);
        let beta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..5.0)).collect();
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        let bank = ReservoirBank::new(beta, mu.clone(), Statistics::Fermi).unwrap();
        let sys =
            SchrodingerSystem::new(1.0, 1.0, Coupling::Critical(u.clone()), bank, None).unwrap();

        let j_closed = sys.steady_current().unwrap();
        let j_quad = sys.steady_current_quadrature().unwrap();
        let t_closed = sys.heat_current().unwrap();
        let t_quad = sys.heat_current_quadrature().unwrap();
        let scale_j = j_closed.max_abs().max(1e-10);
        let scale_t = t_closed.max_abs().max(1e-10);
        for i in 0..n {
            let gj = (j_closed.values[i] - j_quad.values[i]).abs() / scale_j;
            let gt = (t_closed.values[i] - t_quad.values[i]).abs() / scale_t;
            assert!(gj <= 1e-6, "current gap {gj:.3e}");
            assert!(gt <= 1e-6, "heat gap {gt:.3e}");
            worst = worst.max(gj).max(gt);
        }

        let sb_closed = sys.stefan_boltzmann_critical().unwrap();
        let sb_quad = sys.stefan_boltzmann_quadrature().unwrap();
        for i in 0..n {
            let g = rel_gap(sb_closed.values[i], sb_quad.values[i]);
            assert!(g <= 1e-6, "Stefan-Boltzmann gap {g:.3e}");
            worst = worst.max(g);
        }

        // Equal temperatures for the closed-form noise.
        let beta_eq = rng.gen_range(0.5..5.0);
        let bank_eq = ReservoirBank::new(vec![beta_eq; n], mu.clone(), Statistics::Fermi).unwrap();
        let sys_eq =
            SchrodingerSystem::new(1.0, 1.0, Coupling::Critical(u), bank_eq, None).unwrap();
        let p_closed = sys_eq.noise_critical_closed_form().unwrap();
        let p_quad = sys_eq.noise_zero_freq().unwrap();
        let scale_p = p_closed.max_abs().max(1e-10);
        for i in 0..n {
            for jj in 0..n {
                let g = (p_closed.get(i, jj) - p_quad.get(i, jj)).abs() / scale_p;
                assert!(g <= 1e-6, "noise gap {g:.3e}");
                worst = worst.max(g);
            }
        }
    }
    println!(
        "[PASS] criterion 4: critical closed forms vs quadrature on 50 systems \
         (worst relative gap {worst:.2e})"
    );
}

#[test]
fn criterion_05_limit_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);

    // Exact factor 2 between the temperature limits of the critical current.
    for _ in 0..20 {
        let n = 2 + rng.gen_range(0..3usize);
        let u = random_unitary(n, &mut rng);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        let (high, zero) = steady_current_limits(&u, 1.0, &mu).unwrap();
        for i in 0..n {
            assert_eq!(
                2.0 * high.values[i],
                zero.values[i],
                "limit ratio must be exactly 1/2"
            );
        }
    }

    // Dirac closed form at beta = 1e4 approaches the zero-temperature limit.
    let mut worst_dirac = 0.0f64;
    for _ in 0..20 {
        let n = 2 + rng.gen_range(0..3usize);
        let u = random_unitary(n, &mut rng);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let mu_tilde: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..-0.5)).collect();
        let sys = DiracSystem::new(
            1.0,
            u,
            DiracReservoirBank::new(vec![1e4; n], mu, mu_tilde).unwrap(),
            None,
        )
        .unwrap();
        let j = sys.current().unwrap();
        let (_, zero_t) = sys.current_limits().unwrap();
        for i in 0..n {
            let g = rel_gap(j.values[i], zero_t.values[i]);
            assert!(g <= 1e-3, "Dirac zero-T limit gap {g:.3e}");
            worst_dirac = worst_dirac.max(g);
        }
    }

    // Cold closed-form noise approaches the shot noise for well-separated
    // potentials (beta |mu_1 - mu_2| = 2500).
    let r = 1.0 / 2.0f64.sqrt();
    let hadamard =
        UnitaryMatrix::new(&[vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]]).unwrap();
    let mu = vec![25.0, 0.0];
    let bank = ReservoirBank::new(vec![100.0, 100.0], mu.clone(), Statistics::Fermi).unwrap();
    let sys =
        SchrodingerSystem::new(1.0, 1.0, Coupling::Critical(hadamard.clone()), bank, None).unwrap();
    let cold = sys.noise_critical_closed_form().unwrap();
    let shot = shot_noise(&hadamard, 1.0, &mu, Statistics::Fermi).unwrap();
    let mut worst_shot = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let g = rel_gap(cold.get(i, j), shot.get(i, j));
            assert!(g <= 1e-3, "shot-noise limit gap {g:.3e}");
            worst_shot = worst_shot.max(g);
        }
    }
    println!(
        "[PASS] criterion 5: limit identities (exact 1/2 ratio; Dirac T->0 gap {worst_dirac:.2e}; \
         shot-noise gap {worst_shot:.2e})"
    );
}

#[test]
fn criterion_06_friedel_oscillations() {
    // Cold scale-invariant Neumann lead with 2 m mu = 1 (k_F = 1, e = 1).
    let mu = 0.5;
    let bank = ReservoirBank::new(vec![f64::INFINITY], vec![mu], Statistics::Fermi).unwrap();
    let sys = SchrodingerSystem::new(
        1.0,
        1.0,
        Coupling::Critical(UnitaryMatrix::identity(1)),
        bank,
        None,
    )
    .unwrap();

    // Worked point: the window integral int_0^1 (dk/2pi) 2 cos(2kx) at
    // x = pi/4 evaluates to 2/pi^2.
    let x0 = PI / 4.0;
    let worked = sys.charge_density_profile(0, x0).unwrap().oscillating;
    assert!(
        (worked - 2.0 / (PI * PI)).abs() <= 1e-9,
        "worked point {worked} vs {}",
        2.0 / (PI * PI)
    );

    // Closed form vs quadrature at 20 distances including the worked point.
    let mut worst = 0.0f64;
    let mut xs = vec![x0];
    xs.extend((1..20).map(|i| 0.6 + 2.3 * i as f64));
    for &x in &xs {
        let closed = friedel_oscillation_closed_form(1.0, 1.0, 1.0, mu, x).unwrap();
        let quad = sys.charge_density_profile(0, x).unwrap().oscillating;
        let gap = (closed - quad).abs();
        assert!(gap <= 1e-6, "x = {x}: closed {closed} vs quadrature {quad}");
        worst = worst.max(gap);
    }

    // 1/x envelope: x * rho_osc at successive oscillation maxima stays within
    // 5% of the first-maximum value over x in [5, 50] half-periods.
    let amplitude_at = |j: usize| -> f64 {
        let x = PI / 4.0 + PI * j as f64; // maxima of sin(2x) at k_F = 1
        let v = sys.charge_density_profile(0, x).unwrap().oscillating;
        x * v
    };
    let reference = amplitude_at(5);
    let mut worst_env = 0.0f64;
    for j in 5..=50 {
        let a = amplitude_at(j);
        let dev = (a - reference).abs() / reference.abs();
        assert!(dev <= 0.05, "envelope deviation {dev:.3} at maximum {j}");
        worst_env = worst_env.max(dev);
    }
    println!(
        "[PASS] criterion 6: Friedel oscillations (worked point 2/pi^2; closed-vs-quadrature \
         {worst:.2e}; 1/x envelope within {worst_env:.2e})"
    );
}

#[test]
fn criterion_07_noise_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst_asym = 0.0f64;
    for trial in 0..25 {
        let n = 2 + trial % 3;
        let coupling = random_safe_coupling(n, &mut rng);
        let bank = fermi_bank(n, &mut rng, 0.0);
        let sys =
            SchrodingerSystem::new(1.0, 1.0, Coupling::Spectral(coupling), bank, None).unwrap();
        let p = sys.noise_zero_freq().unwrap();
        assert!(p.asymmetry() <= 1e-9, "asymmetry {:.3e}", p.asymmetry());
        worst_asym = worst_asym.max(p.asymmetry());
        for i in 0..n {
            assert!(
                p.get(i, i) >= 0.0,
                "negative Fermi autocorrelation {}",
                p.get(i, i)
            );
        }
    }

    // Bose shot noise is the negative of the Fermi one, entrywise.
    let mut worst_sign = 0.0f64;
    for _ in 0..20 {
        let n = 2 + rng.gen_range(0..3usize);
        let u = random_unitary(n, &mut rng);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        let fermi = shot_noise(&u, 1.0, &mu, Statistics::Fermi).unwrap();
        let bose = shot_noise(&u, 1.0, &mu, Statistics::Bose).unwrap();
        for i in 0..n {
            for j in 0..n {
                let gap = (fermi.get(i, j) + bose.get(i, j)).abs();
                assert!(gap <= 1e-9, "sign rule gap {gap:.3e}");
                worst_sign = worst_sign.max(gap);
            }
        }
    }

    // Permutation matrices transmit perfectly: shot noise vanishes exactly.
    let perm3 = UnitaryMatrix::new(&[
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    ])
    .unwrap();
    let p = shot_noise(&perm3, 1.0, &[2.0, 1.0, 0.3], Statistics::Fermi).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(
                p.get(i, j),
                0.0,
                "permutation shot noise must vanish exactly"
            );
        }
    }
    println!(
        "[PASS] criterion 7: noise structure (symmetry {worst_asym:.2e}, Fermi P_ii >= 0, \
         Bose = -Fermi shot noise {worst_sign:.2e}, permutation exactly 0)"
    );
}

#[test]
fn criterion_08_two_lead_thermal_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    // The envelope brackets the value for 30 (beta, eta, theta) combinations.
    for _ in 0..30 {
        let beta = 10f64.powf(rng.gen_range(-2.0..2.0));
        let eta = rng.gen_range(0.2..3.0);
        let theta = rng.gen_range(0.2..PI - 0.2);
        let params = TwoLeadParams::new(eta, 0.0, theta, 0.0).unwrap();
        let b = thermal_noise_bounds_two_lead(&params, 1.0, 1.0, beta).unwrap();
        assert!(
            b.lower <= b.value && b.value <= b.upper,
            "envelope violated: {} <= {} <= {} (beta {beta}, eta {eta}, theta {theta})",
            b.lower,
            b.value,
            b.upper
        );
    }

    // Low temperature: value/T flat within 5% for T in [1e-3, 1e-2] eta^2/2m.
    let params = TwoLeadParams::new(1.0, 0.0, PI / 2.0, 0.0).unwrap();
    let unit = 0.5; // eta^2 / (2 m)
    let mut ratios = Vec::new();
    for i in 0..7 {
        let t = 1e-3 * 10f64.powf(i as f64 / 6.0) * unit;
        let b = thermal_noise_bounds_two_lead(&params, 1.0, 1.0, 1.0 / t).unwrap();
        ratios.push(b.value / t);
    }
    let spread_low = ratios.iter().cloned().fold(f64::MIN, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread_low <= 1.05, "low-T linearity spread {spread_low}");

    // High temperature: value/ln(T) flat within 10% for T in [1e2, 1e4].
    let mut ratios = Vec::new();
    for i in 0..7 {
        let t_units = 1e2 * 10f64.powf(2.0 * i as f64 / 6.0);
        let t = t_units * unit;
        let b = thermal_noise_bounds_two_lead(&params, 1.0, 1.0, 1.0 / t).unwrap();
        ratios.push(b.value / t_units.ln());
    }
    let spread_high = ratios.iter().cloned().fold(f64::MIN, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread_high <= 1.10, "high-T log spread {spread_high}");
    println!(
        "[PASS] criterion 8: two-lead thermal noise (30 bracketed combos; value/T spread \
         {spread_low:.4}; value/lnT spread {spread_high:.4})"
    );
}

#[test]
fn criterion_09_dirac_correspondences() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);

    // mu_tilde = 0 reduces the Dirac current to the Schrödinger critical one.
    // The antiparticle window contributes -(ln 2)/beta_j per lead, which
    // cancels through the unitarity row sums only when the temperature is
    // common to all reservoirs, so the correspondence is stated there.
    let mut worst_match = 0.0f64;
    for _ in 0..20 {
        let n = 2 + rng.gen_range(0..3usize);
        let u = random_unitary(n, &mut rng);
        let beta = vec![rng.gen_range(0.3..5.0); n];
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        let dirac = DiracSystem::new(
            1.0,
            u.clone(),
            DiracReservoirBank::new(beta.clone(), mu.clone(), vec![0.0; n]).unwrap(),
            None,
        )
        .unwrap();
        let schrodinger = SchrodingerSystem::new(
            1.0,
            1.0,
            Coupling::Critical(u),
            ReservoirBank::new(beta, mu, Statistics::Fermi).unwrap(),
            None,
        )
        .unwrap();
        let jd = dirac.current().unwrap();
        let js = schrodinger.steady_current().unwrap();
        for i in 0..n {
            let gap = (jd.values[i] - js.values[i]).abs();
            assert!(gap <= 1e-12, "correspondence gap {gap:.3e}");
            worst_match = worst_match.max(gap);
        }
    }

    // Purely thermal Dirac noise: P = (e^2 / 2 pi beta)(2 delta - |U|^2 - |U|^2)
    // carrying both particle and antiparticle halves, checked against the
    // kernel quadrature.
    let r = 1.0 / 2.0f64.sqrt();
    let hadamard =
        UnitaryMatrix::new(&[vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]]).unwrap();
    let beta = 1.3;
    let sys = DiracSystem::new(
        1.0,
        hadamard.clone(),
        DiracReservoirBank::new(vec![beta, beta], vec![0.0, 0.0], vec![0.0, 0.0]).unwrap(),
        None,
    )
    .unwrap();
    let closed = sys.noise_closed_form().unwrap();
    let quad = sys.noise_quadrature().unwrap();
    let mut worst_noise = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            let expected =
                (2.0 * delta - hadamard.entry(i, j).norm_sqr() - hadamard.entry(j, i).norm_sqr())
                    / (2.0 * PI * beta);
            assert!((closed.get(i, j) - expected).abs() <= 1e-12);
            let g = rel_gap(closed.get(i, j), quad.get(i, j));
            assert!(g <= 1e-6, "thermal Dirac noise quadrature gap {g:.3e}");
            worst_noise = worst_noise.max(g);
        }
    }

    // Charge conjugation: purely imaginary unitary with mu = -mu_tilde gives
    // exactly zero current and charge density.
    let u_imag = UnitaryMatrix::new(&[
        vec![c(0.0, 0.0), c(0.0, 1.0)],
        vec![c(0.0, 1.0), c(0.0, 0.0)],
    ])
    .unwrap();
    let cc = DiracSystem::new(
        1.0,
        u_imag,
        DiracReservoirBank::new(vec![0.7, 2.0], vec![0.9, -0.4], vec![-0.9, 0.4]).unwrap(),
        None,
    )
    .unwrap();
    assert!(cc.charge_conjugation_symmetric());
    let j = cc.current().unwrap();
    let (rho, _) = cc.densities().unwrap();
    assert_eq!(
        j.max_abs(),
        0.0,
        "charge-conjugate current must vanish exactly"
    );
    assert_eq!(
        rho.max_abs(),
        0.0,
        "charge-conjugate density must vanish exactly"
    );
    println!(
        "[PASS] criterion 9: Dirac correspondences (Schrödinger match {worst_match:.2e}; \
         thermal noise vs quadrature {worst_noise:.2e}; charge conjugation exact)"
    );
}

#[test]
fn criterion_10_gauge_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for trial in 0..10 {
        let n = 2 + trial % 3;
        let u = random_unitary(n, &mut rng);
        let phases = GaugePhases::new((0..n).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap();
        // Equal temperatures so the closed-form noise route participates.
        let beta = rng.gen_range(0.5..5.0);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
        let bank = ReservoirBank::new(vec![beta; n], mu, Statistics::Fermi).unwrap();

        let plain =
            SchrodingerSystem::new(1.0, 1.0, Coupling::Critical(u.clone()), bank.clone(), None)
                .unwrap();
        let dressed = SchrodingerSystem::new(
            1.0,
            1.0,
            Coupling::Critical(u.clone()),
            bank.clone(),
            Some(phases.clone()),
        )
        .unwrap();

        let pairs = [
            (
                plain.steady_current().unwrap(),
                dressed.steady_current().unwrap(),
            ),
            (
                plain.heat_current().unwrap(),
                dressed.heat_current().unwrap(),
            ),
        ];
        for (a, b) in &pairs {
            for i in 0..n {
                let gap = (a.values[i] - b.values[i]).abs();
                assert!(gap <= 1e-12, "gauge shift {gap:.3e}");
                worst = worst.max(gap);
            }
        }
        let (ga, gb) = (plain.conductance().unwrap(), dressed.conductance().unwrap());
        let (pa, pb) = (
            plain.noise_critical_closed_form().unwrap(),
            dressed.noise_critical_closed_form().unwrap(),
        );
        let (sa, sb) = (plain.shot_noise().unwrap(), dressed.shot_noise().unwrap());
        for i in 0..n {
            for j in 0..n {
                for (x, y) in [
                    (ga.get(i, j), gb.get(i, j)),
                    (pa.get(i, j), pb.get(i, j)),
                    (sa.get(i, j), sb.get(i, j)),
                ] {
                    let gap = (x - y).abs();
                    assert!(gap <= 1e-12, "gauge shift {gap:.3e}");
                    worst = worst.max(gap);
                }
            }
        }
        let da = plain.charge_density_profile(0, 0.8).unwrap();
        let db = dressed.charge_density_profile(0, 0.8).unwrap();
        let gap = (da.total - db.total).abs();
        assert!(gap <= 1e-12);
        worst = worst.max(gap);

        // Dirac side.
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mt: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let dbank = DiracReservoirBank::new(vec![1.1; n], mu, mt).unwrap();
        let dplain = DiracSystem::new(1.0, u.clone(), dbank.clone(), None).unwrap();
        let ddressed = DiracSystem::new(1.0, u, dbank, Some(phases)).unwrap();
        let (ja, jb) = (dplain.current().unwrap(), ddressed.current().unwrap());
        let (na, nb) = (
            dplain.noise_zero_freq().unwrap(),
            ddressed.noise_zero_freq().unwrap(),
        );
        for i in 0..n {
            let gap = (ja.values[i] - jb.values[i]).abs();
            assert!(gap <= 1e-12);
            worst = worst.max(gap);
            for j in 0..n {
                let gap = (na.get(i, j) - nb.get(i, j)).abs();
                assert!(gap <= 1e-12);
                worst = worst.max(gap);
            }
        }
    }
    println!("[PASS] criterion 10: gauge invariance of all observables (worst shift {worst:.2e})");
}

#[test]
fn criterion_11_special_functions() {
    // Dilogarithm at -1 against the alternating series (pairwise-summed so
    // the truncation error is far below the target).
    let mut series = 0.0f64;
    let mut j = 1u64;
    while j < 4_000_000 {
        // Pair consecutive terms to accelerate the alternating series.
        let a = 1.0 / ((j * j) as f64);
        let b = 1.0 / (((j + 1) * (j + 1)) as f64);
        series += -a + b;
        j += 2;
    }
    let li2 = polylog(2.0, -1.0).unwrap();
    assert!(
        (li2 - series).abs() <= 1e-9,
        "Li2(-1): {li2} vs series {series}"
    );
    assert!((li2 + PI * PI / 12.0).abs() <= 1e-12);

    // Li_{3/2}(-1) against the eta identity with an Euler-Maclaurin zeta tail.
    let n_terms = 200_000u64;
    let mut zeta32 = 0.0f64;
    for k in 1..=n_terms {
        zeta32 += (k as f64).powf(-1.5);
    }
    let nf = n_terms as f64;
    zeta32 += 2.0 / nf.sqrt() - 0.5 * nf.powf(-1.5) + (1.5 / 12.0) * nf.powf(-2.5);
    let eta_oracle = -(1.0 - 2.0f64.powf(-0.5)) * zeta32;
    let li32 = polylog(1.5, -1.0).unwrap();
    assert!(
        (li32 - eta_oracle).abs() <= 1e-9,
        "Li_3/2(-1): {li32} vs oracle {eta_oracle}"
    );
    assert!((li32 + 0.765_147_024_625_407_9).abs() <= 1e-9);

    // e E1(1) against the defining series -gamma - ln(1) + sum (-1)^{k+1}/(k k!).
    let mut e1_series = -0.577_215_664_901_532_9_f64;
    let mut term = 1.0f64;
    for k in 1..40u64 {
        term *= -1.0 / k as f64;
        e1_series -= term / k as f64;
    }
    let oracle = std::f64::consts::E * e1_series;
    let i1 = exp_integral_i(1.0).unwrap();
    assert!(
        (i1 - oracle).abs() <= 1e-9,
        "e E1(1): {i1} vs oracle {oracle}"
    );
    assert!((i1 - 0.596_347_362_323_194_1).abs() <= 1e-9);

    println!(
        "[PASS] criterion 11: special functions (Li2(-1) = -pi^2/12, \
         Li_3/2(-1) = -0.7651470246, e E1(1) = 0.5963473623, all to 1e-9 vs series oracles)"
    );
}

#[test]
fn criterion_12_cli_determinism_and_figure_data() {
    use stargraph_transport::config::parse_config;
    use stargraph_transport::run::{config_digest, run_point};
    use stargraph_transport::sweep::run_sweep;

    let text = r#"
[system]
dynamics = "schrodinger"
mass = 1.0
charge = 1.0

[coupling]
kind = "two_lead"
eta1 = -1.0
eta2 = -0.2
theta = 1.5707963267948966
phi = 0.0

[[reservoirs]]
beta = 2.0
mu = 1.0

[[reservoirs]]
beta = 2.0
mu = 0.0

[observables]
requests = ["current"]

[sweep]
[[sweep.axes]]
path = "reservoirs.2.mu"
min = 0.0
max = 2.0
points = 21
"#;
    let cfg = parse_config(text).unwrap();
    let digest = config_digest(text);

    let first = run_sweep(&cfg, &digest, Some(2)).unwrap().table.render();
    let second = run_sweep(&cfg, &digest, Some(4)).unwrap().table.render();
    assert_eq!(first, second, "sweep reruns must be byte-identical");

    // J_1 crosses zero exactly at the mu_2 = mu_1 grid point.
    let mut values: Vec<(f64, f64)> = Vec::new();
    for line in first
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("reservoirs"))
    {
        let parts: Vec<&str> = line.split(',').collect();
        values.push((parts[0].parse().unwrap(), parts[1].parse().unwrap()));
    }
    assert_eq!(values.len(), 21);
    let at_eq = values
        .iter()
        .find(|(mu2, _)| (mu2 - 1.0).abs() < 1e-12)
        .expect("grid contains mu_2 = mu_1");
    assert!(at_eq.1.abs() <= 1e-12, "J_1 at equilibrium: {}", at_eq.1);
    assert!(values.first().unwrap().1 > 0.0);
    assert!(values.last().unwrap().1 < 0.0);
    let sign_changes = values
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum() && w[0].1 != 0.0 && w[1].1 != 0.0)
        .count();
    assert!(sign_changes <= 2, "a single crossing region expected");

    // Any sweep cell reproduces the standalone point run.
    let mut point_cfg = cfg
        .with_axis_value(&cfg.sweep.as_ref().unwrap().axes[0].target, values[7].0)
        .unwrap();
    point_cfg.sweep = None;
    let report = run_point(&point_cfg, &digest).unwrap();
    let rendered = report.table.render();
    let j1_line = rendered
        .lines()
        .find(|l| l.starts_with("1,"))
        .expect("current row for lead 1");
    let j1: f64 = j1_line.split(',').nth(1).unwrap().parse().unwrap();
    assert!(
        (j1 - values[7].1).abs() <= 1e-12 * j1.abs().max(1.0),
        "sweep/point mismatch: {j1} vs {}",
        values[7].1
    );
    println!(
        "[PASS] criterion 12: sweep data (J_1 zero exactly at mu_2 = mu_1, single sign change, \
         byte-identical reruns, point/sweep round trip)"
    );
}
