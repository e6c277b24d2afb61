use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use nlcoupler::coupler::{
    build_drift, canonical_phase, effective_phase, CouplerParams, CouplingMagnitudes,
};
use nlcoupler::dynamics::{evolved_vacuum, squeeze_variance, CovarianceMatrix};
use nlcoupler::entanglement::{log_negativity, pt_symplectic_spectrum, symplectic_eigenvalues};
use nlcoupler::matkernel::{char_poly, expm, gen_eigvals, sym_eigvals, Mat2, Mat4, Real};
use nlcoupler::optimizer::{en_of_phase, optimize_phase};
use nlcoupler::sweep::{run_sweep, ParamSpec, Quantity, SweepConfig, SweepSpec};

fn mag() -> impl Strategy<Value = f64> {
    0.0..3.0f64
}

fn phase() -> impl Strategy<Value = f64> {
    0.0..TAU
}

fn params(max_mag: f64) -> impl Strategy<Value = CouplerParams> {
    (
        0.0..max_mag,
        0.0..max_mag,
        0.0..max_mag,
        phase(),
        phase(),
        phase(),
    )
        .prop_map(|(gl, ga, gb, pl, pa, pb)| CouplerParams::new(gl, ga, gb, pl, pa, pb).unwrap())
}

fn matrix(bound: f64) -> impl Strategy<Value = Mat4> {
    prop::array::uniform4(prop::array::uniform4(-bound..bound)).prop_map(Mat4::new)
}

fn single_mode_symplectic(theta: f64, r: f64, phi: f64) -> Mat2 {
    let rot = |a: f64| Mat2::new([[a.cos(), -a.sin()], [a.sin(), a.cos()]]);
    rot(theta) * Mat2::new([[r.exp(), 0.0], [0.0, (-r).exp()]]) * rot(phi)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expm_group_law(p in params(1.0), s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let m = build_drift(&p);
        let e = |z: f64| expm(&m.matrix().scale(z), f64::EXPM_TOL).unwrap();
        let lhs = &e(s) * &e(t);
        let rhs = e(s + t);
        let scale = rhs.max_abs().max(1.0);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn expm_determinant_is_exp_trace(m in matrix(1.0)) {
        let e = expm(&m, f64::EXPM_TOL).unwrap();
        prop_assert!(rel_close(e.det(), m.trace().exp(), 1e-11));
    }

    #[test]
    fn eigenvalues_reproduce_trace_and_determinant(m in matrix(2.0)) {
        let q = gen_eigvals(&m).unwrap();
        let sum: num_complex::Complex64 = q.roots().iter().sum();
        let prod: num_complex::Complex64 = q.roots().iter().product();
        let scale = 1.0 + m.norm_inf();
        prop_assert!((sum.re - m.trace()).abs() <= 1e-9 * scale);
        prop_assert!(sum.im.abs() <= 1e-9 * scale);
        prop_assert!((prod.re - m.det()).abs() <= 1e-8 * scale.powi(4));
    }

    #[test]
    fn eigenvalues_come_in_conjugate_pairs(m in matrix(2.0)) {
        let q = gen_eigvals(&m).unwrap();
        for z in q.roots() {
            let partner = q.roots().iter().any(|w| *w == z.conj());
            prop_assert!(partner, "{:?}", q);
        }
    }

    #[test]
    fn symmetric_eigenvalues_of_rotated_diagonal(
        d in prop::array::uniform4(-5.0..5.0f64),
        a in phase(),
        b in phase(),
    ) {
        let r = Mat4::direct_sum(
            &single_mode_symplectic(a, 0.0, 0.0),
            &single_mode_symplectic(b, 0.0, 0.0),
        );
        let mut mix = Mat4::<f64>::identity();
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        mix.0[0][0] = c;
        mix.0[0][2] = -s;
        mix.0[2][0] = s;
        mix.0[2][2] = c;
        let q = &mix * &r;
        let v = &(&q * &Mat4::diag(d)) * &q.transpose();
        let got = sym_eigvals(&v.symmetrized()).unwrap();
        let mut want = d;
        want.sort_by(f64::total_cmp);
        for k in 0..4 {
            prop_assert!((got[k] - want[k]).abs() < 1e-11, "{:?} {:?}", got, want);
        }
    }

    #[test]
    fn drift_is_hamiltonian_and_traceless(p in params(3.0)) {
        let m = build_drift(&p);
        let om = &Mat4::<f64>::symplectic_form() * m.matrix();
        prop_assert!(om.asymmetry() <= 1e-14);
        prop_assert!(m.matrix().trace().abs() <= 1e-14);
        let c = char_poly(m.matrix());
        prop_assert!(c[3].abs() <= 1e-13 && c[1].abs() <= 1e-11);
    }

    #[test]
    fn canonical_phase_is_idempotent(x in -100.0..100.0f64) {
        let c = canonical_phase(x);
        prop_assert!((0.0..TAU).contains(&c));
        prop_assert_eq!(canonical_phase(c), c);
    }

    #[test]
    fn only_effective_phase_matters(
        gl in mag(), ga in mag(), gb in mag(),
        dphi in phase(), pl in phase(), pb in phase(),
        z in 0.0..1.0f64,
    ) {
        let mags = CouplingMagnitudes::new(gl / 3.0, ga / 3.0, gb / 3.0).unwrap();
        let a = CouplerParams::with_effective_phase(mags, dphi).unwrap();
        let b = CouplerParams::from_magnitudes(mags, pl, dphi + pb - 2.0 * pl, pb).unwrap();
        prop_assert!((canonical_phase(effective_phase(&b) - dphi)).min(TAU - canonical_phase(effective_phase(&b) - dphi)) < 1e-12);
        let (va, vb) = (evolved_vacuum(&a, z).unwrap(), evolved_vacuum(&b, z).unwrap());
        prop_assert!((squeeze_variance(&va).unwrap() - squeeze_variance(&vb).unwrap()).abs() < 1e-9);
        prop_assert!((log_negativity(&va).unwrap().log_neg - log_negativity(&vb).unwrap().log_neg).abs() < 1e-9);
    }

    #[test]
    fn mirror_phase_gives_same_entanglement(dphi in phase(), z in 0.0..2.0f64) {
        let mags = CouplingMagnitudes::BELOW_THRESHOLD;
        let a = en_of_phase(mags, dphi, z).unwrap();
        let b = en_of_phase(mags, TAU - dphi, z).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn evolved_states_are_pure(p in params(1.0), z in 0.0..1.0f64) {
        let v = evolved_vacuum(&p, z).unwrap();
        let (n1, n2) = symplectic_eigenvalues(v.matrix()).unwrap();
        prop_assert!((n1 - 0.5).abs() < 1e-9 && (n2 - 0.5).abs() < 1e-9);
        let (c1, c2) = pt_symplectic_spectrum(&v).unwrap();
        prop_assert!((c1 * c2 - 0.25).abs() < 1e-9);
        prop_assert!(squeeze_variance(&v).unwrap() <= 0.5 + 1e-12);
    }

    #[test]
    fn entanglement_requires_squeezing(p in params(1.0), z in 0.0..1.0f64) {
        let v = evolved_vacuum(&p, z).unwrap();
        if log_negativity(&v).unwrap().log_neg > 1e-9 {
            prop_assert!(squeeze_variance(&v).unwrap() < 0.5 - 1e-9);
        }
    }

    #[test]
    fn log_negativity_invariant_under_local_symplectics(
        p in params(1.0),
        z in 0.0..1.0f64,
        la in (phase(), -0.8..0.8f64, phase()),
        lb in (phase(), -0.8..0.8f64, phase()),
    ) {
        let v = evolved_vacuum(&p, z).unwrap();
        let l = Mat4::direct_sum(
            &single_mode_symplectic(la.0, la.1, la.2),
            &single_mode_symplectic(lb.0, lb.1, lb.2),
        );
        let w = CovarianceMatrix::new(&(&l * v.matrix()) * &l.transpose()).unwrap();
        let before = log_negativity(&v).unwrap().log_neg;
        let after = log_negativity(&w).unwrap().log_neg;
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn opposite_phase_never_entangles(z in 0.0..2.0f64) {
        prop_assert!(en_of_phase(CouplingMagnitudes::BELOW_THRESHOLD, PI, z).unwrap() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn optimum_dominates_fixed_phases(z in 0.0..3.0f64, probe in phase()) {
        let mags = CouplingMagnitudes::BELOW_THRESHOLD;
        let o = optimize_phase(mags, z, 64, 1e-6).unwrap();
        prop_assert!((0.0..TAU).contains(&o.dphi_opt));
        prop_assert!(o.en_max >= 0.0);
        for d in [0.0, PI / 2.0, PI, probe] {
            prop_assert!(o.en_max >= en_of_phase(mags, d, z).unwrap() - 1e-12);
        }
        prop_assert!((o.en_max - en_of_phase(mags, o.dphi_opt, z).unwrap()).abs() < 1e-12);
        prop_assert_eq!(o, optimize_phase(mags, z, 64, 1e-6).unwrap());
    }

    #[test]
    fn config_round_trip(
        p in params(3.0),
        effective in any::<bool>(),
        dphi in phase(),
        z_min in 0.0..1.0f64,
        span in 0.1..5.0f64,
        z_points in 2usize..400,
        qs in prop::sample::subsequence(vec![Quantity::Lambda, Quantity::En, Quantity::Regime, Quantity::DphiOpt], 1..=4),
        coarse_n in 16usize..512,
        refine_tol in 1e-9..1e-3f64,
    ) {
        let params = if effective {
            ParamSpec::Effective { mags: p.magnitudes(), dphi }
        } else {
            ParamSpec::Full(p)
        };
        let spec = SweepSpec {
            params,
            z_min,
            z_max: z_min + span,
            z_points,
            quantities: qs,
            out: Some("results/sweep.csv".into()),
            coarse_n,
            refine_tol,
        };
        let parsed = SweepConfig::parse(&spec.to_config()).unwrap().build().unwrap();
        prop_assert_eq!(parsed, spec);
    }
}

#[test]
fn round_tripped_spec_produces_identical_sweep() {
    let spec = SweepSpec {
        params: ParamSpec::Full(CouplerParams::new(1.3, 0.4, 0.9, 0.2, 5.1, 2.2).unwrap()),
        z_min: 0.1,
        z_max: 1.7,
        z_points: 23,
        quantities: vec![Quantity::Lambda, Quantity::En, Quantity::Regime],
        out: None,
        coarse_n: 16,
        refine_tol: 1e-4,
    };
    let again = SweepConfig::parse(&spec.to_config())
        .unwrap()
        .build()
        .unwrap();
    assert_eq!(run_sweep(&spec).unwrap(), run_sweep(&again).unwrap());
}

#[test]
fn entanglement_vanishes_at_the_squeezing_period() {
    // symmetric sub-threshold case: V(z) returns to the vacuum after π/ω
    let mags = CouplingMagnitudes::BELOW_THRESHOLD;
    let omega = 2.0 * (mags.gl.powi(2) - mags.ga.powi(2)).sqrt();
    let period = PI / omega;
    assert!(en_of_phase(mags, 0.0, period).unwrap() < 1e-6);
    assert!(en_of_phase(mags, 0.0, period / 2.0).unwrap() > 0.1);
}
