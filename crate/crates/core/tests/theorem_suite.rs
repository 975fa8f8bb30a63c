mod common;

use std::time::Instant;

use common::*;
use gft_core::kernels::{is_separable, separability, Separability};
use gft_core::theorems::{
    check_existence_bound, check_left_product, check_right_product, check_shift, random_supported_field, run_suite,
    shift_term_limit, suite_presets, Status, SuiteConfig, Theorem,
};
use gft_core::transform::default_freqs;
use gft_core::{Grid, Multivector, Preset, SampledField, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn preset(name: &str) -> Preset {
    name.parse().unwrap()
}

#[test]
fn suite_passes_for_every_preset_and_seed() {
    let start = Instant::now();
    for p in suite_presets() {
        for seed in 0..5 {
            let cfg = SuiteConfig { seed, size: 8, tol: None };
            let reports = run_suite(&p, &Theorem::ALL, &cfg).unwrap();
            assert_eq!(reports.len(), 8, "{p}");
            for r in &reports {
                match &r.status {
                    Status::Pass => {}
                    Status::Skip(reason) => {
                        assert_eq!(p, Preset::Cylindrical(3), "{p}: unexpected skip {r}");
                        assert!(reason.contains("not separable"));
                    }
                    Status::Fail => panic!("{p} seed {seed}: {r}"),
                }
            }
        }
    }
    eprintln!("suite over all presets and 5 seeds: {:?}", start.elapsed());
}

fn setup(p: &Preset, n: usize, seed: u64) -> (gft_core::GftSpec, SampledField, Grid, ChaCha8Rng) {
    let spec = p.build().unwrap();
    let grid = Grid::centered(spec.dim(), n).unwrap();
    let freqs = default_freqs(&grid, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_supported_field(spec.sig(), &grid, &mut rng);
    (spec, b, freqs, rng)
}

/// Nonzero terms of the product rules for a generic constant.
#[test]
fn product_term_counts() {
    let cases = [
        ("clifford:2", 1, 2),
        ("clifford:3", 1, 1),
        ("clifford:6", 1, 2),
        ("buelow:2", 1, 4),
        // in G(0,3) the blades pair up (1 with e123, e1 with e23, ...) on
        // the same commutation pattern, leaving 4 of the 8 sign vectors
        ("buelow:3", 1, 4),
        ("buelow:4", 1, 16),
        ("quaternionic", 2, 2),
        ("spacetime", 2, 2),
        ("color-image", 4, 4),
        ("cylindrical:2", 2, 1),
    ];
    for (name, left, right) in cases {
        let p = preset(name);
        let n = match p.build().unwrap().dim() {
            m if m >= 5 => 2,
            4 => 3,
            _ => 4,
        };
        let (spec, b, freqs, mut rng) = setup(&p, n, 3);
        let c = random_mv(spec.sig(), &mut rng);
        let l = check_left_product(&spec, &c, &b, &freqs, 1e-10).unwrap();
        let r = check_right_product(&spec, &c, &b, &freqs, 1e-10).unwrap();
        assert!(l.passed() && r.passed(), "{name}: {l} / {r}");
        assert_eq!((l.terms, r.terms), (Some(left), Some(right)), "{name}");
    }
}

#[test]
fn clifford3_constants_pass_through() {
    // i_3 is central in G(3,0): F(CB) = C F(B) and F(BC) = F(B) C
    let (spec, b, freqs, mut rng) = setup(&Preset::Clifford(3), 4, 9);
    let c = random_mv(spec.sig(), &mut rng);
    let l = check_left_product(&spec, &c, &b, &freqs, 1e-10).unwrap();
    let r = check_right_product(&spec, &c, &b, &freqs, 1e-10).unwrap();
    assert_eq!((l.terms, r.terms), (Some(1), Some(1)));
    assert!(l.passed() && r.passed());
}

#[test]
fn scalar_constants_give_single_terms() {
    for p in suite_presets() {
        let (spec, b, freqs, _) = setup(&p, 4, 2);
        let c = Multivector::scalar(spec.sig(), -2.5);
        let r = check_right_product(&spec, &c, &b, &freqs, 1e-10).unwrap();
        assert_eq!(r.terms, Some(1), "{p}");
        assert!(r.residual <= 1e-12 * r.lhs_norm.max(1.0), "{p}: {r}");
    }
}

#[test]
fn shift_term_counts_respect_the_limit() {
    for p in suite_presets().into_iter().filter(|p| *p != Preset::Cylindrical(3)) {
        let (spec, b, freqs, _) = setup(&p, 4, 4);
        let x0 = vec![1.0; spec.dim()];
        let r = check_shift(&spec, &b, &x0, &freqs, 1e-10).unwrap();
        assert!(r.passed(), "{p}: {r}");
        assert!(r.terms.unwrap() <= shift_term_limit(spec.mu(), spec.nu()), "{p}: {r:?}");
    }
}

#[test]
fn existence_bound_examples() {
    let (spec, b, freqs, _) = setup(&Preset::Cylindrical(2), 8, 1);
    let r = check_existence_bound(&spec, &b, &freqs, 1e-10).unwrap();
    assert!(r.passed());
    assert!(r.lhs_norm < r.rhs_norm / 2.0, "expected slack: {r:?}");

    let zero = SampledField::zeros(spec.sig(), b.grid().clone());
    let r = check_existence_bound(&spec, &zero, &freqs, 1e-10).unwrap();
    assert_eq!((r.lhs_norm, r.rhs_norm, r.residual), (0.0, 0.0, 0.0));
    assert!(r.passed());
}

#[test]
fn separability_of_presets() {
    for p in suite_presets() {
        let spec = p.build().unwrap();
        let expected = p != Preset::Cylindrical(3);
        assert_eq!(is_separable(&spec, Side::Left) && is_separable(&spec, Side::Right), expected, "{p}");
    }
    for n in 2..=5 {
        let spec = Preset::Cylindrical(n).build().unwrap();
        let left = separability(&spec, Side::Left);
        assert_eq!(matches!(left, Separability::Constant(_)), n == 2, "cylindrical:{n}");
        if n > 2 {
            assert_eq!(left, Separability::NotSeparable);
        }
    }
}
