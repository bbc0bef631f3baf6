use iqp_forge::attack::{correlated_row, extract_key_with_d, m_star};
use iqp_forge::rng::seeded;
use iqp_forge::{
    extract_key, extract_key_once, extract_submatrix, forge_samples, generate, looks_like_qr_code, verify,
    AttackConfig, BitVec, GenerationConfig, KeyOrigin, VerifierPolicy,
};

#[test]
fn good_d_makes_every_correlated_row_hit_the_key() {
    let mut rng = seeded(30);
    let (prog, key) = generate(&GenerationConfig::new(103, 60, 4)).unwrap();
    let p = prog.matrix();
    let ms = m_star(p);
    let code = extract_submatrix(p, key.bits()).unwrap();
    let (mut good, mut bad) = (0, 0);
    while good < 5 || bad < 5 {
        let d = BitVec::random(60, &mut rng);
        let even = !code.mat_vec(&d).unwrap().parity();
        let hits = (0..1000)
            .filter(|_| {
                let e = BitVec::random(60, &mut rng);
                correlated_row(p, &ms, &d, &e).unwrap().dot(key.bits()).unwrap()
            })
            .count();
        if even {
            assert_eq!(hits, 1000);
            good += 1;
        } else {
            let frac = hits as f64 / 1000.0;
            assert!(frac > 0.2 && frac < 0.8, "odd-parity d gave {frac}");
            bad += 1;
        }
    }
}

#[test]
fn odd_parity_d_never_yields_a_key() {
    let mut rng = seeded(31);
    let (prog, key) = generate(&GenerationConfig::new(103, 60, 5)).unwrap();
    let code = extract_submatrix(prog.matrix(), key.bits()).unwrap();
    let cfg = AttackConfig::default();
    let mut tried = 0;
    while tried < 20 {
        let d = BitVec::random(60, &mut rng);
        if !code.mat_vec(&d).unwrap().parity() {
            continue;
        }
        tried += 1;
        let (found, stats) = extract_key_with_d(&prog, &cfg, &d, &mut rng);
        assert!(found.is_none());
        assert!(!stats.d_was_good);
    }
}

#[test]
fn recovers_q7_key_or_an_equally_valid_one() {
    let mut checker = seeded(32);
    for seed in 0..20 {
        let (prog, key) = generate(&GenerationConfig::new(7, 5, seed).with_extra_rows(7)).unwrap();
        let report = extract_key(&prog, &AttackConfig::with_seed(seed));
        let got = report.key.expect("q=7 attack succeeds");
        assert!(matches!(got.origin, KeyOrigin::Recovered { .. }));
        if got != key {
            let sub = extract_submatrix(prog.matrix(), got.bits()).unwrap();
            assert_eq!(sub.nrows(), 7);
            assert!(looks_like_qr_code(&sub, 256, &mut checker));
        }
    }
}

#[test]
fn forged_samples_have_the_quantum_bias() {
    let mut rng = seeded(33);
    let (prog, key) = generate(&GenerationConfig::new(103, 60, 6)).unwrap();
    let samples = forge_samples(&prog, &key, 10_000, &mut rng).unwrap();
    let orth = samples.iter().filter(|x| !x.dot(key.bits()).unwrap()).count() as f64 / 1e4;
    assert!((orth - 0.8536).abs() < 0.02, "{orth}");
    assert!(verify(&key, &samples, &VerifierPolicy::default()).unwrap().pass);
}

#[test]
fn kernel_dimension_is_small() {
    let mut rng = seeded(34);
    let cfg = AttackConfig::default();
    let mut large = 0;
    let total = 400;
    for seed in 0..total {
        let (prog, _) = generate(&GenerationConfig::new(103, 60, 1000 + seed)).unwrap();
        let (_, stats) = extract_key_once(&prog, &cfg, &mut rng);
        assert!(stats.rank_of_m <= 60);
        assert_eq!(stats.rank_of_m + stats.kernel_dim, 60);
        if stats.kernel_dim > 4 {
            large += 1;
        }
    }
    assert!((large as f64) / (total as f64) < 0.05, "{large}/{total}");
}

#[test]
fn thousand_programs_are_all_broken() {
    let mut iterations = 0usize;
    let mut candidates = 0usize;
    for seed in 0..1000 {
        let (prog, key) = generate(&GenerationConfig::new(103, 60, 5000 + seed)).unwrap();
        let report = extract_key(&prog, &AttackConfig::with_seed(seed));
        assert_eq!(report.key.as_ref(), Some(&key), "seed {seed}");
        iterations += report.iterations.len();
        candidates += report.total_candidates_checked;
    }
    let mean_iter = iterations as f64 / 1000.0;
    let mean_cand = candidates as f64 / 1000.0;
    assert!((1.5..=2.5).contains(&mean_iter), "{mean_iter}");
    assert!(mean_cand <= 10.0, "{mean_cand}");
}

#[test]
fn attack_gives_up_on_programs_without_a_code() {
    let mut rng = seeded(35);
    let rows: Vec<BitVec> = (0..40)
        .map(|_| loop {
            let v = BitVec::random(20, &mut rng);
            if !v.is_zero() {
                break v;
            }
        })
        .collect();
    let prog = iqp_forge::XProgram::new(
        iqp_forge::BitMatrix::from_rows(rows, 20).unwrap(),
        iqp_forge::Action::PI_OVER_8,
    )
    .unwrap();
    let cfg = AttackConfig {
        max_iterations: 8,
        ..AttackConfig::default()
    };
    let report = extract_key(&prog, &cfg);
    assert!(!report.succeeded());
    assert_eq!(report.iterations.len(), 8);
}
