mod oracles;

use std::time::Instant;

use alstop::agreement::kappa;
use alstop::Label;
use oracles::{kappa_brute_force, random_labels};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn kappa_matches_contingency_table_on_random_pairs() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2009);
    for case in 0..10_000 {
        let len = rng.random_range(1..=50);
        let a = random_labels(&mut rng, len);
        let b = if rng.random::<f64>() < 0.2 { a.clone() } else { random_labels(&mut rng, len) };
        let ours = kappa::<f64>(&a, &b).unwrap().kappa;
        let reference = kappa_brute_force(&a, &b);
        assert!((ours - reference).abs() <= 1e-12, "case {case}: {ours} vs {reference}");
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn constant_identical_vectors_are_in_full_agreement() {
    let a = vec![Label::Pos; 7];
    let v = kappa::<f64>(&a, &a).unwrap();
    assert_eq!(v.kappa, 1.0);
    assert!(v.degenerate);
    let b = vec![Label::Neg; 7];
    assert_eq!(kappa::<f64>(&a, &b).unwrap().kappa, kappa_brute_force(&a, &b));
}

#[test]
fn length_mismatch_and_empty_input_are_errors() {
    assert!(kappa::<f64>(&[Label::Pos], &[Label::Pos, Label::Neg]).is_err());
    assert!(kappa::<f64>(&[], &[]).is_err());
}
