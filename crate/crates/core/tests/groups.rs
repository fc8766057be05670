use anosovlab::gallery::reference_pair;
use anosovlab::groups::*;
use anosovlab::linalg::{projective_distance, Matrix};
use proptest::prelude::*;

fn mobius(n: usize) -> i64 {
    let (mut n, mut k, mut sign) = (n, 2, 1);
    while k * k <= n {
        if n % k == 0 {
            n /= k;
            if n % k == 0 {
                return 0;
            }
            sign = -sign;
        }
        k += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Primitive conjugacy classes of cyclic length n in a free group of rank k,
/// from the count of cyclically reduced words by Möbius inversion.
fn necklace_oracle(k: usize, n: usize) -> i64 {
    let c = |d: usize| -> i64 {
        let q = (2 * k - 1) as i64;
        q.pow(d as u32) + 1 + (k as i64 - 1) * (1 + if d % 2 == 0 { 1 } else { -1 })
    };
    let p: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(n / d) * c(d)).sum();
    p / n as i64
}

fn free(k: usize) -> GeneratorSet<f64> {
    let mats = (0..k)
        .map(|i| {
            let (s, c) = (0.3 + 0.9 * i as f64).sin_cos();
            let r = Matrix::from_rows(&[&[c, -s], &[s, c]]).unwrap();
            r.mul_mat(&Matrix::diag(&[4.0, 0.25])).mul_mat(&r.transpose())
        })
        .collect();
    GeneratorSet::from_matrices(mats, Presentation::Free).unwrap()
}

#[test]
fn class_counts_match_necklace_oracle() {
    for (k, r) in [(1, 8), (2, 10), (3, 6)] {
        let cls = primitive_conj_classes(&free(k), r, 10_000_000).unwrap();
        for n in 1..=r {
            let got = cls.iter().filter(|c| c.word.len() == n).count() as i64;
            assert_eq!(got, necklace_oracle(k, n), "rank {k}, length {n}");
        }
    }
}

#[test]
fn class_representatives_are_canonical() {
    let cls = primitive_conj_classes(&free(2), 7, 1_000_000).unwrap();
    for c in &cls {
        assert_eq!(least_rotation(&c.word), c.word);
        assert!(!is_proper_power(&c.word));
        assert_eq!(cyclic_reduce(&c.word).len(), c.word.len());
        assert!(c.period > 0.0);
    }
}

#[test]
fn budget_is_enforced() {
    assert!(matches!(primitive_conj_classes(&free(2), 10, 100), Err(anosovlab::Error::BudgetExceeded { .. })));
    assert!(matches!(enumerate_ball(&free(2), 10, 100), Err(anosovlab::Error::BudgetExceeded { .. })));
}

#[test]
fn ball_growth() {
    for (k, r) in [(1, 6), (2, 6), (3, 4)] {
        let ball = enumerate_ball(&free(k), r, 1_000_000).unwrap();
        assert_eq!(ball.len(), free_ball_size(k, r));
        let mut words: Vec<Word> = ball.iter().map(|e| e.word().to_vec()).collect();
        assert!(words.iter().all(|w| is_reduced(w)));
        words.sort();
        words.dedup();
        assert_eq!(words.len(), ball.len());
    }
}

#[test]
fn reference_pair_gap_grows_linearly() {
    let g = reference_pair();
    let ball = enumerate_ball(&g, 6, 1_000_000).unwrap();
    let fit = gap_fit(&ball, g.presentation()).unwrap();
    assert!(fit.c > 0.5, "{fit:?}");
    assert!(fit.r2 > 0.8, "{fit:?}");
}

#[test]
fn reference_limit_set_is_transverse() {
    let g = reference_pair();
    let s = limit_set_sample(&g, 5, 1_000_000, DEDUP_TOL).unwrap();
    assert!(s.len() > 100);
    let audit = transversality_audit(&s, 0.0);
    assert_eq!(audit.violations, 0);
    assert!(audit.min_margin > 0.0);
    for x in &s {
        let e = g.element(&x.source);
        assert!(projective_distance(&x.xi, &fixed_points(&e).unwrap().0) < 1e-12);
    }
}

#[test]
fn convergence_rate_matches_gap() {
    let g = reference_pair();
    let e = g.element(&parse_word("ab", g.labels()).unwrap());
    let l = anosovlab::linalg::ProjPoint::from_f64(&[0.3, 1.0]).unwrap();
    let s = convergence_probe(&e, &l, 12).unwrap();
    let gap = e.gap().unwrap();
    assert!((s.slope.unwrap() + gap).abs() < 0.05 * gap, "{:?} vs {gap}", s.slope);
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec((0u8..4).prop_map(Letter), 0..12)
}

proptest! {
    #[test]
    fn reduce_is_idempotent(w in word_strategy()) {
        let r = reduce(&w);
        prop_assert!(is_reduced(&r));
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert_eq!(inverse_word(&inverse_word(&w)), w.clone());
        let mut ww = w.clone();
        ww.extend(inverse_word(&w));
        prop_assert!(reduce(&ww).is_empty());
    }

    #[test]
    fn least_rotation_is_rotation_invariant(w in word_strategy(), k in 0usize..12) {
        prop_assume!(!w.is_empty());
        let k = k % w.len();
        let mut rot = w[k..].to_vec();
        rot.extend_from_slice(&w[..k]);
        prop_assert_eq!(least_rotation(&rot), least_rotation(&w));
    }

    #[test]
    fn format_parse_round_trip(w in word_strategy()) {
        let labels = vec!["a".to_string(), "b".to_string()];
        let w = reduce(&w);
        prop_assert_eq!(parse_word(&format_word(&w, &labels), &labels), Some(w));
    }
}
