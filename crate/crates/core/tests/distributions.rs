use qwpps_core::distributions::*;
use qwpps_core::hilbert::Position;

#[test]
fn hadamard_symmetric_start_is_symmetric_and_ballistic() {
    let d100 = hadamard_walk(100, CoinInit::PlusI).unwrap();
    let d50 = hadamard_walk(50, CoinInit::PlusI).unwrap();
    assert!(d100.mean().abs() < 1e-9);
    assert!((d100.total() - 1.0).abs() < 1e-10);
    for x in 0..=100 {
        assert!(
            (d100.get(Position::new(x)) - d100.get(Position::new(-x))).abs() < 1e-12,
            "x={x}"
        );
    }
    let ratio = d100.std_dev() / d50.std_dev();
    assert!((1.9..=2.1).contains(&ratio), "{ratio}");
}

#[test]
fn hadamard_peaks_near_inverse_sqrt_two() {
    let d = hadamard_walk(100, CoinInit::PlusI).unwrap();
    let (left, right) = d.peaks();
    let target = 100.0 / 2f64.sqrt();
    for p in [left.unwrap(), right.unwrap()] {
        assert!(((p.index.abs() as f64) - target).abs() < 5.0, "{p:?}");
    }
}

#[test]
fn parity_is_preserved() {
    for t in [1, 2, 7, 20] {
        for init in [CoinInit::Zero, CoinInit::One, CoinInit::Plus, CoinInit::PlusI] {
            let d = hadamard_walk(t, init).unwrap();
            assert!(d
                .iter()
                .all(|(p, v)| (p.index - t as i64).rem_euclid(2) == 0 || v == 0.0));
            assert!((d.total() - 1.0).abs() < 1e-10);
        }
        let c = classical_rw_distribution(t);
        assert!(c
            .iter()
            .all(|(p, v)| (p.index - t as i64).rem_euclid(2) == 0 || v == 0.0));
    }
}

#[test]
fn quantum_spreads_linearly_classical_diffusively() {
    let ts = [25usize, 50, 100];
    let q: Vec<f64> = ts
        .iter()
        .map(|&t| hadamard_walk(t, CoinInit::PlusI).unwrap().std_dev() / t as f64)
        .collect();
    let (lo, hi) = q.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!((hi - lo) / lo < 0.10, "{q:?}");
    for t in ts {
        let c = classical_rw_distribution(t);
        assert!((c.std_dev() / (t as f64).sqrt() - 1.0).abs() < 1e-10);
        assert!((c.total() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn classical_binomial_values() {
    let d = classical_rw_distribution(100);
    assert!((d.std_dev() - 10.0).abs() < 1e-10);
    // C(100, 50) / 2^100
    assert!((d.get(Position::new(0)) - 0.07958923738717877).abs() < 1e-17);
}

#[test]
fn figure_series_covers_even_sites() {
    let rows = figure_one(100).unwrap();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows.first().unwrap().0, -100);
    assert_eq!(rows.last().unwrap().0, 100);
    let q: f64 = rows.iter().map(|r| r.1).sum();
    let c: f64 = rows.iter().map(|r| r.2).sum();
    assert!((q - 1.0).abs() < 1e-10 && (c - 1.0).abs() < 1e-10);
}
