use maxent_quantile::oracle::exact_quantile;
use maxent_quantile::rng::{below, seeded, standard_normal};
use maxent_quantile::ExactOracle64;

fn naive(sorted_prefix: &[f64], q: f64) -> f64 {
    let n = sorted_prefix.len();
    let r = ((q * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    sorted_prefix[r - 1]
}

#[test]
fn running_oracle_matches_full_sort() {
    let mut rng = seeded(99);
    let data: Vec<f64> = (0..100_000)
        .map(|i| {
            if i % 3 == 0 {
                below(&mut rng, 50) as f64
            } else {
                (standard_normal(&mut rng) * 2.0).exp()
            }
        })
        .collect();
    for q in [0.01, 0.5, 0.95, 0.99, 1.0] {
        let mut oracle = ExactOracle64::new(q).unwrap();
        let mut sorted = Vec::with_capacity(data.len());
        for (i, &x) in data.iter().enumerate() {
            oracle.observe(x).unwrap();
            let at = sorted.partition_point(|&v| v < x);
            sorted.insert(at, x);
            let n = i + 1;
            if n <= 2_000 || n % 997 == 0 || n == data.len() {
                assert_eq!(oracle.current().unwrap(), naive(&sorted, q), "q={q} n={n}");
            }
        }
        assert_eq!(oracle.len(), data.len());
        assert_eq!(exact_quantile(&data, q).unwrap(), naive(&sorted, q));
        assert_eq!(oracle.quantile(0.25).unwrap(), naive(&sorted, 0.25));
    }
}

#[test]
fn rank_rounding_at_exact_fractions() {
    let data: Vec<f64> = (1..=10).map(f64::from).collect();
    for k in 1..=10 {
        let q = k as f64 / 10.0;
        assert_eq!(exact_quantile(&data, q).unwrap(), k as f64);
    }
    assert_eq!(exact_quantile(&data, 0.95).unwrap(), 10.0);
    assert_eq!(exact_quantile(&data, 0.01).unwrap(), 1.0);
}
