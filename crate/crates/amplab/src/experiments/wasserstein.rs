/// 1-Wasserstein distance between two empirical measures on the line
/// with the same number of atoms: mean absolute difference of sorted
/// samples.
pub fn w1_empirical(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "sample sets must have equal size");
    if a.is_empty() {
        return 0.0;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / a.len() as f64
}
