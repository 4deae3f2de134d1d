/// Benjamini-Hochberg step-up adjusted p-values, in input order.
pub fn bh_adjust(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (rank, &i) in order.iter().enumerate().rev() {
        running = running.min(p_values[i] * (m as f64 / (rank + 1) as f64)).min(1.0);
        adjusted[i] = running;
    }
    adjusted
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(bh_adjust(&[0.03]), vec![0.03]);
        assert_eq!(bh_adjust(&[0.01, 0.02, 0.03]), vec![0.03, 0.03, 0.03]);
        assert_eq!(bh_adjust(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(bh_adjust(&[0.04, 0.01, 0.9]), vec![0.06, 0.03, 0.9]);
        assert!(bh_adjust(&[]).is_empty());
    }
}
