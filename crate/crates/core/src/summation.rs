/// Neumaier's variant of Kahan summation.
///
/// Terms like 1/cos(kω) near k ≈ (N+1)/2 are large and of alternating sign,
/// so naive accumulation drifts by several ulps of the largest term.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - s) + t;
        } else {
            carry += (t - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        let v = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
        assert_eq!(compensated_sum(std::iter::empty()), 0.0);
    }
}
