//! Nonparametric statistics for the benchmark harness.
//!
//! The Mann-Whitney U test uses the exact null distribution (counting
//! recurrence over rank arrangements) when the smaller sample has at
//! most eight values and there are no ties; otherwise the normal
//! approximation with tie and continuity corrections.

/// Arithmetic mean; 0 for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation (divisor n); 0 for fewer than 2 values.
pub fn population_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Error function, Abramowitz & Stegun 7.1.26 (|error| < 1.5e-7).
fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

/// Rank sum of sample a over the pooled, average-ranked samples, plus
/// the sizes of tie groups.
fn rank_sum_a(a: &[f64], b: &[f64]) -> (f64, Vec<usize>) {
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut r_a = 0.0;
    let mut ties = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // Ranks i+1 ..= j share the average rank.
        let rank = (i + 1 + j) as f64 / 2.0;
        let in_a = pooled[i..j].iter().filter(|&&(_, is_a)| is_a).count();
        r_a += rank * in_a as f64;
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (r_a, ties)
}

/// Null distribution of U for sample sizes (n, m): `counts[u]` is the
/// number of rank arrangements with statistic u. Uses the recurrence
/// c(u; n, m) = c(u - m; n-1, m) + c(u; n, m-1).
fn u_counts(n: usize, m: usize) -> Vec<f64> {
    let span = n * m + 1;
    // prev[j] = distribution for (i-1) a-items and j b-items.
    let mut prev: Vec<Vec<f64>> = (0..=m)
        .map(|_| {
            let mut row = vec![0.0; span];
            row[0] = 1.0;
            row
        })
        .collect();
    for _i in 1..=n {
        let mut cur: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        let mut row0 = vec![0.0; span];
        row0[0] = 1.0;
        cur.push(row0);
        for j in 1..=m {
            let mut row = vec![0.0; span];
            for u in 0..span {
                let from_a = if u >= j { prev[j][u - j] } else { 0.0 };
                row[u] = from_a + cur[j - 1][u];
            }
            cur.push(row);
        }
        prev = cur;
    }
    prev.pop().expect("m + 1 rows")
}

/// Exact lower-tail probability P(U <= u_obs), no ties.
fn exact_cdf_leq(u_obs: f64, n: usize, m: usize) -> f64 {
    let counts = u_counts(n, m);
    let total: f64 = counts.iter().sum();
    let tail: f64 = counts
        .iter()
        .enumerate()
        .filter(|&(u, _)| (u as f64) <= u_obs + 1e-9)
        .map(|(_, &c)| c)
        .sum();
    tail / total
}

/// Two-sided Mann-Whitney U test.
///
/// Returns `(u, p)` where `u` is the smaller of the two U statistics.
/// Symmetric in its arguments and invariant under shifting both samples
/// by a constant.
pub fn mann_whitney_u(sample_a: &[f64], sample_b: &[f64]) -> (f64, f64) {
    assert!(
        !sample_a.is_empty() && !sample_b.is_empty(),
        "samples must be nonempty"
    );
    let n = sample_a.len();
    let m = sample_b.len();
    let (r_a, ties) = rank_sum_a(sample_a, sample_b);
    let u_a = r_a - (n * (n + 1)) as f64 / 2.0;
    let u_b = (n * m) as f64 - u_a;
    let u_min = u_a.min(u_b);

    let p = if ties.is_empty() && n.min(m) <= 8 {
        // Exact two-sided p doubles the lower tail; the null U
        // distribution is symmetric about nm/2.
        (2.0 * exact_cdf_leq(u_min, n, m)).min(1.0)
    } else {
        let nm = (n * m) as f64;
        let big_n = (n + m) as f64;
        let tie_term: f64 =
            ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (big_n * (big_n - 1.0));
        let variance = nm / 12.0 * (big_n + 1.0 - tie_term);
        if variance <= 0.0 {
            // Every observation tied: no evidence against the null.
            return (u_min, 1.0);
        }
        // Continuity correction toward the mean.
        let z = (u_min - nm / 2.0 + 0.5) / variance.sqrt();
        (2.0 * normal_cdf(z)).min(1.0)
    };
    (u_min, p)
}
