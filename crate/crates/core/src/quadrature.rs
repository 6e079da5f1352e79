//! Trapezoid sums with Euler–Maclaurin endpoint corrections, shared by the
//! energy coordinate and the kernel scans so that every ξ-integral uses the
//! same weights.

/// Cumulative integral of `h` from the first node, trapezoid plus the
/// `-(step²/12)(h'(b) - h'(a))` endpoint correction. `dh` holds `h'` at the nodes.
pub fn cumulative_corrected(h: &[f64], dh: &[f64], step: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(h.len());
    let mut acc = 0.0;
    let c = step * step / 12.0;
    for i in 0..h.len() {
        if i > 0 {
            acc += 0.5 * step * (h[i - 1] + h[i]);
        }
        out.push(acc - c * (dh[i] - dh[0]));
    }
    out
}

/// Second-order centered differences with one-sided second-order stencils at the ends.
pub fn centered_difference(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * step);
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * step);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * step);
    out
}

/// [`centered_difference`] whose stencils never reach across the cells
/// listed in `cuts` (cell `c` joins nodes `c` and `c+1`). Nodes next to a cut
/// fall back to the one-sided second-order stencil on their own side.
pub fn centered_difference_split(values: &[f64], step: f64, cuts: &[usize]) -> Vec<f64> {
    let mut out = centered_difference(values, step);
    let n = values.len();
    for &c in cuts {
        if c + 1 >= n {
            continue;
        }
        let (i, j) = (c, c + 1);
        out[i] = if i >= 2 {
            (3.0 * values[i] - 4.0 * values[i - 1] + values[i - 2]) / (2.0 * step)
        } else if i == 1 {
            (values[1] - values[0]) / step
        } else {
            0.0
        };
        out[j] = if j + 2 < n {
            (-3.0 * values[j] + 4.0 * values[j + 1] - values[j + 2]) / (2.0 * step)
        } else if j + 1 < n {
            (values[j + 1] - values[j]) / step
        } else {
            0.0
        };
    }
    out
}

/// Lagrange weights for extrapolating to half a cell beyond the last of
/// `m` equispaced nodes (ordered from the nearest outward).
fn half_step_weights(m: usize) -> &'static [f64] {
    match m {
        0 | 1 => &[1.0],
        2 => &[1.5, -0.5],
        3 => &[1.875, -1.25, 0.375],
        _ => &[2.1875, -2.1875, 1.3125, -0.3125],
    }
}

/// Values at the midpoint of cell `c` extrapolated from the left segment
/// (nodes `c, c-1, ...`) and from the right segment (`c+1, c+2, ...`), cubic
/// where the segments are long enough. Other cuts bound the segments.
pub fn midpoint_limits(values: &[f64], c: usize, cuts: &[usize]) -> (f64, f64) {
    let n = values.len();
    let left_start = cuts.iter().filter(|&&k| k < c).map(|&k| k + 1).max().unwrap_or(0);
    let right_end = cuts.iter().filter(|&&k| k > c).copied().min().unwrap_or(n - 1);
    let wl = half_step_weights(c + 1 - left_start);
    let wr = half_step_weights(right_end - c);
    let left = wl.iter().enumerate().map(|(j, w)| w * values[c - j]).sum();
    let right = wr.iter().enumerate().map(|(j, w)| w * values[c + 1 + j]).sum();
    (left, right)
}

/// Node weights of the split rule: trapezoid, with every cut cell divided
/// into two half cells whose shared midpoint is handled separately.
pub fn split_weights(n: usize, step: f64, cuts: &[usize]) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|i| trapezoid_weight(i, n, step)).collect();
    for &c in cuts.iter().filter(|&&c| c + 1 < n) {
        w[c] -= 0.25 * step;
        w[c + 1] -= 0.25 * step;
    }
    w
}

/// Integral of a function that is smooth between the cut cells and may jump
/// at their midpoints. Plain trapezoid away from the cuts; at each cut the
/// two half cells are closed with one-sided midpoint limits, and the
/// Euler–Maclaurin end terms of every segment touching a cut are included.
/// `dvalues` must be one-sided at the cuts, as from [`centered_difference_split`].
/// With no cuts this is [`trapezoid`].
pub fn split_trapezoid(values: &[f64], dvalues: &[f64], step: f64, cuts: &[usize]) -> f64 {
    let n = values.len();
    let weights = split_weights(n, step, cuts);
    let mut sum: f64 = values.iter().zip(&weights).map(|(v, w)| v * w).sum();
    let e = step * step;
    for &c in cuts.iter().filter(|&&c| c + 1 < n) {
        let (l, r) = midpoint_limits(values, c, cuts);
        let (dl, dr) = midpoint_limits(dvalues, c, cuts);
        sum += 0.25 * step * (l + r) + e / 48.0 * (dr - dl) - e / 16.0 * dvalues[c] + e / 16.0 * dvalues[c + 1];
    }
    sum
}

/// Trapezoid weight of node `i` out of `n` with spacing `step`.
#[inline]
pub fn trapezoid_weight(i: usize, n: usize, step: f64) -> f64 {
    if i == 0 || i + 1 == n {
        0.5 * step
    } else {
        step
    }
}

pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    values.iter().enumerate().map(|(i, v)| trapezoid_weight(i, n, step) * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrected_cumulative_is_fourth_order() {
        let err = |n: usize| {
            let step = 2.0 / (n - 1) as f64;
            let xs: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
            let h: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
            let dh: Vec<f64> = xs.iter().map(|x| -x.sin()).collect();
            let c = cumulative_corrected(&h, &dh, step);
            xs.iter().zip(&c).fold(0.0_f64, |m, (x, v)| m.max((x.sin() - v).abs()))
        };
        let (e1, e2) = (err(41), err(81));
        assert!(e1 / e2 > 14.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn split_rule_handles_a_midpoint_jump() {
        // f = cos x left of the jump, 2 + x² right of it, jump at a cell midpoint
        let err = |n: usize| {
            let step = 4.0 / (n - 1) as f64;
            let c = (n - 1) / 2 - 1;
            let jump = (c as f64 + 0.5) * step;
            let xs: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
            let v: Vec<f64> = xs.iter().map(|&x| if x < jump { x.cos() } else { 2.0 + x * x }).collect();
            let d = centered_difference_split(&v, step, &[c]);
            let exact = jump.sin() + 2.0 * (4.0 - jump) + (64.0 - jump.powi(3)) / 3.0;
            // trapezoid end terms at x = 0 and x = 4, which the rule leaves in place
            let ends = step * step / 12.0 * (8.0 - 0.0);
            (split_trapezoid(&v, &d, step, &[c]) - (exact + ends)).abs()
        };
        let (e1, e2) = (err(81), err(161));
        assert!(e1 / e2 > 12.0, "{e1} {e2}");
    }

    #[test]
    fn split_differences_ignore_the_jump() {
        let v: Vec<f64> = (0..10).map(|i| if i <= 4 { i as f64 } else { 100.0 + 2.0 * i as f64 }).collect();
        let d = centered_difference_split(&v, 1.0, &[4]);
        for (i, di) in d.iter().enumerate() {
            let expected = if i <= 4 { 1.0 } else { 2.0 };
            assert!((di - expected).abs() < 1e-12, "{i} {di}");
        }
    }

    #[test]
    fn differences_are_exact_on_quadratics() {
        let v: Vec<f64> = (0..6).map(|i| (i as f64 * 0.5).powi(2)).collect();
        let d = centered_difference(&v, 0.5);
        for (i, di) in d.iter().enumerate() {
            assert!((di - 2.0 * i as f64 * 0.5).abs() < 1e-12);
        }
    }
}
