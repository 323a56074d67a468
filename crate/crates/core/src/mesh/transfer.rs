//! Inter-level transfer operators.

/// Mean of a 2×2×2 child block (x fastest), summed pairwise so the result
/// does not depend on anything but the eight values.
#[inline]
pub fn restrict(c: &[f64; 8]) -> f64 {
    (((c[0] + c[1]) + (c[2] + c[3])) + ((c[4] + c[5]) + (c[6] + c[7]))) * 0.125
}

/// Trilinear interpolation of a 3×3×3 parent neighbourhood (x fastest,
/// centre at index 13) to its eight children (x fastest).
///
/// Each child centre sits a quarter parent cell from the parent centre, so
/// per axis it takes 3/4 of the centre plane and 1/4 of the neighbour plane.
pub fn prolong(p: &[f64; 27]) -> [f64; 8] {
    let at = |i: usize, j: usize, k: usize| p[i + 3 * (j + 3 * k)];
    std::array::from_fn(|c| {
        let o = [c & 1, (c >> 1) & 1, (c >> 2) & 1];
        // neighbour index per axis: 0 for the low child, 2 for the high one
        let n = o.map(|b| 2 * b);
        let mut acc = 0.0;
        for corner in 0..8 {
            let pick = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
            let mut w = 1.0;
            let mut ix = [1usize; 3];
            for a in 0..3 {
                if pick[a] == 1 {
                    w *= 0.25;
                    ix[a] = n[a];
                } else {
                    w *= 0.75;
                }
            }
            acc += w * at(ix[0], ix[1], ix[2]);
        }
        acc
    })
}

#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Limited linear reconstruction at a child of a coarse cell.
///
/// `lo`/`hi` are the neighbour values below/above the centre `v0` along each
/// axis, `None` when unavailable (a one-sided slope is used then, or zero if
/// both are missing). `sign[a]` is ±1 for the child's side along axis `a`.
/// Exact for linear data, and never leaves the range spanned by the
/// neighbours used.
#[inline]
pub fn prolong_limited(v0: f64, lo: [Option<f64>; 3], hi: [Option<f64>; 3], sign: [f64; 3]) -> f64 {
    let slope = |a: usize| match (lo[a], hi[a]) {
        (Some(l), Some(h)) => minmod(v0 - l, h - v0),
        (Some(l), None) => v0 - l,
        (None, Some(h)) => h - v0,
        (None, None) => 0.0,
    };
    v0 + 0.25 * ((sign[0] * slope(0) + sign[1] * slope(1)) + sign[2] * slope(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_of_constant() {
        assert_eq!(restrict(&[0.3; 8]), 0.3);
        assert_eq!(restrict(&[1., 2., 3., 4., 5., 6., 7., 8.]), 4.5);
    }

    #[test]
    fn prolong_of_constant() {
        assert_eq!(prolong(&[2.5; 27]), [2.5; 8]);
        assert_eq!(restrict(&prolong(&[2.5; 27])), 2.5);
    }

    #[test]
    fn prolong_is_exact_on_linear_data() {
        let f = |x: f64, y: f64, z: f64| 0.5 + 2.0 * x - 3.0 * y + 0.25 * z;
        let parent: [f64; 27] = std::array::from_fn(|n| {
            let (i, j, k) = (n % 3, (n / 3) % 3, n / 9);
            f(i as f64 - 1.0, j as f64 - 1.0, k as f64 - 1.0)
        });
        let kids = prolong(&parent);
        for (c, v) in kids.iter().enumerate() {
            let o = |b: usize| if b == 1 { 0.25 } else { -0.25 };
            let want = f(o(c & 1), o((c >> 1) & 1), o((c >> 2) & 1));
            assert!((v - want).abs() < 1e-14, "{c}: {v} vs {want}");
        }
        // and the mean of the children is the parent
        assert!((restrict(&kids) - parent[13]).abs() < 1e-15);
    }

    #[test]
    fn limited_variant_exact_on_linear_and_clipped_at_extrema() {
        let v = prolong_limited(1.0, [Some(0.5), Some(1.0), None], [Some(1.5), Some(1.0), Some(2.0)], [1.0, -1.0, -1.0]);
        assert_eq!(v, 1.0 + 0.25 * (0.5 - 1.0));
        // local maximum: slope limited to zero
        assert_eq!(prolong_limited(2.0, [Some(1.0); 3], [Some(1.0); 3], [1.0; 3]), 2.0);
        assert_eq!(minmod(1.0, -1.0), 0.0);
        assert_eq!(minmod(-1.0, -3.0), -1.0);
    }
}
