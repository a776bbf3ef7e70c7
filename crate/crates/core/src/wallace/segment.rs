//! Mod-free regeneration loop.
//!
//! The index maps `j -> (αj + γ) mod N` and `j -> (βj + δ) mod N` are affine
//! between the points where either one wraps. Splitting `0..N` at those
//! points gives a handful of segments in which both indices are plain
//! strided walks, so the inner loop carries no modular arithmetic.

use crate::error::{invalid, Result};

use super::params::PassParams;
use super::pool::Pool;

/// A run `low..=high` of the loop in which the source indices are
/// `alpha*j + jx` and `beta*j + jy` with no wraparound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub low: usize,
    pub high: usize,
    pub jx: isize,
    pub jy: isize,
}

impl Segment {
    /// Number of loop iterations; segments are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.high - self.low + 1
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Loop indices `j` in `1..n` at which `(stride*j + offset) / n` steps up.
fn wrap_points(stride: usize, offset: usize, n: usize) -> impl Iterator<Item = usize> {
    (1..=stride)
        .map(move |k| (k * n - offset).div_ceil(stride))
        .take_while(move |&j| j < n)
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len() + 1);
    out.push(0);
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let next = match (a.get(i), b.get(k)) {
            (Some(&p), Some(&q)) if p <= q => {
                i += 1;
                if p == q {
                    k += 1;
                }
                p
            }
            (Some(_), Some(&q)) => {
                k += 1;
                q
            }
            (Some(&p), None) => {
                i += 1;
                p
            }
            (None, Some(&q)) => {
                k += 1;
                q
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// Splits `0..n` into wrap-free segments for the strides and offsets in
/// `params`. Requires both strides coprime to `n` and offsets below `n`.
pub fn plan_segments(params: &PassParams, n: usize) -> Result<Vec<Segment>> {
    let PassParams { alpha, beta, gamma, delta, .. } = *params;
    if n == 0 {
        return Err(invalid("empty pool"));
    }
    if alpha == 0 || beta == 0 || gcd(alpha, n) != 1 || gcd(beta, n) != 1 {
        return Err(invalid(format!("strides ({alpha}, {beta}) must be coprime to {n}")));
    }
    if gamma >= n || delta >= n {
        return Err(invalid(format!("offsets ({gamma}, {delta}) must be below {n}")));
    }
    let xs: Vec<usize> = wrap_points(alpha, gamma, n).collect();
    let ys: Vec<usize> = wrap_points(beta, delta, n).collect();
    let starts = merge_sorted(&xs, &ys);

    let segments = starts
        .iter()
        .enumerate()
        .map(|(i, &low)| {
            let high = starts.get(i + 1).map_or(n - 1, |&next| next - 1);
            let wx = (alpha * low + gamma) / n;
            let wy = (beta * low + delta) / n;
            Segment {
                low,
                high,
                jx: gamma as isize - (wx * n) as isize,
                jy: delta as isize - (wy * n) as isize,
            }
        })
        .collect();
    Ok(segments)
}

/// One pass: writes the scaled rotation of `src` into `dst`.
///
/// `dst` afterwards tracks `params.target_sumsq` and withholds its last y
/// value for the next pass's chi-squared draw.
pub fn regenerate(src: &Pool, dst: &mut Pool, params: &PassParams) -> Result<()> {
    let n = src.n();
    if dst.n() != n {
        return Err(invalid("source and destination pools differ in size"));
    }
    let segments = plan_segments(params, n)?;
    let k = params.scale;
    let (a00, a01) = (k * params.rot.c, k * params.rot.s);
    let (a10, a11) = (-a01, a00);
    let (sx_all, sy_all) = (src.x(), src.y());
    let (dx_all, dy_all) = dst.halves_mut();

    for seg in &segments {
        let len = seg.len();
        let x0 = (params.alpha * seg.low) as isize + seg.jx;
        let y0 = (params.beta * seg.low) as isize + seg.jy;
        let xs = sx_all[x0 as usize..].iter().step_by(params.alpha);
        let ys = sy_all[y0 as usize..].iter().step_by(params.beta);
        let dx = &mut dx_all[seg.low..=seg.high];
        let dy = &mut dy_all[seg.low..=seg.high];
        for (((ox, oy), &xv), &yv) in dx.iter_mut().zip(dy.iter_mut()).zip(xs).zip(ys).take(len) {
            *ox = a00 * xv + a01 * yv;
            *oy = a10 * xv + a11 * yv;
        }
    }

    dst.set_tracked_sumsq(params.target_sumsq);
    dst.set_withheld(dst.y()[n - 1]);
    Ok(())
}
