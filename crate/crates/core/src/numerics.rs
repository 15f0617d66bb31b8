//! One-variable multiple polylogarithms
//! `Li_{k_1,...,k_m}(z) = Σ_{n_1 > ... > n_m ≥ 1} z^{n_1} / (n_1^{k_1} ⋯ n_m^{k_m})`
//! and the weight-three combination
//! `J(t_0) = Li_{1,2}(t_0) − Li_1(t_0)·Li_2(1)`, which stays bounded as
//! `t_0 → 1` and tends to `−2ζ(2,1)`.

use crate::{Error, Result};

/// A composition `(k_1, ..., k_m)` of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MplIndex(Vec<u32>);

impl MplIndex {
    pub fn new(ks: Vec<u32>) -> Result<Self> {
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::Parse(format!(
                "index {ks:?} must be a nonempty list of positive integers"
            )));
        }
        Ok(Self(ks))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// True iff the series converges at `z = 1`.
    pub fn converges_at_one(&self) -> bool {
        self.0[0] >= 2
    }
}

// Inner nested sums after step `n`: acc[j] = Σ over n > n_{j} > ... of the
// tail product starting at depth `j`.
struct NestedSums {
    ks: Vec<u32>,
    acc: Vec<f64>,
    n: u64,
}

impl NestedSums {
    fn new(ks: &[u32]) -> Self {
        Self {
            ks: ks.to_vec(),
            acc: vec![0.0; ks.len()],
            n: 0,
        }
    }

    /// Advances to the next `n` and returns the outermost summand without the
    /// power of `z`.
    fn step(&mut self) -> f64 {
        self.n += 1;
        let n = self.n as f64;
        let m = self.ks.len();
        let terms: Vec<f64> = (0..m)
            .map(|j| {
                let inner = if j + 1 == m { 1.0 } else { self.acc[j + 1] };
                inner / n.powi(self.ks[j] as i32)
            })
            .collect();
        for (acc, term) in self.acc.iter_mut().zip(&terms).skip(1) {
            *acc += term;
        }
        terms[0]
    }

    /// Current value of the sum one level below the outermost.
    fn inner(&self) -> f64 {
        if self.ks.len() == 1 {
            1.0
        } else {
            self.acc[1]
        }
    }
}

/// `Σ_{n>N} n^{−k}` by Euler–Maclaurin.
fn zeta_tail(k: u32, big_n: f64) -> f64 {
    let k = k as f64;
    big_n.powf(1.0 - k) / (k - 1.0) - 0.5 * big_n.powf(-k) + k / 12.0 * big_n.powf(-k - 1.0)
        - k * (k + 1.0) * (k + 2.0) / 720.0 * big_n.powf(-k - 3.0)
}

const MAX_TERMS: u64 = 200_000_000;

/// Evaluates `Li_index(z)` for `0 ≤ z < 1`, or `z = 1` when `k_1 ≥ 2`.
///
/// Below `1` the sum stops once the geometric tail bound drops below `tol`.
/// At `1` the partial sum is completed by an Euler–Maclaurin tail whose
/// neglected part, of order `log(N)^{m−1} N^{−k_1}`, is below `tol`.
pub fn li_series(index: &MplIndex, z: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) || tol <= 0.0 {
        return Err(Error::Divergent(format!(
            "z = {z} must lie in [0, 1] and tol = {tol} be positive"
        )));
    }
    let ks = index.parts();
    let m = ks.len() as i32;
    let mut sums = NestedSums::new(ks);
    if z < 1.0 && ks == [1] {
        return Ok(-(-z).ln_1p());
    }
    if z < 1.0 {
        let mut total = 0.0;
        let mut zn = 1.0;
        loop {
            zn *= z;
            let term = sums.step();
            total += zn * term;
            let n = sums.n as f64;
            let growth = (1.0 + n.ln()).powi(m - 1);
            let bound = zn * z * growth / ((n + 1.0).powi(ks[0] as i32) * (1.0 - z));
            if bound < tol || zn == 0.0 {
                return Ok(total);
            }
            if sums.n > MAX_TERMS {
                return Err(Error::Divergent(format!("no convergence after {MAX_TERMS} terms")));
            }
        }
    }
    if !index.converges_at_one() {
        return Err(Error::Divergent(format!("Li_{ks:?}(1) diverges since k_1 = 1")));
    }
    let k1 = ks[0] as i32;
    let mut big_n = 16.0f64;
    // Depth one keeps the Euler–Maclaurin remainder, of order N^{−k_1−5}.
    let remainder = |n: f64| {
        if m == 1 {
            n.powi(-k1 - 5) * (k1 as f64 + 4.0).powi(5)
        } else {
            (1.0 + n.ln()).powi(m) * n.powi(-k1)
        }
    };
    while remainder(big_n) > tol {
        big_n *= 2.0;
        if big_n > MAX_TERMS as f64 {
            return Err(Error::Divergent(format!(
                "tolerance {tol} needs more than {MAX_TERMS} terms"
            )));
        }
    }
    let mut total = 0.0;
    for _ in 0..big_n as u64 {
        total += sums.step();
    }
    // The inner sum grows like log n when its last index is 1 and depth is 2.
    let mut tail = sums.inner() * zeta_tail(ks[0], big_n);
    if ks.len() == 2 && ks[1] == 1 {
        tail += big_n.powf(1.0 - ks[0] as f64) / ((ks[0] - 1) as f64).powi(2);
    }
    Ok(total + tail)
}

/// `ζ(2) = Li_2(1)`.
pub fn zeta2(tol: f64) -> Result<f64> {
    li_series(&MplIndex(vec![2]), 1.0, tol)
}

/// `J(t_0) = Li_{1,2}(t_0) − Li_1(t_0)·Li_2(1)` from the series.
pub fn j_series(t0: f64, tol: f64) -> Result<f64> {
    let li12 = li_series(&MplIndex(vec![1, 2]), t0, tol)?;
    let li1 = li_series(&MplIndex(vec![1]), t0, tol)?;
    Ok(li12 - li1 * zeta2(tol)?)
}

/// `J(t_0)` from the simplex integrals
/// `∫_{0≤s_1≤s_2≤s_3≤1} t_0/(1−t_0 s_1) · 1/s_2 · t_0/(1−t_0 s_3)` and
/// `∫_0^1 t_0/(1−t_0 s) ds · ∫_{0≤s_1≤s_2≤1} 1/s_2 · 1/(1−s_1)`, each
/// evaluated by nested double-exponential quadrature.
pub fn integral_i011(t0: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t0) || tol <= 0.0 {
        return Err(Error::Divergent(format!(
            "t0 = {t0} must lie in [0, 1) and tol = {tol} be positive"
        )));
    }
    let inner_tol = tol * 1e-3;
    let omega1 = |s: f64| t0 / (1.0 - t0 * s);
    let simple = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        let o = quadrature::integrate(f, a, b, inner_tol);
        (o.integral, o.error_estimate)
    };
    let middle = |s2: f64| {
        if s2 == 0.0 {
            return (t0, 0.0);
        }
        let (v, e) = simple(&omega1, 0.0, s2);
        (v / s2, e / s2)
    };
    let (simplex3, e3) = iterated(
        |s3| {
            let (v, e) = iterated(middle, 0.0, s3, inner_tol);
            (omega1(s3) * v, omega1(s3) * e)
        },
        0.0,
        1.0,
        tol,
    );
    let (line, el) = simple(&omega1, 0.0, 1.0);
    let (simplex2, e2) = iterated(
        |s2| {
            if s2 == 0.0 {
                return (1.0, 0.0);
            }
            let (v, e) = simple(&|s1| 1.0 / (1.0 - s1), 0.0, s2);
            (v / s2, e / s2)
        },
        0.0,
        1.0,
        tol,
    );
    let estimate = e3 + el * simplex2.abs() + e2 * line.abs();
    if !estimate.is_finite() || estimate > tol {
        return Err(Error::Quadrature { estimate, tol });
    }
    Ok(simplex3 - line * simplex2)
}

// Integrates `s ↦ g(s).0` where `g(s).1` bounds the error of each sample,
// returning the value and a bound that includes the integrated sample errors.
fn iterated<G: Fn(f64) -> (f64, f64)>(g: G, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let value = quadrature::integrate(|s| g(s).0, a, b, tol);
    let inner = quadrature::integrate(|s| g(s).1.abs(), a, b, tol);
    (
        value.integral,
        value.error_estimate + inner.integral.abs() + inner.error_estimate,
    )
}

/// Extrapolates `J(1)` from `J(1 − 2^{−k})`, `k ∈ ks`, fitting
/// `J(1−h) = c_0 + Σ_j (a_j h^j log h + b_j h^j)` with as many terms as points.
pub fn extrapolate_j_at_one(ks: &[u32], tol: f64) -> Result<f64> {
    let samples: Vec<(f64, f64)> = ks
        .iter()
        .map(|&k| {
            let h = 0.5f64.powi(k as i32);
            j_series(1.0 - h, tol).map(|j| (h, j))
        })
        .collect::<Result<_>>()?;
    let basis = |h: f64, i: usize| -> f64 {
        if i == 0 {
            return 1.0;
        }
        let p = i.div_ceil(2) as i32;
        if i % 2 == 1 {
            h.powi(p) * h.ln()
        } else {
            h.powi(p)
        }
    };
    let n = samples.len();
    let mut m: Vec<Vec<f64>> = samples
        .iter()
        .map(|&(h, j)| {
            let mut row: Vec<f64> = (0..n).map(|i| basis(h, i)).collect();
            row.push(j);
            row
        })
        .collect();
    solve_dense(&mut m).map(|x| x[0])
}

// Gaussian elimination with partial pivoting on an augmented square system.
fn solve_dense(m: &mut [Vec<f64>]) -> Result<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty");
        if m[p][col] == 0.0 {
            return Err(Error::Divergent("singular extrapolation system".into()));
        }
        m.swap(col, p);
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot = &top[col];
        for row in rest {
            let f = row[col] / pivot[col];
            for (x, p) in row.iter_mut().zip(pivot).skip(col) {
                *x -= f * p;
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(ks: &[u32]) -> MplIndex {
        MplIndex::new(ks.to_vec()).unwrap()
    }

    #[test]
    fn classical_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((li_series(&idx(&[1]), 0.5, 1e-14).unwrap() - ln2).abs() < 1e-13);
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((li_series(&idx(&[2]), 1.0, 1e-12).unwrap() - z2).abs() < 1e-11);
        // Euler: ζ(2,1) = ζ(3).
        let z21 = li_series(&idx(&[2, 1]), 1.0, 1e-9).unwrap();
        assert!((z21 - 1.202_056_903_159_594).abs() < 1e-8, "{z21}");
        assert!(li_series(&idx(&[3, 1, 1]), 0.0, 1e-12).unwrap() == 0.0);
    }

    #[test]
    fn dilogarithm_at_one_half() {
        // Li_2(1/2) = π²/12 − (ln 2)²/2.
        let expected = std::f64::consts::PI.powi(2) / 12.0 - std::f64::consts::LN_2.powi(2) / 2.0;
        assert!((li_series(&idx(&[2]), 0.5, 1e-14).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(MplIndex::new(vec![]).is_err());
        assert!(MplIndex::new(vec![2, 0]).is_err());
        assert!(matches!(li_series(&idx(&[1, 2]), 1.0, 1e-8), Err(Error::Divergent(_))));
        assert!(li_series(&idx(&[2]), 1.5, 1e-8).is_err());
        assert!(integral_i011(1.0, 1e-8).is_err());
    }

    #[test]
    fn derivative_of_li12_is_li2_over_one_minus_t() {
        let (t, h) = (0.4, 1e-5);
        let f = |x: f64| li_series(&idx(&[1, 2]), x, 1e-15).unwrap();
        let numeric = (f(t + h) - f(t - h)) / (2.0 * h);
        let li2 = li_series(&idx(&[2]), t, 1e-15).unwrap();
        assert!((numeric - li2 / (1.0 - t)).abs() < 1e-8);
    }

    #[test]
    fn quadrature_matches_series() {
        assert_eq!(integral_i011(0.0, 1e-8).unwrap(), 0.0);
        for t0 in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let q = integral_i011(t0, 1e-8).unwrap();
            let s = j_series(t0, 1e-12).unwrap();
            assert!((q - s).abs() < 1e-7, "t0 = {t0}: {q} vs {s}");
        }
    }

    #[test]
    fn j_stays_bounded_near_one() {
        for k in 4..=12 {
            let t0 = 1.0 - 0.5f64.powi(k);
            let j = j_series(t0, 1e-12).unwrap();
            assert!(j.abs() < 3.0, "k = {k}: {j}");
            let li1 = li_series(&idx(&[1]), t0, 1e-12).unwrap();
            assert!(li1 > k as f64 * 0.69);
        }
    }

    #[test]
    fn extrapolated_limit_is_minus_two_zeta21() {
        let z21 = li_series(&idx(&[2, 1]), 1.0, 1e-10).unwrap();
        for ks in [(7..=12).collect::<Vec<_>>(), (4..=12).collect()] {
            let limit = extrapolate_j_at_one(&ks, 1e-13).unwrap();
            assert!((limit + 2.0 * z21).abs() < 1e-4, "{ks:?}: {limit} vs {}", -2.0 * z21);
        }
    }
}
