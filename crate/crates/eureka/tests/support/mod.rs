//! Independent reference computations ("oracles") used by the integration
//! and acceptance suites. Everything here deliberately avoids the library's
//! own code paths for the quantity it checks.

#![allow(dead_code)]

use eureka::ranking::Ranking;

/// Kendall tau by direct pair counting over a sorted name list.
pub fn brute_kendall(r1: &Ranking, r2: &Ranking) -> f64 {
    let mut names: Vec<&str> = r1.order.iter().map(String::as_str).collect();
    names.sort_unstable();
    let pos = |r: &Ranking, n: &str| r.order.iter().position(|x| x == n).unwrap() as i64;
    let m = names.len();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for x in 0..m {
        for y in x + 1..m {
            let d1 = pos(r1, names[x]) - pos(r1, names[y]);
            let d2 = pos(r2, names[x]) - pos(r2, names[y]);
            if d1 * d2 > 0 {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    (concordant - discordant) as f64 / (m * (m - 1) / 2) as f64
}

/// Spearman rho as the Pearson correlation of the integer rank vectors,
/// using exact integer sums and a single final division.
pub fn brute_spearman(r1: &Ranking, r2: &Ranking) -> f64 {
    let mut names: Vec<&str> = r1.order.iter().map(String::as_str).collect();
    names.sort_unstable();
    let pos = |r: &Ranking, n: &str| r.order.iter().position(|x| x == n).unwrap() as i64;
    let m = names.len() as i64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i64, 0i64, 0i64, 0i64, 0i64);
    for n in &names {
        let x = pos(r1, n);
        let y = pos(r2, n);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    let num = m * sxy - sx * sy;
    let den_x = m * sxx - sx * sx;
    let den_y = m * syy - sy * sy;
    assert_eq!(den_x, den_y, "rank vectors of permutations share variance");
    num as f64 / den_x as f64
}

/// All permutations of 0..m (Heap's algorithm).
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, arr: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, arr, out);
            if k.is_multiple_of(2) {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    let mut arr: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    heap(m, &mut arr, &mut out);
    out
}

/// Exact Γ(df/2) for integer degrees of freedom: Γ(k) = (k-1)!,
/// Γ(k + 1/2) = (2k)! sqrt(π) / (4^k k!).
fn gamma_half_integer(df: u32) -> f64 {
    let k = df / 2;
    if df.is_multiple_of(2) {
        (1..k.max(1)).map(f64::from).product()
    } else {
        let factorial = |n: u32| -> f64 { (1..=n).map(f64::from).product() };
        factorial(2 * k) * std::f64::consts::PI.sqrt() / (4f64.powi(k as i32) * factorial(k))
    }
}

/// Chi-square density at t for the given degrees of freedom.
fn chi2_density(t: f64, df: u32) -> f64 {
    let a = f64::from(df) / 2.0;
    t.powf(a - 1.0) * (-t / 2.0).exp() / (2f64.powf(a) * gamma_half_integer(df))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let f_mid = f(mid);
    let left = (mid - lo) / 6.0 * (f_lo + 4.0 * f(0.5 * (lo + mid)) + f_mid);
    let right = (hi - mid) / 6.0 * (f_mid + 4.0 * f(0.5 * (mid + hi)) + f_hi);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
        left + right + (left + right - whole) / 15.0
    } else {
        adaptive_simpson(f, lo, mid, f_lo, f_mid, left, eps / 2.0, depth - 1)
            + adaptive_simpson(f, mid, hi, f_mid, f_hi, right, eps / 2.0, depth - 1)
    }
}

/// Chi-square upper tail by adaptive quadrature of the density. Independent
/// of the incomplete-gamma implementation under test.
pub fn chi2_sf_quadrature(x: f64, df: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    // Integrate from x out to where the remaining mass is negligible.
    let hi = (x + 300.0).max(60.0 + 12.0 * f64::from(df));
    let f = |t: f64| chi2_density(t, df);
    let f_lo = f(x);
    let f_hi = f(hi);
    let mid = 0.5 * (x + hi);
    let whole = (hi - x) / 6.0 * (f_lo + 4.0 * f(mid) + f_hi);
    adaptive_simpson(&f, x, hi, f_lo, f_hi, whole, 1e-13, 40)
}

/// Deterministic xorshift-free uniform stream for oracle-side sampling.
pub struct OracleRng(u64);

impl OracleRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_add(0x9e37_79b9_7f4a_7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
