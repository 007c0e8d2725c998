//! Log-gamma and the regularized incomplete gamma functions.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// log of `z^a e^-z / Γ(a)`, the prefactor shared by both expansions.
fn log_prefactor(a: f64, z: f64) -> f64 {
    a * z.ln() - z - ln_gamma(a)
}

/// Lower regularized gamma P(a, z) by its power series; converges for z < a + 1.
fn lower_series(a: f64, z: f64) -> f64 {
    let mut denom = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= z / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * log_prefactor(a, z).exp()
}

/// Upper regularized gamma Q(a, z) by its continued fraction (modified Lentz);
/// converges for z >= a + 1.
fn upper_continued_fraction(a: f64, z: f64) -> f64 {
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    log_prefactor(a, z).exp() * h
}

/// Upper regularized incomplete gamma Q(a, z) = Γ(a, z) / Γ(a), for a > 0, z >= 0.
pub fn gamma_q(a: f64, z: f64) -> f64 {
    if z <= 0.0 {
        return 1.0;
    }
    if z.is_infinite() {
        return 0.0;
    }
    let q = if z < a + 1.0 { 1.0 - lower_series(a, z) } else { upper_continued_fraction(a, z) };
    q.clamp(0.0, 1.0)
}

/// Lower regularized incomplete gamma P(a, z).
pub fn gamma_p(a: f64, z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z.is_infinite() {
        return 1.0;
    }
    let p = if z < a + 1.0 { lower_series(a, z) } else { 1.0 - upper_continued_fraction(a, z) };
    p.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ln Γ at integers and half-integers by the factorial recurrences.
    fn ln_gamma_half_integer(twice: u32) -> f64 {
        let (mut x, mut acc) = if twice % 2 == 0 { (1.0, 0.0) } else { (0.5, 0.5 * PI.ln()) };
        while 2.0 * x < twice as f64 {
            acc += x.ln();
            x += 1.0;
        }
        acc
    }

    #[test]
    fn ln_gamma_matches_recurrence() {
        for twice in 1..=200 {
            let exact = ln_gamma_half_integer(twice);
            let got = ln_gamma(twice as f64 / 2.0);
            assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{twice}: {got} vs {exact}");
        }
    }

    #[test]
    fn exponential_special_case() {
        // Q(1, z) = e^-z
        for z in [0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 7.5, 30.0] {
            assert!((gamma_q(1.0, z) - (-z).exp()).abs() < 1e-14, "{z}");
        }
    }

    #[test]
    fn p_and_q_complement() {
        for &(a, z) in &[(0.5, 0.3), (3.0, 2.0), (3.0, 5.0), (10.0, 10.5), (50.0, 40.0)] {
            assert!((gamma_p(a, z) + gamma_q(a, z) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn continuity_across_branch_switch() {
        for a in [0.5, 1.5, 4.0, 25.0] {
            let z = a + 1.0;
            let below = 1.0 - lower_series(a, z);
            let above = upper_continued_fraction(a, z);
            assert!((below - above).abs() < 1e-13, "{a}: {below} vs {above}");
        }
    }
}
