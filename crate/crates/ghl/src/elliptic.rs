//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! Everything here uses the *parameter* convention: `K(m)` is
//! `int_0^{pi/2} (1 - m sin^2 s)^{-1/2} ds`, and `sn(u, m)`, `cn(u, m)`,
//! `dn(u, m)` satisfy `sn^2 + cn^2 = 1`, `dn^2 + m sn^2 = 1`. The periodic
//! breather formulas are read in the same convention throughout.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EllipticError {
    #[error("elliptic parameter {0} outside [0, 1)")]
    Domain(f64),
}

/// Complete elliptic integral of the first kind by the arithmetic-geometric
/// mean, `K(m) = pi / (2 AGM(1, sqrt(1-m)))`. Relative accuracy ~1e-15.
pub fn elliptic_k(m: f64) -> Result<f64, EllipticError> {
    if !(0.0..1.0).contains(&m) {
        return Err(EllipticError::Domain(m));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(std::f64::consts::FRAC_PI_2 / a)
}

/// Jacobi elliptic functions `(sn, cn, dn, nd)` at parameter `m` in `[0, 1]`.
///
/// Descending-Landen/AGM evaluation with the argument reduced modulo the
/// 4K(m) period first, so large arguments stay accurate. The endpoint cases
/// degenerate to trigonometric (`m = 0`) and hyperbolic (`m = 1`) functions.
pub fn jacobi(u: f64, m: f64) -> (f64, f64, f64, f64) {
    assert!((0.0..=1.0).contains(&m), "parameter {m} outside [0, 1]");
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0, 1.0);
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return (u.tanh(), sech, sech, u.cosh());
    }
    // period reduction
    let k = elliptic_k(m).expect("m < 1 checked above");
    let period = 4.0 * k;
    let u = u - period * (u / period).round();

    // AGM ladder: a_{i+1} = (a_i+b_i)/2, b_{i+1} = sqrt(a_i b_i),
    // c_{i+1} = (a_i-b_i)/2; then phi_N = 2^N a_N u and the amplitude is
    // recovered downward through sin(2 phi_{n-1} - phi_n) = (c_n/a_n) sin phi_n.
    let mut a = [0.0f64; 24];
    let mut c = [0.0f64; 24];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut an = 1.0f64;
    let mut bn = (1.0 - m).sqrt();
    let mut n = 0usize;
    while n + 1 < 24 {
        let cn = 0.5 * (an - bn);
        let a_next = 0.5 * (an + bn);
        bn = (an * bn).sqrt();
        an = a_next;
        n += 1;
        a[n] = an;
        c[n] = cn;
        if cn.abs() <= f64::EPSILON * an {
            break;
        }
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for i in (1..=n).rev() {
        let arg = (c[i] / a[i] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + arg.asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    (sn, cn, dn, 1.0 / dn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Adaptive Simpson quadrature of the defining integral, used only as an
    /// independent oracle for `elliptic_k`.
    fn k_by_quadrature(m: f64) -> f64 {
        fn f(m: f64, s: f64) -> f64 {
            1.0 / (1.0 - m * s.sin().powi(2)).sqrt()
        }
        fn simpson(m: f64, a: f64, b: f64) -> f64 {
            let c = 0.5 * (a + b);
            (b - a) / 6.0 * (f(m, a) + 4.0 * f(m, c) + f(m, b))
        }
        fn adapt(m: f64, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
            let c = 0.5 * (a + b);
            let left = simpson(m, a, c);
            let right = simpson(m, c, b);
            if depth == 0 || (left + right - whole).abs() < 1e-15 {
                left + right + (left + right - whole) / 15.0
            } else {
                adapt(m, a, c, left, depth - 1) + adapt(m, c, b, right, depth - 1)
            }
        }
        adapt(m, 0.0, FRAC_PI_2, simpson(m, 0.0, FRAC_PI_2), 40)
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        assert!((elliptic_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn k_matches_quadrature_oracle() {
        for &m in &[0.05, 0.25, 0.5, 1.0 / 17.0, 0.9] {
            let k = elliptic_k(m).unwrap();
            let q = k_by_quadrature(m);
            assert!(
                (k - q).abs() < 1e-13 * k,
                "K({m}) = {k} vs quadrature {q}"
            );
        }
        // spot value
        assert!((elliptic_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn k_diverges_toward_one_and_rejects_out_of_domain() {
        assert!(elliptic_k(1.0 - 1e-16).unwrap() > 10.0);
        assert_eq!(elliptic_k(1.0), Err(EllipticError::Domain(1.0)));
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_k(1.5).is_err());
    }

    #[test]
    fn jacobi_degenerate_parameters() {
        for &u in &[-2.3, -0.4, 0.0, 0.7, 1.9, 12.0] {
            let (sn, cn, dn, nd) = jacobi(u, 0.0);
            assert!((sn - u.sin()).abs() < 1e-14);
            assert!((cn - u.cos()).abs() < 1e-14);
            assert_eq!(dn, 1.0);
            assert_eq!(nd, 1.0);
            let (sn, cn, dn, _) = jacobi(u, 1.0);
            assert!((sn - u.tanh()).abs() < 1e-14);
            assert!((cn - 1.0 / u.cosh()).abs() < 1e-14);
            assert!((dn - 1.0 / u.cosh()).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_identities_hold() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut rand01 = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let u = 40.0 * (rand01() - 0.5);
            let m = rand01();
            let (sn, cn, dn, nd) = jacobi(u, m);
            assert!((sn * sn + cn * cn - 1.0).abs() < 1e-12);
            assert!((dn * dn + m * sn * sn - 1.0).abs() < 1e-12);
            assert!((nd * dn - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_inverts_the_incomplete_integral() {
        // Independent value check: for |u| < K(m), the amplitude phi with
        // sn = sin(phi) must satisfy u = int_0^phi (1 - m sin^2 s)^{-1/2} ds.
        fn f_incomplete(phi: f64, m: f64) -> f64 {
            // adaptive Simpson on the defining integrand
            fn f(m: f64, s: f64) -> f64 {
                1.0 / (1.0 - m * s.sin().powi(2)).sqrt()
            }
            fn simpson(m: f64, a: f64, b: f64) -> f64 {
                let c = 0.5 * (a + b);
                (b - a) / 6.0 * (f(m, a) + 4.0 * f(m, c) + f(m, b))
            }
            fn adapt(m: f64, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
                let c = 0.5 * (a + b);
                let l = simpson(m, a, c);
                let r = simpson(m, c, b);
                if depth == 0 || (l + r - whole).abs() < 1e-15 {
                    l + r + (l + r - whole) / 15.0
                } else {
                    adapt(m, a, c, l, depth - 1) + adapt(m, c, b, r, depth - 1)
                }
            }
            adapt(m, 0.0, phi, simpson(m, 0.0, phi), 40)
        }
        for &m in &[0.1, 0.5, 0.9, 0.9998] {
            let kk = elliptic_k(m).unwrap();
            for frac in [-0.9, -0.5, -0.17, 0.33, 0.71, 0.95] {
                let u = frac * kk;
                let (sn, cn, _, _) = jacobi(u, m);
                assert!(cn > 0.0, "|u| < K keeps the amplitude in (-pi/2, pi/2)");
                let phi = sn.asin();
                let back = f_incomplete(phi, m);
                assert!(
                    (back - u).abs() < 1e-11 * u.abs().max(1.0),
                    "m={m}, u={u}: integral of amplitude gives {back}"
                );
            }
        }
    }

    #[test]
    fn quarter_period_identity() {
        for &m in &[0.1, 0.3, 1.0 / 17.0, 0.8] {
            let k = elliptic_k(m).unwrap();
            let (sn, cn, _, _) = jacobi(k, m);
            assert!((sn - 1.0).abs() < 1e-12, "sn(K({m})) = {sn}");
            assert!(cn.abs() < 1e-12);
        }
    }

    #[test]
    fn periodicity_in_4k() {
        for &m in &[0.2, 0.6] {
            let k = elliptic_k(m).unwrap();
            for &u in &[0.3, 1.1, 2.9] {
                let a = jacobi(u, m);
                let b = jacobi(u + 4.0 * k, m);
                assert!((a.0 - b.0).abs() < 1e-12);
                assert!((a.1 - b.1).abs() < 1e-12);
                assert!((a.2 - b.2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sn_is_odd_cn_dn_even() {
        let m = 0.35;
        for &u in &[0.2, 0.9, 1.7] {
            let p = jacobi(u, m);
            let q = jacobi(-u, m);
            assert!((p.0 + q.0).abs() < 1e-13);
            assert!((p.1 - q.1).abs() < 1e-13);
            assert!((p.2 - q.2).abs() < 1e-13);
        }
        let _ = PI;
    }
}
