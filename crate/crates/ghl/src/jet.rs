//! Truncated Taylor-series arithmetic ("jets").
//!
//! A `Jet<K>` stores the first `K` Taylor coefficients of a function of one
//! scalar variable about a point. Evaluating a closed-form solution with a
//! seeded jet yields its exact derivatives at that point to machine
//! precision. This sidesteps the roundoff amplification of order-`j`
//! spectral differentiation (which grows like `xi_max^j` and drowns 9th and
//! higher derivatives in double precision), so residual certificates for the
//! high-order hierarchy members use jets for the closed-form side.
//!
//! Elementary functions are propagated by the standard convolution
//! recurrences; Jacobi elliptic functions by their first-order ODE system.

use crate::elliptic::jacobi;

#[derive(Clone, Copy, Debug)]
pub struct Jet<const K: usize> {
    pub c: [f64; K],
}

/// Jet order for the 2-coefficient case used for analytic time derivatives.
pub type Jet2 = Jet<2>;

impl<const K: usize> Jet<K> {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; K];
        c[0] = v;
        Jet { c }
    }

    /// The evaluation variable itself: value `v`, unit first derivative.
    pub fn seed(v: f64) -> Self {
        let mut c = [0.0; K];
        c[0] = v;
        if K > 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The j-th derivative, `j! * c_j`.
    pub fn derivative(&self, j: usize) -> f64 {
        let mut fact = 1.0f64;
        for i in 2..=j {
            fact *= i as f64;
        }
        self.c[j] * fact
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(&o.c) {
            *a += b;
        }
        Jet { c }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(&o.c) {
            *a -= b;
        }
        Jet { c }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= s;
        }
        Jet { c }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut out = *self;
        out.c[0] += s;
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut c = [0.0; K];
        for i in 0..K {
            let a = self.c[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..K - i {
                c[i + j] += a * o.c[j];
            }
        }
        Jet { c }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Division; requires a nonzero leading coefficient in the divisor.
    pub fn div(&self, o: &Self) -> Self {
        let mut c = [0.0; K];
        let inv = 1.0 / o.c[0];
        for n in 0..K {
            let mut acc = self.c[n];
            for k in 1..=n {
                acc -= o.c[k] * c[n - k];
            }
            c[n] = acc * inv;
        }
        Jet { c }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0).div(self)
    }

    pub fn exp(&self) -> Self {
        let mut c = [0.0; K];
        c[0] = self.c[0].exp();
        for n in 1..K {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += k as f64 * self.c[k] * c[n - k];
            }
            c[n] = acc / n as f64;
        }
        Jet { c }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for n in 1..K {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for k in 1..=n {
                let g = k as f64 * self.c[k];
                sa += g * c[n - k];
                ca += g * s[n - k];
            }
            s[n] = sa / n as f64;
            c[n] = -ca / n as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        s[0] = self.c[0].sinh();
        c[0] = self.c[0].cosh();
        for n in 1..K {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for k in 1..=n {
                let g = k as f64 * self.c[k];
                sa += g * c[n - k];
                ca += g * s[n - k];
            }
            s[n] = sa / n as f64;
            c[n] = ca / n as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    /// Jacobi `(sn, cn, dn)` of this jet at parameter `m`, propagated through
    /// the system `sn' = cn dn u'`, `cn' = -sn dn u'`, `dn' = -m sn cn u'`.
    pub fn jacobi_sncndn(&self, m: f64) -> (Self, Self, Self) {
        let (s0, c0, d0, _) = jacobi(self.c[0], m);
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        let mut d = [0.0; K];
        s[0] = s0;
        c[0] = c0;
        d[0] = d0;
        for n in 1..K {
            // convolutions of the already-known coefficients up to n-1
            let mut acc_s = 0.0; // (cn*dn  conv  u')
            let mut acc_c = 0.0; // (sn*dn  conv  u')
            let mut acc_d = 0.0; // (sn*cn  conv  u')
            for k in 1..=n {
                let g = k as f64 * self.c[k];
                if g == 0.0 {
                    continue;
                }
                let j = n - k;
                let mut cd = 0.0;
                let mut sd = 0.0;
                let mut sc = 0.0;
                for i in 0..=j {
                    cd += c[i] * d[j - i];
                    sd += s[i] * d[j - i];
                    sc += s[i] * c[j - i];
                }
                acc_s += g * cd;
                acc_c += g * sd;
                acc_d += g * sc;
            }
            s[n] = acc_s / n as f64;
            c[n] = -acc_c / n as f64;
            d[n] = -m * acc_d / n as f64;
        }
        (Jet { c: s }, Jet { c }, Jet { c: d })
    }
}
