//! Forward-mode dual numbers in two chart variables `(u, v)`.
//!
//! [`Dual`] carries a value and both first partials over any numeric scalar
//! (real or complex). [`Jet2`] is its real second-order counterpart, used to
//! get `r_u, r_v, r_uu, r_uv, r_vv` of a chart map in one evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Num;

/// `val + du·εu + dv·εv` with `εu² = εv² = εuεv = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual<T> {
    pub val: T,
    pub du: T,
    pub dv: T,
}

impl<T: Copy + Num> Dual<T> {
    pub fn new(val: T, du: T, dv: T) -> Self {
        Self { val, du, dv }
    }

    pub fn constant(val: T) -> Self {
        Self::new(val, T::zero(), T::zero())
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.val * k, self.du * k, self.dv * k)
    }

    /// `du ∧ dv` coefficient of `df ∧ dg`: `f_u g_v - f_v g_u`.
    pub fn wedge(self, other: Self) -> T {
        self.du * other.dv - self.dv * other.du
    }
}

impl Dual<f64> {
    pub fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        let k = 0.5 / s;
        Self::new(s, self.du * k, self.dv * k)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        Self::new(s, self.du * c, self.dv * c)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        Self::new(c, -self.du * s, -self.dv * s)
    }
}

impl<T: Copy + Num> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.val + rhs.val, self.du + rhs.du, self.dv + rhs.dv)
    }
}

impl<T: Copy + Num> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.val - rhs.val, self.du - rhs.du, self.dv - rhs.dv)
    }
}

impl<T: Copy + Num> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.val * rhs.val,
            self.du * rhs.val + self.val * rhs.du,
            self.dv * rhs.val + self.val * rhs.dv,
        )
    }
}

impl<T: Copy + Num> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = T::one() / rhs.val;
        let q = self.val * inv;
        Self::new(q, (self.du - q * rhs.du) * inv, (self.dv - q * rhs.dv) * inv)
    }
}

impl<T: Copy + Num + Neg<Output = T>> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.val, -self.du, -self.dv)
    }
}

/// Second-order Taylor data `(f, f_u, f_v, f_uu, f_uv, f_vv)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet2 {
    pub val: f64,
    pub u: f64,
    pub v: f64,
    pub uu: f64,
    pub uv: f64,
    pub vv: f64,
}

impl Jet2 {
    pub fn constant(val: f64) -> Self {
        Self { val, ..Default::default() }
    }

    pub fn var_u(u: f64) -> Self {
        Self { val: u, u: 1.0, ..Default::default() }
    }

    pub fn var_v(v: f64) -> Self {
        Self { val: v, v: 1.0, ..Default::default() }
    }

    /// Applies a scalar function given its value and first two derivatives.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            val: f0,
            u: f1 * self.u,
            v: f1 * self.v,
            uu: f1 * self.uu + f2 * self.u * self.u,
            uv: f1 * self.uv + f2 * self.u * self.v,
            vv: f1 * self.vv + f2 * self.v * self.v,
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.val))
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            val: self.val * k,
            u: self.u * k,
            v: self.v * k,
            uu: self.uu * k,
            uv: self.uv * k,
            vv: self.vv * k,
        }
    }

    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Jet2::constant(1.0), |acc, _| acc * self)
    }

    /// First-order dual of `∂u f`.
    pub fn d_u(self) -> Dual<f64> {
        Dual::new(self.u, self.uu, self.uv)
    }

    /// First-order dual of `∂v f`.
    pub fn d_v(self) -> Dual<f64> {
        Dual::new(self.v, self.uv, self.vv)
    }

    pub fn first_order(self) -> Dual<f64> {
        Dual::new(self.val, self.u, self.v)
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self {
            val: self.val + r.val,
            u: self.u + r.u,
            v: self.v + r.v,
            uu: self.uu + r.uu,
            uv: self.uv + r.uv,
            vv: self.vv + r.vv,
        }
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        self + r.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self {
            val: self.val * r.val,
            u: self.u * r.val + self.val * r.u,
            v: self.v * r.val + self.val * r.v,
            uu: self.uu * r.val + 2.0 * self.u * r.u + self.val * r.uu,
            uv: self.uv * r.val + self.u * r.v + self.v * r.u + self.val * r.uv,
            vv: self.vv * r.val + 2.0 * self.v * r.v + self.val * r.vv,
        }
    }
}

impl Add<f64> for Jet2 {
    type Output = Self;
    fn add(self, r: f64) -> Self {
        Self { val: self.val + r, ..self }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, r: f64) -> Self {
        self.scale(r)
    }
}

pub fn cross(a: [Dual<f64>; 3], b: [Dual<f64>; 3]) -> [Dual<f64>; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
