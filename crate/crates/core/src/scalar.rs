use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the library is generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + rustfft::FftNum
    + 'static
{
    /// Converts an `f64` literal; every literal used here is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts")
    }

    #[inline]
    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 converts")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

pub type Cx<T> = Complex<T>;

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

/// Imaginary unit.
#[inline]
pub fn ci<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

#[inline]
pub fn creal<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Reduces an angle to [0, 2π).
pub fn wrap_two_pi<T: Real>(phi: T) -> T {
    let tau = T::TAU();
    let mut r = phi % tau;
    if r < T::zero() {
        r += tau;
    }
    if r >= tau {
        r -= tau;
    }
    r
}

/// Reduces an angle to (−π, π].
pub fn wrap_pi<T: Real>(phi: T) -> T {
    let r = wrap_two_pi(phi);
    if r > T::PI() {
        r - T::TAU()
    } else {
        r
    }
}

/// Kahan-compensated sum over an index-ordered sequence.
pub fn ordered_sum<T: Real, I: IntoIterator<Item = T>>(items: I) -> T {
    let mut s = T::zero();
    let mut c = T::zero();
    for x in items {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

pub fn ordered_sum_cx<T: Real, I: IntoIterator<Item = Cx<T>>>(items: I) -> Cx<T> {
    let (re, im): (Vec<T>, Vec<T>) = items.into_iter().map(|z| (z.re, z.im)).unzip();
    cx(ordered_sum(re), ordered_sum(im))
}
