//! Sine and cosine evaluated together, for the activation hot loops.
//!
//! Arguments are reduced modulo `pi/2` with a three-part constant and the
//! quadrant kernels are the classic minimax polynomials on `[-pi/4, pi/4]`.
//! Results agree with the platform `sin`/`cos` to a few ulp for
//! `|x| < 2^20`; larger or non-finite arguments fall back to the standard
//! library.

#![allow(clippy::excessive_precision)]

const PIO2_1: f64 = 1.570_796_326_734_125_614_17e0;
const PIO2_2: f64 = 6.077_100_506_303_965_976_60e-11;
const PIO2_3: f64 = 2.022_266_248_711_166_455_80e-21;
const INV_PIO2: f64 = std::f64::consts::FRAC_2_PI;

const S1: f64 = -1.666_666_666_666_663_243_48e-1;
const S2: f64 = 8.333_333_333_322_489_461_24e-3;
const S3: f64 = -1.984_126_982_985_794_931_34e-4;
const S4: f64 = 2.755_731_370_707_006_767_89e-6;
const S5: f64 = -2.505_076_025_340_686_341_95e-8;
const S6: f64 = 1.589_690_995_211_550_102_21e-10;

const C1: f64 = 4.166_666_666_666_660_190_37e-2;
const C2: f64 = -1.388_888_888_887_410_957_49e-3;
const C3: f64 = 2.480_158_728_947_672_941_78e-5;
const C4: f64 = -2.755_731_435_139_066_330_35e-7;
const C5: f64 = 2.087_572_321_298_174_827_90e-9;
const C6: f64 = -1.135_964_755_778_819_482_65e-11;

const LIMIT: f64 = 1_048_576.0;

/// `1.5 * 2^52`: adding and subtracting it rounds to the nearest integer.
const ROUND: f64 = 6_755_399_441_055_744.0;

#[inline(always)]
fn kernel(r: f64) -> (f64, f64) {
    let z = r * r;
    let sp = S2 + z * (S3 + z * (S4 + z * (S5 + z * S6)));
    let s = r + z * r * (S1 + z * sp);
    let cp = z * (C1 + z * (C2 + z * (C3 + z * (C4 + z * (C5 + z * C6)))));
    let hz = 0.5 * z;
    let w = 1.0 - hz;
    let c = w + (((1.0 - w) - hz) + z * cp);
    (s, c)
}

/// `(sin x, cos x)`.
#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    if !(x.abs() < LIMIT) {
        return x.sin_cos();
    }
    reduced_sin_cos(x)
}

/// Branch-free body of [`sin_cos`] for `|x| < LIMIT`.
#[inline(always)]
fn reduced_sin_cos(x: f64) -> (f64, f64) {
    let t = x * INV_PIO2 + ROUND;
    let q = t.to_bits();
    let k = t - ROUND;
    let r = ((x - k * PIO2_1) - k * PIO2_2) - k * PIO2_3;
    let (s, c) = kernel(r);
    // Quadrant q: odd quadrants swap sine and cosine, quadrants 2 and 3
    // negate sine, quadrants 1 and 2 negate cosine.
    let swap = 0u64.wrapping_sub(q & 1);
    let (sb, cb) = (s.to_bits(), c.to_bits());
    let so = (sb & !swap) | (cb & swap);
    let co = (cb & !swap) | (sb & swap);
    let sign_s = (q & 2) << 62;
    let sign_c = ((q + 1) & 2) << 62;
    (f64::from_bits(so ^ sign_s), f64::from_bits(co ^ sign_c))
}

/// `sin x`.
#[inline]
pub fn sin(x: f64) -> f64 {
    sin_cos(x).0
}

#[inline(always)]
fn sin_loop(xs: &mut [f64]) {
    for x in xs.iter_mut() {
        *x = reduced_sin_cos(*x).0;
    }
}

#[inline(always)]
fn sin_cos_loop(xs: &[f64], s: &mut [f64], c: &mut [f64]) {
    for ((x, so), co) in xs.iter().zip(s.iter_mut()).zip(c.iter_mut()) {
        (*so, *co) = reduced_sin_cos(*x);
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn sin_loop_avx2(xs: &mut [f64]) {
    sin_loop(xs)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn sin_cos_loop_avx2(xs: &[f64], s: &mut [f64], c: &mut [f64]) {
    sin_cos_loop(xs, s, c)
}

fn has_avx2() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::is_x86_feature_detected!("avx2")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Replaces every entry by its sine.
pub fn sin_in_place(xs: &mut [f64]) {
    if !xs.iter().all(|x| x.abs() < LIMIT) {
        xs.iter_mut().for_each(|x| *x = sin(*x));
        return;
    }
    #[cfg(target_arch = "x86_64")]
    if has_avx2() {
        // SAFETY: the CPU supports AVX2.
        unsafe { sin_loop_avx2(xs) };
        return;
    }
    sin_loop(xs);
}

/// Writes `sin x` into `s` and `cos x` into `c`.
pub fn sin_cos_slices(xs: &[f64], s: &mut [f64], c: &mut [f64]) {
    assert!(s.len() == xs.len() && c.len() == xs.len(), "slice lengths differ");
    if !xs.iter().all(|x| x.abs() < LIMIT) {
        for ((x, so), co) in xs.iter().zip(s.iter_mut()).zip(c.iter_mut()) {
            (*so, *co) = sin_cos(*x);
        }
        return;
    }
    #[cfg(target_arch = "x86_64")]
    if has_avx2() {
        // SAFETY: the CPU supports AVX2.
        unsafe { sin_cos_loop_avx2(xs, s, c) };
        return;
    }
    sin_cos_loop(xs, s, c);
}
