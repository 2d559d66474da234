//! Globally adaptive Gauss-Kronrod (10/21-point) quadrature.
//!
//! All nodes lie strictly inside each subinterval, so integrands are never
//! evaluated at the interval endpoints. The interval with the largest error
//! estimate is bisected until the summed error satisfies
//! `err <= max(abs_tol, rel_tol * |I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision cap for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSettings {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let s = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                reason: "must be positive",
            });
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                reason: "must be positive",
            });
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

/// Converged integral with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Max-heap on error; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let width = half.abs();
    let value = res_k * half;
    let raw_err = ((res_k - res_g) * half).abs();
    res_abs *= width;
    res_asc *= width;

    let mut error = raw_err;
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !error.is_finite() {
        error = f64::INFINITY;
    }

    Segment { a, b, value, error }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    integrate_with_breakpoints(f, &[a, b], settings)
}

/// Integrate `f` over `[points[0], points[last]]` with forced subdivision at
/// every interior point. `points` must be strictly increasing.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    settings.validate()?;
    assert!(points.len() >= 2, "need at least two integration limits");
    assert!(
        points.windows(2).all(|w| w[0] < w[1]),
        "breakpoints must be strictly increasing"
    );

    let mut heap = BinaryHeap::with_capacity(settings.max_subdivisions + points.len());
    let mut frozen: Vec<Segment> = Vec::new();
    for w in points.windows(2) {
        heap.push(gauss_kronrod_21(&f, w[0], w[1]));
    }

    let (mut value, mut error) = totals(heap.iter());
    let mut subdivisions = 0;
    loop {
        if !value.is_finite() {
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: f64::INFINITY,
                subdivisions,
            });
        }
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target {
            // Running sums drift; confirm against an exact re-summation.
            (value, error) = totals(heap.iter().chain(frozen.iter()));
            let target = settings.abs_tol.max(settings.rel_tol * value.abs());
            if error <= target {
                return Ok(Estimate {
                    value,
                    error_bound: error,
                    subdivisions,
                });
            }
        }
        if subdivisions >= settings.max_subdivisions {
            (value, error) = totals(heap.iter().chain(frozen.iter()));
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        }
        let Some(worst) = heap.pop() else {
            // Every remaining segment is too narrow to split further.
            (value, error) = totals(frozen.iter());
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b)
            || (worst.b - worst.a) <= 100.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            frozen.push(worst);
            continue;
        }
        let left = gauss_kronrod_21(&f, worst.a, mid);
        let right = gauss_kronrod_21(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

/// Sum in left-endpoint order so the result is independent of heap layout.
fn totals<'a>(segments: impl Iterator<Item = &'a Segment>) -> (f64, f64) {
    let mut segs: Vec<&Segment> = segments.collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    segs.iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}
