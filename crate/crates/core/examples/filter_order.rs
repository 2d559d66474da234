//! How fast |y_n(x)|^2 vanishes at small x for Uhrig and CPMG sequences.

use ddsim::{filter_bessel_approx, PulseSequence};

fn slope(seq: &PulseSequence) -> f64 {
    let (a, b) = (1e-3, 1e-2);
    (seq.filter(b).magnitude_sq() / seq.filter(a).magnitude_sq()).log10()
}

fn main() {
    println!("{:>3} {:>10} {:>10}", "n", "udd", "cpmg");
    for n in 1..=9 {
        let udd = PulseSequence::udd(n);
        let cpmg = PulseSequence::cpmg(n).unwrap();
        println!("{n:>3} {:>10.3} {:>10.3}", slope(&udd), slope(&cpmg));
    }

    println!("\nUDD n=6: exact filter vs 16(n+1)^2 J_(n+1)(x/2)^2");
    let udd = PulseSequence::udd(6);
    for x in [0.5, 2.0, 4.0, 8.0, 12.0] {
        let exact = udd.filter(x).magnitude_sq();
        let approx = filter_bessel_approx(6, x);
        println!(
            "x={x:>5}: {exact:.6e} {approx:.6e} ({:+.2}%)",
            100.0 * (approx / exact - 1.0)
        );
    }
}
