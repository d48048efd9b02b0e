//! The gamma-series density of summed unknown interference.
//!
//! Shows the single-series expansion for Y = Σ λ_z β_z agreeing with the
//! exponential-mixture closed form in the all-Rayleigh case, normalizing
//! to one, and handling repeated scales where the mixture is singular.
//!
//! ```text
//! cargo run --example gamma_sum_series
//! ```

use d2d_underlay::special::{integrate, QuadratureControl, SeriesControl};
use d2d_underlay::stats::{exp_mixture_pdf, gamma_sum_pdf, Interferer};

fn main() {
    let ctrl = SeriesControl::default();
    let scales = [0.6, 1.3, 2.4];
    let interferers: Vec<Interferer> =
        scales.iter().map(|&scale| Interferer { scale, shape: 1.0 }).collect();

    println!("three Rayleigh interferers, scales {scales:?}");
    println!("{:>6} {:>14} {:>14}", "y", "series", "mixture");
    for y in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let a = gamma_sum_pdf(&interferers, y, &ctrl).unwrap();
        let b = exp_mixture_pdf(&scales, y).unwrap();
        println!("{y:>6.1} {a:>14.9} {b:>14.9}");
    }

    let qc = QuadratureControl::default();
    let total =
        integrate(|y| gamma_sum_pdf(&interferers, y, &ctrl).unwrap(), 0.0, f64::INFINITY, &qc)
            .unwrap();
    println!("\nnormalization: ∫ pdf dy = {total:.12}");

    // repeated scales: the mixture degenerates, the series does not
    let repeated = [Interferer { scale: 1.0, shape: 1.0 }, Interferer { scale: 1.0, shape: 1.0 }];
    println!("\nrepeated scale 1.0 twice (an Erlang-2 sum):");
    match exp_mixture_pdf(&[1.0, 1.0], 1.0) {
        Err(e) => println!("  mixture: {e}"),
        Ok(v) => println!("  mixture unexpectedly returned {v}"),
    }
    let series = gamma_sum_pdf(&repeated, 1.0, &ctrl).unwrap();
    println!("  series : pdf(1) = {series:.9}   (Erlang: y e^(-y) = {:.9})", (1.0f64) * (-1.0f64).exp());

    // Nakagami shapes change the gamma parameters per interferer
    let nakagami = [Interferer { scale: 2.0, shape: 2.0 }, Interferer { scale: 0.7, shape: 3.0 }];
    let total =
        integrate(|y| gamma_sum_pdf(&nakagami, y, &ctrl).unwrap(), 0.0, f64::INFINITY, &qc)
            .unwrap();
    println!("\nNakagami(2) + Nakagami(3): ∫ pdf dy = {total:.12}");
}
