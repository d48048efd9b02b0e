//! Tour of the channel model: path loss curves, shadowing, and the
//! normalized small-scale fading distributions.
//!
//! ```text
//! cargo run --example pathloss_and_fading
//! ```

use d2d_underlay::model::{pathloss_db, FadingSpec, CELLULAR_PATHLOSS, D2D_PATHLOSS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    println!("path loss [dB] vs distance:");
    println!("{:>10} {:>12} {:>12}", "d [m]", "cellular", "d2d");
    for d_m in [10.0, 50.0, 100.0, 250.0, 500.0, 1000.0] {
        let d_km = d_m / 1000.0;
        println!(
            "{:>10} {:>12.2} {:>12.2}",
            d_m,
            pathloss_db(&CELLULAR_PATHLOSS, d_km).unwrap(),
            pathloss_db(&D2D_PATHLOSS, d_km).unwrap()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 200_000;
    println!("\nsmall-scale power fading, {n} draws each (all unit mean):");
    println!("{:>22} {:>10} {:>10} {:>12}", "spec", "mean", "var", "P[x <= 1]");
    for spec in [
        FadingSpec::RAYLEIGH,
        FadingSpec::Nakagami { m: 2.0 },
        FadingSpec::Nakagami { m: 3.0 },
        FadingSpec::Ricean { k_factor: 10f64.powf(0.3) }, // 3 dB K-factor
    ] {
        let draws: Vec<f64> = (0..n).map(|_| spec.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
        let cdf1 = draws.iter().filter(|&&x| x <= 1.0).count() as f64 / n as f64;
        println!("{:>22} {:>10.4} {:>10.4} {:>12.4}", format!("{spec:?}"), mean, var, cdf1);
    }
    println!("\nRayleigh reference: mean 1, var 1, P[x <= 1] = 1 - 1/e = 0.6321");
}
