// Amplifying a non-uniform preparation, and the repetition gap versus
// classical restarts.

use num_complex::Complex64;
use qsearch::amplify::{
    amplified_success, amplitude_amplify, classical_repetitions, predicted_repetitions,
    AmplifyParams, StatePreparation,
};
use qsearch::{SeededRng, StateVector};

pub fn run_example() -> qsearch::Result<()> {
    // A skewed distribution where the good index 0 carries weight 0.01.
    let dim = 64;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(0.1, 0.0);
    let rest = ((1.0 - 0.01) / (dim - 1) as f64).sqrt();
    amps[1..].iter_mut().for_each(|a| *a = Complex64::new(rest, 0.0));
    let target = StateVector::from_amplitudes(amps)?;
    let prep = StatePreparation::householder(&target, 1)?;

    let mut rng = SeededRng::new(3, 0);
    let params = AmplifyParams::new(0.01, |i| i == 0)?;
    let out = amplitude_amplify(&prep, &params, &mut rng)?;
    println!(
        "good index {} after {} rounds, {} queries; predicted success {:.4}",
        out.index,
        out.rounds,
        out.queries,
        amplified_success(0.01, out.rounds)
    );

    for eps in [0.25, 0.01, 1e-4] {
        println!(
            "eps={eps:<7} amplified rounds {:>3}, classical repetitions {:>6}",
            predicted_repetitions(eps)?,
            classical_repetitions(eps)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
