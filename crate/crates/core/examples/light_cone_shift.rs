//! Gauge functions of the phase alone keep the potential a function of the
//! phase and leave A.A unchanged. Λ that depends on the event directly does not.

use lightcone::gauge::{
    apply_gauge, light_cone_gauge, wave_equation_residual, GaugeFunction, PhaseProfile,
};
use lightcone::minkowski::FourVector;
use lightcone::potential::{plane_wave, Waveform};
use lightcone::validator::{check_phase_only_dependence, check_quadratic_invariant, SampleSpec};

fn main() -> lightcone::Result<()> {
    let k = FourVector::new(1.0, 0.0, 0.0, 1.0);
    let wave = plane_wave(FourVector::new(0.0, 1.0, 0.0, 0.0), k, Waveform::Sin)?;
    let spec = SampleSpec::new(200, 3);

    let shifts = [
        (
            "0.1 cos(phi)",
            light_cone_gauge(PhaseProfile::Cos { amplitude: 0.1 }, k)?,
        ),
        (
            "phi^2 / 2",
            light_cone_gauge(PhaseProfile::custom("phi", |p| p), k)?,
        ),
        (
            "x.x (not a light-cone gauge)",
            GaugeFunction::custom("x.x", |x| x.norm_sq()),
        ),
    ];
    println!(
        "{:<30} {:>12} {:>12} {:>12}",
        "Lambda", "box Lambda", "phase-only", "A.A change"
    );
    for (label, g) in shifts {
        let shifted = apply_gauge(&wave, &g);
        let x = FourVector::new(0.3, -0.7, 1.1, 0.2);
        let box_lambda = wave_equation_residual(&g, x, 1e-3);
        let phase = check_phase_only_dependence(&shifted, k, &spec, 1e-6);
        let quad = check_quadratic_invariant(&wave, &shifted, &spec, 1e-9);
        println!(
            "{label:<30} {box_lambda:>12.3e} {:>12} {:>12.3e}",
            phase.status.to_string(),
            quad.residual
        );
    }
    Ok(())
}
