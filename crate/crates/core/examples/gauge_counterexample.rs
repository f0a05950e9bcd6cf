//! A gauge shift that reproduces the fields of a plane wave exactly but
//! leaves a potential that depends on more than the phase and is null.

use lightcone::gauge::{apply_gauge, lambda_from_potential};
use lightcone::minkowski::FourVector;
use lightcone::potential::{nonphysical_gauge, plane_wave, Waveform};
use lightcone::validator::{
    check_field_equivalence, validate, SampleSpec, ValidationContext, ValidatorConfig,
};

fn main() -> lightcone::Result<()> {
    let k = FourVector::new(1.0, 0.0, 0.0, 1.0);
    let wave = plane_wave(FourVector::new(0.0, 1.0, 0.0, 0.0), k, Waveform::Cos)?;

    // the same potential two ways: closed form, and the generic gauge machinery
    let direct = nonphysical_gauge(&wave)?;
    let shifted = apply_gauge(&wave, &lambda_from_potential(&wave)?);

    let x = FourVector::new(0.4, 2.0, -1.0, 1.3);
    println!("A(x)       = {}", wave.evaluate(x)?);
    println!("A~(x)      = {}", direct.evaluate(x)?);
    println!("A + dLam   = {}", shifted.evaluate(x)?);
    println!(
        "A.A = {:+.6}, A~.A~ = {:+.2e}",
        wave.evaluate(x)?.norm_sq(),
        direct.evaluate(x)?.norm_sq()
    );

    let cfg = ValidatorConfig::default();
    let eq = check_field_equivalence(
        &wave,
        &direct,
        &SampleSpec::new(100, 1),
        cfg.field_options,
        1e-5,
    );
    println!(
        "\nfields agree: [{}] residual {:.2e}",
        eq.status, eq.residual
    );

    for (label, field) in [("radiation gauge", &wave), ("shifted", &direct)] {
        let report = validate(field, &ValidationContext::Standalone, &cfg);
        println!("\n== {label}\n{}", report.to_text());
    }
    Ok(())
}
