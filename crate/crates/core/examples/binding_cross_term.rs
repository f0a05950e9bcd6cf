//! The cross term V·A0 between a Coulomb binding and a wave potential.
//!
//! Zero in radiation gauge. A light-cone shift gives A0 ≠ 0 and the product
//! then grows like 1/r towards the nucleus, with a prefactor set by the wave.

use lightcone::gauge::{apply_gauge, light_cone_gauge, PhaseProfile};
use lightcone::minkowski::FourVector;
use lightcone::potential::{coulomb, plane_wave, PotentialField, Waveform};
use lightcone::validator::{cross_term_analysis, validate, ValidationContext, ValidatorConfig};

fn shifted(a0: f64) -> lightcone::Result<PotentialField> {
    let k = FourVector::new(1.0, 0.0, 0.0, 1.0);
    let wave = plane_wave(FourVector::new(0.0, a0, 0.0, 0.0), k, Waveform::Cos)?;
    Ok(apply_gauge(
        &wave,
        &light_cone_gauge(
            PhaseProfile::Cos {
                amplitude: 0.1 * a0,
            },
            k,
        )?,
    ))
}

fn main() -> lightcone::Result<()> {
    let k = FourVector::new(1.0, 0.0, 0.0, 1.0);
    let nucleus = coulomb(1.0)?;
    let radii = [1.0, 0.1, 0.01, 0.001];
    let scan = |f: &PotentialField| cross_term_analysis(f, &nucleus, &radii, 64, 11, 10.0, -0.9);

    let radiation = plane_wave(FourVector::new(0.0, 1.0, 0.0, 0.0), k, Waveform::Cos)?;
    println!("radiation gauge:  {:?}", scan(&radiation)?.values);
    for a0 in [1.0, 2.0] {
        let s = scan(&shifted(a0)?)?;
        println!(
            "light-cone, A0={a0}: {:?}\n  slope {:.4}, prefactor {:.4e}",
            s.values,
            s.slope.unwrap_or(f64::NAN),
            s.prefactor.unwrap_or(f64::NAN)
        );
    }

    let report = validate(
        &shifted(1.0)?,
        &ValidationContext::TransverseWithBinding(nucleus),
        &ValidatorConfig::default(),
    );
    println!(
        "\nverdict with binding: {} (failing: {})",
        report.verdict,
        report.failing().join(", ")
    );
    Ok(())
}
