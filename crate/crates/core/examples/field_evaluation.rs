//! E and B from a potential by finite differences, checked against the
//! closed-form Jacobian where one exists.

use lightcone::minkowski::{FourVector, Vec3};
use lightcone::potential::{
    coulomb, evaluate_fields, plane_wave, superpose, FieldOptions, Waveform,
};

fn main() -> lightcone::Result<()> {
    let k = FourVector::new(1.0, 0.0, 0.0, 1.0);
    let wave = plane_wave(FourVector::new(0.0, 1.0, 0.0, 0.0), k, Waveform::Cos)?;

    println!("plane wave along z, t = 0");
    println!("{:>6} {:>12} {:>12} {:>12}", "z", "Ex", "By", "|E|-|B|");
    for i in 0..=8 {
        let z = i as f64 * 0.25 * std::f64::consts::PI;
        let x = FourVector::new(0.0, 0.0, 0.0, z);
        let fd = evaluate_fields(&wave, x, FieldOptions::default())?;
        let exact = evaluate_fields(&wave, x, FieldOptions::analytic())?;
        assert!((fd.e - exact.e).max_abs() < 1e-8);
        println!(
            "{z:6.3} {:12.8} {:12.8} {:12.2e}",
            fd.e.x + 0.0,
            fd.b.y + 0.0,
            fd.e.norm() - fd.b.norm()
        );
    }

    println!("\nCoulomb q = 1 plus the wave, at t = 0 on the x axis");
    let total = superpose(vec![wave, coulomb(1.0)?])?;
    for r in [1.0, 2.0, 4.0] {
        let s = evaluate_fields(
            &total,
            FourVector::from_parts(0.0, Vec3::new(r, 0.0, 0.0)),
            FieldOptions::default(),
        )?;
        println!(
            "r = {r}: E = ({:.6}, {:.6}, {:.6})",
            s.e.x,
            s.e.y + 0.0,
            s.e.z + 0.0
        );
    }

    match evaluate_fields(&coulomb(1.0)?, FourVector::ZERO, FieldOptions::default()) {
        Err(e) => println!("at the source: {e}"),
        Ok(s) => println!("unexpected: {:?}", s.e),
    }
    Ok(())
}
