//! Minkowski products, causal classes and propagation vectors.

use lightcone::minkowski::{classify, make_propagation_vector, FourVector, Vec3};

fn main() -> lightcone::Result<()> {
    let tol = 1e-12;
    let samples = [
        ("timelike", FourVector::new(2.0, 1.0, 0.0, 0.0)),
        ("spacelike", FourVector::new(0.0, 1.0, 1.0, 0.0)),
        ("lightlike", FourVector::new(1.0, 0.0, 0.6, 0.8)),
    ];
    for (label, v) in samples {
        println!(
            "{label:>10}: {v}  v.v = {:+.3}  class {}",
            v.norm_sq(),
            classify(v, tol)
        );
    }

    // k = (omega/c)(1, n) is null for every unit direction n
    let n = Vec3::new(1.0, 2.0, 2.0).normalized().expect("non-zero");
    let k = make_propagation_vector(2.0, n, 1.0)?;
    println!(
        "k = {k}, k.k = {:.1e}, class {}",
        k.norm_sq(),
        classify(k, tol)
    );

    let x = FourVector::new(3.0, 0.5, -1.0, 0.25);
    println!(
        "phase k.x at {x} = {:.6}",
        lightcone::minkowski::phase(k, x)
    );

    match make_propagation_vector(1.0, Vec3::new(1.0, 1.0, 0.0), 1.0) {
        Err(e) => println!("non-unit direction rejected: {e}"),
        Ok(k) => println!("unexpected: {k}"),
    }
    Ok(())
}
