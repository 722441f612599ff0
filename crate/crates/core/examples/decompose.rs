//! Splitting a spectral polynomial into totally ramified branches and
//! choosing the element v_m that cuts out a colength-m submodule.

use spectral_higgs::ramification::{choose_vm, decompose};
use spectral_higgs::spectral::SpectralPolynomial;
use spectral_higgs::{LaurentSeries, EXACT};

fn main() {
    let z = |c: &[i64]| LaurentSeries::from_ints(0, c, EXACT);
    // (T − 1)(T² − z − z²) = T³ − T² − (z + z²)T + z + z²
    let p = SpectralPolynomial::from_monic(vec![z(&[0, 1, 1]), z(&[0, -1, -1]), z(&[-1])]).unwrap();
    let dec = decompose(&p).unwrap();
    println!("partition {:?}", dec.partition());
    for c in &dec.components {
        println!("branch n = {} over T = {}", c.n, c.shift);
        println!("  z(T) = {}", c.z_of_t);
        println!("  u    = {}", c.u);
    }

    for m in [-2, 0, 1, 3] {
        let v = choose_vm(m, &dec).unwrap();
        println!(
            "m = {m:>2}: exponents {:?}, dim V⁺/vV⁺ = {}, closed formula {:?}",
            v.exponents,
            v.dimension,
            v.formula_exponents
        );
    }
}
