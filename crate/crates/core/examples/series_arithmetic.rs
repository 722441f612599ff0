//! Truncated Laurent series over Q: precision travels with every result.

use spectral_higgs::{LaurentSeries, EXACT};

fn main() {
    // 1 + z + z² known to z⁶, and the exact series z⁻¹ − 2
    let a = LaurentSeries::from_ints(0, &[1, 1, 1], 6);
    let b = LaurentSeries::from_ints(-1, &[1, -2], EXACT);

    println!("a        = {a}");
    println!("b        = {b}");
    println!("a·b      = {}", &a * &b);
    println!("1/a      = {}", a.invert().unwrap());
    println!("a(z²)    = {}", a.compose(&LaurentSeries::z_pow(2)).unwrap());
    println!("d/dz a   = {}", a.derivative());
    println!("Res(a·b) = {}", (&a * &b).residue().unwrap());
}
