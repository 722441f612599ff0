//! Power traces, the trace Gram matrix and the trace-residue pairing on
//! k((z))[T]/(T³ − zT − z).

use spectral_higgs::spectral::{AlgebraElement, SpectralPolynomial};
use spectral_higgs::{LaurentSeries, EXACT};

fn main() {
    let z = |c: &[i64]| LaurentSeries::from_ints(0, c, EXACT);
    // monic coefficients, low degree first: T³ + 0·T² − z·T − z
    let p = SpectralPolynomial::from_monic(vec![z(&[0, -1]), z(&[0, -1]), z(&[0])]).unwrap();

    for k in -1..=5 {
        println!("Tr(T^{k}) = {}", p.power_trace(k).unwrap());
    }
    println!("discriminant = {}", p.discriminant());

    let gram = p.trace_gram();
    for row in gram.to_rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        println!("G: [{}]", cells.join(", "));
    }

    // (z⁻²·T², 1) pairs to Res Tr(z⁻²T²), the z coefficient of Tr(T²)
    let x = AlgebraElement::basis(2, 3).scale(&LaurentSeries::z_pow(-2));
    let one = AlgebraElement::one(3);
    println!("<z⁻²T², 1> = {}", p.trace_pairing(&x, &one).unwrap());
}
