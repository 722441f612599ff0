//! A point of the Grassmannian inside V_p for p = T² − z, seen through
//! an exponent window: basis, index and orthogonal complement.

use spectral_higgs::grassmann::{CoordinateAlgebra, GrassmannPoint};
use spectral_higgs::spectral::{AlgebraElement, SpectralPolynomial};
use spectral_higgs::{LaurentSeries, EXACT};

fn main() {
    let p = SpectralPolynomial::from_monic(vec![LaurentSeries::from_ints(0, &[0, -1], EXACT), LaurentSeries::zero(EXACT)])
        .unwrap();
    // W = A·1 + A·z⁻¹T with A = k[z⁻¹]
    let gens = [
        AlgebraElement::one(2),
        AlgebraElement::basis(1, 2).scale(&LaurentSeries::z_pow(-1)),
    ];
    let w = GrassmannPoint::in_spectral(&p, CoordinateAlgebra::affine_line(), &gens, (-4, 4)).unwrap();
    println!("window {:?}, {} basis vectors", w.window(), w.dim());
    println!("{:?}", w.index());
    for (v, (e, i)) in w.basis().iter().zip(w.pivots()).take(4) {
        println!("  pivot z^{e}·T^{i}: ({}, {})", v[0], v[1]);
    }

    let perp = w.orthogonal_complement().unwrap();
    println!("complement: window {:?}, {:?}", perp.window(), perp.index());
    let back = perp.orthogonal_complement().unwrap();
    println!("double complement recovers W: {}", back.same_window_basis(&w));
}
