//! Matrix exponential: scaling and squaring with a degree-13 Padé approximant
//! (Higham 2005 parameters).

use super::lu::solve;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

pub fn expm<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("exponential of a non-square matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let norm = a.norm_one().f64();
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale_real(T::lit(2f64.powi(-squarings)));

    let b = |k: usize| T::lit(PADE13[k]);
    let id = ComplexMatrix::<T>::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &(&a6.scale_real(b(13)) + &a4.scale_real(b(11))) + &a2.scale_real(b(9));
    let u_tail = &(&(&a6.scale_real(b(7)) + &a4.scale_real(b(5))) + &a2.scale_real(b(3))) + &id.scale_real(b(1));
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scale_real(b(12)) + &a4.scale_real(b(10))) + &a2.scale_real(b(8));
    let v_tail = &(&(&a6.scale_real(b(6)) + &a4.scale_real(b(4))) + &a2.scale_real(b(2))) + &id.scale_real(b(0));
    let v = &(&a6 * &v_inner) + &v_tail;

    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}
