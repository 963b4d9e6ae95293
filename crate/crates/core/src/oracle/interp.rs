use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Lagrange interpolation through `(q, count)` points. Fails unless the
/// interpolant has integer coefficients.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Result<IntPolynomial> {
    if points.len() < 2 {
        return Err(Error::Interpolation("need at least two points".into()));
    }
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::Interpolation(format!("duplicate abscissa {x}")));
        }
    }
    let n = points.len();
    let mut total = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis numerator prod_{j != i} (q - xj), ascending coefficients
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(xj.clone());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(xi.clone()) - xj;
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (k, c) in basis.into_iter().enumerate() {
            total[k] += c * &scale;
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    for c in total {
        if !c.is_integer() {
            return Err(Error::Interpolation(format!("non-integer coefficient {c}")));
        }
        coeffs.push(c.to_integer());
    }
    Ok(IntPolynomial::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(x, y)| (x.into(), y.into())).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(
            interpolate(&pts(&[(2, 2), (3, 6), (4, 12)])).unwrap(),
            IntPolynomial::from_i64s(&[0, -1, 1])
        );
        assert_eq!(interpolate(&pts(&[(1, 1), (2, 1)])).unwrap(), IntPolynomial::one());
        let err = interpolate(&pts(&[(2, 1), (4, 2)])).unwrap_err();
        assert!(err.to_string().contains("1/2"), "{err}");
        assert!(interpolate(&pts(&[(2, 1), (2, 1)])).is_err());
    }
}
