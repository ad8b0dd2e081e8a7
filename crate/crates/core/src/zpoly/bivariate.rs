//! Polynomials in `x` over `Z[t]`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{monomial_text, push_term, IntPoly, Poly, PolyError};

/// `f(t, x)` stored as `sum_k a_k(t) x^k`.
pub type BiPoly = Poly<IntPoly>;

impl BiPoly {
    /// Lifts a polynomial in `x` with constant coefficients.
    pub fn from_x_poly(p: &IntPoly) -> Self {
        p.map(|c| IntPoly::constant(c.clone()))
    }

    /// Degree in `t` (max over coefficients).
    pub fn degree_t(&self) -> usize {
        self.coeffs().iter().map(IntPoly::deg).max().unwrap_or(0)
    }

    /// Exchanges the roles of `x` and `t`.
    pub fn swap_vars(&self) -> BiPoly {
        let dt = self.degree_t();
        let rows: Vec<IntPoly> =
            (0..=dt).map(|j| IntPoly::new(self.coeffs().iter().map(|a| a.coeff(j)).collect())).collect();
        BiPoly::new(rows)
    }

    /// `d/dt`, coefficientwise.
    pub fn derivative_t(&self) -> BiPoly {
        BiPoly::new(self.coeffs().iter().map(IntPoly::derivative).collect())
    }

    /// Substitutes `t -> inner(t)` in every coefficient.
    pub fn substitute_t(&self, inner: &IntPoly) -> BiPoly {
        BiPoly::new(self.coeffs().iter().map(|a| a.compose(inner)).collect())
    }

    /// Formats with the given `x` and parameter names, in the grammar the
    /// parser accepts.
    pub fn display_with(&self, xvar: &str, tvar: &str) -> String {
        let mut out = String::new();
        for (k, a) in self.coeffs().iter().enumerate().rev() {
            let xm = monomial_text(xvar, k);
            let terms: Vec<(usize, &BigInt)> = a.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            match terms.as_slice() {
                [] => {}
                [(j, c)] => {
                    let tm = monomial_text(tvar, *j);
                    let m = match (tm.is_empty(), xm.is_empty()) {
                        (true, _) => xm.clone(),
                        (false, true) => tm,
                        (false, false) => format!("{tm}*{xm}"),
                    };
                    push_term(&mut out, c, &m);
                }
                _ => {
                    if !out.is_empty() {
                        out.push_str(" + ");
                    }
                    out.push_str(&format!("({})", a.display_with(tvar)));
                    if !xm.is_empty() {
                        out.push('*');
                        out.push_str(&xm);
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl std::fmt::Display for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display_with("x", "t"))
    }
}

/// `f(c, x)`.
pub fn specialize(f: &BiPoly, c: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|a| a.eval(c)).collect())
}

/// The monic `g(t, y)` with `n^(n-2) f'(t, x) = g(t, n x)`, `n = deg_x f`.
///
/// Coefficientwise, `g_j = (j + 1) a_(j+1) n^(n-2-j)` for `j <= n - 2` and
/// `g_(n-1) = a_n = 1`.
pub fn normalized_derivative(f: &BiPoly) -> Result<BiPoly, PolyError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if n < 2 {
        return Err(PolyError::DegreeTooLow(Some(n)));
    }
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let nb = BigInt::from(n);
    let mut coeffs = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let scale = BigInt::from(j + 1) * num_traits::pow(nb.clone(), n - 2 - j);
        coeffs.push(f.coeffs()[j + 1].scale(&scale));
    }
    coeffs.push(IntPoly::one());
    Ok(BiPoly::new(coeffs))
}
