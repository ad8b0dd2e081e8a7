//! Real-root counting with Sturm sequences.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{gcd_z, primitive_part, IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmReport {
    #[serde(with = "crate::dec")]
    pub poly: IntPoly,
    pub real_root_count: usize,
    pub sequence_length: usize,
}

/// Sturm chain `p, p', -rem(p, p'), ...`, each member made primitive.
///
/// Pseudo-remainders are sign-corrected so every member has the sign of the
/// true Euclidean remainder.
pub fn sturm_sequence(p: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![p.clone()];
    let mut b = p.derivative();
    if b.is_zero() {
        return seq;
    }
    let mut a = p.clone();
    loop {
        seq.push(b.clone());
        let delta = a.deg() - b.deg();
        let mut r = a.pseudo_rem(&b);
        if r.is_zero() {
            return seq;
        }
        let flip = b.lc().is_negative() && (delta + 1) % 2 == 1;
        if !flip {
            r = -&r;
        }
        a = b;
        b = primitive_part(&r);
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of a squarefree integer polynomial.
pub fn sturm_real_roots(p: &IntPoly) -> Result<SturmReport, PolyError> {
    let d = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d > 0 && gcd_z(p, &p.derivative()).deg() > 0 {
        return Err(PolyError::NotSquarefree);
    }
    let seq = sturm_sequence(p);
    let at_neg = variations(seq.iter().map(IntPoly::sign_at_neg_inf));
    let at_pos = variations(seq.iter().map(IntPoly::sign_at_pos_inf));
    Ok(SturmReport { poly: p.clone(), real_root_count: at_neg - at_pos, sequence_length: seq.len() })
}
