//! Built-in parametric families.

use num_bigint::BigInt;
use serde::Serialize;

use crate::zpoly::{parse_multivariate, BiPoly, ParseError};

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: &'static str,
    /// Source text, parsed at load.
    pub source: &'static str,
    /// Variables fixed before use, e.g. `u = 0`.
    pub fixed: &'static [(char, i64)],
    pub main_var: char,
    pub param_var: char,
    pub claimed_group: &'static str,
    /// Transitive-group label used by Galois identification.
    pub group_key: &'static str,
    pub exceptional_primes: &'static [u64],
    /// Known good specialization for hypothesis (ii).
    pub witness: i64,
    /// Reference point for the exceptional-prime refinement.
    pub t_ref: Option<i64>,
    /// Scans keep only specializations with all roots real.
    pub totally_real: bool,
    /// Scans keep only specializations unramified at 2.
    pub unramified_at_two: bool,
    pub notes: &'static str,
}

impl Preset {
    /// `f(t, x)` with the fixed variables substituted.
    pub fn poly(&self) -> Result<BiPoly, ParseError> {
        let mut m = parse_multivariate(self.source)?;
        for (v, val) in self.fixed {
            m = m.substitute(*v, &BigInt::from(*val));
        }
        m.to_bipoly(self.main_var, self.param_var)
    }

    /// Builds the preset polynomial; the shipped sources always parse.
    pub fn f(&self) -> BiPoly {
        self.poly().expect("preset source parses")
    }
}

pub static S3: Preset = Preset {
    name: "s3",
    source: "x^3+tx+t-1",
    fixed: &[],
    main_var: 'x',
    param_var: 't',
    claimed_group: "S3",
    group_key: "S3",
    exceptional_primes: &[],
    witness: 2,
    t_ref: None,
    totally_real: false,
    unramified_at_two: false,
    notes: "smallest nontrivial example; group S3 of order 6",
};

pub static A5: Preset = Preset {
    name: "a5",
    source: "x^{5}+ux^{4}+(-6u-10)x^{3}+vx^{2}+(-u^{2}+12u+25-3v)x+9v-24+u^{3}+24u^{2}+27u",
    fixed: &[('u', 0)],
    main_var: 'x',
    param_var: 'v',
    claimed_group: "A5",
    group_key: "A5",
    exceptional_primes: &[],
    witness: -3,
    t_ref: None,
    totally_real: false,
    unramified_at_two: false,
    notes: "generic A5 quintic specialized at u = 0; parameter v",
};

pub static PSL27: Preset = Preset {
    name: "psl27",
    source: "x^7 - 10x^6 + 163x^4 - 333x^3 + 191x^2 - 12x - 1+ x^2(x-1)(x^2-5x+5)t",
    fixed: &[],
    main_var: 'x',
    param_var: 't',
    claimed_group: "PSL2(7)",
    group_key: "PSL(3,2)",
    exceptional_primes: &[],
    witness: 0,
    t_ref: None,
    totally_real: true,
    unramified_at_two: true,
    notes: "PSL(2,7) family at a = 1, b = 5, c = 1; separable mod 2 for every t",
};

pub static PSL33: Preset = Preset {
    name: "psl33",
    source: "x(x^3 + 3x^2 - 27)(x^9 - 54x^6 - 81x^5 + 108x^4 + 837x^3 - 972x - 432)\
             -t(4x^{12} + 8x^{11} - 101x^{10} - 222x^9 + 428x^8 + 1970x^7 - 1020x^6 - 3240x^5\
             - 1088x^4 - 672x^3 + 7776x + 5184)",
    fixed: &[],
    main_var: 'x',
    param_var: 't',
    claimed_group: "PSL3(3)",
    group_key: "PSL(3,3)",
    exceptional_primes: &[2, 3, 12491],
    witness: 0,
    t_ref: Some(1),
    totally_real: false,
    unramified_at_two: false,
    notes: "degree 13; constant common divisors 2, 3, 12491 handled by refinement at t = 1",
};

pub fn all() -> [&'static Preset; 4] {
    [&S3, &A5, &PSL27, &PSL33]
}

pub fn by_name(name: &str) -> Option<&'static Preset> {
    all().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::{parse_poly, IntPoly};

    #[test]
    fn presets_parse() {
        for p in all() {
            let f = p.f();
            assert!(f.is_monic(), "{}", p.name);
            assert_eq!(parse_poly(&f.display_with("x", "t")).unwrap(), f, "{}", p.name);
        }
        assert_eq!(S3.f().degree(), Some(3));
        assert_eq!(A5.f().degree(), Some(5));
        assert_eq!(PSL27.f().degree(), Some(7));
        assert_eq!(PSL33.f().degree(), Some(13));
    }

    #[test]
    fn a5_at_u_zero() {
        let f = A5.f();
        let expected = parse_poly("x^5 - 10x^3 + v x^2 + (25 - 3v) x + 9v - 24").unwrap();
        assert_eq!(f, expected);
        assert_eq!(crate::zpoly::specialize(&f, &BigInt::from(0)), IntPoly::from_i64s(&[-24, 25, 0, -10, 0, 1]));
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("PSL33").unwrap().name, "psl33");
        assert!(by_name("m11").is_none());
    }
}
