//! Serde adapters that write arbitrary-precision integers as decimal strings.
//!
//! Used through `#[serde(with = "crate::dec")]` on fields holding `BigInt`,
//! polynomials over `BigInt`, or containers of those.

use num_bigint::BigInt;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::zpoly::{BiPoly, IntPoly};

pub trait Dec: Sized {
    type Repr: Serialize + DeserializeOwned;
    fn to_repr(&self) -> Self::Repr;
    fn from_repr(repr: Self::Repr) -> Result<Self, String>;
}

impl Dec for BigInt {
    type Repr = String;
    fn to_repr(&self) -> String {
        self.to_str_radix(10)
    }
    fn from_repr(repr: String) -> Result<Self, String> {
        repr.parse::<BigInt>().map_err(|e| format!("bad integer {repr:?}: {e}"))
    }
}

impl<T: Dec> Dec for Vec<T> {
    type Repr = Vec<T::Repr>;
    fn to_repr(&self) -> Self::Repr {
        self.iter().map(Dec::to_repr).collect()
    }
    fn from_repr(repr: Self::Repr) -> Result<Self, String> {
        repr.into_iter().map(T::from_repr).collect()
    }
}

impl<T: Dec> Dec for Option<T> {
    type Repr = Option<T::Repr>;
    fn to_repr(&self) -> Self::Repr {
        self.as_ref().map(Dec::to_repr)
    }
    fn from_repr(repr: Self::Repr) -> Result<Self, String> {
        repr.map(T::from_repr).transpose()
    }
}

impl Dec for (BigInt, u32) {
    type Repr = (String, u32);
    fn to_repr(&self) -> Self::Repr {
        (self.0.to_repr(), self.1)
    }
    fn from_repr(repr: Self::Repr) -> Result<Self, String> {
        Ok((BigInt::from_repr(repr.0)?, repr.1))
    }
}

impl Dec for IntPoly {
    type Repr = Vec<String>;
    fn to_repr(&self) -> Self::Repr {
        self.coeffs().to_vec().to_repr()
    }
    fn from_repr(repr: Self::Repr) -> Result<Self, String> {
        Ok(IntPoly::new(Vec::<BigInt>::from_repr(repr)?))
    }
}

impl Dec for BiPoly {
    type Repr = Vec<Vec<String>>;
    fn to_repr(&self) -> Self::Repr {
        self.coeffs().to_vec().to_repr()
    }
    fn from_repr(repr: Self::Repr) -> Result<Self, String> {
        Ok(BiPoly::new(Vec::<IntPoly>::from_repr(repr)?))
    }
}

pub fn serialize<T: Dec, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    value.to_repr().serialize(serializer)
}

pub fn deserialize<'de, T: Dec, D: Deserializer<'de>>(deserializer: D) -> Result<T, D::Error> {
    T::from_repr(T::Repr::deserialize(deserializer)?).map_err(D::Error::custom)
}
