use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A spin quantum number, stored as `2j` so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    twice_j: u32,
}

impl Spin {
    pub const ZERO: Spin = Spin { twice_j: 0 };
    pub const HALF: Spin = Spin { twice_j: 1 };
    pub const ONE: Spin = Spin { twice_j: 2 };

    pub const fn from_twice(twice_j: u32) -> Self {
        Spin { twice_j }
    }

    /// Spin from a real value; fails unless `2j` is a nonnegative integer.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::domain("j", j, "nonnegative multiples of 1/2"));
        }
        Ok(Spin {
            twice_j: twice.round() as u32,
        })
    }

    pub const fn twice(self) -> u32 {
        self.twice_j
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    /// Dimension `2j + 1` of the spin-j representation.
    pub const fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.twice_j % 2 == 1
    }

    /// Separability threshold `2j/(2j+1)` of the invariant family for spin-j ⊗ spin-½.
    pub fn threshold(self) -> f64 {
        let t = f64::from(self.twice_j);
        t / (t + 1.0)
    }

    /// Values of `2m` for `m = j, j-1, …, -j` (descending, matching the basis order).
    pub fn twice_ms(self) -> impl Iterator<Item = i32> {
        let tj = self.twice_j as i32;
        (0..=tj).map(move |k| tj - 2 * k)
    }

    /// Basis index of the state with projection `m = twice_m / 2`.
    pub fn index_of(self, twice_m: i32) -> Option<usize> {
        let tj = self.twice_j as i32;
        if twice_m.abs() > tj || (tj - twice_m) % 2 != 0 {
            return None;
        }
        Some(((tj - twice_m) / 2) as usize)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `"3"`, `"1.5"` or fractions such as `"3/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let value = parse_fraction(s)?;
        Spin::from_f64(value)
    }
}

/// Serialized as its fraction string, e.g. `"3/2"`.
impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Parse a decimal or `a/b` fraction into an `f64`.
pub fn parse_fraction(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected a number or fraction, got {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            Ok(num / den)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("1/2".parse::<Spin>().unwrap(), Spin::HALF);
        assert_eq!("3/2".parse::<Spin>().unwrap().twice(), 3);
        assert_eq!("1.5".parse::<Spin>().unwrap().twice(), 3);
        assert_eq!("3".parse::<Spin>().unwrap().twice(), 6);
        assert!("1/3".parse::<Spin>().is_err());
        assert!("-1".parse::<Spin>().is_err());
        assert!("abc".parse::<Spin>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for tj in 0..10 {
            let s = Spin::from_twice(tj);
            assert_eq!(s.to_string().parse::<Spin>().unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<Spin>(&json).unwrap(), s);
        }
        assert_eq!(serde_json::to_string(&Spin::from_twice(3)).unwrap(), "\"3/2\"");
    }

    #[test]
    fn index_follows_descending_m() {
        let j = Spin::from_twice(3);
        assert_eq!(j.index_of(3), Some(0));
        assert_eq!(j.index_of(-3), Some(3));
        assert_eq!(j.index_of(2), None);
        assert_eq!(j.twice_ms().collect::<Vec<_>>(), vec![3, 1, -1, -3]);
    }
}
