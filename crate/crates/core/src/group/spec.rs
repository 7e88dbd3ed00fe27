use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::FieldId;
use crate::error::{Error, Result};

/// Catalogue type codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupType {
    A(usize),
    B(usize),
    /// Only used as a reflection subgroup of F₄.
    D4,
    I2(u32),
    G2,
    F4,
    H3,
    H4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub ty: GroupType,
    pub field: FieldId,
}

impl GroupType {
    /// Field of the catalogue realization.
    pub fn required_field(self) -> FieldId {
        match self {
            GroupType::I2(5) | GroupType::I2(10) | GroupType::H3 | GroupType::H4 => FieldId::Sqrt5,
            GroupType::I2(7) => FieldId::TwoCosPi7,
            GroupType::I2(8) => FieldId::TwoCosPi8,
            _ => FieldId::Rational,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            GroupType::A(r) | GroupType::B(r) => r,
            GroupType::D4 | GroupType::F4 | GroupType::H4 => 4,
            GroupType::I2(_) | GroupType::G2 => 2,
            GroupType::H3 => 3,
        }
    }

    /// Degrees of the basic invariants, ascending.
    pub fn degrees(self) -> Vec<u32> {
        match self {
            GroupType::A(r) => (2..=r as u32 + 1).collect(),
            GroupType::B(r) => (1..=r as u32).map(|k| 2 * k).collect(),
            GroupType::D4 => vec![2, 4, 4, 6],
            GroupType::I2(m) => {
                let mut d = vec![2, m];
                d.sort();
                d
            }
            GroupType::G2 => vec![2, 6],
            GroupType::F4 => vec![2, 6, 8, 12],
            GroupType::H3 => vec![2, 6, 10],
            GroupType::H4 => vec![2, 12, 20, 30],
        }
    }

    pub fn code(self) -> String {
        match self {
            GroupType::A(r) => format!("A{r}"),
            GroupType::B(r) => format!("B{r}"),
            GroupType::D4 => "D4".into(),
            GroupType::I2(m) => format!("I2({m})"),
            GroupType::G2 => "G2".into(),
            GroupType::F4 => "F4".into(),
            GroupType::H3 => "H3".into(),
            GroupType::H4 => "H4".into(),
        }
    }

    fn validate(self) -> Result<()> {
        let ok = match self {
            GroupType::A(r) => (1..=4).contains(&r),
            GroupType::B(r) => (2..=4).contains(&r),
            GroupType::I2(m) => (3..=8).contains(&m),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownGroup(self.code()))
        }
    }
}

impl GroupSpec {
    pub fn new(ty: GroupType) -> Result<Self> {
        ty.validate()?;
        Ok(GroupSpec {
            ty,
            field: ty.required_field(),
        })
    }

    /// Checks that `field` is the one the realization of `ty` lives in.
    pub fn with_field(ty: GroupType, field: FieldId) -> Result<Self> {
        ty.validate()?;
        let required = ty.required_field();
        if field != required {
            return Err(Error::WrongField {
                group: ty.code(),
                required: required.name(),
                given: field.name(),
            });
        }
        Ok(GroupSpec { ty, field })
    }

    pub fn code(&self) -> String {
        self.ty.code()
    }

    /// Groups excluded from the default suite.
    pub fn is_long_run(&self) -> bool {
        matches!(self.ty, GroupType::H4)
    }

    /// Groups whose covariant theory needs distinct degrees.
    pub fn has_repeated_degrees(&self) -> bool {
        let d = self.ty.degrees();
        d.windows(2).any(|w| w[0] == w[1])
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `A3`, `B2`, `G2`, `F4`, `H3`, `H4`, `D4`, `I2(5)`, `I2_5`, `I2-5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase().replace(['_', '-'], "");
        let bad = || Error::UnknownGroup(s.to_string());
        let ty = if let Some(rest) = t.strip_prefix("I2") {
            let m = rest.trim_start_matches('(').trim_end_matches(')');
            GroupType::I2(m.parse().map_err(|_| bad())?)
        } else {
            match t.as_str() {
                "G2" => GroupType::G2,
                "F4" => GroupType::F4,
                "H3" => GroupType::H3,
                "H4" => GroupType::H4,
                "D4" => GroupType::D4,
                _ => {
                    let (head, n) = t.split_at(1);
                    let n: usize = n.parse().map_err(|_| bad())?;
                    match head {
                        "A" => GroupType::A(n),
                        "B" | "C" => GroupType::B(n),
                        _ => return Err(bad()),
                    }
                }
            }
        };
        GroupSpec::new(ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_codes() {
        assert_eq!("A2".parse::<GroupSpec>().unwrap().ty, GroupType::A(2));
        assert_eq!("i2(5)".parse::<GroupSpec>().unwrap().ty, GroupType::I2(5));
        assert_eq!("I2_8".parse::<GroupSpec>().unwrap().field, FieldId::TwoCosPi8);
        assert!("A9".parse::<GroupSpec>().is_err());
        assert!("X1".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn wrong_field_rejected() {
        let e = GroupSpec::with_field(GroupType::H3, FieldId::Rational).unwrap_err();
        assert!(matches!(e, Error::WrongField { .. }));
    }

    #[test]
    fn long_run_flag() {
        assert!("H4".parse::<GroupSpec>().unwrap().is_long_run());
        assert!(!"F4".parse::<GroupSpec>().unwrap().is_long_run());
        assert!("D4".parse::<GroupSpec>().unwrap().has_repeated_degrees());
    }
}
