use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which platoon ends run a wave-absorbing controller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    None,
    Front,
    Rear,
    TwoSided,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::None,
        Variant::Front,
        Variant::Rear,
        Variant::TwoSided,
    ];

    pub fn front_absorbs(self) -> bool {
        matches!(self, Variant::Front | Variant::TwoSided)
    }

    pub fn rear_absorbs(self) -> bool {
        matches!(self, Variant::Rear | Variant::TwoSided)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::None => "none",
            Variant::Front => "front",
            Variant::Rear => "rear",
            Variant::TwoSided => "two_sided",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "none" => Ok(Variant::None),
            "front" => Ok(Variant::Front),
            "rear" => Ok(Variant::Rear),
            "two_sided" | "two" | "both" => Ok(Variant::TwoSided),
            other => Err(Error::InvalidConfig(format!("unknown variant `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("two-sided".parse::<Variant>().unwrap(), Variant::TwoSided);
        assert!("sideways".parse::<Variant>().is_err());
    }
}
