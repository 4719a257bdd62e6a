use crate::error::{Error, Result};
use crate::linalg::{c, CVector, StateVector};
use serde::{Deserialize, Serialize};

/// Behaviour of Alice's measurement device, the `w` port.
///
/// Non-honest devices still receive the frame-corrected data; they only
/// change what is measured or reported.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeviceBehavior {
    Honest,
    /// Every XY angle is off by `offset` radians.
    WrongAngles { offset: f64 },
    /// The byproduct from the computation's own outcomes is never undone.
    SkipCorrection,
    /// Ignores everything, outputs a fixed state and reports acceptance.
    AlwaysAccept { amplitudes: Vec<(f64, f64)> },
    /// Honest measurements, inverted verdict.
    FlagFlip,
}

impl DeviceBehavior {
    /// Numeric tag `w`; 0 is the honest device.
    pub fn w(&self) -> u32 {
        match self {
            DeviceBehavior::Honest => 0,
            DeviceBehavior::WrongAngles { .. } => 1,
            DeviceBehavior::SkipCorrection => 2,
            DeviceBehavior::AlwaysAccept { .. } => 3,
            DeviceBehavior::FlagFlip => 4,
        }
    }

    pub fn is_honest(&self) -> bool {
        self.w() == 0
    }

    pub fn always_accept(state: &StateVector) -> Self {
        DeviceBehavior::AlwaysAccept { amplitudes: state.amplitudes().iter().map(|a| (a.re, a.im)).collect() }
    }

    /// The scripted output of an always-accept device, checked against `dim`.
    pub fn scripted_output(&self, dim: usize) -> Result<Option<StateVector>> {
        match self {
            DeviceBehavior::AlwaysAccept { amplitudes } => {
                if amplitudes.len() != dim {
                    return Err(Error::Protocol(format!(
                        "scripted output has dimension {}, the program outputs {dim}",
                        amplitudes.len()
                    )));
                }
                let v = CVector::from_iterator(dim, amplitudes.iter().map(|&(re, im)| c(re, im)));
                Ok(Some(StateVector::normalized(v)?))
            }
            _ => Ok(None),
        }
    }

    pub fn angle_offset(&self) -> f64 {
        match self {
            DeviceBehavior::WrongAngles { offset } => *offset,
            _ => 0.0,
        }
    }

    pub fn corrects(&self) -> bool {
        !matches!(self, DeviceBehavior::SkipCorrection)
    }

    pub fn flips_flag(&self) -> bool {
        matches!(self, DeviceBehavior::FlagFlip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_and_json() {
        let d = DeviceBehavior::WrongAngles { offset: 0.25 };
        assert_eq!(d.w(), 1);
        assert!(DeviceBehavior::Honest.is_honest());
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"kind":"wrong_angles","offset":0.25}"#);
        assert_eq!(serde_json::from_str::<DeviceBehavior>(&s).unwrap(), d);
        let a = DeviceBehavior::always_accept(&StateVector::basis(1, 1));
        assert!(a.scripted_output(4).is_err());
        assert_eq!(a.scripted_output(2).unwrap().unwrap(), StateVector::basis(1, 1));
    }
}
