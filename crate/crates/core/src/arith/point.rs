use std::fmt;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A point of projective space, stored as its canonical representative:
/// the first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Rational>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::DimensionMismatch(
                "projective point with all coordinates zero".into(),
            ));
        };
        let coords = coords.into_iter().map(|c| c / &lead).collect();
        Ok(ProjectivePoint { coords })
    }

    /// Origin of the affine chart `x0 = 1` in `nvars - 1` affine coordinates.
    pub fn affine_origin(nvars: usize) -> Self {
        let mut coords = vec![Rational::zero(); nvars.max(1)];
        coords[0] = Rational::one();
        ProjectivePoint { coords }
    }

    pub fn parse(text: &str) -> std::result::Result<Self, Error> {
        crate::parser::parse_point(text)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn chart(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("canonical point has a nonzero coordinate")
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}
