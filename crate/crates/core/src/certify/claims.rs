use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::means::{evaluate_mean, mean_excess, MeanKind, NormalizedGap, PositivePair};
use crate::ratio::SharpConstants;

/// `w * first + (1 - w) * second`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexCombination {
    weight: f64,
    first: MeanKind,
    second: MeanKind,
}

impl ConvexCombination {
    pub fn new(weight: f64, first: MeanKind, second: MeanKind) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return domain(format!("weight {weight} outside [0, 1]"));
        }
        Ok(Self {
            weight,
            first,
            second,
        })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn first(&self) -> MeanKind {
        self.first
    }

    pub fn second(&self) -> MeanKind {
        self.second
    }

    pub fn value(&self, pair: PositivePair) -> Result<f64> {
        let u = evaluate_mean(self.first, pair)?;
        let v = evaluate_mean(self.second, pair)?;
        Ok(self.weight * u + (1.0 - self.weight) * v)
    }

    /// `value / A - 1` as a function of the normalized gap.
    pub fn excess(&self, gap: NormalizedGap) -> Result<f64> {
        let u = mean_excess(self.first, gap)?;
        let v = mean_excess(self.second, gap)?;
        Ok(self.weight * u + (1.0 - self.weight) * v)
    }
}

/// Whether the combination is claimed to lie below or above `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    LessThanM,
    GreaterThanM,
}

/// The end of the gap interval `(0, 1)` where the ratio function attains the
/// sharp weight as a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SharpAt {
    GapZero,
    GapOne,
}

/// Side of a double inequality: the lower bound is `combination < M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn relation(self) -> Relation {
        match self {
            Side::Lower => Relation::LessThanM,
            Side::Upper => Relation::GreaterThanM,
        }
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            other => domain(format!("unknown side '{other}' (expected lower or upper)")),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

/// The three sharp double inequalities for `M`:
///
/// * `a1 H + (1 - a1) Q < M < b1 H + (1 - b1) Q` with `a1 = 2/9`, `b1 = lambda0`;
/// * `a2 G + (1 - a2) Q < M < b2 G + (1 - b2) Q` with `a2 = 1/3`, `b2 = lambda0`;
/// * `a3 H + (1 - a3) C < M < b3 H + (1 - b3) C` with `a3 = 1 - 1/(2 ln(1 + sqrt 2))`, `b3 = 5/12`.
///
/// On the command line they are numbered `1.1`, `1.2`, `1.3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Bound {
    HarmonicQuadratic,
    GeometricQuadratic,
    HarmonicContraharmonic,
}

impl Bound {
    pub const ALL: [Bound; 3] = [
        Bound::HarmonicQuadratic,
        Bound::GeometricQuadratic,
        Bound::HarmonicContraharmonic,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Bound::HarmonicQuadratic => "1.1",
            Bound::GeometricQuadratic => "1.2",
            Bound::HarmonicContraharmonic => "1.3",
        }
    }

    pub fn means(self) -> (MeanKind, MeanKind) {
        match self {
            Bound::HarmonicQuadratic => (MeanKind::Harmonic, MeanKind::Quadratic),
            Bound::GeometricQuadratic => (MeanKind::Geometric, MeanKind::Quadratic),
            Bound::HarmonicContraharmonic => (MeanKind::Harmonic, MeanKind::ContraHarmonic),
        }
    }

    pub fn sharp_weight(self, side: Side) -> f64 {
        let c = SharpConstants::get();
        match (self, side) {
            (Bound::HarmonicQuadratic, Side::Lower) => c.alpha1,
            (Bound::HarmonicQuadratic, Side::Upper) => c.beta1,
            (Bound::GeometricQuadratic, Side::Lower) => c.alpha2,
            (Bound::GeometricQuadratic, Side::Upper) => c.beta2,
            (Bound::HarmonicContraharmonic, Side::Lower) => c.alpha3,
            (Bound::HarmonicContraharmonic, Side::Upper) => c.beta3,
        }
    }

    pub fn sharp_at(self, side: Side) -> SharpAt {
        match (self, side) {
            (Bound::HarmonicContraharmonic, Side::Lower) => SharpAt::GapOne,
            (Bound::HarmonicContraharmonic, Side::Upper) => SharpAt::GapZero,
            (_, Side::Lower) => SharpAt::GapZero,
            (_, Side::Upper) => SharpAt::GapOne,
        }
    }
}

impl FromStr for Bound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1.1" | "hq" => Ok(Bound::HarmonicQuadratic),
            "1.2" | "gq" => Ok(Bound::GeometricQuadratic),
            "1.3" | "hc" => Ok(Bound::HarmonicContraharmonic),
            other => domain(format!(
                "unknown bound '{other}' (expected 1.1, 1.2 or 1.3)"
            )),
        }
    }
}

/// One side of a double inequality with a concrete weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundClaim {
    pub id: String,
    pub combination: ConvexCombination,
    pub relation: Relation,
    pub claimed_sharp_weight: f64,
    pub sharp_at: SharpAt,
}

impl BoundClaim {
    /// The claim at its sharp weight.
    pub fn sharp(bound: Bound, side: Side) -> BoundClaim {
        Self::with_weight(bound, side, bound.sharp_weight(side))
            .expect("sharp weights lie in [0, 1]")
    }

    /// The claim with a caller-chosen weight (the sharp weight is kept for reference).
    pub fn with_weight(bound: Bound, side: Side, weight: f64) -> Result<BoundClaim> {
        let (first, second) = bound.means();
        Ok(BoundClaim {
            id: format!("{}-{}", bound.label(), side),
            combination: ConvexCombination::new(weight, first, second)?,
            relation: side.relation(),
            claimed_sharp_weight: bound.sharp_weight(side),
            sharp_at: bound.sharp_at(side),
        })
    }

    pub fn weight(&self) -> f64 {
        self.combination.weight
    }

    /// The same claim with another weight.
    pub fn reweighted(&self, weight: f64) -> Result<BoundClaim> {
        let c = &self.combination;
        Ok(BoundClaim {
            combination: ConvexCombination::new(weight, c.first, c.second)?,
            ..self.clone()
        })
    }

    /// The weight moved by `epsilon` in the direction that breaks the claim:
    /// lower-bound weights decrease, upper-bound weights increase.
    pub fn falsifying_weight(&self, epsilon: f64) -> f64 {
        match self.relation {
            Relation::LessThanM => self.weight() - epsilon,
            Relation::GreaterThanM => self.weight() + epsilon,
        }
    }

    /// Signed margin divided by `A`: positive exactly when the claim holds at `gap`.
    pub fn margin(&self, gap: NormalizedGap) -> Result<f64> {
        let m = mean_excess(MeanKind::NeumanSandor, gap)?;
        let c = self.combination.excess(gap)?;
        Ok(match self.relation {
            Relation::LessThanM => m - c,
            Relation::GreaterThanM => c - m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_outside_the_unit_interval_are_rejected() {
        assert!(ConvexCombination::new(-0.1, MeanKind::Harmonic, MeanKind::Quadratic).is_err());
        assert!(BoundClaim::with_weight(Bound::GeometricQuadratic, Side::Upper, 1.5).is_err());
        assert!(BoundClaim::with_weight(Bound::GeometricQuadratic, Side::Upper, 1.0).is_ok());
    }

    #[test]
    fn falsifying_direction() {
        let lower = BoundClaim::sharp(Bound::HarmonicQuadratic, Side::Lower);
        assert!(lower.falsifying_weight(1e-3) < lower.weight());
        let upper = BoundClaim::sharp(Bound::HarmonicQuadratic, Side::Upper);
        assert!(upper.falsifying_weight(1e-3) > upper.weight());
    }

    #[test]
    fn combination_value_matches_excess() {
        let c = ConvexCombination::new(0.3, MeanKind::Geometric, MeanKind::Quadratic).unwrap();
        let pair = PositivePair::new(1.5, 0.5).unwrap();
        let gap = NormalizedGap::new(0.5).unwrap();
        assert!((c.value(pair).unwrap() - (1.0 + c.excess(gap).unwrap())).abs() < 1e-15);
    }

    #[test]
    fn bound_labels_round_trip() {
        for b in Bound::ALL {
            assert_eq!(b.label().parse::<Bound>().unwrap(), b);
        }
        assert!("1.4".parse::<Bound>().is_err());
        assert_eq!("Upper".parse::<Side>().unwrap(), Side::Upper);
    }
}
