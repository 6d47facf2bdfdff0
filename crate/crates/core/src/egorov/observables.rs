use crate::dynamics::{kinetic_energy, Potential};
use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;
use crate::scalar::Real;

/// Phase-space symbols whose expectations the estimators and the grid
/// solver compute. Indices are zero-based; names are one-based.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableSymbol<T> {
    Position(usize),
    Momentum(usize),
    Kinetic,
    PotentialEnergy,
    TotalEnergy,
    /// `exp(−width/(q − x_max)²)` for `q < x_max`, zero otherwise (d = 1).
    Escape { x_max: T, width: T },
    /// `∏_j q_j^{a_j} p_j^{b_j}`.
    Monomial { q: Vec<u32>, p: Vec<u32> },
}

/// Which phase-space variables a symbol depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dependence {
    Position,
    Momentum,
    /// A sum of a position part and a momentum part.
    Separable,
    Mixed,
}

impl<T: Real> ObservableSymbol<T> {
    pub const ESCAPE_WIDTH: f64 = 0.01;

    pub fn escape(x_max: T) -> Self {
        Self::Escape { x_max, width: T::lit(Self::ESCAPE_WIDTH) }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Position(i) => format!("q{}", i + 1),
            Self::Momentum(i) => format!("p{}", i + 1),
            Self::Kinetic => "kinetic".into(),
            Self::PotentialEnergy => "potential".into(),
            Self::TotalEnergy => "total_energy".into(),
            Self::Escape { .. } => "escape".into(),
            Self::Monomial { q, p } => {
                let mut factors = Vec::new();
                for (var, exps) in [("q", q), ("p", p)] {
                    for (j, &e) in exps.iter().enumerate() {
                        match e {
                            0 => {}
                            1 => factors.push(format!("{var}{}", j + 1)),
                            _ => factors.push(format!("{var}{}^{e}", j + 1)),
                        }
                    }
                }
                if factors.is_empty() {
                    "1".into()
                } else {
                    factors.join("*")
                }
            }
        }
    }

    /// Parses a name produced by [`name`](Self::name). A bare `q2` or
    /// `p1` is a coordinate; products like `q1^2*p1` are monomials.
    /// `escape` needs the barrier location.
    pub fn parse(name: &str, dim: usize, barrier: Option<T>) -> Result<Self> {
        let unknown = || Error::InvalidParameter { name: "observable", reason: format!("unknown observable `{name}`") };
        let symbol = match name {
            "kinetic" => Self::Kinetic,
            "potential" => Self::PotentialEnergy,
            "total_energy" => Self::TotalEnergy,
            "escape" => Self::escape(barrier.ok_or_else(|| Error::InvalidParameter {
                name: "observable",
                reason: "`escape` needs a potential with a barrier".into(),
            })?),
            _ => {
                let mut q = vec![0u32; dim];
                let mut p = vec![0u32; dim];
                let factors: Vec<&str> = name.split('*').collect();
                for factor in &factors {
                    let (base, exp) = match factor.split_once('^') {
                        Some((b, e)) => (b, e.parse::<u32>().map_err(|_| unknown())?),
                        None => (*factor, 1),
                    };
                    let (var, index) = base.split_at(base.len().min(1));
                    let j: usize = index.parse().map_err(|_| unknown())?;
                    if j == 0 || j > dim {
                        return Err(unknown());
                    }
                    match var {
                        "q" => q[j - 1] += exp,
                        "p" => p[j - 1] += exp,
                        _ => return Err(unknown()),
                    }
                }
                let degree: u32 = q.iter().chain(&p).sum();
                let single = factors.len() == 1 && !name.contains('^');
                match (single, degree) {
                    (true, 1) if q.iter().any(|&e| e == 1) => Self::Position(q.iter().position(|&e| e == 1).unwrap()),
                    (true, 1) => Self::Momentum(p.iter().position(|&e| e == 1).unwrap()),
                    _ => Self::Monomial { q, p },
                }
            }
        };
        symbol.check_dim(dim)?;
        Ok(symbol)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Self::Position(i) | Self::Momentum(i) if *i >= dim => {
                Err(Error::InvalidParameter { name: "observable", reason: format!("{} needs d > {i}", self.name()) })
            }
            Self::Escape { .. } if dim != 1 => Err(Error::DimensionMismatch { expected: 1, found: dim }),
            Self::Monomial { q, p } if q.len() != dim || p.len() != dim => {
                Err(Error::DimensionMismatch { expected: dim, found: q.len().max(p.len()) })
            }
            _ => Ok(()),
        }
    }

    pub fn dependence(&self) -> Dependence {
        match self {
            Self::Position(_) | Self::PotentialEnergy | Self::Escape { .. } => Dependence::Position,
            Self::Momentum(_) | Self::Kinetic => Dependence::Momentum,
            Self::TotalEnergy => Dependence::Separable,
            Self::Monomial { q, p } => match (q.iter().any(|&e| e > 0), p.iter().any(|&e| e > 0)) {
                (_, false) => Dependence::Position,
                (false, true) => Dependence::Momentum,
                (true, true) => Dependence::Mixed,
            },
        }
    }

    /// Value of a position-only symbol at `q`.
    pub(crate) fn position_part<P: Potential<T> + ?Sized>(&self, q: &[T], pot: &P) -> T {
        match self {
            Self::Position(i) => q[*i],
            Self::PotentialEnergy | Self::TotalEnergy => pot.value(q),
            Self::Escape { x_max, width } => escape_symbol(q[0], *x_max, *width),
            Self::Monomial { q: a, .. } => monomial(q, a),
            _ => T::zero(),
        }
    }

    /// Value of a momentum-only symbol at `p`.
    pub(crate) fn momentum_part(&self, p: &[T]) -> T {
        match self {
            Self::Momentum(i) => p[*i],
            Self::Kinetic | Self::TotalEnergy => kinetic_energy(p),
            Self::Monomial { p: b, .. } => monomial(p, b),
            _ => T::zero(),
        }
    }
}

fn monomial<T: Real>(x: &[T], exps: &[u32]) -> T {
    x.iter().zip(exps).fold(T::one(), |acc, (&v, &e)| acc * v.powi(e as i32))
}

fn escape_symbol<T: Real>(q: T, x_max: T, width: T) -> T {
    if q < x_max {
        let s = q - x_max;
        (-width / (s * s)).exp()
    } else {
        T::zero()
    }
}

/// Pointwise value of `a` at `z`.
pub fn evaluate_observable<T: Real, P: Potential<T> + ?Sized>(a: &ObservableSymbol<T>, z: &PhasePoint<T>, pot: &P) -> T {
    match a {
        ObservableSymbol::Position(_) | ObservableSymbol::PotentialEnergy | ObservableSymbol::Escape { .. } => {
            a.position_part(&z.q, pot)
        }
        ObservableSymbol::Momentum(_) | ObservableSymbol::Kinetic => a.momentum_part(&z.p),
        ObservableSymbol::TotalEnergy => kinetic_energy(&z.p) + pot.value(&z.q),
        ObservableSymbol::Monomial { q, p } => monomial(&z.q, q) * monomial(&z.p, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{CubicWell, Harmonic};

    #[test]
    fn escape_values() {
        let w = CubicWell::default();
        let x_max = w.barrier_top().unwrap();
        let r = ObservableSymbol::escape(x_max);
        let at = |q: f64| evaluate_observable(&r, &PhasePoint::from_1d(q, 0.0), &w);
        assert!((at(x_max - 10.0) - (-1e-4f64).exp()).abs() < 1e-15);
        assert_eq!(at(x_max), 0.0);
        assert_eq!(at(x_max + 0.5), 0.0);
    }

    #[test]
    fn harmonic_total_energy() {
        let z = PhasePoint::<f64>::new(vec![0.3, -1.0], vec![0.5, 2.0]).unwrap();
        let e = evaluate_observable(&ObservableSymbol::TotalEnergy, &z, &Harmonic { dim: 2 });
        assert!((e - z.norm_sqr() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn names_round_trip() {
        let symbols: Vec<ObservableSymbol<f64>> = vec![
            ObservableSymbol::Position(1),
            ObservableSymbol::Momentum(0),
            ObservableSymbol::Kinetic,
            ObservableSymbol::PotentialEnergy,
            ObservableSymbol::TotalEnergy,
            ObservableSymbol::Monomial { q: vec![2, 0], p: vec![1, 1] },
            ObservableSymbol::Monomial { q: vec![0, 0], p: vec![0, 0] },
        ];
        for s in symbols {
            let name = s.name();
            if name == "1" {
                continue;
            }
            assert_eq!(ObservableSymbol::parse(&name, 2, None).unwrap(), s, "{name}");
        }
        assert_eq!(ObservableSymbol::<f64>::Monomial { q: vec![2, 0], p: vec![1, 1] }.name(), "q1^2*p1*p2");
    }

    #[test]
    fn parse_rejects_unknown() {
        for bad in ["q0", "q3", "x1", "kinetics", "q1^a", "escape"] {
            assert!(ObservableSymbol::<f64>::parse(bad, 2, None).is_err(), "{bad}");
        }
        assert!(ObservableSymbol::<f64>::parse("escape", 2, Some(-1.6)).is_err());
        assert!(ObservableSymbol::<f64>::parse("escape", 1, Some(-1.6)).is_ok());
    }

    #[test]
    fn dependence_classes() {
        assert_eq!(ObservableSymbol::<f64>::TotalEnergy.dependence(), Dependence::Separable);
        assert_eq!(ObservableSymbol::<f64>::Monomial { q: vec![1], p: vec![1] }.dependence(), Dependence::Mixed);
        assert_eq!(ObservableSymbol::<f64>::Monomial { q: vec![0], p: vec![3] }.dependence(), Dependence::Momentum);
    }
}
