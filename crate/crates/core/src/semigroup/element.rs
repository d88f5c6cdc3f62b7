use std::fmt;

use crate::automaton::MaxPlusAutomaton;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::{Bar, BarValue, OmegaValue, Semiring};

/// `(p, x, q, M)` or the absorbing `⊥`. `p` and `q` are states of `A`, `M`
/// is a `|Q_B|×|Q_B|` matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Element<V> {
    Bot,
    Path {
        from: usize,
        weight: V,
        to: usize,
        matrix: Matrix<V>,
    },
}

/// Element of the semigroup of paths, over `Ω̄`.
pub type PathElement = Element<BarValue>;
/// Element of the semigroup of asymptotic behaviours, over `Ω`.
pub type AsympElement = Element<OmegaValue>;

impl<V: Semiring + Bar> Element<V> {
    pub fn new(from: usize, weight: V, to: usize, matrix: Matrix<V>) -> Self {
        Element::Path {
            from,
            weight,
            to,
            matrix,
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Element::Bot)
    }

    /// `(p,x,q,M)(p',x',q',M') = (p, x⊗x', q', M⊗M')` when `q = p'`, else `⊥`.
    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (
                Element::Path {
                    from,
                    weight,
                    to,
                    matrix,
                },
                Element::Path {
                    from: from2,
                    weight: weight2,
                    to: to2,
                    matrix: matrix2,
                },
            ) if to == from2 => Element::Path {
                from: *from,
                weight: weight.otimes(weight2),
                to: *to2,
                matrix: matrix * matrix2,
            },
            _ => Element::Bot,
        }
    }

    /// `p = q` and the barred matrix is idempotent.
    pub fn is_path_idempotent(&self) -> Result<bool> {
        match self {
            Element::Bot => Err(Error::BotElement),
            Element::Path {
                from, to, matrix, ..
            } => Ok(from == to && matrix.bar().is_idempotent()),
        }
    }

    pub fn bar(&self) -> PathElement {
        match self {
            Element::Bot => Element::Bot,
            Element::Path {
                from,
                weight,
                to,
                matrix,
            } => Element::Path {
                from: *from,
                weight: weight.bar(),
                to: *to,
                matrix: matrix.bar(),
            },
        }
    }

    pub fn from_state(&self) -> Option<usize> {
        match self {
            Element::Path { from, .. } => Some(*from),
            Element::Bot => None,
        }
    }

    pub fn to_state(&self) -> Option<usize> {
        match self {
            Element::Path { to, .. } => Some(*to),
            Element::Bot => None,
        }
    }

    pub fn weight(&self) -> Option<&V> {
        match self {
            Element::Path { weight, .. } => Some(weight),
            Element::Bot => None,
        }
    }

    pub fn matrix(&self) -> Option<&Matrix<V>> {
        match self {
            Element::Path { matrix, .. } => Some(matrix),
            Element::Bot => None,
        }
    }
}

impl PathElement {
    pub fn lift(&self) -> AsympElement {
        match self {
            Element::Bot => Element::Bot,
            Element::Path {
                from,
                weight,
                to,
                matrix,
            } => Element::Path {
                from: *from,
                weight: weight.lift(),
                to: *to,
                matrix: matrix.lift(),
            },
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }
}

impl AsympElement {
    /// `(p,x,p,M)♯ = (p, x♯, p, M♯)`.
    pub fn stabilise(&self) -> Result<AsympElement> {
        if !self.is_path_idempotent()? {
            return Err(Error::NotPathIdempotent);
        }
        let Element::Path {
            from,
            weight,
            to,
            matrix,
        } = self
        else {
            unreachable!("checked above")
        };
        Ok(Element::Path {
            from: *from,
            weight: weight.sharp(),
            to: *to,
            matrix: matrix.stabilise()?,
        })
    }

    /// `(p,x,p,M)♭ = (p, x, p, M♭)`.
    pub fn flatten(&self) -> Result<AsympElement> {
        if !self.is_path_idempotent()? {
            return Err(Error::NotPathIdempotent);
        }
        let Element::Path {
            from,
            weight,
            to,
            matrix,
        } = self
        else {
            unreachable!("checked above")
        };
        Ok(Element::Path {
            from: *from,
            weight: *weight,
            to: *to,
            matrix: matrix.flatten()?,
        })
    }

    /// Inverse of [`PathElement::lift`] when no `∞` occurs.
    pub fn to_path(&self) -> Option<PathElement> {
        match self {
            Element::Bot => Some(Element::Bot),
            Element::Path {
                from,
                weight,
                to,
                matrix,
            } => Some(Element::Path {
                from: *from,
                weight: weight.to_bar()?,
                to: *to,
                matrix: matrix.to_bar()?,
            }),
        }
    }
}

impl<V: Semiring + fmt::Display> Element<V> {
    /// `(p, x, q, [..])` with the state names of `a`.
    pub fn describe(&self, a: &MaxPlusAutomaton) -> String {
        match self {
            Element::Bot => "bot".to_string(),
            Element::Path {
                from,
                weight,
                to,
                matrix,
            } => format!(
                "({}, {weight}, {}, {matrix})",
                a.state_name(*from),
                a.state_name(*to)
            ),
        }
    }
}

impl<V: Semiring + fmt::Display> fmt::Display for Element<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Bot => f.write_str("bot"),
            Element::Path {
                from,
                weight,
                to,
                matrix,
            } => write!(f, "({from}, {weight}, {to}, {matrix})"),
        }
    }
}

/// The generator `(p, x̄, q, M̄_B(a))` for a transition `p --a:x--> q` of `A`.
pub fn generator_element(
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    letter: usize,
    from: usize,
    to: usize,
) -> Option<PathElement> {
    let x = a.trans(letter).get(from, to);
    if !x.is_finite() {
        return None;
    }
    Some(Element::new(from, x.bar(), to, b.trans(letter).bar()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{bar_matrix, omega_matrix};

    fn el(x: OmegaValue, m: &str) -> AsympElement {
        Element::new(0, x, 0, omega_matrix(m))
    }

    fn e_a() -> PathElement {
        Element::new(0, BarValue::One, 0, bar_matrix("0 - - -; - 1 - -; - - 0 -; - - - 0"))
    }

    fn e_b() -> PathElement {
        Element::new(0, BarValue::One, 0, bar_matrix("0 0 - -; - - 0 -; - - 0 -; - - - 1"))
    }

    #[test]
    fn products() {
        assert_eq!(e_a().mul(&e_a()), e_a());
        assert_eq!(
            e_b().mul(&e_b()),
            Element::new(0, BarValue::One, 0, bar_matrix("0 0 0 -; - - 0 -; - - 0 -; - - - 1"))
        );
        let from_one = Element::new(1, BarValue::Zero, 1, bar_matrix("0 - - -; - 0 - -; - - 0 -; - - - 0"));
        assert_eq!(e_a().mul(&from_one), Element::Bot);
        assert_eq!(Element::Bot.mul(&e_a()), Element::Bot);
    }

    #[test]
    fn path_idempotence() {
        use OmegaValue::*;
        let ea_sharp = e_a().lift().stabilise().unwrap();
        let ea_sharp_eb = ea_sharp.mul(&e_b().lift());
        assert!(e_a().is_path_idempotent().unwrap());
        assert!(!ea_sharp_eb.is_path_idempotent().unwrap());
        assert!(ea_sharp_eb.mul(&ea_sharp_eb).is_path_idempotent().unwrap());
        assert!(matches!(PathElement::Bot.is_path_idempotent(), Err(Error::BotElement)));
        // Zero weight and an all-zero diagonal: stabilisation changes nothing.
        let flat = el(Zero, "0 1 -; - 0 -; - - 0");
        assert_eq!(flat.stabilise().unwrap(), flat);
    }

    #[test]
    fn flatten_examples() {
        use OmegaValue::*;
        let idem = e_a().lift();
        assert_eq!(idem.flatten().unwrap(), idem);
        let diag = el(Inf, "0 - -; - 0 -; - - 0");
        assert_eq!(diag.flatten().unwrap(), diag);
        assert!(matches!(
            e_b().lift().flatten(),
            Err(Error::NotPathIdempotent)
        ));
    }
}
