use num::rational::Ratio;
use num::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub type Rational = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Reduce a turn value into [0, 1).
pub fn mod_one(x: Rational) -> Rational {
    let f = x - Rational::from_integer(x.floor().to_integer());
    if f.is_negative() {
        f + Rational::one()
    } else {
        f
    }
}

/// Serializable `{num, den}` view of an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", self.0.numer())?;
        st.serialize_field("den", self.0.denom())?;
        st.end()
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

pub fn ser_q<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    Q(*r).serialize(s)
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
