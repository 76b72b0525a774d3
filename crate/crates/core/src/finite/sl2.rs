use serde::Serialize;

/// Integer matrix `[[a, b], [c, d]]` with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Sl2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2Z {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        (a * d - b * c == 1).then_some(Self { a, b, c, d })
    }

    pub const IDENTITY: Sl2Z = Sl2Z { a: 1, b: 0, c: 0, d: 1 };
    /// `tau -> -1/tau`.
    pub const S: Sl2Z = Sl2Z { a: 0, b: -1, c: 1, d: 0 };
    /// `tau -> tau + 1`.
    pub const T: Sl2Z = Sl2Z { a: 1, b: 1, c: 0, d: 1 };

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}
