//! Prime fields of odd characteristic and their quadratic extensions,
//! behind a small context-passing trait so the subspace enumeration code is
//! generic over the two.

use std::fmt::Debug;
use std::hash::Hash;

/// A finite field presented as a context object; elements are plain values.
pub trait Field: Clone {
    type Elem: Copy + Eq + Ord + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    /// Canonical embedding of a prime-field residue.
    fn embed(&self, a: u64) -> Self::Elem;
    /// A square root, if one exists in this field.
    fn sqrt(&self, a: Self::Elem) -> Option<Self::Elem>;
    /// Number of elements.
    fn order(&self) -> u64;
    /// Element with the given index in a fixed enumeration (0 = zero).
    fn elem(&self, index: u64) -> Self::Elem;
    /// A fixed non-square, when the solver may need to rescale into the
    /// square class. `None` where the rescaling path is never taken.
    fn canonical_nonsquare(&self) -> Option<Self::Elem> {
        None
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
    fn div(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }
    fn pow(&self, mut base: Self::Elem, mut exp: u64) -> Self::Elem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// The field with `p` elements, `p` an odd prime below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 3 && p % 2 == 1 && p < (1 << 31), "odd prime below 2^31 required");
        Fp { p }
    }

    fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Euler criterion: 1 for nonzero squares, p-1 for non-squares, 0 for 0.
    pub fn legendre(&self, a: u64) -> u64 {
        self.pow(self.reduce(a), (self.p - 1) / 2)
    }

    /// Smallest quadratic non-residue.
    pub fn nonresidue(&self) -> u64 {
        (2..self.p)
            .find(|&n| self.legendre(n) == self.p - 1)
            .expect("an odd prime field has a non-residue")
    }
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a % self.p, self.p - 2))
        }
    }
    fn embed(&self, a: u64) -> u64 {
        self.reduce(a)
    }

    /// Tonelli–Shanks.
    fn sqrt(&self, a: u64) -> Option<u64> {
        let a = self.reduce(a);
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if self.p % 4 == 3 {
            return Some(self.pow(a, (self.p + 1) / 4));
        }
        // p = q 2^s + 1 with q odd.
        let mut q = self.p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.nonresidue();
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
                debug_assert!(i < m);
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        debug_assert_eq!(self.mul(r, r), a);
        Some(r)
    }

    fn order(&self) -> u64 {
        self.p
    }
    fn elem(&self, index: u64) -> u64 {
        index % self.p
    }
    fn canonical_nonsquare(&self) -> Option<u64> {
        Some(self.nonresidue())
    }
}

/// The quadratic extension `F_p[w] / (w^2 - nonresidue)`; elements are
/// pairs `(a, b)` standing for `a + b w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp2 {
    pub base: Fp,
    pub nonresidue: u64,
}

impl Fp2 {
    pub fn new(p: u64) -> Self {
        let base = Fp::new(p);
        let nonresidue = base.nonresidue();
        Fp2 { base, nonresidue }
    }
}

impl Field for Fp2 {
    type Elem = (u64, u64);

    fn zero(&self) -> (u64, u64) {
        (0, 0)
    }
    fn one(&self) -> (u64, u64) {
        (1, 0)
    }
    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.base.add(a.0, b.0), self.base.add(a.1, b.1))
    }
    fn sub(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.base.sub(a.0, b.0), self.base.sub(a.1, b.1))
    }
    fn neg(&self, a: (u64, u64)) -> (u64, u64) {
        (self.base.neg(a.0), self.base.neg(a.1))
    }
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let f = &self.base;
        // (a0 + a1 w)(b0 + b1 w) = a0 b0 + ns a1 b1 + (a0 b1 + a1 b0) w
        (
            f.add(f.mul(a.0, b.0), f.mul(self.nonresidue, f.mul(a.1, b.1))),
            f.add(f.mul(a.0, b.1), f.mul(a.1, b.0)),
        )
    }
    fn inv(&self, a: (u64, u64)) -> Option<(u64, u64)> {
        let f = &self.base;
        // norm = a0^2 - ns a1^2, nonzero for nonzero elements.
        let norm = f.sub(f.mul(a.0, a.0), f.mul(self.nonresidue, f.mul(a.1, a.1)));
        let ninv = f.inv(norm)?;
        Some((f.mul(a.0, ninv), f.mul(f.neg(a.1), ninv)))
    }
    fn embed(&self, a: u64) -> (u64, u64) {
        (self.base.embed(a), 0)
    }

    fn sqrt(&self, a: (u64, u64)) -> Option<(u64, u64)> {
        // Roots are only ever requested for base-field values here: either
        // the radicand is a square in the base, or radicand/nonresidue is.
        assert_eq!(
            a.1, 0,
            "square root outside the base field requested (internal bug)"
        );
        if let Some(r) = self.base.sqrt(a.0) {
            return Some((r, 0));
        }
        let scaled = self
            .base
            .div(a.0, self.nonresidue)
            .expect("nonresidue is nonzero");
        let r = self
            .base
            .sqrt(scaled)
            .expect("non-square over the base splits in the extension");
        Some((0, r))
    }

    fn order(&self) -> u64 {
        self.base.p * self.base.p
    }
    fn elem(&self, index: u64) -> (u64, u64) {
        (index % self.base.p, (index / self.base.p) % self.base.p)
    }
}
