//! Binary extension fields GF(2^8) and GF(16) with log/antilog tables.

use std::fmt;

use crate::error::{invalid, Result};

/// Finite field arithmetic shared by the coding routines.
pub trait Field: Copy + Eq + Ord + fmt::Debug + Send + Sync + 'static {
    /// Number of elements.
    const ORDER: usize;

    fn zero() -> Self;
    fn one() -> Self;
    /// Element with integer representation `index`; `index < ORDER`.
    fn from_index(index: usize) -> Result<Self>;
    fn index(self) -> usize;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn inv(self) -> Result<Self>;

    fn sub(self, other: Self) -> Self {
        self.add(other)
    }

    fn div(self, other: Self) -> Result<Self> {
        Ok(self.mul(other.inv()?))
    }

    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

struct Tables<const N: usize> {
    log: [u8; N],
    exp: [u8; N],
}

/// `exp` has period `N − 1`; `log[0]` is unused.
const fn tables<const N: usize>(poly: u16) -> Tables<N> {
    let mut log = [0u8; N];
    let mut exp = [0u8; N];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < N - 1 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x as usize >= N {
            x ^= poly;
        }
        i += 1;
    }
    exp[N - 1] = exp[0];
    Tables { log, exp }
}

macro_rules! binary_field {
    ($(#[$meta:meta])* $name:ident, $order:expr, $poly:expr, $tables:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(u8);

        static $tables: Tables<$order> = tables::<$order>($poly);

        impl $name {
            pub const fn value(self) -> u8 {
                self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:#04x}", self.0)
            }
        }

        impl Field for $name {
            const ORDER: usize = $order;

            fn zero() -> Self {
                Self(0)
            }

            fn one() -> Self {
                Self(1)
            }

            fn from_index(index: usize) -> Result<Self> {
                if index >= $order {
                    return invalid(format!("{index} is not an element of a field of order {}", $order));
                }
                Ok(Self(index as u8))
            }

            fn index(self) -> usize {
                self.0 as usize
            }

            fn add(self, other: Self) -> Self {
                Self(self.0 ^ other.0)
            }

            fn mul(self, other: Self) -> Self {
                if self.0 == 0 || other.0 == 0 {
                    return Self(0);
                }
                let sum = $tables.log[self.0 as usize] as usize + $tables.log[other.0 as usize] as usize;
                Self($tables.exp[sum % ($order - 1)])
            }

            fn inv(self) -> Result<Self> {
                if self.0 == 0 {
                    return invalid("zero has no inverse");
                }
                let l = $tables.log[self.0 as usize] as usize;
                Ok(Self($tables.exp[($order - 1 - l) % ($order - 1)]))
            }
        }
    };
}

binary_field!(
    /// GF(2^8) modulo `x^8 + x^4 + x^3 + x^2 + 1`.
    Gf256, 256, 0x11D, GF256_TABLES
);

impl From<u8> for Gf256 {
    fn from(v: u8) -> Self {
        Gf256(v)
    }
}

impl From<Gf256> for u8 {
    fn from(v: Gf256) -> u8 {
        v.0
    }
}

binary_field!(
    /// GF(16) modulo `x^4 + x + 1`.
    Gf16, 16, 0x13, GF16_TABLES
);

/// Byte-level GF(2^8) operations.
pub fn gf_add(a: u8, b: u8) -> u8 {
    a ^ b
}

pub fn gf_mul(a: u8, b: u8) -> u8 {
    Gf256(a).mul(Gf256(b)).0
}

pub fn gf_inv(a: u8) -> Result<u8> {
    Gf256(a).inv().map(|x| x.0)
}
