//! Finite fields, Reed–Solomon erasure codes and ramp secret sharing.

mod code;
mod gf;

pub use code::{
    is_perfectly_secret, ramp_decode, ramp_encode, rs_decode, rs_encode, share_distribution, CodeSpec, MdsCode,
    RampCode, WordDecoder, MAX_ENUMERATED,
};
pub use gf::{gf_add, gf_inv, gf_mul, Field, Gf16, Gf256};
