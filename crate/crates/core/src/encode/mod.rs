//! SAT encodings: machine existence under a state bound, plus the witness
//! structure bounding the number of simple cycles.

mod bs;
mod cs;
mod scc;

pub use bs::{decode_machine, encode_bs, BsEncoding, DecodeError, SynthesisResult};
pub use cs::{decode_witness, encode_bocy, BocyDecoded, BocyEncoding};
