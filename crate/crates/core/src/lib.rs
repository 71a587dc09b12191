//! Certified explicit height bounds for S-integral points on the modular
//! curves `X0(p)`, together with the finite computations the bounds rest on.

pub mod arith;
pub mod exactnum;
pub mod poly;
pub mod numfield;
pub mod modgroup;
pub mod bounds;
pub mod heights;
