//! Desk-scale workbench over the core library: window builders with shared
//! grid policies, JSON document formats, and a brute-force verification
//! inventory for the standing claims.

pub mod builders;
pub mod io;
pub mod verify;
