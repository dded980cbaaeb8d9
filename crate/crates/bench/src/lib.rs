//! Criterion benches for the engine live in `benches/`; there is no library code.
