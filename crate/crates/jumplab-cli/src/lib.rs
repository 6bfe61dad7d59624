//! Problem-file handling for the `jumplab` binary, exposed as a library so
//! integration tests can exercise parsing and validation directly.

pub mod problem;
