//! Library surface of the command line crate: the built-in corpus and the
//! corpus file loader, shared between the `ql` binary and integration tests.

pub mod corpus;
