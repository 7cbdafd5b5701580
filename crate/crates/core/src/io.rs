//! JSON document shapes shared by the library and the command line.

pub const SCHEMA_VERSION: &str = "v1";
