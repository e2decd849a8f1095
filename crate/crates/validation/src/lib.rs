//! Holds the acceptance suite in `tests/acceptance.rs`. It is kept in its
//! own package so that it runs after every other test target of the
//! workspace.
