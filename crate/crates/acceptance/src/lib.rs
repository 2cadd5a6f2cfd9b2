//! Acceptance checks for `rigid-inertia`; see `tests/acceptance.rs`.
