//! Acceptance gate for the workspace; the criteria live in `tests/acceptance.rs`.
