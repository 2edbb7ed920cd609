//! Exhaustive and randomized verification suites (filled in with the acceptance gate).
