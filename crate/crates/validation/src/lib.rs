//! Holds the `acceptance` test target. It has no library code of its own.
