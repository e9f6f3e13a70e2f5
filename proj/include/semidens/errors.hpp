#pragma once

#include <stdexcept>
#include <string>

namespace semidens {

// Sample too small or has zero variance; no Gaussian fit exists.
struct degenerate_sample_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested a kernel derivative beyond the configured maximum order.
struct unsupported_order_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The local-fit denominator integral does not exist for this (alpha, h).
struct divergent_denominator_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical integration failed to converge.
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A data-driven index selector hit a degenerate functional estimate.
// Callers are expected to fall back to alpha = 2.
struct selector_degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A selector pipeline stage produced an unusable bandwidth; carries the
// partial trace formatted into the message.
struct stage_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monte Carlo harness failure (too many per-replication estimator failures).
struct harness_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or unreadable input data.
struct ingest_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace semidens
