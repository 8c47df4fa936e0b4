#ifndef CAUSALCAST_COMMON_HPP
#define CAUSALCAST_COMMON_HPP

#include <stdexcept>
#include <string>

namespace causalcast {

// Error taxonomy surfaced by the CLI as machine-parsable categories.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad call: dimension mismatch, out-of-range option, inconsistent sizes.
struct argument_error : error {
    using error::error;
};

// Bad observations: non-finite values, ragged panels, schema violations.
struct data_error : error {
    using error::error;
};

// Numerical failure: non-SPD matrix, improper distribution, singular system.
struct numeric_error : error {
    using error::error;
};

// Filesystem problems.
struct io_error : error {
    using error::error;
};

// Run-configuration problems.
struct config_error : error {
    using error::error;
};

}  // namespace causalcast

#endif
