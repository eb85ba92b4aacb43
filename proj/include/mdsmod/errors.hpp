#pragma once

#include <stdexcept>

namespace mdsmod {

/// Decoding input violates a structural constraint (e.g. a tuple whose
/// parity element does not close the code).
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// |h(n)| fell below the equalizer threshold. The Monte Carlo harness
/// redraws such trials and counts them.
class DegenerateChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mdsmod
