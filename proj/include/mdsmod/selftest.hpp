#pragma once

#include <iosfwd>

namespace mdsmod {

/// Compact oracle checks (mapping tables, detector and LLR cross-checks,
/// parity-check identities, codec impulse responses, a fading BPSK
/// closed form). Prints one line per check; returns overall pass.
bool run_selftest(std::ostream& out);

}  // namespace mdsmod
