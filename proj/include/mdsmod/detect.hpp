#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "mdsmod/channel.hpp"
#include "mdsmod/modem.hpp"

namespace mdsmod {

/// Every codeword of a configuration, paired with the bits producing it.
/// Ordered by the bit pattern read as an MSB-first integer.
struct Codebook {
    std::vector<Codeword> words;
    std::vector<Bits> bits;
};

/// Enumerates all 2^B codewords. Throws std::invalid_argument when B
/// exceeds 24 (the table would not fit in memory).
Codebook build_codebook(const ModemConfig& cfg, const ConstellationSet& set);

struct MlResult {
    std::size_t index = 0;  // lowest index among metric ties
    double metric = 0.0;    // sum |y(n) - h(n) s(n)|^2
};

/// Brute-force maximum likelihood over the whole codebook.
MlResult ml_exhaustive(std::span<const std::complex<double>> y,
                       std::span<const std::complex<double>> h, const Codebook& cb);

struct TrellisResult {
    HardDecision decision;
    double metric = 0.0;      // sum gain2(n) |y_eq(n) - s(n)|^2
    long distance_evals = 0;  // point distance evaluations, all components
};

/// Exact ML detection in O(N(QM1 + Q^2)) per component via dynamic
/// programming over the parity state (running sum mod Q, or the running
/// label XOR in BitwiseSpc mode). Metric ties resolve to the
/// lexicographically smallest class tuple, then the smallest point ranks.
TrellisResult detect_trellis(const Equalized& eq, const ConstellationSet& set,
                             const ModemConfig& cfg);

}  // namespace mdsmod
