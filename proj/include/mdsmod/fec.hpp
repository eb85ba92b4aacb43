#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mdsmod {

/// Rate-1/2 binary convolutional code. Each generator lists its tap
/// coefficients with the current input (delay 0) first; both generators
/// have constraint_length taps and a nonzero delay-0 tap.
struct ConvCode {
    int constraint_length = 0;
    std::array<std::vector<std::uint8_t>, 2> generators;
};

void validate(const ConvCode& code);

/// The 64-state code (171, 133) in octal.
ConvCode conv_code_k7();

/// The 4-state code (5, 7) in octal, free distance 5.
ConvCode conv_code_k3();

/// Encodes data (plus constraint_length-1 zero flush bits when
/// terminated) at two output bits per input, first generator first.
std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> data, const ConvCode& code,
                                      bool terminate = true);

/// Viterbi decoding of hard bits; minimizes Hamming distance. Metric ties
/// resolve toward the path whose oldest register bit is zero.
std::vector<std::uint8_t> viterbi_hard(std::span<const std::uint8_t> coded, const ConvCode& code,
                                       bool terminated = true);

/// Viterbi decoding of LLRs (positive means bit 0); maximizes the
/// correlation sum (1-2c) * L. Same tie rule as viterbi_hard.
std::vector<std::uint8_t> viterbi_soft(std::span<const double> llrs, const ConvCode& code,
                                       bool terminated = true);

}  // namespace mdsmod
