#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdsmod/constellation.hpp"
#include "mdsmod/modem.hpp"

namespace mdsmod {

/// All LLR outputs are clamped to this magnitude. Positive means bit 0.
inline constexpr double kLlrClamp = 30.0;

enum class SpcMethod { TanhExact, MinSum };

double clamp_llr(double v);

/// All Q^(N-1) M1^N real-valued words of one IQM component stream,
/// paired with the MSB-first packed bit label selecting each word.
struct ComponentCodebook {
    int elements = 0;   // N
    int bit_count = 0;  // (N-1) log2 Q + N log2 M1
    std::vector<std::vector<double>> words;
    std::vector<std::uint32_t> labels;

    int bit(std::size_t word, int delta) const {
        return static_cast<int>((labels[word] >> (bit_count - 1 - delta)) & 1u);
    }
};

ComponentCodebook build_component_codebook(const ModemConfig& cfg, const ConstellationSet& set);

/// Jointly optimal LLR of component bit delta given the equalized
/// component observation: log-sum-exp over the full component codebook
/// with exponents -gain2(n) (y(n) - s(n))^2 / n0. Marginalizes over
/// Q^(N-1) M1^N words per call (instrumented via distance_evals).
double llr_optimal(std::span<const double> y_comp, std::span<const double> gain2,
                   const ComponentCodebook& cb, int delta, double n0,
                   long* distance_evals = nullptr);

/// Element-wise LLR of class-label bit phi from one observation,
/// marginalizing the Q*M1 points grouped by that label bit.
double llr_index_elementwise(double y_elem, double gain2_elem, const ConstellationSet& set,
                             Mapping mapping, int phi, double n0, long* distance_evals = nullptr);

/// Element-wise LLR of within-class point-label bit m1_bit, marginalizing
/// the Q*M1 points grouped by the rank label. Requires M1 >= 2.
double llr_symbol_elementwise(double y_elem, double gain2_elem, const ConstellationSet& set,
                              int m1_bit, double n0, long* distance_evals = nullptr);

/// Single-parity-check extrinsic from the other positions' LLRs:
/// TanhExact is 2 artanh(prod tanh(L/2)) with inputs clamped to +-30;
/// MinSum is prod sign(L) * min |L|.
double spc_extrinsic(std::span<const double> others, SpcMethod method);

/// Parity-refreshed LLRs of one label plane. Positions 0..N-2 carry data
/// and gain the extrinsic of all other positions (computed from the
/// inputs); the parity position N-1 passes through unchanged.
std::vector<double> spc_update(std::span<const double> llrs, SpcMethod method);

}  // namespace mdsmod
