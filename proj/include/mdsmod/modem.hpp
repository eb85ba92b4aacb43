#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mdsmod/constellation.hpp"
#include "mdsmod/mds_code.hpp"

namespace mdsmod {

enum class Scheme { IQM, PSK };

struct ModemConfig {
    int n = 2;   // elements per codeword
    int q = 2;   // disjoint classes
    int m1 = 1;  // points per class
    Scheme scheme = Scheme::IQM;
    MappingMode mode;
};

/// Throws std::invalid_argument on an unusable configuration
/// (N < 2, or Q / M1 not powers of two).
void validate(const ModemConfig& cfg);

struct Codeword {
    std::vector<std::complex<double>> samples;
};

/// Bit budget of one component stream (the I or Q stream for IQM, the
/// single stream for PSK).
struct BitBudget {
    int index_bits = 0;   // (N-1) log2 Q
    int symbol_bits = 0;  // N log2 M1
    int total() const { return index_bits + symbol_bits; }
};

BitBudget bits_per_codeword(const ModemConfig& cfg);

/// Bits consumed by modulate(): twice the component budget for IQM.
int total_bits_per_codeword(const ModemConfig& cfg);

/// Bits per channel use.
double spectral_efficiency(const ModemConfig& cfg);

/// The unit-energy sets of this configuration: PAM partitions at average
/// energy 1/2 per component for IQM, unit-amplitude rotations for PSK.
ConstellationSet default_sets(const ModemConfig& cfg);

/// Class tuple plus within-class point rank per element of one component.
struct ComponentWord {
    IndexTuple tuple;
    std::vector<int> ranks;
};

/// Consumes [index bits | symbol bits] of one component stream.
ComponentWord map_component_bits(std::span<const std::uint8_t> bits, const ModemConfig& cfg);
Bits unmap_component_bits(const ComponentWord& word, const ModemConfig& cfg);

/// Bit order: [I-index | I-symbols | Q-index | Q-symbols] for IQM,
/// [index | symbols] for PSK. MSB first within each label group.
Codeword modulate(std::span<const std::uint8_t> bits, const ModemConfig& cfg,
                  const ConstellationSet& set);

/// Hard detector output. tuple_q/points_q stay empty for PSK.
struct HardDecision {
    IndexTuple tuple_i, tuple_q;
    std::vector<int> points_i, points_q;
};

/// Inverse of modulate() on hard decisions. Throws IntegrityError when a
/// tuple does not close.
Bits demap_hard(const HardDecision& decision, const ModemConfig& cfg);

}  // namespace mdsmod
