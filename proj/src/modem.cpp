#include "mdsmod/modem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mdsmod/errors.hpp"

namespace mdsmod {

void validate(const ModemConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("N must be at least 2");
    bits_per_class(cfg.q);
    bits_per_class(cfg.m1);  // within-class labels need a power of two as well
}

BitBudget bits_per_codeword(const ModemConfig& cfg) {
    validate(cfg);
    BitBudget b;
    b.index_bits = (cfg.n - 1) * bits_per_class(cfg.q);
    b.symbol_bits = cfg.n * bits_per_class(cfg.m1);
    return b;
}

int total_bits_per_codeword(const ModemConfig& cfg) {
    const BitBudget b = bits_per_codeword(cfg);
    return cfg.scheme == Scheme::IQM ? 2 * b.total() : b.total();
}

double spectral_efficiency(const ModemConfig& cfg) {
    return static_cast<double>(total_bits_per_codeword(cfg)) / cfg.n;
}

ConstellationSet default_sets(const ModemConfig& cfg) {
    validate(cfg);
    return cfg.scheme == Scheme::IQM ? build_pam_partition(cfg.q, cfg.m1, 0.5)
                                     : build_psk_partition(cfg.q, cfg.m1, 1.0);
}

ComponentWord map_component_bits(std::span<const std::uint8_t> bits, const ModemConfig& cfg) {
    const BitBudget budget = bits_per_codeword(cfg);
    if (bits.size() != static_cast<std::size_t>(budget.total()))
        throw std::invalid_argument("expected " + std::to_string(budget.total()) +
                                    " component bits, got " + std::to_string(bits.size()));
    ComponentWord word;
    word.tuple = encode_tuple(bits.first(static_cast<std::size_t>(budget.index_bits)), cfg.mode,
                              cfg.n, cfg.q);
    const int l_sym = bits_per_class(cfg.m1);
    word.ranks.resize(static_cast<std::size_t>(cfg.n), 0);
    for (int e = 0; e < cfg.n; ++e) {
        const auto group = bits.subspan(
            static_cast<std::size_t>(budget.index_bits) + static_cast<std::size_t>(e) * l_sym,
            static_cast<std::size_t>(l_sym));
        word.ranks[static_cast<std::size_t>(e)] = point_from_label(bits_value(group), l_sym);
    }
    return word;
}

Bits unmap_component_bits(const ComponentWord& word, const ModemConfig& cfg) {
    if (word.tuple.size() != static_cast<std::size_t>(cfg.n) ||
        word.ranks.size() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("component word length does not match N");
    Bits out = decode_tuple(word.tuple, cfg.mode, cfg.q);
    const int l_sym = bits_per_class(cfg.m1);
    for (int rank : word.ranks) {
        if (rank < 0 || rank >= cfg.m1) throw std::invalid_argument("point rank outside 0..M1-1");
        const Bits group = label_bits(point_label(rank, l_sym), l_sym);
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

Codeword modulate(std::span<const std::uint8_t> bits, const ModemConfig& cfg,
                  const ConstellationSet& set) {
    const int expected = total_bits_per_codeword(cfg);
    if (bits.size() != static_cast<std::size_t>(expected))
        throw std::invalid_argument("expected " + std::to_string(expected) + " bits, got " +
                                    std::to_string(bits.size()));
    if (set.num_classes != cfg.q || set.points_per_class != cfg.m1)
        throw std::invalid_argument("constellation does not match configuration");
    Codeword cw;
    cw.samples.resize(static_cast<std::size_t>(cfg.n));
    if (cfg.scheme == Scheme::IQM) {
        const std::size_t half = bits.size() / 2;
        const ComponentWord wi = map_component_bits(bits.first(half), cfg);
        const ComponentWord wq = map_component_bits(bits.subspan(half), cfg);
        for (int e = 0; e < cfg.n; ++e) {
            cw.samples[e] = {set.point(wi.tuple[e] - 1, wi.ranks[e]).real(),
                             set.point(wq.tuple[e] - 1, wq.ranks[e]).real()};
        }
    } else {
        const ComponentWord w = map_component_bits(bits, cfg);
        for (int e = 0; e < cfg.n; ++e) cw.samples[e] = set.point(w.tuple[e] - 1, w.ranks[e]);
    }
    return cw;
}

Bits demap_hard(const HardDecision& decision, const ModemConfig& cfg) {
    validate(cfg);
    Bits out = unmap_component_bits({decision.tuple_i, decision.points_i}, cfg);
    if (cfg.scheme == Scheme::IQM) {
        const Bits q = unmap_component_bits({decision.tuple_q, decision.points_q}, cfg);
        out.insert(out.end(), q.begin(), q.end());
    }
    return out;
}

}  // namespace mdsmod
