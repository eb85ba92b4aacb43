#include "mdsmod/fec.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdsmod {

namespace {

struct Trellis {
    int k = 0;
    std::uint32_t g0 = 0, g1 = 0;  // packed taps, delay 0 at bit 0
    int states = 0;                // 1 << (k-1)
};

Trellis pack(const ConvCode& code) {
    validate(code);
    Trellis tr;
    tr.k = code.constraint_length;
    for (int i = 0; i < tr.k; ++i) {
        tr.g0 |= static_cast<std::uint32_t>(code.generators[0][i]) << i;
        tr.g1 |= static_cast<std::uint32_t>(code.generators[1][i]) << i;
    }
    tr.states = 1 << (tr.k - 1);
    return tr;
}

inline int parity(std::uint32_t v) { return std::popcount(v) & 1; }

/// Shared add-compare-select and traceback. The register value R packs
/// the newest input at bit 0; a state is R without its oldest bit.
/// branch(t, c0, c1) scores one transition; better(a, b) is a strict
/// improvement test, so scanning the zero predecessor first keeps it on
/// ties.
template <typename Metric, typename Branch, typename Better>
std::vector<std::uint8_t> viterbi_run(std::size_t n_steps, std::size_t data_len,
                                      const Trellis& tr, Metric worst, Branch branch,
                                      Better better) {
    const std::uint32_t state_mask = static_cast<std::uint32_t>(tr.states - 1);
    std::vector<Metric> pm(static_cast<std::size_t>(tr.states), worst);
    std::vector<Metric> next(static_cast<std::size_t>(tr.states));
    pm[0] = Metric{};
    std::vector<std::uint8_t> oldest(n_steps * static_cast<std::size_t>(tr.states));

    for (std::size_t t = 0; t < n_steps; ++t) {
        const bool flush = t >= data_len;
        for (int ns = 0; ns < tr.states; ++ns) {
            const std::uint32_t b = static_cast<std::uint32_t>(ns) & 1u;
            if (flush && b != 0) {
                next[ns] = worst;
                oldest[t * tr.states + ns] = 0;
                continue;
            }
            Metric best = worst;
            std::uint8_t best_old = 0;
            for (std::uint32_t old = 0; old < 2; ++old) {
                const std::uint32_t prev =
                    (static_cast<std::uint32_t>(ns) >> 1) | (old << (tr.k - 2));
                if (pm[prev] == worst) continue;
                const std::uint32_t reg = ((prev << 1) | b) & ((1u << tr.k) - 1);
                const Metric m = pm[prev] + branch(t, parity(reg & tr.g0), parity(reg & tr.g1));
                if (best == worst || better(m, best)) {
                    best = m;
                    best_old = static_cast<std::uint8_t>(old);
                }
            }
            next[ns] = best;
            oldest[t * tr.states + ns] = best_old;
        }
        pm.swap(next);
    }

    std::uint32_t s = 0;
    if (data_len == n_steps) {  // unterminated: best end state, lowest on ties
        Metric best = worst;
        for (int c = 0; c < tr.states; ++c) {
            if (pm[c] == worst) continue;
            if (best == worst || better(pm[c], best)) {
                best = pm[c];
                s = static_cast<std::uint32_t>(c);
            }
        }
    }
    if (pm[s] == worst) throw std::invalid_argument("no surviving decoding path");

    std::vector<std::uint8_t> bits(n_steps);
    for (std::size_t t = n_steps; t-- > 0;) {
        bits[t] = static_cast<std::uint8_t>(s & 1u);
        const std::uint32_t old = oldest[t * tr.states + s];
        s = (s >> 1) | (old << (tr.k - 2));
        s &= state_mask;
    }
    bits.resize(data_len);
    return bits;
}

std::size_t checked_steps(std::size_t coded_len, const Trellis& tr, bool terminated,
                          std::size_t* data_len) {
    if (coded_len % 2 != 0) throw std::invalid_argument("coded length must be even");
    const std::size_t n_steps = coded_len / 2;
    if (terminated) {
        const auto tail = static_cast<std::size_t>(tr.k - 1);
        if (n_steps < tail + 1)
            throw std::invalid_argument("coded length too short for a terminated block");
        *data_len = n_steps - tail;
    } else {
        if (n_steps == 0) throw std::invalid_argument("empty coded block");
        *data_len = n_steps;
    }
    return n_steps;
}

}  // namespace

void validate(const ConvCode& code) {
    if (code.constraint_length < 2 || code.constraint_length > 16)
        throw std::invalid_argument("constraint length out of range");
    for (const auto& g : code.generators) {
        if (g.size() != static_cast<std::size_t>(code.constraint_length))
            throw std::invalid_argument("generator length must equal the constraint length");
        for (std::uint8_t v : g)
            if (v > 1) throw std::invalid_argument("generator taps must be 0 or 1");
        if (g[0] != 1) throw std::invalid_argument("generators need a nonzero delay-0 tap");
    }
}

ConvCode conv_code_k7() {
    return ConvCode{7, {{{1, 1, 1, 1, 0, 0, 1}, {1, 0, 1, 1, 0, 1, 1}}}};
}

ConvCode conv_code_k3() {
    return ConvCode{3, {{{1, 0, 1}, {1, 1, 1}}}};
}

std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> data, const ConvCode& code,
                                      bool terminate) {
    const Trellis tr = pack(code);
    const std::size_t flush = terminate ? static_cast<std::size_t>(tr.k - 1) : 0;
    std::vector<std::uint8_t> out;
    out.reserve(2 * (data.size() + flush));
    std::uint32_t reg = 0;
    const std::uint32_t mask = (1u << tr.k) - 1;
    for (std::size_t i = 0; i < data.size() + flush; ++i) {
        std::uint32_t b = 0;
        if (i < data.size()) {
            if (data[i] > 1) throw std::invalid_argument("data bits must be 0 or 1");
            b = data[i];
        }
        reg = ((reg << 1) | b) & mask;
        out.push_back(static_cast<std::uint8_t>(parity(reg & tr.g0)));
        out.push_back(static_cast<std::uint8_t>(parity(reg & tr.g1)));
    }
    return out;
}

std::vector<std::uint8_t> viterbi_hard(std::span<const std::uint8_t> coded, const ConvCode& code,
                                       bool terminated) {
    const Trellis tr = pack(code);
    std::size_t data_len = 0;
    const std::size_t n_steps = checked_steps(coded.size(), tr, terminated, &data_len);
    for (std::uint8_t v : coded)
        if (v > 1) throw std::invalid_argument("coded bits must be 0 or 1");
    constexpr long worst = std::numeric_limits<long>::max();
    auto branch = [&](std::size_t t, int c0, int c1) {
        return static_cast<long>((c0 != coded[2 * t]) + (c1 != coded[2 * t + 1]));
    };
    return viterbi_run<long>(n_steps, data_len, tr, worst, branch,
                             [](long a, long b) { return a < b; });
}

std::vector<std::uint8_t> viterbi_soft(std::span<const double> llrs, const ConvCode& code,
                                       bool terminated) {
    const Trellis tr = pack(code);
    std::size_t data_len = 0;
    const std::size_t n_steps = checked_steps(llrs.size(), tr, terminated, &data_len);
    constexpr double worst = -std::numeric_limits<double>::infinity();
    auto branch = [&](std::size_t t, int c0, int c1) {
        return (1 - 2 * c0) * llrs[2 * t] + (1 - 2 * c1) * llrs[2 * t + 1];
    };
    return viterbi_run<double>(n_steps, data_len, tr, worst, branch,
                               [](double a, double b) { return a > b; });
}

}  // namespace mdsmod
