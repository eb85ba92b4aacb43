#include "mdsmod/detect.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace mdsmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ComponentDetection {
    IndexTuple tuple;
    std::vector<int> ranks;
    double metric = 0.0;
    long evals = 0;
};

/// Exact ML search for one component. dist(e, p) is the weighted squared
/// distance of element e to point p. The DP state is the running parity
/// (sum mod Q, or label XOR for BitwiseSpc); valid tuples are the paths
/// that end in state 0.
template <typename Dist>
ComponentDetection detect_component(const ConstellationSet& set, const ModemConfig& cfg,
                                    Dist dist) {
    const int n = cfg.n, q = cfg.q, m1 = cfg.m1;
    const bool spc = cfg.mode.parity == Parity::BitwiseSpc;
    auto next_state = [&](int r, int cls) { return spc ? (r ^ (cls - 1)) : (r + cls) % q; };

    ComponentDetection out;
    // Best point of each class per element; ascending rank scan keeps the
    // smallest rank on ties.
    std::vector<double> cost(static_cast<std::size_t>(n) * q);
    std::vector<int> best_rank(static_cast<std::size_t>(n) * q);
    for (int e = 0; e < n; ++e) {
        for (int c = 0; c < q; ++c) {
            double best = kInf;
            int rank = 0;
            for (int m = 0; m < m1; ++m) {
                const double d = dist(e, set.classes[c][m]);
                if (d < best) {
                    best = d;
                    rank = m;
                }
            }
            cost[static_cast<std::size_t>(e) * q + c] = best;
            best_rank[static_cast<std::size_t>(e) * q + c] = rank;
        }
    }
    out.evals = static_cast<long>(n) * q * m1;

    // Backward pass: tail[e*q + r] is the cheapest completion of elements
    // e..N-1 starting from parity state r.
    std::vector<double> tail(static_cast<std::size_t>(n + 1) * q, kInf);
    tail[static_cast<std::size_t>(n) * q] = 0.0;
    for (int e = n - 1; e >= 0; --e) {
        for (int r = 0; r < q; ++r) {
            double best = kInf;
            for (int c = 1; c <= q; ++c) {
                const double v = cost[static_cast<std::size_t>(e) * q + (c - 1)] +
                                 tail[static_cast<std::size_t>(e + 1) * q + next_state(r, c)];
                if (v < best) best = v;
            }
            tail[static_cast<std::size_t>(e) * q + r] = best;
        }
    }

    // Forward walk; the first class matching the tail value reproduces the
    // backward minimum exactly, so ties break to the smallest class.
    out.tuple.resize(static_cast<std::size_t>(n));
    out.ranks.resize(static_cast<std::size_t>(n));
    out.metric = tail[0];
    int r = 0;
    for (int e = 0; e < n; ++e) {
        for (int c = 1; c <= q; ++c) {
            const double v = cost[static_cast<std::size_t>(e) * q + (c - 1)] +
                             tail[static_cast<std::size_t>(e + 1) * q + next_state(r, c)];
            if (v == tail[static_cast<std::size_t>(e) * q + r]) {
                out.tuple[e] = c;
                out.ranks[e] = best_rank[static_cast<std::size_t>(e) * q + (c - 1)];
                r = next_state(r, c);
                break;
            }
        }
    }
    return out;
}

}  // namespace

Codebook build_codebook(const ModemConfig& cfg, const ConstellationSet& set) {
    const int bits = total_bits_per_codeword(cfg);
    if (bits > 24) throw std::invalid_argument("codebook of 2^" + std::to_string(bits) +
                                               " words is too large to enumerate");
    Codebook cb;
    const std::size_t count = std::size_t{1} << bits;
    cb.words.reserve(count);
    cb.bits.reserve(count);
    Bits pattern(static_cast<std::size_t>(bits));
    for (std::size_t v = 0; v < count; ++v) {
        for (int j = 0; j < bits; ++j) pattern[j] = (v >> (bits - 1 - j)) & 1u;
        cb.words.push_back(modulate(pattern, cfg, set));
        cb.bits.push_back(pattern);
    }
    return cb;
}

MlResult ml_exhaustive(std::span<const std::complex<double>> y,
                       std::span<const std::complex<double>> h, const Codebook& cb) {
    if (cb.words.empty()) throw std::invalid_argument("empty codebook");
    if (y.size() != h.size() || y.size() != cb.words.front().samples.size())
        throw std::invalid_argument("observation length does not match the codebook");
    MlResult best;
    best.metric = kInf;
    for (std::size_t i = 0; i < cb.words.size(); ++i) {
        double m = 0.0;
        for (std::size_t e = 0; e < y.size(); ++e)
            m += std::norm(y[e] - h[e] * cb.words[i].samples[e]);
        if (m < best.metric) {
            best.metric = m;
            best.index = i;
        }
    }
    return best;
}

TrellisResult detect_trellis(const Equalized& eq, const ConstellationSet& set,
                             const ModemConfig& cfg) {
    validate(cfg);
    if (set.num_classes != cfg.q || set.points_per_class != cfg.m1)
        throw std::invalid_argument("constellation does not match configuration");
    if (eq.y_eq.size() != static_cast<std::size_t>(cfg.n) || eq.gain2.size() != eq.y_eq.size())
        throw std::invalid_argument("observation length does not match N");

    TrellisResult res;
    if (cfg.scheme == Scheme::IQM) {
        auto dist_i = [&](int e, const std::complex<double>& p) {
            const double d = eq.y_eq[e].real() - p.real();
            return eq.gain2[e] * d * d;
        };
        auto dist_q = [&](int e, const std::complex<double>& p) {
            const double d = eq.y_eq[e].imag() - p.real();
            return eq.gain2[e] * d * d;
        };
        ComponentDetection di = detect_component(set, cfg, dist_i);
        ComponentDetection dq = detect_component(set, cfg, dist_q);
        res.decision.tuple_i = std::move(di.tuple);
        res.decision.points_i = std::move(di.ranks);
        res.decision.tuple_q = std::move(dq.tuple);
        res.decision.points_q = std::move(dq.ranks);
        res.metric = di.metric + dq.metric;
        res.distance_evals = di.evals + dq.evals;
    } else {
        auto dist = [&](int e, const std::complex<double>& p) {
            return eq.gain2[e] * std::norm(eq.y_eq[e] - p);
        };
        ComponentDetection d = detect_component(set, cfg, dist);
        res.decision.tuple_i = std::move(d.tuple);
        res.decision.points_i = std::move(d.ranks);
        res.metric = d.metric;
        res.distance_evals = d.evals;
    }
    return res;
}

}  // namespace mdsmod
