#include "mdsmod/llr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdsmod {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Streaming log(sum exp(x_i)), stable under large exponents.
class LogSumExp {
public:
    void add(double x) {
        if (x == kNegInf) return;
        if (x > max_) {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        } else {
            sum_ += std::exp(x - max_);
        }
    }
    bool empty() const { return max_ == kNegInf; }
    double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

void check_noise(double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("N0 must be positive");
}

/// Difference of two log-domain masses; a fully underflowed side counts
/// as probability zero and saturates at the clamp bound.
double llr_from_sides(const LogSumExp& zero, const LogSumExp& one) {
    if (zero.empty() && one.empty()) return 0.0;
    if (zero.empty()) return -kLlrClamp;
    if (one.empty()) return kLlrClamp;
    return clamp_llr(zero.value() - one.value());
}

}  // namespace

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

ComponentCodebook build_component_codebook(const ModemConfig& cfg, const ConstellationSet& set) {
    if (set.kind != SetKind::PamPartition)
        throw std::invalid_argument("component codebooks are defined on PAM partitions");
    if (set.num_classes != cfg.q || set.points_per_class != cfg.m1)
        throw std::invalid_argument("constellation does not match configuration");
    const BitBudget budget = bits_per_codeword(cfg);
    if (budget.total() > 24)
        throw std::invalid_argument("component codebook too large to enumerate");
    ComponentCodebook cb;
    cb.elements = cfg.n;
    cb.bit_count = budget.total();
    const std::size_t count = std::size_t{1} << cb.bit_count;
    cb.words.reserve(count);
    cb.labels.reserve(count);
    Bits pattern(static_cast<std::size_t>(cb.bit_count));
    for (std::size_t v = 0; v < count; ++v) {
        for (int j = 0; j < cb.bit_count; ++j) pattern[j] = (v >> (cb.bit_count - 1 - j)) & 1u;
        const ComponentWord w = map_component_bits(pattern, cfg);
        std::vector<double> word(static_cast<std::size_t>(cfg.n));
        for (int e = 0; e < cfg.n; ++e) word[e] = set.point(w.tuple[e] - 1, w.ranks[e]).real();
        cb.words.push_back(std::move(word));
        cb.labels.push_back(static_cast<std::uint32_t>(v));
    }
    return cb;
}

double llr_optimal(std::span<const double> y_comp, std::span<const double> gain2,
                   const ComponentCodebook& cb, int delta, double n0, long* distance_evals) {
    check_noise(n0);
    if (cb.bit_count < 1) throw std::invalid_argument("component carries no bits");
    if (delta < 0 || delta >= cb.bit_count) throw std::invalid_argument("bit index out of range");
    if (y_comp.size() != static_cast<std::size_t>(cb.elements) || gain2.size() != y_comp.size())
        throw std::invalid_argument("observation length does not match N");
    LogSumExp side[2];
    for (std::size_t w = 0; w < cb.words.size(); ++w) {
        double t = 0.0;
        const auto& word = cb.words[w];
        for (std::size_t e = 0; e < word.size(); ++e) {
            const double d = y_comp[e] - word[e];
            t -= gain2[e] * d * d;
        }
        side[cb.bit(w, delta)].add(t / n0);
    }
    if (distance_evals) *distance_evals += static_cast<long>(cb.words.size());
    return llr_from_sides(side[0], side[1]);
}

double llr_index_elementwise(double y_elem, double gain2_elem, const ConstellationSet& set,
                             Mapping mapping, int phi, double n0, long* distance_evals) {
    check_noise(n0);
    if (set.kind != SetKind::PamPartition)
        throw std::invalid_argument("element-wise LLRs are defined on PAM partitions");
    if (set.num_classes < 2) throw std::invalid_argument("index bits require Q >= 2");
    const int l = bits_per_class(set.num_classes);
    if (phi < 0 || phi >= l) throw std::invalid_argument("class-label bit index out of range");
    LogSumExp side[2];
    for (int k = 1; k <= set.num_classes; ++k) {
        const int b = (class_label(k, l, mapping) >> (l - 1 - phi)) & 1u;
        for (const auto& p : set.classes[k - 1]) {
            const double d = y_elem - p.real();
            side[b].add(-gain2_elem * d * d / n0);
        }
    }
    if (distance_evals) *distance_evals += static_cast<long>(set.num_classes) * set.points_per_class;
    return llr_from_sides(side[0], side[1]);
}

double llr_symbol_elementwise(double y_elem, double gain2_elem, const ConstellationSet& set,
                              int m1_bit, double n0, long* distance_evals) {
    check_noise(n0);
    if (set.kind != SetKind::PamPartition)
        throw std::invalid_argument("element-wise LLRs are defined on PAM partitions");
    if (set.points_per_class < 2)
        throw std::invalid_argument("symbol bits require M1 >= 2");
    const int l_sym = bits_per_class(set.points_per_class);
    if (m1_bit < 0 || m1_bit >= l_sym)
        throw std::invalid_argument("point-label bit index out of range");
    LogSumExp side[2];
    for (int k = 1; k <= set.num_classes; ++k) {
        for (int m = 0; m < set.points_per_class; ++m) {
            const int b = (point_label(m, l_sym) >> (l_sym - 1 - m1_bit)) & 1u;
            const double d = y_elem - set.classes[k - 1][m].real();
            side[b].add(-gain2_elem * d * d / n0);
        }
    }
    if (distance_evals) *distance_evals += static_cast<long>(set.num_classes) * set.points_per_class;
    return llr_from_sides(side[0], side[1]);
}

double spc_extrinsic(std::span<const double> others, SpcMethod method) {
    if (others.empty()) throw std::invalid_argument("extrinsic needs at least one input");
    if (method == SpcMethod::TanhExact) {
        double prod = 1.0;
        for (double v : others) prod *= std::tanh(clamp_llr(v) / 2.0);
        return 2.0 * std::atanh(prod);
    }
    double sign = 1.0;
    double mag = std::numeric_limits<double>::infinity();
    for (double v : others) {
        if (v == 0.0)
            sign = 0.0;
        else if (v < 0.0)
            sign = -sign;
        mag = std::min(mag, std::abs(v));
    }
    return sign * mag;
}

std::vector<double> spc_update(std::span<const double> llrs, SpcMethod method) {
    if (llrs.size() < 2) throw std::invalid_argument("parity plane needs at least 2 positions");
    std::vector<double> out(llrs.begin(), llrs.end());
    std::vector<double> others;
    others.reserve(llrs.size() - 1);
    for (std::size_t i = 0; i + 1 < llrs.size(); ++i) {
        others.clear();
        for (std::size_t j = 0; j < llrs.size(); ++j)
            if (j != i) others.push_back(llrs[j]);
        out[i] = llrs[i] + spc_extrinsic(others, method);
    }
    return out;
}

}  // namespace mdsmod
