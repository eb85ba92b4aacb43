#include "mdsmod/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "mdsmod/errors.hpp"

namespace mdsmod {

ChannelRealization transmit(const Codeword& cw, double n0, std::mt19937_64& rng) {
    if (n0 < 0.0 || !std::isfinite(n0)) throw std::invalid_argument("N0 must be non-negative");
    ChannelRealization r;
    const std::size_t n = cw.samples.size();
    r.h.resize(n);
    r.w.resize(n);
    r.y.resize(n);
    std::normal_distribution<double> fading(0.0, std::sqrt(0.5));
    std::normal_distribution<double> noise(0.0, n0 > 0.0 ? std::sqrt(n0 / 2.0) : 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double hr = fading(rng), hi = fading(rng);
        r.h[i] = {hr, hi};
        if (n0 > 0.0) {
            const double wr = noise(rng), wi = noise(rng);
            r.w[i] = {wr, wi};
        } else {
            r.w[i] = {0.0, 0.0};
        }
        r.y[i] = r.h[i] * cw.samples[i] + r.w[i];
    }
    return r;
}

std::vector<double> Equalized::in_phase() const {
    std::vector<double> out(y_eq.size());
    for (std::size_t i = 0; i < y_eq.size(); ++i) out[i] = y_eq[i].real();
    return out;
}

std::vector<double> Equalized::quadrature() const {
    std::vector<double> out(y_eq.size());
    for (std::size_t i = 0; i < y_eq.size(); ++i) out[i] = y_eq[i].imag();
    return out;
}

Equalized equalize(const ChannelRealization& r) {
    if (r.h.size() != r.y.size()) throw std::invalid_argument("mismatched realization lengths");
    Equalized eq;
    eq.y_eq.resize(r.y.size());
    eq.gain2.resize(r.y.size());
    for (std::size_t i = 0; i < r.y.size(); ++i) {
        if (std::abs(r.h[i]) <= 1e-12)
            throw DegenerateChannelError("channel coefficient below equalizer threshold");
        eq.y_eq[i] = r.y[i] / r.h[i];
        eq.gain2[i] = std::norm(r.h[i]);
    }
    return eq;
}

}  // namespace mdsmod
