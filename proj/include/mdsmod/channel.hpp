#pragma once

#include <complex>
#include <random>
#include <vector>

#include "mdsmod/errors.hpp"
#include "mdsmod/modem.hpp"

namespace mdsmod {

struct ChannelRealization {
    std::vector<std::complex<double>> h, w, y;  // y(n) = h(n) s(n) + w(n)
};

/// Per-element i.i.d. Rayleigh block fading: h ~ CN(0,1), w ~ CN(0, n0).
ChannelRealization transmit(const Codeword& cw, double n0, std::mt19937_64& rng);

/// Zero-forcing equalized observation plus per-element channel weights.
struct Equalized {
    std::vector<std::complex<double>> y_eq;  // y(n)/h(n)
    std::vector<double> gain2;               // |h(n)|^2

    std::vector<double> in_phase() const;
    std::vector<double> quadrature() const;
};

/// Throws DegenerateChannelError when any |h(n)| <= 1e-12.
Equalized equalize(const ChannelRealization& r);

}  // namespace mdsmod
