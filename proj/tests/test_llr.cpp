#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "mdsmod/channel.hpp"
#include "mdsmod/llr.hpp"

using namespace mdsmod;

namespace {

/// Independent oracle: the same posterior ratio computed with plain
/// probability products (no log-sum-exp), in extended precision.
double llr_direct(const std::vector<double>& y, const std::vector<double>& g,
                  const ComponentCodebook& cb, int delta, double n0) {
    long double mass[2] = {0.0L, 0.0L};
    for (std::size_t w = 0; w < cb.words.size(); ++w) {
        long double p = 1.0L;
        for (std::size_t e = 0; e < y.size(); ++e) {
            const long double d = y[e] - cb.words[w][e];
            p *= std::exp(-static_cast<long double>(g[e]) * d * d / n0);
        }
        mass[cb.bit(w, delta)] += p;
    }
    if (mass[0] == 0.0L && mass[1] == 0.0L) return 0.0;
    if (mass[1] == 0.0L) return kLlrClamp;
    if (mass[0] == 0.0L) return -kLlrClamp;
    return std::clamp(static_cast<double>(std::log(mass[0] / mass[1])), -kLlrClamp, kLlrClamp);
}

ModemConfig make_cfg(int n, int q, int m1) {
    ModemConfig cfg;
    cfg.n = n;
    cfg.q = q;
    cfg.m1 = m1;
    return cfg;
}

}  // namespace

TEST_CASE("component codebook enumerates all words with their labels") {
    const ModemConfig cfg = make_cfg(3, 4, 2);
    const ConstellationSet set = default_sets(cfg);
    const ComponentCodebook cb = build_component_codebook(cfg, set);
    CHECK(cb.elements == 3);
    CHECK(cb.bit_count == 7);
    CHECK(cb.words.size() == 128);
    // labels are the enumeration order itself
    for (std::size_t w = 0; w < cb.labels.size(); ++w) CHECK(cb.labels[w] == w);
    // every bit position takes both values
    for (int delta = 0; delta < cb.bit_count; ++delta) {
        int ones = 0;
        for (std::size_t w = 0; w < cb.words.size(); ++w) ones += cb.bit(w, delta);
        CHECK(ones == 64);
    }
}

TEST_CASE("joint llr equals the direct probability ratio") {
    std::mt19937_64 rng(4711);
    for (const auto& [n, q, m1] : {std::tuple{2, 2, 1}, {3, 4, 1}, {3, 4, 2}}) {
        const ModemConfig cfg = make_cfg(n, q, m1);
        const ConstellationSet set = default_sets(cfg);
        const ComponentCodebook cb = build_component_codebook(cfg, set);
        std::uniform_int_distribution<std::uint32_t> pick(0, (1u << cb.bit_count) - 1);
        for (int trial = 0; trial < 300; ++trial) {
            const double n0 = std::pow(10.0, -(trial % 3 ? 4.0 : 9.0) / 10.0);
            Codeword cw;
            for (double v : cb.words[pick(rng)]) cw.samples.emplace_back(v, 0.0);
            const ChannelRealization r = transmit(cw, n0, rng);
            Equalized eq;
            try {
                eq = equalize(r);
            } catch (const DegenerateChannelError&) {
                continue;
            }
            const std::vector<double> y = eq.in_phase();
            for (int delta = 0; delta < cb.bit_count; ++delta) {
                const double a = llr_optimal(y, eq.gain2, cb, delta, n0);
                const double b = llr_direct(y, eq.gain2, cb, delta, n0);
                CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)));
            }
        }
    }
}

TEST_CASE("joint index llr reduces to element-wise when the rest fades out") {
    for (Mapping mapping : {Mapping::Gray, Mapping::Natural}) {
        for (const auto& [q, m1] : {std::pair{2, 1}, {4, 1}, {4, 2}}) {
            ModemConfig cfg = make_cfg(2, q, m1);
            cfg.mode.mapping = mapping;
            const ConstellationSet set = default_sets(cfg);
            const ComponentCodebook cb = build_component_codebook(cfg, set);
            const int l = bits_per_class(q);
            for (double yv : {-1.1, -0.4, 0.05, 0.8}) {
                std::vector<double> y = {yv, 0.3};
                std::vector<double> g = {1.7, 0.0};  // second element fully faded
                for (int phi = 0; phi < l; ++phi) {
                    const double joint = llr_optimal(y, g, cb, phi, 0.4);
                    const double lone =
                        llr_index_elementwise(yv, 1.7, set, mapping, phi, 0.4);
                    CHECK(std::abs(joint - lone) <= 1e-9 * std::max(1.0, std::abs(lone)));
                }
            }
        }
    }
}

TEST_CASE("joint symbol llr factorizes without any fading") {
    // with Q=1 the elements are independent, so the joint marginal must
    // equal the element-wise symbol LLR exactly
    const ModemConfig cfg = make_cfg(2, 1, 4);
    const ConstellationSet set = default_sets(cfg);
    const ComponentCodebook cb = build_component_codebook(cfg, set);
    const int l_sym = bits_per_class(cfg.m1);
    std::vector<double> y = {0.35, -0.6};
    std::vector<double> g = {1.2, 0.7};
    for (int e = 0; e < 2; ++e) {
        for (int b = 0; b < l_sym; ++b) {
            const int delta = e * l_sym + b;
            const double joint = llr_optimal(y, g, cb, delta, 0.3);
            const double lone = llr_symbol_elementwise(y[e], g[e], set, b, 0.3);
            CHECK(std::abs(joint - lone) <= 1e-9 * std::max(1.0, std::abs(lone)));
        }
    }
}

TEST_CASE("bpsk symbol llr matches the closed form") {
    const ModemConfig cfg = make_cfg(2, 1, 2);
    const ConstellationSet set = default_sets(cfg);
    const double a = set.classes[0][1].real();
    CHECK(a == doctest::Approx(std::sqrt(0.5)));
    for (double yv : {-0.9, -0.1, 0.2, 1.5}) {
        for (double g : {0.3, 1.0, 2.4}) {
            const double n0 = 0.5;
            const double want = std::clamp(-4.0 * g * a * yv / n0, -kLlrClamp, kLlrClamp);
            const double got = llr_symbol_elementwise(yv, g, set, 0, n0);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("vanishing noise saturates at the clamp") {
    const ModemConfig cfg = make_cfg(2, 4, 1);
    const ConstellationSet set = default_sets(cfg);
    const ComponentCodebook cb = build_component_codebook(cfg, set);
    // observation equal to a codeword: the favored side wins outright
    const std::vector<double> y(cb.words[0].begin(), cb.words[0].end());
    const std::vector<double> g = {1.0, 1.0};
    const double tiny = 1e-9;
    const double v = llr_optimal(y, g, cb, 0, tiny);
    CHECK(std::abs(v) == doctest::Approx(kLlrClamp));
    const double w = llr_index_elementwise(y[0], 1.0, set, Mapping::Gray, 0, tiny);
    CHECK(std::abs(w) == doctest::Approx(kLlrClamp));
}

TEST_CASE("llr argument validation") {
    const ModemConfig cfg = make_cfg(2, 4, 1);
    const ConstellationSet set = default_sets(cfg);
    const ComponentCodebook cb = build_component_codebook(cfg, set);
    const std::vector<double> y = {0.0, 0.0};
    const std::vector<double> g = {1.0, 1.0};
    CHECK_THROWS_AS(llr_optimal(y, g, cb, -1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(llr_optimal(y, g, cb, 2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(llr_optimal(y, g, cb, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(llr_index_elementwise(0.0, 1.0, set, Mapping::Gray, 2, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(llr_symbol_elementwise(0.0, 1.0, set, 0, 0.5), std::invalid_argument);
    const ConstellationSet one = build_pam_partition(1, 2, 0.5);
    CHECK_THROWS_AS(llr_index_elementwise(0.0, 1.0, one, Mapping::Gray, 0, 0.5),
                    std::invalid_argument);
}

TEST_CASE("distance accounting") {
    const ModemConfig cfg = make_cfg(3, 4, 2);
    const ConstellationSet set = default_sets(cfg);
    const ComponentCodebook cb = build_component_codebook(cfg, set);
    const std::vector<double> y = {0.1, -0.2, 0.3};
    const std::vector<double> g = {1.0, 0.5, 2.0};
    long evals = 0;
    llr_optimal(y, g, cb, 3, 0.5, &evals);
    CHECK(evals == 128);  // Q^(N-1) M1^N
    evals = 0;
    llr_index_elementwise(0.1, 1.0, set, Mapping::Gray, 0, 0.5, &evals);
    CHECK(evals == 8);  // Q M1
    evals = 0;
    llr_symbol_elementwise(0.1, 1.0, set, 0, 0.5, &evals);
    CHECK(evals == 8);
}

TEST_CASE("parity-check extrinsic values") {
    const double two[] = {1.0, 2.0};
    CHECK(spc_extrinsic(two, SpcMethod::TanhExact) ==
          doctest::Approx(2.0 * std::atanh(std::tanh(0.5) * std::tanh(1.0))).epsilon(1e-12));
    CHECK(spc_extrinsic(two, SpcMethod::MinSum) == doctest::Approx(1.0));
    const double mixed[] = {-3.0, 2.0, 1.5};
    CHECK(spc_extrinsic(mixed, SpcMethod::MinSum) == doctest::Approx(-1.5));
    CHECK(spc_extrinsic(mixed, SpcMethod::TanhExact) < 0.0);
    const double with_zero[] = {0.0, 4.0};
    CHECK(spc_extrinsic(with_zero, SpcMethod::TanhExact) == 0.0);
    CHECK(spc_extrinsic(with_zero, SpcMethod::MinSum) == 0.0);
    const double single[] = {2.5};
    CHECK(spc_extrinsic(single, SpcMethod::TanhExact) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(spc_extrinsic(single, SpcMethod::MinSum) == doctest::Approx(2.5));
    CHECK_THROWS_AS(spc_extrinsic(std::span<const double>{}, SpcMethod::MinSum),
                    std::invalid_argument);
}

TEST_CASE("exact extrinsic never exceeds min-sum in magnitude, signs agree") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> vals(2 + trial % 5);
        for (auto& v : vals) v = u(rng);
        const double t = spc_extrinsic(vals, SpcMethod::TanhExact);
        const double m = spc_extrinsic(vals, SpcMethod::MinSum);
        CHECK(std::abs(t) <= std::abs(m) + 1e-9);
        CHECK(t * m >= 0.0);
    }
}

TEST_CASE("spc update refreshes data positions and keeps parity") {
    const std::vector<double> in = {1.0, -2.0, 0.5};
    for (SpcMethod method : {SpcMethod::TanhExact, SpcMethod::MinSum}) {
        const std::vector<double> out = spc_update(in, method);
        REQUIRE(out.size() == 3);
        const double e0[] = {-2.0, 0.5};
        const double e1[] = {1.0, 0.5};
        CHECK(out[0] == doctest::Approx(1.0 + spc_extrinsic(e0, method)).epsilon(1e-12));
        CHECK(out[1] == doctest::Approx(-2.0 + spc_extrinsic(e1, method)).epsilon(1e-12));
        CHECK(out[2] == 0.5);  // parity position passes through
    }
    CHECK_THROWS_AS(spc_update(std::vector<double>{1.0}, SpcMethod::MinSum),
                    std::invalid_argument);
}

TEST_CASE("spc update with a confident parity reinforces agreeing data") {
    // strong positive parity and strong positive partner push the LLR up
    const std::vector<double> in = {2.0, 6.0, 6.0};
    const std::vector<double> out = spc_update(in, SpcMethod::TanhExact);
    CHECK(out[0] > in[0]);
    // a contradicting partner flips the extrinsic sign
    const std::vector<double> in2 = {2.0, -6.0, 6.0};
    const std::vector<double> out2 = spc_update(in2, SpcMethod::TanhExact);
    CHECK(out2[0] < in2[0]);
}
