#include "mdsmod/selftest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mdsmod/channel.hpp"
#include "mdsmod/detect.hpp"
#include "mdsmod/fec.hpp"
#include "mdsmod/harness.hpp"
#include "mdsmod/llr.hpp"

namespace mdsmod {

namespace {

struct Reporter {
    std::ostream& out;
    bool all_ok = true;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) out << " (" << detail << ")";
        out << "\n";
        all_ok = all_ok && ok;
    }
};

struct MappingRow {
    const char* natural;
    const char* gray;
    int tuple[3];
};

// Reference mapping for N=3, Q=4: all 16 tuples with both label columns.
constexpr MappingRow kMappingTable[] = {
    {"0000", "0000", {1, 1, 2}}, {"0001", "0001", {1, 2, 1}}, {"0010", "0011", {1, 3, 4}},
    {"0011", "0010", {1, 4, 3}}, {"0111", "0110", {2, 4, 2}}, {"1011", "1110", {3, 4, 1}},
    {"1111", "1010", {4, 4, 4}}, {"1110", "1011", {4, 3, 1}}, {"1101", "1001", {4, 2, 2}},
    {"1100", "1000", {4, 1, 3}}, {"1000", "1100", {3, 1, 4}}, {"0100", "0100", {2, 1, 1}},
    {"0101", "0101", {2, 2, 4}}, {"0110", "0111", {2, 3, 3}}, {"1010", "1111", {3, 3, 2}},
    {"1001", "1101", {3, 2, 3}},
};

Bits bits_from_string(const char* s) {
    Bits out;
    for (; *s; ++s) out.push_back(static_cast<std::uint8_t>(*s - '0'));
    return out;
}

void mapping_checks(Reporter& rep) {
    bool ok = true;
    std::string detail;
    for (const auto& row : kMappingTable) {
        const IndexTuple want(row.tuple, row.tuple + 3);
        for (Mapping m : {Mapping::Gray, Mapping::Natural}) {
            const Bits bits = bits_from_string(m == Mapping::Gray ? row.gray : row.natural);
            const MappingMode mode{m, Parity::ModQ};
            const IndexTuple got = encode_tuple(bits, mode, 3, 4);
            if (got != want) {
                ok = false;
                detail = std::string("bits ") + (m == Mapping::Gray ? row.gray : row.natural);
            }
            if (decode_tuple(want, mode, 4) != bits) ok = false;
        }
    }
    rep.check("bit-to-tuple reference table", ok, detail);
}

void enumeration_checks(Reporter& rep) {
    bool ok = true;
    for (const auto& [n, q] : {std::pair{2, 4}, {3, 4}, {4, 2}, {2, 8}, {3, 8}}) {
        for (Parity p : {Parity::ModQ, Parity::BitwiseSpc}) {
            const auto tuples = enumerate_tuples(n, q, p);
            double want = std::pow(double(q), n - 1);
            if (tuples.size() != static_cast<std::size_t>(want)) ok = false;
            std::set<IndexTuple> uniq(tuples.begin(), tuples.end());
            if (uniq.size() != tuples.size()) ok = false;
            for (const auto& t : tuples)
                if (!tuple_parity_ok(t, q, p)) ok = false;
        }
    }
    rep.check("tuple enumeration cardinality and closure", ok);
}

void gray_adjacency_checks(Reporter& rep) {
    bool ok = true;
    for (int q : {2, 4, 8, 16, 64, 256}) {
        const int l = bits_per_class(q);
        for (int k = 1; k <= q; ++k) {
            const int next = k == q ? 1 : k + 1;
            const auto diff = gray_label(k, l) ^ gray_label(next, l);
            if (std::popcount(diff) != 1) ok = false;
        }
    }
    rep.check("reflected labels flip one bit between neighbors", ok);
}

void detector_checks(Reporter& rep) {
    bool ok = true;
    long ties = 0;
    std::mt19937_64 rng(0xD5EC7);
    const double snrs[] = {0.0, 6.0, 12.0};
    for (const auto& [n, q, m1] : {std::tuple{2, 2, 1}, {3, 4, 1}, {3, 4, 2}}) {
        ModemConfig cfg;
        cfg.n = n;
        cfg.q = q;
        cfg.m1 = m1;
        const ConstellationSet set = default_sets(cfg);
        const Codebook cb = build_codebook(cfg, set);
        std::uniform_int_distribution<std::size_t> pick(0, cb.words.size() - 1);
        for (int trial = 0; trial < 200; ++trial) {
            const double n0 = noise_power_from_snr_db(snrs[trial % 3]);
            const Codeword& cw = cb.words[pick(rng)];
            const ChannelRealization r = transmit(cw, n0, rng);
            Equalized eq;
            try {
                eq = equalize(r);
            } catch (const DegenerateChannelError&) {
                continue;
            }
            const TrellisResult t = detect_trellis(eq, set, cfg);
            const MlResult e = ml_exhaustive(r.y, r.h, cb);
            if (std::abs(t.metric - e.metric) > 1e-9 * std::max(1.0, e.metric)) ok = false;
            if (demap_hard(t.decision, cfg) != cb.bits[e.index]) ++ties;
            if (t.distance_evals > 2L * n * q * m1) ok = false;
        }
    }
    rep.check("trellis detector equals exhaustive search", ok,
              "metric ties resolved differently: " + std::to_string(ties));
}

/// Direct probability-domain LLR over the component codebook.
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

void llr_checks(Reporter& rep) {
    bool ok = true;
    std::mt19937_64 rng(0x11A5);
    ModemConfig cfg;
    cfg.n = 3;
    cfg.q = 4;
    cfg.m1 = 2;
    const ConstellationSet set = default_sets(cfg);
    const ComponentCodebook cb = build_component_codebook(cfg, set);
    std::uniform_int_distribution<std::uint32_t> pick(0, (1u << cb.bit_count) - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const double n0 = noise_power_from_snr_db(trial % 2 ? 4.0 : 9.0);
        const auto& word = cb.words[pick(rng)];
        Codeword cw;
        for (double v : word) cw.samples.emplace_back(v, 0.0);
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
            if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(b))) ok = false;
        }
    }
    rep.check("joint LLR equals direct probability ratio", ok);

    // With the second element faded out, the joint index LLR of a 2-tuple
    // reduces to the element-wise one.
    bool red_ok = true;
    ModemConfig c2;
    c2.n = 2;
    c2.q = 4;
    c2.m1 = 1;
    const ConstellationSet s2 = default_sets(c2);
    const ComponentCodebook cb2 = build_component_codebook(c2, s2);
    for (double yv : {-0.9, -0.2, 0.3, 1.4}) {
        Equalized eq;
        eq.y_eq = {{yv, 0.0}, {0.0, 0.0}};
        eq.gain2 = {1.3, 0.0};
        const std::vector<double> y = eq.in_phase();
        for (int phi = 0; phi < 2; ++phi) {
            const double joint = llr_optimal(y, eq.gain2, cb2, phi, 0.5);
            const double isolated =
                llr_index_elementwise(yv, 1.3, s2, c2.mode.mapping, phi, 0.5);
            if (std::abs(joint - isolated) > 1e-9 * std::max(1.0, std::abs(isolated)))
                red_ok = false;
        }
    }
    rep.check("joint index LLR reduces to element-wise form", red_ok);
}

void spc_checks(Reporter& rep) {
    bool ok = true;
    // numeric oracle: tanh(0.5) tanh(1.0) = 0.35202855...
    const double in[] = {1.0, 2.0};
    const double exact = spc_extrinsic(in, SpcMethod::TanhExact);
    const double want = 2.0 * std::atanh(std::tanh(0.5) * std::tanh(1.0));
    if (std::abs(exact - want) > 1e-12) ok = false;
    if (std::abs(spc_extrinsic(in, SpcMethod::MinSum) - 1.0) > 1e-12) ok = false;
    // exact magnitude never exceeds min-sum, signs agree
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> vals(2 + trial % 4);
        for (auto& v : vals) v = u(rng);
        const double t = spc_extrinsic(vals, SpcMethod::TanhExact);
        const double m = spc_extrinsic(vals, SpcMethod::MinSum);
        if (std::abs(t) > std::abs(m) + 1e-9) ok = false;
        if (t * m < 0.0) ok = false;
    }
    const double zero_in[] = {0.0, 3.0};
    if (spc_extrinsic(zero_in, SpcMethod::TanhExact) != 0.0) ok = false;
    if (spc_extrinsic(zero_in, SpcMethod::MinSum) != 0.0) ok = false;
    rep.check("parity-check extrinsics", ok);
}

void fec_checks(Reporter& rep) {
    bool ok = true;
    const ConvCode k3 = conv_code_k3();
    const Bits impulse = {1, 0, 0};
    const Bits want = {1, 1, 0, 1, 1, 1, 0, 0, 0, 0};
    if (conv_encode(impulse, k3, true) != want) ok = false;

    // every single bit flip in a short terminated block must correct
    const ConvCode k7 = conv_code_k7();
    for (const ConvCode& code : {k3, k7}) {
        std::mt19937_64 rng(5);
        Bits data(24);
        std::uniform_int_distribution<int> bit(0, 1);
        for (auto& b : data) b = static_cast<std::uint8_t>(bit(rng));
        const Bits coded = conv_encode(data, code, true);
        for (std::size_t flip = 0; flip < coded.size(); ++flip) {
            Bits corrupted = coded;
            corrupted[flip] ^= 1;
            if (viterbi_hard(corrupted, code, true) != data) ok = false;
            std::vector<double> llrs(corrupted.size());
            for (std::size_t i = 0; i < corrupted.size(); ++i)
                llrs[i] = corrupted[i] ? -1.0 : 1.0;
            if (viterbi_soft(llrs, code, true) != data) ok = false;
        }
    }
    rep.check("convolutional codec impulse response and single-flip recovery", ok);
}

void anchor_check(Reporter& rep) {
    SimConfig cfg;
    cfg.modem.n = 2;
    cfg.modem.q = 1;
    cfg.modem.m1 = 2;
    cfg.pipeline = Pipeline::UncodedML;
    cfg.stop.min_bit_errors = 400;
    cfg.stop.max_frames = 2000000;
    cfg.master_seed = 99;
    cfg.workers = 4;
    const double gamma_b_db = 10.0;
    const double snr_db = gamma_b_db + 10.0 * std::log10(2.0);  // eta = 2 bits per element
    const BerRecord rec = run_point(cfg, snr_db, 0);
    const double g = std::pow(10.0, gamma_b_db / 10.0);
    const double p = 0.5 * (1.0 - std::sqrt(g / (1.0 + g)));
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(rec.bits));
    rep.check("fading BPSK closed form",
              std::abs(rec.ber - p) <= 4.0 * sigma,
              "ber=" + std::to_string(rec.ber) + " expected=" + std::to_string(p));
}

}  // namespace

bool run_selftest(std::ostream& out) {
    Reporter rep{out};
    mapping_checks(rep);
    enumeration_checks(rep);
    gray_adjacency_checks(rep);
    detector_checks(rep);
    llr_checks(rep);
    spc_checks(rep);
    fec_checks(rep);
    anchor_check(rep);
    out << (rep.all_ok ? "selftest passed\n" : "selftest FAILED\n");
    return rep.all_ok;
}

}  // namespace mdsmod
