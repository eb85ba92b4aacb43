#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mdsmod/channel.hpp"
#include "mdsmod/detect.hpp"
#include "mdsmod/harness.hpp"

using namespace mdsmod;

namespace {

SimConfig base_cfg() {
    SimConfig cfg;
    cfg.modem.n = 2;
    cfg.modem.q = 4;
    cfg.modem.m1 = 1;
    cfg.pipeline = Pipeline::UncodedML;
    cfg.master_seed = 7;
    return cfg;
}

bool same_counts(const BerRecord& a, const BerRecord& b) {
    return a.bits == b.bits && a.errors == b.errors && a.frames == b.frames &&
           a.redraws == b.redraws && a.snr_db == b.snr_db && a.ebn0_db == b.ebn0_db;
}

}  // namespace

TEST_CASE("snr bookkeeping") {
    CHECK(noise_power_from_snr_db(0.0) == doctest::Approx(1.0));
    CHECK(noise_power_from_snr_db(10.0) == doctest::Approx(0.1));
    SimConfig cfg = base_cfg();
    // 4 bits over 2 elements: eta = 2, uncoded rate 1
    CHECK(spectral_efficiency(cfg.modem) == doctest::Approx(2.0));
    CHECK(ebn0_db_from_snr_db(cfg, 10.0) == doctest::Approx(10.0 - 10.0 * std::log10(2.0)));
    cfg.pipeline = Pipeline::CodedHard;
    cfg.fec = FecId::K7;
    CHECK(code_rate(cfg) == doctest::Approx(0.5));
    CHECK(ebn0_db_from_snr_db(cfg, 10.0) == doctest::Approx(10.0));
}

TEST_CASE("configuration inconsistencies surface before any trial") {
    SimConfig cfg = base_cfg();
    cfg.pipeline = Pipeline::CodedLcSoft;
    CHECK_THROWS_AS(normalized(cfg), std::invalid_argument);  // missing fec
    cfg.fec = FecId::K7;
    cfg.modem.scheme = Scheme::PSK;
    CHECK_THROWS_AS(normalized(cfg), std::invalid_argument);  // soft on psk
    cfg.pipeline = Pipeline::CodedHard;
    CHECK_NOTHROW(normalized(cfg));  // hard decisions work on psk
    cfg = base_cfg();
    cfg.fec = FecId::K3;
    CHECK_THROWS_AS(normalized(cfg), std::invalid_argument);  // uncoded with a code
    cfg = base_cfg();
    cfg.workers = 0;
    CHECK_THROWS_AS(normalized(cfg), std::invalid_argument);
    cfg = base_cfg();
    cfg.stop.min_bit_errors = 0;
    CHECK_THROWS_AS(normalized(cfg), std::invalid_argument);
    cfg = base_cfg();
    cfg.modem.q = 1;
    cfg.modem.m1 = 1;
    CHECK_THROWS_AS(normalized(cfg), std::invalid_argument);  // zero bits per codeword
}

TEST_CASE("parity mode follows the pipeline") {
    SimConfig cfg = base_cfg();
    cfg.pipeline = Pipeline::CodedLcSoftSpc;
    cfg.fec = FecId::K7;
    cfg.modem.mode.parity = Parity::ModQ;
    CHECK(normalized(cfg).modem.mode.parity == Parity::BitwiseSpc);
    cfg.pipeline = Pipeline::CodedOptSoft;
    cfg.modem.mode.parity = Parity::BitwiseSpc;
    CHECK(normalized(cfg).modem.mode.parity == Parity::ModQ);
}

TEST_CASE("high snr points are error free") {
    SimConfig cfg = base_cfg();
    cfg.stop.max_frames = 50;
    const BerRecord rec = run_point(cfg, 60.0, 0);
    CHECK(rec.errors == 0);
    CHECK(rec.frames == 50);
    CHECK(rec.bits == 50 * 4);
    CHECK(rec.ber == 0.0);
}

TEST_CASE("stop rule halts on the error budget at round granularity") {
    SimConfig cfg = base_cfg();
    cfg.stop.min_bit_errors = 10;
    cfg.stop.max_frames = 2000000;
    const BerRecord rec = run_point(cfg, 0.0, 0);
    CHECK(rec.errors >= 10);
    CHECK(rec.frames % 4096 == 0);  // whole uncoded rounds
}

TEST_CASE("identical runs are bit-identical, independent of workers") {
    SimConfig cfg = base_cfg();
    cfg.stop.min_bit_errors = 1000000;
    cfg.stop.max_frames = 10000;  // spans multiple rounds incl. a partial one
    const BerRecord one = run_point(cfg, 12.0, 0);
    cfg.workers = 3;
    const BerRecord three = run_point(cfg, 12.0, 0);
    cfg.workers = 8;
    const BerRecord eight = run_point(cfg, 12.0, 0);
    CHECK(same_counts(one, three));
    CHECK(same_counts(one, eight));
    CHECK(one.errors > 0);
}

TEST_CASE("coded runs are reproducible across worker counts") {
    SimConfig cfg = base_cfg();
    cfg.pipeline = Pipeline::CodedLcSoftSpc;
    cfg.fec = FecId::K7;
    cfg.stop.min_bit_errors = 30;
    cfg.stop.max_frames = 192;
    const BerRecord one = run_point(cfg, 6.0, 0);
    cfg.workers = 4;
    const BerRecord four = run_point(cfg, 6.0, 0);
    CHECK(same_counts(one, four));
}

TEST_CASE("every coded pipeline decodes cleanly at high snr") {
    for (Pipeline p : {Pipeline::CodedHard, Pipeline::CodedLcSoft, Pipeline::CodedOptSoft,
                       Pipeline::CodedLcSoftSpc}) {
        SimConfig cfg = base_cfg();
        cfg.pipeline = p;
        cfg.fec = FecId::K3;
        cfg.stop.max_frames = 3;
        cfg.frame_data_bits = 256;
        const BerRecord rec = run_point(cfg, 45.0, 0);
        CHECK(rec.errors == 0);
        CHECK(rec.bits == 3 * 256);
    }
}

TEST_CASE("hard decisions agree with joint llr signs at high snr") {
    const SimConfig cfg = normalized(base_cfg());
    const ConstellationSet set = default_sets(cfg.modem);
    const ComponentCodebook cb = build_component_codebook(cfg.modem, set);
    const double n0 = noise_power_from_snr_db(20.0);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> bit(0, 1);
    long agree = 0, total = 0;
    for (int frame = 0; frame < 1000; ++frame) {
        Bits tx(static_cast<std::size_t>(total_bits_per_codeword(cfg.modem)));
        for (auto& b : tx) b = static_cast<std::uint8_t>(bit(rng));
        const Codeword cw = modulate(tx, cfg.modem, set);
        const ChannelRealization r = transmit(cw, n0, rng);
        Equalized eq;
        try {
            eq = equalize(r);
        } catch (const DegenerateChannelError&) {
            continue;
        }
        const Bits hard = demap_hard(detect_trellis(eq, set, cfg.modem).decision, cfg.modem);
        const std::vector<double> yi = eq.in_phase();
        const std::vector<double> yq = eq.quadrature();
        for (int comp = 0; comp < 2; ++comp) {
            const std::vector<double>& y = comp == 0 ? yi : yq;
            for (int delta = 0; delta < cb.bit_count; ++delta) {
                const double v = llr_optimal(y, eq.gain2, cb, delta, n0);
                const int soft_bit = v > 0.0 ? 0 : 1;
                agree += soft_bit == hard[comp * cb.bit_count + delta];
                ++total;
            }
        }
    }
    CHECK(total > 3000);
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("csv round trip reproduces identical rows") {
    SimConfig cfg = base_cfg();
    cfg.snr_db = {8.0, 4.0};  // intentionally out of order
    cfg.stop.min_bit_errors = 40;
    cfg.stop.max_frames = 8192;
    const std::vector<BerRecord> records = run_sweep(normalized(cfg), nullptr);
    REQUIRE(records.size() == 2);
    CHECK(records[0].snr_db == 4.0);  // ascending output
    const char* path = "tmp_roundtrip.csv";
    write_csv_file(path, cfg, records);
    const SimConfig replayed = config_from_csv_header(path);
    CHECK(replayed.modem.n == cfg.modem.n);
    CHECK(replayed.modem.q == cfg.modem.q);
    CHECK(replayed.master_seed == cfg.master_seed);
    const std::vector<BerRecord> again = run_sweep(replayed, nullptr);
    REQUIRE(again.size() == 2);
    std::ostringstream first, second;
    write_csv(first, cfg, records);
    write_csv(second, replayed, again);
    CHECK(first.str() == second.str());
    std::remove(path);
}

TEST_CASE("config parser") {
    std::istringstream in(
        "# comment\n"
        "pipeline=coded-lc-soft-spc\n"
        "scheme=iqm\n"
        "mapping=natural\n"
        "n=3\n"
        "q=4\n"
        "m1=2\n"
        "fec=k3\n"
        "snr-db=0, 5, 10\n"
        "seed=123\n"
        "workers=4\n"
        "frame-bits=512\n"
        "min-errors=100\n"
        "max-frames=5000\n"
        "out=result.csv\n");
    std::string out_path;
    const SimConfig cfg = parse_config_kv(in, &out_path);
    CHECK(cfg.pipeline == Pipeline::CodedLcSoftSpc);
    CHECK(cfg.modem.mode.mapping == Mapping::Natural);
    CHECK(cfg.modem.n == 3);
    CHECK(cfg.modem.m1 == 2);
    CHECK(cfg.fec == FecId::K3);
    CHECK(cfg.snr_db == std::vector<double>{0.0, 5.0, 10.0});
    CHECK(cfg.master_seed == 123);
    CHECK(cfg.workers == 4);
    CHECK(cfg.frame_data_bits == 512);
    CHECK(cfg.stop.min_bit_errors == 100);
    CHECK(cfg.stop.max_frames == 5000);
    CHECK(out_path == "result.csv");

    std::istringstream bad("qq=4\n");
    CHECK_THROWS_AS(parse_config_kv(bad), std::invalid_argument);
    std::istringstream nokv("pipeline\n");
    CHECK_THROWS_AS(parse_config_kv(nokv), std::invalid_argument);
}

TEST_CASE("name round trips") {
    for (Pipeline p : {Pipeline::UncodedML, Pipeline::CodedHard, Pipeline::CodedLcSoft,
                       Pipeline::CodedOptSoft, Pipeline::CodedLcSoftSpc})
        CHECK(pipeline_from_name(pipeline_name(p)) == p);
    for (FecId f : {FecId::None, FecId::K3, FecId::K7}) CHECK(fec_from_name(fec_name(f)) == f);
    CHECK_THROWS_AS(pipeline_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("unwritable csv path fails loudly") {
    const SimConfig cfg = base_cfg();
    CHECK_THROWS_AS(write_csv_file("/nonexistent-dir/x.csv", cfg, {}), std::runtime_error);
}
