#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdsmod/fec.hpp"
#include "mdsmod/llr.hpp"
#include "mdsmod/modem.hpp"

namespace mdsmod {

enum class Pipeline { UncodedML, CodedHard, CodedLcSoft, CodedOptSoft, CodedLcSoftSpc };
enum class FecId { None, K3, K7 };

struct StopRule {
    long long min_bit_errors = 200;
    long long max_frames = 200000;
};

struct SimConfig {
    ModemConfig modem;
    Pipeline pipeline = Pipeline::UncodedML;
    FecId fec = FecId::None;
    SpcMethod spc_method = SpcMethod::TanhExact;
    std::vector<double> snr_db;  // symbol SNR Es/N0 in dB, unit symbol energy
    StopRule stop;
    std::uint64_t master_seed = 1;
    int workers = 1;
    int frame_data_bits = 1024;  // data bits per FEC block
};

/// Validated copy with derived fields settled: the sweep list sorted
/// ascending, parity mode forced to BitwiseSpc for CodedLcSoftSpc and to
/// ModQ otherwise. Throws std::invalid_argument on inconsistencies
/// (coded pipeline without a code, soft pipelines on PSK, ...).
SimConfig normalized(const SimConfig& cfg);

struct BerRecord {
    std::string pipeline;
    double snr_db = 0.0, ebn0_db = 0.0;
    long long bits = 0, errors = 0, frames = 0;
    double ber = 0.0;
    std::uint64_t seed = 0;
    long long redraws = 0;  // degenerate-channel frame redraws
    double wall_seconds = 0.0;
};

double noise_power_from_snr_db(double snr_db);
double code_rate(const SimConfig& cfg);
double ebn0_db_from_snr_db(const SimConfig& cfg, double snr_db);

/// One Monte Carlo point. Frames are dispatched in fixed-size rounds with
/// per-frame seeds derived from (master_seed, snr_index, frame, attempt),
/// so counts are bit-identical for any worker count.
BerRecord run_point(const SimConfig& cfg, double snr_db, int snr_index);

/// All points of cfg.snr_db in ascending order; progress lines go to
/// `report` when given.
std::vector<BerRecord> run_sweep(const SimConfig& cfg, std::ostream* report = nullptr);

std::string pipeline_name(Pipeline p);
Pipeline pipeline_from_name(const std::string& name);
std::string fec_name(FecId f);
FecId fec_from_name(const std::string& name);
std::string mapping_name(Mapping m);
Mapping mapping_from_name(const std::string& name);
std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
std::string spc_method_name(SpcMethod m);
SpcMethod spc_method_from_name(const std::string& name);

/// CSV with the full configuration embedded as "# cfg.<key>=<value>"
/// header lines, one row per record, floats at 6 significant digits.
void write_csv(std::ostream& out, const SimConfig& cfg, const std::vector<BerRecord>& records);
void write_csv_file(const std::string& path, const SimConfig& cfg,
                    const std::vector<BerRecord>& records);

/// key=value configuration block (the same keys the CSV header embeds).
std::string config_kv(const SimConfig& cfg);

/// Parses key=value lines; '#' comments and blank lines are skipped, and
/// "# cfg.<key>=<value>" header lines are accepted too. Unknown keys
/// throw. When out_path is given, an "out=" line is stored there.
SimConfig parse_config_kv(std::istream& in, std::string* out_path = nullptr);

/// Recovers the configuration a sweep CSV was produced with.
SimConfig config_from_csv_header(const std::string& path);

}  // namespace mdsmod
