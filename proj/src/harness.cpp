#include "mdsmod/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mdsmod/channel.hpp"
#include "mdsmod/detect.hpp"
#include "mdsmod/errors.hpp"

namespace mdsmod {

namespace {

// Fixed dispatch quantum; stop-rule checks happen only at round
// boundaries so the frame count never depends on the worker count.
constexpr long long kUncodedRoundFrames = 4096;
constexpr long long kCodedRoundFrames = 64;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t frame_seed(std::uint64_t master, std::uint64_t point, std::uint64_t frame,
                         std::uint64_t attempt) {
    std::uint64_t s = splitmix64(master ^ 0x5DEECE66Dull);
    s = splitmix64(s ^ point);
    s = splitmix64(s ^ frame);
    return splitmix64(s ^ attempt);
}

struct FrameResult {
    long long bits = 0;
    long long errors = 0;
    long long redraws = 0;

    FrameResult& operator+=(const FrameResult& o) {
        bits += o.bits;
        errors += o.errors;
        redraws += o.redraws;
        return *this;
    }
};

struct PointContext {
    const SimConfig* cfg = nullptr;
    double n0 = 1.0;
    ConstellationSet set;
    ComponentCodebook comp_cb;  // CodedOptSoft only
    ConvCode code;              // coded pipelines only
    bool coded = false;
    int cw_bits = 0;
    int coded_len = 0;     // terminated block length in bits
    int n_codewords = 0;   // codewords per frame
};

PointContext make_context(const SimConfig& cfg, double snr_db) {
    PointContext ctx;
    ctx.cfg = &cfg;
    ctx.n0 = noise_power_from_snr_db(snr_db);
    ctx.set = default_sets(cfg.modem);
    ctx.coded = cfg.pipeline != Pipeline::UncodedML;
    ctx.cw_bits = total_bits_per_codeword(cfg.modem);
    if (ctx.coded) {
        ctx.code = cfg.fec == FecId::K7 ? conv_code_k7() : conv_code_k3();
        ctx.coded_len = 2 * (cfg.frame_data_bits + ctx.code.constraint_length - 1);
        ctx.n_codewords = (ctx.coded_len + ctx.cw_bits - 1) / ctx.cw_bits;
    }
    if (cfg.pipeline == Pipeline::CodedOptSoft)
        ctx.comp_cb = build_component_codebook(cfg.modem, ctx.set);
    return ctx;
}

long long count_mismatches(const Bits& a, const Bits& b) {
    long long n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return n;
}

FrameResult run_uncoded_frame(const PointContext& ctx, std::mt19937_64& rng) {
    const ModemConfig& modem = ctx.cfg->modem;
    Bits tx(static_cast<std::size_t>(ctx.cw_bits));
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& b : tx) b = static_cast<std::uint8_t>(bit(rng));
    const Codeword cw = modulate(tx, modem, ctx.set);
    const ChannelRealization r = transmit(cw, ctx.n0, rng);
    const Equalized eq = equalize(r);
    const TrellisResult det = detect_trellis(eq, ctx.set, modem);
    const Bits rx = demap_hard(det.decision, modem);
    return {ctx.cw_bits, count_mismatches(tx, rx), 0};
}

/// Soft demodulation of one codeword, ordered exactly as modulate()
/// consumes bits: per component, index planes then symbol planes.
std::vector<double> codeword_llrs(const PointContext& ctx, const Equalized& eq) {
    const ModemConfig& m = ctx.cfg->modem;
    const int l = bits_per_class(m.q);
    const int l_sym = bits_per_class(m.m1);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ctx.cw_bits));
    const int components = m.scheme == Scheme::IQM ? 2 : 1;
    for (int comp = 0; comp < components; ++comp) {
        const std::vector<double> y = comp == 0 ? eq.in_phase() : eq.quadrature();
        switch (ctx.cfg->pipeline) {
            case Pipeline::CodedOptSoft:
                for (int delta = 0; delta < ctx.comp_cb.bit_count; ++delta)
                    out.push_back(llr_optimal(y, eq.gain2, ctx.comp_cb, delta, ctx.n0));
                continue;  // llr_optimal covers symbol bits as well
            case Pipeline::CodedLcSoft:
                for (int pos = 0; pos < m.n - 1; ++pos)
                    for (int phi = 0; phi < l; ++phi)
                        out.push_back(llr_index_elementwise(y[pos], eq.gain2[pos], ctx.set,
                                                            m.mode.mapping, phi, ctx.n0));
                break;
            case Pipeline::CodedLcSoftSpc: {
                // The class labels close under XOR, so each label plane is
                // a single parity check across the N elements.
                std::vector<double> plane(static_cast<std::size_t>(m.n));
                std::vector<std::vector<double>> updated(static_cast<std::size_t>(l));
                for (int phi = 0; phi < l; ++phi) {
                    for (int pos = 0; pos < m.n; ++pos)
                        plane[pos] = llr_index_elementwise(y[pos], eq.gain2[pos], ctx.set,
                                                           m.mode.mapping, phi, ctx.n0);
                    updated[phi] = spc_update(plane, ctx.cfg->spc_method);
                }
                for (int pos = 0; pos < m.n - 1; ++pos)
                    for (int phi = 0; phi < l; ++phi) out.push_back(updated[phi][pos]);
                break;
            }
            default:
                throw std::logic_error("not a soft pipeline");
        }
        for (int pos = 0; pos < m.n; ++pos)
            for (int m1b = 0; m1b < l_sym; ++m1b)
                out.push_back(
                    llr_symbol_elementwise(y[pos], eq.gain2[pos], ctx.set, m1b, ctx.n0));
    }
    return out;
}

FrameResult run_coded_frame(const PointContext& ctx, std::mt19937_64& rng) {
    const ModemConfig& modem = ctx.cfg->modem;
    Bits data(static_cast<std::size_t>(ctx.cfg->frame_data_bits));
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& b : data) b = static_cast<std::uint8_t>(bit(rng));
    Bits coded = conv_encode(data, ctx.code, true);
    coded.resize(static_cast<std::size_t>(ctx.n_codewords) * ctx.cw_bits, 0);

    Bits hard;
    std::vector<double> soft;
    const bool is_hard = ctx.cfg->pipeline == Pipeline::CodedHard;
    if (is_hard)
        hard.reserve(coded.size());
    else
        soft.reserve(coded.size());
    for (int i = 0; i < ctx.n_codewords; ++i) {
        const std::span<const std::uint8_t> slice(coded.data() +
                                                      static_cast<std::size_t>(i) * ctx.cw_bits,
                                                  static_cast<std::size_t>(ctx.cw_bits));
        const Codeword cw = modulate(slice, modem, ctx.set);
        const ChannelRealization r = transmit(cw, ctx.n0, rng);
        const Equalized eq = equalize(r);
        if (is_hard) {
            const TrellisResult det = detect_trellis(eq, ctx.set, modem);
            const Bits rx = demap_hard(det.decision, modem);
            hard.insert(hard.end(), rx.begin(), rx.end());
        } else {
            const std::vector<double> llrs = codeword_llrs(ctx, eq);
            soft.insert(soft.end(), llrs.begin(), llrs.end());
        }
    }

    Bits decoded;
    const auto len = static_cast<std::size_t>(ctx.coded_len);
    if (is_hard)
        decoded = viterbi_hard(std::span<const std::uint8_t>(hard).first(len), ctx.code, true);
    else
        decoded = viterbi_soft(std::span<const double>(soft).first(len), ctx.code, true);
    return {ctx.cfg->frame_data_bits, count_mismatches(data, decoded), 0};
}

FrameResult run_frame(const PointContext& ctx, std::mt19937_64& rng) {
    return ctx.coded ? run_coded_frame(ctx, rng) : run_uncoded_frame(ctx, rng);
}

BerRecord run_point_normalized(const SimConfig& cfg, double snr_db, int snr_index) {
    const auto t0 = std::chrono::steady_clock::now();
    const PointContext ctx = make_context(cfg, snr_db);
    const long long round_size = ctx.coded ? kCodedRoundFrames : kUncodedRoundFrames;

    FrameResult total;
    long long frames = 0;
    while (frames < cfg.stop.max_frames && total.errors < cfg.stop.min_bit_errors) {
        const long long round = std::min(round_size, cfg.stop.max_frames - frames);
        const int workers = static_cast<int>(std::min<long long>(cfg.workers, round));
        std::vector<FrameResult> part(static_cast<std::size_t>(workers));
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        auto work = [&](int w) {
            try {
                FrameResult acc;
                for (long long f = w; f < round; f += workers) {
                    const auto frame_index = static_cast<std::uint64_t>(frames + f);
                    for (std::uint64_t attempt = 0;; ++attempt) {
                        if (attempt > 1000)
                            throw std::runtime_error("channel redraw limit exceeded");
                        std::mt19937_64 rng(frame_seed(cfg.master_seed,
                                                       static_cast<std::uint64_t>(snr_index),
                                                       frame_index, attempt));
                        try {
                            acc += run_frame(ctx, rng);
                            break;
                        } catch (const DegenerateChannelError&) {
                            ++acc.redraws;
                        }
                    }
                }
                part[static_cast<std::size_t>(w)] = acc;
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (const auto& p : part) total += p;  // exact commutative merge
        frames += round;
    }

    BerRecord rec;
    rec.pipeline = pipeline_name(cfg.pipeline);
    rec.snr_db = snr_db;
    rec.ebn0_db = ebn0_db_from_snr_db(cfg, snr_db);
    rec.bits = total.bits;
    rec.errors = total.errors;
    rec.frames = frames;
    rec.ber = total.bits > 0 ? static_cast<double>(total.errors) / static_cast<double>(total.bits)
                             : 0.0;
    rec.seed = cfg.master_seed;
    rec.redraws = total.redraws;
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string format6(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

}  // namespace

SimConfig normalized(const SimConfig& in) {
    SimConfig cfg = in;
    cfg.modem.mode.parity =
        cfg.pipeline == Pipeline::CodedLcSoftSpc ? Parity::BitwiseSpc : Parity::ModQ;
    validate(cfg.modem);
    if (total_bits_per_codeword(cfg.modem) < 1)
        throw std::invalid_argument("configuration carries no bits per codeword");
    const bool coded = cfg.pipeline != Pipeline::UncodedML;
    if (coded && cfg.fec == FecId::None)
        throw std::invalid_argument("coded pipelines need fec k7 or k3");
    if (!coded && cfg.fec != FecId::None)
        throw std::invalid_argument("the uncoded pipeline takes fec none");
    if (coded && cfg.pipeline != Pipeline::CodedHard && cfg.modem.scheme != Scheme::IQM)
        throw std::invalid_argument("soft pipelines are defined on the IQM scheme");
    if (cfg.pipeline == Pipeline::CodedOptSoft && bits_per_codeword(cfg.modem).total() > 24)
        throw std::invalid_argument("component codebook too large for the optimal soft pipeline");
    if (cfg.stop.min_bit_errors < 1) throw std::invalid_argument("min bit errors must be >= 1");
    if (cfg.stop.max_frames < 1) throw std::invalid_argument("max frames must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (coded && cfg.frame_data_bits < 1)
        throw std::invalid_argument("frame data bits must be >= 1");
    for (double v : cfg.snr_db)
        if (!std::isfinite(v)) throw std::invalid_argument("SNR points must be finite");
    std::sort(cfg.snr_db.begin(), cfg.snr_db.end());
    return cfg;
}

double noise_power_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double code_rate(const SimConfig& cfg) {
    return cfg.pipeline == Pipeline::UncodedML ? 1.0 : 0.5;
}

double ebn0_db_from_snr_db(const SimConfig& cfg, double snr_db) {
    const double eta = spectral_efficiency(cfg.modem);
    return snr_db - 10.0 * std::log10(eta * code_rate(cfg));
}

BerRecord run_point(const SimConfig& cfg, double snr_db, int snr_index) {
    return run_point_normalized(normalized(cfg), snr_db, snr_index);
}

std::vector<BerRecord> run_sweep(const SimConfig& cfg0, std::ostream* report) {
    const SimConfig cfg = normalized(cfg0);
    std::vector<BerRecord> out;
    out.reserve(cfg.snr_db.size());
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        BerRecord rec = run_point_normalized(cfg, cfg.snr_db[i], static_cast<int>(i));
        if (report) {
            *report << "snr_db=" << format6(rec.snr_db) << " ebn0_db=" << format6(rec.ebn0_db)
                    << " frames=" << rec.frames << " bits=" << rec.bits
                    << " errors=" << rec.errors << " ber=" << format6(rec.ber)
                    << " redraws=" << rec.redraws << " (" << format6(rec.wall_seconds) << " s)\n";
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::string pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::UncodedML: return "uncoded-ml";
        case Pipeline::CodedHard: return "coded-hard";
        case Pipeline::CodedLcSoft: return "coded-lc-soft";
        case Pipeline::CodedOptSoft: return "coded-opt-soft";
        case Pipeline::CodedLcSoftSpc: return "coded-lc-soft-spc";
    }
    throw std::invalid_argument("unknown pipeline");
}

Pipeline pipeline_from_name(const std::string& name) {
    if (name == "uncoded-ml" || name == "uncoded") return Pipeline::UncodedML;
    if (name == "coded-hard" || name == "hard") return Pipeline::CodedHard;
    if (name == "coded-lc-soft" || name == "lc-soft") return Pipeline::CodedLcSoft;
    if (name == "coded-opt-soft" || name == "opt-soft") return Pipeline::CodedOptSoft;
    if (name == "coded-lc-soft-spc" || name == "lc-soft-spc") return Pipeline::CodedLcSoftSpc;
    throw std::invalid_argument("unknown pipeline '" + name + "'");
}

std::string fec_name(FecId f) {
    switch (f) {
        case FecId::None: return "none";
        case FecId::K3: return "k3";
        case FecId::K7: return "k7";
    }
    throw std::invalid_argument("unknown fec");
}

FecId fec_from_name(const std::string& name) {
    if (name == "none") return FecId::None;
    if (name == "k3") return FecId::K3;
    if (name == "k7") return FecId::K7;
    throw std::invalid_argument("unknown fec '" + name + "'");
}

std::string mapping_name(Mapping m) { return m == Mapping::Gray ? "gray" : "natural"; }

Mapping mapping_from_name(const std::string& name) {
    if (name == "gray") return Mapping::Gray;
    if (name == "natural") return Mapping::Natural;
    throw std::invalid_argument("unknown mapping '" + name + "'");
}

std::string scheme_name(Scheme s) { return s == Scheme::IQM ? "iqm" : "psk"; }

Scheme scheme_from_name(const std::string& name) {
    if (name == "iqm") return Scheme::IQM;
    if (name == "psk") return Scheme::PSK;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string spc_method_name(SpcMethod m) {
    return m == SpcMethod::TanhExact ? "tanh" : "min-sum";
}

SpcMethod spc_method_from_name(const std::string& name) {
    if (name == "tanh") return SpcMethod::TanhExact;
    if (name == "min-sum") return SpcMethod::MinSum;
    throw std::invalid_argument("unknown spc method '" + name + "'");
}

std::string config_kv(const SimConfig& cfg) {
    std::ostringstream out;
    out << "pipeline=" << pipeline_name(cfg.pipeline) << "\n";
    out << "scheme=" << scheme_name(cfg.modem.scheme) << "\n";
    out << "mapping=" << mapping_name(cfg.modem.mode.mapping) << "\n";
    out << "n=" << cfg.modem.n << "\n";
    out << "q=" << cfg.modem.q << "\n";
    out << "m1=" << cfg.modem.m1 << "\n";
    out << "fec=" << fec_name(cfg.fec) << "\n";
    out << "spc-method=" << spc_method_name(cfg.spc_method) << "\n";
    out << "snr-db=";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i)
        out << (i ? "," : "") << format6(cfg.snr_db[i]);
    out << "\n";
    out << "seed=" << cfg.master_seed << "\n";
    out << "frame-bits=" << cfg.frame_data_bits << "\n";
    out << "min-errors=" << cfg.stop.min_bit_errors << "\n";
    out << "max-frames=" << cfg.stop.max_frames << "\n";
    return out.str();
}

SimConfig parse_config_kv(std::istream& in, std::string* out_path) {
    SimConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("# cfg.", 0) == 0) {
            line = line.substr(6);
        } else if (line[0] == '#') {
            continue;
        }
        const auto pos = line.find('=');
        if (pos == std::string::npos)
            throw std::invalid_argument("expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, pos));
        const std::string value = trim(line.substr(pos + 1));
        if (key == "pipeline") {
            cfg.pipeline = pipeline_from_name(value);
        } else if (key == "scheme") {
            cfg.modem.scheme = scheme_from_name(value);
        } else if (key == "mapping") {
            cfg.modem.mode.mapping = mapping_from_name(value);
        } else if (key == "n") {
            cfg.modem.n = std::stoi(value);
        } else if (key == "q") {
            cfg.modem.q = std::stoi(value);
        } else if (key == "m1") {
            cfg.modem.m1 = std::stoi(value);
        } else if (key == "fec") {
            cfg.fec = fec_from_name(value);
        } else if (key == "spc-method") {
            cfg.spc_method = spc_method_from_name(value);
        } else if (key == "snr-db") {
            cfg.snr_db.clear();
            for (const auto& item : split(value, ','))
                if (!item.empty()) cfg.snr_db.push_back(std::stod(item));
        } else if (key == "seed") {
            cfg.master_seed = std::stoull(value);
        } else if (key == "workers") {
            cfg.workers = std::stoi(value);
        } else if (key == "frame-bits") {
            cfg.frame_data_bits = std::stoi(value);
        } else if (key == "min-errors") {
            cfg.stop.min_bit_errors = std::stoll(value);
        } else if (key == "max-frames") {
            cfg.stop.max_frames = std::stoll(value);
        } else if (key == "out") {
            if (out_path) *out_path = value;
        } else {
            throw std::invalid_argument("unknown configuration key '" + key + "'");
        }
    }
    return cfg;
}

void write_csv(std::ostream& out, const SimConfig& cfg0, const std::vector<BerRecord>& records) {
    const SimConfig cfg = normalized(cfg0);
    out << "# ber sweep results\n";
    std::istringstream kv(config_kv(cfg));
    std::string line;
    while (std::getline(kv, line)) out << "# cfg." << line << "\n";
    out << "# conventions: snr_db is the symbol SNR with unit average symbol energy"
           " (N0 = 10^(-snr_db/10)); ebn0_db subtracts 10*log10(eta*rate); bit order per"
           " codeword is [I-index|I-symbols|Q-index|Q-symbols], MSB first\n";
    out << "pipeline,n,q,m1,mapping,snr_db,ebn0_db,bits,errors,ber,frames,seed\n";
    for (const auto& r : records) {
        out << r.pipeline << ',' << cfg.modem.n << ',' << cfg.modem.q << ',' << cfg.modem.m1
            << ',' << mapping_name(cfg.modem.mode.mapping) << ',' << format6(r.snr_db) << ','
            << format6(r.ebn0_db) << ',' << r.bits << ',' << r.errors << ',' << format6(r.ber)
            << ',' << r.frames << ',' << r.seed << "\n";
    }
}

void write_csv_file(const std::string& path, const SimConfig& cfg,
                    const std::vector<BerRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(out, cfg, records);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

SimConfig config_from_csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream cfg_lines;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] != '#') break;  // column header reached
        if (t.rfind("# cfg.", 0) == 0) cfg_lines << t << "\n";
    }
    std::istringstream collected(cfg_lines.str());
    return parse_config_kv(collected);
}

}  // namespace mdsmod
