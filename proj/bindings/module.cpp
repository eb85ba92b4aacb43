#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mdsmod/channel.hpp"
#include "mdsmod/detect.hpp"
#include "mdsmod/fec.hpp"
#include "mdsmod/harness.hpp"
#include "mdsmod/llr.hpp"
#include "mdsmod/plot.hpp"

namespace py = pybind11;
using namespace mdsmod;

namespace {

Bits to_bits(const std::vector<int>& v) {
    Bits out;
    out.reserve(v.size());
    for (int b : v) {
        if (b < 0 || b > 1) throw std::invalid_argument("bits must be 0 or 1");
        out.push_back(static_cast<std::uint8_t>(b));
    }
    return out;
}

std::vector<int> from_bits(const Bits& v) { return {v.begin(), v.end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MDS-coded modulation: mapping, detection, LLRs, FEC and BER sweeps";

    py::enum_<Mapping>(m, "Mapping")
        .value("Gray", Mapping::Gray)
        .value("Natural", Mapping::Natural);
    py::enum_<Parity>(m, "Parity")
        .value("ModQ", Parity::ModQ)
        .value("BitwiseSpc", Parity::BitwiseSpc);
    py::enum_<Scheme>(m, "Scheme").value("IQM", Scheme::IQM).value("PSK", Scheme::PSK);
    py::enum_<SpcMethod>(m, "SpcMethod")
        .value("TanhExact", SpcMethod::TanhExact)
        .value("MinSum", SpcMethod::MinSum);
    py::enum_<Pipeline>(m, "Pipeline")
        .value("UncodedML", Pipeline::UncodedML)
        .value("CodedHard", Pipeline::CodedHard)
        .value("CodedLcSoft", Pipeline::CodedLcSoft)
        .value("CodedOptSoft", Pipeline::CodedOptSoft)
        .value("CodedLcSoftSpc", Pipeline::CodedLcSoftSpc);
    py::enum_<FecId>(m, "FecId")
        .value("NoFec", FecId::None)
        .value("K3", FecId::K3)
        .value("K7", FecId::K7);

    py::class_<MappingMode>(m, "MappingMode")
        .def(py::init<>())
        .def(py::init([](Mapping ma, Parity pa) { return MappingMode{ma, pa}; }),
             py::arg("mapping"), py::arg("parity"))
        .def_readwrite("mapping", &MappingMode::mapping)
        .def_readwrite("parity", &MappingMode::parity);

    py::class_<ModemConfig>(m, "ModemConfig")
        .def(py::init<>())
        .def(py::init([](int n, int q, int m1, Scheme scheme, Mapping mapping, Parity parity) {
                 ModemConfig c;
                 c.n = n;
                 c.q = q;
                 c.m1 = m1;
                 c.scheme = scheme;
                 c.mode = {mapping, parity};
                 return c;
             }),
             py::arg("n"), py::arg("q"), py::arg("m1") = 1, py::arg("scheme") = Scheme::IQM,
             py::arg("mapping") = Mapping::Gray, py::arg("parity") = Parity::ModQ)
        .def_readwrite("n", &ModemConfig::n)
        .def_readwrite("q", &ModemConfig::q)
        .def_readwrite("m1", &ModemConfig::m1)
        .def_readwrite("scheme", &ModemConfig::scheme)
        .def_readwrite("mode", &ModemConfig::mode);

    py::class_<ConstellationSet>(m, "ConstellationSet")
        .def_readonly("num_classes", &ConstellationSet::num_classes)
        .def_readonly("points_per_class", &ConstellationSet::points_per_class)
        .def_readonly("scale", &ConstellationSet::scale)
        .def_readonly("classes", &ConstellationSet::classes);

    py::class_<StopRule>(m, "StopRule")
        .def(py::init<>())
        .def_readwrite("min_bit_errors", &StopRule::min_bit_errors)
        .def_readwrite("max_frames", &StopRule::max_frames);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("modem", &SimConfig::modem)
        .def_readwrite("pipeline", &SimConfig::pipeline)
        .def_readwrite("fec", &SimConfig::fec)
        .def_readwrite("spc_method", &SimConfig::spc_method)
        .def_readwrite("snr_db", &SimConfig::snr_db)
        .def_readwrite("stop", &SimConfig::stop)
        .def_readwrite("master_seed", &SimConfig::master_seed)
        .def_readwrite("workers", &SimConfig::workers)
        .def_readwrite("frame_data_bits", &SimConfig::frame_data_bits);

    py::class_<BerRecord>(m, "BerRecord")
        .def_readonly("pipeline", &BerRecord::pipeline)
        .def_readonly("snr_db", &BerRecord::snr_db)
        .def_readonly("ebn0_db", &BerRecord::ebn0_db)
        .def_readonly("bits", &BerRecord::bits)
        .def_readonly("errors", &BerRecord::errors)
        .def_readonly("frames", &BerRecord::frames)
        .def_readonly("ber", &BerRecord::ber)
        .def_readonly("seed", &BerRecord::seed)
        .def_readonly("redraws", &BerRecord::redraws)
        .def_readonly("wall_seconds", &BerRecord::wall_seconds)
        .def("__repr__", [](const BerRecord& r) {
            std::ostringstream s;
            s << "BerRecord(" << r.pipeline << ", snr_db=" << r.snr_db << ", ber=" << r.ber
              << ", bits=" << r.bits << ", errors=" << r.errors << ")";
            return s.str();
        });

    m.def("parity_element",
          [](const std::vector<int>& prefix, int q) {
              return parity_element(std::span<const int>(prefix), q);
          },
          py::arg("prefix"), py::arg("q"));
    m.def("gray_label", &gray_label, py::arg("k"), py::arg("l"));
    m.def("natural_label", &natural_label, py::arg("k"), py::arg("l"));
    m.def("gray_class", &gray_class, py::arg("label"), py::arg("l"));
    m.def("natural_class", &natural_class, py::arg("label"), py::arg("l"));
    m.def("encode_tuple",
          [](const std::vector<int>& bits, int n, int q, Mapping mapping, Parity parity) {
              return encode_tuple(to_bits(bits), {mapping, parity}, n, q);
          },
          py::arg("bits"), py::arg("n"), py::arg("q"), py::arg("mapping") = Mapping::Gray,
          py::arg("parity") = Parity::ModQ);
    m.def("decode_tuple",
          [](const IndexTuple& tuple, int q, Mapping mapping, Parity parity) {
              return from_bits(decode_tuple(tuple, {mapping, parity}, q));
          },
          py::arg("tuple"), py::arg("q"), py::arg("mapping") = Mapping::Gray,
          py::arg("parity") = Parity::ModQ);
    m.def("enumerate_tuples", &enumerate_tuples, py::arg("n"), py::arg("q"),
          py::arg("parity") = Parity::ModQ);

    m.def("build_pam_partition", &build_pam_partition, py::arg("q"), py::arg("m1"),
          py::arg("target_avg_energy"));
    m.def("build_psk_partition", &build_psk_partition, py::arg("q"), py::arg("m1"),
          py::arg("amplitude"));
    m.def("default_sets", &default_sets, py::arg("cfg"));

    m.def("bits_per_codeword", [](const ModemConfig& cfg) {
        const BitBudget b = bits_per_codeword(cfg);
        return py::make_tuple(b.index_bits, b.symbol_bits);
    });
    m.def("total_bits_per_codeword", &total_bits_per_codeword, py::arg("cfg"));
    m.def("spectral_efficiency", &spectral_efficiency, py::arg("cfg"));

    m.def("modulate",
          [](const std::vector<int>& bits, const ModemConfig& cfg) {
              return modulate(to_bits(bits), cfg, default_sets(cfg)).samples;
          },
          py::arg("bits"), py::arg("cfg"));

    m.def("transmit",
          [](const std::vector<std::complex<double>>& samples, double n0, std::uint64_t seed) {
              std::mt19937_64 rng(seed);
              const ChannelRealization r = transmit(Codeword{samples}, n0, rng);
              return py::make_tuple(r.y, r.h, r.w);
          },
          py::arg("samples"), py::arg("n0"), py::arg("seed"));

    m.def("equalize",
          [](const std::vector<std::complex<double>>& y,
             const std::vector<std::complex<double>>& h) {
              ChannelRealization r;
              r.y = y;
              r.h = h;
              r.w.resize(y.size());
              const Equalized eq = equalize(r);
              return py::make_tuple(eq.y_eq, eq.gain2);
          },
          py::arg("y"), py::arg("h"));

    m.def("detect_trellis",
          [](const std::vector<std::complex<double>>& y_eq, const std::vector<double>& gain2,
             const ModemConfig& cfg) {
              Equalized eq;
              eq.y_eq = y_eq;
              eq.gain2 = gain2;
              const TrellisResult res = detect_trellis(eq, default_sets(cfg), cfg);
              return py::make_tuple(from_bits(demap_hard(res.decision, cfg)), res.metric,
                                    res.decision.tuple_i, res.decision.tuple_q);
          },
          py::arg("y_eq"), py::arg("gain2"), py::arg("cfg"));

    m.def("llr_optimal",
          [](const std::vector<double>& y, const std::vector<double>& gain2,
             const ModemConfig& cfg, int delta, double n0) {
              const ComponentCodebook cb = build_component_codebook(cfg, default_sets(cfg));
              return llr_optimal(y, gain2, cb, delta, n0);
          },
          py::arg("y_comp"), py::arg("gain2"), py::arg("cfg"), py::arg("delta"), py::arg("n0"));
    m.def("llr_index_elementwise",
          [](double y, double g, const ModemConfig& cfg, int phi, double n0) {
              return llr_index_elementwise(y, g, default_sets(cfg), cfg.mode.mapping, phi, n0);
          },
          py::arg("y_elem"), py::arg("gain2_elem"), py::arg("cfg"), py::arg("phi"), py::arg("n0"));
    m.def("llr_symbol_elementwise",
          [](double y, double g, const ModemConfig& cfg, int m1_bit, double n0) {
              return llr_symbol_elementwise(y, g, default_sets(cfg), m1_bit, n0);
          },
          py::arg("y_elem"), py::arg("gain2_elem"), py::arg("cfg"), py::arg("m1_bit"),
          py::arg("n0"));
    m.def("spc_extrinsic",
          [](const std::vector<double>& others, SpcMethod method) {
              return spc_extrinsic(others, method);
          },
          py::arg("others"), py::arg("method") = SpcMethod::TanhExact);
    m.def("spc_update",
          [](const std::vector<double>& llrs, SpcMethod method) {
              return spc_update(llrs, method);
          },
          py::arg("llrs"), py::arg("method") = SpcMethod::TanhExact);

    m.def("conv_encode",
          [](const std::vector<int>& data, FecId fec, bool terminate) {
              const ConvCode code = fec == FecId::K7 ? conv_code_k7() : conv_code_k3();
              return from_bits(conv_encode(to_bits(data), code, terminate));
          },
          py::arg("data"), py::arg("fec") = FecId::K7, py::arg("terminate") = true);
    m.def("viterbi_hard",
          [](const std::vector<int>& coded, FecId fec, bool terminated) {
              const ConvCode code = fec == FecId::K7 ? conv_code_k7() : conv_code_k3();
              return from_bits(viterbi_hard(to_bits(coded), code, terminated));
          },
          py::arg("coded"), py::arg("fec") = FecId::K7, py::arg("terminated") = true);
    m.def("viterbi_soft",
          [](const std::vector<double>& llrs, FecId fec, bool terminated) {
              const ConvCode code = fec == FecId::K7 ? conv_code_k7() : conv_code_k3();
              return from_bits(viterbi_soft(llrs, code, terminated));
          },
          py::arg("llrs"), py::arg("fec") = FecId::K7, py::arg("terminated") = true);

    m.def("noise_power_from_snr_db", &noise_power_from_snr_db, py::arg("snr_db"));
    m.def("ebn0_db_from_snr_db", &ebn0_db_from_snr_db, py::arg("cfg"), py::arg("snr_db"));
    m.def("run_point", &run_point, py::arg("cfg"), py::arg("snr_db"), py::arg("snr_index") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_sweep",
          [](const SimConfig& cfg) {
              py::gil_scoped_release release;
              return run_sweep(cfg, nullptr);
          },
          py::arg("cfg"));
    m.def("write_csv",
          [](const std::string& path, const SimConfig& cfg,
             const std::vector<BerRecord>& records) { write_csv_file(path, cfg, records); },
          py::arg("path"), py::arg("cfg"), py::arg("records"));
    m.def("config_from_csv_header", &config_from_csv_header, py::arg("path"));
    m.def("plot_ber_csv",
          [](const std::vector<std::string>& paths, const std::string& out) {
              return plot_ber_csv(paths, out, {}, nullptr);
          },
          py::arg("csv_paths"), py::arg("out_svg"));
}
