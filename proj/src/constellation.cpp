#include "mdsmod/constellation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mdsmod/mds_code.hpp"

namespace mdsmod {

ConstellationSet build_pam_partition(int q, int m1, double target_avg_energy) {
    if (q < 1 || m1 < 1) throw std::invalid_argument("Q and M1 must be at least 1");
    if (!(target_avg_energy > 0.0)) throw std::invalid_argument("target energy must be positive");
    const int total = q * m1;
    ConstellationSet set;
    set.kind = SetKind::PamPartition;
    set.num_classes = q;
    set.points_per_class = m1;
    // Grid mean square is (total^2 - 1)/3; a single-point grid sits at the
    // origin and is left unscaled.
    set.scale = total > 1
                    ? std::sqrt(3.0 * target_avg_energy /
                                (static_cast<double>(total) * total - 1.0))
                    : 1.0;
    set.classes.resize(static_cast<std::size_t>(q));
    for (int k = 1; k <= q; ++k) {
        auto& cls = set.classes[static_cast<std::size_t>(k - 1)];
        cls.reserve(static_cast<std::size_t>(m1));
        for (int m = 0; m < m1; ++m) {
            const int pos = (k - 1) + m * q;  // grid slot, ascending
            const double amp = set.scale * (2.0 * pos - (total - 1));
            cls.emplace_back(amp, 0.0);
        }
    }
    return set;
}

ConstellationSet build_psk_partition(int q, int m1, double amplitude) {
    if (q < 1 || m1 < 1) throw std::invalid_argument("Q and M1 must be at least 1");
    if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
    ConstellationSet set;
    set.kind = SetKind::PskRotation;
    set.num_classes = q;
    set.points_per_class = m1;
    set.scale = amplitude;
    set.classes.resize(static_cast<std::size_t>(q));
    for (int k = 1; k <= q; ++k) {
        auto& cls = set.classes[static_cast<std::size_t>(k - 1)];
        cls.reserve(static_cast<std::size_t>(m1));
        const double offset = 2.0 * std::numbers::pi * (k - 1) / (static_cast<double>(m1) * q);
        for (int m = 0; m < m1; ++m) {
            const double angle = 2.0 * std::numbers::pi * m / m1 + offset;
            cls.push_back(std::polar(amplitude, angle));
        }
    }
    return set;
}

std::uint32_t point_label(int rank, int l_sym) {
    return gray_label(rank + 1, l_sym);
}

int point_from_label(std::uint32_t label, int l_sym) {
    return gray_class(label, l_sym) - 1;
}

}  // namespace mdsmod
