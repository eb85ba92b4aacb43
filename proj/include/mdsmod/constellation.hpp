#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mdsmod {

enum class SetKind { PamPartition, PskRotation };

/// Q pairwise-disjoint M1-point sets. PAM partitions hold real amplitudes
/// (imaginary part zero); PSK rotations hold points of equal modulus.
/// classes[k-1] holds class k, points sorted by amplitude (PAM) or by
/// angle in [offset, offset + 2*pi) (PSK); that order fixes the
/// within-class point labels.
struct ConstellationSet {
    SetKind kind = SetKind::PamPartition;
    int num_classes = 0;       // Q
    int points_per_class = 0;  // M1
    double scale = 1.0;        // PAM grid scale / PSK amplitude
    std::vector<std::vector<std::complex<double>>> classes;

    const std::complex<double>& point(int cls0, int rank) const { return classes[cls0][rank]; }
};

/// Ungerboeck-style partition of a (Q*M1)-ary amplitude grid: positions
/// -(QM1-1), -(QM1-3), .., +(QM1-1) scaled so the mean square over the
/// union equals target_avg_energy; class k takes positions congruent to
/// k-1 mod Q (within-class spacing Q times the grid spacing).
ConstellationSet build_pam_partition(int q, int m1, double target_avg_energy);

/// Rotational partition of (Q*M1)-PSK: class k holds
/// amplitude * exp(i(2*pi*m/M1 + 2*pi*(k-1)/(M1*Q))), m = 0..M1-1.
ConstellationSet build_psk_partition(int q, int m1, double amplitude);

/// Reflected-binary label of a within-class point rank (0-based) at
/// width l_sym = log2(M1) bits, and its inverse.
std::uint32_t point_label(int rank, int l_sym);
int point_from_label(std::uint32_t label, int l_sym);

}  // namespace mdsmod
