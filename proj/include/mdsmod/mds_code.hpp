#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdsmod/errors.hpp"

namespace mdsmod {

/// How l-bit groups select a class index.
enum class Mapping { Gray, Natural };

/// How the final element of a tuple is derived from the first N-1.
enum class Parity { ModQ, BitwiseSpc };

struct MappingMode {
    Mapping mapping = Mapping::Gray;
    Parity parity = Parity::ModQ;
};

/// One codeword skeleton: N class indices, each in 1..Q.
using IndexTuple = std::vector<int>;

/// Bits are stored one per byte (0 or 1), most significant bit of each
/// label group first.
using Bits = std::vector<std::uint8_t>;

/// log2(Q). Throws std::invalid_argument unless Q is a power of two.
/// Q = 1 yields zero-width labels.
int bits_per_class(int q);

/// The unique class that closes `prefix` to a zero sum mod Q, i.e. the
/// k in 1..Q with (sum(prefix) + k) mod Q == 0.
int parity_element(std::span<const int> prefix, int q);

/// Reflected-binary label of class k (1-based) at width l bits.
std::uint32_t gray_label(int k, int l);
int gray_class(std::uint32_t label, int l);

/// Plain binary label of class k (1-based) at width l bits.
std::uint32_t natural_label(int k, int l);
int natural_class(std::uint32_t label, int l);

std::uint32_t class_label(int k, int l, Mapping mapping);
int class_from_label(std::uint32_t label, int l, Mapping mapping);

/// Unpack a label to MSB-first bits / pack MSB-first bits to a value.
Bits label_bits(std::uint32_t label, int l);
std::uint32_t bits_value(std::span<const std::uint8_t> bits);

/// Whether the last element of `tuple` closes the code under `parity`.
bool tuple_parity_ok(const IndexTuple& tuple, int q, Parity parity);

/// (N-1)*log2(Q) bits -> N-element tuple. Consecutive l-bit groups pick
/// the first N-1 classes; the last element closes the code.
IndexTuple encode_tuple(std::span<const std::uint8_t> bits, MappingMode mode, int n, int q);

/// Inverse of encode_tuple. Throws IntegrityError if the tuple does not
/// close, std::invalid_argument if an element is outside 1..Q.
Bits decode_tuple(const IndexTuple& tuple, MappingMode mode, int q);

/// All Q^(N-1) valid tuples, ordered by their (N-1)-digit prefix with the
/// first element as the most significant digit.
std::vector<IndexTuple> enumerate_tuples(int n, int q, Parity parity = Parity::ModQ);

}  // namespace mdsmod
