#include "mdsmod/mds_code.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "mdsmod/errors.hpp"

namespace mdsmod {

namespace {

void check_class_range(int k, int q) {
    if (k < 1 || k > q)
        throw std::invalid_argument("class index " + std::to_string(k) + " outside 1.." +
                                    std::to_string(q));
}

void check_label_range(std::uint32_t label, int l) {
    if (l < 0 || l > 20) throw std::invalid_argument("label width out of range");
    if (l < 32 && (label >> l) != 0)
        throw std::invalid_argument("label " + std::to_string(label) + " wider than " +
                                    std::to_string(l) + " bits");
}

}  // namespace

int bits_per_class(int q) {
    if (q < 1) throw std::invalid_argument("Q must be at least 1");
    if (!std::has_single_bit(static_cast<unsigned>(q)))
        throw std::invalid_argument("bit mapping requires Q to be a power of two, got " +
                                    std::to_string(q));
    return std::countr_zero(static_cast<unsigned>(q));
}

int parity_element(std::span<const int> prefix, int q) {
    if (q < 1) throw std::invalid_argument("Q must be at least 1");
    long long sum = 0;
    for (int v : prefix) {
        check_class_range(v, q);
        sum += v;
    }
    const int residue = static_cast<int>(sum % q);
    return residue == 0 ? q : q - residue;
}

std::uint32_t gray_label(int k, int l) {
    check_class_range(k, 1 << l);
    const auto v = static_cast<std::uint32_t>(k - 1);
    return v ^ (v >> 1);
}

int gray_class(std::uint32_t label, int l) {
    check_label_range(label, l);
    // Undo the reflection: each bit is the XOR of all higher label bits.
    std::uint32_t v = label;
    for (std::uint32_t shift = v >> 1; shift != 0; shift >>= 1) v ^= shift;
    return static_cast<int>(v) + 1;
}

std::uint32_t natural_label(int k, int l) {
    check_class_range(k, 1 << l);
    return static_cast<std::uint32_t>(k - 1);
}

int natural_class(std::uint32_t label, int l) {
    check_label_range(label, l);
    return static_cast<int>(label) + 1;
}

std::uint32_t class_label(int k, int l, Mapping mapping) {
    return mapping == Mapping::Gray ? gray_label(k, l) : natural_label(k, l);
}

int class_from_label(std::uint32_t label, int l, Mapping mapping) {
    return mapping == Mapping::Gray ? gray_class(label, l) : natural_class(label, l);
}

Bits label_bits(std::uint32_t label, int l) {
    check_label_range(label, l);
    Bits out(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) out[i] = (label >> (l - 1 - i)) & 1u;
    return out;
}

std::uint32_t bits_value(std::span<const std::uint8_t> bits) {
    if (bits.size() > 20) throw std::invalid_argument("bit group too wide");
    std::uint32_t v = 0;
    for (std::uint8_t b : bits) {
        if (b > 1) throw std::invalid_argument("bits must be 0 or 1");
        v = (v << 1) | b;
    }
    return v;
}

bool tuple_parity_ok(const IndexTuple& tuple, int q, Parity parity) {
    if (tuple.size() < 2) throw std::invalid_argument("tuple needs at least 2 elements");
    for (int v : tuple) check_class_range(v, q);
    const auto n = tuple.size();
    if (parity == Parity::ModQ) {
        return tuple[n - 1] == parity_element(std::span<const int>(tuple.data(), n - 1), q);
    }
    const int l = bits_per_class(q);
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc ^= gray_label(tuple[i], l);
    return tuple[n - 1] == gray_class(acc, l);
}

IndexTuple encode_tuple(std::span<const std::uint8_t> bits, MappingMode mode, int n, int q) {
    if (n < 2) throw std::invalid_argument("N must be at least 2");
    const int l = bits_per_class(q);
    if (bits.size() != static_cast<std::size_t>(n - 1) * l)
        throw std::invalid_argument("expected " + std::to_string((n - 1) * l) + " bits, got " +
                                    std::to_string(bits.size()));
    IndexTuple tuple(static_cast<std::size_t>(n));
    std::uint32_t label_xor = 0;
    for (int t = 0; t < n - 1; ++t) {
        const std::uint32_t label = bits_value(bits.subspan(static_cast<std::size_t>(t) * l, l));
        tuple[t] = class_from_label(label, l, mode.mapping);
        label_xor ^= label;
    }
    if (mode.parity == Parity::ModQ) {
        tuple[n - 1] = parity_element(std::span<const int>(tuple.data(), n - 1), q);
    } else {
        tuple[n - 1] = class_from_label(label_xor, l, mode.mapping);
    }
    return tuple;
}

Bits decode_tuple(const IndexTuple& tuple, MappingMode mode, int q) {
    const int l = bits_per_class(q);
    if (tuple.size() < 2) throw std::invalid_argument("tuple needs at least 2 elements");
    for (int v : tuple) check_class_range(v, q);
    if (!tuple_parity_ok(tuple, q, mode.parity))
        throw IntegrityError("tuple does not close under its parity rule");
    Bits out;
    out.reserve((tuple.size() - 1) * l);
    for (std::size_t t = 0; t + 1 < tuple.size(); ++t) {
        const Bits group = label_bits(class_label(tuple[t], l, mode.mapping), l);
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

std::vector<IndexTuple> enumerate_tuples(int n, int q, Parity parity) {
    if (n < 2) throw std::invalid_argument("N must be at least 2");
    if (q < 1) throw std::invalid_argument("Q must be at least 1");
    if (parity == Parity::BitwiseSpc) bits_per_class(q);
    unsigned long long count = 1;
    for (int t = 0; t < n - 1; ++t) {
        if (count > (1ull << 40) / static_cast<unsigned>(q))
            throw std::invalid_argument("tuple space too large to enumerate");
        count *= static_cast<unsigned>(q);
    }
    std::vector<IndexTuple> out;
    out.reserve(count);
    IndexTuple prefix(static_cast<std::size_t>(n - 1), 1);
    for (unsigned long long i = 0; i < count; ++i) {
        IndexTuple tuple(prefix.begin(), prefix.end());
        if (parity == Parity::ModQ) {
            tuple.push_back(parity_element(prefix, q));
        } else {
            // XOR of natural labels; the Gray map is linear over GF(2), so
            // closing with natural labels closes with Gray labels too.
            std::uint32_t acc = 0;
            for (int v : prefix) acc ^= static_cast<std::uint32_t>(v - 1);
            tuple.push_back(static_cast<int>(acc) + 1);
        }
        out.push_back(std::move(tuple));
        for (int t = n - 2; t >= 0; --t) {
            if (prefix[t] < q) {
                ++prefix[t];
                break;
            }
            prefix[t] = 1;
        }
    }
    return out;
}

}  // namespace mdsmod
