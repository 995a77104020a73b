#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmcqoi {

enum class SequenceKind { Iid, Lattice, DigitalNetB2 };
enum class Randomization { None, Shift, Scramble };

// Shift on a lattice is a mod-1 shift; on a digital net it is a digital
// (XOR) shift. Scramble is hash-based nested uniform scrambling (nets only).
struct SequenceSpec {
    SequenceKind kind = SequenceKind::Lattice;
    unsigned dimension = 1;
    std::uint64_t seed = 0;
    Randomization randomization = Randomization::Shift;
};

// Points at 1-based sequence indices [n_start, n_end], row-major.
struct PointBlock {
    std::uint64_t n_start = 1;
    std::uint64_t n_end = 0;
    unsigned dimension = 0;
    std::vector<double> values; // (n_end - n_start + 1) x dimension

    std::uint64_t rows() const { return n_end - n_start + 1; }
    const double* row(std::uint64_t r) const { return values.data() + r * dimension; }
};

// Maximum supported index for the LD kinds (32 bits of base-2 expansion).
inline constexpr std::uint64_t kSequenceBudget = std::uint64_t(1) << 32;

// Points at 1-based indices n_start..n_end of the infinite sequence defined
// by spec. Pure: identical spec + range give bit-identical points. Digital
// nets use natural (counting) order, so index i maps to integer i-1.
PointBlock gen(const SequenceSpec& spec, std::uint64_t n_start, std::uint64_t n_end);

// R specs sharing the deterministic point structure of spec, differing only in
// independently derived randomization seeds. LD kinds only; R >= 2.
std::vector<SequenceSpec> replicate(const SequenceSpec& spec, unsigned R);

// Largest dimension with an embedded generating-matrix column (digital net).
unsigned max_net_dimension();

std::string to_string(SequenceKind k);
std::string to_string(Randomization r);

} // namespace qmcqoi
