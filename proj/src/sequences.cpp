#include "qmcqoi/sequences.hpp"
#include "qmcqoi/hash.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace qmcqoi {

namespace {

constexpr unsigned kBits = 32; // base-2 expansion precision per coordinate

// ---------------------------------------------------------------------------
// Digital net generating matrices (columns as 32-bit integers, MSB = first
// output bit), built from the shipped direction-number table.
// ---------------------------------------------------------------------------

struct NetTable {
    // net_columns[j][k] is column k of the generating matrix for dimension j+1
    std::vector<std::array<std::uint32_t, kBits>> columns;
};

std::string data_file_path() {
    if (const char* env = std::getenv("QMCQOI_DATA_DIR"))
        return std::string(env) + "/direction_numbers.txt";
#ifdef QMCQOI_DATA_DIR
    return std::string(QMCQOI_DATA_DIR) + "/direction_numbers.txt";
#else
    return "data/direction_numbers.txt";
#endif
}

NetTable load_net_table() {
    NetTable table;
    // dimension 1: identity generating matrix (van der Corput)
    std::array<std::uint32_t, kBits> ident{};
    for (unsigned k = 0; k < kBits; ++k) ident[k] = 1u << (kBits - 1 - k);
    table.columns.push_back(ident);

    const std::string path = data_file_path();
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open direction-number table: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        unsigned dim, deg;
        std::uint32_t a;
        if (!(ss >> dim >> deg >> a))
            throw std::runtime_error("malformed direction-number row: " + line);
        std::vector<std::uint32_t> m(deg);
        for (auto& v : m)
            if (!(ss >> v))
                throw std::runtime_error("short direction-number row: " + line);
        std::array<std::uint32_t, kBits> col{};
        for (unsigned k = 0; k < kBits; ++k) {
            if (k < deg) {
                col[k] = m[k] << (kBits - 1 - k);
            } else {
                std::uint32_t v = col[k - deg] ^ (col[k - deg] >> deg);
                for (unsigned i = 1; i < deg; ++i)
                    if ((a >> (deg - 1 - i)) & 1u) v ^= col[k - i];
                col[k] = v;
            }
        }
        if (dim != table.columns.size() + 1)
            throw std::runtime_error("direction-number table rows out of order");
        table.columns.push_back(col);
    }
    return table;
}

const NetTable& net_table() {
    static const NetTable table = load_net_table();
    return table;
}

// ---------------------------------------------------------------------------
// Extensible lattice generating vector: Korobov recursion z_1 = 1,
// z_{j+1} = 182667 z_j mod 2^20 (all components odd).
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> lattice_vector(unsigned d) {
    std::vector<std::uint64_t> z(d);
    std::uint64_t v = 1;
    for (unsigned j = 0; j < d; ++j) {
        z[j] = v;
        v = (v * 182667ull) & ((1ull << 20) - 1);
    }
    return z;
}

std::uint32_t bit_reverse32(std::uint32_t x) {
    x = ((x & 0x55555555u) << 1) | ((x >> 1) & 0x55555555u);
    x = ((x & 0x33333333u) << 2) | ((x >> 2) & 0x33333333u);
    x = ((x & 0x0F0F0F0Fu) << 4) | ((x >> 4) & 0x0F0F0F0Fu);
    x = ((x & 0x00FF00FFu) << 8) | ((x >> 8) & 0x00FF00FFu);
    return (x << 16) | (x >> 16);
}

// Per-dimension randomization stream.
std::uint64_t dim_seed(std::uint64_t seed, unsigned j) {
    return splitmix64(splitmix64(seed) + 0x7F4A7C15u + j);
}

// Nested uniform (Owen-style) scramble of a 32-bit digit string via hashing.
std::uint32_t owen_scramble(std::uint32_t y, std::uint64_t key) {
    std::uint32_t out = 0;
    for (int b = kBits - 1; b >= 0; --b) {
        std::uint64_t prefix = b == 31 ? 0 : (y >> (b + 1));
        std::uint64_t h = splitmix64(key ^ (prefix * 2 + 1) ^ (std::uint64_t(b) << 40));
        std::uint32_t bit = ((y >> b) & 1u) ^ std::uint32_t(h & 1u);
        out |= bit << b;
    }
    return out;
}

void check_spec(const SequenceSpec& spec, std::uint64_t n_start, std::uint64_t n_end) {
    if (spec.dimension == 0)
        throw std::invalid_argument("sequence spec: dimension must be >= 1");
    if (n_start < 1 || n_end < n_start)
        throw std::invalid_argument("sequence gen: need 1 <= n_start <= n_end");
    if (spec.kind != SequenceKind::Iid && n_end > kSequenceBudget)
        throw std::out_of_range("sequence gen: index " + std::to_string(n_end) +
                                " exceeds the 2^32 point budget");
    if (spec.kind == SequenceKind::DigitalNetB2 &&
        spec.dimension > net_table().columns.size())
        throw std::out_of_range("digital net: dimension " +
                                std::to_string(spec.dimension) +
                                " exceeds embedded table (max " +
                                std::to_string(net_table().columns.size()) + ")");
    if (spec.kind == SequenceKind::Lattice &&
        spec.randomization == Randomization::Scramble)
        throw std::invalid_argument("lattice supports shift randomization only");
    if (spec.kind == SequenceKind::Iid && spec.dimension > (1u << 16))
        throw std::out_of_range("iid: dimension too large");
}

} // namespace

unsigned max_net_dimension() {
    return static_cast<unsigned>(net_table().columns.size());
}

PointBlock gen(const SequenceSpec& spec, std::uint64_t n_start, std::uint64_t n_end) {
    check_spec(spec, n_start, n_end);
    const unsigned d = spec.dimension;
    PointBlock block;
    block.n_start = n_start;
    block.n_end = n_end;
    block.dimension = d;
    block.values.resize((n_end - n_start + 1) * d);

    switch (spec.kind) {
    case SequenceKind::Iid: {
        double* out = block.values.data();
        for (std::uint64_t n = n_start; n <= n_end; ++n) {
            std::uint64_t base = splitmix64(spec.seed + n * 0x9E3779B97F4A7C15ull);
            for (unsigned j = 0; j < d; ++j)
                *out++ = to_unit_open(splitmix64(base + j));
        }
        break;
    }
    case SequenceKind::Lattice: {
        const auto z = lattice_vector(d);
        const bool shifted = spec.randomization != Randomization::None;
        std::vector<double> delta(d, 0.0);
        if (shifted)
            for (unsigned j = 0; j < d; ++j)
                delta[j] = to_unit_open(splitmix64(dim_seed(spec.seed, j)));
        double* out = block.values.data();
        for (std::uint64_t n = n_start; n <= n_end; ++n) {
            const std::uint64_t r = bit_reverse32(std::uint32_t(n - 1));
            for (unsigned j = 0; j < d; ++j) {
                double x = double(std::uint32_t(r * z[j])) * 0x1p-32;
                if (shifted) {
                    x += delta[j];
                    if (x >= 1.0) x -= 1.0;
                    if (x <= 0.0) x = 0x1p-53;
                    if (x >= 1.0) x = 1.0 - 0x1p-53;
                }
                *out++ = x;
            }
        }
        break;
    }
    case SequenceKind::DigitalNetB2: {
        const auto& table = net_table();
        std::vector<std::uint32_t> dshift(d, 0);
        std::vector<std::uint64_t> skey(d, 0);
        if (spec.randomization == Randomization::Shift)
            for (unsigned j = 0; j < d; ++j)
                dshift[j] = std::uint32_t(splitmix64(dim_seed(spec.seed, j)));
        else if (spec.randomization == Randomization::Scramble)
            for (unsigned j = 0; j < d; ++j)
                skey[j] = splitmix64(dim_seed(spec.seed, j));
        double* out = block.values.data();
        for (std::uint64_t n = n_start; n <= n_end; ++n) {
            const std::uint32_t i = std::uint32_t(n - 1);
            for (unsigned j = 0; j < d; ++j) {
                const auto& col = table.columns[j];
                std::uint32_t y = 0;
                std::uint32_t rem = i;
                while (rem) {
                    const int b = std::countr_zero(rem);
                    y ^= col[b];
                    rem &= rem - 1;
                }
                switch (spec.randomization) {
                case Randomization::None:
                    *out++ = double(y) * 0x1p-32;
                    break;
                case Randomization::Shift:
                    *out++ = (double(y ^ dshift[j]) + 0.5) * 0x1p-32;
                    break;
                case Randomization::Scramble:
                    *out++ = (double(owen_scramble(y, skey[j])) + 0.5) * 0x1p-32;
                    break;
                }
            }
        }
        break;
    }
    }
    return block;
}

std::vector<SequenceSpec> replicate(const SequenceSpec& spec, unsigned R) {
    if (spec.kind == SequenceKind::Iid)
        throw std::invalid_argument("replicate: spec must be a low-discrepancy kind");
    if (R < 2)
        throw std::invalid_argument("replicate: need R >= 2");
    std::vector<SequenceSpec> reps(R, spec);
    for (unsigned r = 0; r < R; ++r)
        reps[r].seed = splitmix64(splitmix64(spec.seed ^ 0xC2B2AE3D27D4EB4Full) + r);
    return reps;
}

std::string to_string(SequenceKind k) {
    switch (k) {
    case SequenceKind::Iid: return "iid";
    case SequenceKind::Lattice: return "lattice";
    case SequenceKind::DigitalNetB2: return "digital-net-b2";
    }
    return "?";
}

std::string to_string(Randomization r) {
    switch (r) {
    case Randomization::None: return "none";
    case Randomization::Shift: return "shift";
    case Randomization::Scramble: return "scramble";
    }
    return "?";
}

} // namespace qmcqoi
