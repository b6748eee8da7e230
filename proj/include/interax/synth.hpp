#ifndef INTERAX_SYNTH_HPP
#define INTERAX_SYNTH_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "prob.hpp"

// Deterministic generators for the canonical constructions the tests and
// demos lean on.  Same (params, n, seed) gives byte-identical data: all
// draws come straight from the mt19937_64 word sequence, never through
// distribution adapters with unspecified algorithms.

namespace interax {

namespace detail {

inline std::uint32_t draw_bit(std::mt19937_64& eng) {
    return static_cast<std::uint32_t>(eng() >> 63);
}

inline double draw_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline dataset rows_to_dataset(const std::vector<std::string>& header,
                               const std::vector<std::vector<std::string>>& rows,
                               const std::optional<std::string>& label = std::nullopt) {
    load_options opt;
    opt.label = label;
    return make_dataset(header, rows, opt);
}

inline cell_key key3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    cell_key k{};
    k.len = 3;
    k.v[0] = a;
    k.v[1] = b;
    k.v[2] = c;
    return k;
}

}  // namespace detail

// k uniform bits plus their mod-2 sum.  When n is a multiple of 2^k every
// configuration appears equally often, so empirical = generating
// distribution and the parity identities hold exactly.
inline dataset gen_parity(int k, std::size_t n, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("gen_parity: k must be at least 2");
    if (k + 1 > static_cast<int>(max_joint_arity)) {
        throw std::invalid_argument("gen_parity: k too large");
    }
    if (n < 1) throw std::invalid_argument("gen_parity: n must be at least 1");
    std::vector<std::string> header;
    for (int i = 0; i < k; ++i) header.push_back(std::string(1, static_cast<char>('a' + i)));
    header.push_back(std::string(1, static_cast<char>('a' + k)));
    const std::size_t cells = std::size_t{1} << k;
    const bool exhaustive = (n % cells == 0);
    std::mt19937_64 eng(seed);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t config;
        if (exhaustive) {
            config = r % cells;
        } else {
            config = 0;
            for (int i = 0; i < k; ++i) config |= static_cast<std::size_t>(detail::draw_bit(eng)) << i;
        }
        std::vector<std::string> row;
        row.reserve(k + 1);
        std::uint32_t parity = 0;
        for (int i = 0; i < k; ++i) {
            const std::uint32_t bit = (config >> i) & 1u;
            parity ^= bit;
            row.push_back(bit ? "1" : "0");
        }
        row.push_back(parity ? "1" : "0");
        rows.push_back(std::move(row));
    }
    return detail::rows_to_dataset(header, rows);
}

// one uniform bit copied into three identical attributes a, b, c
inline dataset gen_triplicate(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_triplicate: n must be at least 2");
    const bool exhaustive = (n % 2 == 0);
    std::mt19937_64 eng(seed);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint32_t bit = exhaustive ? static_cast<std::uint32_t>(r % 2)
                                             : detail::draw_bit(eng);
        const std::string v = bit ? "1" : "0";
        rows.push_back({v, v, v});
    }
    return detail::rows_to_dataset({"a", "b", "c"}, rows);
}

// with probability p1 one of the four a = b+c (mod 2) configurations,
// uniformly; otherwise (2,2,2)
inline dataset gen_mixture(double p1, std::size_t n, std::uint64_t seed) {
    if (p1 < 0.0 || p1 > 1.0) throw std::invalid_argument("gen_mixture: p1 must be in [0,1]");
    if (n < 1) throw std::invalid_argument("gen_mixture: n must be at least 1");
    std::mt19937_64 eng(seed);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (detail::draw_unit(eng) < p1) {
            const std::uint64_t idx = eng() & 3u;
            const std::uint32_t b = idx & 1u;
            const std::uint32_t c = (idx >> 1) & 1u;
            const std::uint32_t a = b ^ c;
            rows.push_back({a ? "1" : "0", b ? "1" : "0", c ? "1" : "0"});
        } else {
            rows.push_back({"2", "2", "2"});
        }
    }
    return detail::rows_to_dataset({"a", "b", "c"}, rows);
}

// the generating distribution of gen_mixture over {0,1,2}^3, exact
inline joint_distribution mixture_joint(double p1) {
    if (p1 < 0.0 || p1 > 1.0) throw std::invalid_argument("mixture_joint: p1 must be in [0,1]");
    joint_distribution j;
    j.attrs = {0, 1, 2};
    j.cardinalities = {3, 3, 3};
    j.n_cells = 27.0;
    j.implicit_prob = 0.0;
    if (p1 > 0.0) {
        const double q = p1 / 4.0;
        j.probs.emplace(detail::key3(0, 0, 0), q);
        j.probs.emplace(detail::key3(1, 1, 0), q);
        j.probs.emplace(detail::key3(1, 0, 1), q);
        j.probs.emplace(detail::key3(0, 1, 1), q);
    }
    if (p1 < 1.0) {
        j.probs.emplace(detail::key3(2, 2, 2), 1.0 - p1);
    }
    return j;
}

// label y plus m attributes, each independently matching y 75% of the time;
// conditionally independent given y by construction
inline dataset gen_naive_bayes(int m, std::size_t n, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("gen_naive_bayes: m must be at least 1");
    if (n < 1) throw std::invalid_argument("gen_naive_bayes: n must be at least 1");
    std::vector<std::string> header;
    for (int i = 0; i < m; ++i) header.push_back("x" + std::to_string(i + 1));
    header.push_back("y");
    std::mt19937_64 eng(seed);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint32_t y = detail::draw_bit(eng);
        std::vector<std::string> row;
        row.reserve(m + 1);
        for (int i = 0; i < m; ++i) {
            const std::uint32_t x = (detail::draw_unit(eng) < 0.75) ? y : 1u - y;
            row.push_back(x ? "1" : "0");
        }
        row.push_back(y ? "1" : "0");
        rows.push_back(std::move(row));
    }
    return detail::rows_to_dataset(header, rows, "y");
}

// two copies of a hidden uniform bit, the second flipped with the given
// probability; noise 0 gives two identical attributes
inline dataset gen_synonym(double noise, std::size_t n, std::uint64_t seed) {
    if (noise < 0.0 || noise > 1.0) {
        throw std::invalid_argument("gen_synonym: noise must be in [0,1]");
    }
    if (n < 1) throw std::invalid_argument("gen_synonym: n must be at least 1");
    std::mt19937_64 eng(seed);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint32_t s = detail::draw_bit(eng);
        std::uint32_t b = s;
        if (noise > 0.0 && detail::draw_unit(eng) < noise) b = 1u - s;
        rows.push_back({s ? "1" : "0", b ? "1" : "0"});
    }
    return detail::rows_to_dataset({"a", "b"}, rows);
}

// anchor f fires in either of two mutually exclusive contexts:
// (f,c1,c2) is (0,0,0) with probability 0.3, else (1,1,0) or (1,0,1)
// with probability 0.35 each
inline dataset gen_polysemy(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_polysemy: n must be at least 1");
    std::mt19937_64 eng(seed);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double u = detail::draw_unit(eng);
        if (u < 0.3) {
            rows.push_back({"0", "0", "0"});
        } else if (u < 0.65) {
            rows.push_back({"1", "1", "0"});
        } else {
            rows.push_back({"1", "0", "1"});
        }
    }
    return detail::rows_to_dataset({"f", "c1", "c2"}, rows);
}

// the generating distribution of gen_polysemy, exact
inline joint_distribution polysemy_joint() {
    joint_distribution j;
    j.attrs = {0, 1, 2};
    j.cardinalities = {2, 2, 2};
    j.n_cells = 8.0;
    j.implicit_prob = 0.0;
    j.probs.emplace(detail::key3(0, 0, 0), 0.30);
    j.probs.emplace(detail::key3(1, 1, 0), 0.35);
    j.probs.emplace(detail::key3(1, 0, 1), 0.35);
    return j;
}

}  // namespace interax

#endif
