#ifndef INTERAX_COMMON_HPP
#define INTERAX_COMMON_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace interax {

// Hard cap on the arity of one joint table.  Every measure builds a single
// joint over subset+context, so this bounds |S|+|Z|, not the dataset width.
inline constexpr std::size_t max_joint_arity = 16;

// Values in (-eps, 0) produced by catastrophic cancellation of entropy sums
// are clamped to zero; anything more negative on a provably nonnegative
// quantity is a real bug and must not be silently absorbed.  Sized for
// sums over ~1e5 cells, worst case ~n*eps*H, well below any sign error.
inline constexpr double nonneg_epsilon = 1e-9;

inline double clamp_nonneg(double x, const char* what) {
    if (x < -nonneg_epsilon) {
        throw std::logic_error(std::string(what) + " came out negative: " + std::to_string(x));
    }
    return x <= 0.0 ? 0.0 : x;  // folds -0.0 to 0.0 as well
}

inline double log2_safe(double p) {
    return std::log2(p);
}

// One cell address inside a joint table: value indices for up to
// max_joint_arity attributes.  Fixed-size so it can live as a hash key
// without allocation.
struct cell_key {
    std::array<std::uint32_t, max_joint_arity> v{};
    std::uint8_t len = 0;

    bool operator==(const cell_key& o) const noexcept {
        if (len != o.len) return false;
        for (std::uint8_t i = 0; i < len; ++i) {
            if (v[i] != o.v[i]) return false;
        }
        return true;
    }
};

inline std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct cell_key_hash {
    std::size_t operator()(const cell_key& k) const noexcept {
        std::uint64_t h = k.len;
        for (std::uint8_t i = 0; i < k.len; ++i) {
            h = mix64(h ^ k.v[i]);
        }
        return static_cast<std::size_t>(h);
    }
};

// Raised for malformed input data (missing files, ragged rows, unknown
// column names); the CLI maps it to exit code 2.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Static chunking over a pre-sized index range.  Each index must be an
// independent pure computation writing its own slot; then the result is
// identical for any thread count, which is what the determinism tests pin.
template <typename Fn>
inline void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(1, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

}  // namespace interax

#endif
