#ifndef INTERAX_PROB_HPP
#define INTERAX_PROB_HPP

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"

namespace interax {

// Sparse co-occurrence counts over an ordered attribute subset.
// Zero-count cells are never stored.
struct contingency_table {
    std::vector<std::uint32_t> attrs;           // dataset column indices
    std::vector<std::uint32_t> cardinalities;   // alphabet sizes, same order
    std::unordered_map<cell_key, std::uint64_t, cell_key_hash> counts;
    std::uint64_t total = 0;
};

inline contingency_table count_table(const dataset& ds, std::span<const std::uint32_t> attrs) {
    if (attrs.empty() || attrs.size() > max_joint_arity) {
        throw std::invalid_argument("count_table: subset arity out of range");
    }
    contingency_table t;
    t.attrs.assign(attrs.begin(), attrs.end());
    for (std::uint32_t a : attrs) {
        t.cardinalities.push_back(ds.cardinality(a));
    }
    t.counts.reserve(ds.n_rows() / 2 + 8);
    cell_key key;
    key.len = static_cast<std::uint8_t>(attrs.size());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            key.v[i] = ds.value(r, attrs[i]);
        }
        ++t.counts[key];
    }
    t.total = ds.n_rows();
    return t;
}

struct estimator {
    enum class kind_t { ml, dirichlet };
    kind_t kind = kind_t::ml;
    double alpha = 1.0;  // dirichlet only; 1 = Laplace

    static estimator ml() { return {kind_t::ml, 0.0}; }
    static estimator dirichlet(double a) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("dirichlet alpha must be positive");
        }
        return {kind_t::dirichlet, a};
    }
};

inline std::string to_string(const estimator& est) {
    if (est.kind == estimator::kind_t::ml) return "ml";
    char buf[48];
    std::snprintf(buf, sizeof buf, "dirichlet:%g", est.alpha);
    return buf;
}

// Probability mass over an attribute subset.  Stored cells carry their own
// probability; the remaining (cardinality-product minus stored) cells share
// one implicit probability: 0 under ml, alpha/(total+alpha*M) under
// dirichlet.  M is kept as a double since cardinality products overflow
// integers long before they trouble a double.
struct joint_distribution {
    std::vector<std::uint32_t> attrs;
    std::vector<std::uint32_t> cardinalities;
    std::unordered_map<cell_key, double, cell_key_hash> probs;
    double implicit_prob = 0.0;
    double n_cells = 1.0;  // product of cardinalities

    double n_implicit() const { return n_cells - static_cast<double>(probs.size()); }
};

inline joint_distribution estimate(const contingency_table& t, const estimator& est) {
    joint_distribution j;
    j.attrs = t.attrs;
    j.cardinalities = t.cardinalities;
    for (std::uint32_t c : t.cardinalities) {
        j.n_cells *= static_cast<double>(c);
    }
    j.probs.reserve(t.counts.size());
    if (est.kind == estimator::kind_t::ml) {
        const double denom = static_cast<double>(t.total);
        for (const auto& [key, c] : t.counts) {
            j.probs.emplace(key, static_cast<double>(c) / denom);
        }
        j.implicit_prob = 0.0;
    } else {
        const double denom = static_cast<double>(t.total) + est.alpha * j.n_cells;
        for (const auto& [key, c] : t.counts) {
            j.probs.emplace(key, (static_cast<double>(c) + est.alpha) / denom);
        }
        j.implicit_prob = est.alpha / denom;
    }
    return j;
}

// Project a joint down to the attribute positions in `keep` (indices into
// joint.attrs, strictly increasing).  Smoothed mass is preserved exactly:
// each projected cell receives its stored mass plus implicit mass for the
// dropped-cell combinations not covered by stored cells, and cells with no
// stored support at all stay implicit at dropped_cells * implicit_prob.
inline joint_distribution marginalize(const joint_distribution& j,
                                      std::span<const std::size_t> keep) {
    if (keep.empty() || keep.size() > j.attrs.size()) {
        throw std::invalid_argument("marginalize: bad projection");
    }
    joint_distribution out;
    double dropped_cells = 1.0;
    {
        std::size_t ki = 0;
        for (std::size_t pos = 0; pos < j.attrs.size(); ++pos) {
            if (ki < keep.size() && keep[ki] == pos) {
                out.attrs.push_back(j.attrs[pos]);
                out.cardinalities.push_back(j.cardinalities[pos]);
                out.n_cells *= static_cast<double>(j.cardinalities[pos]);
                ++ki;
            } else {
                dropped_cells *= static_cast<double>(j.cardinalities[pos]);
            }
        }
        if (ki != keep.size()) {
            throw std::invalid_argument("marginalize: keep positions not increasing/in range");
        }
    }

    struct acc {
        double p = 0.0;
        double stored = 0.0;  // how many source cells landed here
    };
    std::unordered_map<cell_key, acc, cell_key_hash> sums;
    sums.reserve(j.probs.size());
    cell_key key;
    key.len = static_cast<std::uint8_t>(keep.size());
    for (const auto& [src, p] : j.probs) {
        for (std::size_t i = 0; i < keep.size(); ++i) {
            key.v[i] = src.v[keep[i]];
        }
        auto& a = sums[key];
        a.p += p;
        a.stored += 1.0;
    }

    out.implicit_prob = dropped_cells * j.implicit_prob;
    out.probs.reserve(sums.size());
    for (const auto& [k, a] : sums) {
        out.probs.emplace(k, a.p + (dropped_cells - a.stored) * j.implicit_prob);
    }
    return out;
}

// Shannon entropy in bits.  The implicit cells contribute analytically; the
// stored loop never sees a zero probability because zero counts are not
// stored and smoothing keeps everything positive.
inline double entropy(const joint_distribution& j) {
    double h = 0.0;
    for (const auto& [key, p] : j.probs) {
        if (p > 0.0) {
            h -= p * log2_safe(p);
        }
    }
    const double m = j.n_implicit();
    if (m > 0.0 && j.implicit_prob > 0.0) {
        h -= m * j.implicit_prob * log2_safe(j.implicit_prob);
    }
    return clamp_nonneg(h, "entropy");
}

}  // namespace interax

#endif
