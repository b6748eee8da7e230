#ifndef INTERAX_SEARCH_HPP
#define INTERAX_SEARCH_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "info.hpp"
#include "significance.hpp"

namespace interax {

struct interaction_score {
    attr_set subset;                              // sorted ascending
    attr_set context;
    double info = 0.0;                            // bits, signed
    double magnitude = 0.0;                       // |info|
    double normed_magnitude = 0.0;                // |info| / H(subset | context)
    std::optional<double> relative_to_label;      // 100 * info / H(label)
    std::optional<significance_result> significance;  // pairs only
};

enum class rank_key { magnitude, normed_magnitude };

struct search_spec {
    int max_order = 3;
    std::size_t top_n = 16;
    bool require_label = false;
    attr_set context;
    rank_key rank_by = rank_key::magnitude;
    std::size_t threads = 0;                      // 0: hardware concurrency
    std::optional<double> low_order_gate;         // bits; see enumerate_interactions
};

namespace detail {

// every candidate gets its own request so scores are independent pure
// computations; thread count cannot change any value or the final order
inline interaction_score score_subset(const dataset& ds, const estimator& est,
                                      attr_set subset, const attr_set& context,
                                      std::optional<double> h_label,
                                      std::optional<std::uint32_t> label) {
    interaction_score sc;
    sc.subset = std::move(subset);
    sc.context = context;
    auto rq = make_request(ds, est, {std::span(sc.subset), std::span(context)});
    const std::uint32_t sm = rq.mask_of(sc.subset);
    const std::uint32_t zm = rq.mask_of(context);
    sc.info = interaction_from(rq.calc, sm, zm);
    sc.magnitude = std::abs(sc.info);
    const double denom = rq.calc.h(sm | zm) - rq.calc.h(zm);
    sc.normed_magnitude = (denom > 0.0) ? sc.magnitude / denom : 0.0;
    if (h_label && *h_label > 0.0 && label &&
        std::find(sc.subset.begin(), sc.subset.end(), *label) != sc.subset.end()) {
        sc.relative_to_label = 100.0 * sc.info / *h_label;
    }
    if (sc.subset.size() == 2) {
        sc.significance = test_dependence(ds, sc.subset[0], sc.subset[1], context);
    }
    return sc;
}

template <typename Fn>
inline void for_each_combination(std::uint32_t n, int k,
                                 const std::vector<std::uint32_t>& pool, Fn&& fn) {
    attr_set idx(k);
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    if (static_cast<int>(n) < k) return;
    while (true) {
        for (int i = 0; i < k; ++i) idx[i] = pool[pos[i]];
        fn(idx);
        int i = k - 1;
        while (i >= 0 && pos[i] == static_cast<int>(n) - k + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

inline void rank_scores(std::vector<interaction_score>& scores, rank_key by) {
    std::stable_sort(scores.begin(), scores.end(),
                     [by](const interaction_score& a, const interaction_score& b) {
                         const double ka = (by == rank_key::magnitude) ? a.magnitude
                                                                       : a.normed_magnitude;
                         const double kb = (by == rank_key::magnitude) ? b.magnitude
                                                                       : b.normed_magnitude;
                         if (ka != kb) return ka > kb;
                         return a.subset < b.subset;
                     });
}

inline std::vector<interaction_score> score_all(const dataset& ds, const estimator& est,
                                                const std::vector<attr_set>& candidates,
                                                const attr_set& context,
                                                std::optional<double> h_label,
                                                std::optional<std::uint32_t> label,
                                                std::size_t threads) {
    std::vector<interaction_score> scores(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t i) {
        scores[i] = score_subset(ds, est, candidates[i], context, h_label, label);
    });
    return scores;
}

}  // namespace detail

// Exhaustive scoring of all attribute subsets of size 2..max_order, outside
// the context set, ranked by the chosen key descending with ties broken by
// ascending lexicographic subset.  Interaction information is not monotone
// over subsets, so nothing is pruned; low_order_gate, when set, filters the
// ranked output to subsets of order 3+ having some immediate sub-subset
// whose magnitude reaches the gate (a readability filter, not a pruner).
inline std::vector<interaction_score> enumerate_interactions(const dataset& ds,
                                                             const estimator& est,
                                                             const search_spec& spec) {
    if (spec.max_order < 2) {
        throw std::invalid_argument("enumerate_interactions: max_order must be at least 2");
    }
    if (spec.top_n < 1) {
        throw std::invalid_argument("enumerate_interactions: top_n must be at least 1");
    }
    const auto label = ds.label_index();
    if (spec.require_label && !label) {
        throw std::invalid_argument("enumerate_interactions: no label designated");
    }
    std::vector<std::uint32_t> pool;
    for (std::uint32_t a = 0; a < ds.n_attributes(); ++a) {
        if (std::find(spec.context.begin(), spec.context.end(), a) == spec.context.end()) {
            pool.push_back(a);
        }
    }
    if (spec.max_order > static_cast<int>(pool.size())) {
        throw std::invalid_argument("enumerate_interactions: max_order exceeds attribute count");
    }
    std::optional<double> h_label;
    if (label) {
        h_label = entropy(ds, est, attr_set{*label});
    }
    std::vector<attr_set> candidates;
    for (int k = 2; k <= spec.max_order; ++k) {
        detail::for_each_combination(
            static_cast<std::uint32_t>(pool.size()), k, pool, [&](const attr_set& s) {
                if (spec.require_label &&
                    std::find(s.begin(), s.end(), *label) == s.end()) {
                    return;
                }
                candidates.push_back(s);
            });
    }
    auto scores = detail::score_all(ds, est, candidates, spec.context, h_label, label,
                                    spec.threads);
    if (spec.low_order_gate) {
        const double gate = *spec.low_order_gate;
        std::vector<interaction_score> kept;
        kept.reserve(scores.size());
        for (const auto& sc : scores) {
            if (sc.subset.size() <= 2) {
                kept.push_back(sc);
                continue;
            }
            bool pass = false;
            for (std::size_t drop = 0; drop < sc.subset.size() && !pass; ++drop) {
                attr_set sub;
                for (std::size_t i = 0; i < sc.subset.size(); ++i) {
                    if (i != drop) sub.push_back(sc.subset[i]);
                }
                for (const auto& other : scores) {
                    if (other.subset == sub && other.magnitude >= gate) {
                        pass = true;
                        break;
                    }
                }
            }
            if (pass) kept.push_back(sc);
        }
        scores = std::move(kept);
    }
    detail::rank_scores(scores, spec.rank_by);
    if (scores.size() > spec.top_n) scores.resize(spec.top_n);
    return scores;
}

// pairs and triples of non-label attributes scored given the label
inline std::vector<interaction_score> conditional_scan(const dataset& ds, const estimator& est,
                                                       int max_order, std::size_t top_n,
                                                       rank_key rank_by = rank_key::magnitude,
                                                       std::size_t threads = 0) {
    const auto label = ds.label_index();
    if (!label) {
        throw std::invalid_argument("conditional_scan: no label designated");
    }
    if (max_order < 2 || max_order > 3) {
        throw std::invalid_argument("conditional_scan: order must be 2 or 3");
    }
    search_spec spec;
    spec.max_order = max_order;
    spec.top_n = top_n;
    spec.context = {*label};
    spec.rank_by = rank_by;
    spec.threads = threads;
    return enumerate_interactions(ds, est, spec);
}

struct star_result {
    std::vector<interaction_score> pairs;
    std::vector<interaction_score> triples;
};

// interactions radiating from one anchor attribute: its top pairs by normed
// magnitude, then triples of the anchor with two of those top partners
inline star_result star_scan(const dataset& ds, const estimator& est, std::uint32_t anchor,
                             std::size_t k_pairs, std::size_t k_triples,
                             std::size_t threads = 0) {
    if (anchor >= ds.n_attributes()) {
        throw std::invalid_argument("star_scan: anchor out of range");
    }
    if (k_pairs < 1) throw std::invalid_argument("star_scan: k_pairs must be at least 1");
    std::vector<attr_set> pair_candidates;
    for (std::uint32_t a = 0; a < ds.n_attributes(); ++a) {
        if (a == anchor) continue;
        attr_set s{std::min(a, anchor), std::max(a, anchor)};
        pair_candidates.push_back(std::move(s));
    }
    star_result out;
    out.pairs = detail::score_all(ds, est, pair_candidates, {}, std::nullopt, std::nullopt,
                                  threads);
    detail::rank_scores(out.pairs, rank_key::normed_magnitude);
    if (out.pairs.size() > k_pairs) out.pairs.resize(k_pairs);

    std::vector<std::uint32_t> partners;
    for (const auto& sc : out.pairs) {
        for (std::uint32_t a : sc.subset) {
            if (a != anchor) partners.push_back(a);
        }
    }
    std::sort(partners.begin(), partners.end());
    std::vector<attr_set> triple_candidates;
    for (std::size_t i = 0; i < partners.size(); ++i) {
        for (std::size_t j = i + 1; j < partners.size(); ++j) {
            attr_set s{anchor, partners[i], partners[j]};
            std::sort(s.begin(), s.end());
            triple_candidates.push_back(std::move(s));
        }
    }
    out.triples = detail::score_all(ds, est, triple_candidates, {}, std::nullopt,
                                    std::nullopt, threads);
    detail::rank_scores(out.triples, rank_key::normed_magnitude);
    if (out.triples.size() > k_triples) out.triples.resize(k_triples);
    return out;
}

}  // namespace interax

#endif
