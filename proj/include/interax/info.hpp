#ifndef INTERAX_INFO_HPP
#define INTERAX_INFO_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "prob.hpp"

namespace interax {

// All measures for one request are derived from a single maximal joint,
// marginalized downward.  That keeps identities like the interaction
// recursion exact to machine precision instead of drifting across
// independently counted tables, and it is what makes smoothed marginals
// consistent (a dirichlet marginal is the marginal of the smoothed joint,
// never a separately smoothed table).
class subset_calculus {
public:
    subset_calculus(const dataset& ds, std::span<const std::uint32_t> attrs,
                    const estimator& est)
        : full_(estimate(count_table(ds, attrs), est)) {
        init();
    }

    explicit subset_calculus(joint_distribution maximal) : full_(std::move(maximal)) {
        init();
    }

    std::size_t arity() const { return full_.attrs.size(); }
    std::uint32_t full_mask() const { return full_mask_; }
    const joint_distribution& maximal() const { return full_; }

    // entropy of the attribute positions selected by mask; h(0) = 0
    double h(std::uint32_t mask) const {
        if (mask == 0) return 0.0;
        if ((mask & ~full_mask_) != 0) {
            throw std::invalid_argument("subset_calculus: mask out of range");
        }
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
        double value;
        if (mask == full_mask_) {
            value = entropy(full_);
        } else {
            std::vector<std::size_t> keep;
            for (std::size_t pos = 0; pos < arity(); ++pos) {
                if (mask & (1u << pos)) keep.push_back(pos);
            }
            value = entropy(marginalize(full_, keep));
        }
        cache_.emplace(mask, value);
        return value;
    }

private:
    void init() {
        if (full_.attrs.empty() || full_.attrs.size() > max_joint_arity) {
            throw std::invalid_argument("subset_calculus: arity out of range");
        }
        full_mask_ = (1u << full_.attrs.size()) - 1u;
    }

    joint_distribution full_;
    std::uint32_t full_mask_ = 0;
    mutable std::unordered_map<std::uint32_t, double> cache_;
};

namespace detail {

// Sorted union of the request's attribute sets plus position masks for each.
struct request {
    std::vector<std::uint32_t> attrs;
    subset_calculus calc;

    std::uint32_t mask_of(std::span<const std::uint32_t> subset) const {
        std::uint32_t m = 0;
        for (std::uint32_t a : subset) {
            auto it = std::lower_bound(attrs.begin(), attrs.end(), a);
            if (it == attrs.end() || *it != a) {
                throw std::invalid_argument("attribute not part of this request");
            }
            m |= 1u << static_cast<std::uint32_t>(it - attrs.begin());
        }
        return m;
    }
};

inline std::vector<std::uint32_t> sorted_union(
    std::initializer_list<std::span<const std::uint32_t>> sets) {
    std::vector<std::uint32_t> u;
    for (auto s : sets) {
        u.insert(u.end(), s.begin(), s.end());
    }
    std::sort(u.begin(), u.end());
    const std::size_t before = u.size();
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() != before) {
        throw std::invalid_argument("measure argument sets overlap");
    }
    return u;
}

inline request make_request(const dataset& ds, const estimator& est,
                            std::initializer_list<std::span<const std::uint32_t>> sets) {
    auto u = sorted_union(sets);
    subset_calculus calc(ds, u, est);
    return request{std::move(u), std::move(calc)};
}

// I(S|Z) = -sum over T subseteq S of (-1)^(|S|-|T|) H(T [union] Z);
// the H(Z) parts of the conditioned entropies cancel across the sum
inline double interaction_from(const subset_calculus& calc, std::uint32_t smask,
                               std::uint32_t zmask) {
    const int n = std::popcount(smask);
    double sum = 0.0;
    std::uint32_t t = smask;
    while (true) {
        const int sign_exp = n - std::popcount(t);
        const double term = calc.h(t | zmask);
        sum += ((sign_exp & 1) ? -term : term);
        if (t == 0) break;
        t = (t - 1) & smask;
    }
    const double value = -sum;
    return value == 0.0 ? 0.0 : value;  // never hand out -0.0
}

}  // namespace detail

using attr_set = std::vector<std::uint32_t>;

inline double entropy(const dataset& ds, const estimator& est, const attr_set& s) {
    auto rq = detail::make_request(ds, est, {std::span(s)});
    return rq.calc.h(rq.calc.full_mask());
}

inline double conditional_entropy(const dataset& ds, const estimator& est,
                                  const attr_set& s, const attr_set& z) {
    if (z.empty()) return entropy(ds, est, s);
    auto rq = detail::make_request(ds, est, {std::span(s), std::span(z)});
    const std::uint32_t zm = rq.mask_of(z);
    return clamp_nonneg(rq.calc.h(rq.calc.full_mask()) - rq.calc.h(zm), "conditional entropy");
}

inline double mutual_information(const dataset& ds, const estimator& est,
                                 const attr_set& a, const attr_set& b) {
    auto rq = detail::make_request(ds, est, {std::span(a), std::span(b)});
    const std::uint32_t am = rq.mask_of(a), bm = rq.mask_of(b);
    return clamp_nonneg(rq.calc.h(am) + rq.calc.h(bm) - rq.calc.h(am | bm),
                        "mutual information");
}

inline double conditional_mutual_information(const dataset& ds, const estimator& est,
                                             const attr_set& a, const attr_set& b,
                                             const attr_set& z) {
    if (z.empty()) return mutual_information(ds, est, a, b);
    auto rq = detail::make_request(ds, est, {std::span(a), std::span(b), std::span(z)});
    const std::uint32_t am = rq.mask_of(a), bm = rq.mask_of(b), zm = rq.mask_of(z);
    return clamp_nonneg(
        rq.calc.h(am | zm) + rq.calc.h(bm | zm) - rq.calc.h(zm) - rq.calc.h(am | bm | zm),
        "conditional mutual information");
}

// k-way interaction information, optionally with every entropy conditioned
// on a context set.  Positive = synergy, negative = redundancy; for |S|=2
// this is plain (conditional) mutual information.
inline double interaction_information(const dataset& ds, const estimator& est,
                                      const attr_set& s, const attr_set& z = {}) {
    if (s.size() < 2) {
        throw std::invalid_argument("interaction information needs at least 2 attributes");
    }
    auto rq = detail::make_request(ds, est, {std::span(s), std::span(z)});
    return detail::interaction_from(rq.calc, rq.mask_of(s), rq.mask_of(z));
}

// same measure evaluated on an explicit distribution over all its attributes
inline double interaction_information(const joint_distribution& joint) {
    if (joint.attrs.size() < 2) {
        throw std::invalid_argument("interaction information needs at least 2 attributes");
    }
    subset_calculus calc(joint);
    return detail::interaction_from(calc, calc.full_mask(), 0);
}

inline double coinformation(const dataset& ds, const estimator& est, const attr_set& s) {
    const double i = interaction_information(ds, est, s);
    return (s.size() % 2 == 0) ? i : -i;
}

inline double coinformation(const joint_distribution& joint) {
    const double i = interaction_information(joint);
    return (joint.attrs.size() % 2 == 0) ? i : -i;
}

inline double total_correlation(const dataset& ds, const estimator& est,
                                const attr_set& s, const attr_set& z = {}) {
    if (s.size() < 2) {
        throw std::invalid_argument("total correlation needs at least 2 attributes");
    }
    auto rq = detail::make_request(ds, est, {std::span(s), std::span(z)});
    const std::uint32_t zm = rq.mask_of(z);
    double sum = 0.0;
    for (std::uint32_t a : s) {
        const std::uint32_t am = rq.mask_of(std::span(&a, 1));
        sum += rq.calc.h(am | zm) - rq.calc.h(zm);
    }
    const double joint_cond = rq.calc.h(rq.calc.full_mask()) - rq.calc.h(zm);
    return clamp_nonneg(sum - joint_cond, "total correlation");
}

inline double relative_mutual_information(const dataset& ds, const estimator& est,
                                          const attr_set& a, std::uint32_t label) {
    const attr_set y{label};
    const double hy = entropy(ds, est, y);
    if (hy <= 0.0) {
        throw std::invalid_argument("degenerate label: zero entropy");
    }
    return 100.0 * mutual_information(ds, est, a, y) / hy;
}

// share of the label's entropy carried by an interaction term
inline double relative_interaction_information(const dataset& ds, const estimator& est,
                                               const attr_set& s_with_label,
                                               std::uint32_t label) {
    const double hy = entropy(ds, est, attr_set{label});
    if (hy <= 0.0) {
        throw std::invalid_argument("degenerate label: zero entropy");
    }
    return 100.0 * interaction_information(ds, est, s_with_label) / hy;
}

inline double normed_mutual_information(const dataset& ds, const estimator& est,
                                        const attr_set& a, const attr_set& b) {
    auto rq = detail::make_request(ds, est, {std::span(a), std::span(b)});
    const std::uint32_t am = rq.mask_of(a), bm = rq.mask_of(b);
    const double hab = rq.calc.h(am | bm);
    if (hab <= 0.0) {
        throw std::invalid_argument("normed mutual information: zero joint entropy");
    }
    const double i = clamp_nonneg(rq.calc.h(am) + rq.calc.h(bm) - hab, "mutual information");
    return i / hab;
}

// distance between attributes: 1 - ||I||; a true metric on attribute space
inline double mantaras_distance(const dataset& ds, const estimator& est,
                                const attr_set& a, const attr_set& b) {
    return 1.0 - normed_mutual_information(ds, est, a, b);
}

// signed I(S)/H(S); its absolute value is the normed interaction magnitude
inline double normed_interaction_information(const dataset& ds, const estimator& est,
                                             const attr_set& s) {
    auto rq = detail::make_request(ds, est, {std::span(s)});
    const double hs = rq.calc.h(rq.calc.full_mask());
    if (hs <= 0.0) {
        throw std::invalid_argument("normed interaction: zero joint entropy");
    }
    return detail::interaction_from(rq.calc, rq.mask_of(s), 0) / hs;
}

inline double normed_interaction_magnitude(const dataset& ds, const estimator& est,
                                           const attr_set& s) {
    return std::abs(normed_interaction_information(ds, est, s));
}

// I(A;B|C) / H(A,B|C)
inline double normed_conditional_mutual_information(const dataset& ds, const estimator& est,
                                                    const attr_set& a, const attr_set& b,
                                                    const attr_set& z) {
    auto rq = detail::make_request(ds, est, {std::span(a), std::span(b), std::span(z)});
    const std::uint32_t am = rq.mask_of(a), bm = rq.mask_of(b), zm = rq.mask_of(z);
    const double h_ab_given_z = rq.calc.h(am | bm | zm) - rq.calc.h(zm);
    if (h_ab_given_z <= 0.0) {
        throw std::invalid_argument("normed conditional mutual information: zero joint entropy");
    }
    const double cmi = clamp_nonneg(
        rq.calc.h(am | zm) + rq.calc.h(bm | zm) - rq.calc.h(zm) - rq.calc.h(am | bm | zm),
        "conditional mutual information");
    return cmi / h_ab_given_z;
}

}  // namespace interax

#endif
