#ifndef INTERAX_CLUSTER_HPP
#define INTERAX_CLUSTER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "info.hpp"

namespace interax {

// Pairwise attribute dissimilarity around a label: d(A,B) is the reciprocal
// of the normed magnitude of I(A;B;Y), capped at K so independent pairs sit
// at a finite maximum instead of infinity.  The signed normed values are
// kept alongside for the color annotations.
struct dissimilarity_matrix {
    std::vector<std::uint32_t> attrs;   // non-label attribute indices
    std::vector<double> d;              // row-major, symmetric, zero diagonal
    std::vector<double> signed_normed;  // I(A,B,Y)/H(A,B,Y), same layout
    double cap = 1000.0;

    std::size_t size() const { return attrs.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i * attrs.size() + j]; }
    double signed_at(std::size_t i, std::size_t j) const {
        return signed_normed[i * attrs.size() + j];
    }
};

inline dissimilarity_matrix build_dissimilarity(const dataset& ds, const estimator& est,
                                                double cap = 1000.0,
                                                std::size_t threads = 0) {
    const auto label = ds.label_index();
    if (!label) {
        throw std::invalid_argument("build_dissimilarity: no label designated");
    }
    dissimilarity_matrix m;
    m.cap = cap;
    m.attrs = ds.non_label_attributes();
    const std::size_t n = m.attrs.size();
    if (n < 2) {
        throw std::invalid_argument("build_dissimilarity: need at least 2 non-label attributes");
    }
    m.d.assign(n * n, 0.0);
    m.signed_normed.assign(n * n, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    detail::parallel_for(pairs.size(), threads, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        attr_set s{m.attrs[i], m.attrs[j], *label};
        std::sort(s.begin(), s.end());
        auto rq = detail::make_request(ds, est, {std::span(s)});
        const double info = detail::interaction_from(rq.calc, rq.calc.full_mask(), 0);
        const double hs = rq.calc.h(rq.calc.full_mask());
        const double sn = (hs > 0.0) ? info / hs : 0.0;
        const double mag = std::abs(sn);
        const double dist = (mag > 0.0) ? std::min(cap, 1.0 / mag) : cap;
        m.d[i * n + j] = m.d[j * n + i] = dist;
        m.signed_normed[i * n + j] = m.signed_normed[j * n + i] = sn;
    });
    return m;
}

struct rgb {
    int r = 0, g = 160, b = 0;
};

struct dendro_node {
    int left = -1;                       // child node ids; -1 on leaves
    int right = -1;
    std::uint32_t attr = 0;              // dataset attribute index, leaves only
    double height = 0.0;                 // merge height, 0 at leaves
    std::uint32_t min_member = 0;        // smallest member position, for ordering
    std::vector<std::size_t> members;    // positions into dissimilarity attrs
    // annotations, filled by annotate_leaves
    double relative_mi = 0.0;
    int asterisks = 0;
    rgb color;
};

struct dendrogram {
    std::vector<dendro_node> nodes;      // n leaves first, then n-1 internals
    std::vector<std::uint32_t> attrs;    // position -> dataset attribute index
    int root = -1;
    bool annotated = false;

    std::size_t n_leaves() const { return attrs.size(); }
};

// Agglomerative clustering by the Lance-Williams form of Ward's update,
// applied to the capped reciprocal dissimilarities as given.  The input is
// not Euclidean, so heights are heuristic; any inversion is flattened to
// the running maximum so the output stays renderable as an ultrametric.
// Ties pick the pair whose (smaller, larger) minimal members compare least,
// which fixes the merge order under any input permutation.
inline dendrogram ward_cluster(const dissimilarity_matrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw std::invalid_argument("ward_cluster: need at least 2 attributes");
    dendrogram t;
    t.attrs = m.attrs;
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.nodes[i].attr = m.attrs[i];
        t.nodes[i].min_member = static_cast<std::uint32_t>(i);
        t.nodes[i].members = {i};
    }
    // active cluster state; dist is indexed by cluster slot
    std::vector<int> node_of(n);
    std::vector<double> csize(n, 1.0);
    std::vector<bool> alive(n, true);
    std::vector<double> dist(m.d);
    for (std::size_t i = 0; i < n; ++i) node_of[i] = static_cast<int>(i);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        std::pair<std::uint32_t, std::uint32_t> best_key{0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const double dij = dist[i * n + j];
                const std::uint32_t mi = t.nodes[node_of[i]].min_member;
                const std::uint32_t mj = t.nodes[node_of[j]].min_member;
                const std::pair<std::uint32_t, std::uint32_t> key{std::min(mi, mj),
                                                                  std::max(mi, mj)};
                if (dij < best || (dij == best && key < best_key)) {
                    best = dij;
                    best_key = key;
                    bi = i;
                    bj = j;
                }
            }
        }
        dendro_node parent;
        parent.left = node_of[bi];
        parent.right = node_of[bj];
        parent.height = std::max({best, t.nodes[parent.left].height,
                                  t.nodes[parent.right].height});
        parent.min_member = std::min(t.nodes[parent.left].min_member,
                                     t.nodes[parent.right].min_member);
        parent.members = t.nodes[parent.left].members;
        parent.members.insert(parent.members.end(), t.nodes[parent.right].members.begin(),
                              t.nodes[parent.right].members.end());
        std::sort(parent.members.begin(), parent.members.end());
        const int pid = static_cast<int>(t.nodes.size());
        t.nodes.push_back(std::move(parent));

        const double ni = csize[bi], nj = csize[bj];
        for (std::size_t k = 0; k < n; ++k) {
            if (!alive[k] || k == bi || k == bj) continue;
            const double nk = csize[k];
            const double updated = ((ni + nk) * dist[bi * n + k] +
                                    (nj + nk) * dist[bj * n + k] - nk * best) /
                                   (ni + nj + nk);
            dist[bi * n + k] = dist[k * n + bi] = updated;
        }
        csize[bi] = ni + nj;
        alive[bj] = false;
        node_of[bi] = pid;
    }
    t.root = static_cast<int>(t.nodes.size()) - 1;
    return t;
}

namespace detail {

// zero maps to the base green; positive saturates to red at +limit,
// negative to blue at -limit
inline rgb interaction_color(double signed_normed, double limit = 0.2) {
    const rgb base{0, 160, 0};
    const rgb pos{200, 0, 0};
    const rgb neg{0, 0, 200};
    const double t = std::min(1.0, std::abs(signed_normed) / limit);
    const rgb& target = (signed_normed >= 0.0) ? pos : neg;
    auto mix = [t](int a, int b) {
        return static_cast<int>(std::lround(a + t * (b - a)));
    };
    return rgb{mix(base.r, target.r), mix(base.g, target.g), mix(base.b, target.b)};
}

}  // namespace detail

// Leaves get the label-relative mutual information, one asterisk per two
// percentage points of it (capped at 10), and the neutral base color;
// internal nodes get a color mixed from the mean signed normed interaction
// of their member pairs with the label.
inline void annotate_leaves(dendrogram& t, const dissimilarity_matrix& m, const dataset& ds,
                            const estimator& est) {
    const auto label = ds.label_index();
    if (!label) throw std::invalid_argument("annotate_leaves: no label designated");
    const double hy = entropy(ds, est, attr_set{*label});
    if (hy <= 0.0) throw std::invalid_argument("annotate_leaves: degenerate label");
    for (std::size_t i = 0; i < t.n_leaves(); ++i) {
        auto& leaf = t.nodes[i];
        const double rel =
            100.0 * mutual_information(ds, est, attr_set{leaf.attr}, attr_set{*label}) / hy;
        leaf.relative_mi = rel;
        leaf.asterisks = std::min(10, static_cast<int>(rel / 2.0));
        leaf.color = detail::interaction_color(0.0);
    }
    for (std::size_t id = t.n_leaves(); id < t.nodes.size(); ++id) {
        auto& node = t.nodes[id];
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t a = 0; a < node.members.size(); ++a) {
            for (std::size_t b = a + 1; b < node.members.size(); ++b) {
                sum += m.signed_at(node.members[a], node.members[b]);
                ++count;
            }
        }
        node.color = detail::interaction_color(count ? sum / count : 0.0);
    }
    t.annotated = true;
}

// Clusters obtained by undoing the last k-1 merges; with flattened heights
// these are exactly the k highest-cut subtrees.  Returns dataset attribute
// indices, each group sorted, groups ordered by their smallest member.
inline std::vector<std::vector<std::uint32_t>> cut_k(const dendrogram& t, std::size_t k) {
    const std::size_t n = t.n_leaves();
    if (k < 1 || k > n) throw std::invalid_argument("cut_k: k out of range");
    std::vector<bool> removed(t.nodes.size(), false);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        removed[t.nodes.size() - 1 - i] = true;
    }
    std::vector<std::vector<std::uint32_t>> groups;
    for (std::size_t id = 0; id < t.nodes.size(); ++id) {
        if (removed[id]) continue;
        const bool is_root_of_forest =
            (static_cast<int>(id) == t.root) ||
            [&] {
                for (std::size_t p = t.n_leaves(); p < t.nodes.size(); ++p) {
                    if (!removed[p]) continue;
                    if (t.nodes[p].left == static_cast<int>(id) ||
                        t.nodes[p].right == static_cast<int>(id)) {
                        return true;
                    }
                }
                return false;
            }();
        if (!is_root_of_forest) continue;
        std::vector<std::uint32_t> group;
        group.reserve(t.nodes[id].members.size());
        for (std::size_t pos : t.nodes[id].members) group.push_back(t.attrs[pos]);
        std::sort(group.begin(), group.end());
        groups.push_back(std::move(group));
    }
    std::sort(groups.begin(), groups.end());
    return groups;
}

}  // namespace interax

#endif
