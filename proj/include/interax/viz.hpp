#ifndef INTERAX_VIZ_HPP
#define INTERAX_VIZ_HPP

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "common.hpp"
#include "dataset.hpp"
#include "info.hpp"
#include "search.hpp"
#include "version.hpp"

// Emitters for the diagram files.  Everything here is byte-deterministic:
// canonical node ordering, fixed three-decimal floats, LF line endings, no
// timestamps.  Layout is left to standard DOT tools.

namespace interax {

namespace detail {

inline std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string fmt1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

inline std::string fmt1_signed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.1f", v);
    return buf;
}

// diameter in layout units; floor keeps degenerate nodes visible
inline std::string node_width(double bits) {
    return fmt3(std::max(0.05, 0.6 * std::sqrt(std::max(0.0, bits))));
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline std::string rgb_hex(const rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

// suppression rule shared by all graph emitters
inline bool visible(double bits) { return std::abs(bits) >= 0.001; }

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path);
    out << content;
    if (!out) throw data_error("write failed for " + path);
}

inline std::string join_names(const dataset& ds, const attr_set& attrs, char sep) {
    std::string s;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (i) s.push_back(sep);
        s += ds.schema(attrs[i]).name;
    }
    return s;
}

}  // namespace detail

// Entropies and every interaction among 2..4 attributes, as circles whose
// area tracks the bits: gray for entropies and negative interactions, white
// for mutual information and positive interactions.  Interaction circles
// link to the attributes they involve.
inline void emit_information_graph(const dataset& ds, const estimator& est,
                                   const attr_set& attrs_in, const std::string& path) {
    if (attrs_in.size() < 2 || attrs_in.size() > 4) {
        throw std::invalid_argument("emit_information_graph: need 2 to 4 attributes");
    }
    attr_set attrs = attrs_in;
    std::sort(attrs.begin(), attrs.end());
    auto rq = detail::make_request(ds, est, {std::span(attrs)});
    std::ostringstream os;
    os << "graph information {\n";
    os << "  // interax " << INTERAX_VERSION << " infograph attrs="
       << detail::join_names(ds, attrs, ',') << " estimator=" << to_string(est) << "\n";
    os << "  // circle area tracks bits: diameter = 0.6*sqrt(bits); gray = entropy or\n";
    os << "  // negative interaction, white = positive; under 0.001 bits omitted\n";
    os << "  node [shape=circle, style=filled, fixedsize=true, fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        const double h = rq.calc.h(1u << i);
        os << "  a" << attrs[i] << " [fillcolor=gray, label=\""
           << detail::dot_escape(ds.schema(attrs[i]).name) << "\\nH=" << detail::fmt3(h)
           << "\", width=" << detail::node_width(h) << "];\n";
    }
    // all subsets of size >= 2 in canonical order: by size, then positions
    std::ostringstream edges;
    const std::uint32_t full = rq.calc.full_mask();
    for (std::size_t size = 2; size <= attrs.size(); ++size) {
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != size || (mask & ~full)) {
                continue;
            }
            const double info = detail::interaction_from(rq.calc, mask, 0);
            if (!detail::visible(info)) continue;
            attr_set sub;
            std::string id = "i";
            for (std::size_t i = 0; i < attrs.size(); ++i) {
                if (mask & (1u << i)) {
                    id += "_" + std::to_string(attrs[i]);
                    sub.push_back(attrs[i]);
                }
            }
            os << "  " << id << " [fillcolor=" << (info >= 0.0 ? "white" : "gray")
               << ", label=\"I(" << detail::dot_escape(detail::join_names(ds, sub, ';'))
               << ")=" << detail::fmt3(info) << "\", width="
               << detail::node_width(std::abs(info)) << "];\n";
            for (std::uint32_t a : sub) {
                edges << "  a" << a << " -- " << id << ";\n";
            }
        }
    }
    os << edges.str();
    os << "}\n";
    detail::write_file(path, os.str());
}

// Attributes as nodes captioned with their label-relative mutual
// information; each 3-way score {A,B,label} becomes an edge between A and B,
// solid when synergistic, dashed when redundant, captioned with the signed
// percentage of the label entropy.
inline void emit_interaction_graph(const dataset& ds, const estimator& est,
                                   const std::vector<interaction_score>& scores,
                                   const std::string& path) {
    const auto label = ds.label_index();
    if (!label) throw std::invalid_argument("emit_interaction_graph: no label designated");
    const double hy = entropy(ds, est, attr_set{*label});
    if (hy <= 0.0) throw std::invalid_argument("emit_interaction_graph: degenerate label");
    std::set<std::uint32_t> shown;
    for (const auto& sc : scores) {
        for (std::uint32_t a : sc.subset) {
            if (a != *label) shown.insert(a);
        }
    }
    std::ostringstream os;
    os << "graph interactions {\n";
    os << "  // interax " << INTERAX_VERSION << " igraph label="
       << detail::dot_escape(ds.schema(*label).name) << " estimator=" << to_string(est)
       << "\n";
    os << "  // node caption: attribute and its share of the label entropy; edge: 3-way\n";
    os << "  // interaction with the label, solid positive, dashed negative\n";
    os << "  node [shape=box, style=rounded, fontname=\"Helvetica\"];\n";
    for (std::uint32_t a : shown) {
        const double rel =
            100.0 * mutual_information(ds, est, attr_set{a}, attr_set{*label}) / hy;
        os << "  a" << a << " [label=\"" << detail::dot_escape(ds.schema(a).name) << "\\n"
           << detail::fmt1(rel) << "%\"];\n";
    }
    for (const auto& sc : scores) {
        if (sc.subset.size() != 3) continue;
        attr_set rest;
        for (std::uint32_t a : sc.subset) {
            if (a != *label) rest.push_back(a);
        }
        if (rest.size() != 2) continue;  // triple not involving the label
        const double rel_pct = 100.0 * sc.info / hy;
        os << "  a" << rest[0] << " -- a" << rest[1] << " [style="
           << (sc.info >= 0.0 ? "solid" : "dashed") << ", label=\""
           << detail::fmt1_signed(rel_pct) << "%\"];\n";
    }
    os << "}\n";
    detail::write_file(path, os.str());
}

// Conditional interactions given the label: pair scores become edges, triple
// scores become small diamond junction nodes linked to their three
// attributes.  Attributes whose every score sits under the threshold (in
// percent of the label entropy) are left out entirely.
inline void emit_conditional_graph(const dataset& ds, const estimator& est,
                                   const std::vector<interaction_score>& scores,
                                   double threshold_pct, const std::string& path) {
    const auto label = ds.label_index();
    if (!label) throw std::invalid_argument("emit_conditional_graph: no label designated");
    const double hy = entropy(ds, est, attr_set{*label});
    if (hy <= 0.0) throw std::invalid_argument("emit_conditional_graph: degenerate label");
    auto passes = [&](const interaction_score& sc) {
        return 100.0 * sc.magnitude / hy >= threshold_pct && detail::visible(sc.info);
    };
    std::set<std::uint32_t> shown;
    for (const auto& sc : scores) {
        if (!passes(sc)) continue;
        for (std::uint32_t a : sc.subset) shown.insert(a);
    }
    std::ostringstream os;
    os << "graph conditional {\n";
    os << "  // interax " << INTERAX_VERSION << " condgraph label="
       << detail::dot_escape(ds.schema(*label).name) << " estimator=" << to_string(est)
       << " threshold=" << detail::fmt1(threshold_pct) << "%\n";
    os << "  // everything is measured given the label; edge and junction captions are\n";
    os << "  // percent of the label entropy; solid positive, dashed negative\n";
    os << "  node [shape=box, style=rounded, fontname=\"Helvetica\"];\n";
    for (std::uint32_t a : shown) {
        os << "  a" << a << " [label=\"" << detail::dot_escape(ds.schema(a).name)
           << "\"];\n";
    }
    for (const auto& sc : scores) {
        if (!passes(sc) || sc.subset.size() != 2) continue;
        os << "  a" << sc.subset[0] << " -- a" << sc.subset[1] << " [style="
           << (sc.info >= 0.0 ? "solid" : "dashed") << ", label=\""
           << detail::fmt1_signed(100.0 * sc.info / hy) << "%\"];\n";
    }
    for (const auto& sc : scores) {
        if (!passes(sc) || sc.subset.size() != 3) continue;
        std::string id = "j";
        for (std::uint32_t a : sc.subset) id += "_" + std::to_string(a);
        const char* style = (sc.info >= 0.0 ? "solid" : "dashed");
        os << "  " << id << " [shape=diamond, style=filled, fillcolor=white, label=\""
           << detail::fmt1_signed(100.0 * sc.info / hy) << "%\", fixedsize=false];\n";
        for (std::uint32_t a : sc.subset) {
            os << "  a" << a << " -- " << id << " [style=" << style << "];\n";
        }
    }
    os << "}\n";
    detail::write_file(path, os.str());
}

enum class tree_format { newick, dot };

namespace detail {

inline std::string leaf_caption(const dendrogram& t, const dendro_node& leaf,
                                const dataset& ds) {
    std::string s = ds.schema(leaf.attr).name;
    if (t.annotated && leaf.asterisks > 0) {
        s += " " + std::string(static_cast<std::size_t>(leaf.asterisks), '*');
    }
    return s;
}

inline std::string newick_quote(const std::string& s) {
    bool plain = !s.empty();
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
              c == '-')) {
            plain = false;
            break;
        }
    }
    if (plain) return s;
    std::string out = "'";
    for (char c : s) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
}

inline void newick_node(const dendrogram& t, const dataset& ds, int id, double parent_h,
                        std::string& out) {
    const dendro_node& node = t.nodes[static_cast<std::size_t>(id)];
    if (node.left < 0) {
        out += newick_quote(leaf_caption(t, node, ds));
    } else {
        int a = node.left, b = node.right;
        if (t.nodes[static_cast<std::size_t>(b)].min_member <
            t.nodes[static_cast<std::size_t>(a)].min_member) {
            std::swap(a, b);
        }
        out.push_back('(');
        newick_node(t, ds, a, node.height, out);
        out.push_back(',');
        newick_node(t, ds, b, node.height, out);
        out.push_back(')');
    }
    out.push_back(':');
    out += fmt3(parent_h - node.height);
}

}  // namespace detail

// Newick: branch length is the height difference to the parent, children
// ordered so the smaller minimal member comes first.  DOT: same tree with
// the color annotations on merge points.
inline void emit_dendrogram(const dendrogram& t, const dataset& ds, const std::string& path,
                            tree_format format) {
    if (t.root < 0) throw std::invalid_argument("emit_dendrogram: empty tree");
    if (format == tree_format::newick) {
        const dendro_node& root = t.nodes[static_cast<std::size_t>(t.root)];
        std::string out;
        int a = root.left, b = root.right;
        if (t.nodes[static_cast<std::size_t>(b)].min_member <
            t.nodes[static_cast<std::size_t>(a)].min_member) {
            std::swap(a, b);
        }
        out.push_back('(');
        detail::newick_node(t, ds, a, root.height, out);
        out.push_back(',');
        detail::newick_node(t, ds, b, root.height, out);
        out += ");\n";
        detail::write_file(path, out);
        return;
    }
    std::ostringstream os;
    os << "graph dendrogram {\n";
    os << "  // interax " << INTERAX_VERSION << " dendrogram\n";
    os << "  // leaf caption: attribute, one asterisk per 2 points of label-relative\n";
    os << "  // mutual information (capped at 10); merge color blends green (none)\n";
    os << "  // toward red (positive) or blue (negative), saturating at 0.2\n";
    os << "  node [fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < t.n_leaves(); ++i) {
        os << "  n" << i << " [shape=box, label=\""
           << detail::dot_escape(detail::leaf_caption(t, t.nodes[i], ds)) << "\"];\n";
    }
    for (std::size_t id = t.n_leaves(); id < t.nodes.size(); ++id) {
        os << "  n" << id << " [shape=circle, style=filled, fixedsize=true, width=0.15, "
           << "label=\"\", fillcolor=\"" << detail::rgb_hex(t.nodes[id].color) << "\"];\n";
    }
    for (std::size_t id = t.n_leaves(); id < t.nodes.size(); ++id) {
        int a = t.nodes[id].left, b = t.nodes[id].right;
        if (t.nodes[static_cast<std::size_t>(b)].min_member <
            t.nodes[static_cast<std::size_t>(a)].min_member) {
            std::swap(a, b);
        }
        os << "  n" << id << " -- n" << a << ";\n";
        os << "  n" << id << " -- n" << b << ";\n";
    }
    os << "}\n";
    detail::write_file(path, os.str());
}

}  // namespace interax

#endif
