#ifndef INTERAX_REPORT_HPP
#define INTERAX_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"
#include "search.hpp"

namespace interax {

using ordered_json = nlohmann::ordered_json;

// One measure row.  Fields that do not apply (no label in the subset, no
// significance test for this order) are null, never omitted, so consumers
// can rely on the shape.
inline ordered_json measure_row(const dataset& ds, const interaction_score& sc) {
    ordered_json row;
    ordered_json subset = ordered_json::array();
    for (std::uint32_t a : sc.subset) subset.push_back(ds.schema(a).name);
    ordered_json context = ordered_json::array();
    for (std::uint32_t a : sc.context) context.push_back(ds.schema(a).name);
    row["subset"] = std::move(subset);
    row["context"] = std::move(context);
    row["bits"] = sc.info;
    row["normed"] = sc.normed_magnitude;
    row["relative_pct"] = sc.relative_to_label ? ordered_json(*sc.relative_to_label)
                                               : ordered_json(nullptr);
    if (sc.significance) {
        row["g"] = sc.significance->g;
        row["df"] = sc.significance->df;
        row["p"] = sc.significance->p;
    } else {
        row["g"] = nullptr;
        row["df"] = nullptr;
        row["p"] = nullptr;
    }
    return row;
}

inline ordered_json make_report(const dataset& ds,
                                const std::vector<interaction_score>& scores,
                                const std::vector<std::string>& diagram_paths) {
    ordered_json report;
    ordered_json attributes = ordered_json::array();
    for (std::uint32_t a = 0; a < ds.n_attributes(); ++a) {
        attributes.push_back(ds.schema(a).name);
    }
    report["attributes"] = std::move(attributes);
    ordered_json measures = ordered_json::array();
    for (const auto& sc : scores) measures.push_back(measure_row(ds, sc));
    report["measures"] = std::move(measures);
    ordered_json diagrams = ordered_json::array();
    for (const auto& p : diagram_paths) diagrams.push_back(p);
    report["diagrams"] = std::move(diagrams);
    return report;
}

}  // namespace interax

#endif
