// interax: interaction analysis of categorical data from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "interax/interax.hpp"

namespace fs = std::filesystem;
using namespace interax;

namespace {

struct run_config {
    std::string in_path;
    std::string label;
    std::string estimator_text = "ml";
    std::string missing_text = "category";
    std::vector<std::string> bin_texts;
    int max_order = 3;
    std::size_t top_n = 16;
    std::string rank_text = "magnitude";
    double alpha = 0.05;
    std::string out_dir = ".";
    std::string attrs_text;
    std::string context_text;
    std::size_t threads = 0;
    double gate = -1.0;           // bits; negative = no gate
    double threshold_pct = 1.0;   // condgraph only
    // synth
    std::string kind;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    double p1 = 0.773;
    double noise = 0.1;
    int m_attrs = 4;
};

estimator parse_estimator(const std::string& text) {
    if (text == "ml") return estimator::ml();
    if (text == "dirichlet") return estimator::dirichlet(1.0);
    if (text.rfind("dirichlet:", 0) == 0) {
        const std::string a = text.substr(10);
        try {
            std::size_t used = 0;
            const double alpha = std::stod(a, &used);
            if (used == a.size()) return estimator::dirichlet(alpha);
        } catch (const std::exception&) {
        }
    }
    throw CLI::ValidationError("--estimator", "expected ml or dirichlet:ALPHA");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

load_options make_load_options(const run_config& cfg, std::vector<std::string>& warnings) {
    load_options opt;
    if (!cfg.label.empty()) opt.label = cfg.label;
    if (cfg.missing_text == "drop") {
        opt.missing.mode = missing_policy::mode_t::drop_row;
    } else if (cfg.missing_text != "category") {
        throw CLI::ValidationError("--missing", "expected category or drop");
    }
    for (const auto& spec : cfg.bin_texts) {
        const auto colon = spec.rfind(':');
        if (colon == std::string::npos) {
            opt.bins.emplace_back(spec, 5);  // default bin count
            continue;
        }
        if (colon == 0 || colon + 1 == spec.size()) {
            throw CLI::ValidationError("--bin", "expected COLUMN or COLUMN:BINS");
        }
        int bins = 0;
        try {
            bins = std::stoi(spec.substr(colon + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--bin", "expected COLUMN or COLUMN:BINS");
        }
        if (bins < 2) throw CLI::ValidationError("--bin", "need at least 2 bins");
        opt.bins.emplace_back(spec.substr(0, colon), bins);
    }
    opt.warnings = &warnings;
    return opt;
}

attr_set parse_attr_list(const dataset& ds, const std::string& text, const char* flag) {
    if (text.empty()) throw CLI::ValidationError(flag, "attribute list is empty");
    attr_set out;
    for (const auto& name : split_commas(text)) {
        out.push_back(ds.attribute_index(csv::trim(name)));
    }
    return out;
}

rank_key parse_rank(const std::string& text) {
    if (text == "magnitude") return rank_key::magnitude;
    if (text == "normed") return rank_key::normed_magnitude;
    throw CLI::ValidationError("--rank", "expected magnitude or normed");
}

void write_report(const ordered_json& report, const fs::path& out_dir, bool to_stdout) {
    const fs::path path = out_dir / "report.json";
    detail::write_file(path.string(), report.dump(2) + "\n");
    if (to_stdout) std::cout << report.dump(2) << "\n";
}

ordered_json entropy_row(const dataset& ds, const estimator& est, std::uint32_t a) {
    ordered_json row;
    row["subset"] = ordered_json::array({ds.schema(a).name});
    row["context"] = ordered_json::array();
    row["bits"] = entropy(ds, est, attr_set{a});
    row["normed"] = nullptr;
    row["relative_pct"] = nullptr;
    row["g"] = nullptr;
    row["df"] = nullptr;
    row["p"] = nullptr;
    return row;
}

int cmd_analyze(const run_config& cfg) {
    std::vector<std::string> warnings;
    const dataset ds = load_csv(cfg.in_path, make_load_options(cfg, warnings));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const estimator est = parse_estimator(cfg.estimator_text);
    search_spec spec;
    spec.max_order = cfg.max_order;
    spec.top_n = cfg.top_n;
    spec.require_label = true;
    spec.rank_by = parse_rank(cfg.rank_text);
    spec.threads = cfg.threads;
    if (cfg.gate >= 0.0) spec.low_order_gate = cfg.gate;
    const auto scores = enumerate_interactions(ds, est, spec);
    std::size_t n_pairs = 0, n_significant = 0;
    for (const auto& sc : scores) {
        if (!sc.significance) continue;
        ++n_pairs;
        if (sc.significance->p < cfg.alpha) ++n_significant;
    }
    if (n_pairs > 0) {
        std::cerr << "pairs significant at alpha=" << cfg.alpha << ": " << n_significant
                  << "/" << n_pairs << "\n";
    }

    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> diagrams;
    const fs::path igraph_path = out_dir / "interactions.dot";
    emit_interaction_graph(ds, est, scores, igraph_path.string());
    diagrams.push_back(igraph_path.string());
    if (ds.non_label_attributes().size() >= 2) {
        const auto matrix = build_dissimilarity(ds, est, 1000.0, cfg.threads);
        auto tree = ward_cluster(matrix);
        annotate_leaves(tree, matrix, ds, est);
        const fs::path nwk_path = out_dir / "dendrogram.nwk";
        const fs::path dot_path = out_dir / "dendrogram.dot";
        emit_dendrogram(tree, ds, nwk_path.string(), tree_format::newick);
        emit_dendrogram(tree, ds, dot_path.string(), tree_format::dot);
        diagrams.push_back(nwk_path.string());
        diagrams.push_back(dot_path.string());
    }
    write_report(make_report(ds, scores, diagrams), out_dir, true);
    return 0;
}

int cmd_igraph(const run_config& cfg) {
    std::vector<std::string> warnings;
    const dataset ds = load_csv(cfg.in_path, make_load_options(cfg, warnings));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const estimator est = parse_estimator(cfg.estimator_text);
    search_spec spec;
    spec.max_order = cfg.max_order;
    spec.top_n = cfg.top_n;
    spec.require_label = true;
    spec.rank_by = parse_rank(cfg.rank_text);
    spec.threads = cfg.threads;
    if (cfg.gate >= 0.0) spec.low_order_gate = cfg.gate;
    const auto scores = enumerate_interactions(ds, est, spec);
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const fs::path path = out_dir / "interactions.dot";
    emit_interaction_graph(ds, est, scores, path.string());
    write_report(make_report(ds, scores, {path.string()}), out_dir, false);
    return 0;
}

int cmd_infograph(const run_config& cfg) {
    std::vector<std::string> warnings;
    const dataset ds = load_csv(cfg.in_path, make_load_options(cfg, warnings));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const estimator est = parse_estimator(cfg.estimator_text);
    attr_set attrs = parse_attr_list(ds, cfg.attrs_text, "--attrs");
    if (attrs.size() < 2 || attrs.size() > 4) {
        throw CLI::ValidationError("--attrs", "need 2 to 4 attributes");
    }
    std::sort(attrs.begin(), attrs.end());
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const fs::path path = out_dir / "information.dot";
    emit_information_graph(ds, est, attrs, path.string());
    // sidecar mirrors the emitted quantities: entropies plus every subset
    ordered_json report;
    ordered_json names = ordered_json::array();
    for (std::uint32_t a = 0; a < ds.n_attributes(); ++a) names.push_back(ds.schema(a).name);
    report["attributes"] = std::move(names);
    ordered_json measures = ordered_json::array();
    for (std::uint32_t a : attrs) measures.push_back(entropy_row(ds, est, a));
    const auto label = ds.label_index();
    std::optional<double> h_label;
    if (label) h_label = entropy(ds, est, attr_set{*label});
    for (std::size_t size = 2; size <= attrs.size(); ++size) {
        detail::for_each_combination(static_cast<std::uint32_t>(attrs.size()),
                                     static_cast<int>(size), attrs, [&](const attr_set& s) {
                                         measures.push_back(measure_row(
                                             ds, detail::score_subset(ds, est, s, {},
                                                                      h_label, label)));
                                     });
    }
    report["measures"] = std::move(measures);
    report["diagrams"] = ordered_json::array({path.string()});
    write_report(report, out_dir, false);
    return 0;
}

int cmd_condgraph(const run_config& cfg) {
    std::vector<std::string> warnings;
    const dataset ds = load_csv(cfg.in_path, make_load_options(cfg, warnings));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const estimator est = parse_estimator(cfg.estimator_text);
    const auto scores = conditional_scan(ds, est, cfg.max_order, cfg.top_n,
                                         parse_rank(cfg.rank_text), cfg.threads);
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const fs::path path = out_dir / "conditional.dot";
    emit_conditional_graph(ds, est, scores, cfg.threshold_pct, path.string());
    write_report(make_report(ds, scores, {path.string()}), out_dir, false);
    return 0;
}

int cmd_dendrogram(const run_config& cfg) {
    std::vector<std::string> warnings;
    const dataset ds = load_csv(cfg.in_path, make_load_options(cfg, warnings));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const estimator est = parse_estimator(cfg.estimator_text);
    const auto matrix = build_dissimilarity(ds, est, 1000.0, cfg.threads);
    auto tree = ward_cluster(matrix);
    annotate_leaves(tree, matrix, ds, est);
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const fs::path nwk_path = out_dir / "dendrogram.nwk";
    const fs::path dot_path = out_dir / "dendrogram.dot";
    emit_dendrogram(tree, ds, nwk_path.string(), tree_format::newick);
    emit_dendrogram(tree, ds, dot_path.string(), tree_format::dot);
    // the sidecar lists the label triples behind the matrix, in matrix order
    const auto label = ds.label_index();
    const double h_label = entropy(ds, est, attr_set{*label});
    std::vector<interaction_score> rows;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (std::size_t j = i + 1; j < matrix.size(); ++j) {
            attr_set s{matrix.attrs[i], matrix.attrs[j], *label};
            std::sort(s.begin(), s.end());
            rows.push_back(detail::score_subset(ds, est, s, {}, h_label, label));
        }
    }
    write_report(make_report(ds, rows, {nwk_path.string(), dot_path.string()}), out_dir,
                 false);
    return 0;
}

int cmd_synth(const run_config& cfg) {
    dataset ds = [&] {
        if (cfg.kind == "parity") return gen_parity(cfg.max_order, cfg.n, cfg.seed);
        if (cfg.kind == "triplicate") return gen_triplicate(cfg.n, cfg.seed);
        if (cfg.kind == "mixture") return gen_mixture(cfg.p1, cfg.n, cfg.seed);
        if (cfg.kind == "naive-bayes") return gen_naive_bayes(cfg.m_attrs, cfg.n, cfg.seed);
        if (cfg.kind == "synonym") return gen_synonym(cfg.noise, cfg.n, cfg.seed);
        if (cfg.kind == "polysemy") return gen_polysemy(cfg.n, cfg.seed);
        throw CLI::ValidationError("--kind", "unknown generator");
    }();
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const fs::path path = out_dir / (cfg.kind + ".csv");
    std::vector<std::string> header;
    for (std::uint32_t a = 0; a < ds.n_attributes(); ++a) {
        header.push_back(ds.schema(a).name);
    }
    std::vector<std::vector<std::string>> rows(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        rows[r].reserve(ds.n_attributes());
        for (std::uint32_t a = 0; a < ds.n_attributes(); ++a) {
            rows[r].push_back(ds.value_name(r, a));
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path.string());
    csv::write(out, header, rows);
    return 0;
}

int cmd_measure(const run_config& cfg) {
    std::vector<std::string> warnings;
    const dataset ds = load_csv(cfg.in_path, make_load_options(cfg, warnings));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const estimator est = parse_estimator(cfg.estimator_text);
    const attr_set listed = parse_attr_list(ds, cfg.attrs_text, "--subset");
    if (listed.size() < 2) {
        throw CLI::ValidationError("--subset", "need at least 2 attributes");
    }
    attr_set subset = listed;
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
        throw CLI::ValidationError("--subset", "attributes repeat");
    }
    attr_set context;
    if (!cfg.context_text.empty()) {
        context = parse_attr_list(ds, cfg.context_text, "--context");
        std::sort(context.begin(), context.end());
    }
    const auto label = ds.label_index();
    std::optional<double> h_label;
    if (label) h_label = entropy(ds, est, attr_set{*label});
    std::vector<interaction_score> rows;
    rows.push_back(detail::score_subset(ds, est, subset, context, h_label, label));
    // a signed 3-way interaction has no chi-square null of its own; report
    // the significance of its two constituents instead, conditioning on the
    // last attribute as listed
    if (listed.size() == 3 && context.empty()) {
        attr_set pair{listed[0], listed[1]};
        std::sort(pair.begin(), pair.end());
        rows.push_back(detail::score_subset(ds, est, pair, attr_set{listed[2]}, h_label,
                                            label));
        rows.push_back(detail::score_subset(ds, est, pair, {}, h_label, label));
    }
    std::cout << make_report(ds, rows, {}).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interaction analysis of categorical datasets"};
    app.set_version_flag("--version", INTERAX_VERSION);
    app.require_subcommand(1);
    run_config cfg;

    auto add_io = [&cfg](CLI::App* sub, bool need_label) {
        sub->add_option("--in", cfg.in_path, "input CSV path")->required();
        auto* lab = sub->add_option("--label", cfg.label, "label column name");
        if (need_label) lab->required();
        sub->add_option("--estimator", cfg.estimator_text,
                        "probability estimator: ml or dirichlet:ALPHA");
        sub->add_option("--missing", cfg.missing_text,
                        "missing-value policy: category or drop");
        sub->add_option("--bin", cfg.bin_texts,
                        "equal-frequency binning directive COLUMN:BINS (repeatable)");
        sub->add_option("--threads", cfg.threads, "worker threads; 0 = hardware");
    };
    auto add_search = [&cfg](CLI::App* sub) {
        sub->add_option("-k,--max-order", cfg.max_order, "largest interaction order");
        sub->add_option("--top", cfg.top_n, "how many interactions to keep");
        sub->add_option("--rank", cfg.rank_text, "ranking key: magnitude or normed");
        sub->add_option("--gate", cfg.gate,
                        "keep order-3+ subsets only when a sub-subset reaches this many bits");
        sub->add_option("--alpha", cfg.alpha, "significance level for flagging");
    };

    auto* analyze = app.add_subcommand("analyze", "rank interactions, emit diagrams and report");
    add_io(analyze, true);
    add_search(analyze);
    analyze->add_option("--out", cfg.out_dir, "output directory");

    auto* igraph = app.add_subcommand("igraph", "emit the interaction graph");
    add_io(igraph, true);
    add_search(igraph);
    igraph->add_option("--out", cfg.out_dir, "output directory");

    auto* infograph = app.add_subcommand("infograph", "emit an information graph for 2-4 attributes");
    add_io(infograph, false);
    infograph->add_option("--attrs", cfg.attrs_text, "comma-separated attributes")->required();
    infograph->add_option("--out", cfg.out_dir, "output directory");

    auto* condgraph = app.add_subcommand("condgraph", "emit the conditional interaction graph");
    add_io(condgraph, true);
    add_search(condgraph);
    condgraph->add_option("--threshold", cfg.threshold_pct,
                          "hide interactions under this percent of the label entropy");
    condgraph->add_option("--out", cfg.out_dir, "output directory");

    auto* dendro = app.add_subcommand("dendrogram", "emit the interaction dendrogram");
    add_io(dendro, true);
    dendro->add_option("--out", cfg.out_dir, "output directory");

    auto* synth = app.add_subcommand("synth", "generate a synthetic CSV");
    synth->add_option("--kind", cfg.kind,
                      "parity|triplicate|mixture|naive-bayes|synonym|polysemy")
        ->required();
    synth->add_option("-n,--rows", cfg.n, "instance count");
    synth->add_option("--seed", cfg.seed, "random seed");
    synth->add_option("-k,--max-order", cfg.max_order, "free bits (parity)");
    synth->add_option("--p1", cfg.p1, "mixture weight of the parity event");
    synth->add_option("--noise", cfg.noise, "synonym flip probability");
    synth->add_option("-m,--attrs-count", cfg.m_attrs, "attribute count (naive-bayes)");
    synth->add_option("--out", cfg.out_dir, "output directory");

    auto* measure = app.add_subcommand("measure", "print measures for one attribute subset");
    add_io(measure, false);
    measure->add_option("--subset,--attrs", cfg.attrs_text, "comma-separated attributes")
        ->required();
    measure->add_option("--context", cfg.context_text, "conditioning attributes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(cfg);
        if (app.got_subcommand(igraph)) return cmd_igraph(cfg);
        if (app.got_subcommand(infograph)) return cmd_infograph(cfg);
        if (app.got_subcommand(condgraph)) return cmd_condgraph(cfg);
        if (app.got_subcommand(dendro)) return cmd_dendrogram(cfg);
        if (app.got_subcommand(synth)) return cmd_synth(cfg);
        if (app.got_subcommand(measure)) return cmd_measure(cfg);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
