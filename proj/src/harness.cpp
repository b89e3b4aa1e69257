#include "genecluster/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "genecluster/error.hpp"
#include "genecluster/expr_matrix.hpp"
#include "genecluster/io_util.hpp"
#include "genecluster/silhouette.hpp"

namespace genecluster {

namespace {

using nlohmann::json;

/// Column heading for a preprocessing variant; raw data is "actual" to match
/// the comparison-table layout.
std::string column_name(Method m) {
    return m == Method::None ? "actual" : method_name(m);
}

std::string strategy_label(InitStrategy s) {
    return s == InitStrategy::Ccia ? "ccia+kmeans" : "kmeans";
}

Method method_from_string(const std::string& s) {
    if (s == "none" || s == "actual") return Method::None;
    if (s == "method1") return Method::I;
    if (s == "method2") return Method::II;
    if (s == "method3") return Method::III;
    if (s == "method4") return Method::IV;
    throw ConfigError("unknown preprocessing variant '" + s +
                      "' (expected none|method1|method2|method3|method4)");
}

struct LoadedDataset {
    DatasetMeta meta;
    Matrix points;                          // raw values after removal
    std::vector<std::size_t> true_labels;   // synthetic only
    ExpressionMatrix matrix;
};

LoadedDataset load_dataset(const DatasetSpec& spec) {
    LoadedDataset ds;
    ds.meta.name = spec.name;
    ExpressionMatrix raw;
    if (spec.synthetic) {
        const auto& s = *spec.synthetic;
        BlobData blob = synthesize_blobs(s.n_genes, s.n_conditions, s.k_true, s.spread, s.seed);
        raw = std::move(blob.matrix);
        ds.true_labels = std::move(blob.true_labels);
        ds.meta.synthetic = true;
        ds.meta.width_defaulted = s.width_defaulted;
    } else if (spec.csv) {
        CsvOptions opts;
        opts.delimiter = spec.delimiter;
        raw = load_matrix(*spec.csv, opts);
    } else {
        throw ConfigError("dataset '" + spec.name + "' has neither a csv path nor a synthetic spec");
    }
    ds.meta.n_genes_raw = raw.n_genes();
    auto [clean, summary] = drop_incomplete_genes(raw);
    if (ds.meta.synthetic && summary.n_genes_kept != summary.n_genes_raw) {
        // Synthetic data never has holes; keep labels aligned regardless.
        throw DataError("synthetic dataset unexpectedly lost genes");
    }
    ds.meta.n_genes = clean.n_genes();
    ds.meta.n_conditions = clean.n_conditions();
    ds.points = clean.values;
    ds.matrix = std::move(clean);
    return ds;
}

struct RunOutcome {
    double silhouette = 0.0;
    std::size_t iterations = 0;
    std::vector<std::size_t> assignments;
};

RunOutcome one_run(const Matrix& points, const CentroidSet& init, const KMeansOptions& opts,
                   std::size_t k) {
    ClusteringResult cr = kmeans(points, init, opts);
    SilhouetteReport rep = silhouette(points, cr.assignments, k);
    return {rep.overall_mean, cr.iterations, std::move(cr.assignments)};
}

}  // namespace

const CellResult* ExperimentResult::find(const std::string& dataset, InitStrategy strategy,
                                         Method preprocessing) const {
    for (const auto& c : cells)
        if (c.dataset == dataset && c.strategy == strategy && c.preprocessing == preprocessing)
            return &c;
    return nullptr;
}

bool ExperimentResult::any_failed() const {
    return std::any_of(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; });
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    auto synth = [](std::string name, std::size_t genes, std::size_t conditions, bool defaulted,
                    std::uint64_t seed) {
        DatasetSpec d;
        d.name = std::move(name);
        SyntheticSpec s;
        s.n_genes = genes;
        s.n_conditions = conditions;
        s.k_true = 12;
        s.spread = 0.05;
        s.seed = seed;
        s.width_defaulted = defaulted;
        d.synthetic = s;
        return d;
    };
    cfg.datasets.push_back(synth("serum_like", 517, 17, true, 11));
    cfg.datasets.push_back(synth("yeast_like", 2882, 17, false, 12));
    cfg.datasets.push_back(synth("simulated_like", 300, 17, true, 13));
    cfg.datasets.push_back(synth("leukemia_like", 7129, 34, false, 14));
    return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    ExperimentConfig cfg = default_config();
    auto get_count = [&](const char* field, std::size_t& out, std::size_t min_value) {
        if (!j.contains(field)) return;
        if (!j[field].is_number_unsigned())
            throw ConfigError(std::string("field '") + field + "' must be a non-negative integer");
        const std::size_t v = j[field].get<std::size_t>();
        if (v < min_value)
            throw ConfigError(std::string("field '") + field + "' must be >= " +
                              std::to_string(min_value));
        out = v;
    };
    get_count("k_clusters", cfg.k_clusters, 2);
    get_count("n_runs", cfg.n_runs, 1);
    get_count("bins", cfg.bins, 1);
    get_count("max_iters", cfg.kmeans.max_iters, 1);
    if (j.contains("base_seed")) {
        if (!j["base_seed"].is_number_unsigned())
            throw ConfigError("field 'base_seed' must be a non-negative integer");
        cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    }
    if (j.contains("tol")) {
        if (!j["tol"].is_number())
            throw ConfigError("field 'tol' must be a number");
        cfg.kmeans.tol = j["tol"].get<double>();
        if (cfg.kmeans.tol < 0) throw ConfigError("field 'tol' must be >= 0");
    }
    if (j.contains("preprocessing")) {
        if (!j["preprocessing"].is_array())
            throw ConfigError("field 'preprocessing' must be an array of variant names");
        cfg.preprocessing.clear();
        for (const auto& v : j["preprocessing"]) {
            if (!v.is_string())
                throw ConfigError("field 'preprocessing' entries must be strings");
            cfg.preprocessing.push_back(method_from_string(v.get<std::string>()));
        }
        if (cfg.preprocessing.empty())
            throw ConfigError("field 'preprocessing' must name at least one variant");
    }
    if (j.contains("datasets")) {
        if (!j["datasets"].is_array())
            throw ConfigError("field 'datasets' must be an array");
        cfg.datasets.clear();
        std::size_t index = 0;
        for (const auto& d : j["datasets"]) {
            if (!d.is_object())
                throw ConfigError("datasets[" + std::to_string(index) + "] must be an object");
            DatasetSpec spec;
            if (d.contains("name")) {
                if (!d["name"].is_string())
                    throw ConfigError("datasets[" + std::to_string(index) + "].name must be a string");
                spec.name = d["name"].get<std::string>();
            }
            if (d.contains("csv")) {
                if (!d["csv"].is_string())
                    throw ConfigError("datasets[" + std::to_string(index) + "].csv must be a path string");
                spec.csv = d["csv"].get<std::string>();
                if (spec.name.empty()) spec.name = spec.csv->stem().string();
                if (d.contains("delimiter")) {
                    const auto delim = d["delimiter"].get<std::string>();
                    if (delim.size() != 1)
                        throw ConfigError("datasets[" + std::to_string(index) +
                                          "].delimiter must be a single character");
                    spec.delimiter = delim[0];
                }
            } else if (d.contains("synthetic")) {
                const auto& s = d["synthetic"];
                if (!s.is_object())
                    throw ConfigError("datasets[" + std::to_string(index) +
                                      "].synthetic must be an object");
                SyntheticSpec ss;
                auto get_field = [&](const char* field, std::size_t& out) {
                    if (!s.contains(field)) return false;
                    if (!s[field].is_number_unsigned())
                        throw ConfigError("datasets[" + std::to_string(index) + "].synthetic." +
                                          field + " must be a non-negative integer");
                    out = s[field].get<std::size_t>();
                    return true;
                };
                get_field("genes", ss.n_genes);
                ss.width_defaulted = !get_field("conditions", ss.n_conditions);
                get_field("k_true", ss.k_true);
                if (s.contains("spread")) {
                    if (!s["spread"].is_number())
                        throw ConfigError("datasets[" + std::to_string(index) +
                                          "].synthetic.spread must be a number");
                    ss.spread = s["spread"].get<double>();
                }
                if (s.contains("seed")) {
                    if (!s["seed"].is_number_unsigned())
                        throw ConfigError("datasets[" + std::to_string(index) +
                                          "].synthetic.seed must be a non-negative integer");
                    ss.seed = s["seed"].get<std::uint64_t>();
                }
                spec.synthetic = ss;
                if (spec.name.empty()) spec.name = "synthetic" + std::to_string(index + 1);
            } else {
                throw ConfigError("datasets[" + std::to_string(index) +
                                  "] needs either a 'csv' path or a 'synthetic' spec");
            }
            cfg.datasets.push_back(std::move(spec));
            ++index;
        }
        if (cfg.datasets.empty())
            throw ConfigError("field 'datasets' must name at least one dataset");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n_runs < 1) throw ConfigError("n_runs must be >= 1");
    if (cfg.k_clusters < 2) throw ConfigError("k_clusters must be >= 2");

    ExperimentResult result;
    result.preprocessing = cfg.preprocessing;
    result.k_clusters = cfg.k_clusters;
    result.n_runs = cfg.n_runs;

    for (const auto& spec : cfg.datasets) {
        LoadedDataset ds;
        std::string load_error;
        try {
            ds = load_dataset(spec);
            if (ds.meta.n_genes < cfg.k_clusters)
                throw DataError("dataset '" + spec.name + "' has only " +
                                std::to_string(ds.meta.n_genes) + " complete genes but k=" +
                                std::to_string(cfg.k_clusters));
        } catch (const std::exception& e) {
            load_error = e.what();
            ds.meta.name = spec.name;
        }
        result.datasets.push_back(ds.meta);

        for (const InitStrategy strategy : {InitStrategy::Random, InitStrategy::Ccia}) {
            for (const Method variant : cfg.preprocessing) {
                CellResult cell;
                cell.dataset = ds.meta.name;
                cell.preprocessing = variant;
                cell.strategy = strategy;
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    if (!load_error.empty()) throw DataError(load_error);
                    Matrix points = variant == Method::None
                                        ? ds.points
                                        : codes_as_points(apply_method(ds.matrix, variant, cfg.bins));

                    std::vector<RunOutcome> runs;
                    if (strategy == InitStrategy::Random) {
                        runs.reserve(cfg.n_runs);
                        for (std::size_t r = 0; r < cfg.n_runs; ++r) {
                            const auto init =
                                random_init(points, cfg.k_clusters, cfg.base_seed + r);
                            runs.push_back(one_run(points, init, cfg.kmeans, cfg.k_clusters));
                        }
                    } else {
                        const auto init = ccia_init(points, cfg.k_clusters);
                        runs.push_back(one_run(points, init, cfg.kmeans, cfg.k_clusters));
                    }

                    double best = runs[0].silhouette, sum = 0.0, iter_sum = 0.0;
                    std::size_t best_run = 0;
                    for (std::size_t r = 0; r < runs.size(); ++r) {
                        sum += runs[r].silhouette;
                        iter_sum += double(runs[r].iterations);
                        if (runs[r].silhouette > best) {
                            best = runs[r].silhouette;
                            best_run = r;
                        }
                    }
                    const double mean = sum / double(runs.size());
                    double var = 0.0;
                    for (const auto& r : runs)
                        var += (r.silhouette - mean) * (r.silhouette - mean);
                    var /= double(runs.size());

                    cell.ok = true;
                    cell.best_silhouette = best;
                    cell.mean_silhouette = mean;
                    cell.std_silhouette = std::sqrt(var);
                    cell.mean_iterations = iter_sum / double(runs.size());
                    if (ds.meta.synthetic)
                        cell.ari = adjusted_rand_index(runs[best_run].assignments, ds.true_labels);
                } catch (const std::exception& e) {
                    cell.ok = false;
                    cell.error = e.what();
                }
                cell.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

std::string render_table(const ExperimentResult& r, TableFormat format) {
    if (format == TableFormat::Json) {
        json j;
        j["k_clusters"] = r.k_clusters;
        j["n_runs"] = r.n_runs;
        auto variants = json::array();
        for (Method m : r.preprocessing) variants.push_back(column_name(m));
        j["preprocessing"] = std::move(variants);
        auto datasets = json::array();
        for (const auto& d : r.datasets) {
            json dj;
            dj["name"] = d.name;
            dj["n_genes"] = d.n_genes;
            dj["n_genes_raw"] = d.n_genes_raw;
            dj["n_conditions"] = d.n_conditions;
            dj["synthetic"] = d.synthetic;
            dj["width_defaulted"] = d.width_defaulted;
            datasets.push_back(std::move(dj));
        }
        j["datasets"] = std::move(datasets);
        auto cells = json::array();
        for (const auto& c : r.cells) {
            json cj;
            cj["dataset"] = c.dataset;
            cj["preprocessing"] = column_name(c.preprocessing);
            cj["strategy"] = strategy_label(c.strategy);
            cj["ok"] = c.ok;
            if (c.ok) {
                cj["best_silhouette"] = c.best_silhouette;
                cj["mean_silhouette"] = c.mean_silhouette;
                cj["std_silhouette"] = c.std_silhouette;
                cj["mean_iterations"] = c.mean_iterations;
                if (c.ari) cj["ari_vs_true_labels"] = *c.ari;
            } else {
                cj["error"] = c.error;
            }
            cj["wall_time_s"] = c.wall_time_s;
            cells.push_back(std::move(cj));
        }
        j["cells"] = std::move(cells);
        return j.dump(2) + "\n";
    }

    const bool markdown = format == TableFormat::Markdown;
    std::string out;
    auto emit_row = [&](const std::vector<std::string>& fields) {
        if (markdown) {
            out += "|";
            for (const auto& f : fields) {
                out += ' ';
                out += f;
                out += " |";
            }
        } else {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) out += ',';
                out += fields[i];
            }
        }
        out += '\n';
    };

    std::vector<std::string> header{"dataset", "strategy"};
    for (Method m : r.preprocessing) header.push_back(column_name(m));
    emit_row(header);
    if (markdown) {
        std::vector<std::string> rule(header.size(), "---");
        emit_row(rule);
    }
    for (const auto& d : r.datasets) {
        for (const InitStrategy strategy : {InitStrategy::Random, InitStrategy::Ccia}) {
            std::vector<std::string> row{d.name, strategy_label(strategy)};
            for (Method m : r.preprocessing) {
                const CellResult* cell = r.find(d.name, strategy, m);
                if (cell && cell->ok)
                    row.push_back(format_score(cell->best_silhouette));
                else
                    row.push_back("ERR");
            }
            emit_row(row);
        }
    }
    return out;
}

void render_chart(const ExperimentResult& r, const std::filesystem::path& out) {
    if (r.cells.empty()) throw DataError("render_chart: empty experiment result");

    static const char* colors[] = {"#4878a8", "#e49444", "#509e5e", "#c04f52", "#8566a8",
                                   "#867062", "#d685b5"};
    const std::size_t n_variants = r.preprocessing.size();
    const std::size_t n_groups = r.datasets.size();

    const double bar_w = 22.0, bar_gap = 4.0, group_gap = 30.0;
    const double margin_left = 55.0, margin_right = 15.0;
    const double panel_h = 230.0, plot_h = 170.0, top_pad = 34.0;
    const double group_w = double(n_variants) * (bar_w + bar_gap) + group_gap;
    const double width = margin_left + double(n_groups) * group_w + margin_right;

    double lo = 0.0, hi = 1.0;
    for (const auto& c : r.cells)
        if (c.ok) lo = std::min(lo, c.best_silhouette);

    char buf[160];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    const InitStrategy strategies[] = {InitStrategy::Random, InitStrategy::Ccia};
    const double height = 2.0 * panel_h + 20.0;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t s = 0; s < 2; ++s) {
        const double py = double(s) * (panel_h + 10.0);
        const double base_y = py + top_pad + plot_h;  // y of value 'lo'
        auto y_of = [&](double v) { return base_y - (v - lo) / (hi - lo) * plot_h; };

        svg += "<text x=\"" + num(margin_left) + "\" y=\"" + num(py + 16.0) +
               "\" font-weight=\"bold\">" + strategy_label(strategies[s]) +
               " — best silhouette per preprocessing variant</text>\n";
        // y axis with ticks every 0.25
        svg += "<line x1=\"" + num(margin_left) + "\" y1=\"" + num(py + top_pad) + "\" x2=\"" +
               num(margin_left) + "\" y2=\"" + num(base_y) + "\" stroke=\"black\"/>\n";
        for (double tick = std::ceil(lo / 0.25) * 0.25; tick <= hi + 1e-9; tick += 0.25) {
            const double ty = y_of(tick);
            svg += "<line x1=\"" + num(margin_left - 4.0) + "\" y1=\"" + num(ty) + "\" x2=\"" +
                   num(margin_left) + "\" y2=\"" + num(ty) + "\" stroke=\"black\"/>\n";
            svg += "<text x=\"" + num(margin_left - 8.0) + "\" y=\"" + num(ty + 4.0) +
                   "\" text-anchor=\"end\">" + num(tick) + "</text>\n";
        }
        svg += "<line x1=\"" + num(margin_left) + "\" y1=\"" + num(y_of(0.0)) + "\" x2=\"" +
               num(width - margin_right) + "\" y2=\"" + num(y_of(0.0)) + "\" stroke=\"black\"/>\n";

        for (std::size_t g = 0; g < n_groups; ++g) {
            const double gx = margin_left + double(g) * group_w + group_gap / 2.0;
            for (std::size_t v = 0; v < n_variants; ++v) {
                const CellResult* cell =
                    r.find(r.datasets[g].name, strategies[s], r.preprocessing[v]);
                const double x = gx + double(v) * (bar_w + bar_gap);
                if (cell && cell->ok) {
                    const double val = cell->best_silhouette;
                    const double y1 = y_of(std::max(val, 0.0));
                    const double h = std::abs(y_of(0.0) - y_of(val));
                    svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y1) + "\" width=\"" +
                           num(bar_w) + "\" height=\"" + num(h) + "\" fill=\"" +
                           colors[v % 7] + "\"/>\n";
                } else {
                    svg += "<text x=\"" + num(x + bar_w / 2.0) + "\" y=\"" +
                           num(y_of(0.0) - 4.0) + "\" text-anchor=\"middle\">ERR</text>\n";
                }
            }
            svg += "<text x=\"" + num(gx + (double(n_variants) * (bar_w + bar_gap)) / 2.0) +
                   "\" y=\"" + num(base_y + 16.0) + "\" text-anchor=\"middle\">" +
                   r.datasets[g].name + "</text>\n";
        }
    }

    // legend
    double lx = margin_left;
    const double ly = height - 8.0;
    for (std::size_t v = 0; v < n_variants; ++v) {
        svg += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 10.0) +
               "\" width=\"12\" height=\"12\" fill=\"" + std::string(colors[v % 7]) + "\"/>\n";
        const std::string label = column_name(r.preprocessing[v]);
        svg += "<text x=\"" + num(lx + 16.0) + "\" y=\"" + num(ly) + "\">" + label + "</text>\n";
        lx += 16.0 + 8.0 * double(label.size()) + 18.0;
    }
    svg += "</svg>\n";
    atomic_write(out, svg);
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.size() != b.size())
        throw DataError("adjusted_rand_index: label vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) throw DataError("adjusted_rand_index: needs at least two points");

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> contingency;
    std::map<std::size_t, std::size_t> sizes_a, sizes_b;
    for (std::size_t i = 0; i < n; ++i) {
        ++contingency[{a[i], b[i]}];
        ++sizes_a[a[i]];
        ++sizes_b[b[i]];
    }
    auto choose2 = [](std::size_t m) { return double(m) * double(m - 1) / 2.0; };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, count] : contingency) sum_ij += choose2(count);
    for (const auto& [key, count] : sizes_a) sum_a += choose2(count);
    for (const auto& [key, count] : sizes_b) sum_b += choose2(count);
    const double total = choose2(n);
    const double expected = sum_a * sum_b / total;
    const double max_index = (sum_a + sum_b) / 2.0;
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

}  // namespace genecluster
