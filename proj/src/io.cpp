#include "spclust/io.hpp"

#include "spclust/log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace spclust::io {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path.string() + "'");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write '" + path.string() + "'");
    return out;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty())
        throw DataError("'" + path.string() + "' is empty");
    return rows;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    const std::string t = trim(s);
    if (t == "NA" || t == "nan" || t == "NaN")
        return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw DataError(path.string() + ":" + std::to_string(line) + ": not a number: '" + t + "'");
    return v;
}

std::unordered_map<std::string, std::size_t> index_of(const std::vector<std::string>& ids) {
    std::unordered_map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < ids.size(); ++i)
        m.emplace(ids[i], i);
    return m;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (double v : m.row(r))
            row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const std::size_t r = j.size(), c = r ? j.at(0).size() : 0;
    Matrix m(r, c);
    for (std::size_t a = 0; a < r; ++a) {
        if (j.at(a).size() != c)
            throw DataError("ragged matrix in JSON");
        for (std::size_t b = 0; b < c; ++b)
            m(a, b) = j.at(a).at(b).is_null() ? std::numeric_limits<double>::quiet_NaN()
                                               : j.at(a).at(b).get<double>();
    }
    return m;
}

double number_or_nan(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                cur += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v))
        return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

InteractionNetwork read_interaction_csv(const std::filesystem::path& path) {
    const auto rows = read_rows(path);
    const auto& header = rows.front();
    if (header.size() < 3)
        throw DataError(path.string() + ": header must list at least 2 node ids");
    std::vector<std::string> ids(header.begin() + 1, header.end());
    const std::size_t n = ids.size();
    if (rows.size() != n + 1)
        throw DataError(path.string() + ": expected " + std::to_string(n) + " data rows, found " +
                        std::to_string(rows.size() - 1));
    Matrix Y(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i + 1];
        if (r.size() != n + 1)
            throw DataError(path.string() + ":" + std::to_string(i + 2) + ": expected " +
                            std::to_string(n + 1) + " fields");
        if (r[0] != ids[i])
            throw DataError(path.string() + ":" + std::to_string(i + 2) + ": row id '" + r[0] +
                            "' does not match column id '" + ids[i] + "'");
        for (std::size_t j = 0; j < n; ++j)
            Y(i, j) = i == j ? 0.0 : parse_double(r[j + 1], path, i + 2);
    }
    try {
        return InteractionNetwork(std::move(ids), std::move(Y));
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_interaction_csv(const std::filesystem::path& path, const InteractionNetwork& Y) {
    auto out = open_out(path);
    out << "node";
    for (const auto& id : Y.node_ids())
        out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < Y.size(); ++i) {
        out << Y.node_ids()[i];
        for (std::size_t j = 0; j < Y.size(); ++j)
            out << ',' << format_double(i == j ? 0.0 : Y(i, j));
        out << '\n';
    }
}

StructuralNetwork read_structural_csv(const std::filesystem::path& path,
                                      const std::vector<std::string>& node_ids) {
    const auto rows = read_rows(path);
    const auto& h = rows.front();
    if (h.size() != 3 || h[0] != "src" || h[1] != "dst" || h[2] != "weight")
        throw DataError(path.string() + ": header must be 'src,dst,weight'");
    const auto idx = index_of(node_ids);
    std::vector<Edge> edges;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3)
            throw DataError(path.string() + ":" + std::to_string(r + 1) + ": expected 3 fields");
        const auto a = idx.find(row[0]), b = idx.find(row[1]);
        if (a == idx.end() || b == idx.end())
            throw DataError(path.string() + ":" + std::to_string(r + 1) + ": node '" +
                            (a == idx.end() ? row[0] : row[1]) +
                            "' is not in the interaction network");
        edges.push_back({a->second, b->second, parse_double(row[2], path, r + 1)});
    }
    try {
        return StructuralNetwork(node_ids, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_structural_csv(const std::filesystem::path& path, const StructuralNetwork& X) {
    auto out = open_out(path);
    out << "src,dst,weight\n";
    for (const auto& e : X.edges())
        out << X.node_ids()[e.i] << ',' << X.node_ids()[e.j] << ',' << format_double(e.w) << '\n';
}

std::vector<std::string> read_label_ids(const std::filesystem::path& path) {
    const auto rows = read_rows(path);
    if (rows.front().empty() || rows.front()[0] != "node")
        throw DataError(path.string() + ": header must start with 'node'");
    std::vector<std::string> ids;
    for (std::size_t r = 1; r < rows.size(); ++r)
        ids.push_back(rows[r].at(0));
    return ids;
}

Partition read_labels_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& node_ids, int Q,
                          const std::string& column) {
    const auto rows = read_rows(path);
    const auto& header = rows.front();
    if (header.size() < 2 || header[0] != "node")
        throw DataError(path.string() + ": header must start with 'node'");
    const auto col = std::find(header.begin() + 1, header.end(), column);
    if (col == header.end())
        throw DataError(path.string() + ": no '" + column + "' column");
    const auto c = static_cast<std::size_t>(col - header.begin());
    const auto idx = index_of(node_ids);
    std::vector<int> labels(node_ids.size(), -1);
    int max_label = -1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw DataError(path.string() + ":" + std::to_string(r + 1) + ": expected " +
                            std::to_string(header.size()) + " fields");
        const auto it = idx.find(rows[r][0]);
        if (it == idx.end())
            throw DataError(path.string() + ": unknown node '" + rows[r][0] + "'");
        if (labels[it->second] != -1)
            throw DataError(path.string() + ": node '" + rows[r][0] + "' listed twice");
        const double v = parse_double(rows[r][c], path, r + 1);
        if (v < 0 || std::floor(v) != v)
            throw DataError(path.string() + ": labels must be nonnegative integers");
        labels[it->second] = static_cast<int>(v);
        max_label = std::max(max_label, labels[it->second]);
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] < 0)
            throw DataError(path.string() + ": no label for node '" + node_ids[i] + "'");
    if (Q > 0 && max_label >= Q)
        throw DataError(path.string() + ": label " + std::to_string(max_label) + " exceeds Q - 1");
    return Partition(std::move(labels), Q > 0 ? Q : max_label + 1);
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<std::string>& node_ids,
                      const Partition& z) {
    auto out = open_out(path);
    out << "node,label\n";
    for (std::size_t i = 0; i < z.size(); ++i)
        out << node_ids[i] << ',' << z.labels[i] << '\n';
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<std::string>& node_ids,
                     const Partition& truth, const std::vector<int>& component) {
    auto out = open_out(path);
    out << "node,label,component\n";
    for (std::size_t i = 0; i < truth.size(); ++i)
        out << node_ids[i] << ',' << truth.labels[i] << ',' << component[i] << '\n';
}

void write_heatmap_csv(const std::filesystem::path& path, const Matrix& m) {
    auto out = open_out(path);
    out << "group";
    for (std::size_t l = 0; l < m.cols(); ++l)
        out << ',' << l;
    out << '\n';
    for (std::size_t q = 0; q < m.rows(); ++q) {
        out << q;
        for (double v : m.row(q))
            out << ',' << format_double(v);
        out << '\n';
    }
}

OccurrenceTable read_occurrence_tables(const std::filesystem::path& occurrences,
                                       const std::filesystem::path& coords) {
    const auto occ = read_rows(occurrences);
    OccurrenceTable t;
    t.taxa.assign(occ.front().begin() + 1, occ.front().end());
    const auto crow = read_rows(coords);
    const auto& ch = crow.front();
    if (ch.size() != 3 || ch[0] != "site_id" || ch[1] != "lat" || ch[2] != "lon")
        throw DataError(coords.string() + ": header must be 'site_id,lat,lon'");
    std::unordered_map<std::string, LatLon> pos;
    for (std::size_t r = 1; r < crow.size(); ++r) {
        if (crow[r].size() != 3)
            throw DataError(coords.string() + ":" + std::to_string(r + 1) + ": expected 3 fields");
        pos[crow[r][0]] = {parse_double(crow[r][1], coords, r + 1),
                           parse_double(crow[r][2], coords, r + 1)};
    }
    for (std::size_t r = 1; r < occ.size(); ++r) {
        const auto& row = occ[r];
        if (row.size() != t.taxa.size() + 1)
            throw DataError(occurrences.string() + ":" + std::to_string(r + 1) + ": expected " +
                            std::to_string(t.taxa.size() + 1) + " fields");
        const auto p = pos.find(row[0]);
        if (p == pos.end())
            throw DataError("site '" + row[0] + "' has no coordinates in " + coords.string());
        t.sites.push_back({row[0], p->second});
        std::vector<unsigned char> pres;
        pres.reserve(t.taxa.size());
        for (std::size_t k = 1; k < row.size(); ++k) {
            const double v = parse_double(row[k], occurrences, r + 1);
            if (v != 0.0 && v != 1.0)
                throw DataError(occurrences.string() + ":" + std::to_string(r + 1) +
                                ": presence values must be 0 or 1");
            pres.push_back(static_cast<unsigned char>(v));
        }
        t.presence.push_back(std::move(pres));
    }
    t.validate();
    return t;
}

json to_json(const EmissionFamily& f) {
    json j{{"kind", std::string(to_string(f.kind))},
           {"location", matrix_json(f.location)},
           {"sigma2", f.sigma2}};
    if (f.kind == EmissionKind::OneInflatedGaussian)
        j["inflation"] = matrix_json(f.inflation);
    return j;
}

EmissionFamily emission_from_json(const json& j) {
    EmissionFamily f;
    f.kind = parse_emission_kind(j.at("kind").get<std::string>());
    f.location = matrix_from_json(j.at("location"));
    f.sigma2 = j.at("sigma2").get<double>();
    if (f.kind == EmissionKind::OneInflatedGaussian)
        f.inflation = matrix_from_json(j.at("inflation"));
    return f;
}

json to_json(const FitResult& fit, const std::vector<std::string>& node_ids, bool include_tau) {
    json trace = json::array();
    for (const auto& t : fit.trace)
        trace.push_back({{"bound_before_estep", t.bound_before_estep},
                         {"bound_after_estep", t.bound_after_estep},
                         {"objective", t.objective}});
    json frozen = json::array();
    for (auto [q, l] : fit.params.frozen_cells)
        frozen.push_back({q, l});
    json j{{"Q", fit.Q},
           {"lambda", fit.lambda},
           {"family", to_json(fit.params.family)},
           {"alpha", fit.params.alpha},
           {"frozen_cells", frozen},
           {"node_ids", node_ids},
           {"labels", fit.partition.labels},
           {"objective", fit.objective},
           {"objective_trace", trace},
           {"converged", fit.converged},
           {"em_iterations", fit.em_iterations},
           {"penalty_of_hard_labels", fit.penalty_of_hard_labels},
           {"icl", std::isfinite(fit.icl) ? json(fit.icl) : json(nullptr)},
           {"degenerate_init", fit.degenerate_init}};
    if (include_tau)
        j["tau"] = matrix_json(fit.tau.matrix());
    return j;
}

FitResult fit_from_json(const json& j) {
    FitResult f;
    f.Q = j.at("Q").get<int>();
    f.lambda = j.at("lambda").get<double>();
    f.params.family = emission_from_json(j.at("family"));
    f.kind = f.params.family.kind;
    f.params.alpha = j.at("alpha").get<std::vector<double>>();
    for (const auto& c : j.at("frozen_cells"))
        f.params.frozen_cells.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
    f.partition = Partition(j.at("labels").get<std::vector<int>>(), f.Q);
    f.objective = j.at("objective").get<double>();
    for (const auto& t : j.at("objective_trace"))
        f.trace.push_back({t.at("bound_before_estep").get<double>(),
                           t.at("bound_after_estep").get<double>(), t.at("objective").get<double>()});
    f.converged = j.at("converged").get<bool>();
    f.em_iterations = j.at("em_iterations").get<int>();
    f.penalty_of_hard_labels = j.at("penalty_of_hard_labels").get<double>();
    f.icl = number_or_nan(j.at("icl"));
    f.degenerate_init = j.value("degenerate_init", false);
    if (j.contains("tau"))
        f.tau = SoftAssignment(matrix_from_json(j.at("tau")));
    else
        f.tau = SoftAssignment::from_partition(f.partition);
    return f;
}

json to_json(const SimDesign& d) {
    return json{{"n_per_component", d.n_per_component},
                {"Q", d.Q},
                {"alpha_true", d.alpha_true},
                {"mu", d.mu},
                {"nu", d.nu},
                {"sigma", d.sigma},
                {"delta", d.delta()},
                {"n_swap_pairs", d.n_swap_pairs},
                {"seed", d.seed},
                {"distance_weights", d.distance_weights}};
}

SimDesign design_from_json(const json& j) {
    SimDesign d;
    d.n_per_component = j.at("n_per_component").get<int>();
    d.Q = j.at("Q").get<int>();
    d.alpha_true = j.at("alpha_true").get<std::vector<double>>();
    d.mu = j.at("mu").get<double>();
    d.nu = j.at("nu").get<double>();
    d.sigma = j.at("sigma").get<double>();
    d.n_swap_pairs = j.at("n_swap_pairs").get<int>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.distance_weights = j.value("distance_weights", false);
    return d;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

json read_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace spclust::io
