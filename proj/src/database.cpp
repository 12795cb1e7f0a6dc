#include "netoutlier/database.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "netoutlier/errors.hpp"
#include "netoutlier/numtext.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace netoutlier {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Lines of a text file with trailing '\r' stripped; empty trailing line dropped.
std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot read " + p.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

EdgeSet normalize_edges(std::vector<Edge> edges, int n, const std::string& context) {
    for (auto& [i, j] : edges) {
        if (i == j) throw ValidationError(context + ": self-loop on node " + std::to_string(i));
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw ValidationError(context + ": edge (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") out of range for n=" + std::to_string(n));
        }
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

int NetworkDatabase::sample_index(const std::string& sample_id) const {
    for (int k = 0; k < n_samples(); ++k) {
        if (samples[k].sample_id == sample_id) return k;
    }
    throw ValidationError("unknown sample id: " + sample_id);
}

NetworkDatabase load_database(const std::string& path) {
    fs::path dir(path);
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + path);
    fs::path topo_path = dir / "topology.json";
    fs::path values_path = dir / "values.csv";
    if (!fs::exists(topo_path)) throw FormatError("missing topology.json in " + path);
    if (!fs::exists(values_path)) throw FormatError("missing values.csv in " + path);

    NetworkDatabase db;

    json topo;
    try {
        topo = json::parse(read_file(topo_path));
    } catch (const json::parse_error& e) {
        throw FormatError("topology.json: " + std::string(e.what()));
    }
    if (!topo.contains("nodes") || !topo.contains("edges")) {
        throw FormatError("topology.json needs 'nodes' and 'edges'");
    }
    db.node_ids = topo["nodes"].get<std::vector<std::string>>();
    {
        std::set<std::string> seen;
        for (const auto& id : db.node_ids) {
            if (!seen.insert(id).second) throw ValidationError("duplicate node id: " + id);
        }
    }
    const int n = db.n_nodes();
    std::vector<Edge> raw;
    for (const auto& e : topo["edges"]) {
        if (!e.is_array() || e.size() != 2) throw FormatError("topology.json: edge must be [i,j]");
        raw.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    db.shared_edges = normalize_edges(std::move(raw), n, "topology.json");

    auto lines = read_lines(values_path);
    if (lines.empty()) throw FormatError("values.csv is empty");
    auto header = split_csv_line(lines[0]);
    if (header.size() != static_cast<size_t>(n) + 1 || header[0] != "sample_id") {
        throw FormatError("values.csv header must be sample_id,<node ids>");
    }
    for (int j = 0; j < n; ++j) {
        if (header[j + 1] != db.node_ids[j]) {
            throw ValidationError("values.csv header column " + std::to_string(j + 1) +
                                  " is '" + header[j + 1] + "', topology says '" +
                                  db.node_ids[j] + "'");
        }
    }
    std::set<std::string> sample_seen;
    for (size_t r = 1; r < lines.size(); ++r) {
        auto cells = split_csv_line(lines[r]);
        if (cells.size() != static_cast<size_t>(n) + 1) {
            throw ValidationError("values.csv row " + std::to_string(r) + " ('" +
                                  (cells.empty() ? std::string() : cells[0]) + "') has " +
                                  std::to_string(cells.size() - 1) + " values, expected " +
                                  std::to_string(n));
        }
        NetworkSample s;
        s.sample_id = cells[0];
        if (s.sample_id.empty()) throw ValidationError("values.csv row " + std::to_string(r) + ": empty sample_id");
        if (!sample_seen.insert(s.sample_id).second) {
            throw ValidationError("duplicate sample id: " + s.sample_id);
        }
        s.values = Eigen::VectorXd::Zero(n);
        s.missing_mask.assign(n, false);
        for (int j = 0; j < n; ++j) {
            const std::string& cell = cells[j + 1];
            if (cell.empty()) {
                s.missing_mask[j] = true;
            } else {
                s.values[j] = parse_double(cell, "values.csv row " + std::to_string(r));
            }
        }
        db.samples.push_back(std::move(s));
    }
    if (db.n_samples() < 2) throw ValidationError("need at least 2 samples, got " +
                                                  std::to_string(db.n_samples()));

    for (auto& s : db.samples) {
        fs::path override_path = dir / ("edges_" + s.sample_id + ".csv");
        if (!fs::exists(override_path)) continue;
        std::vector<Edge> edges;
        for (const auto& line : read_lines(override_path)) {
            if (line.empty()) continue;
            auto cells = split_csv_line(line);
            if (cells.size() != 2) throw FormatError(override_path.string() + ": rows must be i,j");
            edges.emplace_back(
                static_cast<int>(parse_double(cells[0], override_path.string())),
                static_cast<int>(parse_double(cells[1], override_path.string())));
        }
        s.edge_override = normalize_edges(std::move(edges), n, override_path.string());
    }

    fs::path labels_path = dir / "labels.csv";
    if (fs::exists(labels_path)) {
        auto label_lines = read_lines(labels_path);
        if (label_lines.empty() || split_csv_line(label_lines[0]) !=
                                       std::vector<std::string>{"sample_id", "label"}) {
            throw FormatError("labels.csv header must be sample_id,label");
        }
        std::map<std::string, int> labels;
        for (size_t r = 1; r < label_lines.size(); ++r) {
            auto cells = split_csv_line(label_lines[r]);
            if (cells.size() != 2) throw FormatError("labels.csv row " + std::to_string(r));
            if (cells[1] != "0" && cells[1] != "1") {
                throw ValidationError("labels.csv: label must be 0 or 1, got '" + cells[1] + "'");
            }
            labels[cells[0]] = cells[1] == "1" ? 1 : 0;
        }
        for (const auto& [id, lab] : labels) {
            db.sample_index(id);  // throws on unknown ids
        }
        db.labels = std::move(labels);
    }
    return db;
}

void save_database(const NetworkDatabase& db, const std::string& path) {
    fs::path dir(path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + path + ": " + ec.message());

    json topo;
    topo["nodes"] = db.node_ids;
    json edges = json::array();
    for (const auto& [i, j] : db.shared_edges) edges.push_back({i, j});
    topo["edges"] = std::move(edges);
    {
        std::ofstream out(dir / "topology.json");
        if (!out) throw IoError("cannot write topology.json in " + path);
        out << topo.dump(2) << "\n";
    }

    {
        std::ofstream out(dir / "values.csv");
        if (!out) throw IoError("cannot write values.csv in " + path);
        out << "sample_id";
        for (const auto& id : db.node_ids) out << "," << id;
        out << "\n";
        for (const auto& s : db.samples) {
            out << s.sample_id;
            for (int j = 0; j < db.n_nodes(); ++j) {
                out << ",";
                if (!s.missing_mask[j]) out << to_shortest_string(s.values[j]);
            }
            out << "\n";
        }
    }

    for (const auto& s : db.samples) {
        if (!s.edge_override) continue;
        std::ofstream out(dir / ("edges_" + s.sample_id + ".csv"));
        if (!out) throw IoError("cannot write edge override for " + s.sample_id);
        for (const auto& [i, j] : *s.edge_override) out << i << "," << j << "\n";
    }

    if (db.labels) {
        std::ofstream out(dir / "labels.csv");
        if (!out) throw IoError("cannot write labels.csv in " + path);
        out << "sample_id,label\n";
        for (const auto& [id, lab] : *db.labels) out << id << "," << lab << "\n";
    }
}

NetworkDatabase impute_missing(const NetworkDatabase& db) {
    NetworkDatabase out = db;
    const int n = db.n_nodes();
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        int count = 0;
        for (const auto& s : db.samples) {
            if (!s.missing_mask[j]) {
                sum += s.values[j];
                ++count;
            }
        }
        const double fill = count > 0 ? sum / count : 0.0;
        for (auto& s : out.samples) {
            if (s.missing_mask[j]) s.values[j] = fill;
        }
    }
    return out;
}

const EdgeSet& effective_edges(const NetworkDatabase& db, const std::string& sample_id) {
    const auto& s = db.samples[db.sample_index(sample_id)];
    return s.edge_override ? *s.edge_override : db.shared_edges;
}

bool operator==(const NetworkSample& a, const NetworkSample& b) {
    return a.sample_id == b.sample_id && a.values == b.values &&
           a.edge_override == b.edge_override && a.missing_mask == b.missing_mask;
}

bool operator==(const NetworkDatabase& a, const NetworkDatabase& b) {
    return a.node_ids == b.node_ids && a.shared_edges == b.shared_edges &&
           a.samples == b.samples && a.labels == b.labels;
}

}  // namespace netoutlier
