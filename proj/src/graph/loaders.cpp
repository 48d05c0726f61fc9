#include "gad/graph/loaders.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>

#include "gad/errors.hpp"

namespace gad {

namespace {

struct Row {
    std::size_t line;
    long long first;
    double second;
};

bool parse_int(std::string_view s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && !(line[j] == ' ' || line[j] == '\t' || line[j] == ',' || line[j] == '\r')) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<Row> read_pairs(const std::filesystem::path& path, bool second_is_real) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    const std::string name = path.string();
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty() || fields[0].front() == '#') continue;
        if (fields.size() != 2) {
            throw DataError(name, line_no, "expected 2 fields, found " + std::to_string(fields.size()));
        }
        Row r{line_no, 0, 0.0};
        if (!parse_int(fields[0], r.first) || r.first < 0) {
            throw DataError(name, line_no, "invalid id '" + std::string(fields[0]) + "'");
        }
        if (second_is_real) {
            if (!parse_double(fields[1], r.second)) {
                throw DataError(name, line_no, "invalid value '" + std::string(fields[1]) + "'");
            }
        } else {
            long long v = 0;
            if (!parse_int(fields[1], v) || v < 0) {
                throw DataError(name, line_no, "invalid id '" + std::string(fields[1]) + "'");
            }
            r.second = double(v);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

LoadedGraph load_edge_list(const std::filesystem::path& labels_path, const std::filesystem::path& edges_path,
                           const EdgeListOptions& options) {
    const auto label_rows = read_pairs(labels_path, true);
    const auto edge_rows = read_pairs(edges_path, false);
    const std::string label_name = labels_path.string();
    const std::string edge_name = edges_path.string();

    for (const Row& r : label_rows) {
        if (r.second != 0.0 && r.second != 1.0) {
            throw DataError(label_name, r.line, "label must be 0 or 1");
        }
    }

    std::size_t num_users = 0;
    if (options.num_users) {
        num_users = *options.num_users;
    } else if (!options.partial_labels) {
        num_users = label_rows.size();
    } else {
        long long min_object = std::numeric_limits<long long>::max();
        for (const Row& r : edge_rows) min_object = std::min(min_object, (long long)r.second);
        if (edge_rows.empty()) throw DataError(edge_name, 0, "no edges; cannot infer the user count");
        num_users = std::size_t(min_object);
    }

    if (!options.partial_labels) {
        // Every user 0..U-1 exactly once.
        std::vector<char> seen(num_users, 0);
        for (const Row& r : label_rows) {
            if (std::size_t(r.first) >= num_users || seen[r.first]) {
                throw DataError(label_name, r.line,
                                "non-contiguous user id " + std::to_string(r.first) + " (expected ids 0.." +
                                    std::to_string(num_users == 0 ? 0 : num_users - 1) + " once each)");
            }
            seen[r.first] = 1;
        }
        if (label_rows.size() != num_users) {
            throw DataError(label_name, 0, "label file lists " + std::to_string(label_rows.size()) + " users, expected " +
                                               std::to_string(num_users));
        }
    }

    std::vector<std::pair<NodeId, int>> label_entries;
    label_entries.reserve(label_rows.size());
    {
        std::vector<char> seen(num_users, 0);
        for (const Row& r : label_rows) {
            if (std::size_t(r.first) >= num_users) {
                throw DataError(label_name, r.line, "user id " + std::to_string(r.first) + " >= user count " +
                                                        std::to_string(num_users));
            }
            if (seen[r.first]) throw DataError(label_name, r.line, "duplicate user id " + std::to_string(r.first));
            seen[r.first] = 1;
            label_entries.emplace_back(NodeId(r.first), int(r.second));
        }
    }

    std::size_t max_object = num_users == 0 ? 0 : num_users - 1;
    bool any_object = false;
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(edge_rows.size());
    for (const Row& r : edge_rows) {
        const auto object = std::size_t(r.second);
        if (std::size_t(r.first) >= num_users) {
            throw DataError(edge_name, r.line, "user id " + std::to_string(r.first) + " >= user count " +
                                                   std::to_string(num_users));
        }
        if (object < num_users) {
            throw DataError(edge_name, r.line, "object id " + std::to_string(object) + " < user count " +
                                                   std::to_string(num_users));
        }
        max_object = std::max(max_object, object);
        any_object = true;
        edges.emplace_back(NodeId(r.first), NodeId(object));
    }
    std::size_t num_objects = any_object ? max_object + 1 - num_users : 0;
    if (options.num_objects) {
        if (*options.num_objects < num_objects) {
            throw DataError(edge_name, 0, "object ids exceed the declared object count " +
                                              std::to_string(*options.num_objects));
        }
        num_objects = *options.num_objects;
    }

    LoadedGraph out;
    out.graph = BipartiteGraph::build(num_users, num_objects, std::move(edges));
    out.labels = LabelSet(std::move(label_entries));
    return out;
}

void write_edge_list(const BipartiteGraph& graph, const LabelSet& labels, const std::filesystem::path& labels_path,
                     const std::filesystem::path& edges_path) {
    std::ofstream lab(labels_path);
    if (!lab) throw DataError("cannot write " + labels_path.string());
    for (const auto& [user, y] : labels.entries()) lab << user << ' ' << y << '\n';
    std::ofstream edg(edges_path);
    if (!edg) throw DataError("cannot write " + edges_path.string());
    for (const auto& [u, o] : graph.edges()) edg << u << ' ' << o << '\n';
    if (!lab || !edg) throw DataError("write failed for " + edges_path.string());
}

}  // namespace gad
