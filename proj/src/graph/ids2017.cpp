#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "gad/errors.hpp"
#include "gad/graph/loaders.hpp"

namespace gad {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(trim(field));
    return out;
}

std::vector<std::size_t> resolve_columns(const std::vector<std::string>& header, const std::vector<std::string>& wanted,
                                         const std::string& source) {
    std::vector<std::size_t> idx;
    std::vector<std::string> missing;
    for (const auto& name : wanted) {
        auto it = std::find(header.begin(), header.end(), trim(name));
        if (it == header.end()) {
            missing.push_back(name);
        } else {
            idx.push_back(std::size_t(it - header.begin()));
        }
    }
    if (!missing.empty()) {
        std::string msg = "missing column(s):";
        for (const auto& m : missing) msg += " '" + m + "'";
        throw DataError(source, 1, msg);
    }
    return idx;
}

std::string join_key(const std::vector<std::string>& fields, const std::vector<std::size_t>& cols) {
    std::string key;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) key.push_back('|');
        key += fields[cols[i]];
    }
    return key;
}

}  // namespace

std::optional<int> classify_flow_label(const std::string& label, const Ids2017Options& options) {
    const std::string t = trim(label);
    if (t == options.benign_label) return 0;
    if (t.starts_with(options.attack_prefix)) return 1;
    return std::nullopt;
}

LoadedGraph preprocess_ids2017(const std::filesystem::path& csv_path, const Ids2017Options& options) {
    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path.string());
    const std::string source = csv_path.string();
    std::string line;
    if (!std::getline(in, line)) throw DataError(source, 1, "empty file");
    const auto header = split_csv(line);

    std::vector<std::string> required = options.user_columns;
    required.insert(required.end(), options.object_columns.begin(), options.object_columns.end());
    required.push_back(options.label_column);
    resolve_columns(header, required, source);  // reports every missing column at once
    const auto user_cols = resolve_columns(header, options.user_columns, source);
    const auto object_cols = resolve_columns(header, options.object_columns, source);
    const auto label_col = resolve_columns(header, {options.label_column}, source).front();
    std::size_t needed = label_col;
    for (auto c : user_cols) needed = std::max(needed, c);
    for (auto c : object_cols) needed = std::max(needed, c);

    std::unordered_map<std::string, NodeId> user_ids;
    std::unordered_map<std::string, NodeId> object_ids;
    std::vector<int> user_label;
    std::vector<std::pair<NodeId, NodeId>> local_edges;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_csv(line);
        if (std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return f.empty(); })) continue;
        if (fields.size() <= needed) {
            throw DataError(source, line_no, "row has " + std::to_string(fields.size()) + " fields, need " +
                                                 std::to_string(needed + 1));
        }
        const auto y = classify_flow_label(fields[label_col], options);
        if (!y) {
            if (options.unknown_labels == UnknownLabelPolicy::skip) continue;
            throw DataError(source, line_no, "unknown label '" + fields[label_col] + "'");
        }
        const std::string ukey = join_key(fields, user_cols);
        const std::string okey = join_key(fields, object_cols);
        auto [uit, new_user] = user_ids.try_emplace(ukey, NodeId(user_ids.size()));
        if (new_user) user_label.push_back(0);
        user_label[uit->second] = std::max(user_label[uit->second], *y);
        auto [oit, new_object] = object_ids.try_emplace(okey, NodeId(object_ids.size()));
        (void)new_object;
        local_edges.emplace_back(uit->second, oit->second);
    }

    const std::size_t num_users = user_ids.size();
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(local_edges.size());
    for (const auto& [u, o] : local_edges) edges.emplace_back(u, NodeId(num_users + o));
    std::vector<std::pair<NodeId, int>> labels;
    labels.reserve(num_users);
    for (std::size_t u = 0; u < num_users; ++u) labels.emplace_back(NodeId(u), user_label[u]);

    LoadedGraph out;
    out.graph = BipartiteGraph::build(num_users, object_ids.size(), std::move(edges));
    out.labels = LabelSet(std::move(labels));
    return out;
}

}  // namespace gad
