#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gad/graph/bipartite.hpp"

namespace gad {

struct LoadedGraph {
    BipartiteGraph graph;
    LabelSet labels;
};

struct EdgeListOptions {
    /// When false, the label file must list every user 0..U-1 exactly once and U is its
    /// row count. When true, the label file may list any subset of users and U is taken
    /// from num_users or, failing that, the smallest object id in the edge file.
    bool partial_labels = false;
    std::optional<std::size_t> num_users;
    std::optional<std::size_t> num_objects;
};

/// Reads the two-file format: labels ("user_id label" rows) and edges
/// ("user_id object_id" rows, objects numbered from U). Fields may be separated
/// by whitespace or commas; blank lines and lines starting with '#' are skipped.
/// Parse errors carry the file name and line number.
LoadedGraph load_edge_list(const std::filesystem::path& labels_path, const std::filesystem::path& edges_path,
                           const EdgeListOptions& options = {});

/// Writes the two-file format read by load_edge_list.
void write_edge_list(const BipartiteGraph& graph, const LabelSet& labels, const std::filesystem::path& labels_path,
                     const std::filesystem::path& edges_path);

enum class UnknownLabelPolicy { error, skip };

/// Maps an intrusion-detection flow CSV onto a user/object graph.
struct Ids2017Options {
    std::vector<std::string> user_columns{"Source IP"};
    std::vector<std::string> object_columns{"Destination IP", "Destination Port"};
    std::string label_column{"Label"};
    std::string benign_label{"BENIGN"};
    std::string attack_prefix{"Web Attack"};
    UnknownLabelPolicy unknown_labels = UnknownLabelPolicy::error;
};

/// Users and objects are numbered by first appearance. A user is abnormal (1) if any
/// of its flows carries an attack label, otherwise normal (0). Header names are
/// matched after trimming surrounding whitespace.
LoadedGraph preprocess_ids2017(const std::filesystem::path& csv_path, const Ids2017Options& options = {});

/// Label string classification used by preprocess_ids2017: 0, 1, or nullopt when unknown.
std::optional<int> classify_flow_label(const std::string& label, const Ids2017Options& options);

}  // namespace gad
