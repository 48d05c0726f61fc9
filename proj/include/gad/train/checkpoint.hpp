#pragma once

#include <filesystem>

#include "gad/numeric/params.hpp"
#include "gad/ssl/kmeans.hpp"
#include "gad/train/config.hpp"

namespace gad {

/// params.f64 layout (little-endian): 8-byte magic "GADPARM1", uint64 tensor count, then per
/// tensor: uint32 name length, name bytes, uint64 rows, uint64 cols, rows×cols float64 row-major.
void write_params_f64(const std::filesystem::path& path, const ParameterStore& params);
/// Values only; Adam moments start at zero.
ParameterStore read_params_f64(const std::filesystem::path& path);

struct Checkpoint {
    ParameterStore params;
    TrainingConfig config;
    ClusterState clusters;
};

/// Writes params.f64, config (key=value) and clusters into dir, creating it if needed.
void write_checkpoint(const std::filesystem::path& dir, const ParameterStore& params, const TrainingConfig& config,
                      const ClusterState& clusters);
Checkpoint read_checkpoint(const std::filesystem::path& dir);

}  // namespace gad
