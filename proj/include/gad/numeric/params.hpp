#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gad/numeric/matrix.hpp"

namespace gad {

/// Gradients keyed by parameter name; each has its parameter's shape.
using GradientRecord = std::map<std::string, DenseMatrix>;

struct AdamOptions {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Named learnable tensors with their Adam moments and the global step count.
class ParameterStore {
public:
    /// Adds a new parameter with zeroed moments. Throws if the name exists.
    void add(const std::string& name, DenseMatrix value);
    bool contains(const std::string& name) const { return entries_.contains(name); }
    const DenseMatrix& get(const std::string& name) const;
    /// Mutable access; resets nothing. Shape changes are rejected by set().
    DenseMatrix& value(const std::string& name);
    void set(const std::string& name, DenseMatrix value);

    const DenseMatrix& first_moment(const std::string& name) const;
    const DenseMatrix& second_moment(const std::string& name) const;

    std::vector<std::string> names() const;
    std::size_t size() const noexcept { return entries_.size(); }
    std::uint64_t step() const noexcept { return step_; }

    /// Copies the parameters whose names start with prefix (values only, fresh moments).
    ParameterStore subset(const std::string& prefix) const;
    /// Copies every parameter of other into this store (fresh moments); existing names are overwritten.
    void merge_values(const ParameterStore& other);

    /// One bias-corrected Adam update; step() increases by exactly one.
    /// Parameters missing from grads are left unchanged together with their moments.
    void adam_step(const GradientRecord& grads, const AdamOptions& opt);

private:
    struct Entry {
        DenseMatrix value;
        DenseMatrix m;
        DenseMatrix v;
    };
    const Entry& entry(const std::string& name) const;

    std::map<std::string, Entry> entries_;
    std::uint64_t step_ = 0;
};

/// Glorot/Xavier uniform initialization for a fan_in×fan_out weight.
class Rng;
DenseMatrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);
DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double bound, Rng& rng);

}  // namespace gad
