#include "gad/numeric/params.hpp"

#include <cmath>

#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

void ParameterStore::add(const std::string& name, DenseMatrix value) {
    if (entries_.contains(name)) throw std::invalid_argument("ParameterStore::add: duplicate name '" + name + "'");
    DenseMatrix zeros(value.rows(), value.cols());
    entries_.emplace(name, Entry{std::move(value), zeros, zeros});
}

const ParameterStore::Entry& ParameterStore::entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("ParameterStore: unknown parameter '" + name + "'");
    return it->second;
}

const DenseMatrix& ParameterStore::get(const std::string& name) const { return entry(name).value; }

DenseMatrix& ParameterStore::value(const std::string& name) {
    return const_cast<Entry&>(entry(name)).value;
}

void ParameterStore::set(const std::string& name, DenseMatrix value) {
    auto& e = const_cast<Entry&>(entry(name));
    require_same_shape(e.value, value, "ParameterStore::set");
    e.value = std::move(value);
}

const DenseMatrix& ParameterStore::first_moment(const std::string& name) const { return entry(name).m; }
const DenseMatrix& ParameterStore::second_moment(const std::string& name) const { return entry(name).v; }

std::vector<std::string> ParameterStore::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, _] : entries_) out.push_back(name);
    return out;
}

ParameterStore ParameterStore::subset(const std::string& prefix) const {
    ParameterStore out;
    for (const auto& [name, e] : entries_)
        if (name.starts_with(prefix)) out.add(name, e.value);
    return out;
}

void ParameterStore::merge_values(const ParameterStore& other) {
    for (const auto& [name, e] : other.entries_) {
        DenseMatrix zeros(e.value.rows(), e.value.cols());
        entries_.insert_or_assign(name, Entry{e.value, zeros, zeros});
    }
}

void ParameterStore::adam_step(const GradientRecord& grads, const AdamOptions& opt) {
    if (!(opt.lr >= 0.0) || !(opt.beta1 >= 0.0 && opt.beta1 < 1.0) || !(opt.beta2 >= 0.0 && opt.beta2 < 1.0)) {
        throw ConfigError("adam_step: require lr >= 0 and 0 <= beta1, beta2 < 1");
    }
    for (const auto& [name, g] : grads) {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw std::out_of_range("adam_step: gradient for unknown parameter '" + name + "'");
        require_same_shape(it->second.value, g, "adam_step");
    }
    ++step_;
    const double t = double(step_);
    const double bias1 = 1.0 - std::pow(opt.beta1, t);
    const double bias2 = 1.0 - std::pow(opt.beta2, t);
    for (const auto& [name, g] : grads) {
        Entry& e = entries_.at(name);
        auto w = e.value.values();
        auto m = e.m.values();
        auto v = e.v.values();
        auto gv = g.values();
        for (std::size_t i = 0; i < w.size(); ++i) {
            m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * gv[i];
            v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * gv[i] * gv[i];
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            w[i] -= opt.lr * m_hat / (std::sqrt(v_hat) + opt.eps);
        }
    }
}

DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
    DenseMatrix m(rows, cols);
    for (double& v : m.values()) v = rng.uniform(-bound, bound);
    return m;
}

DenseMatrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double bound = std::sqrt(6.0 / double(fan_in + fan_out));
    return uniform_matrix(fan_in, fan_out, bound, rng);
}

}  // namespace gad
