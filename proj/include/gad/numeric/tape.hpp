#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gad/numeric/activation.hpp"
#include "gad/numeric/matrix.hpp"
#include "gad/numeric/params.hpp"
#include "gad/numeric/sparse.hpp"

namespace gad {

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
public:
    Var() = default;

    const DenseMatrix& value() const;
    std::size_t rows() const { return value().rows(); }
    std::size_t cols() const { return value().cols(); }
    Tape* tape() const noexcept { return tape_; }
    std::size_t id() const noexcept { return id_; }
    bool valid() const noexcept { return tape_ != nullptr; }

private:
    friend class Tape;
    Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    std::size_t id_ = 0;
};

/// Records a composition of differentiable ops and runs reverse-mode
/// accumulation over it. One tape per forward pass; not thread-safe.
class Tape {
public:
    /// Called with the output gradient and the op's output value; adds
    /// contributions into the input gradients.
    using BackwardFn = std::function<void(Tape&, const DenseMatrix& grad_out, const DenseMatrix& value)>;

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var constant(DenseMatrix value);
    /// Leaf bound to a named parameter; recording the same name twice returns the same Var.
    Var parameter(const ParameterStore& store, const std::string& name);

    /// Records an op output. inputs lists the Vars the op reads.
    Var record(DenseMatrix value, std::span<const Var> inputs, BackwardFn backward);

    const DenseMatrix& value(const Var& v) const;
    bool requires_grad(const Var& v) const;
    /// Gradient accumulator for v, allocated on first use.
    DenseMatrix& grad(const Var& v);

    /// Reverse pass from a 1×1 loss. Returns gradients of every recorded parameter
    /// (zeros for parameters the loss does not depend on).
    GradientRecord backward(const Var& loss);

    std::size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node {
        DenseMatrix value;
        DenseMatrix grad;
        BackwardFn backward;
        std::string param_name;
        bool requires_grad = false;
    };
    const Node& node(const Var& v) const;

    std::vector<Node> nodes_;
    std::map<std::string, std::size_t> param_index_;
};

namespace ad {

Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
/// a (r×c) plus a 1×c row broadcast to every row.
Var add_row(const Var& a, const Var& row);
Var scale(const Var& a, double s);
/// a scaled by a 1×1 Var.
Var scale_by(const Var& a, const Var& s);
Var activate(const Var& a, Activation act);
Var aggregate(const SparseAdjacency& adj, const Var& h, AggregateMode mode, bool include_self = false);
Var gather_rows(const Var& a, std::span<const std::size_t> rows);
/// 1×c mean of all rows.
Var mean_rows(const Var& a);
Var transpose(const Var& a);
Var sum(const Var& a);
/// Elementwise maximum; ties route the gradient to the first argument.
Var maximum(const Var& a, const Var& b);
/// −(1/N) Σ w_i [t_i log p_i + (1−t_i) log(1−p_i)] over the N entries of p,
/// logs clamped to [kLogClampLow, kLogClampHigh]. weights may be empty (all 1).
Var binary_cross_entropy(const Var& probs, std::span<const double> targets,
                         std::span<const double> weights = {});
/// Same loss with p = σ(logits), evaluated in log space without clamping, so the value
/// stays exact and the gradient (σ(z) − t)·w/N never vanishes for a wrong, saturated logit.
Var binary_cross_entropy_logits(const Var& logits, std::span<const double> targets,
                                std::span<const double> weights = {});

/// Single-head graph attention over N(i) ∪ {i}:
/// e_ij = LeakyReLU(a_srcᵀ z_i + a_dstᵀ z_j), α = softmax_j(e_ij), out_i = Σ_j α_ij z_j.
/// attn is the (2F)×1 vector [a_src; a_dst].
Var attention_aggregate(const SparseAdjacency& adj, const Var& z, const Var& attn, double slope);

}  // namespace ad

/// Attention coefficients as computed by ad::attention_aggregate, one list per node,
/// ordered like N(i) ∪ {i} sorted ascending.
struct AttentionWeights {
    std::vector<std::vector<std::size_t>> targets;
    std::vector<std::vector<double>> alpha;
};
AttentionWeights attention_coefficients(const SparseAdjacency& adj, const DenseMatrix& z,
                                        const DenseMatrix& attn, double slope);

}  // namespace gad
