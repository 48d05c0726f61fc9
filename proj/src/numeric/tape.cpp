#include "gad/numeric/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gad/errors.hpp"

namespace gad {

const DenseMatrix& Var::value() const {
    if (!tape_) throw std::logic_error("Var::value: unrecorded variable");
    return tape_->value(*this);
}

const Tape::Node& Tape::node(const Var& v) const {
    if (v.tape() != this || v.id() >= nodes_.size()) {
        throw std::logic_error("Tape: variable was not recorded on this tape");
    }
    return nodes_[v.id()];
}

Var Tape::constant(DenseMatrix value) {
    nodes_.push_back(Node{std::move(value), {}, {}, {}, false});
    return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(const ParameterStore& store, const std::string& name) {
    if (auto it = param_index_.find(name); it != param_index_.end()) return Var(this, it->second);
    nodes_.push_back(Node{store.get(name), {}, {}, name, true});
    param_index_.emplace(name, nodes_.size() - 1);
    return Var(this, nodes_.size() - 1);
}

Var Tape::record(DenseMatrix value, std::span<const Var> inputs, BackwardFn backward) {
    bool needs = false;
    for (const Var& in : inputs) needs = needs || node(in).requires_grad;
    nodes_.push_back(Node{std::move(value), {}, needs ? std::move(backward) : BackwardFn{}, {}, needs});
    return Var(this, nodes_.size() - 1);
}

const DenseMatrix& Tape::value(const Var& v) const { return node(v).value; }

bool Tape::requires_grad(const Var& v) const { return node(v).requires_grad; }

DenseMatrix& Tape::grad(const Var& v) {
    Node& n = const_cast<Node&>(node(v));
    if (n.grad.empty() && !n.value.empty()) n.grad = DenseMatrix(n.value.rows(), n.value.cols());
    return n.grad;
}

GradientRecord Tape::backward(const Var& loss) {
    const Node& root = node(loss);
    if (root.value.rows() != 1 || root.value.cols() != 1) {
        throw ShapeError("Tape::backward: loss must be 1x1, got " + root.value.shape_string());
    }
    for (Node& n : nodes_) n.grad = DenseMatrix();
    grad(loss)(0, 0) = 1.0;
    for (std::size_t id = loss.id() + 1; id-- > 0;) {
        Node& n = nodes_[id];
        if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
        n.backward(*this, n.grad, n.value);
    }
    GradientRecord out;
    for (const auto& [name, id] : param_index_) {
        const Node& n = nodes_[id];
        DenseMatrix g = n.grad.empty() ? DenseMatrix(n.value.rows(), n.value.cols()) : n.grad;
        if (!g.all_finite()) throw NumericalError("Tape::backward: non-finite gradient for '" + name + "'");
        out.emplace(name, std::move(g));
    }
    return out;
}

namespace ad {

namespace {

Tape& tape_of(const Var& a) {
    if (!a.valid()) throw std::logic_error("ad: unrecorded variable");
    return *a.tape();
}

Tape& tape_of(const Var& a, const Var& b) {
    if (a.tape() != b.tape() || !a.valid()) throw std::logic_error("ad: variables from different tapes");
    return *a.tape();
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
    Tape& t = tape_of(a, b);
    DenseMatrix out = gad::matmul(a.value(), b.value());
    const Var inputs[] = {a, b};
    return t.record(std::move(out), inputs, [a, b](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        if (tp.requires_grad(a)) tp.grad(a) += matmul_nt(g, b.value());
        if (tp.requires_grad(b)) tp.grad(b) += matmul_tn(a.value(), g);
    });
}

Var add(const Var& a, const Var& b) {
    Tape& t = tape_of(a, b);
    DenseMatrix out = a.value() + b.value();
    const Var inputs[] = {a, b};
    return t.record(std::move(out), inputs, [a, b](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        if (tp.requires_grad(a)) tp.grad(a) += g;
        if (tp.requires_grad(b)) tp.grad(b) += g;
    });
}

Var sub(const Var& a, const Var& b) {
    Tape& t = tape_of(a, b);
    DenseMatrix out = a.value() - b.value();
    const Var inputs[] = {a, b};
    return t.record(std::move(out), inputs, [a, b](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        if (tp.requires_grad(a)) tp.grad(a) += g;
        if (tp.requires_grad(b)) tp.grad(b) -= g;
    });
}

Var add_row(const Var& a, const Var& row) {
    Tape& t = tape_of(a, row);
    const DenseMatrix& av = a.value();
    const DenseMatrix& rv = row.value();
    if (rv.rows() != 1 || rv.cols() != av.cols()) {
        throw ShapeError("add_row: cannot broadcast " + rv.shape_string() + " over " + av.shape_string());
    }
    DenseMatrix out = av;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto dst = out.row(r);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += rv(0, c);
    }
    const Var inputs[] = {a, row};
    return t.record(std::move(out), inputs, [a, row](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        if (tp.requires_grad(a)) tp.grad(a) += g;
        if (tp.requires_grad(row)) {
            DenseMatrix& gr = tp.grad(row);
            for (std::size_t r = 0; r < g.rows(); ++r)
                for (std::size_t c = 0; c < g.cols(); ++c) gr(0, c) += g(r, c);
        }
    });
}

Var scale(const Var& a, double s) {
    Tape& t = tape_of(a);
    const Var inputs[] = {a};
    return t.record(a.value() * s, inputs, [a, s](Tape& tp, const DenseMatrix& g, const DenseMatrix&) { tp.grad(a) += g * s; });
}

Var scale_by(const Var& a, const Var& s) {
    Tape& t = tape_of(a, s);
    if (s.rows() != 1 || s.cols() != 1) throw ShapeError("scale_by: scalar must be 1x1, got " + s.value().shape_string());
    const Var inputs[] = {a, s};
    return t.record(a.value() * s.value()(0, 0), inputs, [a, s](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        if (tp.requires_grad(a)) tp.grad(a) += g * s.value()(0, 0);
        if (tp.requires_grad(s)) {
            double acc = 0.0;
            auto gv = g.values();
            auto av = a.value().values();
            for (std::size_t i = 0; i < gv.size(); ++i) acc += gv[i] * av[i];
            tp.grad(s)(0, 0) += acc;
        }
    });
}

Var activate(const Var& a, Activation act) {
    Tape& t = tape_of(a);
    const Var inputs[] = {a};
    return t.record(activation(a.value(), act), inputs,
                    [a, act](Tape& tp, const DenseMatrix& g, const DenseMatrix& y) {
                        tp.grad(a) += activation_backward(a.value(), y, g, act);
                    });
}

Var aggregate(const SparseAdjacency& adj, const Var& h, AggregateMode mode, bool include_self) {
    Tape& t = tape_of(h);
    DenseMatrix out = aggregate_neighbors(adj, h.value(), mode, include_self);
    const Var inputs[] = {h};
    const SparseAdjacency* graph = &adj;
    return t.record(std::move(out), inputs, [h, graph, mode, include_self](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        // The aggregation operator is symmetric up to the per-row mean scaling.
        DenseMatrix& gh = tp.grad(h);
        const std::size_t d = g.cols();
        for (std::size_t v = 0; v < graph->num_nodes(); ++v) {
            double w = 1.0;
            if (mode == AggregateMode::mean) {
                const std::size_t count = graph->degree(v) + (include_self ? 1 : 0);
                if (count == 0) continue;
                w = 1.0 / double(count);
            }
            auto src = g.row(v);
            if (include_self) {
                auto dst = gh.row(v);
                for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
            }
            for (NodeId u : graph->neighbors(v)) {
                auto dst = gh.row(u);
                for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
            }
        }
    });
}

Var gather_rows(const Var& a, std::span<const std::size_t> rows) {
    Tape& t = tape_of(a);
    const DenseMatrix& av = a.value();
    DenseMatrix out(rows.size(), av.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= av.rows()) {
            throw ShapeError("gather_rows: row " + std::to_string(rows[i]) + " out of range for " + av.shape_string());
        }
        std::copy_n(av.row(rows[i]).data(), av.cols(), out.row(i).data());
    }
    const Var inputs[] = {a};
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    return t.record(std::move(out), inputs, [a, idx = std::move(idx)](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        DenseMatrix& ga = tp.grad(a);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto dst = ga.row(idx[i]);
            auto src = g.row(i);
            for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
        }
    });
}

Var mean_rows(const Var& a) {
    Tape& t = tape_of(a);
    const DenseMatrix& av = a.value();
    if (av.rows() == 0) throw ShapeError("mean_rows: empty matrix");
    DenseMatrix out(1, av.cols());
    for (std::size_t r = 0; r < av.rows(); ++r)
        for (std::size_t c = 0; c < av.cols(); ++c) out(0, c) += av(r, c);
    const double n = double(av.rows());
    for (double& v : out.values()) v /= n;
    const Var inputs[] = {a};
    return t.record(std::move(out), inputs, [a](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        DenseMatrix& ga = tp.grad(a);
        const double n = double(ga.rows());
        for (std::size_t r = 0; r < ga.rows(); ++r)
            for (std::size_t c = 0; c < ga.cols(); ++c) ga(r, c) += g(0, c) / n;
    });
}

Var transpose(const Var& a) {
    Tape& t = tape_of(a);
    const Var inputs[] = {a};
    return t.record(gad::transpose(a.value()), inputs,
                    [a](Tape& tp, const DenseMatrix& g, const DenseMatrix&) { tp.grad(a) += gad::transpose(g); });
}

Var sum(const Var& a) {
    Tape& t = tape_of(a);
    double s = 0.0;
    for (double v : a.value().values()) s += v;
    const Var inputs[] = {a};
    return t.record(DenseMatrix(1, 1, s), inputs, [a](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        for (double& v : tp.grad(a).values()) v += g(0, 0);
    });
}

Var maximum(const Var& a, const Var& b) {
    Tape& t = tape_of(a, b);
    require_same_shape(a.value(), b.value(), "maximum");
    DenseMatrix out = a.value();
    auto bv = b.value().values();
    auto ov = out.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = std::max(ov[i], bv[i]);
    const Var inputs[] = {a, b};
    return t.record(std::move(out), inputs, [a, b](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        auto av = a.value().values();
        auto bv = b.value().values();
        const bool ga_needed = tp.requires_grad(a);
        const bool gb_needed = tp.requires_grad(b);
        for (std::size_t i = 0; i < av.size(); ++i) {
            if (av[i] >= bv[i]) {
                if (ga_needed) tp.grad(a).values()[i] += g.values()[i];
            } else if (gb_needed) {
                tp.grad(b).values()[i] += g.values()[i];
            }
        }
    });
}

Var binary_cross_entropy(const Var& probs, std::span<const double> targets, std::span<const double> weights) {
    Tape& t = tape_of(probs);
    auto p = probs.value().values();
    if (p.empty()) throw ShapeError("binary_cross_entropy: empty input");
    if (targets.size() != p.size()) throw ShapeError("binary_cross_entropy: target count mismatch");
    if (!weights.empty() && weights.size() != p.size()) throw ShapeError("binary_cross_entropy: weight count mismatch");
    const double n = double(p.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        const double pc = std::clamp(p[i], kLogClampLow, kLogClampHigh);
        const double qc = std::clamp(1.0 - p[i], kLogClampLow, kLogClampHigh);
        total += w * (targets[i] * std::log(pc) + (1.0 - targets[i]) * std::log(qc));
    }
    const Var inputs[] = {probs};
    std::vector<double> tv(targets.begin(), targets.end());
    std::vector<double> wv(weights.begin(), weights.end());
    return t.record(DenseMatrix(1, 1, -total / n), inputs,
                    [probs, tv = std::move(tv), wv = std::move(wv)](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
                        auto p = probs.value().values();
                        auto gp = tp.grad(probs).values();
                        const double n = double(p.size());
                        for (std::size_t i = 0; i < p.size(); ++i) {
                            const double w = wv.empty() ? 1.0 : wv[i];
                            double d = 0.0;
                            // Clamped regions are flat.
                            if (p[i] > kLogClampLow && p[i] < kLogClampHigh) d -= tv[i] / p[i];
                            const double q = 1.0 - p[i];
                            if (q > kLogClampLow && q < kLogClampHigh) d += (1.0 - tv[i]) / q;
                            gp[i] += g(0, 0) * w * d / n;
                        }
                    });
}

namespace {

// log σ(z) without overflow.
double log_sigmoid(double z) { return -(std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)))); }

}  // namespace

Var binary_cross_entropy_logits(const Var& logits, std::span<const double> targets, std::span<const double> weights) {
    Tape& t = tape_of(logits);
    auto z = logits.value().values();
    if (z.empty()) throw ShapeError("binary_cross_entropy_logits: empty input");
    if (targets.size() != z.size()) throw ShapeError("binary_cross_entropy_logits: target count mismatch");
    if (!weights.empty() && weights.size() != z.size()) {
        throw ShapeError("binary_cross_entropy_logits: weight count mismatch");
    }
    const double n = double(z.size());
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        total += w * (targets[i] * log_sigmoid(z[i]) + (1.0 - targets[i]) * log_sigmoid(-z[i]));
    }
    const Var inputs[] = {logits};
    std::vector<double> tv(targets.begin(), targets.end());
    std::vector<double> wv(weights.begin(), weights.end());
    return t.record(DenseMatrix(1, 1, -total / n), inputs,
                    [logits, tv = std::move(tv), wv = std::move(wv)](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
                        auto z = logits.value().values();
                        auto gz = tp.grad(logits).values();
                        const double n = double(z.size());
                        for (std::size_t i = 0; i < z.size(); ++i) {
                            const double w = wv.empty() ? 1.0 : wv[i];
                            gz[i] += g(0, 0) * w * (sigmoid(z[i]) - tv[i]) / n;
                        }
                    });
}

namespace {

struct AttentionCache {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> targets;
    std::vector<double> pre;
    std::vector<double> alpha;
};

AttentionCache compute_attention(const SparseAdjacency& adj, const DenseMatrix& z, const DenseMatrix& attn,
                                 double slope) {
    const std::size_t n = adj.num_nodes();
    const std::size_t f = z.cols();
    if (z.rows() != n) {
        throw ShapeError("attention_aggregate: features have " + std::to_string(z.rows()) + " rows, graph has " +
                         std::to_string(n) + " nodes");
    }
    if (attn.rows() != 2 * f || attn.cols() != 1) {
        throw ShapeError("attention_aggregate: attention vector must be " + std::to_string(2 * f) + "x1, got " +
                         attn.shape_string());
    }
    std::vector<double> src(n, 0.0), dst(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto zi = z.row(i);
        for (std::size_t c = 0; c < f; ++c) {
            src[i] += attn(c, 0) * zi[c];
            dst[i] += attn(f + c, 0) * zi[c];
        }
    }
    AttentionCache cache;
    cache.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) cache.offsets[i + 1] = cache.offsets[i] + adj.degree(i) + 1;
    const std::size_t total = cache.offsets.back();
    cache.targets.resize(total);
    cache.pre.resize(total);
    cache.alpha.resize(total);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = cache.offsets[i];
        bool self_placed = false;
        for (NodeId j : adj.neighbors(i)) {
            if (!self_placed && j > i) {
                cache.targets[k++] = i;
                self_placed = true;
            }
            cache.targets[k++] = j;
        }
        if (!self_placed) cache.targets[k++] = i;

        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t e = cache.offsets[i]; e < cache.offsets[i + 1]; ++e) {
            cache.pre[e] = src[i] + dst[cache.targets[e]];
            cache.alpha[e] = leaky_relu(cache.pre[e], slope);
            m = std::max(m, cache.alpha[e]);
        }
        double norm = 0.0;
        for (std::size_t e = cache.offsets[i]; e < cache.offsets[i + 1]; ++e) {
            cache.alpha[e] = std::exp(cache.alpha[e] - m);
            norm += cache.alpha[e];
        }
        for (std::size_t e = cache.offsets[i]; e < cache.offsets[i + 1]; ++e) cache.alpha[e] /= norm;
    }
    return cache;
}

}  // namespace

Var attention_aggregate(const SparseAdjacency& adj, const Var& z, const Var& attn, double slope) {
    Tape& t = tape_of(z, attn);
    auto cache = std::make_shared<AttentionCache>(compute_attention(adj, z.value(), attn.value(), slope));
    const DenseMatrix& zv = z.value();
    const std::size_t n = zv.rows();
    const std::size_t f = zv.cols();
    DenseMatrix out(n, f);
    for (std::size_t i = 0; i < n; ++i) {
        auto dst = out.row(i);
        for (std::size_t e = cache->offsets[i]; e < cache->offsets[i + 1]; ++e) {
            auto zj = zv.row(cache->targets[e]);
            const double a = cache->alpha[e];
            for (std::size_t c = 0; c < f; ++c) dst[c] += a * zj[c];
        }
    }
    const Var inputs[] = {z, attn};
    return t.record(std::move(out), inputs, [z, attn, cache, slope](Tape& tp, const DenseMatrix& g, const DenseMatrix&) {
        const DenseMatrix& zv = z.value();
        const DenseMatrix& av = attn.value();
        const std::size_t n = zv.rows();
        const std::size_t f = zv.cols();
        DenseMatrix gz(n, f);
        std::vector<double> gsrc(n, 0.0), gdst(n, 0.0);
        std::vector<double> galpha;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t begin = cache->offsets[i];
            const std::size_t end = cache->offsets[i + 1];
            auto gi = g.row(i);
            galpha.assign(end - begin, 0.0);
            double weighted = 0.0;
            for (std::size_t e = begin; e < end; ++e) {
                const std::size_t j = cache->targets[e];
                auto zj = zv.row(j);
                auto gzj = gz.row(j);
                double dot = 0.0;
                for (std::size_t c = 0; c < f; ++c) {
                    dot += gi[c] * zj[c];
                    gzj[c] += cache->alpha[e] * gi[c];
                }
                galpha[e - begin] = dot;
                weighted += cache->alpha[e] * dot;
            }
            for (std::size_t e = begin; e < end; ++e) {
                const double ge = cache->alpha[e] * (galpha[e - begin] - weighted);
                const double gpre = ge * (cache->pre[e] > 0.0 ? 1.0 : slope);
                gsrc[i] += gpre;
                gdst[cache->targets[e]] += gpre;
            }
        }
        if (tp.requires_grad(attn)) {
            DenseMatrix& ga = tp.grad(attn);
            for (std::size_t i = 0; i < n; ++i) {
                auto zi = zv.row(i);
                for (std::size_t c = 0; c < f; ++c) {
                    ga(c, 0) += gsrc[i] * zi[c];
                    ga(f + c, 0) += gdst[i] * zi[c];
                }
            }
        }
        if (tp.requires_grad(z)) {
            for (std::size_t i = 0; i < n; ++i) {
                auto gzi = gz.row(i);
                for (std::size_t c = 0; c < f; ++c) gzi[c] += gsrc[i] * av(c, 0) + gdst[i] * av(f + c, 0);
            }
            tp.grad(z) += gz;
        }
    });
}

}  // namespace ad

AttentionWeights attention_coefficients(const SparseAdjacency& adj, const DenseMatrix& z, const DenseMatrix& attn,
                                        double slope) {
    const auto cache = ad::compute_attention(adj, z, attn, slope);
    AttentionWeights w;
    const std::size_t n = adj.num_nodes();
    w.targets.resize(n);
    w.alpha.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = cache.offsets[i]; e < cache.offsets[i + 1]; ++e) {
            w.targets[i].push_back(cache.targets[e]);
            w.alpha[i].push_back(cache.alpha[e]);
        }
    }
    return w;
}

}  // namespace gad
