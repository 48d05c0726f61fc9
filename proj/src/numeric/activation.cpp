#include "gad/numeric/activation.hpp"

#include <algorithm>
#include <cmath>

namespace gad {

double sigmoid(double x) {
    // Branches keep exp() from overflowing for large |x|.
    if (x >= 0.0) {
        const double z = std::exp(-x);
        return 1.0 / (1.0 + z);
    }
    const double z = std::exp(x);
    return z / (1.0 + z);
}

double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }

DenseMatrix activation(const DenseMatrix& x, Activation act) {
    DenseMatrix y = x;
    auto v = y.values();
    switch (act.kind) {
        case ActivationKind::linear:
            break;
        case ActivationKind::sigmoid:
            for (double& e : v) e = sigmoid(e);
            break;
        case ActivationKind::tanh:
            for (double& e : v) e = std::tanh(e);
            break;
        case ActivationKind::relu:
            for (double& e : v) e = e > 0.0 ? e : 0.0;
            break;
        case ActivationKind::leaky_relu:
            for (double& e : v) e = leaky_relu(e, act.param);
            break;
        case ActivationKind::elu:
            for (double& e : v) e = e > 0.0 ? e : act.param * std::expm1(e);
            break;
        case ActivationKind::softmax_rowwise:
            for (std::size_t r = 0; r < y.rows(); ++r) {
                auto row = y.row(r);
                if (row.empty()) continue;
                const double m = *std::max_element(row.begin(), row.end());
                double total = 0.0;
                for (double& e : row) {
                    e = std::exp(e - m);
                    total += e;
                }
                for (double& e : row) e /= total;
            }
            break;
    }
    return y;
}

DenseMatrix activation_backward(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& grad_out,
                                Activation act) {
    DenseMatrix g = grad_out;
    auto gv = g.values();
    auto xv = x.values();
    auto yv = y.values();
    switch (act.kind) {
        case ActivationKind::linear:
            break;
        case ActivationKind::sigmoid:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= yv[i] * (1.0 - yv[i]);
            break;
        case ActivationKind::tanh:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= 1.0 - yv[i] * yv[i];
            break;
        case ActivationKind::relu:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = xv[i] > 0.0 ? gv[i] : 0.0;
            break;
        case ActivationKind::leaky_relu:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= xv[i] > 0.0 ? 1.0 : act.param;
            break;
        case ActivationKind::elu:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= xv[i] > 0.0 ? 1.0 : yv[i] + act.param;
            break;
        case ActivationKind::softmax_rowwise:
            for (std::size_t r = 0; r < g.rows(); ++r) {
                auto gr = g.row(r);
                auto yr = y.row(r);
                double dot = 0.0;
                for (std::size_t c = 0; c < gr.size(); ++c) dot += gr[c] * yr[c];
                for (std::size_t c = 0; c < gr.size(); ++c) gr[c] = yr[c] * (gr[c] - dot);
            }
            break;
    }
    return g;
}

std::string to_string(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::linear: return "linear";
        case ActivationKind::sigmoid: return "sigmoid";
        case ActivationKind::tanh: return "tanh";
        case ActivationKind::relu: return "relu";
        case ActivationKind::leaky_relu: return "leaky_relu";
        case ActivationKind::elu: return "elu";
        case ActivationKind::softmax_rowwise: return "softmax_rowwise";
    }
    return "unknown";
}

}  // namespace gad
