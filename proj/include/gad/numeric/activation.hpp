#pragma once

#include <string>

#include "gad/numeric/matrix.hpp"

namespace gad {

enum class ActivationKind { linear, sigmoid, tanh, relu, leaky_relu, elu, softmax_rowwise };

/// Activation plus its shape parameter (LeakyReLU negative slope, ELU alpha).
struct Activation {
    ActivationKind kind = ActivationKind::linear;
    double param = 0.0;

    static Activation linear() { return {ActivationKind::linear, 0.0}; }
    static Activation sigmoid() { return {ActivationKind::sigmoid, 0.0}; }
    static Activation tanh() { return {ActivationKind::tanh, 0.0}; }
    static Activation relu() { return {ActivationKind::relu, 0.0}; }
    static Activation leaky_relu(double slope = 0.2) { return {ActivationKind::leaky_relu, slope}; }
    static Activation elu(double alpha = 1.0) { return {ActivationKind::elu, alpha}; }
    static Activation softmax_rowwise() { return {ActivationKind::softmax_rowwise, 0.0}; }
};

/// Losses taking probabilities clamp them to [kLogClampLow, kLogClampHigh] before the log.
inline constexpr double kLogClampLow = 1e-7;
inline constexpr double kLogClampHigh = 1.0 - 1e-7;

double sigmoid(double x);
double leaky_relu(double x, double slope);

/// Elementwise, except softmax_rowwise which normalizes each row after
/// subtracting the row maximum.
DenseMatrix activation(const DenseMatrix& x, Activation act);

/// Given y = activation(x) and dL/dy, returns dL/dx.
DenseMatrix activation_backward(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& grad_out,
                                Activation act);

std::string to_string(ActivationKind kind);

}  // namespace gad
