#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gslrec/generative/activation.hpp"
#include "gslrec/numerics/matrix.hpp"

namespace gslrec::generative {

using numerics::Matrix;
using numerics::Vector;

/// Fully connected layer, out = act(W v + bias).
struct DenseLayer {
  Matrix weights;
  Vector bias;
  Activation activation = Activation::identity;
};

inline Vector dense_forward(const DenseLayer& layer, const Vector& v) {
  numerics::check_dims(layer.weights.rows() == layer.bias.size(), "dense layer weights/bias");
  Vector out = numerics::matvec(layer.weights, v);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = apply_activation(layer.activation, out[i] + layer.bias[i]);
  return out;
}

inline Vector net_forward(const std::vector<DenseLayer>& net, Vector v) {
  for (const auto& layer : net) v = dense_forward(layer, v);
  return v;
}

/// Gradient of <u, net(v)> with respect to v (reverse pass over the net).
inline Vector net_vjp(const std::vector<DenseLayer>& net, const Vector& v, Vector u) {
  std::vector<Vector> inputs;
  std::vector<Vector> preacts;
  inputs.reserve(net.size());
  preacts.reserve(net.size());
  Vector cur = v;
  for (const auto& layer : net) {
    inputs.push_back(cur);
    Vector pre = numerics::matvec(layer.weights, cur);
    for (std::size_t i = 0; i < pre.size(); ++i) pre[i] += layer.bias[i];
    preacts.push_back(pre);
    for (std::size_t i = 0; i < pre.size(); ++i)
      pre[i] = apply_activation(layer.activation, pre[i]);
    cur = std::move(pre);
  }
  for (std::size_t li = net.size(); li-- > 0;) {
    const auto& layer = net[li];
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] *= activation_derivative(layer.activation, preacts[li][i]);
    u = numerics::matvec_transpose(layer.weights, u);
  }
  return u;
}

/// Affine coupling transform. Coordinates with mask[i] == true pass through
/// unchanged and condition the scale/shift nets; the rest are transformed as
/// out = v * exp(s) + t. The log-scale s is clamped to [-kExpClamp, kExpClamp].
struct CouplingLayer {
  std::vector<bool> mask;
  std::vector<DenseLayer> scale_net;
  std::vector<DenseLayer> shift_net;
};

namespace detail {

inline void split_by_mask(const CouplingLayer& layer, const Vector& v, Vector& pass,
                          Vector& trans) {
  numerics::check_dims(layer.mask.size() == v.size(), "coupling mask");
  pass.clear();
  trans.clear();
  for (std::size_t i = 0; i < v.size(); ++i) (layer.mask[i] ? pass : trans).push_back(v[i]);
}

inline Vector merge_by_mask(const CouplingLayer& layer, const Vector& pass, const Vector& trans) {
  Vector out(layer.mask.size());
  std::size_t ip = 0, it = 0;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = layer.mask[i] ? pass[ip++] : trans[it++];
  return out;
}

}  // namespace detail

inline Vector coupling_forward(const CouplingLayer& layer, const Vector& v) {
  Vector pass, trans;
  detail::split_by_mask(layer, v, pass, trans);
  Vector log_scale = net_forward(layer.scale_net, pass);
  Vector shift = net_forward(layer.shift_net, pass);
  for (std::size_t i = 0; i < trans.size(); ++i)
    trans[i] = trans[i] * std::exp(clamp_exp_arg(log_scale[i])) + shift[i];
  return detail::merge_by_mask(layer, pass, trans);
}

inline Vector coupling_inverse(const CouplingLayer& layer, const Vector& x) {
  Vector pass, trans;
  detail::split_by_mask(layer, x, pass, trans);
  Vector log_scale = net_forward(layer.scale_net, pass);
  Vector shift = net_forward(layer.shift_net, pass);
  for (std::size_t i = 0; i < trans.size(); ++i)
    trans[i] = (trans[i] - shift[i]) * std::exp(-clamp_exp_arg(log_scale[i]));
  return detail::merge_by_mask(layer, pass, trans);
}

/// Gradient of <u, coupling(v)> with respect to v.
inline Vector coupling_vjp(const CouplingLayer& layer, const Vector& v, const Vector& u) {
  Vector pass, trans, u_pass, u_trans;
  detail::split_by_mask(layer, v, pass, trans);
  detail::split_by_mask(layer, u, u_pass, u_trans);
  Vector log_scale = net_forward(layer.scale_net, pass);

  Vector v_trans_bar(trans.size());
  Vector log_scale_bar(trans.size());
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const double s = log_scale[i];
    const double es = std::exp(clamp_exp_arg(s));
    const bool inside = s > -kExpClamp && s < kExpClamp;
    v_trans_bar[i] = u_trans[i] * es;
    log_scale_bar[i] = inside ? u_trans[i] * trans[i] * es : 0.0;
  }
  Vector pass_bar = numerics::add(net_vjp(layer.scale_net, pass, log_scale_bar),
                                  net_vjp(layer.shift_net, pass, u_trans));
  pass_bar = numerics::add(pass_bar, u_pass);
  return detail::merge_by_mask(layer, pass_bar, v_trans_bar);
}

}  // namespace gslrec::generative
