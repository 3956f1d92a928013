// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qcap/error.hpp"

namespace qcap {
namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kLeakyRelu: return z > 0.0 ? z : kLeakyReluSlope * z;
    case Activation::kTanh: return std::tanh(z);
    case Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

// Derivative expressed through the pre-activation z and activation value a.
double activate_deriv(Activation act, double z, double a) {
  switch (act) {
    case Activation::kRelu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::kLeakyRelu: return z > 0.0 ? 1.0 : kLeakyReluSlope;
    case Activation::kTanh: return 1.0 - a * a;
    case Activation::kSigmoid: return a * (1.0 - a);
  }
  return 1.0;
}

void softmax_inplace(std::span<double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double& x : v) {
    x = std::exp(x - m);
    s += x;
  }
  for (double& x : v) x /= s;
}

[[noreturn]] void parse_fail(std::string_view text, std::size_t pos, const std::string& what) {
  throw ValidationError("invalid topology '" + std::string(text) + "' at column " +
                        std::to_string(pos + 1) + ": " + what);
}

std::size_t layer_params(int in, int out, bool bias) {
  return static_cast<std::size_t>(in) * static_cast<std::size_t>(out) +
         (bias ? static_cast<std::size_t>(out) : 0);
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ValidationError("unknown activation '" + std::string(name) +
                        "' (expected relu, leaky_relu, tanh or sigmoid)");
}

std::size_t MlpTopology::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    n += layer_params(layer_sizes[l], layer_sizes[l + 1], use_bias);
  return n;
}

void MlpTopology::validate() const {
  if (layer_sizes.size() < 2) throw ValidationError("topology needs input and output layers");
  for (int s : layer_sizes)
    if (s < 1) throw ValidationError("topology layer sizes must be >= 1");
  if (s_out() < 2) throw ValidationError("topology needs at least two output classes");
}

std::string MlpTopology::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(layer_sizes[i]);
  }
  if (use_bias) s += ":bias";
  s += ':';
  s += qcap::to_string(activation);
  return s;
}

MlpTopology MlpTopology::parse(std::string_view text) {
  MlpTopology t;
  std::size_t pos = 0;
  while (true) {
    int value = 0;
    const auto* begin = text.data() + pos;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) parse_fail(text, pos, "expected a layer size");
    if (value < 1) parse_fail(text, pos, "layer sizes must be >= 1");
    t.layer_sizes.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    if (pos < text.size() && text[pos] == '-') {
      ++pos;
      continue;
    }
    break;
  }
  if (t.layer_sizes.size() < 2) parse_fail(text, pos, "need at least input and output sizes");
  bool saw_bias = false, saw_act = false;
  while (pos < text.size()) {
    if (text[pos] != ':') parse_fail(text, pos, "expected '-' or ':'");
    const std::size_t start = ++pos;
    const std::size_t stop = std::min(text.find(':', start), text.size());
    const std::string_view option = text.substr(start, stop - start);
    if (option == "bias") {
      if (saw_bias) parse_fail(text, start, "duplicate 'bias'");
      saw_bias = true;
      t.use_bias = true;
    } else if (option == "nobias") {
      if (saw_bias) parse_fail(text, start, "duplicate bias option");
      saw_bias = true;
    } else {
      if (saw_act) parse_fail(text, start, "duplicate activation");
      try {
        t.activation = parse_activation(option);
      } catch (const ValidationError&) {
        parse_fail(text, start, "unknown option '" + std::string(option) + "'");
      }
      saw_act = true;
    }
    pos = stop;
  }
  if (t.s_out() < 2) parse_fail(text, text.size(), "output size must be >= 2");
  return t;
}

std::vector<MlpTopology> enumerate_topologies(std::size_t d, int s_in, int s_out,
                                              int max_layers, int max_width,
                                              Activation activation) {
  std::vector<MlpTopology> out;
  if (d == 0 || s_in < 1 || s_out < 1) return out;
  for (bool bias : {false, true}) {
    for (int hidden = 1; hidden <= max_layers; ++hidden) {
      std::vector<int> sizes{s_in};
      // Recursively choose all hidden widths but the last, then solve for it:
      // the last width w contributes prev*w + w*s_out (+ w + s_out with bias).
      auto recurse = [&](auto&& self, std::size_t used) -> void {
        const int prev = sizes.back();
        if (static_cast<int>(sizes.size()) == hidden) {
          const std::size_t per_unit = static_cast<std::size_t>(prev + s_out) + (bias ? 1 : 0);
          const std::size_t fixed = used + (bias ? static_cast<std::size_t>(s_out) : 0);
          if (fixed >= d || (d - fixed) % per_unit != 0) return;
          const std::size_t w = (d - fixed) / per_unit;
          if (w < 1 || w > static_cast<std::size_t>(max_width)) return;
          MlpTopology t;
          t.layer_sizes = sizes;
          t.layer_sizes.push_back(static_cast<int>(w));
          t.layer_sizes.push_back(s_out);
          t.use_bias = bias;
          t.activation = activation;
          out.push_back(std::move(t));
          return;
        }
        for (int w = 1; w <= max_width; ++w) {
          const std::size_t cost = layer_params(prev, w, bias);
          if (used + cost >= d) break;
          sizes.push_back(w);
          self(self, used + cost);
          sizes.pop_back();
        }
      };
      recurse(recurse, 0);
    }
  }
  std::sort(out.begin(), out.end(), [](const MlpTopology& a, const MlpTopology& b) {
    if (a.layer_sizes != b.layer_sizes) return a.layer_sizes < b.layer_sizes;
    return a.use_bias < b.use_bias;
  });
  return out;
}

Mlp::Mlp(MlpTopology topology) : topology_(std::move(topology)) {
  topology_.validate();
  param_count_ = topology_.param_count();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < topology_.layer_sizes.size(); ++l) {
    offsets_.push_back(off);
    off += layer_params(topology_.layer_sizes[l], topology_.layer_sizes[l + 1],
                        topology_.use_bias);
  }
}

Mlp::Workspace Mlp::make_workspace() const {
  Workspace ws;
  const auto& sz = topology_.layer_sizes;
  ws.post.resize(sz.size());
  ws.pre.resize(sz.size());
  for (std::size_t l = 0; l < sz.size(); ++l) {
    ws.post[l].resize(static_cast<std::size_t>(sz[l]));
    ws.pre[l].resize(static_cast<std::size_t>(sz[l]));
  }
  const int widest = *std::max_element(sz.begin(), sz.end());
  ws.delta.resize(static_cast<std::size_t>(widest));
  ws.delta_prev.resize(static_cast<std::size_t>(widest));
  return ws;
}

void Mlp::forward(std::span<const double> theta, std::span<const double> x,
                  Workspace& ws) const {
  const auto& sz = topology_.layer_sizes;
  const std::size_t layers = sz.size() - 1;
  std::copy(x.begin(), x.end(), ws.post[0].begin());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = static_cast<std::size_t>(sz[l]);
    const std::size_t out = static_cast<std::size_t>(sz[l + 1]);
    const double* w = theta.data() + offsets_[l];
    const double* b = topology_.use_bias ? w + in * out : nullptr;
    const auto& a = ws.post[l];
    auto& z = ws.pre[l + 1];
    for (std::size_t o = 0; o < out; ++o) {
      const double* wo = w + o * in;
      double s = b ? b[o] : 0.0;
      for (std::size_t i = 0; i < in; ++i) s += wo[i] * a[i];
      z[o] = s;
    }
    auto& next = ws.post[l + 1];
    if (l + 1 < layers) {
      for (std::size_t o = 0; o < out; ++o) next[o] = activate(topology_.activation, z[o]);
    } else {
      std::copy(z.begin(), z.end(), next.begin());
      softmax_inplace(next);
    }
  }
}

void Mlp::backward(std::span<const double> theta, int y, Workspace& ws, double scale,
                   std::span<double> grad) const {
  const auto& sz = topology_.layer_sizes;
  const std::size_t layers = sz.size() - 1;
  // d log p_y / d logits = onehot(y) - p
  const auto& p = ws.post[layers];
  for (std::size_t c = 0; c < p.size(); ++c)
    ws.delta[c] = (static_cast<int>(c) == y ? 1.0 : 0.0) - p[c];
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = static_cast<std::size_t>(sz[l]);
    const std::size_t out = static_cast<std::size_t>(sz[l + 1]);
    const double* w = theta.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    const auto& a = ws.post[l];
    for (std::size_t o = 0; o < out; ++o) {
      const double d = scale * ws.delta[o];
      if (d == 0.0) continue;
      double* go = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) go[i] += d * a[i];
    }
    if (topology_.use_bias) {
      double* gb = gw + in * out;
      for (std::size_t o = 0; o < out; ++o) gb[o] += scale * ws.delta[o];
    }
    if (l == 0) break;
    std::fill(ws.delta_prev.begin(), ws.delta_prev.begin() + static_cast<std::ptrdiff_t>(in), 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = ws.delta[o];
      if (d == 0.0) continue;
      const double* wo = w + o * in;
      for (std::size_t i = 0; i < in; ++i) ws.delta_prev[i] += wo[i] * d;
    }
    for (std::size_t i = 0; i < in; ++i)
      ws.delta[i] = ws.delta_prev[i] * activate_deriv(topology_.activation, ws.pre[l][i], a[i]);
  }
}

std::vector<double> Mlp::probabilities(std::span<const double> theta,
                                       std::span<const double> x) const {
  check_theta(theta);
  check_input(x);
  Workspace ws = make_workspace();
  forward(theta, x, ws);
  return ws.post.back();
}

GradLogProb Mlp::grad_log_prob(std::span<const double> theta, std::span<const double> x,
                               int y) const {
  check_theta(theta);
  check_input(x);
  if (y < 0 || y >= topology_.s_out()) throw ValidationError("mlp: class index out of range");
  Workspace ws = make_workspace();
  forward(theta, x, ws);
  GradLogProb out;
  out.prob = ws.post.back()[static_cast<std::size_t>(y)];
  out.grad.assign(param_count_, 0.0);
  backward(theta, y, ws, 1.0, out.grad);
  return out;
}

LossGradient Mlp::cross_entropy(std::span<const double> theta, const Dataset& ds) const {
  check_theta(theta);
  if (ds.n_features != input_dim()) throw ValidationError("dataset feature count mismatch");
  if (ds.size() == 0) throw ValidationError("cross_entropy: empty dataset");
  Workspace ws = make_workspace();
  LossGradient out;
  out.grad.assign(param_count_, 0.0);
  const double inv_n = 1.0 / static_cast<double>(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int y = ds.labels[i];
    forward(theta, ds.row(i), ws);
    const double p = ws.post.back()[static_cast<std::size_t>(y)];
    if (p < kProbFloor) ++out.clamped;
    out.loss -= std::log(std::max(p, kProbFloor));
    backward(theta, y, ws, -inv_n, out.grad);
  }
  out.loss *= inv_n;
  return out;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> x) {
  return Mlp(model.topology).probabilities(model.theta, x);
}

GradLogProb grad_log_prob(const MlpModel& model, std::span<const double> x, int y) {
  return Mlp(model.topology).grad_log_prob(model.theta, x, y);
}

}  // namespace qcap
