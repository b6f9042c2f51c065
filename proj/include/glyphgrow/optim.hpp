#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "glyphgrow/errors.hpp"
#include "glyphgrow/tensor.hpp"

namespace glyphgrow {

// Named parameters plus their trainable mask. The mask is carried by each
// tensor's requires_grad flag, so frozen entries never allocate grad.
class ParamSet {
  public:
    void add(const std::string& name, Tensor t, bool trainable) {
        t.set_name(name);
        t.set_requires_grad(trainable);
        auto [it, inserted] = params_.emplace(name, std::move(t));
        if (!inserted) throw Error("duplicate parameter " + name);
    }

    bool contains(const std::string& name) const { return params_.count(name) != 0; }

    Tensor& at(const std::string& name) {
        auto it = params_.find(name);
        if (it == params_.end()) throw Error("unknown parameter " + name);
        return it->second;
    }
    const Tensor& at(const std::string& name) const {
        auto it = params_.find(name);
        if (it == params_.end()) throw Error("unknown parameter " + name);
        return it->second;
    }

    void set_trainable(const std::string& name, bool on) { at(name).set_requires_grad(on); }
    bool trainable(const std::string& name) const { return at(name).requires_grad(); }

    std::int64_t trainable_count() const {
        std::int64_t n = 0;
        for (const auto& [name, t] : params_) {
            if (t.requires_grad()) n += t.size();
        }
        return n;
    }

    auto begin() { return params_.begin(); }
    auto end() { return params_.end(); }
    auto begin() const { return params_.begin(); }
    auto end() const { return params_.end(); }
    std::size_t size() const { return params_.size(); }

  private:
    std::map<std::string, Tensor> params_;  // ordered for deterministic iteration
};

inline void clear_grads(ParamSet& params) {
    for (auto& [name, t] : params) t.node()->grad = {};
}

struct OptimizerState {
    enum class Algo { SGD, AdamW };

    Algo algo = Algo::AdamW;
    float lr = 3e-4f;
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps = 1e-8f;
    float weight_decay = 0.01f;
    std::int64_t step_count = 0;

    // first/second moments, trainable parameters only
    std::map<std::string, std::vector<float>> m;
    std::map<std::string, std::vector<float>> v;
};

// One optimizer update. Trainable parameters must carry grads; masked-out
// parameters are untouched byte-for-byte. Grads are cleared on the way out.
inline void optimizer_step(ParamSet& params, OptimizerState& state) {
    ++state.step_count;
    for (auto& [name, t] : params) {
        if (!t.requires_grad()) {
            state.m.erase(name);
            state.v.erase(name);
            continue;
        }
        if (!t.has_grad()) throw Error("optimizer_step: missing grad on trainable parameter " + name);
        auto& w = t.data();
        auto& g = t.node()->grad;
        if (state.algo == OptimizerState::Algo::SGD) {
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= state.lr * g[i];
        } else {
            auto& m = state.m[name];
            auto& v = state.v[name];
            if (m.size() != w.size()) m.assign(w.size(), 0.0f);
            if (v.size() != w.size()) v.assign(w.size(), 0.0f);
            const float b1 = state.beta1, b2 = state.beta2;
            const float bc1 = 1.0f - std::pow(b1, static_cast<float>(state.step_count));
            const float bc2 = 1.0f - std::pow(b2, static_cast<float>(state.step_count));
            for (std::size_t i = 0; i < w.size(); ++i) {
                m[i] = b1 * m[i] + (1.0f - b1) * g[i];
                v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
                const float mhat = m[i] / bc1;
                const float vhat = v[i] / bc2;
                w[i] -= state.lr * (mhat / (std::sqrt(vhat) + state.eps) + state.weight_decay * w[i]);
            }
        }
        t.node()->grad = {};
    }
}

struct FdReport {
    float max_rel_err = 0.0f;
    std::string worst_param;
    std::size_t worst_index = 0;
    float analytic = 0.0f;
    float numeric = 0.0f;
    std::int64_t checked = 0;
};

// Central-difference gradient check against the analytic backward pass.
// Returns the max of |analytic - numeric| / max(|analytic|, |numeric|, floor)
// over the sampled elements; the floor keeps near-zero gradients from
// amplifying f32 forward noise into meaningless ratios.
// max_per_param = 0 checks every element.
inline FdReport finite_diff_check(const std::function<Tensor()>& f, ParamSet& params, float eps,
                                  int max_per_param = 0, float denom_floor = 1.0f) {
    clear_grads(params);
    Tensor loss = f();
    backward(loss);

    std::map<std::string, std::vector<float>> analytic;
    for (auto& [name, t] : params) {
        if (!t.requires_grad()) continue;
        if (!t.has_grad()) throw Error("finite_diff_check: no grad on " + name);
        analytic[name] = t.grad();
    }

    FdReport rep;
    for (auto& [name, t] : params) {
        if (!t.requires_grad()) continue;
        auto& w = t.data();
        const std::size_t n = w.size();
        std::size_t stride = 1;
        if (max_per_param > 0 && n > static_cast<std::size_t>(max_per_param)) {
            stride = n / max_per_param;
        }
        for (std::size_t i = 0; i < n; i += stride) {
            const float orig = w[i];
            const float wp = orig + eps;
            const float wm = orig - eps;
            w[i] = wp;
            const double lp = static_cast<double>(f().scalar());
            w[i] = wm;
            const double lm = static_cast<double>(f().scalar());
            w[i] = orig;
            const double num = (lp - lm) / (static_cast<double>(wp) - static_cast<double>(wm));
            const double ana = analytic[name][i];
            const double denom = std::max({std::abs(ana), std::abs(num), static_cast<double>(denom_floor)});
            const float rel = static_cast<float>(std::abs(ana - num) / denom);
            ++rep.checked;
            if (rel > rep.max_rel_err) {
                rep.max_rel_err = rel;
                rep.worst_param = name;
                rep.worst_index = i;
                rep.analytic = static_cast<float>(ana);
                rep.numeric = static_cast<float>(num);
            }
        }
    }
    clear_grads(params);
    return rep;
}

}  // namespace glyphgrow
