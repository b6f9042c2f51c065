#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "glyphgrow/errors.hpp"

namespace glyphgrow {

using Shape = std::vector<int>;

inline std::int64_t numel(const Shape& s) {
    std::int64_t n = 1;
    for (int d : s) n *= d;
    return n;
}

inline std::string shape_str(const Shape& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += "x";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

struct TensorNode {
    Shape shape;
    std::vector<float> val;
    std::vector<float> grad;  // lazily allocated; never allocated when !requires_grad
    bool requires_grad = false;
    bool consumed = false;  // backward already ran through this node
    std::string name;       // set for named parameters
    std::vector<std::shared_ptr<TensorNode>> parents;
    std::function<void(TensorNode&)> backward_fn;

    std::vector<float>& grad_buf() {
        if (grad.empty()) grad.assign(val.size(), 0.0f);
        return grad;
    }
};

// Value handle onto a node of the computation graph.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::shared_ptr<TensorNode> n) : node_(std::move(n)) {}

    static Tensor from_data(Shape shape, std::vector<float> data, bool requires_grad = false) {
        auto n = std::make_shared<TensorNode>();
        if (static_cast<std::int64_t>(data.size()) != numel(shape)) {
            throw ShapeError("data length " + std::to_string(data.size()) + " does not match shape " +
                             shape_str(shape));
        }
        n->shape = std::move(shape);
        n->val = std::move(data);
        n->requires_grad = requires_grad;
        return Tensor(std::move(n));
    }

    static Tensor zeros(Shape shape, bool requires_grad = false) {
        std::vector<float> d(static_cast<std::size_t>(numel(shape)), 0.0f);
        return from_data(std::move(shape), std::move(d), requires_grad);
    }

    static Tensor full(Shape shape, float v, bool requires_grad = false) {
        std::vector<float> d(static_cast<std::size_t>(numel(shape)), v);
        return from_data(std::move(shape), std::move(d), requires_grad);
    }

    static Tensor scalar_of(float v) { return from_data({1}, {v}); }

    bool defined() const { return node_ != nullptr; }
    const std::shared_ptr<TensorNode>& node() const { return node_; }
    const Shape& shape() const { return node_->shape; }
    int rank() const { return static_cast<int>(node_->shape.size()); }
    int dim(int i) const { return node_->shape.at(i); }
    std::int64_t size() const { return numel(node_->shape); }
    std::vector<float>& data() { return node_->val; }
    const std::vector<float>& data() const { return node_->val; }
    const std::vector<float>& grad() const { return node_->grad; }
    bool has_grad() const { return !node_->grad.empty(); }
    bool requires_grad() const { return node_->requires_grad; }

    void set_requires_grad(bool on) {
        node_->requires_grad = on;
        if (!on) node_->grad = {};
    }

    void set_name(std::string name) { node_->name = std::move(name); }
    const std::string& name() const { return node_->name; }

    float scalar() const {
        if (size() != 1) throw ShapeError("scalar() on tensor of shape " + shape_str(shape()));
        return node_->val[0];
    }

  private:
    std::shared_ptr<TensorNode> node_;
};

namespace detail {

inline std::shared_ptr<TensorNode> make_result(Shape shape, std::vector<std::shared_ptr<TensorNode>> parents) {
    auto n = std::make_shared<TensorNode>();
    n->shape = std::move(shape);
    n->val.resize(static_cast<std::size_t>(numel(n->shape)));
    for (const auto& p : parents) {
        if (p->requires_grad) {
            n->requires_grad = true;
            break;
        }
    }
    n->parents = std::move(parents);
    return n;
}

// C[m,n] += A[m,k] * B[k,n]; axpy-style inner loop so it vectorizes
inline void gemm_acc(const float* __restrict__ A, const float* __restrict__ B, float* __restrict__ C,
                     int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const float* __restrict__ a = A + static_cast<std::size_t>(i) * k;
        float* __restrict__ c = C + static_cast<std::size_t>(i) * n;
        for (int p = 0; p < k; ++p) {
            const float av = a[p];
            const float* __restrict__ b = B + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

// dst[cols, rows] = src[rows, cols]^T
inline void transpose_into(const float* __restrict__ src, float* __restrict__ dst, int rows,
                           int cols) {
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            dst[static_cast<std::size_t>(c) * rows + r] = src[static_cast<std::size_t>(r) * cols + c];
        }
    }
}

// C[m,k] += A[m,n] * B[k,n]^T, via an explicit transpose of B so the inner
// loop stays an axpy (a running dot product would serialize on the FP adder)
inline void gemm_nt_acc(const float* A, const float* B, float* C, int m, int n, int k,
                        std::vector<float>& scratch) {
    scratch.resize(static_cast<std::size_t>(n) * k);
    transpose_into(B, scratch.data(), k, n);
    gemm_acc(A, scratch.data(), C, m, n, k);
}

// C[k,n] += A[m,k]^T * B[m,n]
inline void gemm_tn_acc(const float* __restrict__ A, const float* __restrict__ B,
                        float* __restrict__ C, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const float* __restrict__ a = A + static_cast<std::size_t>(i) * k;
        const float* __restrict__ b = B + static_cast<std::size_t>(i) * n;
        for (int p = 0; p < k; ++p) {
            const float av = a[p];
            float* __restrict__ c = C + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

}  // namespace detail

// --- elementwise ----------------------------------------------------------

inline Tensor add(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("add: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
    }
    auto out = detail::make_result(a.shape(), {a.node(), b.node()});
    const auto& av = a.data();
    const auto& bv = b.data();
    for (std::size_t i = 0; i < out->val.size(); ++i) out->val[i] = av[i] + bv[i];
    if (out->requires_grad) {
        auto an = a.node(), bn = b.node();
        out->backward_fn = [an, bn](TensorNode& o) {
            if (an->requires_grad) {
                auto& g = an->grad_buf();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
            }
            if (bn->requires_grad) {
                auto& g = bn->grad_buf();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
            }
        };
    }
    return Tensor(out);
}

// x: [..., n] plus bias [n] broadcast over leading axes.
inline Tensor add_bias(const Tensor& x, const Tensor& b) {
    if (b.rank() != 1 || x.dim(x.rank() - 1) != b.dim(0)) {
        throw ShapeError("add_bias: " + shape_str(x.shape()) + " vs " + shape_str(b.shape()));
    }
    const int n = b.dim(0);
    const std::int64_t rows = x.size() / n;
    auto out = detail::make_result(x.shape(), {x.node(), b.node()});
    const auto& xv = x.data();
    const auto& bv = b.data();
    for (std::int64_t r = 0; r < rows; ++r) {
        for (int j = 0; j < n; ++j) out->val[r * n + j] = xv[r * n + j] + bv[j];
    }
    if (out->requires_grad) {
        auto xn = x.node(), bn = b.node();
        out->backward_fn = [xn, bn, rows, n](TensorNode& o) {
            if (xn->requires_grad) {
                auto& g = xn->grad_buf();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
            }
            if (bn->requires_grad) {
                auto& g = bn->grad_buf();
                for (std::int64_t r = 0; r < rows; ++r) {
                    for (int j = 0; j < n; ++j) g[j] += o.grad[r * n + j];
                }
            }
        };
    }
    return Tensor(out);
}

inline Tensor scale(const Tensor& x, float s) {
    auto out = detail::make_result(x.shape(), {x.node()});
    const auto& xv = x.data();
    for (std::size_t i = 0; i < out->val.size(); ++i) out->val[i] = xv[i] * s;
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn, s](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * o.grad[i];
        };
    }
    return Tensor(out);
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("mul: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
    }
    auto out = detail::make_result(a.shape(), {a.node(), b.node()});
    const auto& av = a.data();
    const auto& bv = b.data();
    for (std::size_t i = 0; i < out->val.size(); ++i) out->val[i] = av[i] * bv[i];
    if (out->requires_grad) {
        auto an = a.node(), bn = b.node();
        out->backward_fn = [an, bn](TensorNode& o) {
            if (an->requires_grad) {
                auto& g = an->grad_buf();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += bn->val[i] * o.grad[i];
            }
            if (bn->requires_grad) {
                auto& g = bn->grad_buf();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += an->val[i] * o.grad[i];
            }
        };
    }
    return Tensor(out);
}

// GELU, tanh approximation (the finite-difference oracle assumes the same form).
inline Tensor gelu(const Tensor& x) {
    constexpr float kC = 0.7978845608028654f;  // sqrt(2/pi)
    constexpr float kA = 0.044715f;
    auto out = detail::make_result(x.shape(), {x.node()});
    const auto& xv = x.data();
    for (std::size_t i = 0; i < out->val.size(); ++i) {
        float v = xv[i];
        float u = kC * (v + kA * v * v * v);
        out->val[i] = 0.5f * v * (1.0f + std::tanh(u));
    }
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (std::size_t i = 0; i < g.size(); ++i) {
                float v = xn->val[i];
                float u = kC * (v + kA * v * v * v);
                float t = std::tanh(u);
                float du = kC * (1.0f + 3.0f * kA * v * v);
                float d = 0.5f * (1.0f + t) + 0.5f * v * (1.0f - t * t) * du;
                g[i] += d * o.grad[i];
            }
        };
    }
    return Tensor(out);
}

// --- matmul and layout ----------------------------------------------------

// A[..., m, k] @ B[k, n], or batched A[..., m, k] @ B[..., k, n] with equal
// leading dims.
inline Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() < 1 || b.rank() < 2) {
        throw ShapeError("matmul: ranks " + shape_str(a.shape()) + " @ " + shape_str(b.shape()));
    }
    const int k = a.dim(a.rank() - 1);
    if (b.rank() == 2) {
        if (b.dim(0) != k) {
            throw ShapeError("matmul: inner dims " + shape_str(a.shape()) + " @ " + shape_str(b.shape()));
        }
        const int n = b.dim(1);
        const int m = static_cast<int>(a.size() / k);
        Shape out_shape = a.shape();
        out_shape.back() = n;
        auto out = detail::make_result(out_shape, {a.node(), b.node()});  // zero-filled
        detail::gemm_acc(a.data().data(), b.data().data(), out->val.data(), m, k, n);
        if (out->requires_grad) {
            auto an = a.node(), bn = b.node();
            out->backward_fn = [an, bn, m, k, n](TensorNode& o) {
                if (an->requires_grad) {
                    std::vector<float> scratch;
                    detail::gemm_nt_acc(o.grad.data(), bn->val.data(), an->grad_buf().data(), m, n, k,
                                        scratch);
                }
                if (bn->requires_grad) {
                    detail::gemm_tn_acc(an->val.data(), o.grad.data(), bn->grad_buf().data(), m, k, n);
                }
            };
        }
        return Tensor(out);
    }
    // batched: leading dims must match exactly
    if (a.rank() != b.rank() || a.rank() < 3) {
        throw ShapeError("matmul: incompatible ranks " + shape_str(a.shape()) + " @ " + shape_str(b.shape()));
    }
    for (int i = 0; i + 2 < a.rank(); ++i) {
        if (a.dim(i) != b.dim(i)) {
            throw ShapeError("matmul: batch dims " + shape_str(a.shape()) + " @ " + shape_str(b.shape()));
        }
    }
    const int m = a.dim(a.rank() - 2);
    if (b.dim(b.rank() - 2) != k) {
        throw ShapeError("matmul: inner dims " + shape_str(a.shape()) + " @ " + shape_str(b.shape()));
    }
    const int n = b.dim(b.rank() - 1);
    std::int64_t batch = 1;
    for (int i = 0; i + 2 < a.rank(); ++i) batch *= a.dim(i);
    Shape out_shape = a.shape();
    out_shape[out_shape.size() - 1] = n;
    out_shape[out_shape.size() - 2] = m;
    auto out = detail::make_result(out_shape, {a.node(), b.node()});  // zero-filled
    const std::size_t sa = static_cast<std::size_t>(m) * k;
    const std::size_t sb = static_cast<std::size_t>(k) * n;
    const std::size_t sc = static_cast<std::size_t>(m) * n;
    for (std::int64_t t = 0; t < batch; ++t) {
        detail::gemm_acc(a.data().data() + t * sa, b.data().data() + t * sb, out->val.data() + t * sc, m,
                         k, n);
    }
    if (out->requires_grad) {
        auto an = a.node(), bn = b.node();
        out->backward_fn = [an, bn, batch, m, k, n, sa, sb, sc](TensorNode& o) {
            if (an->requires_grad) {
                auto& g = an->grad_buf();
                std::vector<float> scratch;
                for (std::int64_t t = 0; t < batch; ++t) {
                    detail::gemm_nt_acc(o.grad.data() + t * sc, bn->val.data() + t * sb, g.data() + t * sa,
                                        m, n, k, scratch);
                }
            }
            if (bn->requires_grad) {
                auto& g = bn->grad_buf();
                for (std::int64_t t = 0; t < batch; ++t) {
                    detail::gemm_tn_acc(an->val.data() + t * sa, o.grad.data() + t * sc, g.data() + t * sb,
                                        m, k, n);
                }
            }
        };
    }
    return Tensor(out);
}

inline Tensor reshape(const Tensor& x, Shape shape) {
    if (numel(shape) != x.size()) {
        throw ShapeError("reshape: " + shape_str(x.shape()) + " -> " + shape_str(shape));
    }
    auto out = detail::make_result(shape, {x.node()});
    out->val = x.data();
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
        };
    }
    return Tensor(out);
}

namespace detail {
inline std::vector<std::int64_t> strides_of(const Shape& s) {
    std::vector<std::int64_t> st(s.size(), 1);
    for (int i = static_cast<int>(s.size()) - 2; i >= 0; --i) st[i] = st[i + 1] * s[i + 1];
    return st;
}

// out[i_perm(0), ..] = in[i0, ..]; returns mapping out_index -> in_index.
// Walks the output index space with incremented per-axis strides instead of
// dividing every element.
inline void permute_map(const Shape& in_shape, const std::vector<int>& axes,
                        std::vector<std::int64_t>& map) {
    const auto in_strides = strides_of(in_shape);
    const int rank = static_cast<int>(axes.size());
    Shape out_shape(rank);
    std::vector<std::int64_t> stride(rank);
    for (int i = 0; i < rank; ++i) {
        out_shape[i] = in_shape[axes[i]];
        stride[i] = in_strides[axes[i]];
    }
    const std::int64_t n = numel(in_shape);
    map.resize(static_cast<std::size_t>(n));
    std::vector<int> idx(rank, 0);
    std::int64_t in_off = 0;
    for (std::int64_t o = 0; o < n; ++o) {
        map[o] = in_off;
        for (int d = rank - 1; d >= 0; --d) {
            in_off += stride[d];
            if (++idx[d] < out_shape[d]) break;
            in_off -= stride[d] * out_shape[d];
            idx[d] = 0;
        }
    }
}
}  // namespace detail

inline Tensor permute(const Tensor& x, const std::vector<int>& axes) {
    if (static_cast<int>(axes.size()) != x.rank()) {
        throw ShapeError("permute: axes size " + std::to_string(axes.size()) + " vs rank " +
                         std::to_string(x.rank()));
    }
    Shape out_shape(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) out_shape[i] = x.dim(axes[i]);
    auto out = detail::make_result(out_shape, {x.node()});
    auto map = std::make_shared<std::vector<std::int64_t>>();
    detail::permute_map(x.shape(), axes, *map);
    const auto& xv = x.data();
    for (std::size_t o = 0; o < out->val.size(); ++o) out->val[o] = xv[(*map)[o]];
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn, map](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (std::size_t i = 0; i < o.grad.size(); ++i) g[(*map)[i]] += o.grad[i];
        };
    }
    return Tensor(out);
}

inline Tensor transpose_last2(const Tensor& x) {
    std::vector<int> axes(x.rank());
    std::iota(axes.begin(), axes.end(), 0);
    std::swap(axes[x.rank() - 1], axes[x.rank() - 2]);
    return permute(x, axes);
}

// --- normalization and attention helpers ----------------------------------

// Per-row softmax over the last axis with max subtraction. Rows sum to 1.
inline Tensor softmax_rows(const Tensor& x) {
    const int n = x.dim(x.rank() - 1);
    if (n < 1) throw ShapeError("softmax_rows: empty last axis");
    const std::int64_t rows = x.size() / n;
    auto out = detail::make_result(x.shape(), {x.node()});
    const auto& xv = x.data();
    for (std::int64_t r = 0; r < rows; ++r) {
        const float* in = xv.data() + r * n;
        float* o = out->val.data() + r * n;
        float mx = in[0];
        for (int j = 1; j < n; ++j) mx = std::max(mx, in[j]);
        if (std::isnan(mx)) throw Error("softmax_rows: NaN input");
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            float e = std::exp(in[j] - mx);
            o[j] = e;
            sum += e;
        }
        const float inv = static_cast<float>(1.0 / sum);
        for (int j = 0; j < n; ++j) o[j] *= inv;
    }
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn, rows, n](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (std::int64_t r = 0; r < rows; ++r) {
                const float* y = o.val.data() + r * n;
                const float* dy = o.grad.data() + r * n;
                double dot = 0.0;
                for (int j = 0; j < n; ++j) dot += static_cast<double>(dy[j]) * y[j];
                for (int j = 0; j < n; ++j) {
                    g[r * n + j] += (dy[j] - static_cast<float>(dot)) * y[j];
                }
            }
        };
    }
    return Tensor(out);
}

// Layer normalization over the last axis with gain and bias.
inline Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                         float eps = 1e-5f) {
    const int n = x.dim(x.rank() - 1);
    if (gain.rank() != 1 || gain.dim(0) != n || bias.rank() != 1 || bias.dim(0) != n) {
        throw ShapeError("layer_norm: gain/bias must be [" + std::to_string(n) + "]");
    }
    const std::int64_t rows = x.size() / n;
    auto out = detail::make_result(x.shape(), {x.node(), gain.node(), bias.node()});
    // cache per-row mean and inverse stddev for the backward pass
    auto stats = std::make_shared<std::vector<float>>(static_cast<std::size_t>(rows) * 2);
    const auto& xv = x.data();
    const auto& gv = gain.data();
    const auto& bv = bias.data();
    for (std::int64_t r = 0; r < rows; ++r) {
        const float* in = xv.data() + r * n;
        float* o = out->val.data() + r * n;
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += in[j];
        mean /= n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            double d = in[j] - mean;
            var += d * d;
        }
        var /= n;
        const float inv_std = static_cast<float>(1.0 / std::sqrt(var + eps));
        const float mu = static_cast<float>(mean);
        (*stats)[r * 2] = mu;
        (*stats)[r * 2 + 1] = inv_std;
        for (int j = 0; j < n; ++j) {
            o[j] = (in[j] - mu) * inv_std * gv[j] + bv[j];
        }
    }
    if (out->requires_grad) {
        auto xn = x.node(), gn = gain.node(), bn = bias.node();
        out->backward_fn = [xn, gn, bn, stats, rows, n](TensorNode& o) {
            for (std::int64_t r = 0; r < rows; ++r) {
                const float mu = (*stats)[r * 2];
                const float inv_std = (*stats)[r * 2 + 1];
                const float* in = xn->val.data() + r * n;
                const float* dy = o.grad.data() + r * n;
                if (gn->requires_grad) {
                    auto& gg = gn->grad_buf();
                    for (int j = 0; j < n; ++j) gg[j] += dy[j] * (in[j] - mu) * inv_std;
                }
                if (bn->requires_grad) {
                    auto& gb = bn->grad_buf();
                    for (int j = 0; j < n; ++j) gb[j] += dy[j];
                }
                if (xn->requires_grad) {
                    auto& gx = xn->grad_buf();
                    // dL/dx = inv_std * (a - mean(a) - xhat * mean(a*xhat)), a = dy*gain
                    double mean_a = 0.0, mean_ax = 0.0;
                    for (int j = 0; j < n; ++j) {
                        float xhat = (in[j] - mu) * inv_std;
                        float a = dy[j] * gn->val[j];
                        mean_a += a;
                        mean_ax += static_cast<double>(a) * xhat;
                    }
                    mean_a /= n;
                    mean_ax /= n;
                    for (int j = 0; j < n; ++j) {
                        float xhat = (in[j] - mu) * inv_std;
                        float a = dy[j] * gn->val[j];
                        gx[r * n + j] += inv_std * (a - static_cast<float>(mean_a) -
                                                    xhat * static_cast<float>(mean_ax));
                    }
                }
            }
        };
    }
    return Tensor(out);
}

// Adds -1e9 to entries above the diagonal of the trailing T x T axes.
inline Tensor causal_mask(const Tensor& x) {
    const int t = x.dim(x.rank() - 1);
    if (x.rank() < 2 || x.dim(x.rank() - 2) != t) {
        throw ShapeError("causal_mask needs trailing TxT axes, got " + shape_str(x.shape()));
    }
    const std::int64_t mats = x.size() / (static_cast<std::int64_t>(t) * t);
    auto out = detail::make_result(x.shape(), {x.node()});
    const auto& xv = x.data();
    out->val = xv;
    for (std::int64_t b = 0; b < mats; ++b) {
        float* m = out->val.data() + b * t * t;
        for (int i = 0; i < t; ++i) {
            for (int j = i + 1; j < t; ++j) m[i * t + j] -= 1e9f;
        }
    }
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
        };
    }
    return Tensor(out);
}

// --- embedding lookup, concat, reductions ----------------------------------

// out[i, :] = table[ids[i], :]; output shape = ids_shape + [width].
inline Tensor lookup_rows(const Tensor& table, const std::vector<int>& ids, Shape ids_shape) {
    if (table.rank() != 2) throw ShapeError("lookup_rows: table must be 2-D");
    if (static_cast<std::int64_t>(ids.size()) != numel(ids_shape)) {
        throw ShapeError("lookup_rows: ids length does not match shape");
    }
    const int v = table.dim(0);
    const int w = table.dim(1);
    for (int id : ids) {
        if (id < 0 || id >= v) {
            throw Error("token id " + std::to_string(id) + " out of range [0," + std::to_string(v) + ")");
        }
    }
    Shape out_shape = ids_shape;
    out_shape.push_back(w);
    auto out = detail::make_result(out_shape, {table.node()});
    const auto& tv = table.data();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::memcpy(out->val.data() + i * w, tv.data() + static_cast<std::size_t>(ids[i]) * w,
                    w * sizeof(float));
    }
    if (out->requires_grad) {
        auto tn = table.node();
        auto ids_copy = std::make_shared<std::vector<int>>(ids);
        out->backward_fn = [tn, ids_copy, w](TensorNode& o) {
            auto& g = tn->grad_buf();
            for (std::size_t i = 0; i < ids_copy->size(); ++i) {
                float* dst = g.data() + static_cast<std::size_t>((*ids_copy)[i]) * w;
                const float* src = o.grad.data() + i * w;
                for (int j = 0; j < w; ++j) dst[j] += src[j];
            }
        };
    }
    return Tensor(out);
}

// Concatenation along the last axis.
inline Tensor concat_last(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw ShapeError("concat_last: no inputs");
    Shape lead = parts[0].shape();
    lead.pop_back();
    int total = 0;
    std::vector<std::shared_ptr<TensorNode>> parents;
    for (const auto& p : parts) {
        Shape pl = p.shape();
        int last = pl.back();
        pl.pop_back();
        if (pl != lead) throw ShapeError("concat_last: leading dims differ");
        total += last;
        parents.push_back(p.node());
    }
    Shape out_shape = lead;
    out_shape.push_back(total);
    auto out = detail::make_result(out_shape, parents);
    const std::int64_t rows = numel(lead);
    int off = 0;
    for (const auto& p : parts) {
        const int n = p.dim(p.rank() - 1);
        const auto& pv = p.data();
        for (std::int64_t r = 0; r < rows; ++r) {
            std::memcpy(out->val.data() + r * total + off, pv.data() + r * n, n * sizeof(float));
        }
        off += n;
    }
    if (out->requires_grad) {
        auto widths = std::make_shared<std::vector<int>>();
        for (const auto& p : parts) widths->push_back(p.dim(p.rank() - 1));
        auto parent_nodes = std::make_shared<std::vector<std::shared_ptr<TensorNode>>>(parents);
        out->backward_fn = [parent_nodes, widths, rows, total](TensorNode& o) {
            int off = 0;
            for (std::size_t k = 0; k < parent_nodes->size(); ++k) {
                const int n = (*widths)[k];
                auto& pn = (*parent_nodes)[k];
                if (pn->requires_grad) {
                    auto& g = pn->grad_buf();
                    for (std::int64_t r = 0; r < rows; ++r) {
                        const float* src = o.grad.data() + r * total + off;
                        for (int j = 0; j < n; ++j) g[r * n + j] += src[j];
                    }
                }
                off += n;
            }
        };
    }
    return Tensor(out);
}

inline Tensor sum_all(const Tensor& x) {
    auto out = detail::make_result({1}, {x.node()});
    double acc = 0.0;
    for (float v : x.data()) acc += v;
    out->val[0] = static_cast<float>(acc);
    if (out->requires_grad) {
        auto xn = x.node();
        out->backward_fn = [xn](TensorNode& o) {
            auto& g = xn->grad_buf();
            for (auto& v : g) v += o.grad[0];
        };
    }
    return Tensor(out);
}

// Mean negative log-softmax over the non-ignored rows, natural log.
// logits: [N, V]; targets: N entries in [0, V) or ignore_index.
inline Tensor cross_entropy_mean(const Tensor& logits, const std::vector<int>& targets,
                                 int ignore_index) {
    if (logits.rank() != 2) throw ShapeError("cross_entropy_mean: logits must be [N, V]");
    const int n_rows = logits.dim(0);
    const int v = logits.dim(1);
    if (static_cast<int>(targets.size()) != n_rows) {
        throw ShapeError("cross_entropy_mean: targets length " + std::to_string(targets.size()) +
                         " vs rows " + std::to_string(n_rows));
    }
    int kept = 0;
    for (int t : targets) {
        if (t == ignore_index) continue;
        if (t < 0 || t >= v) throw Error("target " + std::to_string(t) + " out of range");
        ++kept;
    }
    if (kept == 0) throw UndefinedLossError("cross_entropy_mean: every target is ignored");
    auto out = detail::make_result({1}, {logits.node()});
    const auto& lv = logits.data();
    double total = 0.0;
    for (int r = 0; r < n_rows; ++r) {
        if (targets[r] == ignore_index) continue;
        const float* row = lv.data() + static_cast<std::size_t>(r) * v;
        float mx = row[0];
        for (int j = 1; j < v; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (int j = 0; j < v; ++j) sum += std::exp(static_cast<double>(row[j]) - mx);
        total += std::log(sum) + mx - row[targets[r]];
    }
    out->val[0] = static_cast<float>(total / kept);
    if (out->requires_grad) {
        auto ln = logits.node();
        auto tgt = std::make_shared<std::vector<int>>(targets);
        out->backward_fn = [ln, tgt, n_rows, v, kept, ignore_index](TensorNode& o) {
            auto& g = ln->grad_buf();
            const float go = o.grad[0] / kept;
            for (int r = 0; r < n_rows; ++r) {
                if ((*tgt)[r] == ignore_index) continue;
                const float* row = ln->val.data() + static_cast<std::size_t>(r) * v;
                float* gr = g.data() + static_cast<std::size_t>(r) * v;
                float mx = row[0];
                for (int j = 1; j < v; ++j) mx = std::max(mx, row[j]);
                double sum = 0.0;
                for (int j = 0; j < v; ++j) sum += std::exp(static_cast<double>(row[j]) - mx);
                for (int j = 0; j < v; ++j) {
                    float p = static_cast<float>(std::exp(static_cast<double>(row[j]) - mx) / sum);
                    gr[j] += go * (p - (j == (*tgt)[r] ? 1.0f : 0.0f));
                }
            }
        };
    }
    return Tensor(out);
}

// --- reverse pass -----------------------------------------------------------

// Reverse-topological gradient accumulation from a scalar loss. Grads land
// only on requires_grad tensors; frozen leaves never allocate a buffer.
inline void backward(const Tensor& loss) {
    if (!loss.defined()) throw Error("backward: undefined tensor");
    auto root = loss.node();
    if (numel(root->shape) != 1) {
        throw ShapeError("backward: loss must be scalar, got " + shape_str(root->shape));
    }
    if (root->consumed) {
        throw StaleGraphError("backward: graph already consumed; rebuild the forward pass");
    }
    root->consumed = true;
    if (!root->requires_grad) return;  // nothing trainable feeds this loss

    // iterative post-order DFS
    std::vector<TensorNode*> order;
    std::unordered_set<TensorNode*> seen;
    std::vector<std::pair<TensorNode*, std::size_t>> stack;
    stack.emplace_back(root.get(), 0);
    seen.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            TensorNode* p = node->parents[next++].get();
            if (p->requires_grad && seen.insert(p).second) {
                stack.emplace_back(p, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    root->grad_buf()[0] += 1.0f;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        TensorNode* node = *it;
        if (node->backward_fn && !node->grad.empty()) {
            node->backward_fn(*node);
            node->consumed = true;
        }
    }
}

}  // namespace glyphgrow
