#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "glyphgrow/embedding.hpp"
#include "glyphgrow/errors.hpp"
#include "glyphgrow/optim.hpp"
#include "glyphgrow/rng.hpp"
#include "glyphgrow/tensor.hpp"

namespace glyphgrow {

inline constexpr float kInitStd = 0.02f;

struct ModelConfig {
    int vocab_size = 0;
    int d_model = 0;
    int n_head = 0;
    int n_layer = 0;
    int d_ff = 0;  // 0 means 4 * d_model
    int context_len = 0;
    std::uint64_t emb_fingerprint = 0;

    int ff_width() const { return d_ff > 0 ? d_ff : 4 * d_model; }
    int head_width() const { return d_model / n_head; }

    void validate() const {
        if (vocab_size < 1) throw Error("config: vocab_size must be >= 1");
        if (d_model < 8) throw Error("config: d_model must be >= 8");
        if (n_head < 1 || d_model % n_head != 0) {
            throw Error("config: d_model (" + std::to_string(d_model) +
                        ") must be divisible by n_head (" + std::to_string(n_head) + ")");
        }
        if (n_layer < 1) throw Error("config: n_layer must be >= 1");
        if (context_len < 1) throw Error("config: context_len must be >= 1");
    }
};

// Low-rank additive update on one frozen weight: x @ a @ b * scaling.
// a is [in, r] (normal init), b is [r, out] (zero init so the attach is
// a no-op until trained).
struct LoraAdapter {
    Tensor a;
    Tensor b;
    float scaling = 1.0f;
};

struct TransformerBlock {
    Tensor ln1_g, ln1_b;
    Tensor wq, wk, wv, wo;    // [d_model, d_model]
    Tensor ln2_g, ln2_b;
    Tensor w_up;              // [d_model, d_ff]
    Tensor w_down;            // [d_ff, d_model]
    bool frozen = false;
    std::map<std::string, LoraAdapter> adapters;  // keyed by target name, e.g. "attn.wq"
};

// Decoder-only transformer on the frozen substrate. The embedding tensor is
// never trainable; the output head starts as its transpose and stays
// trainable so merged experts remain comparable (same head shape).
struct TransformerModel {
    ModelConfig config;
    Tensor embedding;   // [V, d_model], frozen
    Tensor pos_emb;     // [context_len, d_model]
    std::vector<TransformerBlock> blocks;
    Tensor final_ln_g, final_ln_b;
    Tensor output_proj;  // [d_model, V]
    float lora_alpha = 0.0f;
    int lora_rank = 0;

    bool has_lora() const {
        for (const auto& b : blocks) {
            if (!b.adapters.empty()) return true;
        }
        return false;
    }
};

namespace detail {

inline Tensor randn(Shape shape, Rng& rng, float stddev, bool trainable) {
    std::vector<float> d(static_cast<std::size_t>(numel(shape)));
    for (auto& v : d) v = rng.next_normal(0.0f, stddev);
    return Tensor::from_data(std::move(shape), std::move(d), trainable);
}

inline const char* kLinearTargets[6] = {"attn.wq", "attn.wk", "attn.wv",
                                        "attn.wo", "mlp.w_up", "mlp.w_down"};

}  // namespace detail

inline TransformerBlock init_block(const ModelConfig& cfg, Rng& rng, bool zero_residual = false,
                                   float stddev = kInitStd) {
    const int d = cfg.d_model;
    const int ff = cfg.ff_width();
    TransformerBlock b;
    b.ln1_g = Tensor::full({d}, 1.0f, true);
    b.ln1_b = Tensor::zeros({d}, true);
    b.wq = detail::randn({d, d}, rng, stddev, true);
    b.wk = detail::randn({d, d}, rng, stddev, true);
    b.wv = detail::randn({d, d}, rng, stddev, true);
    b.wo = detail::randn({d, d}, rng, stddev, true);
    b.ln2_g = Tensor::full({d}, 1.0f, true);
    b.ln2_b = Tensor::zeros({d}, true);
    b.w_up = detail::randn({d, ff}, rng, stddev, true);
    b.w_down = detail::randn({ff, d}, rng, stddev, true);
    if (zero_residual) {
        // residual writes start at zero: stacking preserves the function
        std::fill(b.wo.data().begin(), b.wo.data().end(), 0.0f);
        std::fill(b.w_down.data().begin(), b.w_down.data().end(), 0.0f);
    }
    return b;
}

// Fresh model with n_layer blocks, everything except the substrate trainable.
inline TransformerModel init_model(const ModelConfig& config, const EmbeddingMatrix& emb,
                                   std::uint64_t seed) {
    config.validate();
    if (emb.vocab_size != config.vocab_size || emb.width != config.d_model) {
        throw SubstrateError("init_model: embedding is " + std::to_string(emb.vocab_size) + "x" +
                             std::to_string(emb.width) + ", config wants " +
                             std::to_string(config.vocab_size) + "x" + std::to_string(config.d_model));
    }
    if (emb.fingerprint != config.emb_fingerprint) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%016llx vs %016llx",
                      static_cast<unsigned long long>(emb.fingerprint),
                      static_cast<unsigned long long>(config.emb_fingerprint));
        throw SubstrateError(std::string("init_model: embedding fingerprint mismatch: ") + buf);
    }
    TransformerModel m;
    m.config = config;
    m.embedding = Tensor::from_data({emb.vocab_size, emb.width}, emb.rows, false);
    Rng rng = Rng::derive(seed, "init");
    m.pos_emb = detail::randn({config.context_len, config.d_model}, rng, kInitStd, true);
    for (int i = 0; i < config.n_layer; ++i) {
        m.blocks.push_back(init_block(config, rng));
    }
    m.final_ln_g = Tensor::full({config.d_model}, 1.0f, true);
    m.final_ln_b = Tensor::zeros({config.d_model}, true);
    // head = embedding transpose
    std::vector<float> head(static_cast<std::size_t>(config.d_model) * config.vocab_size);
    for (int v = 0; v < config.vocab_size; ++v) {
        for (int d = 0; d < config.d_model; ++d) {
            head[static_cast<std::size_t>(d) * config.vocab_size + v] = emb.row(v)[d];
        }
    }
    m.output_proj = Tensor::from_data({config.d_model, config.vocab_size}, std::move(head), true);
    return m;
}

// Canonical parameter walk; defines checkpoint record order. The frozen
// embedding is deliberately not part of the set (substrate travels by
// fingerprint, not by value).
template <typename F>
inline void for_each_param(TransformerModel& m, F&& fn) {
    fn("pos_emb", m.pos_emb);
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        auto& b = m.blocks[i];
        const std::string p = "block" + std::to_string(i) + ".";
        fn(p + "ln1.g", b.ln1_g);
        fn(p + "ln1.b", b.ln1_b);
        fn(p + "attn.wq", b.wq);
        fn(p + "attn.wk", b.wk);
        fn(p + "attn.wv", b.wv);
        fn(p + "attn.wo", b.wo);
        fn(p + "ln2.g", b.ln2_g);
        fn(p + "ln2.b", b.ln2_b);
        fn(p + "mlp.w_up", b.w_up);
        fn(p + "mlp.w_down", b.w_down);
        for (auto& [target, ad] : b.adapters) {
            fn(p + target + ".lora_a", ad.a);
            fn(p + target + ".lora_b", ad.b);
        }
    }
    fn("final_ln.g", m.final_ln_g);
    fn("final_ln.b", m.final_ln_b);
    fn("head.w", m.output_proj);
}

inline ParamSet params_of(TransformerModel& m) {
    ParamSet ps;
    for_each_param(m, [&](const std::string& name, Tensor& t) { ps.add(name, t, t.requires_grad()); });
    return ps;
}

inline std::int64_t count_trainable(TransformerModel& m) {
    std::int64_t n = 0;
    for_each_param(m, [&](const std::string&, Tensor& t) {
        if (t.requires_grad()) n += t.size();
    });
    return n;
}

inline void set_block_trainable(TransformerModel& m, int i, bool trainable) {
    auto& b = m.blocks.at(i);
    b.frozen = !trainable;
    for (Tensor* t : {&b.ln1_g, &b.ln1_b, &b.wq, &b.wk, &b.wv, &b.wo, &b.ln2_g, &b.ln2_b, &b.w_up,
                      &b.w_down}) {
        t->set_requires_grad(trainable);
    }
}

inline Tensor apply_linear(const Tensor& x, const Tensor& w, const TransformerBlock& blk,
                           const std::string& target) {
    Tensor y = matmul(x, w);
    auto it = blk.adapters.find(target);
    if (it != blk.adapters.end()) {
        Tensor delta = matmul(matmul(x, it->second.a), it->second.b);
        y = add(y, scale(delta, it->second.scaling));
    }
    return y;
}

inline Tensor block_forward(const TransformerBlock& b, const Tensor& x, const ModelConfig& cfg,
                            int batch, int time) {
    const int d = cfg.d_model;
    const int h = cfg.n_head;
    const int hd = cfg.head_width();
    Tensor normed = layer_norm(x, b.ln1_g, b.ln1_b);
    Tensor q = apply_linear(normed, b.wq, b, "attn.wq");
    Tensor k = apply_linear(normed, b.wk, b, "attn.wk");
    Tensor v = apply_linear(normed, b.wv, b, "attn.wv");
    auto split = [&](const Tensor& t) {
        return permute(reshape(t, {batch, time, h, hd}), {0, 2, 1, 3});  // B,H,T,Dh
    };
    Tensor scores = matmul(split(q), transpose_last2(split(k)));
    scores = causal_mask(scale(scores, 1.0f / std::sqrt(static_cast<float>(hd))));
    Tensor ctx = matmul(softmax_rows(scores), split(v));  // B,H,T,Dh
    ctx = reshape(permute(ctx, {0, 2, 1, 3}), {batch, time, d});
    Tensor attn_out = apply_linear(ctx, b.wo, b, "attn.wo");
    Tensor x1 = add(x, attn_out);
    Tensor normed2 = layer_norm(x1, b.ln2_g, b.ln2_b);
    Tensor up = gelu(apply_linear(normed2, b.w_up, b, "mlp.w_up"));
    Tensor mlp_out = apply_linear(up, b.w_down, b, "mlp.w_down");
    return add(x1, mlp_out);
}

// ids laid out row-major as [batch, time]; returns logits [batch, time, V].
inline Tensor forward(const TransformerModel& m, const std::vector<int>& ids, int batch, int time) {
    if (static_cast<std::int64_t>(ids.size()) != static_cast<std::int64_t>(batch) * time) {
        throw ShapeError("forward: ids length != batch * time");
    }
    if (time < 1 || time > m.config.context_len) {
        throw Error("forward: sequence length " + std::to_string(time) + " exceeds context_len " +
                    std::to_string(m.config.context_len));
    }
    Tensor x = lookup_rows(m.embedding, ids, {batch, time});
    std::vector<int> pos_ids(static_cast<std::size_t>(batch) * time);
    for (int b = 0; b < batch; ++b) {
        for (int t = 0; t < time; ++t) pos_ids[static_cast<std::size_t>(b) * time + t] = t;
    }
    x = add(x, lookup_rows(m.pos_emb, pos_ids, {batch, time}));
    for (const auto& blk : m.blocks) {
        x = block_forward(blk, x, m.config, batch, time);
    }
    x = layer_norm(x, m.final_ln_g, m.final_ln_b);
    return matmul(x, m.output_proj);  // B,T,V
}

// Next-token objective over a [batch, time] window; targets aligned with
// inputs (targets[i] is the token that should follow ids[i]); pad targets
// are ignored.
inline Tensor loss_on_batch(const TransformerModel& m, const std::vector<int>& ids,
                            const std::vector<int>& targets, int batch, int time, int pad_id) {
    Tensor logits = forward(m, ids, batch, time);
    Tensor flat = reshape(logits, {batch * time, m.config.vocab_size});
    return cross_entropy_mean(flat, targets, pad_id);
}

struct GenerateResult {
    std::vector<int> tokens;
    bool truncated = false;  // context window overflowed and slid
};

// Autoregressive sampling. temperature == 0 is greedy argmax with
// lowest-index tie-break; otherwise softmax sampling at the given
// temperature from a seed-derived stream.
inline GenerateResult generate(const TransformerModel& m, const std::vector<int>& prompt,
                               int n_steps, float temperature, std::uint64_t seed) {
    if (prompt.empty()) throw Error("generate: prompt must be non-empty");
    GenerateResult res;
    res.tokens = prompt;
    Rng rng = Rng::derive(seed, "generate");
    const int v = m.config.vocab_size;
    for (int s = 0; s < n_steps; ++s) {
        int t0 = 0;
        if (static_cast<int>(res.tokens.size()) > m.config.context_len) {
            t0 = static_cast<int>(res.tokens.size()) - m.config.context_len;
            res.truncated = true;
        }
        std::vector<int> window(res.tokens.begin() + t0, res.tokens.end());
        const int t = static_cast<int>(window.size());
        Tensor logits = forward(m, window, 1, t);
        const float* row = logits.data().data() + static_cast<std::size_t>(t - 1) * v;
        int pick = 0;
        if (temperature <= 0.0f) {
            for (int j = 1; j < v; ++j) {
                if (row[j] > row[pick]) pick = j;
            }
        } else {
            float mx = row[0];
            for (int j = 1; j < v; ++j) mx = std::max(mx, row[j]);
            std::vector<double> probs(v);
            double sum = 0.0;
            for (int j = 0; j < v; ++j) {
                probs[j] = std::exp(static_cast<double>(row[j] - mx) / temperature);
                sum += probs[j];
            }
            double u = rng.next_double() * sum;
            double acc = 0.0;
            pick = v - 1;
            for (int j = 0; j < v; ++j) {
                acc += probs[j];
                if (u < acc) {
                    pick = j;
                    break;
                }
            }
        }
        res.tokens.push_back(pick);
    }
    return res;
}

// Deep copy: fresh tensor storage, shared nothing.
inline TransformerModel clone_model(const TransformerModel& src) {
    TransformerModel dst;
    dst.config = src.config;
    dst.lora_alpha = src.lora_alpha;
    dst.lora_rank = src.lora_rank;
    auto copy = [](const Tensor& t) {
        Tensor c = Tensor::from_data(t.shape(), t.data(), false);
        c.set_requires_grad(t.requires_grad());
        c.set_name(t.name());
        return c;
    };
    dst.embedding = copy(src.embedding);
    dst.pos_emb = copy(src.pos_emb);
    for (const auto& b : src.blocks) {
        TransformerBlock nb;
        nb.ln1_g = copy(b.ln1_g);
        nb.ln1_b = copy(b.ln1_b);
        nb.wq = copy(b.wq);
        nb.wk = copy(b.wk);
        nb.wv = copy(b.wv);
        nb.wo = copy(b.wo);
        nb.ln2_g = copy(b.ln2_g);
        nb.ln2_b = copy(b.ln2_b);
        nb.w_up = copy(b.w_up);
        nb.w_down = copy(b.w_down);
        nb.frozen = b.frozen;
        for (const auto& [target, ad] : b.adapters) {
            nb.adapters[target] = LoraAdapter{copy(ad.a), copy(ad.b), ad.scaling};
        }
        dst.blocks.push_back(std::move(nb));
    }
    dst.final_ln_g = copy(src.final_ln_g);
    dst.final_ln_b = copy(src.final_ln_b);
    dst.output_proj = copy(src.output_proj);
    return dst;
}

}  // namespace glyphgrow
