#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glyphgrow/corpus.hpp"
#include "glyphgrow/errors.hpp"
#include "glyphgrow/model.hpp"
#include "glyphgrow/optim.hpp"
#include "glyphgrow/store.hpp"

namespace glyphgrow {

enum class MergeMode { Average, Adapter };

// Single linear map over concatenated expert logits. Initialised to the
// exact averaging solution (stacked identities / k, zero bias) so training
// can only improve on the parameter-free baseline.
struct FusionAdapter {
    Tensor weight;  // [k * V, V]
    Tensor bias;    // [V]
};

inline FusionAdapter init_fusion_adapter(int n_experts, int vocab_size) {
    std::vector<float> w(static_cast<std::size_t>(n_experts) * vocab_size * vocab_size, 0.0f);
    const float inv_k = 1.0f / static_cast<float>(n_experts);
    for (int e = 0; e < n_experts; ++e) {
        for (int j = 0; j < vocab_size; ++j) {
            w[(static_cast<std::size_t>(e) * vocab_size + j) * vocab_size + j] = inv_k;
        }
    }
    FusionAdapter a;
    a.weight = Tensor::from_data({n_experts * vocab_size, vocab_size}, std::move(w), true);
    a.bias = Tensor::zeros({vocab_size}, true);
    return a;
}

// Experts sharing one substrate plus the merge rule.
struct MoEComposite {
    std::vector<TransformerModel> experts;
    MergeMode mode = MergeMode::Average;
    std::optional<FusionAdapter> adapter;
    std::uint64_t fingerprint = 0;
};

// Elementwise arithmetic mean of k >= 2 identically shaped logit tensors.
inline Tensor merge_logits_average(const std::vector<Tensor>& logit_sets) {
    if (logit_sets.size() < 2) throw ShapeError("merge_logits_average: need at least 2 experts");
    const Shape& shape = logit_sets[0].shape();
    for (const auto& t : logit_sets) {
        if (t.shape() != shape) {
            throw ShapeError("merge_logits_average: shape mismatch " + shape_str(t.shape()) + " vs " +
                             shape_str(shape));
        }
    }
    Tensor acc = logit_sets[0];
    for (std::size_t i = 1; i < logit_sets.size(); ++i) acc = add(acc, logit_sets[i]);
    return scale(acc, 1.0f / static_cast<float>(logit_sets.size()));
}

// Builds the composite after checking the compatibility gate: identical
// vocab size, identical embedding fingerprint, identical context length.
inline MoEComposite compose(std::vector<TransformerModel> experts, MergeMode mode) {
    if (experts.size() < 2) throw Error("compose: need at least 2 experts");
    const auto& first = experts[0].config;
    for (std::size_t i = 1; i < experts.size(); ++i) {
        const auto& c = experts[i].config;
        if (c.emb_fingerprint != first.emb_fingerprint) {
            throw SubstrateError("compose: incompatible substrate: expert 0 fingerprint " +
                                 detail::hex64(first.emb_fingerprint) + " vs expert " +
                                 std::to_string(i) + " fingerprint " + detail::hex64(c.emb_fingerprint));
        }
        if (c.vocab_size != first.vocab_size) {
            throw SubstrateError("compose: vocab size mismatch: " + std::to_string(first.vocab_size) +
                                 " vs " + std::to_string(c.vocab_size));
        }
        if (c.context_len != first.context_len) {
            throw SubstrateError("compose: context_len mismatch: " + std::to_string(first.context_len) +
                                 " vs " + std::to_string(c.context_len));
        }
    }
    MoEComposite moe;
    moe.experts = std::move(experts);
    moe.mode = mode;
    moe.fingerprint = first.emb_fingerprint;
    if (mode == MergeMode::Adapter) {
        moe.adapter = init_fusion_adapter(static_cast<int>(moe.experts.size()), first.vocab_size);
    }
    return moe;
}

// Merged logits for a batch: the mean of expert logits, or the fusion
// adapter applied to their concatenation.
inline Tensor moe_forward(const MoEComposite& moe, const std::vector<int>& ids, int batch, int time) {
    std::vector<Tensor> logits;
    logits.reserve(moe.experts.size());
    for (const auto& e : moe.experts) logits.push_back(forward(e, ids, batch, time));
    if (moe.mode == MergeMode::Average) {
        return merge_logits_average(logits);
    }
    if (!moe.adapter) throw Error("moe_forward: adapter mode without adapter");
    Tensor cat = concat_last(logits);
    return add_bias(matmul(cat, moe.adapter->weight), moe.adapter->bias);
}

enum class FusionTrainable { AdapterOnly, AdapterPlusHeads };

struct MetricRowLite {
    int step;
    double loss;
};

struct FusionMetrics {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::int64_t trainable_params = 0;
    std::vector<MetricRowLite> series;
};

// Light fine-tuning of the composite. Expert blocks and embeddings are
// byte-frozen; only the adapter (and, for AdapterPlusHeads, the experts'
// output projections) update.
inline FusionMetrics train_fusion(MoEComposite& moe, const TokenCorpus& train,
                                  const TokenCorpus& eval_set, int steps, int batch_size,
                                  int seq_len, FusionTrainable trainable, float lr,
                                  std::uint64_t seed, int eval_batch_size = 16) {
    if (trainable == FusionTrainable::AdapterOnly && moe.mode != MergeMode::Adapter) {
        throw Error("train_fusion: AdapterOnly requires adapter mode");
    }
    // freeze everything, then re-open the named groups
    for (auto& e : moe.experts) {
        for_each_param(e, [](const std::string&, Tensor& t) { t.set_requires_grad(false); });
    }
    ParamSet params;
    if (moe.adapter) {
        params.add("fusion.weight", moe.adapter->weight, true);
        params.add("fusion.bias", moe.adapter->bias, true);
    }
    if (trainable == FusionTrainable::AdapterPlusHeads) {
        for (std::size_t i = 0; i < moe.experts.size(); ++i) {
            params.add("expert" + std::to_string(i) + ".head.w", moe.experts[i].output_proj, true);
        }
    }
    if (params.size() == 0) throw Error("train_fusion: nothing trainable");

    OptimizerState opt;
    opt.lr = lr;
    Rng rng = Rng::derive(seed, "fusion");
    auto moe_fn = [&](const std::vector<int>& ids, int bs, int t) {
        return moe_forward(moe, ids, bs, t);
    };
    FusionMetrics metrics;
    metrics.trainable_params = params.trainable_count();
    metrics.initial_loss = eval_loss(moe_fn, eval_set, eval_batch_size, seq_len);
    for (int step = 1; step <= steps; ++step) {
        Batch b = make_batch(train, rng, batch_size, seq_len);
        Tensor logits = moe_forward(moe, b.x, b.batch, b.time);
        Tensor flat = reshape(logits, {b.batch * b.time, moe.experts[0].config.vocab_size});
        Tensor loss = cross_entropy_mean(flat, b.y, train.pad_id);
        const float l = loss.scalar();
        if (!std::isfinite(l)) {
            throw DivergenceError("train_fusion diverged at step " + std::to_string(step));
        }
        metrics.series.push_back({step, l});
        backward(loss);
        optimizer_step(params, opt);
    }
    metrics.final_loss = eval_loss(moe_fn, eval_set, eval_batch_size, seq_len);
    return metrics;
}

// --- composite manifest ------------------------------------------------------
// UTF-8 key=value lines: mode, fingerprint, one expert line per checkpoint,
// optional adapter path.

struct MoEManifest {
    MergeMode mode = MergeMode::Average;
    std::uint64_t fingerprint = 0;
    std::vector<std::string> expert_paths;
    std::string adapter_path;  // empty for average mode
};

inline std::string manifest_to_text(const MoEManifest& m) {
    std::string out;
    out += "mode = " + std::string(m.mode == MergeMode::Average ? "average" : "adapter") + "\n";
    out += "fingerprint = " + detail::hex64(m.fingerprint) + "\n";
    for (const auto& p : m.expert_paths) out += "expert = " + p + "\n";
    if (!m.adapter_path.empty()) out += "adapter = " + m.adapter_path + "\n";
    return out;
}

inline MoEManifest manifest_from_text(const std::string& text, std::string_view source = "<memory>") {
    MoEManifest m;
    bool have_mode = false, have_fp = false;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            std::size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "mode") {
            if (val == "average") m.mode = MergeMode::Average;
            else if (val == "adapter") m.mode = MergeMode::Adapter;
            else throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": unknown mode " + val);
            have_mode = true;
        } else if (key == "fingerprint") {
            m.fingerprint = std::stoull(val, nullptr, 16);
            have_fp = true;
        } else if (key == "expert") {
            m.expert_paths.push_back(val);
        } else if (key == "adapter") {
            m.adapter_path = val;
        } else {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": unknown key " + key);
        }
    }
    if (!have_mode || !have_fp || m.expert_paths.size() < 2) {
        throw ParseError(std::string(source) + ": manifest needs mode, fingerprint and >= 2 experts");
    }
    if (m.mode == MergeMode::Adapter && m.adapter_path.empty()) {
        throw ParseError(std::string(source) + ": adapter mode without adapter path");
    }
    return m;
}

// Loads every expert through the fingerprint gate and rebuilds the composite.
inline MoEComposite load_composite(const MoEManifest& manifest, const EmbeddingMatrix& emb) {
    if (manifest.fingerprint != emb.fingerprint) {
        throw SubstrateError("composite manifest fingerprint " + detail::hex64(manifest.fingerprint) +
                             " does not match embedding " + detail::hex64(emb.fingerprint));
    }
    std::vector<TransformerModel> experts;
    for (const auto& p : manifest.expert_paths) experts.push_back(load_checkpoint(p, emb));
    MoEComposite moe = compose(std::move(experts), manifest.mode);
    if (manifest.mode == MergeMode::Adapter && !manifest.adapter_path.empty()) {
        AdapterFile f = adapter_from_bytes(read_file(manifest.adapter_path), manifest.adapter_path);
        if (f.fingerprint != emb.fingerprint) {
            throw SubstrateError("adapter file fingerprint mismatch");
        }
        if (f.n_experts != static_cast<int>(moe.experts.size()) ||
            f.vocab_size != moe.experts[0].config.vocab_size) {
            throw ParseError(manifest.adapter_path + ": adapter shape does not match composite");
        }
        moe.adapter->weight = f.weight;
        moe.adapter->bias = f.bias;
        moe.adapter->weight.set_requires_grad(true);
        moe.adapter->bias.set_requires_grad(true);
    }
    return moe;
}

}  // namespace glyphgrow
