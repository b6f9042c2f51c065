#pragma once

#include <chrono>
#include <cmath>
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

struct LoraConfig {
    int rank = 8;
    float alpha = 16.0f;
    // default targets: every attention and MLP projection of frozen blocks
    std::vector<std::string> targets = {"attn.wq", "attn.wk", "attn.wv",
                                        "attn.wo", "mlp.w_up", "mlp.w_down"};

    void validate(int d_model) const {
        if (rank < 1 || rank > d_model / 2) {
            throw Error("lora rank must be in [1, d_model/2], got " + std::to_string(rank));
        }
    }
};

struct StageSpec {
    int target_n_layer = 0;
    int steps = 0;
    int batch_size = 16;
    int seq_len = 64;
    float lr = 3e-4f;
    OptimizerState::Algo algo = OptimizerState::Algo::AdamW;
    float weight_decay = 0.01f;
    std::optional<LoraConfig> lora;
};

// Per-stage training plan for the freeze-and-stack loop. Stage 1 trains a
// single block; every later stage adds exactly one.
struct GrowthSchedule {
    std::vector<StageSpec> stages;
    int eval_every = 100;
    int eval_batch_size = 16;
    int max_depth = 12;
    bool grow_zero_init = false;  // zero residual init erases the loss spike; off by default
    // new blocks start a little hotter than base init so the stacking
    // perturbation is visible in the loss curve
    float grow_init_std = 3.0f * kInitStd;

    void validate() const {
        if (stages.empty()) throw Error("growth schedule needs at least one stage");
        for (std::size_t i = 0; i < stages.size(); ++i) {
            if (stages[i].target_n_layer != static_cast<int>(i) + 1) {
                throw Error("stage " + std::to_string(i + 1) + " must target n_layer " +
                            std::to_string(i + 1) + ", got " +
                            std::to_string(stages[i].target_n_layer));
            }
            if (stages[i].steps < 0) throw Error("negative step budget");
        }
        if (eval_every < 1) throw Error("eval_every must be >= 1");
    }
};

struct MetricRow {
    int stage = 0;
    int step = 0;
    std::string split;  // "train" or "eval"
    double loss = 0.0;
    double wall_ms = 0.0;
};

struct StageMetrics {
    int stage = 0;
    std::vector<MetricRow> series;
    double wall_ms = 0.0;
    std::int64_t trainable_params = 0;
    double loss_after_grow = 0.0;   // first eval of this stage, before any step
    double loss_before_grow = 0.0;  // final eval of this stage
    double lr = 0.0;
};

// Freezes every existing block (and the position table) and stacks one new
// block on top, below the final norm. The head and final norm stay
// trainable. Old block bytes are untouched.
inline void grow(TransformerModel& m, std::uint64_t seed, bool zero_init = false,
                 int max_depth = 12, float init_std = kInitStd) {
    if (m.config.n_layer + 1 > max_depth) {
        throw Error("grow: depth " + std::to_string(m.config.n_layer + 1) + " exceeds max depth " +
                    std::to_string(max_depth));
    }
    if (m.has_lora()) throw Error("grow: merge or drop adapters before stacking");
    for (int i = 0; i < m.config.n_layer; ++i) set_block_trainable(m, i, false);
    m.pos_emb.set_requires_grad(false);
    Rng rng = Rng::derive(seed, "grow/block" + std::to_string(m.config.n_layer));
    m.blocks.push_back(init_block(m.config, rng, zero_init, init_std));
    m.config.n_layer += 1;
    set_block_trainable(m, m.config.n_layer - 1, true);
    m.final_ln_g.set_requires_grad(true);
    m.final_ln_b.set_requires_grad(true);
    m.output_proj.set_requires_grad(true);
}

// Attaches zero-initialised low-rank adapters to every frozen block's target
// weights: a ~ N(0, 0.02) with b = 0, so the forward pass is bit-identical
// until the adapters train. Base weights stay frozen.
inline void attach_lora(TransformerModel& m, const LoraConfig& cfg, std::uint64_t seed) {
    cfg.validate(m.config.d_model);
    bool any_frozen = false;
    for (const auto& b : m.blocks) any_frozen |= b.frozen;
    if (!any_frozen) throw Error("attach_lora: no frozen blocks to adapt");
    if (m.has_lora()) throw Error("attach_lora: adapters already attached");
    const int d = m.config.d_model;
    const int ff = m.config.ff_width();
    Rng rng = Rng::derive(seed, "lora");
    const float scaling = cfg.alpha / static_cast<float>(cfg.rank);
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        auto& blk = m.blocks[i];
        if (!blk.frozen) continue;
        for (const auto& target : cfg.targets) {
            int in = d, out = d;
            if (target == "mlp.w_up") {
                out = ff;
            } else if (target == "mlp.w_down") {
                in = ff;
            } else if (target != "attn.wq" && target != "attn.wk" && target != "attn.wv" &&
                       target != "attn.wo") {
                throw Error("attach_lora: unknown target " + target);
            }
            LoraAdapter ad;
            ad.a = detail::randn({in, cfg.rank}, rng, kInitStd, true);
            ad.b = Tensor::zeros({cfg.rank, out}, true);
            ad.scaling = scaling;
            blk.adapters[target] = std::move(ad);
        }
    }
    m.lora_alpha = cfg.alpha;
    m.lora_rank = cfg.rank;
}

// Folds every adapter into its base weight (W += scaling * a @ b) and
// removes the adapters. Logits move by less than 1e-5.
inline void merge_lora(TransformerModel& m) {
    if (!m.has_lora()) throw Error("merge_lora: no adapters attached");
    for (auto& blk : m.blocks) {
        for (auto& [target, ad] : blk.adapters) {
            Tensor* w = nullptr;
            if (target == "attn.wq") w = &blk.wq;
            else if (target == "attn.wk") w = &blk.wk;
            else if (target == "attn.wv") w = &blk.wv;
            else if (target == "attn.wo") w = &blk.wo;
            else if (target == "mlp.w_up") w = &blk.w_up;
            else if (target == "mlp.w_down") w = &blk.w_down;
            else throw Error("merge_lora: unknown target " + target);
            const int in = ad.a.dim(0), r = ad.a.dim(1), out = ad.b.dim(1);
            auto& wd = w->data();
            const auto& av = ad.a.data();
            const auto& bv = ad.b.data();
            for (int i = 0; i < in; ++i) {
                for (int p = 0; p < r; ++p) {
                    const float apv = av[static_cast<std::size_t>(i) * r + p] * ad.scaling;
                    for (int j = 0; j < out; ++j) {
                        wd[static_cast<std::size_t>(i) * out + j] +=
                            apv * bv[static_cast<std::size_t>(p) * out + j];
                    }
                }
            }
        }
        blk.adapters.clear();
    }
    m.lora_alpha = 0.0f;
    m.lora_rank = 0;
}

namespace detail {

inline double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace detail

// Runs one stage's step budget with seeded shuffling. Frozen parameters are
// byte-unchanged on exit; NaN loss aborts with a divergence error naming the
// last good checkpoint.
inline StageMetrics train_stage(TransformerModel& m, const TokenCorpus& train,
                                const TokenCorpus& eval_set, const StageSpec& stage,
                                int eval_every, int eval_batch_size, std::uint64_t seed,
                                const std::string& last_checkpoint = "") {
    StageMetrics metrics;
    metrics.stage = stage.target_n_layer;
    metrics.lr = stage.lr;
    ParamSet params = params_of(m);
    metrics.trainable_params = params.trainable_count();
    OptimizerState opt;
    opt.algo = stage.algo;
    opt.lr = stage.lr;
    opt.weight_decay = stage.weight_decay;
    Rng rng = Rng::derive(seed, "stage" + std::to_string(stage.target_n_layer));

    const double t0 = detail::now_ms();
    auto model_fn = [&](const std::vector<int>& ids, int bs, int t) { return forward(m, ids, bs, t); };
    auto record_eval = [&](int step) {
        double el = eval_loss(model_fn, eval_set, eval_batch_size, stage.seq_len);
        metrics.series.push_back({stage.target_n_layer, step, "eval", el, detail::now_ms() - t0});
        return el;
    };

    metrics.loss_after_grow = record_eval(0);
    double last_train = 0.0;
    for (int step = 1; step <= stage.steps; ++step) {
        Batch b = make_batch(train, rng, stage.batch_size, stage.seq_len);
        Tensor loss = loss_on_batch(m, b.x, b.y, b.batch, b.time, train.pad_id);
        last_train = loss.scalar();
        if (!std::isfinite(last_train)) {
            throw DivergenceError("stage " + std::to_string(stage.target_n_layer) + " diverged at step " +
                                  std::to_string(step) + "; last good checkpoint: " +
                                  (last_checkpoint.empty() ? "<none>" : last_checkpoint));
        }
        backward(loss);
        optimizer_step(params, opt);
        if (step % eval_every == 0 && step != stage.steps) {
            metrics.series.push_back(
                {stage.target_n_layer, step, "train", last_train, detail::now_ms() - t0});
            record_eval(step);
        }
    }
    if (stage.steps > 0) {
        metrics.series.push_back(
            {stage.target_n_layer, stage.steps, "train", last_train, detail::now_ms() - t0});
    }
    metrics.loss_before_grow = record_eval(stage.steps);
    metrics.wall_ms = detail::now_ms() - t0;
    return metrics;
}

struct GrowthRun {
    TransformerModel model;
    std::vector<StageMetrics> stage_metrics;
    std::vector<std::string> checkpoint_paths;
    std::vector<std::string> metrics_paths;
};

inline std::string format_metric_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline void write_metrics_csv(const std::string& path, const std::string& run_id,
                              const StageMetrics& metrics, int vocab_size) {
    (void)vocab_size;
    std::string out = "run_id,stage,step,split,loss,ppl,lr,trainable_params,wall_ms\n";
    for (const auto& row : metrics.series) {
        out += run_id;
        out += "," + std::to_string(row.stage);
        out += "," + std::to_string(row.step);
        out += "," + row.split;
        out += "," + format_metric_value(row.loss);
        out += "," + format_metric_value(std::exp(row.loss));
        out += "," + format_metric_value(metrics.lr);
        out += "," + std::to_string(metrics.trainable_params);
        out += "," + format_metric_value(row.wall_ms);
        out += "\n";
    }
    atomic_write_file(path, out);
}

// The constructive loop: init at one layer, then train / freeze / stack until
// the schedule is done. Emits stage-<k>.ckpt and metrics-stage-<k>.csv per
// stage when out_dir is non-empty. LoRA stages adapt frozen blocks through
// low-rank updates which are folded back in before the stage checkpoint.
inline GrowthRun run_growth(const GrowthSchedule& schedule, const TokenCorpus& train,
                            const TokenCorpus& eval_set, const ModelConfig& base_config,
                            const EmbeddingMatrix& emb, std::uint64_t run_seed,
                            const std::string& out_dir = "", const std::string& run_id = "growth") {
    schedule.validate();
    ModelConfig cfg = base_config;
    cfg.n_layer = 1;
    GrowthRun run;
    run.model = init_model(cfg, emb, run_seed);
    std::string last_ckpt;
    for (const auto& stage : schedule.stages) {
        if (stage.target_n_layer > 1) {
            grow(run.model, run_seed, schedule.grow_zero_init, schedule.max_depth,
                 schedule.grow_init_std);
        }
        bool lora_attached = false;
        if (stage.lora && stage.target_n_layer > 1) {
            attach_lora(run.model, *stage.lora, run_seed + stage.target_n_layer);
            lora_attached = true;
        }
        StageMetrics metrics = train_stage(run.model, train, eval_set, stage, schedule.eval_every,
                                           schedule.eval_batch_size, run_seed, last_ckpt);
        if (lora_attached) merge_lora(run.model);
        run.stage_metrics.push_back(metrics);
        if (!out_dir.empty()) {
            const std::string ckpt = out_dir + "/stage-" + std::to_string(stage.target_n_layer) + ".ckpt";
            const std::string csv =
                out_dir + "/metrics-stage-" + std::to_string(stage.target_n_layer) + ".csv";
            save_checkpoint(run.model, ckpt);
            write_metrics_csv(csv, run_id, metrics, run.model.config.vocab_size);
            run.checkpoint_paths.push_back(ckpt);
            run.metrics_paths.push_back(csv);
            last_ckpt = ckpt;
        }
    }
    return run;
}

}  // namespace glyphgrow
