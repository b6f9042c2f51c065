#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glyphgrow/config.hpp"
#include "glyphgrow/corpus.hpp"
#include "glyphgrow/embedding.hpp"
#include "glyphgrow/growth.hpp"
#include "glyphgrow/model.hpp"
#include "glyphgrow/moe.hpp"
#include "glyphgrow/probes.hpp"
#include "glyphgrow/store.hpp"
#include "glyphgrow/vocab.hpp"

namespace glyphgrow {
namespace cli {

inline EmbeddingMatrix load_embedding_file(const std::string& path) {
    return embedding_from_bytes(read_file(path), path);
}

inline VocabSpec load_vocab_file(const std::string& path) {
    return vocab_from_text(read_file(path), path);
}

// One document per line; the newline itself never enters a document.
inline std::vector<std::string> load_corpus_docs(const std::vector<std::string>& paths) {
    std::vector<std::string> docs;
    for (const auto& path : paths) {
        std::string text = read_file(path);
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            if (end > pos) docs.push_back(text.substr(pos, end - pos));
            pos = end + 1;
        }
    }
    return docs;
}

struct PreparedData {
    TokenCorpus train;
    TokenCorpus eval;
};

// Splits lm corpora into train/holdout docs, or generates khop datasets.
inline PreparedData prepare_data(const RunConfig& cfg, const VocabSpec& vocab) {
    PreparedData out;
    if (cfg.task == "khop") {
        KHopDataset train_ds =
            make_khop_task(vocab, cfg.khop_k, cfg.khop_m, cfg.khop_train_examples, cfg.seed);
        KHopDataset eval_ds = make_khop_task(vocab, cfg.khop_k, cfg.khop_m, cfg.khop_eval_examples,
                                             cfg.seed ^ 0x5eed5eedull);
        const int pad = vocab.index_of_special("PAD");
        const int bos = vocab.index_of_special("BOS");
        if (pad < 0 || bos < 0) throw Error("khop vocab must declare PAD and BOS");
        out.train = TokenCorpus{train_ds.docs(), pad, bos, /*answer_supervision=*/true};
        out.eval = TokenCorpus{eval_ds.docs(), pad, bos, /*answer_supervision=*/true};
        return out;
    }
    if (cfg.corpus_paths.empty()) throw Error("config: corpus is required for task = lm");
    std::vector<std::string> docs = load_corpus_docs(cfg.corpus_paths);
    if (docs.size() < 2) throw Error("corpus must contain at least 2 documents");
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng = Rng::derive(cfg.seed, "split");
    for (std::size_t i = docs.size() - 1; i > 0; --i) {
        std::swap(order[i], order[rng.next_below(i + 1)]);
    }
    std::size_t n_eval = std::max<std::size_t>(1, static_cast<std::size_t>(docs.size() * cfg.holdout_frac));
    if (n_eval >= docs.size()) n_eval = docs.size() - 1;
    std::vector<std::string> eval_docs, train_docs;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        (i < n_eval ? eval_docs : train_docs).push_back(docs[order[i]]);
    }
    out.train = encode_corpus(train_docs, vocab);
    out.eval = encode_corpus(eval_docs, vocab);
    return out;
}

inline ModelConfig model_config_from(const RunConfig& cfg, const EmbeddingMatrix& emb) {
    ModelConfig mc;
    mc.vocab_size = emb.vocab_size;
    mc.d_model = emb.width;
    mc.n_head = cfg.n_head;
    mc.n_layer = cfg.n_layer;
    mc.d_ff = cfg.d_ff;
    mc.context_len = cfg.context_len;
    mc.emb_fingerprint = emb.fingerprint;
    return mc;
}

inline StageSpec stage_from(const RunConfig& cfg, int target_layer) {
    StageSpec s;
    s.target_n_layer = target_layer;
    s.steps = cfg.steps;
    s.batch_size = cfg.batch_size;
    s.seq_len = cfg.seq_len;
    s.lr = cfg.lr;
    s.algo = cfg.optimizer == "sgd" ? OptimizerState::Algo::SGD : OptimizerState::Algo::AdamW;
    s.weight_decay = cfg.weight_decay;
    if (cfg.lora && target_layer >= cfg.lora_min_layer) {
        LoraConfig lc;
        lc.rank = cfg.lora_rank;
        lc.alpha = cfg.lora_alpha;
        s.lora = lc;
    }
    return s;
}

inline void write_run_lock(const RunConfig& cfg, const std::string& command) {
    std::string text = "# command: " + command + "\n" + config_to_text(cfg);
    atomic_write_file(cfg.out_dir + "/run.lock", text);
}

inline int cmd_vocab_build(const std::vector<std::string>& files, const std::string& specials_csv,
                           const std::string& out) {
    std::vector<std::string> specials;
    std::size_t pos = 0;
    while (pos <= specials_csv.size() && !specials_csv.empty()) {
        std::size_t c = specials_csv.find(',', pos);
        if (c == std::string::npos) c = specials_csv.size();
        std::string item = specials_csv.substr(pos, c - pos);
        if (!item.empty()) specials.push_back(item);
        pos = c + 1;
        if (pos > specials_csv.size()) break;
    }
    VocabSpec vocab = build_vocab(files, specials);
    atomic_write_file(out, vocab_to_text(vocab));
    std::printf("vocab: %d tokens (%zu specials) -> %s\n", vocab.size(), specials.size(), out.c_str());
    return 0;
}

inline int cmd_embed_build(const std::string& vocab_path, int side, int d_model,
                           std::uint64_t proj_seed, const std::string& out) {
    VocabSpec vocab = load_vocab_file(vocab_path);
    EmbeddingMatrix emb = build_embedding_matrix(vocab, side, d_model, proj_seed);
    atomic_write_file(out, embedding_to_bytes(emb));
    std::printf("embedding: V=%d d_model=%d fingerprint=%s -> %s\n", emb.vocab_size, emb.width,
                detail::hex64(emb.fingerprint).c_str(), out.c_str());
    return 0;
}

inline int cmd_train(const RunConfig& cfg) {
    if (cfg.vocab_path.empty() || cfg.embedding_path.empty()) {
        throw Error("train: config must set vocab and embedding");
    }
    VocabSpec vocab = load_vocab_file(cfg.vocab_path);
    EmbeddingMatrix emb = load_embedding_file(cfg.embedding_path);
    PreparedData data = prepare_data(cfg, vocab);
    ModelConfig mc = model_config_from(cfg, emb);
    TransformerModel model = init_model(mc, emb, cfg.seed);
    std::filesystem::create_directories(cfg.out_dir);
    write_run_lock(cfg, "train");

    StageSpec stage = stage_from(cfg, cfg.n_layer);
    stage.lora.reset();  // plain training has no frozen blocks to adapt
    StageMetrics metrics = train_stage(model, data.train, data.eval, stage, cfg.eval_every,
                                       cfg.eval_batch_size, cfg.seed);
    const std::string ckpt = cfg.out_dir + "/model.ckpt";
    save_checkpoint(model, ckpt);
    write_metrics_csv(cfg.out_dir + "/metrics-train.csv", "train", metrics, mc.vocab_size);
    std::printf("train: final eval loss %.4f (ppl %.2f), %lld trainable params -> %s\n",
                metrics.loss_before_grow, std::exp(metrics.loss_before_grow),
                static_cast<long long>(metrics.trainable_params), ckpt.c_str());
    return 0;
}

inline int cmd_grow(const RunConfig& cfg) {
    if (cfg.vocab_path.empty() || cfg.embedding_path.empty()) {
        throw Error("grow: config must set vocab and embedding");
    }
    VocabSpec vocab = load_vocab_file(cfg.vocab_path);
    EmbeddingMatrix emb = load_embedding_file(cfg.embedding_path);
    PreparedData data = prepare_data(cfg, vocab);
    ModelConfig mc = model_config_from(cfg, emb);
    std::filesystem::create_directories(cfg.out_dir);
    write_run_lock(cfg, "grow");

    GrowthSchedule schedule;
    for (int k = 1; k <= cfg.stages; ++k) schedule.stages.push_back(stage_from(cfg, k));
    schedule.eval_every = cfg.eval_every;
    schedule.eval_batch_size = cfg.eval_batch_size;
    schedule.max_depth = cfg.max_depth;
    schedule.grow_zero_init = cfg.grow_init == "zero";
    schedule.grow_init_std = cfg.grow_init_std;

    GrowthRun run = run_growth(schedule, data.train, data.eval, mc, emb, cfg.seed, cfg.out_dir);
    for (const auto& sm : run.stage_metrics) {
        std::printf("stage %d: eval %.4f -> %.4f (%lld trainable params)\n", sm.stage,
                    sm.loss_after_grow, sm.loss_before_grow,
                    static_cast<long long>(sm.trainable_params));
    }
    return 0;
}

inline int cmd_merge(const std::vector<std::string>& ckpts, const std::string& mode_str,
                     const std::string& emb_path, const std::string& out_dir) {
    MergeMode mode;
    if (mode_str == "average") mode = MergeMode::Average;
    else if (mode_str == "adapter") mode = MergeMode::Adapter;
    else throw Error("merge: mode must be average or adapter");
    EmbeddingMatrix emb = load_embedding_file(emb_path);
    std::vector<TransformerModel> experts;
    for (const auto& p : ckpts) experts.push_back(load_checkpoint(p, emb));
    MoEComposite moe = compose(std::move(experts), mode);

    std::filesystem::create_directories(out_dir);
    MoEManifest manifest;
    manifest.mode = mode;
    manifest.fingerprint = moe.fingerprint;
    manifest.expert_paths = ckpts;
    if (mode == MergeMode::Adapter) {
        manifest.adapter_path = out_dir + "/fusion-adapter.bin";
        atomic_write_file(manifest.adapter_path,
                          adapter_to_bytes(moe.adapter->weight, moe.adapter->bias,
                                           static_cast<int>(moe.experts.size()), moe.fingerprint));
    }
    const std::string manifest_path = out_dir + "/moe.manifest";
    atomic_write_file(manifest_path, manifest_to_text(manifest));
    std::string cmdline = "merge --mode " + mode_str;
    for (const auto& p : ckpts) cmdline += " " + p;
    atomic_write_file(out_dir + "/run.lock", "# command: " + cmdline + "\n");
    std::printf("merged %zu experts (%s) fingerprint=%s -> %s\n", ckpts.size(), mode_str.c_str(),
                detail::hex64(moe.fingerprint).c_str(), manifest_path.c_str());
    return 0;
}

inline int cmd_fusion_train(const RunConfig& cfg) {
    if (cfg.manifest_path.empty() || cfg.vocab_path.empty() || cfg.embedding_path.empty()) {
        throw Error("fusion-train: config must set manifest, vocab and embedding");
    }
    VocabSpec vocab = load_vocab_file(cfg.vocab_path);
    EmbeddingMatrix emb = load_embedding_file(cfg.embedding_path);
    MoEManifest manifest = manifest_from_text(read_file(cfg.manifest_path), cfg.manifest_path);
    MoEComposite moe = load_composite(manifest, emb);
    PreparedData data = prepare_data(cfg, vocab);
    std::filesystem::create_directories(cfg.out_dir);
    write_run_lock(cfg, "fusion-train");

    FusionTrainable trainable = cfg.fusion_trainable == "adapter+heads"
                                    ? FusionTrainable::AdapterPlusHeads
                                    : FusionTrainable::AdapterOnly;
    FusionMetrics metrics = train_fusion(moe, data.train, data.eval, cfg.steps, cfg.batch_size,
                                         cfg.seq_len, trainable, cfg.lr, cfg.seed,
                                         cfg.eval_batch_size);

    MoEManifest out_manifest = manifest;
    if (moe.adapter) {
        out_manifest.adapter_path = cfg.out_dir + "/fusion-adapter.bin";
        atomic_write_file(out_manifest.adapter_path,
                          adapter_to_bytes(moe.adapter->weight, moe.adapter->bias,
                                           static_cast<int>(moe.experts.size()), moe.fingerprint));
    }
    if (trainable == FusionTrainable::AdapterPlusHeads) {
        out_manifest.expert_paths.clear();
        for (std::size_t i = 0; i < moe.experts.size(); ++i) {
            std::string p = cfg.out_dir + "/expert-" + std::to_string(i) + ".ckpt";
            save_checkpoint(moe.experts[i], p);
            out_manifest.expert_paths.push_back(p);
        }
    }
    atomic_write_file(cfg.out_dir + "/moe.manifest", manifest_to_text(out_manifest));

    std::string csv = "run_id,stage,step,split,loss,ppl,lr,trainable_params,wall_ms\n";
    for (const auto& row : metrics.series) {
        csv += "fusion,0," + std::to_string(row.step) + ",train," + format_metric_value(row.loss) +
               "," + format_metric_value(std::exp(row.loss)) + "," + format_metric_value(cfg.lr) +
               "," + std::to_string(metrics.trainable_params) + ",0\n";
    }
    atomic_write_file(cfg.out_dir + "/metrics-fusion.csv", csv);
    std::printf("fusion-train: eval loss %.4f -> %.4f -> %s/moe.manifest\n", metrics.initial_loss,
                metrics.final_loss, cfg.out_dir.c_str());
    return 0;
}

inline int cmd_eval_ppl(const std::string& ckpt, const std::string& manifest_path,
                        const std::string& emb_path, const std::string& vocab_path,
                        const std::vector<std::string>& corpus, int batch, int seq,
                        const std::string& report_path, const std::string& model_id,
                        const std::string& probe) {
    EmbeddingMatrix emb = load_embedding_file(emb_path);
    VocabSpec vocab = load_vocab_file(vocab_path);
    TokenCorpus data = encode_corpus(load_corpus_docs(corpus), vocab);

    double ppl = 0.0;
    int n_layer = 0;
    if (!manifest_path.empty()) {
        MoEManifest manifest = manifest_from_text(read_file(manifest_path), manifest_path);
        MoEComposite moe = load_composite(manifest, emb);
        ppl = perplexity(moe, data, batch, seq);
        for (const auto& e : moe.experts) n_layer = std::max(n_layer, e.config.n_layer);
    } else {
        TransformerModel model = load_checkpoint(ckpt, emb);
        ppl = perplexity(model, data, batch, seq);
        n_layer = model.config.n_layer;
    }
    std::printf("ppl %.6f\n", ppl);
    if (!report_path.empty()) {
        ProbeReport rep;
        if (std::filesystem::exists(report_path)) {
            rep = report_from_csv(read_file(report_path), report_path);
        }
        rep.rows.push_back({model_id, n_layer, probe, "perplexity", ppl, 0});
        atomic_write_file(report_path, report_to_csv(rep));
    }
    return 0;
}

inline int cmd_eval_khop(const std::string& ckpt, const std::string& emb_path,
                         const std::string& vocab_path, int k, int m, int n, std::uint64_t seed,
                         const std::string& report_path, const std::string& model_id) {
    EmbeddingMatrix emb = load_embedding_file(emb_path);
    VocabSpec vocab = load_vocab_file(vocab_path);
    TransformerModel model = load_checkpoint(ckpt, emb);
    KHopDataset ds = make_khop_task(vocab, k, m, n, seed);
    int bos = vocab.index_of_special("BOS");
    if (bos < 0) throw Error("eval khop: vocab lacks BOS");
    double acc = khop_accuracy(model, ds, bos);
    std::printf("khop k=%d m=%d accuracy %.4f (chance %.4f)\n", k, m, acc, 1.0 / m);
    if (!report_path.empty()) {
        ProbeReport rep;
        if (std::filesystem::exists(report_path)) {
            rep = report_from_csv(read_file(report_path), report_path);
        }
        rep.rows.push_back({model_id, model.config.n_layer, "khop" + std::to_string(k) + "_acc",
                            "accuracy", acc, seed});
        atomic_write_file(report_path, report_to_csv(rep));
    }
    return 0;
}

inline int cmd_report(const std::string& rows_path, const std::string& out_dir) {
    ProbeReport rep = report_from_csv(read_file(rows_path), rows_path);
    std::filesystem::create_directories(out_dir);
    ReportFiles files = emit_report(rep, out_dir);
    std::printf("report: %zu rows -> %s, %s\n", rep.rows.size(), files.csv_path.c_str(),
                files.svg_path.c_str());
    return 0;
}

inline int cmd_generate(const std::string& ckpt, const std::string& emb_path,
                        const std::string& vocab_path, const std::string& prompt, int steps,
                        float temperature, std::uint64_t seed) {
    EmbeddingMatrix emb = load_embedding_file(emb_path);
    VocabSpec vocab = load_vocab_file(vocab_path);
    TransformerModel model = load_checkpoint(ckpt, emb);
    int bos = vocab.index_of_special("BOS");
    std::vector<int> ids;
    if (bos >= 0) ids.push_back(bos);
    for (int id : vocab.encode(utf8_decode(prompt))) ids.push_back(id);
    if (ids.empty()) throw Error("generate: empty prompt and no BOS");
    GenerateResult res = generate(model, ids, steps, temperature, seed);
    std::printf("%s\n", vocab.decode(res.tokens).c_str());
    if (res.truncated) std::printf("# note: context window overflowed; oldest tokens were dropped\n");
    return 0;
}

inline int cmd_inspect(const std::string& path) {
    std::string bytes = read_file(path);
    if (bytes.size() >= 4 && bytes.compare(0, 4, "GLYE") == 0) {
        EmbeddingMatrix emb = embedding_from_bytes(bytes, path);
        std::printf("GLYE embedding: V=%d d_model=%d fingerprint=%s\n", emb.vocab_size, emb.width,
                    detail::hex64(emb.fingerprint).c_str());
        return 0;
    }
    if (bytes.size() >= 4 && bytes.compare(0, 4, "CLGA") == 0) {
        AdapterFile f = adapter_from_bytes(bytes, path);
        std::printf("CLGA fusion adapter: experts=%d V=%d fingerprint=%s weight=%s\n", f.n_experts,
                    f.vocab_size, detail::hex64(f.fingerprint).c_str(),
                    shape_str(f.weight.shape()).c_str());
        return 0;
    }
    if (bytes.size() >= 4 && bytes.compare(0, 4, "CLGW") != 0) {
        throw ParseError(path + ": unrecognized file magic");
    }
    // checkpoint: print the header and every tensor record without a substrate
    const std::size_t body = bytes.size() - 4;
    std::uint32_t want_crc = 0;
    for (int i = 0; i < 4; ++i) {
        want_crc |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[body + i])) << (8 * i);
    }
    if (want_crc != crc32_of(std::string_view(bytes).substr(0, body))) {
        throw ParseError(path + ": checksum mismatch, file corrupt or truncated");
    }
    ByteReader r(std::string_view(bytes).substr(0, body), path);
    char magic[4];
    r.bytes(magic, 4);
    std::uint32_t version = r.u32();
    std::uint32_t v = r.u32(), d = r.u32(), h = r.u32(), l = r.u32(), ff = r.u32(), t = r.u32();
    std::uint32_t flags = r.u32();
    std::uint64_t fp = r.u64();
    std::printf("CLGW checkpoint v%u: V=%u d_model=%u n_head=%u n_layer=%u d_ff=%u context_len=%u%s\n",
                version, v, d, h, l, ff, t, (flags & kFlagHasLora) ? " +lora" : "");
    std::printf("embedding fingerprint: %s\n", detail::hex64(fp).c_str());
    std::uint32_t count = r.u32();
    std::printf("%u tensors:\n", count);
    for (std::uint32_t i = 0; i < count; ++i) {
        auto [name, rec] = detail::read_record(r);
        std::printf("  %-28s %s\n", name.c_str(), shape_str(rec.shape).c_str());
    }
    return 0;
}

// Full command surface. Returns 0 on success, 1 on usage errors, 2 on
// runtime failures.
inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"constructive-learning toolkit: frozen glyph embeddings, layer-wise growth, "
                 "logit-merged experts"};
    app.require_subcommand(1);

    // vocab build
    auto* vocab_cmd = app.add_subcommand("vocab", "vocabulary tools")->require_subcommand(1);
    auto* vocab_build = vocab_cmd->add_subcommand("build", "scan corpora into a canonical vocab");
    std::vector<std::string> vb_files;
    std::string vb_specials = "PAD,BOS,EOS,SEP";
    std::string vb_out = "vocab.txt";
    vocab_build->add_option("files", vb_files, "UTF-8 corpus files")->required()->check(CLI::ExistingFile);
    vocab_build->add_option("--specials", vb_specials, "comma-separated special tokens");
    vocab_build->add_option("--out", vb_out, "output vocab file");

    // embed build
    auto* embed_cmd = app.add_subcommand("embed", "embedding substrate tools")->require_subcommand(1);
    auto* embed_build = embed_cmd->add_subcommand("build", "build the frozen embedding matrix");
    std::string eb_vocab, eb_out = "embedding.glye";
    int eb_side = 16, eb_dmodel = 64;
    std::string eb_seed = "0x9E3779B97F4A7C15";
    embed_build->add_option("--vocab", eb_vocab, "vocab file")->required()->check(CLI::ExistingFile);
    embed_build->add_option("--side", eb_side, "glyph raster side (8 or 16)");
    embed_build->add_option("--d-model", eb_dmodel, "embedding width");
    embed_build->add_option("--proj-seed", eb_seed, "projection seed (hex or decimal)");
    embed_build->add_option("--out", eb_out, "output embedding file");

    // config-driven runs
    std::string train_config, grow_config, fusion_config;
    auto* train_cmd = app.add_subcommand("train", "train one model on a corpus");
    train_cmd->add_option("--config", train_config, "run config")->required()->check(CLI::ExistingFile);
    auto* grow_cmd = app.add_subcommand("grow", "progressive layer-wise growth run");
    grow_cmd->add_option("--config", grow_config, "run config")->required()->check(CLI::ExistingFile);
    auto* fusion_cmd = app.add_subcommand("fusion-train", "fine-tune a composite's fusion parameters");
    fusion_cmd->add_option("--config", fusion_config, "run config")->required()->check(CLI::ExistingFile);

    // merge
    auto* merge_cmd = app.add_subcommand("merge", "compose expert checkpoints into an MoE");
    std::vector<std::string> mg_ckpts;
    std::string mg_mode = "average", mg_emb, mg_out = "moe-out";
    merge_cmd->add_option("checkpoints", mg_ckpts, "expert checkpoints")
        ->required()
        ->check(CLI::ExistingFile);
    merge_cmd->add_option("--mode", mg_mode, "average | adapter");
    merge_cmd->add_option("--emb", mg_emb, "embedding file")->required()->check(CLI::ExistingFile);
    merge_cmd->add_option("--out-dir", mg_out, "output directory");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluation probes")->require_subcommand(1);
    auto* ppl_cmd = eval_cmd->add_subcommand("ppl", "perplexity on a corpus");
    std::string pp_ckpt, pp_manifest, pp_emb, pp_vocab, pp_report, pp_model_id = "model",
                                                                   pp_probe = "ppl";
    std::vector<std::string> pp_corpus;
    int pp_batch = 16, pp_seq = 64;
    ppl_cmd->add_option("corpus", pp_corpus, "corpus files")->required()->check(CLI::ExistingFile);
    ppl_cmd->add_option("--ckpt", pp_ckpt, "model checkpoint")->check(CLI::ExistingFile);
    ppl_cmd->add_option("--manifest", pp_manifest, "composite manifest")->check(CLI::ExistingFile);
    ppl_cmd->add_option("--emb", pp_emb, "embedding file")->required()->check(CLI::ExistingFile);
    ppl_cmd->add_option("--vocab", pp_vocab, "vocab file")->required()->check(CLI::ExistingFile);
    ppl_cmd->add_option("--batch", pp_batch, "eval batch size");
    ppl_cmd->add_option("--seq", pp_seq, "eval window length");
    ppl_cmd->add_option("--report", pp_report, "append a row to this report CSV");
    ppl_cmd->add_option("--model-id", pp_model_id, "row id for the report");
    ppl_cmd->add_option("--probe", pp_probe, "probe name for the report");

    auto* khop_cmd = eval_cmd->add_subcommand("khop", "k-hop composition accuracy");
    std::string kh_ckpt, kh_emb, kh_vocab, kh_report, kh_model_id = "model";
    int kh_k = 2, kh_m = 12, kh_n = 400;
    std::string kh_seed = "7";
    khop_cmd->add_option("--ckpt", kh_ckpt, "model checkpoint")->required()->check(CLI::ExistingFile);
    khop_cmd->add_option("--emb", kh_emb, "embedding file")->required()->check(CLI::ExistingFile);
    khop_cmd->add_option("--vocab", kh_vocab, "vocab file")->required()->check(CLI::ExistingFile);
    khop_cmd->add_option("--k", kh_k, "hop count (1..3)");
    khop_cmd->add_option("--m", kh_m, "symbol pool size (8..26)");
    khop_cmd->add_option("--n", kh_n, "number of eval examples");
    khop_cmd->add_option("--seed", kh_seed, "dataset seed");
    khop_cmd->add_option("--report", kh_report, "append a row to this report CSV");
    khop_cmd->add_option("--model-id", kh_model_id, "row id for the report");

    // report
    auto* report_cmd = app.add_subcommand("report", "render a probe report to CSV + SVG");
    std::string rp_rows, rp_out = "report-out";
    report_cmd->add_option("--rows", rp_rows, "collected rows CSV")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--out-dir", rp_out, "output directory");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "sample text from a model");
    std::string gn_ckpt, gn_emb, gn_vocab, gn_prompt;
    int gn_steps = 64;
    float gn_temp = 0.0f;
    std::string gn_seed = "7";
    gen_cmd->add_option("--ckpt", gn_ckpt, "model checkpoint")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--emb", gn_emb, "embedding file")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--vocab", gn_vocab, "vocab file")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--prompt", gn_prompt, "prompt text")->required();
    gen_cmd->add_option("--steps", gn_steps, "tokens to generate");
    gen_cmd->add_option("--temperature", gn_temp, "0 = greedy argmax");
    gen_cmd->add_option("--seed", gn_seed, "sampling seed");

    // inspect
    auto* inspect_cmd = app.add_subcommand("inspect", "describe a checkpoint/embedding/adapter file");
    std::string in_path;
    inspect_cmd->add_option("file", in_path, "file to inspect")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*vocab_build) return cmd_vocab_build(vb_files, vb_specials, vb_out);
        if (*embed_build) {
            return cmd_embed_build(eb_vocab, eb_side, eb_dmodel, detail::parse_u64(eb_seed, 0), eb_out);
        }
        if (*train_cmd) return cmd_train(parse_config(train_config));
        if (*grow_cmd) return cmd_grow(parse_config(grow_config));
        if (*fusion_cmd) return cmd_fusion_train(parse_config(fusion_config));
        if (*merge_cmd) return cmd_merge(mg_ckpts, mg_mode, mg_emb, mg_out);
        if (*ppl_cmd) {
            if (pp_ckpt.empty() == pp_manifest.empty()) {
                throw Error("eval ppl: pass exactly one of --ckpt or --manifest");
            }
            return cmd_eval_ppl(pp_ckpt, pp_manifest, pp_emb, pp_vocab, pp_corpus, pp_batch, pp_seq,
                                pp_report, pp_model_id, pp_probe);
        }
        if (*khop_cmd) {
            return cmd_eval_khop(kh_ckpt, kh_emb, kh_vocab, kh_k, kh_m, kh_n,
                                 detail::parse_u64(kh_seed, 0), kh_report, kh_model_id);
        }
        if (*report_cmd) return cmd_report(rp_rows, rp_out);
        if (*gen_cmd) {
            return cmd_generate(gn_ckpt, gn_emb, gn_vocab, gn_prompt, gn_steps, gn_temp,
                                detail::parse_u64(gn_seed, 0));
        }
        if (*inspect_cmd) return cmd_inspect(in_path);
        std::fprintf(stderr, "no subcommand selected\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace cli
}  // namespace glyphgrow
