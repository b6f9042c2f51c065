#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "glyphgrow/corpus.hpp"
#include "glyphgrow/growth.hpp"
#include "glyphgrow/model.hpp"
#include "glyphgrow/store.hpp"
#include "test_helpers.hpp"

using namespace glyphgrow;
using testutil::block_bytes;
using testutil::temp_dir;
using testutil::tiny_config;
using testutil::tiny_embedding;
using testutil::tiny_vocab;

namespace {

TokenCorpus toy_corpus(const VocabSpec& vocab, int docs, int len, std::uint64_t seed) {
    BilingualCorpora bc = make_bilingual_corpora(seed, docs, len);
    return encode_corpus(bc.a.train_docs, vocab);
}

VocabSpec markov_vocab(std::uint64_t seed) {
    BilingualCorpora bc = make_bilingual_corpora(seed, 4, 64);
    return build_vocab_from_text(bc.a.train_docs, {"PAD", "BOS", "EOS", "SEP"});
}

}  // namespace

TEST_CASE("grow freezes the stack and appends one trainable block", "[growth]") {
    VocabSpec vocab = tiny_vocab("abcdefgh");
    EmbeddingMatrix emb = tiny_embedding(vocab, 16);
    ModelConfig cfg = tiny_config(emb, 2, 1, 16);
    TransformerModel m = init_model(cfg, emb, 5);

    auto before = block_bytes(m.blocks[0]);
    grow(m, 5);
    REQUIRE(m.config.n_layer == 2);
    REQUIRE(m.blocks.size() == 2);
    CHECK(m.blocks[0].frozen);
    CHECK_FALSE(m.blocks[1].frozen);
    CHECK(block_bytes(m.blocks[0]) == before);
    CHECK_FALSE(m.pos_emb.requires_grad());
    CHECK(m.output_proj.requires_grad());

    // trainable set after grow: new block + final norm + head
    const std::int64_t d = cfg.d_model, ff = cfg.ff_width(), v = cfg.vocab_size;
    CHECK(count_trainable(m) == 4 * d * d + 2 * d * ff + 4 * d + 2 * d + d * v);

    SECTION("max depth is enforced") {
        CHECK_THROWS_AS(grow(m, 5, false, 2), Error);
    }
}

TEST_CASE("train_stage with zero steps changes nothing", "[growth]") {
    VocabSpec vocab = markov_vocab(10);
    EmbeddingMatrix emb = tiny_embedding(vocab, 16);
    TransformerModel m = init_model(tiny_config(emb, 2, 1, 32), emb, 5);
    TokenCorpus corpus = toy_corpus(vocab, 6, 48, 10);

    auto before = block_bytes(m.blocks[0]);
    StageSpec stage;
    stage.target_n_layer = 1;
    stage.steps = 0;
    stage.seq_len = 24;
    StageMetrics metrics = train_stage(m, corpus, corpus, stage, 10, 4, 1);
    CHECK(block_bytes(m.blocks[0]) == before);
    // only the two boundary evals are recorded
    REQUIRE(metrics.series.size() == 2);
    CHECK(metrics.series[0].split == "eval");
    CHECK(metrics.loss_before_grow == metrics.loss_after_grow);
}

TEST_CASE("a training stage reduces eval loss and honors the freeze mask", "[growth]") {
    VocabSpec vocab = markov_vocab(11);
    EmbeddingMatrix emb = tiny_embedding(vocab, 32);
    ModelConfig cfg = tiny_config(emb, 4, 1, 32);
    TransformerModel m = init_model(cfg, emb, 5);
    TokenCorpus corpus = toy_corpus(vocab, 16, 48, 11);

    StageSpec stage;
    stage.target_n_layer = 1;
    stage.steps = 150;
    stage.batch_size = 8;
    stage.seq_len = 24;
    stage.lr = 3e-3f;
    StageMetrics metrics = train_stage(m, corpus, corpus, stage, 50, 8, 1);
    CHECK(metrics.loss_before_grow < metrics.loss_after_grow);
    CHECK(metrics.trainable_params == count_trainable(m));

    // stage 2: block 0 is frozen and must not move a byte
    grow(m, 5);
    auto frozen_before = block_bytes(m.blocks[0]);
    StageSpec stage2 = stage;
    stage2.target_n_layer = 2;
    stage2.steps = 40;
    train_stage(m, corpus, corpus, stage2, 20, 8, 2);
    CHECK(block_bytes(m.blocks[0]) == frozen_before);
}

TEST_CASE("attach_lora is a bit-exact no-op until trained", "[growth]") {
    VocabSpec vocab = markov_vocab(12);
    EmbeddingMatrix emb = tiny_embedding(vocab, 16);
    TransformerModel m = init_model(tiny_config(emb, 2, 1, 16), emb, 5);
    TokenCorpus corpus = toy_corpus(vocab, 6, 24, 12);
    grow(m, 5);

    std::vector<int> ids = {1, 4, 5, 6};
    Tensor before = forward(m, ids, 1, 4);

    LoraConfig lc;
    lc.rank = 4;
    attach_lora(m, lc, 99);
    REQUIRE(m.has_lora());
    Tensor after = forward(m, ids, 1, 4);
    CHECK(before.data() == after.data());  // b = 0 makes the attach invisible

    // adapter parameter count for one d x d target with rank r is 2 r d
    const int d = 16, r = 4;
    std::int64_t adapter_params = 0;
    for (const auto& [t, ad] : m.blocks[0].adapters) adapter_params += ad.a.size() + ad.b.size();
    // four d x d attention targets plus the two d x ff mlp targets
    CHECK(adapter_params == 4 * (2 * r * d) + (d * r + r * 4 * d) + (4 * d * r + r * d));

    SECTION("base weights stay frozen while adapters train") {
        auto base_before = block_bytes(m.blocks[0]);
        ParamSet params = params_of(m);
        OptimizerState opt;
        opt.lr = 1e-2f;
        Rng rng(7);
        for (int step = 0; step < 10; ++step) {
            Batch b = make_batch(corpus, rng, 4, 12);
            Tensor loss = loss_on_batch(m, b.x, b.y, b.batch, b.time, corpus.pad_id);
            backward(loss);
            optimizer_step(params, opt);
        }
        CHECK(block_bytes(m.blocks[0]) == base_before);
        bool adapters_moved = false;
        for (const auto& [t, ad] : m.blocks[0].adapters) {
            for (float v : ad.b.data()) adapters_moved |= v != 0.0f;
        }
        CHECK(adapters_moved);
    }
    SECTION("unknown target is rejected") {
        TransformerModel m2 = init_model(tiny_config(emb, 2, 1, 16), emb, 6);
        grow(m2, 6);
        LoraConfig bad;
        bad.targets = {"attn.wx"};
        CHECK_THROWS_AS(attach_lora(m2, bad, 1), Error);
    }
    SECTION("attach requires a frozen block") {
        TransformerModel m3 = init_model(tiny_config(emb, 2, 1, 16), emb, 7);
        CHECK_THROWS_AS(attach_lora(m3, lc, 1), Error);
    }
    SECTION("rank bounds follow d_model") {
        TransformerModel m4 = init_model(tiny_config(emb, 2, 1, 16), emb, 8);
        grow(m4, 8);
        LoraConfig big;
        big.rank = 9;  // > d_model / 2
        CHECK_THROWS_AS(attach_lora(m4, big, 1), Error);
    }
}

TEST_CASE("merge_lora folds adapters in place", "[growth]") {
    VocabSpec vocab = markov_vocab(13);
    EmbeddingMatrix emb = tiny_embedding(vocab, 16);
    TransformerModel m = init_model(tiny_config(emb, 2, 1, 16), emb, 5);
    TokenCorpus corpus = toy_corpus(vocab, 6, 24, 13);
    grow(m, 5);
    LoraConfig lc;
    lc.rank = 4;
    attach_lora(m, lc, 99);

    SECTION("merging zero adapters is a byte-level no-op") {
        auto before = block_bytes(m.blocks[0]);
        merge_lora(m);
        CHECK(block_bytes(m.blocks[0]) == before);
        CHECK_FALSE(m.has_lora());
        CHECK_THROWS_AS(merge_lora(m), Error);  // double merge
    }
    SECTION("trained adapters fold with logit drift under 1e-5") {
        ParamSet params = params_of(m);
        OptimizerState opt;
        opt.lr = 5e-3f;
        Rng rng(7);
        for (int step = 0; step < 20; ++step) {
            Batch b = make_batch(corpus, rng, 4, 12);
            Tensor loss = loss_on_batch(m, b.x, b.y, b.batch, b.time, corpus.pad_id);
            backward(loss);
            optimizer_step(params, opt);
        }
        std::vector<int> ids = {1, 4, 5, 6, 7, 8};
        Tensor pre = forward(m, ids, 1, 6);
        merge_lora(m);
        Tensor post = forward(m, ids, 1, 6);
        float max_diff = 0.0f;
        for (std::size_t i = 0; i < pre.data().size(); ++i) {
            max_diff = std::max(max_diff, std::abs(pre.data()[i] - post.data()[i]));
        }
        CHECK(max_diff < 1e-5f);
    }
}

TEST_CASE("run_growth emits per-stage artifacts and the spike signature", "[growth]") {
    VocabSpec vocab = markov_vocab(14);
    EmbeddingMatrix emb = tiny_embedding(vocab, 32);
    ModelConfig cfg = tiny_config(emb, 4, 1, 32);
    BilingualCorpora bc = make_bilingual_corpora(14, 24, 48);
    TokenCorpus train = encode_corpus(bc.a.train_docs, vocab);
    TokenCorpus heldout = encode_corpus(bc.a.heldout_docs, vocab);

    GrowthSchedule schedule;
    for (int k = 1; k <= 3; ++k) {
        StageSpec s;
        s.target_n_layer = k;
        s.steps = 120;
        s.batch_size = 8;
        s.seq_len = 24;
        s.lr = 3e-3f;
        schedule.stages.push_back(s);
    }
    schedule.eval_every = 60;
    schedule.eval_batch_size = 8;

    auto dir = temp_dir("growth_run");
    GrowthRun run = run_growth(schedule, train, heldout, cfg, emb, 2024, dir.string(), "unit");

    REQUIRE(run.stage_metrics.size() == 3);
    REQUIRE(run.checkpoint_paths.size() == 3);
    for (int k = 0; k < 3; ++k) {
        REQUIRE(std::filesystem::exists(run.checkpoint_paths[k]));
        REQUIRE(std::filesystem::exists(run.metrics_paths[k]));
        TransformerModel stage_model = load_checkpoint(run.checkpoint_paths[k], emb);
        CHECK(stage_model.config.n_layer == k + 1);
    }
    // every grow event perturbs the function upward
    for (std::size_t k = 1; k < run.stage_metrics.size(); ++k) {
        CHECK(run.stage_metrics[k].loss_after_grow >
              run.stage_metrics[k - 1].loss_before_grow);
    }
    // freeze ledger: block i in the final model matches its stage-(i+1) snapshot
    for (int i = 0; i < 2; ++i) {
        TransformerModel snap = load_checkpoint(run.checkpoint_paths[i], emb);
        CHECK(block_bytes(run.model.blocks[i]) == block_bytes(snap.blocks[i]));
    }
    // metrics CSV carries the documented header
    std::string csv = read_file(run.metrics_paths[0]);
    CHECK(csv.rfind("run_id,stage,step,split,loss,ppl,lr,trainable_params,wall_ms\n", 0) == 0);

    SECTION("zero-init growth suppresses the spike") {
        GrowthSchedule quiet = schedule;
        for (auto& s : quiet.stages) s.steps = 30;
        quiet.grow_zero_init = true;
        GrowthRun qr = run_growth(quiet, train, heldout, cfg, emb, 2024);
        for (std::size_t k = 1; k < qr.stage_metrics.size(); ++k) {
            CHECK(qr.stage_metrics[k].loss_after_grow ==
                  Catch::Approx(qr.stage_metrics[k - 1].loss_before_grow).margin(1e-5));
        }
    }
}

TEST_CASE("growth schedule validation", "[growth]") {
    GrowthSchedule s;
    CHECK_THROWS_AS(s.validate(), Error);  // empty
    StageSpec a;
    a.target_n_layer = 2;
    s.stages.push_back(a);
    CHECK_THROWS_AS(s.validate(), Error);  // stage 1 must target one layer
}
