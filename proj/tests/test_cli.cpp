#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "glyphgrow/cli.hpp"
#include "test_helpers.hpp"

using namespace glyphgrow;
using testutil::temp_dir;
using testutil::write_file;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"glyphgrow"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::cli_main(static_cast<int>(argv.size()), argv.data());
}

struct CliFixture {
    std::filesystem::path dir = temp_dir("cli");
    std::string corpus_a, corpus_b, vocab, emb;

    CliFixture() {
        BilingualCorpora bc = make_bilingual_corpora(321, 24, 40);
        std::string a_text, b_text;
        for (const auto& d : bc.a.train_docs) a_text += d + "\n";
        for (const auto& d : bc.b.train_docs) b_text += d + "\n";
        corpus_a = write_file(dir / "a.txt", a_text).string();
        corpus_b = write_file(dir / "b.txt", b_text).string();
        vocab = (dir / "vocab.txt").string();
        emb = (dir / "emb.glye").string();
    }
};

}  // namespace

TEST_CASE("cli builds vocab and embedding deterministically", "[cli]") {
    CliFixture fx;
    REQUIRE(run_cli({"vocab", "build", "--out", fx.vocab, "--specials", "PAD,BOS,EOS,SEP",
                     fx.corpus_a, fx.corpus_b}) == 0);
    REQUIRE(std::filesystem::exists(fx.vocab));

    REQUIRE(run_cli({"embed", "build", "--vocab", fx.vocab, "--side", "8", "--d-model", "32",
                     "--out", fx.emb}) == 0);
    std::string first = read_file(fx.emb);
    const std::string emb2 = (fx.dir / "emb2.glye").string();
    REQUIRE(run_cli({"embed", "build", "--vocab", fx.vocab, "--side", "8", "--d-model", "32",
                     "--out", emb2}) == 0);
    CHECK(read_file(emb2) == first);  // same vocab -> identical bytes and fingerprint

    SECTION("inspect understands both formats") {
        CHECK(run_cli({"inspect", fx.emb}) == 0);
    }
}

TEST_CASE("cli train, merge, eval, generate pipeline", "[cli]") {
    CliFixture fx;
    REQUIRE(run_cli({"vocab", "build", "--out", fx.vocab, fx.corpus_a, fx.corpus_b}) == 0);
    REQUIRE(run_cli({"embed", "build", "--vocab", fx.vocab, "--side", "8", "--d-model", "32",
                     "--out", fx.emb}) == 0);

    auto cfg_text = [&](const std::string& corpus, const std::string& out) {
        return "vocab = " + fx.vocab + "\nembedding = " + fx.emb + "\ncorpus = " + corpus +
               "\nout_dir = " + out + "\nn_head = 4\ncontext_len = 48\nseq_len = 24\n" +
               "steps = 40\nbatch_size = 8\nlr = 3e-3\neval_every = 20\nseed = 5\n";
    };
    const std::string run_a = (fx.dir / "run_a").string();
    const std::string run_b = (fx.dir / "run_b").string();
    write_file(fx.dir / "a.cfg", cfg_text(fx.corpus_a, run_a));
    write_file(fx.dir / "b.cfg", cfg_text(fx.corpus_b, run_b));

    REQUIRE(run_cli({"train", "--config", (fx.dir / "a.cfg").string()}) == 0);
    REQUIRE(run_cli({"train", "--config", (fx.dir / "b.cfg").string()}) == 0);
    REQUIRE(std::filesystem::exists(run_a + "/model.ckpt"));
    REQUIRE(std::filesystem::exists(run_a + "/metrics-train.csv"));
    REQUIRE(std::filesystem::exists(run_a + "/run.lock"));

    SECTION("run.lock re-parses as a config") {
        RunConfig lock = parse_config(run_a + "/run.lock");
        CHECK(lock.steps == 40);
        CHECK(lock.out_dir == run_a);
    }

    SECTION("merge + composite eval + report") {
        const std::string moe_dir = (fx.dir / "moe").string();
        REQUIRE(run_cli({"merge", "--mode", "average", "--emb", fx.emb, "--out-dir", moe_dir,
                         run_a + "/model.ckpt", run_b + "/model.ckpt"}) == 0);
        REQUIRE(std::filesystem::exists(moe_dir + "/moe.manifest"));

        const std::string report = (fx.dir / "rows.csv").string();
        REQUIRE(run_cli({"eval", "ppl", "--manifest", moe_dir + "/moe.manifest", "--emb", fx.emb,
                         "--vocab", fx.vocab, "--batch", "8", "--seq", "24", "--report", report,
                         "--model-id", "moe", "--probe", "ppl_a", fx.corpus_a}) == 0);
        REQUIRE(run_cli({"eval", "ppl", "--ckpt", run_a + "/model.ckpt", "--emb", fx.emb,
                         "--vocab", fx.vocab, "--batch", "8", "--seq", "24", "--report", report,
                         "--model-id", "expert_a", "--probe", "ppl_a", fx.corpus_a}) == 0);
        const std::string report_dir = (fx.dir / "report").string();
        REQUIRE(run_cli({"report", "--rows", report, "--out-dir", report_dir}) == 0);
        CHECK(std::filesystem::exists(report_dir + "/report.csv"));
        CHECK(std::filesystem::exists(report_dir + "/curves.svg"));
    }

    SECTION("adapter merge writes an adapter file and fusion-train updates it") {
        const std::string moe_dir = (fx.dir / "moe_ad").string();
        REQUIRE(run_cli({"merge", "--mode", "adapter", "--emb", fx.emb, "--out-dir", moe_dir,
                         run_a + "/model.ckpt", run_b + "/model.ckpt"}) == 0);
        REQUIRE(std::filesystem::exists(moe_dir + "/fusion-adapter.bin"));

        const std::string fus_dir = (fx.dir / "fusion").string();
        std::string fcfg = "vocab = " + fx.vocab + "\nembedding = " + fx.emb + "\ncorpus = " +
                           fx.corpus_a + "," + fx.corpus_b + "\nout_dir = " + fus_dir +
                           "\nmanifest = " + moe_dir + "/moe.manifest\n" +
                           "fusion_trainable = adapter\nsteps = 6\nbatch_size = 4\nseq_len = 24\n" +
                           "context_len = 48\nlr = 1e-3\nseed = 6\n";
        write_file(fx.dir / "f.cfg", fcfg);
        REQUIRE(run_cli({"fusion-train", "--config", (fx.dir / "f.cfg").string()}) == 0);
        CHECK(std::filesystem::exists(fus_dir + "/moe.manifest"));
        CHECK(std::filesystem::exists(fus_dir + "/fusion-adapter.bin"));
        CHECK(std::filesystem::exists(fus_dir + "/metrics-fusion.csv"));
    }

    SECTION("incompatible fingerprints exit with the runtime error code") {
        // an embedding built over corpus A only has a different fingerprint
        const std::string other_vocab = (fx.dir / "vocab_a.txt").string();
        const std::string other_emb = (fx.dir / "emb_a.glye").string();
        REQUIRE(run_cli({"vocab", "build", "--out", other_vocab, fx.corpus_a}) == 0);
        REQUIRE(run_cli({"embed", "build", "--vocab", other_vocab, "--side", "8", "--d-model",
                         "32", "--out", other_emb}) == 0);
        CHECK(run_cli({"merge", "--mode", "average", "--emb", other_emb, "--out-dir",
                       (fx.dir / "bad_moe").string(), run_a + "/model.ckpt",
                       run_b + "/model.ckpt"}) == 2);
    }

    SECTION("generate is deterministic at temperature zero") {
        CHECK(run_cli({"generate", "--ckpt", run_a + "/model.ckpt", "--emb", fx.emb, "--vocab",
                       fx.vocab, "--prompt", "a", "--steps", "8", "--temperature", "0"}) == 0);
    }

    SECTION("inspect prints checkpoint structure") {
        CHECK(run_cli({"inspect", run_a + "/model.ckpt"}) == 0);
    }
}

TEST_CASE("cli usage errors exit 1, runtime errors exit 2", "[cli]") {
    CHECK(run_cli({"frobnicate"}) == 1);
    CHECK(run_cli({}) == 1);
    CHECK(run_cli({"train"}) == 1);  // missing --config

    CliFixture fx;
    // config referencing a missing vocab file is a runtime error
    write_file(fx.dir / "bad.cfg", "vocab = " + (fx.dir / "nope.txt").string() + "\n");
    CHECK(run_cli({"train", "--config", (fx.dir / "bad.cfg").string()}) == 2);
}

TEST_CASE("cli grow emits stage artifacts", "[cli]") {
    CliFixture fx;
    REQUIRE(run_cli({"vocab", "build", "--out", fx.vocab, fx.corpus_a}) == 0);
    REQUIRE(run_cli({"embed", "build", "--vocab", fx.vocab, "--side", "8", "--d-model", "32",
                     "--out", fx.emb}) == 0);
    const std::string out = (fx.dir / "grow_run").string();
    std::string cfg = "vocab = " + fx.vocab + "\nembedding = " + fx.emb + "\ncorpus = " +
                      fx.corpus_a + "\nout_dir = " + out + "\nstages = 3\nsteps = 25\n" +
                      "batch_size = 8\nseq_len = 24\ncontext_len = 48\nlr = 3e-3\n" +
                      "eval_every = 20\nseed = 11\n";
    write_file(fx.dir / "g.cfg", cfg);
    REQUIRE(run_cli({"grow", "--config", (fx.dir / "g.cfg").string()}) == 0);
    for (int k = 1; k <= 3; ++k) {
        CHECK(std::filesystem::exists(out + "/stage-" + std::to_string(k) + ".ckpt"));
        CHECK(std::filesystem::exists(out + "/metrics-stage-" + std::to_string(k) + ".csv"));
    }
    CHECK(std::filesystem::exists(out + "/run.lock"));

    SECTION("khop eval runs against a grown stage") {
        // the markov vocab lacks '?' so build a khop-capable vocab here
        const std::string kv = (fx.dir / "kvocab.txt").string();
        const std::string ke = (fx.dir / "kemb.glye").string();
        write_file(fx.dir / "ksyms.txt", "abcdefghijklmnop?");
        REQUIRE(run_cli({"vocab", "build", "--out", kv, (fx.dir / "ksyms.txt").string()}) == 0);
        REQUIRE(run_cli({"embed", "build", "--vocab", kv, "--side", "8", "--d-model", "32",
                         "--out", ke}) == 0);
        const std::string kout = (fx.dir / "khop_run").string();
        std::string kcfg = "vocab = " + kv + "\nembedding = " + ke + "\nout_dir = " + kout +
                           "\ntask = khop\nkhop_k = 1\nkhop_m = 8\nkhop_train_examples = 64\n" +
                           "khop_eval_examples = 16\nstages = 1\nsteps = 10\nbatch_size = 8\n" +
                           "seq_len = 28\ncontext_len = 48\neval_every = 10\nseed = 3\n";
        write_file(fx.dir / "k.cfg", kcfg);
        REQUIRE(run_cli({"grow", "--config", (fx.dir / "k.cfg").string()}) == 0);
        CHECK(run_cli({"eval", "khop", "--ckpt", kout + "/stage-1.ckpt", "--emb", ke, "--vocab",
                       kv, "--k", "1", "--m", "8", "--n", "32", "--seed", "9"}) == 0);
    }
}
