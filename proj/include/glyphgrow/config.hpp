#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "glyphgrow/errors.hpp"
#include "glyphgrow/vocab.hpp"

namespace glyphgrow {

// Every tunable of the toolkit in one flat key = value file. Unknown keys
// are rejected; missing keys take the defaults below; duplicates are errors.
struct RunConfig {
    // inputs
    std::string vocab_path;
    std::string embedding_path;
    std::vector<std::string> corpus_paths;
    std::string out_dir = "run-out";

    // substrate
    int glyph_side = 16;
    int d_model = 64;
    std::uint64_t proj_seed = 0x9E3779B97F4A7C15ull;

    // model
    int n_head = 4;
    int n_layer = 1;
    int d_ff = 0;  // 0 -> 4 * d_model
    int context_len = 128;

    // training
    int steps = 500;
    int batch_size = 16;
    int seq_len = 64;
    float lr = 3e-4f;
    std::string optimizer = "adamw";  // adamw | sgd
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float adam_eps = 1e-8f;
    float weight_decay = 0.01f;
    int eval_every = 100;
    int eval_batch_size = 16;
    float holdout_frac = 0.1f;
    std::uint64_t seed = 42;

    // growth
    int stages = 4;
    int max_depth = 12;
    std::string grow_init = "random";  // random | zero
    float grow_init_std = 0.06f;       // init scale for stacked blocks
    bool lora = false;
    int lora_rank = 8;
    float lora_alpha = 16.0f;
    int lora_min_layer = 3;

    // task
    std::string task = "lm";  // lm | khop
    int khop_k = 2;
    int khop_m = 12;
    int khop_train_examples = 3000;
    int khop_eval_examples = 400;

    // fusion training
    std::string manifest_path;
    std::string fusion_trainable = "adapter";  // adapter | adapter+heads

    void validate() const {
        if (d_model < 8) throw ParseError("config: d_model must be >= 8");
        if (n_head < 1 || d_model % n_head != 0) {
            throw ParseError("config: d_model (" + std::to_string(d_model) +
                             ") must be divisible by n_head (" + std::to_string(n_head) + ")");
        }
        if (n_layer < 1) throw ParseError("config: n_layer must be >= 1");
        if (glyph_side != 8 && glyph_side != 16) throw ParseError("config: glyph_side must be 8 or 16");
        if (context_len < 2) throw ParseError("config: context_len must be >= 2");
        if (seq_len < 1 || seq_len > context_len) {
            throw ParseError("config: seq_len must be in [1, context_len]");
        }
        if (batch_size < 1 || eval_batch_size < 1) throw ParseError("config: batch sizes must be >= 1");
        if (steps < 0) throw ParseError("config: steps must be >= 0");
        if (eval_every < 1) throw ParseError("config: eval_every must be >= 1");
        if (holdout_frac <= 0.0f || holdout_frac >= 1.0f) {
            throw ParseError("config: holdout_frac must be in (0, 1)");
        }
        if (optimizer != "adamw" && optimizer != "sgd") {
            throw ParseError("config: optimizer must be adamw or sgd");
        }
        if (grow_init != "random" && grow_init != "zero") {
            throw ParseError("config: grow_init must be random or zero");
        }
        if (grow_init_std <= 0.0f || grow_init_std > 1.0f) {
            throw ParseError("config: grow_init_std must be in (0, 1]");
        }
        if (stages < 1 || stages > max_depth) throw ParseError("config: stages must be in [1, max_depth]");
        if (lora_rank < 1 || lora_rank > d_model / 2) {
            throw ParseError("config: lora_rank must be in [1, d_model/2]");
        }
        if (task != "lm" && task != "khop") throw ParseError("config: task must be lm or khop");
        if (khop_k < 1 || khop_k > 3) throw ParseError("config: khop_k must be in {1,2,3}");
        if (khop_m < 8 || khop_m > 26) throw ParseError("config: khop_m must be in [8,26]");
        if (fusion_trainable != "adapter" && fusion_trainable != "adapter+heads") {
            throw ParseError("config: fusion_trainable must be adapter or adapter+heads");
        }
        for (const std::string* p : {&vocab_path, &embedding_path, &manifest_path}) {
            if (!p->empty() && !std::filesystem::exists(*p)) {
                throw ParseError("config: referenced path does not exist: " + *p);
            }
        }
        for (const auto& p : corpus_paths) {
            if (!std::filesystem::exists(p)) {
                throw ParseError("config: referenced path does not exist: " + p);
            }
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline std::uint64_t parse_u64(const std::string& v, int lineno) {
    try {
        if (v.rfind("0x", 0) == 0 || v.rfind("0X", 0) == 0) return std::stoull(v.substr(2), nullptr, 16);
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad integer value '" + v + "'");
    }
}

inline int parse_int(const std::string& v, int lineno) {
    try {
        return std::stoi(v);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad integer value '" + v + "'");
    }
}

inline float parse_float(const std::string& v, int lineno) {
    try {
        return std::stof(v);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" + v + "'");
    }
}

inline bool parse_bool(const std::string& v, int lineno) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ParseError("line " + std::to_string(lineno) + ": bad boolean '" + v + "' (use on/off)");
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text, std::string_view source = "<memory>") {
    RunConfig cfg;
    std::map<std::string, int> seen;  // key -> first line
    std::size_t pos = 0;
    int lineno = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) +
                             ": expected 'key = value'");
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": empty key");
        }
        auto [it, inserted] = seen.emplace(key, lineno);
        if (!inserted) {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": duplicate key '" +
                             key + "' (first set on line " + std::to_string(it->second) + ")");
        }

        if (key == "vocab") cfg.vocab_path = val;
        else if (key == "embedding") cfg.embedding_path = val;
        else if (key == "corpus") {
            std::size_t p = 0;
            while (p <= val.size()) {
                std::size_t c = val.find(',', p);
                if (c == std::string::npos) c = val.size();
                std::string item = detail::trim(val.substr(p, c - p));
                if (!item.empty()) cfg.corpus_paths.push_back(item);
                p = c + 1;
            }
        }
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "glyph_side") cfg.glyph_side = detail::parse_int(val, lineno);
        else if (key == "d_model") cfg.d_model = detail::parse_int(val, lineno);
        else if (key == "proj_seed") cfg.proj_seed = detail::parse_u64(val, lineno);
        else if (key == "n_head") cfg.n_head = detail::parse_int(val, lineno);
        else if (key == "n_layer") cfg.n_layer = detail::parse_int(val, lineno);
        else if (key == "d_ff") cfg.d_ff = detail::parse_int(val, lineno);
        else if (key == "context_len") cfg.context_len = detail::parse_int(val, lineno);
        else if (key == "steps") cfg.steps = detail::parse_int(val, lineno);
        else if (key == "batch_size") cfg.batch_size = detail::parse_int(val, lineno);
        else if (key == "seq_len") cfg.seq_len = detail::parse_int(val, lineno);
        else if (key == "lr") cfg.lr = detail::parse_float(val, lineno);
        else if (key == "optimizer") cfg.optimizer = val;
        else if (key == "beta1") cfg.beta1 = detail::parse_float(val, lineno);
        else if (key == "beta2") cfg.beta2 = detail::parse_float(val, lineno);
        else if (key == "adam_eps") cfg.adam_eps = detail::parse_float(val, lineno);
        else if (key == "weight_decay") cfg.weight_decay = detail::parse_float(val, lineno);
        else if (key == "eval_every") cfg.eval_every = detail::parse_int(val, lineno);
        else if (key == "eval_batch_size") cfg.eval_batch_size = detail::parse_int(val, lineno);
        else if (key == "holdout_frac") cfg.holdout_frac = detail::parse_float(val, lineno);
        else if (key == "seed") cfg.seed = detail::parse_u64(val, lineno);
        else if (key == "stages") cfg.stages = detail::parse_int(val, lineno);
        else if (key == "max_depth") cfg.max_depth = detail::parse_int(val, lineno);
        else if (key == "grow_init") cfg.grow_init = val;
        else if (key == "grow_init_std") cfg.grow_init_std = detail::parse_float(val, lineno);
        else if (key == "lora") cfg.lora = detail::parse_bool(val, lineno);
        else if (key == "lora_rank") cfg.lora_rank = detail::parse_int(val, lineno);
        else if (key == "lora_alpha") cfg.lora_alpha = detail::parse_float(val, lineno);
        else if (key == "lora_min_layer") cfg.lora_min_layer = detail::parse_int(val, lineno);
        else if (key == "task") cfg.task = val;
        else if (key == "khop_k") cfg.khop_k = detail::parse_int(val, lineno);
        else if (key == "khop_m") cfg.khop_m = detail::parse_int(val, lineno);
        else if (key == "khop_train_examples") cfg.khop_train_examples = detail::parse_int(val, lineno);
        else if (key == "khop_eval_examples") cfg.khop_eval_examples = detail::parse_int(val, lineno);
        else if (key == "manifest") cfg.manifest_path = val;
        else if (key == "fusion_trainable") cfg.fusion_trainable = val;
        else {
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": unknown key '" +
                             key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

// Canonical echo of a resolved config; parseable by parse_config_text, so a
// run.lock reproduces its run.
inline std::string config_to_text(const RunConfig& c) {
    std::string out;
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    auto f2s = [](float v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
        return std::string(buf);
    };
    char hexbuf[24];
    if (!c.vocab_path.empty()) kv("vocab", c.vocab_path);
    if (!c.embedding_path.empty()) kv("embedding", c.embedding_path);
    if (!c.corpus_paths.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < c.corpus_paths.size(); ++i) {
            if (i) joined += ",";
            joined += c.corpus_paths[i];
        }
        kv("corpus", joined);
    }
    kv("out_dir", c.out_dir);
    kv("glyph_side", std::to_string(c.glyph_side));
    kv("d_model", std::to_string(c.d_model));
    std::snprintf(hexbuf, sizeof(hexbuf), "0x%llx", static_cast<unsigned long long>(c.proj_seed));
    kv("proj_seed", hexbuf);
    kv("n_head", std::to_string(c.n_head));
    kv("n_layer", std::to_string(c.n_layer));
    kv("d_ff", std::to_string(c.d_ff));
    kv("context_len", std::to_string(c.context_len));
    kv("steps", std::to_string(c.steps));
    kv("batch_size", std::to_string(c.batch_size));
    kv("seq_len", std::to_string(c.seq_len));
    kv("lr", f2s(c.lr));
    kv("optimizer", c.optimizer);
    kv("beta1", f2s(c.beta1));
    kv("beta2", f2s(c.beta2));
    kv("adam_eps", f2s(c.adam_eps));
    kv("weight_decay", f2s(c.weight_decay));
    kv("eval_every", std::to_string(c.eval_every));
    kv("eval_batch_size", std::to_string(c.eval_batch_size));
    kv("holdout_frac", f2s(c.holdout_frac));
    kv("seed", std::to_string(c.seed));
    kv("stages", std::to_string(c.stages));
    kv("max_depth", std::to_string(c.max_depth));
    kv("grow_init", c.grow_init);
    kv("grow_init_std", f2s(c.grow_init_std));
    kv("lora", c.lora ? "on" : "off");
    kv("lora_rank", std::to_string(c.lora_rank));
    kv("lora_alpha", f2s(c.lora_alpha));
    kv("lora_min_layer", std::to_string(c.lora_min_layer));
    kv("task", c.task);
    kv("khop_k", std::to_string(c.khop_k));
    kv("khop_m", std::to_string(c.khop_m));
    kv("khop_train_examples", std::to_string(c.khop_train_examples));
    kv("khop_eval_examples", std::to_string(c.khop_eval_examples));
    if (!c.manifest_path.empty()) kv("manifest", c.manifest_path);
    kv("fusion_trainable", c.fusion_trainable);
    return out;
}

}  // namespace glyphgrow
