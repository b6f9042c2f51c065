#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "glyphgrow/digest.hpp"
#include "glyphgrow/embedding.hpp"
#include "glyphgrow/errors.hpp"
#include "glyphgrow/model.hpp"
#include "glyphgrow/serialize.hpp"

namespace glyphgrow {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::uint32_t kFlagHasLora = 1u << 0;

namespace detail {

inline void write_record(ByteWriter& w, const std::string& name, const Tensor& t) {
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.u8(static_cast<std::uint8_t>(t.rank()));
    for (int i = 0; i < t.rank(); ++i) w.u32(static_cast<std::uint32_t>(t.dim(i)));
    for (float v : t.data()) w.f32(v);
}

struct RawRecord {
    Shape shape;
    std::vector<float> data;
};

inline std::pair<std::string, RawRecord> read_record(ByteReader& r) {
    std::uint16_t name_len = r.u16();
    std::string name = r.string(name_len);
    std::uint8_t rank = r.u8();
    RawRecord rec;
    std::int64_t n = 1;
    for (int i = 0; i < rank; ++i) {
        std::uint32_t d = r.u32();
        if (d == 0 || d > (1u << 28)) r.fail("implausible dim " + std::to_string(d) + " in " + name);
        rec.shape.push_back(static_cast<int>(d));
        n *= d;
    }
    rec.data.resize(static_cast<std::size_t>(n));
    for (auto& v : rec.data) v = r.f32();
    return {std::move(name), std::move(rec)};
}

inline std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace detail

// Checkpoint layout: magic CLGW, u32 version, u32 x7 (V, d_model, n_head,
// n_layer, d_ff, context_len, flags), u64 embedding fingerprint, u32 tensor
// count, tensor records (u16 name length, name, u8 rank, u32 dims, f32 data),
// u32 CRC32 over everything before it. The embedding itself is not stored;
// models re-attach the substrate at load and the fingerprint is the gate.
inline std::string checkpoint_to_bytes(TransformerModel& m) {
    ByteWriter w;
    w.bytes("CLGW", 4);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(m.config.vocab_size));
    w.u32(static_cast<std::uint32_t>(m.config.d_model));
    w.u32(static_cast<std::uint32_t>(m.config.n_head));
    w.u32(static_cast<std::uint32_t>(m.config.n_layer));
    w.u32(static_cast<std::uint32_t>(m.config.ff_width()));
    w.u32(static_cast<std::uint32_t>(m.config.context_len));
    const bool lora = m.has_lora();
    w.u32(lora ? kFlagHasLora : 0u);
    w.u64(m.config.emb_fingerprint);

    std::uint32_t count = 0;
    for_each_param(m, [&](const std::string&, Tensor&) { ++count; });
    if (lora) ++count;  // lora.alpha
    w.u32(count);
    for_each_param(m, [&](const std::string& name, Tensor& t) { detail::write_record(w, name, t); });
    if (lora) {
        Tensor alpha = Tensor::from_data({1}, {m.lora_alpha});
        detail::write_record(w, "lora.alpha", alpha);
    }
    std::uint32_t crc = crc32_of(w.view());
    w.u32(crc);
    return std::move(w).take();
}

inline void save_checkpoint(TransformerModel& m, const std::string& path) {
    atomic_write_file(path, checkpoint_to_bytes(m));
}

// Rebuilds a model from checkpoint bytes on the given substrate. The stored
// fingerprint must equal the substrate's; per growth convention all blocks
// below the top are frozen and the position table is frozen for multi-layer
// models.
inline TransformerModel checkpoint_from_bytes(const std::string& bytes, const EmbeddingMatrix& emb,
                                              std::string_view source = "<memory>") {
    if (bytes.size() < 4 + 4) throw ParseError(std::string(source) + ": file too short");
    // checksum covers everything before the trailing u32
    const std::size_t body = bytes.size() - 4;
    std::uint32_t want_crc = 0;
    for (int i = 0; i < 4; ++i) {
        want_crc |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[body + i])) << (8 * i);
    }
    std::uint32_t got_crc = crc32_of(std::string_view(bytes).substr(0, body));
    if (want_crc != got_crc) {
        throw ParseError(std::string(source) + ": checksum mismatch, file corrupt or truncated");
    }

    ByteReader r(std::string_view(bytes).substr(0, body), source);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, "CLGW", 4) != 0) {
        throw ParseError(std::string(source) + ": bad magic, expected CLGW");
    }
    std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) {
        throw ParseError(std::string(source) + ": unsupported version " + std::to_string(version));
    }
    ModelConfig cfg;
    cfg.vocab_size = static_cast<int>(r.u32());
    cfg.d_model = static_cast<int>(r.u32());
    cfg.n_head = static_cast<int>(r.u32());
    cfg.n_layer = static_cast<int>(r.u32());
    cfg.d_ff = static_cast<int>(r.u32());
    cfg.context_len = static_cast<int>(r.u32());
    std::uint32_t flags = r.u32();
    cfg.emb_fingerprint = r.u64();
    cfg.validate();

    if (cfg.emb_fingerprint != emb.fingerprint) {
        throw SubstrateError(std::string(source) + ": incompatible substrate: checkpoint fingerprint " +
                             detail::hex64(cfg.emb_fingerprint) + " vs embedding " +
                             detail::hex64(emb.fingerprint));
    }
    if (cfg.vocab_size != emb.vocab_size || cfg.d_model != emb.width) {
        throw SubstrateError(std::string(source) + ": embedding shape mismatch");
    }

    std::uint32_t count = r.u32();
    std::map<std::string, detail::RawRecord> records;
    for (std::uint32_t i = 0; i < count; ++i) {
        auto [name, rec] = detail::read_record(r);
        if (!records.emplace(std::move(name), std::move(rec)).second) {
            r.fail("duplicate tensor record");
        }
    }
    r.expect_end();

    TransformerModel m;
    m.config = cfg;
    m.embedding = Tensor::from_data({emb.vocab_size, emb.width}, emb.rows, false);
    auto take = [&](const std::string& name) {
        auto it = records.find(name);
        if (it == records.end()) {
            throw ParseError(std::string(source) + ": missing tensor record " + name);
        }
        Tensor t = Tensor::from_data(it->second.shape, std::move(it->second.data));
        records.erase(it);
        return t;
    };
    m.pos_emb = take("pos_emb");
    const int d = cfg.d_model, ff = cfg.ff_width();
    for (int i = 0; i < cfg.n_layer; ++i) {
        const std::string p = "block" + std::to_string(i) + ".";
        TransformerBlock b;
        b.ln1_g = take(p + "ln1.g");
        b.ln1_b = take(p + "ln1.b");
        b.wq = take(p + "attn.wq");
        b.wk = take(p + "attn.wk");
        b.wv = take(p + "attn.wv");
        b.wo = take(p + "attn.wo");
        b.ln2_g = take(p + "ln2.g");
        b.ln2_b = take(p + "ln2.b");
        b.w_up = take(p + "mlp.w_up");
        b.w_down = take(p + "mlp.w_down");
        if (b.wq.shape() != Shape{d, d} || b.w_up.shape() != Shape{d, ff}) {
            throw ParseError(std::string(source) + ": block " + std::to_string(i) +
                             " tensor shapes do not match config");
        }
        m.blocks.push_back(std::move(b));
    }
    m.final_ln_g = take("final_ln.g");
    m.final_ln_b = take("final_ln.b");
    m.output_proj = take("head.w");
    if (m.output_proj.shape() != Shape{d, cfg.vocab_size}) {
        throw ParseError(std::string(source) + ": head shape does not match config");
    }

    if (flags & kFlagHasLora) {
        Tensor alpha = take("lora.alpha");
        m.lora_alpha = alpha.data()[0];
        int rank = 0;
        // remaining records must all be adapter pairs
        std::vector<std::string> names;
        for (const auto& [name, rec] : records) names.push_back(name);
        for (const auto& name : names) {
            if (name.size() < 7 || name.substr(name.size() - 7) != ".lora_a") continue;
            const std::string base = name.substr(0, name.size() - 7);
            // base is "block<i>.<target>"
            std::size_t dot = base.find('.');
            if (dot == std::string::npos || base.rfind("block", 0) != 0) {
                throw ParseError(std::string(source) + ": malformed adapter record " + name);
            }
            int bi = std::stoi(base.substr(5, dot - 5));
            std::string target = base.substr(dot + 1);
            Tensor a = take(base + ".lora_a");
            Tensor bt = take(base + ".lora_b");
            rank = a.dim(1);
            LoraAdapter ad;
            ad.a = a;
            ad.b = bt;
            ad.scaling = m.lora_alpha / static_cast<float>(rank);
            ad.a.set_requires_grad(true);
            ad.b.set_requires_grad(true);
            m.blocks.at(bi).adapters[target] = std::move(ad);
        }
        m.lora_rank = rank;
    }
    if (!records.empty()) {
        throw ParseError(std::string(source) + ": unexpected tensor record " + records.begin()->first);
    }

    // trainable mask convention: top block, head, final norm; position table
    // only while the model is still single-layer
    for (int i = 0; i < cfg.n_layer; ++i) set_block_trainable(m, i, i == cfg.n_layer - 1);
    m.pos_emb.set_requires_grad(cfg.n_layer == 1);
    m.final_ln_g.set_requires_grad(true);
    m.final_ln_b.set_requires_grad(true);
    m.output_proj.set_requires_grad(true);
    return m;
}

inline TransformerModel load_checkpoint(const std::string& path, const EmbeddingMatrix& emb) {
    return checkpoint_from_bytes(read_file(path), emb, path);
}

// --- fusion adapter file ---------------------------------------------------
// magic CLGA, u32 version, u32 expert count, u32 V, u64 fingerprint,
// u32 tensor count, records (same encoding as checkpoints), u32 CRC32.

inline std::string adapter_to_bytes(const Tensor& weight, const Tensor& bias, int n_experts,
                                    std::uint64_t fingerprint) {
    ByteWriter w;
    w.bytes("CLGA", 4);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(n_experts));
    w.u32(static_cast<std::uint32_t>(bias.dim(0)));
    w.u64(fingerprint);
    w.u32(2);
    detail::write_record(w, "fusion.weight", weight);
    detail::write_record(w, "fusion.bias", bias);
    w.u32(crc32_of(w.view()));
    return std::move(w).take();
}

struct AdapterFile {
    int n_experts = 0;
    int vocab_size = 0;
    std::uint64_t fingerprint = 0;
    Tensor weight;
    Tensor bias;
};

inline AdapterFile adapter_from_bytes(const std::string& bytes, std::string_view source = "<memory>") {
    if (bytes.size() < 8) throw ParseError(std::string(source) + ": file too short");
    const std::size_t body = bytes.size() - 4;
    std::uint32_t want_crc = 0;
    for (int i = 0; i < 4; ++i) {
        want_crc |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[body + i])) << (8 * i);
    }
    if (want_crc != crc32_of(std::string_view(bytes).substr(0, body))) {
        throw ParseError(std::string(source) + ": checksum mismatch");
    }
    ByteReader r(std::string_view(bytes).substr(0, body), source);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, "CLGA", 4) != 0) throw ParseError(std::string(source) + ": bad magic, expected CLGA");
    if (r.u32() != kCheckpointVersion) throw ParseError(std::string(source) + ": unsupported version");
    AdapterFile f;
    f.n_experts = static_cast<int>(r.u32());
    f.vocab_size = static_cast<int>(r.u32());
    f.fingerprint = r.u64();
    std::uint32_t count = r.u32();
    if (count != 2) r.fail("expected 2 tensor records");
    auto [n1, rec1] = detail::read_record(r);
    auto [n2, rec2] = detail::read_record(r);
    if (n1 != "fusion.weight" || n2 != "fusion.bias") r.fail("unexpected record names");
    r.expect_end();
    f.weight = Tensor::from_data(rec1.shape, std::move(rec1.data));
    f.bias = Tensor::from_data(rec2.shape, std::move(rec2.data));
    return f;
}

}  // namespace glyphgrow
