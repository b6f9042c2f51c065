#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "glyphgrow/digest.hpp"
#include "glyphgrow/errors.hpp"
#include "glyphgrow/glyph.hpp"
#include "glyphgrow/rng.hpp"
#include "glyphgrow/serialize.hpp"
#include "glyphgrow/vocab.hpp"

namespace glyphgrow {

inline constexpr std::uint64_t kDefaultProjSeed = 0x9E3779B97F4A7C15ull;

// The frozen V x d_model substrate shared by every model. Rows are built
// once and never written again; the fingerprint is the compatibility gate
// for merging and checkpoint loading.
struct EmbeddingMatrix {
    int vocab_size = 0;
    int width = 0;                 // d_model
    std::vector<float> rows;       // vocab_size * width, row-major
    std::uint64_t fingerprint = 0;

    const float* row(int i) const { return rows.data() + static_cast<std::size_t>(i) * width; }
};

// FNV-1a 64 over the little-endian bytes of all rows in order.
inline std::uint64_t fingerprint_rows(const std::vector<float>& rows) {
    Fnv1a64 h;
    for (float v : rows) h.update_f32_le(v);
    return h.value();
}

inline std::uint64_t fingerprint(const EmbeddingMatrix& m) { return fingerprint_rows(m.rows); }

// Feature vector for one vocab entry:
//   [B*B bitmap bits | 32 codepoint bits, least significant first | 1].
// Specials use an all-zero bitmap and codepoint 0x110000 + ordinal.
inline std::vector<float> glyph_features(const VocabEntry& entry, int side) {
    std::vector<float> f(static_cast<std::size_t>(side) * side + 33, 0.0f);
    if (!entry.is_special) {
        GlyphBitmap bm = render_glyph(entry.codepoint, side);
        for (int i = 0; i < side * side; ++i) f[i] = static_cast<float>(bm.bits[i]);
    }
    std::uint32_t cp = entry.codepoint;
    for (int b = 0; b < 32; ++b) {
        f[side * side + b] = static_cast<float>((cp >> b) & 1u);
    }
    f[side * side + 32] = 1.0f;
    return f;
}

// Deterministic sign projection of the glyph features to d_model, then L2
// normalization. Projection entries are +-1/sqrt(n): +1 when the next
// splitmix64 output (stream seeded by proj_seed, row-major order) has its
// top bit clear, -1 otherwise.
inline std::vector<float> embed_codepoint(const VocabEntry& entry, int side, int d_model,
                                          std::uint64_t proj_seed) {
    if (d_model < 8) throw Error("d_model must be >= 8, got " + std::to_string(d_model));
    const auto f = glyph_features(entry, side);
    const int n = static_cast<int>(f.size());
    const float scale = 1.0f / std::sqrt(static_cast<float>(n));

    std::uint64_t state = proj_seed;
    std::vector<float> out(d_model, 0.0f);
    for (int r = 0; r < d_model; ++r) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) {
            std::uint64_t u = splitmix64_next(state);
            float sign = (u >> 63) ? -1.0f : 1.0f;
            acc += static_cast<double>(sign * scale) * f[c];
        }
        out[r] = static_cast<float>(acc);
    }
    double norm_sq = 0.0;
    for (float v : out) norm_sq += static_cast<double>(v) * v;
    double norm = std::sqrt(norm_sq);
    if (norm == 0.0) throw Error("zero projection vector for " + (entry.is_special ? "@" + entry.special_name : std::to_string(entry.codepoint)));
    for (float& v : out) v = static_cast<float>(v / norm);
    return out;
}

// Builds the full substrate: row i = embed_codepoint(vocab.token(i)).
// Byte-identical rows are a fatal configuration error.
inline EmbeddingMatrix build_embedding_matrix(const VocabSpec& vocab, int side, int d_model,
                                              std::uint64_t proj_seed) {
    if (vocab.size() < 1) throw Error("vocab must have at least one token");
    EmbeddingMatrix m;
    m.vocab_size = vocab.size();
    m.width = d_model;
    m.rows.resize(static_cast<std::size_t>(m.vocab_size) * d_model);
    std::unordered_map<std::string, int> seen;
    seen.reserve(m.vocab_size * 2);
    for (int i = 0; i < m.vocab_size; ++i) {
        auto row = embed_codepoint(vocab.token(i), side, d_model, proj_seed);
        std::memcpy(m.rows.data() + static_cast<std::size_t>(i) * d_model, row.data(),
                    d_model * sizeof(float));
        std::string key(reinterpret_cast<const char*>(row.data()), d_model * sizeof(float));
        auto [it, inserted] = seen.emplace(std::move(key), i);
        if (!inserted) {
            throw RowCollisionError("embedding row collision between " + vocab.label(it->second) +
                                    " and " + vocab.label(i));
        }
    }
    m.fingerprint = fingerprint_rows(m.rows);
    return m;
}

// --- GLYE export ---------------------------------------------------------
// magic "GLYE", u32 LE version=1, u32 LE V, u32 LE d_model,
// u64 LE fingerprint, then V*d_model f32 LE row-major.

inline std::string embedding_to_bytes(const EmbeddingMatrix& m) {
    ByteWriter w;
    w.bytes("GLYE", 4);
    w.u32(1);
    w.u32(static_cast<std::uint32_t>(m.vocab_size));
    w.u32(static_cast<std::uint32_t>(m.width));
    w.u64(m.fingerprint);
    for (float v : m.rows) w.f32(v);
    return std::move(w).take();
}

inline EmbeddingMatrix embedding_from_bytes(const std::string& bytes,
                                            std::string_view source = "<memory>") {
    ByteReader r(bytes, source);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, "GLYE", 4) != 0) throw ParseError(std::string(source) + ": bad magic, expected GLYE");
    std::uint32_t version = r.u32();
    if (version != 1) throw ParseError(std::string(source) + ": unsupported GLYE version " + std::to_string(version));
    EmbeddingMatrix m;
    m.vocab_size = static_cast<int>(r.u32());
    m.width = static_cast<int>(r.u32());
    m.fingerprint = r.u64();
    m.rows.resize(static_cast<std::size_t>(m.vocab_size) * m.width);
    for (auto& v : m.rows) v = r.f32();
    r.expect_end();
    if (fingerprint_rows(m.rows) != m.fingerprint) {
        throw ParseError(std::string(source) + ": embedding fingerprint does not match row bytes");
    }
    return m;
}

}  // namespace glyphgrow
