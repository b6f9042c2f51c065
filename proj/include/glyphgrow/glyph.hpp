#pragma once

#include <cstdint>
#include <vector>

#include "glyphgrow/errors.hpp"
#include "glyphgrow/font8x8.hpp"
#include "glyphgrow/rng.hpp"

namespace glyphgrow {

inline constexpr int kFontSide = 8;  // native cell of the bundled font

// B x B binary raster of one glyph, row-major.
struct GlyphBitmap {
    int side = 0;
    std::vector<std::uint8_t> bits;  // side*side entries, each 0 or 1

    std::uint8_t at(int row, int col) const { return bits[row * side + col]; }
};

namespace detail {

inline bool font_rows(std::uint32_t cp, const unsigned char*& rows) {
    if (cp >= 0x20 && cp <= 0x7E) {
        rows = kFontAscii[cp - 0x20];
        return true;
    }
    if (cp >= 0xA0 && cp <= 0xFF) {
        rows = kFontLatin1[cp - 0xA0];
        return true;
    }
    return false;
}

// Native 8x8 cell: font rows when covered, otherwise the fallback pattern.
// Fallback: the 64 bits of splitmix64(codepoint) laid out row-major, bit 0
// (least significant) first.
inline void native_cell(std::uint32_t cp, std::uint8_t out[kFontSide * kFontSide]) {
    const unsigned char* rows = nullptr;
    if (font_rows(cp, rows)) {
        for (int r = 0; r < kFontSide; ++r) {
            for (int c = 0; c < kFontSide; ++c) {
                out[r * kFontSide + c] = (rows[r] >> (7 - c)) & 1u;
            }
        }
        return;
    }
    std::uint64_t v = splitmix64_at(cp);
    for (int i = 0; i < 64; ++i) {
        out[i] = static_cast<std::uint8_t>((v >> i) & 1u);
    }
}

}  // namespace detail

// Deterministic raster for a Unicode scalar value, nearest-neighbor scaled
// from the font's native 8x8 cell to side x side. side must be 8 or 16.
inline GlyphBitmap render_glyph(std::uint32_t codepoint, int side) {
    if (side != 8 && side != 16) {
        throw Error("glyph side must be 8 or 16, got " + std::to_string(side));
    }
    std::uint8_t cell[kFontSide * kFontSide];
    detail::native_cell(codepoint, cell);
    GlyphBitmap bm;
    bm.side = side;
    bm.bits.resize(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r) {
        int sr = r * kFontSide / side;
        for (int c = 0; c < side; ++c) {
            int sc = c * kFontSide / side;
            bm.bits[r * side + c] = cell[sr * kFontSide + sc];
        }
    }
    return bm;
}

}  // namespace glyphgrow
