#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "glyphgrow/errors.hpp"

namespace glyphgrow {

// Decodes UTF-8 into Unicode scalar values. `source` is used in error
// messages together with the byte offset of the offending sequence.
inline std::vector<std::uint32_t> utf8_decode(std::string_view text,
                                              std::string_view source = "<memory>") {
    std::vector<std::uint32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    auto fail = [&](std::size_t at) -> void {
        throw DecodeError("invalid UTF-8 in " + std::string(source) + " at byte offset " +
                          std::to_string(at));
    };
    while (i < text.size()) {
        const std::size_t start = i;
        std::uint8_t b0 = static_cast<std::uint8_t>(text[i]);
        std::uint32_t cp = 0;
        int extra = 0;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1Fu;
            extra = 1;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0Fu;
            extra = 2;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07u;
            extra = 3;
        } else {
            fail(start);
        }
        if (i + extra >= text.size()) fail(start);
        ++i;
        for (int k = 0; k < extra; ++k, ++i) {
            std::uint8_t b = static_cast<std::uint8_t>(text[i]);
            if ((b & 0xC0) != 0x80) fail(start);
            cp = (cp << 6) | (b & 0x3Fu);
        }
        // reject overlong forms, surrogates, and out-of-range values
        static constexpr std::uint32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
        if (extra > 0 && cp < kMin[extra]) fail(start);
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail(start);
        out.push_back(cp);
    }
    return out;
}

inline void utf8_append(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string utf8_encode(const std::vector<std::uint32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (auto cp : cps) utf8_append(out, cp);
    return out;
}

}  // namespace glyphgrow
