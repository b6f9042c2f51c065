#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "glyphgrow/errors.hpp"
#include "glyphgrow/utf8.hpp"

namespace glyphgrow {

// Synthetic codepoint space for special tokens: 0x110000 + ordinal, so
// specials flow through the same glyph/embedding pipeline as characters.
inline constexpr std::uint32_t kSpecialBase = 0x110000;

struct VocabEntry {
    bool is_special = false;
    std::uint32_t codepoint = 0;  // scalar value, or kSpecialBase + ordinal
    std::string special_name;     // set when is_special

    bool operator==(const VocabEntry& o) const {
        return is_special == o.is_special && codepoint == o.codepoint &&
               special_name == o.special_name;
    }
};

// Canonical token <-> index bijection shared by every model on a substrate.
// Ordering: specials first in declaration order, then codepoints ascending.
class VocabSpec {
  public:
    VocabSpec() = default;

    VocabSpec(const std::vector<std::string>& specials, const std::set<std::uint32_t>& codepoints) {
        std::uint32_t ord = 0;
        for (const auto& name : specials) {
            VocabEntry e;
            e.is_special = true;
            e.codepoint = kSpecialBase + ord++;
            e.special_name = name;
            push(e);
        }
        for (auto cp : codepoints) {
            VocabEntry e;
            e.codepoint = cp;
            push(e);
        }
    }

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<VocabEntry>& tokens() const { return tokens_; }
    const VocabEntry& token(int i) const { return tokens_.at(i); }

    // Index of a character token, or -1 when absent.
    int index_of_codepoint(std::uint32_t cp) const {
        auto it = by_codepoint_.find(cp);
        return it == by_codepoint_.end() ? -1 : it->second;
    }

    // Index of a named special, or -1 when absent.
    int index_of_special(std::string_view name) const {
        auto it = by_special_.find(std::string(name));
        return it == by_special_.end() ? -1 : it->second;
    }

    // Human-readable token label: U+0041 or @PAD.
    std::string label(int i) const {
        const auto& e = token(i);
        if (e.is_special) return "@" + e.special_name;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "U+%04X", e.codepoint);
        return buf;
    }

    // Encodes text, skipping nothing: unknown codepoints raise.
    std::vector<int> encode(const std::vector<std::uint32_t>& cps) const {
        std::vector<int> ids;
        ids.reserve(cps.size());
        for (auto cp : cps) {
            int idx = index_of_codepoint(cp);
            if (idx < 0) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "U+%04X", cp);
                throw Error(std::string("codepoint not in vocab: ") + buf);
            }
            ids.push_back(idx);
        }
        return ids;
    }

    std::string decode(const std::vector<int>& ids) const {
        std::vector<std::uint32_t> cps;
        cps.reserve(ids.size());
        for (int id : ids) {
            const auto& e = token(id);
            if (!e.is_special) cps.push_back(e.codepoint);
        }
        return utf8_encode(cps);
    }

    bool operator==(const VocabSpec& o) const { return tokens_ == o.tokens_; }

  private:
    void push(const VocabEntry& e) {
        int idx = size();
        tokens_.push_back(e);
        if (e.is_special) {
            by_special_[e.special_name] = idx;
        } else {
            by_codepoint_[e.codepoint] = idx;
        }
    }

    std::vector<VocabEntry> tokens_;
    std::map<std::uint32_t, int> by_codepoint_;
    std::map<std::string, int> by_special_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Scans UTF-8 corpora and returns the canonical-ordered vocab of all
// distinct codepoints plus the given specials.
inline VocabSpec build_vocab(const std::vector<std::string>& corpus_paths,
                             const std::vector<std::string>& specials) {
    std::set<std::uint32_t> cps;
    for (const auto& path : corpus_paths) {
        auto text = read_file(path);
        for (auto cp : utf8_decode(text, path)) cps.insert(cp);
    }
    return VocabSpec(specials, cps);
}

inline VocabSpec build_vocab_from_text(const std::vector<std::string>& texts,
                                       const std::vector<std::string>& specials) {
    std::set<std::uint32_t> cps;
    for (const auto& text : texts) {
        for (auto cp : utf8_decode(text)) cps.insert(cp);
    }
    return VocabSpec(specials, cps);
}

// Text export, one line per token: "#i<TAB>U+XXXX" or "#i<TAB>@NAME".
inline std::string vocab_to_text(const VocabSpec& vocab) {
    std::string out;
    for (int i = 0; i < vocab.size(); ++i) {
        out += "#" + std::to_string(i) + "\t" + vocab.label(i) + "\n";
    }
    return out;
}

inline VocabSpec vocab_from_text(const std::string& text, std::string_view source = "<memory>") {
    std::vector<std::string> specials;
    std::set<std::uint32_t> cps;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int expect = 0;
    long long last_cp = -1;
    auto fail = [&](const std::string& why) -> void {
        throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (line[0] != '#' || tab == std::string::npos) fail("expected '#i<TAB>token'");
        int idx = 0;
        try {
            idx = std::stoi(line.substr(1, tab - 1));
        } catch (const std::exception&) {
            fail("bad index");
        }
        if (idx != expect) fail("non-contiguous index " + std::to_string(idx));
        ++expect;
        std::string tok = line.substr(tab + 1);
        if (tok.empty()) fail("empty token");
        if (tok[0] == '@') {
            if (!cps.empty()) fail("special token after codepoints");
            specials.push_back(tok.substr(1));
        } else if (tok.rfind("U+", 0) == 0) {
            std::uint32_t cp = 0;
            try {
                cp = static_cast<std::uint32_t>(std::stoul(tok.substr(2), nullptr, 16));
            } catch (const std::exception&) {
                fail("bad codepoint " + tok);
            }
            if (static_cast<long long>(cp) <= last_cp) fail("codepoints not strictly ascending");
            last_cp = cp;
            cps.insert(cp);
        } else {
            fail("unrecognized token " + tok);
        }
    }
    VocabSpec spec(specials, cps);
    if (spec.size() != expect) fail("duplicate entries");
    return spec;
}

}  // namespace glyphgrow
