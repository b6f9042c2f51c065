#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "glyphgrow/errors.hpp"

namespace glyphgrow {

// Little-endian byte stream writer backed by a string.
class ByteWriter {
  public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v & 0xff));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void bytes(const void* p, std::size_t n) {
        buf_.append(static_cast<const char*>(p), n);
    }

    std::size_t size() const { return buf_.size(); }
    const std::string& view() const { return buf_; }
    std::string take() && { return std::move(buf_); }

  private:
    std::string buf_;
};

// Little-endian reader with offset-carrying parse errors.
class ByteReader {
  public:
    ByteReader(std::string_view data, std::string_view source = "<memory>")
        : data_(data), source_(source) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint16_t u16() {
        std::uint16_t v = u8();
        return static_cast<std::uint16_t>(v | (static_cast<std::uint16_t>(u8()) << 8));
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    void bytes(void* out, std::size_t n) {
        need(n);
        std::memcpy(out, data_.data() + pos_, n);
        pos_ += n;
    }
    std::string string(std::size_t n) {
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    void expect_end() const {
        if (pos_ != data_.size()) {
            throw ParseError(std::string(source_) + ": " + std::to_string(data_.size() - pos_) +
                             " trailing bytes at offset " + std::to_string(pos_));
        }
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(std::string(source_) + ": " + why + " at offset " + std::to_string(pos_));
    }

  private:
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) fail("truncated record, need " + std::to_string(n) + " bytes");
    }

    std::string_view data_;
    std::string_view source_;
    std::size_t pos_ = 0;
};

// Write-temp-then-rename so readers never observe a partial file.
inline void atomic_write_file(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename " + tmp.string() + " -> " + path + ": " + ec.message());
}

}  // namespace glyphgrow
