#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

namespace glyphgrow {

inline constexpr std::uint64_t kFnv1a64OffsetBasis = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnv1a64Prime = 0x100000001b3ull;

// Incremental FNV-1a 64.
class Fnv1a64 {
  public:
    void update(const std::uint8_t* bytes, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            hash_ ^= bytes[i];
            hash_ *= kFnv1a64Prime;
        }
    }

    void update_f32_le(float v) {
        auto u = std::bit_cast<std::uint32_t>(v);
        std::uint8_t b[4] = {
            static_cast<std::uint8_t>(u & 0xff),
            static_cast<std::uint8_t>((u >> 8) & 0xff),
            static_cast<std::uint8_t>((u >> 16) & 0xff),
            static_cast<std::uint8_t>((u >> 24) & 0xff),
        };
        update(b, 4);
    }

    std::uint64_t value() const { return hash_; }

  private:
    std::uint64_t hash_ = kFnv1a64OffsetBasis;
};

namespace detail {
inline std::array<std::uint32_t, 256> make_crc32_table() {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) {
            c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        }
        t[i] = c;
    }
    return t;
}
}  // namespace detail

// Standard CRC-32 (IEEE 802.3 polynomial, reflected).
class Crc32 {
  public:
    void update(const std::uint8_t* bytes, std::size_t n) {
        static const auto table = detail::make_crc32_table();
        for (std::size_t i = 0; i < n; ++i) {
            crc_ = table[(crc_ ^ bytes[i]) & 0xffu] ^ (crc_ >> 8);
        }
    }

    void update(std::span<const char> bytes) {
        update(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
    }

    std::uint32_t value() const { return crc_ ^ 0xFFFFFFFFu; }

  private:
    std::uint32_t crc_ = 0xFFFFFFFFu;
};

inline std::uint32_t crc32_of(std::span<const char> bytes) {
    Crc32 c;
    c.update(bytes);
    return c.value();
}

}  // namespace glyphgrow
