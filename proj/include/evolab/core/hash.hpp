#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace evolab {

// FNV-1a 64-bit. Multiplication by the (odd) prime is a bijection mod 2^64,
// so any single-byte change is guaranteed to change the digest.
class Fnv1a {
public:
    void update(const void* bytes, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(bytes);
        std::uint64_t h = h_;
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
        h_ = h;
    }

    template <typename T>
    void update_value(const T& v) {
        update(&v, sizeof(T));
    }

    std::uint64_t digest() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

inline std::uint64_t fnv1a(const void* bytes, std::size_t n) {
    Fnv1a h;
    h.update(bytes, n);
    return h.digest();
}

std::string hash_hex(std::uint64_t h);

}  // namespace evolab
