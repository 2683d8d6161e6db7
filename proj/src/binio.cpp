#include "evolab/core/binio.hpp"

#include <bit>
#include <istream>
#include <ostream>

#include "evolab/core/hash.hpp"

namespace evolab {

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

}  // namespace evolab

namespace evolab::binio {

static_assert(std::endian::native == std::endian::little,
              "explicit byte-order IO below assumes a little-endian host");

void write_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os) throw IoError("write failed");
}

void read_bytes(std::istream& is, void* p, std::size_t n, const char* what) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) {
        throw FormatError(std::string("truncated read of ") + what + " at byte offset " +
                          std::to_string(static_cast<long long>(is.tellg())));
    }
}

void write_u8(std::ostream& os, std::uint8_t v) { write_bytes(os, &v, 1); }
void write_u32_le(std::ostream& os, std::uint32_t v) { write_bytes(os, &v, 4); }
void write_u64_le(std::ostream& os, std::uint64_t v) { write_bytes(os, &v, 8); }
void write_f64_le(std::ostream& os, double v) { write_bytes(os, &v, 8); }

void write_f64_array_le(std::ostream& os, const double* v, std::size_t n) {
    write_bytes(os, v, n * sizeof(double));
}

std::uint8_t read_u8(std::istream& is, const char* what) {
    std::uint8_t v;
    read_bytes(is, &v, 1, what);
    return v;
}

std::uint32_t read_u32_le(std::istream& is, const char* what) {
    std::uint32_t v;
    read_bytes(is, &v, 4, what);
    return v;
}

std::uint64_t read_u64_le(std::istream& is, const char* what) {
    std::uint64_t v;
    read_bytes(is, &v, 8, what);
    return v;
}

double read_f64_le(std::istream& is, const char* what) {
    double v;
    read_bytes(is, &v, 8, what);
    return v;
}

void read_f64_array_le(std::istream& is, double* v, std::size_t n, const char* what) {
    read_bytes(is, v, n * sizeof(double), what);
}

std::uint32_t read_u32_be(std::istream& is, const char* what) {
    unsigned char b[4];
    read_bytes(is, b, 4, what);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

void write_u32_be(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    write_bytes(os, b, 4);
}

void put_u8(std::vector<unsigned char>& buf, std::uint8_t v) { buf.push_back(v); }

void put_u32_le(std::vector<unsigned char>& buf, std::uint32_t v) {
    unsigned char b[4];
    std::memcpy(b, &v, 4);
    buf.insert(buf.end(), b, b + 4);
}

void put_u64_le(std::vector<unsigned char>& buf, std::uint64_t v) {
    unsigned char b[8];
    std::memcpy(b, &v, 8);
    buf.insert(buf.end(), b, b + 8);
}

void put_f64_le(std::vector<unsigned char>& buf, double v) {
    unsigned char b[8];
    std::memcpy(b, &v, 8);
    buf.insert(buf.end(), b, b + 8);
}

}  // namespace evolab::binio
