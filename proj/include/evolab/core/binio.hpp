#pragma once

#include <cstdint>
#include <cstring>
#include <iosfwd>
#include <string>
#include <vector>

#include "evolab/core/errors.hpp"

namespace evolab::binio {

// Explicit little-endian scalar IO (big-endian helpers for the IDX format).
// Keeps on-disk layouts independent of host conventions.

void write_bytes(std::ostream& os, const void* p, std::size_t n);
void read_bytes(std::istream& is, void* p, std::size_t n, const char* what);

void write_u8(std::ostream& os, std::uint8_t v);
void write_u32_le(std::ostream& os, std::uint32_t v);
void write_u64_le(std::ostream& os, std::uint64_t v);
void write_f64_le(std::ostream& os, double v);
void write_f64_array_le(std::ostream& os, const double* v, std::size_t n);

std::uint8_t read_u8(std::istream& is, const char* what);
std::uint32_t read_u32_le(std::istream& is, const char* what);
std::uint64_t read_u64_le(std::istream& is, const char* what);
double read_f64_le(std::istream& is, const char* what);
void read_f64_array_le(std::istream& is, double* v, std::size_t n, const char* what);

std::uint32_t read_u32_be(std::istream& is, const char* what);
void write_u32_be(std::ostream& os, std::uint32_t v);

// Serialize-to-buffer variants used when a record is hashed before writing.
void put_u8(std::vector<unsigned char>& buf, std::uint8_t v);
void put_u32_le(std::vector<unsigned char>& buf, std::uint32_t v);
void put_u64_le(std::vector<unsigned char>& buf, std::uint64_t v);
void put_f64_le(std::vector<unsigned char>& buf, double v);

}  // namespace evolab::binio
