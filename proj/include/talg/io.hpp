#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "talg/lift.hpp"
#include "talg/tmatrix.hpp"

namespace talg {

// Binary P5 (dims H x W) or P6 (dims H x W x 3), maxval 255.
RealArray read_pnm(const std::filesystem::path& path);
RealArray parse_pnm(const std::string& bytes);
// Values are rounded and clamped to [0, 255]. P5 for 2-d input, P6 for 3 channels.
void write_pnm(const RealArray& image, const std::filesystem::path& path);
std::string encode_pnm(const RealArray& image);

struct CifarRecord {
  int label = 0;
  RealArray image;  // 32 x 32 x 3
};

// CIFAR-10 binary batch: 3073-byte records, label byte then R, G, B planes.
std::vector<CifarRecord> read_cifar_batch(const std::filesystem::path& path);
std::vector<CifarRecord> parse_cifar_batch(const std::string& bytes);

// TMX1: "TMX1", u8 N, u32 dims[N], u32 M1, u32 M2, then K*M1*M2 complex
// values as little-endian f64 pairs over (i..., m1, m2).
SpatialTMatrix read_tmx(const std::filesystem::path& path);
SpatialTMatrix parse_tmx(const std::string& bytes);
void write_tmx(const SpatialTMatrix& a, const std::filesystem::path& path);
std::string encode_tmx(const SpatialTMatrix& a);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

// FNV-1a of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace talg
