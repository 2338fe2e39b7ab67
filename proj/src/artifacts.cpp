// SPDX-License-Identifier: Apache-2.0
#include "roomrom/artifacts.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "roomrom/errors.hpp"

namespace roomrom {

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), self-contained
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

std::string sha256_hex(const std::string& data) {
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::string msg = data;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xff));

  std::array<std::uint32_t, 64> w{};
  for (size_t chunk = 0; chunk < msg.size(); chunk += 64) {
    for (int i = 0; i < 16; ++i) {
      w[i] = (static_cast<std::uint8_t>(msg[chunk + 4 * i]) << 24) |
             (static_cast<std::uint8_t>(msg[chunk + 4 * i + 1]) << 16) |
             (static_cast<std::uint8_t>(msg[chunk + 4 * i + 2]) << 8) |
             static_cast<std::uint8_t>(msg[chunk + 4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      hh = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }
  static const char* hexd = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint32_t v : h)
    for (int i = 7; i >= 0; --i) out.push_back(hexd[(v >> (4 * i)) & 0xf]);
  return out;
}

std::string config_hash(const nlohmann::json& config) { return sha256_hex(config.dump()); }

// ---------------------------------------------------------------------------
// ARBIN1 arrays
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint8_t kDtypeF64 = 0;
constexpr std::uint8_t kDtypeC128 = 1;

void write_header(std::ofstream& os, std::uint8_t dtype, std::int64_t rows, std::int64_t cols) {
  os.write("ARBIN1\n", 7);
  const std::uint8_t endian = 1, rank = 2;
  os.write(reinterpret_cast<const char*>(&endian), 1);
  os.write(reinterpret_cast<const char*>(&dtype), 1);
  os.write(reinterpret_cast<const char*>(&rank), 1);
  os.write(reinterpret_cast<const char*>(&rows), 8);
  os.write(reinterpret_cast<const char*>(&cols), 8);
}

struct ArrayHeader {
  std::uint8_t dtype;
  std::int64_t rows, cols;
};

ArrayHeader read_header(std::ifstream& is, const std::filesystem::path& path) {
  char magic[7];
  is.read(magic, 7);
  if (!is || std::memcmp(magic, "ARBIN1\n", 7) != 0)
    throw ConfigError("'" + path.string() + "' is not an ARBIN1 file");
  std::uint8_t endian, dtype, rank;
  is.read(reinterpret_cast<char*>(&endian), 1);
  is.read(reinterpret_cast<char*>(&dtype), 1);
  is.read(reinterpret_cast<char*>(&rank), 1);
  if (endian != 1) throw ConfigError("array file has unsupported endianness");
  if (rank != 2) throw ConfigError("array file has unsupported rank");
  ArrayHeader h{};
  h.dtype = dtype;
  is.read(reinterpret_cast<char*>(&h.rows), 8);
  is.read(reinterpret_cast<char*>(&h.cols), 8);
  if (!is) throw ConfigError("truncated array file '" + path.string() + "'");
  return h;
}

}  // namespace

void save_array(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  write_header(os, kDtypeF64, m.rows(), m.cols());
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void save_array(const std::filesystem::path& path, const Eigen::MatrixXcd& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  write_header(os, kDtypeC128, m.rows(), m.cols());
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(std::complex<double>) * m.size()));
}

Eigen::MatrixXd load_array_real(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open array file '" + path.string() + "'");
  const auto h = read_header(is, path);
  if (h.dtype != kDtypeF64) throw ConfigError("expected real array in '" + path.string() + "'");
  Eigen::MatrixXd m(h.rows, h.cols);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!is) throw ConfigError("truncated array file '" + path.string() + "'");
  return m;
}

Eigen::MatrixXcd load_array_complex(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open array file '" + path.string() + "'");
  const auto h = read_header(is, path);
  if (h.dtype != kDtypeC128)
    throw ConfigError("expected complex array in '" + path.string() + "'");
  Eigen::MatrixXcd m(h.rows, h.cols);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(std::complex<double>) * m.size()));
  if (!is) throw ConfigError("truncated array file '" + path.string() + "'");
  return m;
}

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

ArtifactStore::ArtifactStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ArtifactStore::dir_for(const std::string& kind,
                                             const nlohmann::json& config) const {
  return root_ / kind / config_hash(config).substr(0, 16);
}

bool ArtifactStore::exists(const std::string& kind, const nlohmann::json& config) const {
  return std::filesystem::exists(dir_for(kind, config) / "manifest.json");
}

std::filesystem::path ArtifactStore::prepare(const std::string& kind,
                                             const nlohmann::json& config) const {
  const auto dir = dir_for(kind, config);
  std::filesystem::create_directories(dir);
  return dir;
}

void ArtifactStore::finalize(const std::string& kind, const nlohmann::json& config) const {
  nlohmann::json manifest;
  manifest["kind"] = kind;
  manifest["config"] = config;
  manifest["config_hash"] = config_hash(config);
  const auto dir = dir_for(kind, config);
  std::ofstream os(dir / "manifest.json");
  if (!os) throw ConfigError("cannot write manifest in '" + dir.string() + "'");
  os << manifest.dump(2) << '\n';
}

void ArtifactStore::write_timing(const std::filesystem::path& dir,
                                 const nlohmann::json& timing) const {
  std::ofstream os(dir / "timing.json");
  if (!os) throw ConfigError("cannot write timing sidecar in '" + dir.string() + "'");
  os << timing.dump(2) << '\n';
}

}  // namespace roomrom
