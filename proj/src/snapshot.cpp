#include "gpe/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gpe/errors.hpp"

namespace gpe {

namespace {

void put_le(std::ostream& os, double x) {
  std::uint64_t b = std::bit_cast<std::uint64_t>(x);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(b >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw InvalidArgument("snapshot: truncated data");
  std::uint64_t b = 0;
  for (int i = 0; i < 8; ++i) b |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(b);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string());
  os.write(kSnapshotMagic, 16);
  nlohmann::ordered_json h;
  h["order"] = f.order();
  h["mode_ordering"] = kModeOrdering;
  h["components"] = 2;
  h["modes"] = f.size();
  os << h.dump() << '\n';
  for (const auto& c : f.data())
    for (const auto& z : c) {
      put_le(os, z.real());
      put_le(os, z.imag());
    }
  if (!os) throw std::runtime_error("snapshot: write failed for " + path.string());
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("snapshot: cannot open " + path.string());
  char magic[16];
  if (!is.read(magic, 16) || std::memcmp(magic, kSnapshotMagic, 16) != 0)
    throw InvalidArgument("snapshot: bad magic in " + path.string());
  std::string line;
  std::getline(is, line);
  const auto h = nlohmann::json::parse(line);
  if (h.at("mode_ordering").get<std::string>() != kModeOrdering || h.at("components").get<int>() != 2)
    throw InvalidArgument("snapshot: unsupported layout");
  SpectralField f(h.at("order").get<int>());
  if (h.at("modes").get<std::size_t>() != f.size()) throw InvalidArgument("snapshot: mode count mismatch");
  for (auto& c : f.data())
    for (auto& z : c) {
      const double re = get_le(is);
      const double im = get_le(is);
      z = cplx(re, im);
    }
  return f;
}

}  // namespace gpe
