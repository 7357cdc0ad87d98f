#pragma once

#include <filesystem>

#include "gpe/field.hpp"

namespace gpe {

/// 16-byte magic, one-line JSON header, then little-endian doubles
/// (re, im) for u then v of every stored mode in ModeSet order.
inline constexpr char kSnapshotMagic[17] = "GPE-SNAPSHOT-v1\n";
inline constexpr const char* kModeOrdering = "lex-m1-m2-m3-ball-m3nonneg";

void write_snapshot(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_snapshot(const std::filesystem::path& path);

}  // namespace gpe
