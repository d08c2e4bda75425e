#pragma once

#include <string>

#include "hghz/hghz_family.hpp"

namespace hghz {

// Versioned binary containers (.hghzk / .hghzt): magic "HGHZ1", kind, regime,
// header fields as 64-bit little-endian words, then matrices row-major,
// residues as 64-bit LE; the trapdoor additionally carries R as signed 64-bit.
std::string serialize_key(const HghzKey& k);
std::string serialize_trapdoor(const HghzTrapdoor& t);

HghzKey parse_key(const std::string& bytes);
HghzTrapdoor parse_trapdoor(const std::string& bytes);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

} // namespace hghz
