#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace hghz {

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

uint64_t fnv1a64(const std::string& bytes);

inline const char* kCodeVersion = "0.1.0";

} // namespace hghz
