#ifndef PMDA_SHA256_HPP
#define PMDA_SHA256_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace pmda {

std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len);
std::array<uint8_t, 32> sha256(const std::string& s);
std::string hex_digest(const std::array<uint8_t, 32>& d);

}  // namespace pmda

#endif
