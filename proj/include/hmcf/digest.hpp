#pragma once

#include "hmcf/hmesh.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace hmcf {

/// 64-bit FNV-1a over raw bytes.
class Fnv1a {
 public:
  Fnv1a& bytes(const void* data, size_t n) noexcept;
  Fnv1a& add(double x) noexcept { return bytes(&x, sizeof x); }
  Fnv1a& add(int64_t x) noexcept { return bytes(&x, sizeof x); }
  Fnv1a& add(std::string_view s) noexcept;
  uint64_t value() const noexcept { return h_; }
  std::string hex() const;

 private:
  uint64_t h_ = 0xcbf29ce484222325ULL;
};

/// Digest of the vertex coordinates and faces.
std::string mesh_digest(const TriMesh& mesh);

}  // namespace hmcf
