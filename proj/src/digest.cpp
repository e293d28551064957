#include "hmcf/digest.hpp"

#include <cstdio>

namespace hmcf {

Fnv1a& Fnv1a::bytes(const void* data, size_t n) noexcept {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h_ ^= p[i];
    h_ *= 0x100000001b3ULL;
  }
  return *this;
}

Fnv1a& Fnv1a::add(std::string_view s) noexcept {
  add(static_cast<int64_t>(s.size()));
  return bytes(s.data(), s.size());
}

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
  return buf;
}

std::string mesh_digest(const TriMesh& mesh) {
  Fnv1a h;
  h.add(static_cast<int64_t>(mesh.num_vertices())).add(static_cast<int64_t>(mesh.num_faces()));
  for (const HPoint& p : mesh.vertices())
    for (int i = 0; i < 4; ++i) h.add(p[i]);
  for (const Face& f : mesh.faces()) h.bytes(f.data(), sizeof(Face));
  return h.hex();
}

}  // namespace hmcf
