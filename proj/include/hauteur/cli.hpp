#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hauteur/heights_ff.hpp"

namespace hauteur::cli {

inline constexpr const char* kToolVersion = "hauteur 0.1.0";

struct JobConfig {
  std::string source;  // path or label
  nlohmann::ordered_json raw;
  SurfaceModel model;
  SurfacePoint point;
  bool constant_x = false;  // no y given: x-level data only
};

// Malformed JSON and bad coefficient strings raise Parse (with a position), an off-curve
// section OffCurve, an identically zero discriminant NotEllipticSurface.
JobConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
JobConfig parse_config(const std::string& path);

// Directory holding silverman.json, legendre_x2.json, legendre_x5.json.
std::string fixture_dir();

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Exit code 0 on success, 2 when a check fails, 1 on error. The JSON report goes to `out`
// unless --report names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hauteur::cli
