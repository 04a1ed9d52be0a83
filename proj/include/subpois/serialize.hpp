#ifndef SUBPOIS_SERIALIZE_HPP
#define SUBPOIS_SERIALIZE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "subpois/bounds.hpp"
#include "subpois/exact.hpp"
#include "subpois/sampler.hpp"

namespace subpois::io {

using json = nlohmann::json;

std::string version();

struct Meta {
  std::string command;
  std::string kernel;
  kernels::Interval window;
  int order = 0;
  std::uint64_t seed = 0;
};

json meta_json(const Meta& m);
// "# key: value" lines for CSV files.
std::string csv_meta(const Meta& m);

// 17 significant digits; non-finite values as nan/inf/-inf.
std::string fmt(double x);

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

json to_json(const bounds::BoundReport& r);
json to_json(const exact::Spectrum& s);
json to_json(const exact::CountDistribution& c);

}  // namespace subpois::io

#endif  // SUBPOIS_SERIALIZE_HPP
