#include "subpois/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "subpois/error.hpp"

#ifndef SUBPOIS_VERSION
#define SUBPOIS_VERSION "0.0.0"
#endif

namespace subpois::io {

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string version() { return SUBPOIS_VERSION; }

json meta_json(const Meta& m) {
  return json{{"command", m.command},
              {"kernel", m.kernel},
              {"window", {m.window.a, m.window.b}},
              {"order", m.order},
              {"seed", m.seed},
              {"version", version()}};
}

std::string csv_meta(const Meta& m) {
  std::ostringstream os;
  os << "# command: " << m.command << "\n"
     << "# kernel: " << m.kernel << "\n"
     << "# window: " << fmt(m.window.a) << "," << fmt(m.window.b) << "\n"
     << "# order: " << m.order << "\n"
     << "# seed: " << m.seed << "\n"
     << "# version: " << version() << "\n";
  return os.str();
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place: " + path.string());
  }
}

json to_json(const bounds::BoundReport& r) {
  json table = json::array();
  for (const auto& [n, v] : r.table) table.push_back({{"n", n}, {"log_bound", number(v)}});
  return json{{"kernel", r.kernel},
              {"window", {r.window.a, r.window.b}},
              {"sigma", number(r.sigma)},
              {"B", number(r.b)},
              {"B_tilde", number(r.b_tilde)},
              {"delta", number(r.delta)},
              {"c1", number(r.c1)},
              {"c2", number(r.c2)},
              {"c", number(r.c)},
              {"c_sigma_form", number(r.c_sigma_form)},
              {"d", number(r.d)},
              {"n_max", r.n_max},
              {"lambda_max", r.lambda_max},
              {"table", table},
              {"flags", r.flags}};
}

json to_json(const exact::Spectrum& s) {
  return json{{"eigenvalues", s.eigenvalues},
              {"raw_out_of_range", s.raw_out_of_range},
              {"abs_error", s.abs_error},
              {"high_precision", s.high_precision}};
}

json to_json(const exact::CountDistribution& c) {
  return json{{"pmf", c.pmf},
              {"truncation_error_bound", c.truncation_error_bound},
              {"domination_mass", number(c.domination_mass)}};
}

}  // namespace subpois::io
