#include "subpois/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "subpois/bounds.hpp"
#include "subpois/error.hpp"
#include "subpois/exact.hpp"
#include "subpois/sampler.hpp"
#include "subpois/serialize.hpp"

namespace subpois::cli {

namespace fs = std::filesystem;
using io::fmt;
using io::json;
using kernels::Interval;
using kernels::KernelSpec;

namespace {

constexpr double kRefinementDriftTol = 1e-8;
constexpr double kDominanceSlack = 1e-12;

double parse_real(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + ": '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
    throw ConfigError(std::string("cannot parse ") + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

bool dominated(double lhs, double rhs) {
  return lhs <= rhs + kDominanceSlack * std::max(1.0, std::abs(rhs));
}

io::Meta meta_for(const RunConfig& c) {
  return io::Meta{c.command, c.kernel, c.window, c.order, c.seed};
}

fs::path out_file(const RunConfig& c, const std::string& name) { return fs::path(c.out) / name; }

void require_line_scalar(const KernelSpec& spec, const char* command) {
  if (spec.is_pfaffian() || spec.is_planar())
    throw ConfigError(std::string(command) + ": kernel '" + spec.id() +
                      "' is not supported (scalar kernels on the line only)");
}

bool has_high_precision_path(const KernelSpec& spec) {
  return spec.kind == kernels::KernelKind::Sine || spec.kind == kernels::KernelKind::Airy || spec.kind == kernels::KernelKind::Bessel;
}

// Count distribution whose moment certificate closes on the whole grid,
// switching to the extended-precision spectrum when needed.
struct MomentSource {
  exact::CountDistribution dist;
  bool high_precision = false;
};

MomentSource moment_source(const KernelSpec& spec, const Interval& window,
                           const exact::CountDistribution& base, const std::vector<double>& lambdas) {
  MomentSource src{base, false};
  try {
    for (double lam : lambdas) exact::exp_moment_sq(base, lam);
    return src;
  } catch (const TruncationError&) {
    if (!has_high_precision_path(spec)) throw;
  }
  src.dist = exact::count_distribution(exact::spectrum_high_precision(spec, window, 48), 1e-45);
  src.high_precision = true;
  return src;
}

struct Refinement {
  int order = 0;
  double drift = 0.0;
};

Refinement refinement_drift(const KernelSpec& spec, const RunConfig& c, const exact::Spectrum& base) {
  Refinement r;
  r.order = std::max(400, 2 * c.order);
  const exact::Spectrum fine = exact::spectrum_for(spec, c.window, r.order);
  const std::size_t m = std::max(base.eigenvalues.size(), fine.eigenvalues.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double a = i < base.eigenvalues.size() ? base.eigenvalues[i] : 0.0;
    const double b = i < fine.eigenvalues.size() ? fine.eigenvalues[i] : 0.0;
    r.drift = std::max(r.drift, std::abs(a - b));
  }
  return r;
}

std::vector<double> read_reals(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("q spec: '") + what + "' must be an array");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string("q spec: '") + what + "' must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

double read_real(const json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_number())
    throw ConfigError(std::string("q spec: missing numeric field '") + key + "'");
  return spec[key].get<double>();
}

sampler::Box read_box(const json& spec) {
  if (!spec.contains("support")) throw ConfigError("q spec: missing 'support' [x0, x1, y0, y1]");
  const auto v = read_reals(spec["support"], "support");
  if (v.size() != 4) throw ConfigError("q spec: 'support' needs four numbers");
  if (!(v[0] < v[1]) || !(v[2] < v[3])) throw ConfigError("q spec: empty support box");
  return sampler::Box{v[0], v[1], v[2], v[3]};
}

Interval read_interval(const json& j, const char* what) {
  const auto v = read_reals(j, what);
  if (v.size() != 2 || !(v[0] < v[1]))
    throw ConfigError(std::string("q spec: '") + what + "' must be [a, b] with a < b");
  return Interval(v[0], v[1]);
}

struct QSpec {
  sampler::PairFunctional q;
  std::string family;
  std::optional<double> lambda;
  std::optional<Interval> c_window;
  std::optional<std::pair<Interval, Interval>> na_windows;
  int cap = 3;
};

QSpec load_q_spec(const std::string& path) {
  if (path.empty()) throw ConfigError("sample: --q-spec is required");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open q spec '" + path + "'");
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed q spec: ") + e.what());
  }
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string())
    throw ConfigError("q spec: expected an object with a string 'family'");

  QSpec out;
  out.family = spec["family"].get<std::string>();
  if (out.family == "zero") {
    out.q = sampler::zero_functional();
  } else if (out.family == "box") {
    out.q = sampler::box_functional(read_real(spec, "value"), read_box(spec));
  } else if (out.family == "gaussian_bump") {
    if (!spec.contains("center")) throw ConfigError("q spec: missing 'center' [cx, cy]");
    const auto c = read_reals(spec["center"], "center");
    if (c.size() != 2) throw ConfigError("q spec: 'center' needs two numbers");
    const double width = read_real(spec, "width");
    if (!(width > 0.0)) throw ConfigError("q spec: 'width' must be positive");
    out.q = sampler::gaussian_bump_functional(read_real(spec, "amplitude"), c[0], c[1], width,
                                              read_box(spec));
  } else if (out.family == "custom_grid") {
    if (!spec.contains("values") || !spec["values"].is_array())
      throw ConfigError("q spec: missing 'values' table");
    std::vector<std::vector<double>> values;
    for (const auto& row : spec["values"]) values.push_back(read_reals(row, "values"));
    try {
      out.q = sampler::custom_grid_functional(std::move(values), read_box(spec));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("q spec: ") + e.what());
    }
  } else {
    throw ConfigError("q spec: unknown family '" + out.family + "'");
  }
  if (spec.contains("lambda")) {
    out.lambda = read_real(spec, "lambda");
    if (!(*out.lambda > 0.0)) throw ConfigError("q spec: 'lambda' must be positive");
  }
  if (spec.contains("c_window")) out.c_window = read_interval(spec["c_window"], "c_window");
  if (spec.contains("na_windows")) {
    const auto& w = spec["na_windows"];
    if (!w.is_array() || w.size() != 2) throw ConfigError("q spec: 'na_windows' needs two intervals");
    out.na_windows = std::make_pair(read_interval(w[0], "na_windows"), read_interval(w[1], "na_windows"));
  }
  if (spec.contains("cap")) {
    if (!spec["cap"].is_number_integer() || spec["cap"].get<int>() < 1)
      throw ConfigError("q spec: 'cap' must be a positive integer");
    out.cap = spec["cap"].get<int>();
  }
  return out;
}

}  // namespace

std::vector<double> LambdaGrid::values() const {
  std::vector<double> v;
  if (points <= 0) return v;
  if (points == 1) return {start};
  for (int i = 0; i < points; ++i) v.push_back(start + (stop - start) * i / (points - 1));
  return v;
}

LambdaGrid parse_lambda_grid(const std::string& text) {
  const auto parts = split(text, ':');
  LambdaGrid g;
  if (parts.size() == 1) {
    g.start = g.stop = parse_real(parts[0], "lambda");
    g.points = 1;
  } else if (parts.size() == 3) {
    g.start = parse_real(parts[0], "lambda start");
    g.stop = parse_real(parts[1], "lambda stop");
    const double p = parse_real(parts[2], "lambda points");
    if (p != std::floor(p) || p < 0 || p > 1e6) throw ConfigError("lambda points must be a count");
    g.points = static_cast<int>(p);
  } else {
    throw ConfigError("lambda grid must be 'start:stop:points' or a single value");
  }
  return g;
}

Interval parse_window(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("window must be 'a,b'");
  const double a = parse_real(parts[0], "window start");
  const double b = parse_real(parts[1], "window end");
  if (!(a < b)) throw ConfigError("window must satisfy a < b");
  return Interval(a, b);
}

void validate(const RunConfig& c) {
  const KernelSpec spec = KernelSpec::parse(c.kernel);
  if (!(c.window.a < c.window.b)) throw ConfigError("window must satisfy a < b");
  if (c.order < 8) throw ConfigError("order must be at least 8");
  const auto lambdas = c.lambda.values();
  if (lambdas.empty()) throw ConfigError("lambda grid is empty");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ConfigError("lambda grid must be positive");
  if (c.n_max < 8) throw ConfigError("nmax must be at least 8");
  if (c.n_compare < 1) throw ConfigError("ncompare must be positive");
  if (c.samples < 1) throw ConfigError("samples must be positive");
  if (c.workers < 1) throw ConfigError("workers must be positive");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be csv or json");
  if (spec.has_factorization()) {
    try {
      kernels::factorization(spec, c.window);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
}

int cmd_bound(const RunConfig& c, std::ostream& log) {
  const KernelSpec spec = KernelSpec::parse(c.kernel);
  const auto lambdas = c.lambda.values();
  const double lambda_max = std::max(3.0, *std::max_element(lambdas.begin(), lambdas.end()));
  const bounds::BoundReport r = bounds::bound_report(spec, c.window, c.n_max, lambda_max);

  json j = io::to_json(r);
  j["meta"] = io::meta_json(meta_for(c));
  io::write_atomic(out_file(c, "bound_report.json"), j.dump(2) + "\n");

  std::ostringstream csv;
  csv << io::csv_meta(meta_for(c)) << "n,log_tail_bound,theorem_form_bound\n";
  for (const auto& [n, v] : r.table) {
    const double theorem = r.b * n * n - n * n * std::log(static_cast<double>(n)) / (2.0 * r.sigma);
    csv << n << "," << fmt(v) << "," << fmt(theorem) << "\n";
  }
  io::write_atomic(out_file(c, "bound_table.csv"), csv.str());

  log << "bound: sigma=" << fmt(r.sigma) << " B=" << fmt(r.b) << " c=" << fmt(r.c)
      << " d=" << fmt(r.d) << "\n";
  return kOk;
}

int cmd_exact(const RunConfig& c, std::ostream& log) {
  const KernelSpec spec = KernelSpec::parse(c.kernel);
  if (spec.is_pfaffian()) throw ConfigError("exact: Pfaffian kernels have no counting spectrum");
  const exact::Spectrum s = exact::spectrum_for(spec, c.window, c.order);
  std::optional<Refinement> refine;
  if (!spec.is_planar()) {
    refine = refinement_drift(spec, c, s);
    if (refine->drift > kRefinementDriftTol)
      log << "warning: refinement drift " << fmt(refine->drift) << " exceeds "
          << fmt(kRefinementDriftTol) << " (order " << c.order << " vs " << refine->order << ")\n";
  }
  const exact::CountDistribution cd = exact::count_distribution(s);
  const auto lambdas = c.lambda.values();
  const MomentSource src = moment_source(spec, c.window, cd, lambdas);

  std::vector<double> tails;
  for (int n = 0; n <= static_cast<int>(cd.pmf.size()); ++n) tails.push_back(exact::tail(cd, n));
  std::vector<double> moments, uppers;
  for (double lam : lambdas) {
    moments.push_back(exact::exp_moment_sq(src.dist, lam));
    uppers.push_back(exact::exp_moment_sq_upper(src.dist, lam));
  }

  const io::Meta meta = meta_for(c);
  if (c.format == "json") {
    json j;
    j["meta"] = io::meta_json(meta);
    j["spectrum"] = io::to_json(s);
    j["count_distribution"] = io::to_json(cd);
    j["tails"] = tails;
    j["mean"] = exact::mean(cd);
    j["variance"] = exact::variance(cd);
    json m = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      m.push_back({{"lambda", lambdas[i]}, {"exp_moment_sq", moments[i]},
                   {"upper", uppers[i]}, {"high_precision", src.high_precision}});
    j["exp_moment_sq"] = m;
    if (refine)
      j["refinement"] = {{"order", refine->order},
                         {"drift", refine->drift},
                         {"warning", refine->drift > kRefinementDriftTol}};
    io::write_atomic(out_file(c, "exact.json"), j.dump(2) + "\n");
  } else {
    std::ostringstream sp, pm, mo;
    sp << io::csv_meta(meta) << "index,eigenvalue\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) sp << i << "," << fmt(s.eigenvalues[i]) << "\n";
    pm << io::csv_meta(meta) << "n,pmf,tail\n";
    for (std::size_t n = 0; n < tails.size(); ++n)
      pm << n << "," << fmt(n < cd.pmf.size() ? cd.pmf[n] : 0.0) << "," << fmt(tails[n]) << "\n";
    mo << io::csv_meta(meta) << "lambda,exp_moment_sq,upper,high_precision\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      mo << fmt(lambdas[i]) << "," << fmt(moments[i]) << "," << fmt(uppers[i]) << ","
         << (src.high_precision ? 1 : 0) << "\n";
    io::write_atomic(out_file(c, "exact_spectrum.csv"), sp.str());
    io::write_atomic(out_file(c, "exact_pmf.csv"), pm.str());
    io::write_atomic(out_file(c, "exact_moments.csv"), mo.str());
  }
  log << "exact: trace=" << fmt(s.trace) << " mean=" << fmt(exact::mean(cd))
      << " truncation=" << fmt(cd.truncation_error_bound) << "\n";
  return kOk;
}

int cmd_compare(const RunConfig& c, std::ostream& log) {
  const KernelSpec spec = KernelSpec::parse(c.kernel);
  require_line_scalar(spec, "compare");
  const auto lambdas = c.lambda.values();
  const double lambda_max = std::max(3.0, *std::max_element(lambdas.begin(), lambdas.end()));

  const bounds::ChainData chain = bounds::chain_data(spec, c.window);
  const bounds::BConstant b = bounds::b_constant_certified(chain, c.n_max);
  const bounds::MomentParameters mp = bounds::moment_parameters(spec, c.window, c.n_max);
  const bounds::CConstant cc = bounds::c_constant(mp, lambda_max);

  const exact::Spectrum s = exact::spectrum_for(spec, c.window, c.order);
  const exact::CountDistribution cd = exact::count_distribution(s);
  const MomentSource src = moment_source(spec, c.window, cd, lambdas);

  std::ostringstream csv;
  csv << io::csv_meta(meta_for(c))
      << "kind,index,log_exact,log_chained_bound,log_theorem_bound,log_sigma_form_bound,dominates\n";
  int failures = 0;
  for (int n = 1; n <= c.n_compare; ++n) {
    const double nn = static_cast<double>(n);
    const double log_exact = std::log(exact::tail(cd, n));
    const double chained = chain.tail_log_bound(n);
    const double theorem = b.value * nn * nn - nn * nn * std::log(nn) / (2.0 * mp.sigma);
    const bool ok = dominated(log_exact, chained) && dominated(chained, theorem);
    failures += ok ? 0 : 1;
    csv << "tail," << n << "," << fmt(log_exact) << "," << fmt(chained) << "," << fmt(theorem)
        << ",," << (ok ? 1 : 0) << "\n";
  }
  for (double lam : lambdas) {
    const double log_exact = std::log(exact::exp_moment_sq_upper(src.dist, lam));
    const double chained = bounds::exp_moment_log_bound(mp, lam);
    const double theorem = cc.c * std::expm1(4.0 * mp.sigma * lam);
    const double sigma_form = cc.c_sigma_form * std::expm1(mp.sigma * lam);
    const bool ok = dominated(log_exact, chained) && dominated(chained, theorem);
    failures += ok ? 0 : 1;
    csv << "moment," << fmt(lam) << "," << fmt(log_exact) << "," << fmt(chained) << ","
        << fmt(theorem) << "," << fmt(sigma_form) << "," << (ok ? 1 : 0) << "\n";
  }
  io::write_atomic(out_file(c, "compare.csv"), csv.str());
  log << "compare: B=" << fmt(b.value) << " c=" << fmt(cc.c) << " failures=" << failures << "\n";
  return failures == 0 ? kOk : kNumerical;
}

int cmd_sample(const RunConfig& c, std::ostream& log) {
  const KernelSpec spec = KernelSpec::parse(c.kernel);
  require_line_scalar(spec, "sample");
  const QSpec qs = load_q_spec(c.q_spec);
  const double lambda = qs.lambda.value_or(c.lambda.values().front());

  const sampler::SampleBatch batch = sampler::sample(spec, c.window, c.order, c.samples, c.seed, c.workers);
  const io::Meta meta = meta_for(c);

  std::ostringstream lines;
  json head = {{"meta", io::meta_json(meta)}, {"algorithm", batch.algorithm}, {"samples", c.samples}};
  lines << head.dump() << "\n";
  for (const auto& config : batch.configurations) {
    std::vector<double> sorted = config;
    std::sort(sorted.begin(), sorted.end());
    lines << json(sorted).dump() << "\n";
  }
  io::write_atomic(out_file(c, "samples.jsonl"), lines.str());

  const sampler::McEstimate mc = sampler::mc_exp_moment(batch, qs.q.q, lambda);
  const Interval cw = qs.c_window.value_or(Interval(c.window.a, c.window.a + 1.0));
  const double norm = qs.q.norm_1_inf;
  const double arg = norm * lambda;
  const bounds::MomentParameters mp = bounds::moment_parameters(spec, cw, c.n_max);
  const double cval = arg > 0.0 ? bounds::c_constant(mp, std::max(3.0, arg)).c : 0.0;
  const double log_bound = cval * std::expm1(4.0 * mp.sigma * arg);
  const bool mc_ok = std::log(std::max(mc.estimate - 3.0 * mc.stderr_,
                                       std::numeric_limits<double>::min())) <= log_bound;

  json mj = {{"meta", io::meta_json(meta)},
             {"estimate", mc.estimate},
             {"stderr", mc.stderr_},
             {"samples", mc.samples},
             {"seed", c.seed},
             {"lambda", lambda},
             {"family", qs.family},
             {"norm_1_inf", norm},
             {"refined_norm_1_inf", qs.q.refined_norm_1_inf},
             {"c", cval},
             {"c_window", {cw.a, cw.b}},
             {"sigma", mp.sigma},
             {"log_bound", log_bound},
             {"respected", mc_ok}};
  io::write_atomic(out_file(c, "mc.json"), mj.dump(2) + "\n");

  const double mid = 0.5 * (c.window.a + c.window.b);
  const auto windows = qs.na_windows.value_or(
      std::make_pair(Interval(c.window.a, mid), Interval(mid, c.window.b)));
  const sampler::NaProbe na =
      sampler::negative_association_probe(batch, windows.first, windows.second, qs.cap);
  const bool na_ok = na.lhs <= na.rhs + 3.0 * na.stderr_;
  json nj = {{"meta", io::meta_json(meta)},
             {"lhs", na.lhs},
             {"rhs", na.rhs},
             {"stderr", na.stderr_},
             {"samples", na.samples},
             {"c1", {windows.first.a, windows.first.b}},
             {"c2", {windows.second.a, windows.second.b}},
             {"cap", qs.cap},
             {"respected", na_ok}};
  io::write_atomic(out_file(c, "na_probe.json"), nj.dump(2) + "\n");

  log << "sample: estimate=" << fmt(mc.estimate) << " stderr=" << fmt(mc.stderr_)
      << " log_bound=" << fmt(log_bound) << " na_lhs=" << fmt(na.lhs) << " na_rhs=" << fmt(na.rhs)
      << "\n";
  return mc_ok && na_ok ? kOk : kNumerical;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sub-Poissonian bounds for determinantal and Pfaffian counting statistics"};
  app.name("subpois");
  app.set_version_flag("--version", io::version());
  app.require_subcommand(1);

  RunConfig config;
  std::string window_text = "0,1", lambda_text = "0.1:2:6";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--kernel", config.kernel, "kernel id (sine, bessel:s=<real>, airy, ginibre, sine4, airy4)");
    sub->add_option("--window", window_text, "window a,b");
    sub->add_option("--order", config.order, "quadrature order");
    sub->add_option("--lambda", lambda_text, "lambda grid start:stop:points");
    sub->add_option("--nmax", config.n_max, "largest n for the constant B");
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--samples", config.samples, "number of sampled configurations");
    sub->add_option("--format", config.format, "csv or json");
    sub->add_option("--out", config.out, "output directory");
  };
  CLI::App* bound = app.add_subcommand("bound", "tail and moment bound constants");
  CLI::App* ex = app.add_subcommand("exact", "spectrum, count law and exact moments");
  CLI::App* compare = app.add_subcommand("compare", "exact statistics against the bounds");
  CLI::App* smp = app.add_subcommand("sample", "sampling, Monte Carlo moment and association probe");
  for (CLI::App* sub : {bound, ex, compare, smp}) add_common(sub);
  compare->add_option("--ncompare", config.n_compare, "largest n in the tail comparison");
  smp->add_option("--q-spec", config.q_spec, "JSON file describing q");
  smp->add_option("--workers", config.workers, "worker threads");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  try {
    config.window = parse_window(window_text);
    config.lambda = parse_lambda_grid(lambda_text);
    for (CLI::App* sub : {bound, ex, compare, smp})
      if (sub->parsed()) config.command = sub->get_name();
    validate(config);
    if (config.command == "bound") return cmd_bound(config, err);
    if (config.command == "exact") return cmd_exact(config, err);
    if (config.command == "compare") return cmd_compare(config, err);
    return cmd_sample(config, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace subpois::cli
