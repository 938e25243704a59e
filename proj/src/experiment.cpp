#include "rbfcv/experiment.hpp"

#include "rbfcv/errors.hpp"
#include "rbfcv/report_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

namespace rbfcv::bench {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::array<CvStrategy, 3> kStrategies{CvStrategy::Exact, CvStrategy::Surrogate,
                                                CvStrategy::Empirical};

std::size_t slot(CvStrategy s) {
  switch (s) {
    case CvStrategy::Exact:
      return 0;
    case CvStrategy::Surrogate:
      return 1;
    case CvStrategy::Empirical:
      return 2;
  }
  return 0;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

fs::path prepare_dir(const ExperimentConfig& config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

json sweep_json(const SweepResult& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"index", f.index + 1}, {"reason", f.reason}});
  return {{"best_index", r.best_index + 1},   {"best_epsilon", number(r.best_epsilon)},
          {"best_norm", number(r.best_norm)}, {"total_time", r.total_time},
          {"assembly_time", r.assembly_time}, {"failures", failures}};
}

json sweeps_json(const StrategySweeps& s) {
  json j = json::object();
  for (CvStrategy strategy : kStrategies) {
    const SweepResult* r = s.get(strategy);
    j[std::string(to_string(strategy))] = r ? sweep_json(*r) : json("n/a");
  }
  return j;
}

void write_sweeps_csv(const fs::path& path, const StrategySweeps& s) {
  const SweepResult* any = s.exact ? &*s.exact : s.surrogate ? &*s.surrogate : &*s.empirical;
  auto out = open_out(path);
  write_sweep_csv(out, any->epsilons, s.get(CvStrategy::Exact), s.get(CvStrategy::Surrogate),
                  s.get(CvStrategy::Empirical));
}

std::vector<double> grid(const ExperimentConfig& config) {
  return EpsilonGrid{-5.0, 5.0, config.grid_count}.values();
}

SweepOptions sweep_options(const ExperimentConfig& config) { return {config.threads}; }

bool empirical_applicable(const ExperimentConfig& config) {
  return config.centers == CenterLayout::Coincident && !config.k_folds.has_value();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

StrategySweeps run_strategies(const ExperimentConfig& config, std::size_t mu,
                              const std::vector<CvStrategy>& strategies) {
  const SystemBuilder build = make_builder(config, mu);
  const Index m = static_cast<Index>(mu + exact_sqrt(mu));
  const FoldPartition folds = make_folds(config, m);
  const std::vector<double> eps = grid(config);
  StrategySweeps out;
  for (CvStrategy s : strategies) {
    SweepResult r = sweep(build, s, folds, eps, sweep_options(config));
    switch (s) {
      case CvStrategy::Exact:
        out.exact = std::move(r);
        break;
      case CvStrategy::Surrogate:
        out.surrogate = std::move(r);
        break;
      case CvStrategy::Empirical:
        out.empirical = std::move(r);
        break;
    }
  }
  return out;
}

TableResult table_run(const ExperimentConfig& config, const std::string& stem) {
  validate(config);
  const fs::path dir = prepare_dir(config);
  std::vector<CvStrategy> strategies{CvStrategy::Exact, CvStrategy::Surrogate};
  if (empirical_applicable(config)) strategies.push_back(CvStrategy::Empirical);

  TableResult result;
  result.sweeps = run_strategies(config, config.mu, strategies);
  for (CvStrategy s : kStrategies) {
    TableRow row{s, false, std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (const SweepResult* r = result.sweeps.get(s)) {
      row = {s, true, r->best_norm, r->best_epsilon, r->total_time};
    }
    result.rows.push_back(row);
  }

  {
    auto out = open_out(dir / (stem + "_table.csv"));
    out << "strategy,best_norm,best_epsilon,total_time\n";
    for (const auto& row : result.rows) {
      out << to_string(row.strategy) << ',';
      if (row.applicable) {
        out << format_double(row.best_norm) << ',' << format_double(row.best_epsilon) << ','
            << format_double(row.total_time) << '\n';
      } else {
        out << "n/a,n/a,n/a\n";
      }
    }
  }
  write_sweeps_csv(dir / (stem + "_sweep.csv"), result.sweeps);

  json j = {{"config", json::parse(config_to_json(config))}, {"sweeps", sweeps_json(result.sweeps)}};
  if (!empirical_applicable(config)) {
    j["sweeps"]["empirical"] = "not applicable: G is not square";
  }
  write_json(dir / (stem + "_summary.json"), j);
  return result;
}

}  // namespace

std::string_view to_string(TestId id) {
  switch (id) {
    case TestId::Test1:
      return "test1";
    case TestId::Test2:
      return "test2";
    case TestId::Test3:
      return "test3";
    case TestId::Test4:
      return "test4";
    case TestId::Custom:
      return "custom";
  }
  return "custom";
}

TestId parse_test_id(std::string_view text) {
  for (TestId id : {TestId::Test1, TestId::Test2, TestId::Test3, TestId::Test4, TestId::Custom}) {
    if (text == to_string(id)) return id;
  }
  throw ConfigError("unknown test '" + std::string(text) + "'");
}

std::string_view to_string(CenterLayout layout) {
  return layout == CenterLayout::Coincident ? "coincident" : "exterior";
}

CenterLayout parse_center_layout(std::string_view text) {
  if (text == "coincident") return CenterLayout::Coincident;
  if (text == "exterior") return CenterLayout::Exterior;
  throw ConfigError("unknown center layout '" + std::string(text) + "'");
}

const std::vector<std::size_t>& supported_mu() {
  static const std::vector<std::size_t> values{16, 64, 144, 256, 400, 576, 784, 1024};
  return values;
}

ExperimentConfig preset(TestId id) {
  ExperimentConfig c;
  c.test = id;
  switch (id) {
    case TestId::Test2:
      c.kernel = KernelFamily::InverseMultiquadric;
      c.method = CollocationMethod::Hermite;
      break;
    case TestId::Test3:
      c.centers = CenterLayout::Exterior;
      break;
    default:
      break;
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  const auto& mus = supported_mu();
  require(std::find(mus.begin(), mus.end(), c.mu) != mus.end(),
          "mu must be a perfect square from the supported list (16, 64, ..., 1024), got " +
              std::to_string(c.mu));
  if (c.method == CollocationMethod::Hermite &&
      !RbfKernel(c.kernel, 1.0, c.laplacian_mode).has_bilaplacian()) {
    throw UnsupportedKernel("Hermite collocation needs the bilaplacian of the kernel; " +
                            std::string(to_string(c.kernel)) + " does not provide one");
  }
  require(!(c.centers == CenterLayout::Exterior && c.method != CollocationMethod::Kansa),
          "exterior centers require Kansa collocation");
  require(c.grid_count >= 2, "grid_count must be at least 2");
  require(c.threads >= 1, "threads must be at least 1");

  const Index m = static_cast<Index>(c.mu + exact_sqrt(c.mu));
  if (c.k_folds) {
    require(*c.k_folds >= 2 && *c.k_folds <= m,
            "k must lie in [2, " + std::to_string(m) + "], got " + std::to_string(*c.k_folds));
  }
  for (CvStrategy s : c.strategies) {
    if (s == CvStrategy::Empirical) {
      require(c.centers == CenterLayout::Coincident,
              "empirical LOOCV is not applicable: G is not square with exterior centers");
      require(!c.k_folds || *c.k_folds == m, "empirical LOOCV needs leave-one-out folds");
    }
  }

  switch (c.test) {
    case TestId::Test1:
      require(c.method == CollocationMethod::Kansa && c.centers == CenterLayout::Coincident,
              "test1 uses Kansa collocation with coincident centers");
      break;
    case TestId::Test2:
      require(c.method == CollocationMethod::Hermite &&
                  c.kernel == KernelFamily::InverseMultiquadric &&
                  c.centers == CenterLayout::Coincident,
              "test2 uses Hermite collocation with the IMQ kernel");
      break;
    case TestId::Test3:
      require(c.method == CollocationMethod::Kansa && c.kernel == KernelFamily::Matern2 &&
                  c.centers == CenterLayout::Exterior,
              "test3 uses Kansa collocation, the Matern kernel and exterior centers");
      break;
    case TestId::Test4:
      require(c.method == CollocationMethod::Kansa && c.kernel == KernelFamily::Matern2 &&
                  c.centers == CenterLayout::Coincident,
              "test4 uses Kansa collocation, the Matern kernel and coincident centers");
      break;
    case TestId::Custom:
      break;
  }
}

ExperimentConfig config_from_json(std::string_view text, ExperimentConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "test") {
        c.test = parse_test_id(v.get<std::string>());
      } else if (key == "mu") {
        c.mu = v.get<std::size_t>();
      } else if (key == "kernel") {
        c.kernel = parse_kernel_family(v.get<std::string>());
      } else if (key == "method") {
        c.method = parse_method(v.get<std::string>());
      } else if (key == "centers") {
        c.centers = parse_center_layout(v.get<std::string>());
      } else if (key == "k") {
        if (v.is_string() && v.get<std::string>() == "loo") {
          c.k_folds.reset();
        } else {
          c.k_folds = v.get<Index>();
        }
      } else if (key == "fold_scheme") {
        c.fold_scheme = parse_fold_scheme(v.get<std::string>());
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "laplacian_mode") {
        c.laplacian_mode = parse_laplacian_mode(v.get<std::string>());
      } else if (key == "out") {
        c.output_dir = v.get<std::string>();
      } else if (key == "grid_count") {
        c.grid_count = v.get<std::size_t>();
      } else if (key == "threads") {
        c.threads = v.get<unsigned>();
      } else if (key == "strategies") {
        c.strategies.clear();
        for (const auto& s : v) c.strategies.push_back(parse_strategy(s.get<std::string>()));
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json strategies = json::array();
  for (CvStrategy s : c.strategies) strategies.push_back(std::string(to_string(s)));
  json j = {{"test", std::string(to_string(c.test))},
            {"mu", c.mu},
            {"kernel", std::string(to_string(c.kernel))},
            {"method", std::string(to_string(c.method))},
            {"centers", std::string(to_string(c.centers))},
            {"fold_scheme", std::string(to_string(c.fold_scheme))},
            {"seed", c.seed},
            {"laplacian_mode", std::string(to_string(c.laplacian_mode))},
            {"out", c.output_dir},
            {"grid_count", c.grid_count},
            {"threads", c.threads},
            {"strategies", strategies}};
  j["k"] = c.k_folds ? json(*c.k_folds) : json("loo");
  return j.dump(2);
}

Layout make_layout(const ExperimentConfig& config, std::size_t mu) {
  Layout layout;
  layout.collocation = collocation_points(mu);
  layout.centers = layout.collocation;
  if (config.centers == CenterLayout::Exterior) {
    PointSet boundary;
    for (std::size_t i = 0; i < layout.collocation.size(); ++i) {
      if (layout.collocation.role(i) == PointRole::Boundary) {
        boundary.add(layout.collocation.point(i), PointRole::Boundary);
      }
    }
    layout.centers.append(exterior_centers(boundary, default_exterior_offset(boundary.size())));
  }
  return layout;
}

CollocationProblem make_problem(const ExperimentConfig& config, const Layout& layout,
                                double epsilon) {
  const RbfKernel kernel(config.kernel, epsilon, config.laplacian_mode);
  if (config.method == CollocationMethod::Hermite) return build_hermite(layout.collocation, kernel);
  return build_kansa(layout.collocation, layout.centers, kernel);
}

SystemBuilder make_builder(const ExperimentConfig& config, std::size_t mu) {
  auto layout = std::make_shared<const Layout>(make_layout(config, mu));
  return [config, layout](double epsilon) {
    return assemble(make_problem(config, *layout, epsilon));
  };
}

FoldPartition make_folds(const ExperimentConfig& config, Index m) {
  if (!config.k_folds) return leave_one_out(m);
  return partition_folds(m, *config.k_folds, config.fold_scheme, config.seed);
}

const SweepResult* StrategySweeps::get(CvStrategy s) const {
  switch (s) {
    case CvStrategy::Exact:
      return exact ? &*exact : nullptr;
    case CvStrategy::Surrogate:
      return surrogate ? &*surrogate : nullptr;
    case CvStrategy::Empirical:
      return empirical ? &*empirical : nullptr;
  }
  return nullptr;
}

double gap_at(const SweepResult& a, const SweepResult& b, std::size_t i) {
  const double x = a.norms.at(i);
  const double y = b.norms.at(i);
  if (a.failed(i) || b.failed(i)) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(x - y);
}

std::vector<Index> test4_fold_counts(Index m) {
  std::vector<Index> ks;
  for (int i = 0; i <= 7; ++i) {
    const Index k = m >> i;
    if (k >= 2 && (ks.empty() || ks.back() != k)) ks.push_back(k);
  }
  return ks;
}

Test1Result run_test1(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_dir(config);
  const std::string stem = "test1_" + std::string(to_string(config.kernel));

  Test1Result result;
  for (std::size_t mu : supported_mu()) {
    if (mu > config.mu) break;
    StrategySweeps s = run_strategies(config, mu, {kStrategies.begin(), kStrategies.end()});
    Test1Row row;
    row.mu = mu;
    row.m = static_cast<Index>(mu + exact_sqrt(mu));
    row.n = row.m;
    for (CvStrategy strategy : kStrategies) {
      const SweepResult& r = *s.get(strategy);
      row.best_epsilon[slot(strategy)] = r.best_epsilon;
      row.best_norm[slot(strategy)] = r.best_norm;
      row.time[slot(strategy)] = r.total_time;
    }
    const std::size_t star = s.exact->best_index;
    row.gap_surrogate = gap_at(*s.exact, *s.surrogate, star);
    row.gap_empirical = gap_at(*s.exact, *s.empirical, star);
    row.assembly_time = s.exact->assembly_time;
    write_sweeps_csv(dir / (stem + "_mu" + std::to_string(mu) + "_sweep.csv"), s);
    result.rows.push_back(row);
    result.sweeps.push_back(std::move(s));
  }

  {
    auto out = open_out(dir / (stem + "_summary.csv"));
    out << "mu,m,n,best_epsilon_exact,best_epsilon_surrogate,best_epsilon_empirical,"
           "best_norm_exact,best_norm_surrogate,best_norm_empirical,"
           "time_exact,time_surrogate,time_empirical,gap_surrogate,gap_empirical,assembly_time\n";
    for (const auto& r : result.rows) {
      out << r.mu << ',' << r.m << ',' << r.n;
      for (double v : r.best_epsilon) out << ',' << format_double(v);
      for (double v : r.best_norm) out << ',' << format_double(v);
      for (double v : r.time) out << ',' << format_double(v);
      out << ',' << format_double(r.gap_surrogate) << ',' << format_double(r.gap_empirical) << ','
          << format_double(r.assembly_time) << '\n';
    }
  }
  {
    auto out = open_out(dir / ("test1_points_mu" + std::to_string(config.mu) + ".csv"));
    write_points_csv(out, make_layout(config, config.mu).collocation);
  }

  json rows = json::array();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    rows.push_back({{"mu", r.mu},
                    {"m", r.m},
                    {"gap_surrogate", number(r.gap_surrogate)},
                    {"gap_empirical", number(r.gap_empirical)},
                    {"sweeps", sweeps_json(result.sweeps[i])}});
  }
  write_json(dir / (stem + "_summary.json"),
             {{"config", json::parse(config_to_json(config))}, {"rows", rows}});
  return result;
}

TableResult run_test2(const ExperimentConfig& config) { return table_run(config, "test2"); }

TableResult run_test3(const ExperimentConfig& config) {
  validate(config);
  TableResult result = table_run(config, "test3");
  const fs::path dir(config.output_dir);
  const Layout layout = make_layout(config, config.mu);
  auto out = open_out(dir / "test3_points.csv");
  write_points_csv(out, layout.centers);
  return result;
}

Test4Result run_test4(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_dir(config);
  const Index m = static_cast<Index>(config.mu + exact_sqrt(config.mu));
  const SystemBuilder build = make_builder(config, config.mu);
  const std::vector<double> eps = grid(config);

  Test4Result result;
  json rows = json::array();
  for (Index k : test4_fold_counts(m)) {
    const FoldPartition folds = partition_folds(m, k, config.fold_scheme, config.seed);
    const SweepResult exact = sweep(build, CvStrategy::Exact, folds, eps, sweep_options(config));
    const SweepResult surrogate =
        sweep(build, CvStrategy::Surrogate, folds, eps, sweep_options(config));
    Test4Row row;
    row.k = k;
    row.time_exact = exact.total_time;
    row.time_surrogate = surrogate.total_time;
    row.best_epsilon_exact = exact.best_epsilon;
    row.best_epsilon_surrogate = surrogate.best_epsilon;
    row.norm_exact = exact.best_norm;
    row.norm_surrogate = surrogate.norms[exact.best_index];
    row.gap = gap_at(exact, surrogate, exact.best_index);
    result.rows.push_back(row);
    rows.push_back({{"k", k},
                    {"gap", number(row.gap)},
                    {"exact", sweep_json(exact)},
                    {"surrogate", sweep_json(surrogate)}});
  }

  auto out = open_out(dir / "test4_folds.csv");
  out << "k,time_exact,time_surrogate,best_epsilon_exact,best_epsilon_surrogate,"
         "norm_exact,norm_surrogate,gap\n";
  for (const auto& r : result.rows) {
    out << r.k << ',' << format_double(r.time_exact) << ',' << format_double(r.time_surrogate)
        << ',' << format_double(r.best_epsilon_exact) << ','
        << format_double(r.best_epsilon_surrogate) << ',' << format_double(r.norm_exact) << ','
        << format_double(r.norm_surrogate) << ',' << format_double(r.gap) << '\n';
  }
  write_json(dir / "test4_summary.json",
             {{"config", json::parse(config_to_json(config))}, {"rows", rows}});
  return result;
}

CustomResult run_custom(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_dir(config);
  std::vector<CvStrategy> strategies = config.strategies;
  if (strategies.empty()) {
    strategies = {CvStrategy::Exact, CvStrategy::Surrogate};
    if (empirical_applicable(config)) strategies.push_back(CvStrategy::Empirical);
  }

  CustomResult result;
  result.sweeps = run_strategies(config, config.mu, strategies);
  write_sweeps_csv(dir / "custom_sweep.csv", result.sweeps);

  const Layout layout = make_layout(config, config.mu);
  const FoldPartition folds = make_folds(config, static_cast<Index>(layout.collocation.size()));
  for (CvStrategy s : strategies) {
    const SweepResult& r = *result.sweeps.get(s);
    const AssembledSystem sys = assemble(make_problem(config, layout, r.best_epsilon));
    auto out = open_out(dir / ("custom_cv_" + std::string(to_string(s)) + ".csv"));
    write_cv_report_csv(out, run_cv(s, sys, folds));
    if (s == CvStrategy::Surrogate) result.theorem_residuals = theorem_residuals(sys, folds);
  }

  json j = {{"config", json::parse(config_to_json(config))},
            {"sweeps", sweeps_json(result.sweeps)}};
  if (!result.theorem_residuals.empty()) {
    const auto& t = result.theorem_residuals;
    double sum = 0.0;
    for (double v : t) sum += v;
    j["theorem_residuals"] = {{"max", number(*std::max_element(t.begin(), t.end()))},
                              {"mean", number(sum / static_cast<double>(t.size()))},
                              {"folds", t.size()}};
  }
  write_json(dir / "custom_summary.json", j);
  return result;
}

}  // namespace rbfcv::bench
