#include "plap/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "plap/analysis.hpp"
#include "plap/errors.hpp"
#include "plap/mesh.hpp"

namespace plap::cli {

namespace {

using Json = nlohmann::ordered_json;

struct KeyInfo {
  const char* key;
  const char* help;
};

// Every accepted key; flags use the same names with '-' for '_'.
constexpr KeyInfo kKeys[] = {
    {"domain", "interval | disc | square | rectangle | lshape | triangle | file"},
    {"mesh", "mesh file (implies domain = file)"},
    {"p", "exponent of the u equation"},
    {"q", "exponent of the v equation"},
    {"alpha", "coupling power of u"},
    {"beta", "coupling power of v (default q (1 - alpha/p))"},
    {"h", "mesh size"},
    {"n", "element count for 1D domains"},
    {"width", "domain width, interval length, L-shape size or triangle base"},
    {"height", "rectangle height or triangle altitude"},
    {"arm", "L-shape arm width"},
    {"eps", "outer tolerance on |lambda^k - lambda^(k-1)|"},
    {"max_outer", "maximum outer iterations"},
    {"newton_tol", "relative Newton residual tolerance"},
    {"newton_max_iters", "maximum Newton iterations per solve"},
    {"regularization", "gradient regularization in |grad u|_eps"},
    {"damping", "backtracking | none"},
    {"continuation", "comma-separated exponent ladder for Newton"},
    {"weight", "one | step2 | nodal-value file"},
    {"guess", "default | scalar | quadratic | cosine | bessel | nodal-value file"},
    {"out", "output directory"},
    {"format", "summary format: csv | json"},
    {"threads", "threads for the two decoupled solves"},
    {"field", "export nodal fields (true | false)"},
    {"h_values", "comma-separated mesh sizes for eoc-study"},
    {"p_values", "comma-separated exponents for fp-curve (inf allowed)"},
};

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
  if (key != "p_values" && !std::isfinite(value)) {
    throw ConfigError("'" + key + "': value must be finite");
  }
  return value;
}

long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("'" + key + "': empty list");
  return out;
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<double> read_columns(const std::filesystem::path& path, std::size_t rows,
                                 std::size_t& columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read nodal-value file " + path.string());
  std::vector<double> values;
  std::string line;
  columns = 0;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    double x = 0.0;
    while (ls >> x) row.push_back(x);
    if (row.empty()) continue;
    if (columns == 0) columns = row.size();
    if (row.size() != columns) {
      throw ConfigError(path.string() + ": inconsistent column count at row " +
                        std::to_string(count + 1));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++count;
  }
  if (count != rows) {
    throw ConfigError(path.string() + ": " + std::to_string(count) + " rows for " +
                      std::to_string(rows) + " nodes");
  }
  return values;
}

CLI::App& build_app(CLI::App& app, std::string& command, std::string& config_path,
                    std::map<std::string, std::string>& flags) {
  app.set_help_flag("--help", "Print this help message and exit");
  app.add_option("command", command,
                 "solve | scalar | radial | resonant | bounds | eoc-study | fp-curve")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file");
  for (const auto& info : kKeys) {
    std::string flag = info.key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "field") {
      app.add_flag_callback("--field", [&flags] { flags["field"] = "true"; }, info.help);
      continue;
    }
    app.add_option("--" + flag, flags[info.key], info.help);
  }
  return app;
}

SpacePtr build_space(const RunConfig& cfg, std::optional<Mesh2D>& mesh_out) {
  const DomainSpec& d = cfg.domain;
  switch (d.kind) {
    case DomainKind::interval:
    case DomainKind::disc_radial: {
      std::size_t n = cfg.elements;
      if (n == 0) n = static_cast<std::size_t>(std::max(1.0, std::round(d.width / d.h)));
      return d.kind == DomainKind::interval ? make_space(generate_interval(0.0, d.width, n))
                                            : make_space(generate_radial(n));
    }
    case DomainKind::external_file:
      mesh_out.emplace(read_mesh(d.path));
      return make_space(*mesh_out);
    default:
      mesh_out.emplace(generate_structured_2d(d));
      return make_space(*mesh_out);
  }
}

Coefficient build_weight(const RunConfig& cfg, const SpacePtr& space) {
  if (cfg.weight == "one") return Coefficient::one();
  if (cfg.weight == "step2") {
    return Coefficient::function([](const Point& x) { return x.x <= 1.0 ? 1.0 : 2.0; });
  }
  std::size_t cols = 0;
  auto values = read_columns(cfg.weight, space->num_nodes(), cols);
  if (cols != 1) throw ConfigError("weight file must have one column");
  return Coefficient::nodal(
      FemFunction(space, Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()))));
}

OuterConfig build_outer(const RunConfig& cfg, const SpacePtr& space,
                        std::vector<IterationRecord>& history) {
  OuterConfig outer = cfg.outer;
  outer.on_iteration = [&history](const IterationRecord& r) { history.push_back(r); };
  const std::string& g = cfg.guess;
  if (g == "default") {
    outer.guess = GuessKind::default_bump;
    return outer;
  }
  if (g == "scalar") {
    outer.guess = GuessKind::scalar_pair;
    return outer;
  }
  std::function<double(double)> radial;
  if (g == "quadratic") radial = [](double r) { return (1.0 - r) * (1.0 - r); };
  if (g == "cosine") radial = [](double r) { return std::cos(0.5 * std::numbers::pi * r); };
  if (g == "bessel") radial = [](double r) { return bessel_ground_state(r); };
  outer.guess = GuessKind::supplied;
  if (radial) {
    if (space->dimension() != 1) throw ConfigError("guess '" + g + "' needs a 1D domain");
    outer.guess_u = interpolate_raw(space, [&](const Point& x) { return radial(x.x); }).values;
    outer.guess_v = outer.guess_u;
    return outer;
  }
  std::size_t cols = 0;
  auto values = read_columns(g, space->num_nodes(), cols);
  if (cols > 2) throw ConfigError("guess file must have one or two columns");
  const auto n = static_cast<Eigen::Index>(space->num_nodes());
  outer.guess_u.resize(n);
  outer.guess_v.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    outer.guess_u[i] = values[static_cast<std::size_t>(i) * cols];
    outer.guess_v[i] = values[static_cast<std::size_t>(i) * cols + cols - 1];
  }
  return outer;
}

std::string history_csv(const std::vector<IterationRecord>& history) {
  std::string s = "k,lambda,delta,newton_u,newton_v\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& h = history[i];
    s += std::to_string(h.k) + "," + format_number(h.lambda) + ",";
    if (i > 0) s += format_number(std::abs(h.lambda - history[i - 1].lambda));
    s += "," + std::to_string(h.newton_u) + "," + std::to_string(h.newton_v) + "\n";
  }
  return s;
}

std::string field_csv(const FemFunction& u, const FemFunction& v) {
  const bool planar = u.space->dimension() == 2;
  std::string s = planar ? "x,y,u,v\n" : "x,u,v\n";
  const auto& x = u.space->coordinates();
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += format_number(x[i].x) + ",";
    if (planar) s += format_number(x[i].y) + ",";
    s += format_number(u[i]) + "," + format_number(v[i]) + "\n";
  }
  return s;
}

void add_report(Json& j, const BoundReport& r) {
  auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
  j["lower_bound"] = opt(r.lower);
  j["upper_kind"] = to_string(r.upper_kind);
  j["upper_bound"] = opt(r.upper);
  j["assumes_hypothesis"] = r.assumes_hypothesis;
  j["lambda_p"] = opt(r.lambda_p);
  j["lambda_q"] = opt(r.lambda_q);
  j["constant_c"] = opt(r.constant);
  j["area"] = opt(r.area);
  j["inradius"] = opt(r.inradius);
  j["weight_min"] = opt(r.weight_min);
  j["dimension"] = opt(r.dimension);
}

std::string summary_text(const Json& j, OutputFormat format) {
  if (format == OutputFormat::json) return j.dump(2) + "\n";
  std::string s = "key,value\n";
  for (const auto& [key, value] : j.items()) {
    s += key + ",";
    if (value.is_number_float()) s += format_number(value.get<double>());
    else if (value.is_string()) s += value.get<std::string>();
    else if (!value.is_null()) s += value.dump();
    s += "\n";
  }
  return s;
}

class Writer {
 public:
  explicit Writer(const RunConfig& cfg) : cfg_(cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out.string() + ": " + ec.message());
  }
  void text(const std::string& name, const std::string& content) const {
    write_file(cfg_.out / name, content);
  }
  void summary(const Json& j) const {
    text(cfg_.format == OutputFormat::json ? "summary.json" : "summary.csv",
         summary_text(j, cfg_.format));
  }

 private:
  const RunConfig& cfg_;
};

// Bound report for the coupled system on the configured domain.
BoundReport system_bounds(const RunConfig& cfg, const SpacePtr& space,
                          const std::optional<Mesh2D>& mesh, const SystemParams& params,
                          const NewtonConfig& newton) {
  OuterConfig sub = cfg.outer;
  sub.guess = GuessKind::default_bump;
  sub.on_iteration = nullptr;
  const double lp = solve_scalar(space, params.p, sub, newton).lambda;
  const double lq = params.q == params.p ? lp : solve_scalar(space, params.q, sub, newton).lambda;
  switch (cfg.domain.kind) {
    case DomainKind::interval:
      if (cfg.domain.width == 1.0) return report_1d(params, lp, lq);
      break;
    case DomainKind::disc_radial:
      return report_ball(2, params, lp, lq);
    case DomainKind::rectangle:
    case DomainKind::isosceles_triangle:
      return report_2d(params, lp, lq, domain_area(*mesh), inscribed_radius(*mesh), true);
    case DomainKind::lshape:
    case DomainKind::external_file:
      return report_2d(params, lp, lq, domain_area(*mesh), inscribed_radius(*mesh), false);
  }
  BoundReport r;
  r.lower = lower_bound(lp, lq);
  r.lambda_p = lp;
  r.lambda_q = lq;
  return r;
}

Json base_summary(const RunConfig& cfg, const SpacePtr& space) {
  Json j;
  j["command"] = to_string(cfg.command);
  j["domain"] = to_string(cfg.domain.kind);
  j["nodes"] = space->num_nodes();
  j["elements"] = space->num_elements();
  return j;
}

void add_params(Json& j, const SystemParams& params) {
  j["p"] = params.p;
  j["q"] = params.q;
  j["alpha"] = params.alpha;
  j["beta"] = params.beta;
}

void add_result(Json& j, const EigenResult& r) {
  j["lambda"] = r.lambda;
  j["converged"] = r.converged;
  j["outer_iterations"] = r.outer_iters;
}

int run_eigen(const RunConfig& cfg, std::ostream& log, const Writer& out) {
  std::optional<Mesh2D> mesh;
  const SpacePtr space = build_space(cfg, mesh);
  std::vector<IterationRecord> history;
  const OuterConfig outer = build_outer(cfg, space, history);
  Json j = base_summary(cfg, space);

  std::optional<SystemParams> params;
  if (cfg.command != Command::scalar) params = cfg.params();
  if (cfg.command != Command::scalar && cfg.command != Command::resonant && cfg.weight != "one") {
    throw ConfigError("weight applies to the scalar and resonant commands only");
  }
  const Coefficient weight = build_weight(cfg, space);

  EigenResult result;
  try {
    switch (cfg.command) {
      case Command::scalar:
        result = cfg.weight == "one" ? solve_scalar(space, cfg.p, outer, cfg.newton)
                                     : solve_weighted_scalar(space, cfg.p, weight, outer, cfg.newton);
        break;
      case Command::resonant:
        result = solve_gradient_system(
            space, params->p, params->q,
            GradientNonlinearity::resonant(params->alpha, params->beta, weight), outer, cfg.newton);
        break;
      default:
        result = solve_eigenpair(space, *params, outer, cfg.newton);
        break;
    }
  } catch (const EigenSolveError& e) {
    out.text("history.csv", history_csv(history));
    j["error"] = e.what();
    j["converged"] = false;
    out.summary(j);
    log << "solver failure: " << e.what() << "\n";
    return kExitNoConvergence;
  }

  if (cfg.command == Command::scalar) {
    j["p"] = cfg.p;
    j["weight"] = cfg.weight;
  } else {
    add_params(j, *params);
  }
  add_result(j, result);
  if (cfg.command == Command::resonant) {
    j["weight"] = cfg.weight;
    OuterConfig sub = cfg.outer;
    sub.on_iteration = nullptr;
    sub.guess = GuessKind::default_bump;
    const double lambda_p = solve_weighted_scalar(space, params->p, weight, sub, cfg.newton).lambda;
    add_report(j, report_resonant(params->p, params->q, weight.minimum(*space), lambda_p));
  } else if (cfg.command != Command::scalar) {
    const BoundReport report = system_bounds(cfg, space, mesh, *params, cfg.newton);
    add_report(j, report);
    j["sandwich_holds"] = report.sandwiches(result.lambda);
  }

  out.text("history.csv", history_csv(result.history));
  if (cfg.export_field) out.text("field.csv", field_csv(result.u, result.v));
  out.summary(j);
  log << "lambda = " << format_number(result.lambda) << " after " << result.outer_iters
      << " outer iterations" << (result.converged ? "" : " (not converged)") << "\n";
  return result.converged ? kExitOk : kExitNoConvergence;
}

int run_bounds(const RunConfig& cfg, std::ostream& log, const Writer& out) {
  std::optional<Mesh2D> mesh;
  const SpacePtr space = build_space(cfg, mesh);
  const SystemParams params = cfg.params();
  Json j = base_summary(cfg, space);
  add_params(j, params);
  const BoundReport report = system_bounds(cfg, space, mesh, params, cfg.newton);
  add_report(j, report);
  out.summary(j);
  log << "lower = " << format_number(*report.lower);
  if (report.upper) log << ", upper = " << format_number(*report.upper);
  log << "\n";
  return kExitOk;
}

int run_eoc(const RunConfig& cfg, std::ostream& log, const Writer& out) {
  const SystemParams params = cfg.params();
  std::vector<double> lambdas;
  std::vector<std::size_t> nodes;
  bool all_converged = true;
  for (double h : cfg.h_values) {
    RunConfig level = cfg;
    level.domain.h = h;
    level.elements = 0;
    std::optional<Mesh2D> mesh;
    const SpacePtr space = build_space(level, mesh);
    std::vector<IterationRecord> history;
    const OuterConfig outer = build_outer(level, space, history);
    EigenResult r;
    try {
      r = solve_eigenpair(space, params, outer, cfg.newton);
    } catch (const EigenSolveError& e) {
      log << "h = " << format_number(h) << ": " << e.what() << "\n";
      r.lambda = std::numeric_limits<double>::quiet_NaN();
    }
    all_converged = all_converged && r.converged;
    lambdas.push_back(r.lambda);
    nodes.push_back(space->num_nodes());
    log << "h = " << format_number(h) << "  lambda = " << format_number(r.lambda) << "\n";
  }
  std::string table = "h,nodes,lambda,eoc\n";
  Json rows = Json::array();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    std::optional<double> rate;
    if (i + 2 < lambdas.size()) {
      try {
        rate = eoc(lambdas[i], lambdas[i + 1], lambdas[i + 2]);
      } catch (const std::domain_error&) {
      }
    }
    table += format_number(cfg.h_values[i]) + "," + std::to_string(nodes[i]) + "," +
             format_number(lambdas[i]) + "," + (rate ? format_number(*rate) : "") + "\n";
  }
  out.text("eoc.csv", table);
  Json j;
  j["command"] = to_string(cfg.command);
  j["domain"] = to_string(cfg.domain.kind);
  add_params(j, params);
  j["levels"] = lambdas.size();
  j["lambda_finest"] = lambdas.back();
  j["converged"] = all_converged;
  out.summary(j);
  return all_converged ? kExitOk : kExitNoConvergence;
}

int run_fp(const RunConfig& cfg, std::ostream& log, const Writer& out) {
  const std::vector<double> grid = cfg.p_values.empty() ? default_fp_grid() : cfg.p_values;
  const std::size_t n = cfg.elements ? cfg.elements : 500;
  OuterConfig outer = cfg.outer;
  outer.guess = GuessKind::default_bump;
  std::vector<CurvePoint> curve;
  try {
    curve = f_curve(grid, n, outer, cfg.newton);
  } catch (const EigenSolveError& e) {
    log << "solver failure: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  std::string table = "p,f\n";
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& pt : curve) {
    table += format_number(pt.p) + "," + format_number(pt.f) + "\n";
    peak = std::max(peak, pt.f);
  }
  out.text("fp.csv", table);
  Json j;
  j["command"] = to_string(cfg.command);
  j["elements"] = n;
  j["points"] = curve.size();
  j["f_max"] = peak;
  out.summary(j);
  log << curve.size() << " points, max f = " << format_number(peak) << "\n";
  return kExitOk;
}

}  // namespace

SystemParams RunConfig::params() const {
  try {
    if (beta) return SystemParams(p, q, alpha, *beta);
    return SystemParams::with_derived_beta(p, q, alpha);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string to_string(Command command) {
  switch (command) {
    case Command::solve: return "solve";
    case Command::scalar: return "scalar";
    case Command::radial: return "radial";
    case Command::resonant: return "resonant";
    case Command::bounds: return "bounds";
    case Command::eoc_study: return "eoc-study";
    case Command::fp_curve: return "fp-curve";
  }
  return "solve";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::solve, Command::scalar, Command::radial, Command::resonant,
                    Command::bounds, Command::eoc_study, Command::fp_curve}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::vector<double> default_fp_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(1.0 + 0.2 * i);
  for (double p : {4.0, 5.0, 6.0, 8.0, 10.0}) grid.push_back(p);
  grid.push_back(std::numeric_limits<double>::infinity());
  return grid;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig resolve_config(const std::map<std::string, std::string>& raw) {
  std::map<std::string, std::string> values;
  for (const auto& [k, v] : raw) values[normalize_key(k)] = v;
  for (const auto& [k, v] : values) {
    if (k == "command") continue;
    const bool known = std::any_of(std::begin(kKeys), std::end(kKeys),
                                   [&](const KeyInfo& info) { return k == info.key; });
    if (!known) throw ConfigError("unknown key '" + k + "'");
  }
  auto get = [&](const char* key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  auto number = [&](const char* key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_double(key, *v) : fallback;
  };

  RunConfig cfg;
  if (const auto* c = get("command")) cfg.command = command_from_string(trim(*c));

  // Domain: kind first, then kind-specific geometry defaults, then overrides.
  DomainKind kind = DomainKind::rectangle;
  if (cfg.command == Command::radial) kind = DomainKind::disc_radial;
  if (cfg.command == Command::fp_curve) kind = DomainKind::interval;
  if (const auto* d = get("domain")) {
    try {
      kind = domain_kind_from_string(trim(*d));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (get("mesh")) kind = DomainKind::external_file;
  if (cfg.command == Command::radial && kind != DomainKind::disc_radial) {
    throw ConfigError("radial command works on the disc only");
  }
  const double h = number("h", 1.0 / 16.0);
  switch (kind) {
    case DomainKind::interval: cfg.domain = DomainSpec::interval(1.0, h); break;
    case DomainKind::disc_radial: cfg.domain = DomainSpec::disc(h); break;
    case DomainKind::rectangle: cfg.domain = DomainSpec::rectangle(2.0, 2.0, h); break;
    case DomainKind::lshape: cfg.domain = DomainSpec::lshape(3.0, 1.0, h); break;
    case DomainKind::isosceles_triangle: cfg.domain = DomainSpec::isosceles_triangle(1.0, 1.0, h); break;
    case DomainKind::external_file: {
      const std::string* m = get("mesh");
      if (!m) throw ConfigError("domain = file needs a mesh path");
      cfg.domain = DomainSpec::file(trim(*m));
      if (!std::filesystem::exists(cfg.domain.path)) {
        throw ConfigError("mesh file " + cfg.domain.path + " does not exist");
      }
      break;
    }
  }
  if (kind == DomainKind::disc_radial && get("width")) {
    throw ConfigError("the disc has unit radius; width does not apply");
  }
  cfg.domain.width = number("width", cfg.domain.width);
  cfg.domain.height = number("height", kind == DomainKind::lshape ? cfg.domain.width : cfg.domain.height);
  cfg.domain.arm = number("arm", cfg.domain.arm);
  try {
    cfg.domain.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (const auto* n = get("n")) {
    const long v = parse_int("n", *n);
    if (v < 1) throw ConfigError("'n' must be >= 1");
    cfg.elements = static_cast<std::size_t>(v);
  } else if ((kind == DomainKind::disc_radial || kind == DomainKind::interval) && !get("h")) {
    cfg.elements = 500;
  }

  cfg.p = number("p", cfg.p);
  cfg.q = number("q", cfg.q);
  cfg.alpha = number("alpha", cfg.alpha);
  if (const auto* b = get("beta")) cfg.beta = parse_double("beta", *b);

  cfg.outer.tolerance = number("eps", cfg.outer.tolerance);
  if (const auto* v = get("max_outer")) cfg.outer.max_outer = static_cast<int>(parse_int("max_outer", *v));
  if (const auto* v = get("threads")) cfg.outer.threads = static_cast<int>(parse_int("threads", *v));
  cfg.newton.residual_tol = number("newton_tol", cfg.newton.residual_tol);
  if (const auto* v = get("newton_max_iters")) {
    cfg.newton.max_iters = static_cast<int>(parse_int("newton_max_iters", *v));
  }
  cfg.newton.regularization = number("regularization", cfg.newton.regularization);
  if (const auto* v = get("damping")) {
    const std::string d = trim(*v);
    if (d == "backtracking") cfg.newton.damping = Damping::backtracking;
    else if (d == "none") cfg.newton.damping = Damping::none;
    else throw ConfigError("'damping': expected backtracking or none, got '" + d + "'");
  }
  if (const auto* v = get("continuation")) cfg.newton.continuation = parse_list("continuation", *v);
  try {
    cfg.outer.validate();
    cfg.newton.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (const auto* v = get("weight")) cfg.weight = trim(*v);
  if (const auto* v = get("guess")) cfg.guess = trim(*v);
  for (const std::string* file : {&cfg.weight, &cfg.guess}) {
    static const char* named[] = {"one", "step2", "default", "scalar", "quadratic", "cosine", "bessel"};
    const bool is_named = std::any_of(std::begin(named), std::end(named),
                                      [&](const char* s) { return *file == s; });
    if (!is_named && !std::filesystem::exists(*file)) {
      throw ConfigError("file " + *file + " does not exist");
    }
  }
  if (const auto* v = get("h_values")) cfg.h_values = parse_list("h_values", *v);
  if (const auto* v = get("p_values")) cfg.p_values = parse_list("p_values", *v);
  for (double x : cfg.h_values) {
    if (!(x > 0.0)) throw ConfigError("'h_values' must be positive");
  }
  if (const auto* v = get("out")) cfg.out = trim(*v);
  if (const auto* v = get("format")) {
    const std::string f = trim(*v);
    if (f == "csv") cfg.format = OutputFormat::csv;
    else if (f == "json") cfg.format = OutputFormat::json;
    else throw ConfigError("'format': expected csv or json, got '" + f + "'");
  }
  if (const auto* v = get("field")) cfg.export_field = parse_bool("field", *v);

  // Surface constraint violations at parse time.
  if (cfg.command != Command::scalar && cfg.command != Command::fp_curve) (void)cfg.params();
  else if (!(cfg.p > 1.0)) throw ConfigError("exponent p must exceed 1");
  return cfg;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Principal eigenpairs of coupled p-Laplacian systems"};
  std::string command;
  std::string config_path;
  std::map<std::string, std::string> flags;
  build_app(app, command, config_path, flags);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  std::map<std::string, std::string> values;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    values = parse_key_values(buf.str());
  }
  for (const auto& info : kKeys) {
    std::string flag = info.key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "field") {
      if (flags.count("field") && flags["field"] == "true") values["field"] = "true";
      continue;
    }
    if (app.get_option("--" + flag)->count() > 0) values[info.key] = flags[info.key];
  }
  values["command"] = command;
  return resolve_config(values);
}

int run(const RunConfig& config, std::ostream& log) {
  const Writer out(config);
  switch (config.command) {
    case Command::bounds: return run_bounds(config, log, out);
    case Command::eoc_study: return run_eoc(config, log, out);
    case Command::fp_curve: return run_fp(config, log, out);
    default: return run_eigen(config, log, out);
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || std::any_of(args.begin(), args.end(), [](const std::string& a) {
        return a == "--help";
      })) {
    CLI::App app{"Principal eigenpairs of coupled p-Laplacian systems"};
    std::string command;
    std::string config_path;
    std::map<std::string, std::string> flags;
    build_app(app, command, config_path, flags);
    std::cout << app.help();
    return args.empty() ? kExitConfig : kExitOk;
  }
  try {
    return run(parse_config(args), std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InadmissiblePair& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const NewtonError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
}

}  // namespace plap::cli
