#include "anosov/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace anosov {

namespace {

using json = nlohmann::ordered_json;

Matrix matrix_from_json(const json& j, const std::string& origin, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(origin, what + " must be a nonempty array of rows");
  }
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  Matrix m;
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) {
      throw ConfigError(origin, what + " row " + std::to_string(r) + " must be an array");
    }
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<int>(row.size()) != cols) {
      throw ConfigError(origin, what + " rows have inconsistent lengths");
    }
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw ConfigError(origin, what + " entries must be numbers");
      }
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Geometry {
  FacePattern pattern;
  ThetaSpec theta;
  ThetaSpec theta_prime;
  Point base;
};

Geometry build_geometry(const Config& cfg) {
  const FacePattern pattern = cfg.pattern_dims.empty()
                                  ? FacePattern::full(cfg.dim)
                                  : FacePattern(cfg.dim, cfg.pattern_dims);
  const XiMod xi = XiMod::standard(pattern);
  return Geometry{pattern, ThetaSpec(xi, cfg.beta), ThetaSpec(xi, cfg.beta_prime),
                  cfg.base_point ? Point::from_spd(*cfg.base_point)
                                 : Point::identity(cfg.dim)};
}

json config_echo(const Config& cfg) {
  json j;
  j["dim"] = cfg.dim;
  if (cfg.pattern_dims.empty()) {
    std::vector<int> full;
    for (int k = 1; k < cfg.dim; ++k) full.push_back(k);
    j["pattern"] = full;
  } else {
    j["pattern"] = cfg.pattern_dims;
  }
  j["beta"] = cfg.beta;
  j["beta_prime"] = cfg.beta_prime;
  j["base_point"] = cfg.base_point ? matrix_to_json(*cfg.base_point)
                                   : matrix_to_json(Matrix::Identity(cfg.dim, cfg.dim));
  json groups = json::array();
  for (const GroupSpec& g : cfg.groups) {
    json jg;
    jg["name"] = g.name;
    jg["ball_radius"] = g.ball_radius;
    json gens = json::array();
    for (const GroupElement& e : g.generators) gens.push_back(matrix_to_json(e.mat()));
    jg["generators"] = std::move(gens);
    groups.push_back(std::move(jg));
  }
  j["groups"] = std::move(groups);
  j["max_syllables"] = cfg.max_syllables;
  j["targets"] = {{"eps_max", cfg.targets.eps_max},
                  {"l_min", cfg.targets.l_min},
                  {"d_max", cfg.targets.D_max}};
  j["seed"] = cfg.seed;
  j["pair_budget"] = cfg.pair_budget;
  j["id_tol"] = cfg.id_tol;
  j["angles"] = {{"r_min", cfg.angles.r_min},
                 {"count", cfg.angles.count},
                 {"factor", cfg.angles.factor},
                 {"samples", cfg.angles.samples}};
  return j;
}

json certificate_json(const Certificate& cert, const std::vector<GroupSpec>& groups) {
  json j;
  j["verdict"] = to_string(cert.verdict);
  j["conditions"] = {{"S", cert.conditions.S},
                     {"displacement_pass", cert.conditions.displacement_pass},
                     {"theta_regular", cert.conditions.theta_regular},
                     {"min_margin", cert.conditions.min_margin},
                     {"antipodal_pass", cert.conditions.antipodal_pass},
                     {"eps_measured", cert.conditions.eps_measured},
                     {"l_measured", cert.conditions.l_measured},
                     {"straightness_pass", cert.conditions.straightness_pass},
                     {"D_measured", cert.conditions.D_measured},
                     {"morse_pass", cert.conditions.morse_pass},
                     {"L_fit", cert.conditions.L_fit},
                     {"A_fit", cert.conditions.A_fit}};
  j["constants"] = {{"D", cert.constants.D},
                    {"alpha", cert.constants.alpha},
                    {"R1", cert.constants.R1},
                    {"delta_flag", cert.constants.delta_flag},
                    {"spacing", cert.constants.spacing},
                    {"L_req", cert.constants.L_req},
                    {"A_req", cert.constants.A_req},
                    {"D_req", cert.constants.D_req}};
  if (cert.counterexample) {
    json w;
    w["display"] = cert.counterexample->display(groups);
    json syl = json::array();
    for (const Syllable& s : cert.counterexample->syllables) {
      syl.push_back({{"factor", s.factor}, {"letters", s.letters}});
    }
    w["syllables"] = std::move(syl);
    j["counterexample"] = std::move(w);
  } else {
    j["counterexample"] = nullptr;
  }
  j["notes"] = cert.notes;
  return j;
}

void write_report(const std::string& path, const json& report) {
  namespace fs = std::filesystem;
  const fs::path out(path);
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
  }
  const fs::path tmp = out.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError(path, "cannot open report file for writing");
    f << report.dump(2) << "\n";
    if (!f.good()) throw ConfigError(path, "failed writing report file");
  }
  std::error_code ec;
  fs::rename(tmp, out, ec);
  if (ec) throw ConfigError(path, "failed to move report into place: " + ec.message());
}

double ms_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<FlagFamily> build_families(const std::vector<GroupSpec>& groups, const Point& x,
                                       const FacePattern& pattern, double id_tol) {
  std::vector<FlagFamily> families;
  families.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::vector<Syllable> ball = factor_ball(groups[i], static_cast<int>(i), id_tol);
    std::vector<Flag> flags;
    flags.reserve(ball.size());
    for (const Syllable& s : ball) {
      flags.push_back(flag_of_segment(x, act(s.value, x), pattern));
    }
    families.emplace_back(pattern, std::move(flags));
  }
  return families;
}

int finish_certify(const Certificate& cert, const std::vector<GroupSpec>& groups,
                   const Config& cfg, const RunOptions& opts, json& report,
                   const std::chrono::steady_clock::time_point& started) {
  report["certificate"] = certificate_json(cert, groups);
  const double elapsed = ms_since(started);
  if (opts.timing) report["timing_ms"] = {{"total", elapsed}};
  write_report(opts.out_path, report);

  std::cout << "verdict: " << to_string(cert.verdict) << "\n";
  std::cout << "  S=" << cert.conditions.S << " D=" << cert.constants.D
            << " alpha=" << cert.constants.alpha << " R1=" << cert.constants.R1
            << " spacing=" << cert.constants.spacing
            << " delta_flag=" << cert.constants.delta_flag << "\n";
  std::cout << "  straightness: eps=" << cert.conditions.eps_measured
            << " l=" << cert.conditions.l_measured
            << (cert.conditions.straightness_pass ? " (pass)" : " (fail)") << "\n";
  std::cout << "  morse: D_measured=" << cert.conditions.D_measured
            << " L_fit=" << cert.conditions.L_fit << " A_fit=" << cert.conditions.A_fit
            << (cert.conditions.morse_pass ? " (pass)" : " (fail)") << "\n";
  if (cert.counterexample) {
    std::cout << "  witness: " << cert.counterexample->display(groups) << "\n";
  }
  std::cout << "report: " << opts.out_path << "\n";
  std::cout << "timing: " << elapsed << " ms\n";
  (void)cfg;
  switch (cert.verdict) {
    case Verdict::certified:
      return kExitSuccess;
    case Verdict::refuted:
      return kExitRefuted;
    case Verdict::inconclusive:
      break;
  }
  return kExitInconclusive;
}

int run_certify(const Config& cfg, const RunOptions& opts, json& report) {
  const auto started = std::chrono::steady_clock::now();
  if (cfg.groups.size() < 2) {
    throw ConfigError("<config>", "certify needs at least two groups");
  }
  const Geometry geom = build_geometry(cfg);
  const Certificate cert =
      certify_combination(cfg.groups, geom.base, geom.theta, geom.theta_prime, cfg.targets,
                          cfg.max_syllables, cfg.id_tol, cfg.pair_budget);
  return finish_certify(cert, cfg.groups, cfg, opts, report, started);
}

int run_schottky(const Config& cfg, const RunOptions& opts, json& report) {
  const auto started = std::chrono::steady_clock::now();
  if (cfg.groups.empty()) {
    throw ConfigError("<config>", "schottky needs at least one group of elements");
  }
  const Geometry geom = build_geometry(cfg);
  std::vector<GroupElement> elements;
  for (const GroupSpec& g : cfg.groups) {
    elements.insert(elements.end(), g.generators.begin(), g.generators.end());
  }
  if (elements.size() < 2) {
    throw ConfigError("<config>", "schottky needs at least two elements");
  }
  const int power = std::max(1, opts.power);
  report["power"] = power;
  std::vector<GroupSpec> powered;
  try {
    powered = schottky_powers(elements, power, geom.pattern);
  } catch (const NotProximal& e) {
    Certificate cert;
    cert.verdict = Verdict::refuted;
    cert.notes.push_back(e.what());
    return finish_certify(cert, cfg.groups, cfg, opts, report, started);
  }
  const Certificate cert =
      certify_combination(powered, geom.base, geom.theta, geom.theta_prime, cfg.targets,
                          cfg.max_syllables, cfg.id_tol, cfg.pair_budget);
  return finish_certify(cert, powered, cfg, opts, report, started);
}

int run_angles(const Config& cfg, const RunOptions& opts, json& report) {
  const auto started = std::chrono::steady_clock::now();
  if (cfg.groups.size() < 2) {
    throw ConfigError("<config>", "angles needs at least two groups");
  }
  const Geometry geom = build_geometry(cfg);
  const std::vector<FlagFamily> families =
      build_families(cfg.groups, geom.base, geom.pattern, cfg.id_tol);

  double d_worst = 0.0;
  for (std::size_t i = 0; i < families.size(); ++i) {
    for (std::size_t j = i + 1; j < families.size(); ++j) {
      d_worst = std::max(d_worst, compute_D(families[i], families[j], geom.base));
    }
  }
  const double alpha = theta_gap(geom.theta, geom.theta_prime);
  const double r_min = cfg.angles.r_min > 0
                           ? cfg.angles.r_min
                           : std::max({2.0 * d_worst + 1.0, bound_R1(d_worst, alpha), 4.0});
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);

  json sweep = json::array();
  std::cout << "angle sweep: D=" << d_worst << " r_min=" << r_min << "\n";
  for (int k = 0; k < cfg.angles.count; ++k) {
    const double R = r_min * std::pow(cfg.angles.factor, k);
    double measured = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < families.size(); ++i) {
      for (std::size_t j = i + 1; j < families.size(); ++j) {
        const AngleBoundReport rep =
            measure_max_xi_angle(families[i], families[j], geom.base, geom.theta, R,
                                 cfg.angles.samples, seed + static_cast<std::uint64_t>(k));
        measured = std::max(measured, rep.measured_max);
        bound = std::max(bound, rep.bound);
      }
    }
    sweep.push_back({{"R", R},
                     {"bound", bound},
                     {"measured_max", measured},
                     {"samples", cfg.angles.samples}});
    std::cout << "  R=" << R << " measured_max=" << measured << " bound=" << bound << "\n";
  }
  report["angle_sweep"] = std::move(sweep);
  const double elapsed = ms_since(started);
  if (opts.timing) report["timing_ms"] = {{"total", elapsed}};
  write_report(opts.out_path, report);
  std::cout << "report: " << opts.out_path << "\n";
  std::cout << "timing: " << elapsed << " ms\n";
  return kExitSuccess;
}

struct SelftestCase {
  std::string name;
  bool pass = false;
  std::string detail;
};

Point random_point(Rng& rng, int d, double scale) {
  return Point::from_spd(sym_exp(scale * rng.traceless_symmetric(d)));
}

GroupElement random_element(Rng& rng, int d, double scale) {
  return GroupElement::from_matrix(rng.rotation(d) *
                                   sym_exp(scale * rng.traceless_symmetric(d)));
}

std::vector<SelftestCase> selftest_cases(std::uint64_t seed) {
  std::vector<SelftestCase> cases;
  const int d = 3;
  const FacePattern pattern = FacePattern::full(d);
  const XiMod xi = XiMod::standard(pattern);
  const ThetaSpec theta(xi, 0.25);

  {
    SelftestCase c{"triangle-inequality", true, ""};
    Rng rng(seed);
    for (int i = 0; i < 200 && c.pass; ++i) {
      const Point x = random_point(rng, d, 0.7);
      const Point y = random_point(rng, d, 0.7);
      const Point z = random_point(rng, d, 0.7);
      const double lhs = (delta_distance(x, y).vec() - delta_distance(x, z).vec()).norm();
      const double rhs = distance(y, z);
      if (lhs > rhs + 1e-9) {
        c.pass = false;
        c.detail = "violated by " + std::to_string(lhs - rhs);
      }
    }
    cases.push_back(std::move(c));
  }
  {
    SelftestCase c{"opposition-involution", true, ""};
    Rng rng(seed + 1);
    for (int i = 0; i < 100 && c.pass; ++i) {
      const Point x = random_point(rng, d, 0.8);
      const Point y = random_point(rng, d, 0.8);
      const double dev =
          (delta_distance(y, x).vec() - opposition_involution(delta_distance(x, y)).vec())
              .norm();
      if (dev > 1e-9) {
        c.pass = false;
        c.detail = "deviation " + std::to_string(dev);
      }
    }
    cases.push_back(std::move(c));
  }
  {
    SelftestCase c{"isometric-action", true, ""};
    Rng rng(seed + 2);
    for (int i = 0; i < 100 && c.pass; ++i) {
      const Point x = random_point(rng, d, 0.8);
      const Point y = random_point(rng, d, 0.8);
      const GroupElement g = random_element(rng, d, 0.5);
      const double dev =
          (delta_distance(act(g, x), act(g, y)).vec() - delta_distance(x, y).vec()).norm();
      if (dev > 1e-8) {
        c.pass = false;
        c.detail = "deviation " + std::to_string(dev);
      }
    }
    cases.push_back(std::move(c));
  }
  {
    SelftestCase c{"geodesic-parameterization", true, ""};
    Rng rng(seed + 3);
    for (int i = 0; i < 50 && c.pass; ++i) {
      const Point x = random_point(rng, d, 0.8);
      const Point y = random_point(rng, d, 0.8);
      const double t = rng.uniform();
      const Point mid = geodesic_point(x, y, t);
      const double dev = std::abs(distance(x, mid) - t * distance(x, y));
      if (dev > 1e-8) {
        c.pass = false;
        c.detail = "deviation " + std::to_string(dev);
      }
    }
    cases.push_back(std::move(c));
  }
  {
    SelftestCase c{"xi-angle-involution", true, ""};
    Rng rng(seed + 4);
    for (int i = 0; i < 50 && c.pass; ++i) {
      const Point x = random_point(rng, d, 0.6);
      const Point y = random_point(rng, d, 0.9);
      try {
        const Flag a = flag_of_segment(x, y, pattern);
        const double self_angle = xi_angle(x, a, a, xi);
        const Flag b = flag_of_segment(x, cartan_involution(x, y), pattern);
        const double anti = xi_angle(x, a, b, xi);
        if (self_angle > 1e-7 || std::abs(anti - M_PI) > 1e-6) {
          c.pass = false;
          c.detail = "self " + std::to_string(self_angle) + ", antipodal " +
                     std::to_string(anti);
        }
      } catch (const NotRegular&) {
        continue;
      }
    }
    cases.push_back(std::move(c));
  }
  {
    SelftestCase c{"diamond-contains-geodesic", true, ""};
    Rng rng(seed + 5);
    int tested = 0;
    for (int i = 0; i < 60 && tested < 20 && c.pass; ++i) {
      const Point x = random_point(rng, d, 0.4);
      const Vector v = sample_cone_direction(rng, xi.direction(), 0.2);
      std::optional<Point> y;
      try {
        const Flag tau = flag_of_segment(
            x, Point::from_spd(sym_exp(0.5 * rng.traceless_symmetric(d))), pattern);
        y = cone_point(x, tau, v, 4.0);
      } catch (const NotRegular&) {
        continue;
      }
      if (!is_theta_regular(x, *y, theta)) continue;
      ++tested;
      const Point mid = geodesic_point(x, *y, 0.5);
      const double defect = distance_to_diamond(mid, x, *y, theta);
      if (defect > 1e-6) {
        c.pass = false;
        c.detail = "interior defect " + std::to_string(defect);
      }
    }
    if (tested < 20 && c.pass) {
      c.pass = false;
      c.detail = "insufficient regular samples";
    }
    cases.push_back(std::move(c));
  }
  {
    SelftestCase c{"word-enumeration", true, ""};
    Rng rng(seed + 6);
    std::vector<GroupSpec> groups(2);
    groups[0].name = "A";
    groups[0].generators.push_back(
        GroupElement::from_matrix(sym_exp(rng.traceless_symmetric(d))));
    groups[1].name = "B";
    groups[1].generators.push_back(random_element(rng, d, 0.4));
    const std::size_t one = enumerate_reduced_words(groups, 1).size();
    const std::size_t two = enumerate_reduced_words(groups, 2).size();
    const std::size_t three = enumerate_reduced_words(groups, 3).size();
    if (one != 4 || two != 12 || three != 28) {
      c.pass = false;
      c.detail = "counts " + std::to_string(one) + ", " + std::to_string(two) + ", " +
                 std::to_string(three);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

int run_selftest(const Config& cfg, const RunOptions& opts, json& report) {
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  const std::vector<SelftestCase> cases = selftest_cases(seed);
  json entries = json::array();
  bool all = true;
  for (const SelftestCase& c : cases) {
    entries.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << c.name
              << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    all = all && c.pass;
  }
  report["selftest"] = std::move(entries);
  const double elapsed = ms_since(started);
  if (opts.timing) report["timing_ms"] = {{"total", elapsed}};
  write_report(opts.out_path, report);
  std::cout << "report: " << opts.out_path << "\n";
  std::cout << "timing: " << elapsed << " ms\n";
  return all ? kExitSuccess : kExitRefuted;
}

}  // namespace

Config parse_config_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError(origin, "top level must be an object");

  Config cfg;
  const auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(origin, std::string(key) + " must be a number");
    return j[key].get<double>();
  };
  const auto integer = [&](const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
      throw ConfigError(origin, std::string(key) + " must be an integer");
    }
    return j[key].get<int>();
  };

  cfg.dim = integer("dim", cfg.dim);
  if (cfg.dim < 2 || cfg.dim > 12) throw ConfigError(origin, "dim must lie in [2, 12]");
  if (j.contains("pattern")) {
    if (!j["pattern"].is_array()) throw ConfigError(origin, "pattern must be an array");
    for (const json& e : j["pattern"]) {
      if (!e.is_number_integer()) throw ConfigError(origin, "pattern entries must be integers");
      cfg.pattern_dims.push_back(e.get<int>());
    }
  }
  cfg.beta = number("beta", cfg.beta);
  cfg.beta_prime = number("beta_prime", cfg.beta_prime);
  if (j.contains("base_point")) {
    cfg.base_point = matrix_from_json(j["base_point"], origin, "base_point");
    if (cfg.base_point->rows() != cfg.dim) {
      throw ConfigError(origin, "base_point dimension disagrees with dim");
    }
  }
  if (j.contains("groups")) {
    if (!j["groups"].is_array()) throw ConfigError(origin, "groups must be an array");
    int index = 0;
    for (const json& jg : j["groups"]) {
      if (!jg.is_object()) throw ConfigError(origin, "each group must be an object");
      GroupSpec spec;
      spec.name = jg.contains("name") && jg["name"].is_string()
                      ? jg["name"].get<std::string>()
                      : "G" + std::to_string(index + 1);
      if (jg.contains("ball_radius")) {
        if (!jg["ball_radius"].is_number_integer()) {
          throw ConfigError(origin, "ball_radius must be an integer");
        }
        spec.ball_radius = jg["ball_radius"].get<int>();
        if (spec.ball_radius < 1 || spec.ball_radius > 6) {
          throw ConfigError(origin, "ball_radius must lie in [1, 6]");
        }
      }
      if (!jg.contains("generators") || !jg["generators"].is_array() ||
          jg["generators"].empty()) {
        throw ConfigError(origin, "group " + spec.name + " needs a nonempty generators array");
      }
      for (const json& jm : jg["generators"]) {
        const Matrix m = matrix_from_json(jm, origin, "generator of " + spec.name);
        if (m.rows() != cfg.dim || m.cols() != cfg.dim) {
          throw ConfigError(origin, "generator of " + spec.name + " must be dim x dim");
        }
        try {
          spec.generators.push_back(GroupElement::from_matrix(m));
        } catch (const Error& e) {
          throw ConfigError(origin, "generator of " + spec.name + ": " + e.what());
        }
      }
      cfg.groups.push_back(std::move(spec));
      ++index;
    }
  }
  cfg.max_syllables = integer("max_syllables", cfg.max_syllables);
  if (cfg.max_syllables < 1 || cfg.max_syllables > 12) {
    throw ConfigError(origin, "max_syllables must lie in [1, 12]");
  }
  if (j.contains("targets")) {
    const json& jt = j["targets"];
    if (!jt.is_object()) throw ConfigError(origin, "targets must be an object");
    if (jt.contains("eps_max")) cfg.targets.eps_max = jt["eps_max"].get<double>();
    if (jt.contains("l_min")) cfg.targets.l_min = jt["l_min"].get<double>();
    if (jt.contains("d_max")) cfg.targets.D_max = jt["d_max"].get<double>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw ConfigError(origin, "seed must be an integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.pair_budget = integer("pair_budget", cfg.pair_budget);
  if (cfg.pair_budget < 1) throw ConfigError(origin, "pair_budget must be positive");
  cfg.id_tol = number("id_tol", cfg.id_tol);
  if (!(cfg.id_tol > 0)) throw ConfigError(origin, "id_tol must be positive");
  if (j.contains("angles")) {
    const json& ja = j["angles"];
    if (!ja.is_object()) throw ConfigError(origin, "angles must be an object");
    if (ja.contains("r_min")) cfg.angles.r_min = ja["r_min"].get<double>();
    if (ja.contains("count")) cfg.angles.count = ja["count"].get<int>();
    if (ja.contains("factor")) cfg.angles.factor = ja["factor"].get<double>();
    if (ja.contains("samples")) cfg.angles.samples = ja["samples"].get<int>();
    if (cfg.angles.count < 1 || cfg.angles.count > 16) {
      throw ConfigError(origin, "angles.count must lie in [1, 16]");
    }
    if (!(cfg.angles.factor > 1.0)) throw ConfigError(origin, "angles.factor must exceed 1");
    if (cfg.angles.samples < 1) throw ConfigError(origin, "angles.samples must be positive");
  }

  try {
    (void)build_geometry(cfg);
  } catch (const Error& e) {
    throw ConfigError(origin, e.what());
  }
  return cfg;
}

Config parse_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << f.rdbuf();
  return parse_config_text(buffer.str(), path);
}

int run(const std::string& command, const Config& config, const RunOptions& options) {
  try {
    json report;
    report["version"] = kVersion;
    report["command"] = command;
    report["seed"] = options.seed.value_or(config.seed);
    Config effective = config;
    if (options.seed) effective.seed = *options.seed;
    if (options.pair_budget) effective.pair_budget = *options.pair_budget;
    report["config"] = config_echo(effective);
    if (command == "certify") return run_certify(effective, options, report);
    if (command == "schottky") return run_schottky(effective, options, report);
    if (command == "angles") return run_angles(effective, options, report);
    if (command == "selftest") return run_selftest(effective, options, report);
    throw ConfigError("<run>", "unknown command: " + command);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace anosov
