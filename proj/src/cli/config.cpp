#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gspde/cli.hpp"
#include "gspde/errors.hpp"
#include "gspde/rng.hpp"

namespace gspde::cli {

using nlohmann::json;

void Reader::fail(const std::string& key, const std::string& what) const {
  throw ConfigError("config field " + field(key) + ": " + what);
}

Reader Reader::child(const std::string& key) {
  if (!node_.contains(key)) fail(key, "missing section");
  json& c = node_[key];
  if (!c.is_object()) fail(key, "expected an object");
  return Reader(c, field(key));
}

double Reader::number(const std::string& key) {
  if (!node_.contains(key)) fail(key, "missing number");
  const json& v = node_[key];
  if (!v.is_number()) fail(key, "expected a number, got " + v.dump());
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

double Reader::number(const std::string& key, double fallback) {
  if (!node_.contains(key)) node_[key] = fallback;
  return number(key);
}

std::uint64_t Reader::integer(const std::string& key) {
  if (!node_.contains(key)) fail(key, "missing integer");
  const json& v = node_[key];
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    fail(key, "expected a non-negative integer, got " + v.dump());
  return v.get<std::uint64_t>();
}

std::uint64_t Reader::integer(const std::string& key, std::uint64_t fallback) {
  if (!node_.contains(key)) node_[key] = fallback;
  return integer(key);
}

std::string Reader::string(const std::string& key) {
  if (!node_.contains(key)) fail(key, "missing string");
  const json& v = node_[key];
  if (!v.is_string()) fail(key, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

std::string Reader::string(const std::string& key, const std::string& fallback) {
  if (!node_.contains(key)) node_[key] = fallback;
  return string(key);
}

bool Reader::boolean(const std::string& key, bool fallback) {
  if (!node_.contains(key)) node_[key] = fallback;
  const json& v = node_[key];
  if (!v.is_boolean()) fail(key, "expected true or false, got " + v.dump());
  return v.get<bool>();
}

std::vector<double> Reader::numbers(const std::string& key) {
  if (!node_.contains(key)) fail(key, "missing list of numbers");
  const json& v = node_[key];
  if (!v.is_array()) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(key, "expected numbers only, got " + x.dump());
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> Reader::numbers(const std::string& key, const std::vector<double>& fallback) {
  if (!node_.contains(key)) node_[key] = fallback;
  return numbers(key);
}

std::vector<std::string> Reader::strings(const std::string& key,
                                         const std::vector<std::string>& fallback) {
  if (!node_.contains(key)) node_[key] = fallback;
  const json& v = node_[key];
  if (!v.is_array()) fail(key, "expected a list of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) fail(key, "expected strings only, got " + x.dump());
    out.push_back(x.get<std::string>());
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const Overrides& overrides) {
  ExperimentConfig cfg;
  try {
    cfg.resolved = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.resolved.is_object()) throw ConfigError("config must be a JSON object");
  Reader root(cfg.resolved, "");
  if (overrides.seed) cfg.resolved["master_seed"] = *overrides.seed;
  if (!root.has("master_seed")) root.fail("master_seed", "missing (no entropy defaults)");
  cfg.master_seed = root.integer("master_seed");
  if (overrides.out_dir) cfg.resolved["output_dir"] = *overrides.out_dir;
  cfg.output_dir = root.string("output_dir", "out");
  if (root.has("seeds")) {
    Reader seeds = root.child("seeds");
    cfg.seed_G = seeds.integer("G", substream_seed(cfg.master_seed, Stream::kGaussianPaths, 0));
    cfg.seed_W = seeds.integer("W", substream_seed(cfg.master_seed, Stream::kWiener, 0));
  } else {
    cfg.seed_G = substream_seed(cfg.master_seed, Stream::kGaussianPaths, 0);
    cfg.seed_W = substream_seed(cfg.master_seed, Stream::kWiener, 0);
    cfg.resolved["seeds"] = {{"G", cfg.seed_G}, {"W", cfg.seed_W}};
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file, const Overrides& overrides) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

CovarianceKernel build_kernel(Reader r) {
  const std::string type = r.string("type");
  const double T = r.number("T", 1.0);
  try {
    if (type == "fbm") {
      const double H = r.number("H");
      return CovarianceKernel::fbm(H, T, r.has("r") ? r.number("r") : 0.0);
    }
    if (type == "general_fbm") {
      const double H = r.number("H");
      const CovarianceKernel ref = CovarianceKernel::fbm(H, T);
      const double c = H * (2.0 * H - 1.0);
      return CovarianceKernel::general(
          [c, H](double, double, double lag) { return c * std::pow(lag, 2.0 * H - 2.0); }, ref.p(),
          true, T, "general_fbm");
    }
    if (type == "stationary_power") {
      const double gamma = r.number("gamma");
      if (!(gamma > 0.0 && gamma < 1.0)) r.fail("gamma", "must lie in (0, 1)");
      const double scale = r.number("scale", 1.0);
      const double rr = r.number("r", 0.5 * (1.0 + 1.0 / gamma));
      return CovarianceKernel::stationary(
          [scale, gamma](double lag) { return scale * std::pow(lag, -gamma); }, rr, true, T,
          "stationary_power");
    }
    if (type == "stationary_exponential") {
      const double ell = r.number("ell");
      if (!(ell > 0.0)) r.fail("ell", "must be positive");
      const double scale = r.number("scale", 1.0);
      return CovarianceKernel::stationary(
          [scale, ell](double lag) { return scale * std::exp(-lag / ell); }, r.number("r", 2.0),
          false, T, "stationary_exponential");
    }
  } catch (const DomainError& e) {
    throw ConfigError("config section " + r.path() + ": " + e.what());
  }
  r.fail("type", "unknown kernel type '" + type + "'");
}

NoiseSpec build_noise(Reader r) {
  const std::string type = r.string("type", "power_law");
  try {
    if (type == "power_law") {
      const std::uint64_t N = r.integer("N", 16);
      return NoiseSpec::power_law(r.number("lambda0", 1.0), r.number("beta", 3.0), N);
    }
    if (type == "explicit") return NoiseSpec::explicit_values(r.numbers("lambdas"));
  } catch (const DomainError& e) {
    throw ConfigError("config section " + r.path() + ": " + e.what());
  }
  r.fail("type", "unknown noise type '" + type + "'");
}

TimeGrid build_grid(Reader r, double horizon) {
  const std::uint64_t cells = r.integer("cells");
  if (cells < 1) r.fail("cells", "must be >= 1");
  return TimeGrid::uniform(horizon, cells + 1);
}

PiecewiseFunction build_scalar_function(const std::string& name, double horizon,
                                        const std::string& field) {
  if (name == "1") return PiecewiseFunction::polynomial({1.0}, horizon);
  if (name == "s") return PiecewiseFunction::polynomial({0.0, 1.0}, horizon);
  if (name == "s2") return PiecewiseFunction::polynomial({0.0, 0.0, 1.0}, horizon);
  if (name == "first_half") return PiecewiseFunction::indicator(0.0, 0.5 * horizon, horizon);
  throw ConfigError("config field " + field + ": unknown function '" + name +
                    "' (expected 1, s, s2 or first_half)");
}

OperatorSetup build_drift(Reader r) {
  const std::string type = r.string("type");
  const std::uint64_t n = r.integer("n", 16);
  if (n < 1) r.fail("n", "must be >= 1");
  try {
    if (type == "linear_heat") {
      GalerkinSpace s = GalerkinSpace::energy(n);
      return {s, make_linear_heat(s)};
    }
    if (type == "p_laplace") {
      const double p = r.number("p");
      if (!(p >= 2.0)) r.fail("p", "p-Laplace needs p >= 2");
      GalerkinSpace s = GalerkinSpace::sobolev(n, p);
      return {s, make_p_laplace(s, p)};
    }
    if (type == "porous_medium") {
      const double m = r.number("m");
      if (!(m >= 1.0)) r.fail("m", "porous medium needs m >= 1");
      GalerkinSpace s = GalerkinSpace::lebesgue_hminus1(n, m + 1.0);
      return {s, make_porous_medium(s, m)};
    }
    if (type == "zero") {
      GalerkinSpace s = GalerkinSpace::energy(n);
      return {s, make_zero_drift(s)};
    }
    if (type == "sign") {
      GalerkinSpace s = GalerkinSpace::energy(n);
      return {s, make_sign_drift(s)};
    }
    if (type == "custom") {
      Reader base = r.child("base");
      if (!base.has("n")) base.raw()["n"] = n;
      OperatorSetup setup = build_drift(base);
      Reader k = r.child("constants");
      DeclaredConstants& c = setup.drift.constants();
      c.c = k.number("c", c.c);
      c.c1 = k.number("c1", c.c1);
      c.c2 = k.number("c2", c.c2);
      c.c3 = k.number("c3", c.c3);
      const double f = k.number("f", 0.0), g = k.number("g", 0.0);
      c.f = [f](double) { return f; };
      c.g = [g](double) { return g; };
      return setup;
    }
  } catch (const DomainError& e) {
    throw ConfigError("config section " + r.path() + ": " + e.what());
  }
  r.fail("type", "unknown drift type '" + type + "'");
}

DiffusionOperator build_diffusion(Reader r, const GalerkinSpace& space) {
  const std::string type = r.string("type", "zero");
  const Eigen::Index n = Eigen::Index(space.dim());
  if (type == "zero") return make_zero_diffusion(space, r.integer("noise_dim", 1));
  if (type == "constant") {
    if (r.has("values")) {
      const json& rows = r.raw()["values"];
      if (!rows.is_array() || rows.size() != std::size_t(n) || rows.empty() || !rows[0].is_array())
        r.fail("values", "expected dim H rows of numbers");
      Eigen::MatrixXd b(n, Eigen::Index(rows[0].size()));
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!rows[std::size_t(i)].is_array() || rows[std::size_t(i)].size() != std::size_t(b.cols()))
          r.fail("values", "rows must have equal length");
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
          const json& x = rows[std::size_t(i)][std::size_t(j)];
          if (!x.is_number()) r.fail("values", "expected numbers only");
          b(i, j) = x.get<double>();
        }
      }
      return make_constant_diffusion(space, b);
    }
    const std::uint64_t mode = r.integer("mode", 1);
    if (mode < 1 || mode > space.dim()) r.fail("mode", "outside 1..dim H");
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
    b(Eigen::Index(mode - 1), 0) = r.number("scale", 1.0);
    return make_constant_diffusion(space, b);
  }
  if (type == "lipschitz") return make_lipschitz_multiplication(space, r.number("L"));
  r.fail("type", "unknown diffusion type '" + type + "'");
}

OperatorValuedIntegrand build_h(Reader r, std::size_t dim_h, std::size_t dim_u, double horizon) {
  const std::string type = r.string("type", "zero");
  const Eigen::Index rows = Eigen::Index(dim_h), cols = Eigen::Index(dim_u);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  std::vector<std::size_t> range;
  if (type == "zero") {
  } else if (type == "rank1") {
    const std::uint64_t mode = r.integer("mode", 1);
    const std::uint64_t coord = r.integer("coord", 1);
    if (mode < 1 || mode > dim_h) r.fail("mode", "outside 1..dim H");
    if (coord < 1 || coord > dim_u) r.fail("coord", "outside 1..N");
    m(Eigen::Index(mode - 1), Eigen::Index(coord - 1)) = r.number("scale", 1.0);
    range.push_back(mode - 1);
  } else if (type == "identity") {
    const double scale = r.number("scale", 1.0);
    for (Eigen::Index i = 0; i < std::min(rows, cols); ++i) {
      m(i, i) = scale;
      range.push_back(std::size_t(i));
    }
  } else {
    r.fail("type", "unknown h type '" + type + "' (expected zero, rank1 or identity)");
  }
  const std::string profile = r.string("profile", "1");
  PiecewiseFunction h = (profile == "1")
                            ? PiecewiseFunction::constant(m, horizon)
                            : PiecewiseFunction::scaled_matrix(
                                  build_scalar_function(profile, horizon, r.field("profile")), m);
  OperatorValuedIntegrand out{h, std::nullopt, range};
  if (r.has("p_eps")) out.p_eps_exponent = r.number("p_eps");
  return out;
}

Eigen::VectorXd build_x0(Reader r, std::size_t dim, double* x0_std) {
  const std::string type = r.string("type", "zero");
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(Eigen::Index(dim));
  if (type == "mode") {
    const std::uint64_t mode = r.integer("mode", 1);
    if (mode < 1 || mode > dim) r.fail("mode", "outside 1..dim H");
    x0[Eigen::Index(mode - 1)] = r.number("amplitude", 1.0);
  } else if (type == "values") {
    const auto v = r.numbers("values");
    if (v.size() != dim) r.fail("values", "expected " + std::to_string(dim) + " coefficients");
    for (std::size_t i = 0; i < dim; ++i) x0[Eigen::Index(i)] = v[i];
  } else if (type != "zero") {
    r.fail("type", "unknown initial condition '" + type + "' (expected zero, mode or values)");
  }
  *x0_std = r.number("std", 0.0);
  if (*x0_std < 0.0) r.fail("std", "must be >= 0");
  return x0;
}

SolverConfig build_solver(Reader r, const ExperimentConfig& cfg, double horizon) {
  SolverConfig s;
  s.horizon = horizon;
  s.dt = r.number("dt");
  s.inner_tol = r.number("inner_tol", 1e-10);
  s.inner_max_iter = int(r.integer("inner_max_iter", 200));
  const std::string method = r.string("inner_method", "newton");
  if (method == "newton")
    s.inner_method = InnerMethod::kNewton;
  else if (method == "fixed_point")
    s.inner_method = InnerMethod::kDampedFixedPoint;
  else
    r.fail("inner_method", "expected newton or fixed_point");
  const std::string init = r.string("inner_init", "previous");
  if (init == "previous")
    s.inner_init = InnerInit::kPrevious;
  else if (init == "zero")
    s.inner_init = InnerInit::kZero;
  else
    r.fail("inner_init", "expected previous or zero");
  const std::string rule = r.string("rule", "left");
  if (rule == "left")
    s.rule = EvaluationRule::kLeftEndpoint;
  else if (rule == "midpoint")
    s.rule = EvaluationRule::kMidpoint;
  else
    r.fail("rule", "expected left or midpoint");
  s.seed_G = cfg.seed_G;
  s.seed_W = cfg.seed_W;
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError("config section " + r.path() + ": " + e.what());
  }
  return s;
}

std::vector<std::string> header_lines(const std::string& command, const ExperimentConfig& cfg) {
  // The output location does not affect any value and is left out so that
  // runs written to different directories compare equal.
  json shown = cfg.resolved;
  shown.erase("output_dir");
  return {"gspde " + command, "config: " + shown.dump(),
          "seeds: master=" + std::to_string(cfg.master_seed) + " G=" + std::to_string(cfg.seed_G) +
              " W=" + std::to_string(cfg.seed_W)};
}

}  // namespace gspde::cli
