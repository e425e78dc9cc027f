// Copyright 2026 The pgbo Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pgbo/experiment.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "pgbo/errors.h"

namespace pgbo {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int LineOf(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

// A YAML mapping with the keys read from it tracked, so leftovers can be
// reported as unknown fields.
class Section {
 public:
  Section(const YAML::Node& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsMap()) {
      throw ConfigError(path_, LineOf(node_), "expected a mapping");
    }
  }

  std::string Field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  YAML::Node Get(const std::string& key) {
    seen_.insert(key);
    if (!node_) return YAML::Node();
    return node_[key];
  }

  bool Has(const std::string& key) const {
    return node_ && node_[key].IsDefined() && !node_[key].IsNull();
  }

  double Double(const std::string& key, double fallback) {
    const YAML::Node n = Get(key);
    if (!n || n.IsNull()) return fallback;
    return AsDouble(n, Field(key));
  }

  int Int(const std::string& key, int fallback) {
    const YAML::Node n = Get(key);
    if (!n || n.IsNull()) return fallback;
    return AsInt(n, Field(key));
  }

  bool Bool(const std::string& key, bool fallback) {
    const YAML::Node n = Get(key);
    if (!n || n.IsNull()) return fallback;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(Field(key), LineOf(n), "expected true or false");
    }
  }

  std::string String(const std::string& key, const std::string& fallback) {
    const YAML::Node n = Get(key);
    if (!n || n.IsNull()) return fallback;
    if (!n.IsScalar()) {
      throw ConfigError(Field(key), LineOf(n), "expected a string");
    }
    return n.as<std::string>();
  }

  std::vector<double> DoubleList(const std::string& key,
                                 std::vector<double> fallback) {
    const YAML::Node n = Get(key);
    if (!n || n.IsNull()) return fallback;
    if (!n.IsSequence()) {
      throw ConfigError(Field(key), LineOf(n), "expected a list of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      out.push_back(AsDouble(n[i], Field(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  Section Sub(const std::string& key) { return Section(Get(key), Field(key)); }

  int LineFor(const std::string& key) const {
    if (node_ && node_[key]) return LineOf(node_[key]);
    return node_ ? LineOf(node_) : 0;
  }

  void RejectUnknown() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) {
        throw ConfigError(Field(key), LineOf(kv.first), "unknown field");
      }
    }
  }

  static double AsDouble(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) throw ConfigError(field, LineOf(n), "expected a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) {
        throw ConfigError(field, LineOf(n), "expected a finite number");
      }
      return v;
    } catch (const YAML::Exception&) {
      throw ConfigError(field, LineOf(n),
                        "expected a number, got '" + n.Scalar() + "'");
    }
  }

  static int AsInt(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) throw ConfigError(field, LineOf(n), "expected an integer");
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field, LineOf(n),
                        "expected an integer, got '" + n.Scalar() + "'");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void Require(bool ok, Section& s, const std::string& key,
             const std::string& what) {
  if (!ok) throw ConfigError(s.Field(key), s.LineFor(key), what);
}

void RequireEach(const std::vector<double>& v, Section& s,
                 const std::string& key, bool (*ok)(double),
                 const std::string& what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!ok(v[i])) {
      throw ConfigError(s.Field(key) + "[" + std::to_string(i) + "]",
                        s.LineFor(key), what);
    }
  }
}

void ParseGame(Section game, ExperimentConfig& c) {
  c.game_id = game.String("id", "");
  Require(c.game_id == "cournot" || c.game_id == "common_pool", game, "id",
          "must be one of: cournot, common_pool");
  c.noise_std = game.Double("noise_std", c.noise_std);
  Require(c.noise_std >= 0.0, game, "noise_std", "must be >= 0");

  if (c.game_id == "cournot") {
    CournotParams& p = c.cournot;
    p.a = game.Double("a", p.a);
    Require(p.a > 0.0, game, "a", "must be > 0");
    p.b = game.Double("b", p.b);
    Require(p.b > 0.0, game, "b", "must be > 0");
    p.d = game.DoubleList("d", p.d);
    RequireEach(p.d, game, "d", [](double v) { return v >= 0.0; },
                "must be >= 0");
    p.beta = game.DoubleList("beta", p.beta);
    RequireEach(p.beta, game, "beta",
                [](double v) { return v > 0.0 && v < 2.0; },
                "must lie in the open interval (0, 2)");
    Require(p.beta.size() == p.d.size(), game, "beta",
            "must have one entry per player (same length as d)");
    Require(!p.d.empty(), game, "d", "must list at least one player");
    p.q_max = game.Double("q_max", p.q_max);
    Require(p.q_max > 0.0, game, "q_max", "must be > 0");
    c.q_min = game.Double("q_min", c.q_min);
    Require(c.q_min > 0.0 && c.q_min < p.q_max, game, "q_min",
            "must lie in (0, q_max)");
    c.grid_size = game.Int("grid_size", c.grid_size);
    Require(c.grid_size >= 2, game, "grid_size", "must be >= 2");
  } else {
    CommonPoolParams& p = c.common_pool;
    p.growth = game.Double("growth", p.growth);
    Require(p.growth >= 0.0, game, "growth", "must be >= 0");
    p.s0 = game.Double("s0", p.s0);
    Require(p.s0 > 0.0, game, "s0", "must be > 0");
    p.alpha = game.DoubleList("alpha", p.alpha);
    RequireEach(p.alpha, game, "alpha", [](double v) { return v > 0.0; },
                "must be > 0");
    Require(!p.alpha.empty(), game, "alpha", "must list at least one player");
    p.theta = game.DoubleList("theta", p.theta);
    Require(p.theta.size() == p.alpha.size(), game, "theta",
            "must have one entry per player (same length as alpha)");
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
      if (!(p.theta[i] >= p.growth)) {
        throw ConfigError(game.Field("theta") + "[" + std::to_string(i) + "]",
                          game.LineFor("theta"), "must be >= growth");
      }
    }
    p.horizon = game.Double("horizon", p.horizon);
    Require(p.horizon > 0.0, game, "horizon", "must be > 0");
    p.integration_points =
        game.Int("integration_points", p.integration_points);
    Require(p.integration_points >= 2, game, "integration_points",
            "must be >= 2");
    p.gamma_max = game.Double("gamma_max", p.gamma_max);
    Require(p.gamma_max > 0.0, game, "gamma_max", "must be > 0");
  }
  game.RejectUnknown();
}

int PlayerCount(const ExperimentConfig& c) {
  return c.game_id == "cournot" ? c.cournot.players() : c.common_pool.players();
}

void ParseGp(Section gp, ExperimentConfig& c) {
  const int n = PlayerCount(c);
  GpHyperparams& h = c.gp;
  h.output_scale = gp.Double("output_scale", 1.0);
  Require(h.output_scale > 0.0, gp, "output_scale", "must be > 0");

  const bool has_ls = gp.Has("length_scales");
  const bool has_ls2 = gp.Has("length_scales_squared");
  Require(!(has_ls && has_ls2), gp, "length_scales_squared",
          "give either length_scales or length_scales_squared, not both");
  Require(has_ls || has_ls2, gp, "length_scales",
          "length_scales (or length_scales_squared) is required");
  const std::string key = has_ls ? "length_scales" : "length_scales_squared";
  std::vector<double> ls;
  {
    const YAML::Node node = gp.Get(key);
    if (node.IsScalar()) {
      ls.assign(n, Section::AsDouble(node, gp.Field(key)));
    } else {
      ls = gp.DoubleList(key, {});
    }
  }
  (void)gp.Get(has_ls ? "length_scales_squared" : "length_scales");
  Require(static_cast<int>(ls.size()) == n, gp, key,
          "must have one entry per player (" + std::to_string(n) + ")");
  RequireEach(ls, gp, key, [](double v) { return v > 0.0; }, "must be > 0");
  h.length_scales.resize(n);
  for (int i = 0; i < n; ++i) h.length_scales[i] = has_ls ? ls[i] : std::sqrt(ls[i]);

  h.noise_variance =
      gp.Double("noise_variance", c.noise_std * c.noise_std);
  Require(h.noise_variance >= 0.0, gp, "noise_variance", "must be >= 0");
  h.jitter = gp.Double("jitter", h.jitter);
  Require(h.jitter >= 0.0, gp, "jitter", "must be >= 0");
  h.prior_mean = gp.Double("prior_mean", 0.0);
  gp.RejectUnknown();
}

void ParseSolver(Section s, ExperimentConfig& c) {
  c.solver_id = s.String("id", "");
  Require(c.solver_id == "finite" || c.solver_id == "infinite" ||
              c.solver_id == "exp_weights",
          s, "id", "must be one of: finite, infinite, exp_weights");
  if (c.game_id == "common_pool") {
    Require(c.solver_id == "infinite", s, "id",
            "common_pool has interval actions; only the infinite solver applies");
  }
  const int n = PlayerCount(c);

  if (c.solver_id == "finite") {
    FiniteSolverConfig& f = c.finite;
    f.n_initial = s.Int("n_initial", f.n_initial);
    Require(f.n_initial >= 1, s, "n_initial", "must be >= 1");
    f.ei_termination = s.Double("ei_termination", f.ei_termination);
    Require(f.ei_termination > 0.0, s, "ei_termination", "must be > 0");
    f.max_iterations = s.Int("max_iterations", f.max_iterations);
    Require(f.max_iterations >= 0, s, "max_iterations", "must be >= 0");
    f.correlated_noise = s.Bool("correlated_noise", f.correlated_noise);
    const std::string acq = s.String("acquisition", "expected_improvement");
    Require(acq == "expected_improvement" || acq == "posterior_mean", s,
            "acquisition", "must be expected_improvement or posterior_mean");
    f.acquisition = acq == "posterior_mean" ? Acquisition::kPosteriorMean
                                            : Acquisition::kExpectedImprovement;
  } else if (c.solver_id == "infinite") {
    InfiniteSolverConfig& f = c.infinite;
    f.ei_termination = s.Double("ei_termination", f.ei_termination);
    Require(f.ei_termination > 0.0, s, "ei_termination", "must be > 0");
    f.max_iterations = s.Int("max_iterations", f.max_iterations);
    Require(f.max_iterations >= 0, s, "max_iterations", "must be >= 0");
    f.quadrature_order = s.Int("quadrature_order", f.quadrature_order);
    Require(f.quadrature_order >= 2, s, "quadrature_order", "must be >= 2");
    f.correlated_noise = s.Bool("correlated_noise", f.correlated_noise);
    f.warmup_fraction = s.Double("warmup_fraction", f.warmup_fraction);
    Require(f.warmup_fraction > 0.0, s, "warmup_fraction", "must be > 0");
    if (s.Has("start")) {
      const auto start = s.DoubleList("start", {});
      Require(static_cast<int>(start.size()) == n, s, "start",
              "must have one entry per player");
      f.start = Eigen::Map<const Eigen::VectorXd>(start.data(), n);
    } else {
      (void)s.Get("start");
    }
    Section ls = s.Sub("line_search");
    LineSearchParams& p = f.line_search;
    p.c1 = ls.Double("c1", p.c1);
    p.c2 = ls.Double("c2", p.c2);
    Require(p.c1 > 0.0 && p.c1 < p.c2, ls, "c1", "must satisfy 0 < c1 < c2");
    Require(p.c2 <= 1.0, ls, "c2", "must satisfy c1 < c2 <= 1");
    p.wolfe_threshold = ls.Double("wolfe_threshold", p.wolfe_threshold);
    Require(p.wolfe_threshold >= 0.0 && p.wolfe_threshold < 1.0, ls,
            "wolfe_threshold", "must lie in [0, 1)");
    p.max_step = ls.Double("max_step", p.max_step);
    Require(p.max_step > 0.0, ls, "max_step", "must be > 0");
    p.backtrack_factor = ls.Double("backtrack_factor", p.backtrack_factor);
    Require(p.backtrack_factor > 0.0 && p.backtrack_factor < 1.0, ls,
            "backtrack_factor", "must lie in (0, 1)");
    p.max_backtracks = ls.Int("max_backtracks", p.max_backtracks);
    Require(p.max_backtracks >= 1, ls, "max_backtracks", "must be >= 1");
    ls.RejectUnknown();
  } else {
    ExpWeightsConfig& e = c.exp_weights;
    e.rounds = s.Int("rounds", e.rounds);
    Require(e.rounds >= 1, s, "rounds", "must be >= 1");
    e.eta0 = s.Double("eta0", e.eta0);
    Require(e.eta0 > 0.0, s, "eta0", "must be > 0");
    Require(s.Has("utility_min"), s, "utility_min", "is required");
    Require(s.Has("utility_max"), s, "utility_max", "is required");
    e.utility_min = s.Double("utility_min", 0.0);
    e.utility_max = s.Double("utility_max", 1.0);
    Require(e.utility_max > e.utility_min, s, "utility_max",
            "must exceed utility_min");
  }
  s.RejectUnknown();
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError("", 0, "config is empty");
  Section top(root, "");
  ExperimentConfig c;

  {
    const YAML::Node n = top.Get("seed");
    if (n && !n.IsNull()) {
      try {
        c.seed = n.as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        throw ConfigError("seed", LineOf(n), "expected a nonnegative integer");
      }
    }
  }
  c.reps = top.Int("reps", c.reps);
  Require(c.reps >= 1, top, "reps", "must be >= 1");
  c.out_dir = top.String("out_dir", c.out_dir);

  Require(top.Has("game"), top, "game", "section is required");
  Require(top.Has("solver"), top, "solver", "section is required");
  ParseGame(top.Sub("game"), c);
  // The bandit baseline has no GP; its gp block may be omitted.
  const YAML::Node solver_id = root["solver"]["id"];
  const bool needs_gp = !(solver_id && solver_id.IsScalar() &&
                          solver_id.Scalar() == "exp_weights");
  if (needs_gp || top.Has("gp")) {
    ParseGp(top.Sub("gp"), c);
  } else {
    (void)top.Get("gp");
    c.gp = GpHyperparams::Isotropic(PlayerCount(c), 1.0, 1.0,
                                    c.noise_std * c.noise_std);
  }
  ParseSolver(top.Sub("solver"), c);
  top.RejectUnknown();

  c.finite.hyperparams = c.gp;
  c.infinite.hyperparams = c.gp;
  try {
    if (c.game_id == "cournot") c.cournot.Validate();
    if (c.game_id == "common_pool") c.common_pool.Validate();
    if (c.solver_id == "finite") c.finite.Validate(PlayerCount(c));
    if (c.solver_id == "infinite") c.infinite.Validate(PlayerCount(c));
    if (c.solver_id == "exp_weights") c.exp_weights.Validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("", 0, e.what());
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseExperimentConfig(buf.str());
}

namespace {

std::string List(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += FormatDouble(v[i]);
  }
  return s + "]";
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string EmitExperimentConfig(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "seed: " << c.seed << "\n";
  o << "reps: " << c.reps << "\n";
  o << "out_dir: " << YAML::Node(c.out_dir) << "\n";
  o << "game:\n  id: " << c.game_id << "\n";
  o << "  noise_std: " << FormatDouble(c.noise_std) << "\n";
  if (c.game_id == "cournot") {
    const auto& p = c.cournot;
    o << "  a: " << FormatDouble(p.a) << "\n";
    o << "  b: " << FormatDouble(p.b) << "\n";
    o << "  d: " << List(p.d) << "\n";
    o << "  beta: " << List(p.beta) << "\n";
    o << "  q_max: " << FormatDouble(p.q_max) << "\n";
    o << "  q_min: " << FormatDouble(c.q_min) << "\n";
    o << "  grid_size: " << c.grid_size << "\n";
  } else {
    const auto& p = c.common_pool;
    o << "  growth: " << FormatDouble(p.growth) << "\n";
    o << "  s0: " << FormatDouble(p.s0) << "\n";
    o << "  alpha: " << List(p.alpha) << "\n";
    o << "  theta: " << List(p.theta) << "\n";
    o << "  horizon: " << FormatDouble(p.horizon) << "\n";
    o << "  integration_points: " << p.integration_points << "\n";
    o << "  gamma_max: " << FormatDouble(p.gamma_max) << "\n";
  }
  o << "gp:\n";
  o << "  output_scale: " << FormatDouble(c.gp.output_scale) << "\n";
  o << "  length_scales: " << List(ToStd(c.gp.length_scales)) << "\n";
  o << "  noise_variance: " << FormatDouble(c.gp.noise_variance) << "\n";
  o << "  jitter: " << FormatDouble(c.gp.jitter) << "\n";
  o << "  prior_mean: " << FormatDouble(c.gp.prior_mean) << "\n";
  o << "solver:\n  id: " << c.solver_id << "\n";
  if (c.solver_id == "finite") {
    const auto& f = c.finite;
    o << "  n_initial: " << f.n_initial << "\n";
    o << "  ei_termination: " << FormatDouble(f.ei_termination) << "\n";
    o << "  max_iterations: " << f.max_iterations << "\n";
    o << "  correlated_noise: " << (f.correlated_noise ? "true" : "false") << "\n";
    o << "  acquisition: "
      << (f.acquisition == Acquisition::kPosteriorMean ? "posterior_mean"
                                                       : "expected_improvement")
      << "\n";
  } else if (c.solver_id == "infinite") {
    const auto& f = c.infinite;
    o << "  ei_termination: " << FormatDouble(f.ei_termination) << "\n";
    o << "  max_iterations: " << f.max_iterations << "\n";
    o << "  quadrature_order: " << f.quadrature_order << "\n";
    o << "  correlated_noise: " << (f.correlated_noise ? "true" : "false") << "\n";
    o << "  warmup_fraction: " << FormatDouble(f.warmup_fraction) << "\n";
    if (f.start) o << "  start: " << List(ToStd(*f.start)) << "\n";
    const auto& p = f.line_search;
    o << "  line_search:\n";
    o << "    c1: " << FormatDouble(p.c1) << "\n";
    o << "    c2: " << FormatDouble(p.c2) << "\n";
    o << "    wolfe_threshold: " << FormatDouble(p.wolfe_threshold) << "\n";
    o << "    max_step: " << FormatDouble(p.max_step) << "\n";
    o << "    backtrack_factor: " << FormatDouble(p.backtrack_factor) << "\n";
    o << "    max_backtracks: " << p.max_backtracks << "\n";
  } else {
    const auto& e = c.exp_weights;
    o << "  rounds: " << e.rounds << "\n";
    o << "  eta0: " << FormatDouble(e.eta0) << "\n";
    o << "  utility_min: " << FormatDouble(e.utility_min) << "\n";
    o << "  utility_max: " << FormatDouble(e.utility_max) << "\n";
  }
  return o.str();
}

std::unique_ptr<GameOracle> MakeGame(const ExperimentConfig& c) {
  if (c.game_id == "cournot") {
    if (c.solver_id == "infinite") {
      return std::make_unique<CournotGame>(
          CournotGame::Continuous(c.cournot, c.q_min, c.noise_std));
    }
    return std::make_unique<CournotGame>(
        CournotGame::Grid(c.cournot, c.q_min, c.grid_size, c.noise_std));
  }
  if (c.game_id == "common_pool") {
    return std::make_unique<CommonPoolGame>(c.common_pool, c.noise_std);
  }
  throw InvalidArgument("unknown game id '" + c.game_id + "'");
}

namespace {

json GameJson(const ExperimentConfig& c) {
  json g;
  g["id"] = c.game_id;
  g["noise_std"] = c.noise_std;
  if (c.game_id == "cournot") {
    g["a"] = c.cournot.a;
    g["b"] = c.cournot.b;
    g["d"] = c.cournot.d;
    g["beta"] = c.cournot.beta;
    g["q_max"] = c.cournot.q_max;
    g["q_min"] = c.q_min;
    if (c.solver_id != "infinite") g["grid_size"] = c.grid_size;
  } else {
    const auto& p = c.common_pool;
    g["growth"] = p.growth;
    g["s0"] = p.s0;
    g["alpha"] = p.alpha;
    g["theta"] = p.theta;
    g["horizon"] = p.horizon;
    g["integration_points"] = p.integration_points;
    g["gamma_max"] = p.gamma_max;
  }
  return g;
}

// Grid used for the best-response check of continuous runs.
constexpr int kBestResponseGrid = 200;

}  // namespace

std::string SummaryJson(const ExperimentConfig& c, int rep,
                        const SolveTrace& trace, const GameOracle& game,
                        double wall_time_s) {
  json s;
  s["solver"] = trace.solver;
  s["game"] = GameJson(c);
  s["repetition"] = rep;
  s["seed"] = c.seed + static_cast<std::uint64_t>(rep);
  s["final_profile"] = ToStd(trace.final_profile);
  if (!trace.final_indices.empty()) s["final_indices"] = trace.final_indices;
  s["iterations"] = trace.iterations;
  s["oracle_calls"] = trace.oracle_calls;
  s["stopping_reason"] = StopReasonName(trace.stop);
  s["converged"] = trace.stop == StopReason::kEiBelowThreshold;
  s["final_ei"] = std::isnan(trace.final_ei) ? json(nullptr) : json(trace.final_ei);
  json v;
  if (trace.solver == "finite") {
    const NashCheck check = VerifyNashExhaustive(game, trace.final_indices);
    v["is_nash"] = check.is_nash;
    v["max_gain"] = check.max_gain;
  } else {
    const Eigen::VectorXd gains =
        BestResponseGains(game, trace.final_profile, kBestResponseGrid);
    const Eigen::VectorXd u = game.TrueUtilities(trace.final_profile);
    v["grid_points"] = kBestResponseGrid;
    v["best_response_gains"] = ToStd(gains);
    v["utilities"] = ToStd(u);
  }
  s["verification"] = v;
  s["wall_time_s"] = wall_time_s;
  return s.dump(2) + "\n";
}

void WriteExpWeightsCsv(const ExpWeightsTrace& trace, const GameOracle& game,
                        std::ostream& out) {
  const int n = game.player_count();
  out << "step,phase";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int i = 1; i <= n; ++i) out << ",a_" << i;
  for (int i = 1; i <= n; ++i) out << ",y_" << i;
  for (int i = 1; i <= n; ++i) out << ",mode_" << i;
  for (int i = 1; i <= n; ++i) out << ",p_mode_" << i;
  out << "\n";
  for (const auto& r : trace.rounds) {
    const Profile x = game.ProfileFromIndices(r.actions);
    out << r.round << ",round";
    for (int i = 0; i < n; ++i) out << ',' << FormatDouble(x[i]);
    for (int i = 0; i < n; ++i) out << ',' << r.actions[i];
    for (int i = 0; i < n; ++i) out << ',' << FormatDouble(r.y[i]);
    for (int i = 0; i < n; ++i) {
      Eigen::Index mode;
      r.strategies[i].maxCoeff(&mode);
      out << ',' << mode;
    }
    for (int i = 0; i < n; ++i) {
      out << ',' << FormatDouble(r.strategies[i].maxCoeff());
    }
    out << "\n";
  }
}

namespace {

std::string RepName(const std::string& stem, int rep, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_rep%03d", rep);
  return stem + buf + ext;
}

void WriteFile(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + p.string() + "'");
}

std::string ExpWeightsSummaryJson(const ExperimentConfig& c, int rep,
                                  const ExpWeightsTrace& trace,
                                  const GameOracle& game, double wall_time_s) {
  json s;
  s["solver"] = "exp_weights";
  s["game"] = GameJson(c);
  s["repetition"] = rep;
  s["seed"] = c.seed + static_cast<std::uint64_t>(rep);
  s["rounds"] = static_cast<int>(trace.rounds.size());
  std::vector<int> modal;
  json strategies = json::array();
  for (const auto& p : trace.final_strategies()) {
    Eigen::Index mode;
    p.maxCoeff(&mode);
    modal.push_back(static_cast<int>(mode));
    strategies.push_back(ToStd(p));
  }
  s["final_indices"] = modal;
  s["final_profile"] = ToStd(game.ProfileFromIndices(modal));
  s["final_strategies"] = strategies;
  s["stopping_reason"] = StopReasonName(StopReason::kRoundsExhausted);
  int first_nash = -1;
  for (const auto& r : trace.rounds) {
    if (VerifyNashExhaustive(game, r.actions).is_nash) {
      first_nash = r.round;
      break;
    }
  }
  s["first_nash_round"] = first_nash;
  const NashCheck check = VerifyNashExhaustive(game, modal);
  s["verification"] = {{"is_nash", check.is_nash}, {"max_gain", check.max_gain}};
  s["wall_time_s"] = wall_time_s;
  return s.dump(2) + "\n";
}

}  // namespace

ExperimentOutputs RunExperiment(const ExperimentConfig& c) {
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  ExperimentOutputs out;
  out.manifest = (dir / "manifest.yaml").string();
  WriteFile(out.manifest, EmitExperimentConfig(c));

  const std::unique_ptr<GameOracle> game = MakeGame(c);
  for (int rep = 0; rep < c.reps; ++rep) {
    Rng rng(c.seed + static_cast<std::uint64_t>(rep));
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream csv;
    std::string summary;
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
    };
    if (c.solver_id == "exp_weights") {
      const ExpWeightsTrace t = ExpWeightsRun(*game, c.exp_weights, rng);
      WriteExpWeightsCsv(t, *game, csv);
      summary = ExpWeightsSummaryJson(c, rep, t, *game, elapsed());
    } else {
      const SolveTrace t = c.solver_id == "finite"
                               ? SolveFinite(*game, c.finite, rng)
                               : SolveInfinite(*game, c.infinite, rng);
      WriteTraceCsv(t, csv);
      summary = SummaryJson(c, rep, t, *game, elapsed());
    }
    const fs::path trace_path = dir / RepName("trace", rep, ".csv");
    const fs::path summary_path = dir / RepName("summary", rep, ".json");
    WriteFile(trace_path, csv.str());
    WriteFile(summary_path, summary);
    out.traces.push_back(trace_path.string());
    out.summaries.push_back(summary_path.string());
  }
  return out;
}

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int Column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

std::vector<std::string> SplitComma(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Csv ReadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open trace '" + path + "'");
  Csv csv;
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw InvalidArgument("trace '" + path + "' has no header row");
  }
  csv.header = SplitComma(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = SplitComma(line);
    if (row.size() != csv.header.size()) {
      throw InvalidArgument("trace '" + path + "' has a row with " +
                            std::to_string(row.size()) + " fields, header has " +
                            std::to_string(csv.header.size()));
    }
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

std::vector<Csv> ReadSameSchema(const std::vector<std::string>& files) {
  std::vector<Csv> out;
  for (const auto& f : files) {
    out.push_back(ReadCsv(f));
    if (out.back().header != out.front().header) {
      throw InvalidArgument("schema mismatch: '" + f +
                            "' has a different header than '" + files.front() +
                            "'");
    }
  }
  return out;
}

void PlotPath2d(const std::vector<std::string>& files, std::ostream& out) {
  const auto csvs = ReadSameSchema(files);
  const Csv& first = csvs.front();
  const int cx = first.Column("x_1");
  const int cy = first.Column("x_2");
  const int cs = first.Column("step");
  if (cx < 0 || cy < 0 || cs < 0) {
    throw InvalidArgument("path2d needs step, x_1 and x_2 columns");
  }
  const int cp = first.Column("phase");
  const bool multi = csvs.size() > 1;
  if (multi) out << "trace,";
  out << "step,phase,x_1,x_2\n";
  for (std::size_t t = 0; t < csvs.size(); ++t) {
    for (const auto& r : csvs[t].rows) {
      if (multi) out << t << ',';
      out << r[cs] << ',' << (cp >= 0 ? r[cp] : "") << ',' << r[cx] << ','
          << r[cy] << "\n";
    }
  }
}

void PlotEiCurve(const std::vector<std::string>& files, std::ostream& out) {
  const auto csvs = ReadSameSchema(files);
  const Csv& first = csvs.front();
  const int ce = first.Column("ei");
  const int cp = first.Column("phase");
  if (ce < 0 || cp < 0) {
    throw InvalidArgument("ei_curve needs phase and ei columns");
  }
  const bool multi = csvs.size() > 1;
  if (multi) out << "trace,";
  out << "iteration,ei\n";
  for (std::size_t t = 0; t < csvs.size(); ++t) {
    int it = 0;
    for (const auto& r : csvs[t].rows) {
      if (r[cp] != "search") continue;
      if (multi) out << t << ',';
      out << ++it << ',' << r[ce] << "\n";
    }
  }
}

// Samples per trajectory.
constexpr int kTrajectorySamples = 101;

void PlotTrajectory(const std::vector<std::string>& files, std::ostream& out) {
  std::vector<json> docs;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw InvalidArgument("cannot open summary '" + f + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidArgument("'" + f + "' is not a JSON summary: " + e.what());
    }
    if (!j.contains("game") || j["game"].value("id", "") != "common_pool" ||
        !j.contains("final_profile")) {
      throw InvalidArgument("trajectory needs a common_pool summary; '" + f +
                            "' is not one");
    }
    docs.push_back(std::move(j));
  }
  const std::size_t players = docs.front()["final_profile"].size();
  for (const auto& d : docs) {
    if (d["final_profile"].size() != players) {
      throw InvalidArgument("schema mismatch: summaries have different player "
                            "counts");
    }
  }
  const bool multi = docs.size() > 1;
  if (multi) out << "trace,";
  out << "t,s";
  for (std::size_t i = 1; i <= players; ++i) out << ",x_" << i;
  out << "\n";
  for (std::size_t k = 0; k < docs.size(); ++k) {
    const json& g = docs[k]["game"];
    const double a = g.at("growth").get<double>();
    const double s0 = g.at("s0").get<double>();
    const double horizon = g.at("horizon").get<double>();
    const auto gamma = docs[k]["final_profile"].get<std::vector<double>>();
    double total = 0.0;
    for (double v : gamma) total += v;
    for (int n = 0; n < kTrajectorySamples; ++n) {
      const double t = horizon * n / (kTrajectorySamples - 1);
      const double s = s0 * std::exp((a - total) * t);
      if (multi) out << k << ',';
      out << FormatDouble(t) << ',' << FormatDouble(s);
      for (double v : gamma) out << ',' << FormatDouble(v * s);
      out << "\n";
    }
  }
}

}  // namespace

void EmitPlotData(const std::string& kind,
                  const std::vector<std::string>& files, std::ostream& out) {
  if (files.empty()) throw InvalidArgument("plot needs at least one input file");
  if (kind == "path2d") {
    PlotPath2d(files, out);
  } else if (kind == "ei_curve") {
    PlotEiCurve(files, out);
  } else if (kind == "trajectory") {
    PlotTrajectory(files, out);
  } else {
    throw InvalidArgument("unknown plot kind '" + kind +
                          "' (expected path2d, ei_curve or trajectory)");
  }
}

}  // namespace pgbo
