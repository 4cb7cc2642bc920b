#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "approx.hpp"
#include "bounds.hpp"
#include "covering.hpp"
#include "errors.hpp"
#include "hilbert.hpp"
#include "norms.hpp"
#include "rng.hpp"

namespace epsnum::cmd {

using nlohmann::json;

namespace {

// ---- config accessors ------------------------------------------------

[[noreturn]] void config_fail(const std::string& what) { fail(ErrorCode::Config, what); }

Field get_field(const json& cfg) {
  if (!cfg.contains("field")) return Field::Real;
  const auto& v = cfg.at("field");
  if (v.is_string()) {
    if (v == "real") return Field::Real;
    if (v == "complex") return Field::Complex;
  }
  config_fail("field must be 'real' or 'complex'");
}

PNorm get_p(const json& cfg) {
  if (!cfg.contains("p")) return PNorm(2.0);
  const auto& v = cfg.at("p");
  if (v.is_string()) {
    if (v == "inf" || v == "infinity") return PNorm::infinity();
    config_fail("p must be a number >= 1 or 'inf'");
  }
  if (!v.is_number()) config_fail("p must be a number >= 1 or 'inf'");
  const double p = v.get<double>();
  if (!(p >= 1.0)) config_fail("p must be >= 1");
  return PNorm(p);
}

double get_number(const json& cfg, const std::string& key, double dflt) {
  if (!cfg.contains(key)) return dflt;
  if (!cfg.at(key).is_number()) config_fail(key + " must be a number");
  return cfg.at(key).get<double>();
}

int get_int(const json& cfg, const std::string& key, int dflt, bool required = false) {
  if (!cfg.contains(key)) {
    if (required) config_fail("missing required key '" + key + "'");
    return dflt;
  }
  if (!cfg.at(key).is_number_integer() &&
      !(cfg.at(key).is_number() && std::floor(cfg.at(key).get<double>()) == cfg.at(key).get<double>()))
    config_fail(key + " must be an integer");
  return cfg.at(key).get<int>();
}

std::uint64_t get_seed(const json& cfg) {
  if (!cfg.contains("seed")) return 0;
  if (!cfg.at("seed").is_number()) config_fail("seed must be an integer");
  return cfg.at("seed").get<std::uint64_t>();
}

covering::Effort get_effort(const json& cfg) {
  if (!cfg.contains("effort")) return covering::Effort::Greedy;
  const auto& v = cfg.at("effort");
  if (v.is_string()) {
    if (v == "greedy") return covering::Effort::Greedy;
    if (v == "exact") return covering::Effort::Exact;
  }
  config_fail("effort must be 'greedy' or 'exact'");
}

covering::BracketOptions get_bracket_options(const json& cfg) {
  covering::BracketOptions opts;
  const int budget = get_int(cfg, "cloud_budget", 50'000);
  if (budget < 8 || budget > 50'000) config_fail("cloud_budget must be in [8, 50000]");
  opts.cloud_budget = static_cast<std::size_t>(budget);
  const double nodes = get_number(cfg, "node_budget", 300'000.0);
  if (!(nodes >= 0)) config_fail("node_budget must be nonnegative");
  opts.node_budget = static_cast<std::uint64_t>(nodes);
  if (cfg.contains("witnesses")) {
    if (!cfg.at("witnesses").is_boolean()) config_fail("witnesses must be true or false");
    opts.witnesses = cfg.at("witnesses").get<bool>();
  }
  return opts;
}

std::vector<int> get_int_list(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) config_fail("missing required key '" + key + "'");
  const auto& v = cfg.at(key);
  std::vector<int> out;
  if (v.is_number()) {
    out.push_back(v.get<int>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) config_fail(key + " must hold integers");
      out.push_back(e.get<int>());
    }
  } else {
    config_fail(key + " must be an integer or a list of integers");
  }
  if (out.empty()) config_fail(key + " must be nonempty");
  return out;
}

linop::DiagonalSpec get_spec(const json& cfg) {
  std::vector<double> prefix;
  if (cfg.contains("prefix")) {
    if (!cfg.at("prefix").is_array()) config_fail("prefix must be a list of numbers");
    for (const auto& e : cfg.at("prefix")) {
      if (!e.is_number()) config_fail("prefix must hold numbers");
      prefix.push_back(e.get<double>());
    }
  }
  const double tail = get_number(cfg, "tail", 0.0);
  try {
    return linop::make_diagonal_spec(std::move(prefix), tail, get_p(cfg), get_field(cfg));
  } catch (const Error& e) {
    config_fail(e.what());
  }
}

linop::DenseOperator get_matrix(const json& cfg) {
  const Field field = get_field(cfg);
  const PNorm p = get_p(cfg);
  const auto& m = cfg.at("matrix");
  if (!m.is_array() || m.empty()) config_fail("matrix must be a nonempty array of rows");
  const int rows = static_cast<int>(m.size());
  int cols = -1;
  std::vector<double> re, im;
  for (const auto& row : m) {
    if (!row.is_array()) config_fail("matrix rows must be arrays");
    if (cols < 0)
      cols = static_cast<int>(row.size());
    else if (static_cast<int>(row.size()) != cols)
      config_fail("matrix rows must have equal length");
    for (const auto& e : row) {
      if (e.is_number()) {
        re.push_back(e.get<double>());
        im.push_back(0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        re.push_back(e[0].get<double>());
        im.push_back(e[1].get<double>());
      } else {
        config_fail("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  if (cols < 1) config_fail("matrix must have at least one column");
  try {
    if (field == Field::Complex) return linop::make_dense_complex(rows, cols, p, re, im);
    for (double v : im)
      if (v != 0.0) config_fail("complex entries need field = complex");
    return linop::make_dense_real(rows, cols, p, re);
  } catch (const Error& e) {
    config_fail(e.what());
  }
}

linop::DenseOperator get_operator(const json& cfg) {
  if (cfg.contains("matrix")) return get_matrix(cfg);
  if (cfg.contains("prefix") || cfg.contains("tail")) {
    const auto spec = get_spec(cfg);
    const int dflt = std::max<int>(1, static_cast<int>(spec.prefix.size()));
    const int size = get_int(cfg, "size", dflt);
    if (size < 1) config_fail("size must be positive");
    return linop::truncate(spec, size);
  }
  config_fail("config needs either 'matrix' or a diagonal 'prefix'/'tail'");
}

// ---- serialization ----------------------------------------------------

json json_p(PNorm p) {
  if (p.is_inf()) return "inf";
  return p.value();
}

json json_spec(const linop::DiagonalSpec& spec) {
  return json{{"field", to_string(spec.field)},
              {"p", json_p(spec.p)},
              {"prefix", spec.prefix},
              {"tail", spec.tail}};
}

json json_matrix_entries(const linop::DenseOperator& op) {
  json rows = json::array();
  for (int r = 0; r < op.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < op.cols; ++c) {
      const auto& z = op.at(r, c);
      if (op.field == Field::Real)
        row.push_back(z.real());
      else
        row.push_back(json::array({z.real(), z.imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json json_operator(const linop::DenseOperator& op) {
  return json{{"field", to_string(op.field)},
              {"p", json_p(op.p)},
              {"rows", op.rows},
              {"cols", op.cols},
              {"entries", json_matrix_entries(op)}};
}

json json_points(const std::vector<double>& flat, int dim) {
  json out = json::array();
  for (std::size_t i = 0; i + dim <= flat.size(); i += dim) {
    json pt = json::array();
    for (int j = 0; j < dim; ++j) pt.push_back(flat[i + j]);
    out.push_back(std::move(pt));
  }
  return out;
}

json json_bracket(const covering::EntropyBracket& b) {
  json out{{"n", b.n},           {"lower", b.lower},
           {"upper", b.upper},   {"eta", b.eta},
           {"methods", b.methods}, {"truncated_search", b.truncated_search}};
  if (b.lower_witness) {
    out["lower_witness"] = json{{"min_separation", b.lower_witness->min_separation},
                                {"points", json_points(b.lower_witness->points, b.lower_witness->dim)}};
  }
  if (b.upper_witness) {
    out["upper_witness"] = json{{"radius", b.upper_witness->radius},
                                {"centers", json_points(b.upper_witness->centers, b.upper_witness->dim)}};
  }
  return out;
}

json json_interval(const bounds::Interval& iv) {
  return json{{"lower", iv.lower}, {"upper", iv.upper}};
}

// ---- commands ----------------------------------------------------------

CommandResult cmd_bounds(const json& cfg) {
  const auto spec = get_spec(cfg);
  if (spec.p.is_inf())
    config_fail("p = inf is unsupported: l_inf offers no useful norm-one coordinate projections");
  const auto ns = get_int_list(cfg, "n");
  const double tol = get_number(cfg, "tol", 1e-12);

  int k_max = static_cast<int>(spec.prefix.size());
  if (spec.tail > 0.0) k_max += 2;
  k_max = std::clamp(k_max, 1, 8);

  json rows = json::array();
  for (int n : ns) {
    if (n < 1) config_fail("n must be positive");
    const auto dv = bounds::delta(spec, n, tol);
    const auto iv = bounds::diagonal_sandwich(spec, n);
    json volumes = json::array();
    for (int k = 1; k <= k_max; ++k)
      volumes.push_back(json{{"k", k}, {"value", bounds::volume_lower_bound(spec, k, n)}});
    rows.push_back(json{{"n", n},
                        {"delta", dv.value},
                        {"attained_k", dv.attained_k ? json(*dv.attained_k) : json("limit")},
                        {"tolerance", dv.tolerance},
                        {"sandwich", json_interval(iv)},
                        {"volume_bounds", std::move(volumes)}});
  }
  CommandResult res;
  res.payload = json{{"spec", json_spec(spec)}, {"rows", std::move(rows)},
                     {"tags", json::array({"diagonal-sandwich", "volume-lower"})}};
  return res;
}

CommandResult cmd_estimate(const json& cfg) {
  const auto op = get_operator(cfg);
  const int n = get_int(cfg, "n", 0, true);
  if (n < 1) config_fail("n must be positive");
  const double eta = get_number(cfg, "eta", 0.01);
  if (!(eta > 0.0)) config_fail("eta must be positive");
  const auto bracket =
      covering::entropy_bracket(op, n, eta, get_effort(cfg), get_bracket_options(cfg));
  CommandResult res;
  res.payload = json{{"operator", json_operator(op)},
                     {"n", n},
                     {"requested_eta", eta},
                     {"bracket", json_bracket(bracket)}};
  return res;
}

CommandResult cmd_converge(const json& cfg) {
  const auto spec = get_spec(cfg);
  const int k = get_int(cfg, "k", 0, true);
  const auto sizes = get_int_list(cfg, "sizes");
  const double eta = get_number(cfg, "eta", 0.02);
  if (!(eta > 0.0)) config_fail("eta must be positive");
  const auto record = approx::run_truncation_convergence(spec, k, sizes, eta, get_effort(cfg),
                                                         get_bracket_options(cfg));
  json rows = json::array();
  json walls = json::array();
  for (const auto& row : record.rows) {
    rows.push_back(json{{"size", row.size}, {"bracket", json_bracket(row.bracket)}});
    walls.push_back(row.wall_ms);
  }
  CommandResult res;
  res.payload = json{{"spec", json_spec(record.spec)},
                     {"k", record.k},
                     {"truncation", "coordinate-projection"},
                     {"ceiling", json_interval(record.ceiling)},
                     {"rows", std::move(rows)},
                     {"lower_monotone", record.lower_monotone},
                     {"stabilized_at", record.stabilized_at},
                     {"monotone_check", approx::check_monotone(record)},
                     {"tags", json::array({"truncation-convergence", "diagonal-sandwich"})}};
  res.metrics = json{{"row_wall_ms", std::move(walls)}};
  return res;
}

json json_hilbert_report(const hilbert::HilbertIdentityReport& rep) {
  json per_n = json::array();
  for (const auto& t : rep.per_n)
    per_n.push_back(json{{"n", t.n},
                         {"operator", json_bracket(t.op)},
                         {"adjoint", json_bracket(t.adjoint_op)},
                         {"modulus", json_bracket(t.modulus_op)},
                         {"verdict", t.consistent ? "consistent" : "violated"}});
  return json{{"matrix", json_operator(rep.matrix)},
              {"singular_values", rep.sv_op},
              {"max_singular_gap", rep.max_singular_gap},
              {"per_n", std::move(per_n)},
              {"any_violated", rep.any_violated}};
}

CommandResult cmd_hilbert(const json& cfg) {
  const int n_max = get_int(cfg, "n_max", 4);
  const double eta = get_number(cfg, "eta", 0.01);
  covering::Effort effort =
      cfg.contains("effort") ? get_effort(cfg) : covering::Effort::Exact;
  const auto opts = get_bracket_options(cfg);

  std::vector<linop::DenseOperator> mats;
  if (cfg.contains("matrix")) {
    auto op = get_matrix(cfg);
    if (!op.p.is_two()) config_fail("the identity check needs p = 2");
    mats.push_back(std::move(op));
  } else {
    const int count = get_int(cfg, "count", 1);
    if (count < 1) config_fail("count must be positive");
    const int dim = get_int(cfg, "dim", 2);
    const Field field = get_field(cfg);
    const std::uint64_t seed = get_seed(cfg);
    for (int i = 0; i < count; ++i) {
      Rng rng(seed + 1000003ULL * static_cast<std::uint64_t>(i));
      const std::size_t cnt = static_cast<std::size_t>(dim) * dim;
      std::vector<double> re(cnt), im(cnt, 0.0);
      for (auto& v : re) v = rng.uniform(-1.0, 1.0);
      if (field == Field::Complex)
        for (auto& v : im) v = rng.uniform(-1.0, 1.0);
      mats.push_back(field == Field::Complex
                         ? linop::make_dense_complex(dim, dim, PNorm(2.0), re, im)
                         : linop::make_dense_real(dim, dim, PNorm(2.0), re));
    }
  }

  json reports = json::array();
  bool any_violated = false;
  for (const auto& m : mats) {
    const auto rep = hilbert::hilbert_identity_check(m, n_max, eta, effort, opts);
    any_violated = any_violated || rep.any_violated;
    reports.push_back(json_hilbert_report(rep));
  }
  CommandResult res;
  res.payload = json{{"reports", std::move(reports)},
                     {"any_violated", any_violated},
                     {"tags", json::array({"adjoint-modulus-identity"})}};
  return res;
}

// ---- props suites --------------------------------------------------------

json run_suite_sot_demo() {
  const auto demo = approx::sot_gap_demo(10);
  json checks = json::array();
  bool all = true;
  for (std::size_t i = 0; i < demo.sizes.size(); ++i) {
    const bool ok = std::abs(demo.eps1[i] - 1.0) <= 1e-9;
    all = all && ok;
    checks.push_back(json{{"name", "eps1_row_operator_size_" + std::to_string(demo.sizes[i])},
                          {"pass", ok},
                          {"detail", demo.eps1[i]}});
  }
  checks.push_back(json{{"name", "eps1_limit_operator"},
                        {"pass", demo.limit_eps1 == 0.0},
                        {"detail", demo.limit_eps1}});
  return json{{"name", "sot-demo"}, {"checks", std::move(checks)}, {"pass", all}};
}

json run_suite_norm_first(std::uint64_t seed) {
  json checks = json::array();
  bool all = true;
  const double ps[] = {1.0, 1.5, 2.0};
  for (int i = 0; i < 5; ++i) {
    Rng rng(seed + 7919ULL * static_cast<std::uint64_t>(i));
    const int dim = 1 + static_cast<int>(rng.below(3));
    std::vector<double> sigma(static_cast<std::size_t>(dim));
    for (auto& s : sigma) s = rng.uniform(0.1, 2.0);
    std::sort(sigma.begin(), sigma.end(), std::greater<double>());
    const PNorm p{ps[i % 3]};
    const auto spec = linop::make_diagonal_spec(sigma, 0.0, p, Field::Real);
    const auto op = linop::truncate(spec, dim);
    const auto bracket = covering::entropy_bracket(op, 1, 0.05, covering::Effort::Greedy);
    const bool ok = bracket.lower <= sigma[0] && sigma[0] <= bracket.upper &&
                    bracket.upper - bracket.lower <= 2.0 * 0.05 + 1e-9;
    all = all && ok;
    checks.push_back(json{{"name", "first_entropy_equals_norm_" + std::to_string(i)},
                          {"pass", ok},
                          {"detail", json::array({bracket.lower, sigma[0], bracket.upper})}});
  }
  return json{{"name", "norm-first"}, {"checks", std::move(checks)}, {"pass", all}};
}

json run_suite_monotone() {
  const auto spec =
      linop::make_diagonal_spec({1.0, 0.5, 1.0 / 3.0}, 0.0, PNorm(2.0), Field::Real);
  const auto record =
      approx::run_truncation_convergence(spec, 2, {1, 2, 3}, 0.05, covering::Effort::Exact);
  const bool ok = approx::check_monotone(record) && record.lower_monotone;
  json checks = json::array();
  checks.push_back(json{{"name", "nested_truncations_monotone"}, {"pass", ok}, {"detail", ""}});
  return json{{"name", "monotone"}, {"checks", std::move(checks)}, {"pass", ok}};
}

json run_suite_soundness() {
  json checks = json::array();
  bool all = true;
  {
    // Segment [-1, 1]: two intervals cover at exactly 1/2.
    const auto spec = linop::make_diagonal_spec({1.0}, 0.0, PNorm(2.0), Field::Real);
    const auto op = linop::truncate(spec, 1);
    const auto b = covering::entropy_bracket(op, 2, 0.02, covering::Effort::Exact);
    const bool ok = b.lower <= 0.5 && 0.5 <= b.upper && b.upper - b.lower <= 2.0 * 0.02 + 1e-9;
    all = all && ok;
    checks.push_back(json{{"name", "segment_two_ball_bracket"},
                          {"pass", ok},
                          {"detail", json::array({b.lower, b.upper})}});
  }
  {
    // Disk with three balls: optimum sqrt(3)/2.
    const auto op = linop::identity_operator(2, PNorm(2.0), Field::Real);
    const auto b = covering::entropy_bracket(op, 3, 0.02, covering::Effort::Exact);
    const double target = 0.8660254037844386;
    const bool ok = b.lower <= target && target <= b.upper;
    all = all && ok;
    checks.push_back(json{{"name", "disk_three_ball_bracket"},
                          {"pass", ok},
                          {"detail", json::array({b.lower, b.upper})}});
  }
  return json{{"name", "soundness"}, {"checks", std::move(checks)}, {"pass", all}};
}

json run_suite_inequalities() {
  json checks = json::array();
  bool all = true;
  const PNorm p2{2.0};
  const auto t = linop::truncate(linop::make_diagonal_spec({1.0, 0.5}, 0.0, p2, Field::Real), 2);
  const auto s = linop::scale(0.1, linop::identity_operator(2, p2, Field::Real));
  const auto bt = covering::entropy_bracket(t, 2, 0.05, covering::Effort::Exact);
  const auto bts = covering::entropy_bracket(linop::add(t, s), 2, 0.05, covering::Effort::Exact);
  const bool sub = bounds::check_subadditivity(bt, bts, norms::operator_norm(s));
  all = all && sub;
  checks.push_back(json{{"name", "entropy_subadditive_under_perturbation"}, {"pass", sub}, {"detail", ""}});

  const auto half = linop::scale(0.5, linop::identity_operator(2, p2, Field::Real));
  const auto bsrt =
      covering::entropy_bracket(linop::compose(half, t), 2, 0.05, covering::Effort::Exact);
  const bool mult = bounds::check_submultiplicativity(
      bt, bsrt, norms::operator_norm(half),
      norms::operator_norm(linop::identity_operator(2, p2, Field::Real)));
  all = all && mult;
  checks.push_back(
      json{{"name", "entropy_submultiplicative_under_composition"}, {"pass", mult}, {"detail", ""}});
  return json{{"name", "inequalities"}, {"checks", std::move(checks)}, {"pass", all}};
}

CommandResult cmd_props(const json& cfg) {
  std::vector<std::string> selection;
  if (cfg.contains("suites")) {
    const auto& v = cfg.at("suites");
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      std::size_t pos = 0;
      while (pos != std::string::npos) {
        const auto comma = s.find(',', pos);
        const std::string part = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!part.empty()) selection.push_back(part);
        pos = comma == std::string::npos ? comma : comma + 1;
      }
    } else if (v.is_array()) {
      for (const auto& e : v)
        if (e.is_string()) selection.push_back(e.get<std::string>());
    }
    if (selection.empty()) config_fail("empty suite selection");
  } else {
    selection = {"sot-demo", "norm-first", "monotone", "soundness", "inequalities"};
  }

  const std::uint64_t seed = get_seed(cfg);
  json suites = json::array();
  bool all = true;
  for (const auto& name : selection) {
    json suite;
    if (name == "sot-demo")
      suite = run_suite_sot_demo();
    else if (name == "norm-first")
      suite = run_suite_norm_first(seed);
    else if (name == "monotone")
      suite = run_suite_monotone();
    else if (name == "soundness")
      suite = run_suite_soundness();
    else if (name == "inequalities")
      suite = run_suite_inequalities();
    else
      config_fail("unknown suite '" + name + "'");
    all = all && suite.at("pass").get<bool>();
    suites.push_back(std::move(suite));
  }
  CommandResult res;
  res.payload = json{{"suites", std::move(suites)}, {"pass", all}};
  return res;
}

}  // namespace

CommandResult run_command(const std::string& command, const json& config) {
  if (!config.is_object()) fail(ErrorCode::Config, "configuration must be a JSON object");
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult res;
  if (command == "bounds")
    res = cmd_bounds(config);
  else if (command == "estimate")
    res = cmd_estimate(config);
  else if (command == "converge")
    res = cmd_converge(config);
  else if (command == "hilbert")
    res = cmd_hilbert(config);
  else if (command == "props")
    res = cmd_props(config);
  else
    fail(ErrorCode::Config, "unknown command '" + command + "'");
  if (!res.metrics.is_object()) res.metrics = json::object();
  res.metrics["wall_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

const char* version() { return "0.1.0"; }

}  // namespace epsnum::cmd
