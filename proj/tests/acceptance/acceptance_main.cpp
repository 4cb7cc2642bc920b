// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Runs against the core library; the determinism criterion drives the CLI
// binary (EPSNUM_CLI_PATH) end to end.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "core/approx.hpp"
#include "core/bounds.hpp"
#include "core/covering.hpp"
#include "core/hilbert.hpp"
#include "core/norms.hpp"
#include "core/rng.hpp"
#include "json.hpp"

using namespace epsnum;
using covering::Effort;
using covering::entropy_bracket;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

int g_failures = 0;

void report(const std::string& id, const std::string& title, const Outcome& out) {
  std::printf("%s %-4s %s (%s) [%.1f s]\n", out.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
              out.detail.c_str(), out.seconds);
  std::fflush(stdout);
  if (!out.pass) ++g_failures;
}

Outcome timed(double limit_s, const std::function<std::pair<bool, std::string>()>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [ok, detail] = body();
    out.pass = ok;
    out.detail = detail;
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.seconds >= limit_s) {
    out.pass = false;
    out.detail += "; exceeded " + std::to_string(limit_s) + " s budget";
  }
  return out;
}

linop::DiagonalSpec random_spec(std::uint64_t seed, int len, double lo, double hi, PNorm p,
                                Field field) {
  Rng rng(seed);
  std::vector<double> prefix(static_cast<std::size_t>(len));
  for (auto& v : prefix) v = rng.uniform(lo, hi);
  std::sort(prefix.begin(), prefix.end(), std::greater<double>());
  return linop::make_diagonal_spec(prefix, 0.0, p, field);
}

// ---- criteria -----------------------------------------------------------

std::pair<bool, std::string> c1_norm_as_first_entropy() {
  const double ps[] = {1.0, 1.5, 2.0};
  covering::BracketOptions opts;
  opts.cloud_budget = 20'000;
  double max_width = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + i % 3;
    const PNorm p{ps[i % 3]};
    const auto spec = random_spec(1000 + i, dim, 0.05, 2.0, p, Field::Real);
    const auto op = linop::truncate(spec, dim);
    const auto b = entropy_bracket(op, 1, 0.02, Effort::Greedy, opts);
    const double sigma1 = spec.prefix.front();
    if (!(b.lower <= sigma1 && sigma1 <= b.upper)) return {false, "sigma_1 escaped a bracket"};
    max_width = std::max(max_width, b.upper - b.lower);
    if (b.upper - b.lower > 2.0 * 0.02 + 1e-9) return {false, "bracket width exceeded 2 eta"};

    // p = inf enters through the norm only.
    const auto spec_inf = random_spec(1000 + i, dim, 0.05, 2.0, PNorm::infinity(), Field::Real);
    const auto nb = norms::operator_norm(linop::truncate(spec_inf, dim));
    if (nb.lower != spec_inf.prefix.front() || nb.upper != spec_inf.prefix.front())
      return {false, "p=inf diagonal norm not exact"};
  }
  std::ostringstream os;
  os << "50/50 brackets contain sigma_1, max width " << max_width;
  return {true, os.str()};
}

std::pair<bool, std::string> c2_sandwich_at_truncation_scale() {
  covering::BracketOptions opts;
  opts.node_budget = 120'000;
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const auto spec = random_spec(2000 + i, 5, 0.05, 1.5, PNorm(2.0), Field::Real);
    for (int dim : {2, 3}) {
      const auto op = linop::truncate(spec, dim);
      for (int n = 1; n <= 8; ++n) {
        const auto b = entropy_bracket(op, n, 0.01, Effort::Exact, opts);
        double best_vol = 0.0;
        for (int k = 1; k <= dim; ++k)
          best_vol = std::max(best_vol, bounds::volume_lower_bound(spec, k, n));
        const double ceiling = 4.0 * bounds::delta(spec, n, 1e-12).value;
        if (b.upper < best_vol - 1e-9) return {false, "upper bound under the volume bound"};
        if (b.lower > ceiling + 1e-9) return {false, "lower bound above 4 delta"};
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " brackets, zero violations"};
}

std::pair<bool, std::string> c3_exact_geometric_oracle() {
  const auto id2 = linop::identity_operator(2, PNorm(2.0), Field::Real);
  const double target3 = 0.8660254037844386;  // sin(pi/3), arc-length oracle
  const auto b3 = entropy_bracket(id2, 3, 0.005, Effort::Exact);
  if (!(b3.lower <= target3 && target3 <= b3.upper))
    return {false, "three-ball bracket misses sqrt(3)/2"};
  if (b3.upper - b3.lower > 0.02) {
    std::ostringstream os;
    os << "three-ball width " << (b3.upper - b3.lower) << " > 0.02";
    return {false, os.str()};
  }
  const auto b2 = entropy_bracket(id2, 2, 0.005, Effort::Exact);
  if (!(b2.lower <= 1.0 && 1.0 <= b2.upper)) return {false, "two-ball bracket misses 1.0"};
  std::ostringstream os;
  os << "eps_3 in [" << b3.lower << ", " << b3.upper << "], eps_2 in [" << b2.lower << ", "
     << b2.upper << "]";
  return {true, os.str()};
}

std::pair<bool, std::string> c4_delta_spot_values() {
  const auto id = linop::make_diagonal_spec({}, 1.0, PNorm(2.0), Field::Real);
  for (int n : {1, 2, 10})
    if (std::abs(bounds::delta(id, n, 1e-12).value - 1.0) > 1e-12)
      return {false, "identity delta is not 1"};
  const auto s = linop::make_diagonal_spec({1.0, 0.5, 0.25}, 0.0, PNorm(2.0), Field::Real);
  const auto dv = bounds::delta(s, 2, 1e-12);
  if (std::abs(dv.value - 0.5) > 1e-12) return {false, "delta(2) is not 1/2"};
  if (!dv.attained_k || (*dv.attained_k != 1 && *dv.attained_k != 2))
    return {false, "delta(2) attained outside {1, 2}"};

  Rng rng(444);
  for (int t = 0; t < 1000; ++t) {
    const int len = 1 + static_cast<int>(rng.below(6));
    std::vector<double> prefix(static_cast<std::size_t>(len));
    for (auto& v : prefix) v = rng.uniform(0.01, 2.0);
    std::sort(prefix.begin(), prefix.end(), std::greater<double>());
    const double tail = rng.next_double() < 0.5 ? prefix.back() * rng.next_double() : 0.0;
    const auto sp = linop::make_diagonal_spec(prefix, tail, PNorm(2.0), Field::Real);
    for (int n : {1, 2, 3, 7, 16}) {
      int r = 0;
      while (n > (1LL << (r + 1))) ++r;
      if (sp.sigma(static_cast<std::size_t>(r) + 1) >
          2.0 * bounds::delta(sp, n, 1e-12).value + 1e-9)
        return {false, "index-r property failed"};
    }
  }
  return {true, "spot values exact, index-r held on 1000 random specs"};
}

std::pair<bool, std::string> c5_truncation_monotonicity() {
  covering::BracketOptions opts;
  opts.node_budget = 100'000;
  for (int i = 0; i < 10; ++i) {
    const int len = 1 + i % 3;
    const auto spec = random_spec(5000 + i, len, 0.1, 1.2, PNorm(2.0), Field::Real);
    const auto rec =
        approx::run_truncation_convergence(spec, 2, {1, 2, 3, 4}, 0.03, Effort::Exact, opts);
    if (!approx::check_monotone(rec)) return {false, "monotone verdict failed"};
    if (rec.stabilized_at < 0 || rec.stabilized_at > len)
      return {false, "no stabilization at the prefix length"};
  }
  const auto id = linop::make_diagonal_spec({}, 1.0, PNorm(2.0), Field::Real);
  const auto rec = approx::run_truncation_convergence(id, 1, {1, 2, 3}, 0.03, Effort::Greedy, opts);
  for (const auto& row : rec.rows)
    if (!(row.bracket.lower <= 1.0 && 1.0 <= row.bracket.upper))
      return {false, "identity row does not bracket 1"};
  return {true, "10/10 records monotone and stabilized; identity rows bracket 1"};
}

std::pair<bool, std::string> c6_hilbert_identity() {
  covering::BracketOptions opts;
  opts.node_budget = 100'000;
  double worst_gap = 0.0;
  for (int i = 0; i < 15; ++i) {
    const bool complex_field = i >= 10;
    Rng rng(6000 + i);
    std::vector<double> re(4), im(4, 0.0);
    for (auto& v : re) v = rng.uniform(-1.0, 1.0);
    if (complex_field)
      for (auto& v : im) v = rng.uniform(-1.0, 1.0);
    const auto a = complex_field
                       ? linop::make_dense_complex(2, 2, PNorm(2.0), re, im)
                       : linop::make_dense_real(2, 2, PNorm(2.0), re);
    const auto rep = hilbert::hilbert_identity_check(a, 4, 0.01, Effort::Exact, opts);
    if (rep.any_violated) return {false, "a violated verdict appeared"};
    if (rep.max_singular_gap > 1e-9) return {false, "singular-value certificate failed"};
    worst_gap = std::max(worst_gap, rep.max_singular_gap);
  }
  const auto shift = linop::make_dense_real(2, 2, PNorm(2.0), std::vector<double>{0, 1, 0, 0});
  const auto rep = hilbert::hilbert_identity_check(shift, 2, 0.01, Effort::Exact, opts);
  const auto& t = rep.per_n.back();
  for (const auto* b : {&t.op, &t.adjoint_op, &t.modulus_op})
    if (!(b->lower <= 0.5 && 0.5 <= b->upper))
      return {false, "hand case bracket misses 1/2"};
  std::ostringstream os;
  os << "15/15 consistent, max singular gap " << worst_gap;
  return {true, os.str()};
}

std::pair<bool, std::string> c7_projection_bound() {
  const auto id2 = linop::identity_operator(2, PNorm(2.0), Field::Real);
  for (int k : {2, 3, 4}) {
    const auto b = entropy_bracket(id2, k, 0.01, Effort::Exact);
    if (b.lower < std::pow(static_cast<double>(k), -0.5) - 1e-9)
      return {false, "oracle lower bound under k^(-1/2)"};
  }
  if (std::abs(bounds::projection_entropy_lower(4, 2, Field::Complex) -
               std::pow(4.0, -0.25)) > 1e-12)
    return {false, "complex projection formula off"};
  for (int k : {2, 3, 4})
    if (std::abs(bounds::projection_entropy_lower(k, 2, Field::Complex) -
                 std::pow(static_cast<double>(k), -0.25)) > 1e-12)
      return {false, "complex projection formula off"};
  return {true, "oracle lower >= k^(-1/2) for k in {2,3,4}; formulas match"};
}

std::pair<bool, std::string> c8_sot_demo() {
  const auto demo = approx::sot_gap_demo(10);
  for (double v : demo.eps1)
    if (std::abs(v - 1.0) > 1e-9) return {false, "eps_1 of a row operator is not 1"};
  if (demo.limit_eps1 != 0.0) return {false, "limit operator eps_1 is not 0"};
  return {true, "eps_1 = 1 for n = 1..10, limit has eps_1 = 0"};
}

// ---- criterion 9: CLI determinism ----------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool run_cli(const std::string& args, const std::string& out_path) {
  const std::string cmd = std::string(EPSNUM_CLI_PATH) + " " + args + " --out " + out_path;
  return std::system(cmd.c_str()) == 0;
}

std::pair<bool, std::string> c9_determinism(const std::string& tmpdir) {
  struct Run {
    std::string name, config, args;
  };
  const std::vector<Run> runs = {
      {"bounds", "tail = 1\np = 2\nn = 1,2,4\nseed = 7\n", "bounds"},
      {"estimate", "prefix = [1, 0.5]\nn = 3\neta = 0.02\neffort = exact\nseed = 7\n", "estimate"},
      {"converge", "prefix = [1, 0.5]\nk = 2\nsizes = 1,2\neta = 0.03\neffort = exact\nseed = 7\n",
       "converge"},
      {"hilbert", "count = 2\nseed = 7\nn_max = 2\neta = 0.05\n", "hilbert"},
      {"props", "suites = sot-demo\nseed = 7\n", "props"},
  };
  for (const auto& run : runs) {
    const std::string cfg_path = tmpdir + "/" + run.name + ".cfg";
    std::ofstream(cfg_path) << run.config;
    const std::string out1 = tmpdir + "/" + run.name + "_1.json";
    const std::string out2 = tmpdir + "/" + run.name + "_2.json";
    if (!run_cli(run.args + " --config " + cfg_path, out1) ||
        !run_cli(run.args + " --config " + cfg_path, out2))
      return {false, run.name + " run failed"};
    const auto j1 = nlohmann::json::parse(slurp(out1));
    const auto j2 = nlohmann::json::parse(slurp(out2));
    if (j1.at("payload").dump() != j2.at("payload").dump())
      return {false, run.name + " payloads differ"};
  }
  return {true, "5/5 commands byte-identical payloads across reruns"};
}

}  // namespace

int main() {
  std::string tmpdir = "/tmp/epsnum-acceptance";
  if (const char* env = std::getenv("TMPDIR")) tmpdir = std::string(env) + "/epsnum-acceptance";
  if (std::system(("mkdir -p " + tmpdir).c_str()) != 0) {
    std::fprintf(stderr, "cannot create %s\n", tmpdir.c_str());
    return 1;
  }

  report("C1", "norm as first entropy number", timed(60, c1_norm_as_first_entropy));
  report("C2", "diagonal sandwich at truncation scale", timed(600, c2_sandwich_at_truncation_scale));
  report("C3", "exact geometric oracle on the disk", timed(600, c3_exact_geometric_oracle));
  report("C4", "delta formula spot values and index-r", timed(5, c4_delta_spot_values));
  report("C5", "truncation monotonicity and stabilization", timed(600, c5_truncation_monotonicity));
  report("C6", "adjoint/modulus identity at desk scale", timed(900, c6_hilbert_identity));
  report("C7", "rank-two projection lower bounds", timed(60, c7_projection_bound));
  report("C8", "pointwise-limit gap demo", timed(1, c8_sot_demo));
  report("C9", "bit-exact reruns through the CLI",
         timed(600, [&] { return c9_determinism(tmpdir); }));

  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return g_failures;
}
