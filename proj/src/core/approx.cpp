#include "approx.hpp"

#include <chrono>
#include <cmath>

#include "errors.hpp"
#include "norms.hpp"

namespace epsnum::approx {

using covering::EntropyBracket;

namespace {

bool brackets_equal(const EntropyBracket& a, const EntropyBracket& b) {
  return a.lower == b.lower && a.upper == b.upper && a.eta == b.eta;
}

}  // namespace

ConvergenceRecord run_truncation_convergence(const linop::DiagonalSpec& spec, int k,
                                             const std::vector<int>& sizes, double eta,
                                             covering::Effort effort,
                                             const covering::BracketOptions& opts) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "convergence run needs k >= 1");
  if (sizes.empty()) fail(ErrorCode::InvalidArgument, "sizes must be nonempty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) fail(ErrorCode::InvalidArgument, "sizes must be positive");
    if (i > 0 && sizes[i] < sizes[i - 1])
      fail(ErrorCode::InvalidArgument, "sizes must be nondecreasing");
  }
  if (spec.p.is_inf())
    fail(ErrorCode::Capability,
         "p = inf is unsupported: l_inf offers no useful norm-one coordinate projections");
  if (spec.p.is_one())
    fail(ErrorCode::Capability, "the truncation harness needs 1 < p < inf");

  ConvergenceRecord rec;
  rec.k = k;
  rec.spec = spec;
  rec.ceiling = bounds::diagonal_sandwich(spec, k);

  for (int n : sizes) {
    const auto op = linop::truncate(spec, n);
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.size = n;
    row.bracket = covering::entropy_bracket(op, k, eta, effort, opts);
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec.rows.push_back(std::move(row));
  }

  rec.lower_monotone = true;
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    const double slack = 2.0 * std::max(rec.rows[i - 1].bracket.eta, rec.rows[i].bracket.eta);
    if (rec.rows[i].bracket.lower < rec.rows[i - 1].bracket.lower - slack)
      rec.lower_monotone = false;
  }
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    if (brackets_equal(rec.rows[i].bracket, rec.rows[i - 1].bracket)) {
      if (rec.stabilized_at < 0) rec.stabilized_at = rec.rows[i - 1].size;
    } else {
      rec.stabilized_at = -1;
    }
  }
  return rec;
}

bool check_monotone(const ConvergenceRecord& record) {
  if (record.rows.empty()) fail(ErrorCode::InvalidArgument, "record is empty");
  for (std::size_t i = 0; i < record.rows.size(); ++i)
    for (std::size_t j = i; j < record.rows.size(); ++j)
      if (record.rows[i].bracket.lower > record.rows[j].bracket.upper + 1e-9) return false;
  for (const auto& row : record.rows)
    if (row.bracket.upper > record.ceiling.upper + 2.0 * row.bracket.eta + 1e-9) return false;
  return true;
}

SotGapDemo sot_gap_demo(int n_max) {
  if (n_max < 1) fail(ErrorCode::InvalidArgument, "demo needs n >= 1");
  SotGapDemo demo;
  for (int n = 1; n <= n_max; ++n) {
    // R_n: l_2^n -> l_2^1, x -> x_n. Converges to 0 pointwise; no
    // Q_n R P_n factorization with norm product <= 1 backs it.
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    row.back() = 1.0;
    const auto op = linop::make_dense_real(1, n, PNorm(2.0), row);
    covering::BracketOptions opts;
    opts.cloud_budget = 512;  // the norm route carries this bracket
    opts.node_budget = 10'000;
    const auto bracket = covering::entropy_bracket(op, 1, 0.05, covering::Effort::Greedy, opts);
    demo.sizes.push_back(n);
    demo.eps1.push_back(bracket.lower == bracket.upper ? bracket.lower
                                                       : 0.5 * (bracket.lower + bracket.upper));
  }
  demo.limit_eps1 = 0.0;  // eps_1(0) = ||0|| = 0
  return demo;
}

}  // namespace epsnum::approx
