#include "covering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "bounds.hpp"
#include "errors.hpp"
#include "norms.hpp"

namespace epsnum::covering {

using geom::PointCloud;
using geom::SetShape;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist_key(const PointCloud& c, std::size_t i, std::size_t j) {
  return geom::p_dist_key(c.point(i), c.point(j), c.p, c.field);
}

// Largest-norm point; the cloud is stored lexicographically sorted, so
// ties resolve to the lexicographically smallest point.
std::size_t start_index(const PointCloud& cloud) {
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double nv = geom::p_norm(cloud.point(i), cloud.p, cloud.field);
    if (nv > best_norm) {
      best_norm = nv;
      best = i;
    }
  }
  return best;
}

double measure_cover_radius(const PointCloud& cloud, std::span<const std::size_t> centers) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double mk = kInf;
    for (std::size_t c : centers) mk = std::min(mk, dist_key(cloud, i, c));
    worst = std::max(worst, mk);
  }
  return geom::radius_from_key(worst, cloud.p);
}

}  // namespace

double packing_lower_bound(const PointCloud& cloud, int n, PackingWitness* witness) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "packing needs n >= 1");
  if (!cloud.subset_certified)
    fail(ErrorCode::InvalidArgument, "packing witnesses need a subset-certified cloud");
  const std::size_t want = static_cast<std::size_t>(n) + 1;
  if (cloud.size() < want || cloud.size() < 2) return 0.0;

  std::vector<std::size_t> sel;
  sel.reserve(want);
  sel.push_back(start_index(cloud));
  std::vector<double> min_key(cloud.size(), kInf);
  while (sel.size() < want) {
    const std::size_t last = sel.back();
    std::size_t far = 0;
    double far_key = -1.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      min_key[i] = std::min(min_key[i], dist_key(cloud, i, last));
      if (min_key[i] > far_key) {
        far_key = min_key[i];
        far = i;
      }
    }
    sel.push_back(far);
  }

  auto separation_key = [&](const std::vector<std::size_t>& pts) {
    double s = kInf;
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b)
        s = std::min(s, dist_key(cloud, pts[a], pts[b]));
    return s;
  };

  // One replacement sweep: a witness may move to any cloud point that
  // strictly improves the overall min pairwise separation.
  double cur = separation_key(sel);
  for (std::size_t slot = 0; slot < sel.size(); ++slot) {
    double rest_key = kInf;
    for (std::size_t a = 0; a < sel.size(); ++a)
      for (std::size_t b = a + 1; b < sel.size(); ++b)
        if (a != slot && b != slot) rest_key = std::min(rest_key, dist_key(cloud, sel[a], sel[b]));
    std::size_t best_idx = sel[slot];
    double best_val = cur;
    for (std::size_t cidx = 0; cidx < cloud.size(); ++cidx) {
      bool used = false;
      for (std::size_t a = 0; a < sel.size(); ++a)
        if (a != slot && sel[a] == cidx) used = true;
      if (used) continue;
      double v = rest_key;
      for (std::size_t a = 0; a < sel.size(); ++a) {
        if (a == slot) continue;
        v = std::min(v, dist_key(cloud, cidx, sel[a]));
        if (v <= best_val) break;
      }
      if (v > best_val) {
        best_val = v;
        best_idx = cidx;
      }
    }
    if (best_idx != sel[slot]) {
      sel[slot] = best_idx;
      cur = separation_key(sel);
    }
  }

  const double separation = geom::radius_from_key(cur, cloud.p);
  if (witness) {
    witness->dim = cloud.ambient_dim;
    witness->count = sel.size();
    witness->min_separation = separation;
    witness->points.clear();
    for (std::size_t idx : sel) {
      auto pt = cloud.point(idx);
      witness->points.insert(witness->points.end(), pt.begin(), pt.end());
    }
  }
  return separation / 2.0;
}

Net greedy_covering(const PointCloud& cloud, int n) {
  if (cloud.size() == 0) fail(ErrorCode::InvalidArgument, "greedy covering of an empty cloud");
  if (n < 1) fail(ErrorCode::InvalidArgument, "covering needs n >= 1");
  Net net;
  net.dim = cloud.ambient_dim;
  net.center_indices.push_back(start_index(cloud));
  std::vector<double> min_key(cloud.size(), kInf);
  double far_key = 0.0;
  std::size_t far = 0;
  for (;;) {
    const std::size_t last = net.center_indices.back();
    far_key = -1.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      min_key[i] = std::min(min_key[i], dist_key(cloud, i, last));
      if (min_key[i] > far_key) {
        far_key = min_key[i];
        far = i;
      }
    }
    if (static_cast<int>(net.center_indices.size()) >= n || far_key <= 0.0) break;
    net.center_indices.push_back(far);
  }
  net.radius = geom::radius_from_key(std::max(0.0, far_key), cloud.p);
  for (std::size_t idx : net.center_indices) {
    auto pt = cloud.point(idx);
    net.centers.insert(net.centers.end(), pt.begin(), pt.end());
  }
  return net;
}

// ---------------------------------------------------------------------------
// Exact feasibility deciders.

namespace {

enum class Decision { Feasible, Infeasible, Unknown };

struct DecideResult {
  Decision verdict = Decision::Unknown;
  std::vector<std::size_t> witness;  // cloud indices of the centers
};

// Covering of the full boundary circle of a certified euclidean ball by
// <= n balls of radius r centered at cloud points, decided exactly over
// the continuous circle. Arcs are padded outward, so Infeasible is sound
// against every cloud-centered cover; Feasible is validated by the
// caller against the cloud.
DecideResult circle_chain_decide(const PointCloud& cloud, double ring_radius, int n, double r) {
  struct Arc {
    double lo, hi;
    std::size_t idx;
  };
  const double R = ring_radius;
  const double r_eff = r * (1.0 + 1e-12) + 1e-15;
  const double pad = 1e-9;
  std::vector<Arc> arcs;
  arcs.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto pt = cloud.point(i);
    const double rho = std::hypot(pt[0], pt[1]);
    if (rho < 1e-13) {
      if (R <= r_eff) return {Decision::Feasible, {i}};
      continue;
    }
    const double q = (R * R + rho * rho - r_eff * r_eff) / (2.0 * R * rho);
    if (q >= 1.0) continue;
    if (q <= -1.0) return {Decision::Feasible, {i}};
    const double phi = std::atan2(pt[1], pt[0]);
    const double alpha = std::acos(q) + pad;
    arcs.push_back({phi - alpha, phi + alpha, i});
  }
  if (arcs.empty()) return {Decision::Infeasible, {}};

  const double two_pi = 2.0 * 3.14159265358979323846;
  for (Arc& a : arcs) {
    if (a.hi - a.lo >= two_pi) return {Decision::Feasible, {a.idx}};
    while (a.lo < 0.0) {
      a.lo += two_pi;
      a.hi += two_pi;
    }
    while (a.lo >= two_pi) {
      a.lo -= two_pi;
      a.hi -= two_pi;
    }
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    if (a.hi != b.hi) return a.hi > b.hi;
    return a.idx < b.idx;
  });

  const std::size_t m = arcs.size();
  std::vector<double> lo(2 * m), hi(2 * m);
  std::vector<std::size_t> owner(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    lo[i] = arcs[i].lo;
    hi[i] = arcs[i].hi;
    owner[i] = i;
    lo[i + m] = arcs[i].lo + two_pi;
    hi[i + m] = arcs[i].hi + two_pi;
    owner[i + m] = i;
  }
  std::vector<std::size_t> best_upto(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i)
    best_upto[i] = (i == 0 || hi[i] > hi[best_upto[i - 1]]) ? i : best_upto[i - 1];
  auto best_reaching = [&](double x) -> long {
    const auto it = std::upper_bound(lo.begin(), lo.end(), x);
    if (it == lo.begin()) return -1;
    return static_cast<long>(best_upto[static_cast<std::size_t>(it - lo.begin()) - 1]);
  };

  for (std::size_t s = 0; s < m; ++s) {
    double reach = arcs[s].hi;
    const double goal = arcs[s].lo + two_pi;
    std::vector<std::size_t> chain{arcs[s].idx};
    bool ok = reach >= goal;
    while (!ok && static_cast<int>(chain.size()) < n) {
      const long nxt = best_reaching(reach);
      if (nxt < 0 || hi[nxt] <= reach) break;
      reach = hi[nxt];
      chain.push_back(arcs[owner[nxt]].idx);
      ok = reach >= goal;
    }
    if (ok) return {Decision::Feasible, chain};
  }
  return {Decision::Infeasible, {}};
}

// Same idea on a certified symmetric segment [-a, a] in ambient dim 1.
DecideResult line_chain_decide(const PointCloud& cloud, double half_width, int n, double r) {
  const double a = half_width;
  const double r_eff = r * (1.0 + 1e-12) + 1e-15 + 1e-12 * std::max(1.0, a);
  const std::size_t m = cloud.size();
  std::vector<double> xs(m);  // ascending: the cloud is sorted
  for (std::size_t i = 0; i < m; ++i) xs[i] = cloud.point(i)[0];
  std::vector<std::size_t> best_upto(m);
  for (std::size_t i = 0; i < m; ++i)
    best_upto[i] = (i == 0 || xs[i] > xs[best_upto[i - 1]]) ? i : best_upto[i - 1];

  double reach = -a;
  std::vector<std::size_t> chain;
  while (static_cast<int>(chain.size()) < n) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), reach + r_eff);
    if (it == xs.begin()) return {Decision::Infeasible, {}};
    const std::size_t pick = best_upto[static_cast<std::size_t>(it - xs.begin()) - 1];
    const double new_reach = xs[pick] + r_eff;
    if (new_reach <= reach) return {Decision::Infeasible, {}};
    reach = new_reach;
    chain.push_back(pick);
    if (reach >= a) return {Decision::Feasible, chain};
  }
  return {Decision::Infeasible, {}};
}

// Coarse instance for the generic branch and bound: a measured gamma-net
// of the cloud serves as both the point set and the candidate set.
// Distances are recomputed per decision (no stored matrix).
struct CoarseInstance {
  std::vector<std::size_t> net;  // cloud indices
  double gamma = 0.0;            // max distance from any cloud point to the net
};

CoarseInstance build_coarse(const PointCloud& cloud, std::size_t cap) {
  CoarseInstance inst;
  if (cloud.size() <= cap) {
    inst.net.resize(cloud.size());
    std::iota(inst.net.begin(), inst.net.end(), std::size_t{0});
    inst.gamma = 0.0;
  } else {
    Net net = greedy_covering(cloud, static_cast<int>(cap));
    inst.net = net.center_indices;
    std::sort(inst.net.begin(), inst.net.end());
    inst.gamma = net.radius;
  }
  return inst;
}

struct BnbContext {
  std::size_t k = 0;
  int n = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> cover;  // per candidate: mask of covered points
  std::vector<int> coverers;         // per point: number of covering candidates
  std::uint64_t* budget = nullptr;
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
};

bool mask_subset(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

Decision bnb_search(BnbContext& ctx, std::vector<std::uint64_t>& covered,
                    std::size_t covered_cnt) {
  if (*ctx.budget == 0) return Decision::Unknown;
  --*ctx.budget;
  const std::size_t k = ctx.k;
  const std::size_t words = ctx.words;
  if (covered_cnt == k) {
    ctx.best = ctx.chosen;
    return Decision::Feasible;
  }
  if (static_cast<int>(ctx.chosen.size()) == ctx.n) return Decision::Infeasible;

  std::size_t pivot = k;
  int pivot_cnt = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < k; ++i) {
    if (covered[i / 64] >> (i % 64) & 1) continue;
    if (ctx.coverers[i] < pivot_cnt) {
      pivot_cnt = ctx.coverers[i];
      pivot = i;
    }
  }
  if (pivot == k) {
    ctx.best = ctx.chosen;
    return Decision::Feasible;
  }

  struct Cand {
    std::size_t idx;
    std::size_t gain;
  };
  std::vector<Cand> cands;
  for (std::size_t c = 0; c < k; ++c) {
    if (!(ctx.cover[c * words + pivot / 64] >> (pivot % 64) & 1)) continue;
    std::size_t gain = 0;
    for (std::size_t w = 0; w < words; ++w)
      gain += static_cast<std::size_t>(std::popcount(ctx.cover[c * words + w] & ~covered[w]));
    cands.push_back({c, gain});
  }
  if (cands.empty()) return Decision::Infeasible;
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.idx < b.idx;
  });

  bool any_unknown = false;
  std::vector<std::uint64_t> kept_news;  // dominance among tried siblings
  std::size_t kept = 0;
  std::vector<std::uint64_t> next(words), news(words);
  for (const Cand& cand : cands) {
    std::size_t add = 0;
    for (std::size_t w = 0; w < words; ++w) {
      news[w] = ctx.cover[cand.idx * words + w] & ~covered[w];
      next[w] = covered[w] | ctx.cover[cand.idx * words + w];
      add += static_cast<std::size_t>(std::popcount(news[w]));
    }
    if (add == 0) continue;
    bool dominated = false;
    for (std::size_t s = 0; s < kept && !dominated; ++s)
      dominated = mask_subset(news.data(), kept_news.data() + s * words, words);
    if (dominated) continue;
    if (kept < 48) {
      kept_news.insert(kept_news.end(), news.begin(), news.end());
      ++kept;
    }
    ctx.chosen.push_back(cand.idx);
    const Decision d = bnb_search(ctx, next, covered_cnt + add);
    ctx.chosen.pop_back();
    if (d == Decision::Feasible) return Decision::Feasible;
    if (d == Decision::Unknown) any_unknown = true;
  }
  return any_unknown ? Decision::Unknown : Decision::Infeasible;
}

DecideResult coarse_bnb_decide(const PointCloud& cloud, const CoarseInstance& inst, int n,
                               double r, std::uint64_t* budget) {
  const std::size_t k = inst.net.size();
  BnbContext ctx;
  ctx.k = k;
  ctx.n = n;
  ctx.words = (k + 63) / 64;
  ctx.budget = budget;
  const double key_pad = geom::key_from_radius(r + 1e-9 * (1.0 + r), cloud.p);
  ctx.cover.assign(k * ctx.words, 0);
  ctx.coverers.assign(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t ci = inst.net[c];
    for (std::size_t i = 0; i < k; ++i) {
      if (dist_key(cloud, ci, inst.net[i]) <= key_pad) {
        ctx.cover[c * ctx.words + i / 64] |= std::uint64_t{1} << (i % 64);
        ++ctx.coverers[i];
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    if (ctx.coverers[i] == 0) return {Decision::Infeasible, {}};

  std::vector<std::uint64_t> covered(ctx.words, 0);
  const Decision d = bnb_search(ctx, covered, 0);
  DecideResult out;
  out.verdict = d;
  if (d == Decision::Feasible)
    for (std::size_t c : ctx.best) out.witness.push_back(inst.net[c]);
  return out;
}

// Bounded best-response descent on a measured cover: each center may move
// to a nearby cloud point when that strictly shrinks the measured radius.
double descend_cover(const PointCloud& cloud, std::vector<std::size_t>& centers,
                     double measured) {
  const std::size_t n = centers.size();
  if (n == 0 || cloud.size() < 2) return measured;
  const int sweeps = 2;
  const std::size_t cand_cap = 96;
  double cur_key = geom::key_from_radius(measured, cloud.p);
  std::vector<double> other(cloud.size());
  std::vector<std::pair<double, std::size_t>> near(cloud.size());
  for (int s = 0; s < sweeps; ++s) {
    bool improved = false;
    for (std::size_t slot = 0; slot < n; ++slot) {
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        double v = kInf;
        for (std::size_t c = 0; c < n; ++c)
          if (c != slot) v = std::min(v, dist_key(cloud, i, centers[c]));
        other[i] = v;
      }
      for (std::size_t i = 0; i < cloud.size(); ++i)
        near[i] = {dist_key(cloud, i, centers[slot]), i};
      const std::size_t take = std::min(cand_cap, near.size());
      std::partial_sort(near.begin(), near.begin() + take, near.end());
      std::size_t best_idx = centers[slot];
      double best_key = cur_key;
      for (std::size_t t = 0; t < take; ++t) {
        const std::size_t cand = near[t].second;
        double worst = 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
          const double v = std::min(other[i], dist_key(cloud, i, cand));
          worst = std::max(worst, v);
          if (worst >= best_key) break;
        }
        if (worst < best_key) {
          best_key = worst;
          best_idx = cand;
        }
      }
      if (best_idx != centers[slot]) {
        centers[slot] = best_idx;
        cur_key = best_key;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return geom::radius_from_key(cur_key, cloud.p);
}

EntropyBracket refine_impl(const PointCloud& cloud, int n, const EntropyBracket& start,
                           const RefineOptions& opts, const CoarseInstance* shared_coarse) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "refine needs n >= 1");
  if (n > 16) fail(ErrorCode::Capability, "refine supports n <= 16");
  if (cloud.size() > 50'000)
    fail(ErrorCode::Capability, "refine supports clouds up to 50000 points");
  if (cloud.ambient_dim > 4) fail(ErrorCode::Capability, "refine supports real dimension <= 4");
  if (cloud.size() == 0) fail(ErrorCode::InvalidArgument, "refine on an empty cloud");

  EntropyBracket out = start;
  out.n = n;
  const double eta = cloud.density;
  out.eta = eta;
  const bool p2 = cloud.p.is_two();
  // Infeasibility of a cloud-centered cover of the cloud at radius r
  // pushes the entropy lower bound to r - eta for p = 2 (nonexpansive
  // projection recentering) and (r - eta)/2 in general.
  auto lower_from_infeasible = [&](double r) {
    const double v = p2 ? r - eta : (r - eta) / 2.0;
    return std::max(0.0, v);
  };

  Net greedy = greedy_covering(cloud, n);
  std::vector<std::size_t> best_centers = greedy.center_indices;
  double r_yes = greedy.radius;
  if (out.upper_witness && !out.upper_witness->center_indices.empty() &&
      out.upper_witness->radius < r_yes) {
    best_centers = out.upper_witness->center_indices;
    r_yes = out.upper_witness->radius;
  }
  double r_no = std::max(0.0, out.lower - eta);

  const bool circle_mode = cloud.shape == SetShape::EuclideanBall && cloud.ambient_dim == 2 && p2;
  const bool line_mode = cloud.shape == SetShape::SymmetricSegment && cloud.ambient_dim == 1;
  const bool chain_mode = circle_mode || line_mode;

  std::uint64_t budget = opts.node_budget;
  CoarseInstance local_coarse;
  const CoarseInstance* coarse = shared_coarse;
  auto ensure_coarse = [&]() {
    if (!coarse) {
      local_coarse = build_coarse(cloud, 2048);
      coarse = &local_coarse;
    }
  };

  const double stop =
      std::max(chain_mode ? opts.requested_eta / 64.0 : opts.requested_eta / 2.0,
               1e-9 * std::max(1.0, r_yes));
  double pa = r_no, pb = r_yes;
  bool truncated = false;
  for (int iter = 0; iter < 48 && pb - pa > stop; ++iter) {
    const double r = 0.5 * (pa + pb);
    bool resolved = false;
    if (chain_mode) {
      const DecideResult d = circle_mode
                                 ? circle_chain_decide(cloud, cloud.shape_radius, n, r)
                                 : line_chain_decide(cloud, cloud.shape_radius, n, r);
      if (d.verdict == Decision::Infeasible) {
        r_no = std::max(r_no, r);
        pa = r;
        resolved = true;
      } else if (d.verdict == Decision::Feasible) {
        std::vector<std::size_t> centers = d.witness;
        const double meas = measure_cover_radius(cloud, centers);
        if (meas < r_yes) {
          r_yes = meas;
          best_centers = centers;
        }
        if (meas <= r * (1.0 + 1e-12)) {
          pb = std::min(pb, r);
          resolved = true;
        }
        // Boundary covered but not the whole cloud: defer to the generic
        // decider at this radius.
      }
    }
    if (!resolved) {
      if (budget == 0) {
        truncated = true;
        break;
      }
      ensure_coarse();
      const DecideResult d = coarse_bnb_decide(cloud, *coarse, n, r, &budget);
      if (d.verdict == Decision::Feasible) {
        std::vector<std::size_t> centers = d.witness;
        const double meas = measure_cover_radius(cloud, centers);
        if (meas < r_yes) {
          r_yes = meas;
          best_centers = centers;
        }
        pb = r;
      } else if (d.verdict == Decision::Infeasible) {
        r_no = std::max(r_no, r - coarse->gamma);
        pa = r;
      } else {
        truncated = true;
        pa = r;  // probe upward; no certificate consumed
      }
    }
  }

  const double polished = descend_cover(cloud, best_centers, r_yes);
  r_yes = std::min(r_yes, polished);

  out.lower = std::max(out.lower, lower_from_infeasible(r_no));
  out.upper = std::min(out.upper, r_yes + eta);
  if (out.lower > out.upper) out.lower = out.upper;  // certified bounds; fp slack only
  out.truncated_search = out.truncated_search || truncated;
  out.methods.push_back(chain_mode ? (circle_mode ? "chain-circle" : "chain-segment")
                                   : "branch-bound");
  Net refined;
  refined.dim = cloud.ambient_dim;
  refined.center_indices = best_centers;
  refined.radius = r_yes;
  for (std::size_t idx : best_centers) {
    auto pt = cloud.point(idx);
    refined.centers.insert(refined.centers.end(), pt.begin(), pt.end());
  }
  out.upper_witness = std::move(refined);
  return out;
}

}  // namespace

EntropyBracket exact_covering_refine(const PointCloud& cloud, int n, const EntropyBracket& start,
                                     const RefineOptions& opts) {
  return refine_impl(cloud, n, start, opts, nullptr);
}

// ---------------------------------------------------------------------------
// The composed oracle.

namespace {

struct CloudKey {
  int dim;
  double p;
  int field;
  double target;
  std::size_t budget;
  bool operator<(const CloudKey& o) const {
    return std::tie(dim, p, field, target, budget) <
           std::tie(o.dim, o.p, o.field, o.target, o.budget);
  }
};

const geom::BallCloud* cached_ball(int dim, PNorm p, Field field, double target,
                                   std::size_t budget) {
  static std::map<CloudKey, std::unique_ptr<geom::BallCloud>>* cache =
      new std::map<CloudKey, std::unique_ptr<geom::BallCloud>>();
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  CloudKey key{dim, p.value(), static_cast<int>(field), target, budget};
  auto it = cache->find(key);
  if (it == cache->end()) {
    auto ball = std::make_unique<geom::BallCloud>(
        geom::discretize_unit_ball(dim, p, field, target, {budget, false}));
    it = cache->emplace(key, std::move(ball)).first;
  }
  return it->second.get();
}

// Image clouds and their coarse nets are reused across ball budgets n for
// the same operator; a small deterministic cache keyed by the operator
// bytes and the shared ball cloud.
struct ImageEntry {
  std::shared_ptr<const PointCloud> image;
  std::shared_ptr<CoarseInstance> coarse;  // may be null until needed
};

std::string op_digest(const linop::DenseOperator& op, const geom::BallCloud* ball) {
  std::string key;
  key.reserve(op.a.size() * sizeof(linop::cplx) + 64);
  auto push = [&key](const void* ptr, std::size_t len) {
    key.append(static_cast<const char*>(ptr), len);
  };
  const double pv = op.p.value();
  const int f = static_cast<int>(op.field);
  push(&op.rows, sizeof op.rows);
  push(&op.cols, sizeof op.cols);
  push(&pv, sizeof pv);
  push(&f, sizeof f);
  push(op.a.data(), op.a.size() * sizeof(linop::cplx));
  const auto addr = reinterpret_cast<std::uintptr_t>(ball);
  push(&addr, sizeof addr);
  return key;
}

std::shared_ptr<ImageEntry> cached_image(const linop::DenseOperator& op,
                                         const geom::BallCloud* ball, double norm_upper) {
  static std::map<std::string, std::shared_ptr<ImageEntry>>* cache =
      new std::map<std::string, std::shared_ptr<ImageEntry>>();
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const std::string key = op_digest(op, ball);
  auto it = cache->find(key);
  if (it == cache->end()) {
    if (cache->size() >= 12) cache->clear();  // entries stay alive via shared_ptr
    auto entry = std::make_shared<ImageEntry>();
    entry->image = std::make_shared<PointCloud>(geom::image_cloud(op, ball->cloud, norm_upper));
    it = cache->emplace(key, std::move(entry)).first;
  }
  return it->second;
}

linop::DenseOperator canonical_diagonal(const linop::DenseOperator& op,
                                        const std::vector<double>& moduli) {
  std::vector<double> sigma;
  for (double s : moduli)
    if (s > 0.0) sigma.push_back(s);
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  if (sigma.empty()) sigma.push_back(0.0);
  const int m = static_cast<int>(sigma.size());
  linop::DenseOperator canon{op.field, m, m, op.p,
                             std::vector<linop::cplx>(static_cast<std::size_t>(m) * m)};
  for (int i = 0; i < m; ++i) canon.at(i, i) = sigma[static_cast<std::size_t>(i)];
  return canon;
}

}  // namespace

EntropyBracket entropy_bracket(const linop::DenseOperator& op, int n, double eta, Effort effort,
                               const BracketOptions& opts) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "entropy bracket needs n >= 1");
  if (!(eta > 0.0)) fail(ErrorCode::InvalidArgument, "eta must be positive");

  EntropyBracket out;
  out.n = n;
  double lower = 0.0;
  double upper = kInf;

  const norms::NormBracket nb = norms::operator_norm(op);
  if (n == 1) {
    lower = std::max(lower, nb.lower);
    out.methods.push_back("first-entropy-norm");
  } else {
    out.methods.push_back("norm-cap");
  }
  upper = std::min(upper, nb.upper);

  const auto moduli = op.diagonal_moduli();
  if (moduli && !op.p.is_inf()) {
    // The matrix is the tail-0 diagonal operator on its weights: the
    // closed-form sandwich brackets it directly.
    std::vector<double> sigma = *moduli;
    std::sort(sigma.begin(), sigma.end(), std::greater<double>());
    const auto spec = linop::make_diagonal_spec(sigma, 0.0, op.p, op.field);
    const auto dv = bounds::delta(spec, n, 1e-12);
    lower = std::max(lower, dv.value);
    upper = std::min(upper, 4.0 * (dv.value + dv.tolerance));
    out.methods.push_back("volume-lower");
    out.methods.push_back("diagonal-sandwich");
  }

  const linop::DenseOperator* cloud_op = &op;
  linop::DenseOperator canon;
  if (moduli) {
    canon = canonical_diagonal(op, *moduli);
    cloud_op = &canon;
  }
  const bool dims_ok = cloud_op->real_cols() <= 4 && cloud_op->real_rows() <= 4;
  if (!dims_ok && n > 1)
    fail(ErrorCode::Capability,
         "entropy oracle supports realified dimensions <= 4 (the norm route covers n = 1 only)");

  if (dims_ok) {
    // Snapped down to a half-octave ladder: requesting a finer-or-equal
    // density never weakens a certificate and lets operators with nearby
    // norms share one cached ball cloud.
    const double raw_target = eta / std::max(nb.upper, 1e-12);
    const double ball_target =
        std::clamp(std::exp2(std::floor(2.0 * std::log2(raw_target)) / 2.0), 1e-6, 10.0);
    const geom::BallCloud* ball =
        cached_ball(cloud_op->cols, cloud_op->p, cloud_op->field, ball_target, opts.cloud_budget);
    auto entry = cached_image(*cloud_op, ball, nb.upper);
    const PointCloud& img = *entry->image;
    out.eta = img.density;

    PackingWitness pw;
    const double pack = packing_lower_bound(img, n, &pw);
    if (pack > lower) lower = pack;
    out.methods.push_back("packing");
    if (opts.witnesses && pw.count > 0) out.lower_witness = std::move(pw);

    Net net = greedy_covering(img, n);
    upper = std::min(upper, net.radius + img.density);
    out.methods.push_back("greedy-cover");

    if (effort == Effort::Exact && n <= 16) {
      const bool chain_ok =
          (img.shape == SetShape::EuclideanBall && img.ambient_dim == 2 && img.p.is_two()) ||
          (img.shape == SetShape::SymmetricSegment && img.ambient_dim == 1);
      if (!chain_ok && !entry->coarse)
        entry->coarse = std::make_shared<CoarseInstance>(build_coarse(img, 2048));
      EntropyBracket seed;
      seed.n = n;
      seed.lower = lower;
      seed.upper = upper;
      seed.eta = img.density;
      seed.upper_witness = net;
      RefineOptions ropts;
      ropts.node_budget = opts.node_budget;
      ropts.requested_eta = eta;
      EntropyBracket refined = refine_impl(img, n, seed, ropts, entry->coarse.get());
      lower = std::max(lower, refined.lower);
      upper = std::min(upper, refined.upper);
      out.truncated_search = refined.truncated_search;
      out.methods.push_back("exact-refine");
      for (const auto& m : refined.methods)
        if (m == "chain-circle" || m == "chain-segment" || m == "branch-bound")
          out.methods.push_back(m);
      if (opts.witnesses) out.upper_witness = std::move(refined.upper_witness);
    } else if (opts.witnesses) {
      out.upper_witness = std::move(net);
    }
  }

  if (upper == kInf) upper = nb.upper;
  if (lower > upper) lower = upper;  // certified bounds; fp slack only
  out.lower = lower;
  out.upper = upper;
  return out;
}

}  // namespace epsnum::covering
