#include "dcx/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "dcx/errors.hpp"
#include "dcx/rng.hpp"

namespace dcx {

// ---------------------------------------------------------------------------
// Two-sample statistics
// ---------------------------------------------------------------------------

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;

  constexpr int kMaxTerms = 100;
  constexpr double kTail = 1e-10;

  if (lambda < 1.18) {
    // Jacobi theta form converges fast for small lambda; the alternating
    // series does not.
    const double pi = 3.14159265358979323846;
    const double f = std::sqrt(2.0 * pi) / lambda;
    const double q = pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= kMaxTerms; k += 2) {
      const double term = std::exp(-static_cast<double>(k) * k * q);
      cdf += term;
      if (term < kTail) break;
    }
    return std::clamp(1.0 - f * cdf, 0.0, 1.0);
  }

  double sf = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const double term =
        std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
    sf += sign * term;
    sign = -sign;
    if (term < kTail) break;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw DataError("ks_two_sample: both samples must be non-empty");
  }

  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());

  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                             static_cast<double>(j) / n2));
  }

  KsResult result;
  result.statistic = d;
  result.n1 = sa.size();
  result.n2 = sb.size();
  const double n_eff = n1 * n2 / (n1 + n2);
  result.p_value = kolmogorov_sf(std::sqrt(n_eff) * d);
  return result;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw UsageError("incomplete_beta: a and b must be positive");
  }
  if (x < 0.0 || x > 1.0) {
    throw UsageError("incomplete_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  // Continued fraction for I_x(a,b) (modified Lentz).
  auto beta_cf = [](double a_, double b_, double x_) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a_ + b_;
    const double qap = a_ + 1.0;
    const double qam = a_ - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x_ / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
      const double m_ = static_cast<double>(m);
      const double m2 = 2.0 * m_;
      double aa = m_ * (b_ - m_) * x_ / ((qam + m2) * (a_ + m2));
      d = 1.0 + aa * d;
      if (std::abs(d) < kTiny) d = kTiny;
      c = 1.0 + aa / c;
      if (std::abs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a_ + m_) * (qab + m_) * x_ / ((a_ + m2) * (qap + m2));
      d = 1.0 + aa * d;
      if (std::abs(d) < kTiny) d = kTiny;
      c = 1.0 + aa / c;
      if (std::abs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
  };

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  double result;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_cf(a, b, x) / a;
  } else {
    result = 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
  }
  return std::clamp(result, 0.0, 1.0);
}

namespace {

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, n-1 denominator
  std::size_t n = 0;
};

SampleMoments moments(std::span<const double> v) {
  SampleMoments m;
  m.n = v.size();
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  double ss = 0.0;
  for (double x : v) {
    const double dx = x - m.mean;
    ss += dx * dx;
  }
  m.variance = m.n > 1 ? ss / static_cast<double>(m.n - 1) : 0.0;
  return m;
}

}  // namespace

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DataError("welch_t_test: each sample needs at least 2 values");
  }

  const SampleMoments ma = moments(a);
  const SampleMoments mb = moments(b);
  const double va_n = ma.variance / static_cast<double>(ma.n);
  const double vb_n = mb.variance / static_cast<double>(mb.n);
  const double se2 = va_n + vb_n;

  WelchResult result;
  if (se2 == 0.0) {
    // Fully degenerate samples: identical constants on both sides.
    if (ma.mean == mb.mean) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = ma.mean > mb.mean ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    result.df = 0.0;
    return result;
  }

  result.t = (ma.mean - mb.mean) / std::sqrt(se2);
  result.df = se2 * se2 /
              (va_n * va_n / static_cast<double>(ma.n - 1) +
               vb_n * vb_n / static_cast<double>(mb.n - 1));
  const double x = result.df / (result.df + result.t * result.t);
  result.p = incomplete_beta(result.df / 2.0, 0.5, x);
  return result;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw UsageError("pearson_r: samples must have equal length");
  }
  if (x.size() < 2) {
    throw DataError("pearson_r: need at least 2 points");
  }

  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateSampleError("pearson_r: zero variance sample");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Procedural patterns
// ---------------------------------------------------------------------------

std::pair<int, int> turn_count_bounds(const Corpus& corpus, double low_pct,
                                      double high_pct) {
  if (corpus.dialogs.empty()) {
    throw EmptyCorpusError("turn_count_bounds: empty corpus");
  }
  if (low_pct < 0.0 || high_pct > 100.0 || low_pct > high_pct) {
    throw UsageError("percentile bounds must satisfy 0 <= low <= high <= 100");
  }

  std::vector<int> counts;
  counts.reserve(corpus.dialogs.size());
  for (const Dialog& d : corpus.dialogs) counts.push_back(d.turn_count());
  std::sort(counts.begin(), counts.end());

  const auto n = static_cast<double>(counts.size());
  auto nearest_rank = [&](double pct) {
    if (pct <= 0.0) return counts.front();
    const auto rank =
        static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    return counts[std::min(rank, counts.size()) - 1];
  };
  return {nearest_rank(low_pct), nearest_rank(high_pct)};
}

Corpus trim_by_turn_bounds(const Corpus& corpus, int low, int high) {
  Corpus trimmed;
  trimmed.domain = corpus.domain;
  trimmed.role_mode = corpus.role_mode;
  for (const Dialog& d : corpus.dialogs) {
    if (d.turn_count() >= low && d.turn_count() <= high) {
      trimmed.dialogs.push_back(d);
    }
  }
  if (trimmed.dialogs.empty()) {
    throw OverTrimmedError("turn trimming removed every dialog");
  }
  return trimmed;
}

Corpus trim_by_turn_percentile(const Corpus& corpus, double low_pct,
                               double high_pct) {
  const auto [low, high] = turn_count_bounds(corpus, low_pct, high_pct);
  return trim_by_turn_bounds(corpus, low, high);
}

BasketProfile basket_profile(const Dialog& d, const Lexicon& lexicon,
                             const ComplexityConfig& config, int n_baskets) {
  if (n_baskets < 1) {
    throw UsageError("basket_profile: n_baskets must be at least 1");
  }
  const int n_turns = d.turn_count();
  if (n_turns < n_baskets) {
    throw TooShortError("basket_profile: dialog \"" + d.id + "\" has " +
                        std::to_string(n_turns) + " turns, needs at least " +
                        std::to_string(n_baskets));
  }

  BasketProfile profile;
  profile.dialog_id = d.id;
  std::vector<double> sums(static_cast<std::size_t>(n_baskets), 0.0);
  std::vector<int> sizes(static_cast<std::size_t>(n_baskets), 0);
  for (int i = 0; i < n_turns; ++i) {
    const auto basket = static_cast<std::size_t>(
        static_cast<long long>(i) * n_baskets / n_turns);
    sums[basket] += weighted_turn_complexity(d.turns[static_cast<std::size_t>(i)],
                                             lexicon, config);
    ++sizes[basket];
  }
  profile.values.reserve(sums.size());
  for (std::size_t b = 0; b < sums.size(); ++b) {
    profile.values.push_back(sums[b] / static_cast<double>(sizes[b]));
  }
  return profile;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct RestartOutcome {
  std::vector<std::vector<double>> centroids;
  std::vector<int> assignments;
  double inertia = 0.0;
  std::vector<double> inertia_trace;
};

RestartOutcome run_restart(const std::vector<std::vector<double>>& points,
                           int k, int max_iter, std::uint64_t seed) {
  const std::size_t n = points.size();
  const std::size_t kk = static_cast<std::size_t>(k);
  Rng rng(seed);

  // k-means++ seeding.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(kk);
  centroids.push_back(points[rng.next_below(n)]);
  std::vector<double> d2(n, 0.0);
  while (centroids.size() < kk) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = sq_dist(points[i], centroids[0]);
      for (std::size_t c = 1; c < centroids.size(); ++c) {
        best = std::min(best, sq_dist(points[i], centroids[c]));
      }
      d2[i] = best;
      total += best;
    }
    if (total == 0.0) {
      centroids.push_back(points[rng.next_below(n)]);
      continue;
    }
    const double target = rng.next_double() * total;
    double cumulative = 0.0;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      cumulative += d2[i];
      if (cumulative >= target) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(points[chosen]);
  }

  RestartOutcome out;
  out.centroids = std::move(centroids);
  out.assignments.assign(n, -1);

  std::vector<int> previous(n, -1);
  std::vector<double> assigned_d2(n, 0.0);

  for (int iter = 0; iter < max_iter; ++iter) {
    // Assignment step.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best_c = 0;
      double best_d = sq_dist(points[i], out.centroids[0]);
      for (std::size_t c = 1; c < kk; ++c) {
        const double d = sq_dist(points[i], out.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best_c = static_cast<int>(c);
        }
      }
      out.assignments[i] = best_c;
      assigned_d2[i] = best_d;
      inertia += best_d;
    }

    if (!out.inertia_trace.empty() &&
        inertia > out.inertia_trace.back() * (1.0 + 1e-12) + 1e-12) {
      throw Error("kmeans: inertia increased across an iteration");
    }
    out.inertia_trace.push_back(inertia);
    out.inertia = inertia;

    if (out.assignments == previous) break;
    previous = out.assignments;

    // Update step.
    const std::size_t dim = points[0].size();
    std::vector<std::vector<double>> sums(kk, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(out.assignments[i]);
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += points[i][j];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        out.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
      }
    }
    // Empty-cluster repair: reseed with the point farthest from its centroid.
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] != 0) continue;
      std::size_t farthest = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (assigned_d2[i] > assigned_d2[farthest]) farthest = i;
      }
      out.centroids[c] = points[farthest];
      assigned_d2[farthest] = 0.0;
    }
  }
  return out;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points,
                    const KmeansParams& params) {
  if (params.k < 1) throw UsageError("kmeans: k must be at least 1");
  if (params.max_iter < 1) {
    throw UsageError("kmeans: max_iter must be at least 1");
  }
  if (params.n_restarts < 1) {
    throw UsageError("kmeans: n_restarts must be at least 1");
  }
  if (points.size() < static_cast<std::size_t>(params.k)) {
    throw DataError("kmeans: " + std::to_string(points.size()) +
                    " points cannot form " + std::to_string(params.k) +
                    " clusters");
  }
  const std::size_t dim = points[0].size();
  if (dim == 0) throw DataError("kmeans: zero-dimensional points");
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw DataError("kmeans: points have inconsistent dimensions");
    }
  }

  const auto n_restarts = static_cast<std::size_t>(params.n_restarts);
  std::vector<RestartOutcome> outcomes(n_restarts);
  std::vector<std::exception_ptr> failures(n_restarts);

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(n_restarts, hw);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < n_restarts;
         r = next.fetch_add(1)) {
      try {
        outcomes[r] = run_restart(points, params.k, params.max_iter,
                                  derive_seed(params.seed, r));
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < n_restarts; ++r) {
    if (outcomes[r].inertia < outcomes[best].inertia) best = r;
  }

  KmeansResult result;
  result.centroids = std::move(outcomes[best].centroids);
  result.assignments = std::move(outcomes[best].assignments);
  result.inertia = outcomes[best].inertia;
  result.inertia_trace = std::move(outcomes[best].inertia_trace);
  result.best_restart = static_cast<int>(best);
  return result;
}

ProceduralSignature procedural_signatures(const Corpus& corpus,
                                          const Lexicon& lexicon,
                                          const ComplexityConfig& config,
                                          const SignatureParams& params) {
  const Corpus trimmed =
      trim_by_turn_percentile(corpus, params.trim_low_pct, params.trim_high_pct);

  ProceduralSignature signature;
  signature.n_baskets = params.n_baskets;

  std::vector<std::vector<double>> points;
  std::vector<std::string> ids;
  for (const Dialog& d : trimmed.dialogs) {
    if (d.turn_count() < params.n_baskets) {
      ++signature.dialogs_too_short;
      continue;
    }
    BasketProfile profile = basket_profile(d, lexicon, config, params.n_baskets);
    points.push_back(std::move(profile.values));
    ids.push_back(d.id);
  }
  if (points.size() < static_cast<std::size_t>(params.k)) {
    throw DataError("procedural_signatures: only " +
                    std::to_string(points.size()) +
                    " basketable dialogs for k = " + std::to_string(params.k));
  }

  KmeansParams kp;
  kp.k = params.k;
  kp.seed = params.seed;
  kp.max_iter = params.max_iter;
  kp.n_restarts = params.n_restarts;
  KmeansResult clusters = kmeans(points, kp);

  // Stable reporting order: clusters sorted by centroid trajectory.
  std::vector<std::size_t> order(clusters.centroids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clusters.centroids[a] < clusters.centroids[b];
  });
  std::vector<int> relabel(order.size());
  for (std::size_t new_c = 0; new_c < order.size(); ++new_c) {
    relabel[order[new_c]] = static_cast<int>(new_c);
    signature.centroids.push_back(std::move(clusters.centroids[order[new_c]]));
  }

  signature.assignments.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    signature.assignments.emplace_back(
        ids[i], relabel[static_cast<std::size_t>(clusters.assignments[i])]);
  }
  signature.inertia = clusters.inertia;
  signature.dialogs_clustered = ids.size();
  return signature;
}

// ---------------------------------------------------------------------------
// Group comparisons
// ---------------------------------------------------------------------------

RoleComplexityTable role_complexity(const Corpus& corpus, const Lexicon& lexicon,
                                    const ComplexityConfig& config) {
  if (corpus.role_mode != RoleMode::two_role) {
    throw UsageError(
        "role complexity needs a two-role corpus; single-role corpora have no "
        "agent/customer split");
  }
  if (corpus.dialogs.empty()) {
    throw EmptyCorpusError("role_complexity: empty corpus");
  }

  std::map<Role, std::pair<double, std::size_t>> sums;
  for (const Dialog& d : corpus.dialogs) {
    for (const Turn& t : d.turns) {
      for (const Utterance& u : t.utterances) {
        auto& [sum, count] = sums[u.role];
        sum += utterance_complexity(u, lexicon, config);
        ++count;
      }
    }
  }

  RoleComplexityTable table;
  for (const auto& [role, acc] : sums) {
    table[role] = RoleStats{acc.second, acc.first / static_cast<double>(acc.second)};
  }
  return table;
}

GroupComparison group_mean_comparison(
    const std::map<std::string, std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw DataError("group_mean_comparison: need at least 2 groups");
  }
  for (const auto& [label, sample] : groups) {
    if (sample.size() < 2) {
      throw DataError("group_mean_comparison: group \"" + label +
                      "\" needs at least 2 values");
    }
  }

  GroupComparison comparison;
  for (const auto& [label, sample] : groups) {
    const SampleMoments m = moments(sample);
    comparison.groups.push_back(GroupSummary{label, m.n, m.mean});
  }
  for (auto it_a = groups.begin(); it_a != groups.end(); ++it_a) {
    for (auto it_b = std::next(it_a); it_b != groups.end(); ++it_b) {
      const WelchResult w = welch_t_test(it_a->second, it_b->second);
      comparison.tests.push_back(
          PairwiseTest{it_a->first, it_b->first, w.t, w.p});
    }
  }
  return comparison;
}

}  // namespace dcx
