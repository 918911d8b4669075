#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcx/complexity.hpp"
#include "dcx/corpus.hpp"
#include "dcx/lexicon.hpp"

namespace dcx {

// ---------------------------------------------------------------------------
// Two-sample statistics
// ---------------------------------------------------------------------------

struct KsResult {
  double statistic = 0.0;  // sup |ECDF1 - ECDF2|
  double p_value = 1.0;    // asymptotic Kolmogorov distribution, two-sided
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Exact ECDF supremum via a merged sort; p-value from the asymptotic
/// Kolmogorov distribution with effective n = n1*n2/(n1+n2).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Survival function of the Kolmogorov distribution, series truncated at 100
/// terms or a 1e-10 tail.
double kolmogorov_sf(double lambda);

struct WelchResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;  // Welch-Satterthwaite degrees of freedom
};

/// Unequal-variance t-test, two-sided. Both samples fully degenerate with
/// equal means yields t = 0, p = 1.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Product-moment correlation. Throws DegenerateSampleError on zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete beta function I_x(a, b) (continued fraction).
double incomplete_beta(double a, double b, double x);

// ---------------------------------------------------------------------------
// Procedural patterns
// ---------------------------------------------------------------------------

/// Nearest-rank percentile values of the turn-count distribution; low_pct = 0
/// returns the minimum so (0, 100) bounds are the identity filter.
std::pair<int, int> turn_count_bounds(const Corpus& corpus, double low_pct,
                                      double high_pct);

/// Keeps dialogs whose turn count lies in [low, high], bounds inclusive.
Corpus trim_by_turn_bounds(const Corpus& corpus, int low, int high);

/// Drops dialogs in the highest and lowest percentiles by turn count.
Corpus trim_by_turn_percentile(const Corpus& corpus, double low_pct = 15.0,
                               double high_pct = 85.0);

struct BasketProfile {
  std::string dialog_id;
  std::vector<double> values;  // mean turn complexity per basket
};

/// Evenly divides the dialog's turns into n_baskets: turn i maps to basket
/// floor(i * n / turn_count). Requires turn_count >= n_baskets so every basket
/// is non-empty.
BasketProfile basket_profile(const Dialog& d, const Lexicon& lexicon,
                             const ComplexityConfig& config, int n_baskets = 5);

struct KmeansParams {
  int k = 6;
  std::uint64_t seed = 0;
  int max_iter = 300;
  int n_restarts = 10;
};

struct KmeansResult {
  std::vector<std::vector<double>> centroids;
  std::vector<int> assignments;       // point index -> cluster
  double inertia = 0.0;               // sum of squared distances
  std::vector<double> inertia_trace;  // per Lloyd iteration of the best restart
  int best_restart = 0;
};

/// Lloyd's algorithm with k-means++ initialization, best of n_restarts by
/// inertia (ties to the lowest restart index). Deterministic given the seed.
/// Empty clusters are repaired by reseeding with the farthest point. Inertia
/// is verified non-increasing every iteration.
KmeansResult kmeans(const std::vector<std::vector<double>>& points,
                    const KmeansParams& params);

struct SignatureParams {
  int n_baskets = 5;
  int k = 6;
  double trim_low_pct = 15.0;
  double trim_high_pct = 85.0;
  std::uint64_t seed = 0;
  int max_iter = 300;
  int n_restarts = 10;
};

struct ProceduralSignature {
  int n_baskets = 5;
  std::vector<std::vector<double>> centroids;  // ordered by first basket value
  std::vector<std::pair<std::string, int>> assignments;  // dialog id -> cluster
  double inertia = 0.0;
  std::size_t dialogs_clustered = 0;
  std::size_t dialogs_too_short = 0;  // post-trim dialogs below n_baskets turns
};

/// Full pipeline: percentile trim, basket profiles, k-means. Post-trim dialogs
/// shorter than n_baskets turns are excluded and counted.
ProceduralSignature procedural_signatures(const Corpus& corpus,
                                          const Lexicon& lexicon,
                                          const ComplexityConfig& config,
                                          const SignatureParams& params = {});

// ---------------------------------------------------------------------------
// Group comparisons
// ---------------------------------------------------------------------------

struct RoleStats {
  std::size_t n = 0;
  double mean = 0.0;
};

using RoleComplexityTable = std::map<Role, RoleStats>;

/// Mean utterance complexity grouped by speaker role. Requires a two-role
/// corpus; roles that never speak are omitted.
RoleComplexityTable role_complexity(const Corpus& corpus, const Lexicon& lexicon,
                                    const ComplexityConfig& config);

struct GroupSummary {
  std::string label;
  std::size_t n = 0;
  double mean = 0.0;
};

struct PairwiseTest {
  std::string a;
  std::string b;
  double t = 0.0;
  double p = 1.0;
};

struct GroupComparison {
  std::vector<GroupSummary> groups;  // label order
  std::vector<PairwiseTest> tests;
};

/// Per-group size and mean plus all pairwise Welch t-tests. Needs at least two
/// groups of at least two samples each.
GroupComparison group_mean_comparison(
    const std::map<std::string, std::vector<double>>& groups);

}  // namespace dcx
