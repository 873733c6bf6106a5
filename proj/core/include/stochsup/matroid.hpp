#ifndef STOCHSUP_MATROID_HPP
#define STOCHSUP_MATROID_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace stochsup {

// Sorted, duplicate-free list of ground-set element ids (facility ids).
using ElementSet = std::vector<int>;

/// A matroid on the ground set {0, ..., ground_size - 1}.
///
/// Three representations are supported: uniform matroids U(k, m), partition
/// matroids (elements outside every block are unconstrained) and explicit
/// small matroids given by their full independence table (ground <= 20).
/// The class is a cheap-to-copy value type; explicit tables are shared.
class Matroid {
 public:
  enum class Kind { Uniform, Partition, ExplicitSmall };

  static constexpr int kMaxExplicitGround = 20;

  static Matroid uniform(int ground_size, int rank);
  // Free matroid: every subset independent.
  static Matroid free(int ground_size) { return uniform(ground_size, ground_size); }
  // block_of[i] is the block index of element i, or -1 for unconstrained.
  static Matroid partition(std::vector<int> block_of, std::vector<int> capacities);
  static Matroid partition_from_blocks(int ground_size,
                                       const std::vector<ElementSet>& blocks,
                                       std::vector<int> capacities);
  // Independent sets are the subsets of the given bases. Throws
  // ValidationError unless the downward closure is a matroid.
  static Matroid explicit_from_bases(int ground_size, const std::vector<ElementSet>& bases);
  // independent has 2^ground_size entries indexed by subset bitmask.
  static Matroid explicit_from_table(int ground_size, std::vector<bool> independent);

  Kind kind() const { return kind_; }
  int ground_size() const { return ground_size_; }

  int rank(std::span<const int> subset) const;
  bool is_independent(std::span<const int> subset) const;

  // Uniform only.
  int uniform_rank() const { return uniform_rank_; }
  // Partition only.
  const std::vector<int>& block_of() const { return block_of_; }
  const std::vector<int>& capacities() const { return capacities_; }
  // ExplicitSmall only: maximal independent sets, sorted.
  std::vector<ElementSet> bases() const;

  /// Rank rows sum_{i in U} z_i <= r(U) that, together with 0 <= z <= 1,
  /// describe the matroid polytope exactly. Uniform and partition matroids
  /// need one row per capacity-bound block; explicit matroids list every
  /// rank-deficient subset.
  struct RankRow {
    ElementSet subset;
    int rank = 0;
  };
  std::vector<RankRow> polytope_rows() const;

 private:
  Matroid() = default;
  static std::uint32_t mask_of(std::span<const int> subset, int ground_size);

  Kind kind_ = Kind::Uniform;
  int ground_size_ = 0;
  int uniform_rank_ = 0;
  std::vector<int> block_of_;
  std::vector<int> capacities_;
  // Explicit: rank of every subset, indexed by bitmask.
  std::shared_ptr<const std::vector<std::uint8_t>> rank_table_;
};

/// A violated rank constraint: z(subset) > rank + tolerance.
struct RankCut {
  ElementSet subset;
  int rank = 0;
  double violation = 0.0;
};

/// Returns the most violated rank constraint for the fractional point z, or
/// nullopt when z lies in the matroid polytope (up to tolerance).
std::optional<RankCut> separate_matroid_polytope(const Matroid& matroid,
                                                 std::span<const double> z,
                                                 double tolerance = 1e-7);

/// Multi-knapsack system: sum_{i in S} weights[l][i] <= budgets[l] for all l.
struct KnapsackSystem {
  static constexpr std::int64_t kDefaultTableCap = 10'000'000;

  std::vector<std::vector<std::int64_t>> weights;  // [L][m]
  std::vector<std::int64_t> budgets;               // [L]

  int num_constraints() const { return static_cast<int>(budgets.size()); }
  // prod_l (W_l + 1), saturating at INT64_MAX.
  std::int64_t table_size() const;
  bool is_feasible(std::span<const int> subset) const;
  void validate(int ground_size) const;
};

enum class IntersectionMethod { AugmentingPath, Exhaustive };

struct PsiResult {
  ElementSet chosen;
  double psi = 0.0;
};

/// Psi(S) = sum_{j} ( w(S cap G_j) + max(0, 1 - |S cap G_j|) * t_j ) over
/// the (disjoint) balls G_j of the representatives.
double psi_value(std::span<const ElementSet> balls, std::span<const double> facility_weights,
                 std::span<const double> penalties, std::span<const int> chosen);

/// Exact minimizer of Psi over independent sets of the matroid, computed as a
/// minimum-weight common independent set of the matroid and the partition
/// matroid {|S cap G_j| <= 1}.
PsiResult minimize_psi_matroid(const Matroid& matroid, std::span<const ElementSet> balls,
                               std::span<const double> facility_weights,
                               std::span<const double> penalties,
                               IntersectionMethod method = IntersectionMethod::AugmentingPath);

/// Exact minimizer of Psi over knapsack-feasible sets picking at most one
/// facility per ball, by dynamic programming over residual capacity vectors.
/// Throws TableCapExceeded when prod_l (W_l + 1) exceeds table_cap.
PsiResult minimize_psi_knapsack(const KnapsackSystem& system, std::span<const ElementSet> balls,
                                std::span<const double> facility_weights,
                                std::span<const double> penalties,
                                std::int64_t table_cap = KnapsackSystem::kDefaultTableCap);

/// Minimum-weight common independent set of two matroids on the same ground
/// set. Items with nonnegative weight are never selected.
ElementSet min_weight_common_independent(const Matroid& first, const Matroid& second,
                                         std::span<const double> weights,
                                         IntersectionMethod method = IntersectionMethod::AugmentingPath);

}  // namespace stochsup

#endif  // STOCHSUP_MATROID_HPP
