#include "stochsup/matroid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stochsup/errors.hpp"

namespace stochsup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ElementSet bits_to_set(std::uint32_t mask) {
  ElementSet out;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) out.push_back(i);
  }
  return out;
}

}  // namespace

std::uint32_t Matroid::mask_of(std::span<const int> subset, int ground_size) {
  std::uint32_t mask = 0;
  for (int e : subset) {
    if (e < 0 || e >= ground_size) throw ValidationError("matroid element out of range");
    mask |= (1U << e);
  }
  return mask;
}

Matroid Matroid::uniform(int ground_size, int rank) {
  if (ground_size < 0 || rank < 0) throw ValidationError("uniform matroid needs nonnegative size and rank");
  Matroid m;
  m.kind_ = Kind::Uniform;
  m.ground_size_ = ground_size;
  m.uniform_rank_ = std::min(rank, ground_size);
  return m;
}

Matroid Matroid::partition(std::vector<int> block_of, std::vector<int> capacities) {
  for (int c : capacities) {
    if (c < 0) throw ValidationError("partition capacity must be nonnegative");
  }
  for (int b : block_of) {
    if (b < -1 || b >= static_cast<int>(capacities.size())) {
      throw ValidationError("partition block index out of range");
    }
  }
  Matroid m;
  m.kind_ = Kind::Partition;
  m.ground_size_ = static_cast<int>(block_of.size());
  m.block_of_ = std::move(block_of);
  m.capacities_ = std::move(capacities);
  return m;
}

Matroid Matroid::partition_from_blocks(int ground_size, const std::vector<ElementSet>& blocks,
                                       std::vector<int> capacities) {
  if (blocks.size() != capacities.size()) throw ValidationError("partition blocks/caps size mismatch");
  std::vector<int> block_of(static_cast<std::size_t>(ground_size), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int e : blocks[b]) {
      if (e < 0 || e >= ground_size) throw ValidationError("partition element out of range");
      if (block_of[static_cast<std::size_t>(e)] != -1) {
        throw ValidationError("partition blocks must be disjoint");
      }
      block_of[static_cast<std::size_t>(e)] = static_cast<int>(b);
    }
  }
  return partition(std::move(block_of), std::move(capacities));
}

Matroid Matroid::explicit_from_bases(int ground_size, const std::vector<ElementSet>& bases) {
  if (ground_size < 0 || ground_size > kMaxExplicitGround) {
    throw ValidationError("explicit matroid ground set must have at most 20 elements");
  }
  const std::size_t subsets = std::size_t{1} << ground_size;
  std::vector<bool> independent(subsets, false);
  independent[0] = true;
  for (const auto& basis : bases) {
    const std::uint32_t b = mask_of(basis, ground_size);
    // Enumerate all submasks of b.
    for (std::uint32_t s = b;; s = (s - 1) & b) {
      independent[s] = true;
      if (s == 0) break;
    }
  }
  Matroid m = explicit_from_table(ground_size, std::move(independent));
  const int r = m.rank_table_->back();
  for (const auto& basis : bases) {
    if (static_cast<int>(basis.size()) != r) {
      throw ValidationError("listed bases must all have the matroid rank");
    }
  }
  return m;
}

Matroid Matroid::explicit_from_table(int ground_size, std::vector<bool> independent) {
  if (ground_size < 0 || ground_size > kMaxExplicitGround) {
    throw ValidationError("explicit matroid ground set must have at most 20 elements");
  }
  const std::uint32_t subsets = 1U << ground_size;
  if (independent.size() != subsets) throw ValidationError("independence table has wrong size");
  if (!independent[0]) throw ValidationError("empty set must be independent");

  auto ranks = std::make_shared<std::vector<std::uint8_t>>(subsets, 0);
  auto& r = *ranks;
  for (std::uint32_t s = 1; s < subsets; ++s) {
    if (independent[s]) {
      // Downward closure: every one-smaller subset must be independent too.
      for (std::uint32_t rest = s; rest != 0; rest &= rest - 1) {
        const std::uint32_t low = rest & (~rest + 1);
        if (!independent[s ^ low]) throw ValidationError("independence table is not downward closed");
      }
      r[s] = static_cast<std::uint8_t>(std::popcount(s));
    } else {
      std::uint8_t best = 0;
      for (std::uint32_t rest = s; rest != 0; rest &= rest - 1) {
        const std::uint32_t low = rest & (~rest + 1);
        best = std::max(best, r[s ^ low]);
      }
      r[s] = best;
    }
  }
  // Local submodularity r(U+e) + r(U+f) >= r(U+e+f) + r(U) characterizes
  // matroid rank functions among unit-increase monotone ones.
  for (std::uint32_t u = 0; u < subsets; ++u) {
    for (int e = 0; e < ground_size; ++e) {
      const std::uint32_t be = 1U << e;
      if (u & be) continue;
      for (int f = e + 1; f < ground_size; ++f) {
        const std::uint32_t bf = 1U << f;
        if (u & bf) continue;
        if (r[u | be] + r[u | bf] < r[u | be | bf] + r[u]) {
          throw ValidationError("independence system is not a matroid (rank not submodular)");
        }
      }
    }
  }

  Matroid m;
  m.kind_ = Kind::ExplicitSmall;
  m.ground_size_ = ground_size;
  m.rank_table_ = std::move(ranks);
  return m;
}

int Matroid::rank(std::span<const int> subset) const {
  switch (kind_) {
    case Kind::Uniform: {
      ElementSet distinct(subset.begin(), subset.end());
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      return std::min(static_cast<int>(distinct.size()), uniform_rank_);
    }
    case Kind::Partition: {
      std::vector<int> count(capacities_.size(), 0);
      std::vector<bool> seen(static_cast<std::size_t>(ground_size_), false);
      int free_count = 0;
      for (int e : subset) {
        if (e < 0 || e >= ground_size_) throw ValidationError("matroid element out of range");
        if (seen[static_cast<std::size_t>(e)]) continue;
        seen[static_cast<std::size_t>(e)] = true;
        const int b = block_of_[static_cast<std::size_t>(e)];
        if (b < 0) {
          ++free_count;
        } else {
          ++count[static_cast<std::size_t>(b)];
        }
      }
      int total = free_count;
      for (std::size_t b = 0; b < count.size(); ++b) total += std::min(count[b], capacities_[b]);
      return total;
    }
    case Kind::ExplicitSmall:
      return (*rank_table_)[mask_of(subset, ground_size_)];
  }
  return 0;
}

bool Matroid::is_independent(std::span<const int> subset) const {
  ElementSet distinct(subset.begin(), subset.end());
  std::sort(distinct.begin(), distinct.end());
  if (std::adjacent_find(distinct.begin(), distinct.end()) != distinct.end()) return false;
  return rank(distinct) == static_cast<int>(distinct.size());
}

std::vector<ElementSet> Matroid::bases() const {
  std::vector<ElementSet> out;
  if (kind_ != Kind::ExplicitSmall) return out;
  const auto& r = *rank_table_;
  const std::uint32_t subsets = 1U << ground_size_;
  const int full = r[subsets - 1];
  for (std::uint32_t s = 0; s < subsets; ++s) {
    if (std::popcount(s) == full && r[s] == full) out.push_back(bits_to_set(s));
  }
  return out;
}

std::vector<Matroid::RankRow> Matroid::polytope_rows() const {
  std::vector<RankRow> rows;
  switch (kind_) {
    case Kind::Uniform:
      if (uniform_rank_ < ground_size_) {
        ElementSet all(static_cast<std::size_t>(ground_size_));
        std::iota(all.begin(), all.end(), 0);
        rows.push_back({std::move(all), uniform_rank_});
      }
      break;
    case Kind::Partition: {
      std::vector<ElementSet> members(capacities_.size());
      for (int e = 0; e < ground_size_; ++e) {
        const int b = block_of_[static_cast<std::size_t>(e)];
        if (b >= 0) members[static_cast<std::size_t>(b)].push_back(e);
      }
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (capacities_[b] < static_cast<int>(members[b].size())) {
          rows.push_back({members[b], capacities_[b]});
        }
      }
      break;
    }
    case Kind::ExplicitSmall: {
      const auto& r = *rank_table_;
      const std::uint32_t subsets = 1U << ground_size_;
      for (std::uint32_t s = 1; s < subsets; ++s) {
        if (r[s] < std::popcount(s)) rows.push_back({bits_to_set(s), r[s]});
      }
      break;
    }
  }
  return rows;
}

std::optional<RankCut> separate_matroid_polytope(const Matroid& matroid, std::span<const double> z,
                                                 double tolerance) {
  if (static_cast<int>(z.size()) != matroid.ground_size()) {
    throw ValidationError("separation point has wrong dimension");
  }
  const int m = matroid.ground_size();
  switch (matroid.kind()) {
    case Matroid::Kind::Uniform: {
      // With 0 <= z <= 1, only sets larger than k can violate, and the
      // support of z maximizes z(U) - k among those.
      RankCut cut;
      double mass = 0.0;
      for (int i = 0; i < m; ++i) {
        if (z[static_cast<std::size_t>(i)] > 0.0) {
          cut.subset.push_back(i);
          mass += z[static_cast<std::size_t>(i)];
        }
      }
      cut.rank = matroid.rank(cut.subset);
      cut.violation = mass - cut.rank;
      if (cut.violation > tolerance) return cut;
      return std::nullopt;
    }
    case Matroid::Kind::Partition: {
      const auto& caps = matroid.capacities();
      std::vector<ElementSet> support(caps.size());
      std::vector<double> mass(caps.size(), 0.0);
      for (int i = 0; i < m; ++i) {
        const int b = matroid.block_of()[static_cast<std::size_t>(i)];
        if (b < 0 || z[static_cast<std::size_t>(i)] <= 0.0) continue;
        support[static_cast<std::size_t>(b)].push_back(i);
        mass[static_cast<std::size_t>(b)] += z[static_cast<std::size_t>(i)];
      }
      RankCut cut;
      for (std::size_t b = 0; b < caps.size(); ++b) {
        const double excess =
            mass[b] - std::min<double>(static_cast<double>(support[b].size()), caps[b]);
        if (excess > 0.0) {
          cut.subset.insert(cut.subset.end(), support[b].begin(), support[b].end());
          cut.violation += excess;
        }
      }
      std::sort(cut.subset.begin(), cut.subset.end());
      cut.rank = matroid.rank(cut.subset);
      if (cut.violation > tolerance) return cut;
      return std::nullopt;
    }
    case Matroid::Kind::ExplicitSmall: {
      const std::uint32_t subsets = 1U << m;
      double best = tolerance;
      std::optional<RankCut> out;
      for (std::uint32_t s = 1; s < subsets; ++s) {
        ElementSet u = bits_to_set(s);
        double mass = 0.0;
        for (int e : u) mass += z[static_cast<std::size_t>(e)];
        const int r = matroid.rank(u);
        if (mass - r > best) {
          best = mass - r;
          out = RankCut{std::move(u), r, mass - r};
        }
      }
      return out;
    }
  }
  return std::nullopt;
}

std::int64_t KnapsackSystem::table_size() const {
  std::int64_t size = 1;
  for (std::int64_t w : budgets) {
    const std::int64_t factor = w + 1;
    if (factor <= 0 || size > std::numeric_limits<std::int64_t>::max() / factor) {
      return std::numeric_limits<std::int64_t>::max();
    }
    size *= factor;
  }
  return size;
}

bool KnapsackSystem::is_feasible(std::span<const int> subset) const {
  for (std::size_t l = 0; l < budgets.size(); ++l) {
    std::int64_t used = 0;
    for (int i : subset) used += weights[l][static_cast<std::size_t>(i)];
    if (used > budgets[l]) return false;
  }
  return true;
}

void KnapsackSystem::validate(int ground_size) const {
  if (weights.size() != budgets.size()) throw ValidationError("knapsack weights/budgets count mismatch");
  for (std::size_t l = 0; l < budgets.size(); ++l) {
    if (budgets[l] < 0) throw ValidationError("knapsack budget must be nonnegative");
    if (static_cast<int>(weights[l].size()) != ground_size) {
      throw ValidationError("knapsack weight vector must cover every facility");
    }
    for (std::int64_t f : weights[l]) {
      if (f < 0) throw ValidationError("knapsack weights must be nonnegative");
    }
  }
}

double psi_value(std::span<const ElementSet> balls, std::span<const double> facility_weights,
                 std::span<const double> penalties, std::span<const int> chosen) {
  double psi = 0.0;
  for (std::size_t j = 0; j < balls.size(); ++j) {
    int hits = 0;
    for (int i : chosen) {
      if (std::binary_search(balls[j].begin(), balls[j].end(), i)) {
        psi += facility_weights[static_cast<std::size_t>(i)];
        ++hits;
      }
    }
    if (hits == 0) psi += penalties[j];
  }
  return psi;
}

namespace {

// Weighted matroid intersection by shortest augmenting paths in the
// exchange graph. Maximizes gain = -weight over common independent sets,
// restricted to the given candidate items.
ElementSet intersect_augmenting(const Matroid& a, const Matroid& b, const ElementSet& candidates,
                                std::span<const double> weights) {
  const std::size_t k = candidates.size();
  std::vector<bool> in_set(k, false);
  ElementSet best;
  double best_weight = 0.0;

  auto current = [&] {
    ElementSet s;
    for (std::size_t x = 0; x < k; ++x) {
      if (in_set[x]) s.push_back(candidates[x]);
    }
    return s;
  };

  for (;;) {
    const ElementSet cur = current();
    std::vector<bool> source(k, false), sink(k, false);
    for (std::size_t x = 0; x < k; ++x) {
      if (in_set[x]) continue;
      ElementSet plus = cur;
      plus.insert(std::lower_bound(plus.begin(), plus.end(), candidates[x]), candidates[x]);
      source[x] = a.is_independent(plus);
      sink[x] = b.is_independent(plus);
    }
    // adjacency[u] lists v with arc u -> v.
    std::vector<std::vector<std::size_t>> adjacency(k);
    for (std::size_t y = 0; y < k; ++y) {
      if (!in_set[y]) continue;
      for (std::size_t x = 0; x < k; ++x) {
        if (in_set[x]) continue;
        ElementSet swap;
        for (int e : cur) {
          if (e != candidates[y]) swap.push_back(e);
        }
        swap.insert(std::lower_bound(swap.begin(), swap.end(), candidates[x]), candidates[x]);
        if (a.is_independent(swap)) adjacency[y].push_back(x);
        if (b.is_independent(swap)) adjacency[x].push_back(y);
      }
    }
    // Node lengths: entering items cost their weight, leaving items refund it.
    std::vector<double> length(k);
    for (std::size_t x = 0; x < k; ++x) {
      length[x] = in_set[x] ? -weights[static_cast<std::size_t>(candidates[x])]
                            : weights[static_cast<std::size_t>(candidates[x])];
    }
    std::vector<double> dist(k, kInf);
    std::vector<int> hops(k, std::numeric_limits<int>::max());
    std::vector<std::ptrdiff_t> parent(k, -1);
    for (std::size_t x = 0; x < k; ++x) {
      if (source[x]) {
        dist[x] = length[x];
        hops[x] = 0;
      }
    }
    constexpr double kEps = 1e-12;
    auto better = [&](double d, int h, std::size_t v) {
      return d < dist[v] - kEps || (d <= dist[v] + kEps && h < hops[v]);
    };
    for (std::size_t round = 0; round < k; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < k; ++u) {
        if (dist[u] == kInf) continue;
        for (std::size_t v : adjacency[u]) {
          const double d = dist[u] + length[v];
          if (better(d, hops[u] + 1, v)) {
            dist[v] = d;
            hops[v] = hops[u] + 1;
            parent[v] = static_cast<std::ptrdiff_t>(u);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::ptrdiff_t target = -1;
    for (std::size_t x = 0; x < k; ++x) {
      if (!sink[x] || dist[x] == kInf) continue;
      if (target < 0 || dist[x] < dist[static_cast<std::size_t>(target)] - kEps ||
          (dist[x] <= dist[static_cast<std::size_t>(target)] + kEps &&
           hops[x] < hops[static_cast<std::size_t>(target)])) {
        target = static_cast<std::ptrdiff_t>(x);
      }
    }
    if (target < 0) break;
    for (std::ptrdiff_t v = target; v >= 0; v = parent[static_cast<std::size_t>(v)]) {
      in_set[static_cast<std::size_t>(v)] = !in_set[static_cast<std::size_t>(v)];
    }
    const ElementSet next = current();
    double w = 0.0;
    for (int e : next) w += weights[static_cast<std::size_t>(e)];
    if (w < best_weight - kEps) {
      best_weight = w;
      best = next;
    }
  }
  return best;
}

ElementSet intersect_exhaustive(const Matroid& a, const Matroid& b, const ElementSet& candidates,
                                std::span<const double> weights) {
  if (candidates.size() > static_cast<std::size_t>(Matroid::kMaxExplicitGround)) {
    throw CapExceededError("exhaustive matroid intersection limited to 20 candidate items");
  }
  const std::uint32_t subsets = 1U << candidates.size();
  ElementSet best;
  double best_weight = 0.0;
  for (std::uint32_t s = 1; s < subsets; ++s) {
    ElementSet set;
    double w = 0.0;
    for (std::size_t x = 0; x < candidates.size(); ++x) {
      if (s & (1U << x)) {
        set.push_back(candidates[x]);
        w += weights[static_cast<std::size_t>(candidates[x])];
      }
    }
    if (w < best_weight && a.is_independent(set) && b.is_independent(set)) {
      best_weight = w;
      best = std::move(set);
    }
  }
  return best;
}

}  // namespace

ElementSet min_weight_common_independent(const Matroid& first, const Matroid& second,
                                         std::span<const double> weights, IntersectionMethod method) {
  if (first.ground_size() != second.ground_size() ||
      static_cast<int>(weights.size()) != first.ground_size()) {
    throw ValidationError("matroid intersection needs a shared ground set");
  }
  ElementSet candidates;
  for (int i = 0; i < first.ground_size(); ++i) {
    // Nonnegative items never lower the total weight.
    if (weights[static_cast<std::size_t>(i)] < 0.0) {
      const ElementSet single{i};
      if (first.is_independent(single) && second.is_independent(single)) candidates.push_back(i);
    }
  }
  if (candidates.empty()) return {};
  return method == IntersectionMethod::Exhaustive
             ? intersect_exhaustive(first, second, candidates, weights)
             : intersect_augmenting(first, second, candidates, weights);
}

PsiResult minimize_psi_matroid(const Matroid& matroid, std::span<const ElementSet> balls,
                               std::span<const double> facility_weights,
                               std::span<const double> penalties, IntersectionMethod method) {
  const int m = matroid.ground_size();
  if (static_cast<int>(facility_weights.size()) != m || penalties.size() != balls.size()) {
    throw ValidationError("psi minimization inputs have inconsistent sizes");
  }
  std::vector<int> block_of(static_cast<std::size_t>(m), -1);
  std::vector<double> item_weight(static_cast<std::size_t>(m), 0.0);
  for (std::size_t j = 0; j < balls.size(); ++j) {
    for (int i : balls[j]) {
      if (block_of[static_cast<std::size_t>(i)] != -1) {
        throw ValidationError("psi minimization needs pairwise disjoint balls");
      }
      block_of[static_cast<std::size_t>(i)] = static_cast<int>(j);
      item_weight[static_cast<std::size_t>(i)] = facility_weights[static_cast<std::size_t>(i)] - penalties[j];
    }
  }
  // Facilities outside every ball have item weight 0 and are never picked.
  const Matroid one_per_ball =
      Matroid::partition(block_of, std::vector<int>(balls.size(), 1));
  PsiResult result;
  result.chosen = min_weight_common_independent(matroid, one_per_ball, item_weight, method);
  result.psi = psi_value(balls, facility_weights, penalties, result.chosen);
  return result;
}

PsiResult minimize_psi_knapsack(const KnapsackSystem& system, std::span<const ElementSet> balls,
                                std::span<const double> facility_weights,
                                std::span<const double> penalties, std::int64_t table_cap) {
  if (penalties.size() != balls.size()) throw ValidationError("psi minimization inputs have inconsistent sizes");
  const std::int64_t table = system.table_size();
  if (table > table_cap) {
    throw TableCapExceeded("knapsack table size " + std::to_string(table) + " exceeds cap " +
                           std::to_string(table_cap));
  }
  const std::size_t states = static_cast<std::size_t>(table);
  const std::size_t dims = system.budgets.size();
  std::vector<std::int64_t> stride(dims, 1);
  for (std::size_t l = 1; l < dims; ++l) stride[l] = stride[l - 1] * (system.budgets[l - 1] + 1);

  // Decode a state index into its used-capacity coordinate along dimension l.
  auto coord = [&](std::size_t state, std::size_t l) {
    return (static_cast<std::int64_t>(state) / stride[l]) % (system.budgets[l] + 1);
  };

  std::vector<double> dp(states, kInf);
  dp[0] = 0.0;
  // choice[r][state] = facility opened for ball r to reach state, or -1.
  std::vector<std::vector<int>> choice(balls.size(), std::vector<int>(states, -1));
  for (std::size_t r = 0; r < balls.size(); ++r) {
    std::vector<double> next(states, kInf);
    auto& pick = choice[r];
    for (std::size_t s = 0; s < states; ++s) {
      if (dp[s] == kInf) continue;
      const double skip = dp[s] + penalties[r];
      if (skip < next[s]) {
        next[s] = skip;
        pick[s] = -1;
      }
      for (int i : balls[r]) {
        std::int64_t offset = 0;
        bool fits = true;
        for (std::size_t l = 0; l < dims && fits; ++l) {
          const std::int64_t f = system.weights[l][static_cast<std::size_t>(i)];
          if (coord(s, l) + f > system.budgets[l]) fits = false;
          offset += f * stride[l];
        }
        if (!fits) continue;
        const std::size_t t = s + static_cast<std::size_t>(offset);
        const double value = dp[s] + facility_weights[static_cast<std::size_t>(i)];
        if (value < next[t]) {
          next[t] = value;
          pick[t] = i;
        }
      }
    }
    dp = std::move(next);
  }
  std::size_t best_state = 0;
  for (std::size_t s = 1; s < states; ++s) {
    if (dp[s] < dp[best_state]) best_state = s;
  }
  PsiResult result;
  std::size_t s = best_state;
  for (std::size_t r = balls.size(); r-- > 0;) {
    const int i = choice[r][s];
    if (i >= 0) {
      result.chosen.push_back(i);
      std::int64_t offset = 0;
      for (std::size_t l = 0; l < dims; ++l) offset += system.weights[l][static_cast<std::size_t>(i)] * stride[l];
      s -= static_cast<std::size_t>(offset);
    }
  }
  std::sort(result.chosen.begin(), result.chosen.end());
  result.psi = psi_value(balls, facility_weights, penalties, result.chosen);
  return result;
}

}  // namespace stochsup
