#pragma once

// Minimax search over candidates built from k-subsets of a point set and a
// list of weight vectors. Shared by the mixing and density estimators.

#include "gmix/core.hpp"
#include "gmix/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gmix::detail {

struct SearchResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<Index> subset;  // indices into the point set
  Index weight_index = -1;
};

/// C(n, k) (or the multiset count) as a double.
inline double subset_count(Index n, Index k, bool multiset) {
  const Index top = multiset ? n + k - 1 : n;
  if (k > top) return 0.0;
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(top - k + i) / static_cast<double>(i);
  return std::round(c);
}

/// W1 between two 1-d laws given as (position, weight) arrays; small sizes.
inline double small_w1(const double* xa, const double* wa, Index na, const double* xb,
                       const double* wb, Index nb) {
  constexpr Index cap = 64;
  double x[cap], dw[cap];
  Index m = 0;
  for (Index i = 0; i < na; ++i) {
    x[m] = xa[i];
    dw[m++] = wa[i];
  }
  for (Index i = 0; i < nb; ++i) {
    x[m] = xb[i];
    dw[m++] = -wb[i];
  }
  for (Index i = 1; i < m; ++i) {
    const double xv = x[i], dv = dw[i];
    Index j = i - 1;
    while (j >= 0 && x[j] > xv) {
      x[j + 1] = x[j];
      dw[j + 1] = dw[j];
      --j;
    }
    x[j + 1] = xv;
    dw[j + 1] = dv;
  }
  double cdf = 0.0, total = 0.0;
  for (Index i = 0; i + 1 < m; ++i) {
    cdf += dw[i];
    total += std::abs(cdf) * (x[i + 1] - x[i]);
  }
  return total;
}

/// Minimizes over (subset, weight) the max over directions t of
/// score(t, positions, weights), where positions[j] = proj(subset[j], t).
/// proj is |points| x |directions|; weights has one column per weight
/// vector. Candidates are ordered by subset (lexicographic) then weight
/// index; the first minimizer wins regardless of the worker count.
template <typename Score>
SearchResult minimax_search(const MatrixXd& proj, const MatrixXd& weights, Index k,
                            bool multiset, Score&& score, int threads) {
  const Index n_points = proj.rows(), n_dirs = proj.cols(), n_w = weights.cols();
  if (k < 1 || n_points < 1 || n_w < 1 || n_dirs < 1)
    throw InvalidArgument("candidate search needs nonempty points, weights and directions");
  if (k > 32) throw InvalidArgument("candidate search supports at most 32 atoms");
  if (!multiset && n_points < k) throw InvalidArgument("fewer points than atoms");
  const Index n_first = multiset ? n_points : n_points - k + 1;
  std::vector<SearchResult> partial(static_cast<std::size_t>(n_first));

  parallel_for(n_first, threads, [&](Index first) {
    SearchResult& best = partial[static_cast<std::size_t>(first)];
    std::vector<Index> idx(static_cast<std::size_t>(k));
    idx[0] = first;
    for (Index j = 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = multiset ? first : first + j;
    std::vector<double> pos(static_cast<std::size_t>(k));
    std::vector<double> w(static_cast<std::size_t>(k));
    for (;;) {
      for (Index wi = 0; wi < n_w; ++wi) {
        for (Index j = 0; j < k; ++j) w[static_cast<std::size_t>(j)] = weights(j, wi);
        double worst = 0.0;
        for (Index t = 0; t < n_dirs; ++t) {
          for (Index j = 0; j < k; ++j)
            pos[static_cast<std::size_t>(j)] = proj(idx[static_cast<std::size_t>(j)], t);
          worst = std::max(worst, score(t, pos.data(), w.data()));
          if (worst >= best.value) break;
        }
        if (worst < best.value) {
          best.value = worst;
          best.subset = idx;
          best.weight_index = wi;
        }
      }
      // Next combination with the same first index.
      Index pos_i = k - 1;
      while (pos_i >= 1) {
        const Index limit = multiset ? n_points - 1 : n_points - k + pos_i;
        if (idx[static_cast<std::size_t>(pos_i)] < limit) break;
        --pos_i;
      }
      if (pos_i < 1) break;
      ++idx[static_cast<std::size_t>(pos_i)];
      for (Index j = pos_i + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] =
            multiset ? idx[static_cast<std::size_t>(pos_i)] : idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  });

  SearchResult out;
  for (auto& p : partial)
    if (p.weight_index >= 0 && p.value < out.value) out = std::move(p);
  if (out.weight_index < 0) {
    // Every score was infinite or NaN; fall back to the first candidate.
    out.subset.resize(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j) out.subset[static_cast<std::size_t>(j)] = multiset ? 0 : j;
    out.weight_index = 0;
  }
  return out;
}

}  // namespace gmix::detail
