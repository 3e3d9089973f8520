#ifndef PCSP_SPLITLIST_HPP
#define PCSP_SPLITLIST_HPP

#include <array>
#include <vector>

#include "pcsp/instance.hpp"

namespace pcsp {

struct ThreeSplit {
  std::array<std::vector<int>, 3> groups;
};

inline ThreeSplit round_robin_split(int n) {
  ThreeSplit s;
  for (int v = 0; v < n; ++v) s.groups[v % 3].push_back(v);
  return s;
}

namespace detail {

// Listing of one group: its assignments indexed base-k, first (smallest)
// vertex least significant.
inline int group_color(std::size_t index, std::size_t pos, int k) {
  for (std::size_t i = 0; i < pos; ++i) index /= static_cast<std::size_t>(k);
  return static_cast<int>(index % static_cast<std::size_t>(k));
}

}  // namespace detail

// Partition function via three assignment listings. The vertices fall into
// groups A, B, C; cross-group scores form three matrices and within-group
// scores (vertex scores included) three diagonals. Then
//   Z = nullary * tr(D_A M_AB D_B M_BC D_C M_CA)
// evaluated as dense products of the scaled cross matrices. The diagonals
// are never materialized as matrices, only applied as row / column scalings.
template <class R>
R solve_splitlist_with(const BasicInstance<R>& I, const ThreeSplit& split,
                       const SolveOptions<R>& opt = {}, int rows_guard_log2 = 13) {
  require_valid(I);
  {
    std::vector<char> seen(I.n, 0);
    for (const auto& group : split.groups)
      for (int v : group) {
        if (v < 0 || v >= I.n || seen[v]) throw UsageError("split is not a partition of vertices");
        seen[v] = 1;
      }
    for (int v = 0; v < I.n; ++v)
      if (!seen[v]) throw UsageError("split is not a partition of vertices");
  }
  for (const auto& group : split.groups)
    check_enumeration_guard(I.k, static_cast<int>(group.size()), rows_guard_log2,
                            "split-and-list rows");

  std::array<std::size_t, 3> rows;
  std::array<std::vector<std::size_t>, 3> kpow;
  std::vector<int> group_of(I.n, -1), pos_in_group(I.n, -1);
  for (int gi = 0; gi < 3; ++gi) {
    const auto& group = split.groups[gi];
    kpow[gi].assign(group.size() + 1, 1);
    for (std::size_t p = 0; p < group.size(); ++p) {
      group_of[group[p]] = gi;
      pos_in_group[group[p]] = static_cast<int>(p);
      kpow[gi][p + 1] = kpow[gi][p] * static_cast<std::size_t>(I.k);
    }
    rows[gi] = kpow[gi][group.size()];
  }

  // diagonals: vertex scores and within-group edge scores
  std::array<std::vector<R>, 3> diag;
  for (int gi = 0; gi < 3; ++gi) diag[gi].assign(rows[gi], RingTraits<R>::one());
  // cross matrices, row-major: ab[a * rows_B + b], bc, ca
  std::vector<R> ab(rows[0] * rows[1], RingTraits<R>::one());
  std::vector<R> bc(rows[1] * rows[2], RingTraits<R>::one());
  std::vector<R> ca(rows[2] * rows[0], RingTraits<R>::one());

  auto color_of = [&](int v, std::array<std::size_t, 3> idx) {
    return detail::group_color(idx[group_of[v]], static_cast<std::size_t>(pos_in_group[v]), I.k);
  };

  for (int gi = 0; gi < 3; ++gi) {
    const auto& group = split.groups[gi];
    for (std::size_t a = 0; a < rows[gi]; ++a) {
      R& d = diag[gi][a];
      for (std::size_t p = 0; p < group.size(); ++p) {
        d = d * I.vertex_scores[group[p]][detail::group_color(a, p, I.k)];
        opt.apply(d);
      }
    }
  }

  for (const auto& [e, tbl] : I.edge_scores) {
    auto [x, y] = e;
    int gx = group_of[x], gy = group_of[y];
    auto score = [&](std::size_t ix, std::size_t iy) -> const R& {
      int cx = detail::group_color(ix, static_cast<std::size_t>(pos_in_group[x]), I.k);
      int cy = detail::group_color(iy, static_cast<std::size_t>(pos_in_group[y]), I.k);
      return tbl[static_cast<std::size_t>(cx) * I.k + cy];
    };
    if (gx == gy) {
      auto& d = diag[gx];
      for (std::size_t a = 0; a < rows[gx]; ++a) {
        d[a] = d[a] * score(a, a);
        opt.apply(d[a]);
      }
      continue;
    }
    // pick the matrix that joins the two groups, minding its orientation
    auto scale = [&](std::vector<R>& mat, int grow, int gcol) {
      for (std::size_t r = 0; r < rows[grow]; ++r)
        for (std::size_t c = 0; c < rows[gcol]; ++c) {
          R& cell = mat[r * rows[gcol] + c];
          std::size_t ix = (gx == grow) ? r : c;
          std::size_t iy = (gy == grow) ? r : c;
          cell = cell * score(ix, iy);
          opt.apply(cell);
        }
    };
    int lo = std::min(gx, gy), hi = std::max(gx, gy);
    if (lo == 0 && hi == 1)
      scale(ab, 0, 1);
    else if (lo == 1 && hi == 2)
      scale(bc, 1, 2);
    else
      scale(ca, 2, 0);
  }

  // fold the diagonals into the cross matrices: rows of AB get D_A, columns
  // of AB get D_B, columns of BC get D_C
  auto row_scale = [&](std::vector<R>& mat, const std::vector<R>& d, std::size_t ncols) {
    for (std::size_t r = 0; r < d.size(); ++r)
      for (std::size_t c = 0; c < ncols; ++c) {
        R& cell = mat[r * ncols + c];
        cell = d[r] * cell;
        opt.apply(cell);
      }
  };
  auto col_scale = [&](std::vector<R>& mat, const std::vector<R>& d, std::size_t nrows) {
    for (std::size_t r = 0; r < nrows; ++r)
      for (std::size_t c = 0; c < d.size(); ++c) {
        R& cell = mat[r * d.size() + c];
        cell = cell * d[c];
        opt.apply(cell);
      }
  };
  row_scale(ab, diag[0], rows[1]);
  col_scale(ab, diag[1], rows[0]);
  col_scale(bc, diag[2], rows[1]);

  // T = (D_A AB D_B)(BC D_C), then the trace against CA
  std::vector<R> t(rows[0] * rows[2], RingTraits<R>::zero());
  auto product_row = [&](std::size_t a) {
    for (std::size_t c = 0; c < rows[2]; ++c) {
      R acc = RingTraits<R>::zero();
      for (std::size_t b = 0; b < rows[1]; ++b) {
        acc = acc + ab[a * rows[1] + b] * bc[b * rows[2] + c];
        opt.apply(acc);
      }
      t[a * rows[2] + c] = std::move(acc);
    }
  };
#ifdef _OPENMP
  if (opt.threads > 1 && rows[0] > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(opt.threads)
    for (std::size_t a = 0; a < rows[0]; ++a) product_row(a);
  } else
#endif
  {
    for (std::size_t a = 0; a < rows[0]; ++a) product_row(a);
  }

  R total = RingTraits<R>::zero();
  for (std::size_t a = 0; a < rows[0]; ++a)
    for (std::size_t c = 0; c < rows[2]; ++c) {
      total = total + t[a * rows[2] + c] * ca[c * rows[0] + a];
      opt.apply(total);
    }
  total = I.nullary * total;
  opt.apply(total);
  return total;
}

template <class R>
R solve_splitlist(const BasicInstance<R>& I, const SolveOptions<R>& opt = {},
                  int rows_guard_log2 = 13) {
  return solve_splitlist_with(I, round_robin_split(I.n), opt, rows_guard_log2);
}

}  // namespace pcsp

#endif
