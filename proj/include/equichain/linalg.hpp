#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "equichain/coefficient.hpp"

namespace equichain {

/// Sparse row: (column, nonzero value), ascending by column.
using SparseRow = std::vector<std::pair<std::uint32_t, Coefficient>>;

/// Exact rank by incremental row echelon reduction over the entries' field.
inline std::size_t exact_rank(const std::vector<SparseRow>& rows) {
  std::map<std::uint32_t, SparseRow> pivots;  // leading column -> row with leading entry 1
  for (const auto& input : rows) {
    SparseRow row;
    for (const auto& [c, v] : input)
      if (!v.is_zero()) row.emplace_back(c, v);
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) {
        Coefficient inv = row.front().second.inverse();
        for (auto& [_, v] : row) v *= inv;
        pivots.emplace(row.front().first, std::move(row));
        break;
      }
      // row -= row[0] * pivot
      const SparseRow& p = it->second;
      Coefficient f = row.front().second;
      SparseRow out;
      out.reserve(row.size() + p.size());
      std::size_t a = 0;
      std::size_t b = 0;
      while (a < row.size() || b < p.size()) {
        if (b == p.size() || (a < row.size() && row[a].first < p[b].first)) {
          out.push_back(row[a++]);
        } else if (a == row.size() || p[b].first < row[a].first) {
          out.emplace_back(p[b].first, -(f * p[b].second));
          ++b;
        } else {
          Coefficient v = row[a].second - f * p[b].second;
          if (!v.is_zero()) out.emplace_back(row[a].first, v);
          ++a;
          ++b;
        }
      }
      row = std::move(out);
    }
  }
  return pivots.size();
}

}  // namespace equichain
