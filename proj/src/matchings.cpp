#include "pdsp/matchings.hpp"

#include <algorithm>

#include "pdsp/base.hpp"

namespace pdsp {

namespace {

Matching decode_brackets(const std::vector<char>& open) {
  Matching m;
  std::vector<int> stack;
  for (int j = 0; j < int(open.size()); ++j) {
    if (open[j]) {
      stack.push_back(j);
    } else {
      // Balance is checked by the caller.
      m.push_back({stack.back(), j});
      stack.pop_back();
    }
  }
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

std::vector<Matching> noncrossing_jumping_matchings(
    const std::vector<int>& block_of) {
  int p = int(block_of.size());
  if (p % 2 != 0) return {};
  for (int j = 1; j < p; ++j)
    require(block_of[j] >= block_of[j - 1], ErrorCode::BadInput,
            "block ids must be non-decreasing");

  // Block lengths in order.
  std::vector<int> lens;
  for (int j = 0; j < p; ++j) {
    if (j == 0 || block_of[j] != block_of[j - 1]) lens.push_back(0);
    lens.back() += 1;
  }
  int nb = int(lens.size());
  std::vector<int> suffix(nb + 1, 0);
  for (int j = nb - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + lens[j];

  // Choose, per block, how many of its first elements close brackets.  The
  // open ones fill the rest of the block, so an in-block pair would need an
  // opener before a closer inside one block, which the shape forbids.
  std::vector<Matching> out;
  std::vector<int> close(nb, 0);
  auto rec = [&](auto&& self, int j, int bal) -> void {
    if (j == nb) {
      if (bal != 0) return;
      std::vector<char> open(p);
      int pos = 0;
      for (int b = 0; b < nb; ++b)
        for (int i = 0; i < lens[b]; ++i, ++pos) open[pos] = i >= close[b];
      out.push_back(decode_brackets(open));
      return;
    }
    for (int c = std::min(lens[j], bal); c >= 0; --c) {
      int nb2 = bal - c + (lens[j] - c);
      if (nb2 > suffix[j + 1]) continue;
      close[j] = c;
      self(self, j + 1, nb2);
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Matching> noncrossing_jumping_matchings_brute(
    const std::vector<int>& block_of) {
  int p = int(block_of.size());
  if (p % 2 != 0) return {};
  std::vector<Matching> out;
  Matching cur;
  std::vector<char> used(p, 0);
  auto rec = [&](auto&& self) -> void {
    int a = 0;
    while (a < p && used[a]) ++a;
    if (a == p) {
      Matching m = cur;
      std::sort(m.begin(), m.end());
      if (is_noncrossing(m) && is_jumping(m, block_of)) out.push_back(m);
      return;
    }
    used[a] = 1;
    for (int b = a + 1; b < p; ++b) {
      if (used[b]) continue;
      used[b] = 1;
      cur.push_back({a, b});
      self(self);
      cur.pop_back();
      used[b] = 0;
    }
    used[a] = 0;
  };
  rec(rec);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_noncrossing(const Matching& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      auto [a, b] = m[i];
      auto [c, d] = m[j];
      // Two disjoint pairs cross iff exactly one endpoint of the second
      // lies strictly between the endpoints of the first.
      bool in1 = c > a && c < b;
      bool in2 = d > a && d < b;
      if (in1 != in2) return false;
    }
  return true;
}

bool is_jumping(const Matching& m, const std::vector<int>& block_of) {
  for (const auto& [a, b] : m)
    if (block_of[a] == block_of[b]) return false;
  return true;
}

}  // namespace pdsp
