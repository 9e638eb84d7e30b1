// Copyright 2026 The LBLL Attack Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The (sum, lex) key is treated as an element of the lexicographically
// ordered group Z x Z^m, where list c contributes (value, -lex_rank at
// coordinate c). Sums of such keys are distinct for distinct combinations,
// and the order is translation invariant, so the usual generation tree for
// sorted-list sums (positions ordered by first-step loss) enumerates the
// product in exact key order.

#include "kbest.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "common.hpp"

namespace lbll {

namespace {

struct Node {
  int64_t sum;
  std::vector<int> rank;  // per list
  int last;               // index into the position order, -1 at the root
};

}  // namespace

std::vector<std::vector<int>> KBestCombinations(const std::vector<RankedList>& lists, size_t k) {
  std::vector<std::vector<int>> out;
  if (k == 0) return out;
  for (const auto& l : lists) {
    if (l.value.empty()) return out;
    if (l.value.size() != l.lex_rank.size()) ValidationError("ranked list size mismatch");
  }
  const int m = static_cast<int>(lists.size());

  // Positions: lists with a second entry, ordered by the key loss of moving
  // from entry 0 to entry 1 (smallest loss first).
  std::vector<int> pos;
  for (int c = 0; c < m; ++c) {
    if (lists[c].value.size() > 1) pos.push_back(c);
  }
  auto loss_less = [&](int a, int b) {
    int64_t da = lists[a].value[0] - lists[a].value[1];
    int64_t db = lists[b].value[0] - lists[b].value[1];
    if (da != db) return da < db;
    // Loss vectors differ only at their own coordinate. The earlier list in
    // list order decides: its loss coordinate is lex1 - lex0.
    int first = std::min(a, b);
    int d = lists[first].lex_rank[1] - lists[first].lex_rank[0];
    return first == a ? d < 0 : d > 0;
  };
  std::sort(pos.begin(), pos.end(), loss_less);

  // Heap ordering: larger key first.
  auto better = [&](const Node& x, const Node& y) {
    if (x.sum != y.sum) return x.sum > y.sum;
    for (int c = 0; c < m; ++c) {
      int lx = lists[c].lex_rank[x.rank[c]];
      int ly = lists[c].lex_rank[y.rank[c]];
      if (lx != ly) return lx < ly;
    }
    return false;
  };
  auto worse = [&](const Node& x, const Node& y) { return better(y, x); };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> heap(worse);

  Node root{0, std::vector<int>(m, 0), -1};
  for (int c = 0; c < m; ++c) root.sum += lists[c].value[0];
  heap.push(std::move(root));
  const int p = static_cast<int>(pos.size());
  auto step = [&](Node n, int list, int new_rank) {
    n.sum += lists[list].value[new_rank] - lists[list].value[n.rank[list]];
    n.rank[list] = new_rank;
    return n;
  };
  while (!heap.empty() && out.size() < k) {
    Node n = heap.top();
    heap.pop();
    if (n.last < 0) {
      if (p > 0) {
        Node c = step(n, pos[0], 1);
        c.last = 0;
        heap.push(std::move(c));
      }
    } else {
      const int j = n.last;
      const int lj = pos[j];
      if (n.rank[lj] + 1 < static_cast<int>(lists[lj].value.size())) {
        heap.push(step(n, lj, n.rank[lj] + 1));
      }
      if (j + 1 < p) {
        Node c = step(n, pos[j + 1], 1);
        c.last = j + 1;
        heap.push(c);
        if (n.rank[lj] == 1) {
          Node moved = step(std::move(c), lj, 0);
          heap.push(std::move(moved));
        }
      }
    }
    out.push_back(std::move(n.rank));
  }
  return out;
}

}  // namespace lbll
