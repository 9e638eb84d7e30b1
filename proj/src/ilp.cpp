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

#include "ilp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "kbest.hpp"

namespace lbll {

int64_t QuantizeCoef(double p) { return std::llround(p * kCoefScale); }
double ObjectiveValue(int64_t q) { return static_cast<double>(q) / kCoefScale; }

namespace {

constexpr std::array<LatchType, 3> kIlpTypes = {LatchType::kPrimary, LatchType::kSecondary,
                                                LatchType::kDelayDecoy};

int TypeSlot(LatchType t) {
  switch (t) {
    case LatchType::kPrimary: return 0;
    case LatchType::kSecondary: return 1;
    case LatchType::kDelayDecoy: return 2;
    case LatchType::kLogicDecoy: break;
  }
  ValidationError("logic decoys have no place in the latch-coloring program");
}

void AddConstraint(IlpModel& m, std::string family, std::vector<std::pair<int, int>> terms,
                   LinearConstraint::Sense sense, int rhs) {
  // Merge repeated variables (self-loop edges).
  std::sort(terms.begin(), terms.end());
  std::vector<std::pair<int, int>> merged;
  for (auto [v, c] : terms) {
    if (!merged.empty() && merged.back().first == v) {
      merged.back().second += c;
    } else {
      merged.push_back({v, c});
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0; });
  m.constraints.push_back({std::move(family), std::move(merged), sense, rhs});
}

// Branch-and-bound state for a contiguous range of model latches. Latches
// outside the range must have a fixed color; they act as the ground node.
//
// Colors live in a parity union-find with a ground node of color 0. All latch
// fan-ins of one latch share a color, so they are merged up front. Every
// undecided latch contributes an upper bound on its coefficient to one class,
// as a function of that class's color: its own class while the fan-in color
// is known (relative or absolute) or unknown on both sides, and its fan-in
// class once its own color is pinned.
class RangeSolver {
 public:
  RangeSolver(const IlpModel& model, int begin, int end)
      : model_(model), begin_(begin), n_(end - begin), ground_(end - begin) {
    std::vector<std::vector<Ref>> fanin(n_);
    domain_.assign(n_, 0b111);
    for (auto [i, j] : model.edges) {
      if (j < begin || j >= end) continue;
      if (i >= begin && i < end) {
        fanin[j - begin].push_back({i - begin, 0});
      } else if (model.fixed_color[i] >= 0) {
        fanin[j - begin].push_back({ground_, static_cast<uint8_t>(model.fixed_color[i])});
      } else {
        ValidationError("solver range depends on a latch of unknown color");
      }
    }
    for (int u = 0; u < n_; ++u) {
      const int g = begin + u;
      bool self_loop = false;
      for (const Ref& r : fanin[u]) self_loop |= r.node == u;
      if (self_loop || (model.pi_adjacent[g] && model.po_adjacent[g])) {
        domain_[u] = 0b100;
      } else if (model.po_adjacent[g]) {
        domain_[u] = 0b110;
      }
    }
    uf_.resize(n_ + 1);
    watch_.assign(n_ + 1, {});
    for (int u = 0; u <= n_; ++u) uf_[u].parent = u;
    uf_[ground_].pinned = true;
    rep_.assign(n_, {});
    for (int u = 0; u < n_; ++u) {
      watch_[u].push_back(u);
      if (fanin[u].empty()) continue;
      rep_[u] = fanin[u].front();
      watch_[rep_[u].node].push_back(u);
    }
    contrib_.assign(n_, {});
    decided_.assign(n_, 0);
    for (int u = 0; u < n_; ++u) {
      contrib_[u] = Contribution(u);
      auto [r, p] = FindRef(Host(u, contrib_[u]));
      for (int c = 0; c < 2; ++c) uf_[r].a[c] += contrib_[u].v[c ^ p];
    }
    for (int u = 0; u <= n_; ++u) class_bound_sum_ += ClassBound(u);
    for (int u = 0; u < n_; ++u) {
      for (size_t k = 1; k < fanin[u].size(); ++k) Union(fanin[u][0], fanin[u][k], 0);
    }
    for (int u = 0; u < n_; ++u) {
      const int8_t fixed = model.fixed_color[begin + u];
      if (fixed >= 0) Union(u, ground_, static_cast<uint8_t>(fixed));
    }
    slot_trail_.clear();
    contrib_trail_.clear();
    list_trail_.clear();
    decided_trail_.clear();
  }

  int size() const { return n_; }
  uint8_t domain(int u) const { return domain_[u]; }
  int64_t coef(int u, int slot) const { return model_.coef[begin_ + u][slot]; }
  int64_t Bound() const { return partial_ + class_bound_sum_; }
  int64_t partial() const { return partial_; }

  struct Mark {
    size_t slots, contribs, lists, decided;
    int64_t partial;
    int64_t bound_sum;
  };
  Mark Save() const {
    return {slot_trail_.size(), contrib_trail_.size(), list_trail_.size(), decided_trail_.size(),
            partial_, class_bound_sum_};
  }
  void Undo(const Mark& m) {
    while (slot_trail_.size() > m.slots) {
      uf_[slot_trail_.back().first] = slot_trail_.back().second;
      slot_trail_.pop_back();
    }
    while (contrib_trail_.size() > m.contribs) {
      contrib_[contrib_trail_.back().first] = contrib_trail_.back().second;
      contrib_trail_.pop_back();
    }
    while (list_trail_.size() > m.lists) {
      const ListOp& op = list_trail_.back();
      watch_[op.root].resize(op.old_size);
      if (op.swapped) std::swap(watch_[op.root], watch_[op.other]);
      list_trail_.pop_back();
    }
    while (decided_trail_.size() > m.decided) {
      decided_[decided_trail_.back()] = 0;
      decided_trail_.pop_back();
    }
    partial_ = m.partial;
    class_bound_sum_ = m.bound_sum;
  }

  // Fixes latch u to type slot t (0 P, 1 S, 2 DD). False on conflict; the
  // caller undoes either way.
  bool Assign(int u, int t) {
    auto [r, p] = FindRef(Host(u, contrib_[u]));
    SaveSlot(r);
    const int64_t before = ClassBound(r);
    for (int c = 0; c < 2; ++c) uf_[r].a[c] -= contrib_[u].v[c ^ p];
    class_bound_sum_ += ClassBound(r) - before;
    decided_[u] = 1;
    decided_trail_.push_back(u);
    partial_ += coef(u, t);
    if (t != 2 && !Union(u, ground_, t == 0 ? 1 : 0)) return false;
    if (rep_[u].node >= 0 && rep_[u].node != u && !Union(rep_[u], {u, 0}, t != 2 ? 1 : 0)) {
      return false;
    }
    return true;
  }

  uint8_t Color(int u) const {
    auto [r, p] = Find(u);
    return static_cast<uint8_t>((uf_[r].pinned ? uf_[r].pcolor : 0) ^ p);
  }

 private:
  // Stands in for an infeasible option; a bound containing one is negative
  // for any realistic latch count while staying a valid upper bound.
  static constexpr int64_t kNeg = -(int64_t{1} << 45);

  struct Slot {
    int parent = 0;
    uint8_t parity = 0;
    int rank = 0;
    int64_t a[2] = {0, 0};
    bool pinned = false;
    uint8_t pcolor = 0;
  };
  // A union-find node plus the parity of a latch relative to it.
  struct Ref {
    int node = -1;
    uint8_t parity = 0;
  };
  // Bound values indexed by the color of the host: latch u itself, or its
  // fan-in representative when on_fanin.
  struct Contrib {
    std::array<int64_t, 2> v{};
    bool on_fanin = false;
    bool operator==(const Contrib&) const = default;
  };
  struct ListOp {
    int root, other;
    size_t old_size;
    bool swapped;
  };

  // Value of latch u with its own color c and fan-in color cb (-1: unknown).
  int64_t Value(int u, int c, int cb) const {
    const int slot = c == 1 ? 0 : 1;
    const bool typed = domain_[u] >> slot & 1;
    int64_t v = kNeg;
    if (cb < 0 || cb == c) v = coef(u, 2);
    if (typed && (cb < 0 || cb != c)) v = std::max(v, coef(u, slot));
    return v;
  }

  Ref Host(int u, const Contrib& c) const { return c.on_fanin ? rep_[u] : Ref{u, 0}; }

  Contrib Contribution(int u) const {
    int rel = -1;     // fan-in color xor own color, when known
    int fixed = -1;   // fan-in color, when pinned
    Contrib out;
    if (rep_[u].node >= 0) {
      auto [ra, pa] = Find(u);
      auto [rb, pb] = FindRef(rep_[u]);
      if (ra == rb) {
        rel = pa ^ pb;
      } else if (uf_[rb].pinned) {
        fixed = uf_[rb].pcolor ^ pb;
      } else if (uf_[ra].pinned) {
        const int own = uf_[ra].pcolor ^ pa;
        out.on_fanin = true;
        for (int cb = 0; cb < 2; ++cb) out.v[cb] = Value(u, own, cb);
        return out;
      }
    }
    for (int c = 0; c < 2; ++c) out.v[c] = Value(u, c, rel >= 0 ? c ^ rel : fixed);
    return out;
  }

  int64_t ClassBound(int r) const {
    const Slot& s = uf_[r];
    return s.pinned ? s.a[s.pcolor] : std::max(s.a[0], s.a[1]);
  }

  std::pair<int, uint8_t> Find(int x) const {
    uint8_t p = 0;
    while (uf_[x].parent != x) {
      p ^= uf_[x].parity;
      x = uf_[x].parent;
    }
    return {x, p};
  }

  std::pair<int, uint8_t> FindRef(const Ref& ref) const {
    auto [r, p] = Find(ref.node);
    return {r, static_cast<uint8_t>(p ^ ref.parity)};
  }

  bool Union(const Ref& a, const Ref& b, uint8_t p) {
    return Union(a.node, b.node, p ^ a.parity ^ b.parity);
  }

  void SaveSlot(int i) { slot_trail_.push_back({i, uf_[i]}); }

  void Refresh(int u) {
    if (decided_[u]) return;
    const Contrib next = Contribution(u);
    const Contrib old = contrib_[u];
    if (next == old) return;
    auto [r0, p0] = FindRef(Host(u, old));
    SaveSlot(r0);
    int64_t before = ClassBound(r0);
    for (int c = 0; c < 2; ++c) uf_[r0].a[c] -= old.v[c ^ p0];
    class_bound_sum_ += ClassBound(r0) - before;
    auto [r1, p1] = FindRef(Host(u, next));
    SaveSlot(r1);
    before = ClassBound(r1);
    for (int c = 0; c < 2; ++c) uf_[r1].a[c] += next.v[c ^ p1];
    class_bound_sum_ += ClassBound(r1) - before;
    contrib_trail_.push_back({u, old});
    contrib_[u] = next;
  }

  // Requires color(a) xor color(b) == p.
  bool Union(int a, int b, uint8_t p) {
    auto [ra, pa] = Find(a);
    auto [rb, pb] = Find(b);
    if (ra == rb) return (pa ^ pb) == p;
    // Latches whose contribution may change watch the class that is either
    // newly pinned or, failing that, the smaller one.
    int scan;
    if (uf_[ra].pinned != uf_[rb].pinned) {
      scan = uf_[ra].pinned ? rb : ra;
    } else {
      scan = watch_[ra].size() <= watch_[rb].size() ? ra : rb;
    }
    if (uf_[ra].rank < uf_[rb].rank) std::swap(ra, rb);
    SaveSlot(ra);
    SaveSlot(rb);
    const int64_t before = ClassBound(ra) + ClassBound(rb);
    const uint8_t q = pa ^ pb ^ p;  // color(rb) = color(ra) xor q
    Slot& A = uf_[ra];
    Slot& B = uf_[rb];
    B.parent = ra;
    B.parity = q;
    for (int c = 0; c < 2; ++c) A.a[c] += B.a[c ^ q];
    if (B.pinned) {
      A.pinned = true;
      A.pcolor = B.pcolor ^ q;
    }
    if (A.rank == B.rank) ++A.rank;
    class_bound_sum_ += ClassBound(ra) - before;

    for (size_t i = 0; i < watch_[scan].size(); ++i) Refresh(watch_[scan][i]);
    ListOp op{ra, rb, 0, false};
    if (watch_[ra].size() < watch_[rb].size()) {
      std::swap(watch_[ra], watch_[rb]);
      op.swapped = true;
    }
    op.old_size = watch_[ra].size();
    watch_[ra].insert(watch_[ra].end(), watch_[rb].begin(), watch_[rb].end());
    list_trail_.push_back(op);
    return true;
  }

  const IlpModel& model_;
  int begin_;
  int n_;
  int ground_;
  std::vector<uint8_t> domain_;
  std::vector<Ref> rep_;  // one latch fan-in; node -1 when none
  std::vector<Slot> uf_;
  std::vector<std::vector<int>> watch_;
  std::vector<Contrib> contrib_;
  std::vector<char> decided_;
  std::vector<std::pair<int, Slot>> slot_trail_;
  std::vector<std::pair<int, Contrib>> contrib_trail_;
  std::vector<ListOp> list_trail_;
  std::vector<int> decided_trail_;
  int64_t partial_ = 0;
  int64_t class_bound_sum_ = 0;
};

struct LocalSolution {
  int64_t objective;
  std::vector<uint8_t> slots;  // 0 P, 1 S, 2 DD
  std::vector<uint8_t> colors;
};

// Exact top-k for one range, sorted by (objective desc, slots lex asc).
std::vector<LocalSolution> SolveRange(const IlpModel& model, int begin, int end, size_t k) {
  RangeSolver s(model, begin, end);
  const int n = s.size();

  // Stage 1: the k best objective values, best-first.
  std::priority_queue<int64_t, std::vector<int64_t>, std::greater<>> best;
  std::vector<std::vector<int>> order(n);
  for (int u = 0; u < n; ++u) {
    for (int t = 0; t < 3; ++t) {
      if (s.domain(u) >> t & 1) order[u].push_back(t);
    }
    std::stable_sort(order[u].begin(), order[u].end(),
                     [&](int a, int b) { return s.coef(u, a) > s.coef(u, b); });
  }
  std::function<void(int)> stage1 = [&](int u) {
    if (u == n) {
      best.push(s.partial());
      if (best.size() > k) best.pop();
      return;
    }
    for (int t : order[u]) {
      auto mark = s.Save();
      if (s.Assign(u, t) && s.Bound() >= 0 && (best.size() < k || s.Bound() > best.top())) {
        stage1(u + 1);
      }
      s.Undo(mark);
    }
  };
  stage1(0);

  // Stage 2: lexicographic sweep collecting everything above the k-th value
  // and the lex-first ties at it.
  const bool full = best.size() == k;
  const int64_t kth = full ? best.top() : std::numeric_limits<int64_t>::min();
  size_t above = 0;
  for (auto copy = best; !copy.empty(); copy.pop()) above += copy.top() > kth;
  const size_t quota = full ? k - above : std::numeric_limits<size_t>::max();
  size_t ties = 0;
  std::vector<LocalSolution> out;
  std::vector<uint8_t> slots(n);
  std::function<void(int)> stage2 = [&](int u) {
    if (u == n) {
      const int64_t obj = s.partial();
      if (obj == kth) {
        if (ties >= quota) return;
        ++ties;
      }
      LocalSolution sol{obj, slots, std::vector<uint8_t>(n)};
      for (int v = 0; v < n; ++v) sol.colors[v] = s.Color(v);
      out.push_back(std::move(sol));
      return;
    }
    for (int t = 0; t < 3; ++t) {
      if (!(s.domain(u) >> t & 1)) continue;
      auto mark = s.Save();
      if (s.Assign(u, t)) {
        const int64_t b = s.Bound();
        if (b >= 0 && (b > kth || (b == kth && ties < quota))) {
          slots[u] = static_cast<uint8_t>(t);
          stage2(u + 1);
        }
      }
      s.Undo(mark);
    }
  };
  stage2(0);
  std::stable_sort(out.begin(), out.end(),
                   [](const LocalSolution& a, const LocalSolution& b) {
                     return a.objective > b.objective;
                   });
  return out;
}

}  // namespace

IlpModel BuildModel(const SequentialGraph& g, const TypeProbabilities& probs) {
  IlpModel m;
  const int n = static_cast<int>(g.latch_node.size());
  std::vector<int> pos_of_node(g.node_count(), -1);
  for (int p = 0; p < n; ++p) {
    pos_of_node[g.latch_node[p]] = p;
    if (!probs.contains(g.latch_id[p])) {
      ValidationError(fmt::format("no probabilities for latch {}", g.latch_id[p]));
    }
  }

  // Undirected latch adjacency, boundary membership.
  std::vector<std::vector<int>> adj(n);
  std::vector<char> po(n, 0), pi(n, 0);
  for (int p = 0; p < n; ++p) {
    const int u = g.latch_node[p];
    for (int v : g.succ[u]) {
      if (g.kind[v] == NodeKind::kLatch) {
        adj[p].push_back(pos_of_node[v]);
        adj[pos_of_node[v]].push_back(p);
      } else if (g.kind[v] == NodeKind::kOutput || g.kind[v] == NodeKind::kFlipFlop) {
        po[p] = 1;
      }
    }
    for (int v : g.pred[u]) {
      if (g.kind[v] == NodeKind::kInput || g.kind[v] == NodeKind::kFlipFlop) pi[p] = 1;
    }
  }
  auto id_less = [&](int a, int b) { return g.latch_id[a] < g.latch_id[b]; };
  for (auto& a : adj) {
    std::sort(a.begin(), a.end(), id_less);
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  // Implied colors: the latch fan-ins of one latch share a color and
  // PO-adjacent latches have color 0. Node n is ground.
  std::vector<int> parent(n + 1), parity(n + 1, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    int p = 0;
    while (parent[x] != x) {
      p ^= parity[x];
      x = parent[x];
    }
    return std::pair{x, p};
  };
  auto unite = [&](int a, int b) {  // equal colors
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return;
    if (rb == n) std::swap(ra, rb);
    parent[rb] = ra;
    parity[rb] = pa ^ pb;
  };
  std::vector<int> first_fanin(n, -1);
  for (int p = 0; p < n; ++p) {
    for (int v : g.pred[g.latch_node[p]]) {
      if (g.kind[v] != NodeKind::kLatch) continue;
      const int q = pos_of_node[v];
      if (first_fanin[p] < 0) {
        first_fanin[p] = q;
      } else {
        unite(first_fanin[p], q);
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    if (po[p]) unite(n, p);
  }
  std::vector<int8_t> fixed(n, -1);
  std::vector<int> cls(n);
  for (int p = 0; p < n; ++p) {
    auto [r, par] = find(p);
    cls[p] = r;
    if (r == n) fixed[p] = static_cast<int8_t>(par);
  }

  // Independent clusters: a latch ties its own class to its fan-in class;
  // classes of fixed color tie nothing.
  std::vector<int> cparent(n);
  std::iota(cparent.begin(), cparent.end(), 0);
  auto cfind = [&](int x) {
    while (cparent[x] != x) x = cparent[x] = cparent[cparent[x]];
    return x;
  };
  auto cunite = [&](int a, int b) { cparent[cfind(a)] = cfind(b); };
  for (int p = 0; p < n; ++p) {
    if (cls[p] != n) cunite(p, cls[p]);
    if (first_fanin[p] >= 0 && cls[first_fanin[p]] != n) cunite(p, cls[first_fanin[p]]);
  }

  // Clusters by smallest id; inside, BFS over latch edges from the smallest id.
  std::vector<int> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), id_less);
  std::map<int, std::vector<int>> members;  // cluster root -> latches by id
  std::vector<int> cluster_order;
  for (int p : by_id) {
    auto& list = members[cfind(p)];
    if (list.empty()) cluster_order.push_back(cfind(p));
    list.push_back(p);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> order;
  for (int root : cluster_order) {
    m.component_begin.push_back(static_cast<int>(order.size()));
    for (int start : members[root]) {
      if (seen[start]) continue;
      seen[start] = 1;
      std::deque<int> queue = {start};
      while (!queue.empty()) {
        int p = queue.front();
        queue.pop_front();
        order.push_back(p);
        for (int v : adj[p]) {
          if (!seen[v] && cfind(v) == root) {
            seen[v] = 1;
            queue.push_back(v);
          }
        }
      }
    }
  }
  m.component_begin.push_back(static_cast<int>(order.size()));

  std::vector<int> model_index(n);
  for (int i = 0; i < n; ++i) model_index[order[i]] = i;
  for (int i = 0; i < n; ++i) {
    const int p = order[i];
    const int id = g.latch_id[p];
    m.latch_ids.push_back(id);
    std::array<int64_t, 3> c{};
    const auto& pr = probs.at(id);
    for (int t = 0; t < 3; ++t) {
      if (!std::isfinite(pr[t]) || pr[t] < 0.0 || pr[t] > 1.0) {
        ValidationError(fmt::format("coefficient {} of latch {} is outside [0,1]", pr[t], id));
      }
      c[t] = QuantizeCoef(pr[t]);
    }
    m.coef.push_back(c);
    m.po_adjacent.push_back(po[p]);
    m.fixed_color.push_back(fixed[p]);
    m.pi_adjacent.push_back(pi[p]);
  }
  for (int p = 0; p < n; ++p) {
    for (int v : g.succ[g.latch_node[p]]) {
      if (g.kind[v] == NodeKind::kLatch) {
        m.edges.push_back({model_index[p], model_index[pos_of_node[v]]});
      }
    }
  }
  std::sort(m.edges.begin(), m.edges.end());

  using S = LinearConstraint::Sense;
  auto V = IlpModel::Var;
  for (int i = 0; i < n; ++i) {
    AddConstraint(m, "F0", {{V(i, kVarTP), 1}, {V(i, kVarTS), 1}, {V(i, kVarTDD), 1}}, S::kEq, 1);
    AddConstraint(m, "F1", {{V(i, kVarC), 1}, {V(i, kVarTP), -1}}, S::kGe, 0);
    AddConstraint(m, "F2", {{V(i, kVarC), 1}, {V(i, kVarTS), 1}}, S::kLe, 1);
  }
  for (auto [i, j] : m.edges) {
    AddConstraint(m, "C0", {{V(i, kVarTP), 1}, {V(j, kVarTP), 1}}, S::kLe, 1);
    AddConstraint(m, "C1", {{V(i, kVarTS), 1}, {V(j, kVarTS), 1}}, S::kLe, 1);
    AddConstraint(m, "C2", {{V(j, kVarC), 1}, {V(i, kVarC), -1}, {V(j, kVarTDD), 1}}, S::kLe, 1);
    AddConstraint(m, "C2", {{V(j, kVarC), 1}, {V(i, kVarC), -1}, {V(j, kVarTDD), -1}}, S::kGe, -1);
    AddConstraint(m, "C3",
                  {{V(i, kVarC), 1}, {V(j, kVarC), 1}, {V(i, kVarTDD), -1}, {V(j, kVarTDD), 1}},
                  S::kGe, 0);
    AddConstraint(m, "C3",
                  {{V(i, kVarC), 1}, {V(j, kVarC), 1}, {V(i, kVarTDD), 1}, {V(j, kVarTDD), -1}},
                  S::kLe, 2);
  }
  for (int i = 0; i < n; ++i) {
    if (!m.po_adjacent[i]) continue;
    AddConstraint(m, "B0", {{V(i, kVarTP), 1}}, S::kEq, 0);
    AddConstraint(m, "B1", {{V(i, kVarC), 1}}, S::kEq, 0);
    if (m.pi_adjacent[i]) AddConstraint(m, "B2", {{V(i, kVarTDD), 1}}, S::kEq, 1);
  }
  return m;
}

FeasibilityReport CheckFeasible(const IlpModel& model, const IlpAssignment& a) {
  const int n = model.latch_count();
  if (static_cast<int>(a.types.size()) != n || static_cast<int>(a.colors.size()) != n) {
    ValidationError("assignment does not cover every latch");
  }
  std::vector<int> x(4 * n, 0);
  for (int i = 0; i < n; ++i) {
    switch (a.types[i]) {
      case LatchType::kPrimary: x[IlpModel::Var(i, kVarTP)] = 1; break;
      case LatchType::kSecondary: x[IlpModel::Var(i, kVarTS)] = 1; break;
      case LatchType::kDelayDecoy: x[IlpModel::Var(i, kVarTDD)] = 1; break;
      case LatchType::kLogicDecoy: break;  // violates F0
    }
    x[IlpModel::Var(i, kVarC)] = a.colors[i] ? 1 : 0;
  }
  FeasibilityReport r;
  for (const auto& c : model.constraints) {
    int lhs = 0;
    for (auto [v, coef] : c.terms) lhs += coef * x[v];
    bool ok = c.sense == LinearConstraint::Sense::kLe   ? lhs <= c.rhs
              : c.sense == LinearConstraint::Sense::kGe ? lhs >= c.rhs
                                                        : lhs == c.rhs;
    if (!ok) {
      r.feasible = false;
      r.violated.push_back(c.family);
    }
  }
  return r;
}

std::optional<std::vector<uint8_t>> ColorsFor(const IlpModel& model,
                                              const std::vector<LatchType>& types) {
  const int n = model.latch_count();
  if (static_cast<int>(types.size()) != n) ValidationError("type vector does not cover every latch");
  RangeSolver s(model, 0, n);
  for (int u = 0; u < n; ++u) {
    if (types[u] == LatchType::kLogicDecoy) return std::nullopt;
    const int slot = TypeSlot(types[u]);
    if (!(s.domain(u) >> slot & 1) || !s.Assign(u, slot)) return std::nullopt;
  }
  std::vector<uint8_t> colors(n);
  for (int u = 0; u < n; ++u) colors[u] = s.Color(u);
  return colors;
}

int64_t Objective(const IlpModel& model, const std::vector<LatchType>& types) {
  int64_t sum = 0;
  for (int i = 0; i < model.latch_count(); ++i) sum += model.coef[i][TypeSlot(types[i])];
  return sum;
}

SolutionPool SolveTopK(const IlpModel& model, size_t k) {
  if (k < 1) ValidationError("k must be at least 1");
  SolutionPool pool;
  const size_t comps = model.component_begin.empty() ? 0 : model.component_begin.size() - 1;
  std::vector<std::vector<LocalSolution>> parts;
  std::vector<RankedList> lists;
  for (size_t c = 0; c < comps; ++c) {
    parts.push_back(SolveRange(model, model.component_begin[c], model.component_begin[c + 1], k));
    const auto& sols = parts.back();
    if (sols.empty()) ValidationError("latch-coloring program is infeasible");
    RankedList list;
    std::vector<int> idx(sols.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return sols[a].slots < sols[b].slots; });
    list.lex_rank.resize(sols.size());
    for (size_t r = 0; r < idx.size(); ++r) list.lex_rank[idx[r]] = static_cast<int>(r);
    for (const auto& s : sols) list.value.push_back(s.objective);
    lists.push_back(std::move(list));
  }
  for (const auto& combo : KBestCombinations(lists, k)) {
    PoolEntry e;
    for (size_t c = 0; c < comps; ++c) {
      const LocalSolution& s = parts[c][combo[c]];
      e.objective += s.objective;
      for (uint8_t t : s.slots) e.assignment.types.push_back(kIlpTypes[t]);
      e.assignment.colors.insert(e.assignment.colors.end(), s.colors.begin(), s.colors.end());
    }
    pool.entries.push_back(std::move(e));
  }
  return pool;
}

SolutionPool SolveNoGood(const IlpModel& model, size_t k) {
  if (k < 1) ValidationError("k must be at least 1");
  const int n = model.latch_count();
  std::set<std::vector<uint8_t>> cuts;
  SolutionPool pool;
  RangeSolver s(model, 0, n);
  std::vector<uint8_t> slots(n);
  for (size_t round = 0; round < k; ++round) {
    std::optional<LocalSolution> found;
    std::function<void(int)> dfs = [&](int u) {
      if (u == n) {
        if (cuts.contains(slots)) return;
        if (!found || s.partial() > found->objective) {
          found = LocalSolution{s.partial(), slots, std::vector<uint8_t>(n)};
          for (int v = 0; v < n; ++v) found->colors[v] = s.Color(v);
        }
        return;
      }
      for (int t = 0; t < 3; ++t) {
        if (!(s.domain(u) >> t & 1)) continue;
        auto mark = s.Save();
        if (s.Assign(u, t) && s.Bound() >= 0 && (!found || s.Bound() > found->objective)) {
          slots[u] = static_cast<uint8_t>(t);
          dfs(u + 1);
        }
        s.Undo(mark);
      }
    };
    dfs(0);
    if (!found) break;
    cuts.insert(found->slots);
    PoolEntry e;
    e.objective = found->objective;
    for (uint8_t t : found->slots) e.assignment.types.push_back(kIlpTypes[t]);
    e.assignment.colors = found->colors;
    pool.entries.push_back(std::move(e));
  }
  return pool;
}

std::string SerializePool(const IlpModel& model, const SolutionPool& pool) {
  std::vector<int> by_id(model.latch_count());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(),
            [&](int a, int b) { return model.latch_ids[a] < model.latch_ids[b]; });
  std::string out;
  for (const auto& e : pool.entries) {
    out += fmt::format("{:.10f}", ObjectiveValue(e.objective));
    char sep = '\t';
    for (int i : by_id) {
      out += fmt::format("{}{}:{}:{}", sep, model.latch_ids[i],
                         LatchTypeName(e.assignment.types[i]), int(e.assignment.colors[i]));
      sep = ' ';
    }
    out += '\n';
  }
  return out;
}

}  // namespace lbll
