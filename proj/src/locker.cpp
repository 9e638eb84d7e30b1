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

#include "locker.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "seqgraph.hpp"

namespace lbll {

namespace {

using DK = NetlistIndex::Driver::Kind;
using RK = NetlistIndex::Reader::Kind;

std::string TempName(int& counter) { return fmt::format("{}t{}", kGeneratedPrefix, counter++); }

std::string_view StyleName(DecoyStyle s) {
  switch (s) {
    case DecoyStyle::kMux: return "MUX";
    case DecoyStyle::kOr: return "OR";
    case DecoyStyle::kXor: return "XOR";
  }
  return "?";
}

// Number of gates in the combinational fan-in cone of each flip-flop's data.
std::vector<int> FaninConeSizes(const NetlistIndex& index) {
  const int n_ff = static_cast<int>(index.netlist().flipflops.size());
  std::vector<int> stamp(index.net_count(), -1);
  std::vector<int> sizes(n_ff, 0);
  std::vector<int> stack;
  for (int f = 0; f < n_ff; ++f) {
    stack.assign(1, index.ff_data(f));
    stamp[stack[0]] = f;
    while (!stack.empty()) {
      int net = stack.back();
      stack.pop_back();
      const auto& d = index.driver(net);
      if (d.kind != DK::kGate) continue;
      ++sizes[f];
      for (int in : index.gate_inputs(d.index)) {
        if (stamp[in] != f) {
          stamp[in] = f;
          stack.push_back(in);
        }
      }
    }
  }
  return sizes;
}

// Nets reachable through gates from `starts`, including the starts.
std::vector<char> ForwardReach(const NetlistIndex& index, const std::vector<int>& starts) {
  std::vector<char> seen(index.net_count(), 0);
  std::vector<int> stack;
  for (int s : starts) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int net = stack.back();
    stack.pop_back();
    for (const auto& r : index.readers(net)) {
      if (r.kind != RK::kGate) continue;
      int out = index.gate_output(r.index);
      if (!seen[out]) {
        seen[out] = 1;
        stack.push_back(out);
      }
    }
  }
  return seen;
}

void RenameNets(Netlist& nl, const std::unordered_map<std::string, std::string>& map) {
  auto fix = [&](std::string& s) {
    auto it = map.find(s);
    if (it != map.end()) s = it->second;
  };
  for (auto& g : nl.gates) {
    fix(g.output);
    for (auto& in : g.inputs) fix(in);
  }
  for (auto& f : nl.flipflops) {
    fix(f.output);
    fix(f.data);
  }
  for (auto& l : nl.latches) {
    fix(l.output);
    fix(l.data);
  }
  for (auto& o : nl.outputs) fix(o);
}

KeyedLatch& AddLatch(Netlist& nl, GroundTruth& truth, std::string output, std::string data,
                     LatchType type) {
  const int id = static_cast<int>(nl.latches.size());
  nl.latches.push_back({id, std::move(output), std::move(data), id});
  truth[id] = type;
  return nl.latches.back();
}

}  // namespace

void ValidateLockConfig(const LockConfig& c) {
  if (!(c.ff_fraction > 0.0 && c.ff_fraction <= 1.0)) {
    ValidationError(fmt::format("ff_fraction must be in (0,1], got {}", c.ff_fraction));
  }
  if (!std::isfinite(c.delay_decoy_rate) || c.delay_decoy_rate < 0) {
    ValidationError("delay_decoy_rate must be finite and non-negative");
  }
  if (!std::isfinite(c.logic_decoy_rate) || c.logic_decoy_rate < 0) {
    ValidationError("logic_decoy_rate must be finite and non-negative");
  }
  if (c.logic_decoy_rate > 0 && c.logic_decoy_styles.empty()) {
    ValidationError("logic_decoy_rate > 0 needs at least one decoy style");
  }
}

int KeyBits(LatchType type) {
  switch (type) {
    case LatchType::kLogicDecoy: return 0b00;
    case LatchType::kDelayDecoy: return 0b01;
    case LatchType::kPrimary: return 0b10;
    case LatchType::kSecondary: return 0b11;
  }
  return 0;
}

LatchType TypeFromKeyBits(int bits) {
  switch (bits & 3) {
    case 0b00: return LatchType::kLogicDecoy;
    case 0b01: return LatchType::kDelayDecoy;
    case 0b10: return LatchType::kPrimary;
    default: return LatchType::kSecondary;
  }
}

std::string KeyEncodingText() {
  return "LOGIC_DECOY=00,DELAY_DECOY=01,PRIMARY=10,SECONDARY=11";
}

std::vector<int> SelectFlipFlops(const Netlist& netlist, const LockConfig& config) {
  const int n_ff = static_cast<int>(netlist.flipflops.size());
  if (n_ff == 0) return {};
  const int target = std::min<int>(
      n_ff, static_cast<int>(std::ceil(config.ff_fraction * n_ff - 1e-9)));

  NetlistIndex index(netlist);
  SequentialGraph g = ExtractGraph(index);
  const int ff_base = static_cast<int>(netlist.inputs.size() + netlist.outputs.size());
  std::vector<std::vector<int>> adj(n_ff);
  for (int f = 0; f < n_ff; ++f) {
    for (int v : g.succ[ff_base + f]) {
      if (g.kind[v] == NodeKind::kFlipFlop && v - ff_base != f) {
        adj[f].push_back(v - ff_base);
        adj[v - ff_base].push_back(f);
      }
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  std::vector<int> cone = FaninConeSizes(index);
  std::vector<int> order(n_ff);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cone[a] > cone[b]; });

  Rng rng(DeriveSeed(config.seed, 1));
  std::vector<char> taken(n_ff, 0);
  std::vector<int> selected;
  size_t next_seed = 0;
  while (static_cast<int>(selected.size()) < target) {
    while (taken[order[next_seed]]) ++next_seed;
    std::deque<int> queue = {order[next_seed]};
    taken[order[next_seed]] = 1;
    while (!queue.empty() && static_cast<int>(selected.size()) < target) {
      int f = queue.front();
      queue.pop_front();
      selected.push_back(f);
      std::vector<int> nbrs = adj[f];
      Shuffle(nbrs, rng);
      for (int n : nbrs) {
        if (!taken[n]) {
          taken[n] = 1;
          queue.push_back(n);
        }
      }
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

void SplitToLatches(Netlist& netlist, GroundTruth& truth, const std::vector<int>& selected) {
  int counter = 0;
  for (const auto& l : netlist.latches) counter = std::max(counter, l.id + 1);
  std::vector<char> remove(netlist.flipflops.size(), 0);
  for (int f : selected) {
    if (f < 0 || f >= static_cast<int>(netlist.flipflops.size())) {
      ValidationError(fmt::format("flip-flop index {} out of range", f));
    }
    remove[f] = 1;
  }
  std::vector<FlipFlop> kept;
  int name_counter = 0;
  for (size_t f = 0; f < netlist.flipflops.size(); ++f) {
    const FlipFlop& ff = netlist.flipflops[f];
    if (!remove[f]) {
      kept.push_back(ff);
      continue;
    }
    std::string p = fmt::format("{}p{}", kGeneratedPrefix, name_counter++);
    netlist.latches.push_back({counter, p, ff.data, counter});
    truth[counter++] = LatchType::kPrimary;
    netlist.latches.push_back({counter, ff.output, p, counter});
    truth[counter++] = LatchType::kSecondary;
  }
  netlist.flipflops = std::move(kept);
}

InsertStats InsertDelayDecoys(Netlist& nl, GroundTruth& truth, int count, Rng& rng,
                              int& name_counter) {
  InsertStats stats;
  stats.requested = count;
  for (int k = 0; k < count; ++k) {
    NetlistIndex index(nl);
    // Latches (by position) whose output has at least one rewirable reader.
    std::vector<int> eligible;
    for (size_t pos = 0; pos < nl.latches.size(); ++pos) {
      if (truth.at(nl.latches[pos].id) == LatchType::kLogicDecoy) continue;
      for (const auto& r : index.readers(index.latch_output(int(pos)))) {
        if (r.kind != RK::kOutput) {
          eligible.push_back(int(pos));
          break;
        }
      }
    }
    if (eligible.empty()) break;
    const int pos = eligible[UniformIndex(rng, eligible.size())];
    std::vector<NetlistIndex::Reader> pins;
    for (const auto& r : index.readers(index.latch_output(pos))) {
      if (r.kind != RK::kOutput) pins.push_back(r);
    }
    const NetlistIndex::Reader pin = pins[UniformIndex(rng, pins.size())];
    std::string source = nl.latches[pos].output;
    std::string out = TempName(name_counter);
    switch (pin.kind) {
      case RK::kGate: nl.gates[pin.index].inputs[pin.pin] = out; break;
      case RK::kFlipFlop: nl.flipflops[pin.index].data = out; break;
      case RK::kLatch: nl.latches[pin.index].data = out; break;
      case RK::kOutput: break;
    }
    AddLatch(nl, truth, out, source, LatchType::kDelayDecoy);
    ++stats.inserted;
  }
  return stats;
}

InsertStats InsertLogicDecoys(Netlist& nl, GroundTruth& truth, int count,
                              const std::vector<DecoyStyle>& styles, Rng& rng,
                              int& name_counter) {
  InsertStats stats;
  stats.requested = count;
  if (count > 0 && styles.empty()) ValidationError("no logic decoy style enabled");
  for (int k = 0; k < count; ++k) {
    NetlistIndex index(nl);
    std::vector<int> latch_outs;
    for (size_t pos = 0; pos < nl.latches.size(); ++pos) {
      if (truth.at(nl.latches[pos].id) != LatchType::kLogicDecoy) {
        latch_outs.push_back(index.latch_output(int(pos)));
      }
    }
    std::vector<char> in_region = ForwardReach(index, latch_outs);
    std::vector<int> region;
    for (int n = 0; n < index.net_count(); ++n) {
      if (in_region[n]) region.push_back(n);
    }
    if (region.empty()) break;
    const int target = region[UniformIndex(rng, region.size())];

    std::vector<int> taps;
    for (int n = 0; n < index.net_count(); ++n) {
      if (n == target) continue;
      const auto& d = index.driver(n);
      if (d.kind == DK::kGate) {
        GateKind gk = nl.gates[d.index].kind;
        if (gk == GateKind::kConst0 || gk == GateKind::kConst1) continue;
      } else if (d.kind == DK::kLatch) {
        if (truth.at(nl.latches[d.index].id) == LatchType::kLogicDecoy) continue;
      } else if (d.kind == DK::kNone) {
        continue;
      }
      taps.push_back(n);
    }
    if (taps.empty()) break;
    const int tap = taps[UniformIndex(rng, taps.size())];

    DecoyStyle style = styles[UniformIndex(rng, styles.size())];
    int other = -1;
    if (style == DecoyStyle::kMux) {
      std::vector<char> downstream = ForwardReach(index, {target});
      std::vector<int> candidates;
      for (int n : region) {
        if (!downstream[n]) candidates.push_back(n);
      }
      if (candidates.empty()) {
        ++stats.fallbacks;
        std::vector<DecoyStyle> rest;
        for (DecoyStyle s : styles) {
          if (s != DecoyStyle::kMux) rest.push_back(s);
        }
        style = rest.empty() ? DecoyStyle::kOr : rest[UniformIndex(rng, rest.size())];
      } else {
        other = candidates[UniformIndex(rng, candidates.size())];
      }
    }

    const std::string target_name = index.NetName(target);
    const std::string near = TempName(name_counter);
    const std::string decoy = TempName(name_counter);
    const std::string tap_name = index.NetName(tap);
    const std::string other_name = other >= 0 ? index.NetName(other) : "";
    const auto driver = index.driver(target);
    if (driver.kind == DK::kGate) {
      nl.gates[driver.index].output = near;
    } else {
      nl.latches[driver.index].output = near;
    }
    Gate g;
    g.output = target_name;
    switch (style) {
      case DecoyStyle::kMux:
        g.kind = GateKind::kMux;
        g.inputs = {decoy, near, other_name};
        break;
      case DecoyStyle::kOr:
        g.kind = GateKind::kOr;
        g.inputs = {near, decoy};
        break;
      case DecoyStyle::kXor:
        g.kind = GateKind::kXor;
        g.inputs = {near, decoy};
        break;
    }
    nl.gates.push_back(std::move(g));
    AddLatch(nl, truth, decoy, tap_name, LatchType::kLogicDecoy);
    ++stats.inserted;
  }
  return stats;
}

LockResult Lock(const Netlist& netlist, const LockConfig& config) {
  ValidateLockConfig(config);
  Validate(netlist);
  if (!netlist.latches.empty()) ValidationError("input netlist is already locked");
  auto reserved = [](const std::string& s) { return s.starts_with(kGeneratedPrefix); };
  for (const auto& in : netlist.inputs) {
    if (reserved(in)) ValidationError(fmt::format("net '{}' uses the reserved prefix", in));
  }
  for (const auto& g : netlist.gates) {
    if (reserved(g.output)) ValidationError(fmt::format("net '{}' uses the reserved prefix", g.output));
  }
  for (const auto& f : netlist.flipflops) {
    if (reserved(f.output)) ValidationError(fmt::format("net '{}' uses the reserved prefix", f.output));
  }

  LockResult r;
  r.netlist = netlist;
  std::vector<int> selected = SelectFlipFlops(netlist, config);
  SplitToLatches(r.netlist, r.truth, selected);

  const int n_sel = static_cast<int>(selected.size());
  int name_counter = 0;
  Rng dd_rng(DeriveSeed(config.seed, 2));
  InsertStats dd = InsertDelayDecoys(r.netlist, r.truth,
                                     static_cast<int>(std::llround(config.delay_decoy_rate * n_sel)),
                                     dd_rng, name_counter);
  Rng ld_rng(DeriveSeed(config.seed, 3));
  InsertStats ld = InsertLogicDecoys(
      r.netlist, r.truth, static_cast<int>(std::llround(config.logic_decoy_rate * n_sel)),
      config.logic_decoy_styles, ld_rng, name_counter);

  // Permute ids, key slots and generated names.
  Rng perm_rng(DeriveSeed(config.seed, 4));
  const int n = static_cast<int>(r.netlist.latches.size());
  std::vector<int> new_id(n), new_key(n);
  std::iota(new_id.begin(), new_id.end(), 0);
  std::iota(new_key.begin(), new_key.end(), 0);
  Shuffle(new_id, perm_rng);
  Shuffle(new_key, perm_rng);
  GroundTruth truth;
  for (auto& l : r.netlist.latches) {
    truth[new_id[l.id]] = r.truth.at(l.id);
    l.key_index = new_key[l.id];
    l.id = new_id[l.id];
  }
  r.truth = std::move(truth);

  std::vector<std::string> generated;
  for (const auto& l : r.netlist.latches) {
    if (reserved(l.output)) generated.push_back(l.output);
  }
  for (const auto& g : r.netlist.gates) {
    if (reserved(g.output)) generated.push_back(g.output);
  }
  std::sort(generated.begin(), generated.end());
  std::vector<int> name_perm(generated.size());
  std::iota(name_perm.begin(), name_perm.end(), 0);
  Shuffle(name_perm, perm_rng);
  std::unordered_map<std::string, std::string> rename;
  for (size_t i = 0; i < generated.size(); ++i) {
    rename[generated[i]] = fmt::format("{}n{}", kGeneratedPrefix, name_perm[i]);
  }
  RenameNets(r.netlist, rename);
  r.netlist = Canonicalize(std::move(r.netlist));
  Validate(r.netlist);

  int counts[4] = {0, 0, 0, 0};
  for (const auto& [id, t] : r.truth) ++counts[static_cast<int>(t)];
  std::string styles;
  for (DecoyStyle s : config.logic_decoy_styles) {
    if (!styles.empty()) styles += ',';
    styles += StyleName(s);
  }
  KeyValueFile& m = r.manifest;
  m.Set("netlist", netlist.name);
  m.Set("seed", std::to_string(config.seed));
  m.SetReal("ff_fraction", config.ff_fraction);
  m.SetReal("delay_decoy_rate", config.delay_decoy_rate);
  m.SetReal("logic_decoy_rate", config.logic_decoy_rate);
  m.Set("logic_decoy_styles", styles);
  m.Set("key_encoding", KeyEncodingText());
  m.Set("flipflops", static_cast<int>(netlist.flipflops.size()));
  m.Set("selected_flipflops", n_sel);
  m.Set("latches", n);
  m.Set("key_bits", 2 * n);
  m.Set("primary", counts[0]);
  m.Set("secondary", counts[1]);
  m.Set("delay_decoys", counts[2]);
  m.Set("logic_decoys", counts[3]);
  m.Set("delay_decoys_requested", dd.requested);
  m.Set("delay_decoys_saturated", dd.requested - dd.inserted);
  m.Set("logic_decoys_requested", ld.requested);
  m.Set("logic_decoys_saturated", ld.requested - ld.inserted);
  m.Set("logic_decoy_mux_fallbacks", ld.fallbacks);
  return r;
}

}  // namespace lbll
