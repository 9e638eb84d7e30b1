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

#include "netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace lbll {

std::string_view LatchTypeName(LatchType t) {
  switch (t) {
    case LatchType::kPrimary: return "PRIMARY";
    case LatchType::kSecondary: return "SECONDARY";
    case LatchType::kDelayDecoy: return "DELAY_DECOY";
    case LatchType::kLogicDecoy: return "LOGIC_DECOY";
  }
  return "?";
}

std::optional<LatchType> ParseLatchType(std::string_view token) {
  for (LatchType t : kAllLatchTypes) {
    if (token == LatchTypeName(t)) return t;
  }
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 11> kGateNames = {{
    {GateKind::kAnd, "AND"},
    {GateKind::kNand, "NAND"},
    {GateKind::kOr, "OR"},
    {GateKind::kNor, "NOR"},
    {GateKind::kXor, "XOR"},
    {GateKind::kXnor, "XNOR"},
    {GateKind::kNot, "NOT"},
    {GateKind::kBuf, "BUF"},
    {GateKind::kMux, "MUX"},
    {GateKind::kConst0, "CONST0"},
    {GateKind::kConst1, "CONST1"},
}};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool ValidNetName(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
        c == ',' || c == '=' || c == '#') {
      return false;
    }
  }
  return true;
}

// Source line of every element, when the netlist came from text.
struct ElementLines {
  std::vector<int> input, output, gate, ff, latch;
};

std::string At(const std::vector<int>* lines, size_t i) {
  if (lines == nullptr || i >= lines->size()) return "";
  return fmt::format("line {}: ", (*lines)[i]);
}

void CheckStructure(const Netlist& nl, const ElementLines* where) {
  const auto* in_l = where ? &where->input : nullptr;
  const auto* out_l = where ? &where->output : nullptr;
  const auto* gate_l = where ? &where->gate : nullptr;
  const auto* ff_l = where ? &where->ff : nullptr;
  const auto* latch_l = where ? &where->latch : nullptr;

  // Driver table; remember a description of the first driver for messages.
  std::unordered_map<std::string_view, std::string> driven;
  auto define = [&](const std::string& net, const std::string& at,
                    const std::string& what) {
    if (!ValidNetName(net)) ValidationError(fmt::format("{}invalid net name '{}'", at, net));
    auto [it, fresh] = driven.emplace(net, what);
    if (!fresh) {
      ValidationError(fmt::format("{}duplicate driver for net '{}' (already driven by {})",
                                  at, net, it->second));
    }
  };
  for (size_t i = 0; i < nl.inputs.size(); ++i) {
    define(nl.inputs[i], At(in_l, i), "a primary input");
  }
  for (size_t i = 0; i < nl.gates.size(); ++i) {
    const Gate& g = nl.gates[i];
    if (!ArityOk(g.kind, g.inputs.size())) {
      ValidationError(fmt::format("{}arity mismatch: {} with {} input(s)", At(gate_l, i),
                                  GateKindName(g.kind), g.inputs.size()));
    }
    define(g.output, At(gate_l, i), fmt::format("gate {}", GateKindName(g.kind)));
  }
  for (size_t i = 0; i < nl.flipflops.size(); ++i) {
    define(nl.flipflops[i].output, At(ff_l, i), "a flip-flop");
  }
  std::set<int> ids, keys;
  for (size_t i = 0; i < nl.latches.size(); ++i) {
    const KeyedLatch& l = nl.latches[i];
    define(l.output, At(latch_l, i), "a latch");
    if (!ids.insert(l.id).second) {
      ValidationError(fmt::format("{}duplicate latch id {}", At(latch_l, i), l.id));
    }
    if (l.key_index < 0 || !keys.insert(l.key_index).second) {
      ValidationError(fmt::format("{}duplicate or negative key index K{}", At(latch_l, i),
                                  l.key_index));
    }
  }

  auto use = [&](const std::string& net, const std::string& at) {
    if (!driven.contains(net)) ValidationError(fmt::format("{}undefined net '{}'", at, net));
  };
  for (size_t i = 0; i < nl.outputs.size(); ++i) use(nl.outputs[i], At(out_l, i));
  for (size_t i = 0; i < nl.gates.size(); ++i) {
    for (const auto& in : nl.gates[i].inputs) use(in, At(gate_l, i));
  }
  for (size_t i = 0; i < nl.flipflops.size(); ++i) use(nl.flipflops[i].data, At(ff_l, i));
  for (size_t i = 0; i < nl.latches.size(); ++i) use(nl.latches[i].data, At(latch_l, i));

  // Kahn's algorithm over gates only; latches and flip-flops cut cycles.
  std::unordered_map<std::string_view, int> gate_of;
  for (size_t i = 0; i < nl.gates.size(); ++i) gate_of[nl.gates[i].output] = static_cast<int>(i);
  std::vector<int> pending(nl.gates.size(), 0);
  std::vector<std::vector<int>> fanout(nl.gates.size());
  for (size_t i = 0; i < nl.gates.size(); ++i) {
    for (const auto& in : nl.gates[i].inputs) {
      auto it = gate_of.find(in);
      if (it != gate_of.end()) {
        ++pending[i];
        fanout[it->second].push_back(static_cast<int>(i));
      }
    }
  }
  std::vector<int> ready;
  for (size_t i = 0; i < pending.size(); ++i) {
    if (pending[i] == 0) ready.push_back(static_cast<int>(i));
  }
  size_t done = 0;
  while (!ready.empty()) {
    int g = ready.back();
    ready.pop_back();
    ++done;
    for (int h : fanout[g]) {
      if (--pending[h] == 0) ready.push_back(h);
    }
  }
  if (done != nl.gates.size()) {
    for (size_t i = 0; i < pending.size(); ++i) {
      if (pending[i] > 0) {
        ValidationError(fmt::format("{}combinational cycle through net '{}'", At(gate_l, i),
                                    nl.gates[i].output));
      }
    }
  }
}

struct ParsedLine {
  enum class Kind { kNone, kInput, kOutput, kAssign } kind = Kind::kNone;
  std::string lhs;
  std::string op;
  std::vector<std::string> args;
};

ParsedLine ParseLine(std::string_view raw, int line_no) {
  ParsedLine out;
  auto hash = raw.find('#');
  std::string_view s = Trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
  if (s.empty()) return out;
  auto fail = [&](std::string_view msg) -> ParsedLine {
    ValidationError(fmt::format("line {}: {}", line_no, msg));
  };

  auto split_call = [&](std::string_view call, std::string& op,
                        std::vector<std::string>& args) {
    auto open = call.find('(');
    auto close = call.rfind(')');
    if (open == std::string_view::npos) {
      // Bare constant such as `x = CONST0`.
      op = Upper(Trim(call));
      return;
    }
    if (close == std::string_view::npos || close < open || !Trim(call.substr(close + 1)).empty()) {
      fail("malformed expression");
    }
    op = Upper(Trim(call.substr(0, open)));
    std::string_view inner = Trim(call.substr(open + 1, close - open - 1));
    if (inner.empty()) return;
    size_t pos = 0;
    while (true) {
      auto comma = inner.find(',', pos);
      std::string_view arg =
          Trim(inner.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                 : comma - pos));
      if (!ValidNetName(arg)) fail(fmt::format("invalid net name '{}'", arg));
      args.emplace_back(arg);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  };

  auto eq = s.find('=');
  if (eq == std::string_view::npos) {
    std::string op;
    std::vector<std::string> args;
    split_call(s, op, args);
    if ((op != "INPUT" && op != "OUTPUT") || args.size() != 1) {
      fail(fmt::format("unrecognized declaration '{}'", s));
    }
    out.kind = op == "INPUT" ? ParsedLine::Kind::kInput : ParsedLine::Kind::kOutput;
    out.lhs = args[0];
    return out;
  }
  out.kind = ParsedLine::Kind::kAssign;
  out.lhs = std::string(Trim(s.substr(0, eq)));
  if (!ValidNetName(out.lhs)) fail(fmt::format("invalid net name '{}'", out.lhs));
  split_call(Trim(s.substr(eq + 1)), out.op, out.args);
  return out;
}

struct ParseResult {
  Netlist netlist;
  ElementLines lines;
};

ParseResult ParseText(std::string_view text, std::string name, bool allow_latches) {
  ParseResult r;
  Netlist& nl = r.netlist;
  nl.name = std::move(name);
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    auto nl_pos = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl_pos == std::string_view::npos ? std::string_view::npos : nl_pos - pos);
    ++line_no;
    pos = nl_pos == std::string_view::npos ? text.size() + 1 : nl_pos + 1;

    std::string_view t = Trim(raw);
    if (t.starts_with("# lbll-netlist ") && nl.name.empty()) {
      nl.name = std::string(Trim(t.substr(15)));
      continue;
    }
    ParsedLine p = ParseLine(raw, line_no);
    switch (p.kind) {
      case ParsedLine::Kind::kNone:
        break;
      case ParsedLine::Kind::kInput:
        nl.inputs.push_back(p.lhs);
        r.lines.input.push_back(line_no);
        break;
      case ParsedLine::Kind::kOutput:
        nl.outputs.push_back(p.lhs);
        r.lines.output.push_back(line_no);
        break;
      case ParsedLine::Kind::kAssign:
        if (p.op == "DFF") {
          if (p.args.size() != 1) {
            ValidationError(fmt::format("line {}: arity mismatch: DFF with {} input(s)", line_no,
                                        p.args.size()));
          }
          nl.flipflops.push_back({p.lhs, p.args[0]});
          r.lines.ff.push_back(line_no);
        } else if (p.op == "LATCH") {
          if (!allow_latches) {
            ValidationError(fmt::format("line {}: LATCH is only valid in locked netlists", line_no));
          }
          if (p.args.size() != 2 || p.args[1].size() < 2 || p.args[1][0] != 'K') {
            ValidationError(fmt::format("line {}: expected LATCH(data, K<index>)", line_no));
          }
          int key = -1;
          const std::string& k = p.args[1];
          auto [ptr, ec] = std::from_chars(k.data() + 1, k.data() + k.size(), key);
          if (ec != std::errc() || ptr != k.data() + k.size()) {
            ValidationError(fmt::format("line {}: bad key slot '{}'", line_no, k));
          }
          KeyedLatch latch;
          latch.id = static_cast<int>(nl.latches.size());
          latch.output = p.lhs;
          latch.data = p.args[0];
          latch.key_index = key;
          nl.latches.push_back(std::move(latch));
          r.lines.latch.push_back(line_no);
        } else {
          auto kind = ParseGateKind(p.op);
          if (!kind) ValidationError(fmt::format("line {}: unknown gate kind '{}'", line_no, p.op));
          nl.gates.push_back({p.lhs, *kind, std::move(p.args)});
          r.lines.gate.push_back(line_no);
        }
        break;
    }
  }
  CheckStructure(nl, &r.lines);
  return r;
}

void AppendGate(std::string& out, const std::string& lhs, std::string_view op,
                const std::vector<std::string>& args) {
  out += lhs;
  out += " = ";
  out += op;
  out += '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i];
  }
  out += ")\n";
}

}  // namespace

std::string_view GateKindName(GateKind kind) {
  for (const auto& [k, name] : kGateNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<GateKind> ParseGateKind(std::string_view token) {
  std::string up = Upper(token);
  if (up == "BUFF") return GateKind::kBuf;
  if (up == "INV") return GateKind::kNot;
  for (const auto& [k, name] : kGateNames) {
    if (up == name) return k;
  }
  return std::nullopt;
}

bool ArityOk(GateKind kind, size_t arity) {
  switch (kind) {
    case GateKind::kNot:
    case GateKind::kBuf:
      return arity == 1;
    case GateKind::kMux:
      return arity == 3;
    case GateKind::kConst0:
    case GateKind::kConst1:
      return arity == 0;
    default:
      return arity >= 2;
  }
}

const KeyedLatch* Netlist::FindLatch(int id) const {
  for (const auto& l : latches) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

void Validate(const Netlist& netlist) { CheckStructure(netlist, nullptr); }

Netlist Canonicalize(Netlist netlist) {
  auto by_output = [](const auto& a, const auto& b) { return a.output < b.output; };
  std::sort(netlist.gates.begin(), netlist.gates.end(), by_output);
  std::sort(netlist.flipflops.begin(), netlist.flipflops.end(), by_output);
  std::sort(netlist.latches.begin(), netlist.latches.end(),
            [](const KeyedLatch& a, const KeyedLatch& b) { return a.id < b.id; });
  return netlist;
}

Netlist ParseBench(std::string_view text, std::string name) {
  return ParseText(text, std::move(name), /*allow_latches=*/false).netlist;
}

GroundTruth ParseSidecar(std::string_view sidecar) {
  GroundTruth truth;
  int line_no = 0;
  size_t pos = 0;
  while (pos < sidecar.size()) {
    auto end = sidecar.find('\n', pos);
    std::string_view raw = sidecar.substr(pos, end == std::string_view::npos ? std::string_view::npos
                                                                             : end - pos);
    pos = end == std::string_view::npos ? sidecar.size() : end + 1;
    ++line_no;
    auto hash = raw.find('#');
    std::string_view s = Trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto sep = s.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      ValidationError(fmt::format("sidecar line {}: expected 'latch_id<TAB>TYPE'", line_no));
    }
    std::string_view id_tok = s.substr(0, sep);
    std::string_view type_tok = Trim(s.substr(sep));
    int id = -1;
    auto [ptr, ec] = std::from_chars(id_tok.data(), id_tok.data() + id_tok.size(), id);
    if (ec != std::errc() || ptr != id_tok.data() + id_tok.size() || id < 0) {
      ValidationError(fmt::format("sidecar line {}: bad latch id '{}'", line_no, id_tok));
    }
    auto type = ParseLatchType(type_tok);
    if (!type) {
      ValidationError(fmt::format("sidecar line {}: unknown latch type '{}'", line_no, type_tok));
    }
    if (!truth.emplace(id, *type).second) {
      ValidationError(fmt::format("sidecar line {}: duplicate latch id {}", line_no, id));
    }
  }
  return truth;
}

std::string WriteSidecar(const GroundTruth& truth) {
  std::string out;
  for (const auto& [id, type] : truth) {
    out += fmt::format("{}\t{}\n", id, LatchTypeName(type));
  }
  return out;
}

Netlist ParseLockedNetlist(std::string_view text, std::string name) {
  return ParseText(text, std::move(name), /*allow_latches=*/true).netlist;
}

std::pair<Netlist, GroundTruth> ParseLocked(std::string_view text, std::string_view sidecar,
                                            std::string name) {
  ParseResult r = ParseText(text, std::move(name), /*allow_latches=*/true);
  GroundTruth truth = ParseSidecar(sidecar);
  if (truth.size() != r.netlist.latches.size()) {
    ValidationError(fmt::format("sidecar covers {} latches but netlist has {}", truth.size(),
                                r.netlist.latches.size()));
  }
  for (const auto& l : r.netlist.latches) {
    if (!truth.contains(l.id)) ValidationError(fmt::format("sidecar is missing latch {}", l.id));
  }
  return {std::move(r.netlist), std::move(truth)};
}

std::string WriteBench(const Netlist& netlist) {
  Netlist c = Canonicalize(netlist);
  for (size_t i = 0; i < c.latches.size(); ++i) {
    if (c.latches[i].id != static_cast<int>(i)) {
      ValidationError("latch ids must be dense 0..n-1 to be written");
    }
  }
  std::string out;
  if (!c.name.empty()) out += fmt::format("# lbll-netlist {}\n", c.name);
  for (const auto& in : c.inputs) out += fmt::format("INPUT({})\n", in);
  for (const auto& o : c.outputs) out += fmt::format("OUTPUT({})\n", o);
  for (const auto& ff : c.flipflops) out += fmt::format("{} = DFF({})\n", ff.output, ff.data);
  for (const auto& l : c.latches) {
    out += fmt::format("{} = LATCH({}, K{})\n", l.output, l.data, l.key_index);
  }
  for (const auto& g : c.gates) AppendGate(out, g.output, GateKindName(g.kind), g.inputs);
  return out;
}

LockedText WriteLocked(const Netlist& netlist, const GroundTruth& truth) {
  for (const auto& [id, type] : truth) {
    if (netlist.FindLatch(id) == nullptr) {
      ValidationError(fmt::format("ground truth names latch {} which is not in the netlist", id));
    }
  }
  if (truth.size() != netlist.latches.size()) {
    ValidationError("ground truth does not cover every latch");
  }
  return {WriteBench(netlist), WriteSidecar(truth)};
}

// ---------------------------------------------------------------------------

KeyValueFile KeyValueFile::Parse(std::string_view text) {
  KeyValueFile kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    std::string_view s = Trim(std::string_view(line).substr(0, hash));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      ValidationError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    kv.Set(std::string(Trim(s.substr(0, eq))), std::string(Trim(s.substr(eq + 1))));
  }
  return kv;
}

std::string KeyValueFile::Serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += fmt::format("{} = {}\n", k, v);
  return out;
}

void KeyValueFile::Set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValueFile::SetReal(const std::string& key, double value) {
  Set(key, fmt::format("{}", value));
}

bool KeyValueFile::Has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

const std::string& KeyValueFile::Get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  ValidationError(fmt::format("missing key '{}'", key));
}

std::string KeyValueFile::GetOr(const std::string& key, const std::string& fallback) const {
  return Has(key) ? Get(key) : fallback;
}

long long KeyValueFile::GetInt(const std::string& key) const {
  const std::string& v = Get(key);
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    ValidationError(fmt::format("key '{}': expected an integer, got '{}'", key, v));
  }
  return out;
}

long long KeyValueFile::GetIntOr(const std::string& key, long long fallback) const {
  return Has(key) ? GetInt(key) : fallback;
}

double KeyValueFile::GetRealOr(const std::string& key, double fallback) const {
  if (!Has(key)) return fallback;
  const std::string& v = Get(key);
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    ValidationError(fmt::format("key '{}': expected a number, got '{}'", key, v));
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) IoError(fmt::format("cannot open '{}' for reading", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) IoError(fmt::format("cannot open '{}' for writing", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) IoError(fmt::format("write to '{}' failed", path));
}

// ---------------------------------------------------------------------------

NetlistIndex::NetlistIndex(const Netlist& nl) : netlist_(&nl) {
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = ids_.emplace(name, static_cast<int>(names_.size()));
    if (fresh) names_.push_back(name);
    return it->second;
  };
  for (const auto& in : nl.inputs) input_net_.push_back(intern(in));
  for (const auto& g : nl.gates) gate_out_.push_back(intern(g.output));
  for (const auto& ff : nl.flipflops) ff_out_.push_back(intern(ff.output));
  for (const auto& l : nl.latches) latch_out_.push_back(intern(l.output));

  drivers_.assign(names_.size(), {});
  using DK = Driver::Kind;
  for (size_t i = 0; i < input_net_.size(); ++i) drivers_[input_net_[i]] = {DK::kInput, int(i)};
  for (size_t i = 0; i < gate_out_.size(); ++i) drivers_[gate_out_[i]] = {DK::kGate, int(i)};
  for (size_t i = 0; i < ff_out_.size(); ++i) drivers_[ff_out_[i]] = {DK::kFlipFlop, int(i)};
  for (size_t i = 0; i < latch_out_.size(); ++i) drivers_[latch_out_[i]] = {DK::kLatch, int(i)};

  auto lookup = [&](const std::string& name) {
    auto it = ids_.find(name);
    if (it == ids_.end()) ValidationError(fmt::format("undefined net '{}'", name));
    return it->second;
  };
  gate_in_begin_.push_back(0);
  for (const auto& g : nl.gates) {
    for (const auto& in : g.inputs) gate_in_.push_back(lookup(in));
    gate_in_begin_.push_back(static_cast<int>(gate_in_.size()));
  }
  for (const auto& ff : nl.flipflops) ff_data_.push_back(lookup(ff.data));
  for (const auto& l : nl.latches) latch_data_.push_back(lookup(l.data));
  for (const auto& o : nl.outputs) output_net_.push_back(lookup(o));

  using RK = Reader::Kind;
  std::vector<Reader> flat;
  std::vector<int> net_of;
  auto add = [&](int net, Reader r) {
    flat.push_back(r);
    net_of.push_back(net);
  };
  for (size_t g = 0; g < nl.gates.size(); ++g) {
    for (int p = gate_in_begin_[g]; p < gate_in_begin_[g + 1]; ++p) {
      add(gate_in_[p], {RK::kGate, int(g), p - gate_in_begin_[g]});
    }
  }
  for (size_t i = 0; i < ff_data_.size(); ++i) add(ff_data_[i], {RK::kFlipFlop, int(i), 0});
  for (size_t i = 0; i < latch_data_.size(); ++i) add(latch_data_[i], {RK::kLatch, int(i), 0});
  for (size_t i = 0; i < output_net_.size(); ++i) add(output_net_[i], {RK::kOutput, int(i), 0});
  reader_begin_.assign(names_.size() + 1, 0);
  for (int n : net_of) ++reader_begin_[n + 1];
  for (size_t i = 1; i < reader_begin_.size(); ++i) reader_begin_[i] += reader_begin_[i - 1];
  readers_.resize(flat.size());
  std::vector<int> fill(reader_begin_.begin(), reader_begin_.end() - 1);
  for (size_t i = 0; i < flat.size(); ++i) readers_[fill[net_of[i]]++] = flat[i];

  std::vector<int> pending(nl.gates.size(), 0);
  for (size_t g = 0; g < nl.gates.size(); ++g) {
    for (int in : gate_inputs(int(g))) {
      if (drivers_[in].kind == DK::kGate) ++pending[g];
    }
  }
  std::vector<int> ready;
  for (size_t g = nl.gates.size(); g-- > 0;) {
    if (pending[g] == 0) ready.push_back(int(g));
  }
  topo_.reserve(nl.gates.size());
  while (!ready.empty()) {
    int g = ready.back();
    ready.pop_back();
    topo_.push_back(g);
    for (const Reader& r : readers(gate_out_[g])) {
      if (r.kind == RK::kGate && --pending[r.index] == 0) ready.push_back(r.index);
    }
  }
  if (topo_.size() != nl.gates.size()) ValidationError("combinational cycle in netlist");
}

int NetlistIndex::NetId(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? -1 : it->second;
}

}  // namespace lbll
