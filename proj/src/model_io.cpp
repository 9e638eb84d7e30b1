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


#include "model_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace lbll {

std::vector<double> Model::PredictProba(const FeatureVector& x) const {
  return kind == Kind::kForest ? forest.PredictProba(x) : mlp.PredictProba(x);
}

namespace {

constexpr std::string_view kMagic = "LBLL-MODEL 1";

class Writer {
 public:
  void U32(uint32_t v) { Bytes(v, 4); }
  void I32(int32_t v) { Bytes(static_cast<uint32_t>(v), 4); }
  void U64(uint64_t v) { Bytes(v, 8); }
  void F64(double v) { Bytes(std::bit_cast<uint64_t>(v), 8); }
  std::string out;

 private:
  void Bytes(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  uint32_t U32() { return static_cast<uint32_t>(Bytes(4)); }
  int32_t I32() { return static_cast<int32_t>(static_cast<uint32_t>(Bytes(4))); }
  uint64_t U64() { return Bytes(8); }
  double F64() { return std::bit_cast<double>(Bytes(8)); }
  bool done() const { return pos_ == data_.size(); }

 private:
  uint64_t Bytes(int n) {
    if (pos_ + n > data_.size()) ValidationError("model payload is truncated");
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  std::string_view data_;
  size_t pos_ = 0;
};

std::string JoinReals(const FeatureVector& v) {
  std::string s;
  for (double x : v) s += fmt::format("{}{:.17g}", s.empty() ? "" : " ", x);
  return s;
}

FeatureVector ParseReals(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  FeatureVector v{};
  for (double& x : v) {
    std::string tok;
    if (!(in >> tok)) ValidationError(fmt::format("model header '{}' has too few values", key));
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      ValidationError(fmt::format("model header '{}' has a bad value '{}'", key, tok));
    }
  }
  return v;
}

// key=value tokens of one header line.
std::map<std::string, std::string> ParseAttrs(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) ValidationError(fmt::format("bad model attribute '{}'", tok));
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

template <typename T>
T Number(const std::string& s, const std::string& what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    ValidationError(fmt::format("model header: bad {} '{}'", what, s));
  }
  return v;
}

const std::string& Need(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) ValidationError(fmt::format("model header lacks '{}'", key));
  return it->second;
}

}  // namespace

std::string SerializeModel(const Model& model) {
  std::string head = fmt::format("{}\n", kMagic);
  Writer w;
  head += fmt::format("kind {}\n", model.kind == Model::Kind::kForest ? "forest" : "mlp");
  head += fmt::format("scheme {}\n", LabelSchemeName(model.scheme));
  head += fmt::format("classes {}\nfeatures {}\n", model.class_count(), kFeatureCount);
  if (model.kind == Model::Kind::kForest) {
    const auto& f = model.forest;
    if (f.class_count != model.class_count()) ValidationError("forest class count mismatch");
    head += fmt::format("seed {}\n", f.params.seed);
    head += fmt::format("arch trees={} max_depth={} min_leaf={} mtry={} class_weights={}\n",
                        f.trees.size(), f.params.max_depth, f.params.min_leaf, f.params.mtry,
                        f.params.class_weights ? 1 : 0);
    head += fmt::format("oob_accuracy {:.17g}\n", f.oob_accuracy);
    w.U32(static_cast<uint32_t>(f.trees.size()));
    for (const auto& t : f.trees) {
      w.U32(static_cast<uint32_t>(t.nodes.size()));
      for (const auto& n : t.nodes) {
        w.I32(n.feature);
        w.F64(n.threshold);
        w.I32(n.left);
        w.I32(n.right);
        w.I32(n.label);
      }
    }
  } else {
    const auto& m = model.mlp;
    if (m.class_count() != model.class_count()) ValidationError("network class count mismatch");
    const auto& p = m.train_params;
    head += fmt::format("seed {}\n", p.seed);
    std::string arch;
    for (int s : m.sizes()) arch += fmt::format("{}{}", arch.empty() ? "" : "-", s);
    head += fmt::format("arch {}\n", arch);
    head += fmt::format(
        "train epochs={} batch={} learning_rate={:.17g} decay={:.17g} patience={} "
        "class_weights={}\n",
        p.epochs, p.batch, p.learning_rate, p.decay, p.patience, p.class_weights ? 1 : 0);
    head += fmt::format("epochs_run {}\nvalidation_loss {:.17g}\n", m.epochs_run, m.validation_loss);
    head += fmt::format("mean {}\nscale {}\n", JoinReals(m.mean), JoinReals(m.scale));
    w.U64(m.params().size());
    for (double v : m.params()) w.F64(v);
  }
  head += fmt::format("importance {}\n", JoinReals(model.importance));
  head += "endianness little\n";
  head += fmt::format("payload {}\n", w.out.size());
  return head + w.out;
}

Model ParseModel(std::string_view bytes) {
  std::map<std::string, std::string> h;
  size_t pos = 0;
  bool first = true;
  size_t payload = 0;
  while (true) {
    size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) ValidationError("model header is truncated");
    std::string line(bytes.substr(pos, nl - pos));
    pos = nl + 1;
    if (first) {
      if (line != kMagic) ValidationError("not a model file (bad magic line)");
      first = false;
      continue;
    }
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string value = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "payload") {
      payload = Number<size_t>(value, "payload size");
      break;
    }
    h[key] = value;
  }
  if (Need(h, "endianness") != "little") ValidationError("unsupported model endianness");
  if (bytes.size() - pos != payload) ValidationError("model payload size mismatch");
  if (Number<int>(Need(h, "features"), "feature count") != kFeatureCount) {
    ValidationError("model feature count mismatch");
  }
  Model model;
  model.scheme = ParseLabelScheme(Need(h, "scheme"));
  if (Number<int>(Need(h, "classes"), "class count") != model.class_count()) {
    ValidationError("model class count does not match its scheme");
  }
  model.importance = ParseReals(Need(h, "importance"), "importance");
  const std::string& kind = Need(h, "kind");
  Reader r(bytes.substr(pos));
  const uint64_t seed = Number<uint64_t>(Need(h, "seed"), "seed");
  if (kind == "forest") {
    model.kind = Model::Kind::kForest;
    auto& f = model.forest;
    auto arch = ParseAttrs(Need(h, "arch"));
    f.class_count = model.class_count();
    f.params.seed = seed;
    f.params.max_depth = Number<int>(Need(arch, "max_depth"), "max_depth");
    f.params.min_leaf = Number<int>(Need(arch, "min_leaf"), "min_leaf");
    f.params.mtry = Number<int>(Need(arch, "mtry"), "mtry");
    f.params.class_weights = Need(arch, "class_weights") == "1";
    f.oob_accuracy = Number<double>(Need(h, "oob_accuracy"), "oob_accuracy");
    const uint32_t trees = r.U32();
    f.params.trees = static_cast<int>(trees);
    for (uint32_t t = 0; t < trees; ++t) {
      DecisionTree tree;
      const uint32_t nodes = r.U32();
      for (uint32_t i = 0; i < nodes; ++i) {
        TreeNode n;
        n.feature = r.I32();
        n.threshold = r.F64();
        n.left = r.I32();
        n.right = r.I32();
        n.label = r.I32();
        const bool leaf = n.feature < 0;
        if (n.feature >= kFeatureCount || n.label < 0 || n.label >= f.class_count ||
            (!leaf && (n.left <= int(i) || n.right <= int(i) || n.left >= int(nodes) ||
                       n.right >= int(nodes)))) {
          ValidationError(fmt::format("model tree {} node {} is malformed", t, i));
        }
        tree.nodes.push_back(n);
      }
      if (tree.nodes.empty()) ValidationError("model tree has no nodes");
      f.trees.push_back(std::move(tree));
    }
  } else if (kind == "mlp") {
    model.kind = Model::Kind::kMlp;
    std::vector<int> sizes;
    std::string arch = Need(h, "arch");
    for (size_t s = 0; s <= arch.size();) {
      size_t dash = arch.find('-', s);
      if (dash == std::string::npos) dash = arch.size();
      sizes.push_back(Number<int>(arch.substr(s, dash - s), "layer size"));
      s = dash + 1;
    }
    if (sizes.front() != kFeatureCount || sizes.back() != model.class_count()) {
      ValidationError("network architecture does not match features and classes");
    }
    Mlp m(sizes);
    auto train = ParseAttrs(Need(h, "train"));
    auto& p = m.train_params;
    p.seed = seed;
    p.hidden.assign(sizes.begin() + 1, sizes.end() - 1);
    p.epochs = Number<int>(Need(train, "epochs"), "epochs");
    p.batch = Number<int>(Need(train, "batch"), "batch");
    p.learning_rate = Number<double>(Need(train, "learning_rate"), "learning_rate");
    p.decay = Number<double>(Need(train, "decay"), "decay");
    p.patience = Number<int>(Need(train, "patience"), "patience");
    p.class_weights = Need(train, "class_weights") == "1";
    m.epochs_run = Number<int>(Need(h, "epochs_run"), "epochs_run");
    m.validation_loss = Number<double>(Need(h, "validation_loss"), "validation_loss");
    m.mean = ParseReals(Need(h, "mean"), "mean");
    m.scale = ParseReals(Need(h, "scale"), "scale");
    const uint64_t count = r.U64();
    if (count != m.params().size()) ValidationError("network weight count mismatch");
    for (double& v : m.params()) v = r.F64();
    model.mlp = std::move(m);
  } else {
    ValidationError(fmt::format("unknown model kind '{}'", kind));
  }
  if (!r.done()) ValidationError("model payload has trailing bytes");
  return model;
}

void SaveModel(const std::string& path, const Model& model) {
  WriteFile(path, SerializeModel(model));
}

Model LoadModel(const std::string& path) { return ParseModel(ReadFile(path)); }

}  // namespace lbll
