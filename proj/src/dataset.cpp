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


#include "dataset.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace lbll {

int ClassCount(LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::kLdVsRest: return 2;
    case LabelScheme::kPsVsDd: return 2;
    case LabelScheme::kPsDd: return 3;
    case LabelScheme::kAll4: return 4;
  }
  return 0;
}

std::string_view LabelSchemeName(LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::kLdVsRest: return "ld-vs-rest";
    case LabelScheme::kPsVsDd: return "ps-vs-dd";
    case LabelScheme::kPsDd: return "p-s-dd";
    case LabelScheme::kAll4: return "all4";
  }
  return "";
}

LabelScheme ParseLabelScheme(std::string_view name) {
  for (auto s : {LabelScheme::kLdVsRest, LabelScheme::kPsVsDd, LabelScheme::kPsDd,
                 LabelScheme::kAll4}) {
    if (LabelSchemeName(s) == name) return s;
  }
  ValidationError(fmt::format("unknown label scheme '{}'", name));
}

std::optional<int> LabelFor(LabelScheme scheme, LatchType type) {
  const bool ld = type == LatchType::kLogicDecoy;
  switch (scheme) {
    case LabelScheme::kLdVsRest: return ld ? 1 : 0;
    case LabelScheme::kPsVsDd:
      if (ld) return std::nullopt;
      return type == LatchType::kDelayDecoy ? 1 : 0;
    case LabelScheme::kPsDd:
      if (ld) return std::nullopt;
      return static_cast<int>(type);
    case LabelScheme::kAll4: return static_cast<int>(type);
  }
  return std::nullopt;
}

std::vector<int> Dataset::ClassCounts() const {
  std::vector<int> counts(class_count(), 0);
  for (const auto& r : rows) {
    if (r.label >= 0 && r.label < class_count()) ++counts[r.label];
  }
  return counts;
}

std::vector<double> InverseFrequencyWeights(const Dataset& data) {
  const auto counts = data.ClassCounts();
  const int k = data.class_count();
  std::vector<double> w(k, 0.0);
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      w[c] = static_cast<double>(data.rows.size()) / (static_cast<double>(k) * counts[c]);
    }
  }
  return w;
}

void ValidateDataset(const Dataset& data) {
  std::set<std::pair<std::string, int>> keys;
  for (const auto& r : data.rows) {
    if (r.label < 0 || r.label >= data.class_count()) {
      ValidationError(fmt::format("label {} out of range for {} ({}:{})", r.label,
                                  LabelSchemeName(data.scheme), r.circuit, r.latch));
    }
    if (!keys.insert({r.circuit, r.latch}).second) {
      ValidationError(fmt::format("duplicate dataset row {}:{}", r.circuit, r.latch));
    }
    for (double v : r.x) {
      if (!std::isfinite(v)) {
        ValidationError(fmt::format("non-finite feature in row {}:{}", r.circuit, r.latch));
      }
    }
  }
}

void AppendCircuit(Dataset& data, const std::string& circuit, const FeaturizedCircuit& features,
                   const GroundTruth& truth) {
  for (const auto& lf : features.latches) {
    auto it = truth.find(lf.latch_id);
    if (it == truth.end()) {
      ValidationError(fmt::format("ground truth lacks latch {} of {}", lf.latch_id, circuit));
    }
    if (auto label = LabelFor(data.scheme, it->second)) {
      data.rows.push_back({circuit, lf.latch_id, lf.values, *label});
    }
  }
}

std::string WriteDatasetCsv(const Dataset& data) {
  std::string out = "circuit,latch";
  for (auto name : FeatureNames()) out += fmt::format(",{}", name);
  out += ",label\n";
  for (const auto& r : data.rows) {
    if (r.circuit.find_first_of(",\n\"") != std::string::npos) {
      ValidationError(fmt::format("circuit name '{}' cannot be written to CSV", r.circuit));
    }
    out += fmt::format("{},{}", r.circuit, r.latch);
    for (double v : r.x) out += fmt::format(",{:.17g}", v);
    out += fmt::format(",{}\n", r.label);
  }
  return out;
}

namespace {

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view field, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    ValidationError(fmt::format("line {}: bad number '{}'", line, field));
  }
  return value;
}

// Calls row(sample, last_field) for every data row.
template <typename Fn>
void ParseRows(std::string_view text, Fn row) {
  int line_no = 0;
  bool header = true;
  while (!text.empty()) {
    size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = SplitCsv(line);
    if (fields.size() != kFeatureCount + 3) {
      ValidationError(fmt::format("line {}: expected {} fields, got {}", line_no,
                                  kFeatureCount + 3, fields.size()));
    }
    if (header) {
      header = false;
      if (fields[0] != "circuit") ValidationError("feature CSV lacks its header row");
      continue;
    }
    Sample s;
    s.circuit = std::string(fields[0]);
    s.latch = ParseNumber<int>(fields[1], line_no);
    for (int f = 0; f < kFeatureCount; ++f) s.x[f] = ParseNumber<double>(fields[2 + f], line_no);
    row(s, fields.back(), line_no);
  }
}

}  // namespace

Dataset ParseDatasetCsv(std::string_view text, LabelScheme scheme) {
  Dataset data;
  data.scheme = scheme;
  ParseRows(text, [&](Sample& s, std::string_view label, int line_no) {
    s.label = ParseNumber<int>(label, line_no);
    data.rows.push_back(std::move(s));
  });
  ValidateDataset(data);
  return data;
}

std::string WriteFeatureCsv(const std::string& circuit, const FeaturizedCircuit& features,
                            const GroundTruth* truth) {
  if (circuit.find_first_of(",\n\"") != std::string::npos) {
    ValidationError(fmt::format("circuit name '{}' cannot be written to CSV", circuit));
  }
  std::string out = "circuit,latch";
  for (auto name : FeatureNames()) out += fmt::format(",{}", name);
  out += ",type\n";
  for (const auto& l : features.latches) {
    out += fmt::format("{},{}", circuit, l.latch_id);
    for (double v : l.values) out += fmt::format(",{:.17g}", v);
    std::string_view type;
    if (truth) {
      auto it = truth->find(l.latch_id);
      if (it == truth->end()) {
        ValidationError(fmt::format("ground truth does not cover latch {}", l.latch_id));
      }
      type = LatchTypeName(it->second);
    }
    out += fmt::format(",{}\n", type);
  }
  return out;
}

void AppendFeatureCsv(Dataset& data, std::string_view text) {
  ParseRows(text, [&](Sample& s, std::string_view type, int line_no) {
    auto t = ParseLatchType(type);
    if (!t) ValidationError(fmt::format("line {}: missing or unknown latch type '{}'", line_no, type));
    if (auto label = LabelFor(data.scheme, *t)) {
      s.label = *label;
      data.rows.push_back(std::move(s));
    }
  });
  ValidateDataset(data);
}

}  // namespace lbll
