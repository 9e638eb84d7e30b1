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


// Labelled latch feature rows.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netlist.hpp"
#include "seqgraph.hpp"

namespace lbll {

// Class indices per scheme:
//   ld-vs-rest: 0 rest, 1 LD
//   ps-vs-dd:   0 P/S, 1 DD        (LD rows excluded)
//   p-s-dd:     0 P, 1 S, 2 DD     (LD rows excluded)
//   all4:       0 P, 1 S, 2 DD, 3 LD
enum class LabelScheme : uint8_t { kLdVsRest, kPsVsDd, kPsDd, kAll4 };

int ClassCount(LabelScheme scheme);
std::string_view LabelSchemeName(LabelScheme scheme);
LabelScheme ParseLabelScheme(std::string_view name);
// nullopt when the scheme excludes the type.
std::optional<int> LabelFor(LabelScheme scheme, LatchType type);

struct Sample {
  std::string circuit;
  int latch = 0;
  FeatureVector x{};
  int label = 0;
};

struct Dataset {
  LabelScheme scheme = LabelScheme::kAll4;
  std::vector<Sample> rows;

  int class_count() const { return ClassCount(scheme); }
  std::vector<int> ClassCounts() const;
};

// n / (k * n_c) per class; 0 for absent classes.
std::vector<double> InverseFrequencyWeights(const Dataset& data);

// Labels in range, no duplicate (circuit, latch), finite features.
void ValidateDataset(const Dataset& data);

// One row per featurized latch the scheme keeps; `truth` must cover them.
void AppendCircuit(Dataset& data, const std::string& circuit, const FeaturizedCircuit& features,
                   const GroundTruth& truth);

// circuit,latch,<feature names>,label with %.17g reals.
std::string WriteDatasetCsv(const Dataset& data);
Dataset ParseDatasetCsv(std::string_view text, LabelScheme scheme);

// circuit,latch,<feature names>,type with the latch type name, or an empty
// type when `truth` is null.
std::string WriteFeatureCsv(const std::string& circuit, const FeaturizedCircuit& features,
                            const GroundTruth* truth);
// Adds the rows the data's scheme keeps; every row needs a type.
void AppendFeatureCsv(Dataset& data, std::string_view text);

}  // namespace lbll
