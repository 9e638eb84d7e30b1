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


// Trained classifier with a versioned file format: a text header (kind,
// scheme, architecture, standardization, seed) followed by a little-endian
// binary payload of trees or weights.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "forest.hpp"
#include "mlp.hpp"

namespace lbll {

struct Model {
  enum class Kind : uint8_t { kForest, kMlp };
  Kind kind = Kind::kForest;
  LabelScheme scheme = LabelScheme::kLdVsRest;
  RandomForest forest;  // kForest
  Mlp mlp;              // kMlp
  FeatureVector importance{};

  int class_count() const { return ClassCount(scheme); }
  std::vector<double> PredictProba(const FeatureVector& x) const;
};

std::string SerializeModel(const Model& model);
Model ParseModel(std::string_view bytes);
void SaveModel(const std::string& path, const Model& model);
Model LoadModel(const std::string& path);

}  // namespace lbll
