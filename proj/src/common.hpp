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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lbll {

// Errors carry a category so the C API can map them onto status codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { kValidation, kIo };

  Error(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

[[noreturn]] inline void ValidationError(const std::string& what) {
  throw Error(Error::Kind::kValidation, what);
}
[[noreturn]] inline void IoError(const std::string& what) {
  throw Error(Error::Kind::kIo, what);
}

enum class LatchType : uint8_t {
  kPrimary = 0,
  kSecondary = 1,
  kDelayDecoy = 2,
  kLogicDecoy = 3,
};

inline constexpr std::array<LatchType, 4> kAllLatchTypes = {
    LatchType::kPrimary, LatchType::kSecondary, LatchType::kDelayDecoy,
    LatchType::kLogicDecoy};

std::string_view LatchTypeName(LatchType t);
std::optional<LatchType> ParseLatchType(std::string_view token);

// splitmix64 finalizer; used to derive independent stream seeds.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return MixSeed(seed ^ MixSeed(stream + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

// Uniform index in [0, n). Lemire-free simple rejection so results do not
// depend on the standard library's distribution implementation.
inline size_t UniformIndex(Rng& rng, size_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return static_cast<size_t>(v % n);
}

inline double UniformReal(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Container>
void Shuffle(Container& c, Rng& rng) {
  for (size_t i = c.size(); i > 1; --i) {
    std::swap(c[i - 1], c[UniformIndex(rng, i)]);
  }
}

}  // namespace lbll
