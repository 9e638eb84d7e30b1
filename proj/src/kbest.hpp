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

// k best picks from a product of independent ranked lists.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lbll {

// One factor of the product. Entries are sorted by value descending, ties by
// lex_rank ascending; lex_rank values are distinct within a list.
struct RankedList {
  std::vector<int64_t> value;
  std::vector<int> lex_rank;
};

// The k combinations (one entry index per list) with the largest value sum.
// Equal sums are ordered by comparing lex_rank list by list, in list order.
// Output is sorted in that order and is exact.
std::vector<std::vector<int>> KBestCombinations(const std::vector<RankedList>& lists, size_t k);

}  // namespace lbll
