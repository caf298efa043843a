// Copyright 2026 The Groupforge Authors
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

// Shared helpers for the test binaries: scratch directories and random
// partition instances.

#ifndef GROUPFORGE_TESTS_TEST_SUPPORT_HPP
#define GROUPFORGE_TESTS_TEST_SUPPORT_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "groupforge/cohort.hpp"
#include "groupforge/matrix.hpp"
#include "groupforge/partition.hpp"
#include "groupforge/rng.hpp"

namespace gftest {

inline std::filesystem::path make_temp_dir(const std::string& hint) {
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("groupforge_" + hint + "_" +
                    std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

/// Symmetric distance matrix with i.i.d. uniform [0,1) off-diagonal entries.
inline groupforge::Matrix random_distances(groupforge::Rng& rng, std::size_t n) {
  groupforge::Matrix d(n, n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      const double v = rng.uniform01();
      d(m, k) = v;
      d(k, m) = v;
    }
  }
  return d;
}

/// Attribute table with a single random binary column named "s".
inline groupforge::AttributeTable random_attribute(groupforge::Rng& rng,
                                                   std::size_t n) {
  std::vector<std::string> ids;
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("v" + std::to_string(i));
    bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
  }
  return groupforge::AttributeTable(std::move(ids), {"s"}, {std::move(bits)});
}

/// Random (F_L, F_U) admitting a composition of n.
inline std::pair<int, int> random_feasible_bounds(groupforge::Rng& rng, int n) {
  while (true) {
    const int fl = rng.uniform_int(1, n);
    const int fu = rng.uniform_int(fl, n);
    if ((n + fu - 1) / fu <= n / fl) return {fl, fu};
  }
}

}  // namespace gftest

#endif  // GROUPFORGE_TESTS_TEST_SUPPORT_HPP
