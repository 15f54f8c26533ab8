// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "narrinfo/infocalc.hpp"
#include "narrinfo/predictability.hpp"

namespace narrinfo::testing {

inline std::vector<ClauseInfoRecord> im_records(const std::vector<double>& im,
                                                const std::string& id = "h") {
  std::vector<ClauseInfoRecord> out;
  for (std::size_t i = 0; i < im.size(); ++i) {
    out.push_back({id, static_cast<int>(i + 1), im[i] + 10.0, 10.0, im[i], Variant::plain,
                   "b", "r1"});
  }
  return out;
}

// Reference values below were computed separately with Python's statistics
// module (mean, stdev).
struct ConsistencyFixture {
  std::vector<double> im1 = {1, 3, 5, 8, 11, 12, 15, 20, 30, 40};
  std::vector<double> im2 = {2, 2.5, 6, 7, 13, 13, 18, 19, 33, 50};
  double split = 12.0;
  double low_mean = 0.5;
  double low_std = 1.224744871391589;
  double high_mean = 11.666666666666666;
  double high_std = 11.606990230986767;
};

struct ComparisonFixture {
  std::vector<double> a = {2, 5, 9, 13, 14, 16, 20, 30, 45, 60};
  std::vector<double> b = {3, 4, 9.5, 15, 14.5, 18, 19, 36, 45, 66};
  std::vector<ClauseRef> predictable = {{"h", 1}, {"h", 2}, {"h", 3}};
  double split = 14.0;
  int low_n = 4;
  double low_mean = 0.625;
  double low_std = 1.25;
  int high_n = 5;
  double high_mean = 7.5;
  double high_std = 10.0;
  double predictable_mean = 0.16666666666666666;
  double predictable_std = 1.0408329997330663;
};

}  // namespace narrinfo::testing
