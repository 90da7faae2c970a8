/*
 * Copyright 2026 The vidagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VIDAGG_SCORE_MATRIX_H_
#define VIDAGG_SCORE_MATRIX_H_

#include <cstddef>
#include <vector>

namespace vidagg {

// Dense row-major matrix of similarities, rows = videos, cols = queries or
// classes.
struct ScoreMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  ScoreMatrix() = default;
  ScoreMatrix(int r, int c)
      : rows(r), cols(c), values(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return values[static_cast<size_t>(r) * cols + c];
  }

  ScoreMatrix Transposed() const {
    ScoreMatrix t(cols, rows);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    }
    return t;
  }
};

}  // namespace vidagg

#endif  // VIDAGG_SCORE_MATRIX_H_
