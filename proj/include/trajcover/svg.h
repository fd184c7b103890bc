// Copyright 2026 The TrajCover Authors
//
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

#ifndef TRAJCOVER_SVG_H_
#define TRAJCOVER_SVG_H_

#include <string>
#include <vector>

namespace trajcover {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  // When nonempty, x values are indices into these tick labels.
  std::vector<std::string> x_categories;
};

// Self-contained SVG document; the same plot always yields the same text.
std::string RenderSvg(const LinePlot& plot);

}  // namespace trajcover

#endif  // TRAJCOVER_SVG_H_
