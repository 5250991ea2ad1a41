// Copyright 2026 The ZTD Toolkit Authors. All Rights Reserved.
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

#pragma once

#include <string>
#include <vector>

#include "ztd/geometry.hpp"

namespace ztd {

/// One ground-truth text instance.
struct Annotation {
  Polygon polygon;
  std::string transcription;
  bool dontcare = false;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Image dimensions plus its annotations.
struct SceneSample {
  int width = 0;
  int height = 0;
  std::vector<Annotation> annotations;
};

/// A detected text contour in image coordinates with its confidence.
struct Detection {
  Polygon contour;
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

}  // namespace ztd
