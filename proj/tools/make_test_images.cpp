// Copyright (c) 2026 The redve Authors. All Rights Reserved.
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

// Writes the synthetic test scenes used by the README examples.
//   make_test_images [output-dir]

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "redve/imaging/image.hpp"
#include "redve/io/pgm.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  try {
    std::filesystem::create_directories(dir);
    for (int size : {32, 96, 128, 256}) {
      const std::string path = (dir / ("scene" + std::to_string(size) + ".pgm")).string();
      redve::io::write_pgm(path, redve::imaging::synthetic_scene(size, size));
      std::printf("%s\n", path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_test_images: %s\n", e.what());
    return 3;
  }
  return 0;
}
