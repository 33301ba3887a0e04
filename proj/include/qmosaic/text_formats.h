// Copyright 2026 The QMosaic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text side inputs. Blank lines and lines starting with '#' followed by
// a space (or nothing) are comments in both formats.

#pragma once

#include <string>

#include "qmosaic/tile_grid.h"
#include "qmosaic/transform.h"

namespace qmosaic {

/// One "row,col" pair per line.
PinMask parse_pin_mask(const std::string &text);
std::string format_pin_mask(const PinMask &pins);

/// One hex colour per line ("#rrggbb" or "rrggbb"), in scan order.
Palette parse_palette(const std::string &text);
std::string format_palette(const Palette &palette);

std::string to_hex(const Rgb &color);
Rgb rgb_from_hex(const std::string &hex);

}  // namespace qmosaic
