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

#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>

#include <jpeglib.h>

#include "gtest/gtest.h"

#include "qmosaic/image.h"
#include "qmosaic/text_formats.h"
#include "qmosaic/tile_grid.h"

using namespace qmosaic;

namespace {

Image noise_image(int w, int h, int channels, std::uint64_t seed) {
    Image img(w, h, channels);
    std::mt19937_64 rng(seed);
    for (auto &b : img.pixels) b = static_cast<std::uint8_t>(rng());
    return img;
}

// Each tile filled with a colour encoding its (row, column).
Image labelled_tiles(const TileGrid &grid) {
    Image img(grid.image_width, grid.image_height, 3);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.columns; ++c) {
            const Rect t = grid.tile(r, c);
            for (int y = t.y; y < t.y + t.height; ++y) {
                for (int x = t.x; x < t.x + t.width; ++x) {
                    auto *px = img.at(x, y);
                    px[0] = static_cast<std::uint8_t>(r * 10);
                    px[1] = static_cast<std::uint8_t>(c * 10);
                    px[2] = 7;
                }
            }
        }
    }
    return img;
}

Bytes encode_test_jpeg(const Image &img) {
    jpeg_compress_struct cinfo;
    jpeg_error_mgr jerr;
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    unsigned char *buffer = nullptr;
    unsigned long size = 0;
    jpeg_mem_dest(&cinfo, &buffer, &size);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, 95, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(img.at(0, static_cast<int>(cinfo.next_scanline)));
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    Bytes out(buffer, buffer + size);
    std::free(buffer);
    return out;
}

TransformPlan row_plan(int rows, int columns, const std::vector<std::vector<int>> &orders) {
    TransformPlan plan;
    plan.grid = GridSpec{.columns = columns, .rows = rows};
    for (const auto &o : orders) plan.row_permutations.push_back(RowPermutation{.slice_index = 0, .run = 0, .order = o, .i_values = {}});
    return plan;
}

}  // namespace

TEST(Png, round_trip_rgb_and_rgba) {
    for (int channels : {3, 4}) {
        const auto img = noise_image(37, 21, channels, 5);
        const auto back = decode_png(encode_png(img));
        EXPECT_EQ(back, img);
        EXPECT_EQ(pixel_hash(back), pixel_hash(img));
    }
}

TEST(Png, decode_errors) {
    const Bytes junk = {0x89, 'P', 'N', 'G', 1, 2, 3};
    EXPECT_THROW(decode_png(junk), ImageError);
    const Bytes unknown = {'G', 'I', 'F', '8'};
    EXPECT_THROW(decode_image(unknown), ImageError);
}

TEST(Jpeg, decodes_through_sniffing) {
    Image flat(16, 8, 3);
    for (std::size_t i = 0; i < flat.pixels.size(); i += 3) {
        flat.pixels[i] = 200;
        flat.pixels[i + 1] = 40;
        flat.pixels[i + 2] = 90;
    }
    const auto img = decode_image(encode_test_jpeg(flat));
    EXPECT_EQ(img.width, 16);
    EXPECT_EQ(img.height, 8);
    EXPECT_EQ(img.channels, 3);
    EXPECT_NEAR(img.at(5, 5)[0], 200, 4);
    EXPECT_NEAR(img.at(5, 5)[1], 40, 4);
    EXPECT_NEAR(img.at(5, 5)[2], 90, 4);
}

TEST(Files, read_write_round_trip) {
    const auto dir = std::filesystem::temp_directory_path() / "qmosaic_image_test";
    std::filesystem::create_directories(dir);
    const auto img = noise_image(9, 4, 3, 1);
    write_png(dir / "a.png", img);
    EXPECT_EQ(read_image(dir / "a.png"), img);
    write_text_file(dir / "t.txt", "hello\n");
    EXPECT_EQ(read_text_file(dir / "t.txt"), "hello\n");
    EXPECT_THROW(read_file(dir / "missing.bin"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST(Hash, changes_with_any_pixel) {
    auto img = noise_image(8, 8, 3, 2);
    const auto h = pixel_hash(img);
    EXPECT_EQ(h.size(), 16u);
    img.pixels[17] ^= 1;
    EXPECT_NE(pixel_hash(img), h);
}

TEST(Slice, exact_division_gives_uniform_tiles) {
    const auto grid = slice(1600, 1300, Rect{0, 0, 1600, 1300}, 13, 16);
    EXPECT_TRUE(grid.uniform());
    for (int r = 0; r < 13; ++r) {
        for (int c = 0; c < 16; ++c) {
            const Rect t = grid.tile(r, c);
            EXPECT_EQ(t.width, 100);
            EXPECT_EQ(t.height, 100);
            EXPECT_EQ(t.x, 100 * c);
            EXPECT_EQ(t.y, 100 * r);
        }
    }
}

TEST(Slice, remainder_goes_to_leading_tiles) {
    const auto grid = slice(17, 5, Rect{0, 0, 17, 5}, 1, 3);
    EXPECT_FALSE(grid.uniform());
    EXPECT_EQ(grid.tile(0, 0).width, 6);
    EXPECT_EQ(grid.tile(0, 1).width, 6);
    EXPECT_EQ(grid.tile(0, 2).width, 5);
    EXPECT_EQ(grid.column_edges, (std::vector<int>{0, 6, 12, 17}));
}

TEST(Slice, region_offsets_and_errors) {
    const auto grid = slice(100, 80, Rect{10, 20, 40, 30}, 3, 4);
    EXPECT_EQ(grid.tile(0, 0).x, 10);
    EXPECT_EQ(grid.tile(0, 0).y, 20);
    EXPECT_EQ(grid.tile(2, 3).x + grid.tile(2, 3).width, 50);
    EXPECT_THROW(slice(100, 80, Rect{70, 0, 40, 10}, 1, 1), std::invalid_argument);
    EXPECT_THROW(slice(100, 80, Rect{0, 0, 3, 10}, 1, 4), std::invalid_argument);
    EXPECT_THROW(slice(100, 80, Rect{0, 0, 10, 10}, 0, 4), std::invalid_argument);
}

TEST(ApplyPlan, toy_grid_moves_labelled_tiles) {
    const auto grid = slice(40, 30, Rect{0, 0, 40, 30}, 3, 4);
    const auto img = labelled_tiles(grid);
    const auto plan = row_plan(3, 4, {{2, 1, 0, 3}, {0, 1, 3, 2}, {0, 1, 2, 3}});
    const auto out = apply_plan(img, grid, plan);
    auto source_col = [&](int r, int c) { return out.at(grid.tile(r, c).x + 1, grid.tile(r, c).y + 1)[1] / 10; };
    EXPECT_EQ(source_col(0, 0), 2);
    EXPECT_EQ(source_col(0, 2), 0);
    EXPECT_EQ(source_col(1, 2), 3);
    EXPECT_EQ(source_col(1, 3), 2);
    for (int c = 0; c < 4; ++c) EXPECT_EQ(source_col(2, c), c);
}

TEST(ApplyPlan, identity_is_bit_exact_and_inverse_restores) {
    const auto img = noise_image(64, 48, 4, 3);
    const auto grid = slice(img, Rect{4, 4, 56, 40}, 4, 7);
    TransformPlan id = row_plan(4, 7, std::vector<std::vector<int>>(4, {0, 1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(apply_plan(img, grid, id), img);

    std::mt19937_64 rng(9);
    TransformPlan plan = id;
    for (auto &row : plan.row_permutations) std::shuffle(row.order.begin(), row.order.end(), rng);
    const auto moved = apply_plan(img, grid, plan);
    EXPECT_NE(moved, img);
    EXPECT_EQ(apply_plan(moved, grid, inverse_plan(plan)), img);
}

TEST(ApplyPlan, uneven_tiles_are_resampled) {
    const auto grid = slice(17, 4, Rect{0, 0, 17, 4}, 1, 3);
    const auto img = labelled_tiles(grid);
    const auto out = apply_plan(img, grid, row_plan(1, 3, {{2, 0, 1}}));
    // The 5-wide tile stretched into a 6-wide slot keeps its solid colour.
    for (int x = 0; x < 6; ++x) EXPECT_EQ(out.at(x, 2)[1], 20);
    for (int x = 12; x < 17; ++x) EXPECT_EQ(out.at(x, 2)[1], 10);
}

TEST(ApplyPlan, mismatched_grid_throws) {
    const auto img = noise_image(20, 20, 3, 1);
    const auto grid = slice(img, full_region(img), 2, 2);
    EXPECT_THROW(apply_plan(img, grid, row_plan(2, 3, {{0, 1, 2}, {0, 1, 2}})), std::invalid_argument);
}

TEST(Palette, extraction_and_colour_plan) {
    const auto grid = slice(30, 20, Rect{0, 0, 30, 20}, 2, 3);
    const auto img = labelled_tiles(grid);
    const auto palette = extract_palette(img, grid, OriginRow::kBottom);
    ASSERT_EQ(palette.size(), 6u);
    // Scan starts bottom-left: bottom row is image row 1.
    EXPECT_EQ(palette[0], (Rgb{10, 0, 7}));
    EXPECT_EQ(palette[2], (Rgb{10, 20, 7}));
    EXPECT_EQ(palette[3], (Rgb{0, 0, 7}));

    TransformPlan plan;
    plan.mode = PlanMode::kGlobalColorReorder;
    plan.grid = GridSpec{.columns = 3, .rows = 2};
    plan.palette_size = 6;
    plan.color_values = std::vector<double>(6, 0.0);
    plan.color_ranks = {3, 4, 5, 0, 1, 2};  // scan order: identity
    ASSERT_TRUE(plan.is_identity());
    EXPECT_EQ(apply_plan(img, grid, plan), img);

    plan.color_ranks = {5, 4, 3, 2, 1, 0};
    const auto out = apply_plan(img, grid, plan);
    EXPECT_EQ(out.at(1, 1)[1], palette[5].g);
    EXPECT_EQ(out.at(25, 15)[0], palette[0].r);
    EXPECT_THROW(apply_plan(img, grid, plan, std::span<const Rgb>(palette.data(), 5)), std::invalid_argument);
}

TEST(TextFormats, pin_mask_round_trip) {
    const auto pins = parse_pin_mask("# pins\n0,1\n\n3, 4\n");
    EXPECT_TRUE(pins.contains(0, 1));
    EXPECT_TRUE(pins.contains(3, 4));
    EXPECT_EQ(pins.cells.size(), 2u);
    EXPECT_EQ(parse_pin_mask(format_pin_mask(pins)), pins);
    EXPECT_THROW(parse_pin_mask("1;2\n"), std::invalid_argument);
}

TEST(TextFormats, palette_round_trip) {
    const auto palette = parse_palette("#ff0000\n00ff80\n# comment\n");
    ASSERT_EQ(palette.size(), 2u);
    EXPECT_EQ(palette[1], (Rgb{0, 255, 128}));
    EXPECT_EQ(to_hex(palette[0]), "#ff0000");
    EXPECT_EQ(parse_palette(format_palette(palette)), palette);
    EXPECT_THROW(rgb_from_hex("#12345"), std::invalid_argument);
}

TEST(ApplyPlanProperties, pixel_blocks_are_conserved) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 5), cols = 1 + static_cast<int>(rng() % 6);
        const auto img = noise_image(cols * 4, rows * 3, 3, rng());
        const auto grid = slice(img, full_region(img), rows, cols);
        TransformPlan plan;
        plan.grid = GridSpec{.columns = cols, .rows = rows};
        for (int r = 0; r < rows; ++r) {
            std::vector<int> o(static_cast<std::size_t>(cols));
            std::iota(o.begin(), o.end(), 0);
            std::shuffle(o.begin(), o.end(), rng);
            plan.row_permutations.push_back(RowPermutation{.slice_index = r, .run = 0, .order = o, .i_values = {}});
        }
        const auto out = apply_plan(img, grid, plan);
        std::map<std::vector<std::uint8_t>, int> before, after;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const Rect t = grid.tile(r, c);
                std::vector<std::uint8_t> a, b;
                for (int y = t.y; y < t.y + t.height; ++y) {
                    a.insert(a.end(), img.at(t.x, y), img.at(t.x, y) + t.width * 3);
                    b.insert(b.end(), out.at(t.x, y), out.at(t.x, y) + t.width * 3);
                }
                ++before[a];
                ++after[b];
            }
        }
        EXPECT_EQ(before, after);
    }
}
