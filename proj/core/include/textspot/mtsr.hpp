#pragma once

#include "textspot/grid.hpp"
#include "textspot/mask_stack.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace textspot {

// MTSR tensor container format:
//   magic "MTSR" (4 bytes), version byte 0x01,
//   u32 LE rank, rank x u32 LE dimensions,
//   rank-product x f32 LE values, row-major (last dimension fastest).
// A mask stack is stored rank-3 with dims (38, H, W), channel-major.
namespace mtsr {

inline constexpr char kMagic[4] = {'M', 'T', 'S', 'R'};
inline constexpr std::uint8_t kVersion = 0x01;

struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> values;

    friend bool operator==(const Tensor&, const Tensor&) = default;
};

void save_tensor(const Tensor& t, std::ostream& sink);
Tensor load_tensor(std::istream& source);

void save_tensor_file(const Tensor& t, const std::filesystem::path& path);
Tensor load_tensor_file(const std::filesystem::path& path);

Tensor from_score_map(const ScoreMap& m);
Tensor from_label_grid(const Grid<int>& g);
ScoreMap to_score_map(const Tensor& t);
Grid<int> to_label_grid(const Tensor& t);

} // namespace mtsr

// Writes `stack` in MTSR format. Validates the stack first; the byte stream
// round-trips exactly through load_map_stack.
void save_map_stack(const MaskStack& stack, std::ostream& sink);
MaskStack load_map_stack(std::istream& source);

void save_map_stack_file(const MaskStack& stack, const std::filesystem::path& path);
MaskStack load_map_stack_file(const std::filesystem::path& path);

} // namespace textspot
