#pragma once

#include "textspot/charset.hpp"

#include <span>
#include <vector>

namespace textspot {

// Single-channel probability map, row-major, values in [0, 1].
struct ScoreMap {
    int height = 0;
    int width = 0;
    std::vector<float> values;

    ScoreMap() = default;
    ScoreMap(int h, int w, float fill = 0.0f);
    ScoreMap(int h, int w, std::vector<float> vals); // validates range and size

    float at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    float& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }

    friend bool operator==(const ScoreMap&, const ScoreMap&) = default;
};

void require_valid_score_map(const ScoreMap& m);

// The 38-channel output of the mask branch, stored channel-major:
// channel 0 global text instance map, channels 1..36 character maps
// (charset index c on channel c+1), channel 37 background map of characters.
struct MaskStack {
    int height = 0;
    int width = 0;
    std::vector<float> values; // charset::kMaskChannels * height * width

    static MaskStack zeros(int h, int w);
    MaskStack() = default;
    MaskStack(int h, int w, std::vector<float> vals); // validates size and range

    std::size_t plane() const noexcept {
        return static_cast<std::size_t>(height) * width;
    }

    std::span<const float> channel(int c) const {
        return {values.data() + static_cast<std::size_t>(c) * plane(), plane()};
    }
    std::span<float> channel(int c) {
        return {values.data() + static_cast<std::size_t>(c) * plane(), plane()};
    }

    float at(int c, int row, int col) const {
        return values[(static_cast<std::size_t>(c) * height + row) * width + col];
    }
    float& at(int c, int row, int col) {
        return values[(static_cast<std::size_t>(c) * height + row) * width + col];
    }

    // Copy of one channel as a standalone ScoreMap.
    ScoreMap channel_map(int c) const;

    friend bool operator==(const MaskStack&, const MaskStack&) = default;
};

// Throws ContractError unless dims are >= 1, the value count equals
// 38 * H * W and every value lies in [0, 1].
void require_valid_stack(const MaskStack& s);

} // namespace textspot
