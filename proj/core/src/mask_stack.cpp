#include "textspot/mask_stack.hpp"

#include "textspot/errors.hpp"

#include <cmath>

namespace textspot {

namespace {

void check_dims(int h, int w) {
    if (h < 1 || w < 1)
        throw ContractError("map dimensions must be >= 1");
}

void check_range(const std::vector<float>& vals) {
    for (float v : vals)
        if (!(v >= 0.0f && v <= 1.0f))
            throw ContractError("map value outside [0, 1]");
}

} // namespace

ScoreMap::ScoreMap(int h, int w, float fill)
    : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {
    check_dims(h, w);
    if (!(fill >= 0.0f && fill <= 1.0f))
        throw ContractError("map value outside [0, 1]");
}

ScoreMap::ScoreMap(int h, int w, std::vector<float> vals)
    : height(h), width(w), values(std::move(vals)) {
    check_dims(h, w);
    if (values.size() != static_cast<std::size_t>(h) * w)
        throw ContractError("score map value count does not match dimensions");
    check_range(values);
}

void require_valid_score_map(const ScoreMap& m) {
    check_dims(m.height, m.width);
    if (m.values.size() != static_cast<std::size_t>(m.height) * m.width)
        throw ContractError("score map value count does not match dimensions");
    check_range(m.values);
}

MaskStack MaskStack::zeros(int h, int w) {
    check_dims(h, w);
    MaskStack s;
    s.height = h;
    s.width = w;
    s.values.assign(static_cast<std::size_t>(charset::kMaskChannels) * h * w, 0.0f);
    return s;
}

MaskStack::MaskStack(int h, int w, std::vector<float> vals)
    : height(h), width(w), values(std::move(vals)) {
    check_dims(h, w);
    if (values.size() != static_cast<std::size_t>(charset::kMaskChannels) * h * w)
        throw ContractError("mask stack must hold exactly 38 channels of H x W values");
    check_range(values);
}

ScoreMap MaskStack::channel_map(int c) const {
    if (c < 0 || c >= charset::kMaskChannels)
        throw ContractError("mask stack channel out of range: " + std::to_string(c));
    const auto sp = channel(c);
    return ScoreMap(height, width, std::vector<float>(sp.begin(), sp.end()));
}

void require_valid_stack(const MaskStack& s) {
    check_dims(s.height, s.width);
    if (s.values.size() !=
        static_cast<std::size_t>(charset::kMaskChannels) * s.height * s.width)
        throw ContractError("mask stack must hold exactly 38 channels of H x W values");
    check_range(s.values);
}

} // namespace textspot
