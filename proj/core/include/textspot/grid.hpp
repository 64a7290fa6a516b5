#pragma once

#include "textspot/errors.hpp"

#include <cstdint>
#include <vector>

namespace textspot {

// Dense row-major H x W grid. The workhorse container for score maps,
// label maps, binary masks and loss inputs.
template <typename T>
struct Grid {
    int height = 0;
    int width = 0;
    std::vector<T> values;

    Grid() = default;
    Grid(int h, int w, T fill = T{})
        : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {
        if (h < 1 || w < 1)
            throw ContractError("grid dimensions must be >= 1");
    }
    Grid(int h, int w, std::vector<T> vals)
        : height(h), width(w), values(std::move(vals)) {
        if (h < 1 || w < 1)
            throw ContractError("grid dimensions must be >= 1");
        if (values.size() != static_cast<std::size_t>(h) * w)
            throw ContractError("grid value count does not match dimensions");
    }

    std::size_t size() const noexcept { return values.size(); }

    T& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    const T& at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }

    bool in_bounds(int row, int col) const noexcept {
        return row >= 0 && row < height && col >= 0 && col < width;
    }

    bool same_shape(const Grid& other) const noexcept {
        return height == other.height && width == other.width;
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

using BinaryMap = Grid<std::uint8_t>;

} // namespace textspot
