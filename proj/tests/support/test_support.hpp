#pragma once

#include "textspot/geometry.hpp"
#include "textspot/rng.hpp"

#include <filesystem>
#include <string>

namespace testsupport {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 1000; ++i) {
            auto candidate = base / (tag + "-" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directories(candidate, ec) && !ec) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline textspot::AxisRect random_rect(textspot::DetRng& rng, double max_x,
                                      double max_y, double min_side = 1.0) {
    const double w = rng.uniform(min_side, max_x / 2.0);
    const double h = rng.uniform(min_side, max_y / 2.0);
    const double x0 = rng.uniform(0.0, max_x - w);
    const double y0 = rng.uniform(0.0, max_y - h);
    return {x0, y0, x0 + w, y0 + h};
}

inline std::string random_word(textspot::DetRng& rng, std::size_t min_len,
                               std::size_t max_len) {
    static const char alphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    const std::size_t len = min_len + rng.next_below(max_len - min_len + 1);
    std::string word;
    for (std::size_t i = 0; i < len; ++i)
        word.push_back(alphabet[rng.next_below(36)]);
    return word;
}

} // namespace testsupport
