#include "textspot/mtsr.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace textspot {

namespace {

static_assert(std::numeric_limits<float>::is_iec559, "IEEE-754 floats required");

void put_u32_le(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {
        static_cast<unsigned char>(v & 0xFF),
        static_cast<unsigned char>((v >> 8) & 0xFF),
        static_cast<unsigned char>((v >> 16) & 0xFF),
        static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32_le(std::istream& in, std::size_t& offset, const char* what) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4)
        throw FormatError(std::string("truncated while reading ") + what, offset);
    offset += 4;
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

namespace mtsr {

void save_tensor(const Tensor& t, std::ostream& sink) {
    if (t.dims.empty())
        throw ContractError("tensor rank must be >= 1");
    std::size_t product = 1;
    for (std::uint32_t d : t.dims) {
        if (d == 0) throw ContractError("tensor dimension must be >= 1");
        product *= d;
    }
    if (t.values.size() != product)
        throw ContractError("tensor value count does not match dimensions");

    sink.write(kMagic, 4);
    sink.put(static_cast<char>(kVersion));
    put_u32_le(sink, static_cast<std::uint32_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) put_u32_le(sink, d);
    for (float v : t.values) put_u32_le(sink, std::bit_cast<std::uint32_t>(v));
    if (!sink) throw IoError("write failure while saving MTSR tensor");
}

Tensor load_tensor(std::istream& source) {
    std::size_t offset = 0;
    char magic[4];
    source.read(magic, 4);
    if (source.gcount() != 4)
        throw FormatError("truncated while reading magic", offset);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("bad magic, expected \"MTSR\"", offset);
    offset += 4;

    char version = 0;
    if (!source.get(version))
        throw FormatError("truncated while reading version", offset);
    if (static_cast<std::uint8_t>(version) != kVersion)
        throw FormatError("unsupported MTSR version " +
                              std::to_string(static_cast<int>(version)),
                          offset);
    offset += 1;

    const std::uint32_t rank = read_u32_le(source, offset, "rank");
    if (rank == 0 || rank > 8)
        throw FormatError("unreasonable tensor rank " + std::to_string(rank),
                          offset - 4);

    Tensor t;
    t.dims.resize(rank);
    std::size_t product = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
        t.dims[i] = read_u32_le(source, offset, "dimension");
        if (t.dims[i] == 0)
            throw FormatError("zero tensor dimension", offset - 4);
        if (product > (std::size_t{1} << 32) / t.dims[i])
            throw FormatError("tensor dimension product overflows", offset - 4);
        product *= t.dims[i];
    }

    t.values.resize(product);
    for (std::size_t i = 0; i < product; ++i) {
        const std::uint32_t bits = read_u32_le(source, offset, "payload value");
        t.values[i] = std::bit_cast<float>(bits);
    }
    return t;
}

void save_tensor_file(const Tensor& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    save_tensor(t, out);
    out.flush();
    if (!out) throw IoError("write failure: " + path.string());
}

Tensor load_tensor_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return load_tensor(in);
}

Tensor from_score_map(const ScoreMap& m) {
    require_valid_score_map(m);
    return Tensor{{static_cast<std::uint32_t>(m.height),
                   static_cast<std::uint32_t>(m.width)},
                  m.values};
}

Tensor from_label_grid(const Grid<int>& g) {
    Tensor t;
    t.dims = {static_cast<std::uint32_t>(g.height),
              static_cast<std::uint32_t>(g.width)};
    t.values.reserve(g.values.size());
    for (int v : g.values) t.values.push_back(static_cast<float>(v));
    return t;
}

ScoreMap to_score_map(const Tensor& t) {
    if (t.dims.size() != 2)
        throw FormatError("expected rank-2 tensor for a score map", 0);
    return ScoreMap(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]),
                    t.values);
}

Grid<int> to_label_grid(const Tensor& t) {
    if (t.dims.size() != 2)
        throw FormatError("expected rank-2 tensor for a label grid", 0);
    Grid<int> g(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        const float v = t.values[i];
        if (std::rint(v) != v)
            throw FormatError("non-integer value in label grid", 0);
        g.values[i] = static_cast<int>(v);
    }
    return g;
}

} // namespace mtsr

void save_map_stack(const MaskStack& stack, std::ostream& sink) {
    require_valid_stack(stack);
    mtsr::Tensor t;
    t.dims = {static_cast<std::uint32_t>(charset::kMaskChannels),
              static_cast<std::uint32_t>(stack.height),
              static_cast<std::uint32_t>(stack.width)};
    t.values = stack.values;
    mtsr::save_tensor(t, sink);
}

MaskStack load_map_stack(std::istream& source) {
    const mtsr::Tensor t = mtsr::load_tensor(source);
    if (t.dims.size() != 3)
        throw FormatError("mask stack must be rank 3, got rank " +
                              std::to_string(t.dims.size()),
                          5);
    if (t.dims[0] != static_cast<std::uint32_t>(charset::kMaskChannels))
        throw FormatError("mask stack must have 38 channels, got " +
                              std::to_string(t.dims[0]),
                          9);
    for (std::size_t i = 0; i < t.values.size(); ++i)
        if (!(t.values[i] >= 0.0f && t.values[i] <= 1.0f))
            throw FormatError("stack value outside [0, 1]", 21 + i * 4);
    return MaskStack(static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]),
                     t.values);
}

void save_map_stack_file(const MaskStack& stack, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    save_map_stack(stack, out);
    out.flush();
    if (!out) throw IoError("write failure: " + path.string());
}

MaskStack load_map_stack_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return load_map_stack(in);
}

} // namespace textspot
