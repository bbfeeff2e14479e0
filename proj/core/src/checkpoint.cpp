#include "svol/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace svol {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
    const size_t at = out.size();
    out.resize(at + sizeof(T));
    std::memcpy(out.data() + at, &v, sizeof(T));
}

template <typename T>
T take(const std::vector<unsigned char>& in, size_t& at) {
    if (at + sizeof(T) > in.size()) throw IoError("checkpoint: truncated stream");
    T v;
    std::memcpy(&v, in.data() + at, sizeof(T));
    at += sizeof(T);
    return v;
}

constexpr char kMagic[4] = {'S', 'V', 'A', 'N'};
constexpr uint32_t kVersion = 1;

}  // namespace

std::vector<unsigned char> encode_checkpoint(const NamedArrays& arrays) {
    std::vector<unsigned char> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put<uint32_t>(out, kVersion);
    put<uint32_t>(out, static_cast<uint32_t>(arrays.size()));
    for (const auto& [name, tensor] : arrays) {
        if (name.size() > 0xffff) throw IoError("checkpoint: name too long: " + name);
        if (tensor.rank() > 0xff) throw IoError("checkpoint: rank too large for " + name);
        put<uint16_t>(out, static_cast<uint16_t>(name.size()));
        out.insert(out.end(), name.begin(), name.end());
        put<uint8_t>(out, static_cast<uint8_t>(tensor.rank()));
        for (size_t d : tensor.shape()) put<uint64_t>(out, static_cast<uint64_t>(d));
        const size_t at = out.size();
        out.resize(at + tensor.numel() * sizeof(double));
        std::memcpy(out.data() + at, tensor.values().data(), tensor.numel() * sizeof(double));
    }
    return out;
}

NamedArrays decode_checkpoint(const std::vector<unsigned char>& bytes) {
    size_t at = 0;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw IoError("checkpoint: bad magic");
    at = 4;
    const uint32_t version = take<uint32_t>(bytes, at);
    if (version != kVersion)
        throw IoError("checkpoint: unsupported version " + std::to_string(version));
    const uint32_t count = take<uint32_t>(bytes, at);
    NamedArrays arrays;
    arrays.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        const uint16_t name_len = take<uint16_t>(bytes, at);
        if (at + name_len > bytes.size()) throw IoError("checkpoint: truncated name");
        std::string name(reinterpret_cast<const char*>(bytes.data() + at), name_len);
        at += name_len;
        const uint8_t rank = take<uint8_t>(bytes, at);
        Shape shape(rank);
        for (uint8_t d = 0; d < rank; ++d)
            shape[d] = static_cast<size_t>(take<uint64_t>(bytes, at));
        const size_t n = shape_numel(shape);
        if (at + n * sizeof(double) > bytes.size()) throw IoError("checkpoint: truncated payload");
        std::vector<double> data(n);
        std::memcpy(data.data(), bytes.data() + at, n * sizeof(double));
        at += n * sizeof(double);
        arrays.emplace_back(std::move(name), Tensor::from(std::move(shape), std::move(data)));
    }
    return arrays;
}

void save_checkpoint(const std::string& path, const NamedArrays& arrays) {
    const auto bytes = encode_checkpoint(arrays);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint: cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("checkpoint: write failed for " + path);
}

NamedArrays load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("checkpoint: cannot open " + path);
    const auto size = in.tellg();
    in.seekg(0);
    std::vector<unsigned char> bytes(static_cast<size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) throw IoError("checkpoint: read failed for " + path);
    return decode_checkpoint(bytes);
}

}  // namespace svol
