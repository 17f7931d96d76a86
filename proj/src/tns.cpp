#include "divad/tns.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace divad {

namespace {

constexpr char kMagic[4] = {'T', 'N', 'S', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kMaxRank = 8;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xff);
}

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back((v >> (8 * i)) & 0xff);
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
           std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

template <typename T>
void save_impl(const std::string& path, const Tensor<T>& t, std::uint8_t dtype) {
    if (t.rank() > kMaxRank)
        throw Error("tns: rank " + std::to_string(t.rank()) + " exceeds limit " +
                    std::to_string(kMaxRank));
    std::vector<unsigned char> buf;
    buf.reserve(14 + 8 * t.rank() + t.size() * sizeof(T));
    buf.insert(buf.end(), kMagic, kMagic + 4);
    put_u32(buf, kVersion);
    buf.push_back(static_cast<unsigned char>(t.rank()));
    for (std::size_t d : t.shape) put_u64(buf, d);
    buf.push_back(dtype);
    const std::size_t payload_at = buf.size();
    buf.resize(payload_at + t.size() * sizeof(T));
    std::memcpy(buf.data() + payload_at, t.data.data(), t.size() * sizeof(T));
    const std::uint32_t crc =
        crc32(0L, buf.data(), static_cast<uInt>(buf.size()));
    put_u32(buf, crc);

    // Write-temp-then-rename so readers never see a partial file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("tns: cannot open '" + tmp + "' for writing");
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
        if (!out) throw Error("tns: write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

struct RawTns {
    std::vector<std::size_t> shape;
    std::uint8_t dtype;
    std::vector<unsigned char> payload;
};

RawTns load_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("tns: cannot open '" + path + "'");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 14) throw Error("tns: file '" + path + "' truncated");
    const std::size_t body = buf.size() - 4;
    const std::uint32_t stored_crc = get_u32(buf.data() + body);
    const std::uint32_t crc = crc32(0L, buf.data(), static_cast<uInt>(body));
    if (crc != stored_crc)
        throw Error("tns: CRC mismatch in '" + path + "' (corrupt or truncated)");
    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw Error("tns: bad magic in '" + path + "'");
    const std::uint32_t version = get_u32(buf.data() + 4);
    if (version != kVersion)
        throw Error("tns: unsupported version " + std::to_string(version));
    const std::uint8_t rank = buf[8];
    if (rank > kMaxRank) throw Error("tns: rank exceeds limit");
    std::size_t off = 9;
    if (body < off + 8 * rank + 1) throw Error("tns: header truncated");
    RawTns raw;
    for (int i = 0; i < rank; ++i) {
        raw.shape.push_back(static_cast<std::size_t>(get_u64(buf.data() + off)));
        off += 8;
    }
    raw.dtype = buf[off++];
    if (raw.dtype > 1) throw Error("tns: unknown dtype");
    const std::size_t elem = raw.dtype == 0 ? 4 : 8;
    const std::size_t n = Tensor<float>::element_count(raw.shape);
    if (body - off != n * elem)
        throw Error("tns: payload size mismatch in '" + path + "'");
    raw.payload.assign(buf.begin() + static_cast<long>(off),
                       buf.begin() + static_cast<long>(body));
    return raw;
}

template <typename T>
Tensor<T> payload_to_tensor(const RawTns& raw) {
    Tensor<T> t(raw.shape);
    std::memcpy(t.data.data(), raw.payload.data(), raw.payload.size());
    return t;
}

}  // namespace

void save_tns(const std::string& path, const Tensor<float>& t) {
    save_impl(path, t, 0);
}

void save_tns(const std::string& path, const Tensor<double>& t) {
    save_impl(path, t, 1);
}

Tensor<float> load_tns_f32(const std::string& path) {
    RawTns raw = load_raw(path);
    if (raw.dtype != 0)
        throw Error("tns: '" + path + "' holds f64 data, expected f32");
    return payload_to_tensor<float>(raw);
}

Tensor<double> load_tns_f64(const std::string& path) {
    RawTns raw = load_raw(path);
    if (raw.dtype != 1)
        throw Error("tns: '" + path + "' holds f32 data, expected f64");
    return payload_to_tensor<double>(raw);
}

Tensor<double> load_tns_any(const std::string& path) {
    RawTns raw = load_raw(path);
    if (raw.dtype == 1) return payload_to_tensor<double>(raw);
    return payload_to_tensor<float>(raw).cast<double>();
}

}  // namespace divad
