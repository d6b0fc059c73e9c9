// Minimal baseline TIFF reader: first IFD, strip-based, chunky planar layout,
// 8/16-bit grayscale or RGB, compression none / PackBits / LZW, horizontal
// predictor. Covers the files this pipeline consumes without a libtiff
// dependency.

#include <algorithm>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "decode_internal.hpp"
#include "nirdehaze/errors.hpp"

namespace nirdehaze::detail {

namespace {

constexpr std::uint16_t kTagWidth = 256;
constexpr std::uint16_t kTagHeight = 257;
constexpr std::uint16_t kTagBitsPerSample = 258;
constexpr std::uint16_t kTagCompression = 259;
constexpr std::uint16_t kTagPhotometric = 262;
constexpr std::uint16_t kTagStripOffsets = 273;
constexpr std::uint16_t kTagSamplesPerPixel = 277;
constexpr std::uint16_t kTagRowsPerStrip = 278;
constexpr std::uint16_t kTagStripByteCounts = 279;
constexpr std::uint16_t kTagPlanarConfig = 284;
constexpr std::uint16_t kTagPredictor = 317;

struct ByteReader {
    const std::uint8_t* data;
    std::size_t size;
    bool little_endian;
    const std::string& context;

    void require(std::size_t offset, std::size_t n) const {
        if (offset + n > size || offset + n < offset)
            throw DecodeError(context + ": truncated TIFF data");
    }
    std::uint16_t u16(std::size_t offset) const {
        require(offset, 2);
        return little_endian
                   ? static_cast<std::uint16_t>(data[offset] | (data[offset + 1] << 8))
                   : static_cast<std::uint16_t>((data[offset] << 8) | data[offset + 1]);
    }
    std::uint32_t u32(std::size_t offset) const {
        require(offset, 4);
        if (little_endian)
            return static_cast<std::uint32_t>(data[offset]) |
                   (static_cast<std::uint32_t>(data[offset + 1]) << 8) |
                   (static_cast<std::uint32_t>(data[offset + 2]) << 16) |
                   (static_cast<std::uint32_t>(data[offset + 3]) << 24);
        return (static_cast<std::uint32_t>(data[offset]) << 24) |
               (static_cast<std::uint32_t>(data[offset + 1]) << 16) |
               (static_cast<std::uint32_t>(data[offset + 2]) << 8) |
               static_cast<std::uint32_t>(data[offset + 3]);
    }
};

struct IfdEntry {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t value_offset = 0;  // where the values live (inlined or remote)
};

std::size_t type_size(std::uint16_t type) {
    switch (type) {
        case 1:  // BYTE
        case 2:  // ASCII
        case 7:  // UNDEFINED
            return 1;
        case 3: return 2;  // SHORT
        case 4: return 4;  // LONG
        case 5: return 8;  // RATIONAL
        default: return 0;
    }
}

std::vector<std::uint32_t> entry_values(const ByteReader& r, const IfdEntry& e) {
    const std::size_t sz = type_size(e.type);
    if (sz == 0 || (e.type != 1 && e.type != 3 && e.type != 4))
        throw DecodeError(r.context + ": unsupported TIFF field type " + std::to_string(e.type));
    std::vector<std::uint32_t> out(e.count);
    for (std::uint32_t i = 0; i < e.count; ++i) {
        const std::size_t at = e.value_offset + i * sz;
        if (e.type == 1) {
            r.require(at, 1);
            out[i] = r.data[at];
        } else if (e.type == 3) {
            out[i] = r.u16(at);
        } else {
            out[i] = r.u32(at);
        }
    }
    return out;
}

std::vector<std::uint8_t> packbits_decode(const std::uint8_t* in, std::size_t n,
                                          std::size_t expected, const std::string& context) {
    std::vector<std::uint8_t> out;
    out.reserve(expected);
    std::size_t pos = 0;
    while (out.size() < expected && pos < n) {
        const auto ctrl = static_cast<std::int8_t>(in[pos++]);
        if (ctrl >= 0) {
            const std::size_t len = static_cast<std::size_t>(ctrl) + 1;
            if (pos + len > n) throw DecodeError(context + ": truncated PackBits strip");
            out.insert(out.end(), in + pos, in + pos + len);
            pos += len;
        } else if (ctrl != -128) {
            if (pos >= n) throw DecodeError(context + ": truncated PackBits strip");
            out.insert(out.end(), static_cast<std::size_t>(1 - ctrl), in[pos++]);
        }
    }
    if (out.size() < expected) throw DecodeError(context + ": short PackBits strip");
    out.resize(expected);
    return out;
}

// TIFF-variant LZW: MSB-first codes, 9..12 bits, code width bumped one code
// early, 256 = clear, 257 = end of information.
std::vector<std::uint8_t> lzw_decode(const std::uint8_t* in, std::size_t n, std::size_t expected,
                                     const std::string& context) {
    constexpr int kClear = 256;
    constexpr int kEoi = 257;
    constexpr int kFirstFree = 258;
    constexpr int kMaxCodes = 4096;

    struct Entry {
        int prev;
        std::uint8_t byte;
        int length;
    };
    std::vector<Entry> table(kMaxCodes);
    for (int i = 0; i < 256; ++i) table[i] = {-1, static_cast<std::uint8_t>(i), 1};
    int next_code = kFirstFree;
    int width = 9;

    std::vector<std::uint8_t> out;
    out.reserve(expected);
    const auto emit = [&](int code) {
        std::uint8_t buf[kMaxCodes];
        int len = table[code].length;
        for (int c = code, i = len; i-- > 0; c = table[c].prev) buf[i] = table[c].byte;
        out.insert(out.end(), buf, buf + len);
    };

    std::size_t bitpos = 0;
    const std::size_t bits_total = n * 8;
    const auto next = [&]() -> int {
        if (bitpos + static_cast<std::size_t>(width) > bits_total) return kEoi;
        int code = 0;
        for (int i = 0; i < width; ++i, ++bitpos)
            code = (code << 1) | ((in[bitpos >> 3] >> (7 - (bitpos & 7))) & 1);
        return code;
    };

    int old_code = -1;
    while (out.size() < expected) {
        const int code = next();
        if (code == kEoi) break;
        if (code == kClear) {
            next_code = kFirstFree;
            width = 9;
            old_code = -1;
            continue;
        }
        if (old_code < 0) {
            if (code > 255) throw DecodeError(context + ": invalid LZW stream");
            emit(code);
            old_code = code;
            continue;
        }
        if (code < next_code) {
            emit(code);
            table[next_code] = {old_code, out[out.size() - table[code].length],
                                table[old_code].length + 1};
        } else if (code == next_code) {
            const std::size_t start = out.size() - table[old_code].length;
            const std::uint8_t first = out[start];
            emit(old_code);
            out.push_back(first);
            table[next_code] = {old_code, first, table[old_code].length + 1};
        } else {
            throw DecodeError(context + ": corrupt LZW code");
        }
        ++next_code;
        if (next_code == (1 << width) - 1 && width < 12) ++width;
        if (next_code >= kMaxCodes - 1)
            throw DecodeError(context + ": LZW table overflow without clear code");
        old_code = code;
    }
    if (out.size() < expected) throw DecodeError(context + ": short LZW strip");
    out.resize(expected);
    return out;
}

}  // namespace

RawImage decode_tiff_bytes(const std::vector<std::uint8_t>& bytes, const std::string& context) {
    if (bytes.size() < 8) throw DecodeError(context + ": truncated TIFF header");
    const bool le = bytes[0] == 'I';
    const ByteReader r{bytes.data(), bytes.size(), le, context};

    std::size_t ifd = r.u32(4);
    r.require(ifd, 2);
    const std::uint16_t n_entries = r.u16(ifd);

    std::map<std::uint16_t, IfdEntry> entries;
    for (std::uint16_t i = 0; i < n_entries; ++i) {
        const std::size_t at = ifd + 2 + static_cast<std::size_t>(i) * 12;
        r.require(at, 12);
        const std::uint16_t tag = r.u16(at);
        IfdEntry e;
        e.type = r.u16(at + 2);
        e.count = r.u32(at + 4);
        const std::size_t total = type_size(e.type) * e.count;
        e.value_offset = total <= 4 ? at + 8 : r.u32(at + 8);
        entries[tag] = e;
    }

    const auto get_scalar = [&](std::uint16_t tag, std::uint32_t fallback,
                                bool required = false) -> std::uint32_t {
        const auto it = entries.find(tag);
        if (it == entries.end()) {
            if (required)
                throw DecodeError(context + ": TIFF missing required tag " + std::to_string(tag));
            return fallback;
        }
        return entry_values(r, it->second).at(0);
    };

    RawImage img;
    img.width = static_cast<int>(get_scalar(kTagWidth, 0, true));
    img.height = static_cast<int>(get_scalar(kTagHeight, 0, true));
    if (img.width <= 0 || img.height <= 0)
        throw DecodeError(context + ": TIFF has empty dimensions");

    img.channels = static_cast<int>(get_scalar(kTagSamplesPerPixel, 1));
    if (img.channels != 1 && img.channels != 3)
        throw UnsupportedFormat(context + ": unsupported TIFF sample count " +
                                std::to_string(img.channels));

    std::vector<std::uint32_t> bits{8};
    if (const auto it = entries.find(kTagBitsPerSample); it != entries.end())
        bits = entry_values(r, it->second);
    img.bit_depth = static_cast<int>(bits.at(0));
    for (const auto b : bits)
        if (static_cast<int>(b) != img.bit_depth)
            throw UnsupportedFormat(context + ": mixed TIFF bit depths");
    if (img.bit_depth != 8 && img.bit_depth != 16)
        throw UnsupportedFormat(context + ": unsupported TIFF bit depth " +
                                std::to_string(img.bit_depth));

    const std::uint32_t compression = get_scalar(kTagCompression, 1);
    if (compression != 1 && compression != 5 && compression != 32773)
        throw UnsupportedFormat(context + ": unsupported TIFF compression " +
                                std::to_string(compression));
    const std::uint32_t photometric = get_scalar(kTagPhotometric, 1);
    if (photometric > 2)
        throw UnsupportedFormat(context + ": unsupported TIFF photometric " +
                                std::to_string(photometric));
    if (get_scalar(kTagPlanarConfig, 1) != 1)
        throw UnsupportedFormat(context + ": planar TIFF layout not supported");
    const std::uint32_t predictor = get_scalar(kTagPredictor, 1);
    if (predictor != 1 && predictor != 2)
        throw UnsupportedFormat(context + ": unsupported TIFF predictor " +
                                std::to_string(predictor));

    const auto offsets_it = entries.find(kTagStripOffsets);
    const auto counts_it = entries.find(kTagStripByteCounts);
    if (offsets_it == entries.end() || counts_it == entries.end())
        throw DecodeError(context + ": TIFF strips missing (tiled layout not supported)");
    const auto offsets = entry_values(r, offsets_it->second);
    const auto counts = entry_values(r, counts_it->second);
    if (offsets.size() != counts.size())
        throw DecodeError(context + ": TIFF strip bookkeeping inconsistent");

    const std::uint32_t rows_per_strip =
        get_scalar(kTagRowsPerStrip, static_cast<std::uint32_t>(img.height));
    const std::size_t bytes_per_sample = static_cast<std::size_t>(img.bit_depth) / 8;
    const std::size_t row_bytes =
        static_cast<std::size_t>(img.width) * img.channels * bytes_per_sample;

    std::vector<std::uint8_t> raster;
    raster.reserve(row_bytes * static_cast<std::size_t>(img.height));
    for (std::size_t s = 0; s < offsets.size(); ++s) {
        const std::size_t rows_here =
            std::min<std::size_t>(rows_per_strip,
                                  static_cast<std::size_t>(img.height) - s * rows_per_strip);
        const std::size_t expected = rows_here * row_bytes;
        r.require(offsets[s], counts[s]);
        const std::uint8_t* strip = bytes.data() + offsets[s];
        if (compression == 1) {
            if (counts[s] < expected) throw DecodeError(context + ": short TIFF strip");
            raster.insert(raster.end(), strip, strip + expected);
        } else if (compression == 32773) {
            const auto decoded = packbits_decode(strip, counts[s], expected, context);
            raster.insert(raster.end(), decoded.begin(), decoded.end());
        } else {
            const auto decoded = lzw_decode(strip, counts[s], expected, context);
            raster.insert(raster.end(), decoded.begin(), decoded.end());
        }
    }

    // Samples, honoring the file byte order for 16-bit data.
    const std::size_t total = static_cast<std::size_t>(img.width) * img.height * img.channels;
    img.samples.resize(total);
    if (bytes_per_sample == 1) {
        for (std::size_t i = 0; i < total; ++i) img.samples[i] = raster[i];
    } else {
        for (std::size_t i = 0; i < total; ++i) {
            const std::uint8_t a = raster[2 * i], b = raster[2 * i + 1];
            img.samples[i] = le ? static_cast<std::uint16_t>(a | (b << 8))
                                : static_cast<std::uint16_t>((a << 8) | b);
        }
    }

    if (predictor == 2) {
        // Horizontal differencing: accumulate across each row per channel.
        const std::uint32_t mask = img.bit_depth == 8 ? 0xFFu : 0xFFFFu;
        const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
        for (int y = 0; y < img.height; ++y) {
            std::uint16_t* row = img.samples.data() + static_cast<std::size_t>(y) * stride;
            for (std::size_t x = static_cast<std::size_t>(img.channels); x < stride; ++x)
                row[x] = static_cast<std::uint16_t>((row[x] + row[x - img.channels]) & mask);
        }
    }

    if (photometric == 0) {  // WhiteIsZero
        const auto maxv = static_cast<std::uint16_t>((1u << img.bit_depth) - 1);
        for (auto& v : img.samples) v = static_cast<std::uint16_t>(maxv - v);
    }
    return img;
}

}  // namespace nirdehaze::detail
