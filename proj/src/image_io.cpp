#include "nirdehaze/image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "decode_internal.hpp"
#include "nirdehaze/errors.hpp"

namespace nirdehaze {

namespace detail {

bool looks_like_png(const std::uint8_t* data, std::size_t size) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return size >= 8 && std::memcmp(data, sig, 8) == 0;
}

bool looks_like_tiff(const std::uint8_t* data, std::size_t size) {
    if (size < 8) return false;
    const bool le = data[0] == 'I' && data[1] == 'I';
    const bool be = data[0] == 'M' && data[1] == 'M';
    if (!le && !be) return false;
    const std::uint16_t magic =
        le ? static_cast<std::uint16_t>(data[2] | (data[3] << 8))
           : static_cast<std::uint16_t>((data[2] << 8) | data[3]);
    return magic == 42;
}

namespace {

struct MemReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* r = static_cast<MemReader*>(png_get_io_ptr(png));
    if (r->pos + n > r->size) png_error(png, "truncated PNG data");
    std::memcpy(out, r->data + r->pos, n);
    r->pos += n;
}

void png_on_error(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err && err->empty()) *err = msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_on_warning(png_structp, png_const_charp) {}

}  // namespace

RawImage decode_png_bytes(const std::vector<std::uint8_t>& bytes, const std::string& context) {
    std::string err;
    MemReader reader{bytes.data(), bytes.size(), 0};
    RawImage img;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_on_error, png_on_warning);
    if (!png) throw DecodeError(context + ": cannot initialize PNG reader");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError(context + ": cannot initialize PNG reader");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError(context + ": " + (err.empty() ? "invalid PNG data" : err));
    }

    png_set_read_fn(png, &reader, png_mem_read);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.channels = png_get_channels(png, info);
    img.bit_depth = png_get_bit_depth(png, info);
    if ((img.channels != 1 && img.channels != 3) ||
        (img.bit_depth != 8 && img.bit_depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat(context + ": unsupported PNG layout (channels=" +
                                std::to_string(img.channels) +
                                ", depth=" + std::to_string(img.bit_depth) + ")");
    }

    // png_read_image copes with interlaced files; read everything, then
    // repack per row.
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    pixels.resize(row_bytes * static_cast<std::size_t>(img.height));
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<std::size_t>(y)] = pixels.data() + static_cast<std::size_t>(y) * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    img.samples.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
    const std::size_t samples_per_row = static_cast<std::size_t>(img.width) * img.channels;
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* src = pixels.data() + static_cast<std::size_t>(y) * row_bytes;
        std::uint16_t* dst = img.samples.data() + static_cast<std::size_t>(y) * samples_per_row;
        if (img.bit_depth == 8) {
            for (std::size_t s = 0; s < samples_per_row; ++s) dst[s] = src[s];
        } else {
            // PNG stores 16-bit samples most significant byte first.
            for (std::size_t s = 0; s < samples_per_row; ++s)
                dst[s] = static_cast<std::uint16_t>((src[2 * s] << 8) | src[2 * s + 1]);
        }
    }
    return img;
}

}  // namespace detail

namespace {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError(path + ": cannot open file");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw DecodeError(path + ": read error");
    return bytes;
}

detail::RawImage decode_any(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    if (detail::looks_like_png(bytes.data(), bytes.size()))
        return detail::decode_png_bytes(bytes, path);
    if (detail::looks_like_tiff(bytes.data(), bytes.size()))
        return detail::decode_tiff_bytes(bytes, path);
    throw UnsupportedFormat(path + ": not a PNG or TIFF file");
}

std::vector<Plane> to_planes(const detail::RawImage& img) {
    const double maxval = (1 << img.bit_depth) - 1;
    std::vector<Plane> planes(static_cast<std::size_t>(img.channels));
    for (auto& p : planes) p.resize(img.height, img.width);
    const std::uint16_t* s = img.samples.data();
    for (Index y = 0; y < img.height; ++y)
        for (Index x = 0; x < img.width; ++x)
            for (int ch = 0; ch < img.channels; ++ch)
                planes[static_cast<std::size_t>(ch)](y, x) = static_cast<double>(*s++) / maxval;
    return planes;
}

}  // namespace

RgbImage load_rgb(const std::string& path) {
    auto planes = to_planes(decode_any(path));
    if (planes.size() == 1) return RgbImage{planes[0], planes[0], planes[0]};
    return RgbImage{std::move(planes[0]), std::move(planes[1]), std::move(planes[2])};
}

NirImage load_nir(const std::string& path) {
    auto planes = to_planes(decode_any(path));
    if (planes.size() == 1) return NirImage{std::move(planes[0])};
    // NIR stored as 3 channels holds replicas; average them.
    return NirImage{(planes[0] + planes[1] + planes[2]) / 3.0};
}

ImagePair load_pair(const std::string& rgb_path, const std::string& nir_path) {
    ImagePair pair{load_rgb(rgb_path), load_nir(nir_path)};
    if (pair.nir.rows() != pair.rgb.rows() || pair.nir.cols() != pair.rgb.cols())
        throw DimensionMismatch(rgb_path + " (" + std::to_string(pair.rgb.cols()) + "x" +
                                std::to_string(pair.rgb.rows()) + ") and " + nir_path + " (" +
                                std::to_string(pair.nir.cols()) + "x" +
                                std::to_string(pair.nir.rows()) +
                                ") differ in size; the pair is not registered");
    return pair;
}

void save_image(const RgbImage& img, const std::string& path, int bitdepth) {
    validate(img);
    if (bitdepth != 8 && bitdepth != 16)
        throw UnsupportedFormat(path + ": bit depth must be 8 or 16");

    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError(path + ": cannot open for writing");

    std::string err;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, detail::png_on_error,
                                detail::png_on_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw IoError(path + ": cannot initialize PNG writer");
    }

    const Index h = img.rows(), w = img.cols();
    const int maxval = (1 << bitdepth) - 1;
    const std::size_t bpp = bitdepth == 8 ? 3 : 6;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * bpp);

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError(path + ": " + (err.empty() ? "PNG write failed" : err));
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), bitdepth,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    for (Index y = 0; y < h; ++y) {
        std::uint8_t* out = row.data();
        for (Index x = 0; x < w; ++x) {
            const int rv = quantize_sample(img.r(y, x), maxval);
            const int gv = quantize_sample(img.g(y, x), maxval);
            const int bv = quantize_sample(img.b(y, x), maxval);
            if (bitdepth == 8) {
                *out++ = static_cast<std::uint8_t>(rv);
                *out++ = static_cast<std::uint8_t>(gv);
                *out++ = static_cast<std::uint8_t>(bv);
            } else {
                for (const int v : {rv, gv, bv}) {
                    *out++ = static_cast<std::uint8_t>(v >> 8);
                    *out++ = static_cast<std::uint8_t>(v & 0xFF);
                }
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fclose(fp) != 0) throw IoError(path + ": close failed");
}

}  // namespace nirdehaze
