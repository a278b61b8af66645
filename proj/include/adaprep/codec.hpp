#pragma once

// PNG/JPEG decoding and PNG encoding on top of libpng and libjpeg, plus small
// whole-file I/O helpers.

#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"

#include <png.h>
// jpeglib.h needs size_t and FILE declared first.
#include <cstdio>
#include <jpeglib.h>

#include <csetjmp>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace adaprep {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed for " + path.string());
    }
    return bytes;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot create " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace detail {

inline bool is_png(std::span<const std::uint8_t> b) {
    return b.size() >= 8 && png_sig_cmp(b.data(), 0, 8) == 0;
}

inline bool is_jpeg(std::span<const std::uint8_t> b) {
    return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

// Alpha compositing over white, rounded: c*a/255 + 255*(255-a)/255.
inline std::uint8_t over_white(std::uint8_t c, std::uint8_t a) noexcept {
    return static_cast<std::uint8_t>((c * a + 255 * (255 - a) + 127) / 255);
}

struct PngReadSource {
    std::span<const std::uint8_t> bytes;
    std::size_t offset = 0;
};

[[noreturn]] inline void png_error_fn(png_structp png, png_const_charp msg) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text != nullptr) {
        *text = msg;
    }
    png_longjmp(png, 1);
}

inline void png_warning_fn(png_structp, png_const_charp) {}

inline void png_read_fn(png_structp png, png_bytep out, png_size_t len) {
    auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
    if (src->offset + len > src->bytes.size()) {
        png_error(png, "unexpected end of stream");
    }
    std::memcpy(out, src->bytes.data() + src->offset, len);
    src->offset += len;
}

inline Image decode_png(std::span<const std::uint8_t> bytes) {
    std::string message = "malformed PNG";
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_fn, png_warning_fn);
    if (png == nullptr) {
        throw DecodeError("libpng initialisation failed");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("libpng initialisation failed");
    }

    PngReadSource source{bytes, 0};
    // Everything that must survive the longjmp lives outside this frame's locals
    // touched after setjmp, or is volatile.
    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int color_type = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError(message);
    }

    png_set_read_fn(png, &source, png_read_fn);
    png_read_info(png, info);
    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) {
        png_set_strip_16(png);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const auto src_channels = static_cast<int>(png_get_channels(png, info));
    const std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = raw.data() + y * stride;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const bool gray = src_channels <= 2;
    const bool alpha = src_channels == 2 || src_channels == 4;
    const int w = static_cast<int>(width);
    const int h = static_cast<int>(height);
    Image img(w, h, gray ? Channels::Gray8 : Channels::Rgb8);
    const int out_c = img.channel_count();
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* in = raw.data() + static_cast<std::size_t>(y) * stride;
        auto out = img.row(y);
        for (int x = 0; x < w; ++x) {
            const std::uint8_t* p = in + static_cast<std::size_t>(x) * src_channels;
            const std::uint8_t a = alpha ? p[src_channels - 1] : 255;
            for (int c = 0; c < out_c; ++c) {
                out[static_cast<std::size_t>(x * out_c + c)] = alpha ? over_white(p[c], a) : p[c];
            }
        }
    }
    return img;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

[[noreturn]] inline void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

inline void jpeg_silent(j_common_ptr, int) {}

inline Image decode_jpeg(std::span<const std::uint8_t> bytes) {
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    err.base.emit_message = jpeg_silent;
    std::vector<std::uint8_t> buffer;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError(std::string("malformed JPEG: ") + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("unsupported JPEG color model (CMYK)");
    }
    const bool gray = cinfo.jpeg_color_space == JCS_GRAYSCALE;
    cinfo.out_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    const std::size_t stride = static_cast<std::size_t>(w) * cinfo.output_components;
    buffer.resize(stride * h);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = buffer.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return Image(w, h, gray ? Channels::Gray8 : Channels::Rgb8, std::move(buffer));
}

inline void png_write_fn(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

inline void png_flush_fn(png_structp) {}

} // namespace detail

/// Decodes a PNG or JPEG byte stream. Alpha is composited over white and
/// 16-bit samples are narrowed to 8 bits.
inline Image decode(std::span<const std::uint8_t> bytes) {
    if (detail::is_png(bytes)) {
        return detail::decode_png(bytes);
    }
    if (detail::is_jpeg(bytes)) {
        return detail::decode_jpeg(bytes);
    }
    throw DecodeError("unrecognised image signature");
}

/// Encodes Gray8 or Rgb8 as an 8-bit PNG. The output is deterministic for a given image.
inline std::vector<std::uint8_t> encode_png(const Image& img, int compression_level = 6) {
    std::vector<std::uint8_t> out;
    std::string message = "PNG encode failed";
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, detail::png_error_fn,
                                              detail::png_warning_fn);
    if (png == nullptr) {
        throw EncodeError("libpng initialisation failed");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw EncodeError("libpng initialisation failed");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw EncodeError(message);
    }
    png_set_write_fn(png, &out, detail::png_write_fn, detail::png_flush_fn);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
                 img.channels() == Channels::Gray8 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, compression_level);
    png_write_info(png, info);
    for (int y = 0; y < img.height(); ++y) {
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(img.row(y).data());
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

inline Image load_image(const std::filesystem::path& path) { return decode(read_file(path)); }

inline void save_png(const std::filesystem::path& path, const Image& img) {
    write_file(path, encode_png(img));
}

} // namespace adaprep
