#include "weather/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace weather {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading " + path.string());
    return bytes;
}

// ---- PNG ----

struct PngReadState {
    const std::uint8_t* bytes;
    std::size_t size;
    std::size_t offset;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->offset + count > state->size) {
        png_error(png, "png truncated");
    }
    std::memcpy(out, state->bytes + state->offset, count);
    state->offset += count;
}

void png_on_error(png_structp png, png_const_charp) {
    std::longjmp(png_jmpbuf(png), 1);
}

void png_on_warning(png_structp, png_const_charp) {}

ImageRgb8 decode_png(const std::uint8_t* bytes, std::size_t size, const std::string& name) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_on_error,
                                             png_on_warning);
    if (!png) throw DecodeError("png reader allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("png info allocation failed");
    }

    PngReadState state{bytes, size, 0};
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 w = 0, h = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("corrupt png: " + name);
    }

    png_set_read_fn(png, &state, png_read_from_memory);
    png_read_info(png, info);

    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != static_cast<std::size_t>(w) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("unexpected png row layout: " + name);
    }

    pixels.resize(static_cast<std::size_t>(w) * h * 3);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    return ImageRgb8(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

// ---- JPEG ----

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_on_error(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

ImageRgb8 decode_jpeg(const std::uint8_t* bytes, std::size_t size, const std::string& name) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_on_error;
    err.base.output_message = [](j_common_ptr) {};

    std::vector<std::uint8_t> pixels;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("corrupt jpeg: " + name);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes, static_cast<unsigned long>(size));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const std::size_t w = cinfo.output_width;
    const std::size_t h = cinfo.output_height;
    if (cinfo.output_components != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("unexpected jpeg channel layout: " + name);
    }

    pixels.resize(w * h * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    return ImageRgb8(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

// ---- BMP (uncompressed 24/32-bit BI_RGB) ----

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int32_t read_i32(const std::uint8_t* p) { return static_cast<std::int32_t>(read_u32(p)); }

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

ImageRgb8 decode_bmp(const std::uint8_t* bytes, std::size_t size, const std::string& name) {
    if (size < 54) throw DecodeError("bmp header truncated: " + name);
    const std::uint32_t pixel_offset = read_u32(bytes + 10);
    const std::uint32_t header_size = read_u32(bytes + 14);
    if (header_size < 40) throw DecodeError("unsupported bmp header: " + name);

    const std::int32_t raw_w = read_i32(bytes + 18);
    const std::int32_t raw_h = read_i32(bytes + 22);
    const std::uint16_t bpp = read_u16(bytes + 28);
    const std::uint32_t compression = read_u32(bytes + 30);

    if (compression != 0 || (bpp != 24 && bpp != 32)) {
        throw DecodeError("unsupported bmp variant (only uncompressed 24/32-bit): " + name);
    }
    if (raw_w <= 0 || raw_h == 0) throw DecodeError("bad bmp dimensions: " + name);

    const bool top_down = raw_h < 0;
    const int w = raw_w;
    const int h = top_down ? -raw_h : raw_h;
    const std::size_t bytes_per_pixel = bpp / 8;
    const std::size_t row_stride = (static_cast<std::size_t>(w) * bytes_per_pixel + 3) & ~3ull;

    if (pixel_offset + row_stride * h > size) throw DecodeError("bmp pixel data truncated: " + name);

    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        const int src_row = top_down ? y : (h - 1 - y);
        const std::uint8_t* src = bytes + pixel_offset + static_cast<std::size_t>(src_row) * row_stride;
        for (int x = 0; x < w; ++x) {
            const std::uint8_t* px = src + static_cast<std::size_t>(x) * bytes_per_pixel;
            const std::size_t dst = (static_cast<std::size_t>(y) * w + x) * 3;
            pixels[dst] = px[2];      // BMP stores BGR(A)
            pixels[dst + 1] = px[1];
            pixels[dst + 2] = px[0];
        }
    }
    return ImageRgb8(w, h, std::move(pixels));
}

}  // namespace

ImageRgb8 load_image(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    const std::string name = path.string();
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), "\x89PNG\r\n\x1a\n", 8) == 0) {
        return decode_png(bytes.data(), bytes.size(), name);
    }
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
        return decode_jpeg(bytes.data(), bytes.size(), name);
    }
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') {
        return decode_bmp(bytes.data(), bytes.size(), name);
    }
    throw DecodeError("unsupported image format: " + name);
}

void write_png(const std::filesystem::path& path, const ImageRgb8& img) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw IoError("cannot open for writing: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_on_error,
                                              png_on_warning);
    if (!png) {
        std::fclose(fp);
        throw IoError("png writer allocation failed");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        std::fclose(fp);
        throw IoError("png info allocation failed");
    }

    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width * 3);
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("png encode failed: " + path.string());
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    if (std::fclose(fp) != 0) throw IoError("failed writing " + path.string());
}

}  // namespace weather
