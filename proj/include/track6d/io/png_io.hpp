#pragma once

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "track6d/image.hpp"

namespace track6d {
namespace detail {

// libpng reports errors by longjmp. Everything non-trivially-destructible is
// constructed before setjmp and stays in scope at the jump target, so the
// later normal throw unwinds it; only C handles need manual cleanup. The
// default handlers print to stderr; these capture the text for the exception
// instead. The buffer is written through an escaped pointer, which keeps it
// in memory and so valid after the longjmp.

struct PngMessage {
  char text[120] = {0};
};

inline void png_capture_error(png_structp png, png_const_charp msg) {
  auto* m = static_cast<PngMessage*>(png_get_error_ptr(png));
  std::snprintf(m->text, sizeof(m->text), "%s", msg);
  png_longjmp(png, 1);
}

inline void png_drop_warning(png_structp, png_const_charp) {}

inline void write_png_rows(const std::string& path, int width, int height,
                           int color_type, int bit_depth,
                           const std::vector<png_bytep>& rows) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw IoError(path, "cannot open for writing");
  PngMessage msg;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &msg,
                                            png_capture_error,
                                            png_drop_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(f);
    throw IoError(path, "libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
    throw IoError(path, std::string("png encode failed: ") + msg.text);
  }
  png_init_io(png, f);
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), bit_depth,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);  // buffers are native little-endian
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(f) != 0) throw IoError(path, "close failed");
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path, "rename failed: " + ec.message());
}

enum class PngWant { rgb8, gray8, gray16 };

// Decodes into a packed row-major buffer; all PNG filter types and
// interlacing are handled by libpng. rgb8 tolerates palette/gray/alpha
// sources, the gray modes insist on grayscale input.
inline void read_png_rows(const std::string& path, PngWant want, int& width,
                          int& height, std::vector<std::uint8_t>& bytes) {
  std::vector<png_bytep> rows;
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError(path, "cannot open");
  PngMessage msg;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &msg,
                                           png_capture_error,
                                           png_drop_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(f);
    throw IoError(path, "libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(f);
    throw IoError(path, std::string("png decode failed: ") + msg.text);
  }
  png_init_io(png, f);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (want == PngWant::rgb8) {
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth == 16) png_set_strip_16(png);
    if (depth < 8) png_set_packing(png);
    png_set_strip_alpha(png);
  } else {
    if (color != PNG_COLOR_TYPE_GRAY) {
      png_error(png, "grayscale expected");
    }
    if (want == PngWant::gray8) {
      if (depth == 16) png_set_strip_16(png);
      if (depth < 8) png_set_packing(png);
    } else {
      if (depth != 16) {
        png_error(png, "16-bit expected");
      }
      png_set_swap(png);
    }
  }
  png_read_update_info(png, info);
  width = int(png_get_image_width(png, info));
  height = int(png_get_image_height(png, info));
  const std::size_t stride = png_get_rowbytes(png, info);
  const std::size_t want_stride =
      std::size_t(width) * (want == PngWant::rgb8 ? 3 : 1) *
      (want == PngWant::gray16 ? 2 : 1);
  if (stride != want_stride) {
    png_error(png, "unexpected row stride");
  }
  bytes.resize(stride * std::size_t(height));
  rows.resize(std::size_t(height));
  for (int y = 0; y < height; ++y) rows[std::size_t(y)] = &bytes[stride * std::size_t(y)];
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(f);
}

}  // namespace detail

inline void write_png_rgb8(const std::string& path, const ImageU8& img) {
  check(img.channels == 3 && img.height > 0, "write_png_rgb8: need HxWx3");
  std::vector<png_bytep> rows(std::size_t(img.height));
  for (int y = 0; y < img.height; ++y)
    rows[std::size_t(y)] =
        const_cast<png_bytep>(&img.data[std::size_t(y) * img.width * 3]);
  detail::write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8,
                         rows);
}

inline ImageU8 read_png_rgb8(const std::string& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> bytes;
  detail::read_png_rows(path, detail::PngWant::rgb8, w, h, bytes);
  ImageU8 img(h, w, 3);
  img.data = std::move(bytes);
  return img;
}

inline void write_png_gray8(const std::string& path, const ImageU8& img) {
  check(img.channels == 1 && img.height > 0, "write_png_gray8: need HxWx1");
  std::vector<png_bytep> rows(std::size_t(img.height));
  for (int y = 0; y < img.height; ++y)
    rows[std::size_t(y)] =
        const_cast<png_bytep>(&img.data[std::size_t(y) * img.width]);
  detail::write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 8,
                         rows);
}

inline ImageU8 read_png_gray8(const std::string& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> bytes;
  detail::read_png_rows(path, detail::PngWant::gray8, w, h, bytes);
  ImageU8 img(h, w, 1);
  img.data = std::move(bytes);
  return img;
}

inline void write_png_gray16(const std::string& path, const ImageU16& img) {
  check(img.channels == 1 && img.height > 0, "write_png_gray16: need HxWx1");
  std::vector<png_bytep> rows(std::size_t(img.height));
  for (int y = 0; y < img.height; ++y)
    rows[std::size_t(y)] = const_cast<png_bytep>(
        reinterpret_cast<const png_byte*>(&img.data[std::size_t(y) * img.width]));
  detail::write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 16,
                         rows);
}

inline ImageU16 read_png_gray16(const std::string& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> bytes;
  detail::read_png_rows(path, detail::PngWant::gray16, w, h, bytes);
  ImageU16 img(h, w, 1);
  std::memcpy(img.data.data(), bytes.data(), bytes.size());
  return img;
}

}  // namespace track6d
