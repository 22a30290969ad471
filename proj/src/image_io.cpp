// Copyright 2026 the logtally authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logtally/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <unordered_map>

namespace logtally {

namespace {

constexpr int kMaxSide = 1 << 20;

void check_decoded_dims(long long w, long long h, long long channels) {
    if (w <= 0 || h <= 0 || w > kMaxSide || h > kMaxSide ||
        w * h * channels > (1ll << 31)) {
        throw DecodeError("unreasonable image dimensions " +
                          std::to_string(w) + "x" + std::to_string(h));
    }
}

// ---------------------------------------------------------------------------
// PNG

struct PngMemoryReader {
    const std::uint8_t* bytes;
    std::size_t len;
    std::size_t off;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* r = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
    if (r->off + n > r->len) {
        png_error(png, "unexpected end of PNG stream");
    }
    std::memcpy(out, r->bytes + r->off, n);
    r->off += n;
}

void png_on_error(png_structp png, png_const_charp msg) {
    // Stash the message for the catch site; longjmp unwinds libpng state.
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err) *err = msg ? msg : "libpng error";
    longjmp(png_jmpbuf(png), 1);
}

void png_on_warning(png_structp, png_const_charp) {}

DecodedImage decode_png(const std::uint8_t* bytes, std::size_t len) {
    std::string errmsg;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                             png_on_error, png_on_warning);
    if (!png) throw DecodeError("cannot allocate PNG reader");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("cannot allocate PNG info");
    }

    PngMemoryReader reader{bytes, len, 0};
    std::vector<png_byte> rowbuf;
    DecodedImage out;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("PNG decode failed: " +
                          (errmsg.empty() ? "corrupt stream" : errmsg));
    }

    png_set_read_fn(png, &reader, png_mem_read);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    // Normalize everything to 8-bit gray, 8-bit RGB, or 16-bit gray.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    const bool keep16 =
        bit_depth == 16 && (color_type == PNG_COLOR_TYPE_GRAY ||
                            color_type == PNG_COLOR_TYPE_GRAY_ALPHA);
    if (bit_depth == 16 && !keep16) png_set_strip_16(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    const int out_depth = png_get_bit_depth(png, info);
    check_decoded_dims(w, h, channels);
    if (!((channels == 1 && (out_depth == 8 || out_depth == 16)) ||
          (channels == 3 && out_depth == 8))) {
        png_error(png, "unsupported channel layout after decode");
    }

    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    if (channels == 3) {
        out.format = PixelFormat::rgb8;
    } else {
        out.format =
            out_depth == 16 ? PixelFormat::gray16 : PixelFormat::gray8;
    }
    out.samples.resize(static_cast<std::size_t>(w) * h * channels);
    rowbuf.resize(png_get_rowbytes(png, info));

    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, rowbuf.data(), nullptr);
        std::uint16_t* dst =
            out.samples.data() + static_cast<std::size_t>(y) * w * channels;
        if (out_depth == 16) {
            for (png_uint_32 x = 0; x < w; ++x) {
                // PNG stores 16-bit samples big-endian.
                dst[x] = static_cast<std::uint16_t>((rowbuf[2 * x] << 8) |
                                                    rowbuf[2 * x + 1]);
            }
        } else {
            for (std::size_t i = 0; i < static_cast<std::size_t>(w) * channels;
                 ++i) {
                dst[i] = rowbuf[i];
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
    auto* sink = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    sink->insert(sink->end(), data, data + n);
}

void png_mem_flush(png_structp) {}

std::vector<std::uint8_t> encode_png_mem(int width, int height, int channels,
                                         int bit_depth,
                                         const std::uint16_t* samples) {
    std::string errmsg;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                              png_on_error, png_on_warning);
    if (!png) throw Error("cannot allocate PNG writer");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("cannot allocate PNG info");
    }

    std::vector<std::uint8_t> sink;
    std::vector<png_byte> rowbuf;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG encode failed: " +
                    (errmsg.empty() ? "libpng error" : errmsg));
    }

    png_set_write_fn(png, &sink, png_mem_write, png_mem_flush);
    png_set_compression_level(png, 6);
    const int color_type =
        channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(png, info, width, height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t row_samples = static_cast<std::size_t>(width) * channels;
    rowbuf.resize(row_samples * (bit_depth == 16 ? 2 : 1));
    for (int y = 0; y < height; ++y) {
        const std::uint16_t* src = samples + static_cast<std::size_t>(y) * row_samples;
        if (bit_depth == 16) {
            for (std::size_t i = 0; i < row_samples; ++i) {
                rowbuf[2 * i] = static_cast<png_byte>(src[i] >> 8);
                rowbuf[2 * i + 1] = static_cast<png_byte>(src[i] & 0xff);
            }
        } else {
            for (std::size_t i = 0; i < row_samples; ++i) {
                rowbuf[i] = static_cast<png_byte>(src[i] & 0xff);
            }
        }
        png_write_row(png, rowbuf.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return sink;
}

// ---------------------------------------------------------------------------
// PNM (binary P5 / P6)

struct PnmCursor {
    const std::uint8_t* bytes;
    std::size_t len;
    std::size_t off = 0;
};

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(PnmCursor& c) {
    while (c.off < c.len) {
        const char ch = static_cast<char>(c.bytes[c.off]);
        if (ch == '#') {
            while (c.off < c.len && c.bytes[c.off] != '\n') ++c.off;
        } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            ++c.off;
        } else {
            break;
        }
    }
    std::string tok;
    while (c.off < c.len) {
        const char ch = static_cast<char>(c.bytes[c.off]);
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '#') {
            break;
        }
        tok.push_back(ch);
        ++c.off;
    }
    if (tok.empty()) throw DecodeError("truncated PNM header");
    return tok;
}

long long pnm_int(PnmCursor& c) {
    const std::string tok = pnm_token(c);
    long long v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9') {
            throw DecodeError("bad PNM header token '" + tok + "'");
        }
        v = v * 10 + (ch - '0');
        if (v > (1ll << 40)) throw DecodeError("PNM header value too large");
    }
    return v;
}

DecodedImage decode_pnm(const std::uint8_t* bytes, std::size_t len) {
    PnmCursor c{bytes, len};
    const std::string magic = pnm_token(c);
    if (magic != "P5" && magic != "P6") {
        throw DecodeError("unsupported PNM magic '" + magic +
                          "' (only binary P5/P6)");
    }
    const int channels = magic == "P6" ? 3 : 1;
    const long long w = pnm_int(c);
    const long long h = pnm_int(c);
    const long long maxval = pnm_int(c);
    check_decoded_dims(w, h, channels);
    if (maxval <= 0 || maxval > 65535) {
        throw DecodeError("PNM maxval out of range: " + std::to_string(maxval));
    }
    if (maxval > 255 && channels == 3) {
        throw DecodeError("16-bit PPM is not supported");
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (c.off >= len) throw DecodeError("truncated PNM header");
    ++c.off;

    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t n =
        static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
    if (c.off + n * bytes_per_sample > len) {
        throw DecodeError("truncated PNM raster data");
    }

    DecodedImage out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.format = channels == 3 ? PixelFormat::rgb8
                 : bytes_per_sample == 2 ? PixelFormat::gray16
                                         : PixelFormat::gray8;
    out.samples.resize(n);
    const std::uint8_t* src = bytes + c.off;
    if (bytes_per_sample == 2) {
        for (std::size_t i = 0; i < n; ++i) {
            out.samples[i] =
                static_cast<std::uint16_t>((src[2 * i] << 8) | src[2 * i + 1]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out.samples[i] = src[i];
    }
    return out;
}

void write_pnm_file(const std::string& path, const char* magic, int width,
                    int height, int maxval, const std::uint8_t* raster,
                    std::size_t raster_len) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << magic << "\n" << width << " " << height << "\n" << maxval << "\n";
    f.write(reinterpret_cast<const char*>(raster),
            static_cast<std::streamsize>(raster_len));
    if (!f) throw Error("write failed: " + path);
}

}  // namespace

GrayImage DecodedImage::as_gray8() const {
    if (format != PixelFormat::gray8) {
        throw InvalidInput("decoded image is not 8-bit grayscale");
    }
    GrayImage out(width, height);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out.data[i] = static_cast<std::uint8_t>(samples[i]);
    }
    return out;
}

RgbImage DecodedImage::as_rgb8() const {
    if (format != PixelFormat::rgb8) {
        throw InvalidInput("decoded image is not 8-bit RGB");
    }
    RgbImage out(width, height);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out.data[i] = static_cast<std::uint8_t>(samples[i]);
    }
    return out;
}

DecodedImage decode_image(const std::uint8_t* bytes, std::size_t len) {
    static const std::uint8_t kPngSig[8] = {0x89, 'P',  'N',  'G',
                                            0x0d, 0x0a, 0x1a, 0x0a};
    if (len >= 8 && std::memcmp(bytes, kPngSig, 8) == 0) {
        return decode_png(bytes, len);
    }
    if (len >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
        return decode_pnm(bytes, len);
    }
    throw DecodeError("unrecognized image container (expected PNG, P5 or P6)");
}

DecodedImage read_image(const std::string& path) {
    std::vector<std::uint8_t> bytes;
    try {
        bytes = read_file_bytes(path);
    } catch (const Error& e) {
        throw DecodeError(e.what());
    }
    try {
        return decode_image(bytes.data(), bytes.size());
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what());
    }
}

BinaryMask decoded_to_mask(const DecodedImage& img,
                           const BinarizePolicy& policy) {
    switch (img.format) {
    case PixelFormat::rgb8:
        return binarize(img.as_rgb8(), policy);
    case PixelFormat::gray8:
        return binarize(img.as_gray8(), policy);
    case PixelFormat::gray16: {
        policy.validate();
        BinaryMask out(img.width, img.height);
        for (std::size_t i = 0; i < img.samples.size(); ++i) {
            out.data[i] = img.samples[i] != 0;
        }
        return out;
    }
    }
    throw InvalidInput("unknown pixel format");
}

LabelMap decoded_to_labels(const DecodedImage& img) {
    if (img.format == PixelFormat::rgb8) {
        throw InvalidInput("label maps must be single channel");
    }
    LabelMap out(img.width, img.height);
    std::unordered_map<std::uint16_t, std::uint32_t> renumber;
    std::uint32_t next = 1;
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        const std::uint16_t v = img.samples[i];
        if (v == 0) continue;
        auto [it, inserted] = renumber.try_emplace(v, next);
        if (inserted) ++next;
        out.labels[i] = it->second;
    }
    out.component_count = static_cast<int>(next - 1);
    return out;
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("cannot encode an empty image");
    }
    std::vector<std::uint16_t> samples(img.data.begin(), img.data.end());
    return encode_png_mem(img.width, img.height, 1, 8, samples.data());
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("cannot encode an empty image");
    }
    std::vector<std::uint16_t> samples(img.data.begin(), img.data.end());
    return encode_png_mem(img.width, img.height, 3, 8, samples.data());
}

std::vector<std::uint8_t> encode_png_labels(const LabelMap& lm) {
    if (lm.width <= 0 || lm.height <= 0) {
        throw InvalidInput("cannot encode an empty label map");
    }
    std::vector<std::uint16_t> samples(lm.labels.size());
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        if (lm.labels[i] > 65535) {
            throw InvalidInput("label " + std::to_string(lm.labels[i]) +
                               " does not fit 16-bit storage");
        }
        samples[i] = static_cast<std::uint16_t>(lm.labels[i]);
    }
    return encode_png_mem(lm.width, lm.height, 1, 16, samples.data());
}

void write_png(const std::string& path, const GrayImage& img) {
    write_file_bytes(path, encode_png(img));
}

void write_png(const std::string& path, const RgbImage& img) {
    write_file_bytes(path, encode_png(img));
}

void write_png_labels(const std::string& path, const LabelMap& lm) {
    write_file_bytes(path, encode_png_labels(lm));
}

void write_pgm(const std::string& path, const GrayImage& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("cannot write an empty image");
    }
    write_pnm_file(path, "P5", img.width, img.height, 255, img.data.data(),
                   img.data.size());
}

void write_ppm(const std::string& path, const RgbImage& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("cannot write an empty image");
    }
    write_pnm_file(path, "P6", img.width, img.height, 255, img.data.data(),
                   img.data.size());
}

void write_pgm_labels(const std::string& path, const LabelMap& lm) {
    if (lm.width <= 0 || lm.height <= 0) {
        throw InvalidInput("cannot write an empty label map");
    }
    std::vector<std::uint8_t> raster(lm.labels.size() * 2);
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        if (lm.labels[i] > 65535) {
            throw InvalidInput("label " + std::to_string(lm.labels[i]) +
                               " does not fit 16-bit storage");
        }
        raster[2 * i] = static_cast<std::uint8_t>(lm.labels[i] >> 8);
        raster[2 * i + 1] = static_cast<std::uint8_t>(lm.labels[i] & 0xff);
    }
    write_pnm_file(path, "P5", lm.width, lm.height, 65535, raster.data(),
                   raster.size());
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    if (f.bad()) throw Error("read failed: " + path);
    return bytes;
}

void write_file_bytes(const std::string& path,
                      const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write failed: " + path);
}

}  // namespace logtally
