#include "shapebench/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace shapebench {

namespace {

// Decoded raster with 1 or 3 interleaved 8-bit channels.
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
    static constexpr std::array<std::uint8_t, 8> sig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    return bytes.size() >= sig.size() && std::equal(sig.begin(), sig.end(), bytes.begin());
}

Raster decode_png(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
    image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    Raster r;
    r.width = static_cast<int>(image.width);
    r.height = static_cast<int>(image.height);
    r.channels = gray ? 1 : 3;
    r.data.resize(PNG_IMAGE_SIZE(image));
    const png_color black{0, 0, 0};
    if (!png_image_finish_read(&image, &black, r.data.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw IoError("cannot decode PNG " + path.string() + ": " + msg);
    }
    return r;
}

class PnmReader {
public:
    PnmReader(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path)
        : bytes_(bytes), path_(path) {}

    Raster decode() {
        if (bytes_.size() < 2 || bytes_[0] != 'P') {
            fail("unrecognized image format");
        }
        const char kind = static_cast<char>(bytes_[1]);
        if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
            fail("unsupported Netpbm variant P" + std::string(1, kind));
        }
        pos_ = 2;
        Raster r;
        r.width = static_cast<int>(next_int());
        r.height = static_cast<int>(next_int());
        const long maxval = next_int();
        if (r.width <= 0 || r.height <= 0 || maxval <= 0 || maxval > 65535) {
            fail("bad header");
        }
        r.channels = (kind == '3' || kind == '6') ? 3 : 1;
        const auto count = static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height) *
                           static_cast<std::size_t>(r.channels);
        r.data.resize(count);
        auto to8 = [maxval](long v) {
            return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
        };
        if (kind == '2' || kind == '3') {
            for (auto& px : r.data) {
                const long v = next_int();
                if (v > maxval) {
                    fail("sample exceeds maxval");
                }
                px = to8(v);
            }
            return r;
        }
        ++pos_;  // single whitespace after maxval
        const std::size_t bpp = maxval > 255 ? 2 : 1;
        if (bytes_.size() < pos_ + count * bpp) {
            fail("truncated pixel data");
        }
        for (std::size_t i = 0; i < count; ++i) {
            long v = bytes_[pos_ + i * bpp];
            if (bpp == 2) {
                v = (v << 8) | bytes_[pos_ + i * bpp + 1];
            }
            r.data[i] = to8(std::min(v, maxval));
        }
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw IoError("cannot decode " + path_.string() + ": " + what);
    }

    long next_int() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            fail("expected an integer in header or data");
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000) {
                fail("integer too large");
            }
            ++pos_;
        }
        return v;
    }

    const std::vector<std::uint8_t>& bytes_;
    const std::filesystem::path& path_;
    std::size_t pos_ = 0;
};

Raster decode(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw IoError("no such file: " + path.string());
    }
    const auto bytes = read_file(path);
    if (is_png(bytes)) {
        return decode_png(bytes, path);
    }
    return PnmReader(bytes, path).decode();
}

bool wants_png(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png";
}

void encode(const std::filesystem::path& path, int width, int height, int channels,
            const std::uint8_t* data) {
    if (wants_png(path)) {
        png_image image{};
        image.version = PNG_IMAGE_VERSION;
        image.width = static_cast<png_uint_32>(width);
        image.height = static_cast<png_uint_32>(height);
        image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
        if (!png_image_write_to_file(&image, path.string().c_str(), 0, data, 0, nullptr)) {
            throw IoError("cannot write " + path.string() + ": " + image.message);
        }
        return;
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    os << (channels == 1 ? "P5\n" : "P6\n") << width << ' ' << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(data),
             static_cast<std::streamsize>(width) * height * channels);
    if (!os) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace

BinaryShape load_mask(const std::filesystem::path& path) {
    const Raster r = decode(path);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(r.width) *
                                 static_cast<std::size_t>(r.height));
    for (std::size_t i = 0; i < px.size(); ++i) {
        const auto c = static_cast<std::size_t>(r.channels);
        const std::uint8_t v = r.data[i * c];
        for (std::size_t k = 1; k < c; ++k) {
            if (r.data[i * c + k] != v) {
                throw IoError(path.string() + " is a color image with unequal channels, "
                              "expected a single-channel mask");
            }
        }
        px[i] = v >= 128 ? 1 : 0;
    }
    return BinaryShape(r.width, r.height, std::move(px));
}

void save_mask(const BinaryShape& shape, const std::filesystem::path& path) {
    std::vector<std::uint8_t> px(shape.pixels().begin(), shape.pixels().end());
    for (auto& v : px) {
        v = v ? 255 : 0;
    }
    encode(path, shape.width(), shape.height(), 1, px.data());
}

ColorImage load_color_image(const std::filesystem::path& path) {
    const Raster r = decode(path);
    ColorImage img(r.width, r.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        if (r.channels == 1) {
            const std::uint8_t v = r.data[i];
            img.pixels[i] = {v, v, v};
        } else {
            img.pixels[i] = {r.data[3 * i], r.data[3 * i + 1], r.data[3 * i + 2]};
        }
    }
    return img;
}

void save_color_image(const ColorImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> data;
    data.reserve(img.pixels.size() * 3);
    for (const auto& c : img.pixels) {
        data.push_back(c.r);
        data.push_back(c.g);
        data.push_back(c.b);
    }
    encode(path, img.width, img.height, 3, data.data());
}

void save_gray_image(const GrayImage& img, const std::filesystem::path& path) {
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height)) {
        throw IoError("save_gray_image: buffer size does not match dimensions");
    }
    encode(path, img.width, img.height, 1, img.pixels.data());
}

}  // namespace shapebench
