#pragma once

// 8-bit portable graymap I/O (binary P5 and ASCII P2). Pixels map to [0, 1]
// by v / 255; writing clips to [0, 1] and quantizes with round(255 v).

#include "osga/core.hpp"
#include "osga/problems/tv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

namespace osga::harness {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view data) : data_(data) {}

  std::size_t offset() const { return pos_; }

  // Skips whitespace and '#' comments.
  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      v = v * 10 + (data_[pos_] - '0');
      if (v > 1'000'000'000L) throw ParseError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
    return v;
  }

  /// Exactly one whitespace byte separates the header from binary data.
  void expect_single_space() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      throw ParseError("expected whitespace after maxval", pos_);
    }
    ++pos_;
  }

  std::string_view rest() const { return data_.substr(pos_); }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline problems::ImageBuffer parse_pgm(std::string_view data) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '2')) {
    throw ParseError("not a graymap: expected magic P5 or P2", 0);
  }
  const bool binary = data[1] == '5';
  detail::PgmCursor cur(data);
  cur.advance(2);
  const long cols = cur.read_uint("width");
  const long rows = cur.read_uint("height");
  cur.skip_space();
  const std::size_t maxval_at = cur.offset();
  const long maxval = cur.read_uint("maxval");
  if (cols < 1 || rows < 1) throw ParseError("empty image", maxval_at);
  if (maxval != 255) throw ParseError("only 8-bit graymaps (maxval 255) are supported", maxval_at);

  const auto count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  problems::ImageBuffer img(rows, cols, 0.0);
  if (binary) {
    cur.expect_single_space();
    const std::string_view payload = cur.rest();
    if (payload.size() < count) {
      throw ParseError("truncated pixel data: expected " + std::to_string(count) + " bytes",
                       cur.offset() + payload.size());
    }
    for (std::size_t i = 0; i < count; ++i) {
      img.pixels[static_cast<Eigen::Index>(i)] =
          static_cast<unsigned char>(payload[i]) / 255.0;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      cur.skip_space();
      const std::size_t at = cur.offset();
      const long v = cur.read_uint("pixel value");
      if (v > maxval) throw ParseError("pixel value exceeds maxval", at);
      img.pixels[static_cast<Eigen::Index>(i)] = static_cast<double>(v) / 255.0;
    }
  }
  return img;
}

inline unsigned char quantize(double v) {
  const double clipped = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(255.0 * clipped));
}

inline std::string format_pgm(const problems::ImageBuffer& img, bool binary = true) {
  std::ostringstream out;
  out << (binary ? "P5" : "P2") << '\n' << img.cols << ' ' << img.rows << '\n' << 255 << '\n';
  if (binary) {
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i) out.put(static_cast<char>(quantize(img.pixels[i])));
  } else {
    for (Eigen::Index i = 0; i < img.rows; ++i) {
      for (Eigen::Index j = 0; j < img.cols; ++j) {
        out << static_cast<int>(quantize(img(i, j))) << (j + 1 < img.cols ? ' ' : '\n');
      }
    }
  }
  return out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for " + path);
}

inline problems::ImageBuffer read_image(const std::string& path) {
  return parse_pgm(read_file(path));
}

inline void write_image(const std::string& path, const problems::ImageBuffer& img,
                        bool binary = true) {
  write_file(path, format_pgm(img, binary));
}

}  // namespace osga::harness
