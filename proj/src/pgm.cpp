#include "drsplit/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "drsplit/errors.hpp"

namespace drsplit {
namespace {

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& b, std::size_t pos) : b_(b), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= b_.size(); }

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + static_cast<unsigned long>(b_[pos_] - '0');
      if (v > 0xFFFFFFFFul) throw ParseError(std::string("pgm: ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= b_.size()) throw ParseError(std::string("pgm: truncated, expected ") + what, pos_);
      throw ParseError(std::string("pgm: expected ") + what, start);
    }
    return v;
  }

  void single_whitespace() {
    if (pos_ >= b_.size() || !std::isspace(b_[pos_]))
      throw ParseError("pgm: expected whitespace after maxval", pos_);
    ++pos_;
  }

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_;
};

}  // namespace

GridImage parse_pgm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw ParseError("pgm: bad magic number", 0);
  const bool binary = bytes[1] == '5';
  Reader r(bytes, 2);
  const std::size_t header_pos = r.pos();
  if (!r.at_end() && !std::isspace(bytes[2]) && bytes[2] != '#')
    throw ParseError("pgm: bad magic number", header_pos);
  const auto w = r.number("width");
  const auto h = r.number("height");
  const std::size_t maxval_pos = r.pos();
  const auto maxval = r.number("maxval");
  if (w == 0 || h == 0) throw ParseError("pgm: empty image", maxval_pos);
  if (maxval == 0 || maxval > 65535) throw ParseError("pgm: maxval out of range", maxval_pos);
  const double scale = static_cast<double>(maxval);

  Vec values(w * h);
  if (binary) {
    r.single_whitespace();
    const std::size_t bps = maxval > 255 ? 2 : 1;
    std::size_t pos = r.pos();
    if (bytes.size() - pos < w * h * bps) throw ParseError("pgm: truncated pixel data", bytes.size());
    for (std::size_t k = 0; k < w * h; ++k) {
      unsigned v = bytes[pos++];
      if (bps == 2) v = (v << 8) | bytes[pos++];
      if (v > maxval) throw ParseError("pgm: sample exceeds maxval", pos - bps);
      values[k] = v / scale;
    }
  } else {
    for (std::size_t k = 0; k < w * h; ++k) {
      const std::size_t at = r.pos();
      const auto v = r.number("sample");
      if (v > maxval) throw ParseError("pgm: sample exceeds maxval", at);
      values[k] = static_cast<double>(v) / scale;
    }
  }
  return GridImage(w, h, std::move(values));
}

GridImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return parse_pgm(bytes);
}

std::vector<std::uint8_t> encode_pgm(const GridImage& img, int maxval) {
  if (maxval < 1 || maxval > 65535) throw ContractViolation("encode_pgm: maxval out of range");
  if (img.size() == 0) throw ContractViolation("encode_pgm: empty image");
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n" + std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const bool wide = maxval > 255;
  out.reserve(out.size() + img.size() * (wide ? 2 : 1));
  for (double v : img.values()) {
    const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<unsigned>(std::floor(c * maxval + 0.5));
    if (wide) out.push_back(static_cast<std::uint8_t>(q >> 8));
    out.push_back(static_cast<std::uint8_t>(q & 0xFF));
  }
  return out;
}

void write_pgm(const GridImage& img, const std::string& path, int maxval) {
  const auto bytes = encode_pgm(img, maxval);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path + "'");
}

}  // namespace drsplit
