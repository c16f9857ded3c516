#include "bkiexp/pgm.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "bkiexp/errors.hpp"

namespace bkiexp {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int(const char* what) {
    skip_whitespace_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(std::string("pgm: expected ") + what, start);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(bytes_.data() + start, bytes_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError(std::string("pgm: bad ") + what, start);
    return value;
  }

  unsigned read_raw(int width_bytes) {
    if (pos_ + static_cast<std::size_t>(width_bytes) > bytes_.size()) {
      throw ParseError("pgm: truncated pixel data", pos_);
    }
    unsigned v = static_cast<unsigned char>(bytes_[pos_++]);
    if (width_bytes == 2) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_++]);
    return v;
  }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError("pgm: expected whitespace before raster", pos_);
    }
    ++pos_;
  }

  std::string_view take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw ParseError("pgm: unexpected end of file", pos_);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

CellState classify(unsigned pixel, unsigned maxval) {
  const unsigned scaled = maxval == 255 ? pixel : static_cast<unsigned>((pixel * 255ULL + maxval / 2) / maxval);
  // Values between the two thresholds are unknown in the source map and are
  // treated as occupied.
  return scaled >= static_cast<unsigned>(kPgmFreeThreshold) ? CellState::Free : CellState::Occupied;
}

}  // namespace

GroundTruthGrid parse_pgm(std::string_view bytes, double resolution_m) {
  if (!(resolution_m > 0.0)) throw std::invalid_argument("pgm: resolution must be positive");
  PgmReader in(bytes);
  const auto magic = in.take(2);
  bool binary = false;
  if (magic == "P5") {
    binary = true;
  } else if (magic != "P2") {
    throw ParseError("pgm: unsupported magic '" + std::string(magic) + "'", 0);
  }
  const std::size_t width_at = in.offset();
  const long width = in.read_int("width");
  const long height = in.read_int("height");
  const long maxval = in.read_int("maxval");
  if (width <= 0 || height <= 0) throw ParseError("pgm: non-positive image size", width_at);
  if (maxval <= 0 || maxval > 65535) throw ParseError("pgm: maxval out of range", in.offset());

  GridGeometry geometry;
  geometry.width_cells = static_cast<int>(width);
  geometry.height_cells = static_cast<int>(height);
  geometry.resolution_m = resolution_m;
  GroundTruthGrid truth(geometry);

  const int sample_bytes = maxval < 256 ? 1 : 2;
  if (binary) in.expect_single_whitespace();
  for (long img_row = 0; img_row < height; ++img_row) {
    const int row = static_cast<int>(height - 1 - img_row);
    for (long col = 0; col < width; ++col) {
      if (!binary) in.skip_whitespace_and_comments();
      const std::size_t at = in.offset();
      const long pixel = binary ? static_cast<long>(in.read_raw(sample_bytes)) : in.read_int("pixel");
      if (pixel > maxval) throw ParseError("pgm: pixel exceeds maxval", at);
      truth.set_state({static_cast<int>(col), row},
                      classify(static_cast<unsigned>(pixel), static_cast<unsigned>(maxval)));
    }
  }
  return truth;
}

GroundTruthGrid read_pgm(const std::filesystem::path& path, double resolution_m) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("pgm: cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  return parse_pgm(bytes, resolution_m);
}

std::string encode_pgm(const GroundTruthGrid& truth, PgmFormat format) {
  std::ostringstream out;
  const int w = truth.width_cells();
  const int h = truth.height_cells();
  out << (format == PgmFormat::Binary ? "P5" : "P2") << '\n' << w << ' ' << h << "\n255\n";
  for (int row = h - 1; row >= 0; --row) {
    for (int col = 0; col < w; ++col) {
      const int pixel = truth.occupied({col, row}) ? 0 : 255;
      if (format == PgmFormat::Binary) {
        out.put(static_cast<char>(pixel));
      } else {
        out << pixel << (col + 1 == w ? '\n' : ' ');
      }
    }
  }
  return out.str();
}

void write_pgm(const GroundTruthGrid& truth, const std::filesystem::path& path, PgmFormat format) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("pgm: cannot write " + path.string());
  f << encode_pgm(truth, format);
  if (!f) throw std::runtime_error("pgm: write failed for " + path.string());
}

}  // namespace bkiexp
