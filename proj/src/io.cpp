#include "imrec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "imrec/error.hpp"

namespace imrec {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Header token reader honoring '#' comments.
class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  long next_int(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') ++pos_;
    if (start == pos_) throw MalformedHeaderError(std::string("pgm: missing ") + what);
    long v = 0;
    const auto res = std::from_chars(bytes_.data() + start, bytes_.data() + pos_, v);
    if (res.ec != std::errc()) throw MalformedHeaderError(std::string("pgm: bad ") + what);
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw MalformedHeaderError("pgm: missing whitespace before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view token, const std::string& context) {
  std::string s(token);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParameterError(context + ": cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw ParameterError(context + ": cannot parse number '" + s + "'");
  return v;
}

}  // namespace

Image decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw MalformedHeaderError("pgm: missing P5 magic number");
  }
  HeaderReader header(bytes);
  const long width = header.next_int("width");
  const long height = header.next_int("height");
  const long maxval = header.next_int("maxval");
  if (width < 2 || height < 2) throw MalformedHeaderError("pgm: image must be at least 2x2");
  if (width != height) throw MalformedHeaderError("pgm: only square images are supported");
  if (maxval < 1 || maxval > 255) {
    throw UnsupportedMaxvalError("pgm: unsupported maxval " + std::to_string(maxval) + " (need 1..255)");
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + count) {
    throw TruncatedPayloadError("pgm: raster has " + std::to_string(bytes.size() - std::min(bytes.size(), offset)) +
                                " bytes, expected " + std::to_string(count));
  }
  Image m(static_cast<int>(width));
  const double scale = 255.0 / static_cast<double>(maxval);
  for (std::size_t k = 0; k < count; ++k) {
    m[k] = static_cast<double>(static_cast<unsigned char>(bytes[offset + k])) * scale;
  }
  return m;
}

Image read_image(const std::string& path) { return decode_pgm(slurp(path)); }

std::uint8_t quantize(double value) {
  return static_cast<std::uint8_t>(std::round(std::clamp(value, 0.0, 255.0)));
}

std::string encode_pgm(const Image& m) {
  std::string out = "P5\n" + std::to_string(m.side()) + " " + std::to_string(m.side()) + "\n255\n";
  out.reserve(out.size() + m.size());
  for (double v : m.values()) out.push_back(static_cast<char>(quantize(v)));
  return out;
}

void write_image(const Image& m, const std::string& path) { spit(path, encode_pgm(m)); }

std::string format_psf(const PsfKernel& psf) {
  std::string out;
  for (int r = 0; r < psf.rows; ++r) {
    for (int c = 0; c < psf.cols; ++c) {
      if (c > 0) out += ' ';
      const double v = psf.at(r, c);
      out += format_double(v == 0.0 ? 0.0 : v);  // no "-0"
    }
    out += '\n';
  }
  return out;
}

PsfKernel parse_psf(std::string_view text) {
  std::vector<double> taps;
  int rows = 0;
  int cols = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    int count = 0;
    while (ls >> tok) {
      taps.push_back(parse_double(tok, "psf text"));
      ++count;
    }
    if (count == 0) continue;
    if (cols >= 0 && count != cols) throw ParameterError("psf text: ragged rows");
    cols = count;
    ++rows;
  }
  if (rows == 0) throw ParameterError("psf text: no taps");
  return make_custom(rows, cols, std::move(taps));
}

void write_psf(const PsfKernel& psf, const std::string& path) { spit(path, format_psf(psf)); }

PsfKernel read_psf(const std::string& path) { return parse_psf(slurp(path)); }

PsfKernel psf_from_spec(const std::string& spec, int max_size) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  const std::string type = spec.substr(0, spec.find(':'));
  if (type == "file") {
    if (spec.size() <= 5) throw ParameterError("psf spec: file:<path> needs a path");
    return read_psf(spec.substr(5));
  }
  while (true) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto num = [&](std::size_t i, double fallback) {
    return i < parts.size() ? parse_double(parts[i], "psf spec '" + spec + "'") : fallback;
  };
  auto whole = [&](std::size_t i, int fallback) {
    const double v = num(i, fallback);
    if (v != std::floor(v)) throw ParameterError("psf spec '" + spec + "': hsize must be an integer");
    return static_cast<int>(v);
  };
  PsfParams p;
  p.max_size = max_size;
  std::size_t expected = 1;
  if (type == "motion") {
    p.kind = PsfKind::Motion;
    p.length = num(1, 9.0);
    p.theta_deg = num(2, 0.0);
    expected = 3;
  } else if (type == "gaussian" || type == "log") {
    p.kind = type == "gaussian" ? PsfKind::Gaussian : PsfKind::Log;
    p.hsize = whole(1, type == "gaussian" ? 3 : 5);
    p.sigma = num(2, 0.5);
    expected = 3;
  } else if (type == "disk") {
    p.kind = PsfKind::Disk;
    p.radius = num(1, 5.0);
    expected = 2;
  } else if (type == "unsharp" || type == "laplacian") {
    p.kind = type == "unsharp" ? PsfKind::Unsharp : PsfKind::Laplacian;
    p.alpha = num(1, 0.2);
    expected = 2;
  } else if (type == "delta") {
    p.kind = PsfKind::Delta;
  } else {
    throw ParameterError("psf spec: unknown type '" + type + "'");
  }
  if (parts.size() > expected) throw ParameterError("psf spec '" + spec + "': too many parameters");
  return make_psf(p);
}

std::string format_log(const std::vector<IterationRecord>& records) {
  std::string out = "k,tau,rel_err,misfit,objective\n";
  for (const auto& r : records) {
    out += std::to_string(r.k);
    for (double v : {r.tau, r.rel_err, r.misfit, r.objective}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_log(const std::vector<IterationRecord>& records, const std::string& path) {
  if (records.empty()) throw ParameterError("write_log: no records to write to '" + path + "'");
  spit(path, format_log(records));
}

}  // namespace imrec
