#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "imrec/error.hpp"
#include "imrec/io.hpp"
#include "test_support.hpp"

using namespace imrec;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("imrec_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(PgmTest, MinimalHeaderParses) {
  std::string bytes = "P5\n4 4\n255\n";
  for (int k = 0; k < 16; ++k) bytes.push_back(static_cast<char>(k * 16));
  const Image m = decode_pgm(bytes);
  EXPECT_EQ(m.side(), 4);
  for (int k = 0; k < 16; ++k) EXPECT_EQ(m[static_cast<std::size_t>(k)], k * 16.0);
}

TEST(PgmTest, CommentsAndMaxvalScaling) {
  std::string bytes = "P5 # scanner\n# more\n2 2 15\n";
  bytes += std::string({'\0', '\x05', '\x0a', '\x0f'});
  const Image m = decode_pgm(bytes);
  EXPECT_EQ(m[0], 0.0);
  EXPECT_DOUBLE_EQ(m[1], 85.0);
  EXPECT_DOUBLE_EQ(m[3], 255.0);
}

TEST(PgmTest, DistinctErrors) {
  EXPECT_THROW(decode_pgm("P2\n2 2\n255\n0000"), MalformedHeaderError);
  EXPECT_THROW(decode_pgm("P5\n2\n"), MalformedHeaderError);
  EXPECT_THROW(decode_pgm("P5\n2 3\n255\n000000"), MalformedHeaderError);
  EXPECT_THROW(decode_pgm("P5\n2 2\n65535\n00000000"), UnsupportedMaxvalError);
  EXPECT_THROW(decode_pgm("P5\n2 2\n0\n0000"), UnsupportedMaxvalError);
  EXPECT_THROW(decode_pgm("P5\n4 4\n255\n0123"), TruncatedPayloadError);
  EXPECT_THROW(read_image("/nonexistent/dir/x.pgm"), IoError);
}

TEST(PgmTest, ClampAndRound) {
  EXPECT_EQ(quantize(-3.2), 0);
  EXPECT_EQ(quantize(260.7), 255);
  EXPECT_EQ(quantize(2.5), 3);
  EXPECT_EQ(quantize(2.49), 2);
  const std::string bytes = encode_pgm(Image(2, {-3.2, 260.7, 17.5, 100.0}));
  EXPECT_EQ(bytes.substr(0, 11), "P5\n2 2\n255\n");
  EXPECT_EQ(static_cast<unsigned char>(bytes[11]), 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 255);
  EXPECT_EQ(static_cast<unsigned char>(bytes[13]), 18);
}

TEST(PgmTest, RoundTripIsBitIdentical) {
  Image m(4);
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = static_cast<double>((k * 37) % 256);
  const fs::path p = scratch_dir() / "rt.pgm";
  write_image(m, p.string());
  EXPECT_EQ(read_image(p.string()), m);
  const std::string first = slurp(p);
  write_image(read_image(p.string()), p.string());
  EXPECT_EQ(slurp(p), first);
}

TEST(PsfTextTest, RoundTrip) {
  const PsfKernel k = make_motion(7, 30);
  const PsfKernel back = parse_psf(format_psf(k));
  EXPECT_EQ(back.rows, k.rows);
  EXPECT_EQ(back.taps, k.taps);
  EXPECT_THROW(parse_psf("1 2\n3\n"), ParameterError);
  EXPECT_THROW(parse_psf("1 x\n"), ParameterError);
}

TEST(PsfTextTest, SpecSyntax) {
  EXPECT_EQ(psf_from_spec("motion:15:30").taps, make_motion(15, 30).taps);
  EXPECT_EQ(psf_from_spec("gaussian:5:1.5").taps, make_gaussian(5, 1.5).taps);
  EXPECT_EQ(psf_from_spec("gaussian:512:1.5", 64).rows, 63);
  EXPECT_EQ(psf_from_spec("log:5:0.5").taps, make_log(5, 0.5).taps);
  EXPECT_EQ(psf_from_spec("disk:5").taps, make_disk(5).taps);
  EXPECT_EQ(psf_from_spec("unsharp:0.2").taps, make_unsharp(0.2).taps);
  EXPECT_EQ(psf_from_spec("laplacian:0.2").taps, make_laplacian(0.2).taps);
  EXPECT_EQ(psf_from_spec("delta").taps, make_delta().taps);
  EXPECT_THROW(psf_from_spec("box:3"), ParameterError);
  EXPECT_THROW(psf_from_spec("disk:5:1"), ParameterError);
  EXPECT_THROW(psf_from_spec("gaussian:4.5:1"), ParameterError);
  const fs::path p = scratch_dir() / "k.txt";
  write_psf(make_disk(2), p.string());
  EXPECT_EQ(psf_from_spec("file:" + p.string()).taps, make_disk(2).taps);
}

TEST(LogTest, SingleRecord) {
  const std::string csv = format_log({IterationRecord{0, 0.5, 1.0, 2.0, 3.0}});
  EXPECT_EQ(csv, "k,tau,rel_err,misfit,objective\n0,0.5,1,2,3\n");
  EXPECT_THROW(write_log({}, (scratch_dir() / "empty.csv").string()), ParameterError);
}

TEST(LogTest, FullPrecision) {
  const double tau = 0.1234567890123456789;
  const std::string csv = format_log({IterationRecord{3, tau, 1e-5, 9.74, 1.0 / 3.0}});
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const std::string tau_text = row.substr(2, row.find(',', 2) - 2);
  EXPECT_EQ(std::stod(tau_text), tau);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}
