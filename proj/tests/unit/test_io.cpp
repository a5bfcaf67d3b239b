#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "mmnn/errors.hpp"
#include "mmnn/signal.hpp"
#include "mmnn/signal_io.hpp"

using namespace mmnn;

namespace {

std::string temp_path(const char* name) {
  return std::string("io_test_") + name;
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& b) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
}

void push_u32(std::vector<unsigned char>& v, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back((x >> (8 * i)) & 0xFF);
}

void push_u16(std::vector<unsigned char>& v, std::uint16_t x) {
  v.push_back(x & 0xFF);
  v.push_back(x >> 8);
}

void push_tag(std::vector<unsigned char>& v, const char* tag) {
  v.insert(v.end(), tag, tag + 4);
}

// Minimal valid mono 16-bit file with an odd-sized junk chunk before data,
// exercising the word-alignment rule of the chunk walk.
std::vector<unsigned char> tiny_wav(const std::vector<std::int16_t>& samples) {
  std::vector<unsigned char> fmt;
  push_u16(fmt, 1);      // PCM
  push_u16(fmt, 1);      // mono
  push_u32(fmt, 8000);   // rate
  push_u32(fmt, 16000);  // byte rate
  push_u16(fmt, 2);      // block align
  push_u16(fmt, 16);     // bits
  std::vector<unsigned char> body;
  push_tag(body, "WAVE");
  push_tag(body, "fmt ");
  push_u32(body, std::uint32_t(fmt.size()));
  body.insert(body.end(), fmt.begin(), fmt.end());
  push_tag(body, "junk");
  push_u32(body, 3);
  body.insert(body.end(), {0xAA, 0xBB, 0xCC, 0x00});  // 3 bytes + pad
  push_tag(body, "data");
  push_u32(body, std::uint32_t(2 * samples.size()));
  for (std::int16_t s : samples) push_u16(body, std::uint16_t(s));
  std::vector<unsigned char> all;
  push_tag(all, "RIFF");
  push_u32(all, std::uint32_t(body.size()));
  all.insert(all.end(), body.begin(), body.end());
  return all;
}

}  // namespace

TEST_CASE("wav: load handles chunk padding, save round-trips") {
  std::vector<std::int16_t> samples{0, 1, -1, 32767, -32768, 12345};
  auto path = temp_path("tiny.wav");
  write_bytes(path, tiny_wav(samples));
  WavData w = load_wav(path);
  CHECK(w.sample_rate == 8000);
  CHECK(w.samples == samples);

  auto path2 = temp_path("tiny2.wav");
  save_wav(path2, w);
  WavData w2 = load_wav(path2);
  CHECK(w2.sample_rate == w.sample_rate);
  CHECK(w2.samples == w.samples);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("wav: stereo and non-PCM rejected, truncation detected") {
  auto path = temp_path("bad.wav");
  std::vector<std::int16_t> samples{0};
  auto bytes = tiny_wav(samples);
  bytes[22] = 2;  // channels = 2
  write_bytes(path, bytes);
  CHECK_THROWS_AS((void)load_wav(path), UnsupportedFormat);

  bytes = tiny_wav(samples);
  bytes[20] = 3;  // format code = IEEE float
  write_bytes(path, bytes);
  CHECK_THROWS_AS((void)load_wav(path), UnsupportedFormat);

  bytes = tiny_wav(samples);
  bytes.resize(bytes.size() - 1);  // clipped data chunk
  write_bytes(path, bytes);
  CHECK_THROWS_AS((void)load_wav(path), ParseError);

  write_bytes(path, {'R', 'I', 'F', 'X', 0, 0, 0, 0});
  CHECK_THROWS_AS((void)load_wav(path), ParseError);
  CHECK_THROWS_AS((void)load_wav("no_such_file.wav"), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("wav unit mapping: frozen value and exact inverse on the lattice") {
  std::vector<std::int16_t> zero{0};
  CHECK(wav_to_unit(zero)[0] == doctest::Approx(0.5000076295109483).epsilon(1e-16));
  std::vector<std::int16_t> all(65536);
  for (int i = 0; i < 65536; ++i) all[i] = std::int16_t(i - 32768);
  auto units = wav_to_unit(all);
  auto back = unit_to_wav(units);
  CHECK(back == all);
  for (double u : units) {
    CHECK(u >= 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("csv: round trip at full precision") {
  auto path = temp_path("sig.csv");
  std::vector<double> xs{0.0, 1.0 / 3.0, 0.5, 0.7071067811865476};
  std::vector<double> vs{0.1, 0.333333333333333315, 1.0 / 7.0, 0.25};
  save_csv_signal(path, xs, vs);
  CsvSignal s = load_csv_signal(path);
  CHECK(s.xs == xs);      // bit-exact through %.17g
  CHECK(s.values == vs);
  std::remove(path.c_str());
}

TEST_CASE("csv: malformed inputs raise ParseError with context") {
  auto path = temp_path("bad.csv");
  auto write_text = [&](const char* text) {
    std::ofstream out(path);
    out << text;
  };
  write_text("value,x\n0,0\n1,1\n");
  CHECK_THROWS_AS((void)load_csv_signal(path), ParseError);
  write_text("x,value\n0.0,0.1\n0.0,0.2\n");  // non-increasing x
  CHECK_THROWS_AS((void)load_csv_signal(path), ParseError);
  write_text("x,value\n0.0,0.1\nnope,0.2\n");
  CHECK_THROWS_AS((void)load_csv_signal(path), ParseError);
  write_text("x,value\n0.0,0.1\n");  // a single row cannot define a signal
  CHECK_THROWS_AS((void)load_csv_signal(path), ParseError);
  write_text("x,value\n0.0,0.1,9\n1.0,0.2\n");
  CHECK_THROWS_AS((void)load_csv_signal(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("format_double prints 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
}
