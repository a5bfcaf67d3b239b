#include "mmnn/signal_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mmnn/errors.hpp"

namespace mmnn {

namespace {

std::uint32_t read_u32(const std::string& buf, std::size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + 3])) << 24;
}

std::uint16_t read_u16(const std::string& buf, std::size_t pos) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(buf[pos]) |
      static_cast<unsigned char>(buf[pos + 1]) << 8);
}

void put_u32(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

WavData load_wav(const std::string& path) {
  const std::string buf = slurp(path);
  if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 ||
      buf.compare(8, 4, "WAVE") != 0)
    throw ParseError("not a RIFF/WAVE file: " + path);

  WavData wav;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id = buf.substr(pos, 4);
    const std::uint32_t size = read_u32(buf, pos + 4);
    pos += 8;
    if (pos + size > buf.size())
      throw ParseError("truncated WAV chunk: " + id);
    if (id == "fmt ") {
      if (size < 16) throw ParseError("malformed fmt chunk");
      const std::uint16_t format = read_u16(buf, pos);
      const std::uint16_t channels = read_u16(buf, pos + 2);
      const std::uint16_t bits = read_u16(buf, pos + 14);
      if (format != 1) throw UnsupportedFormat("only PCM WAV is supported");
      if (channels != 1) throw UnsupportedFormat("only mono WAV is supported");
      if (bits != 16) throw UnsupportedFormat("only 16-bit WAV is supported");
      wav.sample_rate = read_u32(buf, pos + 4);
      have_fmt = true;
    } else if (id == "data") {
      if (size % 2 != 0) throw ParseError("odd data chunk size");
      wav.samples.resize(size / 2);
      for (std::size_t i = 0; i < wav.samples.size(); ++i) {
        const auto raw = read_u16(buf, pos + 2 * i);
        wav.samples[i] = static_cast<std::int16_t>(raw);
      }
      have_data = true;
    }
    pos += size + (size % 2);  // chunks are word-aligned
  }
  if (!have_fmt) throw ParseError("missing fmt chunk");
  if (!have_data) throw ParseError("missing data chunk");
  return wav;
}

void save_wav(const std::string& path, const WavData& wav) {
  const auto data_bytes = static_cast<std::uint32_t>(wav.samples.size() * 2);
  std::string buf;
  buf.reserve(44 + data_bytes);
  buf += "RIFF";
  put_u32(buf, 36 + data_bytes);
  buf += "WAVE";
  buf += "fmt ";
  put_u32(buf, 16);
  put_u16(buf, 1);  // PCM
  put_u16(buf, 1);  // mono
  put_u32(buf, wav.sample_rate);
  put_u32(buf, wav.sample_rate * 2);  // byte rate
  put_u16(buf, 2);                    // block align
  put_u16(buf, 16);                   // bits per sample
  buf += "data";
  put_u32(buf, data_bytes);
  for (const std::int16_t s : wav.samples)
    put_u16(buf, static_cast<std::uint16_t>(s));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write file: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ParseError("short write: " + path);
}

std::vector<double> wav_to_unit(std::span<const std::int16_t> samples) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = (static_cast<double>(samples[i]) + 32768.0) / 65535.0;
  return out;
}

std::vector<std::int16_t> unit_to_wav(std::span<const double> units) {
  std::vector<std::int16_t> out(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    const double v = std::nearbyint(units[i] * 65535.0 - 32768.0);
    out[i] = static_cast<std::int16_t>(
        std::min(32767.0, std::max(-32768.0, v)));
  }
  return out;
}

std::string format_double(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  return tmp;
}

CsvSignal load_csv_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,value")
    throw ParseError("expected header \"x,value\" in " + path);

  CsvSignal csv;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("missing comma on line " + std::to_string(lineno));
    char* end = nullptr;
    const std::string xs = line.substr(0, comma);
    const std::string vs = line.substr(comma + 1);
    const double x = std::strtod(xs.c_str(), &end);
    if (end != xs.c_str() + xs.size() || xs.empty())
      throw ParseError("bad x on line " + std::to_string(lineno));
    const double v = std::strtod(vs.c_str(), &end);
    if (end != vs.c_str() + vs.size() || vs.empty())
      throw ParseError("bad value on line " + std::to_string(lineno));
    if (!csv.xs.empty() && !(x > csv.xs.back()))
      throw ParseError("x must increase strictly (line " + std::to_string(lineno) + ")");
    csv.xs.push_back(x);
    csv.values.push_back(v);
  }
  if (csv.xs.size() < 2) throw ParseError("need at least 2 CSV rows");
  return csv;
}

void save_csv_signal(const std::string& path, std::span<const double> xs,
                     std::span<const double> values) {
  if (xs.size() != values.size())
    throw LengthMismatch("save_csv_signal: column lengths differ");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError("cannot write file: " + path);
  out << "x,value\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << format_double(xs[i]) << ',' << format_double(values[i]) << '\n';
  if (!out) throw ParseError("short write: " + path);
}

}  // namespace mmnn
