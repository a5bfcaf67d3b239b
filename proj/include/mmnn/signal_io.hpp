#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mmnn {

// 16-bit mono PCM payload.
struct WavData {
  std::uint32_t sample_rate = 16000;
  std::vector<std::int16_t> samples;
};

/// Reads a RIFF/WAVE file; only PCM (format code 1), mono, 16-bit is accepted,
/// anything else raises UnsupportedFormat.  Structural problems raise ParseError.
WavData load_wav(const std::string& path);
void save_wav(const std::string& path, const WavData& wav);

// Sample <-> unit-interval mapping: u = (v + 32768) / 65535 and its exact
// rounding inverse, so a round trip is value-identical.
std::vector<double> wav_to_unit(std::span<const std::int16_t> samples);
std::vector<std::int16_t> unit_to_wav(std::span<const double> units);

struct CsvSignal {
  std::vector<double> xs;      // strictly increasing
  std::vector<double> values;
};

/// Two-column CSV with header "x,value".
CsvSignal load_csv_signal(const std::string& path);
void save_csv_signal(const std::string& path, std::span<const double> xs,
                     std::span<const double> values);

// 17 significant digits: enough for doubles to round-trip through text.
std::string format_double(double v);

}  // namespace mmnn
