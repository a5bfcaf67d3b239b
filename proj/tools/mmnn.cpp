// mmnn: command-line runs of the max-min operator families.  Subcommands
// cover approximation sweeps, denoising, timing benchmarks, sup-error bound
// checks, kernel constants, and manifest replay.  Every file-producing run
// writes a manifest.json from which `replay` reproduces the CSVs byte for
// byte (timing.csv re-measures wall time and is the one exception).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmnn/bell.hpp"
#include "mmnn/chi.hpp"
#include "mmnn/errors.hpp"
#include "mmnn/estimates.hpp"
#include "mmnn/operators.hpp"
#include "mmnn/quadrature.hpp"
#include "mmnn/sigmoid.hpp"
#include "mmnn/signal.hpp"
#include "mmnn/signal_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kWavWindow = 8000;  // samples per denoising window

struct RunParams {
  std::string command;
  std::string signal = "sine-g";
  std::vector<std::string> families{"D", "K", "F"};
  std::string family = "D";
  std::vector<std::int64_t> ns{200};
  std::string sigma = "logistic";
  double slope = 1.0;
  double scale = 1.0;
  std::string chi = "rational";
  double chi_c = 1.0;
  double alpha = 0.0;  // <= 0 selects the sigmoid kind's default exponent
  std::int64_t grid = 8000;
  std::string noise = "none";
  double noise_amount = 0.05;
  std::uint64_t seed = 0;
  bool double_pass = false;
  int threads = 0;  // 0: machine parallelism
  int panels = 64;
  bool svg = false;
  std::string out = ".";
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// "name[:number]" -> name plus optional numeric suffix.
std::pair<std::string, std::optional<double>> split_tagged(const std::string& s) {
  const auto pos = s.find(':');
  if (pos == std::string::npos) return {s, std::nullopt};
  const std::string tail = s.substr(pos + 1);
  try {
    std::size_t used = 0;
    const double v = std::stod(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(tail);
    return {s.substr(0, pos), v};
  } catch (const std::exception&) {
    throw mmnn::ParseError("bad numeric suffix in '" + s + "'");
  }
}

std::vector<std::string> split_family_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  if (out.empty()) throw mmnn::ParseError("empty family list");
  for (const auto& code : out) (void)mmnn::family_from_code(code);
  return out;
}

void parse_sigma_flag(const std::string& s, RunParams& p) {
  auto [name, slope] = split_tagged(s);
  (void)mmnn::sigmoid_kind_from_string(name);
  p.sigma = name;
  p.slope = slope.value_or(1.0);
}

void parse_chi_flag(const std::string& s, RunParams& p) {
  auto [name, c] = split_tagged(s);
  if (name == "hat") {
    if (c) throw mmnn::ParseError("hat kernel takes no parameter");
    p.chi = "hat";
  } else if (name == "rational") {
    p.chi = "rational";
    p.chi_c = c.value_or(1.0);
  } else {
    throw mmnn::ParseError("unknown chi kernel '" + name + "' (use rational:c or hat)");
  }
}

void parse_noise_flag(const std::string& s, RunParams& p) {
  auto [name, amount] = split_tagged(s);
  if (name == "none") {
    if (amount) throw mmnn::ParseError("noise 'none' takes no parameter");
    p.noise = "none";
  } else if (name == "saltpepper" || name == "gaussian") {
    p.noise = name;
    p.noise_amount = amount.value_or(0.05);
  } else {
    throw mmnn::ParseError("unknown noise '" + name +
                           "' (use saltpepper:p or gaussian:sd)");
  }
}

// Preset bundles; explicit flags win, so only fields the user left untouched
// are overwritten.
void apply_preset(const std::string& name, const CLI::App* sub, RunParams& p) {
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (name == "saltpepper-fig2") {
    if (unset("--sigma")) { p.sigma = "tanh"; p.slope = 1.0; }
    if (unset("--scale")) p.scale = 0.05;
    if (unset("--chi")) { p.chi = "rational"; p.chi_c = 0.001; }
    if (unset("--n")) p.ns = {8000};
    if (unset("--noise")) { p.noise = "saltpepper"; p.noise_amount = 0.05; }
  } else if (name == "gaussian-fig3") {
    if (unset("--sigma")) { p.sigma = "logistic"; p.slope = 10.0; }
    if (unset("--scale")) p.scale = 0.05;
    if (unset("--chi")) { p.chi = "rational"; p.chi_c = 0.002; }
    if (unset("--n")) p.ns = {8000};
    if (unset("--noise")) { p.noise = "gaussian"; p.noise_amount = 0.05; }
  } else {
    throw mmnn::ParseError("unknown preset '" + name +
                           "' (saltpepper-fig2, gaussian-fig3)");
  }
}

mmnn::OperatorConfig make_config(const RunParams& p, const std::string& code,
                                 std::int64_t n) {
  const mmnn::Sigmoid sigmoid(mmnn::sigmoid_kind_from_string(p.sigma), p.slope,
                              p.alpha);
  mmnn::OperatorConfig cfg{mmnn::family_from_code(code), n,
                           mmnn::BellKernel(sigmoid, p.scale),
                           p.chi == "hat" ? mmnn::ChiKernel::hat()
                                          : mmnn::ChiKernel::rational(p.chi_c),
                           {}};
  cfg.quad.panels_per_cell = p.panels;
  return cfg;
}

mmnn::NoiseSpec make_noise(const RunParams& p) {
  mmnn::NoiseSpec spec;
  spec.kind = p.noise == "gaussian" ? mmnn::NoiseSpec::Kind::gaussian
                                    : mmnn::NoiseSpec::Kind::salt_pepper;
  spec.amount = p.noise_amount;
  spec.seed = p.seed;
  return spec;
}

// A signal in canonical [0, 1] coordinates plus the affine maps back to the
// source units (both identities for the builtins).
struct SourceSignal {
  mmnn::Signal sig;
  mmnn::AffineMap xmap;
  mmnn::AffineMap vmap;
};

SourceSignal resolve_signal(const RunParams& p) {
  if (p.signal == "piecewise-table1")
    return {mmnn::Signal::piecewise(0.0, 1.0, {0.15, 0.4, 0.7},
                                    {0.25, 0.72, 0.35, 0.55}),
            {0.0, 1.0},
            {0.0, 1.0}};
  if (p.signal == "sine-g")
    return {mmnn::Signal::sine(0.0, 1.0, 0.45, 0.25, 8.0 * std::numbers::pi),
            {0.0, 1.0},
            {0.0, 1.0}};
  if (p.signal == "identity")
    return {mmnn::Signal::sampled(0.0, 1.0, {0.0, 1.0}, mmnn::Interp::linear),
            {0.0, 1.0},
            {0.0, 1.0}};
  if (ends_with(p.signal, ".wav"))
    throw mmnn::ParseError("wav input is only supported by the denoise subcommand");
  if (ends_with(p.signal, ".csv")) {
    mmnn::CsvSignal cs = mmnn::load_csv_signal(p.signal);
    const std::size_t m = cs.xs.size();
    const double span = cs.xs.back() - cs.xs.front();
    const double h = span / static_cast<double>(m - 1);
    bool uniform = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(cs.xs[i] - (cs.xs.front() + static_cast<double>(i) * h)) >
          1e-9 * span) {
        uniform = false;
        break;
      }
    }
    std::vector<double> vals = cs.values;
    if (!uniform) {
      // Resample onto the uniform grid of the same size by linear
      // interpolation between the recorded points.
      vals.assign(m, 0.0);
      std::size_t j = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double x = cs.xs.front() + static_cast<double>(i) * h;
        while (j + 2 < m && cs.xs[j + 1] < x) ++j;
        const double w = (x - cs.xs[j]) / (cs.xs[j + 1] - cs.xs[j]);
        vals[i] = cs.values[j] + std::clamp(w, 0.0, 1.0) *
                                     (cs.values[j + 1] - cs.values[j]);
      }
    }
    auto [units, vmap] = mmnn::normalize_unit(vals);
    return {mmnn::Signal::sampled(0.0, 1.0, std::move(units), mmnn::Interp::linear),
            {cs.xs.front(), cs.xs.back()},
            vmap};
  }
  throw mmnn::ParseError("unknown signal '" + p.signal +
                         "' (builtins: piecewise-table1, sine-g, identity; "
                         "files: *.csv, *.wav)");
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

json params_to_json(const RunParams& p) {
  return json{{"signal", p.signal},
              {"families", p.families},
              {"family", p.family},
              {"n", p.ns},
              {"sigma", p.sigma},
              {"slope", p.slope},
              {"scale", p.scale},
              {"chi", p.chi},
              {"chi_c", p.chi_c},
              {"alpha", p.alpha},
              {"grid", p.grid},
              {"noise", p.noise},
              {"noise_amount", p.noise_amount},
              {"seed", p.seed},
              {"double_pass", p.double_pass},
              {"threads", p.threads},
              {"panels", p.panels},
              {"svg", p.svg}};
}

RunParams params_from_json(const json& j) {
  RunParams p;
  p.signal = j.value("signal", p.signal);
  p.families = j.value("families", p.families);
  p.family = j.value("family", p.family);
  p.ns = j.value("n", p.ns);
  p.sigma = j.value("sigma", p.sigma);
  p.slope = j.value("slope", p.slope);
  p.scale = j.value("scale", p.scale);
  p.chi = j.value("chi", p.chi);
  p.chi_c = j.value("chi_c", p.chi_c);
  p.alpha = j.value("alpha", p.alpha);
  p.grid = j.value("grid", p.grid);
  p.noise = j.value("noise", p.noise);
  p.noise_amount = j.value("noise_amount", p.noise_amount);
  p.seed = j.value("seed", p.seed);
  p.double_pass = j.value("double_pass", p.double_pass);
  p.threads = j.value("threads", p.threads);
  p.panels = j.value("panels", p.panels);
  p.svg = j.value("svg", p.svg);
  return p;
}

void write_manifest(const RunParams& p, double wall_seconds,
                    const std::vector<std::string>& outputs) {
  json j;
  j["command"] = p.command;
  j["version"] = kVersion;
  j["parameters"] = params_to_json(p);
  j["wall_time_seconds"] = wall_seconds;
  j["outputs"] = outputs;
  write_text(fs::path(p.out) / "manifest.json", j.dump(2) + "\n");
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string svg_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Minimal line chart: axes, ticks, legend, one polyline per series.  The CSVs
// are the ground truth; this is a visual convenience only.
std::string svg_chart(
    const std::string& title, const std::vector<double>& xs,
    const std::vector<std::pair<std::string, const std::vector<double>*>>& series) {
  constexpr double W = 960.0, H = 540.0, L = 62.0, R = 18.0, T = 34.0, B = 46.0;
  const double xmin = xs.front(), xmax = xs.back();
  double ymin = series.front().second->front();
  double ymax = ymin;
  for (const auto& [name, vals] : series)
    for (const double v : *vals) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) {
    return H - B - (y - ymin) / (ymax - ymin) * (H - T - B);
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" "
       "viewBox=\"0 0 960 540\">\n";
  s += "<rect width=\"960\" height=\"540\" fill=\"white\"/>\n";
  s += "<text x=\"480\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + title + "</text>\n";
  s += "<line x1=\"" + svg_num(L) + "\" y1=\"" + svg_num(H - B) + "\" x2=\"" +
       svg_num(W - R) + "\" y2=\"" + svg_num(H - B) +
       "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + svg_num(L) + "\" y1=\"" + svg_num(T) + "\" x2=\"" +
       svg_num(L) + "\" y2=\"" + svg_num(H - B) +
       "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    s += "<line x1=\"" + svg_num(px(xv)) + "\" y1=\"" + svg_num(H - B) +
         "\" x2=\"" + svg_num(px(xv)) + "\" y2=\"" + svg_num(H - B + 5) +
         "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + svg_num(px(xv)) + "\" y=\"" + svg_num(H - B + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         svg_tick(xv) + "</text>\n";
    s += "<line x1=\"" + svg_num(L - 5) + "\" y1=\"" + svg_num(py(yv)) +
         "\" x2=\"" + svg_num(L) + "\" y2=\"" + svg_num(py(yv)) +
         "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + svg_num(L - 8) + "\" y=\"" + svg_num(py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         svg_tick(yv) + "</text>\n";
  }
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 1600);
  std::size_t ci = 0;
  for (const auto& [name, vals] : series) {
    const char* color = kPalette[ci % std::size(kPalette)];
    s += "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.3\" points=\"";
    for (std::size_t i = 0; i < xs.size(); i += stride) {
      s += svg_num(px(xs[i])) + "," + svg_num(py((*vals)[i])) + " ";
    }
    if ((xs.size() - 1) % stride != 0)
      s += svg_num(px(xs.back())) + "," + svg_num(py(vals->back()));
    s += "\"/>\n";
    const double ly = T + 16.0 + 18.0 * static_cast<double>(ci);
    s += "<line x1=\"" + svg_num(L + 10) + "\" y1=\"" + svg_num(ly - 4) +
         "\" x2=\"" + svg_num(L + 34) + "\" y2=\"" + svg_num(ly - 4) +
         "\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + svg_num(L + 40) + "\" y=\"" + svg_num(ly) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + name + "</text>\n";
    ++ci;
  }
  s += "</svg>\n";
  return s;
}

std::vector<double> denormalized(const std::vector<double>& units,
                                 const mmnn::AffineMap& map) {
  std::vector<double> out(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) out[i] = map.denormalize(units[i]);
  return out;
}

std::string errors_csv(
    const std::vector<std::pair<std::string, mmnn::ErrorReport>>& rows) {
  std::string s = "family,me,mae,mse\n";
  for (const auto& [code, rep] : rows) {
    s += code + "," + mmnn::format_double(rep.me) + "," +
         mmnn::format_double(rep.mae) + "," + mmnn::format_double(rep.mse) + "\n";
  }
  return s;
}

std::int64_t single_n(const RunParams& p) {
  if (p.ns.size() != 1)
    throw mmnn::ParseError("this subcommand takes a single --n value");
  return p.ns.front();
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

int run_approximate(const RunParams& p) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(p.out);
  const std::int64_t n = single_n(p);
  const SourceSignal src = resolve_signal(p);
  const auto grid =
      mmnn::sample_grid(src.sig.a(), src.sig.b(), static_cast<std::size_t>(p.grid));
  std::vector<double> reference(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) reference[i] = src.sig(grid[i]);
  const int threads = resolve_threads(p.threads);

  std::vector<std::pair<std::string, std::vector<double>>> columns;
  std::vector<std::pair<std::string, mmnn::ErrorReport>> reports;
  for (const std::string& code : p.families) {
    const mmnn::OperatorConfig cfg = make_config(p, code, n);
    std::vector<double> approx = mmnn::evaluate(cfg, src.sig, grid, threads);
    reports.emplace_back(code,
                         mmnn::error_report(denormalized(approx, src.vmap),
                                            denormalized(reference, src.vmap)));
    columns.emplace_back(code, std::move(approx));
  }

  std::string pts = "x,reference";
  for (const auto& [code, vals] : columns) pts += ",approx_" + code;
  pts += "\n";
  const auto xs_out = denormalized(grid, src.xmap);
  const auto ref_out = denormalized(reference, src.vmap);
  std::vector<std::vector<double>> cols_out;
  for (const auto& [code, vals] : columns)
    cols_out.push_back(denormalized(vals, src.vmap));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pts += mmnn::format_double(xs_out[i]) + "," + mmnn::format_double(ref_out[i]);
    for (const auto& col : cols_out) pts += "," + mmnn::format_double(col[i]);
    pts += "\n";
  }
  write_text(fs::path(p.out) / "points.csv", pts);
  write_text(fs::path(p.out) / "errors.csv", errors_csv(reports));

  std::vector<std::string> outputs{"points.csv", "errors.csv", "manifest.json"};
  if (p.svg) {
    std::vector<std::pair<std::string, const std::vector<double>*>> series;
    series.emplace_back("reference", &ref_out);
    for (std::size_t i = 0; i < columns.size(); ++i)
      series.emplace_back("approx_" + columns[i].first, &cols_out[i]);
    write_text(fs::path(p.out) / "plot.svg",
               svg_chart("operator approximation, n=" + std::to_string(n), xs_out,
                         series));
    outputs.push_back("plot.svg");
  }
  write_manifest(p, elapsed_seconds(t0), outputs);
  return 0;
}

int run_denoise_wav(const RunParams& p) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(p.out);
  const std::int64_t n = single_n(p);
  const mmnn::WavData input = mmnn::load_wav(p.signal);
  if (input.samples.empty()) throw mmnn::ParseError("wav contains no samples");
  const std::vector<double> clean = mmnn::wav_to_unit(input.samples);
  const std::vector<double> noisy =
      p.noise == "none" ? clean : mmnn::add_noise(clean, make_noise(p));
  const int threads = resolve_threads(p.threads);

  std::vector<double> filtered;
  filtered.reserve(noisy.size());
  for (std::size_t start = 0; start < noisy.size(); start += kWavWindow) {
    const std::size_t len = std::min(kWavWindow, noisy.size() - start);
    const std::span<const double> window(noisy.data() + start, len);
    if (len < 2) {  // a one-sample tail has no grid to rebuild; pass through
      filtered.insert(filtered.end(), window.begin(), window.end());
      continue;
    }
    const mmnn::OperatorConfig cfg = make_config(
        p, p.family, std::min<std::int64_t>(n, static_cast<std::int64_t>(len)));
    const std::vector<double> out =
        p.double_pass
            ? mmnn::complement_double_pass(cfg, window, 0.0, 1.0, threads)
            : mmnn::denoise(cfg, window, 0.0, 1.0, threads);
    filtered.insert(filtered.end(), out.begin(), out.end());
  }

  const auto report = mmnn::error_report(filtered, clean);
  mmnn::save_wav((fs::path(p.out) / "filtered.wav").string(),
                 {input.sample_rate, mmnn::unit_to_wav(filtered)});
  std::vector<std::string> outputs{"filtered.wav", "errors.csv", "manifest.json"};
  if (p.noise != "none") {
    mmnn::save_wav((fs::path(p.out) / "noisy.wav").string(),
                   {input.sample_rate, mmnn::unit_to_wav(noisy)});
    outputs.push_back("noisy.wav");
  }
  write_text(fs::path(p.out) / "errors.csv", errors_csv({{p.family, report}}));
  write_manifest(p, elapsed_seconds(t0), outputs);
  return 0;
}

int run_denoise(const RunParams& p) {
  if (ends_with(p.signal, ".wav")) return run_denoise_wav(p);
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(p.out);
  const std::int64_t n = single_n(p);
  const SourceSignal src = resolve_signal(p);
  const auto grid =
      mmnn::sample_grid(src.sig.a(), src.sig.b(), static_cast<std::size_t>(p.grid));
  std::vector<double> clean(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) clean[i] = src.sig(grid[i]);
  const std::vector<double> noisy =
      p.noise == "none" ? clean : mmnn::add_noise(clean, make_noise(p));
  const int threads = resolve_threads(p.threads);

  const mmnn::OperatorConfig cfg = make_config(p, p.family, n);
  const std::vector<double> filtered =
      p.double_pass ? mmnn::complement_double_pass(cfg, noisy, src.sig.a(),
                                                   src.sig.b(), threads)
                    : mmnn::denoise(cfg, noisy, src.sig.a(), src.sig.b(), threads);

  const auto xs_out = denormalized(grid, src.xmap);
  const auto clean_out = denormalized(clean, src.vmap);
  const auto noisy_out = denormalized(noisy, src.vmap);
  const auto filtered_out = denormalized(filtered, src.vmap);
  const auto report = mmnn::error_report(filtered_out, clean_out);

  std::string pts = "x,reference,noisy,approx_" + p.family + "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pts += mmnn::format_double(xs_out[i]) + "," +
           mmnn::format_double(clean_out[i]) + "," +
           mmnn::format_double(noisy_out[i]) + "," +
           mmnn::format_double(filtered_out[i]) + "\n";
  }
  write_text(fs::path(p.out) / "points.csv", pts);
  write_text(fs::path(p.out) / "errors.csv", errors_csv({{p.family, report}}));

  std::vector<std::string> outputs{"points.csv", "errors.csv", "manifest.json"};
  if (p.svg) {
    const std::string label =
        p.double_pass ? "filtered (double pass)" : "filtered";
    write_text(fs::path(p.out) / "plot.svg",
               svg_chart("denoising, family " + p.family + ", n=" +
                             std::to_string(n),
                         xs_out,
                         {{"reference", &clean_out},
                          {"noisy", &noisy_out},
                          {label, &filtered_out}}));
    outputs.push_back("plot.svg");
  }
  write_manifest(p, elapsed_seconds(t0), outputs);
  return 0;
}

int run_bench(const RunParams& p) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(p.out);
  const std::int64_t n = single_n(p);
  const SourceSignal src = resolve_signal(p);
  const auto grid =
      mmnn::sample_grid(src.sig.a(), src.sig.b(), static_cast<std::size_t>(p.grid));
  std::vector<double> clean(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) clean[i] = src.sig(grid[i]);
  const std::vector<double> noisy =
      p.noise == "none" ? clean : mmnn::add_noise(clean, make_noise(p));
  const int threads = resolve_threads(p.threads);
  const double a = src.sig.a(), b = src.sig.b();
  const mmnn::Signal noisy_sig =
      mmnn::Signal::sampled(a, b, noisy, mmnn::Interp::step);

  struct Row {
    const char* code;
    int passes;
  };
  constexpr Row rows[] = {{"D", 1}, {"K", 2}, {"F", 2}};

  std::string csv = "family,passes,seconds\n";
  for (const Row& row : rows) {
    const mmnn::OperatorConfig cfg = make_config(p, row.code, n);
    // First-pass coefficients are precomputed: the clock wraps the evaluation
    // sweeps plus, for double passes, the intermediate re-coefficient step
    // that depends on the first pass's output.
    const mmnn::CoefficientVector coeffs =
        mmnn::coefficients(cfg, noisy_sig, threads);
    std::vector<double> times;
    for (int rep = 0; rep < 3; ++rep) {
      const auto r0 = std::chrono::steady_clock::now();
      std::vector<double> h = mmnn::evaluate_with(cfg, coeffs, a, b, grid, threads);
      if (row.passes == 2) {
        for (double& v : h) v = std::clamp(1.0 - v, 0.0, 1.0);
        const mmnn::Signal mid = mmnn::Signal::sampled(a, b, h, mmnn::Interp::step);
        const mmnn::CoefficientVector c2 = mmnn::coefficients(cfg, mid, threads);
        std::vector<double> h2 = mmnn::evaluate_with(cfg, c2, a, b, grid, threads);
        for (double& v : h2) v = std::clamp(1.0 - v, 0.0, 1.0);
      }
      times.push_back(elapsed_seconds(r0));
    }
    std::sort(times.begin(), times.end());
    csv += std::string(row.code) + "," + std::to_string(row.passes) + "," +
           mmnn::format_double(times[1]) + "\n";
  }
  write_text(fs::path(p.out) / "timing.csv", csv);
  write_manifest(p, elapsed_seconds(t0), {"timing.csv", "manifest.json"});
  return 0;
}

int run_bound_check(const RunParams& p) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(p.out);
  if (p.ns.empty()) throw mmnn::ParseError("--n list must not be empty");
  for (std::size_t i = 0; i + 1 < p.ns.size(); ++i)
    if (p.ns[i] >= p.ns[i + 1])
      throw mmnn::ParseError("--n list must be strictly ascending");
  const SourceSignal src = resolve_signal(p);
  const mmnn::OperatorConfig base = make_config(p, p.family, p.ns.front());
  const auto rows = mmnn::convergence_study(
      base, src.sig, p.ns, 2.0, static_cast<std::size_t>(p.grid), true,
      resolve_threads(p.threads));

  std::string csv = "n,sup_error,lp_error,p,bound\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.n) + "," + mmnn::format_double(row.sup_error) +
           "," + mmnn::format_double(row.lp_error) + "," +
           mmnn::format_double(row.p) + "," +
           (row.bound ? mmnn::format_double(*row.bound) : std::string()) + "\n";
  }
  write_text(fs::path(p.out) / "convergence.csv", csv);
  write_manifest(p, elapsed_seconds(t0), {"convergence.csv", "manifest.json"});
  return 0;
}

int run_moments(const RunParams& p) {
  const mmnn::ChiKernel chi = p.chi == "hat" ? mmnn::ChiKernel::hat()
                                             : mmnn::ChiKernel::rational(p.chi_c);
  const mmnn::KernelConstants kc = chi.constants();
  const mmnn::Sigmoid sigmoid(mmnn::sigmoid_kind_from_string(p.sigma), p.slope,
                              p.alpha);
  const mmnn::BellKernel bell(sigmoid, p.scale);
  const double alpha = sigmoid.alpha();
  const double m_beta = mmnn::generalized_moment_stable(bell, 1.0 + alpha);

  std::string s;
  s += "chi.kind=" + mmnn::to_string(chi.kind()) + "\n";
  if (chi.kind() == mmnn::ChiKind::rational)
    s += "chi.c=" + mmnn::format_double(chi.c()) + "\n";
  s += "chi.unit_integral=" + mmnn::format_double(kc.unit_integral) + "\n";
  s += "chi.l1_norm=" + mmnn::format_double(kc.l1_norm) + "\n";
  s += "chi.discrete_moment0=" + mmnn::format_double(kc.discrete_moment0) + "\n";
  s += "chi.abs_moment1=" + mmnn::format_double(kc.abs_moment1) + "\n";
  s += "bell.sigma=" + mmnn::to_string(sigmoid.kind()) + "\n";
  s += "bell.slope=" + mmnn::format_double(sigmoid.slope()) + "\n";
  s += "bell.scale=" + mmnn::format_double(bell.shift_scale()) + "\n";
  s += "bell.alpha=" + mmnn::format_double(alpha) + "\n";
  s += "bell.phi2=" + mmnn::format_double(bell(2.0)) + "\n";
  s += "bell.m_1plus_alpha=" + mmnn::format_double(m_beta) + "\n";
  std::fputs(s.c_str(), stdout);
  return 0;
}

int dispatch(const RunParams& p) {
  if (p.command == "approximate") return run_approximate(p);
  if (p.command == "denoise") return run_denoise(p);
  if (p.command == "bench") return run_bench(p);
  if (p.command == "bound-check") return run_bound_check(p);
  if (p.command == "moments") return run_moments(p);
  throw mmnn::ParseError("manifest names unknown command '" + p.command + "'");
}

int run_replay(const std::string& manifest_path, const std::string& out) {
  std::ifstream is(manifest_path);
  if (!is) throw mmnn::ParseError("cannot open manifest: " + manifest_path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw mmnn::ParseError(std::string("manifest: ") + e.what());
  }
  RunParams p;
  try {
    p = params_from_json(j.at("parameters"));
    p.command = j.at("command").get<std::string>();
  } catch (const json::exception& e) {
    throw mmnn::ParseError(std::string("manifest: ") + e.what());
  }
  p.out = out;
  return dispatch(p);
}

// Per-subcommand option storage; resolve() folds these into RunParams after
// the preset (explicit flags beat the preset, the preset beats defaults).
struct Flags {
  std::string signal = "sine-g";
  std::string families = "D,K,F";
  std::string family = "D";
  std::vector<std::int64_t> ns{200};
  std::string sigma = "logistic";
  double scale = 1.0;
  std::string chi = "rational:1";
  double alpha = 0.0;
  std::int64_t grid = 8000;
  std::string noise = "none";
  std::uint64_t seed = 0;
  bool double_pass = false;
  std::string preset;
  std::string out = ".";
  bool svg = false;
  int threads = 0;
  int panels = 64;
};

RunParams resolve(const CLI::App* sub, const Flags& f, const std::string& cmd) {
  RunParams p;
  p.command = cmd;
  p.signal = f.signal;
  p.families = split_family_list(f.families);
  (void)mmnn::family_from_code(f.family);
  p.family = f.family;
  p.ns = f.ns;
  parse_sigma_flag(f.sigma, p);
  p.scale = f.scale;
  parse_chi_flag(f.chi, p);
  p.alpha = f.alpha;
  p.grid = f.grid;
  parse_noise_flag(f.noise, p);
  p.seed = f.seed;
  p.double_pass = f.double_pass;
  p.out = f.out;
  p.svg = f.svg;
  p.threads = f.threads;
  p.panels = f.panels;
  const CLI::Option* preset = sub->get_option_no_throw("--preset");
  if (preset != nullptr && preset->count() > 0) apply_preset(f.preset, sub, p);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-min neural-network operator toolkit"};
  app.set_version_flag("--version", std::string("mmnn ") + kVersion);
  app.require_subcommand(1);

  Flags af;
  af.signal = "piecewise-table1";
  Flags df;
  df.ns = {8000};
  Flags bf;
  bf.ns = {8000};
  bf.noise = "saltpepper:0.05";
  Flags cf;
  cf.ns = {25, 50, 100, 200};
  cf.chi = "hat";
  Flags mf;
  std::string replay_manifest;
  std::string replay_out = ".";

  const char* kSignalHelp =
      "builtin (piecewise-table1, sine-g, identity) or path to *.csv / *.wav";
  const char* kSigmaHelp = "sigmoid kind logistic|tanh|step|ramp, optional :slope";
  const char* kChiHelp = "averaging kernel rational:c or hat";
  const char* kNoiseHelp = "noise model saltpepper:p or gaussian:sd (or none)";
  const char* kPresetHelp = "kernel bundle saltpepper-fig2 or gaussian-fig3";
  const char* kThreadsHelp = "worker cap (0: machine parallelism)";
  const char* kPanelsHelp = "composite quadrature panels per lattice cell";

  CLI::App* ap = app.add_subcommand(
      "approximate", "evaluate operator families on a uniform grid; writes "
                     "points.csv, errors.csv, optional plot.svg");
  ap->add_option("--signal", af.signal, kSignalHelp)->capture_default_str();
  ap->add_option("--families", af.families, "comma list from D,K,F,LF,LD")
      ->capture_default_str();
  ap->add_option("--n", af.ns, "operator degree")->delimiter(',')->capture_default_str();
  ap->add_option("--sigma", af.sigma, kSigmaHelp)->capture_default_str();
  ap->add_option("--scale", af.scale, "bell shift scale s")->capture_default_str();
  ap->add_option("--chi", af.chi, kChiHelp)->capture_default_str();
  ap->add_option("--grid", af.grid, "evaluation grid size")->capture_default_str();
  ap->add_option("--preset", af.preset, kPresetHelp);
  ap->add_option("--out", af.out, "output directory")->capture_default_str();
  ap->add_flag("--svg", af.svg, "also write plot.svg");
  ap->add_option("--threads", af.threads, kThreadsHelp)->capture_default_str();
  ap->add_option("--panels", af.panels, kPanelsHelp)->capture_default_str();

  CLI::App* dp = app.add_subcommand(
      "denoise", "corrupt a signal per --noise and filter it with one operator; "
                 "writes points.csv/errors.csv or filtered.wav");
  dp->add_option("--signal", df.signal, kSignalHelp)->capture_default_str();
  dp->add_option("--family", df.family, "one of D,K,F,LF,LD")->capture_default_str();
  dp->add_option("--n", df.ns, "operator degree")->delimiter(',')->capture_default_str();
  dp->add_option("--sigma", df.sigma, kSigmaHelp)->capture_default_str();
  dp->add_option("--scale", df.scale, "bell shift scale s")->capture_default_str();
  dp->add_option("--chi", df.chi, kChiHelp)->capture_default_str();
  dp->add_option("--grid", df.grid, "evaluation grid size")->capture_default_str();
  dp->add_option("--noise", df.noise, kNoiseHelp)->capture_default_str();
  dp->add_option("--seed", df.seed, "noise stream seed")->capture_default_str();
  dp->add_flag("--double-pass", df.double_pass,
               "apply the complement trick 1 - Op(1 - Op(g))");
  dp->add_option("--preset", df.preset, kPresetHelp);
  dp->add_option("--out", df.out, "output directory")->capture_default_str();
  dp->add_flag("--svg", df.svg, "also write plot.svg");
  dp->add_option("--threads", df.threads, kThreadsHelp)->capture_default_str();
  dp->add_option("--panels", df.panels, kPanelsHelp)->capture_default_str();

  CLI::App* bp = app.add_subcommand(
      "bench", "time single-pass D against double-pass K and F; writes timing.csv");
  bp->add_option("--signal", bf.signal, kSignalHelp)->capture_default_str();
  bp->add_option("--n", bf.ns, "operator degree")->delimiter(',')->capture_default_str();
  bp->add_option("--sigma", bf.sigma, kSigmaHelp)->capture_default_str();
  bp->add_option("--scale", bf.scale, "bell shift scale s")->capture_default_str();
  bp->add_option("--chi", bf.chi, kChiHelp)->capture_default_str();
  bp->add_option("--grid", bf.grid, "evaluation grid size")->capture_default_str();
  bp->add_option("--noise", bf.noise, kNoiseHelp)->capture_default_str();
  bp->add_option("--seed", bf.seed, "noise stream seed")->capture_default_str();
  bp->add_option("--preset", bf.preset, kPresetHelp);
  bp->add_option("--out", bf.out, "output directory")->capture_default_str();
  bp->add_option("--threads", bf.threads, kThreadsHelp)->capture_default_str();
  bp->add_option("--panels", bf.panels, kPanelsHelp)->capture_default_str();

  CLI::App* cp = app.add_subcommand(
      "bound-check", "convergence study with the sup-error bound column; "
                     "writes convergence.csv");
  cp->add_option("--signal", cf.signal, kSignalHelp)->capture_default_str();
  cp->add_option("--family", cf.family, "one of D,K,F,LF,LD")->capture_default_str();
  cp->add_option("--n", cf.ns, "ascending list of operator degrees")
      ->delimiter(',')
      ->capture_default_str();
  cp->add_option("--sigma", cf.sigma, kSigmaHelp)->capture_default_str();
  cp->add_option("--scale", cf.scale, "bell shift scale s")->capture_default_str();
  cp->add_option("--chi", cf.chi, kChiHelp)->capture_default_str();
  cp->add_option("--alpha", cf.alpha,
                 "declared decay exponent (<= 0: kind default)")
      ->capture_default_str();
  cp->add_option("--grid", cf.grid, "evaluation grid size")->capture_default_str();
  cp->add_option("--out", cf.out, "output directory")->capture_default_str();
  cp->add_option("--threads", cf.threads, kThreadsHelp)->capture_default_str();
  cp->add_option("--panels", cf.panels, kPanelsHelp)->capture_default_str();

  CLI::App* mp = app.add_subcommand(
      "moments", "print averaging-kernel constants and the bell moment");
  mp->add_option("--sigma", mf.sigma, kSigmaHelp)->capture_default_str();
  mp->add_option("--scale", mf.scale, "bell shift scale s")->capture_default_str();
  mp->add_option("--chi", mf.chi, kChiHelp)->capture_default_str();
  mp->add_option("--alpha", mf.alpha,
                 "declared decay exponent (<= 0: kind default)")
      ->capture_default_str();

  CLI::App* rp = app.add_subcommand(
      "replay", "re-run a recorded manifest; CSV outputs are reproduced byte-"
                "identically (timing.csv re-measures)");
  rp->add_option("manifest", replay_manifest, "path to manifest.json")->required();
  rp->add_option("--out", replay_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ap->parsed()) return run_approximate(resolve(ap, af, "approximate"));
    if (dp->parsed()) return run_denoise(resolve(dp, df, "denoise"));
    if (bp->parsed()) return run_bench(resolve(bp, bf, "bench"));
    if (cp->parsed()) return run_bound_check(resolve(cp, cf, "bound-check"));
    if (mp->parsed()) return run_moments(resolve(mp, mf, "moments"));
    if (rp->parsed()) return run_replay(replay_manifest, replay_out);
  } catch (const mmnn::ParseError& e) {
    std::fprintf(stderr, "mmnn: ParseError: %s\n", e.what());
    return 1;
  } catch (const mmnn::UnsupportedFormat& e) {
    std::fprintf(stderr, "mmnn: UnsupportedFormat: %s\n", e.what());
    return 1;
  } catch (const mmnn::DomainError& e) {
    std::fprintf(stderr, "mmnn: DomainError: %s\n", e.what());
    return 1;
  } catch (const mmnn::ZeroDenominator& e) {
    std::fprintf(stderr, "mmnn: ZeroDenominator: %s\n", e.what());
    return 1;
  } catch (const mmnn::NonIntegrable& e) {
    std::fprintf(stderr, "mmnn: NonIntegrable: %s\n", e.what());
    return 1;
  } catch (const mmnn::QuadratureFailure& e) {
    std::fprintf(stderr, "mmnn: QuadratureFailure: %s\n", e.what());
    return 1;
  } catch (const mmnn::LengthMismatch& e) {
    std::fprintf(stderr, "mmnn: LengthMismatch: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mmnn: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
