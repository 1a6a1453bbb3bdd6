#include "knotstrata/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "knotstrata/scenarios.hpp"

namespace knotstrata {
namespace io {

// --- SHA-256 (FIPS 180-4, byte-oriented) ------------------------------------

namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu,
    0x59f111f1u, 0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u,
    0x243185beu, 0x550c7dc3u, 0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u,
    0xc19bf174u, 0xe49b69c1u, 0xefbe4786u, 0x0fc19dc6u, 0x240ca1ccu,
    0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau, 0x983e5152u,
    0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
    0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu,
    0x53380d13u, 0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u,
    0xa2bfe8a1u, 0xa81a664bu, 0xc24b8b70u, 0xc76c51a3u, 0xd192e819u,
    0xd6990624u, 0xf40e3585u, 0x106aa070u, 0x19a4c116u, 0x1e376c08u,
    0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au, 0x5b9cca4fu,
    0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
    0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};

inline std::uint32_t rotr(std::uint32_t x, int c) {
  return (x >> c) | (x << (32 - c));
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::array<std::uint32_t, 8> h = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u,
                                    0xa54ff53au, 0x510e527fu, 0x9b05688cu,
                                    0x1f83d9abu, 0x5be0cd19u};
  std::string msg = bytes;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(bytes.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i)
    msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xff));

  for (std::size_t off = 0; off < msg.size(); off += 64) {
    std::array<std::uint32_t, 64> w{};
    for (int i = 0; i < 16; ++i) {
      w[i] = (static_cast<std::uint32_t>(
                  static_cast<unsigned char>(msg[off + 4 * i]))
              << 24) |
             (static_cast<std::uint32_t>(
                  static_cast<unsigned char>(msg[off + 4 * i + 1]))
              << 16) |
             (static_cast<std::uint32_t>(
                  static_cast<unsigned char>(msg[off + 4 * i + 2]))
              << 8) |
             static_cast<std::uint32_t>(
                 static_cast<unsigned char>(msg[off + 4 * i + 3]));
    }
    for (int i = 16; i < 64; ++i) {
      std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^
                         (w[i - 15] >> 3);
      std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^
                         (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
      std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      std::uint32_t ch = (e & f) ^ (~e & g);
      std::uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
      std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      std::uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint32_t word : h)
    for (int i = 7; i >= 0; --i) out.push_back(hex[(word >> (4 * i)) & 0xf]);
  return out;
}

// --- files -------------------------------------------------------------------

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

// --- curves -------------------------------------------------------------------

json curve_to_json(const ParamCurve& curve) {
  json j;
  j["kind"] = curve.is_long() ? "long" : "compact";
  j["n"] = curve.n();
  if (curve.is_long())
    j["window"] = {curve.window_start(), curve.window_end()};
  else
    j["period"] = curve.period();
  json samples = json::array();
  const auto& ts = curve.sample_params();
  const Mat& pts = curve.sample_points();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    json row = json::array();
    row.push_back(ts[i]);
    for (int c = 0; c < pts.cols(); ++c) row.push_back(pts(i, c));
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  return j;
}

ParamCurve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("n") ||
      !j.contains("samples"))
    throw InputError("curve JSON requires kind, n, samples");
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  if (n < 3) throw InputError("curve dimension must be at least 3");
  const json& samples = j.at("samples");
  if (!samples.is_array() || samples.size() < 4)
    throw InputError("curve JSON needs at least 4 samples");
  std::vector<double> ts;
  Mat pts(static_cast<int>(samples.size()), n);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const json& row = samples[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n + 1)
      throw InputError("curve sample rows must be [t, x1..xn]");
    ts.push_back(row[0].get<double>());
    for (int c = 0; c < n; ++c) pts(static_cast<int>(i), c) =
        row[c + 1].get<double>();
  }
  if (kind == "long") return ParamCurve::make_long(n, ts, pts);
  if (kind == "compact") return ParamCurve::make_compact(n, ts, pts);
  throw InputError("curve kind must be \"long\" or \"compact\"");
}

// --- families ------------------------------------------------------------------

namespace {

double param_or(const json& params, const std::string& key, double dflt) {
  if (params.is_object() && params.contains(key))
    return params.at(key).get<double>();
  return dflt;
}

int param_or_int(const json& params, const std::string& key, int dflt) {
  if (params.is_object() && params.contains(key))
    return params.at(key).get<int>();
  return dflt;
}

KnotCycle scenario_cycle(const std::string& name, const json& params,
                         std::string* description) {
  if (description) *description = name;
  if (name == "trefoil_bead_loop" || name == "trefoil_bead_loop_2") {
    BeadLoopOptions opts;
    opts.variant = (name == "trefoil_bead_loop_2") ? 2 : 1;
    opts.frames = param_or_int(params, "frames", opts.frames);
    opts.eps = param_or(params, "eps", opts.eps);
    return bead_transport_loop(opts);
  }
  if (name == "great_circles") return great_circle_cycle();
  if (name == "hopf_fibers") return hopf_fiber_cycle();
  if (name == "long_trefoil_wobble") {
    const double amplitude = param_or(params, "amplitude", 1.0);
    const double phase = param_or(params, "phase", 0.9);
    return rotation_wobble_loop(
        fixture_long_trefoil(param_or_int(params, "mirror", 0) != 0),
        amplitude, phase);
  }
  if (name == "figure_eight_wobble") {
    const double amplitude = param_or(params, "amplitude", 0.8);
    const double phase = param_or(params, "phase", 0.9);
    return rotation_wobble_loop(fixture_compact_figure_eight(), amplitude,
                                phase);
  }
  // Fixture names give zero-dimensional single-curve families.
  for (const std::string& fixture : fixture_names()) {
    if (name == fixture) return single_curve_cycle(fixture_by_name(name));
  }
  throw InputError("unknown scenario: " + name);
}

// Periodic piecewise-cubic interpolation of closed frame loops, sample by
// sample, used by the explicit frames form of family JSON.
KnotCycle frames_cycle(const json& j, std::string* description) {
  const json& frames_json = j.at("frames");
  if (!frames_json.is_array() || frames_json.size() < 3)
    throw InputError("frames form needs at least 3 frames");
  std::vector<ParamCurve> frames;
  for (const json& cj : frames_json) frames.push_back(curve_from_json(cj));
  const int n = frames.front().n();
  const CurveKind kind = frames.front().kind();
  const std::size_t samples = frames.front().sample_params().size();
  for (const ParamCurve& c : frames) {
    if (c.n() != n || c.kind() != kind ||
        c.sample_params().size() != samples ||
        c.sample_params() != frames.front().sample_params())
      throw InputError("all frames must share kind, dimension, and sampling");
  }
  if (description)
    *description = "frames[" + std::to_string(frames.size()) + "]";
  const std::size_t m = frames.size();
  const std::vector<double> ts = frames.front().sample_params();
  auto gen = [frames, ts, n, kind, m](const Vec& u) {
    double s = u(0) - std::floor(u(0));
    const double pos = s * static_cast<double>(m);
    const std::size_t i1 = static_cast<std::size_t>(pos) % m;
    const double w = pos - std::floor(pos);
    const std::size_t i0 = (i1 + m - 1) % m;
    const std::size_t i2 = (i1 + 1) % m;
    const std::size_t i3 = (i1 + 2) % m;
    // Catmull-Rom blend of the sample matrices.
    const Mat& p0 = frames[i0].sample_points();
    const Mat& p1 = frames[i1].sample_points();
    const Mat& p2 = frames[i2].sample_points();
    const Mat& p3 = frames[i3].sample_points();
    Mat pts = 0.5 * ((2.0 * p1) + (-p0 + p2) * w +
                     (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (w * w) +
                     (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (w * w * w));
    return kind == CurveKind::kLong ? ParamCurve::make_long(n, ts, pts)
                                    : ParamCurve::make_compact(n, ts, pts);
  };
  CycleDomain dom;
  dom.kind = DomainKind::kCircle;
  dom.coord_dim = 1;
  dom.period = 1.0;
  dom.grid = {static_cast<int>(m)};
  if (j.contains("grid") && j.at("grid").is_array() && !j.at("grid").empty())
    dom.grid = {j.at("grid")[0].get<int>()};
  return KnotCycle(dom, n, kind, gen);
}

}  // namespace

KnotCycle family_from_json(const json& j, std::string* description) {
  if (!j.is_object()) throw InputError("family JSON must be an object");
  if (j.contains("scenario")) {
    return scenario_cycle(j.at("scenario").get<std::string>(),
                          j.contains("params") ? j.at("params") : json(),
                          description);
  }
  if (j.contains("frames")) {
    if (!j.contains("domain") ||
        j.at("domain").get<std::string>() != "circle")
      throw InputError("frames form requires \"domain\": \"circle\"");
    return frames_cycle(j, description);
  }
  throw InputError("family JSON needs \"scenario\" or \"domain\"+\"frames\"");
}

KnotCycle read_family(const std::string& path, std::string* description) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(std::string("family JSON parse error: ") + e.what());
  }
  return family_from_json(j, description);
}

json scenario_family_json(const std::string& name, const json& params) {
  json j;
  j["scenario"] = name;
  if (!params.is_null()) j["params"] = params;
  // Validate eagerly so bad names fail here, not at evaluation time.
  family_from_json(j);
  return j;
}

// --- config, events, results ---------------------------------------------------

json config_to_json(const RunConfig& cfg) {
  json j;
  j["newton_tol"] = cfg.newton_tol;
  j["dedup_radius"] = cfg.dedup_radius;
  j["margin_tol"] = cfg.margin_tol;
  j["cond_threshold"] = cfg.cond_threshold;
  j["max_newton_iter"] = cfg.max_newton_iter;
  j["threads"] = cfg.threads;
  j["frames"] = cfg.frames;
  j["seed"] = cfg.seed;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (!j.is_object()) return cfg;
  cfg.newton_tol = param_or(j, "newton_tol", cfg.newton_tol);
  cfg.dedup_radius = param_or(j, "dedup_radius", cfg.dedup_radius);
  cfg.margin_tol = param_or(j, "margin_tol", cfg.margin_tol);
  cfg.cond_threshold = param_or(j, "cond_threshold", cfg.cond_threshold);
  cfg.max_newton_iter = param_or_int(j, "max_newton_iter", cfg.max_newton_iter);
  cfg.threads = param_or_int(j, "threads", cfg.threads);
  cfg.frames = param_or_int(j, "frames", cfg.frames);
  if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned long long>();
  return cfg;
}

json event_to_json(const Event& e) {
  json j;
  j["stratum"] = e.stratum;
  j["family_param"] = e.family_param;
  j["location"] = std::vector<double>(e.location.data(),
                                      e.location.data() + e.location.size());
  j["multiplicity"] = e.multiplicity;
  j["jacobian_sign"] = e.jacobian_sign;
  j["margin"] = e.margin;
  j["residual"] = e.residual;
  j["cond"] = e.cond;
  return j;
}

namespace {

EvalResult sorted_copy(const EvalResult& result) {
  EvalResult r = result;
  std::sort(r.events.begin(), r.events.end(), event_less);
  return r;
}

}  // namespace

json result_to_json(const EvalResult& result, const std::string& input_hash) {
  const EvalResult r = sorted_copy(result);
  json j;
  j["family"] = r.family;
  j["input_sha256"] = input_hash;
  j["config"] = config_to_json(r.config);
  j["total_mod2"] = r.total_mod2;
  j["total_signed"] = r.total_signed;
  json strata = json::object();
  for (const auto& [name, parity] : r.stratum_mod2) {
    json s;
    s["count_mod2"] = parity;
    auto it = r.stratum_signed.find(name);
    s["count_signed"] = it == r.stratum_signed.end() ? 0 : it->second;
    int n_events = 0;
    for (const Event& e : r.events)
      if (e.stratum == name) ++n_events;
    s["n_events"] = n_events;
    strata[name] = std::move(s);
  }
  j["strata"] = std::move(strata);
  json events = json::array();
  for (const Event& e : r.events) events.push_back(event_to_json(e));
  j["events"] = std::move(events);
  return j;
}

std::string event_log_lines(const EvalResult& result) {
  const EvalResult r = sorted_copy(result);
  std::string out;
  for (const Event& e : r.events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::string csv_summary(const EvalResult& result) {
  std::string out = "stratum,count_mod2,count_signed,n_events\n";
  for (const auto& [name, parity] : result.stratum_mod2) {
    auto it = result.stratum_signed.find(name);
    long long sgn = it == result.stratum_signed.end() ? 0 : it->second;
    int n_events = 0;
    for (const Event& e : result.events)
      if (e.stratum == name) ++n_events;
    out += name + "," + std::to_string(parity) + "," + std::to_string(sgn) +
           "," + std::to_string(n_events) + "\n";
  }
  return out;
}

}  // namespace io
}  // namespace knotstrata
