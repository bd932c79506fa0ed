#include "flyai/entropy.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

namespace flyai {

std::string_view to_string(EntropySourceKind kind) noexcept {
  switch (kind) {
    case EntropySourceKind::IdealUniform:
      return "ideal";
    case EntropySourceKind::MersenneTwister:
      return "mt";
    case EntropySourceKind::BRNG1:
      return "brng1";
    case EntropySourceKind::BRNG2:
      return "brng2";
    case EntropySourceKind::BRNG3:
      return "brng3";
    case EntropySourceKind::BRNG4:
      return "brng4";
  }
  return "unknown";
}

std::optional<EntropySourceKind> parse_entropy_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto kind : {EntropySourceKind::IdealUniform, EntropySourceKind::MersenneTwister,
                    EntropySourceKind::BRNG1, EntropySourceKind::BRNG2,
                    EntropySourceKind::BRNG3, EntropySourceKind::BRNG4}) {
    if (lower == to_string(kind)) return kind;
  }
  if (lower == "rng") return EntropySourceKind::IdealUniform;
  return std::nullopt;
}

bool is_bionic(EntropySourceKind kind) noexcept {
  return kind != EntropySourceKind::IdealUniform &&
         kind != EntropySourceKind::MersenneTwister;
}

// ---------------------------------------------------------------------------
// Detection records

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_number, const char* name) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError(line_number, std::string("field '") + name +
                                      "' is not a number: '" + std::string(field) + "'");
  }
  return value;
}

std::string_view strip_terminator(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

DetectionRecord parse_detection_line(std::string_view line, std::size_t line_number) {
  line = strip_terminator(line);
  const auto fields = split_fields(line);
  if (fields.size() != 5) {
    throw ParseError(line_number, "expected 5 fields `class cx cy w h`, got " +
                                      std::to_string(fields.size()));
  }
  DetectionRecord r;
  r.class_id = parse_number<int>(fields[0], line_number, "class");
  r.cx = parse_number<double>(fields[1], line_number, "cx");
  r.cy = parse_number<double>(fields[2], line_number, "cy");
  r.w = parse_number<double>(fields[3], line_number, "w");
  r.h = parse_number<double>(fields[4], line_number, "h");
  if (r.class_id < 0) throw ParseError(line_number, "class id must be non-negative");
  auto unit = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ParseError(line_number, std::string(name) + " out of range [0,1]");
  };
  auto extent = [&](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0))
      throw ParseError(line_number, std::string(name) + " out of range (0,1]");
  };
  unit(r.cx, "cx");
  unit(r.cy, "cy");
  extent(r.w, "w");
  extent(r.h, "h");
  r.raw_line = std::string(line);
  return r;
}

std::string format_detection(int class_id, double cx, double cy, double w, double h) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f", class_id, cx, cy, w, h);
  return buf;
}

std::vector<DetectionRecord> read_trajectory(std::istream& in) {
  std::vector<DetectionRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    auto view = strip_terminator(line);
    auto first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos || view[first] == '#') continue;
    records.push_back(parse_detection_line(view, line_number));
  }
  return records;
}

std::vector<DetectionRecord> load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EntropyConfigurationError("cannot open trajectory file " + path.string());
  return read_trajectory(in);
}

void write_trajectory(std::ostream& out, std::span<const DetectionRecord> records) {
  for (const auto& r : records)
    out << format_detection(r.class_id, r.cx, r.cy, r.w, r.h) << '\n';
}

std::vector<FlightVector> flight_vectors(std::span<const DetectionRecord> records) {
  if (records.size() < 2)
    throw InsufficientData("flight vectors need at least 2 detection records");
  std::vector<FlightVector> out;
  out.reserve(records.size() - 1);
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    out.push_back({records[i + 1].cx - records[i].cx, records[i + 1].cy - records[i].cy});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sample constructions

int scale_to_range(double value, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("scale_to_range: requires lo < hi");
  const double scaled = std::floor((value - lo) / (hi - lo) * kSampleRange);
  if (!(scaled > 0.0)) return 0;  // also maps NaN to 0
  if (scaled >= kMaxSample) return kMaxSample;
  return static_cast<int>(scaled);
}

Sha256Digest sha256(std::span<const std::uint8_t> bytes) {
  Sha256Digest digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != digest.size()) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  return digest;
}

int digest_to_sample(const Sha256Digest& digest) {
  const std::uint32_t word = (std::uint32_t{digest[0]} << 24) | (std::uint32_t{digest[1]} << 16) |
                             (std::uint32_t{digest[2]} << 8) | std::uint32_t{digest[3]};
  return static_cast<int>(word % kSampleRange);
}

int brng1_sample(const FlightVector& v) {
  return scale_to_range(std::fabs(v.dx) + std::fabs(v.dy), 0.0, 2.0);
}

namespace {
void put_be_double(double value, std::uint8_t* out) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
}
}  // namespace

int brng2_sample(const FlightVector& v) {
  std::array<std::uint8_t, 16> bytes{};
  put_be_double(v.dx, bytes.data());
  put_be_double(v.dy, bytes.data() + 8);
  return digest_to_sample(sha256(bytes));
}

int brng3_sample(const DetectionRecord& r) {
  const double avg = (r.cx + r.cy + 10.0 * r.w + 10.0 * r.h) / 4.0;
  return scale_to_range(avg, 0.0, 5.5);
}

int brng4_sample(const DetectionRecord& r) {
  const auto* data = reinterpret_cast<const std::uint8_t*>(r.raw_line.data());
  return digest_to_sample(sha256({data, r.raw_line.size()}));
}

// ---------------------------------------------------------------------------
// Uniform reduction

std::optional<int> reduce_u32(std::uint32_t word) noexcept {
  constexpr std::uint64_t span = std::uint64_t{1} << 32;
  constexpr std::uint64_t limit = span - span % kSampleRange;
  if (word >= limit) return std::nullopt;
  return static_cast<int>(word % kSampleRange);
}

std::optional<int> reduce_u64(std::uint64_t word) noexcept {
  // 2^64 mod 50 computed without overflow: (2^64 - 1) mod 50 + 1, folded.
  constexpr std::uint64_t tail = (UINT64_MAX % kSampleRange + 1) % kSampleRange;
  constexpr std::uint64_t limit = UINT64_MAX - tail + 1;  // first rejected word
  if (tail != 0 && word >= limit) return std::nullopt;
  return static_cast<int>(word % kSampleRange);
}

// ---------------------------------------------------------------------------
// EntropySource

EntropySource EntropySource::ideal(std::uint64_t seed) {
  EntropySource s(EntropySourceKind::IdealUniform);
  s.wide_.seed(seed);
  return s;
}

EntropySource EntropySource::mersenne_twister(std::uint32_t seed) {
  EntropySource s(EntropySourceKind::MersenneTwister);
  s.narrow_.seed(seed);
  return s;
}

EntropySource EntropySource::bionic(EntropySourceKind kind,
                                    std::shared_ptr<const std::vector<DetectionRecord>> records,
                                    std::size_t start, bool strict) {
  if (!is_bionic(kind)) throw EntropyConfigurationError("not a bionic entropy kind");
  if (!records || records->empty())
    throw EntropyConfigurationError("bionic entropy source needs a non-empty trajectory");
  EntropySource s(kind);
  s.records_ = std::move(records);
  s.strict_ = strict;
  if (kind == EntropySourceKind::BRNG1 || kind == EntropySourceKind::BRNG2) {
    if (s.records_->size() < 2)
      throw EntropyConfigurationError("flight-vector entropy needs at least 2 records");
    s.vectors_ = flight_vectors(*s.records_);
  }
  s.cursor_ = start % s.stream_length();
  return s;
}

std::size_t EntropySource::stream_length() const noexcept {
  switch (kind_) {
    case EntropySourceKind::BRNG1:
    case EntropySourceKind::BRNG2:
      return vectors_.size();
    case EntropySourceKind::BRNG3:
    case EntropySourceKind::BRNG4:
      return records_ ? records_->size() : 0;
    default:
      return 0;
  }
}

int EntropySource::next_sample() {
  int sample = 0;
  switch (kind_) {
    case EntropySourceKind::IdealUniform: {
      std::optional<int> v;
      while (!(v = reduce_u64(wide_()))) {
      }
      sample = *v;
      break;
    }
    case EntropySourceKind::MersenneTwister: {
      std::optional<int> v;
      while (!(v = reduce_u32(static_cast<std::uint32_t>(narrow_())))) {
      }
      sample = *v;
      break;
    }
    default: {
      const std::size_t len = stream_length();
      if (cursor_ >= len) {
        if (strict_) throw EntropyExhausted("trajectory exhausted after " + std::to_string(drawn_) +
                                            " samples");
        cursor_ = 0;
        ++cycle_count_;
      }
      switch (kind_) {
        case EntropySourceKind::BRNG1:
          sample = brng1_sample(vectors_[cursor_]);
          break;
        case EntropySourceKind::BRNG2:
          sample = brng2_sample(vectors_[cursor_]);
          break;
        case EntropySourceKind::BRNG3:
          sample = brng3_sample((*records_)[cursor_]);
          break;
        default:
          sample = brng4_sample((*records_)[cursor_]);
          break;
      }
      ++cursor_;
      break;
    }
  }
  ++drawn_;
  return sample;
}

std::vector<int> EntropySource::take(std::size_t n) {
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(next_sample());
  return out;
}

// ---------------------------------------------------------------------------
// Fly simulator

std::string_view to_string(FlyMode mode) noexcept {
  switch (mode) {
    case FlyMode::Cruising:
      return "cruising";
    case FlyMode::Burst:
      return "burst";
    default:
      return "resting";
  }
}

FlySimulator::FlySimulator(std::uint64_t seed, FlySimConfig config)
    : config_(config), rng_(seed) {
  if (config_.fan_period < 1 || config_.burst_min_steps < 1 ||
      config_.burst_max_steps < config_.burst_min_steps) {
    throw std::invalid_argument("invalid fly simulator configuration");
  }
  state_.fan_timer = config_.fan_period;
}

double FlySimulator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

DetectionRecord FlySimulator::step() {
  auto& s = state_;
  if (--s.fan_timer <= 0) {
    s.mode = FlyMode::Burst;
    s.burst_remaining =
        std::uniform_int_distribution<int>(config_.burst_min_steps, config_.burst_max_steps)(rng_);
    s.fan_timer = config_.fan_period;
  }

  switch (s.mode) {
    case FlyMode::Burst: {
      const double angle = uniform(0.0, 2.0 * std::numbers::pi);
      const double speed = uniform(config_.burst_speed_min, config_.burst_speed_max);
      s.vx = speed * std::cos(angle);
      s.vy = speed * std::sin(angle);
      if (--s.burst_remaining <= 0) s.mode = FlyMode::Cruising;
      break;
    }
    case FlyMode::Cruising:
      s.vx = s.vx * config_.cruise_damping + uniform(-config_.cruise_noise, config_.cruise_noise) *
                                                 std::fabs(s.vx);
      s.vy = s.vy * config_.cruise_damping + uniform(-config_.cruise_noise, config_.cruise_noise) *
                                                 std::fabs(s.vy);
      if (std::hypot(s.vx, s.vy) < config_.rest_speed) {
        s.mode = FlyMode::Resting;
        s.vx = s.vy = 0.0;
      }
      break;
    case FlyMode::Resting:
      s.vx = uniform(-config_.rest_jitter, config_.rest_jitter);
      s.vy = uniform(-config_.rest_jitter, config_.rest_jitter);
      break;
  }

  s.cx += s.vx;
  s.cy += s.vy;
  if (s.cx < 0.0 || s.cx > 1.0) {
    s.cx = std::clamp(s.cx, 0.0, 1.0);
    s.vx = -s.vx;
  }
  if (s.cy < 0.0 || s.cy > 1.0) {
    s.cy = std::clamp(s.cy, 0.0, 1.0);
    s.vy = -s.vy;
  }
  ++s.step;

  const double w = config_.box_size + uniform(-config_.box_jitter, config_.box_jitter);
  const double h = config_.box_size + uniform(-config_.box_jitter, config_.box_jitter);
  return parse_detection_line(format_detection(0, s.cx, s.cy, w, h),
                              static_cast<std::size_t>(s.step));
}

std::vector<DetectionRecord> FlySimulator::run(std::size_t steps) {
  std::vector<DetectionRecord> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(step());
  return out;
}

}  // namespace flyai
