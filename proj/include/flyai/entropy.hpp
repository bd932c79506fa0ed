#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flyai {

// Every entropy source emits integers in [0, kSampleRange).
inline constexpr int kSampleRange = 50;
inline constexpr int kMaxSample = kSampleRange - 1;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line_number_(line_number) {}
  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::size_t line_number_;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EntropyConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EntropyExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One object-detection label line: `class cx cy w h`, coordinates normalized.
struct DetectionRecord {
  int class_id = 0;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  std::string raw_line;  // verbatim, line terminator removed
};

// Displacement of the detected center between two consecutive records.
struct FlightVector {
  double dx = 0.0;
  double dy = 0.0;
};

enum class EntropySourceKind { IdealUniform, MersenneTwister, BRNG1, BRNG2, BRNG3, BRNG4 };

std::string_view to_string(EntropySourceKind kind) noexcept;
// Accepts the CLI spellings: ideal, mt, brng1..brng4 (case-insensitive).
std::optional<EntropySourceKind> parse_entropy_kind(std::string_view name);
bool is_bionic(EntropySourceKind kind) noexcept;

DetectionRecord parse_detection_line(std::string_view line, std::size_t line_number = 1);
// Canonical serialization: `0 %.6f %.6f %.6f %.6f` using the record's class id.
std::string format_detection(int class_id, double cx, double cy, double w, double h);

// Reads a trajectory file body. `#` comment lines and blank lines are skipped;
// LF and CRLF terminators are both accepted.
std::vector<DetectionRecord> read_trajectory(std::istream& in);
std::vector<DetectionRecord> load_trajectory(const std::filesystem::path& path);
void write_trajectory(std::ostream& out, std::span<const DetectionRecord> records);

std::vector<FlightVector> flight_vectors(std::span<const DetectionRecord> records);

int scale_to_range(double value, double lo, double hi);

using Sha256Digest = std::array<std::uint8_t, 32>;
Sha256Digest sha256(std::span<const std::uint8_t> bytes);
// First four digest bytes as a big-endian unsigned integer, reduced mod 50.
// Residues 0..45 are slightly more likely than 46..49 (bias ~9.3e-10).
int digest_to_sample(const Sha256Digest& digest);

int brng1_sample(const FlightVector& v);
int brng2_sample(const FlightVector& v);
int brng3_sample(const DetectionRecord& r);
int brng4_sample(const DetectionRecord& r);

// Maps one 32-bit word into [0,49] by rejection; returns nullopt when the word
// falls into the biased tail and must be redrawn.
std::optional<int> reduce_u32(std::uint32_t word) noexcept;
std::optional<int> reduce_u64(std::uint64_t word) noexcept;

class EntropySource {
 public:
  static EntropySource ideal(std::uint64_t seed);
  static EntropySource mersenne_twister(std::uint32_t seed);
  // Bionic kinds draw from the shared record list. `start` offsets the cursor
  // (in samples) so several independent consumers can share one trajectory.
  static EntropySource bionic(EntropySourceKind kind,
                              std::shared_ptr<const std::vector<DetectionRecord>> records,
                              std::size_t start = 0, bool strict = false);

  EntropySourceKind kind() const noexcept { return kind_; }
  int next_sample();
  std::vector<int> take(std::size_t n);

  std::size_t cursor() const noexcept { return cursor_; }
  std::size_t cycle_count() const noexcept { return cycle_count_; }
  // Samples available before the stream wraps (bionic kinds only).
  std::size_t stream_length() const noexcept;
  std::size_t samples_drawn() const noexcept { return drawn_; }

 private:
  explicit EntropySource(EntropySourceKind kind) : kind_(kind) {}

  EntropySourceKind kind_;
  std::mt19937_64 wide_;
  std::mt19937 narrow_;
  std::shared_ptr<const std::vector<DetectionRecord>> records_;
  std::vector<FlightVector> vectors_;
  std::size_t cursor_ = 0;
  std::size_t cycle_count_ = 0;
  std::size_t drawn_ = 0;
  bool strict_ = false;
};

enum class FlyMode { Resting, Cruising, Burst };
std::string_view to_string(FlyMode mode) noexcept;

struct FlySimConfig {
  int fan_period = 80;        // steps between fan triggers
  int burst_min_steps = 5;
  int burst_max_steps = 20;
  double burst_speed_min = 0.15;
  double burst_speed_max = 0.55;
  double cruise_damping = 0.75;
  double cruise_noise = 0.01;
  double rest_speed = 0.004;  // cruising below this speed settles to rest
  double rest_jitter = 0.0015;
  double box_size = 0.04;
  double box_jitter = 0.01;
};

struct FlySimState {
  double cx = 0.5;
  double cy = 0.5;
  double vx = 0.0;
  double vy = 0.0;
  FlyMode mode = FlyMode::Resting;
  int fan_timer = 0;        // steps until the next fan trigger
  int burst_remaining = 0;
  std::uint64_t step = 0;
};

// Synthetic stand-in for the camera/detector pipeline: a fly that rests in a
// box until a periodic fan trigger sends it into a burst, then glides and
// settles again.
class FlySimulator {
 public:
  explicit FlySimulator(std::uint64_t seed, FlySimConfig config = {});

  const FlySimState& state() const noexcept { return state_; }
  const FlySimConfig& config() const noexcept { return config_; }

  // Advances one frame and returns the detection for it. The record is the
  // canonical text line reparsed, so it round-trips through files exactly.
  DetectionRecord step();
  std::vector<DetectionRecord> run(std::size_t steps);

 private:
  double uniform(double lo, double hi);

  FlySimConfig config_;
  FlySimState state_;
  std::mt19937_64 rng_;
};

}  // namespace flyai
