#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "flyai/entropy.hpp"

namespace flyai {

struct FrequencyTable {
  std::array<std::uint64_t, kSampleRange> counts{};
  std::uint64_t n = 0;
};

FrequencyTable frequency(std::span<const int> samples);

struct StatsSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double std_dev = 0.0;  // sample standard deviation, n-1 denominator
  double excess_kurtosis = 0.0;
  double skewness = 0.0;
};

// Zero-variance input: the shape statistics are undefined. The exception still
// carries mean, median and std.
class UndefinedMoment : public std::domain_error {
 public:
  UndefinedMoment(const std::string& what, StatsSummary partial)
      : std::domain_error(what), partial_(partial) {}
  const StatsSummary& partial() const noexcept { return partial_; }

 private:
  StatsSummary partial_;
};

// Moments m2..m4 are central moments with denominator n:
//   skewness = m3 / m2^1.5, excess kurtosis = m4 / m2^2 - 3.
// Throws InsufficientData for n < 4 and UndefinedMoment for zero variance.
StatsSummary summarize(std::span<const int> samples);

enum class KurtosisClass { Platykurtic, Mesokurtic, Leptokurtic };
enum class SkewClass { Symmetric, RightSkewed, LeftSkewed };

// |excess kurtosis| below this counts as mesokurtic.
inline constexpr double kMesokurticBand = 0.1;
// |skewness| strictly below this counts as symmetric.
inline constexpr double kSymmetryBand = 0.5;

struct Interpretation {
  KurtosisClass kurtosis;
  SkewClass skew;
  std::string text() const;  // e.g. "platykurtic, symmetric"
};

Interpretation interpret(const StatsSummary& summary);
std::string_view to_string(KurtosisClass c) noexcept;
std::string_view to_string(SkewClass c) noexcept;

inline constexpr std::size_t kDefaultSampleCount = 1050;

struct StatsColumn {
  std::string source;
  StatsSummary summary;
  FrequencyTable histogram;
};

struct StatsReport {
  std::vector<StatsColumn> columns;

  // Rows Mean/Median/Std./Kurtosis/Skewness, one column per source.
  std::string to_text() const;
  // JSON array, one object per source with n and the five statistics.
  std::string to_json() const;
};

struct ReportSources {
  std::uint64_t seed = 1;
  std::shared_ptr<const std::vector<DetectionRecord>> trajectory;  // bionic kinds
};

// Draws n samples from each requested source and summarizes them.
StatsReport table_report(std::span<const EntropySourceKind> sources, std::size_t n,
                         const ReportSources& config);

// Builds the entropy source the report uses for `kind` (seeded from config.seed).
EntropySource make_report_source(EntropySourceKind kind, const ReportSources& config);

}  // namespace flyai
