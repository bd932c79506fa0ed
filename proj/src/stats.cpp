#include "flyai/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace flyai {

FrequencyTable frequency(std::span<const int> samples) {
  FrequencyTable table;
  for (int s : samples) {
    if (s < 0 || s > kMaxSample)
      throw std::out_of_range("sample " + std::to_string(s) + " outside [0,49]");
    ++table.counts[static_cast<std::size_t>(s)];
  }
  table.n = samples.size();
  return table;
}

StatsSummary summarize(std::span<const int> samples) {
  const std::size_t n = samples.size();
  if (n < 4) throw InsufficientData("summary statistics need at least 4 samples");

  // Sums of integers are exact in 64 bits for any realistic n.
  long long sum = 0;
  for (int s : samples) sum += s;
  const double dn = static_cast<double>(n);
  const double mean = static_cast<double>(sum) / dn;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (int s : samples) {
    const double d = static_cast<double>(s) - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double ss = m2;
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;

  std::vector<int> sorted(samples.begin(), samples.end());
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  double median = *mid;
  if (n % 2 == 0) {
    const int lower = *std::max_element(sorted.begin(), mid);
    median = (static_cast<double>(lower) + median) / 2.0;
  }

  StatsSummary out;
  out.n = n;
  out.mean = mean;
  out.median = median;
  out.std_dev = std::sqrt(ss / (dn - 1.0));
  if (m2 == 0.0) throw UndefinedMoment("zero variance: skewness and kurtosis are undefined", out);
  out.skewness = m3 / std::pow(m2, 1.5);
  out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return out;
}

std::string_view to_string(KurtosisClass c) noexcept {
  switch (c) {
    case KurtosisClass::Platykurtic:
      return "platykurtic";
    case KurtosisClass::Leptokurtic:
      return "leptokurtic";
    default:
      return "mesokurtic";
  }
}

std::string_view to_string(SkewClass c) noexcept {
  switch (c) {
    case SkewClass::RightSkewed:
      return "right-skewed";
    case SkewClass::LeftSkewed:
      return "left-skewed";
    default:
      return "symmetric";
  }
}

std::string Interpretation::text() const {
  return std::string(to_string(kurtosis)) + ", " + std::string(to_string(skew));
}

Interpretation interpret(const StatsSummary& s) {
  Interpretation out{};
  if (s.excess_kurtosis < -kMesokurticBand)
    out.kurtosis = KurtosisClass::Platykurtic;
  else if (s.excess_kurtosis > kMesokurticBand)
    out.kurtosis = KurtosisClass::Leptokurtic;
  else
    out.kurtosis = KurtosisClass::Mesokurtic;

  if (std::fabs(s.skewness) < kSymmetryBand)
    out.skew = SkewClass::Symmetric;
  else
    out.skew = s.skewness > 0 ? SkewClass::RightSkewed : SkewClass::LeftSkewed;
  return out;
}

EntropySource make_report_source(EntropySourceKind kind, const ReportSources& config) {
  switch (kind) {
    case EntropySourceKind::IdealUniform:
      return EntropySource::ideal(config.seed);
    case EntropySourceKind::MersenneTwister:
      return EntropySource::mersenne_twister(static_cast<std::uint32_t>(config.seed));
    default:
      if (!config.trajectory)
        throw EntropyConfigurationError(std::string(to_string(kind)) +
                                        " requires a trajectory file");
      return EntropySource::bionic(kind, config.trajectory);
  }
}

StatsReport table_report(std::span<const EntropySourceKind> sources, std::size_t n,
                         const ReportSources& config) {
  if (n < 4) throw InsufficientData("report needs n >= 4");
  StatsReport report;
  for (auto kind : sources) {
    auto source = make_report_source(kind, config);
    const auto samples = source.take(n);
    report.columns.push_back({std::string(to_string(kind)), summarize(samples), frequency(samples)});
  }
  return report;
}

namespace {
std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  // Avoid printing "-0.0000" for tiny negative values.
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}
}  // namespace

std::string StatsReport::to_text() const {
  constexpr int kLabelWidth = 10;
  constexpr int kColWidth = 12;
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-*s", kLabelWidth, "");
  out += buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, "%*s", kColWidth, c.source.c_str());
    out += buf;
  }
  out += '\n';
  const auto row = [&](const char* label, auto getter) {
    std::snprintf(buf, sizeof buf, "%-*s", kLabelWidth, label);
    out += buf;
    for (const auto& c : columns) {
      std::snprintf(buf, sizeof buf, "%*s", kColWidth, fixed(getter(c.summary), 4).c_str());
      out += buf;
    }
    out += '\n';
  };
  row("Mean", [](const StatsSummary& s) { return s.mean; });
  row("Median", [](const StatsSummary& s) { return s.median; });
  row("Std.", [](const StatsSummary& s) { return s.std_dev; });
  row("Kurtosis", [](const StatsSummary& s) { return s.excess_kurtosis; });
  row("Skewness", [](const StatsSummary& s) { return s.skewness; });
  return out;
}

std::string StatsReport::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& c : columns) {
    arr.push_back({{"source", c.source},
                   {"n", c.summary.n},
                   {"mean", c.summary.mean},
                   {"median", c.summary.median},
                   {"std", c.summary.std_dev},
                   {"kurtosis", c.summary.excess_kurtosis},
                   {"skewness", c.summary.skewness},
                   {"interpretation", interpret(c.summary).text()}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace flyai
