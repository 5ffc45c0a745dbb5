#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vaxnet/corpus.hpp"
#include "vaxnet/stats.hpp"

namespace vaxnet {

using Day = std::chrono::sys_days;

std::optional<Day> parse_date(std::string_view text);  ///< YYYY-MM-DD
std::string format_date(Day day);

/// (n_pos - n_neg) / (n_pos + n_neg + n_neu); nullopt when all three are zero.
std::optional<double> sentiment_score(long n_pos, long n_neg, long n_neu);

struct DailyCounts {
    Day date;
    long n_pos = 0;
    long n_neg = 0;
    long n_neu = 0;

    std::optional<double> score() const { return sentiment_score(n_pos, n_neg, n_neu); }
    friend bool operator==(const DailyCounts&, const DailyCounts&) = default;
};

struct LabeledTweet {
    const Tweet* tweet;
    SentimentLabel label;
};

/// One entry per UTC day in [first, last], zero-filled. Irrelevant tweets and
/// tweets outside the range are ignored; with `region` set, only tweets carrying
/// that region count. Throws Error if last < first.
std::vector<DailyCounts> daily_series(std::span<const LabeledTweet> tweets, Day first, Day last,
                                      const std::optional<std::string>& region = std::nullopt);

/// Trailing mean over the last `window` days (current day included). Empty
/// entries are skipped; a window with no values yields an empty entry.
std::vector<std::optional<double>> moving_average(std::span<const std::optional<double>> series,
                                                  std::size_t window = 14);

struct RegionScore {
    std::string region;
    long n_pos = 0;
    long n_neg = 0;
    long n_neu = 0;

    long weight() const { return n_pos + n_neg + n_neu; }
    /// 0 for an empty region; check `empty()`.
    double score() const { return sentiment_score(n_pos, n_neg, n_neu).value_or(0.0); }
    bool empty() const { return weight() == 0; }
};

/// Tallies per region over tweets that carry a region, sorted by region code.
std::vector<RegionScore> region_scores(std::span<const LabeledTweet> tweets);

struct RegionalCorrelation {
    stats::Correlation correlation;
    std::size_t regions = 0;
};

/// Weighted Pearson between region score and coverage, weights = relevant tweet
/// totals. Regions with zero weight or no coverage entry are left out. Throws
/// Error if fewer than three regions remain.
RegionalCorrelation regional_correlation(std::span<const RegionScore> scores,
                                         const std::map<std::string, double>& coverage);

/// Two-column "region,coverage" CSV (header optional).
std::map<std::string, double> read_coverage_file(const std::string& path);

void write_daily_counts_csv(std::ostream& out, std::span<const DailyCounts> series);
void write_moving_average_csv(std::ostream& out, std::span<const DailyCounts> series,
                              std::span<const std::optional<double>> averaged);
void write_region_scores_csv(std::ostream& out, std::span<const RegionScore> scores);

/// Fixed-precision rendering shared by every CSV writer ("%.10g").
std::string format_number(double value);

}  // namespace vaxnet
