#include "vaxnet/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vaxnet/error.hpp"

namespace vaxnet {

std::optional<Day> parse_date(std::string_view text) {
    int y, m, d, consumed = 0;
    const std::string buf(text);
    if (std::sscanf(buf.c_str(), "%4d-%2d-%2d%n", &y, &m, &d, &consumed) != 3 ||
        static_cast<std::size_t>(consumed) != buf.size())
        return std::nullopt;
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

std::string format_date(Day day) {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::optional<double> sentiment_score(long n_pos, long n_neg, long n_neu) {
    const long total = n_pos + n_neg + n_neu;
    if (total == 0) return std::nullopt;
    return static_cast<double>(n_pos - n_neg) / static_cast<double>(total);
}

namespace {

void tally(long& n_pos, long& n_neg, long& n_neu, SentimentLabel label) {
    switch (label) {
        case SentimentLabel::positive: ++n_pos; break;
        case SentimentLabel::negative: ++n_neg; break;
        case SentimentLabel::neutral: ++n_neu; break;
        case SentimentLabel::irrelevant: break;
    }
}

}  // namespace

std::vector<DailyCounts> daily_series(std::span<const LabeledTweet> tweets, Day first, Day last,
                                      const std::optional<std::string>& region) {
    if (last < first) throw Error("daily_series: empty date range");
    const auto n_days = static_cast<std::size_t>((last - first).count() + 1);
    std::vector<DailyCounts> series(n_days);
    for (std::size_t i = 0; i < n_days; ++i) series[i].date = first + std::chrono::days{static_cast<int>(i)};

    for (const auto& lt : tweets) {
        if (region && lt.tweet->region != region) continue;
        const Day day = std::chrono::floor<std::chrono::days>(lt.tweet->timestamp);
        if (day < first || day > last) continue;
        auto& entry = series[static_cast<std::size_t>((day - first).count())];
        tally(entry.n_pos, entry.n_neg, entry.n_neu, lt.label);
    }
    return series;
}

std::vector<std::optional<double>> moving_average(std::span<const std::optional<double>> series,
                                                  std::size_t window) {
    if (window == 0) throw Error("moving_average: window must be positive");
    std::vector<std::optional<double>> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t start = i + 1 >= window ? i + 1 - window : 0;
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t j = start; j <= i; ++j) {
            if (series[j]) {
                sum += *series[j];
                ++n;
            }
        }
        if (n > 0) out[i] = sum / static_cast<double>(n);
    }
    return out;
}

std::vector<RegionScore> region_scores(std::span<const LabeledTweet> tweets) {
    std::map<std::string, RegionScore> by_region;
    for (const auto& lt : tweets) {
        if (!lt.tweet->region) continue;
        auto& rs = by_region[*lt.tweet->region];
        rs.region = *lt.tweet->region;
        tally(rs.n_pos, rs.n_neg, rs.n_neu, lt.label);
    }
    std::vector<RegionScore> out;
    out.reserve(by_region.size());
    for (auto& [code, rs] : by_region) out.push_back(std::move(rs));
    return out;
}

RegionalCorrelation regional_correlation(std::span<const RegionScore> scores,
                                         const std::map<std::string, double>& coverage) {
    std::vector<double> x, y, w;
    for (const auto& rs : scores) {
        if (rs.empty()) continue;
        auto it = coverage.find(rs.region);
        if (it == coverage.end()) continue;
        x.push_back(rs.score());
        y.push_back(it->second);
        w.push_back(static_cast<double>(rs.weight()));
    }
    if (x.size() < 3)
        throw Error("regional_correlation: need at least 3 regions with tweets and coverage, have " +
                    std::to_string(x.size()));
    return {stats::weighted_pearson(x, y, w), x.size()};
}

std::map<std::string, double> read_coverage_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open coverage file '" + path + "'");
    std::map<std::string, double> coverage;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError(path + ":" + std::to_string(line_no) + ": expected 'region,coverage'");
        const std::string value = line.substr(comma + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') {
            if (line_no == 1) continue;  // header
            throw InputError(path + ":" + std::to_string(line_no) + ": bad coverage value");
        }
        coverage[line.substr(0, comma)] = v;
    }
    return coverage;
}

void write_daily_counts_csv(std::ostream& out, std::span<const DailyCounts> series) {
    out << "date,n_pos,n_neg,n_neu,score\n";
    for (const auto& d : series) {
        out << format_date(d.date) << ',' << d.n_pos << ',' << d.n_neg << ',' << d.n_neu << ',';
        if (auto s = d.score()) out << format_number(*s);
        out << '\n';
    }
}

void write_moving_average_csv(std::ostream& out, std::span<const DailyCounts> series,
                              std::span<const std::optional<double>> averaged) {
    out << "date,score,score_ma\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_date(series[i].date) << ',';
        if (auto s = series[i].score()) out << format_number(*s);
        out << ',';
        if (i < averaged.size() && averaged[i]) out << format_number(*averaged[i]);
        out << '\n';
    }
}

void write_region_scores_csv(std::ostream& out, std::span<const RegionScore> scores) {
    out << "region,n_pos,n_neg,n_neu,weight,score\n";
    for (const auto& rs : scores) {
        out << rs.region << ',' << rs.n_pos << ',' << rs.n_neg << ',' << rs.n_neu << ',' << rs.weight() << ',';
        if (!rs.empty()) out << format_number(rs.score());
        out << '\n';
    }
}

}  // namespace vaxnet
