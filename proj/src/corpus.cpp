#include "vaxnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "vaxnet/error.hpp"

namespace vaxnet {

using json = nlohmann::json;

std::string_view to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::positive: return "positive";
        case SentimentLabel::negative: return "negative";
        case SentimentLabel::neutral: return "neutral";
        case SentimentLabel::irrelevant: return "irrelevant";
    }
    return "?";
}

std::optional<SentimentLabel> parse_label(std::string_view text) {
    for (SentimentLabel l : kAllLabels)
        if (to_string(l) == text) return l;
    return std::nullopt;
}

std::optional<TimePoint> parse_iso8601(std::string_view text) {
    int y, mo, d, h, mi, s, consumed = 0;
    const std::string buf(text);
    if (std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s, &consumed) != 6)
        return std::nullopt;
    const std::string_view zone = text.substr(static_cast<std::size_t>(consumed));
    if (!(zone.empty() || zone == "Z" || zone == "+00:00")) return std::nullopt;
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_iso8601(TimePoint t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
    return buf;
}

namespace {

std::optional<std::string> string_field(const json& obj, const char* name, std::string& why) {
    auto it = obj.find(name);
    if (it == obj.end()) {
        why = std::string("missing field '") + name + "'";
        return std::nullopt;
    }
    if (!it->is_string()) {
        why = std::string("field '") + name + "' is not a string";
        return std::nullopt;
    }
    return it->get<std::string>();
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

TweetParseResult parse_tweets(std::istream& in) {
    if (!in) throw InputError("tweet stream is not readable");
    TweetParseResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    auto skip = [&](const std::string& why) {
        ++result.skipped;
        result.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            skip("not a JSON object");
            continue;
        }
        std::string why;
        auto id = string_field(obj, "id", why);
        auto user = id ? string_field(obj, "user_id", why) : std::nullopt;
        auto stamp = user ? string_field(obj, "timestamp", why) : std::nullopt;
        auto text = stamp ? string_field(obj, "text", why) : std::nullopt;
        if (!text) {
            skip(why);
            continue;
        }
        auto when = parse_iso8601(*stamp);
        if (!when) {
            skip("bad timestamp '" + *stamp + "'");
            continue;
        }
        std::optional<std::string> region;
        if (auto it = obj.find("region"); it != obj.end() && !it->is_null()) {
            if (!it->is_string()) {
                skip("field 'region' is not a string");
                continue;
            }
            region = it->get<std::string>();
        }
        if (!seen.insert(*id).second) {
            skip("duplicate tweet id '" + *id + "'");
            continue;
        }
        result.tweets.push_back(Tweet{std::move(*id), std::move(*user), *when, std::move(*text), std::move(region)});
    }
    if (in.bad()) throw InputError("I/O error while reading tweets");
    return result;
}

TweetParseResult read_tweet_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open tweet file '" + path + "'");
    return parse_tweets(in);
}

void write_tweet(std::ostream& out, const Tweet& tweet) {
    json obj = {{"id", tweet.id},
                {"user_id", tweet.user_id},
                {"timestamp", format_iso8601(tweet.timestamp)},
                {"text", tweet.text}};
    if (tweet.region) obj["region"] = *tweet.region;
    out << obj.dump() << '\n';
}

LabelParseResult parse_labels(std::istream& in) {
    if (!in) throw InputError("label stream is not readable");
    LabelParseResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        if (line_no == 1 && line.rfind("tweet_id", 0) == 0) continue;
        const auto comma = line.find(',');
        std::optional<SentimentLabel> label;
        if (comma != std::string::npos && comma > 0) label = parse_label(std::string_view(line).substr(comma + 1));
        if (!label) {
            ++result.skipped;
            result.warnings.push_back("line " + std::to_string(line_no) + ": expected 'tweet_id,label'");
            continue;
        }
        std::string id = line.substr(0, comma);
        if (!seen.insert(id).second) {
            ++result.skipped;
            result.warnings.push_back("line " + std::to_string(line_no) + ": duplicate tweet id '" + id + "'");
            continue;
        }
        result.labels.emplace_back(std::move(id), *label);
    }
    if (in.bad()) throw InputError("I/O error while reading labels");
    return result;
}

LabelParseResult read_label_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open label file '" + path + "'");
    return parse_labels(in);
}

TokenVector TokenVector::from_tokens(std::vector<std::string> tokens) {
    TokenVector tv;
    tv.tokens = std::move(tokens);
    for (const auto& t : tv.tokens) ++tv.counts[t];
    return tv;
}

const std::vector<std::string_view>& stop_words() {
    static const std::vector<std::string_view> words = {
        "a",    "an",    "and",  "are",   "as",    "at",    "be",   "but",  "by",   "for",  "if",
        "in",   "into",  "is",   "it",    "of",    "on",    "or",   "such", "that", "the",  "their",
        "then", "there", "these", "they", "this",  "to",    "was",  "will", "with"};
    return words;
}

bool is_stop_word(std::string_view token) {
    const auto& words = stop_words();
    return std::find(words.begin(), words.end(), token) != words.end();
}

namespace {

bool all_alpha(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= 'a' && c <= 'z'; });
}

std::string stem_to_fixed_point(std::string word) {
    for (;;) {
        std::string next = porter_stem(word);
        if (next == word) return word;
        word = std::move(next);
    }
}

}  // namespace

TokenVector tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= n) break;
        std::string word;
        int bangs = 0;
        for (; i < n && !std::isspace(static_cast<unsigned char>(text[i])); ++i) {
            const auto c = static_cast<unsigned char>(text[i]);
            if (c == '!') ++bangs;
            else if (std::ispunct(c)) continue;
            else word.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
        }
        if (!word.empty() && !is_stop_word(word)) {
            if (all_alpha(word)) word = stem_to_fixed_point(std::move(word));
            if (!word.empty() && !is_stop_word(word)) tokens.push_back(std::move(word));
        }
        for (int b = 0; b < bangs; ++b) tokens.emplace_back("!");
    }
    return TokenVector::from_tokens(std::move(tokens));
}

}  // namespace vaxnet
