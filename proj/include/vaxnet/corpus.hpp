#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vaxnet {

enum class SentimentLabel : std::uint8_t { positive = 0, negative = 1, neutral = 2, irrelevant = 3 };

inline constexpr std::size_t kNumLabels = 4;
/// Fixed label order; also the tie-break order for every argmax.
inline constexpr std::array<SentimentLabel, kNumLabels> kAllLabels = {
    SentimentLabel::positive, SentimentLabel::negative, SentimentLabel::neutral,
    SentimentLabel::irrelevant};

std::string_view to_string(SentimentLabel label);
std::optional<SentimentLabel> parse_label(std::string_view text);
inline std::size_t index_of(SentimentLabel label) { return static_cast<std::size_t>(label); }

using TimePoint = std::chrono::sys_seconds;

struct Tweet {
    std::string id;
    std::string user_id;
    TimePoint timestamp;
    std::string text;
    std::optional<std::string> region;

    friend bool operator==(const Tweet&, const Tweet&) = default;
};

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (a trailing 'Z' or "+00:00" is accepted, or
/// no zone at all, all read as UTC).
std::optional<TimePoint> parse_iso8601(std::string_view text);
std::string format_iso8601(TimePoint t);

struct TweetParseResult {
    std::vector<Tweet> tweets;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;  ///< one per skipped line
};

/// Reads JSON-lines tweets: one object per line with string fields "id",
/// "user_id", "timestamp", "text" and optional "region". Blank lines are
/// ignored. Malformed lines and duplicate ids are skipped with a warning.
/// Throws InputError if the stream is unreadable.
TweetParseResult parse_tweets(std::istream& in);
TweetParseResult read_tweet_file(const std::string& path);
void write_tweet(std::ostream& out, const Tweet& tweet);

struct LabelParseResult {
    std::vector<std::pair<std::string, SentimentLabel>> labels;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Two-column CSV "tweet_id,label". A header line starting with "tweet_id" is
/// skipped.
LabelParseResult parse_labels(std::istream& in);
LabelParseResult read_label_file(const std::string& path);

struct TokenVector {
    std::vector<std::string> tokens;
    std::map<std::string, int> counts;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }

    static TokenVector from_tokens(std::vector<std::string> tokens);
};

/// Active stop words (classic English analyzer list minus "no" and "not").
const std::vector<std::string_view>& stop_words();
bool is_stop_word(std::string_view token);

/// Porter (1980) suffix stripping for a lowercase ASCII word.
std::string porter_stem(std::string_view word);

/// Text to features: lowercase, split on whitespace, drop punctuation except
/// '!' (each '!' becomes its own token after the word it was attached to),
/// drop stop words, stem alphabetic tokens.
///
/// Stemming is iterated to a fixed point and stop words are filtered again
/// after stemming, so tokenize(join(tokenize(s))) == tokenize(s) and no stop
/// word ever comes out.
TokenVector tokenize(std::string_view text);

}  // namespace vaxnet
