#include <string>
#include <string_view>
#include <utility>

#include "vaxnet/corpus.hpp"

// Porter, "An algorithm for suffix stripping" (1980), as originally published:
// no two-letter short-circuit and no later revisions such as logi -> log.

namespace vaxnet {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(w, i - 1);
        default:
            return true;
    }
}

// Number of VC sequences in [C](VC)^m[V].
int measure(std::string_view stem) {
    int m = 0;
    std::size_t i = 0;
    const std::size_t n = stem.size();
    while (i < n && is_consonant(stem, i)) ++i;
    while (i < n) {
        while (i < n && !is_consonant(stem, i)) ++i;
        if (i >= n) break;
        while (i < n && is_consonant(stem, i)) ++i;
        ++m;
    }
    return m;
}

bool has_vowel(std::string_view stem) {
    for (std::size_t i = 0; i < stem.size(); ++i)
        if (!is_consonant(stem, i)) return true;
    return false;
}

bool ends_double_consonant(std::string_view w) {
    const std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends cvc, where the final c is not w, x or y.
bool ends_cvc(std::string_view w) {
    const std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
    const char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

// The first rule whose suffix matches decides; if its condition fails the step
// does nothing.
template <typename Cond>
void apply_first(std::string& w, std::initializer_list<Rule> rules, Cond cond) {
    for (const Rule& r : rules) {
        if (!ends_with(w, r.suffix)) continue;
        std::string_view stem(w.data(), w.size() - r.suffix.size());
        if (cond(stem, r)) {
            w.resize(stem.size());
            w.append(r.replacement);
        }
        return;
    }
}

void step1a(std::string& w) {
    if (ends_with(w, "sses")) w.resize(w.size() - 2);
    else if (ends_with(w, "ies")) w.resize(w.size() - 2);
    else if (ends_with(w, "ss")) return;
    else if (ends_with(w, "s")) w.pop_back();
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
        return;
    }
    bool stripped = false;
    for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
        if (ends_with(w, suffix) && has_vowel(std::string_view(w).substr(0, w.size() - suffix.size()))) {
            w.resize(w.size() - suffix.size());
            stripped = true;
            break;
        }
    }
    if (!stripped) return;

    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w.push_back('e');
    } else if (ends_double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
               !ends_with(w, "z")) {
        w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
        w.push_back('e');
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(std::string_view(w).substr(0, w.size() - 1))) w.back() = 'i';
}

auto m_gt0 = [](std::string_view stem, const Rule&) { return measure(stem) > 0; };

void step2(std::string& w) {
    apply_first(w,
                {{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
                 {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
                 {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
                 {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
                 {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"}},
                m_gt0);
}

void step3(std::string& w) {
    apply_first(w,
                {{"icate", "ic"},
                 {"ative", ""},
                 {"alize", "al"},
                 {"iciti", "ic"},
                 {"ical", "ic"},
                 {"ful", ""},
                 {"ness", ""}},
                m_gt0);
}

void step4(std::string& w) {
    auto cond = [](std::string_view stem, const Rule& r) {
        if (measure(stem) <= 1) return false;
        if (r.suffix == "ion") return !stem.empty() && (stem.back() == 's' || stem.back() == 't');
        return true;
    };
    apply_first(w,
                {{"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},    {"ic", ""},
                 {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
                 {"ent", ""},  {"ion", ""},  {"ou", ""},   {"ism", ""},   {"ate", ""},
                 {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""}},
                cond);
}

void step5(std::string& w) {
    if (ends_with(w, "e")) {
        std::string_view stem(w.data(), w.size() - 1);
        const int m = measure(stem);
        if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
    }
    if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l') w.pop_back();
}

}  // namespace

std::string porter_stem(std::string_view word) {
    std::string w(word);
    if (w.empty()) return w;
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5(w);
    return w;
}

}  // namespace vaxnet
