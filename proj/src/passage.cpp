#include "cove/passage.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <cctype>
#include <unordered_set>

namespace cove {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closing(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

bool is_opener(char c) {
    return std::isupper(static_cast<unsigned char>(c)) != 0 ||
           std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '"' ||
           c == '\'' || c == '(' || c == '[';
}

const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbrevs = {
        "mr",   "mrs",  "ms",  "dr",   "prof", "rev",  "hon", "st",
        "jr",   "sr",   "vs",  "etc",  "inc",  "ltd",  "co",  "corp",
        "mt",   "ft",   "no",  "vol",  "fig",  "al",   "eg",  "ie",
        "e.g",  "i.e",  "dept", "univ", "est",  "gen",  "col", "lt",
        "sgt",  "capt", "gov", "sen",  "rep",  "pres", "cf",  "ca",
        "pp",   "ed",   "eds", "approx"};
    return abbrevs;
}

// Token immediately preceding position `dot` (exclusive), up to whitespace.
std::string token_before(const std::string& text, std::size_t dot) {
    std::size_t end = dot;
    std::size_t begin = end;
    while (begin > 0 &&
           std::isspace(static_cast<unsigned char>(text[begin - 1])) == 0) {
        --begin;
    }
    return text.substr(begin, end - begin);
}

// True when a '.' at `pos` must not end a sentence: initials ("J."),
// known abbreviations ("Jr."), and dotted acronyms ("U.S.", "Ph.D.").
bool guarded_period(const std::string& text, std::size_t pos) {
    std::string tok = token_before(text, pos);
    if (tok.empty()) return false;
    if (tok.size() == 1 &&
        std::isalpha(static_cast<unsigned char>(tok[0])) != 0) {
        return true;
    }
    if (tok.find('.') != std::string::npos) return true;
    return abbreviations().count(lower_ascii(tok)) != 0;
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty()) return out;

    std::size_t start = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_terminator(text[i])) {
            ++i;
            continue;
        }
        std::size_t term_begin = i;
        std::size_t term_len = 0;
        while (i < n && is_terminator(text[i])) {
            ++i;
            ++term_len;
        }
        bool only_single_period = term_len == 1 && text[term_begin] == '.';
        while (i < n && is_closing(text[i])) ++i;

        std::size_t ws = i;
        while (ws < n && std::isspace(static_cast<unsigned char>(text[ws])) != 0) {
            ++ws;
        }
        if (ws == i) continue;               // no whitespace: "3.14"
        if (ws < n && !is_opener(text[ws])) {  // lowercase continuation
            i = ws;
            continue;
        }
        if (only_single_period && guarded_period(text, term_begin)) {
            i = ws;
            continue;
        }
        // Boundary: the separator whitespace stays with this sentence.
        out.push_back(text.substr(start, ws - start));
        start = ws;
        i = ws;
    }
    if (start < n) out.push_back(text.substr(start));
    return out;
}

std::vector<std::string> split_passages(const std::string& text,
                                        TaskKind task_kind) {
    if (text.empty()) return {};
    if (task_kind == TaskKind::LongformBio) return split_sentences(text);
    return {text};
}

std::string clip_sentences(const std::string& text, int n) {
    if (n < 1) throw InvalidConfigError("clip length must be >= 1");
    auto sentences = split_sentences(text);
    if (sentences.size() <= static_cast<std::size_t>(n)) return text;
    std::string out;
    for (int i = 0; i < n; ++i) out += sentences[static_cast<std::size_t>(i)];
    return out;
}

}  // namespace cove
