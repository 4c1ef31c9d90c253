#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace obfkit {

enum class AlphabetMode { lower_case, mixed_case };

inline std::string to_string(AlphabetMode mode) {
    return mode == AlphabetMode::lower_case ? "lower_case" : "mixed_case";
}

// The deterministic rename sequence used by ProGuard-style minifiers:
// all one-digit names in digit order, then all two-digit names in
// lexicographic digit order, and so on (bijective numeration over the digit
// list). Digits are strings so that user word lists can replace the default
// character alphabets.
class RenameAlphabet {
public:
    static RenameAlphabet lower_case() {
        return RenameAlphabet(char_range('a', 'z'), AlphabetMode::lower_case);
    }

    static RenameAlphabet mixed_case() {
        std::vector<std::string> digits = char_range('a', 'z');
        std::vector<std::string> upper = char_range('A', 'Z');
        digits.insert(digits.end(), upper.begin(), upper.end());
        return RenameAlphabet(std::move(digits), AlphabetMode::mixed_case);
    }

    static RenameAlphabet from_mode(AlphabetMode mode) {
        return mode == AlphabetMode::lower_case ? lower_case() : mixed_case();
    }

    // Custom word-list alphabet. Digits must be unique and non-empty.
    static RenameAlphabet custom(std::vector<std::string> digits) {
        if (digits.empty())
            throw std::invalid_argument("alphabet needs at least one digit");
        std::set<std::string> seen;
        for (const auto& d : digits) {
            if (d.empty())
                throw std::invalid_argument("alphabet digit must be non-empty");
            if (!seen.insert(d).second)
                throw std::invalid_argument("alphabet digits must be unique: " + d);
        }
        return RenameAlphabet(std::move(digits), AlphabetMode::mixed_case);
    }

    std::size_t radix() const noexcept { return digits_.size(); }
    AlphabetMode mode() const noexcept { return mode_; }

    // n-th name of the sequence, zero-based. Injective in n.
    std::string nth_name(std::size_t n) const {
        // Bijective base-radix: peel the least significant digit, then
        // shift by one so "a" follows "Z"-style rollover as "aa".
        std::string out;
        std::size_t remaining = n;
        while (true) {
            out.insert(0, digits_[remaining % radix()]);
            if (remaining < radix()) break;
            remaining = remaining / radix() - 1;
        }
        return out;
    }

    // First k names as an ordered list.
    std::vector<std::string> sequence(std::size_t k) const {
        std::vector<std::string> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) out.push_back(nth_name(i));
        return out;
    }

    // First k names as a set; size is exactly k.
    std::unordered_set<std::string> generated_prefix(std::size_t k) const {
        std::unordered_set<std::string> out;
        out.reserve(k * 2);
        for (std::size_t i = 0; i < k; ++i) out.insert(nth_name(i));
        return out;
    }

private:
    RenameAlphabet(std::vector<std::string> digits, AlphabetMode mode)
        : digits_(std::move(digits)), mode_(mode) {}

    static std::vector<std::string> char_range(char lo, char hi) {
        std::vector<std::string> out;
        for (char c = lo; c <= hi; ++c) out.emplace_back(1, c);
        return out;
    }

    std::vector<std::string> digits_;
    AlphabetMode mode_;
};

// Fraction of the observed names that the rename sequence would have produced
// for a scope of that size.
template <typename NameSet>
double match_scope(const NameSet& names, const RenameAlphabet& alphabet) {
    std::size_t size = static_cast<std::size_t>(names.size());
    if (size == 0)
        throw std::invalid_argument("match_scope requires a non-empty name set");
    auto prefix = alphabet.generated_prefix(size);
    std::size_t hits = 0;
    for (const auto& name : names)
        if (prefix.count(name)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(size);
}

template <typename NameSet>
std::size_t match_scope_count(const NameSet& names, const RenameAlphabet& alphabet) {
    auto prefix = alphabet.generated_prefix(static_cast<std::size_t>(names.size()));
    std::size_t hits = 0;
    for (const auto& name : names)
        if (prefix.count(name)) ++hits;
    return hits;
}

// Reserved Windows device names that some obfuscators use as class names.
// Matching is case-insensitive.
class WindowsKeywordSet {
public:
    static WindowsKeywordSet standard() {
        std::set<std::string> kw = {"AUX", "NUL", "CON", "PRN"};
        for (int i = 1; i <= 9; ++i) {
            kw.insert("COM" + std::to_string(i));
            kw.insert("LPT" + std::to_string(i));
        }
        return WindowsKeywordSet(std::move(kw));
    }

    static WindowsKeywordSet custom(std::set<std::string> keywords) {
        std::set<std::string> upper;
        for (const auto& k : keywords) upper.insert(to_upper(k));
        return WindowsKeywordSet(std::move(upper));
    }

    bool contains(const std::string& name) const {
        return keywords_.count(to_upper(name)) != 0;
    }

    const std::set<std::string>& keywords() const noexcept { return keywords_; }

private:
    explicit WindowsKeywordSet(std::set<std::string> keywords)
        : keywords_(std::move(keywords)) {}

    static std::string to_upper(std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
            return static_cast<char>(std::toupper(c));
        });
        return s;
    }

    std::set<std::string> keywords_;
};

inline bool is_windows_keyword(const std::string& name,
                               const WindowsKeywordSet& keywords) {
    return keywords.contains(name);
}

}  // namespace obfkit
