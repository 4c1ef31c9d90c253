#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace obfkit {

// Structural failure while reading an input (binary section, JSON document,
// rule file). Carries enough context to point at the offending bytes/line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message,
               std::optional<std::size_t> offset = std::nullopt,
               std::string section = {})
        : std::runtime_error(format(message, offset, section)),
          offset_(offset),
          section_(std::move(section)) {}

    const std::optional<std::size_t>& offset() const noexcept { return offset_; }
    const std::string& section() const noexcept { return section_; }

private:
    static std::string format(const std::string& message,
                              const std::optional<std::size_t>& offset,
                              const std::string& section) {
        std::string out = message;
        if (!section.empty()) out += " [section " + section + "]";
        if (offset) out += " [offset " + std::to_string(*offset) + "]";
        return out;
    }

    std::optional<std::size_t> offset_;
    std::string section_;
};

// Well-formed input that violates the schema or a model invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string message, std::string path = {})
        : std::runtime_error(path.empty() ? message
                                          : message + " [at " + path + "]"),
          path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace obfkit
