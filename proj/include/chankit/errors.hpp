#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chankit {

/// An input value violates one of its declared invariants.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the mathematical domain of the operation.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Two alphabets share no common set: no channel exists between them.
class no_channel_error : public std::runtime_error {
public:
    explicit no_channel_error(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be read or written.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Wire decode failure; offset is the byte position that triggered it.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t offset, const std::string& reason)
        : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + reason),
          offset_(offset),
          reason_(reason) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t offset_;
    std::string reason_;
};

}  // namespace chankit
