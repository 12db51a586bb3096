#ifndef DIFFBAND_ERRORS_HPP
#define DIFFBAND_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace diffband {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSequence : public Error {
public:
    InvalidSequence(const std::string& what, std::size_t position)
        : Error(what + " (at offset " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class InvalidScheme : public Error {
public:
    using Error::Error;
};

class InvalidPolicy : public Error {
public:
    using Error::Error;
};

class CigarShapeMismatch : public Error {
public:
    using Error::Error;
};

/// A primed difference value left its representable range. Always a recurrence bug.
class PrecisionOverflow : public Error {
public:
    using Error::Error;
};

/// The terminal cell never entered the band.
class BandEscape : public Error {
public:
    explicit BandEscape(std::int64_t best_edge_score)
        : Error("terminal cell left the band; best in-band score " + std::to_string(best_edge_score)),
          best_edge_score_(best_edge_score) {}
    std::int64_t best_edge_score() const noexcept { return best_edge_score_; }

private:
    std::int64_t best_edge_score_;
};

class CorruptTraceback : public Error {
public:
    using Error::Error;
};

class GenomeTooShort : public Error {
public:
    using Error::Error;
};

class CapacityExceeded : public Error {
public:
    using Error::Error;
};

class UnknownPrimitive : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries the source name and 1-based line.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line) {}
    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

class ConfigError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace diffband

#endif
