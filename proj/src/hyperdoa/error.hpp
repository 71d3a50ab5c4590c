#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperdoa {

// Broad error families. The C API and the CLI map these onto status and exit
// codes, so every thrown error must belong to exactly one family.
enum class ErrorKind {
  Config,     // invalid parameters or configuration keys
  Data,       // bad labels, malformed/truncated/version-mismatched files, I/O
  Numerical,  // degenerate inputs, infeasible decoding
  State,      // operation not valid in the object's current state
  Shape,      // dimension mismatch between cooperating objects
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error(ErrorKind::Shape, w) {}
};
struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};
struct LabelError : Error {
  explicit LabelError(const std::string& w) : Error(ErrorKind::Data, w) {}
};
struct TrainingError : Error {
  explicit TrainingError(const std::string& w) : Error(ErrorKind::Data, w) {}
};
struct StateError : Error {
  explicit StateError(const std::string& w) : Error(ErrorKind::State, w) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorKind::Data, w) {}
};
struct VersionError : Error {
  explicit VersionError(const std::string& w) : Error(ErrorKind::Data, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Data, w) {}
};

// Greedy peak selection ran out of candidates before reaching the requested
// source count.
class DecodeError : public Error {
 public:
  DecodeError(std::size_t found, std::size_t requested)
      : Error(ErrorKind::Numerical, "decoding infeasible: found " + std::to_string(found) +
                                        " of " + std::to_string(requested) + " peaks"),
        found_(found),
        requested_(requested) {}
  [[nodiscard]] std::size_t found() const noexcept { return found_; }
  [[nodiscard]] std::size_t requested() const noexcept { return requested_; }

 private:
  std::size_t found_;
  std::size_t requested_;
};

}  // namespace hyperdoa
