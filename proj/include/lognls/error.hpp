#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lognls {

// Precondition violation on a public operation.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Configuration text could not be turned into a valid RunConfig. `key()` is
// the fully qualified offending key ("physics.kT"), empty for syntax errors
// that are not tied to a key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string &what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}

  const std::string &key() const noexcept { return key_; }

private:
  std::string key_;
};

// A time integration produced a non-finite sample.
class NumericalAbort : public std::runtime_error {
public:
  NumericalAbort(std::size_t step_index, const std::string &what)
      : std::runtime_error(what), step_index_(step_index) {}

  std::size_t step_index() const noexcept { return step_index_; }

private:
  std::size_t step_index_;
};

} // namespace lognls
