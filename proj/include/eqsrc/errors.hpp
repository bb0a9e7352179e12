#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eqsrc {

// Library error carrying a stable machine-readable name ("bracket-error",
// "domain-error", ...) next to the human-readable message. The CLI maps
// schema-error to exit code 2 and every other name to exit code 3.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

[[noreturn]] inline void fail(const char* name, const std::string& msg) {
  throw Error(name, msg);
}

}  // namespace eqsrc
