#pragma once

#include <stdexcept>
#include <string>

namespace lm4opt {

// Base for all library errors. Subcommands map these to exit code 1.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class CorpusError : public Error {
  public:
    using Error::Error;
};

class PromptError : public Error {
  public:
    using Error::Error;
};

class MetricError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace lm4opt
