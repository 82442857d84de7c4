#pragma once

#include <stdexcept>
#include <string>

namespace miner {

// Every failure raised by the library derives from Error. The CLI maps the
// kind onto an exit code.
enum class ErrorKind {
  Argument,
  Parse,
  Schema,
  Precondition,
  UndefinedResult,
  Config,
  MissingInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define MINER_DEFINE_ERROR(Name, Kind)                                    \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

MINER_DEFINE_ERROR(ArgumentError, Argument)
MINER_DEFINE_ERROR(ParseError, Parse)
MINER_DEFINE_ERROR(SchemaError, Schema)
MINER_DEFINE_ERROR(PreconditionError, Precondition)
MINER_DEFINE_ERROR(UndefinedResult, UndefinedResult)
MINER_DEFINE_ERROR(ConfigError, Config)
MINER_DEFINE_ERROR(MissingInput, MissingInput)

#undef MINER_DEFINE_ERROR

const char* to_string(ErrorKind kind) noexcept;

}  // namespace miner
