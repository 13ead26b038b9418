#pragma once

#include <stdexcept>
#include <string>

namespace ncsat {

/// Invalid user-supplied configuration. The message names the offending field.
class ConfigError : public std::invalid_argument
{
public:
  ConfigError(const std::string& field, const std::string& what)
    : std::invalid_argument(field + ": " + what)
    , field_(field)
  {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

} // namespace ncsat
