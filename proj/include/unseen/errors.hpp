#pragma once

#include <stdexcept>
#include <string>

namespace unseen {

/// Malformed user input (counts file, joint table, sweep config).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// The size prior puts no mass on any event-space size that can explain
/// the observed support.
class SupportExhausted : public std::domain_error {
 public:
  explicit SupportExhausted(const std::string& what) : std::domain_error(what) {}
};

}  // namespace unseen
