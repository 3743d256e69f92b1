#pragma once

#include <stdexcept>
#include <string>

namespace pialg {

// Base class for all library errors.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Text input that does not conform to a grammar. Carries the byte offset
// of the offending token.
class parse_error : public error {
  public:
    parse_error(const std::string& msg, std::size_t position)
        : error(msg + " (at position " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

// Arithmetic between scalars over distinct nontrivial cyclotomic conductors.
class conductor_mismatch : public error {
  public:
    conductor_mismatch(unsigned a, unsigned b)
        : error("conductor mismatch: Q(zeta_" + std::to_string(a) + ") vs Q(zeta_" +
                std::to_string(b) + ")") {}
};

}  // namespace pialg
