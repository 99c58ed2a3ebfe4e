#pragma once

#include <stdexcept>
#include <string>

namespace syz {

// Bad user-supplied parameters: non-prime modulus, empty point sets,
// mismatched ranks, malformed configs.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency violation: a section system whose multiplication
// leaves the declared basis, duplicate basis points, and similar.  Seeing
// this means an engine input is broken, not that the answer is "no".
class integrity_error : public std::runtime_error {
public:
  explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

// A resolution was not carried far enough in internal degree to answer the
// query; the message says which bound to raise.
class truncation_error : public std::runtime_error {
public:
  explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation asked of an instance kind that does not support it
// (e.g. duality checks on a system without duality data).
class unsupported_error : public std::runtime_error {
public:
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace syz
